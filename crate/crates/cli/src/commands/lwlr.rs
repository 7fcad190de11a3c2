use serde_json::json;
use sskh_core::lwlr::{lwlr_vs_lwr_report, sample_lwlr, sample_secret, SecretDistribution};
use sskh_core::rng::substream;

use super::data::oracle_from;
use crate::args::{LwlrCommand, SecretArg};
use crate::error::CliResult;
use crate::output::{Cell, Output, Table};

fn distribution(arg: SecretArg) -> SecretDistribution {
    match arg {
        SecretArg::Uniform => SecretDistribution::Uniform,
        SecretArg::Binary => SecretDistribution::Binary,
    }
}

pub fn run(cmd: &LwlrCommand, seed: u64, out: &mut Output) -> CliResult<()> {
    match cmd {
        LwlrCommand::Sample(args) => {
            let oracle = oracle_from(&args.oracle, seed, 0)?;
            let m = oracle.modulus();
            let dist = distribution(args.secret);
            let s = sample_secret(args.w, m, dist, &mut substream(seed, "cli/lwlr/secret", 0));
            let mut rng = substream(seed, "cli/lwlr/samples", 0);
            let mut columns: Vec<String> = (0..args.w).map(|i| format!("a{i}")).collect();
            columns.push("b".into());
            let mut table = Table { columns, rows: Vec::new() };
            for _ in 0..args.count {
                let sample = sample_lwlr(&s, &oracle, &mut rng)?;
                let mut row: Vec<Cell> = sample.a.into_iter().map(Cell::from).collect();
                row.push(Cell::from(sample.b));
                table.push(row);
            }
            out.table("lwlr_samples", &table)?;
            out.json("lwlr_secret", &json!({ "modulus": m, "w": args.w, "distribution": dist, "s": s }))
        }
        LwlrCommand::Compare(args) => {
            let oracle = oracle_from(&args.oracle, seed, 0)?;
            let q = args.q.unwrap_or(oracle.modulus());
            let s = sample_secret(args.w, oracle.modulus(), SecretDistribution::Uniform, &mut substream(seed, "cli/lwlr/secret", 0));
            let mut rng = substream(seed, "cli/lwlr/compare", 0);
            let report = lwlr_vs_lwr_report(&s, &oracle, q, args.p, args.trials, &mut rng)?;
            let mut table = Table::new(&["trial", "x", "lwlr_error", "lwr_error"]);
            for r in report {
                table.push(vec![Cell::from(r.trial), Cell::from(r.x), Cell::from(r.lwlr_error), Cell::from(r.lwr_error)]);
            }
            out.table("lwlr_compare", &table)
        }
    }
}
