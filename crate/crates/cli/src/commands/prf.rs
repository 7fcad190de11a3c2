use serde_json::json;
use sskh_core::lwlr::SecretDistribution;
use sskh_core::prf::{format_bits, homomorphism_gap, parse_bits, prf_eval, star_collision_rate, PrfKey, PrfParams, TreeShape};
use sskh_core::regression::ErrorOracle;
use sskh_core::rng::{derive_seed, substream, Stream};
use sskh_core::stats::central_mass;

use super::data::oracle_from;
use crate::args::{PrfCommand, PrfSetup, TreeArg};
use crate::error::{CliError, CliResult};
use crate::output::{float, Cell, Output, Table};

/// Bound on gap coordinates: `sqrt(2700)` times the error std dev.
const GAP_BOUND_FACTOR: f64 = 2700.0;

fn params(setup: &PrfSetup, modulus: u64, seed: u64) -> CliResult<PrfParams> {
    let tree = match setup.tree {
        TreeArg::Balanced => TreeShape::balanced(setup.leaves)?,
        TreeArg::LeftSpine => TreeShape::left_spine(setup.leaves)?,
        TreeArg::RightSpine => TreeShape::right_spine(setup.leaves)?,
    };
    Ok(PrfParams::sample(modulus, setup.w, tree, derive_seed(seed, "cli/prf/params", 0))?)
}

fn key(setup: &PrfSetup, params: &PrfParams, rng: &mut Stream) -> CliResult<PrfKey> {
    Ok(match &setup.key {
        Some(s) => PrfKey::new(s.clone(), params)?,
        None => PrfKey::random(params, SecretDistribution::Uniform, rng),
    })
}

fn setup(setup: &PrfSetup, seed: u64) -> CliResult<(ErrorOracle, PrfParams)> {
    let oracle = oracle_from(&setup.oracle, seed, 0)?;
    let params = params(setup, oracle.modulus(), seed)?;
    Ok((oracle, params))
}

pub fn run(cmd: &PrfCommand, seed: u64, out: &mut Output) -> CliResult<()> {
    match cmd {
        PrfCommand::Eval(args) => {
            let (oracle, params) = setup(&args.setup, seed)?;
            let mut rng = substream(seed, "cli/prf/eval", 0);
            let key = key(&args.setup, &params, &mut substream(seed, "cli/prf/key", 0))?;
            let inputs: Vec<Vec<bool>> = if args.inputs.is_empty() {
                (0..args.count).map(|_| params.random_input(&mut rng)).collect()
            } else {
                args.inputs.iter().map(|s| parse_bits(s)).collect::<Result<_, _>>()?
            };
            let mut table = Table::new(&["input", "coordinate", "value"]);
            for x in &inputs {
                for (i, v) in prf_eval(&params, &oracle, &key, x)?.into_iter().enumerate() {
                    table.push(vec![Cell::from(format_bits(x)), Cell::from(i), Cell::from(v)]);
                }
            }
            out.table("prf_eval", &table)
        }
        PrfCommand::Homtest(args) => {
            let (oracle, params) = setup(&args.setup, seed)?;
            let mut rng = substream(seed, "cli/prf/homtest", 0);
            let bound = GAP_BOUND_FACTOR.sqrt() * oracle.sigma_hat();
            let mut table = Table::new(&["trial", "coordinate", "gap"]);
            let (mut inside, mut widest) = (0usize, 0i64);
            for trial in 0..args.trials {
                let k1 = PrfKey::random(&params, SecretDistribution::Uniform, &mut rng);
                let k2 = PrfKey::random(&params, SecretDistribution::Uniform, &mut rng);
                let x = params.random_input(&mut rng);
                for (i, gap) in homomorphism_gap(&params, &oracle, &k1, &k2, &x)?.into_iter().enumerate() {
                    inside += usize::from((gap as f64).abs() <= bound);
                    widest = widest.max(gap.abs());
                    table.push(vec![Cell::from(trial), Cell::from(i), Cell::from(gap)]);
                }
            }
            let total = table.rows.len();
            out.table("prf_homtest", &table)?;
            out.json(
                "prf_homtest_summary",
                &json!({
                    "trials": args.trials,
                    "coordinates": total,
                    "sigma_hat": float(oracle.sigma_hat()),
                    "bound": float(bound),
                    "within_rate": if total == 0 { serde_json::Value::Null } else { float(inside as f64 / total as f64) },
                    "max_abs_gap": widest,
                }),
            )
        }
        PrfCommand::Startest(args) => {
            if args.setup.oracle.dataset.is_some() {
                return Err(CliError::Usage("startest simulates both stars; drop --dataset".into()));
            }
            let (oracle_i, params) = setup(&args.setup, seed)?;
            let oracle_j = oracle_from(&args.setup.oracle, seed, 1)?;
            let mut rng = substream(seed, "cli/prf/startest", 0);
            let key = key(&args.setup, &params, &mut substream(seed, "cli/prf/key", 0))?;
            let rate = star_collision_rate(&params, &oracle_i, &oracle_j, &key, args.trials, &mut rng)?;
            let sigma = args.setup.oracle.sigma;
            let mut table = Table::new(&["sigma", "trials", "coordinates", "collision_rate", "reference"]);
            table.push(vec![
                Cell::from(sigma),
                Cell::from(args.trials),
                Cell::from(args.trials * params.output_len()),
                Cell::from(rate),
                Cell::from(central_mass(1.0 / (2f64.sqrt() * sigma))),
            ]);
            out.table("prf_startest", &table)
        }
    }
}
