use num_rational::Ratio;
use serde_json::{json, Value};
use sskh_core::setfam::{
    add_distinguished, bound_one_more, bound_simple, bound_small_n, brute_force_max, construct_exact_t,
    construct_small_n, double_family, fano_plane, feasibility_check, max_sskh_prfs, verify_family, PrfCountModel,
    SetFamily,
};

use crate::args::{ConstructArgs, FamilyKind, SetfamCommand};
use crate::error::{CliError, CliResult};
use crate::output::Output;

fn need<T: Copy>(value: Option<T>, flag: &str, kind: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("--kind {kind} needs --{flag}")))
}

fn read_family(path: &std::path::Path) -> CliResult<SetFamily> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(path, e))
}

fn construct(args: &ConstructArgs) -> CliResult<SetFamily> {
    let input = || {
        args.input.as_deref().ok_or_else(|| CliError::Usage("this --kind needs --input".into())).and_then(read_family)
    };
    Ok(match args.kind {
        FamilyKind::Fano => fano_plane(),
        FamilyKind::SmallN => construct_small_n(
            need(args.m, "m", "small-n")?,
            need(args.k, "k", "small-n")?,
            need(args.t, "t", "small-n")?,
        )?,
        FamilyKind::ExactT => construct_exact_t(need(args.k, "k", "exact-t")?, need(args.t, "t", "exact-t")?)?,
        FamilyKind::Double => double_family(&input()?, need(args.k, "k", "double")?, need(args.t, "t", "double")?)?,
        FamilyKind::Distinguished => add_distinguished(&input()?, need(args.n, "n", "distinguished")?)?,
    })
}

/// Integer ratios as JSON integers, others as floats.
fn ratio_value(r: Ratio<u128>) -> Value {
    if r.is_integer() {
        match u64::try_from(*r.numer()) {
            Ok(v) => Value::from(v),
            Err(_) => Value::from(r.numer().to_string()),
        }
    } else {
        Value::from(*r.numer() as f64 / *r.denom() as f64)
    }
}

fn ratio_pair(r: Option<Ratio<u128>>) -> (Value, Value) {
    match r {
        Some(r) => (ratio_value(r), Value::from(r.to_string())),
        None => (Value::Null, Value::Null),
    }
}

pub fn run(cmd: &SetfamCommand, out: &mut Output) -> CliResult<()> {
    match cmd {
        SetfamCommand::Construct(args) => out.json("family", &construct(args)?),
        SetfamCommand::Verify(args) => out.json("family_report", &verify_family(&read_family(&args.input)?, args.k, args.t)),
        SetfamCommand::Bounds(args) => {
            let (n, k, t) = (args.n, args.k, args.t);
            let (simple, simple_exact) = ratio_pair(Some(bound_simple(n, k, t)?));
            let small_n = if t >= 1 { bound_small_n(n, k, t)? } else { None };
            let (one_more, one_more_exact) =
                ratio_pair(if t >= 1 && k % t == 0 { Some(bound_one_more(k, t)?) } else { None });
            let feasibility = args.m.map(|m| feasibility_check(n, k, t, m)).transpose()?;
            let prf_counts = [PrfCountModel::ExternalOracle, PrfCountModel::Eavesdropper, PrfCountModel::SemiHonest]
                .into_iter()
                .map(|model| max_sskh_prfs(n, k, t, model, args.c))
                .collect::<Result<Vec<_>, _>>()?;
            out.json(
                "bounds",
                &json!({
                    "n": n,
                    "k": k,
                    "t": t,
                    "simple": simple,
                    "simple_exact": simple_exact,
                    "small_n": small_n,
                    "one_more": one_more,
                    "one_more_exact": one_more_exact,
                    "feasibility": feasibility.map(|f| json!({
                        "m": args.m,
                        "feasible": f.feasible,
                        "lhs": f.lhs.to_string(),
                        "rhs": f.rhs.to_string(),
                    })),
                    "prf_counts": prf_counts,
                }),
            )
        }
        SetfamCommand::Brute(args) => {
            let (size, family) = brute_force_max(args.n, args.k, args.t)?;
            out.json("brute", &json!({ "n": args.n, "k": args.k, "t": args.t, "size": size, "family": family }))
        }
    }
}
