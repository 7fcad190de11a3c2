use serde_json::{json, Value};
use sskh_core::mutinfo::{closed_form_mi, covariance_oracle, monte_carlo_mi, summarize, C3Convention, OverlapDesign};

use crate::args::{C3Arg, MutinfoArgs};
use crate::error::CliResult;
use crate::output::{float, Output};

pub fn run(args: &MutinfoArgs, seed: u64, out: &mut Output) -> CliResult<()> {
    let design = OverlapDesign::new(args.xs.clone(), args.ws.clone(), args.a, args.sigma)?;
    let c3 = match args.c3 {
        C3Arg::Shared => C3Convention::Shared,
        C3Arg::Full => C3Convention::Full,
    };
    let oracle = covariance_oracle(&design)?;
    // The closed form does not cover perfectly correlated fits; the oracle's +inf stands.
    let closed = if oracle.mi.is_finite() { float(closed_form_mi(&design, c3)?) } else { Value::Null };
    let (mi_mc, mc_stderr) = if args.trials == 0 {
        (Value::Null, Value::Null)
    } else {
        let mc = monte_carlo_mi(&design, args.trials, seed)?;
        (float(mc.estimate), float(mc.std_error))
    };
    let summary = summarize(&design, c3);
    out.json(
        "mutinfo",
        &json!({
            "xs": design.xs,
            "ws": design.ws,
            "a": design.a,
            "sigma": design.sigma,
            "c3_convention": c3,
            "mi_closed": closed,
            "mi_oracle": float(oracle.mi),
            "mi_mc": mi_mc,
            "mc_stderr": mc_stderr,
            "mc_trials": if args.trials == 0 { Value::Null } else { Value::from(args.trials) },
            "entropy_first": float(oracle.entropy_first),
            "entropy_second": float(oracle.entropy_second),
            "entropy_joint": float(oracle.entropy_joint),
            "summary": {
                "X1": summary.X1, "X2": summary.X2, "W1": summary.W1, "W2": summary.W2,
                "C1": summary.C1, "C2": summary.C2, "C3": summary.C3,
            },
            "sigma_matrix": oracle.sigma_matrix.iter().map(|&v| float(v)).collect::<Vec<_>>(),
        }),
    )
}
