//! Dataset generation, fitting, error oracles and figure reproduction.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::json;
use sskh_core::channel::{simulate_exchange, ChannelParams, Coverage, Dataset, DatasetMeta, FuncKind, FuncSpec, Point, StarTopology};
use sskh_core::experiment::{histogram, run_figure, Figure};
use sskh_core::regression::{
    build_error_oracle, error_statistics, fit_hypothesis, transform_dataset, ErrorOracle, Hypothesis, Transform,
};

use crate::args::{
    CoverageArg, DatasetInput, ErrorsArgs, FigureArg, FitArgs, FuncArg, OracleArgs, ReproArgs, SimulateArgs,
    TransformArg,
};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Output, Table};

fn func_kind(arg: FuncArg) -> FuncKind {
    match arg {
        FuncArg::Linear => FuncKind::Linear,
        FuncArg::Sqrt => FuncKind::Sqrt,
        FuncArg::Square => FuncKind::Square,
        FuncArg::Cbrt => FuncKind::Cbrt,
        FuncArg::Log1p => FuncKind::Log1p,
    }
}

fn transform(arg: TransformArg) -> Transform {
    match arg {
        TransformArg::Identity => Transform::Identity,
        TransformArg::Sqrt => Transform::Sqrt,
        TransformArg::Square => Transform::Square,
        TransformArg::Cbrt => Transform::Cbrt,
        TransformArg::Log1p => Transform::Log1p,
    }
}

fn figure(arg: FigureArg) -> Figure {
    match arg {
        FigureArg::Fig2 => Figure::Fig2,
        FigureArg::Fig3 => Figure::Fig3,
        FigureArg::Fig4 => Figure::Fig4,
        FigureArg::Fig6 => Figure::Fig6,
        FigureArg::Fig7 => Figure::Fig7,
    }
}

fn point_table(points: &[Point]) -> Table {
    let mut t = Table::new(&["x", "y"]);
    for p in points {
        t.push(vec![Cell::from(p.x), Cell::from(p.y)]);
    }
    t
}

pub fn simulate(args: &SimulateArgs, seed: u64, out: &mut Output) -> CliResult<()> {
    let topology = StarTopology::single_star(args.parties)?;
    let params = ChannelParams::new(args.sigma, args.modulus)?;
    let func = FuncSpec::new(func_kind(args.func), args.beta0, args.beta1)?;
    let coverage = match args.coverage {
        CoverageArg::Complete => Coverage::Complete,
        CoverageArg::Random => Coverage::Random,
    };
    let dataset = simulate_exchange(&topology, 0, &func, &params, args.ell, coverage, seed)?;
    out.table(&args.name, &point_table(&dataset.points))?;
    out.json(&format!("{}.meta", args.name), &dataset.meta)
}

/// `dir/name.meta.json` next to `dir/name.csv`.
fn sidecar(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.meta.json"))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(path, e))
}

fn read_points(path: &Path) -> CliResult<Vec<Point>> {
    if path.extension().is_some_and(|e| e == "json") {
        return read_json(path);
    }
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    reader.deserialize().map(|r| r.map_err(|e| CliError::input(path, e))).collect()
}

/// Reads a dataset and maps its inputs to the linear coordinate.
fn load_dataset(input: &DatasetInput) -> CliResult<(Dataset, Option<DatasetMeta>)> {
    let meta_path = sidecar(&input.dataset);
    let meta: Option<DatasetMeta> = if meta_path.exists() { read_json(&meta_path)? } else { None };
    let modulus = input.modulus.or(meta.as_ref().map(|m| m.modulus)).ok_or_else(|| {
        CliError::Usage(format!("--modulus is required when {} is missing", meta_path.display()))
    })?;
    let t = match (input.transform, &meta) {
        (Some(t), _) => transform(t),
        (None, Some(m)) => m.func.transform(),
        (None, None) => Transform::Identity,
    };
    let raw = Dataset::from_points(read_points(&input.dataset)?, modulus)?;
    Ok((transform_dataset(&raw, t)?, meta))
}

pub fn fit(args: &FitArgs, out: &mut Output) -> CliResult<()> {
    let (dataset, _) = load_dataset(&args.input)?;
    out.json("hypothesis", &fit_hypothesis(&dataset)?)
}

fn error_table(oracle: &ErrorOracle) -> Table {
    let mut t = Table::new(&["x", "e"]);
    for (x, &e) in oracle.table().iter().enumerate() {
        t.push(vec![Cell::from(x), Cell::from(e)]);
    }
    t
}

fn histogram_table(values: &[i64]) -> Table {
    let mut t = Table::new(&["e", "count"]);
    for (e, count) in histogram(values) {
        t.push(vec![Cell::from(e), Cell::from(count)]);
    }
    t
}

pub fn errors(args: &ErrorsArgs, out: &mut Output) -> CliResult<()> {
    let (dataset, meta) = load_dataset(&args.input)?;
    let sigma = args
        .sigma
        .or(meta.as_ref().map(|m| m.sigma))
        .ok_or_else(|| CliError::Usage("--sigma is required without a dataset sidecar".into()))?;
    let hyp: Hypothesis = match &args.hypothesis {
        Some(path) => read_json(path)?,
        None => fit_hypothesis(&dataset)?,
    };
    let oracle = build_error_oracle(&dataset, &hyp)?;
    out.table("error_table", &error_table(&oracle))?;
    out.table("error_histogram", &histogram_table(&oracle.sampled_errors()))?;
    out.json("error_stats", &error_statistics(&oracle, sigma))
}

/// Oracle from a stored dataset, or from a fresh linear exchange with
/// complete coverage on star `star`.
pub fn oracle_from(args: &OracleArgs, seed: u64, star: u64) -> CliResult<ErrorOracle> {
    if let Some(path) = &args.dataset {
        let input = DatasetInput { dataset: path.clone(), modulus: Some(args.modulus), transform: None };
        let (dataset, _) = load_dataset(&input)?;
        let hyp: Hypothesis = match &args.hypothesis {
            Some(p) => read_json(p)?,
            None => fit_hypothesis(&dataset)?,
        };
        return Ok(build_error_oracle(&dataset, &hyp)?);
    }
    let topology = StarTopology::single_star(args.parties)?;
    let params = ChannelParams::new(args.sigma, args.modulus)?;
    let func = FuncSpec::new(FuncKind::Linear, 0, args.beta1)?;
    let run_seed = sskh_core::rng::derive_seed(seed, "cli/oracle", star);
    let dataset = simulate_exchange(&topology, 0, &func, &params, args.ell, Coverage::Complete, run_seed)?;
    Ok(build_error_oracle(&dataset, &fit_hypothesis(&dataset)?)?)
}

pub fn repro(args: &ReproArgs, seed: u64, out: &mut Output) -> CliResult<()> {
    let fig = figure(args.figure);
    let run = run_figure(fig, args.sigma, seed)?;
    let name = fig.name();
    out.table(&format!("{name}_histogram"), &histogram_table(&run.oracle.sampled_errors()))?;
    let h = run.hypothesis;
    out.json(
        &format!("{name}_slope"),
        &json!({
            "figure": name,
            "function": fig.kind(),
            "modulus": fig.modulus(),
            "beta1": fig.beta1(),
            "sigma": args.sigma,
            "seed": seed,
            "ell": run.dataset.ell(),
            "beta1_hat": h.beta1_hat,
            "beta0_hat": h.beta0_hat,
            "grid_beta1_hat": run.grid.beta1_hat,
            "relative_error": run.relative_error(),
            "kappa": h.kappa,
            "segment": h.segment,
            "delta": h.delta,
            "x_lo": h.x_lo,
            "x_hi": h.x_hi,
        }),
    )
}
