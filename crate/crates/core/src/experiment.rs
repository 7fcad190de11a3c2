//! The five reference regression experiments as ready-to-run pipelines.

use serde::{Deserialize, Serialize};

use crate::channel::{simulate_exchange, ChannelParams, Coverage, Dataset, FuncKind, FuncSpec, StarTopology};
use crate::error::{invalid, Result};
use crate::regression::{build_error_oracle, grid_search_hypothesis, refine_hypothesis, transform_dataset, ErrorOracle, Hypothesis};

/// Dataset size used by every reference run.
pub const FIGURE_ELL: usize = 1 << 16;

/// Channel noise used when none is given.
pub const FIGURE_SIGMA: f64 = 30.0;

/// Parties in the single star that produces the dataset.
pub const FIGURE_PARTIES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
    Fig6,
    Fig7,
}

impl Figure {
    pub const ALL: [Figure; 5] = [Figure::Fig2, Figure::Fig3, Figure::Fig4, Figure::Fig6, Figure::Fig7];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
        }
    }

    pub fn kind(self) -> FuncKind {
        match self {
            Figure::Fig2 => FuncKind::Linear,
            Figure::Fig3 => FuncKind::Sqrt,
            Figure::Fig4 => FuncKind::Square,
            Figure::Fig6 => FuncKind::Cbrt,
            Figure::Fig7 => FuncKind::Log1p,
        }
    }

    pub fn beta1(self) -> i64 {
        match self {
            Figure::Fig2 => 546,
            Figure::Fig3 => 240,
            Figure::Fig4 => 125,
            Figure::Fig6 => 221,
            Figure::Fig7 => 53,
        }
    }

    pub fn modulus(self) -> u64 {
        match self {
            Figure::Fig2 | Figure::Fig3 => 12288,
            Figure::Fig4 => 10218,
            Figure::Fig6 => 11278,
            Figure::Fig7 => 8857,
        }
    }

    pub fn func(self) -> FuncSpec {
        FuncSpec { kind: self.kind(), beta0: 0, beta1: self.beta1() }
    }
}

impl std::str::FromStr for Figure {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| invalid(format!("unknown figure {s:?}, expected one of fig2, fig3, fig4, fig6, fig7")))
    }
}

/// Everything one run produces.
#[derive(Debug, Clone)]
pub struct FigureRun {
    pub figure: Figure,
    pub sigma: f64,
    pub seed: u64,
    /// Hub dataset with inputs already mapped to the linear coordinate.
    pub dataset: Dataset,
    /// Winning grid cell before refinement.
    pub grid: Hypothesis,
    pub hypothesis: Hypothesis,
    pub oracle: ErrorOracle,
}

impl FigureRun {
    pub fn relative_error(&self) -> f64 {
        (self.hypothesis.beta1_hat - self.figure.beta1() as f64).abs() / self.figure.beta1() as f64
    }
}

pub fn run_figure(figure: Figure, sigma: f64, seed: u64) -> Result<FigureRun> {
    let topology = StarTopology::single_star(FIGURE_PARTIES)?;
    let params = ChannelParams::new(sigma, figure.modulus())?;
    let func = figure.func();
    let raw = simulate_exchange(&topology, 0, &func, &params, FIGURE_ELL, Coverage::Random, seed)?;
    let dataset = transform_dataset(&raw, func.kind.transform())?;
    let grid = grid_search_hypothesis(&dataset)?;
    let hypothesis = refine_hypothesis(&dataset, &grid)?;
    let oracle = build_error_oracle(&dataset, &hypothesis)?;
    Ok(FigureRun { figure, sigma, seed, dataset, grid, hypothesis, oracle })
}

/// Counts per integer value, ascending; bins have width 1.
pub fn histogram(values: &[i64]) -> Vec<(i64, usize)> {
    let mut counts = std::collections::BTreeMap::new();
    for &v in values {
        *counts.entry(v).or_insert(0usize) += 1;
    }
    counts.into_iter().collect()
}
