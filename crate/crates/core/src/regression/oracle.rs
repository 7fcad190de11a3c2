use serde::{Deserialize, Serialize};

use super::grid::Hypothesis;
use crate::channel::Dataset;
use crate::error::{Error, Result};
use crate::modular::{recenter, recenter_real, reduce, residue_of, round_half_away};
use crate::stats::{chi_square_rounded_gaussian, mean, std_dev};

/// Multiplier of `sigma` in the high-probability error bound.
pub const BOUND_CONSTANT: f64 = 2.807034;

/// Tail constant `b` used with uniformly drawn inputs.
pub const TAIL_CONSTANT_B: f64 = 4.0;

/// `2.807034 (1 + sqrt((1 + b) / ell)) sigma`.
pub fn error_bound(sigma: f64, ell: usize, b: f64) -> f64 {
    BOUND_CONSTANT * (1.0 + ((1.0 + b) / ell as f64).sqrt()) * sigma
}

/// Deterministic error map `Z_m -> Z` derived from one hypothesis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorOracle {
    modulus: u64,
    table: Vec<i64>,
    /// Signed errors before rounding, for residues backed by a sample.
    pre_errors: Vec<Option<f64>>,
    sigma_hat: f64,
    coverage: f64,
    ell: usize,
}

impl ErrorOracle {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn table(&self) -> &[i64] {
        &self.table
    }

    pub fn pre_errors(&self) -> &[Option<f64>] {
        &self.pre_errors
    }

    /// Std dev of the stored pre-rounding errors.
    pub fn sigma_hat(&self) -> f64 {
        self.sigma_hat
    }

    /// Fraction of residues backed by a direct sample.
    pub fn coverage(&self) -> f64 {
        self.coverage
    }

    /// Size of the dataset the oracle was built from.
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn is_sampled(&self, r: u64) -> bool {
        self.pre_errors[r as usize].is_some()
    }

    /// Table entries at sampled residues.
    pub fn sampled_errors(&self) -> Vec<i64> {
        self.table.iter().zip(&self.pre_errors).filter(|(_, p)| p.is_some()).map(|(&e, _)| e).collect()
    }
}

/// Builds the oracle from a (linearized) dataset and a hypothesis on it.
///
/// Residue `r` takes the first point in sorted order whose rounded `x` is
/// `r mod m`; its signed error `(y - h(x)) mod m`, recentered, is rounded and
/// stored. Residues without a point copy the nearest sampled residue in
/// cyclic distance, the smaller residue winning ties.
pub fn build_error_oracle(dataset: &Dataset, hyp: &Hypothesis) -> Result<ErrorOracle> {
    if dataset.points.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let m = dataset.modulus;
    let size = usize::try_from(m).map_err(|_| Error::InvalidParameter("modulus too large".into()))?;
    let mut pre_errors: Vec<Option<f64>> = vec![None; size];
    for p in &dataset.points {
        let r = residue_of(p.x, m) as usize;
        if pre_errors[r].is_none() {
            pre_errors[r] = Some(recenter_real(p.y as f64 - hyp.predict(p.x), m));
        }
    }

    let mut table = vec![0i64; size];
    for (slot, pre) in table.iter_mut().zip(&pre_errors) {
        if let Some(e) = pre {
            *slot = recenter(round_half_away(*e), m);
        }
    }
    fill_from_nearest(&mut table, &pre_errors);

    let sampled: Vec<f64> = pre_errors.iter().flatten().copied().collect();
    Ok(ErrorOracle {
        modulus: m,
        sigma_hat: std_dev(&sampled),
        coverage: sampled.len() as f64 / size as f64,
        pre_errors,
        table,
        ell: dataset.ell(),
    })
}

fn fill_from_nearest(table: &mut [i64], pre_errors: &[Option<f64>]) {
    let m = table.len();
    let sampled: Vec<usize> = (0..m).filter(|&r| pre_errors[r].is_some()).collect();
    if sampled.len() == m {
        return;
    }
    for r in 0..m {
        if pre_errors[r].is_some() {
            continue;
        }
        // The nearest sampled residue is a cyclic neighbour in `sampled`.
        let pos = sampled.partition_point(|&s| s < r);
        let candidates = [sampled[(pos + sampled.len() - 1) % sampled.len()], sampled[pos % sampled.len()]];
        let dist = |s: usize| {
            let d = s.abs_diff(r);
            d.min(m - d)
        };
        let source = candidates.into_iter().min_by_key(|&s| (dist(s), s)).expect("nonempty");
        table[r] = table[source];
    }
}

/// `e_x` for any integer `x`, reduced mod `m`.
pub fn eval_error(oracle: &ErrorOracle, x: i64) -> i64 {
    oracle.table[reduce(x, oracle.modulus) as usize]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorStats {
    pub mean: f64,
    pub std: f64,
    pub chi_square_statistic: f64,
    pub chi_square_dof: usize,
    pub chi_square_p: f64,
    pub bound: f64,
    pub bound_violation_rate: f64,
    pub sampled: usize,
    pub coverage: f64,
}

/// Summary of the sampled table entries for a channel of std dev `sigma`.
///
/// The chi-square compares entries with `|e| <= 4 sigma` against the rounded
/// Gaussian truncated to that range. The violation rate counts pre-rounding
/// errors beyond [`error_bound`] with `b = 4`.
pub fn error_statistics(oracle: &ErrorOracle, sigma: f64) -> ErrorStats {
    let errors = oracle.sampled_errors();
    let as_f64: Vec<f64> = errors.iter().map(|&e| e as f64).collect();
    let limit = (4.0 * sigma).floor() as i64;
    let chi = chi_square_rounded_gaussian(&errors, sigma, limit);
    let bound = error_bound(sigma, oracle.ell, TAIL_CONSTANT_B);
    let pre: Vec<f64> = oracle.pre_errors.iter().flatten().copied().collect();
    let violations = pre.iter().filter(|e| e.abs() > bound).count();
    ErrorStats {
        mean: mean(&as_f64),
        std: std_dev(&as_f64),
        chi_square_statistic: chi.statistic,
        chi_square_dof: chi.dof,
        chi_square_p: chi.p_value,
        bound,
        bound_violation_rate: if pre.is_empty() { 0.0 } else { violations as f64 / pre.len() as f64 },
        sampled: errors.len(),
        coverage: oracle.coverage,
    }
}
