//! Rounded-Gaussian probabilities and chi-square goodness-of-fit tests.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

/// Standard normal CDF.
pub fn std_normal_cdf(z: f64) -> f64 {
    Normal::standard().cdf(z)
}

/// Std dev of a Gaussian of std dev `sigma` after rounding to integers.
pub fn rounded_sigma(sigma: f64) -> f64 {
    (sigma * sigma + 1.0 / 12.0).sqrt()
}

/// Probability that `round(Z * sigma) == e` for `Z ~ N(0, 1)`.
pub fn rounded_gaussian_pmf(e: i64, sigma: f64) -> f64 {
    let hi = (e as f64 + 0.5) / sigma;
    let lo = (e as f64 - 0.5) / sigma;
    // Evaluate in the left tail for accuracy on both sides.
    if e >= 0 {
        std_normal_cdf(-lo) - std_normal_cdf(-hi)
    } else {
        std_normal_cdf(hi) - std_normal_cdf(lo)
    }
}

/// `Pr[|Z| < threshold]` for a standard normal `Z`.
pub fn central_mass(threshold: f64) -> f64 {
    2.0 * std_normal_cdf(threshold) - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub bins: usize,
}

/// Pearson chi-square test of `observed` counts against `expected` counts.
///
/// Adjacent bins are merged from both ends inwards until every bin expects at
/// least five observations. `constraints` is the number of fitted quantities
/// (1 when totals are matched). A single surviving bin yields `p = 1`.
pub fn chi_square(observed: &[f64], expected: &[f64], constraints: usize) -> ChiSquareOutcome {
    assert_eq!(observed.len(), expected.len());
    let merged = merge_sparse_bins(observed, expected, 5.0);
    let statistic: f64 = merged
        .iter()
        .filter(|(_, e)| *e > 0.0)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let bins = merged.len();
    if bins <= constraints {
        return ChiSquareOutcome { statistic, dof: 0, p_value: 1.0, bins };
    }
    let dof = bins - constraints;
    let p_value = match ChiSquared::new(dof as f64) {
        Ok(dist) => 1.0 - dist.cdf(statistic),
        Err(_) => 1.0,
    };
    ChiSquareOutcome { statistic, dof, p_value, bins }
}

fn merge_sparse_bins(observed: &[f64], expected: &[f64], min_expected: f64) -> Vec<(f64, f64)> {
    let mut bins: Vec<(f64, f64)> = observed.iter().copied().zip(expected.iter().copied()).collect();
    // Fold the low tail forward.
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(bins.len());
    let mut carry = (0.0, 0.0);
    for (o, e) in bins.drain(..) {
        carry.0 += o;
        carry.1 += e;
        if carry.1 >= min_expected {
            out.push(carry);
            carry = (0.0, 0.0);
        }
    }
    if carry.1 > 0.0 || carry.0 > 0.0 {
        match out.last_mut() {
            Some(last) => {
                last.0 += carry.0;
                last.1 += carry.1;
            }
            None => out.push(carry),
        }
    }
    out
}

/// Chi-square test that `counts` are uniform over their bins.
pub fn chi_square_uniform(counts: &[u64]) -> ChiSquareOutcome {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    let observed: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    chi_square(&observed, &vec![expected; counts.len()], 1)
}

/// Chi-square test of signed integer samples against a rounded Gaussian of
/// std dev `sigma`, restricted to `|e| <= limit` and renormalized there.
pub fn chi_square_rounded_gaussian(samples: &[i64], sigma: f64, limit: i64) -> ChiSquareOutcome {
    let width = (2 * limit + 1) as usize;
    let mut observed = vec![0.0; width];
    let mut n = 0.0;
    for &e in samples {
        if e.abs() <= limit {
            observed[(e + limit) as usize] += 1.0;
            n += 1.0;
        }
    }
    let probs: Vec<f64> = (-limit..=limit).map(|e| rounded_gaussian_pmf(e, sigma)).collect();
    let mass: f64 = probs.iter().sum();
    let expected: Vec<f64> = probs.iter().map(|p| n * p / mass).collect();
    chi_square(&observed, &expected, 1)
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n − 1 denominator).
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let mu = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - mu) * (x - mu)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}
