//! Learning-with-linear-regression samples and the learning-with-rounding
//! baseline.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::modular::{recenter_real, reduce};
use crate::regression::{eval_error, ErrorOracle};
use crate::rng::Stream;

/// How secrets are drawn.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecretDistribution {
    #[default]
    Uniform,
    /// Entries in `{0, 1}`.
    Binary,
}

pub fn sample_secret(w: usize, m: u64, dist: SecretDistribution, rng: &mut Stream) -> Vec<u64> {
    (0..w)
        .map(|_| match dist {
            SecretDistribution::Uniform => rng.random_range(0..m),
            SecretDistribution::Binary => rng.random_range(0..2u64.min(m)),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LwlrSample {
    pub a: Vec<u64>,
    pub b: u64,
}

/// `<a, s> mod m`.
pub fn inner_mod(a: &[u64], s: &[u64], m: u64) -> u64 {
    let acc: u128 = a.iter().zip(s).map(|(&x, &y)| x as u128 * y as u128).sum();
    (acc % m as u128) as u64
}

fn check_secret(s: &[u64], m: u64) -> Result<()> {
    if let Some(&bad) = s.iter().find(|&&v| v >= m) {
        return Err(invalid(format!("secret entry {bad} is not reduced mod {m}")));
    }
    Ok(())
}

/// Sample with a uniformly drawn `a`.
pub fn sample_lwlr(s: &[u64], oracle: &ErrorOracle, rng: &mut Stream) -> Result<LwlrSample> {
    let m = oracle.modulus();
    let a: Vec<u64> = (0..s.len()).map(|_| rng.random_range(0..m)).collect();
    sample_lwlr_with(s, oracle, a)
}

/// `(a, <a,s> + e_<a,s> mod m)` for a caller-chosen `a`.
pub fn sample_lwlr_with(s: &[u64], oracle: &ErrorOracle, a: Vec<u64>) -> Result<LwlrSample> {
    let m = oracle.modulus();
    if a.len() != s.len() {
        return Err(Error::DimensionMismatch { expected: s.len(), actual: a.len() });
    }
    check_secret(s, m)?;
    check_secret(&a, m)?;
    let x = inner_mod(&a, s, m);
    let b = reduce(x as i64 + eval_error(oracle, x as i64), m);
    Ok(LwlrSample { a, b })
}

/// `round(p x / q) mod p`, ties away from zero.
pub fn round_lwr(x: u64, q: u64, p: u64) -> Result<u64> {
    if p < 2 || p > q {
        return Err(invalid(format!("need 2 <= p <= q, got p={p}, q={q}")));
    }
    if x >= q {
        return Err(invalid(format!("{x} is not reduced mod {q}")));
    }
    let (x, q, p) = (x as u128, q as u128, p as u128);
    Ok(((2 * p * x + q) / (2 * q) % p) as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorComparison {
    pub trial: usize,
    pub x: u64,
    pub lwlr_error: u64,
    pub lwr_error: f64,
}

/// For random `a`, the oracle error magnitude at `x = <a,s>` next to the
/// rounding loss `|(q/p) round_p(x mod q) - x mod q|` of the LWR map.
pub fn lwlr_vs_lwr_report(
    s: &[u64],
    oracle: &ErrorOracle,
    q: u64,
    p: u64,
    trials: usize,
    rng: &mut Stream,
) -> Result<Vec<ErrorComparison>> {
    round_lwr(0, q, p)?;
    (0..trials)
        .map(|trial| {
            let sample = sample_lwlr(s, oracle, rng)?;
            let x = inner_mod(&sample.a, s, oracle.modulus());
            let xq = x % q;
            let scaled = round_lwr(xq, q, p)? as f64 * q as f64 / p as f64;
            Ok(ErrorComparison {
                trial,
                x,
                lwlr_error: eval_error(oracle, x as i64).unsigned_abs(),
                lwr_error: recenter_real(scaled - xq as f64, q).abs(),
            })
        })
        .collect()
}
