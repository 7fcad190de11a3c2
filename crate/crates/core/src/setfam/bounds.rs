use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, precondition, Result};

fn check_order(n: usize, k: usize, t: usize) -> Result<()> {
    if t > k || k > n {
        return Err(invalid(format!("need t <= k <= n, got n={n}, k={k}, t={t}")));
    }
    Ok(())
}

fn binomial(n: u128, r: u128) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// `C(n, t+1) / C(k, t+1)`, exact. At `t = k` the ratio is undefined and
/// every family of distinct `k`-sets qualifies, so this returns `C(n, k)`.
pub fn bound_simple(n: usize, k: usize, t: usize) -> Result<Ratio<u128>> {
    check_order(n, k, t)?;
    let overflow = || invalid("binomial coefficient overflows");
    if t == k {
        return Ok(Ratio::from_integer(binomial(n as u128, k as u128).ok_or_else(overflow)?));
    }
    let num = binomial(n as u128, t as u128 + 1).ok_or_else(overflow)?;
    let den = binomial(k as u128, t as u128 + 1).ok_or_else(overflow)?;
    Ok(Ratio::new(num, den))
}

/// Exact maximum for small universes, or `None` when neither case applies.
///
/// For `n < k(k/t+1)/2` this is `floor(1/2 + k/t - sqrt((1/2+k/t)^2 - 2n/t))`;
/// at `n = k(k/t+1)/2` with `t | k` it is `k/t + 1`. With `t = k` every
/// family of distinct sets qualifies and the formulas do not apply.
pub fn bound_small_n(n: usize, k: usize, t: usize) -> Result<Option<u64>> {
    check_order(n, k, t)?;
    if t == 0 {
        return Err(invalid("t must be positive"));
    }
    if t == k {
        return Ok(None);
    }
    let (n, k, t) = (n as i128, k as i128, t as i128);
    // Compare 2nt against k(k+t) to stay in integers.
    if 2 * n * t < k * (k + t) {
        // floor((s - sqrt(q)) / 2t) with s = t + 2k and q = s^2 - 8nt.
        let s = t + 2 * k;
        let q = s * s - 8 * n * t;
        let approx = ((s as f64 - (q as f64).sqrt()) / (2 * t) as f64).floor() as i128;
        let fits = |v: i128| {
            let room = s - 2 * t * v;
            room >= 0 && q <= room * room
        };
        let mut v = approx + 1;
        while !fits(v) {
            v -= 1;
        }
        while fits(v + 1) {
            v += 1;
        }
        return Ok(Some(v as u64));
    }
    if k % t == 0 && 2 * n * t == k * (k + t) {
        return Ok(Some((k / t + 1) as u64));
    }
    Ok(None)
}

/// Upper bound when one element is added past the exact-`t` construction:
/// `(k^2+kt+2t)/(k^2-kt+2t) * (k/t+1)`. Requires `t | k`.
pub fn bound_one_more(k: usize, t: usize) -> Result<Ratio<u128>> {
    if t == 0 || t > k {
        return Err(invalid(format!("need 1 <= t <= k, got k={k}, t={t}")));
    }
    if !k.is_multiple_of(t) {
        return Err(precondition(format!("t={t} does not divide k={k}")));
    }
    let (k, t) = (k as u128, t as u128);
    let num = k * k + k * t + 2 * t;
    let den = k * k - k * t + 2 * t;
    Ok(Ratio::new(num, den) * Ratio::from_integer(k / t + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feasibility {
    pub feasible: bool,
    pub lhs: u128,
    pub rhs: u128,
}

/// Necessary condition for `m` sets: with `q = floor(km/n)` and
/// `r = km - nq`, `(n-r)q^2 + r(q+1)^2 <= (k-t)m + tm^2`.
pub fn feasibility_check(n: usize, k: usize, t: usize, m: usize) -> Result<Feasibility> {
    check_order(n, k, t)?;
    if m == 0 || n == 0 {
        return Err(invalid("need m >= 1 and n >= 1"));
    }
    let (n, k, t, m) = (n as u128, k as u128, t as u128, m as u128);
    let q = k * m / n;
    let r = k * m - n * q;
    let lhs = (n - r) * q * q + r * (q + 1) * (q + 1);
    let rhs = (k - t) * m + t * m * m;
    Ok(Feasibility { feasible: lhs <= rhs, lhs, rhs })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrfCountModel {
    ExternalOracle,
    Eavesdropper,
    SemiHonest,
}

/// How many star-specific PRFs a party set supports, as a labeled asymptotic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrfCountBound {
    pub model: PrfCountModel,
    /// `asymptotic` (the count grows like `value`) or `lower_bound`.
    pub kind: String,
    pub value: f64,
    pub statement: String,
}

/// `n^k / k!` for the external-oracle and eavesdropper models, `>= c n`
/// for semi-honest parties.
pub fn max_sskh_prfs(n: usize, k: usize, t: usize, model: PrfCountModel, c: f64) -> Result<PrfCountBound> {
    check_order(n, k, t)?;
    Ok(match model {
        PrfCountModel::ExternalOracle | PrfCountModel::Eavesdropper => {
            let value = (1..=k).fold(1.0, |acc, i| acc * n as f64 / i as f64);
            PrfCountBound {
                model,
                kind: "asymptotic".into(),
                value,
                statement: format!("~ {n}^{k}/{k}! = {value}"),
            }
        }
        PrfCountModel::SemiHonest => {
            if !(c > 0.0 && c < 1.0) {
                return Err(invalid(format!("constant must lie in (0, 1), got {c}")));
            }
            let value = c * n as f64;
            PrfCountBound { model, kind: "lower_bound".into(), value, statement: format!(">= {value}") }
        }
    })
}
