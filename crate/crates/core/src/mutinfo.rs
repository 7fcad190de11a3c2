//! Entropy and mutual information of least-squares coefficients fitted on
//! two designs that share their first `a` observations.
//!
//! Three routes to the same number: the closed form in the design
//! aggregates, the exact coefficient covariance, and simulation.

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, precondition, Error, Result};
use crate::rng::substream;

/// Ratios `det S / (det S11 det S22)` below this are treated as singular.
pub const SINGULAR_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapDesign {
    pub xs: Vec<f64>,
    pub ws: Vec<f64>,
    pub a: usize,
    pub sigma: f64,
}

fn spread(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let s1: f64 = v.iter().sum();
    let s2: f64 = v.iter().map(|x| x * x).sum();
    n * s2 - s1 * s1
}

fn check_side(v: &[f64]) -> Result<()> {
    let scale: f64 = v.iter().map(|x| x * x).sum::<f64>().max(1.0) * v.len() as f64;
    if spread(v) <= 1e-12 * scale {
        return Err(Error::SingularDesign("a design needs two distinct x values".into()));
    }
    Ok(())
}

impl OverlapDesign {
    pub fn new(xs: Vec<f64>, ws: Vec<f64>, a: usize, sigma: f64) -> Result<Self> {
        let d = OverlapDesign { xs, ws, a, sigma };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let ell = self.xs.len();
        if self.ws.len() != ell {
            return Err(Error::DimensionMismatch { expected: ell, actual: self.ws.len() });
        }
        if ell < 3 {
            return Err(invalid(format!("need at least 3 observations, got {ell}")));
        }
        if self.a > ell {
            return Err(invalid(format!("overlap {} exceeds {ell}", self.a)));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(invalid(format!("sigma must be positive, got {}", self.sigma)));
        }
        if let Some(i) = (0..self.a).find(|&i| self.xs[i] != self.ws[i]) {
            return Err(precondition(format!("shared observation {i} differs between designs")));
        }
        check_side(&self.xs)?;
        check_side(&self.ws)
    }

    pub fn ell(&self) -> usize {
        self.xs.len()
    }

    /// The same design with the roles of the two sides exchanged.
    pub fn swapped(&self) -> Self {
        OverlapDesign { xs: self.ws.clone(), ws: self.xs.clone(), ..self.clone() }
    }
}

/// How the cross term `C3` is aggregated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum C3Convention {
    /// `sum_{i != j <= a} x_i x_j = C1^2 - C2`.
    #[default]
    Shared,
    /// `sum_{i != j <= ell} x_i x_j = X1^2 - X2`.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct MiSummary {
    pub X1: f64,
    pub X2: f64,
    pub W1: f64,
    pub W2: f64,
    pub C1: f64,
    pub C2: f64,
    pub C3: f64,
}

pub fn summarize(design: &OverlapDesign, c3: C3Convention) -> MiSummary {
    // Empty sums come back as -0.0; adding 0.0 normalizes them.
    let sum = |v: &[f64]| v.iter().sum::<f64>() + 0.0;
    let sq = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>() + 0.0;
    let shared = &design.xs[..design.a];
    let (x1, c1, c2) = (sum(&design.xs), sum(shared), sq(shared));
    let c3_value = match c3 {
        C3Convention::Shared => c1 * c1 - c2,
        C3Convention::Full => x1 * x1 - sq(&design.xs),
    };
    MiSummary {
        X1: x1,
        X2: sq(&design.xs),
        W1: sum(&design.ws),
        W2: sq(&design.ws),
        C1: c1,
        C2: c2,
        C3: c3_value,
    }
}

/// Differential entropy (nats) of the coefficient pair fitted on `xs`:
/// `2 ln sigma - ln(ell X2 - X1^2)/2 + 1 + ln(2 pi)`.
pub fn marginal_entropy(xs: &[f64], sigma: f64) -> Result<f64> {
    check_side(xs)?;
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(invalid("sigma must be positive"));
    }
    Ok(2.0 * sigma.ln() - 0.5 * spread(xs).ln() + 1.0 + (2.0 * std::f64::consts::PI).ln())
}

fn gram_inverse(v: &[f64]) -> Result<Matrix2<f64>> {
    let s1: f64 = v.iter().sum();
    let s2: f64 = v.iter().map(|x| x * x).sum();
    Matrix2::new(v.len() as f64, s1, s1, s2)
        .try_inverse()
        .ok_or_else(|| Error::SingularDesign("singular normal equations".into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceReport {
    /// Covariance of `(alpha1, beta1, alpha2, beta2)`, row-major.
    pub sigma_matrix: [f64; 16],
    /// Mutual information in nats; `f64::INFINITY` when singular.
    pub mi: f64,
    pub entropy_first: f64,
    pub entropy_second: f64,
    pub entropy_joint: f64,
}

/// Exact covariance of both coefficient pairs and their mutual information.
///
/// With `A = (X'X)^-1`, `D = (W'W)^-1` and the shared rows `X_a`, `W_a`, the
/// cross block is `A X_a' W_a D`, all scaled by `sigma^2`.
pub fn covariance_oracle(design: &OverlapDesign) -> Result<CovarianceReport> {
    design.validate()?;
    let a_block = gram_inverse(&design.xs)?;
    let d_block = gram_inverse(&design.ws)?;
    let mut shared = Matrix2::zeros();
    for i in 0..design.a {
        let xi = Vector2::new(1.0, design.xs[i]);
        let wi = Vector2::new(1.0, design.ws[i]);
        shared += xi * wi.transpose();
    }
    let b_block = a_block * shared * d_block;
    let s2 = design.sigma * design.sigma;
    let mut full = Matrix4::zeros();
    full.fixed_view_mut::<2, 2>(0, 0).copy_from(&(a_block * s2));
    full.fixed_view_mut::<2, 2>(0, 2).copy_from(&(b_block * s2));
    full.fixed_view_mut::<2, 2>(2, 0).copy_from(&(b_block.transpose() * s2));
    full.fixed_view_mut::<2, 2>(2, 2).copy_from(&(d_block * s2));

    let det11 = (a_block * s2).determinant();
    let det22 = (d_block * s2).determinant();
    // det S = det S11 det(S22 - S21 S11^-1 S12); the ratio is the Schur part.
    let a_inv = a_block.try_inverse().ok_or_else(|| Error::SingularDesign("singular block".into()))?;
    let schur = d_block - b_block.transpose() * a_inv * b_block;
    let ratio = schur.determinant() / d_block.determinant();
    let det = det11 * det22 * ratio;
    let mi = if ratio < SINGULAR_RATIO { f64::INFINITY } else { -0.5 * ratio.ln() + 0.0 };

    let base = 1.0 + (2.0 * std::f64::consts::PI).ln();
    let mut sigma_matrix = [0.0; 16];
    for r in 0..4 {
        for c in 0..4 {
            sigma_matrix[4 * r + c] = full[(r, c)];
        }
    }
    Ok(CovarianceReport {
        sigma_matrix,
        mi,
        entropy_first: base + 0.5 * det11.ln(),
        entropy_second: base + 0.5 * det22.ln(),
        entropy_joint: if det > 0.0 { 2.0 * base + 0.5 * det.ln() } else { f64::NEG_INFINITY },
    })
}

/// Closed-form mutual information from the design aggregates.
pub fn closed_form_mi(design: &OverlapDesign, c3: C3Convention) -> Result<f64> {
    design.validate()?;
    let s = summarize(design, c3);
    let ell = design.ell() as f64;
    let a = design.a as f64;
    let den = (ell * s.X2 - s.X1 * s.X1) * (ell * s.W2 - s.W1 * s.W1);
    let first = (ell * s.C2 - 2.0 * s.C1 * s.X1 + a * s.X2) * (ell * s.C2 - 2.0 * s.C1 * s.W1 + a * s.W2) / den;
    let cross = (a - 1.0) * s.C2 - s.C3;
    let second = cross * (cross + ell * (s.X2 + s.W2) - 2.0 * s.X1 * s.W1) / den;
    let inner = 1.0 - first + second;
    if inner <= 0.0 {
        return Err(Error::SingularDesign(format!("closed form is undefined, inner term {inner}")));
    }
    Ok(-0.5 * inner.ln() + 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloMi {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: usize,
    pub blocks: usize,
}

/// Number of jackknife groups.
pub const JACKKNIFE_BLOCKS: usize = 100;

#[derive(Clone, Copy)]
struct Moments {
    n: f64,
    sum: Vector4<f64>,
    outer: Matrix4<f64>,
}

impl Moments {
    fn zero() -> Self {
        Moments { n: 0.0, sum: Vector4::zeros(), outer: Matrix4::zeros() }
    }

    fn add(&mut self, v: &Vector4<f64>) {
        self.n += 1.0;
        self.sum += v;
        self.outer += v * v.transpose();
    }

    fn minus(&self, other: &Moments) -> Moments {
        Moments { n: self.n - other.n, sum: self.sum - other.sum, outer: self.outer - other.outer }
    }

    fn plus(&self, other: &Moments) -> Moments {
        Moments { n: self.n + other.n, sum: self.sum + other.sum, outer: self.outer + other.outer }
    }

    fn gaussian_mi(&self) -> f64 {
        let mean = self.sum / self.n;
        let cov = (self.outer - mean * mean.transpose() * self.n) / (self.n - 1.0);
        let d11 = cov.fixed_view::<2, 2>(0, 0).determinant();
        let d22 = cov.fixed_view::<2, 2>(2, 2).determinant();
        -0.5 * (cov.determinant() / (d11 * d22)).ln()
    }
}

/// Simulated coefficient pairs with shared noise on the first `a`
/// observations; Gaussian MI of their sample covariance.
///
/// Trials are split into [`JACKKNIFE_BLOCKS`] groups, each with its own
/// stream. The estimate is the grouped-jackknife bias-corrected value and the
/// standard error is the grouped-jackknife one.
pub fn monte_carlo_mi(design: &OverlapDesign, trials: usize, seed: u64) -> Result<MonteCarloMi> {
    design.validate()?;
    if trials < 1000 {
        return Err(invalid(format!("need at least 1000 trials, got {trials}")));
    }
    let ell = design.ell();
    let projection = |v: &[f64]| -> Result<Vec<Vector2<f64>>> {
        let inv = gram_inverse(v)?;
        Ok(v.iter().map(|&x| inv * Vector2::new(1.0, x)).collect())
    };
    let px = projection(&design.xs)?;
    let pw = projection(&design.ws)?;
    let blocks = JACKKNIFE_BLOCKS;

    let per_block: Vec<Moments> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let count = (b + 1) * trials / blocks - b * trials / blocks;
            let mut rng = substream(seed, "mutinfo/mc", b as u64);
            let mut acc = Moments::zero();
            let mut first = vec![0.0; ell];
            for _ in 0..count {
                let mut coef1 = Vector2::zeros();
                let mut coef2 = Vector2::zeros();
                for i in 0..ell {
                    let e: f64 = StandardNormal.sample(&mut rng);
                    first[i] = e * design.sigma;
                    coef1 += px[i] * first[i];
                }
                for i in 0..ell {
                    let e = if i < design.a {
                        first[i]
                    } else {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        z * design.sigma
                    };
                    coef2 += pw[i] * e;
                }
                acc.add(&Vector4::new(coef1[0], coef1[1], coef2[0], coef2[1]));
            }
            acc
        })
        .collect();

    let total = per_block.iter().fold(Moments::zero(), |acc, m| acc.plus(m));
    let full = total.gaussian_mi();
    let loo: Vec<f64> = per_block.iter().map(|m| total.minus(m).gaussian_mi()).collect();
    let g = blocks as f64;
    let loo_mean = loo.iter().sum::<f64>() / g;
    let estimate = g * full - (g - 1.0) * loo_mean;
    let var = (g - 1.0) / g * loo.iter().map(|v| (v - loo_mean) * (v - loo_mean)).sum::<f64>();
    Ok(MonteCarloMi { estimate, std_error: var.sqrt(), trials, blocks })
}
