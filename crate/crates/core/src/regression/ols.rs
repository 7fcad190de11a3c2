use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
}

impl LineFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Ordinary least squares line through `points`.
pub fn fit_least_squares(points: &[(f64, f64)]) -> Result<LineFit> {
    fit_iter(points.iter().copied(), points.len())
}

/// Centered two-pass fit; `len` must match the iterator length.
pub(crate) fn fit_iter<I>(points: I, len: usize) -> Result<LineFit>
where
    I: Iterator<Item = (f64, f64)> + Clone,
{
    if len < 2 {
        return Err(Error::SingularDesign(format!("{len} points cannot determine a line")));
    }
    let n = len as f64;
    let (sx, sy) = points.clone().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (sxx, sxy) = points.fold((0.0, 0.0), |(a, b), (x, y)| {
        let dx = x - mx;
        (a + dx * dx, b + dx * (y - my))
    });
    if sxx <= f64::EPSILON * mx.abs().max(1.0) * n {
        return Err(Error::SingularDesign("all x values are equal".into()));
    }
    let slope = sxy / sxx;
    Ok(LineFit { intercept: my - slope * mx, slope })
}
