use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ols::{fit_iter, LineFit};
use crate::channel::Dataset;
use crate::error::{invalid, Error, Result};
use crate::modular::recenter_real;

/// Smallest dataset with a nontrivial grid (two rows of 100 points).
pub const MIN_GRID_POINTS: usize = 200;

/// Points per segment at the finest grid row.
pub const POINTS_PER_SEGMENT: usize = 100;

/// A fitted line `h(x) = beta0_hat + beta1_hat x` and the grid cell it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub beta0_hat: f64,
    pub beta1_hat: f64,
    pub kappa: usize,
    pub segment: usize,
    pub delta: f64,
    pub x_lo: f64,
    pub x_hi: f64,
}

impl Hypothesis {
    pub fn predict(&self, x: f64) -> f64 {
        self.beta0_hat + self.beta1_hat * x
    }
}

/// Zero-based index range `[lo, hi)` of segment `i` (1-based) out of `kappa`.
pub fn segment_bounds(ell: usize, kappa: usize, i: usize) -> (usize, usize) {
    ((i - 1) * ell / kappa, i * ell / kappa)
}

fn points_of(dataset: &Dataset) -> Vec<(f64, f64)> {
    dataset.points.iter().map(|p| (p.x, p.y as f64)).collect()
}

#[derive(Clone, Copy)]
struct Cell {
    delta: f64,
    kappa: usize,
    segment: usize,
    fit: LineFit,
}

fn better(a: Cell, b: Cell) -> Cell {
    let key = |c: &Cell| (c.delta, c.kappa, c.segment);
    let (ka, kb) = (key(&a), key(&b));
    match ka.0.total_cmp(&kb.0).then(ka.1.cmp(&kb.1)).then(ka.2.cmp(&kb.2)) {
        std::cmp::Ordering::Greater => b,
        _ => a,
    }
}

/// Scores every cell `(kappa, i)`, `1 <= i <= kappa <= ceil(ell/100)`, by
/// `|slope(kappa, i) - kappa|` and returns the best one.
///
/// Segment `i` of row `kappa` fits the sorted points with zero-based index in
/// `[floor((i-1) ell / kappa), floor(i ell / kappa))`. Ties go to the smaller
/// `kappa`, then the smaller `i`. The returned line is only valid locally.
pub fn grid_search_hypothesis(dataset: &Dataset) -> Result<Hypothesis> {
    let ell = dataset.ell();
    if ell < MIN_GRID_POINTS {
        return Err(invalid(format!("grid search needs at least {MIN_GRID_POINTS} points, got {ell}")));
    }
    let points = points_of(dataset);
    let max_kappa = ell.div_ceil(POINTS_PER_SEGMENT);

    let best = (1..=max_kappa)
        .into_par_iter()
        .filter_map(|kappa| {
            (1..=kappa)
                .filter_map(|i| {
                    let (lo, hi) = segment_bounds(ell, kappa, i);
                    let seg = &points[lo..hi];
                    let fit = fit_iter(seg.iter().copied(), seg.len()).ok()?;
                    Some(Cell { delta: (fit.slope - kappa as f64).abs(), kappa, segment: i, fit })
                })
                .reduce(better)
        })
        .reduce_with(better)
        .ok_or_else(|| Error::SingularDesign("no grid cell has two distinct x values".into()))?;

    let (lo, hi) = segment_bounds(ell, best.kappa, best.segment);
    Ok(Hypothesis {
        beta0_hat: best.fit.intercept,
        beta1_hat: best.fit.slope,
        kappa: best.kappa,
        segment: best.segment,
        delta: best.delta,
        x_lo: points[lo].0,
        x_hi: points[hi - 1].0,
    })
}

/// Refits `line` on `points` after unwrapping each reply to the
/// representative of `y mod m` nearest the current prediction.
fn unwrapped_fit(points: &[(f64, f64)], line: LineFit, m: u64) -> Result<LineFit> {
    let unwrapped = points.iter().map(move |&(x, y)| {
        let guess = line.predict(x);
        (x, guess + recenter_real(y - guess, m))
    });
    fit_iter(unwrapped, points.len())
}

/// Extends a grid-search line from its segment to the whole dataset.
///
/// The window around the winning segment doubles at each step; replies in the
/// window are unwrapped against the current line and the line is refit. The
/// grid cell, its range and the score definition are kept; the intercept is
/// reduced mod `m`.
pub fn refine_hypothesis(dataset: &Dataset, hyp: &Hypothesis) -> Result<Hypothesis> {
    let ell = dataset.ell();
    if hyp.kappa == 0 || hyp.segment == 0 || hyp.segment > hyp.kappa || hyp.kappa > ell {
        return Err(invalid(format!("cell ({}, {}) does not fit {ell} points", hyp.kappa, hyp.segment)));
    }
    let m = dataset.modulus;
    let points = points_of(dataset);
    let (mut lo, mut hi) = segment_bounds(ell, hyp.kappa, hyp.segment);
    let mut line = LineFit { intercept: hyp.beta0_hat, slope: hyp.beta1_hat };
    line = unwrapped_fit(&points[lo..hi], line, m)?;
    while lo > 0 || hi < ell {
        let half = ((hi - lo) / 2).max(1);
        lo = lo.saturating_sub(half);
        hi = (hi + half).min(ell);
        line = unwrapped_fit(&points[lo..hi], line, m)?;
    }
    for _ in 0..2 {
        line = unwrapped_fit(&points, line, m)?;
    }
    Ok(Hypothesis {
        beta0_hat: line.intercept.rem_euclid(m as f64),
        beta1_hat: line.slope,
        delta: (line.slope - hyp.kappa as f64).abs(),
        ..*hyp
    })
}

/// Grid search followed by refinement.
pub fn fit_hypothesis(dataset: &Dataset) -> Result<Hypothesis> {
    let raw = grid_search_hypothesis(dataset)?;
    refine_hypothesis(dataset, &raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{simulate_exchange, ChannelParams, Coverage, FuncKind, FuncSpec, Point, StarTopology};
    use crate::regression::{transform_dataset, Transform};
    use crate::rng::substream;
    use rand::Rng;

    fn noiseless(beta1: u64, m: u64, ell: usize, seed: u64) -> Dataset {
        let mut rng = substream(seed, "noiseless", 0);
        let points = (0..ell)
            .map(|_| {
                let x = rng.random_range(0..m);
                Point { x: x as f64, y: beta1 * x % m }
            })
            .collect();
        Dataset::from_points(points, m).unwrap()
    }

    fn channel_run(kind: FuncKind, beta1: i64, m: u64, sigma: f64, seed: u64) -> Dataset {
        let topo = StarTopology::single_star(3).unwrap();
        let params = ChannelParams::new(sigma, m).unwrap();
        let f = FuncSpec::new(kind, 0, beta1).unwrap();
        let d = simulate_exchange(&topo, 0, &f, &params, 1 << 16, Coverage::Random, seed).unwrap();
        transform_dataset(&d, kind.transform()).unwrap()
    }

    #[test]
    fn segments_partition_the_points() {
        let ell = 1037;
        for kappa in 1..=11 {
            let mut next = 0;
            for i in 1..=kappa {
                let (lo, hi) = segment_bounds(ell, kappa, i);
                assert_eq!(lo, next);
                next = hi;
            }
            assert_eq!(next, ell);
        }
    }

    #[test]
    fn noiseless_three_periods() {
        let d = noiseless(3, 12288, 1 << 16, 1);
        let h = grid_search_hypothesis(&d).unwrap();
        assert_eq!(h.kappa, 3);
        assert!((h.beta1_hat / 3.0 - 1.0).abs() < 0.005, "{h:?}");
        assert!(h.x_lo < h.x_hi);
        assert_eq!(h.delta, (h.beta1_hat - 3.0).abs());
    }

    #[test]
    fn single_period_line() {
        let d = noiseless(1, 1 << 20, 5000, 2);
        let h = grid_search_hypothesis(&d).unwrap();
        assert_eq!(h.kappa, 1);
        assert!((h.beta1_hat - 1.0).abs() < 1e-9);
    }

    #[test]
    fn too_few_points() {
        let d = noiseless(1, 100, 199, 3);
        assert!(grid_search_hypothesis(&d).is_err());
    }

    #[test]
    fn fig2_grid_estimate() {
        let d = channel_run(FuncKind::Linear, 546, 12288, 30.0, 1);
        let h = grid_search_hypothesis(&d).unwrap();
        assert!((h.beta1_hat / 546.0 - 1.0).abs() < 0.02, "{h:?}");
        let r = refine_hypothesis(&d, &h).unwrap();
        assert!((r.beta1_hat / 546.0 - 1.0).abs() < 0.001, "{r:?}");
        assert!(r.beta0_hat.abs() < 1.0 || (r.beta0_hat - 12288.0).abs() < 1.0, "{r:?}");
        assert_eq!((r.kappa, r.segment), (h.kappa, h.segment));
    }

    #[test]
    fn fig4_square_transform() {
        let d = channel_run(FuncKind::Square, 125, 10218, 30.0, 2);
        let h = fit_hypothesis(&d).unwrap();
        assert!((h.beta1_hat / 125.0 - 1.0).abs() < 0.02, "{h:?}");
    }

    #[test]
    fn grid_is_deterministic() {
        let d = channel_run(FuncKind::Linear, 97, 12288, 100.0, 4);
        assert_eq!(fit_hypothesis(&d).unwrap(), fit_hypothesis(&d).unwrap());
    }

    #[test]
    fn refine_rejects_foreign_cells() {
        let d = noiseless(3, 12288, 1000, 5);
        let mut h = grid_search_hypothesis(&d).unwrap();
        h.segment = h.kappa + 1;
        assert!(refine_hypothesis(&d, &h).is_err());
    }

    #[test]
    fn identity_transform_changes_nothing() {
        let d = noiseless(3, 12288, 1000, 6);
        assert_eq!(transform_dataset(&d, Transform::Identity).unwrap(), d);
    }
}
