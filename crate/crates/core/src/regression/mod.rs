//! Modular linear regression over channel datasets: least squares, the
//! period grid search, linearizing transforms and the error oracle.

mod grid;
mod ols;
mod oracle;
mod transform;

pub use grid::{fit_hypothesis, grid_search_hypothesis, refine_hypothesis, segment_bounds, Hypothesis};
pub use ols::{fit_least_squares, LineFit};
pub use oracle::{
    build_error_oracle, error_bound, error_statistics, eval_error, ErrorOracle, ErrorStats, BOUND_CONSTANT,
    TAIL_CONSTANT_B,
};
pub use transform::{transform_dataset, Transform};
