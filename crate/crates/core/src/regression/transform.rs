use serde::{Deserialize, Serialize};

use crate::channel::Dataset;
use crate::error::{invalid, Result};

/// Monotone map that linearizes the test functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    Identity,
    Sqrt,
    Square,
    Cbrt,
    Log1p,
}

impl Transform {
    pub const ALL: [Transform; 5] =
        [Transform::Identity, Transform::Sqrt, Transform::Square, Transform::Cbrt, Transform::Log1p];

    pub fn apply(self, x: f64) -> f64 {
        match self {
            Transform::Identity => x,
            Transform::Sqrt => x.sqrt(),
            Transform::Square => x * x,
            Transform::Cbrt => x.cbrt(),
            Transform::Log1p => x.ln_1p(),
        }
    }

    /// Inverse on the image of `[0, inf)`.
    pub fn invert(self, u: f64) -> f64 {
        match self {
            Transform::Identity => u,
            Transform::Sqrt => u * u,
            Transform::Square => u.sqrt(),
            Transform::Cbrt => u * u * u,
            Transform::Log1p => u.exp_m1(),
        }
    }

    /// Whether `x` is an admissible input.
    pub fn accepts(self, x: f64) -> bool {
        match self {
            Transform::Identity | Transform::Square => x.is_finite(),
            Transform::Sqrt | Transform::Cbrt | Transform::Log1p => x.is_finite() && x >= 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Transform::Identity => "identity",
            Transform::Sqrt => "sqrt",
            Transform::Square => "square",
            Transform::Cbrt => "cbrt",
            Transform::Log1p => "log1p",
        }
    }
}

impl std::str::FromStr for Transform {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Transform::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| invalid(format!("unknown transform {s:?}")))
    }
}

/// Replaces every `x` by `t(x)`. Order is preserved since `t` is monotone.
pub fn transform_dataset(dataset: &Dataset, t: Transform) -> Result<Dataset> {
    let mut out = dataset.clone();
    for p in &mut out.points {
        if !t.accepts(p.x) {
            return Err(invalid(format!("x = {} is outside the domain of {}", p.x, t.name())));
        }
        p.x = t.apply(p.x);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Point;
    use proptest::prelude::*;

    fn single(x: f64) -> Dataset {
        Dataset::from_points(vec![Point { x, y: 3 }], 10).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(transform_dataset(&single(4.0), Transform::Sqrt).unwrap().points[0].x, 2.0);
        assert_eq!(transform_dataset(&single(0.0), Transform::Log1p).unwrap().points[0].x, 0.0);
        assert_eq!(transform_dataset(&single(4.0), Transform::Sqrt).unwrap().points[0].y, 3);
        assert!(transform_dataset(&single(-1.0), Transform::Sqrt).is_err());
    }

    proptest! {
        #[test]
        fn strictly_monotone_and_invertible(a in 0.0f64..1e4, b in 0.0f64..1e4) {
            prop_assume!(a < b);
            for t in Transform::ALL {
                prop_assert!(t.apply(a) < t.apply(b), "{:?}", t);
                let back = t.invert(t.apply(a));
                prop_assert!((back - a).abs() <= 1e-9 * a.max(1.0), "{:?}", t);
            }
        }
    }
}
