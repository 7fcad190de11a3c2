//! Rounding and modular representatives shared by every module.
//!
//! Rounding is to the nearest integer with ties away from zero. Differences
//! modulo `m` are represented in `(-m/2, (m+1)/2]`.

/// Nearest integer, ties away from zero.
#[inline]
pub fn round_half_away(v: f64) -> i64 {
    v.round() as i64
}

/// Reduces an integer into `[0, m)`.
#[inline]
pub fn reduce(v: i64, m: u64) -> u64 {
    v.rem_euclid(m as i64) as u64
}

/// Signed representative of `v mod m` in `(-m/2, (m+1)/2]`.
#[inline]
pub fn recenter(v: i64, m: u64) -> i64 {
    let r = v.rem_euclid(m as i64);
    if 2 * r > m as i64 + 1 {
        r - m as i64
    } else {
        r
    }
}

/// Real-valued counterpart of [`recenter`].
#[inline]
pub fn recenter_real(v: f64, m: u64) -> f64 {
    let mf = m as f64;
    let r = v.rem_euclid(mf);
    if r > (mf + 1.0) / 2.0 {
        r - mf
    } else {
        r
    }
}

/// Residue class of a (possibly real) linearized input.
#[inline]
pub fn residue_of(x: f64, m: u64) -> u64 {
    reduce(round_half_away(x), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ties_go_away_from_zero() {
        assert_eq!(round_half_away(2.5), 3);
        assert_eq!(round_half_away(-2.5), -3);
        assert_eq!(round_half_away(0.4), 0);
        assert_eq!(round_half_away(-0.5), -1);
    }

    #[test]
    fn recenter_boundaries() {
        assert_eq!(recenter(5, 10), 5);
        assert_eq!(recenter(6, 10), -4);
        assert_eq!(recenter(6, 11), 6);
        assert_eq!(recenter(7, 11), -4);
        assert_eq!(recenter(-1, 10), -1);
        assert!((recenter_real(12288.0 - 1.2, 12288) + 1.2).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn recenter_is_a_representative(v in -100_000i64..100_000, m in 2u64..5000) {
            let r = recenter(v, m);
            prop_assert!(2 * r > -(m as i64) && 2 * r <= m as i64 + 1);
            prop_assert_eq!((r - v).rem_euclid(m as i64), 0);
        }
    }
}
