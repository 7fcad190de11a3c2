//! Powers-of-two gadget vector and matrix, binary decomposition, and a small
//! dense matrix type over `Z_m`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Gadget width `ceil(log2 m)` for `m >= 2`.
pub fn gadget_width(m: u64) -> usize {
    assert!(m >= 2, "modulus must be at least 2");
    (64 - (m - 1).leading_zeros()) as usize
}

/// `(1, 2, ..., 2^(d-1))`.
pub fn gadget_vector(d: usize) -> Vec<u64> {
    (0..d).map(|j| 1u64 << j).collect()
}

/// Little-endian binary digits of `a`, padded to `d` digits.
pub fn gadget_decompose(a: u64, d: usize) -> Result<Vec<u8>> {
    if d < 64 && a >> d != 0 {
        return Err(invalid(format!("{a} does not fit in {d} bits")));
    }
    Ok((0..d).map(|j| ((a >> j) & 1) as u8).collect())
}

/// `<g, bits>`.
pub fn gadget_recompose(bits: &[u8]) -> u64 {
    bits.iter().enumerate().map(|(j, &b)| (b as u64) << j).sum()
}

/// Dense row-major matrix with entries in `[0, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, actual: bad.len() });
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `self * rhs mod m`.
    pub fn mul_mod(&self, rhs: &Matrix, m: u64) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, actual: rhs.rows });
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let acc = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            let mut wide = vec![0u128; rhs.cols];
            for k in 0..self.cols {
                let a = self.get(r, k) as u128;
                if a == 0 {
                    continue;
                }
                for (w, &b) in wide.iter_mut().zip(rhs.row(k)) {
                    *w += a * b as u128;
                }
            }
            for (o, w) in acc.iter_mut().zip(wide) {
                *o = (w % m as u128) as u64;
            }
        }
        Ok(out)
    }

    /// Row vector times matrix, mod `m`.
    pub fn left_mul_vec(&self, v: &[u64], m: u64) -> Result<Vec<u64>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, actual: v.len() });
        }
        let mut wide = vec![0u128; self.cols];
        for (r, &a) in v.iter().enumerate() {
            for (w, &b) in wide.iter_mut().zip(self.row(r)) {
                *w += a as u128 * b as u128;
            }
        }
        Ok(wide.into_iter().map(|w| (w % m as u128) as u64).collect())
    }
}

/// `G = I_w (x) g`, of shape `w x wd`.
pub fn gadget_matrix(w: usize, d: usize) -> Matrix {
    Matrix::from_fn(w, w * d, |r, c| if c / d == r { 1 << (c % d) } else { 0 })
}

/// Bitwise decomposition of a `w x u` matrix into a `wd x u` binary matrix;
/// row `i d + j` holds bit `j` of row `i`.
pub fn gadget_matrix_decompose(a: &Matrix, d: usize) -> Result<Matrix> {
    if let Some(&bad) = a.data.iter().find(|&&v| d < 64 && v >> d != 0) {
        return Err(invalid(format!("entry {bad} does not fit in {d} bits")));
    }
    Ok(Matrix::from_fn(a.rows * d, a.cols, |r, c| (a.get(r / d, c) >> (r % d)) & 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn widths() {
        assert_eq!(gadget_width(2), 1);
        assert_eq!(gadget_width(256), 8);
        assert_eq!(gadget_width(257), 9);
        assert_eq!(gadget_width(12289), 14);
    }

    #[test]
    fn scalar_examples() {
        assert_eq!(gadget_decompose(5, 3).unwrap(), vec![1, 0, 1]);
        assert_eq!(gadget_decompose(0, 4).unwrap(), vec![0, 0, 0, 0]);
        assert_eq!(gadget_recompose(&[1, 0, 1]), 5);
        let g = gadget_vector(3);
        assert_eq!(g, vec![1, 2, 4]);
        assert!(gadget_decompose(8, 3).is_err());
    }

    #[test]
    fn matrix_examples() {
        let zero = Matrix::zeros(2, 3);
        let bits = gadget_matrix_decompose(&zero, 4).unwrap();
        assert_eq!(bits, Matrix::zeros(8, 3));
        let five = Matrix::from_rows(vec![vec![5]]).unwrap();
        assert_eq!(gadget_matrix_decompose(&five, 3).unwrap(), Matrix::from_rows(vec![vec![1], vec![0], vec![1]]).unwrap());
        assert!(gadget_matrix(2, 3).mul_mod(&Matrix::zeros(5, 1), 7).is_err());
    }

    #[test]
    fn identity_on_random_matrices() {
        let mut rng = crate::rng::substream(1, "gadget", 0);
        for (m, w) in [(257u64, 2usize), (12289, 4)] {
            let d = gadget_width(m);
            let g = gadget_matrix(w, d);
            for _ in 0..200 {
                let a = Matrix::from_fn(w, w * d, |_, _| rng.random_range(0..m));
                let back = g.mul_mod(&gadget_matrix_decompose(&a, d).unwrap(), m).unwrap();
                assert_eq!(back, a);
            }
        }
    }

    proptest! {
        #[test]
        fn scalar_round_trip(d in 1usize..=20, raw in any::<u64>()) {
            let a = raw % (1 << d);
            let bits = gadget_decompose(a, d).unwrap();
            prop_assert_eq!(bits.len(), d);
            let g = gadget_vector(d);
            let inner: u64 = g.iter().zip(&bits).map(|(g, &b)| g * b as u64).sum();
            prop_assert_eq!(inner, a);
        }

        #[test]
        fn matrix_round_trip(w in 1usize..4, u in 1usize..6, m in 2u64..5000, seed in any::<u64>()) {
            let d = gadget_width(m);
            let mut rng = crate::rng::substream(seed, "gadget-prop", 0);
            let a = Matrix::from_fn(w, u, |_, _| rng.random_range(0..m));
            let back = gadget_matrix(w, d).mul_mod(&gadget_matrix_decompose(&a, d).unwrap(), m).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
