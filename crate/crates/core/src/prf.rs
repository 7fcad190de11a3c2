//! Star-specific key-homomorphic PRF over a full binary tree.
//!
//! `A_T(x)` is `A_x` at a leaf and `A_{T.l}(x_l) G^{-1}(A_{T.r}(x_r)) mod m`
//! at an inner node. The PRF of a star with key `s` outputs
//! `b + e(b) mod m` coordinate-wise, with `b = s A_T(x)` and `e` that star's
//! error oracle.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gadget::{gadget_matrix_decompose, gadget_width, Matrix};
use crate::lwlr::{sample_secret, SecretDistribution};
use crate::modular::{recenter, reduce};
use crate::regression::{eval_error, ErrorOracle};
use crate::rng::{substream, Stream};

/// Full binary tree. Serialized as nested arrays: a leaf is `[]`, an inner
/// node is `[left, right]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<TreeShape>", into = "Vec<TreeShape>")]
pub enum TreeShape {
    Leaf,
    Node(Box<TreeShape>, Box<TreeShape>),
}

impl TryFrom<Vec<TreeShape>> for TreeShape {
    type Error = String;

    fn try_from(children: Vec<TreeShape>) -> std::result::Result<Self, String> {
        let mut it = children.into_iter();
        match (it.next(), it.next(), it.next()) {
            (None, _, _) => Ok(TreeShape::Leaf),
            (Some(l), Some(r), None) => Ok(TreeShape::Node(Box::new(l), Box::new(r))),
            _ => Err("a tree node has either zero or two children".into()),
        }
    }
}

impl From<TreeShape> for Vec<TreeShape> {
    fn from(t: TreeShape) -> Self {
        match t {
            TreeShape::Leaf => vec![],
            TreeShape::Node(l, r) => vec![*l, *r],
        }
    }
}

impl TreeShape {
    pub fn node(left: TreeShape, right: TreeShape) -> Self {
        TreeShape::Node(Box::new(left), Box::new(right))
    }

    /// Input bit length `|T|`.
    pub fn leaves(&self) -> usize {
        match self {
            TreeShape::Leaf => 1,
            TreeShape::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    /// Balanced tree; the left subtree takes the extra leaf on odd splits.
    pub fn balanced(leaves: usize) -> Result<Self> {
        match leaves {
            0 => Err(invalid("a tree has at least one leaf")),
            1 => Ok(TreeShape::Leaf),
            n => Ok(TreeShape::node(Self::balanced(n.div_ceil(2))?, Self::balanced(n / 2)?)),
        }
    }

    /// Every right child is a leaf.
    pub fn left_spine(leaves: usize) -> Result<Self> {
        match leaves {
            0 => Err(invalid("a tree has at least one leaf")),
            1 => Ok(TreeShape::Leaf),
            n => Ok(TreeShape::node(Self::left_spine(n - 1)?, TreeShape::Leaf)),
        }
    }

    /// Every left child is a leaf.
    pub fn right_spine(leaves: usize) -> Result<Self> {
        match leaves {
            0 => Err(invalid("a tree has at least one leaf")),
            1 => Ok(TreeShape::Leaf),
            n => Ok(TreeShape::node(TreeShape::Leaf, Self::right_spine(n - 1)?)),
        }
    }
}

/// Public parameters. `A_0` and `A_1` are regenerated from `seed`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ParamsRecord", into = "ParamsRecord")]
pub struct PrfParams {
    m: u64,
    w: usize,
    d: usize,
    a0: Matrix,
    a1: Matrix,
    tree: TreeShape,
    seed: u64,
}

#[derive(Serialize, Deserialize)]
struct ParamsRecord {
    m: u64,
    w: usize,
    d: usize,
    tree: TreeShape,
    seed: u64,
}

impl TryFrom<ParamsRecord> for PrfParams {
    type Error = Error;

    fn try_from(r: ParamsRecord) -> Result<Self> {
        let p = PrfParams::sample(r.m, r.w, r.tree, r.seed)?;
        if p.d != r.d {
            return Err(invalid(format!("d = {} does not match ceil(log2 {}) = {}", r.d, r.m, p.d)));
        }
        Ok(p)
    }
}

impl From<PrfParams> for ParamsRecord {
    fn from(p: PrfParams) -> Self {
        ParamsRecord { m: p.m, w: p.w, d: p.d, tree: p.tree, seed: p.seed }
    }
}

impl PrfParams {
    /// Draws uniform `A_0, A_1` in `Z_m^{w x wd}` from `seed`.
    pub fn sample(m: u64, w: usize, tree: TreeShape, seed: u64) -> Result<Self> {
        if m < 2 || w == 0 {
            return Err(invalid(format!("need m >= 2 and w >= 1, got m={m}, w={w}")));
        }
        let d = gadget_width(m);
        let draw = |label: &str| {
            let mut rng = substream(seed, label, 0);
            Matrix::from_fn(w, w * d, |_, _| rng.random_range(0..m))
        };
        let a0 = draw("prf/a0");
        let a1 = draw("prf/a1");
        Ok(PrfParams { m, w, d, a0, a1, tree, seed })
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn dimension(&self) -> usize {
        self.w
    }

    pub fn gadget_width(&self) -> usize {
        self.d
    }

    /// Output length `wd`.
    pub fn output_len(&self) -> usize {
        self.w * self.d
    }

    pub fn tree(&self) -> &TreeShape {
        &self.tree
    }

    pub fn input_len(&self) -> usize {
        self.tree.leaves()
    }

    pub fn a0(&self) -> &Matrix {
        &self.a0
    }

    pub fn a1(&self) -> &Matrix {
        &self.a1
    }

    pub fn random_input(&self, rng: &mut Stream) -> Vec<bool> {
        (0..self.input_len()).map(|_| rng.random_bool(0.5)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrfKey {
    pub s: Vec<u64>,
}

impl PrfKey {
    pub fn new(s: Vec<u64>, params: &PrfParams) -> Result<Self> {
        if s.len() != params.w {
            return Err(Error::DimensionMismatch { expected: params.w, actual: s.len() });
        }
        if let Some(&bad) = s.iter().find(|&&v| v >= params.m) {
            return Err(invalid(format!("key entry {bad} is not reduced mod {}", params.m)));
        }
        Ok(PrfKey { s })
    }

    pub fn random(params: &PrfParams, dist: SecretDistribution, rng: &mut Stream) -> Self {
        PrfKey { s: sample_secret(params.w, params.m, dist, rng) }
    }

    pub fn zero(params: &PrfParams) -> Self {
        PrfKey { s: vec![0; params.w] }
    }

    /// Coordinate-wise sum mod `m`.
    pub fn add(&self, other: &PrfKey, m: u64) -> PrfKey {
        PrfKey { s: self.s.iter().zip(&other.s).map(|(a, b)| (a + b) % m).collect() }
    }
}

/// Parses a bit string such as `"0110"`.
pub fn parse_bits(text: &str) -> Result<Vec<bool>> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("{other:?} is not a bit"))),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn eval_subtree(params: &PrfParams, tree: &TreeShape, x: &[bool]) -> Result<Matrix> {
    match tree {
        TreeShape::Leaf => Ok(if x[0] { params.a1.clone() } else { params.a0.clone() }),
        TreeShape::Node(l, r) => {
            let (xl, xr) = x.split_at(l.leaves());
            let left = eval_subtree(params, l, xl)?;
            let right = eval_subtree(params, r, xr)?;
            left.mul_mod(&gadget_matrix_decompose(&right, params.d)?, params.m)
        }
    }
}

/// `A_T(x)` in `Z_m^{w x wd}`.
pub fn eval_at(params: &PrfParams, x: &[bool]) -> Result<Matrix> {
    if x.len() != params.input_len() {
        return Err(Error::DimensionMismatch { expected: params.input_len(), actual: x.len() });
    }
    eval_subtree(params, &params.tree, x)
}

fn check_oracle(params: &PrfParams, oracle: &ErrorOracle) -> Result<()> {
    if oracle.modulus() != params.m {
        return Err(Error::ModulusMismatch { expected: params.m, actual: oracle.modulus() });
    }
    Ok(())
}

/// `s A_T(x)` without the error term.
pub fn prf_core(params: &PrfParams, key: &PrfKey, x: &[bool]) -> Result<Vec<u64>> {
    if key.s.len() != params.w {
        return Err(Error::DimensionMismatch { expected: params.w, actual: key.s.len() });
    }
    eval_at(params, x)?.left_mul_vec(&key.s, params.m)
}

/// `F_s(x) = b + e(b) mod m` with `b = s A_T(x)`, the oracle applied per coordinate.
pub fn prf_eval(params: &PrfParams, oracle: &ErrorOracle, key: &PrfKey, x: &[bool]) -> Result<Vec<u64>> {
    check_oracle(params, oracle)?;
    let b = prf_core(params, key, x)?;
    Ok(b.into_iter().map(|v| reduce(v as i64 + eval_error(oracle, v as i64), params.m)).collect())
}

/// `F_{k1}(x) + F_{k2}(x) - F_{k1+k2}(x) mod m`, recentered.
pub fn homomorphism_gap(
    params: &PrfParams,
    oracle: &ErrorOracle,
    k1: &PrfKey,
    k2: &PrfKey,
    x: &[bool],
) -> Result<Vec<i64>> {
    let f1 = prf_eval(params, oracle, k1, x)?;
    let f2 = prf_eval(params, oracle, k2, x)?;
    let f12 = prf_eval(params, oracle, &k1.add(k2, params.m), x)?;
    Ok(f1
        .iter()
        .zip(&f2)
        .zip(&f12)
        .map(|((&a, &b), &c)| recenter(a as i64 + b as i64 - c as i64, params.m))
        .collect())
}

/// Fraction of output coordinates on which two stars' PRFs agree under the
/// same key, over `trials` random inputs.
pub fn star_collision_rate(
    params: &PrfParams,
    oracle_i: &ErrorOracle,
    oracle_j: &ErrorOracle,
    key: &PrfKey,
    trials: usize,
    rng: &mut Stream,
) -> Result<f64> {
    check_oracle(params, oracle_i)?;
    check_oracle(params, oracle_j)?;
    if trials == 0 {
        return Err(invalid("need at least one trial"));
    }
    let mut agree = 0usize;
    for _ in 0..trials {
        let x = params.random_input(rng);
        let fi = prf_eval(params, oracle_i, key, &x)?;
        let fj = prf_eval(params, oracle_j, key, &x)?;
        agree += fi.iter().zip(&fj).filter(|(a, b)| a == b).count();
    }
    Ok(agree as f64 / (trials * params.output_len()) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{simulate_exchange, ChannelParams, Coverage, FuncKind, FuncSpec, StarTopology};
    use crate::regression::{build_error_oracle, fit_hypothesis};
    use crate::stats::{central_mass, rounded_sigma};

    fn oracle(sigma: f64, m: u64, seed: u64) -> ErrorOracle {
        let topo = StarTopology::single_star(3).unwrap();
        let params = ChannelParams::new(sigma, m).unwrap();
        let f = FuncSpec::new(FuncKind::Linear, 0, 97).unwrap();
        let d = simulate_exchange(&topo, 0, &f, &params, 1 << 16, Coverage::Complete, seed).unwrap();
        build_error_oracle(&d, &fit_hypothesis(&d).unwrap()).unwrap()
    }

    #[test]
    fn tree_shapes() {
        assert_eq!(TreeShape::balanced(4).unwrap().leaves(), 4);
        assert_eq!(TreeShape::balanced(5).unwrap().leaves(), 5);
        assert_eq!(TreeShape::left_spine(3).unwrap(), TreeShape::node(TreeShape::node(TreeShape::Leaf, TreeShape::Leaf), TreeShape::Leaf));
        let json = serde_json::to_string(&TreeShape::balanced(3).unwrap()).unwrap();
        assert_eq!(json, "[[[],[]],[]]");
        let back: TreeShape = serde_json::from_str(&json).unwrap();
        assert_eq!(back.leaves(), 3);
        assert!(serde_json::from_str::<TreeShape>("[[]]").is_err());
        assert!(TreeShape::balanced(0).is_err());
    }

    #[test]
    fn params_round_trip_through_json() {
        let p = PrfParams::sample(257, 2, TreeShape::balanced(4).unwrap(), 9).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"m":257,"w":2,"d":9,"tree":[[[],[]],[[],[]]],"seed":9}"#);
        let back: PrfParams = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<PrfParams>(r#"{"m":257,"w":2,"d":8,"tree":[],"seed":9}"#).is_err());
    }

    #[test]
    fn recursion_base_and_step() {
        let leaf = PrfParams::sample(257, 2, TreeShape::Leaf, 1).unwrap();
        assert_eq!(eval_at(&leaf, &[false]).unwrap(), *leaf.a0());
        assert_eq!(eval_at(&leaf, &[true]).unwrap(), *leaf.a1());

        let two = PrfParams::sample(257, 2, TreeShape::balanced(2).unwrap(), 1).unwrap();
        let expected = two.a0().mul_mod(&gadget_matrix_decompose(two.a1(), two.gadget_width()).unwrap(), 257).unwrap();
        assert_eq!(eval_at(&two, &[false, true]).unwrap(), expected);
        assert!(eval_at(&two, &[false]).is_err());
    }

    #[test]
    fn tree_shape_matters() {
        let x = parse_bits("0110").unwrap();
        let balanced = PrfParams::sample(257, 2, TreeShape::balanced(4).unwrap(), 3).unwrap();
        let spine = PrfParams::sample(257, 2, TreeShape::left_spine(4).unwrap(), 3).unwrap();
        assert_eq!(balanced.a0(), spine.a0());
        assert_ne!(eval_at(&balanced, &x).unwrap(), eval_at(&spine, &x).unwrap());
    }

    #[test]
    fn zero_key_outputs_the_error_at_zero() {
        let m = 12289;
        let o = oracle(30.0, m, 1);
        let p = PrfParams::sample(m, 4, TreeShape::balanced(8).unwrap(), 2).unwrap();
        let x = parse_bits("01101001").unwrap();
        let out = prf_eval(&p, &o, &PrfKey::zero(&p), &x).unwrap();
        let e0 = reduce(eval_error(&o, 0), m);
        assert_eq!(out, vec![e0; 56]);

        let gap = homomorphism_gap(&p, &o, &PrfKey::zero(&p), &PrfKey::zero(&p), &x).unwrap();
        assert_eq!(gap, vec![recenter(eval_error(&o, 0), m); 56]);
    }

    #[test]
    fn gap_with_a_zero_key_is_zero() {
        let m = 12289;
        let o = oracle(30.0, m, 1);
        let p = PrfParams::sample(m, 4, TreeShape::balanced(8).unwrap(), 2).unwrap();
        let mut rng = substream(2, "keys", 0);
        let k = PrfKey::random(&p, SecretDistribution::Uniform, &mut rng);
        let x = p.random_input(&mut rng);
        // F_k + F_0 - F_k leaves exactly the error at zero.
        let gap = homomorphism_gap(&p, &o, &k, &PrfKey::zero(&p), &x).unwrap();
        assert!(gap.iter().all(|&g| g == recenter(eval_error(&o, 0), m)));
    }

    #[test]
    fn evaluation_is_deterministic_and_checked() {
        let m = 12289;
        let o = oracle(30.0, m, 4);
        let p = PrfParams::sample(m, 4, TreeShape::balanced(8).unwrap(), 5).unwrap();
        let mut rng = substream(5, "keys", 0);
        let k = PrfKey::random(&p, SecretDistribution::Uniform, &mut rng);
        let x = p.random_input(&mut rng);
        assert_eq!(prf_eval(&p, &o, &k, &x).unwrap(), prf_eval(&p, &o, &k, &x).unwrap());
        let other = oracle(30.0, 12288, 4);
        assert!(matches!(prf_eval(&p, &other, &k, &x), Err(Error::ModulusMismatch { .. })));
        assert!(PrfKey::new(vec![1, 2], &p).is_err());
        assert!(PrfKey::new(vec![m, 0, 0, 0], &p).is_err());
    }

    #[test]
    fn homomorphism_gap_is_small() {
        let m = 12289;
        let o = oracle(30.0, m, 6);
        let p = PrfParams::sample(m, 4, TreeShape::balanced(8).unwrap(), 7).unwrap();
        let mut rng = substream(7, "hom", 0);
        let bound = 2700f64.sqrt() * rounded_sigma(30.0);
        let mut inside = 0;
        let mut total = 0;
        for _ in 0..100 {
            let k1 = PrfKey::random(&p, SecretDistribution::Uniform, &mut rng);
            let k2 = PrfKey::random(&p, SecretDistribution::Uniform, &mut rng);
            let x = p.random_input(&mut rng);
            for g in homomorphism_gap(&p, &o, &k1, &k2, &x).unwrap() {
                total += 1;
                inside += usize::from((g as f64).abs() <= bound);
            }
        }
        assert!(inside as f64 >= 0.99 * total as f64);
    }

    #[test]
    fn independent_stars_rarely_collide() {
        let m = 12289;
        let p = PrfParams::sample(m, 4, TreeShape::balanced(8).unwrap(), 8).unwrap();
        let mut rng = substream(8, "collide", 0);
        let key = PrfKey::random(&p, SecretDistribution::Uniform, &mut rng);
        let o10a = oracle(10.0, m, 10);
        let o10b = oracle(10.0, m, 11);
        assert_eq!(star_collision_rate(&p, &o10a, &o10a, &key, 20, &mut rng).unwrap(), 1.0);
        let rate10 = star_collision_rate(&p, &o10a, &o10b, &key, 200, &mut rng).unwrap();
        let bound10 = central_mass(1.0 / (2f64.sqrt() * 10.0));
        assert!(rate10 <= bound10 + 0.02, "{rate10}");

        let o100a = oracle(100.0, m, 12);
        let o100b = oracle(100.0, m, 13);
        let rate100 = star_collision_rate(&p, &o100a, &o100b, &key, 200, &mut rng).unwrap();
        assert!(rate100 < rate10, "{rate100} vs {rate10}");
    }

    #[test]
    fn independent_stars_disagree_somewhere() {
        let m = 12289;
        let p = PrfParams::sample(m, 4, TreeShape::balanced(8).unwrap(), 14).unwrap();
        let mut rng = substream(14, "differ", 0);
        let key = PrfKey::random(&p, SecretDistribution::Uniform, &mut rng);
        let (oa, ob) = (oracle(30.0, m, 15), oracle(30.0, m, 16));
        let delta = central_mass(1.0 / (2f64.sqrt() * 30.0));
        let mut differ = 0;
        for _ in 0..200 {
            let x = p.random_input(&mut rng);
            differ += usize::from(prf_eval(&p, &oa, &key, &x).unwrap() != prf_eval(&p, &ob, &key, &x).unwrap());
        }
        let floor = 1.0 - (delta + 0.05f64).powi(p.output_len() as i32);
        assert!(differ as f64 / 200.0 >= floor);
    }

    #[test]
    fn bit_strings() {
        assert_eq!(parse_bits("0110").unwrap(), vec![false, true, true, false]);
        assert_eq!(format_bits(&[true, false]), "10");
        assert!(parse_bits("01a").is_err());
    }
}
