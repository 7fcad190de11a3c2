//! Simulated star networks over Gaussian channels.
//!
//! Each party reaches its star's hub over a noisy channel. Messages
//! `(x, f(x))` arrive as `round(f(x) + eps) mod m`, and the hub forwards the
//! resulting dataset to every member of the star.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, precondition, Result};
use crate::modular::{reduce, round_half_away};
use crate::regression::Transform;
use crate::rng::{substream, Stream};
use crate::setfam::{verify_family, Label, SetFamily};

/// Messages per unit slope the grid search needs to resolve the period count.
pub const MESSAGES_PER_SLOPE: u64 = 100;

/// Largest linearized input used for `log1p` data, keeping `exp` finite.
pub const LOG1P_INPUT_LIMIT: u64 = 700;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub sigma: f64,
    pub modulus: u64,
}

impl ChannelParams {
    pub fn new(sigma: f64, modulus: u64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(invalid(format!("sigma must be positive, got {sigma}")));
        }
        if modulus < 2 {
            return Err(invalid(format!("modulus must be at least 2, got {modulus}")));
        }
        Ok(ChannelParams { sigma, modulus })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FuncKind {
    Linear,
    Sqrt,
    Square,
    Cbrt,
    Log1p,
}

impl FuncKind {
    pub const ALL: [FuncKind; 5] = [FuncKind::Linear, FuncKind::Sqrt, FuncKind::Square, FuncKind::Cbrt, FuncKind::Log1p];

    /// The transform under which `f` becomes linear.
    pub fn transform(self) -> Transform {
        match self {
            FuncKind::Linear => Transform::Identity,
            FuncKind::Sqrt => Transform::Sqrt,
            FuncKind::Square => Transform::Square,
            FuncKind::Cbrt => Transform::Cbrt,
            FuncKind::Log1p => Transform::Log1p,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FuncKind::Linear => "linear",
            FuncKind::Sqrt => "sqrt",
            FuncKind::Square => "square",
            FuncKind::Cbrt => "cbrt",
            FuncKind::Log1p => "log1p",
        }
    }

    /// Upper end of the linearized input range for modulus `m`.
    pub fn input_limit(self, m: u64) -> u64 {
        match self {
            FuncKind::Log1p => m.min(LOG1P_INPUT_LIMIT),
            _ => m,
        }
    }
}

impl std::str::FromStr for FuncKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        FuncKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| invalid(format!("unknown function kind {s:?}")))
    }
}

/// `f(x) = beta0 + beta1 * g(x)` for the kind's linearizing map `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuncSpec {
    pub kind: FuncKind,
    pub beta0: i64,
    pub beta1: i64,
}

impl FuncSpec {
    pub fn new(kind: FuncKind, beta0: i64, beta1: i64) -> Result<Self> {
        if beta1 < 1 {
            return Err(invalid(format!("beta1 must be at least 1, got {beta1}")));
        }
        Ok(FuncSpec { kind, beta0, beta1 })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.beta0 as f64 + self.beta1 as f64 * self.kind.transform().apply(x)
    }
}

/// Stars over a party set; member sets are `k`-uniform and pairwise share at
/// most `t` parties. Hubs are implicit, one per star.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarTopology {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub stars: SetFamily,
}

impl StarTopology {
    pub fn new(stars: SetFamily, k: usize, t: usize) -> Result<Self> {
        let report = verify_family(&stars, k, t);
        if !report.k_uniform || !report.at_most_t {
            return Err(invalid(format!("stars are not {k}-uniform and at most {t}-intersecting")));
        }
        Ok(StarTopology { n: stars.universe().len(), k, t, stars })
    }

    /// One star whose parties are `1..=k`.
    pub fn single_star(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(invalid("a star needs at least one party"));
        }
        let stars = SetFamily::from_ints(k as i64, &[&(1..=k as i64).collect::<Vec<_>>()])?;
        Self::new(stars, k, k)
    }

    pub fn parties(&self, star_id: usize) -> Result<&[Label]> {
        self.stars
            .sets()
            .get(star_id)
            .map(|s| s.as_slice())
            .ok_or_else(|| invalid(format!("star {star_id} does not exist ({} stars)", self.stars.len())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coverage {
    /// Every residue of `[0, m)` is sent at least once.
    Complete,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: u64,
}

/// Generation record. Fitting code never reads it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub func: FuncKind,
    pub beta0: i64,
    pub beta1: i64,
    pub modulus: u64,
    pub sigma: f64,
    pub ell: usize,
    pub seed: u64,
    pub coverage: Coverage,
    pub star: usize,
}

/// Messages observed at a hub, sorted by `x` (ties keep arrival order).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    pub points: Vec<Point>,
    pub modulus: u64,
    pub meta: Option<DatasetMeta>,
}

impl Dataset {
    /// Sorts by `x` and checks every `y` is reduced.
    pub fn from_points(mut points: Vec<Point>, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(invalid("modulus must be at least 2"));
        }
        if let Some(p) = points.iter().find(|p| p.y >= modulus || !p.x.is_finite()) {
            return Err(invalid(format!("point ({}, {}) is not a reduced sample", p.x, p.y)));
        }
        points.sort_by(|a, b| a.x.total_cmp(&b.x));
        Ok(Dataset { points, modulus, meta: None })
    }

    pub fn ell(&self) -> usize {
        self.points.len()
    }
}

/// Sends `value` over the channel: `round(value + eps) mod m`, `eps ~ N(0, sigma^2)`.
pub fn transmit(value: f64, params: &ChannelParams, rng: &mut Stream) -> u64 {
    let eps = Normal::new(0.0, params.sigma).expect("sigma validated").sample(rng);
    transmit_with_noise(value, eps, params.modulus)
}

/// [`transmit`] with the noise realization supplied.
pub fn transmit_with_noise(value: f64, eps: f64, modulus: u64) -> u64 {
    reduce(round_half_away(value + eps), modulus)
}

fn party_stream(master_seed: u64, purpose: &str, star_id: usize, party: &Label, epoch: u64) -> Stream {
    substream(master_seed, &format!("{purpose}/star{star_id}/party{party}"), epoch)
}

/// Runs one message exchange inside a star and returns the hub's dataset.
///
/// Inputs are drawn so that the linearized coordinate `g(x)` is uniform on
/// `[0, U)` with `U = m` (`U = min(m, 700)` for `log1p`); for the linear kind
/// `x` is a uniform integer. Message `j` is sent by party `j mod k` over its
/// own channel.
pub fn simulate_exchange(
    topology: &StarTopology,
    star_id: usize,
    func: &FuncSpec,
    params: &ChannelParams,
    ell: usize,
    coverage: Coverage,
    master_seed: u64,
) -> Result<Dataset> {
    let parties = topology.parties(star_id)?;
    if func.beta1 < 1 {
        return Err(invalid("beta1 must be at least 1"));
    }
    let m = params.modulus;
    if (ell as u64) < MESSAGES_PER_SLOPE * func.beta1 as u64 {
        return Err(precondition(format!(
            "ell = {ell} is below {MESSAGES_PER_SLOPE} * beta1 = {}",
            MESSAGES_PER_SLOPE * func.beta1 as u64
        )));
    }
    let limit = func.kind.input_limit(m);
    if coverage == Coverage::Complete {
        if (ell as u64) < m {
            return Err(precondition(format!("complete coverage needs ell >= m, got {ell} < {m}")));
        }
        if limit < m {
            return Err(precondition(format!(
                "{} inputs reach only {limit} residues, complete coverage of {m} is impossible",
                func.kind.name()
            )));
        }
    }

    let t = func.kind.transform();
    let mut inputs = substream(master_seed, &format!("inputs/star{star_id}"), 0);
    let mut channels: Vec<Stream> =
        parties.iter().map(|p| party_stream(master_seed, "gaussian", star_id, p, 0)).collect();
    let noise = Normal::new(0.0, params.sigma).map_err(|e| invalid(e.to_string()))?;

    let mut points = Vec::with_capacity(ell);
    for j in 0..ell {
        let u = if coverage == Coverage::Complete && (j as u64) < m {
            j as f64
        } else if func.kind == FuncKind::Linear {
            inputs.random_range(0..m) as f64
        } else {
            inputs.random_range(0.0..limit as f64)
        };
        let x = t.invert(u);
        let eps = noise.sample(&mut channels[j % parties.len()]);
        points.push(Point { x, y: transmit_with_noise(func.eval(x), eps, m) });
    }
    let mut dataset = Dataset::from_points(points, m)?;
    dataset.meta = Some(DatasetMeta {
        func: func.kind,
        beta0: func.beta0,
        beta1: func.beta1,
        modulus: m,
        sigma: params.sigma,
        ell,
        seed: master_seed,
        coverage,
        star: star_id,
    });
    Ok(dataset)
}

/// `(r_1 xor ... xor r_k) mod m`.
pub fn combine_contributions(contributions: &[u64], modulus: u64) -> u64 {
    contributions.iter().fold(0, |acc, r| acc ^ r) % modulus
}

/// Full record of a seed agreement run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecretAgreement {
    pub secret: Vec<u64>,
    /// Accepted contributions per coordinate, in acceptance order.
    pub contributions: Vec<Vec<u64>>,
    /// Contributions discarded because they arrived in an occupied slot.
    pub discarded: usize,
}

/// Derives a star's secret in `Z_m^w` from the parties' random contributions.
///
/// Per coordinate every party sends some `r in 1..=ell` in a random arrival
/// slot. When several arrive in the same slot the hub keeps one at random and
/// the others resend. All channels of the star are reseeded after every
/// accepted contribution.
pub fn agree_secret(
    topology: &StarTopology,
    star_id: usize,
    w: usize,
    modulus: u64,
    ell: u64,
    master_seed: u64,
) -> Result<SecretAgreement> {
    let parties = topology.parties(star_id)?;
    let k = parties.len();
    if k < 2 {
        return Err(precondition("secret agreement needs at least two parties"));
    }
    if modulus < 2 || ell < 1 {
        return Err(invalid("need modulus >= 2 and ell >= 1"));
    }
    let mut epoch = 0u64;
    let reseed = |epoch: u64| -> Vec<Stream> {
        parties.iter().map(|p| party_stream(master_seed, "corrected", star_id, p, epoch)).collect()
    };
    let mut channels = reseed(epoch);
    let mut hub = substream(master_seed, &format!("hub/star{star_id}"), 0);

    let mut secret = Vec::with_capacity(w);
    let mut all_contributions = Vec::with_capacity(w);
    let mut discarded = 0;
    for _ in 0..w {
        let mut pending: Vec<usize> = (0..k).collect();
        let mut accepted = Vec::with_capacity(k);
        while !pending.is_empty() {
            let slots: Vec<u64> = pending.iter().map(|&p| channels[p].random_range(0..k as u64)).collect();
            let mut resend = Vec::new();
            for slot in 0..k as u64 {
                let arrivals: Vec<usize> =
                    pending.iter().zip(&slots).filter(|(_, &s)| s == slot).map(|(&p, _)| p).collect();
                if arrivals.is_empty() {
                    continue;
                }
                let keep = arrivals[hub.random_range(0..arrivals.len())];
                discarded += arrivals.len() - 1;
                resend.extend(arrivals.iter().copied().filter(|&p| p != keep));
                accepted.push(channels[keep].random_range(1..=ell));
                epoch += 1;
                channels = reseed(epoch);
            }
            resend.sort_unstable();
            pending = resend;
        }
        secret.push(combine_contributions(&accepted, modulus));
        all_contributions.push(accepted);
    }
    Ok(SecretAgreement { secret, contributions: all_contributions, discarded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::recenter;
    use crate::stats::{chi_square_rounded_gaussian, chi_square_uniform, std_dev};

    fn star(k: usize) -> StarTopology {
        StarTopology::single_star(k).unwrap()
    }

    #[test]
    fn transmit_examples() {
        assert_eq!(transmit_with_noise(5.0, 0.4, 12288), 5);
        assert_eq!(transmit_with_noise(12288.0 - 0.4, 0.3, 12288), 0);
        // m - 0.4 + 0.9 = m + 0.5 is a tie and rounds up to m + 1.
        assert_eq!(transmit_with_noise(12288.0 - 0.4, 0.9, 12288), 1);
        assert_eq!(transmit_with_noise(2.0, 0.5, 10), 3);
        assert_eq!(transmit_with_noise(0.0, -0.5, 10), 9);
    }

    #[test]
    fn transmit_noise_has_the_channel_spread() {
        let params = ChannelParams::new(30.0, 12288).unwrap();
        let mut rng = substream(11, "test", 0);
        let residues: Vec<f64> =
            (0..100_000).map(|_| recenter(transmit(0.0, &params, &mut rng) as i64, 12288) as f64).collect();
        let sd = std_dev(&residues);
        assert!((sd / 30.0 - 1.0).abs() < 0.02, "{sd}");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ChannelParams::new(0.0, 10).is_err());
        assert!(ChannelParams::new(1.0, 1).is_err());
        assert!(FuncSpec::new(FuncKind::Linear, 0, 0).is_err());
        let params = ChannelParams::new(1.0, 100).unwrap();
        let f = FuncSpec::new(FuncKind::Linear, 0, 5).unwrap();
        assert!(simulate_exchange(&star(2), 0, &f, &params, 499, Coverage::Random, 1).is_err());
        let f = FuncSpec::new(FuncKind::Linear, 0, 1).unwrap();
        assert!(simulate_exchange(&star(2), 0, &f, &params, 99, Coverage::Complete, 1).is_err());
        assert!(simulate_exchange(&star(2), 1, &f, &params, 200, Coverage::Random, 1).is_err());
        let log = FuncSpec::new(FuncKind::Log1p, 0, 1).unwrap();
        let wide = ChannelParams::new(1.0, 1000).unwrap();
        assert!(simulate_exchange(&star(2), 0, &log, &wide, 1000, Coverage::Complete, 1).is_err());
    }

    #[test]
    fn fig2_dataset_shape() {
        let params = ChannelParams::new(30.0, 12288).unwrap();
        let f = FuncSpec::new(FuncKind::Linear, 0, 546).unwrap();
        let d = simulate_exchange(&star(4), 0, &f, &params, 1 << 16, Coverage::Random, 5).unwrap();
        assert_eq!(d.ell(), 65536);
        assert!(d.points.windows(2).all(|w| w[0].x <= w[1].x));
        assert!(d.points.iter().all(|p| p.y < 12288 && p.x >= 0.0 && p.x < 12288.0 && p.x.fract() == 0.0));
    }

    #[test]
    fn complete_coverage_hits_every_residue() {
        let params = ChannelParams::new(0.01, 10).unwrap();
        let f = FuncSpec::new(FuncKind::Linear, 0, 1).unwrap();
        let d = simulate_exchange(&star(3), 0, &f, &params, 1000, Coverage::Complete, 9).unwrap();
        for r in 0..10 {
            assert!(d.points.iter().any(|p| p.x == r as f64), "residue {r}");
        }
        // With negligible noise every reply is f(x) itself.
        assert!(d.points.iter().all(|p| p.y as f64 == p.x));
    }

    #[test]
    fn sqrt_dataset_is_uniform_in_the_linearized_coordinate() {
        let params = ChannelParams::new(30.0, 12288).unwrap();
        let f = FuncSpec::new(FuncKind::Sqrt, 0, 240).unwrap();
        let d = simulate_exchange(&star(2), 0, &f, &params, 1 << 16, Coverage::Random, 3).unwrap();
        let mut counts = vec![0u64; 16];
        for p in &d.points {
            counts[(p.x.sqrt() / 12288.0 * 16.0) as usize] += 1;
        }
        assert!(chi_square_uniform(&counts).p_value > 0.001);
    }

    #[test]
    fn exchange_is_a_pure_function_of_its_seed() {
        let params = ChannelParams::new(30.0, 12288).unwrap();
        let f = FuncSpec::new(FuncKind::Cbrt, 0, 221).unwrap();
        let a = simulate_exchange(&star(3), 0, &f, &params, 30_000, Coverage::Random, 77).unwrap();
        let b = simulate_exchange(&star(3), 0, &f, &params, 30_000, Coverage::Random, 77).unwrap();
        let c = simulate_exchange(&star(3), 0, &f, &params, 30_000, Coverage::Random, 78).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.points, c.points);
    }

    #[test]
    fn residuals_follow_the_rounded_gaussian() {
        let m = 12288;
        let params = ChannelParams::new(30.0, m).unwrap();
        let f = FuncSpec::new(FuncKind::Linear, 0, 97).unwrap();
        let d = simulate_exchange(&star(3), 0, &f, &params, 20_000, Coverage::Random, 21).unwrap();
        let residuals: Vec<i64> =
            d.points.iter().map(|p| recenter(p.y as i64 - f.eval(p.x) as i64, m)).collect();
        let out = chi_square_rounded_gaussian(&residuals, 30.0, 120);
        assert!(out.p_value > 0.01, "{out:?}");
    }

    #[test]
    fn contribution_arithmetic() {
        assert_eq!(combine_contributions(&[6, 3], 10), 5);
        assert_eq!(combine_contributions(&[1, 1, 1], 7), 1);
    }

    #[test]
    fn agreement_is_deterministic_and_consistent() {
        let topo = star(4);
        let a = agree_secret(&topo, 0, 8, 12289, 1 << 16, 5).unwrap();
        let b = agree_secret(&topo, 0, 8, 12289, 1 << 16, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.secret.len(), 8);
        for (s, rs) in a.secret.iter().zip(&a.contributions) {
            assert_eq!(rs.len(), 4);
            assert!(rs.iter().all(|&r| (1..=1 << 16).contains(&r)));
            assert_eq!(*s, combine_contributions(rs, 12289));
        }
        assert!(agree_secret(&star(1), 0, 1, 7, 10, 1).is_err());
    }

    #[test]
    fn agreed_coordinates_are_uniform() {
        let topo = star(3);
        let m = 16;
        let mut counts = vec![0u64; m as usize];
        for seed in 0..4000 {
            for s in agree_secret(&topo, 0, 1, m, 1 << 16, seed).unwrap().secret {
                counts[s as usize] += 1;
            }
        }
        assert!(chi_square_uniform(&counts).p_value > 0.01);
    }
}
