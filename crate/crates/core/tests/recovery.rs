//! Slope recovery over random linear targets.

use rand::Rng;
use sskh_core::channel::{simulate_exchange, ChannelParams, Coverage, FuncKind, FuncSpec, StarTopology};
use sskh_core::regression::{build_error_oracle, fit_hypothesis};
use sskh_core::rng::substream;

const ELL: usize = 1 << 16;

#[test]
fn grid_search_recovers_random_slopes() {
    let mut rng = substream(11, "recovery/params", 0);
    let topo = StarTopology::single_star(3).unwrap();
    let max_slope = ELL.div_ceil(100) as i64;
    let mut misses = Vec::new();
    for trial in 0..50u64 {
        let m = rng.random_range(4000..20000u64);
        let beta1 = rng.random_range(2..=max_slope);
        let sigma = rng.random_range(1.0..=m as f64 / 40.0);
        let f = FuncSpec::new(FuncKind::Linear, 0, beta1).unwrap();
        let params = ChannelParams::new(sigma, m).unwrap();
        let d = simulate_exchange(&topo, 0, &f, &params, ELL, Coverage::Random, trial).unwrap();
        let h = fit_hypothesis(&d).unwrap();
        if (h.beta1_hat - beta1 as f64).abs() / beta1 as f64 > 0.02 {
            misses.push((m, beta1, sigma, h.beta1_hat));
        }
    }
    assert!(misses.len() <= 2, "{} of 50 missed: {misses:?}", misses.len());
}

#[test]
fn oracle_build_is_deterministic() {
    let topo = StarTopology::single_star(2).unwrap();
    let f = FuncSpec::new(FuncKind::Cbrt, 0, 40).unwrap();
    let params = ChannelParams::new(20.0, 7001).unwrap();
    let d = simulate_exchange(&topo, 0, &f, &params, 8000, Coverage::Random, 4).unwrap();
    let d = sskh_core::regression::transform_dataset(&d, FuncKind::Cbrt.transform()).unwrap();
    let h = fit_hypothesis(&d).unwrap();
    assert_eq!(build_error_oracle(&d, &h).unwrap(), build_error_oracle(&d, &h).unwrap());
}
