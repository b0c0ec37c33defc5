mod common;

use proptest::prelude::*;
use qae_core::oracle::OracleSpec;
use qae_core::sampler::{apply_noise, derive_seed, exact_probability, sample_shots, NoiseSpec};

use common::amplified;

#[test]
fn exact_probabilities_of_benchmark_circuits() {
    let two = OracleSpec::sin2_quarter_pi(2).unwrap();
    let three = OracleSpec::sin2_quarter_pi(3).unwrap();
    let p0 = exact_probability(&two, 0).unwrap();
    assert!((p0 - 0.179636).abs() < 1e-6);
    assert!((exact_probability(&three, 0).unwrap() - 0.181178).abs() < 1e-6);
    assert!((exact_probability(&two, 1).unwrap() - amplified(p0, 1)).abs() < 1e-10);
}

#[test]
fn hit_rates_pass_a_four_sigma_binomial_bound() {
    for &p in &[0.02, 0.179636, 0.5, 0.93] {
        let shots = 256u64;
        let trials = 1000u64;
        let total: u64 = (0..trials)
            .map(|t| sample_shots(p, shots, 0, derive_seed(11, t)).unwrap().hits)
            .sum();
        let n = (shots * trials) as f64;
        let rate = total as f64 / n;
        let sigma = (p * (1.0 - p) / n).sqrt();
        assert!((rate - p).abs() <= 4.0 * sigma, "p={p} rate={rate}");
    }
}

proptest! {
    #[test]
    fn sampling_is_deterministic_per_seed(p in 0.0..=1.0f64, shots in 1u64..5000, seed: u64) {
        prop_assert_eq!(sample_shots(p, shots, 3, seed).unwrap(), sample_shots(p, shots, 3, seed).unwrap());
    }

    #[test]
    fn noise_moves_probabilities_toward_one_half(
        p in 0.0..0.4999f64,
        d1 in 0.0..0.2f64,
        dd in 0.001..0.2f64,
        k in 0u64..6,
    ) {
        let weak = apply_noise(p, k, &NoiseSpec::new(d1, 0.0).unwrap());
        let strong = apply_noise(p, k, &NoiseSpec::new(d1 + dd, 0.0).unwrap());
        prop_assert!(weak < strong && strong <= 0.5);
        let deeper = apply_noise(p, k + 1, &NoiseSpec::new(d1 + dd, 0.0).unwrap());
        prop_assert!(deeper > strong && deeper <= 0.5);
    }

    #[test]
    fn noisy_probability_stays_in_unit_interval(
        p in 0.0..=1.0f64,
        d in 0.0..=1.0f64,
        r in 0.0..=1.0f64,
        k in 0u64..50,
    ) {
        let out = apply_noise(p, k, &NoiseSpec::new(d, r).unwrap());
        prop_assert!((0.0..=1.0).contains(&out));
    }
}
