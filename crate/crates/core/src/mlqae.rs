//! Maximum likelihood amplitude estimation over an exponentially growing
//! schedule of Grover powers.

use std::f64::consts::FRAC_PI_2;

use crate::error::{QaeError, Result};
use crate::estimate::EstimateResult;
use crate::oracle::OracleSpec;
use crate::sampler::{apply_noise, derive_seed, sample_shots, GroverSimulator, NoiseSpec, ShotRecord};

/// Floor applied to `sin^2` and `cos^2` before taking logarithms.
pub const LOG_FLOOR: f64 = 1e-300;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlqaeConfig {
    /// Schedule depth; circuits use powers `0, 1, 2, 4, ..., 2^(m-1)`.
    pub m: u32,
    pub shots_per_circuit: u64,
    /// Coarse grid size over `[0, pi/2]`.
    pub grid_points: usize,
    /// Golden-section iterations around the best grid point.
    pub refine_iters: usize,
}

impl Default for MlqaeConfig {
    fn default() -> Self {
        MlqaeConfig {
            m: 3,
            shots_per_circuit: 1024,
            grid_points: 10_000,
            refine_iters: 60,
        }
    }
}

impl MlqaeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m > 62 {
            return Err(QaeError::config(format!("schedule depth {} is too large", self.m)));
        }
        if self.shots_per_circuit == 0 {
            return Err(QaeError::config("shots per circuit must be positive"));
        }
        if self.grid_points < 16 {
            return Err(QaeError::config(format!(
                "grid of {} points is too coarse (minimum 16)",
                self.grid_points
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlqaeResult {
    pub theta_hat: f64,
    pub a_hat: f64,
    pub oracle_calls: u64,
    pub records: Vec<ShotRecord>,
}

impl From<&MlqaeResult> for EstimateResult {
    fn from(r: &MlqaeResult) -> Self {
        EstimateResult {
            a_hat: r.a_hat,
            theta_hat: r.theta_hat,
            a_interval: None,
            oracle_calls: r.oracle_calls,
            converged: true,
        }
    }
}

/// Grover powers of the exponential schedule: `[0]` followed by `2^0 .. 2^(m-1)`.
pub fn eis_schedule(m: u32) -> Vec<u64> {
    std::iter::once(0).chain((0..m).map(|e| 1u64 << e)).collect()
}

/// `sum_k h_k ln sin^2((2m_k+1) theta) + (N_k - h_k) ln cos^2((2m_k+1) theta)`.
pub fn log_likelihood(records: &[ShotRecord], theta: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(QaeError::domain(format!("theta {theta} outside [0, pi/2]")));
    }
    Ok(log_likelihood_unchecked(records, theta))
}

fn log_likelihood_unchecked(records: &[ShotRecord], theta: f64) -> f64 {
    records
        .iter()
        .map(|r| {
            let angle = (2 * r.k + 1) as f64 * theta;
            let (s, c) = angle.sin_cos();
            let mut ll = 0.0;
            if r.hits > 0 {
                ll += r.hits as f64 * (s * s).clamp(LOG_FLOOR, 1.0).ln();
            }
            if r.hits < r.shots {
                ll += (r.shots - r.hits) as f64 * (c * c).clamp(LOG_FLOOR, 1.0).ln();
            }
            ll
        })
        .sum()
}

/// Maximizes the log-likelihood on `[0, pi/2]`: coarse grid, then
/// golden-section search between the neighbours of the best grid point.
pub fn maximize_likelihood(records: &[ShotRecord], grid_points: usize, refine_iters: usize) -> f64 {
    let step = FRAC_PI_2 / (grid_points - 1) as f64;
    let ll = |t: f64| log_likelihood_unchecked(records, t);
    let (best_i, best_ll) = (0..grid_points)
        .map(|i| (i, ll(i as f64 * step)))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });

    let mut lo = best_i.saturating_sub(1) as f64 * step;
    let mut hi = ((best_i + 1).min(grid_points - 1) as f64 * step).min(FRAC_PI_2);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (ll(x1), ll(x2));
    for _ in 0..refine_iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = ll(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = ll(x1);
        }
    }
    let refined = 0.5 * (lo + hi);
    if ll(refined) >= best_ll {
        refined
    } else {
        best_i as f64 * step
    }
}

/// Runs every circuit of the schedule, samples shots, and returns the
/// maximum likelihood estimate.
pub fn estimate(spec: &OracleSpec, cfg: &MlqaeConfig, noise: &NoiseSpec, seed: u64) -> Result<MlqaeResult> {
    cfg.validate()?;
    noise.validate()?;
    let powers = eis_schedule(cfg.m);
    let probs = GroverSimulator::new(spec)?.probabilities(&powers)?;
    let records = powers
        .iter()
        .zip(&probs)
        .enumerate()
        .map(|(i, (&k, &p))| {
            sample_shots(
                apply_noise(p, k, noise),
                cfg.shots_per_circuit,
                k,
                derive_seed(seed, i as u64),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let theta_hat = maximize_likelihood(&records, cfg.grid_points, cfg.refine_iters);
    Ok(MlqaeResult {
        theta_hat,
        a_hat: theta_hat.sin().powi(2),
        oracle_calls: records.iter().map(ShotRecord::oracle_calls).sum(),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules() {
        assert_eq!(eis_schedule(0), vec![0]);
        assert_eq!(eis_schedule(3), vec![0, 1, 2, 4]);
        assert_eq!(eis_schedule(5), vec![0, 1, 2, 4, 8, 16]);
    }

    #[test]
    fn all_hits_peak_at_half_pi() {
        let r = [ShotRecord::new(0, 100, 100).unwrap()];
        assert!(log_likelihood(&r, FRAC_PI_2).unwrap().abs() < 1e-12);
        let t = maximize_likelihood(&r, 1000, 60);
        // sin^2 is flat to double precision within ~1e-8 of pi/2.
        assert!((t - FRAC_PI_2).abs() < 1e-7);
        assert!(log_likelihood(&r, 1.5).unwrap() < log_likelihood(&r, t).unwrap());
    }

    #[test]
    fn no_hits_peak_at_zero() {
        let r = [ShotRecord::new(0, 100, 0).unwrap()];
        assert_eq!(log_likelihood(&r, 0.0).unwrap(), 0.0);
        assert!(maximize_likelihood(&r, 1000, 60) < 1e-9);
    }

    #[test]
    fn theta_outside_domain() {
        let r = [ShotRecord::new(0, 10, 3).unwrap()];
        assert!(log_likelihood(&r, -0.01).is_err());
        assert!(log_likelihood(&r, 1.6).is_err());
    }

    #[test]
    fn single_record_maximizer_is_arcsin_of_rate() {
        let r = [ShotRecord::new(0, 1000, 250).unwrap()];
        let t = maximize_likelihood(&r, 10_000, 60);
        assert!((t - 0.25f64.sqrt().asin()).abs() < 1e-8);
    }

    #[test]
    fn oracle_calls_for_depth_three() {
        let spec = OracleSpec::sin2_quarter_pi(2).unwrap();
        let cfg = MlqaeConfig {
            shots_per_circuit: 37,
            ..MlqaeConfig::default()
        };
        let r = estimate(&spec, &cfg, &NoiseSpec::NONE, 1).unwrap();
        assert_eq!(r.oracle_calls, 18 * 37);
        assert_eq!(r.records.len(), 4);
        assert!((r.a_hat - r.theta_hat.sin().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn invalid_config() {
        let spec = OracleSpec::sin2_quarter_pi(2).unwrap();
        let bad = MlqaeConfig {
            grid_points: 8,
            ..MlqaeConfig::default()
        };
        assert!(estimate(&spec, &bad, &NoiseSpec::NONE, 0).is_err());
        let bad = MlqaeConfig {
            shots_per_circuit: 0,
            ..MlqaeConfig::default()
        };
        assert!(estimate(&spec, &bad, &NoiseSpec::NONE, 0).is_err());
    }
}
