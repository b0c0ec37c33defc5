//! Iterative amplitude estimation.
//!
//! Each round picks the largest Grover power `k` for which the current
//! confidence interval `[theta_l, theta_u]`, scaled by `4k + 2`, sits inside a
//! single half-plane `[j*pi, (j+1)*pi]`. On such a range `cos` is monotone, so
//! a confidence interval on the measured probability
//! `(1 - cos((4k+2) theta)) / 2` maps back to an interval on `theta`.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};

use statrs::distribution::{Beta, ContinuousCDF};

use crate::error::{check_probability, QaeError, Result};
use crate::estimate::EstimateResult;
use crate::oracle::OracleSpec;
use crate::sampler::{apply_noise, derive_seed, sample_shots, GroverSimulator, NoiseSpec, ShotRecord};

/// Hard ceiling on the Grover power when nothing else bounds the search.
pub const MAX_POWER: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IqaeConfig {
    /// Target half-width of the final interval on `a`.
    pub epsilon: f64,
    /// Total failure probability, split evenly over `max_rounds`.
    pub alpha_conf: f64,
    pub shots_per_round: u64,
    pub max_rounds: usize,
    /// Largest allowed ratio `(4k_next + 2) / (4k_prev + 2)` between
    /// consecutive powers. `f64::INFINITY` disables the cap.
    pub max_growth: f64,
}

impl Default for IqaeConfig {
    fn default() -> Self {
        IqaeConfig {
            epsilon: 0.01,
            alpha_conf: 0.05,
            shots_per_round: 1024,
            max_rounds: 50,
            max_growth: 5.0,
        }
    }
}

impl IqaeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 0.5) {
            return Err(QaeError::config(format!("epsilon {} outside (0, 0.5]", self.epsilon)));
        }
        if !(self.alpha_conf > 0.0 && self.alpha_conf < 1.0) {
            return Err(QaeError::config(format!(
                "alpha_conf {} outside (0, 1)",
                self.alpha_conf
            )));
        }
        if self.shots_per_round == 0 {
            return Err(QaeError::config("shots per round must be positive"));
        }
        if self.max_rounds == 0 {
            return Err(QaeError::config("max_rounds must be positive"));
        }
        if self.max_growth.is_nan() || self.max_growth < 3.0 {
            return Err(QaeError::config(format!(
                "max_growth {} must be at least 3",
                self.max_growth
            )));
        }
        Ok(())
    }

    pub fn alpha_round(&self) -> f64 {
        self.alpha_conf / self.max_rounds as f64
    }

    /// Largest power reachable from `k_prev` under the growth cap.
    pub fn power_limit(&self, k_prev: u64) -> u64 {
        if self.max_growth.is_infinite() {
            return MAX_POWER;
        }
        let scaled = self.max_growth * (4 * k_prev + 2) as f64;
        (((scaled - 2.0) / 4.0).floor() as u64).clamp(k_prev, MAX_POWER)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfPlane {
    /// Scaled angle in `[2j*pi, (2j+1)*pi]`.
    Upper,
    /// Scaled angle in `[(2j+1)*pi, (2j+2)*pi]`.
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NextPower {
    pub k: u64,
    pub half_plane: HalfPlane,
}

/// Index `j` of the half-plane `[j*pi, (j+1)*pi]` containing
/// `(4k+2) * [theta_l, theta_u]`, if there is one.
fn half_plane_index(k: u64, theta_l: f64, theta_u: f64) -> Option<u64> {
    let scale = (4 * k + 2) as f64;
    let (lo, hi) = (scale * theta_l, scale * theta_u);
    if hi - lo > PI {
        return None;
    }
    let j = (lo / PI).floor();
    (hi <= (j + 1.0) * PI).then_some(j as u64)
}

fn plane_of(j: u64) -> HalfPlane {
    if j.is_multiple_of(2) {
        HalfPlane::Upper
    } else {
        HalfPlane::Lower
    }
}

/// Largest `k >= k_prev` whose scaled interval fits one half-plane.
pub fn find_next_k(theta_l: f64, theta_u: f64, k_prev: u64) -> NextPower {
    find_next_k_capped(theta_l, theta_u, k_prev, MAX_POWER)
}

/// As [`find_next_k`], but never returns a power above `k_limit`.
pub fn find_next_k_capped(theta_l: f64, theta_u: f64, k_prev: u64, k_limit: u64) -> NextPower {
    let width = theta_u - theta_l;
    // (4k + 2) * width <= pi bounds the search from above.
    let k_width = if width > 0.0 {
        ((PI / width - 2.0) / 4.0).floor().max(0.0).min(MAX_POWER as f64) as u64
    } else {
        MAX_POWER
    };
    let top = k_width.min(k_limit);
    let mut k = top;
    while k > k_prev {
        if let Some(j) = half_plane_index(k, theta_l, theta_u) {
            return NextPower {
                k,
                half_plane: plane_of(j),
            };
        }
        k -= 1;
    }
    let j = half_plane_index(k_prev, theta_l, theta_u)
        .unwrap_or_else(|| ((4 * k_prev + 2) as f64 * theta_l / PI).floor() as u64);
    NextPower {
        k: k_prev,
        half_plane: plane_of(j),
    }
}

/// Clopper-Pearson interval on the success probability of `record` at
/// confidence `1 - alpha`.
pub fn confidence_interval(record: &ShotRecord, alpha: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(QaeError::domain(format!(
            "confidence level alpha {alpha} outside (0, 1)"
        )));
    }
    let (h, n) = (record.hits as f64, record.shots as f64);
    let lo = if record.hits == 0 {
        0.0
    } else {
        beta_quantile(h, n - h + 1.0, alpha / 2.0)?
    };
    let hi = if record.hits == record.shots {
        1.0
    } else {
        beta_quantile(h + 1.0, n - h, 1.0 - alpha / 2.0)?
    };
    Ok((lo.min(record.hit_rate()), hi.max(record.hit_rate())))
}

fn beta_quantile(a: f64, b: f64, q: f64) -> Result<f64> {
    let dist = Beta::new(a, b).map_err(|e| QaeError::domain(e.to_string()))?;
    Ok(dist.inverse_cdf(q).clamp(0.0, 1.0))
}

/// Maps a probability interval measured after `Q^k A` back to `theta`,
/// given that `(4k+2) theta` lies in half-plane `j`.
fn theta_bounds(k: u64, j: u64, p_lo: f64, p_hi: f64) -> (f64, f64) {
    let scale = (4 * k + 2) as f64;
    let base = j as f64 * PI;
    let acos = |x: f64| x.clamp(-1.0, 1.0).acos();
    let (w_lo, w_hi) = match plane_of(j) {
        HalfPlane::Upper => (acos(1.0 - 2.0 * p_lo), acos(1.0 - 2.0 * p_hi)),
        HalfPlane::Lower => (acos(2.0 * p_hi - 1.0), acos(2.0 * p_lo - 1.0)),
    };
    ((base + w_lo) / scale, (base + w_hi) / scale)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IqaeRound {
    pub k: u64,
    pub half_plane: HalfPlane,
    /// Shots taken in this round alone.
    pub record: ShotRecord,
    /// Interval after this round's update.
    pub theta_l: f64,
    pub theta_u: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IqaeResult {
    pub a_hat: f64,
    pub theta_interval: (f64, f64),
    pub a_interval: (f64, f64),
    pub oracle_calls: u64,
    pub rounds: Vec<IqaeRound>,
    pub converged: bool,
}

impl IqaeResult {
    pub fn max_power(&self) -> u64 {
        self.rounds.iter().map(|r| r.k).max().unwrap_or(0)
    }
}

impl From<&IqaeResult> for EstimateResult {
    fn from(r: &IqaeResult) -> Self {
        EstimateResult {
            a_hat: r.a_hat,
            theta_hat: 0.5 * (r.theta_interval.0 + r.theta_interval.1),
            a_interval: Some(r.a_interval),
            oracle_calls: r.oracle_calls,
            converged: r.converged,
        }
    }
}

fn a_width(theta_l: f64, theta_u: f64) -> f64 {
    theta_u.sin().powi(2) - theta_l.sin().powi(2)
}

/// Runs rounds until the interval on `a` is no wider than `2 * epsilon` or
/// `max_rounds` is reached. Hits from consecutive rounds at the same power
/// are pooled before the interval is computed.
pub fn estimate(spec: &OracleSpec, cfg: &IqaeConfig, noise: &NoiseSpec, seed: u64) -> Result<IqaeResult> {
    cfg.validate()?;
    noise.validate()?;
    let sim = GroverSimulator::new(spec)?;
    let alpha_round = cfg.alpha_round();

    let (mut theta_l, mut theta_u) = (0.0, FRAC_PI_2);
    let mut k = 0u64;
    let mut pooled = (0u64, 0u64);
    let mut probs: HashMap<u64, f64> = HashMap::new();
    let mut rounds = Vec::new();
    let mut converged = false;

    loop {
        if a_width(theta_l, theta_u) <= 2.0 * cfg.epsilon {
            converged = true;
            break;
        }
        if rounds.len() >= cfg.max_rounds {
            break;
        }
        let next = find_next_k_capped(theta_l, theta_u, k, cfg.power_limit(k));
        if next.k != k || rounds.is_empty() {
            pooled = (0, 0);
        }
        k = next.k;
        let p = match probs.get(&k) {
            Some(&p) => p,
            None => {
                let p = sim.probability(k)?;
                probs.insert(k, p);
                p
            }
        };
        let p_noisy = apply_noise(p, k, noise);
        check_probability("noisy probability", p_noisy)?;
        let record = sample_shots(p_noisy, cfg.shots_per_round, k, derive_seed(seed, rounds.len() as u64))?;
        pooled = (pooled.0 + record.hits, pooled.1 + record.shots);

        let j = half_plane_index(k, theta_l, theta_u).expect("selected power keeps the interval inside one half-plane");
        debug_assert_eq!(plane_of(j), next.half_plane);
        let (p_lo, p_hi) = confidence_interval(&ShotRecord::new(k, pooled.1, pooled.0)?, alpha_round)?;
        let (cand_l, cand_u) = theta_bounds(k, j, p_lo, p_hi);
        let (new_l, new_u) = (theta_l.max(cand_l), theta_u.min(cand_u));
        if new_l <= new_u {
            theta_l = new_l;
            theta_u = new_u;
        } else if cand_l > theta_u {
            theta_l = theta_u;
        } else {
            theta_u = theta_l;
        }
        rounds.push(IqaeRound {
            k,
            half_plane: next.half_plane,
            record,
            theta_l,
            theta_u,
        });
    }

    let a_interval = (theta_l.sin().powi(2), theta_u.sin().powi(2));
    Ok(IqaeResult {
        a_hat: (0.5 * (theta_l + theta_u)).sin().powi(2),
        theta_interval: (theta_l, theta_u),
        a_interval,
        oracle_calls: rounds.iter().map(|r| r.record.oracle_calls()).sum(),
        rounds,
        converged,
    })
}
