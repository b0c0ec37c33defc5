//! Shot-count sweeps with repeated trials, and their CSV output.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;

use crate::error::{QaeError, Result};
use crate::estimate::{Algorithm, EstimateResult};
use crate::integrator::{relative_error, true_amplitude};
use crate::iqae::{self, IqaeConfig};
use crate::mlqae::{self, MlqaeConfig};
use crate::oracle::OracleSpec;
use crate::sampler::{derive_seed, NoiseSpec};

pub const CSV_HEADER: [&str; 9] = [
    "algorithm",
    "n",
    "shots",
    "trial",
    "a_hat",
    "rel_error",
    "oracle_calls",
    "converged",
    "seed",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    /// Domain qubits of the `sin^2` benchmark.
    pub n: u32,
    /// Shots per circuit (MLQAE) or per round (IQAE).
    pub shots_list: Vec<u64>,
    pub trials: u32,
    pub m: u32,
    pub epsilon: f64,
    pub alpha_conf: f64,
    pub noise: NoiseSpec,
    pub seed: u64,
    /// Worker threads; 0 lets the thread pool decide.
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            algorithm: Algorithm::Mlqae,
            n: 2,
            shots_list: (4..=10).map(|e| 1u64 << e).collect(),
            trials: 30,
            m: 3,
            epsilon: 0.01,
            alpha_conf: 0.05,
            noise: NoiseSpec::NONE,
            seed: 0,
            workers: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(QaeError::Usage("trials must be at least 1".into()));
        }
        if self.shots_list.is_empty() || self.shots_list.contains(&0) {
            return Err(QaeError::Usage(
                "shot counts must be a non-empty list of positive integers".into(),
            ));
        }
        self.noise.validate()?;
        OracleSpec::sin2_quarter_pi(self.n)?;
        self.mlqae_config(1).validate()?;
        self.iqae_config(1).validate()
    }

    pub fn mlqae_config(&self, shots: u64) -> MlqaeConfig {
        MlqaeConfig {
            m: self.m,
            shots_per_circuit: shots,
            ..MlqaeConfig::default()
        }
    }

    pub fn iqae_config(&self, shots: u64) -> IqaeConfig {
        IqaeConfig {
            epsilon: self.epsilon,
            alpha_conf: self.alpha_conf,
            shots_per_round: shots,
            ..IqaeConfig::default()
        }
    }

    /// Seed of one row, a function of the row's identity only.
    pub fn row_seed(&self, shots: u64, trial: u32) -> u64 {
        let s = derive_seed(self.seed, self.algorithm as u64);
        let s = derive_seed(s, self.n as u64);
        let s = derive_seed(s, shots);
        derive_seed(s, trial as u64)
    }
}

/// Runs the configured estimator once.
pub fn run_single(
    algorithm: Algorithm,
    spec: &OracleSpec,
    cfg: &ExperimentConfig,
    shots: u64,
    seed: u64,
) -> Result<EstimateResult> {
    match algorithm {
        Algorithm::Mlqae => mlqae::estimate(spec, &cfg.mlqae_config(shots), &cfg.noise, seed).map(|r| (&r).into()),
        Algorithm::Iqae => iqae::estimate(spec, &cfg.iqae_config(shots), &cfg.noise, seed).map(|r| (&r).into()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub algorithm: Algorithm,
    pub n: u32,
    pub shots: u64,
    pub trial: u32,
    pub a_hat: f64,
    pub rel_error: f64,
    pub oracle_calls: u64,
    pub converged: bool,
    pub seed: u64,
}

impl SweepRow {
    fn from_estimate(cfg: &ExperimentConfig, shots: u64, trial: u32, seed: u64, est: Result<EstimateResult>) -> Self {
        let truth = true_amplitude(cfg.n);
        let (a_hat, rel_error, oracle_calls, converged) = match est {
            Ok(e) => (
                e.a_hat,
                relative_error(e.a_hat, truth).unwrap_or(f64::NAN),
                e.oracle_calls,
                e.converged,
            ),
            Err(_) => (f64::NAN, f64::NAN, 0, false),
        };
        SweepRow {
            algorithm: cfg.algorithm,
            n: cfg.n,
            shots,
            trial,
            a_hat,
            rel_error,
            oracle_calls,
            converged,
            seed,
        }
    }

    fn csv_fields(&self) -> [String; 9] {
        [
            self.algorithm.to_string(),
            self.n.to_string(),
            self.shots.to_string(),
            self.trial.to_string(),
            self.a_hat.to_string(),
            self.rel_error.to_string(),
            self.oracle_calls.to_string(),
            self.converged.to_string(),
            self.seed.to_string(),
        ]
    }
}

/// One row per `(shots, trial)`, ordered by position in `shots_list` then
/// trial index.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let spec = OracleSpec::sin2_quarter_pi(cfg.n)?;
    let tasks: Vec<(u64, u32)> = cfg
        .shots_list
        .iter()
        .flat_map(|&s| (0..cfg.trials).map(move |t| (s, t)))
        .collect();
    let run = |&(shots, trial): &(u64, u32)| {
        let seed = cfg.row_seed(shots, trial);
        let est = run_single(cfg.algorithm, &spec, cfg, shots, seed);
        SweepRow::from_estimate(cfg, shots, trial, seed, est)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| QaeError::config(format!("thread pool: {e}")))?;
    Ok(pool.install(|| tasks.par_iter().map(run).collect()))
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| QaeError::Output(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for row in rows {
        w.write_record(row.csv_fields()).map_err(io)?;
    }
    w.flush().map_err(|e| QaeError::Output(e.to_string()))
}

pub fn to_csv_string(rows: &[SweepRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| QaeError::Output(e.to_string()))
}

/// Per `(algorithm, n, shots)` aggregate, the quantities plotted against
/// shot count and oracle calls.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algorithm: Algorithm,
    pub n: u32,
    pub shots: u64,
    pub trials: usize,
    pub mean_a_hat: f64,
    pub mean_rel_error: f64,
    pub max_rel_error: f64,
    pub mean_oracle_calls: f64,
    pub unconverged: usize,
}

pub fn summarize(rows: &[SweepRow]) -> Result<Vec<SummaryRow>> {
    if rows.is_empty() {
        return Err(QaeError::Usage("cannot summarize an empty sweep".into()));
    }
    let mut groups: BTreeMap<(Algorithm, u32, u64), Vec<&SweepRow>> = BTreeMap::new();
    for r in rows {
        groups.entry((r.algorithm, r.n, r.shots)).or_default().push(r);
    }
    Ok(groups
        .into_iter()
        .map(|((algorithm, n, shots), g)| {
            let count = g.len() as f64;
            SummaryRow {
                algorithm,
                n,
                shots,
                trials: g.len(),
                mean_a_hat: g.iter().map(|r| r.a_hat).sum::<f64>() / count,
                mean_rel_error: g.iter().map(|r| r.rel_error).sum::<f64>() / count,
                max_rel_error: g.iter().map(|r| r.rel_error).fold(f64::NEG_INFINITY, f64::max),
                mean_oracle_calls: g.iter().map(|r| r.oracle_calls as f64).sum::<f64>() / count,
                unconverged: g.iter().filter(|r| !r.converged).count(),
            }
        })
        .collect())
}
