//! Finite-shot measurement of the ancilla, with an optional closed-form
//! depolarizing and readout noise proxy.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{check_probability, QaeError, Result};
use crate::oracle::{build_a, build_q, GroverOperator, OracleSpec};
use crate::statevector::StateVector;

/// Outcome of measuring the ancilla of `Q^k A|0>` `shots` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShotRecord {
    pub k: u64,
    pub shots: u64,
    pub hits: u64,
}

impl ShotRecord {
    pub fn new(k: u64, shots: u64, hits: u64) -> Result<Self> {
        if shots == 0 {
            return Err(QaeError::domain("a shot record needs at least one shot"));
        }
        if hits > shots {
            return Err(QaeError::domain(format!("{hits} hits exceed {shots} shots")));
        }
        Ok(ShotRecord { k, shots, hits })
    }

    pub fn hit_rate(&self) -> f64 {
        self.hits as f64 / self.shots as f64
    }

    /// `A` and `A^-1` applications spent on this record.
    pub fn oracle_calls(&self) -> u64 {
        self.shots * (2 * self.k + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseSpec {
    /// Depolarizing probability per oracle application.
    pub p_depol: f64,
    /// Probability that the ancilla readout is flipped.
    pub p_readout: f64,
}

impl NoiseSpec {
    pub const NONE: NoiseSpec = NoiseSpec {
        p_depol: 0.0,
        p_readout: 0.0,
    };

    pub fn new(p_depol: f64, p_readout: f64) -> Result<Self> {
        let noise = NoiseSpec { p_depol, p_readout };
        noise.validate()?;
        Ok(noise)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("p_depol", self.p_depol)?;
        check_probability("p_readout", self.p_readout)
    }

    pub fn is_noiseless(&self) -> bool {
        self.p_depol == 0.0 && self.p_readout == 0.0
    }
}

/// Precompiled `A|0>` and `Q` for repeated probability queries.
#[derive(Debug, Clone)]
pub struct GroverSimulator {
    prepared: StateVector,
    q: GroverOperator,
}

impl GroverSimulator {
    pub fn new(spec: &OracleSpec) -> Result<Self> {
        let prepared = build_a(spec)?.run(&StateVector::zero(spec.n_qubits())?)?;
        Ok(GroverSimulator {
            prepared,
            q: build_q(spec)?,
        })
    }

    /// `Q^k A|0>`.
    pub fn state(&self, k: u64) -> Result<StateVector> {
        let mut s = self.prepared.clone();
        self.q.apply_power(&mut s, k)?;
        Ok(s)
    }

    pub fn probability(&self, k: u64) -> Result<f64> {
        Ok(self.state(k)?.prob_ancilla_one().clamp(0.0, 1.0))
    }

    /// Probabilities for several powers, simulating each power once in
    /// ascending order.
    pub fn probabilities(&self, powers: &[u64]) -> Result<Vec<f64>> {
        let mut order: Vec<usize> = (0..powers.len()).collect();
        order.sort_by_key(|&i| powers[i]);
        let mut out = vec![0.0; powers.len()];
        let mut state = self.prepared.clone();
        let mut at = 0;
        for i in order {
            self.q.apply_power(&mut state, powers[i] - at)?;
            at = powers[i];
            out[i] = state.prob_ancilla_one().clamp(0.0, 1.0);
        }
        Ok(out)
    }
}

/// Probability of reading `|1>` after `Q^k A|0>`, by full simulation.
pub fn exact_probability(spec: &OracleSpec, k: u64) -> Result<f64> {
    GroverSimulator::new(spec)?.probability(k)
}

/// Draws `hits ~ Binomial(shots, p)` from a generator seeded with `seed`.
pub fn sample_shots(p: f64, shots: u64, k: u64, seed: u64) -> Result<ShotRecord> {
    check_probability("p", p)?;
    if shots == 0 {
        return Err(QaeError::domain("shots must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Binomial::new(shots, p).map_err(|e| QaeError::domain(e.to_string()))?;
    ShotRecord::new(k, shots, dist.sample(&mut rng))
}

/// Depolarizing contraction toward 1/2 over the `2k + 1` oracle applications
/// of `Q^k A`, followed by a symmetric readout flip.
pub fn apply_noise(p: f64, k: u64, noise: &NoiseSpec) -> f64 {
    let depth = (2 * k + 1) as f64;
    let lambda = (1.0 - noise.p_depol).powf(depth);
    let mixed = lambda * p + (1.0 - lambda) / 2.0;
    let read = mixed * (1.0 - noise.p_readout) + (1.0 - mixed) * noise.p_readout;
    read.clamp(0.0, 1.0)
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent stream seed from a parent seed and a stream index.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    mix64(parent ^ mix64(index))
}
