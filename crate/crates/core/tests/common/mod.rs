//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use qae_core::iqae::HalfPlane;
use qae_core::mlqae::eis_schedule;
use qae_core::oracle::OracleSpec;
use qae_core::sampler::{GroverSimulator, ShotRecord};
use qae_core::statevector::{apply_gate, Gate, StateVector};

const TWO_PI: f64 = 2.0 * PI;

/// Closed-form probability after `m` Grover steps.
pub fn amplified(a: f64, m: u64) -> f64 {
    ((2 * m + 1) as f64 * a.sqrt().asin()).sin().powi(2)
}

/// Half-plane of `(4k+2) [l, u]` judged on the angles reduced mod 2pi.
pub fn scan_plane(k: u64, l: f64, u: f64) -> Option<HalfPlane> {
    let scale = (4 * k + 2) as f64;
    if scale * (u - l) > PI {
        return None;
    }
    let (a, b) = ((scale * l).rem_euclid(TWO_PI), (scale * u).rem_euclid(TWO_PI));
    if a > b {
        return None;
    }
    if b <= PI {
        Some(HalfPlane::Upper)
    } else if a >= PI {
        Some(HalfPlane::Lower)
    } else {
        None
    }
}

/// Exhaustive scan over every power up to `limit`.
pub fn brute_force_next_k(l: f64, u: f64, k_prev: u64, limit: u64) -> (u64, Option<HalfPlane>) {
    (k_prev + 1..=limit)
        .rev()
        .find_map(|k| scan_plane(k, l, u).map(|h| (k, Some(h))))
        .unwrap_or((k_prev, scan_plane(k_prev, l, u)))
}

/// Records whose hit counts equal the rounded expected counts.
pub fn expected_records(spec: &OracleSpec, m: u32, shots: u64) -> Vec<ShotRecord> {
    let powers = eis_schedule(m);
    let probs = GroverSimulator::new(spec).unwrap().probabilities(&powers).unwrap();
    powers
        .iter()
        .zip(probs)
        .map(|(&k, p)| ShotRecord::new(k, shots, (shots as f64 * p).round() as u64).unwrap())
        .collect()
}

/// Argmax of `f` over an even grid on `[0, pi/2]`.
pub fn grid_argmax(f: impl Fn(f64) -> f64, points: usize) -> f64 {
    (0..points)
        .map(|i| i as f64 * FRAC_PI_2 / (points - 1) as f64)
        .map(|t| (t, f(t)))
        .fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a })
        .0
}

/// Dense matrix of a gate over the whole register, built column by column
/// from basis states.
pub fn dense(gate: &Gate, n_qubits: usize) -> Vec<Vec<Complex64>> {
    (0..1 << n_qubits)
        .map(|col| {
            apply_gate(&StateVector::basis(n_qubits, col).unwrap(), gate)
                .unwrap()
                .amplitudes()
                .to_vec()
        })
        .collect()
}

/// Largest entry-wise deviation of every multi-controlled Z on `n_qubits`
/// from `I - 2|1..1><1..1|` on its qubits.
pub fn mcz_dense_deviation(n_qubits: usize) -> f64 {
    let mut worst = 0.0f64;
    for target in 0..n_qubits {
        let others: Vec<usize> = (0..n_qubits).filter(|&q| q != target).collect();
        for subset in 0..(1u32 << others.len()) {
            let controls: Vec<usize> = others
                .iter()
                .enumerate()
                .filter(|(b, _)| subset & (1 << b) != 0)
                .map(|(_, &q)| q)
                .collect();
            let mask = controls.iter().fold(1usize << target, |m, c| m | (1 << c));
            let m = dense(&Gate::Mcz { controls, target }, n_qubits);
            for (col, column) in m.iter().enumerate() {
                for (row, &entry) in column.iter().enumerate() {
                    let expected = match (row == col, col & mask == mask) {
                        (true, true) => -1.0,
                        (true, false) => 1.0,
                        _ => 0.0,
                    };
                    worst = worst.max((entry - expected).norm());
                }
            }
        }
    }
    worst
}
