//! Construction of the state-preparation oracle `A`, its inverse, and the
//! Grover operator `Q = A S0 A^-1 S_chi` for Riemann-sum integration.
//!
//! `A` puts the `n` domain qubits into a uniform superposition over the `2^n`
//! subintervals and rotates the ancilla so that, for subinterval `i`, the
//! ancilla reads `|1>` with probability `f(x_i*)`. For integrands whose
//! rotation angles are affine in `i` (including `sin^2`), the rotation is a
//! ladder of one Ry plus one controlled Ry per domain qubit. Other tables fall
//! back to a uniformly controlled rotation built from `2^n` Ry gates and
//! `2^n` CNOTs.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::error::{QaeError, Result};
use crate::integrator::{IntegralSpec, Integrand};
use crate::statevector::{Circuit, Gate, StateVector, MAX_QUBITS};

/// Ancilla (readout) qubit index.
pub const ANCILLA: usize = 0;

/// Tolerance for treating a rotation table as affine in the subinterval index.
const AFFINE_TOL: f64 = 1e-12;

/// Integration problem over `[0, b]` with `2^n` subintervals.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpec {
    n: u32,
    b: f64,
    alpha: f64,
    integrand: Integrand,
}

impl OracleSpec {
    pub fn new(n: u32, b: f64, alpha: f64, integrand: Integrand) -> Result<Self> {
        if n == 0 || n as usize + 1 > MAX_QUBITS {
            return Err(QaeError::config(format!(
                "domain qubit count {n} outside 1..={}",
                MAX_QUBITS - 1
            )));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(QaeError::config(format!("upper limit {b} must be positive")));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(QaeError::config(format!("sample position {alpha} outside [0, 1]")));
        }
        integrand.validate(1 << n)?;
        Ok(OracleSpec { n, b, alpha, integrand })
    }

    /// Midpoint `sin^2` on `[0, pi/4]`, the benchmark integral.
    pub fn sin2_quarter_pi(n: u32) -> Result<Self> {
        Self::new(n, FRAC_PI_4, 0.5, Integrand::Sin2)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn integrand(&self) -> &Integrand {
        &self.integrand
    }

    /// Domain qubits plus the ancilla.
    pub fn n_qubits(&self) -> usize {
        self.n as usize + 1
    }

    pub fn n_subintervals(&self) -> usize {
        1 << self.n
    }

    /// The matching classical Riemann sum specification.
    pub fn integral_spec(&self) -> IntegralSpec {
        IntegralSpec {
            integrand: self.integrand.clone(),
            a_lo: 0.0,
            b_hi: self.b,
            n_sub: self.n_subintervals(),
            alpha: self.alpha,
        }
    }

    /// Full Ry angle applied to the ancilla for each subinterval:
    /// `2 * arcsin(sqrt(f(x_i*)))`.
    pub fn rotation_angles(&self) -> Vec<f64> {
        let spec = self.integral_spec();
        (0..self.n_subintervals())
            .map(|i| match self.integrand {
                Integrand::Sin2 => 2.0 * spec.sample_point(i),
                _ => 2.0 * spec.integrand.value(i, spec.sample_point(i)).sqrt().asin(),
            })
            .collect()
    }

    /// `(offset, step)` when the rotation angle is `offset + i * step`.
    fn affine_angles(&self) -> Option<(f64, f64)> {
        let scale = 2.0 * self.b / self.n_subintervals() as f64;
        match &self.integrand {
            Integrand::Sin2 => Some((self.alpha * scale, scale)),
            Integrand::Constant(c) => Some((2.0 * c.sqrt().asin(), 0.0)),
            Integrand::Table(_) => {
                let angles = self.rotation_angles();
                let last = angles.len() - 1;
                let step = (angles[last] - angles[0]) / last as f64;
                angles
                    .iter()
                    .enumerate()
                    .all(|(i, &a)| (a - (angles[0] + i as f64 * step)).abs() <= AFFINE_TOL)
                    .then_some((angles[0], step))
            }
        }
    }
}

/// Builds `A`: Hadamards on the domain register, then the ancilla rotation.
pub fn build_a(spec: &OracleSpec) -> Result<Circuit> {
    let n = spec.n as usize;
    let mut c = Circuit::new(spec.n_qubits());
    for q in 1..=n {
        c.push(Gate::H(q))?;
    }
    match spec.affine_angles() {
        Some((offset, step)) => {
            c.push(Gate::ry(ANCILLA, offset))?;
            // Domain qubit j carries weight 2^(j-1) in the subinterval index.
            for j in 1..=n {
                c.push(Gate::cry(j, ANCILLA, step * (1u64 << (j - 1)) as f64))?;
            }
        }
        None => push_multiplexed_ry(&mut c, &spec.rotation_angles(), n)?,
    }
    Ok(c)
}

/// Uniformly controlled Ry on the ancilla with controls `1..=n`, where
/// control state `i` receives `angles[i]`. Gray-code decomposition into
/// alternating Ry and CNOT gates.
fn push_multiplexed_ry(c: &mut Circuit, angles: &[f64], n: usize) -> Result<()> {
    let size = angles.len();
    let norm = 1.0 / size as f64;
    for j in 0..size {
        let gray = j ^ (j >> 1);
        let theta: f64 = angles
            .iter()
            .enumerate()
            .map(|(i, &phi)| if (i & gray).count_ones() % 2 == 0 { phi } else { -phi })
            .sum::<f64>()
            * norm;
        let flip_bit = if j + 1 < size {
            (j + 1).trailing_zeros() as usize
        } else {
            n - 1
        };
        c.push(Gate::ry(ANCILLA, theta))?;
        c.push(Gate::Cx {
            control: flip_bit + 1,
            target: ANCILLA,
        })?;
    }
    Ok(())
}

/// `A^-1`: gates of `A` in reverse order with negated angles.
pub fn build_a_inverse(spec: &OracleSpec) -> Result<Circuit> {
    Ok(build_a(spec)?.inverse())
}

/// The amplitude amplification operator, stored as a circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct GroverOperator {
    circuit: Circuit,
}

impl GroverOperator {
    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    /// Applies `Q^power` to `state` in place.
    pub fn apply_power(&self, state: &mut StateVector, power: u64) -> Result<()> {
        for _ in 0..power {
            self.circuit.apply_to(state)?;
        }
        Ok(())
    }
}

/// Builds `Q = A S0 A^-1 S_chi` with `S_chi` acting first in circuit time.
///
/// `S0` is realized as X on every qubit, a multi-controlled Z, and X again,
/// which equals `-(I - 2|0><0|)`. The global phase is not corrected.
pub fn build_q(spec: &OracleSpec) -> Result<GroverOperator> {
    let a = build_a(spec)?;
    let width = spec.n_qubits();
    let mut c = Circuit::new(width);
    c.push(Gate::Z(ANCILLA))?;
    c.append(&a.inverse())?;
    for q in 0..width {
        c.push(Gate::X(q))?;
    }
    c.push(Gate::Mcz {
        controls: (1..width).collect(),
        target: ANCILLA,
    })?;
    for q in 0..width {
        c.push(Gate::X(q))?;
    }
    c.append(&a)?;
    Ok(GroverOperator { circuit: c })
}

/// `theta = arcsin(sqrt(a))`, so that `sin^2(theta) = a`.
pub fn theta_from_amplitude(a: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(QaeError::domain(format!("amplitude {a} is not in [0, 1]")));
    }
    Ok(a.sqrt().asin().clamp(0.0, FRAC_PI_2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn two_qubit_midpoint_circuit_has_the_expected_angles() {
        let c = build_a(&OracleSpec::sin2_quarter_pi(2).unwrap()).unwrap();
        let g = c.gates();
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], Gate::H(1));
        assert_eq!(g[1], Gate::H(2));
        match (&g[2], &g[3], &g[4]) {
            (
                Gate::Ry { target: 0, angle: a0 },
                Gate::CRy {
                    control: 1,
                    target: 0,
                    angle: a1,
                },
                Gate::CRy {
                    control: 2,
                    target: 0,
                    angle: a2,
                },
            ) => {
                assert!(close(*a0, PI / 16.0, 1e-15));
                assert!(close(*a1, PI / 8.0, 1e-15));
                assert!(close(*a2, PI / 4.0, 1e-15));
            }
            other => panic!("unexpected gates {other:?}"),
        }
    }

    #[test]
    fn inverse_reverses_and_negates() {
        let c = build_a_inverse(&OracleSpec::sin2_quarter_pi(2).unwrap()).unwrap();
        let expected = vec![
            Gate::cry(2, 0, -PI / 4.0),
            Gate::cry(1, 0, -PI / 8.0),
            Gate::ry(0, -PI / 16.0),
            Gate::H(2),
            Gate::H(1),
        ];
        assert_eq!(c.gates().len(), expected.len());
        for (got, want) in c.gates().iter().zip(&expected) {
            match (got, want) {
                (Gate::Ry { angle: x, .. }, Gate::Ry { angle: y, .. })
                | (Gate::CRy { angle: x, .. }, Gate::CRy { angle: y, .. }) => {
                    assert!(close(*x, *y, 1e-15));
                    assert_eq!(got.qubits(), want.qubits());
                }
                _ => assert_eq!(got, want),
            }
        }
    }

    #[test]
    fn left_sum_with_one_qubit_has_zero_offset() {
        let spec = OracleSpec::new(1, 1.3, 0.0, Integrand::Sin2).unwrap();
        let c = build_a(&spec).unwrap();
        assert_eq!(c.gates()[1], Gate::ry(0, 0.0));
        let p = c.run(&StateVector::zero(2).unwrap()).unwrap().prob_ancilla_one();
        // Subintervals sampled at 0 and 0.65.
        assert!(close(p, 0.5 * (0.65f64).sin().powi(2), 1e-15));
    }

    #[test]
    fn theta_edges() {
        assert_eq!(theta_from_amplitude(0.0).unwrap(), 0.0);
        assert!(close(theta_from_amplitude(1.0).unwrap(), FRAC_PI_2, 1e-15));
        let t = theta_from_amplitude(0.179636).unwrap();
        assert!(close(t, 0.437675116, 1e-9));
        assert!(close(t.sin().powi(2), 0.179636, 1e-12));
        assert!(theta_from_amplitude(-0.1).is_err());
        assert!(theta_from_amplitude(1.0001).is_err());
    }

    #[test]
    fn invalid_specs() {
        assert!(OracleSpec::new(0, 1.0, 0.5, Integrand::Sin2).is_err());
        assert!(OracleSpec::new(2, -1.0, 0.5, Integrand::Sin2).is_err());
        assert!(OracleSpec::new(2, 1.0, 1.5, Integrand::Sin2).is_err());
        assert!(OracleSpec::new(2, 1.0, 0.5, Integrand::Table(vec![0.1; 3])).is_err());
        assert!(OracleSpec::new(2, 1.0, 0.5, Integrand::Table(vec![0.1, 0.2, 1.2, 0.0])).is_err());
    }

    #[test]
    fn affine_table_uses_the_ladder() {
        let spec = OracleSpec::sin2_quarter_pi(3).unwrap();
        let table: Vec<f64> = spec.rotation_angles().iter().map(|a| (a / 2.0).sin().powi(2)).collect();
        let tabled = OracleSpec::new(3, FRAC_PI_4, 0.5, Integrand::Table(table)).unwrap();
        assert_eq!(build_a(&tabled).unwrap().len(), 3 + 1 + 3);
    }

    #[test]
    fn general_table_uses_the_multiplexor() {
        let values = vec![0.3, 0.05, 0.9, 0.5, 0.0, 1.0, 0.25, 0.61];
        let spec = OracleSpec::new(3, 2.0, 0.5, Integrand::Table(values.clone())).unwrap();
        let a = build_a(&spec).unwrap();
        assert_eq!(a.len(), 3 + 2 * 8);
        let state = a.run(&StateVector::zero(4).unwrap()).unwrap();
        // Each subinterval i carries |1> weight values[i] / 8 on the ancilla.
        for (i, v) in values.iter().enumerate() {
            let one = state.amplitudes()[(i << 1) | 1].norm_sqr();
            let zero = state.amplitudes()[i << 1].norm_sqr();
            assert!(close(one, v / 8.0, 1e-12), "subinterval {i}");
            assert!(close(zero, (1.0 - v) / 8.0, 1e-12), "subinterval {i}");
        }
    }
}
