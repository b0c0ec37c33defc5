//! Dense statevector simulation for the small gate set used by the
//! amplitude-estimation circuits.
//!
//! Indexing is little-endian: bit `q` of a basis-state index is the value of
//! qubit `q`. Qubit 0 is the ancilla that flags the good state; the domain
//! register occupies qubits `1..=n`.

use num_complex::Complex64;

use crate::error::{QaeError, Result};

/// A single gate. All gates in this set are real-valued, but amplitudes are
/// kept complex so the simulator stays general.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    /// Rotation about Y by `angle` radians: `|0> -> cos(angle/2)|0> + sin(angle/2)|1>`.
    Ry {
        target: usize,
        angle: f64,
    },
    /// Ry on `target` applied only when `control` is `|1>`.
    CRy {
        control: usize,
        target: usize,
        angle: f64,
    },
    /// CNOT.
    Cx {
        control: usize,
        target: usize,
    },
    /// Phase flip of the component where every control and the target are `|1>`.
    /// Symmetric in all of its qubits.
    Mcz {
        controls: Vec<usize>,
        target: usize,
    },
}

impl Gate {
    pub fn ry(target: usize, angle: f64) -> Self {
        Gate::Ry { target, angle }
    }

    pub fn cry(control: usize, target: usize, angle: f64) -> Self {
        Gate::CRy { control, target, angle }
    }

    /// Every qubit the gate touches, target last.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) => vec![*q],
            Gate::Ry { target, .. } => vec![*target],
            Gate::CRy { control, target, .. } | Gate::Cx { control, target } => vec![*control, *target],
            Gate::Mcz { controls, target } => {
                let mut qs = controls.clone();
                qs.push(*target);
                qs
            }
        }
    }

    /// The adjoint gate.
    pub fn dagger(&self) -> Gate {
        match self {
            Gate::Ry { target, angle } => Gate::Ry {
                target: *target,
                angle: -angle,
            },
            Gate::CRy { control, target, angle } => Gate::CRy {
                control: *control,
                target: *target,
                angle: -angle,
            },
            g => g.clone(),
        }
    }

    /// The 2x2 matrix acting on the target qubit, row-major. For controlled
    /// gates this is the block applied when all controls are set.
    pub fn target_matrix(&self) -> [[Complex64; 2]; 2] {
        let c = |re: f64| Complex64::new(re, 0.0);
        match self {
            Gate::H(_) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                [[c(s), c(s)], [c(s), c(-s)]]
            }
            Gate::X(_) | Gate::Cx { .. } => [[c(0.0), c(1.0)], [c(1.0), c(0.0)]],
            Gate::Z(_) | Gate::Mcz { .. } => [[c(1.0), c(0.0)], [c(0.0), c(-1.0)]],
            Gate::Ry { angle, .. } | Gate::CRy { angle, .. } => {
                let (s, co) = (angle / 2.0).sin_cos();
                [[c(co), c(-s)], [c(s), c(co)]]
            }
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= n_qubits) {
            return Err(QaeError::QubitOutOfRange { qubit: q, n_qubits });
        }
        for (i, q) in qs.iter().enumerate() {
            if qs[i + 1..].contains(q) {
                return Err(QaeError::config(format!("gate {self:?} repeats qubit {q}")));
            }
        }
        Ok(())
    }
}

/// An ordered gate list over a fixed register width.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends all gates of `other`, which must have the same width.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.n_qubits != self.n_qubits {
            return Err(QaeError::SizeMismatch {
                circuit: other.n_qubits,
                state: self.n_qubits,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(self)
    }

    /// Gate-reversed circuit of adjoints.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::dagger).collect(),
        }
    }

    /// Runs the circuit on a copy of `initial`.
    pub fn run(&self, initial: &StateVector) -> Result<StateVector> {
        let mut state = initial.clone();
        self.apply_to(&mut state)?;
        Ok(state)
    }

    /// Applies every gate in order to `state` in place.
    pub fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(QaeError::SizeMismatch {
                circuit: self.n_qubits,
                state: state.n_qubits(),
            });
        }
        for gate in &self.gates {
            state.apply(gate)?;
        }
        Ok(())
    }
}

/// Dense amplitude vector over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

/// Largest register the dense simulator will allocate.
pub const MAX_QUBITS: usize = 24;

impl StateVector {
    /// The all-zero basis state.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(QaeError::config(format!(
                "register width {n_qubits} outside 1..={MAX_QUBITS}"
            )));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(QaeError::config(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// Wraps raw amplitudes. The length must be a power of two; the caller is
    /// responsible for normalization.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(QaeError::config(format!(
                "amplitude count {dim} is not a power of two >= 2"
            )));
        }
        Ok(StateVector {
            n_qubits: dim.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability of reading `|1>` on qubit 0.
    pub fn prob_ancilla_one(&self) -> f64 {
        self.amps.iter().skip(1).step_by(2).map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match gate {
            Gate::X(t) => self.swap_pairs(0, *t),
            Gate::Cx { control, target } => self.swap_pairs(1 << control, *target),
            Gate::H(t) | Gate::Ry { target: t, .. } => self.apply_controlled(0, *t, real_matrix(gate)),
            Gate::CRy { control, target, .. } => self.apply_controlled(1 << control, *target, real_matrix(gate)),
            Gate::Z(t) => self.phase_flip(1 << t),
            Gate::Mcz { controls, target } => {
                let mask = controls.iter().fold(1usize << target, |m, c| m | (1 << c));
                self.phase_flip(mask)
            }
        }
        Ok(())
    }

    /// Visits every index with the target bit clear and all control bits set.
    fn for_each_pair(&mut self, control_mask: usize, target: usize, mut f: impl FnMut(&mut [Complex64], usize, usize)) {
        let bit = 1usize << target;
        for base in (0..self.amps.len()).step_by(2 * bit) {
            for i in base..base + bit {
                if i & control_mask == control_mask {
                    f(&mut self.amps, i, i | bit);
                }
            }
        }
    }

    fn apply_controlled(&mut self, control_mask: usize, target: usize, m: [[f64; 2]; 2]) {
        self.for_each_pair(control_mask, target, |amps, i, j| {
            let (a0, a1) = (amps[i], amps[j]);
            amps[i] = a0 * m[0][0] + a1 * m[0][1];
            amps[j] = a0 * m[1][0] + a1 * m[1][1];
        });
    }

    fn swap_pairs(&mut self, control_mask: usize, target: usize) {
        self.for_each_pair(control_mask, target, |amps, i, j| amps.swap(i, j));
    }

    fn phase_flip(&mut self, mask: usize) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a = -*a;
            }
        }
    }
}

fn real_matrix(gate: &Gate) -> [[f64; 2]; 2] {
    gate.target_matrix().map(|row| row.map(|z| z.re))
}

/// Applies `gate` to a copy of `state`.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// Runs `circuit` on a copy of `initial`.
pub fn run_circuit(circuit: &Circuit, initial: &StateVector) -> Result<StateVector> {
    circuit.run(initial)
}
