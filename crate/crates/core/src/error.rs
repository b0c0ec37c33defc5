use thiserror::Error;

pub type Result<T> = std::result::Result<T, QaeError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QaeError {
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("register size mismatch: circuit has {circuit} qubits, state has {state}")]
    SizeMismatch { circuit: usize, state: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("csv output failed: {0}")]
    Output(String),
}

impl QaeError {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        QaeError::Config(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        QaeError::Domain(msg.into())
    }
}

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(QaeError::domain(format!("{name} = {p} is not in [0, 1]")))
    }
}
