use std::fmt;
use std::str::FromStr;

use crate::error::QaeError;

/// Algorithm-independent summary of one estimation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateResult {
    pub a_hat: f64,
    pub theta_hat: f64,
    /// Confidence interval on the amplitude, when the algorithm produces one.
    pub a_interval: Option<(f64, f64)>,
    /// Applications of `A` or `A^-1`, summed over all shots.
    pub oracle_calls: u64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Mlqae,
    Iqae,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Mlqae => "mlqae",
            Algorithm::Iqae => "iqae",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = QaeError;

    fn from_str(s: &str) -> Result<Self, QaeError> {
        match s.to_ascii_lowercase().as_str() {
            "mlqae" => Ok(Algorithm::Mlqae),
            "iqae" => Ok(Algorithm::Iqae),
            other => Err(QaeError::Usage(format!("unknown algorithm '{other}'"))),
        }
    }
}
