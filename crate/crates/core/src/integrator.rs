//! Classical Riemann sums, closed-form references and error metrics.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};
use std::str::FromStr;

use crate::error::{QaeError, Result};

/// An integrand with values in `[0, 1]`, so that it can be loaded as a
/// measurement probability.
#[derive(Debug, Clone, PartialEq)]
pub enum Integrand {
    /// `f(x) = sin^2(x)`.
    Sin2,
    Constant(f64),
    /// Values already sampled at the sample point of each subinterval, in
    /// subinterval order.
    Table(Vec<f64>),
}

impl Integrand {
    /// Evaluates the integrand at the sample point `x` of subinterval `i`.
    pub fn value(&self, i: usize, x: f64) -> f64 {
        match self {
            Integrand::Sin2 => x.sin().powi(2),
            Integrand::Constant(c) => *c,
            Integrand::Table(values) => values[i],
        }
    }

    pub(crate) fn validate(&self, n_sub: usize) -> Result<()> {
        match self {
            Integrand::Sin2 => Ok(()),
            Integrand::Constant(c) => check_unit_range(*c),
            Integrand::Table(values) => {
                if values.len() != n_sub {
                    return Err(QaeError::config(format!(
                        "integrand table has {} entries, expected {n_sub}",
                        values.len()
                    )));
                }
                values.iter().try_for_each(|&v| check_unit_range(v))
            }
        }
    }
}

fn check_unit_range(v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(QaeError::config(format!(
            "integrand value {v} outside [0, 1] cannot be amplitude-encoded"
        )))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSpec {
    pub integrand: Integrand,
    pub a_lo: f64,
    pub b_hi: f64,
    pub n_sub: usize,
    /// Sample position within each subinterval: 0 left, 0.5 midpoint, 1 right.
    pub alpha: f64,
}

impl IntegralSpec {
    pub fn new(integrand: Integrand, a_lo: f64, b_hi: f64, n_sub: usize, alpha: f64) -> Result<Self> {
        if a_lo.is_nan() || b_hi.is_nan() || b_hi <= a_lo {
            return Err(QaeError::config(format!("empty interval [{a_lo}, {b_hi}]")));
        }
        if n_sub == 0 {
            return Err(QaeError::config("at least one subinterval is required"));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(QaeError::config(format!("sample position {alpha} outside [0, 1]")));
        }
        integrand.validate(n_sub)?;
        Ok(IntegralSpec {
            integrand,
            a_lo,
            b_hi,
            n_sub,
            alpha,
        })
    }

    /// `sin^2` on `[0, pi/4]` with `2^n` midpoint subintervals.
    pub fn sin2_quarter_pi(n: u32) -> Self {
        IntegralSpec {
            integrand: Integrand::Sin2,
            a_lo: 0.0,
            b_hi: FRAC_PI_4,
            n_sub: 1 << n,
            alpha: 0.5,
        }
    }

    pub fn width(&self) -> f64 {
        self.b_hi - self.a_lo
    }

    pub fn sample_point(&self, i: usize) -> f64 {
        self.a_lo + (i as f64 + self.alpha) * self.width() / self.n_sub as f64
    }
}

/// `sum_i f(x_i*) * (b - a) / N`.
pub fn riemann_sum(spec: &IntegralSpec) -> f64 {
    let dx = spec.width() / spec.n_sub as f64;
    (0..spec.n_sub)
        .map(|i| spec.integrand.value(i, spec.sample_point(i)))
        .sum::<f64>()
        * dx
}

/// Closed-form reference values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    /// `int_0^{pi/4} sin^2 x dx = pi/8 - 1/4`.
    Sin2Integral,
    /// The same integral divided by the interval length, `1/2 - 1/pi`.
    Sin2Amplitude,
}

impl FromStr for Reference {
    type Err = QaeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sin2-integral" => Ok(Reference::Sin2Integral),
            "sin2-amplitude" => Ok(Reference::Sin2Amplitude),
            other => Err(QaeError::config(format!("no closed form registered for '{other}'"))),
        }
    }
}

pub fn exact_reference(tag: Reference) -> f64 {
    match tag {
        Reference::Sin2Integral => FRAC_PI_8 - 0.25,
        Reference::Sin2Amplitude => 0.5 - 1.0 / PI,
    }
}

/// Published true amplitudes of the `sin^2` benchmark for the 2-, 3- and
/// 10-qubit domains.
pub const TRUE_AMPLITUDE_N2: f64 = 0.179636;
pub const TRUE_AMPLITUDE_N3: f64 = 0.181178;
pub const TRUE_AMPLITUDE_N10: f64 = 0.181690;

/// Amplitude treated as ground truth for an `n`-qubit `sin^2` domain.
///
/// The 2-, 3- and 10-qubit values are the rounded published constants. Other
/// domains below 10 qubits use the exact midpoint sum; larger ones use the
/// exact normalized integral.
pub fn true_amplitude(n: u32) -> f64 {
    match n {
        2 => TRUE_AMPLITUDE_N2,
        3 => TRUE_AMPLITUDE_N3,
        10 => TRUE_AMPLITUDE_N10,
        n if n < 10 => {
            let spec = IntegralSpec::sin2_quarter_pi(n);
            riemann_sum(&spec) / spec.width()
        }
        _ => exact_reference(Reference::Sin2Amplitude),
    }
}

/// `|estimate - truth| / |truth|`.
pub fn relative_error(estimate: f64, truth: f64) -> Result<f64> {
    if truth == 0.0 {
        return Err(QaeError::domain("relative error against a zero truth"));
    }
    Ok((estimate - truth).abs() / truth.abs())
}

/// Scales a normalized amplitude back to an integral over an interval of
/// length `interval_len`.
pub fn amplitude_to_integral(a_hat: f64, interval_len: f64) -> f64 {
    a_hat * interval_len
}
