//! Scalar results with an attached error measure.

use std::fmt;

/// How the `error` field of a [`ScalarEstimate`] should be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    /// Absolute error bound from a deterministic method.
    Deterministic,
    /// Standard error of a Monte-Carlo mean.
    Statistical,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Deterministic => "deterministic",
            ErrorKind::Statistical => "statistical",
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A value together with either a deterministic error bound or a
/// Monte-Carlo standard error. `samples` is zero exactly for deterministic
/// estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarEstimate {
    pub value: f64,
    pub error_kind: ErrorKind,
    pub error: f64,
    pub samples: u64,
}

impl ScalarEstimate {
    pub fn deterministic(value: f64, error: f64) -> Self {
        ScalarEstimate {
            value,
            error_kind: ErrorKind::Deterministic,
            error: error.abs(),
            samples: 0,
        }
    }

    /// `samples` must be positive.
    pub fn statistical(value: f64, std_error: f64, samples: u64) -> Self {
        debug_assert!(samples > 0);
        ScalarEstimate {
            value,
            error_kind: ErrorKind::Statistical,
            error: std_error.abs(),
            samples,
        }
    }

    /// Exact value with zero error.
    pub fn exact(value: f64) -> Self {
        Self::deterministic(value, 0.0)
    }

    /// Multiplies value and error by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        ScalarEstimate {
            value: self.value * factor,
            error: self.error * factor.abs(),
            ..self
        }
    }

    pub fn is_statistical(&self) -> bool {
        self.error_kind == ErrorKind::Statistical
    }

    /// `|value - reference| / error`; infinite when the error is zero and
    /// the values differ.
    pub fn z_score(&self, reference: f64) -> f64 {
        let diff = (self.value - reference).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.error
        }
    }

    /// Difference measured in combined standard errors of two estimates.
    pub fn z_score_against(&self, other: &ScalarEstimate) -> f64 {
        let diff = (self.value - other.value).abs();
        if diff == 0.0 {
            return 0.0;
        }
        diff / self.error.hypot(other.error)
    }

    pub fn relative_error(&self, reference: f64) -> f64 {
        relative_difference(self.value, reference)
    }
}

impl fmt::Display for ScalarEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.error_kind {
            ErrorKind::Deterministic => write!(f, "{} (err <= {:e})", self.value, self.error),
            ErrorKind::Statistical => write!(
                f,
                "{} (se {:e}, n = {})",
                self.value, self.error, self.samples
            ),
        }
    }
}

/// `|a - b| / |b|`, falling back to the absolute difference when `b == 0`.
pub fn relative_difference(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        (a - b).abs()
    } else {
        ((a - b) / b).abs()
    }
}
