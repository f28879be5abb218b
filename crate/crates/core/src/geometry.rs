//! Axis-aligned ellipsoids and covariance spectra.

use crate::error::{Error, Result};

/// The solid ellipsoid `{x : Σ x_i² / a_i² ≤ 1}`.
///
/// Semiaxes are stored in the order given; nothing in the crate depends on
/// them being sorted. Dimension 1 is accepted and describes the segment
/// `[-a, a]` (so `V_0 = 1`, `V_1 = 2a`).
#[derive(Debug, Clone, PartialEq)]
pub struct Ellipsoid {
    semiaxes: Vec<f64>,
}

impl Ellipsoid {
    pub fn new(semiaxes: Vec<f64>) -> Result<Self> {
        if semiaxes.is_empty() {
            return Err(Error::EmptyDimension);
        }
        for (index, &value) in semiaxes.iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveSemiaxis { index, value });
            }
        }
        Ok(Ellipsoid { semiaxes })
    }

    /// The ball of radius `r` in dimension `d`.
    pub fn ball(d: usize, r: f64) -> Result<Self> {
        Self::new(vec![r; d])
    }

    pub fn dim(&self) -> usize {
        self.semiaxes.len()
    }

    pub fn semiaxes(&self) -> &[f64] {
        &self.semiaxes
    }

    pub fn squared_semiaxes(&self) -> Vec<f64> {
        self.semiaxes.iter().map(|a| a * a).collect()
    }

    pub fn max_semiaxis(&self) -> f64 {
        self.semiaxes.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_semiaxis(&self) -> f64 {
        self.semiaxes.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `a_max / a_min`.
    pub fn eccentricity_ratio(&self) -> f64 {
        self.max_semiaxis() / self.min_semiaxis()
    }

    /// The ellipsoid with every semiaxis multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.semiaxes.iter().map(|a| a * c).collect())
    }

    /// Product of the semiaxes.
    pub fn semiaxis_product(&self) -> f64 {
        self.semiaxes.iter().product()
    }

    /// Support function `h(x) = sqrt(Σ a_i² x_i²)`.
    pub fn support_function(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        Ok(self.support_unchecked(x))
    }

    #[inline]
    pub(crate) fn support_unchecked(&self, x: &[f64]) -> f64 {
        // hypot-style scaling keeps huge or tiny inputs from overflowing
        let scale = self
            .semiaxes
            .iter()
            .zip(x)
            .map(|(a, xi)| (a * xi).abs())
            .fold(0.0, f64::max);
        if scale == 0.0 || !scale.is_finite() {
            return scale;
        }
        let s: f64 = self
            .semiaxes
            .iter()
            .zip(x)
            .map(|(a, xi)| {
                let v = a * xi / scale;
                v * v
            })
            .sum();
        scale * s.sqrt()
    }

    /// The polar body, whose semiaxes are the reciprocals `1 / a_i`.
    pub fn polar(&self) -> Ellipsoid {
        Ellipsoid {
            semiaxes: self.semiaxes.iter().map(|a| 1.0 / a).collect(),
        }
    }

    /// `Σ x_i² / a_i²`; the point is inside when this is at most 1.
    pub fn gauge_squared(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        Ok(self.gauge_squared_unchecked(x))
    }

    #[inline]
    pub(crate) fn gauge_squared_unchecked(&self, x: &[f64]) -> f64 {
        self.semiaxes
            .iter()
            .zip(x)
            .map(|(a, xi)| {
                let v = xi / a;
                v * v
            })
            .sum()
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        Ok(self.gauge_squared(x)? <= 1.0)
    }

    /// Euclidean distance from `x` to the solid ellipsoid (zero inside).
    ///
    /// The nearest boundary point is `p_i = a_i² x_i / (a_i² + μ)` where
    /// `μ > 0` solves `Σ a_i² x_i² / (a_i² + μ)² = 1`. The root is bracketed
    /// in `[0, a_max ‖x‖]`, bisected to relative width 1e-14 and polished by
    /// two Newton steps.
    pub fn distance_to(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(self.distance_unchecked(x))
    }

    pub(crate) fn distance_unchecked(&self, x: &[f64]) -> f64 {
        if self.gauge_squared_unchecked(x) <= 1.0 {
            return 0.0;
        }
        let a = &self.semiaxes;
        let residual = |mu: f64| -> f64 {
            a.iter()
                .zip(x)
                .map(|(ai, xi)| {
                    let v = ai * xi / (ai * ai + mu);
                    v * v
                })
                .sum::<f64>()
                - 1.0
        };

        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut lo = 0.0f64;
        let mut hi = self.max_semiaxis() * norm;
        while residual(hi) > 0.0 {
            // guards against rounding in the upper bracket
            hi *= 2.0;
        }
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 1e-14 * hi || mid <= lo || mid >= hi {
                break;
            }
            if residual(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut mu = 0.5 * (lo + hi);
        for _ in 0..2 {
            let f = residual(mu);
            let df: f64 = a
                .iter()
                .zip(x)
                .map(|(ai, xi)| {
                    let q = ai * ai + mu;
                    -2.0 * ai * ai * xi * xi / (q * q * q)
                })
                .sum();
            if df < 0.0 {
                let next = mu - f / df;
                if next.is_finite() && next > 0.0 {
                    mu = next;
                }
            }
        }
        a.iter()
            .zip(x)
            .map(|(ai, xi)| {
                let v = mu * xi / (ai * ai + mu);
                v * v
            })
            .sum::<f64>()
            .sqrt()
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            })
        } else {
            Ok(())
        }
    }
}

/// Eigenvalues of a positive-definite covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPSD {
    eigenvalues: Vec<f64>,
}

impl SpectrumPSD {
    pub fn new(eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::EmptyDimension);
        }
        for (index, &value) in eigenvalues.iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveEigenvalue { index, value });
            }
        }
        Ok(SpectrumPSD { eigenvalues })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// The ellipsoid `{x : xᵀ Σ⁻¹ x ≤ 1}`, with semiaxes `sqrt(λ_i)`.
    pub fn ellipsoid(&self) -> Ellipsoid {
        Ellipsoid {
            semiaxes: self.eigenvalues.iter().map(|l| l.sqrt()).collect(),
        }
    }
}
