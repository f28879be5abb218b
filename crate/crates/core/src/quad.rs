//! Semi-infinite quadrature for the elliptic integrals.
//!
//! Every integral here has the form `∫_0^∞ f(t) dt` with `f` positive and
//! algebraic at both ends. We use the exp-sinh variant of double-exponential
//! quadrature, `t = exp((π/2) sinh x)`, which maps `(0, ∞)` onto the real
//! line so that `f(t) dt` decays double-exponentially in `x` whenever `f`
//! behaves like a power of `t` at `0` and `∞`. This is the same mapping as
//! tanh-sinh after `t = u / (1 - u)`, expressed without the intermediate
//! variable.
//!
//! Integrands are supplied as `ln f` evaluated at `ln t`. Nothing is ever
//! formed as `t` itself, so `a² t² + 1` cannot overflow for any semiaxis
//! range and the truncation window can reach `t = exp(±10^4)`.
//!
//! The step is halved level by level (`h = 2^{-L}`); the error estimate is
//! the difference between consecutive levels plus a truncation term and a
//! roundoff floor.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::estimate::ScalarEstimate;
use crate::geometry::Ellipsoid;
use crate::special::{ln_gamma, softplus, CompensatedSum};

/// Tolerances for [`integrate_log_half_line`] and everything built on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Number of step halvings after the initial `h = 1` pass.
    pub max_levels: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_levels: 12,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadratureConfig {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) || self.max_levels < 1 {
            return Err(Error::domain(format!(
                "invalid quadrature configuration {self:?}"
            )));
        }
        Ok(())
    }
}

/// Raw result of a half-line integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOutcome {
    pub value: f64,
    pub error: f64,
    pub levels: u32,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadOutcome {
    pub fn estimate(&self) -> ScalarEstimate {
        ScalarEstimate::deterministic(self.value, self.error)
    }
}

// Half-width of the initial window in x. Extended while the edge terms are
// not negligible.
const INITIAL_WINDOW: f64 = 6.0;
const MAX_WINDOW: f64 = 10.0;
const EDGE_NEGLIGIBLE: f64 = 1e-20;
const MIN_LEVELS: u32 = 3;
// Floor on the reported error, in ulps of the result: each term is
// exp(ln f) with ln f accumulated from several logarithms, so its relative
// error is a few dozen ulps even after the level difference has vanished.
const ROUNDOFF_ULPS: f64 = 64.0;

/// `ln` of the exp-sinh weighted term at abscissa `x`.
#[inline]
fn ln_term<F: Fn(f64) -> f64>(ln_f: &F, x: f64) -> f64 {
    let ln_t = FRAC_PI_2 * x.sinh();
    // dt/dx = t (π/2) cosh x
    ln_f(ln_t) + ln_t + (FRAC_PI_2 * x.cosh()).ln()
}

/// Integrates `f` over `(0, ∞)` given `ln_f(ln t) = ln f(t)`.
///
/// `ln_f` may return `-inf` where `f` vanishes. When the tolerance is not
/// met within `cfg.max_levels` the last estimate is returned with
/// `converged = false` and the last level difference as its error.
pub fn integrate_log_half_line<F: Fn(f64) -> f64>(ln_f: F, cfg: &QuadratureConfig) -> QuadOutcome {
    let mut evaluations = 0usize;
    let mut eval = |x: f64| {
        evaluations += 1;
        let v = ln_term(&ln_f, x);
        if v.is_nan() {
            0.0
        } else {
            v.exp()
        }
    };

    // Level 0: unit step over an adaptively sized window.
    let mut sum = CompensatedSum::new();
    sum.add(eval(0.0));
    let mut window = 0.0;
    let mut last_left = f64::INFINITY;
    let mut last_right = f64::INFINITY;
    let mut j = 1.0f64;
    while j <= MAX_WINDOW {
        let left = eval(-j);
        let right = eval(j);
        sum.add(left);
        sum.add(right);
        window = j;
        last_left = left;
        last_right = right;
        if j >= INITIAL_WINDOW {
            let scale = sum.value().abs();
            if last_left <= EDGE_NEGLIGIBLE * scale && last_right <= EDGE_NEGLIGIBLE * scale {
                break;
            }
        }
        j += 1.0;
    }
    let edge_mass = last_left.max(last_right);

    let mut h = 1.0f64;
    let mut estimate = sum.value() * h;
    let mut error = f64::INFINITY;
    let mut converged = false;
    let mut levels = 0;

    for level in 1..=cfg.max_levels {
        h *= 0.5;
        // new abscissae are odd multiples of h inside the window
        let count = (window / h).round() as i64;
        let mut i = 1i64;
        while i <= count {
            let x = i as f64 * h;
            sum.add(eval(x));
            sum.add(eval(-x));
            i += 2;
        }
        let next = sum.value() * h;
        error = (next - estimate).abs();
        estimate = next;
        levels = level;
        let target = cfg.abs_tol.max(cfg.rel_tol * estimate.abs());
        if level >= MIN_LEVELS && error <= target {
            converged = true;
            break;
        }
    }

    // truncation beyond the window is not visible in the level difference
    let tail = edge_mass * h;
    let roundoff = ROUNDOFF_ULPS * f64::EPSILON * estimate.abs();
    QuadOutcome {
        value: estimate,
        error: error + tail + roundoff,
        levels,
        evaluations,
        converged,
    }
}

/// `∫_0^∞ t^{power-1} / ((a_i² t² + 1)^{special_exponent} Π_j sqrt(a_j² t² + 1)) dt`.
///
/// With `power = k` and `special_exponent = 1` this is the integral in the
/// intrinsic-volume formula; `power = β`, `special_exponent = α/2` gives the
/// sphere-integral identity.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticIntegrand {
    pub squared_semiaxes: Vec<f64>,
    pub power: f64,
    pub special_index: usize,
    pub special_exponent: f64,
}

impl EllipticIntegrand {
    /// The integrand attached to axis `i` in `V_k`.
    pub fn intrinsic(squared_semiaxes: Vec<f64>, k: usize, i: usize) -> Self {
        EllipticIntegrand {
            squared_semiaxes,
            power: k as f64,
            special_index: i,
            special_exponent: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let d = self.squared_semiaxes.len();
        if d == 0 {
            return Err(Error::EmptyDimension);
        }
        if self.special_index >= d {
            return Err(Error::OutOfRange {
                name: "special_index",
                value: self.special_index,
                min: 0,
                max: d - 1,
            });
        }
        for (index, &value) in self.squared_semiaxes.iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveSemiaxis { index, value });
            }
        }
        if !(self.power > 0.0) || !self.power.is_finite() {
            return Err(Error::domain(format!(
                "exponent of t must be positive, got {}",
                self.power - 1.0
            )));
        }
        // decay at infinity is t^{power - 1 - 2 special_exponent - d}
        let decay = self.power - 2.0 * self.special_exponent - d as f64;
        if !(decay < 0.0) || !self.special_exponent.is_finite() {
            return Err(Error::domain(format!(
                "integral diverges at infinity (power {}, special exponent {}, d = {d})",
                self.power, self.special_exponent
            )));
        }
        Ok(())
    }
}

/// Evaluates an [`EllipticIntegrand`] with a deterministic error estimate.
///
/// The variable is rescaled by `a_max` first (`I(a) = a_max^{-power} I(a / a_max)`)
/// so that the quadrature window is centred on the integrand's features.
pub fn elliptic_integral(
    spec: &EllipticIntegrand,
    cfg: &QuadratureConfig,
) -> Result<ScalarEstimate> {
    Ok(elliptic_integral_outcome(spec, cfg)?.estimate())
}

pub fn elliptic_integral_outcome(
    spec: &EllipticIntegrand,
    cfg: &QuadratureConfig,
) -> Result<QuadOutcome> {
    spec.validate()?;
    cfg.validate()?;
    let ln_a: Vec<f64> = spec
        .squared_semiaxes
        .iter()
        .map(|&s| 0.5 * s.ln())
        .collect();
    let ln_scale = ln_a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ln_b: Vec<f64> = ln_a.iter().map(|v| v - ln_scale).collect();
    let i = spec.special_index;
    let p = spec.power - 1.0;
    let e = spec.special_exponent;

    let ln_f = |ln_t: f64| {
        let mut acc = p * ln_t;
        let mut denom = 0.0;
        for &lb in &ln_b {
            denom += softplus(2.0 * (lb + ln_t));
        }
        acc -= 0.5 * denom;
        acc -= e * softplus(2.0 * (ln_b[i] + ln_t));
        acc
    };
    let mut out = integrate_log_half_line(ln_f, cfg);
    let factor = (-spec.power * ln_scale).exp();
    out.value *= factor;
    out.error *= factor;
    Ok(out)
}

/// Carlson's hypergeometric R-function on the positive real cone,
/// `R_{-s}(b, z) = B(s, Σb - s)^{-1} ∫_0^∞ t^{s-1} / Π_j (1 + z_j t)^{b_j} dt`.
pub fn carlson_r(s: f64, b: &[f64], z: &[f64], cfg: &QuadratureConfig) -> Result<ScalarEstimate> {
    cfg.validate()?;
    if b.is_empty() {
        return Err(Error::EmptyDimension);
    }
    if b.len() != z.len() {
        return Err(Error::DimensionMismatch {
            expected: b.len(),
            found: z.len(),
        });
    }
    if b.iter().chain(z).chain([&s]).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    if let Some(bad) = z.iter().find(|&&v| !(v > 0.0)) {
        return Err(Error::domain(format!("z must be positive, got {bad}")));
    }
    let b_sum: f64 = b.iter().sum();
    if !(s > 0.0 && s < b_sum) {
        return Err(Error::domain(format!(
            "need 0 < s < Σb = {b_sum}, got s = {s}"
        )));
    }

    // homogeneity: R_{-s}(b, λz) = λ^{-s} R_{-s}(b, z)
    let ln_z: Vec<f64> = z.iter().map(|v| v.ln()).collect();
    let ln_scale = ln_z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ln_zs: Vec<f64> = ln_z.iter().map(|v| v - ln_scale).collect();

    let ln_f = |ln_t: f64| {
        let mut acc = (s - 1.0) * ln_t;
        for (&bj, &lz) in b.iter().zip(&ln_zs) {
            acc -= bj * softplus(lz + ln_t);
        }
        acc
    };
    let out = integrate_log_half_line(ln_f, cfg);
    let ln_norm = ln_gamma(s) + ln_gamma(b_sum - s) - ln_gamma(b_sum);
    let factor = (-s * ln_scale - ln_norm).exp();
    Ok(out.estimate().scaled(factor))
}

/// Checks the sphere-integral identity's parameter domain:
/// `β > 0` and `α ≥ d - β`, plus the conditions under which both sides are
/// finite (`α > -1`, `α > β - d`).
pub fn check_prop3_domain(d: usize, alpha: f64, beta: f64) -> Result<()> {
    let df = d as f64;
    if !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::NonFinite);
    }
    if !(beta > 0.0) {
        return Err(Error::domain(format!("need β > 0, got β = {beta}")));
    }
    if !(alpha >= df - beta) {
        return Err(Error::domain(format!(
            "need α ≥ d - β = {}, got α = {alpha}",
            df - beta
        )));
    }
    if !(alpha > -1.0) || !(alpha > beta - df) {
        return Err(Error::domain(format!(
            "integrals diverge for α = {alpha}, β = {beta}, d = {d}"
        )));
    }
    Ok(())
}

/// Right-hand side of the sphere-integral identity
/// `∫_{S^{d-1}} |u_i|^α / h^β dσ
///   = 4π^{(d-1)/2} Γ((α+1)/2) / (Γ((d+α-β)/2) Γ(β/2)) · ∫_0^∞ t^{β-1} / ((a_i²t²+1)^{α/2} Π_j sqrt(a_j²t²+1)) dt`.
///
/// `i` is zero-based.
pub fn prop3_rhs(
    e: &Ellipsoid,
    i: usize,
    alpha: f64,
    beta: f64,
    cfg: &QuadratureConfig,
) -> Result<ScalarEstimate> {
    let d = e.dim();
    crate::error::check_range("i", i, 0, d - 1)?;
    check_prop3_domain(d, alpha, beta)?;
    let df = d as f64;
    let ln_c =
        4f64.ln() + 0.5 * (df - 1.0) * std::f64::consts::PI.ln() + ln_gamma(0.5 * (alpha + 1.0))
            - ln_gamma(0.5 * (df + alpha - beta))
            - ln_gamma(0.5 * beta);
    let spec = EllipticIntegrand {
        squared_semiaxes: e.squared_semiaxes(),
        power: beta,
        special_index: i,
        special_exponent: 0.5 * alpha,
    };
    Ok(elliptic_integral(&spec, cfg)?.scaled(ln_c.exp()))
}
