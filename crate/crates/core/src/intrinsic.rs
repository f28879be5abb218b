//! Intrinsic volumes `V_0 .. V_d` of an ellipsoid.
//!
//! The generic route writes
//!
//! ```text
//! V_k(E) = κ_k Σ_i a_i² s_{k-1}(a² without a_i²) ∫_0^∞ t^{k-1} / ((a_i²t²+1) Π_j sqrt(a_j²t²+1)) dt
//! ```
//!
//! for `1 ≤ k ≤ d`. Alternatives are the polar-duality relation
//! `V_k(E) = κ_k / (κ_d κ_{d-k}) · V_d(E) · V_{d-k}(E°)`, the same integrals
//! written as Carlson R-functions, and direct one-integral formulas for
//! `V_1`, `V_2`, `V_{d-1}` and `V_{d-2}`.
//!
//! Semiaxes are divided by `a_max` before integrating and the result is
//! multiplied back by `a_max^k`.

use std::fmt;

use crate::error::{check_range, Error, Result};
use crate::estimate::ScalarEstimate;
use crate::geometry::Ellipsoid;
use crate::quad::{
    carlson_r, elliptic_integral, integrate_log_half_line, EllipticIntegrand, QuadratureConfig,
};
use crate::special::{beta, binomial, softplus, unit_ball_volume, CompensatedSum};
use crate::sympoly::weighted_leave_one_out;

/// Semiaxis ratio above which reports carry a precision warning.
pub const ECCENTRICITY_WARNING_RATIO: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    ClosedForm,
    Quadrature,
    Duality,
    RFunction,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::ClosedForm => "closed_form",
            Backend::Quadrature => "quadrature",
            Backend::Duality => "duality",
            Backend::RFunction => "rfunction",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntrinsicVolumeEntry {
    pub k: usize,
    pub value: f64,
    pub backend: Backend,
    pub estimate: ScalarEstimate,
}

/// `V_0 .. V_d` with the backend used for each entry.
#[derive(Debug, Clone, PartialEq)]
pub struct IntrinsicVolumeReport {
    pub dimension: usize,
    pub entries: Vec<IntrinsicVolumeEntry>,
    pub warnings: Vec<String>,
}

impl IntrinsicVolumeReport {
    pub fn value(&self, k: usize) -> f64 {
        self.entries[k].value
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }
}

/// `V_d(E) = κ_d Π a_i`.
pub fn volume(e: &Ellipsoid) -> f64 {
    unit_ball_volume(e.dim()) * e.semiaxis_product()
}

/// `V_k` of the ball of radius `r` in dimension `d`:
/// `C(d, k) κ_d / κ_{d-k} · r^k`.
pub fn vk_ball_closed_form(r: f64, d: usize, k: usize) -> f64 {
    assert!(k <= d, "k = {k} exceeds dimension {d}");
    binomial(d, k) * unit_ball_volume(d) / unit_ball_volume(d - k) * r.powi(k as i32)
}

/// The backend picked by [`vk`] for a given `(d, k)`.
pub fn default_backend(d: usize, k: usize) -> Backend {
    if k == 0 || k == d {
        Backend::ClosedForm
    } else if k <= d.div_ceil(2) {
        Backend::Quadrature
    } else {
        Backend::Duality
    }
}

/// `V_k(E)` by the backend of [`default_backend`].
pub fn vk(e: &Ellipsoid, k: usize, cfg: &QuadratureConfig) -> Result<ScalarEstimate> {
    vk_with(e, k, default_backend(e.dim(), k), cfg)
}

/// `V_k(E)` by an explicit backend. `ClosedForm` only exists for `k ∈ {0, d}`.
pub fn vk_with(
    e: &Ellipsoid,
    k: usize,
    backend: Backend,
    cfg: &QuadratureConfig,
) -> Result<ScalarEstimate> {
    let d = e.dim();
    check_range("k", k, 0, d)?;
    match backend {
        Backend::ClosedForm => match k {
            0 => Ok(ScalarEstimate::exact(1.0)),
            _ if k == d => Ok(ScalarEstimate::exact(volume(e))),
            _ => Err(Error::domain(format!(
                "no closed form for V_{k} in dimension {d}"
            ))),
        },
        Backend::Quadrature | Backend::RFunction if k == 0 => Ok(ScalarEstimate::exact(1.0)),
        Backend::Quadrature => vk_quadrature(e, k, cfg),
        Backend::Duality => vk_duality(e, k, cfg),
        Backend::RFunction => vk_rfunction(e, k, cfg),
    }
}

/// Per-axis coefficients `a_i² s_{k-1}(a² without i)` of a normalized ellipsoid.
fn axis_coefficients(sq: &[f64], k: usize) -> Result<Vec<f64>> {
    weighted_leave_one_out(sq, k - 1)
}

/// Semiaxes divided by the largest one, and that largest one.
fn normalized(e: &Ellipsoid) -> (Vec<f64>, f64) {
    let scale = e.max_semiaxis();
    let sq = e
        .semiaxes()
        .iter()
        .map(|a| {
            let b = a / scale;
            b * b
        })
        .collect();
    (sq, scale)
}

/// `V_k(E)` by the elliptic-integral formula, `1 ≤ k ≤ d`.
///
/// The error is the coefficient-weighted sum of the per-integral errors.
pub fn vk_quadrature(e: &Ellipsoid, k: usize, cfg: &QuadratureConfig) -> Result<ScalarEstimate> {
    let d = e.dim();
    check_range("k", k, 1, d)?;
    let (sq, scale) = normalized(e);
    let coef = axis_coefficients(&sq, k)?;
    let mut value = CompensatedSum::new();
    let mut error = CompensatedSum::new();
    for (i, &c) in coef.iter().enumerate() {
        let integral = elliptic_integral(&EllipticIntegrand::intrinsic(sq.clone(), k, i), cfg)?;
        value.add(c * integral.value);
        error.add(c * integral.error);
    }
    let factor = unit_ball_volume(k) * scale.powi(k as i32);
    Ok(ScalarEstimate::deterministic(value.value(), error.value()).scaled(factor))
}

/// `V_k(E)` through the polar ellipsoid, `0 ≤ k ≤ d`.
pub fn vk_duality(e: &Ellipsoid, k: usize, cfg: &QuadratureConfig) -> Result<ScalarEstimate> {
    let d = e.dim();
    check_range("k", k, 0, d)?;
    let dual = if k == d {
        ScalarEstimate::exact(1.0)
    } else {
        vk_quadrature(&e.polar(), d - k, cfg)?
    };
    let factor = unit_ball_volume(k) / (unit_ball_volume(d) * unit_ball_volume(d - k)) * volume(e);
    Ok(dual.scaled(factor))
}

/// `V_k(E)` through Carlson R-functions, `1 ≤ k ≤ d`:
/// `κ_k/2 · B((d+2-k)/2, k/2) Σ_i a_i² s_{k-1}(…) R_{-k/2}(e_i + ½·1, a²)`.
pub fn vk_rfunction(e: &Ellipsoid, k: usize, cfg: &QuadratureConfig) -> Result<ScalarEstimate> {
    let d = e.dim();
    check_range("k", k, 1, d)?;
    let (sq, scale) = normalized(e);
    let coef = axis_coefficients(&sq, k)?;
    let s = 0.5 * k as f64;
    let mut value = CompensatedSum::new();
    let mut error = CompensatedSum::new();
    let mut weights = vec![0.5; d];
    for (i, &c) in coef.iter().enumerate() {
        weights[i] = 1.5;
        let r = carlson_r(s, &weights, &sq, cfg)?;
        weights[i] = 0.5;
        value.add(c * r.value);
        error.add(c * r.error);
    }
    let factor = 0.5
        * unit_ball_volume(k)
        * beta(0.5 * (d + 2 - k) as f64, 0.5 * k as f64)
        * scale.powi(k as i32);
    Ok(ScalarEstimate::deterministic(value.value(), error.value()).scaled(factor))
}

/// `Σ_i ∫_0^∞ w_i(t) / ((c_i t² + 1) Π_j sqrt(c_j t² + 1)) dt` with
/// `w_i(t) = weight_i · t^{power-1}`, evaluated term by term in log space.
fn weighted_integral_sum(
    sq: &[f64],
    weights: &[f64],
    power: f64,
    cfg: &QuadratureConfig,
) -> (f64, f64) {
    let ln_b: Vec<f64> = sq.iter().map(|s| 0.5 * s.ln()).collect();
    let mut value = CompensatedSum::new();
    let mut error = CompensatedSum::new();
    for (i, &w) in weights.iter().enumerate() {
        let ln_f = |ln_t: f64| {
            let mut acc = (power - 1.0) * ln_t;
            for &lb in &ln_b {
                acc -= 0.5 * softplus(2.0 * (lb + ln_t));
            }
            acc - softplus(2.0 * (ln_b[i] + ln_t))
        };
        let out = integrate_log_half_line(ln_f, cfg);
        value.add(w * out.value);
        error.add(w * out.error);
    }
    (value.value(), error.value())
}

/// `V_1 = 2 Σ_i ∫ a_i² / ((a_i²t²+1) Π_j sqrt(a_j²t²+1)) dt`.
pub fn v1_specialized(e: &Ellipsoid, cfg: &QuadratureConfig) -> Result<ScalarEstimate> {
    cfg.validate()?;
    let (sq, scale) = normalized(e);
    let (v, err) = weighted_integral_sum(&sq, &sq, 1.0, cfg);
    Ok(ScalarEstimate::deterministic(2.0 * v, 2.0 * err).scaled(scale))
}

/// `V_2 = π Σ a_i² - π Σ_i ∫ a_i⁴ t / ((a_i²t²+1) Π_j sqrt(a_j²t²+1)) dt`.
pub fn v2_specialized(e: &Ellipsoid, cfg: &QuadratureConfig) -> Result<ScalarEstimate> {
    cfg.validate()?;
    check_range("k", 2, 0, e.dim())?;
    let (sq, scale) = normalized(e);
    let quartic: Vec<f64> = sq.iter().map(|s| s * s).collect();
    let (v, err) = weighted_integral_sum(&sq, &quartic, 2.0, cfg);
    let total: f64 = sq.iter().sum();
    let pi = std::f64::consts::PI;
    Ok(ScalarEstimate::deterministic(pi * (total - v), pi * err).scaled(scale * scale))
}

/// Direct evaluation of `∫ w_i t^{power-1} / ((t²+a_i²) Π_j sqrt(t²+a_j²)) dt`
/// summed over `i`, for the high-order formulas.
fn shifted_integral_sum(
    semiaxes: &[f64],
    weights: &[f64],
    power: f64,
    cfg: &QuadratureConfig,
) -> (f64, f64) {
    let ln_a: Vec<f64> = semiaxes.iter().map(|a| a.ln()).collect();
    // ln(t² + a²) = 2 ln a + softplus(2 (ln t - ln a))
    let ln_sq_plus = |ln_t: f64, la: f64| 2.0 * la + softplus(2.0 * (ln_t - la));
    let mut value = CompensatedSum::new();
    let mut error = CompensatedSum::new();
    for (i, &w) in weights.iter().enumerate() {
        let ln_f = |ln_t: f64| {
            let mut acc = (power - 1.0) * ln_t;
            for &la in &ln_a {
                acc -= 0.5 * ln_sq_plus(ln_t, la);
            }
            acc - ln_sq_plus(ln_t, ln_a[i])
        };
        let out = integrate_log_half_line(ln_f, cfg);
        value.add(w * out.value);
        error.add(w * out.error);
    }
    (value.value(), error.value())
}

/// `V_{d-1} = κ_{d-1} Π a_j² Σ_i ∫ dt / ((t²+a_i²) Π_j sqrt(t²+a_j²))`.
pub fn vdm1_specialized(e: &Ellipsoid, cfg: &QuadratureConfig) -> Result<ScalarEstimate> {
    cfg.validate()?;
    let d = e.dim();
    // normalize by a_min so the shifted denominators stay O(1) near t = 0
    let scale = e.min_semiaxis();
    let a: Vec<f64> = e.semiaxes().iter().map(|x| x / scale).collect();
    let prod_sq: f64 = a.iter().map(|x| x * x).product();
    let (v, err) = shifted_integral_sum(&a, &vec![1.0; d], 1.0, cfg);
    let factor = unit_ball_volume(d - 1) * prod_sq * scale.powi(d as i32 - 1);
    Ok(ScalarEstimate::deterministic(v, err).scaled(factor))
}

/// `V_{d-2} = κ_{d-2} Π a_j Σ a_i^{-2} - κ_{d-2} Π a_j² Σ_i ∫ a_i^{-2} t / ((t²+a_i²) Π_j sqrt(t²+a_j²)) dt`.
pub fn vdm2_specialized(e: &Ellipsoid, cfg: &QuadratureConfig) -> Result<ScalarEstimate> {
    cfg.validate()?;
    let d = e.dim();
    if d < 2 {
        return Err(Error::OutOfRange {
            name: "dimension",
            value: d,
            min: 2,
            max: usize::MAX,
        });
    }
    let scale = e.min_semiaxis();
    let a: Vec<f64> = e.semiaxes().iter().map(|x| x / scale).collect();
    let prod: f64 = a.iter().product();
    let inv_sq: Vec<f64> = a.iter().map(|x| 1.0 / (x * x)).collect();
    let (v, err) = shifted_integral_sum(&a, &inv_sq, 2.0, cfg);
    let kappa = unit_ball_volume(d - 2);
    let value = kappa * prod * inv_sq.iter().sum::<f64>() - kappa * prod * prod * v;
    let error = kappa * prod * prod * err;
    Ok(ScalarEstimate::deterministic(value, error).scaled(scale.powi(d as i32 - 2)))
}

/// Computes every `V_k` with the default backend for each `k`.
pub fn intrinsic_volumes(e: &Ellipsoid, cfg: &QuadratureConfig) -> Result<IntrinsicVolumeReport> {
    let d = e.dim();
    let mut entries = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let backend = default_backend(d, k);
        let estimate = vk_with(e, k, backend, cfg)?;
        entries.push(IntrinsicVolumeEntry {
            k,
            value: estimate.value,
            backend,
            estimate,
        });
    }
    Ok(IntrinsicVolumeReport {
        dimension: d,
        entries,
        warnings: precision_warnings(e),
    })
}

/// Computes every `V_k` with one backend. `V_0 = 1` is always taken in
/// closed form; the closed-form backend itself fails for `0 < k < d`.
pub fn intrinsic_volumes_with(
    e: &Ellipsoid,
    backend: Backend,
    cfg: &QuadratureConfig,
) -> Result<IntrinsicVolumeReport> {
    let d = e.dim();
    let mut entries = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let used = if k == 0 { Backend::ClosedForm } else { backend };
        let estimate = vk_with(e, k, used, cfg)?;
        entries.push(IntrinsicVolumeEntry {
            k,
            value: estimate.value,
            backend: used,
            estimate,
        });
    }
    Ok(IntrinsicVolumeReport {
        dimension: d,
        entries,
        warnings: precision_warnings(e),
    })
}

pub fn precision_warnings(e: &Ellipsoid) -> Vec<String> {
    let ratio = e.eccentricity_ratio();
    if ratio > ECCENTRICITY_WARNING_RATIO {
        vec![format!(
            "semiaxis ratio {ratio:.3e} exceeds {ECCENTRICITY_WARNING_RATIO:e}; integrand conditioning is degraded"
        )]
    } else {
        Vec::new()
    }
}

/// `|E + r B^d| = Σ_k κ_{d-k} V_k(E) r^{d-k}`.
pub fn steiner_volume(e: &Ellipsoid, r: f64, cfg: &QuadratureConfig) -> Result<ScalarEstimate> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain(format!(
            "radius must be finite and nonnegative, got {r}"
        )));
    }
    let d = e.dim();
    if r == 0.0 {
        return Ok(ScalarEstimate::exact(volume(e)));
    }
    let mut value = CompensatedSum::new();
    let mut error = CompensatedSum::new();
    for k in 0..=d {
        let v = vk(e, k, cfg)?;
        let c = unit_ball_volume(d - k) * r.powi((d - k) as i32);
        value.add(c * v.value);
        error.add(c * v.error);
    }
    Ok(ScalarEstimate::deterministic(value.value(), error.value()))
}

/// Quermassintegral `W_j = κ_j V_{d-j} / C(d, d-j)`, `0 ≤ j ≤ d`.
pub fn quermassintegral(e: &Ellipsoid, j: usize, cfg: &QuadratureConfig) -> Result<ScalarEstimate> {
    let d = e.dim();
    check_range("j", j, 0, d)?;
    let k = d - j;
    let v = vk(e, k, cfg)?;
    Ok(v.scaled(unit_ball_volume(j) / binomial(d, k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn e(a: &[f64]) -> Ellipsoid {
        Ellipsoid::new(a.to_vec()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn quadrature_examples() {
        assert!(rel(vk_quadrature(&e(&[1.0, 1.0]), 1, &cfg()).unwrap().value, PI) < 1e-12);
        assert!(
            rel(
                vk_quadrature(&e(&[1.0; 3]), 2, &cfg()).unwrap().value,
                2.0 * PI
            ) < 1e-12
        );
        let el = e(&[3.0, 2.0, 0.5, 1.1]);
        assert!(rel(vk_quadrature(&el, 4, &cfg()).unwrap().value, volume(&el)) < 1e-12);
        assert!(vk_quadrature(&el, 0, &cfg()).is_err());
        assert!(vk_quadrature(&el, 5, &cfg()).is_err());
    }

    #[test]
    fn ball_closed_form_examples() {
        assert!(rel(vk_ball_closed_form(1.0, 2, 1), PI) < 1e-15);
        assert!(rel(vk_ball_closed_form(1.0, 3, 1), 4.0) < 1e-15);
        assert!(rel(vk_ball_closed_form(2.0, 3, 2), 8.0 * PI) < 1e-15);
        assert_eq!(vk_ball_closed_form(3.0, 5, 0), 1.0);
    }

    #[test]
    fn segment_in_one_dimension() {
        let seg = e(&[1.75]);
        let r = intrinsic_volumes(&seg, &cfg()).unwrap();
        assert_eq!(r.values(), vec![1.0, 3.5]);
        assert!(rel(vk_quadrature(&seg, 1, &cfg()).unwrap().value, 3.5) < 1e-12);
        assert!(rel(vk_rfunction(&seg, 1, &cfg()).unwrap().value, 3.5) < 1e-12);
        assert!(rel(v1_specialized(&seg, &cfg()).unwrap().value, 3.5) < 1e-12);
        assert!(rel(vdm1_specialized(&seg, &cfg()).unwrap().value, 1.0) < 1e-12);
        assert!(vdm2_specialized(&seg, &cfg()).is_err());
    }

    #[test]
    fn duality_examples() {
        let el = e(&[2.0, 0.3, 1.4]);
        let vd = vk_duality(&el, 3, &cfg()).unwrap();
        assert!(rel(vd.value, volume(&el)) < 1e-14);
        assert!(rel(vk_duality(&e(&[1.0, 1.0]), 1, &cfg()).unwrap().value, PI) < 1e-12);
        let q = vk_quadrature(&e(&[2.0, 1.0]), 1, &cfg()).unwrap();
        let dd = vk_duality(&e(&[2.0, 1.0]), 1, &cfg()).unwrap();
        assert!((q.value - dd.value).abs() <= q.error + dd.error + 1e-14 * q.value);
        assert!(rel(vk_duality(&el, 0, &cfg()).unwrap().value, 1.0) < 1e-12);
    }

    #[test]
    fn rfunction_examples() {
        assert!(rel(vk_rfunction(&e(&[1.0, 1.0]), 1, &cfg()).unwrap().value, PI) < 1e-12);
        assert!(
            rel(
                vk_rfunction(&e(&[1.0; 3]), 3, &cfg()).unwrap().value,
                4.0 * PI / 3.0
            ) < 1e-12
        );
        let el = e(&[3.0, 2.0, 1.0]);
        let a = vk_rfunction(&el, 2, &cfg()).unwrap().value;
        let b = vk_quadrature(&el, 2, &cfg()).unwrap().value;
        assert!(rel(a, b) < 1e-10);
    }

    /// Half the perimeter of the ellipse with semiaxes (a, b), by the
    /// trapezoidal rule on the periodic arc-length integrand.
    fn half_perimeter(a: f64, b: f64) -> f64 {
        let n = 4096;
        let h = std::f64::consts::TAU / n as f64;
        let s: f64 = (0..n)
            .map(|j| {
                let th = j as f64 * h;
                (a * a * th.sin().powi(2) + b * b * th.cos().powi(2)).sqrt()
            })
            .sum();
        0.5 * s * h
    }

    #[test]
    fn specialized_examples() {
        let v1 = v1_specialized(&e(&[2.0, 1.0]), &cfg()).unwrap().value;
        assert!(rel(v1, half_perimeter(2.0, 1.0)) < 1e-10);
        assert!((v1 - 4.844_224_11).abs() < 1e-8);
        assert!(
            rel(
                v2_specialized(&e(&[1.0; 3]), &cfg()).unwrap().value,
                2.0 * PI
            ) < 1e-12
        );
        assert!(
            rel(
                vdm1_specialized(&e(&[1.0; 3]), &cfg()).unwrap().value,
                2.0 * PI
            ) < 1e-12
        );
    }

    #[test]
    fn specialized_match_generic() {
        let el = e(&[0.4, 2.5, 1.0, 7.0, 0.9]);
        let d = el.dim();
        let pairs = [
            (v1_specialized(&el, &cfg()).unwrap(), 1),
            (v2_specialized(&el, &cfg()).unwrap(), 2),
            (vdm1_specialized(&el, &cfg()).unwrap(), d - 1),
            (vdm2_specialized(&el, &cfg()).unwrap(), d - 2),
        ];
        for (s, k) in pairs {
            let g = vk_quadrature(&el, k, &cfg()).unwrap();
            assert!(
                rel(s.value, g.value) < 1e-10,
                "k = {k}: {} vs {}",
                s.value,
                g.value
            );
        }
    }

    #[test]
    fn report_invariants() {
        let el = e(&[0.5, 3.0, 1.2, 2.2]);
        let r = intrinsic_volumes(&el, &cfg()).unwrap();
        assert_eq!(r.dimension, 4);
        assert_eq!(r.entries[0].value, 1.0);
        assert_eq!(r.entries[0].backend, Backend::ClosedForm);
        assert_eq!(r.entries[1].backend, Backend::Quadrature);
        assert_eq!(r.entries[2].backend, Backend::Quadrature);
        assert_eq!(r.entries[3].backend, Backend::Duality);
        assert_eq!(r.entries[4].backend, Backend::ClosedForm);
        assert!(rel(r.value(4), volume(&el)) < 1e-12);
        assert!(r.values().iter().all(|&v| v > 0.0));
        assert!(r.warnings.is_empty());

        let flat = e(&[1e6, 1e-6]);
        assert_eq!(intrinsic_volumes(&flat, &cfg()).unwrap().warnings.len(), 1);
    }

    #[test]
    fn explicit_backend_reports() {
        let el = e(&[0.5, 3.0, 1.2]);
        let base = intrinsic_volumes(&el, &cfg()).unwrap();
        for backend in [Backend::Quadrature, Backend::Duality, Backend::RFunction] {
            let r = intrinsic_volumes_with(&el, backend, &cfg()).unwrap();
            for k in 0..=3 {
                assert!(rel(r.value(k), base.value(k)) < 1e-10, "{backend} k = {k}");
            }
        }
        assert!(intrinsic_volumes_with(&el, Backend::ClosedForm, &cfg()).is_err());
    }

    #[test]
    fn steiner_examples() {
        // disk of radius 2
        let s = steiner_volume(&e(&[1.0, 1.0]), 1.0, &cfg()).unwrap();
        assert!(rel(s.value, 4.0 * PI) < 1e-12);
        let el = e(&[2.0, 0.7, 1.1]);
        assert_eq!(steiner_volume(&el, 0.0, &cfg()).unwrap().value, volume(&el));
        assert!(steiner_volume(&el, -1.0, &cfg()).is_err());
        // ball of radius 1.5 grown by 0.5
        let b = Ellipsoid::ball(4, 1.5).unwrap();
        let s = steiner_volume(&b, 0.5, &cfg()).unwrap();
        assert!(rel(s.value, unit_ball_volume(4) * 2f64.powi(4)) < 1e-12);
    }

    #[test]
    fn quermassintegral_examples() {
        let ball = Ellipsoid::ball(5, 1.0).unwrap();
        assert!(
            rel(
                quermassintegral(&ball, 0, &cfg()).unwrap().value,
                unit_ball_volume(5)
            ) < 1e-14
        );
        assert!(
            rel(
                quermassintegral(&e(&[1.0, 1.0]), 1, &cfg()).unwrap().value,
                PI
            ) < 1e-12
        );
        let el = e(&[0.3, 2.0, 1.0]);
        assert!(
            rel(
                quermassintegral(&el, 3, &cfg()).unwrap().value,
                unit_ball_volume(3)
            ) < 1e-15
        );
        assert!(quermassintegral(&el, 4, &cfg()).is_err());
        // every quermassintegral of a ball equals κ_d
        for j in 0..=5 {
            assert!(
                rel(
                    quermassintegral(&ball, j, &cfg()).unwrap().value,
                    unit_ball_volume(5)
                ) < 1e-11
            );
        }
    }

    #[test]
    fn permutation_invariance() {
        let a = [0.2, 5.0, 1.3, 0.9];
        let mut b = a;
        b.reverse();
        for k in 1..=4 {
            for backend in [Backend::Quadrature, Backend::Duality, Backend::RFunction] {
                let x = vk_with(&e(&a), k, backend, &cfg()).unwrap().value;
                let y = vk_with(&e(&b), k, backend, &cfg()).unwrap().value;
                assert!(rel(x, y) < 1e-13, "{backend} k = {k}");
            }
        }
    }
}
