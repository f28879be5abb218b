//! Expected volumes of random simplices.
//!
//! For `k + 1` independent uniform points in an ellipsoid `E`, and for
//! `k + 1` centred Gaussian points with covariance spectrum `λ`, the mean
//! `k`-volume of their convex hull is a Gamma-function prefactor times
//! `Σ_i a_i² s_{k-1}(…) ∫ t^{k-1} / ((a_i²t²+1) Π_j sqrt(a_j²t²+1)) dt`,
//! i.e. the prefactor times `V_k(E) / κ_k` (with `a_i² = λ_i` in the
//! Gaussian case). Each formula has a Monte-Carlo oracle that samples the
//! points and averages Gram-determinant volumes.

use nalgebra::DMatrix;

use crate::error::{check_range, check_samples, Error, Result};
use crate::estimate::ScalarEstimate;
use crate::geometry::{Ellipsoid, SpectrumPSD};
use crate::intrinsic::vk_quadrature;
use crate::montecarlo::sharded_mean;
use crate::quad::QuadratureConfig;
use crate::sampling::{fill_gaussian, fill_unit_ball};
use crate::special::{factorial, ln_factorial, ln_gamma, unit_ball_volume};

#[derive(Debug, Clone, PartialEq)]
pub enum SimplexModel {
    UniformInEllipsoid(Ellipsoid),
    Gaussian(SpectrumPSD),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexExpectationRequest {
    pub model: SimplexModel,
    pub k: usize,
}

impl SimplexExpectationRequest {
    pub fn new(model: SimplexModel, k: usize) -> Result<Self> {
        let d = match &model {
            SimplexModel::UniformInEllipsoid(e) => e.dim(),
            SimplexModel::Gaussian(s) => s.dim(),
        };
        check_range("k", k, 1, d)?;
        Ok(SimplexExpectationRequest { model, k })
    }

    pub fn evaluate(&self, cfg: &QuadratureConfig) -> Result<ScalarEstimate> {
        match &self.model {
            SimplexModel::UniformInEllipsoid(e) => expected_simplex_uniform(e, self.k, cfg),
            SimplexModel::Gaussian(s) => expected_simplex_gaussian(s, self.k, cfg),
        }
    }

    pub fn monte_carlo(&self, n_samples: u64, seed: u64) -> Result<ScalarEstimate> {
        match &self.model {
            SimplexModel::UniformInEllipsoid(e) => mc_simplex_uniform(e, self.k, n_samples, seed),
            SimplexModel::Gaussian(s) => mc_simplex_gaussian(s, self.k, n_samples, seed),
        }
    }
}

/// Prefactor of the uniform-in-ellipsoid formula,
/// `Γ(m + 1) / Γ(m + 1/2) · (Γ(d/2 + 1) / Γ((d+1)/2 + 1))^{k+1} / (2^k Γ(k/2 + 1))`
/// with `m = (d+1)(k+1)/2`.
pub fn uniform_prefactor(d: usize, k: usize) -> f64 {
    let (df, kf) = (d as f64, k as f64);
    let m = 0.5 * (df + 1.0) * (kf + 1.0);
    let ln = -kf * 2f64.ln() - ln_gamma(0.5 * kf + 1.0) + ln_gamma(m + 1.0) - ln_gamma(m + 0.5)
        + (kf + 1.0) * (ln_gamma(0.5 * df + 1.0) - ln_gamma(0.5 * (df + 1.0) + 1.0));
    ln.exp()
}

/// Prefactor of the Gaussian formula, `sqrt(k+1) / (Γ(k/2 + 1) 2^{k/2})`.
pub fn gaussian_prefactor(k: usize) -> f64 {
    let kf = k as f64;
    (0.5 * (kf + 1.0).ln() - ln_gamma(0.5 * kf + 1.0) - 0.5 * kf * 2f64.ln()).exp()
}

/// The Gaussian prefactor before the duplication formula is applied:
/// `(d-k)!/d! · 2^{k/2} sqrt(k+1) / Γ(k/2+1) · Γ(d/2+1) Γ((d+1)/2) / (Γ((d-k)/2+1) Γ((d-k+1)/2))`.
pub fn gaussian_prefactor_unsimplified(d: usize, k: usize) -> f64 {
    assert!(k <= d);
    let (df, kf) = (d as f64, k as f64);
    let ln = ln_factorial(d - k) - ln_factorial(d) + 0.5 * kf * 2f64.ln() + 0.5 * (kf + 1.0).ln()
        - ln_gamma(0.5 * kf + 1.0)
        + ln_gamma(0.5 * df + 1.0)
        + ln_gamma(0.5 * (df + 1.0))
        - ln_gamma(0.5 * (df - kf) + 1.0)
        - ln_gamma(0.5 * (df - kf + 1.0));
    ln.exp()
}

/// Mean `k`-volume of the simplex spanned by `k + 1` independent uniform
/// points in `E`.
pub fn expected_simplex_uniform(
    e: &Ellipsoid,
    k: usize,
    cfg: &QuadratureConfig,
) -> Result<ScalarEstimate> {
    let d = e.dim();
    check_range("k", k, 1, d)?;
    let v = vk_quadrature(e, k, cfg)?;
    Ok(v.scaled(uniform_prefactor(d, k) / unit_ball_volume(k)))
}

/// Mean `k`-volume of the simplex spanned by `k + 1` independent centred
/// Gaussian points whose covariance has spectrum `spec`.
pub fn expected_simplex_gaussian(
    spec: &SpectrumPSD,
    k: usize,
    cfg: &QuadratureConfig,
) -> Result<ScalarEstimate> {
    let d = spec.dim();
    check_range("k", k, 1, d)?;
    let v = vk_quadrature(&spec.ellipsoid(), k, cfg)?;
    Ok(v.scaled(gaussian_prefactor(k) / unit_ball_volume(k)))
}

/// Eigenvalues of a symmetric positive-definite covariance matrix given as
/// rows.
pub fn spectrum_from_covariance(rows: &[Vec<f64>]) -> Result<SpectrumPSD> {
    let d = rows.len();
    if d == 0 {
        return Err(Error::EmptyDimension);
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad.len(),
        });
    }
    let m = DMatrix::from_fn(d, d, |i, j| rows[i][j]);
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let scale = m.amax().max(f64::MIN_POSITIVE);
    for i in 0..d {
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::NotPositiveDefinite);
            }
        }
    }
    let eig = m.symmetric_eigen();
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if values.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::NotPositiveDefinite);
    }
    SpectrumPSD::new(values)
}

/// Scratch space for Gram-determinant volumes of `k` edge vectors in `R^d`.
#[derive(Debug, Clone)]
pub struct GramWorkspace {
    k: usize,
    d: usize,
    /// row-major `k × d` edge vectors
    pub vectors: Vec<f64>,
    gram: Vec<f64>,
}

impl GramWorkspace {
    pub fn new(k: usize, d: usize) -> Self {
        GramWorkspace {
            k,
            d,
            vectors: vec![0.0; k * d],
            gram: vec![0.0; k * k],
        }
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.vectors[i * self.d..(i + 1) * self.d]
    }

    /// `sqrt(det G)` of the Gram matrix of the stored vectors.
    ///
    /// Cholesky first; if a pivot is not positive the determinant is taken
    /// from the symmetric eigenvalues, each clamped at zero.
    pub fn sqrt_det(&mut self) -> f64 {
        let (k, d) = (self.k, self.d);
        for i in 0..k {
            for j in 0..=i {
                let (ri, rj) = (
                    &self.vectors[i * d..(i + 1) * d],
                    &self.vectors[j * d..(j + 1) * d],
                );
                let dot: f64 = ri.iter().zip(rj).map(|(x, y)| x * y).sum();
                self.gram[i * k + j] = dot;
                self.gram[j * k + i] = dot;
            }
        }
        match cholesky_sqrt_det(&self.gram, k) {
            Some(v) => v,
            None => eigen_sqrt_det(&self.gram, k),
        }
    }
}

/// `Π L_ii` of the Cholesky factor, or `None` on a non-positive pivot.
fn cholesky_sqrt_det(g: &[f64], k: usize) -> Option<f64> {
    let mut l = [0.0f64; 64];
    let mut heap;
    let l: &mut [f64] = if k * k <= 64 {
        &mut l[..k * k]
    } else {
        heap = vec![0.0; k * k];
        &mut heap
    };
    let mut prod = 1.0;
    for i in 0..k {
        for j in 0..=i {
            let mut s = g[i * k + j];
            for p in 0..j {
                s -= l[i * k + p] * l[j * k + p];
            }
            if i == j {
                if !(s > 0.0) {
                    return None;
                }
                let r = s.sqrt();
                l[i * k + i] = r;
                prod *= r;
            } else {
                l[i * k + j] = s / l[j * k + j];
            }
        }
    }
    Some(prod)
}

fn eigen_sqrt_det(g: &[f64], k: usize) -> f64 {
    let m = DMatrix::from_row_slice(k, k, g);
    let det: f64 = m
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|&v| v.max(0.0))
        .product();
    det.sqrt()
}

/// Monte-Carlo estimate of the uniform-in-ellipsoid mean simplex volume.
pub fn mc_simplex_uniform(
    e: &Ellipsoid,
    k: usize,
    n_samples: u64,
    seed: u64,
) -> Result<ScalarEstimate> {
    let d = e.dim();
    check_range("k", k, 1, d)?;
    check_samples(n_samples)?;
    let a = e.semiaxes();
    let inv_fact = 1.0 / factorial(k);
    let moments = sharded_mean(
        n_samples,
        seed,
        || (GramWorkspace::new(k, d), vec![0.0; d], vec![0.0; d]),
        |(ws, origin, p), rng| {
            fill_unit_ball(rng, origin);
            for (o, ai) in origin.iter_mut().zip(a) {
                *o *= ai;
            }
            for r in 0..k {
                fill_unit_ball(rng, p);
                let row = ws.row_mut(r);
                for j in 0..d {
                    row[j] = a[j] * p[j] - origin[j];
                }
            }
            ws.sqrt_det() * inv_fact
        },
    );
    Ok(moments.estimate())
}

/// Monte-Carlo estimate of the Gaussian mean simplex volume.
pub fn mc_simplex_gaussian(
    spec: &SpectrumPSD,
    k: usize,
    n_samples: u64,
    seed: u64,
) -> Result<ScalarEstimate> {
    let d = spec.dim();
    check_range("k", k, 1, d)?;
    check_samples(n_samples)?;
    let sd: Vec<f64> = spec.eigenvalues().iter().map(|l| l.sqrt()).collect();
    let inv_fact = 1.0 / factorial(k);
    let moments = sharded_mean(
        n_samples,
        seed,
        || (GramWorkspace::new(k, d), vec![0.0; d], vec![0.0; d]),
        |(ws, origin, p), rng| {
            fill_gaussian(rng, origin);
            for r in 0..k {
                fill_gaussian(rng, p);
                let row = ws.row_mut(r);
                for j in 0..d {
                    row[j] = sd[j] * (p[j] - origin[j]);
                }
            }
            ws.sqrt_det() * inv_fact
        },
    );
    Ok(moments.estimate())
}

/// Monte-Carlo estimate of `V_k(E) = (2π)^{k/2} / k! · E sqrt(det⟨Aξ_i, Aξ_j⟩)`
/// with `ξ_1..ξ_k` independent standard Gaussian vectors and
/// `A = diag(a)`.
pub fn mc_gaussian_gram_vk(
    e: &Ellipsoid,
    k: usize,
    n_samples: u64,
    seed: u64,
) -> Result<ScalarEstimate> {
    let d = e.dim();
    check_range("k", k, 1, d)?;
    check_samples(n_samples)?;
    let a = e.semiaxes();
    let moments = sharded_mean(
        n_samples,
        seed,
        || GramWorkspace::new(k, d),
        |ws, rng| {
            for r in 0..k {
                let row = ws.row_mut(r);
                fill_gaussian(rng, row);
                for (x, ai) in row.iter_mut().zip(a) {
                    *x *= ai;
                }
            }
            ws.sqrt_det()
        },
    );
    let factor = (2.0 * std::f64::consts::PI).powf(0.5 * k as f64) / factorial(k);
    Ok(moments.estimate().scaled(factor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn disk_constants() {
        let disk = Ellipsoid::ball(2, 1.0).unwrap();
        let m1 = expected_simplex_uniform(&disk, 1, &cfg()).unwrap();
        assert!((m1.value - 128.0 / (45.0 * PI)).abs() < 1e-12, "{m1}");
        let m2 = expected_simplex_uniform(&disk, 2, &cfg()).unwrap();
        assert!((m2.value - 35.0 / (48.0 * PI)).abs() < 1e-12, "{m2}");
    }

    #[test]
    fn full_dimensional_ball_simplex() {
        // a random tetrahedron in the 3-ball has mean volume 9/715 of the ball
        let ball = Ellipsoid::ball(3, 1.0).unwrap();
        let m3 = expected_simplex_uniform(&ball, 3, &cfg()).unwrap();
        assert!(rel(m3.value, 9.0 / 715.0 * 4.0 * PI / 3.0) < 1e-12, "{m3}");
        // mean distance of two uniform points in the unit 3-ball: 36/35
        let m1 = expected_simplex_uniform(&ball, 1, &cfg()).unwrap();
        assert!(rel(m1.value, 36.0 / 35.0) < 1e-12, "{m1}");
    }

    #[test]
    fn uniform_scaling() {
        let e = Ellipsoid::new(vec![0.5, 1.5, 1.0]).unwrap();
        let e2 = e.scaled(2.0).unwrap();
        for k in 1..=3 {
            let a = expected_simplex_uniform(&e, k, &cfg()).unwrap().value;
            let b = expected_simplex_uniform(&e2, k, &cfg()).unwrap().value;
            assert!(rel(b, a * 2f64.powi(k as i32)) < 1e-12);
        }
    }

    #[test]
    fn gaussian_identity_spectrum() {
        let s1 = SpectrumPSD::new(vec![1.0]).unwrap();
        let v = expected_simplex_gaussian(&s1, 1, &cfg()).unwrap().value;
        assert!(rel(v, 2.0 / PI.sqrt()) < 1e-12);
        let s3 = SpectrumPSD::new(vec![1.0; 3]).unwrap();
        let v = expected_simplex_gaussian(&s3, 1, &cfg()).unwrap().value;
        assert!(rel(v, 4.0 / PI.sqrt()) < 1e-12);
    }

    #[test]
    fn gaussian_scaling() {
        let s = SpectrumPSD::new(vec![0.3, 2.0, 1.1]).unwrap();
        let s4 = SpectrumPSD::new(s.eigenvalues().iter().map(|l| 4.0 * l).collect()).unwrap();
        for k in 1..=3 {
            let a = expected_simplex_gaussian(&s, k, &cfg()).unwrap().value;
            let b = expected_simplex_gaussian(&s4, k, &cfg()).unwrap().value;
            assert!(rel(b, a * 4f64.powf(0.5 * k as f64)) < 1e-12);
        }
    }

    #[test]
    fn duplication_constant() {
        for d in 1..=50 {
            for k in 1..=d {
                let a = gaussian_prefactor(k);
                let b = gaussian_prefactor_unsimplified(d, k);
                assert!(rel(a, b) < 1e-12, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn range_errors() {
        let e = Ellipsoid::ball(2, 1.0).unwrap();
        assert!(expected_simplex_uniform(&e, 0, &cfg()).is_err());
        assert!(expected_simplex_uniform(&e, 3, &cfg()).is_err());
        assert!(mc_simplex_uniform(&e, 1, 1, 0).is_err());
        assert!(mc_gaussian_gram_vk(&e, 3, 100, 0).is_err());
        assert!(SimplexExpectationRequest::new(SimplexModel::UniformInEllipsoid(e), 3).is_err());
    }

    #[test]
    fn gram_volume_of_known_simplices() {
        let mut ws = GramWorkspace::new(2, 3);
        ws.row_mut(0).copy_from_slice(&[1.0, 0.0, 0.0]);
        ws.row_mut(1).copy_from_slice(&[0.0, 2.0, 0.0]);
        assert!((ws.sqrt_det() - 2.0).abs() < 1e-15);
        // parallel edges: Cholesky fails, eigen fallback clamps to zero
        ws.row_mut(1).copy_from_slice(&[3.0, 0.0, 0.0]);
        assert!(ws.sqrt_det() < 1e-7);
    }

    #[test]
    fn covariance_spectrum() {
        let rows = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let mut ev = spectrum_from_covariance(&rows)
            .unwrap()
            .eigenvalues()
            .to_vec();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
        assert_eq!(
            spectrum_from_covariance(&[vec![1.0, 2.0], vec![2.0, 1.0]]),
            Err(Error::NotPositiveDefinite)
        );
        assert_eq!(
            spectrum_from_covariance(&[vec![1.0, 0.5], vec![0.0, 1.0]]),
            Err(Error::NotPositiveDefinite)
        );
        assert!(spectrum_from_covariance(&[vec![1.0], vec![1.0]]).is_err());
    }

    #[test]
    fn mc_is_reproducible_and_consistent() {
        let disk = Ellipsoid::ball(2, 1.0).unwrap();
        let a = mc_simplex_uniform(&disk, 1, 200_000, 3).unwrap();
        let b = mc_simplex_uniform(&disk, 1, 200_000, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.z_score(128.0 / (45.0 * PI)) < 4.0, "{a}");

        let s = SpectrumPSD::new(vec![1.0]).unwrap();
        let g = mc_simplex_gaussian(&s, 1, 200_000, 4).unwrap();
        assert!(g.z_score(2.0 / PI.sqrt()) < 4.0, "{g}");

        let v = mc_gaussian_gram_vk(&disk, 1, 200_000, 5).unwrap();
        assert!(v.z_score(PI) < 4.0, "{v}");
    }

    #[test]
    fn thin_ellipsoid_triangles_are_small() {
        let flat = Ellipsoid::new(vec![1.0, 1e-8]).unwrap();
        let m = mc_simplex_uniform(&flat, 2, 10_000, 1).unwrap();
        assert!(m.value >= 0.0 && m.value < 1e-8);
        let f = expected_simplex_uniform(&flat, 2, &cfg()).unwrap();
        assert!(f.value < 1e-8);
    }
}
