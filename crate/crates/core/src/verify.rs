//! Monte-Carlo oracles that check the integral formulas by independent
//! routes, and the identity suites built from them.
//!
//! * `V_k` from the sphere-integral representation
//!   `V_k = 1/(k κ_{d-k}) Σ_i a_i² s_{k-1}(…) ∫_{S^{d-1}} u_i² / h^k(u) σ(du)`,
//!   with one shared set of sphere samples for all `d` terms.
//! * the sphere form of the Gaussian-determinant representation.
//! * the left-hand side `∫ |u_i|^α / h^β dσ` of the sphere-integral
//!   identity, compared against its one-dimensional right-hand side.
//! * the parallel-body volume `|E + rB^d|` by rejection sampling.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_range, check_samples, Error, Result};
use crate::estimate::ScalarEstimate;
use crate::geometry::{Ellipsoid, SpectrumPSD};
use crate::intrinsic::{self, vk_ball_closed_form, vk_duality, vk_quadrature, vk_rfunction};
use crate::montecarlo::sharded_mean;
use crate::quad::{check_prop3_domain, prop3_rhs, QuadratureConfig};
use crate::randsimplex::{
    expected_simplex_gaussian, expected_simplex_uniform, mc_simplex_gaussian, mc_simplex_uniform,
    GramWorkspace,
};
use crate::sampling::fill_unit_sphere;
pub use crate::sampling::SphereSampler;
use crate::special::{factorial, ln_gamma, sphere_area, unit_ball_volume};
use crate::sympoly::weighted_leave_one_out;

/// z-score threshold used by every statistical check.
pub const Z_THRESHOLD: f64 = 4.0;

/// `V_k(E)` from the sphere-integral representation by Monte Carlo.
pub fn vk_sphere_mc(e: &Ellipsoid, k: usize, n_samples: u64, seed: u64) -> Result<ScalarEstimate> {
    let d = e.dim();
    check_range("k", k, 1, d)?;
    check_samples(n_samples)?;
    let sq = e.squared_semiaxes();
    let coef = weighted_leave_one_out(&sq, k - 1)?;
    let moments = sharded_mean(
        n_samples,
        seed,
        || vec![0.0; d],
        |u, rng| {
            fill_unit_sphere(rng, u);
            let h = e.support_unchecked(u);
            let s: f64 = coef.iter().zip(u.iter()).map(|(c, x)| c * x * x).sum();
            s / h.powi(k as i32)
        },
    );
    let factor = sphere_area(d) / (k as f64 * unit_ball_volume(d - k));
    Ok(moments.estimate().scaled(factor))
}

/// `E‖ξ‖ = sqrt(2) Γ((d+1)/2) / Γ(d/2)` for a standard Gaussian in `R^d`.
pub fn gaussian_norm_mean(d: usize) -> f64 {
    let df = d as f64;
    (0.5 * 2f64.ln() + ln_gamma(0.5 * (df + 1.0)) - ln_gamma(0.5 * df)).exp()
}

/// `V_k(E) = (2π)^{k/2}/k! · (E‖ξ‖)^k · E sqrt(det⟨Aη_i, Aη_j⟩)` with
/// `η_i` uniform on the sphere.
pub fn vk_sphere_gram_mc(
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
                fill_unit_sphere(rng, row);
                for (x, ai) in row.iter_mut().zip(a) {
                    *x *= ai;
                }
            }
            ws.sqrt_det()
        },
    );
    let factor =
        (2.0 * PI).powf(0.5 * k as f64) / factorial(k) * gaussian_norm_mean(d).powi(k as i32);
    Ok(moments.estimate().scaled(factor))
}

/// Monte-Carlo estimate of `∫_{S^{d-1}} |u_i|^α / h_E(u)^β σ(du)`.
pub fn prop3_lhs_mc(
    e: &Ellipsoid,
    i: usize,
    alpha: f64,
    beta: f64,
    n_samples: u64,
    seed: u64,
) -> Result<ScalarEstimate> {
    let d = e.dim();
    check_range("i", i, 0, d - 1)?;
    check_prop3_domain(d, alpha, beta)?;
    check_samples(n_samples)?;
    let moments = sharded_mean(
        n_samples,
        seed,
        || vec![0.0; d],
        |u, rng| {
            fill_unit_sphere(rng, u);
            u[i].abs().powf(alpha) / e.support_unchecked(u).powf(beta)
        },
    );
    Ok(moments.estimate().scaled(sphere_area(d)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop3Report {
    pub lhs: ScalarEstimate,
    pub rhs: ScalarEstimate,
    pub z_score: f64,
}

/// Sphere-integral identity: Monte-Carlo left side against the quadrature
/// right side. `z_score = |lhs - rhs| / se(lhs)`.
#[allow(clippy::too_many_arguments)]
pub fn prop3_identity_check(
    e: &Ellipsoid,
    i: usize,
    alpha: f64,
    beta: f64,
    n_samples: u64,
    seed: u64,
    cfg: &QuadratureConfig,
) -> Result<Prop3Report> {
    let rhs = prop3_rhs(e, i, alpha, beta, cfg)?;
    let lhs = prop3_lhs_mc(e, i, alpha, beta, n_samples, seed)?;
    Ok(Prop3Report {
        lhs,
        rhs,
        z_score: lhs.z_score(rhs.value),
    })
}

/// `|E + r B^d|` by uniform sampling of the box `Π [-(a_i + r), a_i + r]`.
pub fn steiner_mc_volume(
    e: &Ellipsoid,
    r: f64,
    n_samples: u64,
    seed: u64,
) -> Result<ScalarEstimate> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain(format!(
            "radius must be finite and nonnegative, got {r}"
        )));
    }
    check_samples(n_samples)?;
    let d = e.dim();
    let half: Vec<f64> = e.semiaxes().iter().map(|a| a + r).collect();
    let box_volume: f64 = half.iter().map(|h| 2.0 * h).product();
    let moments = sharded_mean(
        n_samples,
        seed,
        || vec![0.0; d],
        |x, rng| {
            for (xi, h) in x.iter_mut().zip(&half) {
                *xi = h * (2.0 * rng.random::<f64>() - 1.0);
            }
            if e.gauge_squared_unchecked(x) <= 1.0 || e.distance_unchecked(x) <= r {
                1.0
            } else {
                0.0
            }
        },
    );
    Ok(moments.estimate().scaled(box_volume))
}

/// Identity suites exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Ball,
    Duality,
    Prop3,
    Steiner,
    Simplex,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Ball,
        Suite::Duality,
        Suite::Prop3,
        Suite::Steiner,
        Suite::Simplex,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Ball => "ball",
            Suite::Duality => "duality",
            Suite::Prop3 => "prop3",
            Suite::Steiner => "steiner",
            Suite::Simplex => "simplex",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    RelativeError,
    ZScore,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::RelativeError => "relative_error",
            Metric::ZScore => "z_score",
        }
    }
}

/// One comparison inside a suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: ScalarEstimate,
    pub reference: ScalarEstimate,
    pub metric: Metric,
    pub score: f64,
    pub threshold: f64,
}

impl Check {
    fn relative(
        name: String,
        measured: ScalarEstimate,
        reference: ScalarEstimate,
        threshold: f64,
    ) -> Self {
        let score = measured.relative_error(reference.value);
        Check {
            name,
            measured,
            reference,
            metric: Metric::RelativeError,
            score,
            threshold,
        }
    }

    fn z(name: String, measured: ScalarEstimate, reference: ScalarEstimate) -> Self {
        let score = measured.z_score_against(&reference);
        Check {
            name,
            measured,
            reference,
            metric: Metric::ZScore,
            score,
            threshold: Z_THRESHOLD,
        }
    }

    pub fn passed(&self) -> bool {
        self.score <= self.threshold
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

fn random_ellipsoid<R: Rng>(rng: &mut R, d: usize, lo: f64, hi: f64) -> Ellipsoid {
    Ellipsoid::new((0..d).map(|_| log_uniform(rng, lo, hi)).collect()).expect("positive semiaxes")
}

fn fmt_axes(a: &[f64]) -> String {
    let parts: Vec<String> = a.iter().map(|v| format!("{v:.4}")).collect();
    format!("({})", parts.join(","))
}

/// Runs one identity suite. `samples` is the Monte-Carlo size per check.
pub fn run_suite(
    suite: Suite,
    seed: u64,
    samples: u64,
    cfg: &QuadratureConfig,
) -> Result<SuiteReport> {
    check_samples(samples)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    match suite {
        Suite::Ball => {
            for d in 2..=6 {
                for r in [0.5, 1.0, 3.0] {
                    let ball = Ellipsoid::ball(d, r)?;
                    for k in 1..=d {
                        let want = ScalarEstimate::exact(vk_ball_closed_form(r, d, k));
                        checks.push(Check::relative(
                            format!("quadrature d={d} r={r} k={k}"),
                            vk_quadrature(&ball, k, cfg)?,
                            want,
                            1e-10,
                        ));
                        checks.push(Check::relative(
                            format!("duality d={d} r={r} k={k}"),
                            vk_duality(&ball, k, cfg)?,
                            want,
                            1e-10,
                        ));
                    }
                }
            }
        }
        Suite::Duality => {
            for _ in 0..10 {
                let d = rng.random_range(2..=6);
                let e = random_ellipsoid(&mut rng, d, 1e-2, 1e2);
                for k in 1..=d {
                    let q = vk_quadrature(&e, k, cfg)?;
                    let du = vk_duality(&e, k, cfg)?;
                    let rf = vk_rfunction(&e, k, cfg)?;
                    let tag = fmt_axes(e.semiaxes());
                    checks.push(Check::relative(format!("duality {tag} k={k}"), du, q, 1e-8));
                    checks.push(Check::relative(
                        format!("rfunction {tag} k={k}"),
                        rf,
                        q,
                        1e-9,
                    ));
                }
            }
        }
        Suite::Prop3 => {
            for _ in 0..8 {
                let (e, i, alpha, beta) = random_prop3_case(&mut rng);
                let rep = prop3_identity_check(&e, i, alpha, beta, samples, rng.random(), cfg)?;
                checks.push(Check::z(
                    format!(
                        "{} i={i} alpha={alpha:.3} beta={beta:.3}",
                        fmt_axes(e.semiaxes())
                    ),
                    rep.lhs,
                    rep.rhs,
                ));
            }
        }
        Suite::Steiner => {
            for d in [2usize, 3] {
                for r in [0.25, 1.0] {
                    let e = random_ellipsoid(&mut rng, d, 0.3, 3.0);
                    let mc = steiner_mc_volume(&e, r, samples, rng.random())?;
                    let formula = intrinsic::steiner_volume(&e, r, cfg)?;
                    checks.push(Check::z(
                        format!("{} r={r}", fmt_axes(e.semiaxes())),
                        mc,
                        formula,
                    ));
                }
            }
        }
        Suite::Simplex => {
            let disk = Ellipsoid::ball(2, 1.0)?;
            checks.push(Check::z(
                "uniform unit disk k=1".into(),
                mc_simplex_uniform(&disk, 1, samples, rng.random())?,
                expected_simplex_uniform(&disk, 1, cfg)?,
            ));
            for _ in 0..4 {
                let d = rng.random_range(1..=4);
                let k = rng.random_range(1..=d);
                let e = random_ellipsoid(&mut rng, d, 0.2, 5.0);
                checks.push(Check::z(
                    format!("uniform {} k={k}", fmt_axes(e.semiaxes())),
                    mc_simplex_uniform(&e, k, samples, rng.random())?,
                    expected_simplex_uniform(&e, k, cfg)?,
                ));
                let spec =
                    SpectrumPSD::new((0..d).map(|_| log_uniform(&mut rng, 0.1, 10.0)).collect())?;
                checks.push(Check::z(
                    format!("gaussian {} k={k}", fmt_axes(spec.eigenvalues())),
                    mc_simplex_gaussian(&spec, k, samples, rng.random())?,
                    expected_simplex_gaussian(&spec, k, cfg)?,
                ));
            }
        }
    }
    Ok(SuiteReport { suite, checks })
}

/// A random admissible `(E, i, α, β)` with `d ≤ 5`, `β ∈ (0, 4]` and `α`
/// at least 0.25 inside the admissible region (which keeps the Monte-Carlo
/// variance finite).
pub fn random_prop3_case<R: Rng>(rng: &mut R) -> (Ellipsoid, usize, f64, f64) {
    let d = rng.random_range(2..=5);
    let e = random_ellipsoid(rng, d, 0.2, 5.0);
    let i = rng.random_range(0..d);
    let beta = 4.0 * (1.0 - rng.random::<f64>()).max(0.05);
    let df = d as f64;
    let floor = (df - beta).max(beta - df).max(0.0);
    let alpha = floor + 0.25 + 3.0 * rng.random::<f64>();
    (e, i, alpha, beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_mc_examples() {
        let disk = Ellipsoid::ball(2, 1.0).unwrap();
        let v = vk_sphere_mc(&disk, 1, 100_000, 1).unwrap();
        // the integrand is constant on the ball, so the estimate is exact
        assert!((v.value - PI).abs() < 1e-12, "{v}");
        let el = Ellipsoid::new(vec![2.0, 1.0]).unwrap();
        let v = vk_sphere_mc(&el, 1, 400_000, 2).unwrap();
        let want = intrinsic::v1_specialized(&el, &QuadratureConfig::default()).unwrap();
        assert!(v.z_score(want.value) < 4.0, "{v} vs {want}");
        let ball = Ellipsoid::ball(3, 1.0).unwrap();
        let v = vk_sphere_mc(&ball, 3, 10_000, 3).unwrap();
        assert!((v.value - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_norm_mean_values() {
        // E|N(0,1)| = sqrt(2/π); E‖ξ‖ in 3D = 2 sqrt(2/π)
        assert!((gaussian_norm_mean(1) - (2.0 / PI).sqrt()).abs() < 1e-14);
        assert!((gaussian_norm_mean(3) - 2.0 * (2.0 / PI).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn prop3_examples() {
        let cfg = QuadratureConfig::default();
        let disk = Ellipsoid::ball(2, 1.0).unwrap();
        let r = prop3_identity_check(&disk, 0, 2.0, 2.0, 200_000, 1, &cfg).unwrap();
        assert!((r.rhs.value - PI).abs() < 1e-10);
        assert!(r.z_score <= 3.0, "{r:?}");
        let e = Ellipsoid::new(vec![3.0, 1.0, 1.0]).unwrap();
        let r = prop3_identity_check(&e, 0, 2.0, 1.0, 200_000, 2, &cfg).unwrap();
        assert!(r.z_score <= 4.0, "{r:?}");
        assert!(matches!(
            prop3_identity_check(&disk, 0, 0.0, 1.0, 1000, 1, &cfg),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn steiner_mc_examples() {
        let disk = Ellipsoid::ball(2, 1.0).unwrap();
        let v = steiner_mc_volume(&disk, 1.0, 200_000, 1).unwrap();
        assert!(v.z_score(4.0 * PI) < 3.0, "{v}");
        let el = Ellipsoid::new(vec![2.0, 1.0]).unwrap();
        let v = steiner_mc_volume(&el, 0.0, 200_000, 2).unwrap();
        assert!(v.z_score(2.0 * PI) < 3.0, "{v}");
        assert!(steiner_mc_volume(&el, -0.1, 100, 1).is_err());
    }

    #[test]
    fn steiner_mc_eccentric_ellipse() {
        // planar parallel body: area + perimeter r + π r², perimeter by the
        // periodic trapezoid rule
        let (a, b, r) = (0.3, 2.5, 1.0);
        let m = 4096;
        let perimeter = (0..m)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / m as f64;
                (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt()
            })
            .sum::<f64>()
            * 2.0
            * PI
            / m as f64;
        let want = PI * a * b + perimeter * r + PI * r * r;
        let e = Ellipsoid::new(vec![a, b]).unwrap();
        let v = steiner_mc_volume(&e, r, 400_000, 5).unwrap();
        assert!(v.z_score(want) < 4.0, "{v} vs {want}");
    }

    #[test]
    fn random_prop3_cases_are_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..1000 {
            let (e, i, alpha, beta) = random_prop3_case(&mut rng);
            assert!(i < e.dim());
            assert!(beta > 0.0 && beta <= 4.0);
            check_prop3_domain(e.dim(), alpha, beta).unwrap();
        }
    }

    #[test]
    fn suite_names_parse() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
