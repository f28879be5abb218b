//! Gamma-family constants and small numerical helpers.
//!
//! Everything that can overflow in direct form (unit-ball volumes, Beta
//! functions, the simplex prefactors) is assembled in log space from
//! [`ln_gamma`] and exponentiated once at the end.

use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

// Stirling series coefficients B_{2n} / (2n (2n - 1)).
const STIRLING_COEF: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const STIRLING_CUTOFF: f64 = 10.0;

/// Natural logarithm of `|Γ(x)|`.
///
/// Lanczos below 10, the asymptotic Stirling series above, reflection for
/// `x < 1/2`. Returns `+inf` at the poles `0, -1, -2, ...`.
pub fn ln_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        // Γ(x) Γ(1 - x) = π / sin(πx)
        return PI.ln() - (PI * x).sin().abs().ln() - ln_gamma(1.0 - x);
    }
    if x >= STIRLING_CUTOFF {
        return ln_gamma_stirling(x);
    }
    let x = x - 1.0;
    let mut series = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (x + 0.5) * t.ln() - t + series.ln()
}

fn ln_gamma_stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut tail = 0.0;
    for &c in STIRLING_COEF.iter().rev() {
        tail = tail * inv2 + c;
    }
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + tail * inv
}

pub fn gamma(x: f64) -> f64 {
    if x > 0.0 {
        ln_gamma(x).exp()
    } else {
        let sign = if x.floor() as i64 % 2 == 0 { 1.0 } else { -1.0 };
        sign * ln_gamma(x).exp()
    }
}

/// `ln B(a, b)` for positive arguments.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

pub fn beta(a: f64, b: f64) -> f64 {
    ln_beta(a, b).exp()
}

/// `ln κ_k` where `κ_k = π^{k/2} / Γ(k/2 + 1)`. Accepts real `k ≥ 0`.
pub fn ln_unit_ball_volume_real(k: f64) -> f64 {
    0.5 * k * PI.ln() - ln_gamma(0.5 * k + 1.0)
}

pub fn ln_unit_ball_volume(k: usize) -> f64 {
    ln_unit_ball_volume_real(k as f64)
}

/// Volume `κ_k` of the k-dimensional unit ball.
///
/// Uses the recurrence `κ_k = κ_{k-2} 2π / k` up to `k = 1000` (the product
/// underflows gradually), log-Gamma beyond.
pub fn unit_ball_volume(k: usize) -> f64 {
    if k <= 1000 {
        let mut v = if k.is_multiple_of(2) { 1.0 } else { 2.0 };
        let mut j = k % 2;
        while j < k {
            j += 2;
            v *= 2.0 * PI / j as f64;
        }
        v
    } else {
        ln_unit_ball_volume(k).exp()
    }
}

/// Surface measure `σ(S^{d-1}) = 2 π^{d/2} / Γ(d/2) = d κ_d`.
pub fn sphere_area(d: usize) -> f64 {
    d as f64 * unit_ball_volume(d)
}

pub fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// `n!` as a float; exact up to 22!.
pub fn factorial(n: usize) -> f64 {
    if n <= 170 {
        (1..=n).fold(1.0, |acc, j| acc * j as f64)
    } else {
        f64::INFINITY
    }
}

/// Binomial coefficient as a float. Exact while the result fits in 53 bits.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for j in 0..k {
        c = c * (n - j) as f64 / (j + 1) as f64;
    }
    c.round()
}

/// `ln(1 + e^y)` without overflow.
#[inline]
pub fn softplus(y: f64) -> f64 {
    if y > 36.0 {
        y + (-y).exp()
    } else if y < -36.0 {
        y.exp()
    } else {
        y.exp().ln_1p()
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of an iterator.
pub fn sum_compensated<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}
