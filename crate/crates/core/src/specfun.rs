//! Special functions: Γ, ψ, ζ, ξ, derivatives of ξ, and the truncated
//! zero-sum/zero-product forms of ξ.
//!
//! All routines work in double precision and target the desk-scale window
//! `|Im s| <= 60` (with a usable margin beyond it, needed to build zero
//! catalogues with 64 conjugate pairs).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::prime_sieve;
use crate::zeros::ZeroCatalogue;

/// The universal complex scalar.
pub type Complex = Complex64;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// ξ(0) = ξ(1) = 1/2.
pub const XI_AT_ZERO: f64 = 0.5;

/// Radius of the contour used for Cauchy-integral derivatives of ξ.
pub const CAUCHY_RADIUS: f64 = 0.25;
/// Number of trapezoid nodes on the Cauchy contour.
pub const CAUCHY_NODES: usize = 64;

/// Truncation parameters shared by every partial sum and product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationConfig {
    /// Number of conjugate zero pairs in zero sums and products.
    pub m: usize,
    /// Largest prime in prime sums.
    pub pmax: u64,
    /// Largest prime-power exponent in prime sums.
    pub mmax: u32,
    /// Number of direct terms in the digamma-type series.
    pub nmax: usize,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        Self {
            m: 64,
            pmax: 100_000,
            mmax: 40,
            nmax: 1000,
        }
    }
}

impl TruncationConfig {
    pub fn with_m(self, m: usize) -> Self {
        Self { m, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::Config("m must be at least 1".into()));
        }
        if self.pmax < 2 {
            return Err(Error::Config("pmax must be at least 2".into()));
        }
        if self.mmax < 1 {
            return Err(Error::Config("mmax must be at least 1".into()));
        }
        if self.nmax < 1 {
            return Err(Error::Config("nmax must be at least 1".into()));
        }
        Ok(())
    }

    /// Checks `m` against the number of catalogued zeros.
    pub fn validate_against(&self, catalogue: &ZeroCatalogue) -> Result<()> {
        self.validate()?;
        if self.m > catalogue.len() {
            return Err(Error::Config(format!(
                "m = {} exceeds catalogue size {}",
                self.m,
                catalogue.len()
            )));
        }
        Ok(())
    }
}

/// Whether a prime partial sum may be evaluated outside its region of
/// absolute convergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Regime {
    /// Only `Re s > 1` is accepted.
    #[default]
    Convergent,
    /// Formal partial sums are returned anywhere; no convergence claim is made.
    Formal,
}

fn is_nonpositive_integer(z: Complex) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn ensure_finite(z: Complex, what: &str) -> Result<Complex> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Domain(format!("{what} is not finite")))
    }
}

// Lanczos coefficients, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos log-gamma for `Re z >= 1/2` (principal branch is not tracked).
fn ln_gamma_lanczos(z: Complex) -> Complex {
    let z = z - 1.0;
    let mut series = Complex::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        series += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

fn gamma_upper(z: Complex) -> Complex {
    ln_gamma_lanczos(z).exp()
}

/// Γ(z) by the Lanczos approximation, with the reflection formula for
/// `Re z < 1/2`.
pub fn gamma(z: Complex) -> Result<Complex> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(format!("z={} (Gamma)", z.re)));
    }
    let value = if z.re < 0.5 {
        PI / ((PI * z).sin() * gamma_upper(1.0 - z))
    } else {
        gamma_upper(z)
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Pole(format!("z={z} (Gamma overflow)")));
    }
    Ok(value)
}

/// B_{2k}/(2k)! for k = 1..=10 (numerator, denominator of B_{2k}, 2k).
const BERNOULLI: [(f64, f64, u32); 10] = [
    (1.0, 6.0, 2),
    (-1.0, 30.0, 4),
    (1.0, 42.0, 6),
    (-1.0, 30.0, 8),
    (5.0, 66.0, 10),
    (-691.0, 2730.0, 12),
    (7.0, 6.0, 14),
    (-3617.0, 510.0, 16),
    (43867.0, 798.0, 18),
    (-174_611.0, 330.0, 20),
];

fn bernoulli_over_factorial() -> [f64; 10] {
    let mut out = [0.0; 10];
    for (slot, &(num, den, order)) in out.iter_mut().zip(BERNOULLI.iter()) {
        let fact: f64 = (1..=order).map(f64::from).product();
        *slot = num / den / fact;
    }
    out
}

/// ψ(z) from the series `-γ + Σ_{n>=0} (1/(n+1) - 1/(n+z))`.
///
/// At least `cfg.nmax` direct terms are summed (more when `|z|` is large) and
/// the remaining tail is closed with its Euler–Maclaurin expansion.
pub fn digamma(z: Complex, cfg: &TruncationConfig) -> Result<Complex> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(format!("z={} (digamma)", z.re)));
    }
    let n_direct = cfg.nmax.max(z.norm().ceil() as usize + 20);
    let mut sum = Complex::new(-EULER_GAMMA, 0.0);
    for n in 0..n_direct {
        let nf = n as f64;
        sum += 1.0 / (nf + 1.0) - 1.0 / (z + nf);
    }
    let big_n = n_direct as f64;
    let a = Complex::new(big_n + 1.0, 0.0);
    let b = z + big_n;
    // tail Σ_{n>=N} f(n), f(n) = 1/(n+1) - 1/(n+z)
    let mut tail = (b / a).ln() + 0.5 * (1.0 / a - 1.0 / b);
    let coeffs = bernoulli_over_factorial();
    let mut fact = 1.0; // (2j-1)!
    for (j, c) in coeffs.iter().enumerate().take(6) {
        let k = 2 * j + 1;
        if k > 1 {
            fact *= ((k - 1) * k) as f64;
        }
        let p = (k + 1) as i32;
        let deriv = -fact * (a.powi(-p) - b.powi(-p));
        tail -= *c * deriv;
    }
    ensure_finite(sum + tail, "digamma")
}

/// Euler–Maclaurin evaluation of `(s - 1) ζ(s)`, an entire function.
fn zeta_times_s_minus_one(s: Complex) -> Complex {
    let n = 25usize.max((1.3 * s.im.abs()).ceil() as usize);
    let nf = n as f64;
    let ln_n = nf.ln();
    let mut direct = Complex::new(0.0, 0.0);
    for k in 1..n {
        direct += (-s * (k as f64).ln()).exp();
    }
    let n_pow_minus_s = (-s * ln_n).exp();
    let mut body = direct + 0.5 * n_pow_minus_s;
    let coeffs = bernoulli_over_factorial();
    let mut poch = s;
    let mut power = n_pow_minus_s / nf;
    for (j, c) in coeffs.iter().enumerate() {
        if j > 0 {
            let k = (2 * j) as f64;
            poch *= (s + k - 1.0) * (s + k);
            power /= nf * nf;
        }
        body += *c * poch * power;
    }
    (s - 1.0) * body + n_pow_minus_s * nf
}

/// Riemann ζ(s).
///
/// Euler–Maclaurin summation for `Re s >= 1/2`; below the critical line the
/// value is recovered from ξ(1 - s) through the completed-zeta relation.
pub fn zeta(s: Complex) -> Result<Complex> {
    if s == Complex::new(1.0, 0.0) {
        return Err(Error::Pole("s=1".into()));
    }
    if s.re >= 0.5 {
        return ensure_finite(zeta_times_s_minus_one(s) / (s - 1.0), "zeta");
    }
    let half = s / 2.0 + 1.0;
    if is_nonpositive_integer(half) {
        // trivial zeros s = -2, -4, ...
        return Ok(Complex::new(0.0, 0.0));
    }
    let prefactor = gamma(half)? * (-s / 2.0 * PI.ln()).exp() * (s - 1.0);
    ensure_finite(xi(1.0 - s) / prefactor, "zeta")
}

/// Formal partial sum `-Σ_{p<=pmax, m<=mmax} ln p · p^{-ms}` of ζ'/ζ.
pub fn zeta_log_derivative(s: Complex, cfg: &TruncationConfig, regime: Regime) -> Result<Complex> {
    cfg.validate()?;
    if regime == Regime::Convergent && s.re <= 1.0 {
        return Err(Error::Domain(format!(
            "prime sum for zeta'/zeta requires Re s > 1 (got {}); use the formal regime",
            s.re
        )));
    }
    let mut sum = Complex::new(0.0, 0.0);
    for &p in prime_sieve(cfg.pmax).iter() {
        let ln_p = (p as f64).ln();
        let base = (-s * ln_p).exp();
        let mut power = base;
        let mut inner = Complex::new(0.0, 0.0);
        for _ in 0..cfg.mmax {
            inner += power;
            power *= base;
        }
        sum += ln_p * inner;
    }
    ensure_finite(-sum, "zeta log-derivative")
}

/// ξ on `Re s >= 1/2`, via ½ s Γ(s/2) = Γ(s/2 + 1), which also covers s = 1.
fn xi_upper(s: Complex) -> Complex {
    gamma_upper(s / 2.0 + 1.0) * (-s / 2.0 * PI.ln()).exp() * zeta_times_s_minus_one(s)
}

/// Riemann's ξ(s) = ½ s (s-1) Γ(s/2) π^{-s/2} ζ(s).
///
/// Left of the critical line the functional equation ξ(s) = ξ(1-s) is used
/// as the evaluation algorithm.
pub fn xi(s: Complex) -> Complex {
    if s.re < 0.5 {
        xi_upper(1.0 - s)
    } else {
        xi_upper(s)
    }
}

/// ξ from its defining product on both sides of the critical line, with the
/// Euler–Maclaurin ζ used directly and no symmetry applied.
///
/// Meant as an independent cross-check of [`xi`]; cancellation in the
/// direct sum costs digits once `Re s` is well below zero.
pub fn xi_direct(s: Complex) -> Result<Complex> {
    let half = s / 2.0 + 1.0;
    if is_nonpositive_integer(half) {
        // Γ pole against a trivial zero: the product is ξ(1 - s) in the limit
        return Err(Error::Pole(format!("s={} (trivial zero)", s.re)));
    }
    let value = gamma(half)? * (-s / 2.0 * PI.ln()).exp() * zeta_times_s_minus_one(s);
    ensure_finite(value, "xi")
}

/// ξ together with its first two derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiJet {
    pub value: Complex,
    pub d1: Complex,
    pub d2: Complex,
}

/// ξ, ξ' and ξ'' at `s`; the derivatives come from one shared set of
/// trapezoid samples of the Cauchy integral on a circle of radius 0.25.
pub fn xi_jet(s: Complex) -> XiJet {
    let n = CAUCHY_NODES as f64;
    let mut c1 = Complex::new(0.0, 0.0);
    let mut c2 = Complex::new(0.0, 0.0);
    for j in 0..CAUCHY_NODES {
        let theta = 2.0 * PI * j as f64 / n;
        let w = Complex::from_polar(1.0, theta);
        let f = xi(s + CAUCHY_RADIUS * w);
        let w_inv = w.conj();
        c1 += f * w_inv;
        c2 += f * w_inv * w_inv;
    }
    let r = CAUCHY_RADIUS;
    XiJet {
        value: xi(s),
        d1: c1 / (n * r),
        d2: 2.0 * c2 / (n * r * r),
    }
}

/// ξ^{(order)}(s) for `order` in {1, 2}, by Cauchy-integral differentiation.
///
/// Panics for any other order.
pub fn xi_derivative(s: Complex, order: u8) -> Complex {
    let jet = xi_jet(s);
    match order {
        1 => jet.d1,
        2 => jet.d2,
        _ => panic!("xi_derivative supports orders 1 and 2, got {order}"),
    }
}

/// Σ over the first `cfg.m` conjugate pairs of `1/(q-ρ) + 1/(q-ρ̄)`.
pub fn xi_log_derivative_via_zeros(
    q: Complex,
    catalogue: &ZeroCatalogue,
    cfg: &TruncationConfig,
) -> Result<Complex> {
    cfg.validate_against(catalogue)?;
    let mut sum = Complex::new(0.0, 0.0);
    for record in catalogue.records().iter().take(cfg.m) {
        let rho = record.rho;
        let a = q - rho;
        let b = q - rho.conj();
        if a.norm() < 1e-12 || b.norm() < 1e-12 {
            return Err(Error::Singularity(format!(
                "q = {q} coincides with zero #{}",
                record.index
            )));
        }
        // conjugate pair combined before accumulation
        sum += (2.0 * q - 2.0 * rho.re) / (a * b);
    }
    Ok(sum)
}

/// Truncated Hadamard product ξ(0) Π (1 - q/ρ)(1 - q/ρ̄) over `cfg.m` pairs.
pub fn xi_hadamard_truncated(
    q: Complex,
    catalogue: &ZeroCatalogue,
    cfg: &TruncationConfig,
) -> Result<Complex> {
    cfg.validate_against(catalogue)?;
    let mut product = Complex::new(XI_AT_ZERO, 0.0);
    for record in catalogue.records().iter().take(cfg.m) {
        let rho = record.rho;
        product *= (rho - q) * (rho.conj() - q) / rho.norm_sqr();
    }
    Ok(product)
}

/// Size estimate of the log-derivative tail Σ_{n>m} over pairs, from the
/// zero density (1/2π) ln(t/2π) above the last included ordinate.
pub fn log_derivative_tail_estimate(q: Complex, catalogue: &ZeroCatalogue, m: usize) -> f64 {
    let Some(last) = catalogue.records().get(m.saturating_sub(1)) else {
        return f64::INFINITY;
    };
    let height = last.rho.im;
    let w = (q - 0.5).norm();
    let density_tail = ((height / (2.0 * PI)).ln() + 1.0) / (2.0 * PI * height);
    2.0 * w * density_tail
}
