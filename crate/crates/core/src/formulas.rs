//! Closed-form identities of the ξ-Hamiltonian system.
//!
//! Nothing in here calls an integrator: these functions are the analytic
//! side of every integration-versus-formula comparison.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{xi, xi_derivative, xi_log_derivative_via_zeros, Complex, Regime, TruncationConfig, EULER_GAMMA};
use crate::zeros::{ZeroCatalogue, ZeroRecord};

pub use crate::primes::prime_sieve;

fn nonzero_xi(q: Complex) -> Result<Complex> {
    let v = xi(q);
    if v.norm() <= f64::MIN_POSITIVE {
        return Err(Error::Singularity(format!("xi vanishes at q = {q}")));
    }
    Ok(v)
}

fn finite(z: Complex, what: &str) -> Result<Complex> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Singularity(format!("{what} is not finite")))
    }
}

/// p = p0 ξ(q0)/ξ(q): the momentum on the orbit through (q0, p0) once it reaches q.
pub fn momentum_closed_form(q0: Complex, p0: Complex, q: Complex) -> Result<Complex> {
    let xq = nonzero_xi(q)?;
    finite(p0 * xi(q0) / xq, "momentum")
}

/// How the q-dependent log-derivative ξ'(q)/ξ(q) is evaluated.
#[derive(Debug, Clone, Copy)]
pub enum DeltaPForm<'a> {
    /// ξ'(q)/ξ(q) from Cauchy-integral derivatives; no truncation error.
    Compact,
    /// Σ 1/(q - ρ) over `cfg.m` conjugate pairs of the catalogue.
    Spectral {
        catalogue: &'a ZeroCatalogue,
        cfg: TruncationConfig,
    },
}

/// Momentum perturbation
/// Δp = (p0 Δq0 (ξ'(q0) - ξ'(q)) + ξ(q0) Δp0) / ξ(q),
/// or its zero-sum form p0 Δq0 (ξ'(q0)/ξ(q) - Σ 1/(q-ρ)) + (ξ(q0)/ξ(q)) Δp0.
pub fn delta_p_closed_form(
    q0: Complex,
    p0: Complex,
    dq0: Complex,
    dp0: Complex,
    q: Complex,
    form: DeltaPForm<'_>,
) -> Result<Complex> {
    let m = flow_map_differential(q0, p0, q, form)?;
    Ok(m.m21 * dq0 + m.m22 * dp0)
}

/// 2×2 differential of the Hamiltonian flow map, acting on (Δq0, Δp0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowMapDifferential {
    pub m11: Complex,
    pub m12: Complex,
    /// Coupling constant between q- and p-space.
    pub m21: Complex,
    pub m22: Complex,
}

impl FlowMapDifferential {
    pub fn apply(&self, dq0: Complex, dp0: Complex) -> (Complex, Complex) {
        (self.m11 * dq0 + self.m12 * dp0, self.m21 * dq0 + self.m22 * dp0)
    }

    pub fn det(&self) -> Complex {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn coupling(&self) -> Complex {
        self.m21
    }
}

/// M = [[ξ(q)/ξ(q0), 0], [p0 ξ'(q0)/ξ(q) - p0 ξ'(q)/ξ(q), ξ(q0)/ξ(q)]].
pub fn flow_map_differential(q0: Complex, p0: Complex, q: Complex, form: DeltaPForm<'_>) -> Result<FlowMapDifferential> {
    let x0 = nonzero_xi(q0)?;
    let xq = nonzero_xi(q)?;
    let log_derivative = match form {
        DeltaPForm::Compact => xi_derivative(q, 1) / xq,
        DeltaPForm::Spectral { catalogue, cfg } => xi_log_derivative_via_zeros(q, catalogue, &cfg)?,
    };
    let m21 = p0 * xi_derivative(q0, 1) / xq - p0 * log_derivative;
    Ok(FlowMapDifferential {
        m11: finite(xq / x0, "m11")?,
        m12: Complex::new(0.0, 0.0),
        m21: finite(m21, "m21")?,
        m22: finite(x0 / xq, "m22")?,
    })
}

/// Π (q-ρ)(q-ρ̄)/((q0-ρ)(q0-ρ̄)) · p/p0 - 1 over `cfg.m` pairs.
///
/// Zero when the truncated product identity holds; the 2πi ambiguity of the
/// logarithmic form never enters because only the exponentiated side is used.
pub fn product_identity_residual(
    q0: Complex,
    p0: Complex,
    q: Complex,
    p: Complex,
    catalogue: &ZeroCatalogue,
    cfg: &TruncationConfig,
) -> Result<Complex> {
    cfg.validate_against(catalogue)?;
    if p0 == Complex::new(0.0, 0.0) || p == Complex::new(0.0, 0.0) {
        return Err(Error::Singularity("momenta must be nonzero".into()));
    }
    let mut product = p / p0;
    for r in catalogue.records().iter().take(cfg.m) {
        let den = (q0 - r.rho) * (q0 - r.rho.conj());
        if den.norm() == 0.0 {
            return Err(Error::Singularity(format!("q0 coincides with zero #{}", r.index)));
        }
        let num = (q - r.rho) * (q - r.rho.conj());
        if num.norm() == 0.0 {
            return Err(Error::Singularity(format!("q coincides with zero #{}", r.index)));
        }
        product *= num / den;
    }
    finite(product - 1.0, "product residual")
}

/// P_m(q, p; q0, p0) = p Π(q-ρ)(q-ρ̄) - p0 Π(q0-ρ)(q0-ρ̄) over `cfg.m` pairs.
pub fn pm_polynomial(
    q: Complex,
    p: Complex,
    q0: Complex,
    p0: Complex,
    catalogue: &ZeroCatalogue,
    cfg: &TruncationConfig,
) -> Result<Complex> {
    cfg.validate_against(catalogue)?;
    let roots = |x: Complex| {
        catalogue
            .records()
            .iter()
            .take(cfg.m)
            .fold(Complex::new(1.0, 0.0), |acc, r| acc * (x - r.rho) * (x - r.rho.conj()))
    };
    Ok(p * roots(q) - p0 * roots(q0))
}

/// Complex Newton time T = ln ξ(q0) - ln ξ(q) + 2πik (principal logarithms).
///
/// `winding` selects the sheet k. exp(-T) = ξ(q)/ξ(q0) for every k.
pub fn newton_time_reparam(q0: Complex, q: Complex, winding: i64) -> Result<Complex> {
    let x0 = nonzero_xi(q0)?;
    let xq = nonzero_xi(q)?;
    Ok(x0.ln() - xq.ln() + Complex::new(0.0, 2.0 * PI * winding as f64))
}

/// S = H(q0, p0) · t* with t* the closed-orbit period of `zero`.
pub fn action(q0: Complex, p0: Complex, zero: &ZeroRecord) -> Complex {
    action_at_energy(xi(q0) * p0, zero)
}

/// S(E) = E · t*; linear in E, so ∂S/∂E = t*.
pub fn action_at_energy(energy: Complex, zero: &ZeroRecord) -> Complex {
    energy * zero.period
}

/// A zero counts as degenerate when |ξ'(ρ)| is negligible against ξ on the
/// derivative contour around it.
fn check_simple(zero: &ZeroRecord) -> Result<()> {
    let d = zero.xi_prime.norm();
    let scale = xi(zero.rho + crate::specfun::CAUCHY_RADIUS).norm();
    if !(d > 1e-10 * scale) || !zero.period.is_finite() {
        return Err(Error::DegenerateZero(d));
    }
    Ok(())
}

/// 2πi/ξ'(ρ). Real for critical-line zeros, where ξ'(ρ) is imaginary; its
/// modulus is the flow-time period.
pub fn orbit_period(zero: &ZeroRecord) -> Result<Complex> {
    check_simple(zero)?;
    Ok(Complex::new(0.0, 2.0 * PI) / zero.xi_prime)
}

/// Quantised energies E(k) = k h ν, ν = 1/t*, for one zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub zero_index: usize,
    pub rho_im: f64,
    pub period: f64,
    pub frequency: f64,
    pub h: f64,
    pub energies: Vec<(i64, f64)>,
}

impl SpectrumTable {
    pub const CSV_HEADER: &'static str = "n,rho_im,period,frequency,k,E";

    pub fn csv_rows(&self) -> String {
        self.energies
            .iter()
            .map(|(k, e)| {
                format!(
                    "{},{:.16e},{:.16e},{:.16e},{},{:.16e}\n",
                    self.zero_index, self.rho_im, self.period, self.frequency, k, e
                )
            })
            .collect()
    }
}

pub fn quantized_energies(zero: &ZeroRecord, k_range: RangeInclusive<i64>, h: f64) -> Result<SpectrumTable> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Config(format!("h must be positive, got {h}")));
    }
    check_simple(zero)?;
    spectrum_for_period(zero.index, zero.rho.im, zero.period, k_range, h)
}

/// Spectrum for an explicitly given period.
pub fn spectrum_for_period(
    zero_index: usize,
    rho_im: f64,
    period: f64,
    k_range: RangeInclusive<i64>,
    h: f64,
) -> Result<SpectrumTable> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::DegenerateZero(2.0 * PI / period));
    }
    let frequency = 1.0 / period;
    let quantum = h / period;
    Ok(SpectrumTable {
        zero_index,
        rho_im,
        period,
        frequency,
        h,
        energies: k_range.map(|k| (k, k as f64 * quantum)).collect(),
    })
}

/// -Σ_{p<=pmax, m<=mmax} (1/m) p^{-mσ} sin(m τ ln p).
pub fn fluctuation_term(sigma: f64, tau: f64, cfg: &TruncationConfig, regime: Regime) -> Result<f64> {
    cfg.validate()?;
    if regime == Regime::Convergent && sigma <= 1.0 {
        return Err(Error::Domain(format!(
            "prime sum diverges for sigma = {sigma} <= 1; use the formal regime"
        )));
    }
    let mut sum = 0.0;
    for &p in prime_sieve(cfg.pmax).iter() {
        let ln_p = (p as f64).ln();
        for m in 1..=cfg.mmax {
            let mf = f64::from(m);
            sum += (-mf * sigma * ln_p).exp() * (mf * ln_p * tau).sin() / mf;
        }
    }
    Ok(-sum)
}

/// Sign of the exponent in the prime sum of the Newton-time formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrimeSign {
    /// e^{-n s ln p}, the Dirichlet-series exponent.
    Minus,
    /// e^{+n s ln p}.
    Plus,
}

impl PrimeSign {
    pub fn value(self) -> f64 {
        match self {
            PrimeSign::Minus => -1.0,
            PrimeSign::Plus => 1.0,
        }
    }
}

/// Elementary-term decomposition of ln ξ(s) - ln ξ(s0):
///
/// ln(s/s0) + ln((s-1)/(s0-1)) - ½ ln π (s-s0) - (γ/2)(s-s0)
/// + Σ_{n,p} (1/n)(e^{±ns ln p} - e^{±ns0 ln p})
/// + Σ_n ((s-s0)/(2n+2) - ln(n+s/2) + ln(n+s0/2)).
///
/// The Γ-part is the integral of ½ψ(s/2), whence γ/2. The n-series is summed
/// to at least `cfg.nmax` terms and closed with an Euler–Maclaurin tail.
/// With [`PrimeSign::Minus`] and Re s, Re s0 > 1 the exponential equals
/// ξ(s)/ξ(s0) up to truncation.
pub fn newton_flow_elementary_time(s: Complex, s0: Complex, cfg: &TruncationConfig, sign: PrimeSign) -> Result<Complex> {
    cfg.validate()?;
    for (name, z) in [("s", s), ("s0", s0)] {
        if z.norm() < 1e-12 || (z - 1.0).norm() < 1e-12 {
            return Err(Error::Domain(format!("{name} = {z} hits a pole of the decomposition")));
        }
        let half = z / 2.0;
        if half.im == 0.0 && half.re <= 0.0 && half.re == half.re.round() {
            return Err(Error::Domain(format!("{name} = {z} hits a digamma pole")));
        }
    }
    let diff = s - s0;
    let mut total = (s / s0).ln() + ((s - 1.0) / (s0 - 1.0)).ln() - 0.5 * PI.ln() * diff - 0.5 * EULER_GAMMA * diff;

    let sgn = sign.value();
    let mut prime_part = Complex::new(0.0, 0.0);
    for &p in prime_sieve(cfg.pmax).iter() {
        let ln_p = (p as f64).ln();
        let (base, base0) = ((sgn * s * ln_p).exp(), (sgn * s0 * ln_p).exp());
        let (mut pw, mut pw0) = (base, base0);
        for n in 1..=cfg.mmax {
            prime_part += (pw - pw0) / f64::from(n);
            pw *= base;
            pw0 *= base0;
        }
    }
    total += prime_part;
    total += gamma_series(s / 2.0, s0 / 2.0, cfg.nmax);
    finite(total, "elementary Newton time")
}

/// Σ_{n>=0} (d/(n+1) - ln(n+a) + ln(n+b)), d = a - b, i.e. ln Γ(a) - ln Γ(b) + γ d.
fn gamma_series(a: Complex, b: Complex, nmax: usize) -> Complex {
    let d = a - b;
    let n_direct = nmax.max((a.norm() + b.norm()).ceil() as usize + 20);
    let mut sum = Complex::new(0.0, 0.0);
    for n in 0..n_direct {
        let nf = n as f64;
        sum += d / (nf + 1.0) - (a + nf).ln() + (b + nf).ln();
    }
    let big_n = n_direct as f64;
    let (one, na, nb) = (Complex::new(big_n + 1.0, 0.0), a + big_n, b + big_n);
    let antiderivative = d * one.ln() - na * na.ln() + nb * nb.ln();
    let f_n = d / one - na.ln() + nb.ln();
    let mut tail = -d - antiderivative + 0.5 * f_n;
    let coeffs = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1_209_600.0, 1.0 / 47_900_160.0];
    let mut fact_k = 1.0; // k!
    let mut fact_km1 = 1.0; // (k-1)!
    for (j, c) in coeffs.iter().enumerate() {
        let k = 2 * j + 1;
        if k > 1 {
            fact_km1 = fact_k * (k - 1) as f64;
            fact_k = fact_km1 * k as f64;
        }
        let ki = k as i32;
        let deriv = -d * fact_k * one.powi(-ki - 1) + fact_km1 * (nb.powi(-ki) - na.powi(-ki));
        tail -= *c * deriv;
    }
    sum + tail
}

/// |exp(R) - ξ(s)/ξ(s0)| / |ξ(s)/ξ(s0)| for the elementary-term decomposition R.
pub fn elementary_time_residual(s: Complex, s0: Complex, cfg: &TruncationConfig, sign: PrimeSign) -> Result<f64> {
    let r = newton_flow_elementary_time(s, s0, cfg, sign)?;
    let ratio = xi(s) / nonzero_xi(s0)?;
    let residual = (r.exp() - ratio).norm() / ratio.norm();
    if residual.is_finite() {
        Ok(residual)
    } else {
        Err(Error::Domain("elementary Newton time overflows".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{gamma, xi_derivative};
    use crate::zeros::locate_zeros;
    use std::sync::OnceLock;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn catalogue() -> &'static ZeroCatalogue {
        static CAT: OnceLock<ZeroCatalogue> = OnceLock::new();
        CAT.get_or_init(|| locate_zeros(170.0, 1e-12).unwrap())
    }

    #[test]
    fn catalogue_has_sixty_four_pairs() {
        assert!(catalogue().len() >= 64);
    }

    #[test]
    fn momentum_examples() {
        let (q0, p0) = (c(0.3, 2.0), c(1.5, -0.5));
        assert!((momentum_closed_form(q0, p0, q0).unwrap() - p0).norm() < 1e-15);
        let mirrored = momentum_closed_form(q0, p0, 1.0 - q0).unwrap();
        assert!((mirrored - p0).norm() < 1e-12);
    }

    #[test]
    fn delta_p_examples() {
        let (q0, p0, dq0, dp0) = (c(0.2, 3.0), c(1.0, 0.5), c(0.7, -0.1), c(0.4, 0.9));
        let at_start = delta_p_closed_form(q0, p0, dq0, dp0, q0, DeltaPForm::Compact).unwrap();
        assert!((at_start - dp0).norm() < 1e-14);
        let q = c(0.9, 4.0);
        let decoupled = delta_p_closed_form(q0, p0, c(0.0, 0.0), dp0, q, DeltaPForm::Compact).unwrap();
        assert!((decoupled - xi(q0) / xi(q) * dp0).norm() < 1e-14 * decoupled.norm());
    }

    #[test]
    fn spectral_and_compact_delta_p_converge() {
        let cat = catalogue();
        let (q0, p0, dq0, dp0) = (c(0.5, 14.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
        let q = c(0.52, 14.05);
        let compact = delta_p_closed_form(q0, p0, dq0, dp0, q, DeltaPForm::Compact).unwrap();
        let mut prev = f64::INFINITY;
        for m in [16, 32, 64] {
            let form = DeltaPForm::Spectral { catalogue: cat, cfg: TruncationConfig::default().with_m(m) };
            let spectral = delta_p_closed_form(q0, p0, dq0, dp0, q, form).unwrap();
            let diff = (spectral - compact).norm();
            // the two forms differ by p0 Δq0 times the log-derivative tail
            let bound = p0.norm() * dq0.norm() * crate::specfun::log_derivative_tail_estimate(q, cat, m);
            assert!(diff < prev && diff <= 1.5 * bound, "m = {m}: {diff:e} vs {bound:e}");
            prev = diff;
        }
    }

    #[test]
    fn flow_map_structure() {
        let (q0, p0) = (c(0.3, 7.0), c(0.6, 0.8));
        for q in [c(0.7, 7.2), c(-0.4, 3.0), c(2.0, 0.0)] {
            let m = flow_map_differential(q0, p0, q, DeltaPForm::Compact).unwrap();
            assert_eq!(m.m12, c(0.0, 0.0));
            assert!((m.det() - 1.0).norm() <= 1e-12);
            assert!((m.m11 * m.m22 - 1.0).norm() <= 1e-12);
        }
        let id = flow_map_differential(q0, p0, q0, DeltaPForm::Compact).unwrap();
        assert!(id.m21.norm() < 1e-14 && (id.m11 - 1.0).norm() < 1e-15);
    }

    #[test]
    fn coupling_at_start_decays_with_truncation() {
        let cat = catalogue();
        let q0 = cat.get(1).unwrap().rho + c(0.005, 0.0);
        let p0 = c(1.0, 0.0);
        let mut prev = f64::INFINITY;
        for m in [8, 16, 32, 64] {
            let form = DeltaPForm::Spectral { catalogue: cat, cfg: TruncationConfig::default().with_m(m) };
            let k = flow_map_differential(q0, p0, q0, form).unwrap().coupling().norm();
            assert!(k < prev);
            prev = k;
        }
        let scale = (p0 * xi_derivative(q0, 1) / xi(q0)).norm();
        assert!(prev <= 1e-3 * scale);
    }

    #[test]
    fn product_identity_examples() {
        let cat = catalogue();
        let cfg = TruncationConfig::default();
        let (q0, p0) = (c(0.4, 22.0), c(1.0, 1.0));
        assert_eq!(product_identity_residual(q0, p0, q0, p0, cat, &cfg).unwrap(), c(0.0, 0.0));

        let q = c(0.402, 22.001);
        let p = momentum_closed_form(q0, p0, q).unwrap();
        let mut prev = f64::INFINITY;
        for m in [16, 32, 64] {
            let r = product_identity_residual(q0, p0, q, p, cat, &cfg.with_m(m)).unwrap().norm();
            assert!(r < prev);
            prev = r;
        }
        assert!(prev <= 1e-3);
        let violated = product_identity_residual(q0, p0, q, 2.0 * p, cat, &cfg).unwrap();
        assert!((violated - 1.0).norm() < 1e-2);
    }

    #[test]
    fn pm_polynomial_zero_set() {
        let cat = catalogue();
        let cfg = TruncationConfig::default().with_m(10);
        let (q0, p0) = (c(0.1, 5.0), c(2.0, -1.0));
        assert_eq!(pm_polynomial(q0, p0, q0, p0, cat, &cfg).unwrap(), c(0.0, 0.0));
        let rho1 = cat.get(1).unwrap().rho;
        assert!(pm_polynomial(rho1, c(0.0, 0.0), q0, p0, cat, &cfg).unwrap().norm() > 0.0);

        // direct rearrangement: p = p0 Π(q0-ρ)(q0-ρ̄) / Π(q-ρ)(q-ρ̄)
        for q in [c(0.6, 4.0), c(1.3, -2.0), c(0.5, 30.0)] {
            let mut num = p0;
            for r in cat.records().iter().take(cfg.m) {
                num *= (q0 - r.rho) * (q0 - r.rho.conj()) / ((q - r.rho) * (q - r.rho.conj()));
            }
            let value = pm_polynomial(q, num, q0, p0, cat, &cfg).unwrap();
            let scale = pm_polynomial(q, c(0.0, 0.0), q0, p0, cat, &cfg).unwrap().norm();
            assert!(value.norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn newton_time_examples() {
        let q0 = c(0.8, 6.0);
        assert_eq!(newton_time_reparam(q0, q0, 0).unwrap(), c(0.0, 0.0));
        let q = c(0.3, 9.0);
        for k in [-2, 0, 3] {
            let t = newton_time_reparam(q0, q, k).unwrap();
            let ratio = xi(q) / xi(q0);
            assert!(((-t).exp() - ratio).norm() <= 1e-12 * ratio.norm());
        }
    }

    fn record(xi_prime: Complex) -> ZeroRecord {
        ZeroRecord::new(1, c(0.5, 14.134_725_141_734_693), xi_prime)
    }

    #[test]
    fn period_and_action() {
        let z = catalogue().get(1).unwrap();
        let t = orbit_period(z).unwrap();
        assert!(t.im.abs() <= 1e-8 * t.norm());
        assert!((t.norm() - z.period).abs() <= 1e-12 * z.period);

        let doubled = record(2.0 * z.xi_prime);
        assert!((orbit_period(&doubled).unwrap() * 2.0 - t).norm() <= 1e-12 * t.norm());

        assert_eq!(action(c(0.3, 1.0), c(0.0, 0.0), z), c(0.0, 0.0));
        let e = c(0.2, -0.7);
        let de = c(1e-3, 2e-3);
        let ds = action_at_energy(e + de, z) - action_at_energy(e, z);
        assert!((ds / de - z.period).norm() <= 1e-9 * z.period);

        assert!(matches!(orbit_period(&record(c(0.0, 0.0))), Err(Error::DegenerateZero(_))));
    }

    #[test]
    fn spectrum_examples() {
        let table = spectrum_for_period(1, 14.0, 2.0, 0..=5, 1.0).unwrap();
        assert_eq!(table.energies[0], (0, 0.0));
        assert_eq!(table.energies[3], (3, 1.5));

        let z = catalogue().get(1).unwrap();
        let table = quantized_energies(z, 1..=200, 0.37).unwrap();
        let e1 = table.energies[0].1;
        for &(k, e) in &table.energies {
            assert_eq!(e / e1, k as f64);
        }
        assert!(quantized_energies(z, 1..=3, 0.0).is_err());
    }

    #[test]
    fn fluctuation_examples() {
        let cfg = TruncationConfig { pmax: 1000, mmax: 5, ..Default::default() };
        assert_eq!(fluctuation_term(2.0, 0.0, &cfg, Regime::Convergent).unwrap(), 0.0);
        let a = fluctuation_term(0.5, 17.3, &cfg, Regime::Formal).unwrap();
        let b = fluctuation_term(0.5, -17.3, &cfg, Regime::Formal).unwrap();
        assert_eq!(a, -b);
        assert!(fluctuation_term(0.5, 1.0, &cfg, Regime::Convergent).is_err());
    }

    #[test]
    fn fluctuation_matches_complex_resummation() {
        let cfg = TruncationConfig { pmax: 100_000, mmax: 40, ..Default::default() };
        for tau in [1.0, 14.1, 37.5] {
            let s = c(2.0, tau);
            let mut log_zeta = c(0.0, 0.0);
            for &p in prime_sieve(cfg.pmax).iter() {
                for m in 1..=cfg.mmax {
                    log_zeta += (-(m as f64) * s * (p as f64).ln()).exp() / m as f64;
                }
            }
            let v = fluctuation_term(2.0, tau, &cfg, Regime::Convergent).unwrap();
            assert!((v - log_zeta.im).abs() <= 1e-12);
        }
    }

    #[test]
    fn gamma_series_is_log_gamma_difference() {
        for (a, b) in [(c(1.2, 0.5), c(0.9, -0.3)), (c(3.0, 10.0), c(2.5, 9.0))] {
            let lhs = gamma_series(a, b, 50).exp();
            let rhs = gamma(a).unwrap() / gamma(b).unwrap() * (EULER_GAMMA * (a - b)).exp();
            assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm());
        }
    }

    #[test]
    fn elementary_time_examples() {
        let cfg = TruncationConfig { pmax: 1000, mmax: 10, nmax: 100, ..Default::default() };
        let s0 = c(2.0, 1.0);
        assert!(newton_flow_elementary_time(s0, s0, &cfg, PrimeSign::Minus).unwrap().norm() < 1e-14);
        assert!(newton_flow_elementary_time(s0, s0, &cfg, PrimeSign::Plus).unwrap().norm() < 1e-14);

        // real Dirichlet coefficients: real arguments give a real value
        let real = newton_flow_elementary_time(c(2.5, 0.0), c(3.0, 0.0), &cfg, PrimeSign::Minus).unwrap();
        assert!(real.im.abs() < 1e-14);

        let cfg = TruncationConfig { pmax: 100_000, mmax: 40, nmax: 1000, ..Default::default() };
        let (s, s0) = (c(2.2, 1.5), c(2.8, -0.5));
        let minus = elementary_time_residual(s, s0, &cfg, PrimeSign::Minus).unwrap();
        assert!(minus <= 1e-6, "{minus:e}");
        let plus = elementary_time_residual(s, s0, &cfg, PrimeSign::Plus).map_or(f64::INFINITY, |r| r);
        assert!(plus > 1e-4);
        assert!(newton_flow_elementary_time(c(0.0, 0.0), s0, &cfg, PrimeSign::Minus).is_err());
        assert!(newton_flow_elementary_time(c(-4.0, 0.0), s0, &cfg, PrimeSign::Minus).is_err());
    }
}
