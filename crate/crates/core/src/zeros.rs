//! Critical-line zeros of ξ and the on-disk zero catalogue.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{xi, xi_derivative, Complex};

/// Grid step of the sign-change scan along the critical line.
pub const SCAN_STEP: f64 = 0.05;
/// Largest height accepted by [`locate_zeros`].
pub const MAX_TAU: f64 = 200.0;
/// Minimum gap between catalogued ordinates.
pub const MIN_GAP: f64 = 0.1;

const NEWTON_MAX_ITER: usize = 50;

/// One nontrivial zero with its derivative and closed-orbit period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroRecord {
    /// 1-based position, ordered by height.
    pub index: usize,
    pub rho: Complex,
    pub xi_prime: Complex,
    /// Flow-time period 2π/|ξ'(ρ)| of orbits circling the zero.
    pub period: f64,
}

impl ZeroRecord {
    pub fn new(index: usize, rho: Complex, xi_prime: Complex) -> Self {
        Self {
            index,
            rho,
            xi_prime,
            period: 2.0 * PI / xi_prime.norm(),
        }
    }
}

/// Ordered list of upper-half-plane zeros.
///
/// Sums and products over the catalogue expand each record into the
/// conjugate pair {ρ, ρ̄}.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroCatalogue {
    records: Vec<ZeroRecord>,
    tau_max: f64,
    tolerance: f64,
}

impl ZeroCatalogue {
    /// Builds a catalogue, rejecting unordered, duplicated or misindexed records.
    pub fn new(records: Vec<ZeroRecord>, tau_max: f64, tolerance: f64) -> Result<Self> {
        check_records(&records).map_err(|(pos, message)| Error::Format { line: pos + 1, message })?;
        Ok(Self {
            records,
            tau_max,
            tolerance,
        })
    }

    pub fn records(&self) -> &[ZeroRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Record with 1-based index `n`.
    pub fn get(&self, n: usize) -> Option<&ZeroRecord> {
        n.checked_sub(1).and_then(|i| self.records.get(i))
    }

    /// Number of zeros with `0 < Im ρ <= t`.
    pub fn count_below(&self, t: f64) -> usize {
        self.records.partition_point(|r| r.rho.im <= t)
    }
}

/// Returns the offending position and a message when the ordering invariants fail.
fn check_records(records: &[ZeroRecord]) -> std::result::Result<(), (usize, String)> {
    for (pos, r) in records.iter().enumerate() {
        if r.index != pos + 1 {
            return Err((pos, format!("expected index {}, found {}", pos + 1, r.index)));
        }
        if !(r.rho.re.is_finite() && r.rho.im.is_finite() && r.period.is_finite()) {
            return Err((pos, "non-finite field".into()));
        }
        if pos > 0 {
            let prev = records[pos - 1].rho.im;
            if r.rho.im - prev <= MIN_GAP {
                return Err((
                    pos,
                    format!("ordinates not strictly increasing by more than {MIN_GAP}: {prev} then {}", r.rho.im),
                ));
            }
        }
    }
    Ok(())
}

/// Riemann–von Mangoldt smooth count (T/2π) ln(T/2πe) + 7/8.
pub fn smooth_zero_count(t: f64) -> f64 {
    let x = t / (2.0 * PI);
    x * (x / std::f64::consts::E).ln() + 0.875
}

/// Ξ(τ) = Re ξ(1/2 + iτ); ξ is real on the critical line.
pub fn hardy_xi_real(tau: f64) -> f64 {
    xi(Complex::new(0.5, tau)).re
}

/// dΞ/dτ = Re(i ξ'(1/2 + iτ)).
fn hardy_xi_slope(tau: f64) -> f64 {
    -xi_derivative(Complex::new(0.5, tau), 1).im
}

/// Scans Ξ for sign changes on [0, tau_max] and refines each bracket.
///
/// Refinement is bisection to a narrow bracket followed by Newton iteration
/// on Ξ. Newton stops once |Ξ| <= `tol` and the step has stalled at
/// rounding level.
pub fn locate_zeros(tau_max: f64, tol: f64) -> Result<ZeroCatalogue> {
    if !(tau_max.is_finite() && tau_max > 0.0 && tau_max <= MAX_TAU) {
        return Err(Error::Config(format!("tau_max must lie in (0, {MAX_TAU}], got {tau_max}")));
    }
    if !(tol >= 1e-12) {
        return Err(Error::Config(format!("tolerance must be >= 1e-12, got {tol}")));
    }
    let steps = (tau_max / SCAN_STEP).ceil() as usize;
    let grid: Vec<f64> = (0..=steps).map(|k| (k as f64 * SCAN_STEP).min(tau_max)).collect();
    let values: Vec<f64> = grid.par_iter().map(|&t| hardy_xi_real(t)).collect();

    let mut brackets = Vec::new();
    for k in 0..steps {
        let (a, b) = (values[k], values[k + 1]);
        if a == 0.0 {
            if k > 0 {
                brackets.push((grid[k] - 0.5 * SCAN_STEP, grid[k] + 0.5 * SCAN_STEP));
            }
        } else if a * b < 0.0 {
            brackets.push((grid[k], grid[k + 1]));
        }
    }

    let located: Vec<Result<f64>> = brackets.par_iter().map(|&(lo, hi)| refine(lo, hi, tol)).collect();
    let mut records = Vec::with_capacity(located.len());
    for (i, tau) in located.into_iter().enumerate() {
        let rho = Complex::new(0.5, tau?);
        let xi_prime = xi_derivative(rho, 1);
        records.push(ZeroRecord::new(i + 1, rho, xi_prime));
    }

    for t in [30.0, 40.0, 50.0, 100.0, 150.0, 200.0] {
        if t <= tau_max {
            let found = records.iter().filter(|r| r.rho.im <= t).count() as f64;
            if (found - smooth_zero_count(t)).abs() > 1.5 {
                log::warn!(
                    "zero count {found} below {t} deviates from smooth estimate {:.3}",
                    smooth_zero_count(t)
                );
            }
        }
    }
    ZeroCatalogue::new(records, tau_max, tol)
}

fn refine(mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut f_lo = hardy_xi_real(lo);
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        let f_mid = hardy_xi_real(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let mut tau = 0.5 * (lo + hi);
    for _ in 0..NEWTON_MAX_ITER {
        let f = hardy_xi_real(tau);
        let slope = hardy_xi_slope(tau);
        let step = f / slope;
        let next = tau - step;
        let stalled = step.abs() <= 4.0 * f64::EPSILON * tau.abs().max(1.0);
        tau = if next > lo - SCAN_STEP && next < hi + SCAN_STEP { next } else { 0.5 * (lo + hi) };
        if f.abs() <= tol && stalled {
            return Ok(tau);
        }
    }
    if hardy_xi_real(tau).abs() <= tol {
        // Newton can cycle between neighbouring floats; accept a point already at tolerance.
        return Ok(tau);
    }
    Err(Error::Convergence(format!(
        "Newton refinement of zero near tau = {tau} did not reach |Xi| <= {tol:e}"
    )))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HeaderLine {
    tau_max: f64,
    tolerance: f64,
    count: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordLine {
    index: usize,
    re: f64,
    im: f64,
    xi_prime_re: f64,
    xi_prime_im: f64,
    period: f64,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serialises the catalogue as JSON lines: a header object followed by one
/// object per record. Reals carry 17 significant digits so the round trip
/// is bit-exact.
pub fn catalogue_to_string(catalogue: &ZeroCatalogue) -> String {
    let mut out = format!(
        "{{\"tau_max\":{},\"tolerance\":{},\"count\":{}}}\n",
        num(catalogue.tau_max),
        num(catalogue.tolerance),
        catalogue.len()
    );
    for r in &catalogue.records {
        out.push_str(&format!(
            "{{\"index\":{},\"re\":{},\"im\":{},\"xi_prime_re\":{},\"xi_prime_im\":{},\"period\":{}}}\n",
            r.index,
            num(r.rho.re),
            num(r.rho.im),
            num(r.xi_prime.re),
            num(r.xi_prime.im),
            num(r.period)
        ));
    }
    out
}

pub fn catalogue_from_str(text: &str) -> Result<ZeroCatalogue> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let Some((_, header)) = lines.next() else {
        return Err(Error::Format { line: 1, message: "empty catalogue file".into() });
    };
    let header: HeaderLine = serde_json::from_str(header)
        .map_err(|e| Error::Format { line: 1, message: format!("bad header: {e}") })?;

    let mut records = Vec::new();
    let mut line_numbers = Vec::new();
    for (i, line) in lines {
        let rec: RecordLine = serde_json::from_str(line)
            .map_err(|e| Error::Format { line: i + 1, message: e.to_string() })?;
        records.push(ZeroRecord {
            index: rec.index,
            rho: Complex::new(rec.re, rec.im),
            xi_prime: Complex::new(rec.xi_prime_re, rec.xi_prime_im),
            period: rec.period,
        });
        line_numbers.push(i + 1);
    }
    if records.len() != header.count {
        return Err(Error::Format {
            line: 1,
            message: format!("header announces {} records, found {}", header.count, records.len()),
        });
    }
    check_records(&records).map_err(|(pos, message)| Error::Format { line: line_numbers[pos], message })?;
    Ok(ZeroCatalogue {
        records,
        tau_max: header.tau_max,
        tolerance: header.tolerance,
    })
}

pub fn save_catalogue(catalogue: &ZeroCatalogue, path: impl AsRef<Path>) -> Result<()> {
    let mut file = fs::File::create(path)?;
    file.write_all(catalogue_to_string(catalogue).as_bytes())?;
    Ok(())
}

pub fn load_catalogue(path: impl AsRef<Path>) -> Result<ZeroCatalogue> {
    catalogue_from_str(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain bisection on the sign of Ξ, independent of the Newton stage.
    fn bisect_oracle(mut lo: f64, mut hi: f64) -> f64 {
        let sign_lo = hardy_xi_real(lo) > 0.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if (hardy_xi_real(mid) > 0.0) == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn hardy_xi_examples() {
        assert!((hardy_xi_real(0.0) - 0.497_120_778_2).abs() < 1e-10);
        assert!(hardy_xi_real(14.0) * hardy_xi_real(14.2) < 0.0);
        for tau in [0.3, 7.7, 21.0, 49.9] {
            assert_eq!(hardy_xi_real(tau), hardy_xi_real(-tau));
        }
    }

    #[test]
    fn first_zero() {
        let cat = locate_zeros(20.0, 1e-12).unwrap();
        assert_eq!(cat.len(), 1);
        let oracle = bisect_oracle(14.0, 14.2);
        assert!((cat.records()[0].rho.im - oracle).abs() < 1e-8);
        assert!((cat.records()[0].rho.im - 14.134_725_141_7).abs() < 1e-9);
    }

    #[test]
    fn no_zero_below_five() {
        assert!(locate_zeros(5.0, 1e-12).unwrap().is_empty());
    }

    #[test]
    fn ten_zeros_below_fifty() {
        let cat = locate_zeros(50.0, 1e-12).unwrap();
        assert_eq!(cat.len(), 10);
        for r in cat.records() {
            assert_eq!(r.rho.re, 0.5);
            assert!(xi(r.rho).norm() <= 1e-10);
            assert!(r.xi_prime.re.abs() <= 1e-8 * r.xi_prime.norm());
            assert_eq!(r.period, 2.0 * PI / r.xi_prime.norm());
            assert!(r.period > 0.0 && r.period.is_finite());
        }
        for t in [30.0, 40.0, 50.0] {
            assert!((cat.count_below(t) as f64 - smooth_zero_count(t)).abs() <= 1.0);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(locate_zeros(250.0, 1e-12).is_err());
        assert!(locate_zeros(10.0, 1e-14).is_err());
    }

    #[test]
    fn round_trip_is_exact() {
        let cat = locate_zeros(50.0, 1e-12).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("zeros.jsonl");
        save_catalogue(&cat, &path).unwrap();
        assert_eq!(load_catalogue(&path).unwrap(), cat);
    }

    #[test]
    fn shuffled_records_are_rejected() {
        let cat = locate_zeros(30.0, 1e-12).unwrap();
        let text = catalogue_to_string(&cat);
        let mut lines: Vec<&str> = text.lines().collect();
        lines.swap(1, 2);
        let err = catalogue_from_str(&lines.join("\n")).unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }), "{err}");
    }

    #[test]
    fn empty_and_malformed_files() {
        assert!(matches!(catalogue_from_str(""), Err(Error::Format { line: 1, .. })));
        let bad = "{\"tau_max\":1e1,\"tolerance\":1e-12,\"count\":1}\n{\"index\":1,\"re\":0.5}\n";
        assert!(matches!(catalogue_from_str(bad), Err(Error::Format { line: 2, .. })));
    }
}
