use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::{xi, Complex};
use crate::zeros::ZeroRecord;

use super::flows::{Flow, HolomorphicFlow};
use super::integrator::{fixed_step, IntegratorOptions, Stepper};

/// Largest accepted distance between the start point and the zero.
pub const CENTER_RADIUS: f64 = 0.05;

const SECANT_TIME_TOL: f64 = 1e-10;
const RETURN_LIMIT_FACTOR: f64 = 5.0;
const STEPS_PER_PERIOD: f64 = 100.0;

/// First-return time of the ξ-flow orbit through `q0` around `zero`.
///
/// The section is the ray from ρ through `q0`; a return counts when the
/// orbit crosses it in the same rotational sense as it left. The crossing
/// time is refined by Illinois-type secant iteration on single steps taken
/// from the last accepted state.
pub fn detect_closed_orbit_period(q0: Complex, zero: &ZeroRecord, tol: f64) -> Result<f64> {
    let offset = q0 - zero.rho;
    let radius = offset.norm();
    if !(radius > 0.0 && radius <= CENTER_RADIUS) {
        return Err(Error::Domain(format!(
            "start point must lie within {CENTER_RADIUS} of the zero (distance {radius:e})"
        )));
    }
    let linear_period = 2.0 * PI / zero.xi_prime.norm();
    if !linear_period.is_finite() {
        return Err(Error::DegenerateZero(zero.xi_prime.norm()));
    }
    let limit = RETURN_LIMIT_FACTOR * linear_period;

    // centred coordinates w = q - ρ
    let flow = HolomorphicFlow { origin: zero.rho };
    let opts = IntegratorOptions {
        rtol: tol,
        atol: tol * radius,
        ..IntegratorOptions::default()
    }
    .max_step(linear_period / STEPS_PER_PERIOD);

    let unit = offset / radius;
    let across = |w: Complex| (w * unit.conj()).im;
    let along = |w: Complex| (w * unit.conj()).re;
    let sense = across(xi(q0)).signum();
    if sense == 0.0 {
        return Err(Error::Domain("flow is tangent to the section at the start point".into()));
    }

    let mut stepper = Stepper::new(&flow, 0.0, vec![offset], opts)?;
    let mut left_start = false;
    while stepper.t() < limit {
        let t_prev = stepper.t();
        let y_prev = stepper.y().to_vec();
        stepper.step(limit)?;
        let w = stepper.y()[0];
        if along(w) < 0.0 {
            left_start = true;
        }
        let g_prev = sense * across(y_prev[0]);
        let g_new = sense * across(w);
        if left_start && g_prev < 0.0 && g_new >= 0.0 && along(w) > 0.0 {
            let h = stepper.t() - t_prev;
            let dt = refine_crossing(&flow, &y_prev, h, g_prev, g_new, |w| sense * across(w))?;
            return Ok(t_prev + dt);
        }
    }
    Err(Error::NoReturn { limit })
}

fn refine_crossing(
    flow: &dyn Flow,
    y_prev: &[Complex],
    h: f64,
    g_lo: f64,
    g_hi: f64,
    g: impl Fn(Complex) -> f64,
) -> Result<f64> {
    let (mut a, mut fa) = (0.0, g_lo);
    let (mut b, mut fb) = (h, g_hi);
    if fb == 0.0 {
        return Ok(b);
    }
    let mut side = 0i8;
    for _ in 0..100 {
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = g(fixed_step(flow, y_prev, c)?[0]);
        if fc == 0.0 || (b - a).abs() < SECANT_TIME_TOL {
            return Ok(c);
        }
        if (fc > 0.0) == (fb > 0.0) {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() < SECANT_TIME_TOL {
            return Ok(0.5 * (a + b));
        }
    }
    Err(Error::Convergence("secant refinement of the section crossing stalled".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::locate_zeros;

    #[test]
    fn period_matches_residue_formula_and_is_radius_independent() {
        let cat = locate_zeros(35.0, 1e-12).unwrap();
        let z1 = cat.get(1).unwrap();
        let t_small = detect_closed_orbit_period(z1.rho + 0.01, z1, 1e-12).unwrap();
        let t_large = detect_closed_orbit_period(z1.rho + 0.03, z1, 1e-12).unwrap();
        assert!((t_small / z1.period - 1.0).abs() <= 1e-3);
        assert!((t_small / t_large - 1.0).abs() <= 1e-6, "{t_small} vs {t_large}");

        let z2 = cat.get(2).unwrap();
        let t2 = detect_closed_orbit_period(z2.rho + 0.01, z2, 1e-12).unwrap();
        assert!((t2 / z2.period - 1.0).abs() <= 1e-3);
        assert!((t2 / t_small - 1.0).abs() > 1e-2);
    }

    #[test]
    fn start_point_must_be_near_zero() {
        let cat = locate_zeros(20.0, 1e-12).unwrap();
        let z1 = cat.get(1).unwrap();
        assert!(detect_closed_orbit_period(z1.rho, z1, 1e-10).is_err());
        assert!(detect_closed_orbit_period(z1.rho + 0.2, z1, 1e-10).is_err());
    }
}
