//! Embedded Dormand–Prince 5(4) integrator with PI step-size control.
//!
//! States are complex vectors; the error norm runs over the real and
//! imaginary parts separately, so the scheme is the real method applied to
//! the doubled-dimension system.

use crate::error::{Error, Result};
use crate::specfun::Complex;

use super::flows::Flow;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b_hat
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const ALPHA: f64 = 0.2 - 0.75 * BETA;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

/// Step-size control settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl IntegratorOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            ..Self::default()
        }
    }

    pub fn max_step(self, max_step: f64) -> Self {
        Self { max_step, ..self }
    }
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-10,
            max_step: 0.1,
            min_step: 1e-14,
            max_steps: 5_000_000,
        }
    }
}

/// Step statistics.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    /// Largest normalised error estimate among accepted steps (<= 1).
    pub max_local_error: f64,
}

/// One Dormand–Prince step of size `h`: returns the 5th-order solution, the
/// embedded error vector and the derivative at the new point.
fn dopri_step(
    flow: &dyn Flow,
    y: &[Complex],
    k1: &[Complex],
    h: f64,
) -> Result<(Vec<Complex>, Vec<Complex>, Vec<Complex>)> {
    let n = y.len();
    let zero = Complex::new(0.0, 0.0);
    let mut k2 = vec![zero; n];
    let mut k3 = vec![zero; n];
    let mut k4 = vec![zero; n];
    let mut k5 = vec![zero; n];
    let mut k6 = vec![zero; n];
    let mut k7 = vec![zero; n];
    let mut tmp = vec![zero; n];

    for i in 0..n {
        tmp[i] = y[i] + h * A21 * k1[i];
    }
    flow.rhs(&tmp, &mut k2)?;
    for i in 0..n {
        tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
    }
    flow.rhs(&tmp, &mut k3)?;
    for i in 0..n {
        tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
    }
    flow.rhs(&tmp, &mut k4)?;
    for i in 0..n {
        tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
    }
    flow.rhs(&tmp, &mut k5)?;
    for i in 0..n {
        tmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
    }
    flow.rhs(&tmp, &mut k6)?;
    let mut y_new = vec![zero; n];
    for i in 0..n {
        y_new[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
    }
    flow.rhs(&y_new, &mut k7)?;
    let mut err = vec![zero; n];
    for i in 0..n {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    Ok((y_new, err, k7))
}

fn error_norm(y: &[Complex], y_new: &[Complex], err: &[Complex], opts: &IntegratorOptions) -> f64 {
    let mut worst: f64 = 0.0;
    for ((a, b), e) in y.iter().zip(y_new).zip(err) {
        let sc_re = opts.atol + opts.rtol * a.re.abs().max(b.re.abs());
        let sc_im = opts.atol + opts.rtol * a.im.abs().max(b.im.abs());
        worst = worst.max((e.re / sc_re).abs()).max((e.im / sc_im).abs());
    }
    worst
}

/// Takes a single uncontrolled step of size `h` from `y`.
pub fn fixed_step(flow: &dyn Flow, y: &[Complex], h: f64) -> Result<Vec<Complex>> {
    let mut k1 = vec![Complex::new(0.0, 0.0); y.len()];
    flow.rhs(y, &mut k1)?;
    Ok(dopri_step(flow, y, &k1, h)?.0)
}

/// Adaptive stepper advancing an autonomous flow in real time `t`.
///
/// Flows are autonomous, so the stage abscissae never enter the stages.
pub struct Stepper<'a> {
    flow: &'a dyn Flow,
    opts: IntegratorOptions,
    t: f64,
    y: Vec<Complex>,
    k1: Vec<Complex>,
    h: f64,
    err_prev: f64,
    stats: StepStats,
}

impl<'a> Stepper<'a> {
    pub fn new(flow: &'a dyn Flow, t0: f64, y0: Vec<Complex>, opts: IntegratorOptions) -> Result<Self> {
        if !(opts.rtol > 0.0 && opts.atol > 0.0 && opts.max_step > 0.0) {
            return Err(Error::Config("tolerances and max_step must be positive".into()));
        }
        let mut k1 = vec![Complex::new(0.0, 0.0); y0.len()];
        flow.rhs(&y0, &mut k1)?;
        let h = initial_step(&y0, &k1, &opts);
        Ok(Self {
            flow,
            opts,
            t: t0,
            y: y0,
            k1,
            h,
            err_prev: 1e-4,
            stats: StepStats::default(),
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[Complex] {
        &self.y
    }

    pub fn stats(&self) -> StepStats {
        self.stats
    }

    pub fn flow(&self) -> &dyn Flow {
        self.flow
    }

    /// Advances by one accepted step, never stepping past `t_limit`.
    pub fn step(&mut self, t_limit: f64) -> Result<()> {
        let remaining = t_limit - self.t;
        if remaining <= 0.0 {
            return Ok(());
        }
        let mut h = self.h.min(self.opts.max_step);
        loop {
            let last = h >= remaining;
            if last {
                h = remaining;
            } else if h < self.opts.min_step {
                return Err(Error::StepSizeUnderflow { t: self.t, h });
            }
            if self.stats.accepted + self.stats.rejected >= self.opts.max_steps {
                return Err(Error::Convergence(format!("exceeded {} steps", self.opts.max_steps)));
            }
            let (y_new, err_vec, k_new) = dopri_step(self.flow, &self.y, &self.k1, h)?;
            let err = error_norm(&self.y, &y_new, &err_vec, &self.opts);
            if !err.is_finite() {
                self.stats.rejected += 1;
                h *= MIN_FACTOR;
                continue;
            }
            if err <= 1.0 {
                let factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * err.powf(-ALPHA) * self.err_prev.powf(BETA)).clamp(MIN_FACTOR, MAX_FACTOR)
                };
                self.t = if last { t_limit } else { self.t + h };
                self.y = y_new;
                self.k1 = k_new;
                self.err_prev = err.max(1e-4);
                self.stats.accepted += 1;
                self.stats.max_local_error = self.stats.max_local_error.max(err);
                if !last || h * factor < self.h {
                    self.h = (h * factor).min(self.opts.max_step);
                }
                return Ok(());
            }
            self.stats.rejected += 1;
            h *= (SAFETY * err.powf(-ALPHA)).max(MIN_FACTOR);
        }
    }
}

fn initial_step(y: &[Complex], f: &[Complex], opts: &IntegratorOptions) -> f64 {
    let mut d0: f64 = 0.0;
    let mut d1: f64 = 0.0;
    for (a, b) in y.iter().zip(f) {
        let sc = opts.atol + opts.rtol * a.norm();
        d0 = d0.max(a.norm() / sc);
        d1 = d1.max(b.norm() / sc);
    }
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(opts.max_step).max(opts.min_step * 10.0)
}
