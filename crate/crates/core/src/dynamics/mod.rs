//! Adaptive integration of the ξ-flow, the complex-time Newton flow, the
//! Hamiltonian system H = ξ(q)p and its variational equations, plus
//! closed-orbit period detection and phase-portrait sampling.

mod flows;
mod integrator;
mod period;
mod portrait;

use std::fmt::Write as _;

pub use flows::{
    Component, Flow, FlowConstructor, FlowParams, FlowRegistry, FlowState, HamiltonianFlow, HolomorphicFlow,
    NewtonFlow, TimeReparamFlow, VariationalFlow, SEPARATRIX_RATIO,
};
pub use integrator::{fixed_step, IntegratorOptions, StepStats, Stepper};
pub use period::{detect_closed_orbit_period, CENTER_RADIUS};
pub use portrait::{phase_portrait_grid, portrait_to_csv, PortraitNode};

use crate::error::{Error, Result};
use crate::specfun::{xi, xi_jet, Complex};

/// Accepted states of one integration run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub flow: &'static str,
    pub layout: &'static [Component],
    pub states: Vec<FlowState>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub max_local_error: f64,
}

impl Trajectory {
    pub fn first(&self) -> &FlowState {
        &self.states[0]
    }

    pub fn last(&self) -> &FlowState {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn csv_header(&self) -> String {
        let mut cols = vec!["t".to_string()];
        for c in self.layout {
            cols.push(format!("{}_re", c.csv_prefix()));
            cols.push(format!("{}_im", c.csv_prefix()));
        }
        cols.join(",")
    }

    /// CSV with a one-line header; reals printed with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = self.csv_header();
        out.push('\n');
        for s in &self.states {
            let _ = write!(out, "{:.16e}", s.t);
            let y = s.pack(self.layout).expect("states match layout");
            for v in y {
                let _ = write!(out, ",{:.16e},{:.16e}", v.re, v.im);
            }
            out.push('\n');
        }
        out
    }

    fn append(&mut self, other: Trajectory) {
        self.states.extend(other.states.into_iter().skip(1));
        self.accepted_steps += other.accepted_steps;
        self.rejected_steps += other.rejected_steps;
        self.max_local_error = self.max_local_error.max(other.max_local_error);
    }
}

/// Integrates `flow` from `initial` until flow time `t_end`.
pub fn integrate(flow: &dyn Flow, initial: &FlowState, t_end: f64, opts: IntegratorOptions) -> Result<Trajectory> {
    if !(t_end.is_finite() && t_end >= initial.t) {
        return Err(Error::Config(format!("t_end = {t_end} must not precede t0 = {}", initial.t)));
    }
    let layout = flow.layout();
    let y0 = initial.pack(layout)?;
    let mut states = vec![*initial];
    let mut stepper = Stepper::new(flow, initial.t, y0, opts)?;
    while stepper.t() < t_end {
        stepper.step(t_end)?;
        states.push(FlowState::unpack(stepper.t(), layout, stepper.y()));
    }
    let stats = stepper.stats();
    Ok(Trajectory {
        flow: flow.name(),
        layout,
        states,
        accepted_steps: stats.accepted,
        rejected_steps: stats.rejected,
        max_local_error: stats.max_local_error,
    })
}

/// Integration tolerances accepted by the named wrappers.
pub fn check_tol(tol: f64) -> Result<()> {
    if (1e-13..=1e-4).contains(&tol) {
        Ok(())
    } else {
        Err(Error::Config(format!("tolerance must lie in [1e-13, 1e-4], got {tol:e}")))
    }
}

/// Holomorphic ξ-flow q' = ξ(q).
pub fn integrate_holomorphic_flow(q0: Complex, t_end: f64, tol: f64) -> Result<Trajectory> {
    check_tol(tol)?;
    let flow = HolomorphicFlow { origin: Complex::new(0.0, 0.0) };
    integrate(&flow, &FlowState::new(0.0, q0), t_end, IntegratorOptions::with_tol(tol))
}

/// Hamiltonian system q' = ξ(q), p' = -ξ'(q)p.
pub fn integrate_hamiltonian(q0: Complex, p0: Complex, t_end: f64, tol: f64) -> Result<Trajectory> {
    check_tol(tol)?;
    if p0 == Complex::new(0.0, 0.0) {
        return Err(Error::Domain("p0 must be nonzero".into()));
    }
    integrate(
        &HamiltonianFlow,
        &FlowState::new(0.0, q0).with_p(p0),
        t_end,
        IntegratorOptions::with_tol(tol),
    )
}

/// Hamiltonian system together with its variational equations.
pub fn integrate_variational(
    q0: Complex,
    p0: Complex,
    dq0: Complex,
    dp0: Complex,
    t_end: f64,
    tol: f64,
) -> Result<Trajectory> {
    check_tol(tol)?;
    if p0 == Complex::new(0.0, 0.0) {
        return Err(Error::Domain("p0 must be nonzero".into()));
    }
    integrate(
        &VariationalFlow,
        &FlowState::new(0.0, q0).with_p(p0).with_variation(dq0, dp0),
        t_end,
        IntegratorOptions::with_tol(tol),
    )
}

/// ξ-flow with the complex time T(t) integrated alongside via dT/dt = -ξ'(q).
pub fn integrate_time_reparam(q0: Complex, t_end: f64, tol: f64) -> Result<Trajectory> {
    check_tol(tol)?;
    integrate(
        &TimeReparamFlow,
        &FlowState::new(0.0, q0).with_time(Complex::new(0.0, 0.0)),
        t_end,
        IntegratorOptions::with_tol(tol),
    )
}

/// Newton flow s' = -ξ(s)/ξ'(s) along the straight complex-time segment 0 → `t_end`.
///
/// The state's `t` is the arclength |T| and `time` is the complex time T.
pub fn integrate_newton_flow(s0: Complex, t_end: Complex, tol: f64) -> Result<Trajectory> {
    integrate_newton_path(s0, &[t_end], tol)
}

/// Newton flow along the piecewise-linear complex-time path 0 → w₁ → w₂ → …
pub fn integrate_newton_path(s0: Complex, waypoints: &[Complex], tol: f64) -> Result<Trajectory> {
    check_tol(tol)?;
    let jet = xi_jet(s0);
    let ratio = (jet.value / jet.d1).norm();
    if !(ratio.is_finite() && ratio < SEPARATRIX_RATIO) {
        return Err(Error::SeparatrixSingularity { s: s0.to_string(), ratio });
    }
    let origin = FlowState::new(0.0, s0).with_time(Complex::new(0.0, 0.0));
    let mut trajectory = Trajectory {
        flow: "newton",
        layout: NewtonFlow { direction: Complex::new(1.0, 0.0) }.layout(),
        states: vec![origin],
        accepted_steps: 0,
        rejected_steps: 0,
        max_local_error: 0.0,
    };
    let mut here = Complex::new(0.0, 0.0);
    for &target in waypoints {
        let delta = target - here;
        let length = delta.norm();
        if length == 0.0 {
            continue;
        }
        let flow = NewtonFlow { direction: delta / length };
        let start = *trajectory.last();
        let segment = integrate(&flow, &start, start.t + length, IntegratorOptions::with_tol(tol))?;
        trajectory.append(segment);
        here = target;
    }
    Ok(trajectory)
}

/// H = ξ(q)p at a state carrying a momentum.
pub fn energy(state: &FlowState) -> Option<Complex> {
    state.p.map(|p| xi(state.q) * p)
}

/// max_t |H(t) - H(0)| / |H(0)| along a Hamiltonian-type trajectory.
pub fn max_relative_energy_drift(trajectory: &Trajectory) -> Option<f64> {
    let h0 = energy(trajectory.first())?;
    trajectory
        .states
        .iter()
        .map(|s| energy(s).map(|h| (h - h0).norm() / h0.norm()))
        .try_fold(0.0f64, |acc, d| d.map(|d| acc.max(d)))
}
