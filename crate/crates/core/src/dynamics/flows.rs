//! The vector fields, behind a common trait and a name-keyed registry.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::specfun::{xi, xi_jet, Complex};

/// Named slot of a flow state vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Q,
    P,
    Dq,
    Dp,
    /// Complex (Newton) time accumulated along the run.
    Time,
}

impl Component {
    pub fn csv_prefix(self) -> &'static str {
        match self {
            Component::Q => "q",
            Component::P => "p",
            Component::Dq => "dq",
            Component::Dp => "dp",
            Component::Time => "T",
        }
    }
}

/// A state of any flow at real flow time `t` (or arclength, for Newton runs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub q: Complex,
    pub p: Option<Complex>,
    pub dq: Option<Complex>,
    pub dp: Option<Complex>,
    pub time: Option<Complex>,
}

impl FlowState {
    pub fn new(t: f64, q: Complex) -> Self {
        Self { t, q, p: None, dq: None, dp: None, time: None }
    }

    pub fn with_p(self, p: Complex) -> Self {
        Self { p: Some(p), ..self }
    }

    pub fn with_variation(self, dq: Complex, dp: Complex) -> Self {
        Self { dq: Some(dq), dp: Some(dp), ..self }
    }

    pub fn with_time(self, time: Complex) -> Self {
        Self { time: Some(time), ..self }
    }

    fn slot(&self, c: Component) -> Option<Complex> {
        match c {
            Component::Q => Some(self.q),
            Component::P => self.p,
            Component::Dq => self.dq,
            Component::Dp => self.dp,
            Component::Time => self.time,
        }
    }

    /// Packs the components named by `layout`; missing ones are an error.
    pub fn pack(&self, layout: &[Component]) -> Result<Vec<Complex>> {
        layout
            .iter()
            .map(|&c| {
                self.slot(c)
                    .ok_or_else(|| Error::Config(format!("initial state lacks component {c:?}")))
            })
            .collect()
    }

    pub fn unpack(t: f64, layout: &[Component], y: &[Complex]) -> Self {
        let mut state = FlowState::new(t, Complex::new(0.0, 0.0));
        for (&c, &v) in layout.iter().zip(y) {
            match c {
                Component::Q => state.q = v,
                Component::P => state.p = Some(v),
                Component::Dq => state.dq = Some(v),
                Component::Dp => state.dp = Some(v),
                Component::Time => state.time = Some(v),
            }
        }
        state
    }
}

/// An autonomous complex vector field.
pub trait Flow: Send + Sync {
    fn name(&self) -> &'static str;

    /// Which state components the field acts on, in vector order.
    fn layout(&self) -> &'static [Component];

    fn rhs(&self, y: &[Complex], dy: &mut [Complex]) -> Result<()>;
}

impl fmt::Debug for dyn Flow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Flow({})", self.name())
    }
}

/// Holomorphic ξ-flow q' = ξ(origin + q).
///
/// A nonzero `origin` integrates in coordinates centred on it, which keeps
/// the error control scale-free for small orbits around a zero.
#[derive(Debug, Clone, Copy)]
pub struct HolomorphicFlow {
    pub origin: Complex,
}

impl Flow for HolomorphicFlow {
    fn name(&self) -> &'static str {
        "xi"
    }

    fn layout(&self) -> &'static [Component] {
        &[Component::Q]
    }

    fn rhs(&self, y: &[Complex], dy: &mut [Complex]) -> Result<()> {
        dy[0] = xi(self.origin + y[0]);
        Ok(())
    }
}

/// H = ξ(q) p: q' = ξ(q), p' = -ξ'(q) p.
#[derive(Debug, Clone, Copy, Default)]
pub struct HamiltonianFlow;

impl Flow for HamiltonianFlow {
    fn name(&self) -> &'static str {
        "hamiltonian"
    }

    fn layout(&self) -> &'static [Component] {
        &[Component::Q, Component::P]
    }

    fn rhs(&self, y: &[Complex], dy: &mut [Complex]) -> Result<()> {
        let jet = xi_jet(y[0]);
        dy[0] = jet.value;
        dy[1] = -jet.d1 * y[1];
        Ok(())
    }
}

/// Hamiltonian flow plus its linearisation:
/// Δq' = ξ'(q) Δq, Δp' = -ξ''(q) p Δq - ξ'(q) Δp.
#[derive(Debug, Clone, Copy, Default)]
pub struct VariationalFlow;

impl Flow for VariationalFlow {
    fn name(&self) -> &'static str {
        "variational"
    }

    fn layout(&self) -> &'static [Component] {
        &[Component::Q, Component::P, Component::Dq, Component::Dp]
    }

    fn rhs(&self, y: &[Complex], dy: &mut [Complex]) -> Result<()> {
        let jet = xi_jet(y[0]);
        dy[0] = jet.value;
        dy[1] = -jet.d1 * y[1];
        dy[2] = jet.d1 * y[2];
        dy[3] = -jet.d2 * y[1] * y[2] - jet.d1 * y[3];
        Ok(())
    }
}

/// Ratio |ξ/ξ'| above which the Newton field is treated as singular.
pub const SEPARATRIX_RATIO: f64 = 1e10;

/// Newton flow ds/du = -(ξ/ξ')·d along the complex-time ray T = u·d, |d| = 1.
/// The accumulated complex time is carried as the `Time` component.
#[derive(Debug, Clone, Copy)]
pub struct NewtonFlow {
    pub direction: Complex,
}

impl Flow for NewtonFlow {
    fn name(&self) -> &'static str {
        "newton"
    }

    fn layout(&self) -> &'static [Component] {
        &[Component::Q, Component::Time]
    }

    fn rhs(&self, y: &[Complex], dy: &mut [Complex]) -> Result<()> {
        let jet = xi_jet(y[0]);
        let step = jet.value / jet.d1;
        let ratio = step.norm();
        if !(ratio.is_finite() && ratio < SEPARATRIX_RATIO) {
            return Err(Error::SeparatrixSingularity { s: y[0].to_string(), ratio });
        }
        dy[0] = -step * self.direction;
        dy[1] = self.direction;
        Ok(())
    }
}

/// ξ-flow with the complex time T(t) accumulated through dT/dt = -ξ'(q(t)).
#[derive(Debug, Clone, Copy, Default)]
pub struct TimeReparamFlow;

impl Flow for TimeReparamFlow {
    fn name(&self) -> &'static str {
        "reparam"
    }

    fn layout(&self) -> &'static [Component] {
        &[Component::Q, Component::Time]
    }

    fn rhs(&self, y: &[Complex], dy: &mut [Complex]) -> Result<()> {
        let jet = xi_jet(y[0]);
        dy[0] = jet.value;
        dy[1] = -jet.d1;
        Ok(())
    }
}

/// Construction parameters shared by all registered flows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams {
    /// Unit direction of complex time (Newton flow only).
    pub direction: Complex,
    /// Centre of the integration coordinates (ξ-flow only).
    pub origin: Complex,
}

impl Default for FlowParams {
    fn default() -> Self {
        Self {
            direction: Complex::new(1.0, 0.0),
            origin: Complex::new(0.0, 0.0),
        }
    }
}

pub type FlowConstructor = fn(&FlowParams) -> Box<dyn Flow>;

struct Entry {
    description: &'static str,
    build: FlowConstructor,
}

/// Flows registered by name and selected at runtime.
pub struct FlowRegistry {
    entries: BTreeMap<&'static str, Entry>,
}

impl FlowRegistry {
    pub fn empty() -> Self {
        Self { entries: BTreeMap::new() }
    }

    /// Registry holding every flow shipped with the crate.
    pub fn builtin() -> Self {
        let mut registry = Self::empty();
        registry.register("xi", "holomorphic flow q' = xi(q)", |p| {
            Box::new(HolomorphicFlow { origin: p.origin })
        });
        registry.register("hamiltonian", "Hamiltonian system of H = xi(q) p", |_| {
            Box::new(HamiltonianFlow)
        });
        registry.register(
            "variational",
            "Hamiltonian system with its variational equations",
            |_| Box::new(VariationalFlow),
        );
        registry.register("newton", "Newton flow s' = -xi/xi' in complex time", |p| {
            Box::new(NewtonFlow { direction: p.direction })
        });
        registry.register(
            "reparam",
            "xi-flow with complex time accumulated by dT/dt = -xi'(q)",
            |_| Box::new(TimeReparamFlow),
        );
        registry
    }

    /// Adds or replaces a flow under `name`.
    pub fn register(&mut self, name: &'static str, description: &'static str, build: FlowConstructor) {
        self.entries.insert(name, Entry { description, build });
    }

    pub fn build(&self, name: &str, params: &FlowParams) -> Result<Box<dyn Flow>> {
        self.entries
            .get(name)
            .map(|e| (e.build)(params))
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown flow '{name}' (available: {})",
                    self.names().collect::<Vec<_>>().join(", ")
                ))
            })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn describe(&self, name: &str) -> Option<&'static str> {
        self.entries.get(name).map(|e| e.description)
    }
}

impl Default for FlowRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}
