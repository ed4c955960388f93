//! Radial finite-difference solver for the equality system
//!
//! ```text
//! u_tt = u_rr + (N-1)/r u_r + r^a F_p(v)
//! v_tt = v_rr + (N-1)/r v_r + r^b F_q(u)
//! ```
//!
//! on `r0 < r < r_max` with `F_p(v) = |v|^p` (or `|v|^{p-1} v`). The inner
//! sphere carries the boundary condition of the problem: Dirichlet data are
//! imposed on the boundary sample, Neumann data `∂_ν u = -u_r = f` through a
//! ghost point. The scheme is the explicit leapfrog, second order in `t`
//! and `r`, started with a Taylor step.
//!
//! A run ends at `t_final` or when `max(|u|, |v|)` passes the blow-up
//! threshold or stops being finite.

mod probe;
mod scheme;

pub use probe::{
    confirm_blowup, convergence_order, dichotomy_probe, observed_order, BlowupConfirmation,
    ConvergenceReport, ProbeProtocol, ProbeReport,
};
pub use scheme::Simulation;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::criticality::{decay_pair, stationary_pair, BoundaryKind, ProblemParams};
use crate::error::{Error, Result};

/// Nonlinear term `F_p(v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Nonlinearity {
    /// `|v|^p`.
    #[default]
    Abs,
    /// `|v|^{p-1} v`.
    Signed,
}

impl std::str::FromStr for Nonlinearity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "abs" => Ok(Nonlinearity::Abs),
            "signed" => Ok(Nonlinearity::Signed),
            _ => Err(Error::domain(format!("unknown nonlinearity `{s}` (abs or signed)"))),
        }
    }
}

/// Closure of the truncated domain at `r_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterBoundary {
    /// Samples keep their initial value.
    #[default]
    Pinned,
    /// `u_r = v_r = 0`.
    ZeroFlux,
}

impl std::str::FromStr for OuterBoundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "pinned" => Ok(OuterBoundary::Pinned),
            "zero_flux" => Ok(OuterBoundary::ZeroFlux),
            _ => Err(Error::domain(format!("unknown outer boundary `{s}` (pinned or zero_flux)"))),
        }
    }
}

pub type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Arbitrary radial initial data.
#[derive(Clone)]
pub struct Profiles {
    pub u: RadialFn,
    pub v: RadialFn,
    pub ut: RadialFn,
    pub vt: RadialFn,
    /// Radius beyond which all four profiles vanish, if any.
    pub support: Option<f64>,
}

impl fmt::Debug for Profiles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Profiles")
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialData {
    #[default]
    Zero,
    /// `(1 + ε)` times the stationary pair, at rest.
    Stationary { epsilon: f64 },
    /// The spatially constant decaying pair at `t = 0`.
    DecayPair,
    /// `A (1 - x^2)^4` with `x = (r - center)/width`, at rest.
    Bump {
        center: f64,
        width: f64,
        u: f64,
        v: f64,
    },
    #[serde(skip)]
    Profiles(Profiles),
}

impl InitialData {
    fn support(&self, r0: f64) -> Option<f64> {
        match self {
            InitialData::Zero => Some(r0),
            InitialData::Bump { center, width, .. } => Some(center + width),
            InitialData::Profiles(p) => p.support,
            InitialData::Stationary { .. } | InitialData::DecayPair => None,
        }
    }

    fn swapped(&self) -> InitialData {
        match self {
            InitialData::Bump {
                center,
                width,
                u,
                v,
            } => InitialData::Bump {
                center: *center,
                width: *width,
                u: *v,
                v: *u,
            },
            InitialData::Profiles(p) => InitialData::Profiles(Profiles {
                u: p.v.clone(),
                v: p.u.clone(),
                ut: p.vt.clone(),
                vt: p.ut.clone(),
                support: p.support,
            }),
            other => other.clone(),
        }
    }
}

pub(crate) fn bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - x * x).powi(4)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub params: ProblemParams,
    /// Boundary value of `u` (or of `∂_ν u`) on the sphere.
    pub f_val: f64,
    pub g_val: f64,
    pub r_max: f64,
    pub dr: f64,
    pub cfl: f64,
    pub t_final: f64,
    pub blowup_threshold: f64,
    #[serde(default)]
    pub initial: InitialData,
    #[serde(default)]
    pub nonlinearity: Nonlinearity,
    #[serde(default)]
    pub outer: OuterBoundary,
    /// Time between rows of the recorded series.
    pub sample_dt: f64,
}

pub const DEFAULT_BLOWUP_THRESHOLD: f64 = 1e8;

impl SimConfig {
    /// Zero data and zero boundary values on `[r0, r0 + t_final + 1]`.
    pub fn new(params: ProblemParams, t_final: f64) -> Self {
        let r_max = params.r0 + t_final + 1.0;
        SimConfig {
            params,
            f_val: 0.0,
            g_val: 0.0,
            r_max,
            dr: 0.02,
            cfl: 0.5,
            t_final,
            blowup_threshold: DEFAULT_BLOWUP_THRESHOLD,
            initial: InitialData::Zero,
            nonlinearity: Nonlinearity::Abs,
            outer: OuterBoundary::Pinned,
            sample_dt: 0.1,
        }
    }

    /// Stationary-pair data, with the boundary values the pair itself takes
    /// on the sphere for the boundary kind of `params`.
    pub fn stationary(params: ProblemParams, r_max: f64, t_final: f64) -> Result<Self> {
        let pair = stationary_pair(&params)?;
        let r0 = params.r0;
        let (f_val, g_val) = match params.boundary {
            BoundaryKind::Dirichlet => (pair.u(r0), pair.v(r0)),
            BoundaryKind::Neumann => (-pair.du(r0), -pair.dv(r0)),
            BoundaryKind::Mixed => (pair.u(r0), -pair.dv(r0)),
        };
        Ok(SimConfig {
            f_val,
            g_val,
            r_max,
            initial: InitialData::Stationary { epsilon: 0.0 },
            ..SimConfig::new(params, t_final)
        })
    }

    /// Decaying-pair data with zero Neumann values and a zero-flux outer
    /// boundary, where the pair is an exact solution.
    pub fn decay(params: ProblemParams, t_final: f64) -> Self {
        let params = params.with_boundary(BoundaryKind::Neumann);
        SimConfig {
            r_max: params.r0 + 1.0,
            initial: InitialData::DecayPair,
            outer: OuterBoundary::ZeroFlux,
            ..SimConfig::new(params, t_final)
        }
    }

    pub fn dt_nominal(&self) -> f64 {
        self.cfl * self.dr
    }

    /// Mirror image under `(p, a, f, u) <-> (q, b, g, v)`.
    pub fn swapped(&self) -> Self {
        SimConfig {
            params: self.params.swapped(),
            f_val: self.g_val,
            g_val: self.f_val,
            initial: self.initial.swapped(),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pr = &self.params;
        pr.validate()?;
        if !(pr.p > 0.0 && pr.q > 0.0) {
            return Err(Error::config("simulation needs p, q > 0"));
        }
        if pr.boundary == BoundaryKind::Mixed && pr.n < 2 {
            return Err(Error::config("N >= 2 is required"));
        }
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::config(format!("{name} = {x} must be positive and finite")))
            }
        };
        positive("dr", self.dr)?;
        positive("blowup_threshold", self.blowup_threshold)?;
        positive("sample_dt", self.sample_dt)?;
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::config(format!(
                "CFL violation: cfl = {} must lie in (0, 1)",
                self.cfl
            )));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::config(format!("t_final = {} must be >= 0", self.t_final)));
        }
        if !(self.f_val.is_finite() && self.g_val.is_finite()) {
            return Err(Error::config("boundary values must be finite"));
        }
        if !(self.r_max >= pr.r0 + 2.0 * self.dr) {
            return Err(Error::config(format!(
                "r_max = {} leaves fewer than three grid points above r0 = {}",
                self.r_max, pr.r0
            )));
        }
        if let Some(support) = self.initial.support(pr.r0) {
            let need = support.max(pr.r0) + self.t_final;
            if self.r_max < need {
                return Err(Error::config(format!(
                    "r_max = {} is below support + t_final = {need}; the outer boundary would be reached",
                    self.r_max
                )));
            }
        }
        match &self.initial {
            InitialData::Bump { center, width, .. } => {
                if !(*width > 0.0 && center - width >= pr.r0) {
                    return Err(Error::config(format!(
                        "bump [{}, {}] must lie outside the ball of radius {}",
                        center - width,
                        center + width,
                        pr.r0
                    )));
                }
            }
            InitialData::Stationary { epsilon } => {
                if !epsilon.is_finite() {
                    return Err(Error::config("epsilon must be finite"));
                }
                stationary_pair(pr)?;
            }
            InitialData::DecayPair => {
                if pr.a != 0.0 || pr.b != 0.0 {
                    return Err(Error::config(
                        "the decaying pair solves the system only for a = b = 0",
                    ));
                }
                decay_pair(pr)?;
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Running,
    BlownUp { t_blow: f64 },
    Completed,
}

/// Two time levels of the leapfrog scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialState {
    pub t: f64,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub u_prev: Vec<f64>,
    pub v_prev: Vec<f64>,
    pub status: Status,
}

impl RadialState {
    pub fn sup_u(&self) -> f64 {
        sup(&self.u)
    }

    pub fn sup_v(&self) -> f64 {
        sup(&self.v)
    }
}

/// `max |x_i|`, or NaN as soon as one entry is not finite.
pub(crate) fn sup(xs: &[f64]) -> f64 {
    let mut m: f64 = 0.0;
    for &x in xs {
        if !x.is_finite() {
            return f64::NAN;
        }
        m = m.max(x.abs());
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub t: f64,
    pub sup_u: f64,
    pub sup_v: f64,
    /// `Σ (u_t² + u_r² + v_t² + v_r²)/2 · r^{N-1} dr`.
    pub energy_proxy: f64,
    /// Distance to the exact solution, when the data have one.
    pub max_error: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SimVerdict {
    BlewUp { t_blow: f64 },
    BoundedToHorizon,
}

impl SimVerdict {
    pub fn t_blow(&self) -> Option<f64> {
        match self {
            SimVerdict::BlewUp { t_blow } => Some(*t_blow),
            SimVerdict::BoundedToHorizon => None,
        }
    }
}

impl fmt::Display for SimVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimVerdict::BlewUp { t_blow } => write!(f, "BlewUp(t_blow = {t_blow})"),
            SimVerdict::BoundedToHorizon => f.write_str("BoundedToHorizon"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub verdict: SimVerdict,
    pub steps: usize,
    pub dt: f64,
    pub series: Vec<SeriesRow>,
    /// Largest distance to the exact solution over all steps.
    pub max_error: Option<f64>,
    pub final_state: RadialState,
}

/// Integrates `config` to `t_final` or blow-up.
pub fn run(config: &SimConfig) -> Result<RunRecord> {
    let sim = Simulation::new(config)?;
    let mut state = sim.initial_state();
    let sample_every = ((config.sample_dt / sim.dt()).round() as usize).max(1);
    let mut series = vec![sim.sample(&state)];
    let mut max_error = sim.error(&state);
    let mut steps = 0;
    while state.status == Status::Running && steps < sim.steps() {
        sim.step(&mut state)?;
        steps += 1;
        if let Some(e) = sim.error(&state) {
            max_error = Some(max_error.map_or(e, |m: f64| m.max(e)));
        }
        let last = steps == sim.steps() || state.status != Status::Running;
        if steps % sample_every == 0 || last {
            series.push(sim.sample(&state));
        }
    }
    if state.status == Status::Running {
        state.status = Status::Completed;
    }
    let verdict = match state.status {
        Status::BlownUp { t_blow } => SimVerdict::BlewUp { t_blow },
        _ => SimVerdict::BoundedToHorizon,
    };
    Ok(RunRecord {
        verdict,
        steps,
        dt: sim.dt(),
        series,
        max_error,
        final_state: state,
    })
}
