use super::{
    bump, sup, InitialData, Nonlinearity, OuterBoundary, RadialState, SeriesRow, SimConfig,
    Status,
};
use crate::criticality::{decay_pair, stationary_pair, BoundaryKind, DecayPair};
use crate::error::{Error, Result};

/// How one field is closed at the inner sphere.
#[derive(Debug, Clone, Copy)]
enum Inner {
    Value(f64),
    /// `∂_ν w = -w_r = datum`, via `w_{-1} = w_1 + 2 dr datum`.
    Flux(f64),
}

#[derive(Debug, Clone)]
enum Reference {
    None,
    Stationary { u: Vec<f64>, v: Vec<f64> },
    Decay(DecayPair),
}

/// A configuration compiled onto its grid.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: SimConfig,
    r: Vec<f64>,
    dr: f64,
    dt: f64,
    steps: usize,
    weight_u: Vec<f64>,
    weight_v: Vec<f64>,
    // coefficients of w_{i+1} and w_{i-1} in the radial Laplacian
    plus: Vec<f64>,
    minus: Vec<f64>,
    inner_u: Inner,
    inner_v: Inner,
    reference: Reference,
}

fn power(kind: Nonlinearity, x: f64, p: f64) -> f64 {
    match kind {
        Nonlinearity::Abs => x.abs().powf(p),
        Nonlinearity::Signed => x.abs().powf(p - 1.0) * x,
    }
}

impl Simulation {
    pub fn new(config: &SimConfig) -> Result<Self> {
        config.validate()?;
        let pr = &config.params;
        let r0 = pr.r0;
        let cells = ((config.r_max - r0) / config.dr - 1e-9).ceil().max(2.0) as usize;
        let dr = config.dr;
        let r: Vec<f64> = (0..=cells).map(|i| r0 + i as f64 * dr).collect();
        let nominal = config.dt_nominal();
        let steps = (config.t_final / nominal - 1e-9).ceil().max(0.0) as usize;
        let dt = if steps == 0 { nominal } else { config.t_final / steps as f64 };
        let half = (pr.n as f64 - 1.0) / (2.0 * dr);
        let inv2 = 1.0 / (dr * dr);
        let plus = r.iter().map(|&ri| inv2 + half / ri).collect();
        let minus = r.iter().map(|&ri| inv2 - half / ri).collect();
        let weight_u = r.iter().map(|&ri| ri.powf(pr.a)).collect();
        let weight_v = r.iter().map(|&ri| ri.powf(pr.b)).collect();
        let (inner_u, inner_v) = match pr.boundary {
            BoundaryKind::Dirichlet => (Inner::Value(config.f_val), Inner::Value(config.g_val)),
            BoundaryKind::Neumann => (Inner::Flux(config.f_val), Inner::Flux(config.g_val)),
            BoundaryKind::Mixed => (Inner::Value(config.f_val), Inner::Flux(config.g_val)),
        };
        let reference = match config.initial {
            InitialData::Stationary { .. } => {
                let pair = stationary_pair(pr)?;
                Reference::Stationary {
                    u: r.iter().map(|&x| pair.u(x)).collect(),
                    v: r.iter().map(|&x| pair.v(x)).collect(),
                }
            }
            InitialData::DecayPair => Reference::Decay(decay_pair(pr)?),
            _ => Reference::None,
        };
        Ok(Simulation {
            config: config.clone(),
            r,
            dr,
            dt,
            steps,
            weight_u,
            weight_v,
            plus,
            minus,
            inner_u,
            inner_v,
            reference,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    /// Number of steps to `t_final`.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn grid(&self) -> &[f64] {
        &self.r
    }

    fn initial_fields(&self) -> Result<[Vec<f64>; 4]> {
        let pr = &self.config.params;
        let r = &self.r;
        let zeros = vec![0.0; r.len()];
        let fields = match &self.config.initial {
            InitialData::Zero => [zeros.clone(), zeros.clone(), zeros.clone(), zeros],
            InitialData::Stationary { epsilon } => {
                let pair = stationary_pair(pr)?;
                let s = 1.0 + epsilon;
                [
                    r.iter().map(|&x| s * pair.u(x)).collect(),
                    r.iter().map(|&x| s * pair.v(x)).collect(),
                    zeros.clone(),
                    zeros,
                ]
            }
            InitialData::DecayPair => {
                let pair = decay_pair(pr)?;
                [
                    vec![pair.u(0.0); r.len()],
                    vec![pair.v(0.0); r.len()],
                    vec![pair.du(0.0); r.len()],
                    vec![pair.dv(0.0); r.len()],
                ]
            }
            InitialData::Bump {
                center,
                width,
                u,
                v,
            } => {
                let shape: Vec<f64> = r.iter().map(|&x| bump((x - center) / width)).collect();
                [
                    shape.iter().map(|s| u * s).collect(),
                    shape.iter().map(|s| v * s).collect(),
                    zeros.clone(),
                    zeros,
                ]
            }
            InitialData::Profiles(p) => [
                r.iter().map(|&x| (p.u)(x)).collect(),
                r.iter().map(|&x| (p.v)(x)).collect(),
                r.iter().map(|&x| (p.ut)(x)).collect(),
                r.iter().map(|&x| (p.vt)(x)).collect(),
            ],
        };
        if fields.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::config("initial data are not finite on the grid"));
        }
        Ok(fields)
    }

    /// State at `t = 0`.
    ///
    /// The previous level is the backward Taylor value
    /// `w(-dt) = w - dt w_t + dt²/2 w_tt`, so that the first leapfrog step
    /// reproduces the forward Taylor start.
    pub fn initial_state(&self) -> RadialState {
        let [mut u, mut v, ut, vt] = self.initial_fields().expect("validated in new");
        if let Inner::Value(f) = self.inner_u {
            u[0] = f;
        }
        if let Inner::Value(g) = self.inner_v {
            v[0] = g;
        }
        let acc_u = self.accelerations(&u, &v, true);
        let acc_v = self.accelerations(&v, &u, false);
        let dt = self.dt;
        let back = |w: &[f64], wt: &[f64], acc: &[f64]| -> Vec<f64> {
            w.iter()
                .zip(wt)
                .zip(acc)
                .map(|((&w, &wt), &a)| w - dt * wt + 0.5 * dt * dt * a)
                .collect()
        };
        let u_prev = back(&u, &ut, &acc_u);
        let v_prev = back(&v, &vt, &acc_v);
        RadialState {
            t: 0.0,
            r: self.r.clone(),
            u,
            v,
            u_prev,
            v_prev,
            status: Status::Running,
        }
    }

    // w_tt = Δw + weight·F(other) at every sample; boundary samples with
    // imposed values get zero.
    fn accelerations(&self, w: &[f64], other: &[f64], is_u: bool) -> Vec<f64> {
        let mut out = vec![0.0; w.len()];
        self.accumulate(w, other, is_u, |i, a| out[i] = a);
        out
    }

    fn accumulate(&self, w: &[f64], other: &[f64], is_u: bool, mut sink: impl FnMut(usize, f64)) {
        let pr = &self.config.params;
        let (inner, weight, expo) = if is_u {
            (self.inner_u, &self.weight_u, pr.p)
        } else {
            (self.inner_v, &self.weight_v, pr.q)
        };
        let kind = self.config.nonlinearity;
        let last = w.len() - 1;
        let center = -2.0 / (self.dr * self.dr);
        let source = |i: usize| weight[i] * power(kind, other[i], expo);

        match inner {
            Inner::Value(_) => sink(0, 0.0),
            Inner::Flux(datum) => {
                let ghost = w[1] + 2.0 * self.dr * datum;
                let lap = self.plus[0] * w[1] + center * w[0] + self.minus[0] * ghost;
                sink(0, lap + source(0));
            }
        }
        for i in 1..last {
            let lap = self.plus[i] * w[i + 1] + center * w[i] + self.minus[i] * w[i - 1];
            sink(i, lap + source(i));
        }
        match self.config.outer {
            OuterBoundary::Pinned => sink(last, 0.0),
            OuterBoundary::ZeroFlux => {
                let lap = (self.plus[last] + self.minus[last]) * w[last - 1] + center * w[last];
                sink(last, lap + source(last));
            }
        }
    }

    /// Advances one leapfrog step; marks the state `BlownUp` once the sup
    /// norm reaches the threshold or stops being finite.
    pub fn step(&self, state: &mut RadialState) -> Result<()> {
        if state.status != Status::Running {
            return Err(Error::computation("step called on a finished state"));
        }
        if state.u.len() != self.r.len() {
            return Err(Error::config("state does not belong to this grid"));
        }
        let dt2 = self.dt * self.dt;
        // the new level overwrites the previous one in place
        {
            let RadialState {
                u, v, u_prev, v_prev, ..
            } = state;
            self.accumulate(u, v, true, |i, a| u_prev[i] = 2.0 * u[i] - u_prev[i] + dt2 * a);
            self.accumulate(v, u, false, |i, a| v_prev[i] = 2.0 * v[i] - v_prev[i] + dt2 * a);
        }
        let last = self.r.len() - 1;
        // pinned samples and imposed values
        if let Inner::Value(f) = self.inner_u {
            state.u_prev[0] = f;
        }
        if let Inner::Value(g) = self.inner_v {
            state.v_prev[0] = g;
        }
        if self.config.outer == OuterBoundary::Pinned {
            state.u_prev[last] = state.u[last];
            state.v_prev[last] = state.v[last];
        }
        std::mem::swap(&mut state.u, &mut state.u_prev);
        std::mem::swap(&mut state.v, &mut state.v_prev);
        state.t += self.dt;

        let s = sup(&state.u).max(sup(&state.v));
        let nan = sup(&state.u).is_nan() || sup(&state.v).is_nan();
        if nan || s >= self.config.blowup_threshold {
            state.status = Status::BlownUp { t_blow: state.t };
        }
        Ok(())
    }

    /// Distance to the exact solution, for data that have one.
    pub fn error(&self, state: &RadialState) -> Option<f64> {
        match &self.reference {
            Reference::None => None,
            Reference::Stationary { u, v } => {
                let mut e: f64 = 0.0;
                for i in 0..u.len() {
                    e = e.max((state.u[i] - u[i]).abs()).max((state.v[i] - v[i]).abs());
                }
                Some(e)
            }
            Reference::Decay(pair) => {
                let (eu, ev) = (pair.u(state.t), pair.v(state.t));
                let mut e: f64 = 0.0;
                for i in 0..state.u.len() {
                    e = e.max((state.u[i] - eu).abs()).max((state.v[i] - ev).abs());
                }
                Some(e)
            }
        }
    }

    pub fn energy_proxy(&self, state: &RadialState) -> f64 {
        let nm1 = self.config.params.n as i32 - 1;
        let (dr, dt) = (self.dr, self.dt);
        let mut e = 0.0;
        for i in 0..self.r.len() {
            let w = self.r[i].powi(nm1) * dr;
            let ut = (state.u[i] - state.u_prev[i]) / dt;
            let vt = (state.v[i] - state.v_prev[i]) / dt;
            e += 0.5 * w * (ut * ut + vt * vt);
            if i + 1 < self.r.len() {
                let mid = (self.r[i] + 0.5 * dr).powi(nm1) * dr;
                let ur = (state.u[i + 1] - state.u[i]) / dr;
                let vr = (state.v[i + 1] - state.v[i]) / dr;
                e += 0.5 * mid * (ur * ur + vr * vr);
            }
        }
        e
    }

    pub fn sample(&self, state: &RadialState) -> SeriesRow {
        SeriesRow {
            t: state.t,
            sup_u: state.sup_u(),
            sup_v: state.sup_v(),
            energy_proxy: self.energy_proxy(state),
            max_error: self.error(state),
        }
    }
}
