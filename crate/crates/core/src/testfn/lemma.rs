//! The integral estimates that feed the Hölder steps, with their predicted
//! growth rates in `T`.
//!
//! Each weighted case has the shape
//!
//! ```text
//! ∫∫ |x|^{-τ/(m-1)} W^{-1/(m-1)} |Op|^{m/(m-1)} dx dt
//! ```
//!
//! with a weight `W ∈ {D_T, N_T}` and an operator `Op ∈ {∂_tt, Δ}` applied to
//! `D_T` or `N_T`. The weights factor as `ϑ_T(t) · w(r)`, so every case is
//! the product of a time integral over `(0, T^θ)` and a radial integral over
//! `(r0, 2T)` with the sphere-area factor. The two radial-only cases are the
//! model integrals of `r^α H^β` over `(1, T)` or `(T, 2T)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::weights::{cutoff_laplacian_ratio, lifted_laplacian_ratio, space_ratios, time_ratios};
use super::{harmonic_offset, sphere_area, TestFunctionFamily};
use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LemmaId {
    LL1,
    LL3,
    LL11,
    LL12,
    LL13,
    LL16,
    LL18,
    LL19,
    LL20,
    LL23,
}

impl LemmaId {
    pub const ALL: [LemmaId; 10] = [
        LemmaId::LL1,
        LemmaId::LL3,
        LemmaId::LL11,
        LemmaId::LL12,
        LemmaId::LL13,
        LemmaId::LL16,
        LemmaId::LL18,
        LemmaId::LL19,
        LemmaId::LL20,
        LemmaId::LL23,
    ];
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LemmaId::ALL
            .iter()
            .copied()
            .find(|id| id.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::domain(format!("unknown lemma case `{s}`")))
    }
}

/// Integration region of the model integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    /// `1 < |x| < T`.
    Inner,
    /// `T < |x| < 2T`.
    Annulus,
}

/// One lemma instance together with the growth rate it predicts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaCase {
    pub id: LemmaId,
    #[serde(rename = "N")]
    pub n: u32,
    pub theta: f64,
    pub tau: f64,
    pub m: f64,
    pub alpha: f64,
    pub beta: f64,
    pub region: Region,
    /// Predicted exponent of `T`.
    pub predicted_rate: f64,
    /// Predicted exponent of `ln T`.
    pub log_power: f64,
    /// Which row of the lemma's case table applies.
    pub branch: String,
}

const TIE: f64 = 1e-12;

#[derive(Clone, Copy, PartialEq)]
enum Cmp {
    Less,
    Equal,
    Greater,
}

fn cmp(x: f64, y: f64) -> Cmp {
    if (x - y).abs() <= TIE * (1.0 + x.abs().max(y.abs())) {
        Cmp::Equal
    } else if x < y {
        Cmp::Less
    } else {
        Cmp::Greater
    }
}

impl LemmaCase {
    /// Model integral `∫ |x|^α H(x)^β dx` over `region` (LL1 for `N = 2`,
    /// LL3 for `N >= 3`).
    pub fn model(n: u32, alpha: f64, beta: f64, region: Region) -> Result<Self> {
        let id = match n {
            0 | 1 => return Err(Error::domain(format!("N = {n} but N >= 2 is required"))),
            2 => LemmaId::LL1,
            _ => LemmaId::LL3,
        };
        if region == Region::Inner && !(beta > -1.0) {
            return Err(Error::domain(format!(
                "model integral over 1 < |x| < T needs beta > -1, got {beta}"
            )));
        }
        let nf = n as f64;
        let (rate, log, branch) = match (id, region) {
            (LemmaId::LL1, Region::Annulus) => (alpha + 2.0, beta, "T<|x|<2T"),
            (LemmaId::LL3, Region::Annulus) => (alpha + nf, 0.0, "T<|x|<2T"),
            (LemmaId::LL1, Region::Inner) => match cmp(alpha, -2.0) {
                Cmp::Less => (0.0, 0.0, "alpha < -2"),
                Cmp::Equal => (0.0, beta + 1.0, "alpha = -2"),
                Cmp::Greater => (alpha + 2.0, beta, "alpha > -2"),
            },
            (_, Region::Inner) => match cmp(alpha, -nf) {
                Cmp::Less => (0.0, 0.0, "alpha < -N"),
                Cmp::Equal => (0.0, 1.0, "alpha = -N"),
                Cmp::Greater => (alpha + nf, 0.0, "alpha > -N"),
            },
            _ => unreachable!(),
        };
        Ok(LemmaCase {
            id,
            n,
            theta: 0.0,
            tau: 0.0,
            m: 0.0,
            alpha,
            beta,
            region,
            predicted_rate: rate,
            log_power: log,
            branch: branch.to_string(),
        })
    }

    /// A weighted space-time case with parameters `τ`, `m` and time stretch
    /// `θ`.
    pub fn weighted(id: LemmaId, n: u32, tau: f64, m: f64, theta: f64) -> Result<Self> {
        if !(m > 1.0) {
            return Err(Error::domain(format!("m = {m} but m > 1 is required")));
        }
        if !(theta > 0.0) {
            return Err(Error::domain(format!("theta = {theta} must be positive")));
        }
        if n < 2 {
            return Err(Error::domain(format!("N = {n} but N >= 2 is required")));
        }
        let nf = n as f64;
        let m1 = m - 1.0;
        let time_rate = -(m + 1.0) * theta / m1;
        let tau_rate = nf - (tau + (m + 1.0) * theta) / m1;
        let lap_rate = nf - 2.0 + theta - (tau + 2.0) / m1;
        let (rate, log, branch): (f64, f64, String) = match id {
            LemmaId::LL1 | LemmaId::LL3 => {
                return Err(Error::domain(format!(
                    "{id} is a model integral; use LemmaCase::model"
                )))
            }
            LemmaId::LL11 => {
                require_dim(id, n, |n| n == 2, "N = 2")?;
                match cmp(tau, 2.0 * m1) {
                    Cmp::Less => (2.0 - (tau + (m + 1.0) * theta) / m1, 1.0, "tau < 2(m-1)".into()),
                    Cmp::Equal => (time_rate, 2.0, "tau = 2(m-1)".into()),
                    Cmp::Greater => (time_rate, 0.0, "tau > 2(m-1)".into()),
                }
            }
            LemmaId::LL12 => {
                require_dim(id, n, |n| n >= 3, "N >= 3")?;
                match cmp(tau, nf * m1) {
                    Cmp::Less => (tau_rate, 0.0, "tau < N(m-1)".into()),
                    Cmp::Equal => (time_rate, 1.0, "tau = N(m-1)".into()),
                    Cmp::Greater => (time_rate, 0.0, "tau > N(m-1)".into()),
                }
            }
            LemmaId::LL13 | LemmaId::LL16 => {
                if id == LemmaId::LL16 && !(m > 2.0) {
                    return Err(Error::domain(format!("{id} requires m > 2, got m = {m}")));
                }
                match cmp(tau, nf * m1) {
                    Cmp::Less => (tau_rate, 0.0, "tau < N(m-1)".into()),
                    _ => (time_rate, 1.0, "tau >= N(m-1)".into()),
                }
            }
            LemmaId::LL18 => {
                require_dim(id, n, |n| n == 2, "N = 2")?;
                (theta - (tau + 2.0) / m1, 1.0, "all tau".into())
            }
            LemmaId::LL19 => {
                require_dim(id, n, |n| n >= 3, "N >= 3")?;
                (lap_rate, 0.0, "all tau".into())
            }
            LemmaId::LL20 | LemmaId::LL23 => (lap_rate, 0.0, "all tau".into()),
        };
        Ok(LemmaCase {
            id,
            n,
            theta,
            tau,
            m,
            alpha: -tau / m1,
            beta: 0.0,
            region: Region::Inner,
            predicted_rate: rate,
            log_power: log,
            branch,
        })
    }

    fn is_model(&self) -> bool {
        matches!(self.id, LemmaId::LL1 | LemmaId::LL3)
    }
}

fn require_dim(id: LemmaId, n: u32, ok: impl Fn(u32) -> bool, what: &str) -> Result<()> {
    if ok(n) {
        Ok(())
    } else {
        Err(Error::domain(format!("{id} requires {what}, got N = {n}")))
    }
}

/// Which weight sits under the negative power.
#[derive(Clone, Copy, PartialEq)]
enum Weight {
    D,
    N,
}

/// Which operator and which function it acts on.
#[derive(Clone, Copy, PartialEq)]
enum Operator {
    TimeOfD,
    TimeOfN,
    LapOfD,
    LapOfN,
}

fn shape(id: LemmaId) -> (Weight, Operator) {
    match id {
        LemmaId::LL11 | LemmaId::LL12 => (Weight::D, Operator::TimeOfD),
        LemmaId::LL18 | LemmaId::LL19 => (Weight::D, Operator::LapOfD),
        LemmaId::LL13 => (Weight::N, Operator::TimeOfN),
        LemmaId::LL20 => (Weight::N, Operator::LapOfN),
        LemmaId::LL16 => (Weight::D, Operator::TimeOfN),
        LemmaId::LL23 => (Weight::D, Operator::LapOfN),
        LemmaId::LL1 | LemmaId::LL3 => unreachable!("model integrals have no weight"),
    }
}

fn tolerance() -> Tolerance {
    Tolerance {
        abs: 0.0,
        rel: 1e-10,
        max_intervals: 20_000,
    }
}

/// Geometric breakpoints `lo·2^j` inside `(lo, hi)` plus the extra points.
fn breakpoints(lo: f64, hi: f64, extra: &[f64]) -> Vec<f64> {
    let mut pts: Vec<f64> = extra.to_vec();
    let mut x = lo * 2.0;
    while x < hi {
        pts.push(x);
        x *= 2.0;
    }
    pts
}

/// Evaluates the integral of `case` for the weights of `family`.
pub fn lemma_integral(case: &LemmaCase, family: &TestFunctionFamily) -> Result<f64> {
    if case.n != family.n {
        return Err(Error::domain(format!(
            "case dimension {} differs from family dimension {}",
            case.n, family.n
        )));
    }
    if case.is_model() {
        return model_integral(case, family.scale);
    }
    if (case.theta - family.theta).abs() > TIE * case.theta.abs().max(1.0) {
        return Err(Error::domain(format!(
            "case theta {} differs from family theta {}",
            case.theta, family.theta
        )));
    }
    family.check_power_for(case.m)?;

    let (weight, op) = shape(case.id);
    let time = time_factor(family, op, case.m)?;
    let space = space_factor(family, weight, op, case)?;
    let value = time * space;
    if !value.is_finite() {
        return Err(Error::computation(format!("{} produced {value}", case.id)));
    }
    Ok(value)
}

fn model_integral(case: &LemmaCase, scale: f64) -> Result<f64> {
    let n = case.n;
    let area = sphere_area(n);
    let (alpha, beta) = (case.alpha, case.beta);
    // integrate in s = r - 1 so that H stays accurate next to the sphere
    let f = |s: f64| {
        let r = 1.0 + s;
        let hb = if beta == 0.0 { 1.0 } else { harmonic_offset(n, s).powf(beta) };
        area * r.powf(alpha + n as f64 - 1.0) * hb
    };
    let (lo, hi) = match case.region {
        Region::Inner => (1.0, scale),
        Region::Annulus => (scale, 2.0 * scale),
    };
    let pts: Vec<f64> = breakpoints(lo, hi, &[]).iter().map(|x| x - 1.0).collect();
    Ok(quadrature::integrate(f, lo - 1.0, hi - 1.0, &pts, tolerance())?.value)
}

// ∫ ϑ_T dt for Laplacian cases, ∫ ϑ_T |ϑ_T''/ϑ_T|^{m/(m-1)} dt otherwise
fn time_factor(family: &TestFunctionFamily, op: Operator, m: f64) -> Result<f64> {
    let expo = m / (m - 1.0);
    let second = matches!(op, Operator::TimeOfD | Operator::TimeOfN);
    let f = |t: f64| match time_ratios(family, t) {
        None => 0.0,
        Some(w) if second => w.value * w.r2.abs().powf(expo),
        Some(w) => w.value,
    };
    let span = family.time_support();
    let pts = [0.5 * span];
    Ok(quadrature::integrate(f, 0.0, span, &pts, tolerance())?.value)
}

// Spatial factor of the integrand without the sphere area and r^{N-1}.
fn radial_factor(
    family: &TestFunctionFamily,
    weight: Weight,
    op: Operator,
    m: f64,
    r: f64,
    h: f64,
) -> f64 {
    let Some(psi) = space_ratios(family, r) else {
        return 0.0;
    };
    let m1 = m - 1.0;
    let e = m / m1;
    match (weight, op) {
        (Weight::D, Operator::TimeOfD) => h * psi.value,
        (Weight::N, Operator::TimeOfN) => psi.value,
        (Weight::D, Operator::TimeOfN) => h.powf(-1.0 / m1) * psi.value,
        (Weight::D, Operator::LapOfD) => {
            h * psi.value * lifted_laplacian_ratio(family, r, &psi).abs().powf(e)
        }
        (Weight::N, Operator::LapOfN) => {
            psi.value * cutoff_laplacian_ratio(family, r, &psi).abs().powf(e)
        }
        (Weight::D, Operator::LapOfN) => {
            h.powf(-1.0 / m1) * psi.value * cutoff_laplacian_ratio(family, r, &psi).abs().powf(e)
        }
        _ => unreachable!("no lemma pairs N_T with an operator on D_T"),
    }
}

fn space_factor(
    family: &TestFunctionFamily,
    weight: Weight,
    op: Operator,
    case: &LemmaCase,
) -> Result<f64> {
    let area = sphere_area(family.n);
    let power = family.n as f64 - 1.0 - case.tau / (case.m - 1.0);
    let r0 = family.r0;
    // integrate in s = r - r0 so that H stays accurate next to the sphere
    let integrand = |s: f64| {
        let r = r0 + s;
        let h = harmonic_offset(family.n, s / r0);
        area * r.powf(power) * radial_factor(family, weight, op, case.m, r, h)
    };
    let scale = family.scale;
    let (lo, hi) = match op {
        // the Laplacian of the cutoffs vanishes on the plateau r < T
        Operator::LapOfD | Operator::LapOfN => (scale.max(family.r0), 2.0 * scale),
        _ => (family.r0, 2.0 * scale),
    };
    if lo >= hi {
        return Ok(0.0);
    }
    let pts: Vec<f64> = breakpoints(lo, hi, &[scale]).iter().map(|x| x - r0).collect();
    Ok(quadrature::integrate(integrand, lo - r0, hi - r0, &pts, tolerance())?.value)
}

/// The reference suite: every lemma family with each tabulated branch.
pub fn default_suite() -> Vec<LemmaCase> {
    let model = |n, alpha, beta, region| LemmaCase::model(n, alpha, beta, region).expect("valid case");
    let weighted = |id, n, tau, m, theta| LemmaCase::weighted(id, n, tau, m, theta).expect("valid case");
    vec![
        model(2, -1.0, 1.0, Region::Inner),
        model(2, -2.0, 0.5, Region::Inner),
        model(2, -3.0, 0.0, Region::Inner),
        model(2, 0.0, 2.0, Region::Annulus),
        model(3, 0.0, 0.0, Region::Inner),
        model(3, -3.0, 1.0, Region::Inner),
        model(3, -4.0, 0.5, Region::Inner),
        model(3, -1.0, -2.0, Region::Annulus),
        weighted(LemmaId::LL11, 2, 0.0, 2.0, 5.0),
        weighted(LemmaId::LL11, 2, 2.0, 2.0, 5.0),
        weighted(LemmaId::LL11, 2, 3.0, 2.0, 5.0),
        weighted(LemmaId::LL12, 3, 0.0, 2.0, 3.0),
        weighted(LemmaId::LL12, 3, 3.0, 2.0, 3.0),
        weighted(LemmaId::LL12, 3, 4.5, 2.0, 3.0),
        weighted(LemmaId::LL13, 2, 1.0, 3.0, 2.0),
        weighted(LemmaId::LL13, 3, 6.0, 3.0, 2.0),
        weighted(LemmaId::LL16, 3, 1.0, 3.0, 2.0),
        weighted(LemmaId::LL16, 3, 6.0, 3.0, 2.0),
        weighted(LemmaId::LL18, 2, 0.0, 2.0, 3.0),
        weighted(LemmaId::LL19, 3, 1.0, 2.0, 3.0),
        weighted(LemmaId::LL20, 2, 0.5, 3.0, 2.0),
        weighted(LemmaId::LL20, 4, 0.0, 2.0, 3.0),
        weighted(LemmaId::LL23, 3, 0.0, 3.0, 2.0),
    ]
}
