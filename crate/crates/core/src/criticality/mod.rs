//! Closed-form algebra of the critical criterion.
//!
//! The blow-up dichotomy for the system
//!
//! ```text
//! u_tt - Δu >= |x|^a |v|^p,   v_tt - Δv >= |x|^b |u|^q   on (0, ∞) × Ω^c
//! ```
//!
//! is governed by the two scaling exponents
//!
//! ```text
//! δ = (a + 2 + p(b + 2)) / (pq - 1),   γ = (b + 2 + q(a + 2)) / (pq - 1).
//! ```
//!
//! In dimension two every admissible tuple blows up; for `N >= 3` blow-up is
//! forced as soon as a positive boundary datum sits on a branch whose exponent
//! exceeds `N - 2`. Below the curve an explicit power-law stationary pair
//! exists, which makes the criterion sharp.

mod exact;

pub use exact::{recover_rational, Side, CRITICAL_BAND};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use exact::Exponents;

/// Kind of boundary inequality imposed on the sphere `∂Ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    /// `(u, v) >= (f, g)` on the boundary.
    Dirichlet,
    /// `(∂_ν u, ∂_ν v) >= (f, g)` on the boundary.
    Neumann,
    /// `(u, ∂_ν v) >= (f, g)` on the boundary.
    Mixed,
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BoundaryKind::Dirichlet => "dirichlet",
            BoundaryKind::Neumann => "neumann",
            BoundaryKind::Mixed => "mixed",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for BoundaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" => Ok(BoundaryKind::Dirichlet),
            "neumann" => Ok(BoundaryKind::Neumann),
            "mixed" => Ok(BoundaryKind::Mixed),
            other => Err(Error::domain(format!("unknown boundary kind `{other}`"))),
        }
    }
}

/// The tuple `(N, p, q, a, b)` together with the boundary data summary.
///
/// Boundary data enter only through their integrals `I_f = ∫ f dσ`,
/// `I_g = ∫ g dσ` over the sphere and through pointwise sign flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    #[serde(rename = "N")]
    pub n: u32,
    pub p: f64,
    pub q: f64,
    pub a: f64,
    pub b: f64,
    #[serde(rename = "bc")]
    pub boundary: BoundaryKind,
    pub r0: f64,
    #[serde(rename = "If")]
    pub i_f: f64,
    #[serde(rename = "Ig")]
    pub i_g: f64,
    pub f_nonneg: bool,
    pub g_nonneg: bool,
    pub omega_is_ball: bool,
}

impl ProblemParams {
    /// Dirichlet problem on the exterior of the unit ball with vanishing
    /// boundary data and nonnegative sign flags.
    pub fn new(n: u32, p: f64, q: f64, a: f64, b: f64) -> Self {
        ProblemParams {
            n,
            p,
            q,
            a,
            b,
            boundary: BoundaryKind::Dirichlet,
            r0: 1.0,
            i_f: 0.0,
            i_g: 0.0,
            f_nonneg: true,
            g_nonneg: true,
            omega_is_ball: true,
        }
    }

    pub fn with_boundary(mut self, boundary: BoundaryKind) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_data(mut self, i_f: f64, i_g: f64) -> Self {
        self.i_f = i_f;
        self.i_g = i_g;
        self
    }

    pub fn with_signs(mut self, f_nonneg: bool, g_nonneg: bool) -> Self {
        self.f_nonneg = f_nonneg;
        self.g_nonneg = g_nonneg;
        self
    }

    pub fn with_ball(mut self, omega_is_ball: bool) -> Self {
        self.omega_is_ball = omega_is_ball;
        self
    }

    pub fn with_r0(mut self, r0: f64) -> Self {
        self.r0 = r0;
        self
    }

    /// Exchanges the roles of the two components: `(p, a, I_f, f)` with
    /// `(q, b, I_g, g)`. The boundary kind is kept.
    pub fn swapped(&self) -> Self {
        ProblemParams {
            p: self.q,
            q: self.p,
            a: self.b,
            b: self.a,
            i_f: self.i_g,
            i_g: self.i_f,
            f_nonneg: self.g_nonneg,
            g_nonneg: self.f_nonneg,
            ..self.clone()
        }
    }

    pub(crate) fn exponents(&self) -> Exponents {
        Exponents {
            p: self.p,
            q: self.q,
            a: self.a,
            b: self.b,
        }
    }

    /// Checks the structural invariants shared by every operation:
    /// `N >= 2`, `a, b >= -2`, `r0 > 0` and finiteness.
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::domain(format!("N = {} but N >= 2 is required", self.n)));
        }
        let reals = [
            ("p", self.p),
            ("q", self.q),
            ("a", self.a),
            ("b", self.b),
            ("r0", self.r0),
            ("If", self.i_f),
            ("Ig", self.i_g),
        ];
        for (name, value) in reals {
            if !value.is_finite() {
                return Err(Error::domain(format!("{name} must be finite, got {value}")));
            }
        }
        if self.a < -2.0 {
            return Err(Error::domain(format!("a = {} but a >= -2 is required", self.a)));
        }
        if self.b < -2.0 {
            return Err(Error::domain(format!("b = {} but b >= -2 is required", self.b)));
        }
        if self.r0 <= 0.0 {
            return Err(Error::domain(format!("r0 = {} but r0 > 0 is required", self.r0)));
        }
        Ok(())
    }

    fn validate_criterion(&self) -> Result<()> {
        self.validate()?;
        if self.p <= 1.0 {
            return Err(Error::domain(format!("p = {} but p > 1 is required", self.p)));
        }
        if self.q <= 1.0 {
            return Err(Error::domain(format!("q = {} but q > 1 is required", self.q)));
        }
        Ok(())
    }

    fn validate_construction(&self) -> Result<()> {
        self.validate()?;
        if self.p <= 0.0 || self.q <= 0.0 {
            return Err(Error::domain(format!(
                "p = {}, q = {} but p, q > 0 is required",
                self.p, self.q
            )));
        }
        if self.p * self.q <= 1.0 {
            return Err(Error::domain(format!(
                "pq = {} but pq > 1 is required",
                self.p * self.q
            )));
        }
        Ok(())
    }
}

/// Scaling exponents of the stationary system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingExponents {
    pub delta: f64,
    pub gamma: f64,
}

impl ScalingExponents {
    /// `δ + 2`, the left-hand quantity of the first branch of the criterion.
    pub fn f_branch_value(&self) -> f64 {
        self.delta + 2.0
    }

    /// `γ + 2`, the left-hand quantity of the second branch.
    pub fn g_branch_value(&self) -> f64 {
        self.gamma + 2.0
    }
}

/// `δ = (a+2+p(b+2))/(pq-1)` and `γ = (b+2+q(a+2))/(pq-1)`.
pub fn scaling_exponents(params: &ProblemParams) -> Result<ScalingExponents> {
    let ProblemParams { p, q, a, b, .. } = *params;
    let denom = p * q - 1.0;
    if !(denom > 0.0) {
        return Err(Error::domain(format!(
            "scaling exponents undefined: pq = {} must exceed 1",
            p * q
        )));
    }
    Ok(ScalingExponents {
        delta: (a + 2.0 + p * (b + 2.0)) / denom,
        gamma: (b + 2.0 + q * (a + 2.0)) / denom,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// No global weak solution exists.
    BlowUp,
    /// The explicit stationary pair exists: a candidate for global
    /// existence, not a proof of it.
    GlobalCandidate,
    /// The hypotheses of the blow-up criterion fail and no explicit global
    /// solution is available.
    NotCovered,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::BlowUp => "blow-up: no global weak solution",
            Verdict::GlobalCandidate => "global candidate: explicit stationary pair exists",
            Verdict::NotCovered => "not covered",
        };
        f.write_str(s)
    }
}

/// Which hypothesis produced a blow-up verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `I_f > 0` and `δ > N - 2`.
    ViaF,
    /// `I_g > 0` and `γ > N - 2`.
    ViaG,
    /// `N = 2`, where the criterion always holds.
    DimensionTwo,
    None,
}

/// One evaluated hypothesis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Condition {
    fn new(name: &str, value: f64, threshold: f64, pass: bool) -> Self {
        Condition {
            name: name.to_string(),
            value,
            threshold,
            pass,
        }
    }

    fn flag(name: &str, pass: bool) -> Self {
        Condition::new(name, if pass { 1.0 } else { 0.0 }, 1.0, pass)
    }
}

/// Name of the reason record emitted on the critical curve.
pub const CRITICAL_CURVE: &str = "critical curve: open case";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub branch: Branch,
    pub exponents: Option<ScalingExponents>,
    pub reasons: Vec<Condition>,
}

impl Classification {
    fn not_covered(exponents: Option<ScalingExponents>, reasons: Vec<Condition>) -> Self {
        Classification {
            verdict: Verdict::NotCovered,
            branch: Branch::None,
            exponents,
            reasons,
        }
    }

    /// Whether the verdict was forced onto the open critical curve.
    pub fn is_critical(&self) -> bool {
        self.reasons.iter().any(|r| r.name == CRITICAL_CURVE)
    }
}

/// Classifies a parameter tuple against the blow-up criterion.
///
/// Threshold comparisons are exact for rational inputs; otherwise tuples
/// within a relative `1e-12` of the critical curve are reported as
/// [`Verdict::NotCovered`].
pub fn classify(params: &ProblemParams) -> Result<Classification> {
    params.validate_criterion()?;
    let ProblemParams {
        n,
        a,
        b,
        i_f,
        i_g,
        ..
    } = *params;
    let mut reasons = vec![
        Condition::new("p > 1", params.p, 1.0, true),
        Condition::new("q > 1", params.q, 1.0, true),
    ];

    let weights_ok = a > -2.0 || b > -2.0;
    reasons.push(Condition::new("a + b > -4 with a, b >= -2", a + b, -4.0, weights_ok));
    if !weights_ok {
        return Ok(Classification::not_covered(None, reasons));
    }

    let exps = scaling_exponents(params)?;
    let data_signs = i_f >= 0.0 && i_g >= 0.0;
    let data_nontrivial = i_f + i_g > 0.0;
    reasons.push(Condition::new("min(If, Ig) >= 0", i_f.min(i_g), 0.0, data_signs));
    reasons.push(Condition::new("If + Ig > 0", i_f + i_g, 0.0, data_nontrivial));
    if !(data_signs && data_nontrivial) {
        return Ok(Classification::not_covered(Some(exps), reasons));
    }

    let e = params.exponents();
    let nm2 = n as i64 - 2;
    let delta_side = e.delta_vs(nm2);
    let gamma_side = e.gamma_vs(nm2);
    reasons.push(Condition::new(
        "delta > N - 2",
        exps.delta,
        nm2 as f64,
        delta_side == Side::Above,
    ));
    reasons.push(Condition::new(
        "gamma > N - 2",
        exps.gamma,
        nm2 as f64,
        gamma_side == Side::Above,
    ));
    reasons.push(Condition::new("If > 0", i_f, 0.0, i_f > 0.0));
    reasons.push(Condition::new("Ig > 0", i_g, 0.0, i_g > 0.0));

    let hyps_ok = boundary_hypotheses(params, &mut reasons);

    let via_f = i_f > 0.0 && delta_side == Side::Above;
    let via_g = i_g > 0.0 && gamma_side == Side::Above;
    let branch = if n == 2 {
        Some(Branch::DimensionTwo)
    } else {
        match (via_f, via_g) {
            (true, true) if exps.gamma > exps.delta => Some(Branch::ViaG),
            (true, _) => Some(Branch::ViaF),
            (false, true) => Some(Branch::ViaG),
            (false, false) => None,
        }
    };

    if let Some(branch) = branch {
        if hyps_ok {
            return Ok(Classification {
                verdict: Verdict::BlowUp,
                branch,
                exponents: Some(exps),
                reasons,
            });
        }
        return Ok(Classification::not_covered(Some(exps), reasons));
    }

    let critical = (i_f > 0.0 && delta_side == Side::Critical)
        || (i_g > 0.0 && gamma_side == Side::Critical);
    if critical {
        reasons.push(Condition::new(
            CRITICAL_CURVE,
            exps.delta.max(exps.gamma),
            nm2 as f64,
            false,
        ));
        return Ok(Classification::not_covered(Some(exps), reasons));
    }

    if stationary_condition(params, &exps, &mut reasons) {
        return Ok(Classification {
            verdict: Verdict::GlobalCandidate,
            branch: Branch::None,
            exponents: Some(exps),
            reasons,
        });
    }
    Ok(Classification::not_covered(Some(exps), reasons))
}

fn boundary_hypotheses(params: &ProblemParams, reasons: &mut Vec<Condition>) -> bool {
    let ball = params.omega_is_ball;
    match params.boundary {
        BoundaryKind::Dirichlet => {
            let ok = (params.f_nonneg && params.g_nonneg) || ball;
            reasons.push(Condition::flag("f, g >= 0 or Omega is a ball", ok));
            ok
        }
        BoundaryKind::Neumann => true,
        BoundaryKind::Mixed => {
            let p_ok = params.p > 2.0;
            let sign_ok = params.f_nonneg || ball;
            reasons.push(Condition::new("p > 2", params.p, 2.0, p_ok));
            reasons.push(Condition::flag("f >= 0 or Omega is a ball", sign_ok));
            p_ok && sign_ok
        }
    }
}

// 0 < min(delta, gamma) <= max(delta, gamma) < N - 2, recorded as two reasons
fn stationary_condition(
    params: &ProblemParams,
    exps: &ScalingExponents,
    reasons: &mut Vec<Condition>,
) -> bool {
    let (lower, upper) = stationary_sides(params);
    let min = exps.delta.min(exps.gamma);
    let max = exps.delta.max(exps.gamma);
    let nm2 = params.n as f64 - 2.0;
    reasons.push(Condition::new("min(delta, gamma) > 0", min, 0.0, lower));
    reasons.push(Condition::new("max(delta, gamma) < N - 2", max, nm2, upper));
    params.n >= 3 && lower && upper
}

fn stationary_sides(params: &ProblemParams) -> (bool, bool) {
    let e = params.exponents();
    let nm2 = params.n as i64 - 2;
    let lower = e.delta_vs(0) == Side::Above && e.gamma_vs(0) == Side::Above;
    let upper = e.delta_vs(nm2) == Side::Below && e.gamma_vs(nm2) == Side::Below;
    (lower, upper)
}

/// The left-hand sides of the criterion in its original form,
/// `sgn(I_f)(2p(q+1)+pb+a)/(pq-1)` and `sgn(I_g)(2q(p+1)+qa+b)/(pq-1)`.
pub fn criterion_values(params: &ProblemParams) -> Result<(f64, f64)> {
    let ProblemParams {
        p, q, a, b, i_f, i_g, ..
    } = *params;
    let denom = p * q - 1.0;
    if !(denom > 0.0) {
        return Err(Error::domain("criterion undefined for pq <= 1"));
    }
    let f_side = signum(i_f) * (2.0 * p * (q + 1.0) + p * b + a) / denom;
    let g_side = signum(i_g) * (2.0 * q * (p + 1.0) + q * a + b) / denom;
    Ok((f_side, g_side))
}

fn signum(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Classical critical exponents for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoricalExponents {
    /// Positive root of `(N-1)p^2 - (N+1)p - 2 = 0`.
    pub strauss: f64,
    /// `(N+1)/(N-1)`.
    pub kato: f64,
    /// `(N+a)/(N-2)`; absent for `N = 2` or `a <= -2`.
    pub zhang: Option<f64>,
}

pub fn historical_exponents(n: u32, a: f64) -> Result<HistoricalExponents> {
    if n < 2 {
        return Err(Error::domain(format!("N = {n} but N >= 2 is required")));
    }
    let nf = n as f64;
    let strauss = (nf + 1.0 + (nf * nf + 10.0 * nf - 7.0).sqrt()) / (2.0 * (nf - 1.0));
    let kato = (nf + 1.0) / (nf - 1.0);
    let zhang = (n >= 3 && a > -2.0).then(|| (nf + a) / (nf - 2.0));
    Ok(HistoricalExponents { strauss, kato, zhang })
}

/// Amplitudes of the power-law stationary pair
/// `u*(x) = A_u |x|^{-δ}`, `v*(x) = A_v |x|^{-γ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryPair {
    pub au: f64,
    pub av: f64,
    pub delta: f64,
    pub gamma: f64,
}

impl StationaryPair {
    pub fn u(&self, r: f64) -> f64 {
        self.au * r.powf(-self.delta)
    }

    pub fn v(&self, r: f64) -> f64 {
        self.av * r.powf(-self.gamma)
    }

    pub fn du(&self, r: f64) -> f64 {
        -self.delta * self.au * r.powf(-self.delta - 1.0)
    }

    pub fn dv(&self, r: f64) -> f64 {
        -self.gamma * self.av * r.powf(-self.gamma - 1.0)
    }
}

/// Builds the stationary pair; requires `N >= 3`, `p, q > 0`, `pq > 1` and
/// `0 < min(δ, γ) <= max(δ, γ) < N - 2`.
pub fn stationary_pair(params: &ProblemParams) -> Result<StationaryPair> {
    params.validate_construction()?;
    if params.n < 3 {
        return Err(Error::domain(format!(
            "stationary pair needs N >= 3, got N = {}",
            params.n
        )));
    }
    let exps = scaling_exponents(params)?;
    let (lower, upper) = stationary_sides(params);
    let nm2 = params.n as f64 - 2.0;
    if !lower {
        return Err(Error::domain(format!(
            "min(delta, gamma) > 0 fails: delta = {}, gamma = {}",
            exps.delta, exps.gamma
        )));
    }
    if !upper {
        return Err(Error::domain(format!(
            "max(delta, gamma) < N - 2 fails: delta = {}, gamma = {}, N - 2 = {nm2}",
            exps.delta, exps.gamma
        )));
    }
    let c_u = exps.delta * (nm2 - exps.delta);
    let c_v = exps.gamma * (nm2 - exps.gamma);
    let pq1 = params.p * params.q - 1.0;
    let au = (c_u * c_v.powf(params.p)).powf(1.0 / pq1);
    let av = (c_v * c_u.powf(params.q)).powf(1.0 / pq1);
    Ok(StationaryPair {
        au,
        av,
        delta: exps.delta,
        gamma: exps.gamma,
    })
}

/// Pointwise residual of the stationary system at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    /// `(-Δu* - r^a v*^p, -Δv* - r^b u*^q)`.
    pub absolute: (f64, f64),
    /// The right-hand sides `(r^a v*^p, r^b u*^q)`.
    pub rhs: (f64, f64),
}

impl Residual {
    pub fn relative(&self) -> (f64, f64) {
        (
            self.absolute.0 / self.rhs.0.abs(),
            self.absolute.1 / self.rhs.1.abs(),
        )
    }
}

/// Evaluates the stationary residual using `Δ r^{-s} = s(s - (N-2)) r^{-s-2}`.
pub fn residual_stationary(pair: &StationaryPair, params: &ProblemParams, r: f64) -> Result<Residual> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("radius must be positive, got {r}")));
    }
    let nm2 = params.n as f64 - 2.0;
    let lap = |amp: f64, s: f64| amp * s * (s - nm2) * r.powf(-s - 2.0);
    let rhs_u = r.powf(params.a) * pair.v(r).powf(params.p);
    let rhs_v = r.powf(params.b) * pair.u(r).powf(params.q);
    Ok(Residual {
        absolute: (
            -lap(pair.au, pair.delta) - rhs_u,
            -lap(pair.av, pair.gamma) - rhs_v,
        ),
        rhs: (rhs_u, rhs_v),
    })
}

/// Spatially constant, algebraically decaying pair
/// `u = A_1 (t+1)^{-μ}`, `v = A_2 (t+1)^{-ν}` solving
/// `u_tt = r0^a v^p`, `v_tt = r0^b u^q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayPair {
    pub a1: f64,
    pub a2: f64,
    pub mu: f64,
    pub nu: f64,
}

impl DecayPair {
    pub fn u(&self, t: f64) -> f64 {
        self.a1 * (t + 1.0).powf(-self.mu)
    }

    pub fn v(&self, t: f64) -> f64 {
        self.a2 * (t + 1.0).powf(-self.nu)
    }

    pub fn du(&self, t: f64) -> f64 {
        -self.mu * self.a1 * (t + 1.0).powf(-self.mu - 1.0)
    }

    pub fn dv(&self, t: f64) -> f64 {
        -self.nu * self.a2 * (t + 1.0).powf(-self.nu - 1.0)
    }

    pub fn ddu(&self, t: f64) -> f64 {
        self.mu * (self.mu + 1.0) * self.a1 * (t + 1.0).powf(-self.mu - 2.0)
    }

    pub fn ddv(&self, t: f64) -> f64 {
        self.nu * (self.nu + 1.0) * self.a2 * (t + 1.0).powf(-self.nu - 2.0)
    }
}

/// Builds the decaying pair; requires `a, b <= 0`, `p, q > 0`, `pq > 1`.
pub fn decay_pair(params: &ProblemParams) -> Result<DecayPair> {
    params.validate_construction()?;
    if params.a > 0.0 || params.b > 0.0 {
        return Err(Error::domain(format!(
            "decay pair needs a, b <= 0, got a = {}, b = {}",
            params.a, params.b
        )));
    }
    let ProblemParams { p, q, a, b, r0, .. } = *params;
    let pq1 = p * q - 1.0;
    let mu = 2.0 * (p + 1.0) / pq1;
    let nu = 2.0 * (q + 1.0) / pq1;
    let c1 = mu * (mu + 1.0) * r0.powf(-a);
    let c2 = nu * (nu + 1.0) * r0.powf(-b);
    let a1 = (c2.powf(p) * c1).powf(1.0 / pq1);
    let a2 = a1.powf(q) / c2;
    Ok(DecayPair { a1, a2, mu, nu })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn symmetric_exponents() {
        let e = scaling_exponents(&ProblemParams::new(3, 3.0, 3.0, 0.0, 0.0)).unwrap();
        assert_relative_eq!(e.delta, 1.0);
        assert_relative_eq!(e.gamma, 1.0);
    }

    #[test]
    fn asymmetric_exponents() {
        let e = scaling_exponents(&ProblemParams::new(3, 2.0, 3.0, 0.0, 1.0)).unwrap();
        assert_relative_eq!(e.delta, 8.0 / 5.0, max_relative = 1e-15);
        assert_relative_eq!(e.gamma, 9.0 / 5.0, max_relative = 1e-15);
    }

    #[test]
    fn exponents_need_pq_above_one() {
        let err = scaling_exponents(&ProblemParams::new(3, 0.5, 2.0, 0.0, 0.0)).unwrap_err();
        assert!(err.to_string().contains("scaling exponents undefined"));
    }

    #[test]
    fn zhang_threshold_through_delta() {
        let below = scaling_exponents(&ProblemParams::new(3, 2.999, 2.999, 0.0, 0.0)).unwrap();
        let above = scaling_exponents(&ProblemParams::new(3, 3.001, 3.001, 0.0, 0.0)).unwrap();
        assert!(below.delta > 1.0);
        assert!(above.delta <= 1.0);
    }

    #[test]
    fn neumann_three_d_blows_up_via_f() {
        let params = ProblemParams::new(3, 2.0, 2.0, 0.0, 0.0)
            .with_boundary(BoundaryKind::Neumann)
            .with_data(1.0, 0.0);
        let c = classify(&params).unwrap();
        assert_eq!(c.verdict, Verdict::BlowUp);
        assert_eq!(c.branch, Branch::ViaF);
        assert_relative_eq!(c.exponents.unwrap().delta, 2.0);
    }

    #[test]
    fn dimension_two_always_blows_up() {
        for &(p, q, a, b) in &[(1.1, 9.0, -2.0, 5.0), (4.0, 4.0, 0.0, 0.0), (2.0, 1.5, 3.0, -1.0)] {
            let params = ProblemParams::new(2, p, q, a, b).with_data(1.0, 0.0);
            let c = classify(&params).unwrap();
            assert_eq!(c.verdict, Verdict::BlowUp);
            assert_eq!(c.branch, Branch::DimensionTwo);
        }
    }

    #[test]
    fn supercritical_five_d_is_global_candidate() {
        let params = ProblemParams::new(5, 3.0, 3.0, 0.0, 0.0).with_data(1.0, 0.0);
        let c = classify(&params).unwrap();
        assert_eq!(c.verdict, Verdict::GlobalCandidate);
        assert_eq!(c.branch, Branch::None);
        assert!(c.verdict.to_string().contains("candidate"));
    }

    #[test]
    fn mixed_needs_p_above_two() {
        let params = ProblemParams::new(3, 2.0, 4.0, 0.0, 0.0)
            .with_boundary(BoundaryKind::Mixed)
            .with_data(1.0, 0.0);
        let c = classify(&params).unwrap();
        assert_eq!(c.verdict, Verdict::NotCovered);
        let p_reason = c.reasons.iter().find(|r| r.name == "p > 2").unwrap();
        assert!(!p_reason.pass);
    }

    #[test]
    fn dirichlet_signs_waived_for_ball_only() {
        let base = ProblemParams::new(3, 2.0, 2.0, 0.0, 0.0)
            .with_data(1.0, 1.0)
            .with_signs(false, true);
        assert_eq!(classify(&base).unwrap().verdict, Verdict::BlowUp);
        let general = base.with_ball(false);
        assert_eq!(classify(&general).unwrap().verdict, Verdict::NotCovered);
    }

    #[test]
    fn both_weights_at_minus_two_is_not_covered() {
        let params = ProblemParams::new(3, 2.0, 2.0, -2.0, -2.0).with_data(1.0, 1.0);
        let c = classify(&params).unwrap();
        assert_eq!(c.verdict, Verdict::NotCovered);
        assert!(c.exponents.is_none());
    }

    #[test]
    fn critical_curve_is_open() {
        let params = ProblemParams::new(3, 3.0, 3.0, 0.0, 0.0).with_data(1.0, 1.0);
        let c = classify(&params).unwrap();
        assert_eq!(c.verdict, Verdict::NotCovered);
        assert!(c.is_critical());
    }

    #[test]
    fn trivial_data_is_not_covered() {
        let params = ProblemParams::new(3, 2.0, 2.0, 1.0, 1.0).with_data(0.0, 0.0);
        let c = classify(&params).unwrap();
        assert_eq!(c.verdict, Verdict::NotCovered);
        let supercritical = ProblemParams::new(5, 3.0, 3.0, 0.0, 0.0);
        assert_eq!(classify(&supercritical).unwrap().verdict, Verdict::NotCovered);
    }

    #[test]
    fn invalid_params_are_errors() {
        assert!(classify(&ProblemParams::new(1, 2.0, 2.0, 0.0, 0.0)).is_err());
        assert!(classify(&ProblemParams::new(3, 1.0, 2.0, 0.0, 0.0)).is_err());
        assert!(classify(&ProblemParams::new(3, 2.0, 2.0, -2.5, 0.0)).is_err());
        assert!(classify(&ProblemParams::new(3, 2.0, 2.0, 0.0, 0.0).with_r0(0.0)).is_err());
        let msg = classify(&ProblemParams::new(3, 2.0, 0.9, 0.0, 0.0)).unwrap_err().to_string();
        assert!(msg.contains("q > 1"), "{msg}");
    }

    #[test]
    fn historical_values() {
        let h3 = historical_exponents(3, 0.0).unwrap();
        assert_relative_eq!(h3.kato, 2.0);
        assert_relative_eq!(h3.strauss, 1.0 + 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(h3.zhang.unwrap(), 3.0);
        assert_relative_eq!(historical_exponents(4, 0.0).unwrap().zhang.unwrap(), 2.0);
        assert!(historical_exponents(2, 0.0).unwrap().zhang.is_none());
        assert!(historical_exponents(1, 0.0).is_err());
    }

    #[test]
    fn strauss_is_root_of_quadratic() {
        for n in 2..12u32 {
            let p = historical_exponents(n, 0.0).unwrap().strauss;
            let nf = n as f64;
            assert!(((nf - 1.0) * p * p - (nf + 1.0) * p - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn stationary_amplitudes_five_d() {
        let pair = stationary_pair(&ProblemParams::new(5, 3.0, 3.0, 0.0, 0.0)).unwrap();
        assert_relative_eq!(pair.au, 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(pair.av, 2f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn stationary_pair_rejects_blowup_side() {
        let err = stationary_pair(&ProblemParams::new(3, 2.0, 2.0, 0.0, 0.0)).unwrap_err();
        assert!(err.to_string().contains("max(delta, gamma) < N - 2"));
    }

    #[test]
    fn stationary_pair_allows_exponents_below_one() {
        // p < 1 is fine for the construction as long as pq > 1.
        let params = ProblemParams::new(8, 0.8, 3.0, 0.0, 0.0);
        let pair = stationary_pair(&params).unwrap();
        let res = residual_stationary(&pair, &params, 1.7).unwrap().relative();
        assert!(res.0.abs() < 1e-12 && res.1.abs() < 1e-12);
    }

    #[test]
    fn stationary_pair_is_scale_invariant() {
        let pair = stationary_pair(&ProblemParams::new(5, 3.0, 3.0, 0.0, 0.0)).unwrap();
        for &lambda in &[0.1f64, 2.0, 17.0] {
            for &r in &[1.0, 2.5, 40.0] {
                let scaled = lambda.powf(pair.delta) * pair.u(lambda * r);
                assert_relative_eq!(scaled, pair.u(r), max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn stationary_residual_vanishes() {
        let params = ProblemParams::new(5, 3.0, 3.0, 0.0, 0.0);
        let pair = stationary_pair(&params).unwrap();
        for &r in &[1.0, 2.0] {
            let (ru, rv) = residual_stationary(&pair, &params, r).unwrap().relative();
            assert!(ru.abs() < 1e-12 && rv.abs() < 1e-12);
        }
        // -Δ(√2 r^{-1}) at r = 2 in five dimensions is 2√2/8.
        let res = residual_stationary(&pair, &params, 2.0).unwrap();
        assert_relative_eq!(res.rhs.0, 2.0 * 2f64.sqrt() / 8.0, max_relative = 1e-14);
    }

    #[test]
    fn perturbed_amplitude_leaves_residual() {
        let params = ProblemParams::new(5, 3.0, 3.0, 0.0, 0.0);
        let mut pair = stationary_pair(&params).unwrap();
        pair.au *= 1.01;
        let res = residual_stationary(&pair, &params, 1.5).unwrap();
        assert!(res.absolute.0.abs() > 1e-3 * res.rhs.0.abs());
    }

    #[test]
    fn residual_rejects_nonpositive_radius() {
        let params = ProblemParams::new(5, 3.0, 3.0, 0.0, 0.0);
        let pair = stationary_pair(&params).unwrap();
        assert!(residual_stationary(&pair, &params, 0.0).is_err());
    }

    #[test]
    fn decay_pair_cubic() {
        let pair = decay_pair(&ProblemParams::new(3, 3.0, 3.0, 0.0, 0.0)).unwrap();
        assert_relative_eq!(pair.mu, 1.0);
        assert_relative_eq!(pair.nu, 1.0);
        assert_relative_eq!(pair.a1, 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(pair.a2, 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(pair.ddu(0.0), pair.v(0.0).powi(3), max_relative = 1e-14);
    }

    #[test]
    fn decay_pair_matches_fixed_point() {
        let params = ProblemParams::new(3, 2.0, 3.0, -1.0, 0.0).with_r0(2.0);
        let pair = decay_pair(&params).unwrap();
        // Independent route: iterate A2 = (r0^b A1^q / c2), A1 = (r0^a A2^p / c1)
        // in logarithms, which contracts because 1/(pq) < 1 on the inverse map.
        let (p, q, a, b, r0) = (2.0f64, 3.0f64, -1.0f64, 0.0f64, 2.0f64);
        let mu = 2.0 * (p + 1.0) / (p * q - 1.0);
        let nu = 2.0 * (q + 1.0) / (p * q - 1.0);
        let (k1, k2) = (mu * (mu + 1.0), nu * (nu + 1.0));
        let (mut l1, mut l2) = (0.0f64, 0.0f64);
        for _ in 0..400 {
            // A1 = (A2 k2 / r0^b)^{1/q}, A2 = (A1 k1 / r0^a)^{1/p}
            l1 = ((l2 + k2.ln() - b * r0.ln()) / q + l1) / 2.0;
            l2 = ((l1 + k1.ln() - a * r0.ln()) / p + l2) / 2.0;
        }
        assert_relative_eq!(pair.a1, l1.exp(), max_relative = 1e-10);
        assert_relative_eq!(pair.a2, l2.exp(), max_relative = 1e-10);
        assert_relative_eq!(pair.a1 * k1, r0.powf(a) * pair.a2.powf(p), max_relative = 1e-12);
        assert_relative_eq!(pair.a2 * k2, r0.powf(b) * pair.a1.powf(q), max_relative = 1e-12);
    }

    #[test]
    fn decay_pair_rejects_positive_weights() {
        assert!(decay_pair(&ProblemParams::new(3, 3.0, 3.0, 0.5, 0.0)).is_err());
    }
}
