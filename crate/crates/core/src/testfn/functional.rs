//! The functionals whose decay in `T` contradicts global existence.
//!
//! `α(T)` and `β(T)` bound the Hölder factors of the `u`- and `v`-equations.
//! Combining them through Young's inequality gives the composite
//!
//! ```text
//! ViaF:  T^{-θ} α^{pq/(pq-1)} β^{p/(pq-1)}
//! ViaG:  T^{-θ} α^{q/(pq-1)}  β^{pq/(pq-1)}
//! ```
//!
//! which a global solution keeps bounded below while it decays like
//! `T^{N-2-δ}` (resp. `T^{N-2-γ}`) in the blow-up regime. The mixed variants
//! carry one extra `ln T` inside the bracket when `N = 2`; for `N >= 3` the
//! bound `H <= 1` removes it and they coincide with the plain ones.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{harmonic_dh, vartheta_power_integral, TestFunctionFamily};
use crate::criticality::{scaling_exponents, ProblemParams};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FunctionalBranch {
    ViaF,
    ViaG,
    ViaFMixed,
    ViaGMixed,
}

impl fmt::Display for FunctionalBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FunctionalBranch::ViaF => "ViaF",
            FunctionalBranch::ViaG => "ViaG",
            FunctionalBranch::ViaFMixed => "ViaF_mixed",
            FunctionalBranch::ViaGMixed => "ViaG_mixed",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for FunctionalBranch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "viaf" | "via_f" => Ok(FunctionalBranch::ViaF),
            "viag" | "via_g" => Ok(FunctionalBranch::ViaG),
            "viaf_mixed" | "via_f_mixed" => Ok(FunctionalBranch::ViaFMixed),
            "viag_mixed" | "via_g_mixed" => Ok(FunctionalBranch::ViaGMixed),
            _ => Err(Error::domain(format!("unknown functional branch `{s}`"))),
        }
    }
}

/// The composite at one `T` with the growth it should follow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalValue {
    pub value: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Predicted exponent of `T`.
    pub predicted_rate: f64,
    /// Predicted exponent of `ln T`.
    pub log_power: f64,
}

// One of α, β: c T^e1 (ln T)^l1 + T^e2 (ln T)^l2.
struct TwoTerm {
    e1: f64,
    l1: f64,
    e2: f64,
    l2: f64,
}

impl TwoTerm {
    fn eval(&self, t: f64) -> f64 {
        let lt = t.ln();
        t.powf(self.e1) * lt.powf(self.l1) + t.powf(self.e2) * lt.powf(self.l2)
    }
}

// `m` is the exponent of the nonlinearity being estimated and `c` its weight
// exponent: (q, b) for α and (p, a) for β.
fn two_term(n: u32, m: f64, c: f64, theta: f64) -> TwoTerm {
    let m1 = m - 1.0;
    if n == 2 {
        let e1 = (theta * m1 - c - 2.0) / m;
        if c >= 2.0 * m1 {
            TwoTerm { e1, l1: m1 / m, e2: -(m + 1.0) * theta / m, l2: 2.0 * m1 / m }
        } else {
            TwoTerm {
                e1,
                l1: m1 / m,
                e2: (2.0 * m1 - c - (m + 1.0) * theta) / m,
                l2: m1 / m,
            }
        }
    } else {
        let nf = n as f64;
        let e1 = ((nf - 2.0 + theta) * m1 - c - 2.0) / m;
        if c >= nf * m1 {
            TwoTerm { e1, l1: 0.0, e2: -(m + 1.0) * theta / m, l2: m1 / m }
        } else {
            TwoTerm { e1, l1: 0.0, e2: (nf * m1 - c - (m + 1.0) * theta) / m, l2: 0.0 }
        }
    }
}

/// Smallest `θ` (exclusive) for which the first term of the bound for the
/// nonlinearity `(m, c)` dominates.
fn dominance_threshold(n: u32, m: f64, c: f64) -> f64 {
    let m1 = m - 1.0;
    let nf = n as f64;
    let first_wins_above = if n == 2 { 2.0 * m1 } else { nf * m1 };
    if c >= first_wins_above {
        if n == 2 {
            (c + 2.0) / (2.0 * m)
        } else {
            (c + 2.0 - (nf - 2.0) * m1) / (2.0 * m)
        }
    } else {
        1.0
    }
}

fn check(params: &ProblemParams, theta: f64) -> Result<()> {
    params.validate()?;
    if !(theta > 0.0) {
        return Err(Error::domain(format!("theta = {theta} must be positive")));
    }
    let need = dominance_threshold(params.n, params.q, params.b)
        .max(dominance_threshold(params.n, params.p, params.a));
    if !(theta > need) {
        return Err(Error::domain(format!(
            "θ too small for asymptotic regime: θ = {theta} but θ > {need} is required"
        )));
    }
    Ok(())
}

/// `(α(T), β(T))` for stretch `θ`.
pub fn alpha_beta(params: &ProblemParams, theta: f64, t: f64) -> Result<(f64, f64)> {
    check(params, theta)?;
    if !(t > 1.0 && t.is_finite()) {
        return Err(Error::domain(format!("T = {t} must exceed 1")));
    }
    let alpha = two_term(params.n, params.q, params.b, theta).eval(t);
    let beta = two_term(params.n, params.p, params.a, theta).eval(t);
    Ok((alpha, beta))
}

/// Evaluates the composite of `branch` at `T` with `θ` taken from `family`.
pub fn contradiction_functional(
    params: &ProblemParams,
    family: &TestFunctionFamily,
    branch: FunctionalBranch,
    t: f64,
) -> Result<FunctionalValue> {
    if family.n != params.n {
        return Err(Error::domain(format!(
            "family dimension {} differs from parameter dimension {}",
            family.n, params.n
        )));
    }
    let theta = family.theta;
    let (alpha, beta) = alpha_beta(params, theta, t)?;
    let (p, q) = (params.p, params.q);
    let d = p * q - 1.0;
    let lt = t.ln();
    let mixed_log = if params.n == 2 { lt } else { 1.0 };
    let (fa, fb) = match branch {
        FunctionalBranch::ViaF => (alpha.powf(p * q / d), beta.powf(p / d)),
        FunctionalBranch::ViaG => (alpha.powf(q / d), beta.powf(p * q / d)),
        FunctionalBranch::ViaFMixed => (alpha.powf(p * q / d), (beta * mixed_log).powf(p / d)),
        FunctionalBranch::ViaGMixed => ((alpha * mixed_log).powf(q / d), beta.powf(p * q / d)),
    };
    let value = t.powf(-theta) * fa * fb;
    if !value.is_finite() {
        return Err(Error::computation(format!("functional overflowed at T = {t}")));
    }

    let s = scaling_exponents(params)?;
    let shift = params.n as f64 - 2.0;
    let (predicted_rate, log_power) = match (branch, params.n) {
        (FunctionalBranch::ViaF, 2) => (-s.delta, 1.0),
        (FunctionalBranch::ViaG, 2) => (-s.gamma, 1.0),
        (FunctionalBranch::ViaFMixed, 2) => (-s.delta, 1.0 + p / d),
        (FunctionalBranch::ViaGMixed, 2) => (-s.gamma, 1.0 + q / d),
        (FunctionalBranch::ViaF | FunctionalBranch::ViaFMixed, _) => (shift - s.delta, 0.0),
        (FunctionalBranch::ViaG | FunctionalBranch::ViaGMixed, _) => (shift - s.gamma, 0.0),
    };
    Ok(FunctionalValue {
        value,
        alpha,
        beta,
        predicted_rate,
        log_power,
    })
}

/// Which boundary pairing to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryFlavor {
    /// `-∫_Γ ∂_ν D_T f dσ dt`.
    DirichletFlux,
    /// `∫_Γ N_T f dσ dt`.
    NeumannTrace,
}

impl std::str::FromStr for BoundaryFlavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "dirichlet_flux" | "dirichlet" => Ok(BoundaryFlavor::DirichletFlux),
            "neumann_trace" | "neumann" => Ok(BoundaryFlavor::NeumannTrace),
            _ => Err(Error::domain(format!("unknown boundary flavor `{s}`"))),
        }
    }
}

/// Boundary pairing of the weights with constant data of total mass `I_f`.
///
/// Exact once `T >= r0`, where the spatial cutoff equals one on the sphere.
/// Both flavors are then `C · I_f · T^θ` with `C = ∫_0^1 ϑ^k` times
/// `|∂_ν H(r0)|` for the flux.
pub fn boundary_term(
    params: &ProblemParams,
    family: &TestFunctionFamily,
    flavor: BoundaryFlavor,
    t: f64,
) -> Result<f64> {
    if !(t >= family.r0) {
        return Err(Error::domain(format!(
            "T = {t} is below r0 = {}; the cutoff does not equal one on the sphere",
            family.r0
        )));
    }
    if params.i_f == 0.0 {
        return Ok(0.0);
    }
    let time = t.powf(family.theta) * vartheta_power_integral(family.k)?;
    let value = match flavor {
        BoundaryFlavor::DirichletFlux => {
            harmonic_dh(family.n, family.r0, family.r0) * params.i_f * time
        }
        BoundaryFlavor::NeumannTrace => params.i_f * time,
    };
    Ok(value)
}
