//! Test-function apparatus for the exterior of a ball.
//!
//! The weights are built from the harmonic lift `H` of the ball (vanishing on
//! the sphere, normalised at infinity), a spatial cutoff `ξ(r/T)^k` and a
//! temporal cutoff `ϑ(t/T^θ)^k`:
//!
//! ```text
//! D_T(t, x) = ϑ(t/T^θ)^k · H(x) · ξ(x/T)^k
//! N_T(t, x) = ϑ(t/T^θ)^k · ξ(x/T)^k
//! ```
//!
//! `D_T` vanishes on the boundary with nonpositive normal derivative, while
//! `N_T` has zero normal derivative there. Stretching time by `T^θ` with a
//! large `θ` lets the spatial growth rates dominate the estimates.

pub mod cutoff;
mod fit;
mod functional;
mod lemma;
mod weights;

pub use fit::{fit_rate, fit_rate_corrected, RateFit};
pub use functional::{
    alpha_beta, boundary_term, contradiction_functional, BoundaryFlavor, FunctionalBranch,
    FunctionalValue,
};
pub use lemma::{default_suite, lemma_integral, LemmaCase, LemmaId, Region};
pub use weights::{dn_values, harmonic_dh, DnValues};

use serde::{Deserialize, Serialize};

use crate::criticality::ProblemParams;
use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};

/// Harmonic lift of the unit ball: `ln r` for `N = 2`, `1 - r^{2-N}` for
/// `N >= 3`. Zero on the sphere and increasing outward.
pub fn harmonic_h(n: u32, r: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("N = {n} but N >= 2 is required")));
    }
    if !(r >= 1.0) {
        return Err(Error::domain(format!(
            "harmonic lift is defined for r >= 1, got {r}"
        )));
    }
    Ok(harmonic_unchecked(n, r))
}

pub(crate) fn harmonic_unchecked(n: u32, r: f64) -> f64 {
    if n == 2 {
        r.ln()
    } else {
        1.0 - r.powi(2 - n as i32)
    }
}

/// `H(1 + s)`, accurate for small `s > 0`.
pub(crate) fn harmonic_offset(n: u32, s: f64) -> f64 {
    let l = s.ln_1p();
    if n == 2 {
        l
    } else {
        -((2.0 - n as f64) * l).exp_m1()
    }
}

/// Surface area of the unit sphere in `R^N`.
pub fn sphere_area(n: u32) -> f64 {
    use std::f64::consts::PI;
    match n {
        0 | 1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => 2.0 * PI / (n as f64 - 2.0) * sphere_area(n - 2),
    }
}

/// Parameters of the weights `D_T`, `N_T` at one scale `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionFamily {
    pub n: u32,
    pub k: u32,
    pub theta: f64,
    #[serde(rename = "T")]
    pub scale: f64,
    /// Radius of the excluded ball; the harmonic lift is `H(r/r0)`.
    pub r0: f64,
}

/// Smallest admissible cutoff power.
pub const MIN_CUTOFF_POWER: u32 = 5;

/// Default cutoff power: one above `max{2p/(p-1), 2q/(q-1)}` rounded up.
pub fn default_cutoff_power(p: f64, q: f64) -> u32 {
    let need = (2.0 * p / (p - 1.0)).max(2.0 * q / (q - 1.0));
    (need.ceil() as u32 + 1).max(MIN_CUTOFF_POWER)
}

impl TestFunctionFamily {
    pub fn new(n: u32, k: u32, theta: f64, scale: f64) -> Result<Self> {
        let family = TestFunctionFamily {
            n,
            k,
            theta,
            scale,
            r0: 1.0,
        };
        family.validate()?;
        Ok(family)
    }

    /// Family attached to a parameter tuple, with the default `k` and
    /// `θ = N + 4`.
    pub fn for_params(params: &ProblemParams, scale: f64) -> Result<Self> {
        if params.p <= 1.0 || params.q <= 1.0 {
            return Err(Error::domain("cutoff power needs p, q > 1"));
        }
        TestFunctionFamily::new(
            params.n,
            default_cutoff_power(params.p, params.q),
            params.n as f64 + 4.0,
            scale,
        )?
        .with_r0(params.r0)
    }

    pub fn with_theta(mut self, theta: f64) -> Result<Self> {
        self.theta = theta;
        self.validate()?;
        Ok(self)
    }

    pub fn with_k(mut self, k: u32) -> Result<Self> {
        self.k = k;
        self.validate()?;
        Ok(self)
    }

    pub fn with_scale(mut self, scale: f64) -> Result<Self> {
        self.scale = scale;
        self.validate()?;
        Ok(self)
    }

    pub fn with_r0(mut self, r0: f64) -> Result<Self> {
        self.r0 = r0;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::domain(format!("N = {} but N >= 2 is required", self.n)));
        }
        if self.k < MIN_CUTOFF_POWER {
            return Err(Error::domain(format!(
                "cutoff power k = {} but k >= {MIN_CUTOFF_POWER} is required",
                self.k
            )));
        }
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return Err(Error::domain(format!("theta = {} must be positive", self.theta)));
        }
        if !(self.r0 > 0.0 && self.r0.is_finite()) {
            return Err(Error::domain(format!("r0 = {} must be positive", self.r0)));
        }
        if !(self.scale > 1.0 && self.scale.is_finite()) {
            return Err(Error::domain(format!("T = {} must exceed 1", self.scale)));
        }
        Ok(())
    }

    /// Rejects `k <= 2m/(m-1)`, for which the weighted integrals diverge.
    pub fn check_power_for(&self, m: f64) -> Result<()> {
        if !(m > 1.0) {
            return Err(Error::domain(format!("exponent m = {m} must exceed 1")));
        }
        let need = 2.0 * m / (m - 1.0);
        if (self.k as f64) <= need {
            return Err(Error::domain(format!(
                "cutoff power k = {} must exceed 2m/(m-1) = {need}",
                self.k
            )));
        }
        Ok(())
    }

    /// Checks `k > max{2p/(p-1), 2q/(q-1)}`.
    pub fn check_params(&self, params: &ProblemParams) -> Result<()> {
        self.check_power_for(params.p)?;
        self.check_power_for(params.q)?;
        if params.n != self.n {
            return Err(Error::domain(format!(
                "family dimension {} differs from parameter dimension {}",
                self.n, params.n
            )));
        }
        Ok(())
    }

    /// Length of the time support, `T^θ`.
    pub fn time_support(&self) -> f64 {
        self.scale.powf(self.theta)
    }

    /// `H(r/r0)`.
    pub fn h(&self, r: f64) -> f64 {
        harmonic_unchecked(self.n, r / self.r0)
    }
}

/// `∫_0^1 ϑ(s)^k ds`.
pub fn vartheta_power_integral(k: u32) -> Result<f64> {
    let f = |s: f64| cutoff::vartheta(s).value.powi(k as i32);
    let tol = Tolerance {
        rel: 1e-13,
        ..Default::default()
    };
    Ok(quadrature::integrate(f, 0.0, 1.0, &[0.5], tol)?.value)
}
