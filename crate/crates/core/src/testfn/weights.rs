use serde::{Deserialize, Serialize};

use super::cutoff::{vartheta_ratios, xi_ratios, Ratios};
use super::TestFunctionFamily;

/// Values and second derivatives of `D_T` and `N_T` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DnValues {
    pub d: f64,
    pub n: f64,
    pub box_d: f64,
    pub box_n: f64,
    pub dtt_d: f64,
    pub lap_d: f64,
    pub dtt_n: f64,
    pub lap_n: f64,
}

/// `H'(r)` for the lift `H(r/r0)`.
pub fn harmonic_dh(n: u32, r0: f64, r: f64) -> f64 {
    if n == 2 {
        1.0 / r
    } else {
        (n as f64 - 2.0) * (r / r0).powi(1 - n as i32) / r0
    }
}

/// Temporal factor `ϑ_T(t) = ϑ(t/T^θ)^k` in ratio form; the ratios are with
/// respect to `t`.
pub(crate) fn time_ratios(family: &TestFunctionFamily, t: f64) -> Option<Ratios> {
    let stretch = family.time_support();
    let r = vartheta_ratios(t / stretch)?.pow(family.k);
    Some(Ratios {
        value: r.value,
        r1: r.r1 / stretch,
        r2: r.r2 / (stretch * stretch),
    })
}

/// Spatial cutoff `ξ(r/T)^k` in ratio form with respect to `r`.
pub(crate) fn space_ratios(family: &TestFunctionFamily, r: f64) -> Option<Ratios> {
    let scale = family.scale;
    let x = xi_ratios(r / scale)?.pow(family.k);
    Some(Ratios {
        value: x.value,
        r1: x.r1 / scale,
        r2: x.r2 / (scale * scale),
    })
}

/// `Δ[ξ(r/T)^k] / ξ(r/T)^k` for radial functions.
pub(crate) fn cutoff_laplacian_ratio(family: &TestFunctionFamily, r: f64, psi: &Ratios) -> f64 {
    psi.r2 + (family.n as f64 - 1.0) * psi.r1 / r
}

/// `ΔΞ_T / Ξ_T` with `Ξ_T = H ξ(r/T)^k`; the `ΔH` term is absent because `H`
/// is harmonic.
pub(crate) fn lifted_laplacian_ratio(family: &TestFunctionFamily, r: f64, psi: &Ratios) -> f64 {
    let h = family.h(r);
    let dh = harmonic_dh(family.n, family.r0, r);
    cutoff_laplacian_ratio(family, r, psi) + 2.0 * dh / h * psi.r1
}

/// Evaluates `D_T`, `N_T` and their time and radial second derivatives at
/// radius `r >= r0` and time `t >= 0`.
pub fn dn_values(family: &TestFunctionFamily, r: f64, t: f64) -> DnValues {
    let (Some(time), Some(psi)) = (time_ratios(family, t), space_ratios(family, r)) else {
        return DnValues::default();
    };
    let h = family.h(r);
    let dh = harmonic_dh(family.n, family.r0, r);
    let cut_lap = cutoff_laplacian_ratio(family, r, &psi);

    let n = time.value * psi.value;
    let dtt_n = time.value * time.r2 * psi.value;
    let lap_n = time.value * psi.value * cut_lap;

    // ΔΞ = H Δψ + 2 H' ψ'
    let lap_xi = psi.value * (h * cut_lap + 2.0 * dh * psi.r1);
    let d = n * h;
    let dtt_d = dtt_n * h;
    let lap_d = time.value * lap_xi;

    DnValues {
        d,
        n,
        box_d: dtt_d - lap_d,
        box_n: dtt_n - lap_n,
        dtt_d,
        lap_d,
        dtt_n,
        lap_n,
    }
}
