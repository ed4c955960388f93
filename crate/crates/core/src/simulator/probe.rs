use serde::{Deserialize, Serialize};

use super::{run, InitialData, SimConfig, SimVerdict};
use crate::criticality::{classify, Classification, ProblemParams, Verdict};
use crate::error::{Error, Result};

/// Errors of a refinement ladder and the orders read off from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub spacings: Vec<f64>,
    pub errors: Vec<f64>,
    /// Order between each pair of consecutive levels.
    pub orders: Vec<f64>,
}

impl ConvergenceReport {
    /// Order between the two finest levels.
    pub fn order(&self) -> f64 {
        *self.orders.last().expect("at least two levels")
    }
}

/// `ln(e_coarse / e_fine) / ln(dr_coarse / dr_fine)`.
pub fn observed_order(dr_coarse: f64, e_coarse: f64, dr_fine: f64, e_fine: f64) -> Result<f64> {
    if !(dr_coarse > 0.0 && dr_fine > 0.0) {
        return Err(Error::domain("spacings must be positive"));
    }
    if dr_coarse == dr_fine {
        return Err(Error::domain(
            "degenerate input: identical spacings give no refinement",
        ));
    }
    if !(e_coarse > 0.0 && e_fine > 0.0) {
        return Err(Error::domain(format!(
            "errors must be positive, got {e_coarse} and {e_fine}"
        )));
    }
    Ok((e_coarse / e_fine).ln() / (dr_coarse / dr_fine).ln())
}

/// Runs `config` at `dr, dr/2, …` (`levels` grids, fixed CFL factor) and
/// measures the largest distance to the exact solution on each.
pub fn convergence_order(config: &SimConfig, levels: usize) -> Result<ConvergenceReport> {
    if levels < 2 {
        return Err(Error::domain(format!("need at least 2 levels, got {levels}")));
    }
    if !matches!(
        config.initial,
        InitialData::Stationary { .. } | InitialData::DecayPair
    ) {
        return Err(Error::domain(
            "convergence needs stationary or decaying-pair data",
        ));
    }
    let mut spacings = Vec::with_capacity(levels);
    let mut errors = Vec::with_capacity(levels);
    for level in 0..levels {
        let dr = config.dr / 2f64.powi(level as i32);
        let rec = run(&SimConfig {
            dr,
            ..config.clone()
        })?;
        if let SimVerdict::BlewUp { t_blow } = rec.verdict {
            return Err(Error::computation(format!(
                "manufactured solution blew up at t = {t_blow} with dr = {dr}"
            )));
        }
        spacings.push(dr);
        errors.push(rec.max_error.expect("reference exists for these data"));
    }
    let orders = (1..levels)
        .map(|i| observed_order(spacings[i - 1], errors[i - 1], spacings[i], errors[i]))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport {
        spacings,
        errors,
        orders,
    })
}

/// Blow-up times at `dt` and `dt/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupConfirmation {
    pub t_blow: Option<f64>,
    pub t_blow_half_step: Option<f64>,
    /// Both runs blew up and the times agree within [`Self::TOLERANCE`].
    pub confirmed: bool,
}

impl BlowupConfirmation {
    pub const TOLERANCE: f64 = 0.10;

    pub fn relative_gap(&self) -> Option<f64> {
        Some((self.t_blow? - self.t_blow_half_step?).abs() / self.t_blow_half_step?)
    }
}

/// Reruns a blow-up configuration with half the time step.
pub fn confirm_blowup(config: &SimConfig) -> Result<BlowupConfirmation> {
    let coarse = run(config)?.verdict.t_blow();
    let fine = match coarse {
        Some(_) => run(&SimConfig {
            cfl: 0.5 * config.cfl,
            ..config.clone()
        })?
        .verdict
        .t_blow(),
        None => None,
    };
    let mut c = BlowupConfirmation {
        t_blow: coarse,
        t_blow_half_step: fine,
        confirmed: false,
    };
    c.confirmed = c.relative_gap().is_some_and(|g| g <= BlowupConfirmation::TOLERANCE);
    Ok(c)
}

/// Settings of the standard simulations behind [`dichotomy_probe`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeProtocol {
    pub dr: f64,
    pub cfl: f64,
    /// Horizon of the forced run from rest.
    pub t_final_blowup: f64,
    /// Horizon of the stationary run.
    pub t_final_global: f64,
    /// Outer radius of the stationary run, in units of `r0`.
    pub stationary_r_max: f64,
}

impl Default for ProbeProtocol {
    fn default() -> Self {
        ProbeProtocol {
            dr: 0.02,
            cfl: 0.5,
            t_final_blowup: 40.0,
            t_final_global: 50.0,
            stationary_r_max: 4.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub classification: Classification,
    pub simulated: Option<SimVerdict>,
    pub confirmation: Option<BlowupConfirmation>,
    /// Largest sup-norm deviation from the stationary pair, relative to its
    /// initial sup norm. Informational: under Neumann data the pair is
    /// dynamically unstable and the run settles on another bounded state.
    pub drift: Option<f64>,
    pub agree: bool,
    /// No simulation was run because the classification makes no claim.
    pub vacuous: bool,
}

/// Classifies `params` and runs the matching standard simulation.
///
/// Blow-up verdicts get a forced run from rest with boundary values
/// `(I_f, I_g)`, confirmed under time-step halving. Global candidates get
/// the stationary pair with its own boundary values on `[r0, r_max]`.
pub fn dichotomy_probe(params: &ProblemParams, protocol: &ProbeProtocol) -> Result<ProbeReport> {
    let classification = classify(params)?;
    let mut report = ProbeReport {
        classification: classification.clone(),
        simulated: None,
        confirmation: None,
        drift: None,
        agree: true,
        vacuous: false,
    };
    match classification.verdict {
        Verdict::NotCovered => report.vacuous = true,
        Verdict::BlowUp => {
            let config = SimConfig {
                f_val: params.i_f,
                g_val: params.i_g,
                dr: protocol.dr,
                cfl: protocol.cfl,
                ..SimConfig::new(params.clone(), protocol.t_final_blowup)
            };
            let c = confirm_blowup(&config)?;
            report.simulated = Some(match c.t_blow {
                Some(t_blow) => SimVerdict::BlewUp { t_blow },
                None => SimVerdict::BoundedToHorizon,
            });
            report.agree = c.confirmed;
            report.confirmation = Some(c);
        }
        Verdict::GlobalCandidate => {
            let config = SimConfig {
                dr: protocol.dr,
                cfl: protocol.cfl,
                ..SimConfig::stationary(
                    params.clone(),
                    params.r0 * protocol.stationary_r_max,
                    protocol.t_final_global,
                )?
            };
            let rec = run(&config)?;
            // deviation from the exact profile; the sup norm alone sits on
            // the pinned boundary for Dirichlet data
            let first = rec.series[0];
            let scale = first.sup_u.max(first.sup_v);
            let drift = rec.max_error.unwrap_or(f64::INFINITY) / scale;
            report.agree = rec.verdict == SimVerdict::BoundedToHorizon;
            report.simulated = Some(rec.verdict);
            report.drift = Some(drift);
        }
    }
    Ok(report)
}
