use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ewl::criticality::BoundaryKind;
use ewl::simulator::{Nonlinearity, OuterBoundary};

#[derive(Parser, Debug)]
#[command(
    name = "ewl",
    version,
    about = "Blow-up laboratory for systems of wave inequalities on the exterior of a ball"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify one parameter tuple.
    Classify(ClassifyArgs),
    /// Classify a rectangular (p, q) grid and emit CSV.
    Sweep(SweepArgs),
    /// Fit the growth rates of the lemma integrals and contradiction functionals.
    VerifyAsymptotics(VerifyArgs),
    /// Run the radial finite-difference solver.
    Simulate(SimulateArgs),
    /// Print the Strauss, Kato and Zhang exponents.
    Exponents(ExponentsArgs),
}

/// The parameter tuple and the shared I/O flags.
#[derive(Args, Debug, Clone, Default)]
pub struct ParamArgs {
    #[arg(long = "N")]
    pub n: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// dirichlet, neumann or mixed.
    #[arg(long)]
    pub bc: Option<BoundaryKind>,
    /// Integral of the boundary datum f.
    #[arg(long = "If", allow_negative_numbers = true)]
    pub i_f: Option<f64>,
    /// Integral of the boundary datum g.
    #[arg(long = "Ig", allow_negative_numbers = true)]
    pub i_g: Option<f64>,
    /// Radius of the excluded ball.
    #[arg(long)]
    pub r0: Option<f64>,
    /// JSON file with the same keys; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub p_min: Option<f64>,
    #[arg(long)]
    pub p_max: Option<f64>,
    #[arg(long)]
    pub p_step: Option<f64>,
    #[arg(long)]
    pub q_min: Option<f64>,
    #[arg(long)]
    pub q_max: Option<f64>,
    #[arg(long)]
    pub q_step: Option<f64>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Comma-separated lemma ids filtering the built-in suite, or `all`.
    #[arg(long)]
    pub cases: Option<String>,
    /// Comma-separated sample scales T.
    #[arg(long = "T")]
    pub scales: Option<String>,
    /// Cutoff power k.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Single custom case: lemma id (needs --N).
    #[arg(long)]
    pub lemma: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub m: Option<f64>,
    /// Time stretch for custom cases and functionals.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// inner or annulus.
    #[arg(long)]
    pub region: Option<String>,
    /// Comma-separated functional branches (ViaF, ViaG, ViaF_mixed,
    /// ViaG_mixed) evaluated for the parameter tuple.
    #[arg(long)]
    pub functional: Option<String>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// zero, stationary, decay or bump.
    #[arg(long)]
    pub initial: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub bump_center: Option<f64>,
    #[arg(long)]
    pub bump_width: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub bump_u: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub bump_v: Option<f64>,
    #[arg(long)]
    pub dr: Option<f64>,
    #[arg(long)]
    pub cfl: Option<f64>,
    #[arg(long)]
    pub t_final: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Boundary value of u or of its normal derivative.
    #[arg(long, allow_negative_numbers = true)]
    pub f_val: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub g_val: Option<f64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub nonlinearity: Option<Nonlinearity>,
    #[arg(long)]
    pub outer: Option<OuterBoundary>,
    #[arg(long)]
    pub sample_dt: Option<f64>,
    /// Rerun blow-ups with half the time step.
    #[arg(long)]
    pub confirm: bool,
    /// Run the classification-versus-simulation probe instead.
    #[arg(long)]
    pub probe: bool,
    /// Where to write the JSON report; stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExponentsArgs {
    #[arg(long = "N")]
    pub n: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
