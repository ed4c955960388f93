//! The `--config` JSON file and its merge with the command-line flags.

use std::path::{Path, PathBuf};

use ewl::criticality::{BoundaryKind, ProblemParams};
use ewl::simulator::{Nonlinearity, OuterBoundary};
use serde::{Deserialize, Serialize};

use crate::args::ParamArgs;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "N")]
    pub n: Option<u32>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub bc: Option<BoundaryKind>,
    #[serde(rename = "If")]
    pub i_f: Option<f64>,
    #[serde(rename = "Ig")]
    pub i_g: Option<f64>,
    pub r0: Option<f64>,
    pub f_nonneg: Option<bool>,
    pub g_nonneg: Option<bool>,
    pub out: Option<PathBuf>,
    pub sweep: Option<SweepSection>,
    pub asymptotics: Option<AsymptoticsSection>,
    pub simulate: Option<SimulateSection>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub p_min: Option<f64>,
    pub p_max: Option<f64>,
    pub p_step: Option<f64>,
    pub q_min: Option<f64>,
    pub q_max: Option<f64>,
    pub q_step: Option<f64>,
}

/// A lemma case written out in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSpec {
    pub id: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub tau: Option<f64>,
    pub m: Option<f64>,
    pub theta: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub region: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymptoticsSection {
    pub cases: Option<Vec<CaseSpec>>,
    #[serde(rename = "T")]
    pub scales: Option<Vec<f64>>,
    pub k: Option<u32>,
    pub tolerance: Option<f64>,
    pub functional: Option<Vec<String>>,
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    pub initial: Option<String>,
    pub epsilon: Option<f64>,
    pub bump_center: Option<f64>,
    pub bump_width: Option<f64>,
    pub bump_u: Option<f64>,
    pub bump_v: Option<f64>,
    pub dr: Option<f64>,
    pub cfl: Option<f64>,
    pub t_final: Option<f64>,
    pub r_max: Option<f64>,
    pub f_val: Option<f64>,
    pub g_val: Option<f64>,
    pub threshold: Option<f64>,
    pub nonlinearity: Option<Nonlinearity>,
    pub outer: Option<OuterBoundary>,
    pub sample_dt: Option<f64>,
    pub confirm: Option<bool>,
    pub probe: Option<bool>,
}

pub fn load(path: Option<&Path>) -> CliResult<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("invalid config {}: {e}", path.display())))
}

fn required<T>(flag: Option<T>, file: Option<T>, name: &str) -> CliResult<T> {
    flag.or(file)
        .ok_or_else(|| CliError::usage(format!("missing --{name}")))
}

/// Merges flags over file values; `N, p, q, a, b` are mandatory.
pub fn params(args: &ParamArgs, file: &FileConfig) -> CliResult<ProblemParams> {
    let n = required(args.n, file.n, "N")?;
    let p = required(args.p, file.p, "p")?;
    let q = required(args.q, file.q, "q")?;
    let a = required(args.a, file.a, "a")?;
    let b = required(args.b, file.b, "b")?;
    Ok(ProblemParams::new(n, p, q, a, b)
        .with_boundary(args.bc.or(file.bc).unwrap_or(BoundaryKind::Dirichlet))
        .with_data(
            args.i_f.or(file.i_f).unwrap_or(0.0),
            args.i_g.or(file.i_g).unwrap_or(0.0),
        )
        .with_signs(
            file.f_nonneg.unwrap_or(true),
            file.g_nonneg.unwrap_or(true),
        )
        .with_r0(args.r0.or(file.r0).unwrap_or(1.0)))
}

pub fn out_path(args: &ParamArgs, file: &FileConfig) -> Option<PathBuf> {
    args.out.clone().or_else(|| file.out.clone())
}

/// Comma-separated list of floats.
pub fn float_list(text: &str, name: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("--{name}: `{s}` is not a number")))
        })
        .collect()
}
