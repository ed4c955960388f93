use ewl::criticality::{
    classify, criterion_values, historical_exponents, scaling_exponents, Branch, Condition,
    HistoricalExponents, ProblemParams, Verdict,
};
use ewl::simulator::{
    confirm_blowup, dichotomy_probe, run, BlowupConfirmation, InitialData, ProbeProtocol,
    ProbeReport, SimConfig, SimVerdict,
};
use ewl::testfn::{
    contradiction_functional, default_suite, fit_rate_corrected, lemma_integral,
    FunctionalBranch, LemmaCase, LemmaId, Region, TestFunctionFamily,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::{ClassifyArgs, ExponentsArgs, SimulateArgs, SweepArgs, VerifyArgs};
use crate::config::{self, CaseSpec, FileConfig};
use crate::error::{CliError, CliResult};
use crate::report::{csv_table, float, opt_float, Emitted, Report};

/// Worker pool capped by `EWL_THREADS`.
fn pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(text) = std::env::var("EWL_THREADS") {
        let n: usize = text
            .trim()
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::usage(format!("EWL_THREADS = `{text}` is not a positive integer")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Domain(format!("cannot start worker pool: {e}")))
}

// ---------------------------------------------------------------- classify

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyResult {
    /// Absent when `pq <= 1`.
    pub delta: Option<f64>,
    pub gamma: Option<f64>,
    /// `sgn(I_f)(2p(q+1)+pb+a)/(pq-1)`, compared with `N`.
    pub f_criterion: Option<f64>,
    /// `sgn(I_g)(2q(p+1)+qa+b)/(pq-1)`, compared with `N`.
    pub g_criterion: Option<f64>,
    pub verdict: Verdict,
    pub verdict_text: String,
    pub branch: Branch,
    pub critical_curve: bool,
    pub reasons: Vec<Condition>,
}

pub type ClassifyReport = Report<ProblemParams, ClassifyResult>;

pub fn classify_result(params: &ProblemParams) -> CliResult<ClassifyResult> {
    let c = classify(params)?;
    let s = scaling_exponents(params).ok();
    let crit = criterion_values(params).ok();
    Ok(ClassifyResult {
        delta: s.map(|s| s.delta),
        gamma: s.map(|s| s.gamma),
        f_criterion: crit.map(|c| c.0),
        g_criterion: crit.map(|c| c.1),
        verdict: c.verdict,
        verdict_text: c.verdict.to_string(),
        branch: c.branch,
        critical_curve: c.is_critical(),
        reasons: c.reasons,
    })
}

pub fn cmd_classify(args: &ClassifyArgs) -> CliResult<Emitted> {
    let file = config::load(args.params.config.as_deref())?;
    let params = config::params(&args.params, &file)?;
    let result = classify_result(&params)?;
    let mut out = Emitted::default();
    out.route(
        config::out_path(&args.params, &file),
        Report::new("classify", params, result).to_json()?,
    );
    Ok(out)
}

// ------------------------------------------------------------------- sweep

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub p_min: f64,
    pub p_max: f64,
    pub p_step: f64,
    pub q_min: f64,
    pub q_max: f64,
    pub q_step: f64,
}

fn axis(min: f64, max: f64, step: f64, name: &str) -> CliResult<Vec<f64>> {
    if !(step > 0.0 && min.is_finite() && max.is_finite() && max > min) {
        return Err(CliError::usage(format!(
            "degenerate {name} grid: min = {min}, max = {max}, step = {step}"
        )));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    if count < 2 {
        return Err(CliError::usage(format!("{name} grid needs at least 2 points")));
    }
    Ok((0..count).map(|i| min + i as f64 * step).collect())
}

pub const SWEEP_HEADER: [&str; 6] = ["p", "q", "delta", "gamma", "verdict", "branch"];

pub fn sweep_rows(base: &ProblemParams, grid: &SweepGrid) -> CliResult<Vec<Vec<String>>> {
    let ps = axis(grid.p_min, grid.p_max, grid.p_step, "p")?;
    let qs = axis(grid.q_min, grid.q_max, grid.q_step, "q")?;
    let points: Vec<(f64, f64)> = ps
        .iter()
        .flat_map(|&p| qs.iter().map(move |&q| (p, q)))
        .collect();
    pool()?.install(|| {
        points
            .par_iter()
            .map(|&(p, q)| {
                let params = ProblemParams { p, q, ..base.clone() };
                let c = classify(&params)?;
                let s = scaling_exponents(&params).ok();
                Ok(vec![
                    float(p),
                    float(q),
                    opt_float(s.map(|s| s.delta)),
                    opt_float(s.map(|s| s.gamma)),
                    format!("{:?}", c.verdict),
                    format!("{:?}", c.branch),
                ])
            })
            .collect()
    })
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<Emitted> {
    let file = config::load(args.params.config.as_deref())?;
    // p and q come from the grid
    let mut flags = args.params.clone();
    flags.p = Some(flags.p.or(file.p).unwrap_or(2.0));
    flags.q = Some(flags.q.or(file.q).unwrap_or(2.0));
    let base = config::params(&flags, &file)?;
    let s = file.sweep.clone().unwrap_or_default();
    let grid = SweepGrid {
        p_min: args.p_min.or(s.p_min).unwrap_or(1.1),
        p_max: args.p_max.or(s.p_max).unwrap_or(4.0),
        p_step: args.p_step.or(s.p_step).unwrap_or(0.1),
        q_min: args.q_min.or(s.q_min).unwrap_or(1.1),
        q_max: args.q_max.or(s.q_max).unwrap_or(4.0),
        q_step: args.q_step.or(s.q_step).unwrap_or(0.1),
    };
    let rows = sweep_rows(&base, &grid)?;
    let mut out = Emitted::default();
    out.route(
        config::out_path(&args.params, &file),
        csv_table(&SWEEP_HEADER, &rows)?,
    );
    Ok(out)
}

// ------------------------------------------------------ verify-asymptotics

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub id: String,
    pub branch: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub predicted_rate: f64,
    pub log_power: f64,
    pub fitted_slope: Option<f64>,
    pub residual: Option<f64>,
    /// `pass`, `fail` or `error: <reason>`.
    pub status: String,
}

pub const VERIFY_HEADER: [&str; 8] = [
    "id",
    "branch",
    "N",
    "predicted_rate",
    "log_power",
    "fitted_slope",
    "residual",
    "status",
];

impl VerifyRow {
    fn csv(&self) -> Vec<String> {
        vec![
            self.id.clone(),
            self.branch.clone(),
            self.n.to_string(),
            float(self.predicted_rate),
            float(self.log_power),
            opt_float(self.fitted_slope),
            opt_float(self.residual),
            self.status.clone(),
        ]
    }
}

/// Scales `10^2, 10^2.5, …, 10^4`.
pub fn default_scales() -> Vec<f64> {
    (0..5).map(|i| 10f64.powf(2.0 + 0.5 * i as f64)).collect()
}

pub const DEFAULT_TOLERANCE: f64 = 0.15;
pub const DEFAULT_K: u32 = 9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySettings {
    #[serde(rename = "T")]
    pub scales: Vec<f64>,
    pub k: u32,
    pub tolerance: f64,
    pub cases: Vec<LemmaCase>,
    pub params: Option<ProblemParams>,
    pub functionals: Vec<FunctionalBranch>,
    pub theta: Option<f64>,
}

fn check_scales(scales: &[f64]) -> CliResult<()> {
    let ok = scales.len() >= 3
        && scales[0] > 1.0
        && scales.windows(2).all(|w| w[1] > w[0])
        && scales[scales.len() - 1] / scales[0] >= 100.0;
    if ok {
        Ok(())
    } else {
        Err(CliError::usage(
            "--T needs at least 3 increasing scales above 1 spanning two decades",
        ))
    }
}

fn parse_region(text: &str) -> CliResult<Region> {
    match text.trim().to_ascii_lowercase().as_str() {
        "inner" => Ok(Region::Inner),
        "annulus" => Ok(Region::Annulus),
        _ => Err(CliError::usage(format!("unknown region `{text}` (inner or annulus)"))),
    }
}

fn build_case(spec: &CaseSpec) -> CliResult<LemmaCase> {
    let id: LemmaId = spec.id.parse().map_err(|e: ewl::Error| CliError::usage(e.to_string()))?;
    let need = |x: Option<f64>, name: &str| {
        x.ok_or_else(|| CliError::usage(format!("case {id} needs --{name}")))
    };
    let case = match id {
        LemmaId::LL1 | LemmaId::LL3 => LemmaCase::model(
            spec.n,
            need(spec.alpha, "alpha")?,
            spec.beta.unwrap_or(0.0),
            parse_region(spec.region.as_deref().unwrap_or("inner"))?,
        )?,
        _ => LemmaCase::weighted(
            id,
            spec.n,
            need(spec.tau, "tau")?,
            need(spec.m, "m")?,
            need(spec.theta, "theta")?,
        )?,
    };
    Ok(case)
}

fn fit_lemma(case: &LemmaCase, settings: &VerifySettings) -> VerifyRow {
    let mut row = VerifyRow {
        id: case.id.to_string(),
        branch: case.branch.clone(),
        n: case.n,
        predicted_rate: case.predicted_rate,
        log_power: case.log_power,
        fitted_slope: None,
        residual: None,
        status: String::new(),
    };
    let theta = if case.theta > 0.0 { case.theta } else { 1.0 };
    let samples: ewl::Result<Vec<(f64, f64)>> = settings
        .scales
        .iter()
        .map(|&t| {
            let fam = TestFunctionFamily::new(case.n, settings.k, theta, t)?;
            Ok((t, lemma_integral(case, &fam)?))
        })
        .collect();
    finish_row(&mut row, samples, settings.tolerance);
    row
}

fn fit_functional(
    params: &ProblemParams,
    branch: FunctionalBranch,
    settings: &VerifySettings,
) -> VerifyRow {
    let mut row = VerifyRow {
        id: "FEQ".to_string(),
        branch: branch.to_string(),
        n: params.n,
        predicted_rate: f64::NAN,
        log_power: f64::NAN,
        fitted_slope: None,
        residual: None,
        status: String::new(),
    };
    let theta = settings.theta.unwrap_or(params.n as f64 + 4.0);
    let samples: ewl::Result<Vec<(f64, f64)>> = (|| {
        let fam = TestFunctionFamily::new(params.n, settings.k, theta, settings.scales[0])?;
        settings
            .scales
            .iter()
            .map(|&t| {
                let v = contradiction_functional(params, &fam, branch, t)?;
                row.predicted_rate = v.predicted_rate;
                row.log_power = v.log_power;
                Ok((t, v.value))
            })
            .collect()
    })();
    if row.predicted_rate.is_nan() {
        row.predicted_rate = 0.0;
        row.log_power = 0.0;
    }
    finish_row(&mut row, samples, settings.tolerance);
    row
}

fn finish_row(row: &mut VerifyRow, samples: ewl::Result<Vec<(f64, f64)>>, tolerance: f64) {
    let fit = samples.and_then(|s| fit_rate_corrected(&s, row.log_power));
    match fit {
        Ok(f) => {
            row.fitted_slope = Some(f.slope);
            row.residual = Some(f.residual);
            let pass = (f.slope - row.predicted_rate).abs() <= tolerance;
            row.status = if pass { "pass" } else { "fail" }.to_string();
        }
        Err(e) => row.status = format!("error: {e}"),
    }
}

pub fn verify_rows(settings: &VerifySettings) -> CliResult<Vec<VerifyRow>> {
    check_scales(&settings.scales)?;
    pool()?.install(|| {
        let mut rows: Vec<VerifyRow> = settings
            .cases
            .par_iter()
            .map(|case| fit_lemma(case, settings))
            .collect();
        if let Some(params) = &settings.params {
            rows.extend(
                settings
                    .functionals
                    .par_iter()
                    .map(|&b| fit_functional(params, b, settings))
                    .collect::<Vec<_>>(),
            );
        }
        Ok(rows)
    })
}

fn verify_settings(args: &VerifyArgs, file: &FileConfig) -> CliResult<VerifySettings> {
    let section = file.asymptotics.clone().unwrap_or_default();
    let scales = match &args.scales {
        Some(text) => config::float_list(text, "T")?,
        None => section.scales.clone().unwrap_or_else(default_scales),
    };
    let mut cases = Vec::new();
    if let Some(id) = &args.lemma {
        let n = args
            .params
            .n
            .or(file.n)
            .ok_or_else(|| CliError::usage("--lemma needs --N"))?;
        cases.push(build_case(&CaseSpec {
            id: id.clone(),
            n,
            tau: args.tau,
            m: args.m,
            theta: args.theta,
            alpha: args.alpha,
            beta: args.beta,
            region: args.region.clone(),
        })?);
    }
    if let Some(specs) = &section.cases {
        for spec in specs {
            cases.push(build_case(spec)?);
        }
    }
    let filter = args.cases.as_deref();
    if filter.is_some() || cases.is_empty() {
        let text = filter.unwrap_or("all");
        let ids: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        if ids.is_empty() {
            return Err(CliError::usage("--cases is empty"));
        }
        let suite = default_suite();
        if ids.len() == 1 && ids[0].eq_ignore_ascii_case("all") {
            cases.extend(suite);
        } else {
            for id in ids {
                let id: LemmaId = id.parse().map_err(|e: ewl::Error| CliError::usage(e.to_string()))?;
                cases.extend(suite.iter().filter(|c| c.id == id).cloned());
            }
        }
    }

    let functional_names: Vec<String> = match &args.functional {
        Some(text) => text
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect(),
        None => section.functional.clone().unwrap_or_default(),
    };
    let functionals = functional_names
        .iter()
        .map(|s| s.parse().map_err(|e: ewl::Error| CliError::usage(e.to_string())))
        .collect::<CliResult<Vec<FunctionalBranch>>>()?;
    let params = if functionals.is_empty() {
        None
    } else {
        Some(config::params(&args.params, file)?)
    };
    if cases.is_empty() && functionals.is_empty() {
        return Err(CliError::usage("no cases selected"));
    }
    Ok(VerifySettings {
        scales,
        k: args.k.or(section.k).unwrap_or(DEFAULT_K),
        tolerance: args.tolerance.or(section.tolerance).unwrap_or(DEFAULT_TOLERANCE),
        cases,
        params,
        functionals,
        theta: args.theta.or(section.theta),
    })
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<Emitted> {
    let file = config::load(args.params.config.as_deref())?;
    let settings = verify_settings(args, &file)?;
    let rows = verify_rows(&settings)?;
    let table: Vec<Vec<String>> = rows.iter().map(VerifyRow::csv).collect();
    let mut out = Emitted::default();
    out.route(
        config::out_path(&args.params, &file),
        csv_table(&VERIFY_HEADER, &table)?,
    );
    Ok(out)
}

// ---------------------------------------------------------------- simulate

pub const SERIES_HEADER: [&str; 5] = ["t", "sup_u", "sup_v", "energy_proxy", "max_error"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateResult {
    pub verdict: SimVerdict,
    pub steps: usize,
    pub dt: f64,
    pub max_error: Option<f64>,
    /// Sup norms at the end; absent once they stop being finite.
    pub final_sup_u: Option<f64>,
    pub final_sup_v: Option<f64>,
    pub series_rows: usize,
    pub confirmation: Option<BlowupConfirmation>,
}

pub type SimulateReport = Report<SimConfig, SimulateResult>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub params: ProblemParams,
    pub protocol: ProbeProtocol,
}

pub type ProbeCliReport = Report<ProbeConfig, ProbeReport>;

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn sim_config(args: &SimulateArgs, file: &FileConfig, params: ProblemParams) -> CliResult<SimConfig> {
    let s = file.simulate.clone().unwrap_or_default();
    let pick = |flag: Option<f64>, val: Option<f64>| flag.or(val);
    let t_final = pick(args.t_final, s.t_final).unwrap_or(20.0);
    let initial = args
        .initial
        .clone()
        .or(s.initial.clone())
        .unwrap_or_else(|| "zero".to_string());
    let r0 = params.r0;
    let mut cfg = match initial.to_ascii_lowercase().as_str() {
        "zero" => SimConfig {
            f_val: params.i_f,
            g_val: params.i_g,
            ..SimConfig::new(params, t_final)
        },
        "stationary" => {
            let r_max = pick(args.r_max, s.r_max).unwrap_or(4.0 * r0);
            let mut c = SimConfig::stationary(params, r_max, t_final)?;
            c.initial = InitialData::Stationary {
                epsilon: pick(args.epsilon, s.epsilon).unwrap_or(0.0),
            };
            c
        }
        "decay" => SimConfig::decay(params, t_final),
        "bump" => {
            let center = pick(args.bump_center, s.bump_center).unwrap_or(r0 + 1.0);
            let width = pick(args.bump_width, s.bump_width).unwrap_or(0.5);
            SimConfig {
                f_val: params.i_f,
                g_val: params.i_g,
                r_max: center + width + t_final,
                initial: InitialData::Bump {
                    center,
                    width,
                    u: pick(args.bump_u, s.bump_u).unwrap_or(1.0),
                    v: pick(args.bump_v, s.bump_v).unwrap_or(1.0),
                },
                ..SimConfig::new(params, t_final)
            }
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown initial data `{other}` (zero, stationary, decay or bump)"
            )))
        }
    };
    if let Some(x) = pick(args.dr, s.dr) {
        cfg.dr = x;
    }
    if let Some(x) = pick(args.cfl, s.cfl) {
        cfg.cfl = x;
    }
    if let Some(x) = pick(args.r_max, s.r_max) {
        cfg.r_max = x;
    }
    if let Some(x) = pick(args.f_val, s.f_val) {
        cfg.f_val = x;
    }
    if let Some(x) = pick(args.g_val, s.g_val) {
        cfg.g_val = x;
    }
    if let Some(x) = pick(args.threshold, s.threshold) {
        cfg.blowup_threshold = x;
    }
    if let Some(x) = pick(args.sample_dt, s.sample_dt) {
        cfg.sample_dt = x;
    }
    if let Some(x) = args.nonlinearity.or(s.nonlinearity) {
        cfg.nonlinearity = x;
    }
    if let Some(x) = args.outer.or(s.outer) {
        cfg.outer = x;
    }
    Ok(cfg)
}

pub fn series_csv(rows: &[ewl::simulator::SeriesRow]) -> CliResult<String> {
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                float(r.t),
                float(r.sup_u),
                float(r.sup_v),
                float(r.energy_proxy),
                opt_float(r.max_error),
            ]
        })
        .collect();
    csv_table(&SERIES_HEADER, &table)
}

pub fn cmd_simulate(args: &SimulateArgs) -> CliResult<Emitted> {
    let file = config::load(args.params.config.as_deref())?;
    let params = config::params(&args.params, &file)?;
    let section = file.simulate.clone().unwrap_or_default();
    let mut out = Emitted::default();

    if args.probe || section.probe.unwrap_or(false) {
        let base = ProbeProtocol::default();
        let protocol = ProbeProtocol {
            dr: args.dr.or(section.dr).unwrap_or(base.dr),
            cfl: args.cfl.or(section.cfl).unwrap_or(base.cfl),
            t_final_blowup: args.t_final.or(section.t_final).unwrap_or(base.t_final_blowup),
            t_final_global: args.t_final.or(section.t_final).unwrap_or(base.t_final_global),
            ..base
        };
        let report = dichotomy_probe(&params, &protocol)?;
        let json = Report::new("simulate --probe", ProbeConfig { params, protocol }, report).to_json()?;
        out.route(args.report.clone(), json);
        return Ok(out);
    }

    let cfg = sim_config(args, &file, params)?;
    let rec = run(&cfg)?;
    let confirmation = if (args.confirm || section.confirm.unwrap_or(false))
        && matches!(rec.verdict, SimVerdict::BlewUp { .. })
    {
        Some(confirm_blowup(&cfg)?)
    } else {
        None
    };
    let result = SimulateResult {
        verdict: rec.verdict,
        steps: rec.steps,
        dt: rec.dt,
        max_error: rec.max_error.and_then(finite),
        final_sup_u: finite(rec.final_state.sup_u()),
        final_sup_v: finite(rec.final_state.sup_v()),
        series_rows: rec.series.len(),
        confirmation,
    };
    if let Some(path) = config::out_path(&args.params, &file) {
        out.files.push((path, series_csv(&rec.series)?));
    }
    out.route(args.report.clone(), Report::new("simulate", cfg, result).to_json()?);
    Ok(out)
}

// --------------------------------------------------------------- exponents

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentsConfig {
    #[serde(rename = "N")]
    pub n: u32,
    pub a: f64,
}

pub type ExponentsReport = Report<ExponentsConfig, HistoricalExponents>;

pub fn cmd_exponents(args: &ExponentsArgs) -> CliResult<Emitted> {
    let n = args.n.ok_or_else(|| CliError::usage("missing --N"))?;
    let a = args.a.unwrap_or(0.0);
    let result = historical_exponents(n, a)?;
    let mut out = Emitted::default();
    out.route(
        args.out.clone(),
        Report::new("exponents", ExponentsConfig { n, a }, result).to_json()?,
    );
    Ok(out)
}
