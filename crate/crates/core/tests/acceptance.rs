//! Acceptance run: one line per criterion, nonzero exit on any failure.
//!
//! Each criterion returns a JSON report built only from computed values, so
//! the determinism check can compare two full passes byte for byte.

use std::time::{Duration, Instant};

use ewl::criticality::{
    classify, criterion_values, decay_pair, residual_stationary, scaling_exponents,
    stationary_pair, BoundaryKind, Branch, ProblemParams, Verdict,
};
use ewl::simulator::{
    convergence_order, dichotomy_probe, run, ProbeProtocol, SimConfig, SimVerdict,
};
use ewl::testfn::{
    contradiction_functional, default_suite, fit_rate_corrected, lemma_integral,
    FunctionalBranch, TestFunctionFamily,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

// Pinned tolerances and sizes.
const EQUIVALENCE_TUPLES: usize = 1000;
const DIAGONAL_GRID: usize = 10;
const RESIDUAL_POINTS: usize = 50;
const RESIDUAL_TOL: f64 = 1e-12;
const LEMMA_SLOPE_TOL: f64 = 0.15;
const LEMMA_CUTOFF_POWER: u32 = 9;
const FUNCTIONAL_TUPLES: usize = 50;
const FUNCTIONAL_SLOPE_TOL: f64 = 0.2;
const ORDER_RANGE: (f64, f64) = (1.8, 2.2);
const REFINEMENTS: usize = 3;
const DRIFT_PER_TIME: f64 = 1e-3;
const T_BLOW_TOL: f64 = 0.10;
const SEED: u64 = 0x5eed_2024;

struct Outcome {
    pass: bool,
    summary: String,
    report: Value,
}

fn scales() -> Vec<f64> {
    (0..5).map(|i| 10f64.powf(2.0 + 0.5 * i as f64)).collect()
}

fn random_tuple(rng: &mut ChaCha8Rng, n_min: u32) -> ProblemParams {
    let n = rng.gen_range(n_min..=6);
    let p = rng.gen_range(1.01..6.0);
    let q = rng.gen_range(1.01..6.0);
    let a = rng.gen_range(-2.0..3.0);
    let b = rng.gen_range(-2.0..3.0);
    let data = |rng: &mut ChaCha8Rng| match rng.gen_range(0..3) {
        0 => 0.0,
        1 => rng.gen_range(0.1..2.0),
        _ => -rng.gen_range(0.1..2.0),
    };
    let (i_f, i_g) = (data(rng), data(rng));
    let bc = [BoundaryKind::Dirichlet, BoundaryKind::Neumann, BoundaryKind::Mixed][rng.gen_range(0..3)];
    ProblemParams::new(n, p, q, a, b).with_boundary(bc).with_data(i_f, i_g)
}

fn criterion_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut disagree = 0;
    let mut classify_mismatch = 0;
    let mut blowups = 0;
    for _ in 0..EQUIVALENCE_TUPLES {
        let params = random_tuple(&mut rng, 2);
        let nf = params.n as f64;
        let (f_side, g_side) = criterion_values(&params).unwrap();
        let original = f_side > nf || g_side > nf;
        let s = scaling_exponents(&params).unwrap();
        let exponent_form = (params.i_f > 0.0 && s.delta > nf - 2.0) || (params.i_g > 0.0 && s.gamma > nf - 2.0);
        if original != exponent_form {
            disagree += 1;
        }
        let data_ok = params.i_f >= 0.0 && params.i_g >= 0.0 && params.i_f + params.i_g > 0.0;
        // mixed data with p <= 2 is outside the criterion
        let mixed_gap = params.boundary == BoundaryKind::Mixed && params.p <= 2.0;
        if data_ok && params.n >= 3 && !mixed_gap {
            let blow = classify(&params).unwrap().verdict == Verdict::BlowUp;
            if blow != exponent_form {
                classify_mismatch += 1;
            }
            blowups += blow as usize;
        }
    }
    Outcome {
        pass: disagree == 0 && classify_mismatch == 0,
        summary: format!(
            "criterion equivalence: {disagree} disagreements, {classify_mismatch} classifier mismatches over {EQUIVALENCE_TUPLES} tuples"
        ),
        report: json!({"tuples": EQUIVALENCE_TUPLES, "disagreements": disagree,
            "classifier_mismatches": classify_mismatch, "blowups": blowups}),
    }
}

fn diagonal_reduction() -> Outcome {
    let mut mismatches = Vec::new();
    let mut counted = 0;
    for n in 3..=5u32 {
        let nf = n as f64;
        for i in 0..DIAGONAL_GRID {
            for j in 0..DIAGONAL_GRID {
                let p = 1.05 + 0.3 * i as f64;
                let a = -1.5 + 0.45 * j as f64;
                let params = ProblemParams::new(n, p, p, a, a).with_data(1.0, 1.0);
                let blow = classify(&params).unwrap().verdict == Verdict::BlowUp;
                let pc = (nf + a) / (nf - 2.0);
                let expect = 1.0 < p && p < pc && (pc - p).abs() > 1e-12;
                counted += 1;
                if blow != expect {
                    mismatches.push(json!({"N": n, "p": p, "a": a}));
                }
            }
        }
    }
    Outcome {
        pass: mismatches.is_empty(),
        summary: format!(
            "diagonal reduction (p = q, a = b): {} mismatches over {counted} points at N = 3, 4, 5",
            mismatches.len()
        ),
        report: json!({"points": counted, "mismatches": mismatches}),
    }
}

fn explicit_residuals() -> Outcome {
    let params = ProblemParams::new(5, 3.0, 3.0, 0.0, 0.0);
    let pair = stationary_pair(&params).unwrap();
    let mut worst_stationary: f64 = 0.0;
    for i in 0..RESIDUAL_POINTS {
        let r = 10f64.powf(2.0 * i as f64 / (RESIDUAL_POINTS - 1) as f64);
        let (ru, rv) = residual_stationary(&pair, &params, r).unwrap().relative();
        worst_stationary = worst_stationary.max(ru.abs()).max(rv.abs());
    }
    let decay = decay_pair(&params).unwrap();
    let mut worst_decay: f64 = 0.0;
    for i in 0..RESIDUAL_POINTS {
        let t = 20.0 * i as f64 / (RESIDUAL_POINTS - 1) as f64;
        let rhs_u = decay.v(t).powf(params.p);
        let rhs_v = decay.u(t).powf(params.q);
        worst_decay = worst_decay
            .max(((decay.ddu(t) - rhs_u) / rhs_u).abs())
            .max(((decay.ddv(t) - rhs_v) / rhs_v).abs());
    }
    let amplitudes_ok = (pair.au - 2f64.sqrt()).abs() < 1e-14 && (decay.a1 - 2f64.sqrt()).abs() < 1e-14;
    Outcome {
        pass: amplitudes_ok && worst_stationary < RESIDUAL_TOL && worst_decay < RESIDUAL_TOL,
        summary: format!(
            "explicit residuals: stationary {worst_stationary:.2e}, decay {worst_decay:.2e} (tolerance {RESIDUAL_TOL:.0e})"
        ),
        report: json!({"stationary": worst_stationary, "decay": worst_decay,
            "au": pair.au, "a1": decay.a1}),
    }
}

fn asymptotics_suite() -> Outcome {
    let mut rows = Vec::new();
    let mut failed = 0;
    let mut worst: f64 = 0.0;
    let suite = default_suite();
    for case in &suite {
        let theta = if case.theta > 0.0 { case.theta } else { 1.0 };
        let samples: Vec<(f64, f64)> = scales()
            .into_iter()
            .map(|t| {
                let fam = TestFunctionFamily::new(case.n, LEMMA_CUTOFF_POWER, theta, t).unwrap();
                (t, lemma_integral(case, &fam).unwrap())
            })
            .collect();
        let fit = fit_rate_corrected(&samples, case.log_power).unwrap();
        let gap = (fit.slope - case.predicted_rate).abs();
        worst = worst.max(gap);
        if gap > LEMMA_SLOPE_TOL {
            failed += 1;
        }
        rows.push(json!({"id": case.id, "branch": case.branch, "predicted": case.predicted_rate,
            "slope": fit.slope}));
    }
    let mut ids: Vec<_> = suite.iter().map(|c| c.id).collect();
    ids.dedup();
    Outcome {
        pass: failed == 0 && ids.len() == 10,
        summary: format!(
            "asymptotics suite: {} cases over {} families, worst slope gap {worst:.3} (tolerance {LEMMA_SLOPE_TOL})",
            suite.len(),
            ids.len()
        ),
        report: json!({"cases": rows, "failed": failed}),
    }
}

fn functional_decay() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut rows = Vec::new();
    let mut failed = 0;
    let mut worst: f64 = 0.0;
    while rows.len() < FUNCTIONAL_TUPLES {
        let params = random_tuple(&mut rng, 3).with_data(rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
        let c = classify(&params).unwrap();
        let branch = match (c.verdict, c.branch) {
            (Verdict::BlowUp, Branch::ViaF) => FunctionalBranch::ViaF,
            (Verdict::BlowUp, Branch::ViaG) => FunctionalBranch::ViaG,
            _ => continue,
        };
        let s = scaling_exponents(&params).unwrap();
        let nf = params.n as f64;
        let expected = nf - 2.0 - if branch == FunctionalBranch::ViaF { s.delta } else { s.gamma };
        let theta = nf + 4.0 + params.a.abs() + params.b.abs();
        let fam = TestFunctionFamily::new(params.n, LEMMA_CUTOFF_POWER, theta, 100.0).unwrap();
        let samples: Vec<(f64, f64)> = scales()
            .into_iter()
            .map(|t| (t, contradiction_functional(&params, &fam, branch, t).unwrap().value))
            .collect();
        let fit = fit_rate_corrected(&samples, 0.0).unwrap();
        let gap = (fit.slope - expected).abs();
        worst = worst.max(gap);
        if !(fit.slope < 0.0 && gap <= FUNCTIONAL_SLOPE_TOL) {
            failed += 1;
        }
        rows.push(json!({"N": params.n, "p": params.p, "q": params.q, "a": params.a,
            "b": params.b, "branch": branch.to_string(), "expected": expected, "slope": fit.slope}));
    }
    Outcome {
        pass: failed == 0,
        summary: format!(
            "functional decay: {failed} failures over {FUNCTIONAL_TUPLES} blow-up tuples, worst gap {worst:.2e} (tolerance {FUNCTIONAL_SLOPE_TOL})"
        ),
        report: json!({"tuples": rows, "failed": failed}),
    }
}

fn simulator_verification() -> Outcome {
    let params = ProblemParams::new(3, 3.0, 3.0, 0.0, 0.0);
    let decay = SimConfig {
        dr: 0.04,
        ..SimConfig::decay(params, 5.0)
    };
    let conv = convergence_order(&decay, REFINEMENTS + 1).unwrap();
    let orders_ok = conv.orders.iter().all(|o| (ORDER_RANGE.0..=ORDER_RANGE.1).contains(o));

    let stationary = ProblemParams::new(5, 3.0, 3.0, 0.0, 0.0).with_data(1.0, 1.0);
    let rec = run(&SimConfig::stationary(stationary, 4.0, 10.0).unwrap()).unwrap();
    let first = rec.series[0];
    let scale = first.sup_u.max(first.sup_v);
    let drift = rec
        .series
        .iter()
        .map(|row| row.max_error.unwrap() / scale / row.t.max(1.0))
        .fold(0.0, f64::max);
    let bounded = rec.verdict == SimVerdict::BoundedToHorizon;
    Outcome {
        pass: orders_ok && bounded && drift < DRIFT_PER_TIME,
        summary: format!(
            "simulator verification: orders {:?}, stationary drift {drift:.2e} per unit time (limit {DRIFT_PER_TIME:.0e})",
            conv.orders.iter().map(|o| format!("{o:.3}")).collect::<Vec<_>>()
        ),
        report: json!({"spacings": conv.spacings, "errors": conv.errors, "orders": conv.orders,
            "drift_per_time": drift}),
    }
}

fn dichotomy() -> Outcome {
    let protocol = ProbeProtocol::default();
    let sub = ProblemParams::new(3, 2.0, 2.0, 0.0, 0.0)
        .with_boundary(BoundaryKind::Neumann)
        .with_data(1.0, 1.0);
    let sup = ProblemParams::new(5, 3.0, 3.0, 0.0, 0.0).with_data(1.0, 1.0);
    let blow = dichotomy_probe(&sub, &protocol).unwrap();
    let bounded = dichotomy_probe(&sup, &protocol).unwrap();
    let gap = blow.confirmation.and_then(|c| c.relative_gap());
    let pass = blow.classification.verdict == Verdict::BlowUp
        && matches!(blow.simulated, Some(SimVerdict::BlewUp { .. }))
        && blow.agree
        && gap.is_some_and(|g| g <= T_BLOW_TOL)
        && bounded.classification.verdict == Verdict::GlobalCandidate
        && bounded.simulated == Some(SimVerdict::BoundedToHorizon)
        && bounded.agree;
    let t_blow = blow.simulated.and_then(|v| v.t_blow());
    Outcome {
        pass,
        summary: format!(
            "dichotomy: N=3 Neumann t_blow {} (dt-halving gap {}), N=5 {}",
            t_blow.map_or("none".into(), |t| format!("{t:.3}")),
            gap.map_or("none".into(), |g| format!("{g:.3}")),
            bounded.simulated.map_or("none".into(), |v| v.to_string()),
        ),
        report: json!({"blowup": blow, "bounded": bounded}),
    }
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn criteria() -> [Criterion; 7] {
    [
        ("1", criterion_equivalence, Duration::from_secs(1)),
        ("2", diagonal_reduction, Duration::from_secs(1)),
        ("3", explicit_residuals, Duration::from_secs(1)),
        ("4", asymptotics_suite, Duration::from_secs(120)),
        ("5", functional_decay, Duration::from_secs(60)),
        ("6", simulator_verification, Duration::from_secs(120)),
        ("7", dichotomy, Duration::from_secs(300)),
    ]
}

fn main() {
    let mut all_pass = true;
    let mut first_pass = Vec::new();
    for (id, f, limit) in criteria() {
        let start = Instant::now();
        let out = f();
        let elapsed = start.elapsed();
        let ok = out.pass && elapsed <= limit;
        all_pass &= ok;
        println!(
            "criterion {id}: {} {} [{:.3} s, limit {} s]",
            if ok { "PASS" } else { "FAIL" },
            out.summary,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        first_pass.push(serde_json::to_string(&out.report).unwrap());
    }
    let second_pass: Vec<String> = criteria()
        .iter()
        .map(|(_, f, _)| serde_json::to_string(&f().report).unwrap())
        .collect();
    let differing: Vec<usize> = (0..first_pass.len())
        .filter(|&i| first_pass[i] != second_pass[i])
        .map(|i| i + 1)
        .collect();
    let bytes: usize = first_pass.iter().map(String::len).sum();
    let ok = differing.is_empty();
    all_pass &= ok;
    println!(
        "criterion 8: {} determinism: {bytes} report bytes, differing criteria {differing:?}",
        if ok { "PASS" } else { "FAIL" }
    );
    if !all_pass {
        std::process::exit(1);
    }
}
