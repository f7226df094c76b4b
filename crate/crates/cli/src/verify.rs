//! Registry of end-to-end example checks behind `verify-examples`.
//!
//! Every numeric check receives the full `--budget` as its evaluation budget
//! and subdivides it internally. A check whose share falls below the module
//! minimum is reported as `inconclusive (budget)`.

use crate::io::emit;
use crate::{Exit, Failure, VerifyArgs};
use normcrit::criterion::{self, CEntry, ConditionProfile, Verdict, Violation};
use normcrit::exact::ExactValue;
use normcrit::families;
use normcrit::ratfun::{DefectMode, RationalFunction};
use normcrit::specialfn::{wp_pair, WeierstrassParams};
use normcrit::sphere::{self, MIN_SUP_BUDGET, MIN_T_BUDGET};
use normcrit::zalcman::{self, Disk, ExtractOptions, GridSpec, ProbeOptions, RescalingTrace, MIN_SAMPLES};
use normcrit::{ExtendedComplex, FunctionHandle};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

const ORIGIN: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "inconclusive (budget)")]
    InconclusiveBudget,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub check: String,
    pub example: String,
    pub parameters: Value,
    pub measured: Value,
    pub thresholds: Value,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub budget: usize,
    pub records: Vec<Record>,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub overall: Status,
}

struct Registry {
    budget: usize,
    seed: u64,
    records: Vec<Record>,
}

impl Registry {
    fn push(&mut self, example: &str, check: &str, parameters: Value, measured: Value, thresholds: Value, pass: bool) {
        self.records.push(Record {
            check: check.into(),
            example: example.into(),
            parameters,
            measured,
            thresholds,
            status: if pass { Status::Pass } else { Status::Fail },
        });
    }

    /// Records an under-budget check and returns `false`, or returns `true` when `share >= min`.
    fn affordable(&mut self, example: &str, check: &str, parameters: &Value, share: usize, min: usize) -> bool {
        if share >= min {
            return true;
        }
        self.records.push(Record {
            check: check.into(),
            example: example.into(),
            parameters: parameters.clone(),
            measured: json!({ "budget_share": share }),
            thresholds: json!({ "min_budget_share": min }),
            status: Status::InconclusiveBudget,
        });
        false
    }

    fn error(&mut self, example: &str, check: &str, parameters: Value, err: impl ToString) {
        self.push(example, check, parameters, json!({ "error": err.to_string() }), Value::Null, false);
    }
}

fn v(s: &str) -> ExactValue {
    s.parse().expect("registry literal")
}

fn c(value: &str, m: u32) -> CEntry {
    let value = v(value);
    let bound = (!value.is_infinite()).then_some(0.0);
    CEntry::new(value, m, bound)
}

fn profile(a: &[&str], b: &[&str], cs: Vec<CEntry>) -> ConditionProfile {
    ConditionProfile {
        a: a.iter().map(|s| v(s)).collect(),
        b: b.iter().map(|s| v(s)).collect(),
        c: cs,
    }
}

fn handle(s: &str) -> FunctionHandle {
    FunctionHandle::parse(s).expect("registry expression")
}

fn sum_check(reg: &mut Registry, example: &str, p: &ConditionProfile, sum: &str, verdict: Verdict, witness: Option<&str>) {
    let params = json!({ "profile": p });
    match criterion::decide(p) {
        Ok(d) => {
            let got_witness = d.witness.as_ref().map(|w| w.base.to_string());
            let ok = d.sum.to_string() == sum
                && d.verdict == verdict
                && got_witness.as_deref() == witness
                && d.witness.as_ref().is_none_or(|w| w.check());
            reg.push(
                example,
                "criterion-sum",
                params,
                json!({ "sum": d.sum.to_string(), "verdict": d.verdict, "witness": got_witness }),
                json!({ "sum": sum, "verdict": verdict, "witness": witness }),
                ok,
            );
        }
        Err(e) => reg.error(example, "criterion-sum", params, e),
    }
}

fn witness_probe(reg: &mut Registry, example: &str, p: &ConditionProfile) {
    let samples = reg.budget / 10;
    let params = json!({ "profile": p, "region": { "center": [0.0, 0.0], "radius": 2.0 }, "samples": samples });
    if !reg.affordable(example, "witness-probe", &params, samples, MIN_SAMPLES) {
        return;
    }
    let Ok(Some(w)) = criterion::witness_for_gap(p) else {
        reg.error(example, "witness-probe", params, "no witness");
        return;
    };
    let f = w.instantiate();
    let opts = ProbeOptions {
        seed: reg.seed,
        ..ProbeOptions::default()
    };
    let r = zalcman::hypothesis_probe(&f, p, Disk::new(ORIGIN, 2.0), samples, &opts);
    let level_points: Vec<usize> = r.conditions.iter().map(|c| c.level_points).collect();
    let violations: usize = r.conditions.iter().map(|c| c.violations.len()).sum();
    reg.push(
        example,
        "witness-probe",
        params,
        json!({ "witness": f.print(), "level_points": level_points, "violations": violations, "failed_evaluations": r.failed_evaluations }),
        json!({ "delta": opts.delta, "tol": opts.tol }),
        r.pass,
    );
}

fn trace_summary(t: &RescalingTrace) -> Value {
    json!({
        "conclusive": t.conclusive,
        "rho": t.steps.iter().map(|s| s.rho_n).collect::<Vec<_>>(),
        "max_normalization_error": t.steps.iter().map(|s| (s.sph_at_origin - 1.0).abs()).fold(0.0, f64::max),
    })
}

struct TraceSpec<'a> {
    example: &'a str,
    expr: &'a str,
    schedule: Vec<f64>,
    xi: f64,
    levels: Vec<ExtendedComplex>,
    omit: Vec<ExtendedComplex>,
    c_points: Vec<ExtendedComplex>,
}

fn trace_check(reg: &mut Registry, spec: TraceSpec<'_>) {
    let share = reg.budget / spec.schedule.len();
    let params = json!({
        "expr": spec.expr, "schedule": spec.schedule, "xi_radius": spec.xi, "grid": 41,
        "levels": spec.levels, "budget_per_step": share,
    });
    if !reg.affordable(spec.example, "zalcman-trace", &params, share, MIN_SUP_BUDGET) {
        return;
    }
    let opts = ExtractOptions {
        budget: share,
        seed: reg.seed,
        ..ExtractOptions::default()
    };
    let grid = GridSpec::new(spec.xi, 41).with_levels(spec.levels);
    let t = match zalcman::extract(&handle(spec.expr), ORIGIN, &spec.schedule, &grid, &opts) {
        Ok(t) => t,
        Err(e) => return reg.error(spec.example, "zalcman-trace", params, e),
    };
    let mut checks = vec![zalcman::check_bounded_blowup(&t, 1.0, 0.2)];
    for a in &spec.omit {
        checks.push(zalcman::check_inherited_omission(&t, a, 0.05));
    }
    for cp in &spec.c_points {
        checks.push(zalcman::check_inherited_c(&t, cp, 2, 0.0, zalcman::DEFAULT_DELTA, zalcman::DEFAULT_TOL));
    }
    let mut summary = trace_summary(&t);
    let normalized = summary["max_normalization_error"].as_f64().is_some_and(|e| e <= 1e-9);
    summary["checks"] = json!(checks
        .iter()
        .map(|c| json!({ "check": c.check, "pass": c.pass, "measured": c.measured, "threshold": c.threshold, "points": c.points_checked }))
        .collect::<Vec<_>>());
    let pass = t.conclusive && normalized && checks.iter().all(|c| c.pass);
    reg.push(
        spec.example,
        "zalcman-trace",
        params,
        summary,
        json!({ "normalization": 1e-9, "blowup_sup_on_unit_disk": 1.2, "omission_delta": 0.05, "c_tol": zalcman::DEFAULT_TOL }),
        pass,
    );
}

fn order_check(reg: &mut Registry, example: &str, expr: &str, expect: Value, check: impl Fn(&sphere::GrowthReport) -> bool) {
    let params = json!({ "expr": expr, "r_min": 2.5, "r_max": 5.0, "steps": 8, "budget": reg.budget });
    if !reg.affordable(example, "order-estimate", &params, reg.budget, MIN_T_BUDGET) {
        return;
    }
    match sphere::order_estimate(&handle(expr), 2.5, 5.0, 8, reg.budget, reg.seed) {
        Ok(r) => {
            let pass = check(&r);
            reg.push(
                example,
                "order-estimate",
                params,
                json!({ "order": r.order_estimate, "local_slopes": r.local_slopes, "superpolynomial": r.superpolynomial, "quadrature_converged": r.quadrature_converged }),
                expect,
                pass,
            );
        }
        Err(e) => reg.error(example, "order-estimate", params, e),
    }
}

fn marty_check(reg: &mut Registry) {
    let example = "sine-of-exp";
    let radii: Vec<f64> = (2..=7).map(f64::from).collect();
    let share = reg.budget / radii.len();
    let params = json!({ "expr": "sin(exp(z))", "radii": radii, "budget_per_disk": share });
    if !reg.affordable(example, "marty-growth", &params, share, MIN_SUP_BUDGET) {
        return;
    }
    match sphere::marty_probe(&handle("sin(exp(z))"), ORIGIN, &radii, share, reg.seed) {
        Ok(r) => {
            let ratio = r.sup_values[3] / r.sup_values[1];
            let sup7 = r.sup_values[5];
            reg.push(
                example,
                "marty-growth",
                params,
                json!({ "sup": r.sup_values, "ratio_5_3": ratio, "sup_7": sup7, "growth_exponent": r.growth_exponent, "evidence": r.evidence }),
                json!({ "ratio_5_3_min": std::f64::consts::E, "sup_7_min": 500.0 }),
                r.evidence && ratio >= std::f64::consts::E && sup7 >= 500.0,
            );
        }
        Err(e) => reg.error(example, "marty-growth", params, e),
    }
}

fn zero_b_check(reg: &mut Registry) {
    let p = profile(&["inf"], &["0"], vec![c("3", 2)]);
    let found = criterion::validate_profile(&p);
    let messages: Vec<String> = found.iter().map(ToString::to_string).collect();
    reg.push(
        "shifted-sine",
        "profile-violation",
        json!({ "profile": p }),
        json!({ "violations": messages }),
        json!({ "expected": Violation::BContainsZero.to_string() }),
        found == [Violation::BContainsZero],
    );
}

fn shifted_sine_probe(reg: &mut Registry) {
    let example = "shifted-sine";
    let samples = reg.budget / 10;
    let p = profile(&["inf"], &["0"], vec![c("3", 2)]);
    let params = json!({ "expr": "(3/2)(sin(exp(z))+1)", "profile": p, "samples": samples });
    if !reg.affordable(example, "zero-sharing-probe", &params, samples, MIN_SAMPLES) {
        return;
    }
    let opts = ProbeOptions {
        seed: reg.seed,
        ..ProbeOptions::default()
    };
    let r = zalcman::hypothesis_probe(&families::shifted_sine(3.0), &p, Disk::new(ORIGIN, 3.0), samples, &opts);
    let level_points: Vec<usize> = r.conditions.iter().map(|c| c.level_points).collect();
    let enough = r.conditions.iter().skip(1).all(|c| c.level_points > 0);
    reg.push(
        example,
        "zero-sharing-probe",
        params,
        json!({ "level_points": level_points, "pass": r.pass }),
        json!({ "tol": opts.tol }),
        r.pass && enough,
    );
}

/// Zeros of `℘` for `(℘')² = 4℘³ + 1`, where `℘'` takes `±1` with multiplicity 3.
fn triple_point_check(reg: &mut Registry) {
    let wp = handle("wp[0,-1](z)");
    let mut zeros: Vec<Complex64> = Vec::new();
    for i in 0..15 {
        for j in 0..15 {
            let mut z = Complex64::new(-1.5 + 3.0 * i as f64 / 14.0, -1.5 + 3.0 * j as f64 / 14.0);
            for _ in 0..50 {
                let Ok(jet) = wp.eval_jet(z, 1) else { break };
                if jet.pole {
                    break;
                }
                let step = jet.series.coeff(0) / jet.series.coeff(1);
                if !(step.norm() < 1.0) {
                    break;
                }
                z -= step;
                if step.norm() <= 1e-15 * (1.0 + z.norm()) {
                    break;
                }
            }
            let Ok(jet) = wp.eval_jet(z, 1) else { continue };
            if !jet.pole && jet.series.coeff(0).norm() <= 1e-12 && z.norm() <= 2.0 && zeros.iter().all(|w| (w - z).norm() > 1e-6) {
                zeros.push(z);
            }
        }
    }
    let mut worst_dp = 0.0_f64;
    let mut worst_higher = 0.0_f64;
    for z in &zeros {
        let jet = wp.eval_jet(*z, 3).expect("regular zero");
        let d = |k: usize| jet.series.derivative(k);
        let dp: Complex64 = d(1);
        worst_dp = worst_dp.max((dp.norm() - 1.0).abs());
        worst_higher = worst_higher.max(d(2).norm()).max(d(3).norm());
    }
    reg.push(
        "elliptic-derivative-of-exp",
        "triple-points",
        json!({ "g2": 0.0, "g3": -1.0, "seed_box": 1.5 }),
        json!({ "zeros": zeros.len(), "max_abs_dp_minus_one": worst_dp, "max_second_third_derivative": worst_higher }),
        json!({ "sqrt_c_tol": 1e-9, "derivative_tol": 1e-6 }),
        !zeros.is_empty() && worst_dp <= 1e-9 && worst_higher <= 1e-6,
    );
}

fn ode_check(reg: &mut Registry) {
    let mut rng = ChaCha8Rng::seed_from_u64(reg.seed);
    let mut worst = 0.0_f64;
    let mut failures = 0;
    for _ in 0..10 {
        let g2 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let g3 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let Ok(p) = WeierstrassParams::new(g2, g3) else {
            failures += 1;
            continue;
        };
        for _ in 0..100 {
            let z = Complex64::from_polar(rng.gen_range(0.05..1.5), rng.gen_range(0.0..std::f64::consts::TAU));
            match wp_pair(&p, z) {
                Ok((ExtendedComplex::Finite(w), ExtendedComplex::Finite(dw))) => {
                    worst = worst.max((dw * dw - p.cubic(w)).norm() / (1.0 + w.norm().powi(3)));
                }
                _ => failures += 1,
            }
        }
    }
    reg.push(
        "weierstrass",
        "ode-residual",
        json!({ "invariants": 10, "points": 100, "seed": reg.seed }),
        json!({ "max_relative_residual": worst, "failures": failures }),
        json!({ "max_relative_residual": 1e-8 }),
        failures == 0 && worst <= 1e-8,
    );
}

fn shared_set_identity(reg: &mut Registry) {
    let mut rng = ChaCha8Rng::seed_from_u64(reg.seed ^ 0x42);
    let mut worst = 0.0_f64;
    for n in [2u32, 5, 10] {
        let f = families::shared_set_member(n);
        let nf = f64::from(n);
        for _ in 0..100 {
            let z = Complex64::from_polar(rng.gen_range(0.0..1.0f64).sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
            let jet = f.eval_jet(z, 1).expect("entire");
            let (w, dw) = (jet.series.coeff(0), jet.series.coeff(1));
            let res = (nf * nf * (w * w - 1.0) - (dw * dw - 1.0)).norm() / (1.0 + w.norm_sqr() * nf * nf);
            worst = worst.max(res);
        }
    }
    reg.push(
        "shared-set-family",
        "identity-residual",
        json!({ "n": [2, 5, 10], "points": 100 }),
        json!({ "max_relative_residual": worst }),
        json!({ "max_relative_residual": 1e-10 }),
        worst <= 1e-10,
    );
}

fn set_sharing_check(reg: &mut Registry, example: &str, member: fn(u32) -> FunctionHandle) {
    let samples = reg.budget / 10;
    let params = json!({ "set": ["1", "-1"], "n": [2, 5, 10], "region": { "center": [0.0, 0.0], "radius": 1.0 }, "samples": samples });
    if !reg.affordable(example, "set-sharing-probe", &params, samples, MIN_SAMPLES) {
        return;
    }
    let opts = ProbeOptions {
        seed: reg.seed,
        ..ProbeOptions::default()
    };
    let set = [v("1"), v("-1")];
    let mut points = Vec::new();
    let mut pass = true;
    for n in [2u32, 5, 10] {
        let r = zalcman::set_sharing_probe(&member(n), &set, Disk::new(ORIGIN, 1.0), samples, &opts);
        points.push(r.level_points);
        pass &= r.pass && r.level_points > 0;
    }
    reg.push(example, "set-sharing-probe", params, json!({ "level_points": points }), json!({ "tol": opts.tol }), pass);
}

/// The single-value condition `g = 1 => g' = rho` must fail on the rescaled reciprocal family.
fn single_value_failure(reg: &mut Registry) {
    let example = "reciprocal-shared-set-family";
    let ns = [2usize, 4, 8, 16, 32];
    let params = json!({ "n": ns, "b": "1", "xi_radius": 2.0, "grid": 41, "budget_per_step": reg.budget / ns.len() });
    let share = reg.budget / ns.len();
    if !reg.affordable(example, "single-value-b-fails", &params, share, MIN_SUP_BUDGET) {
        return;
    }
    let steps: Vec<zalcman::StepInput> = ns
        .iter()
        .map(|&n| zalcman::StepInput {
            n,
            f: families::reciprocal_member(n as u32),
            center: ORIGIN,
            radius: 1.0,
        })
        .collect();
    let grid = GridSpec::new(2.0, 41).with_levels([ExtendedComplex::finite(1.0, 0.0), ExtendedComplex::finite(-1.0, 0.0)]);
    let opts = ExtractOptions {
        budget: share,
        seed: reg.seed,
        ..ExtractOptions::default()
    };
    match zalcman::extract_steps("reciprocal shared-set family", &steps, &grid, &opts) {
        Ok(t) => {
            let b = zalcman::check_inherited_b(&t, Complex64::new(1.0, 0.0), zalcman::DEFAULT_DELTA);
            let mut m = trace_summary(&t);
            m["b_check"] = json!({ "pass": b.pass, "measured": b.measured, "threshold": b.threshold, "points": b.points_checked });
            reg.push(example, "single-value-b-fails", params, m, json!({ "expect_b_check": "fail" }), t.conclusive && !b.pass);
        }
        Err(e) => reg.error(example, "single-value-b-fails", params, e),
    }
}

fn rational_example() -> RationalFunction {
    serde_json::from_value(json!({ "num": ["1", "-2", "1"], "den": ["1", "0", "1"] })).expect("fixture")
}

fn rational_checks(reg: &mut Registry) {
    let example = "rational-example";
    let f = rational_example();
    let params = json!({ "function": f.to_string() });
    let counts: Vec<usize> = ["0", "1", "2"].iter().map(|s| f.preimage_profile(&v(s)).finite_points()).collect();
    reg.push(
        example,
        "single-finite-preimages",
        params.clone(),
        json!({ "values": ["0", "1", "2"], "finite_points": counts }),
        json!({ "finite_points": [1, 1, 1] }),
        counts == [1, 1, 1],
    );
    match f.verify_defect_bound(DefectMode::C, Some(&v("1")), &[v("0"), v("2")], normcrit::ratfun::DEFAULT_TOL) {
        Ok(d) => reg.push(
            example,
            "defect-bound-mode-c",
            json!({ "function": f.to_string(), "a1": "1", "candidates": ["0", "2"] }),
            json!({ "bound": d.bound.to_string(), "U": d.u.len(), "R": d.r.len() }),
            json!({ "bound": "2" }),
            d.pass && d.bound.to_string() == "2",
        ),
        Err(e) => reg.error(example, "defect-bound-mode-c", params.clone(), e),
    }
    // all three single-preimage values taken as U would give |U| = 3
    reg.push(
        example,
        "three-value-set-exceeds",
        params.clone(),
        json!({ "U": counts.iter().filter(|c| **c == 1).count() }),
        json!({ "max": 2 }),
        counts.iter().filter(|c| **c == 1).count() > 2,
    );
    match f.riemann_hurwitz_check(normcrit::ratfun::DEFAULT_TOL) {
        Ok(rh) => reg.push(
            example,
            "riemann-hurwitz",
            params,
            json!({ "total": rh.total_ramification }),
            json!({ "expected": rh.expected }),
            rh.pass,
        ),
        Err(e) => reg.error(example, "riemann-hurwitz", params, e),
    }
}

pub fn build_report(budget: usize, seed: u64) -> VerificationReport {
    let mut reg = Registry {
        budget,
        seed,
        records: Vec::new(),
    };
    let inf = ExtendedComplex::Infinity;
    let one = ExtendedComplex::finite(1.0, 0.0);
    let minus_one = ExtendedComplex::finite(-1.0, 0.0);

    sum_check(&mut reg, "three-value-sharing", &profile(&[], &["1", "2"], vec![c("3", 2)]), "5/2", Verdict::Normal, None);
    sum_check(&mut reg, "sharing-with-multiple-poles", &profile(&[], &["1"], vec![c("inf", 3), c("0", 2)]), "13/6", Verdict::Normal, None);

    let sine = profile(&["inf"], &[], vec![c("1", 2), c("-1", 2)]);
    sum_check(&mut reg, "sine-of-exp", &sine, "2", Verdict::Inconclusive, Some("SIN"));
    witness_probe(&mut reg, "sine-of-exp", &sine);
    marty_check(&mut reg);
    order_check(&mut reg, "sine-of-exp", "sin(exp(z))", json!({ "superpolynomial": true }), |r| r.superpolynomial);
    trace_check(
        &mut reg,
        TraceSpec {
            example: "sine-of-exp",
            expr: "sin(exp(z))",
            schedule: (2..=7).map(f64::from).collect(),
            xi: 2.0,
            levels: vec![one, minus_one, inf],
            omit: vec![inf],
            c_points: vec![one, minus_one],
        },
    );

    zero_b_check(&mut reg);
    shifted_sine_probe(&mut reg);

    let exp3 = profile(&["inf", "0"], &[], vec![]);
    sum_check(&mut reg, "cubic-exponential", &exp3, "2", Verdict::Inconclusive, Some("EXP3"));
    witness_probe(&mut reg, "cubic-exponential", &exp3);
    order_check(&mut reg, "cubic-exponential", "exp(z^3)", json!({ "order_min": 2.6, "order_max": 3.4 }), |r| {
        (2.6..=3.4).contains(&r.order_estimate)
    });
    trace_check(
        &mut reg,
        TraceSpec {
            example: "cubic-exponential",
            expr: "exp(z^3)",
            schedule: vec![1.0, 1.5, 2.0, 2.5, 3.0, 3.5],
            xi: 1.0,
            levels: vec![ExtendedComplex::finite(0.0, 0.0)],
            omit: vec![inf],
            c_points: vec![],
        },
    );

    let wp = profile(&[], &[], vec![c("inf", 2), c("0", 2), c("1", 2), c("-1", 2)]);
    sum_check(&mut reg, "elliptic-of-exp", &wp, "2", Verdict::Inconclusive, Some("WP"));
    witness_probe(&mut reg, "elliptic-of-exp", &wp);

    let wpp = profile(&[], &[], vec![c("inf", 3), c("1", 3), c("-1", 3)]);
    sum_check(&mut reg, "elliptic-derivative-of-exp", &wpp, "2", Verdict::Inconclusive, Some("WPP"));
    witness_probe(&mut reg, "elliptic-derivative-of-exp", &wpp);
    triple_point_check(&mut reg);

    let wpp2 = profile(&[], &[], vec![c("inf", 6), c("0", 2), c("1", 3)]);
    sum_check(&mut reg, "squared-elliptic-derivative", &wpp2, "2", Verdict::Inconclusive, Some("WPP2"));
    witness_probe(&mut reg, "squared-elliptic-derivative", &wpp2);

    ode_check(&mut reg);

    shared_set_identity(&mut reg);
    set_sharing_check(&mut reg, "shared-set-family", families::shared_set_member);
    single_value_failure(&mut reg);
    set_sharing_check(&mut reg, "reciprocal-shared-set-family", families::reciprocal_member);

    rational_checks(&mut reg);

    let count = |s: Status| reg.records.iter().filter(|r| r.status == s).count();
    let (passed, failed, inconclusive) = (count(Status::Pass), count(Status::Fail), count(Status::InconclusiveBudget));
    VerificationReport {
        tool: "normcrit".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed,
        budget,
        overall: if passed == reg.records.len() { Status::Pass } else { Status::Fail },
        passed,
        failed,
        inconclusive,
        records: reg.records,
    }
}

pub fn run(args: &VerifyArgs) -> Result<Exit, Failure> {
    let report = build_report(args.budget, args.seed);
    for r in &report.records {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::InconclusiveBudget => "inconclusive (budget)",
        };
        eprintln!("{status:>22}  {:<30} {}", r.example, r.check);
    }
    emit(&report, args.out.as_deref())?;
    Ok(if report.overall == Status::Pass { Exit::Pass } else { Exit::CheckFailed })
}
