use crate::io::{emit, read_json, to_json, write_atomic};
use crate::{CriterionArgs, Exit, Failure, OrderArgs, ProbeArgs, RatfunArgs, ZalcmanArgs};
use normcrit::criterion::{self, BaseFamily, ConditionProfile, Verdict, WitnessSpec};
use normcrit::exact::ExactValue;
use normcrit::ratfun::{CriticalValue, DefectMode, DefectReport, PreimageProfile, RatFunError, RationalFunction, RiemannHurwitz};
use normcrit::sphere::{self, GrowthReport, MartyReport, SphereError, MIN_SUP_BUDGET};
use normcrit::zalcman::{self, CheckOutcome, ExtractOptions, GridSpec, ZalcmanError, MAX_K};
use normcrit::{ExtendedComplex, FunctionHandle};
use serde::Serialize;
use std::path::{Path, PathBuf};

pub fn parse_expr(text: &str) -> Result<FunctionHandle, Failure> {
    FunctionHandle::parse(text).map_err(|e| Failure::usage(format!("cannot parse {text:?}: {e}")))
}

pub fn parse_value(text: &str) -> Result<ExactValue, Failure> {
    text.trim()
        .parse()
        .map_err(|e| Failure::usage(format!("invalid value {text:?}: {e}")))
}

fn sphere_failure(e: SphereError) -> Failure {
    match e {
        SphereError::Eval(_) => Failure::new(Exit::CheckFailed, e.to_string()),
        _ => Failure::usage(e.to_string()),
    }
}

#[derive(Serialize)]
struct CriterionOutput {
    sum: String,
    verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<BaseFamily>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_spec: Option<WitnessSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_function: Option<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    not_covered: bool,
}

#[derive(Serialize)]
struct ViolationOutput {
    violations: Vec<criterion::Violation>,
    messages: Vec<String>,
}

pub fn criterion(args: &CriterionArgs) -> Result<Exit, Failure> {
    let profile: ConditionProfile = read_json(&args.profile)?;
    let violations = criterion::validate_profile(&profile);
    if !violations.is_empty() {
        let messages: Vec<String> = violations.iter().map(ToString::to_string).collect();
        for m in &messages {
            eprintln!("violation: {m}");
        }
        print!("{}", to_json(&ViolationOutput { violations, messages }));
        return Ok(Exit::Violation);
    }
    let v = criterion::decide(&profile).map_err(|e| Failure::new(Exit::Violation, e.to_string()))?;
    let out = CriterionOutput {
        sum: v.sum.to_string(),
        verdict: v.verdict,
        witness: v.witness.as_ref().map(|w| w.base),
        witness_function: v.witness.as_ref().map(|w| w.instantiate().print()),
        witness_spec: v.witness,
        not_covered: v.not_covered,
    };
    print!("{}", to_json(&out));
    Ok(Exit::Pass)
}

#[derive(Serialize)]
struct RatfunOutput {
    function: RationalFunction,
    display: String,
    degree: usize,
    value_at_infinity: ExactValue,
    omitted: Vec<ExactValue>,
    profiles: Vec<PreimageProfile>,
    critical_values: Vec<CriticalValue>,
    riemann_hurwitz: RiemannHurwitz,
    defect: DefectReport,
    pass: bool,
}

fn ratfun_failure(e: RatFunError) -> Failure {
    match e {
        RatFunError::Precondition { .. } | RatFunError::ClusteringAmbiguity { .. } => {
            Failure::new(Exit::Precondition, e.to_string())
        }
        _ => Failure::usage(e.to_string()),
    }
}

pub fn ratfun(args: &RatfunArgs) -> Result<Exit, Failure> {
    let f: RationalFunction = read_json(&args.function)?;
    let mode = if args.mode == "c" { DefectMode::C } else { DefectMode::B };
    let a1 = args.a1.as_deref().map(parse_value).transpose()?;
    if mode == DefectMode::C && a1.is_none() {
        return Err(Failure::usage("mode c requires --a1"));
    }
    let candidates: Vec<ExactValue> = args
        .candidates
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_value(s))
        .collect::<Result<_, _>>()?;
    let defect = f
        .verify_defect_bound(mode, a1.as_ref(), &candidates, args.tol)
        .map_err(ratfun_failure)?;
    let riemann_hurwitz = f.riemann_hurwitz_check(args.tol).map_err(ratfun_failure)?;
    let critical_values = f.critical_values_numeric(args.tol).map_err(ratfun_failure)?;
    let profiles = a1
        .iter()
        .chain(&candidates)
        .map(|c| f.preimage_profile(c))
        .collect();
    let pass = defect.pass && riemann_hurwitz.pass;
    let out = RatfunOutput {
        display: f.to_string(),
        degree: f.degree(),
        value_at_infinity: f.value_at_infinity(),
        omitted: f.omitted_values(),
        profiles,
        critical_values,
        riemann_hurwitz,
        defect,
        pass,
        function: f,
    };
    print!("{}", to_json(&out));
    Ok(if pass { Exit::Pass } else { Exit::CheckFailed })
}

#[derive(Serialize)]
struct WithExpr<'a, T> {
    expr: &'a str,
    budget: usize,
    seed: u64,
    #[serde(flatten)]
    report: T,
}

pub fn probe(args: &ProbeArgs) -> Result<Exit, Failure> {
    let h = parse_expr(&args.common.expr)?;
    let report: MartyReport =
        sphere::marty_probe(&h, args.center, &args.radii.0, args.common.budget, args.common.seed).map_err(sphere_failure)?;
    if let Some(csv) = &args.csv {
        if args.grid < 2 {
            return Err(Failure::usage("--grid must be at least 2"));
        }
        let r = *args.radii.0.last().expect("validated radii");
        let samples = sphere::grid_samples(&h, args.center, r, args.grid);
        let mut buf = Vec::new();
        sphere::write_grid_csv(&mut buf, &samples).expect("in-memory write");
        write_atomic(csv, &buf)?;
    }
    emit(
        &WithExpr {
            expr: h.source(),
            budget: args.common.budget,
            seed: args.common.seed,
            report,
        },
        args.common.out.as_deref(),
    )?;
    Ok(Exit::Pass)
}

pub fn order(args: &OrderArgs) -> Result<Exit, Failure> {
    let h = parse_expr(&args.common.expr)?;
    let report: GrowthReport = sphere::order_estimate(&h, args.r_min, args.r_max, args.steps, args.common.budget, args.common.seed)
        .map_err(sphere_failure)?;
    emit(
        &WithExpr {
            expr: h.source(),
            budget: args.common.budget,
            seed: args.common.seed,
            report,
        },
        args.common.out.as_deref(),
    )?;
    Ok(Exit::Pass)
}

/// `value:m[:M]`.
fn parse_c_condition(text: &str) -> Result<(ExactValue, usize, f64), Failure> {
    let bad = || Failure::usage(format!("expected value:m[:M] for --c, got {text:?}"));
    let parts: Vec<&str> = text.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(bad());
    }
    let value = parse_value(parts[0])?;
    let m: usize = parts[1].trim().parse().map_err(|_| bad())?;
    let bound: f64 = match parts.get(2) {
        Some(t) => t.trim().parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if m < 2 || !(bound.is_finite() && bound >= 0.0) {
        return Err(bad());
    }
    let bound = if value.is_infinite() { 0.0 } else { bound };
    Ok((value, m, bound))
}

fn zalcman_failure(e: ZalcmanError) -> Failure {
    match e {
        ZalcmanError::Sphere(s) => sphere_failure(s),
        other => Failure::usage(other.to_string()),
    }
}

#[derive(Serialize)]
struct StepSummary {
    n: usize,
    search_radius: f64,
    z_n: [f64; 2],
    rho_n: f64,
    sph_at_origin: f64,
    failed_points: usize,
}

#[derive(Serialize)]
struct ZalcmanOutput<'a> {
    expr: &'a str,
    budget: usize,
    seed: u64,
    conclusive: bool,
    steps: Vec<StepSummary>,
    checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    files: Vec<String>,
    pass: bool,
}

fn sidecar(out: &Path, n: usize) -> PathBuf {
    let stem = out.file_stem().map_or_else(|| "trace".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}.step{n}.csv"))
}

pub fn zalcman(args: &ZalcmanArgs) -> Result<Exit, Failure> {
    let h = parse_expr(&args.common.expr)?;
    if args.steps == 0 || !(args.r0 > 0.0 && args.dr >= 0.0) {
        return Err(Failure::usage("need --steps >= 1, --r0 > 0 and --dr >= 0"));
    }
    let schedule: Vec<f64> = (0..args.steps).map(|i| args.r0 + args.dr * i as f64).collect();
    let omit: Vec<ExactValue> = args.omit.iter().map(|s| parse_value(s)).collect::<Result<_, _>>()?;
    let bs: Vec<ExactValue> = args.b_values.iter().map(|s| parse_value(s)).collect::<Result<_, _>>()?;
    let cs: Vec<(ExactValue, usize, f64)> = args.c_values.iter().map(|s| parse_c_condition(s)).collect::<Result<_, _>>()?;
    let mut level_values: Vec<ExactValue> = args.levels.iter().map(|s| parse_value(s)).collect::<Result<_, _>>()?;
    level_values.extend(bs.iter().cloned());
    level_values.extend(cs.iter().map(|c| c.0.clone()));
    let mut levels: Vec<ExtendedComplex> = Vec::new();
    for v in &level_values {
        let e = v.to_extended();
        if !levels.contains(&e) {
            levels.push(e);
        }
    }
    let need = cs.iter().map(|c| c.1 - 1).max().unwrap_or(0);
    if need > MAX_K {
        return Err(Failure::usage(format!("multiplicity conditions need at most m = {}", MAX_K + 1)));
    }
    let opts = ExtractOptions {
        k_max: args.k_max.max(need),
        budget: (args.common.budget / args.steps).max(MIN_SUP_BUDGET),
        seed: args.common.seed,
    };
    let grid = GridSpec::new(args.xi, args.grid).with_levels(levels);
    let trace = zalcman::extract(&h, args.center, &schedule, &grid, &opts).map_err(zalcman_failure)?;

    let mut checks = vec![zalcman::check_bounded_blowup(&trace, args.blowup_xi, args.slack)];
    for a in &omit {
        checks.push(zalcman::check_inherited_omission(&trace, &a.to_extended(), args.omit_delta));
    }
    for b in &bs {
        let Some(bc) = b.to_extended().as_finite() else {
            return Err(Failure::usage("--b values must be finite"));
        };
        checks.push(zalcman::check_inherited_b(&trace, bc, args.delta));
    }
    for (c, m, bound) in &cs {
        checks.push(zalcman::check_inherited_c(&trace, &c.to_extended(), *m, *bound, args.delta, args.tol));
    }

    let mut files = Vec::new();
    if let Some(out) = &args.common.out {
        for step in &trace.steps {
            let mut buf = Vec::new();
            zalcman::write_step_csv(&mut buf, &trace, step).expect("in-memory write");
            let path = sidecar(out, step.n);
            write_atomic(&path, &buf)?;
            files.push(path.display().to_string());
        }
        write_atomic(out, to_json(&trace).as_bytes())?;
        files.push(out.display().to_string());
    }
    let pass = trace.conclusive && checks.iter().all(|c| c.pass);
    let out = ZalcmanOutput {
        expr: h.source(),
        budget: args.common.budget,
        seed: args.common.seed,
        conclusive: trace.conclusive,
        steps: trace
            .steps
            .iter()
            .map(|s| StepSummary {
                n: s.n,
                search_radius: s.search_radius,
                z_n: [s.z_n.re, s.z_n.im],
                rho_n: s.rho_n,
                sph_at_origin: s.sph_at_origin,
                failed_points: s.failed_points,
            })
            .collect(),
        checks,
        files,
        pass,
    };
    print!("{}", to_json(&out));
    Ok(if pass { Exit::Pass } else { Exit::CheckFailed })
}
