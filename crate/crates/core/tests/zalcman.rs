use normcrit::criterion::{CEntry, ConditionProfile, SetName, WITNESS_ORDER, WP_DEFAULT_B};
use normcrit::exact::{ExactValue, GaussRat};
use normcrit::families::{reciprocal_member, shared_set_level_points, shared_set_member, shifted_sine};
use normcrit::zalcman::*;
use normcrit::{ExtendedComplex, FunctionHandle};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORIGIN: Complex64 = Complex64::new(0.0, 0.0);

fn h(s: &str) -> FunctionHandle {
    FunctionHandle::parse(s).unwrap()
}

fn fin(re: f64) -> ExtendedComplex {
    ExtendedComplex::finite(re, 0.0)
}

fn sine_trace() -> RescalingTrace {
    let grid = GridSpec::new(2.0, 41).with_levels([fin(1.0), fin(-1.0), ExtendedComplex::Infinity]);
    let schedule: Vec<f64> = (2..=7).map(f64::from).collect();
    extract(&h("sin(exp(z))"), ORIGIN, &schedule, &grid, &ExtractOptions::default()).unwrap()
}

fn cubic_exp_trace() -> RescalingTrace {
    let grid = GridSpec::new(1.0, 41).with_levels([fin(1.0), fin(-1.0), fin(0.0)]);
    let schedule = [1.0, 1.5, 2.0, 2.5, 3.0, 3.5];
    extract(&h("exp(z^3)"), ORIGIN, &schedule, &grid, &ExtractOptions::default()).unwrap()
}

fn sequence_trace(members: &[(u32, FunctionHandle)], xi: f64, levels: &[ExtendedComplex]) -> RescalingTrace {
    let steps: Vec<StepInput> = members
        .iter()
        .map(|(n, f)| StepInput {
            n: *n as usize,
            f: f.clone(),
            center: ORIGIN,
            radius: 1.0,
        })
        .collect();
    let grid = GridSpec::new(xi, 41).with_levels(levels.iter().copied());
    extract_steps("sequence", &steps, &grid, &ExtractOptions::default()).unwrap()
}

fn assert_normalized(t: &RescalingTrace) {
    for s in &t.steps {
        assert!((s.sph_at_origin - 1.0).abs() <= 1e-9, "step {}: g#(0) = {}", s.n, s.sph_at_origin);
    }
}

#[test]
fn sine_of_exp_trace_is_conclusive_with_exponential_scale_decay() {
    let t = sine_trace();
    assert!(t.conclusive);
    assert_normalized(&t);
    let rho: Vec<f64> = t.steps.iter().map(|s| s.rho_n).collect();
    // ρ_n is about e^{1 - R_n}
    for w in rho[2..].windows(2) {
        let ratio = w[1] / w[0];
        assert!((0.25..0.5).contains(&ratio), "{rho:?}");
    }
    for (s, r) in t.steps.iter().zip(&rho) {
        let scaled = r * s.search_radius.exp();
        assert!((1.0..5.0).contains(&scaled), "{rho:?}");
    }
}

#[test]
fn sine_of_exp_trace_checks() {
    let t = sine_trace();
    let b = check_bounded_blowup(&t, 2.0, 0.2);
    assert!(b.pass, "{b:?}");
    let b1 = check_bounded_blowup(&t, 1.0, 0.2);
    assert!(b1.pass && b1.measured >= 1.0 - 1e-9, "{b1:?}");
    let om = check_inherited_omission(&t, &ExtendedComplex::Infinity, 0.05);
    assert!(om.pass, "{om:?}");
    for c in [1.0, -1.0] {
        let r = check_inherited_c(&t, &fin(c), 2, 0.0, DEFAULT_DELTA, DEFAULT_TOL);
        assert!(r.pass && r.points_checked >= 2, "c = {c}: {r:?}");
        assert!(r.measured <= 1e-6, "{r:?}");
    }
    // zeros are simple: the multiplicity condition fails at 0
    let zeros_grid = GridSpec::new(2.0, 41).with_levels([fin(0.0)]);
    let t0 = extract(&h("sin(exp(z))"), ORIGIN, &[5.0, 6.0, 7.0], &zeros_grid, &ExtractOptions::default()).unwrap();
    let r0 = check_inherited_c(&t0, &fin(0.0), 2, 0.0, DEFAULT_DELTA, DEFAULT_TOL);
    assert!(!r0.pass && r0.measured > 0.5, "{r0:?}");
    // no sample is near 100: vacuous pass
    let vac = check_inherited_b(&t, Complex64::new(100.0, 0.0), DEFAULT_DELTA);
    assert!(vac.pass && vac.points_checked == 0);
}

#[test]
fn cubic_exponential_trace() {
    let t = cubic_exp_trace();
    assert!(t.conclusive);
    assert_normalized(&t);
    let last = t.steps.last().unwrap();
    assert!(last.rho_n < 0.2 * t.steps[0].rho_n);
    let b = check_bounded_blowup(&t, 1.0, 0.2);
    assert!(b.pass, "{b:?}");
    let om = check_inherited_omission(&t, &ExtendedComplex::Infinity, 0.05);
    assert!(om.pass, "{om:?}");
    let zero = check_inherited_c(&t, &fin(0.0), 2, 0.0, DEFAULT_DELTA, DEFAULT_TOL);
    assert!(zero.pass && zero.points_checked == 0, "{zero:?}");
    // ±1 are taken simply, so the multiplicity-2 condition must fail there
    for c in [1.0, -1.0] {
        let r = check_inherited_c(&t, &fin(c), 2, 0.0, DEFAULT_DELTA, DEFAULT_TOL);
        assert!(!r.pass, "c = {c}: {r:?}");
    }
}

#[test]
fn identity_trace_is_not_conclusive() {
    let grid = GridSpec::new(1.0, 21);
    let t = extract(&h("z"), ORIGIN, &[1.0, 2.0, 4.0, 8.0], &grid, &ExtractOptions::default()).unwrap();
    assert!(!t.conclusive);
    for s in &t.steps {
        assert!(s.rho_n >= 1.0 - 1e-6, "{}", s.rho_n);
    }
    let b = check_bounded_blowup(&t, 1.0, 0.2);
    assert!(!b.pass && b.detail.contains("not conclusive"));
}

#[test]
fn fixed_unit_scale_trace_fails_blowup() {
    let f = h("sin(exp(z))");
    let grid = GridSpec::new(2.0, 21);
    let fixed = trace_from_points("fixed", &f, &[(Complex64::new(3.0, 0.0), 1.0); 3], &grid, 2).unwrap();
    assert!(!fixed.conclusive);
    assert!(!check_bounded_blowup(&fixed, 1.0, 0.2).pass);
    // decreasing scales at a point that is not a weighted maximizer
    let points: Vec<(Complex64, f64)> = [1.0, 0.5, 0.2].iter().map(|r| (Complex64::new(4.0, 0.0), *r)).collect();
    let t = trace_from_points("unnormalized", &f, &points, &grid, 2).unwrap();
    assert!(t.conclusive);
    let b = check_bounded_blowup(&t, 1.0, 0.2);
    assert!(!b.pass && b.measured > 2.0, "{b:?}");
}

#[test]
fn mobius_moved_family_keeps_its_omitted_value() {
    let f = h("2-1/sin(exp(z))");
    let two = fin(2.0);
    let grid = GridSpec::new(2.0, 41).with_levels([two]);
    let t = extract(&f, ORIGIN, &[3.0, 4.0, 5.0, 6.0], &grid, &ExtractOptions::default()).unwrap();
    assert!(t.conclusive);
    assert_normalized(&t);
    let om = check_inherited_omission(&t, &two, 0.05);
    assert!(om.pass, "{om:?}");
    // sin(e^z) itself takes the value 2
    let s = sine_trace();
    assert!(!check_inherited_omission(&s, &two, 0.05).pass);
}

#[test]
fn b_inheritance_for_a_family_with_f_equal_b_implying_derivative_b() {
    // f_n = b + (b/n)(e^{nz} - 1): f_n = b exactly where e^{nz} = 1, and there f_n' = b
    let b = Complex64::new(0.5, 0.5);
    let members: Vec<(u32, FunctionHandle)> = [2u32, 4, 8, 16, 32]
        .iter()
        .map(|&n| {
            let nf = f64::from(n);
            let src = format!("(0.5+0.5i)+((0.5+0.5i)/{nf})*(exp({nf}*z)-1)");
            (n, h(&src))
        })
        .collect();
    // b-points lie on Re z = 0, about 4 rescaled units from z_n
    let t = sequence_trace(&members, 5.0, &[ExtendedComplex::Finite(b)]);
    assert!(t.conclusive);
    let r = check_inherited_b(&t, b, DEFAULT_DELTA);
    assert!(r.pass && r.points_checked >= 2, "{r:?}");
}

#[test]
fn reciprocal_family_fails_single_value_b_check() {
    let members: Vec<(u32, FunctionHandle)> = [2u32, 4, 8, 16, 32].iter().map(|&n| (n, reciprocal_member(n))).collect();
    let t = sequence_trace(&members, 2.0, &[fin(1.0), fin(-1.0)]);
    assert!(t.conclusive);
    assert_normalized(&t);
    let r = check_inherited_b(&t, Complex64::new(1.0, 0.0), DEFAULT_DELTA);
    assert!(!r.pass, "{r:?}");
    // at the offending points g' = -ρ instead of ρ
    let last = t.steps.last().unwrap();
    assert!(r.measured >= 1.9 * last.rho_n, "{r:?}");
}

#[test]
fn triple_points_of_equianharmonic_derivative_inherit_vanishing_derivatives() {
    let b = GaussRat::from_int(WP_DEFAULT_B);
    let f = normcrit::criterion::BaseFamily::Wpp.function(&b).unwrap();
    let grid = GridSpec::new(2.0, 41).with_levels([fin(1.0), fin(-1.0)]);
    let opts = ExtractOptions {
        k_max: 3,
        ..ExtractOptions::default()
    };
    let t = extract(&f, ORIGIN, &[1.0, 2.0, 3.0, 4.0], &grid, &opts).unwrap();
    assert!(t.conclusive);
    for c in [1.0, -1.0] {
        let r = check_inherited_c(&t, &fin(c), 3, 0.0, DEFAULT_DELTA, DEFAULT_TOL);
        assert!(r.pass, "c = {c}: {r:?}");
    }
    let r = check_inherited_c(&t, &fin(1.0), 3, 0.0, DEFAULT_DELTA, DEFAULT_TOL);
    assert!(r.points_checked >= 1, "{r:?}");
    assert!(matches!(check_inherited_c(&t, &fin(1.0), 5, 0.0, 1e-4, 1e-2), CheckOutcome { pass: false, .. }));
}

#[test]
fn rescaled_jets_match_composed_handle() {
    let f = h("sin(exp(z))");
    let t = sine_trace();
    for step in &t.steps[t.steps.len() - 2..] {
        let g = f.affine(Complex64::new(step.rho_n, 0.0), step.z_n);
        for s in step.samples.iter().step_by(97) {
            let direct = g.eval_jet(s.xi, t.k_max).unwrap();
            assert_eq!(direct.pole, s.chart == Chart::Reciprocal);
            for k in 0..=t.k_max {
                let a = direct.series.derivative(k);
                let b = s.derivs[k];
                assert!((a - b).norm() <= 1e-8 * a.norm().max(1.0), "k={k}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn shared_set_identity_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for n in [2u32, 5, 10] {
        let f = shared_set_member(n);
        let nf = f64::from(n);
        for _ in 0..100 {
            let r = rng.gen_range(0.0..1.0f64).sqrt();
            let z = Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU));
            let j = f.eval_jet(z, 1).unwrap();
            assert!(!j.pole);
            let (v, d) = (j.series.value(), j.series.coeff(1));
            let residual = (nf * nf * (v * v - 1.0) - (d * d - 1.0)).norm();
            assert!(residual <= 1e-10 * (1.0 + v.norm_sqr() * nf * nf), "n={n} z={z}: {residual}");
        }
    }
}

#[test]
fn reciprocal_family_partial_sharing_at_exact_level_points() {
    let mut saw_negative_at_one = false;
    for n in [2u32, 5, 10] {
        let hn = reciprocal_member(n);
        for s in [1.0, -1.0] {
            for z in shared_set_level_points(n, s, 2) {
                let j = hn.eval_jet(z, 1).unwrap();
                let (v, d) = (j.series.value(), j.series.coeff(1));
                assert!((v - s).norm() <= 1e-6, "n={n} z={z}: h = {v}");
                assert!((d.norm() - 1.0).abs() <= 1e-4, "|h'| = {}", d.norm());
                let to_set = (d - 1.0).norm().min((d + 1.0).norm());
                assert!(to_set <= 1e-4, "h' = {d}");
                if s == 1.0 && (d + 1.0).norm() <= 1e-4 {
                    saw_negative_at_one = true;
                }
            }
        }
    }
    assert!(saw_negative_at_one);
}

#[test]
fn hypothesis_probe_on_sine_of_exp() {
    let p = ConditionProfile {
        a: vec![ExactValue::Infinity],
        b: vec![],
        c: vec![
            CEntry::new(ExactValue::int(1), 2, Some(0.0)),
            CEntry::new(ExactValue::int(-1), 2, Some(0.0)),
        ],
    };
    let r = hypothesis_probe(&h("sin(exp(z))"), &p, Disk::new(ORIGIN, 3.0), 10_000, &ProbeOptions::default());
    assert!(r.pass, "{r:?}");
    assert_eq!(r.conditions.len(), 3);
    assert!(r.conditions[1].level_points >= 2);
    // but 0-points are simple
    let p0 = ConditionProfile {
        c: vec![CEntry::new(ExactValue::int(0), 2, Some(0.0))],
        ..ConditionProfile::default()
    };
    let r0 = hypothesis_probe(&h("sin(exp(z))"), &p0, Disk::new(ORIGIN, 3.0), 10_000, &ProbeOptions::default());
    assert!(!r0.pass && !r0.conditions[0].violations.is_empty(), "{r0:?}");
}

#[test]
fn hypothesis_probe_accepts_zero_in_b_for_shifted_sine() {
    let p = ConditionProfile {
        b: vec![ExactValue::int(0)],
        ..ConditionProfile::default()
    };
    let f = shifted_sine(3.0);
    let r = hypothesis_probe(&f, &p, Disk::new(ORIGIN, 3.0), 10_000, &ProbeOptions::default());
    assert!(r.pass && r.conditions[0].level_points >= 1, "{r:?}");
    assert_eq!(r.conditions[0].set, SetName::B);
    // the criterion rejects the same profile
    assert!(!normcrit::criterion::validate_profile(&p).is_empty());
}

#[test]
fn set_sharing_versus_single_value_for_the_shared_set_family() {
    let set = [ExactValue::int(1), ExactValue::int(-1)];
    let b1 = ConditionProfile {
        b: vec![ExactValue::int(1)],
        ..ConditionProfile::default()
    };
    let opts = ProbeOptions::default();
    for n in [2u32, 5, 10] {
        for f in [shared_set_member(n), reciprocal_member(n)] {
            let s = set_sharing_probe(&f, &set, Disk::new(ORIGIN, 1.0), 10_000, &opts);
            assert!(s.pass && s.level_points >= 2, "n={n}: {s:?}");
            let single = hypothesis_probe(&f, &b1, Disk::new(ORIGIN, 1.0), 10_000, &opts);
            assert!(!single.pass, "n={n}");
        }
    }
}

#[test]
fn every_translation_witness_passes_its_own_profile() {
    let b = GaussRat::from_int(WP_DEFAULT_B);
    for base in WITNESS_ORDER {
        let f = base.function(&b).unwrap();
        let pts = base.points(&b).unwrap();
        let profile = ConditionProfile {
            a: pts.omitted.clone(),
            b: vec![],
            c: pts
                .genuine
                .iter()
                .map(|(v, k)| CEntry::new(v.clone(), *k, (!v.is_infinite()).then_some(0.0)))
                .collect(),
        };
        let r = hypothesis_probe(&f, &profile, Disk::new(ORIGIN, 2.0), 10_000, &ProbeOptions::default());
        assert!(r.pass, "{base}: {r:?}");
        for c in r.conditions.iter().filter(|c| c.set == SetName::C) {
            assert!(c.level_points >= 1, "{base}: no level points of {}", c.value);
        }
    }
}

#[test]
fn traces_are_deterministic() {
    let grid = GridSpec::new(1.0, 15).with_levels([fin(1.0)]);
    let run = || extract(&h("sin(exp(z))"), ORIGIN, &[2.0, 3.0, 4.0], &grid, &ExtractOptions::default()).unwrap();
    let a = run();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(run);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn trace_rejects_bad_input() {
    let grid = GridSpec::new(1.0, 15);
    let f = h("z");
    let too_high = ExtractOptions {
        k_max: 6,
        ..ExtractOptions::default()
    };
    assert_eq!(extract(&f, ORIGIN, &[1.0], &grid, &too_high).unwrap_err(), ZalcmanError::OrderTooHigh(6));
    assert_eq!(extract(&f, ORIGIN, &[], &grid, &ExtractOptions::default()).unwrap_err(), ZalcmanError::EmptySchedule);
    assert!(matches!(
        extract(&f, ORIGIN, &[1.0], &GridSpec::new(1.0, 2), &ExtractOptions::default()),
        Err(ZalcmanError::BadGrid(_))
    ));
}

#[test]
fn step_csv_header_and_rows() {
    let grid = GridSpec::new(1.0, 5);
    let t = extract(&h("exp(z)"), ORIGIN, &[1.0, 2.0], &grid, &ExtractOptions::default()).unwrap();
    let mut buf = Vec::new();
    write_step_csv(&mut buf, &t, &t.steps[0]).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "xi_re,xi_im,g_re,g_im,sph,g1_re,g1_im,g2_re,g2_im,g3_re,g3_im");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), t.steps[0].samples.len());
    assert!(rows.iter().all(|r| r.split(',').count() == 11));
}
