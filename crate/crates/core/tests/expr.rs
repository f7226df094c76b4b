use normcrit::expr::{EvalError, FunctionHandle};
use normcrit::specialfn::{wp_pair, WeierstrassParams};
use normcrit::ExtendedComplex;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn h(text: &str) -> FunctionHandle {
    FunctionHandle::parse(text).unwrap()
}

/// Central difference of the order-0 value, the independent derivative oracle.
fn central_diff(f: &FunctionHandle, z: Complex64, step: f64) -> Complex64 {
    let v = |w: Complex64| f.eval_extended(w).unwrap().as_finite().unwrap();
    (v(z + step) - v(z - step)) / (2.0 * step)
}

#[test]
fn exp_taylor_coefficients() {
    let jet = h("exp(z)").eval_jet(c(0.0, 0.0), 3).unwrap();
    assert!(!jet.pole);
    let expected = [1.0, 1.0, 0.5, 1.0 / 6.0];
    for (k, e) in expected.iter().enumerate() {
        assert!((jet.coeff(k) - e).norm() < 1e-15);
    }
}

#[test]
fn sin_exp_first_order_against_finite_differences() {
    let f = h("sin(exp(z))");
    let jet = f.eval_jet(c(0.0, 0.0), 1).unwrap();
    let fd = central_diff(&f, c(0.0, 0.0), 1e-5);
    // frozen from the oracle: sin 1, cos 1
    assert!((jet.coeff(0) - c(0.8414709848078965, 0.0)).norm() < 1e-12);
    assert!((jet.coeff(1) - fd).norm() < 1e-8);
    assert!((jet.coeff(1) - c(0.5403023058681398, 0.0)).norm() < 1e-12);
}

#[test]
fn reciprocal_near_pole() {
    let f = h("1/z");
    let eps = 1e-12;
    let jet = f.eval_jet(c(0.0, eps), 3).unwrap();
    assert!(jet.pole);
    assert!((jet.coeff(0) - c(0.0, eps)).norm() < 1e-24);
    assert!((jet.coeff(1) - 1.0).norm() < 1e-15);
    assert_eq!(jet.coeff(2), c(0.0, 0.0));
    assert_eq!(f.eval_extended(c(0.0, 0.0)).unwrap(), ExtendedComplex::Infinity);
}

#[test]
fn extended_values() {
    assert_eq!(h("z^2").eval_extended(c(2.0, 0.0)).unwrap(), ExtendedComplex::finite(4.0, 0.0));
    let wp = h("wp[0, -1](z)");
    assert_eq!(wp.eval_extended(c(0.0, 0.0)).unwrap(), ExtendedComplex::Infinity);
    // Laurent leading term z^-2 as the oracle
    for r in [1e-2, 1e-3] {
        let v = wp.eval_extended(c(r, 0.0)).unwrap().as_finite().unwrap();
        assert!((v * r * r - 1.0).norm() < 1e-3);
    }
    assert_eq!(wp.eval_extended(c(1e-5, 0.0)).unwrap(), ExtendedComplex::Infinity);
}

#[test]
fn second_example_parses_and_has_poles() {
    let f = h("(sin(exp(z))-1)/(sin(exp(z))+1)");
    // sin(e^z) = -1 at e^z = -pi/2, i.e. z = ln(pi/2) + i pi
    let z0 = c((std::f64::consts::FRAC_PI_2).ln(), std::f64::consts::PI);
    assert_eq!(f.eval_extended(z0).unwrap(), ExtendedComplex::Infinity);
    let z = h("z");
    assert_eq!(z.eval_extended(c(0.25, -1.0)).unwrap(), ExtendedComplex::finite(0.25, -1.0));
}

#[test]
fn mobius_example_matches_closed_form() {
    let base = h("sin(exp(z))");
    // ∞ → 2, 1 → 1, -1 → 3 is w ↦ (2w - 1)/w
    let moved = base.mobius_post(c(2.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
    let closed = h("2 - 1/sin(exp(z))");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let a = moved.eval_jet(z, 2).unwrap();
        let b = closed.eval_jet(z, 2).unwrap();
        assert_eq!(a.pole, b.pole);
        for k in 0..=2 {
            assert!((a.coeff(k) - b.coeff(k)).norm() < 1e-10 * (1.0 + b.coeff(k).norm()));
        }
    }
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let id = base.mobius_post(one, zero, zero, one).unwrap();
    for _ in 0..10 {
        let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        assert_eq!(id.eval_extended(z).unwrap(), base.eval_extended(z).unwrap());
    }
    let recip = h("z").mobius_post(zero, one, one, zero).unwrap();
    assert_eq!(recip.eval_extended(zero).unwrap(), ExtendedComplex::Infinity);
    assert!((recip.eval_extended(c(4.0, 0.0)).unwrap().as_finite().unwrap() - 0.25).norm() < 1e-16);
    assert!(base.mobius_post(one, one, one, one).is_err());
}

#[test]
fn essential_singularity_is_an_error() {
    let f = h("exp(1/z)");
    assert!(matches!(f.eval_jet(c(0.0, 0.0), 1), Err(EvalError::Unrepresentable(_))));
    assert!(matches!(h("exp(z)").eval_jet(c(0.0, 0.0), 7), Err(EvalError::OrderTooHigh(7))));
}

#[test]
fn huge_arguments_switch_charts_instead_of_overflowing() {
    let f = h("exp(z^3)");
    let jet = f.eval_jet(c(10.0, 0.0), 2).unwrap();
    assert!(jet.pole);
    assert!(jet.spherical_derivative().is_finite());
    let g = h("sin(exp(z))");
    let jet = g.eval_jet(c(8.0, 0.5), 3).unwrap();
    assert!(jet.pole);
    assert!(jet.spherical_derivative() < 1e-100);
}

#[test]
fn wp_jets_follow_the_differential_equation() {
    let f = h("wp[0.3, -1](z)");
    let p = WeierstrassParams::new(c(0.3, 0.0), c(-1.0, 0.0)).unwrap();
    let z = c(0.4, 0.25);
    let jet = f.eval_jet(z, 3).unwrap();
    let (w, dw) = wp_pair(&p, z).unwrap();
    let (w, dw) = (w.as_finite().unwrap(), dw.as_finite().unwrap());
    assert!((jet.coeff(0) - w).norm() < 1e-14);
    assert!((jet.coeff(1) - dw).norm() < 1e-13);
    // ℘'' / 2 = 3℘² - g2/4
    assert!((jet.coeff(2) - (3.0 * w * w - 0.075)).norm() < 1e-12);
    let fd = central_diff(&h("wp_prime[0.3, -1](z)"), z, 1e-5);
    assert!((jet.series.derivative(2) - fd).norm() / fd.norm() < 1e-7);
}

#[test]
fn wp_prime_pole_is_triple() {
    let f = h("wp_prime[0, -1](z)");
    let jet = f.eval_jet(c(1e-4, 0.0), 4).unwrap();
    assert!(jet.pole);
    // 1/℘'(t) ≈ -t³/2
    assert!((jet.series.value() - c(-0.5e-12, 0.0)).norm() < 1e-15);
}

const TEST_FUNCTIONS: &[&str] = &[
    "sin(exp(z))",
    "exp(z^3)",
    "(z^2 - 1)/(z^3 + 2i)",
    "cos(z)*exp(-z) + 1/(z - 0.5)",
    "wp[0, -1](exp(z))",
    "wp_prime[1, 0.5](z)",
    "mobius[2, -1, 1, 0](sin(exp(z)))",
    "(3/4)*exp(2*z) + (1/4)*exp(-2*z)",
];

#[test]
fn first_derivative_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for text in TEST_FUNCTIONS {
        let f = h(text);
        for _ in 0..40 {
            let z = c(rng.gen_range(-1.2..1.2), rng.gen_range(-1.2..1.2));
            let jet = f.eval_jet(z, 1).unwrap();
            if jet.pole || jet.coeff(0).norm() > 1e4 {
                continue;
            }
            let fd = central_diff(&f, z, 1e-6);
            let d = jet.coeff(1);
            assert!(
                (d - fd).norm() <= 1e-6 * d.norm().max(1.0),
                "{text} at {z}: jet {d} vs fd {fd}"
            );
        }
    }
}

#[test]
fn spherical_derivative_is_chart_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for text in TEST_FUNCTIONS {
        let f = h(text);
        let g = h(&format!("1/({text})"));
        for _ in 0..100 {
            let z = c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            let a = f.eval_jet(z, 1).unwrap().spherical_derivative();
            let b = g.eval_jet(z, 1).unwrap().spherical_derivative();
            assert!((a - b).abs() <= 1e-10 * a.max(1.0), "{text} at {z}: {a} vs {b}");
        }
    }
}

#[test]
fn mobius_preserves_multiplicity_pattern() {
    // sin(e^z) - 1 has a double zero where e^z = pi/2
    let f = h("sin(exp(z))");
    let z0 = c(std::f64::consts::FRAC_PI_2.ln(), 0.0);
    let jet = f.eval_jet(z0, 3).unwrap();
    assert!((jet.coeff(0) - 1.0).norm() < 1e-6 && jet.coeff(1).norm() < 1e-6);
    assert!(jet.coeff(2).norm() > 1e-3);
    let (a, b, cc, d) = (c(1.0, 2.0), c(-3.0, 0.0), c(0.5, 0.0), c(2.0, 1.0));
    let moved = f.mobius_post(a, b, cc, d).unwrap();
    let target = (a + b) / (cc + d);
    let mj = moved.eval_jet(z0, 3).unwrap();
    assert!((mj.coeff(0) - target).norm() < 1e-6);
    assert!(mj.coeff(1).norm() < 1e-6);
    assert!(mj.coeff(2).norm() > 1e-3);
}

fn arb_expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("z".to_string()),
        (-3.0f64..3.0).prop_map(|v| format!("{v}")),
        (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| format!("({a}{b:+}i)")),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) - ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) * ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) / ({b})")),
            (inner.clone(), -3i32..4).prop_map(|(a, n)| format!("({a})^({n})")),
            inner.clone().prop_map(|a| format!("exp(({a})/4)")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("-cos({a})")),
            inner.prop_map(|a| format!("mobius[1, 2i, 0.5, 3]({a})")),
        ]
    })
}

fn same(a: &Result<normcrit::Jet, EvalError>, b: &Result<normcrit::Jet, EvalError>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => x == y,
        (Err(_), Err(_)) => true,
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_round_trip(text in arb_expr()) {
        let f = FunctionHandle::parse(&text).unwrap();
        let g = FunctionHandle::parse(&f.print()).unwrap();
        prop_assert_eq!(f.print(), g.print());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            prop_assert!(same(&f.eval_jet(z, 2), &g.eval_jet(z, 2)));
        }
    }
}
