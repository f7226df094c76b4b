//! Registered example families that are sequences rather than translates.

use crate::expr::{Expr, FunctionHandle};
use num_complex::Complex64;

fn real(x: f64) -> Box<Expr> {
    Box::new(Expr::Const(Complex64::new(x, 0.0)))
}

fn exp_of_multiple(k: f64) -> Box<Expr> {
    Box::new(Expr::Exp(Box::new(Expr::Mul(real(k), Box::new(Expr::Var)))))
}

/// `f_n(z) = (n+1)/(2n) e^{nz} + (n-1)/(2n) e^{-nz}`, which shares the set
/// `{1, -1}` with its derivative: `n²(f_n² - 1) = (f_n')² - 1`.
pub fn shared_set_member(n: u32) -> FunctionHandle {
    let nf = f64::from(n);
    let e = Expr::Add(
        Box::new(Expr::Mul(real((nf + 1.0) / (2.0 * nf)), exp_of_multiple(nf))),
        Box::new(Expr::Mul(real((nf - 1.0) / (2.0 * nf)), exp_of_multiple(-nf))),
    );
    FunctionHandle::from_expr(e)
}

/// `h_n = 1 / f_n`: `h ∈ {1, -1} ⇒ h' ∈ {1, -1}`, yet `h = 1` with `h' = -1` occurs.
pub fn reciprocal_member(n: u32) -> FunctionHandle {
    let f = shared_set_member(n);
    FunctionHandle::from_expr(Expr::Div(real(1.0), Box::new(f.expr().clone())))
}

/// `(c/2)(sin(e^z) + 1)`: `f = 0 ⇒ f' = 0` holds although the family is not normal.
pub fn shifted_sine(c: f64) -> FunctionHandle {
    let s = Expr::Sin(Box::new(Expr::Exp(Box::new(Expr::Var))));
    FunctionHandle::from_expr(Expr::Mul(real(c / 2.0), Box::new(Expr::Add(Box::new(s), real(1.0)))))
}

/// Solutions of `f_n = s` for `s = ±1` with `|Im nz| ≤ (2 turns + 1)π`,
/// from `e^{nz} = (ns ± 1)/(n+1)`.
pub fn shared_set_level_points(n: u32, s: f64, turns: i32) -> Vec<Complex64> {
    let nf = f64::from(n);
    let roots = [(nf * s + 1.0) / (nf + 1.0), (nf * s - 1.0) / (nf + 1.0)];
    let mut out = Vec::new();
    for x in roots {
        let log = Complex64::new(x, 0.0).ln();
        for k in -turns..=turns {
            out.push((log + Complex64::new(0.0, 2.0 * std::f64::consts::PI * f64::from(k))) / nf);
        }
    }
    out
}
