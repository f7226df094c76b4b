//! Jet propagation through the expression tree on two charts.
//!
//! Every intermediate value lives either on the finite chart (`|f| <= 1e8`)
//! or on the reciprocal chart, where the series of `1/f` is carried instead.

use super::Expr;
use crate::extended::POLE_THRESHOLD;
use crate::jet::{exp_series, trig_series, Jet, Taylor, MAX_ORDER};
use crate::specialfn::{SpecialFnError, WeierstrassParams, WpLocal};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("value not representable in double precision: {0}")]
    Unrepresentable(&'static str),
    #[error("jet order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooHigh(usize),
    #[error("evaluation point is not finite")]
    NonFinitePoint,
    #[error(transparent)]
    Weierstrass(#[from] SpecialFnError),
}

/// `ln(POLE_THRESHOLD)`: beyond this real part `exp` switches charts.
const EXP_CHART_SWITCH: f64 = 18.420680743952367;
/// `|Im u|` beyond which `|sin u|, |cos u|` exceed the pole threshold.
const TRIG_CHART_SWITCH: f64 = 19.1;

#[derive(Clone, Copy, Debug)]
enum Value {
    Finite(Taylor),
    Recip(Taylor),
}

fn checked(t: Taylor) -> Result<Taylor, EvalError> {
    if t.is_finite() {
        Ok(t)
    } else {
        Err(EvalError::Unrepresentable("overflow in jet arithmetic"))
    }
}

fn from_finite(t: Taylor) -> Result<Value, EvalError> {
    let t = checked(t)?;
    if t.value().norm() > POLE_THRESHOLD {
        let r = t.recip().expect("nonzero constant term");
        Ok(Value::Recip(checked(r)?))
    } else {
        Ok(Value::Finite(t))
    }
}

fn from_recip(r: Taylor) -> Result<Value, EvalError> {
    let r = checked(r)?;
    if r.value().norm() * POLE_THRESHOLD >= 1.0 {
        let t = r.recip().expect("nonzero constant term");
        Ok(Value::Finite(checked(t)?))
    } else {
        Ok(Value::Recip(r))
    }
}

/// `p / q` placed on the appropriate chart.
fn from_pair(p: Taylor, q: Taylor) -> Result<Value, EvalError> {
    let (p, q) = (checked(p)?, checked(q)?);
    let (p0, q0) = (p.value().norm(), q.value().norm());
    if p0 <= POLE_THRESHOLD * q0 {
        let t = p.div(&q).expect("nonzero denominator");
        from_finite(t)
    } else if p0 > 0.0 {
        let r = q.div(&p).expect("nonzero numerator");
        from_recip(r)
    } else {
        Err(EvalError::Unrepresentable("indeterminate 0/0"))
    }
}

impl Value {
    fn pair(self) -> (Taylor, Taylor) {
        match self {
            Value::Finite(t) => (t, Taylor::constant(Complex64::new(1.0, 0.0), t.order())),
            Value::Recip(r) => (Taylor::constant(Complex64::new(1.0, 0.0), r.order()), r),
        }
    }

    fn finite(self, what: &'static str) -> Result<Taylor, EvalError> {
        match self {
            Value::Finite(t) => Ok(t),
            Value::Recip(_) => Err(EvalError::Unrepresentable(what)),
        }
    }

    fn recip(self) -> Result<Value, EvalError> {
        match self {
            Value::Finite(t) => from_recip(t),
            Value::Recip(r) => from_finite(r),
        }
    }
}

fn add(a: Value, b: Value) -> Result<Value, EvalError> {
    match (a, b) {
        (Value::Finite(x), Value::Finite(y)) => from_finite(x + y),
        _ => {
            let ((p1, q1), (p2, q2)) = (a.pair(), b.pair());
            from_pair(p1 * q2 + p2 * q1, q1 * q2)
        }
    }
}

fn neg(a: Value) -> Value {
    match a {
        Value::Finite(t) => Value::Finite(-t),
        Value::Recip(r) => Value::Recip(-r),
    }
}

fn mul(a: Value, b: Value) -> Result<Value, EvalError> {
    match (a, b) {
        (Value::Finite(x), Value::Finite(y)) => from_finite(x * y),
        (Value::Recip(x), Value::Recip(y)) => from_recip(x * y),
        (Value::Finite(x), Value::Recip(r)) | (Value::Recip(r), Value::Finite(x)) => from_pair(x, r),
    }
}

fn powi(a: Value, n: i32) -> Result<Value, EvalError> {
    let m = n.unsigned_abs();
    let v = match a {
        Value::Finite(t) => from_finite(t.powi(m))?,
        Value::Recip(r) => from_recip(r.powi(m))?,
    };
    if n < 0 {
        v.recip()
    } else {
        Ok(v)
    }
}

fn exp(a: Value) -> Result<Value, EvalError> {
    let t = a.finite("exp at an essential singularity")?;
    let u0 = t.value();
    if u0.re > EXP_CHART_SWITCH {
        // carry exp(-u), which is small
        let r = (-t).compose(&exp_series(-u0, t.order()));
        from_recip(r)
    } else {
        from_finite(t.compose(&exp_series(u0, t.order())))
    }
}

/// `sin` (`cosine == false`) or `cos` of a finite-chart value.
fn trig(a: Value, cosine: bool) -> Result<Value, EvalError> {
    let t = a.finite("sin/cos at an essential singularity")?;
    let u0 = t.value();
    let order = t.order();
    if u0.im.abs() <= TRIG_CHART_SWITCH {
        return from_finite(t.compose(&trig_series(u0, order, usize::from(cosine))));
    }
    // w = exp(±iu) is tiny on this side; express 1/sin, 1/cos through it
    let i = Complex64::new(0.0, 1.0);
    let sign = if u0.im > 0.0 { 1.0 } else { -1.0 };
    let arg = t.scale(i * sign);
    let w = arg.compose(&exp_series(arg.value(), order));
    let one = Taylor::constant(Complex64::new(1.0, 0.0), order);
    let w2 = w * w;
    let r = if cosine {
        // 1/cos = 2w / (w² + 1)
        w.scale(Complex64::new(2.0, 0.0)).div(&(w2 + one))
    } else if sign > 0.0 {
        // 1/sin = 2i w / (w² - 1)
        w.scale(2.0 * i).div(&(w2 - one))
    } else {
        // 1/sin = 2i w / (1 - w²)
        w.scale(2.0 * i).div(&(one - w2))
    };
    from_recip(r.ok_or(EvalError::Unrepresentable("trig chart switch"))?)
}

fn lattice_recip(params: &WeierstrassParams, order: usize, derivative: bool) -> Vec<Complex64> {
    let mut r = vec![Complex64::new(0.0, 0.0); order + 1];
    if derivative {
        // 1/℘'(t) = -t³/2 + O(t⁷)
        if order >= 3 {
            r[3] = Complex64::new(-0.5, 0.0);
        }
    } else {
        // 1/℘(t) = t² - c2 t⁶ + O(t⁸)
        if order >= 2 {
            r[2] = Complex64::new(1.0, 0.0);
        }
        if order >= 6 {
            r[6] = -params.laurent()[0];
        }
    }
    r
}

fn weierstrass(params: &WeierstrassParams, a: Value, derivative: bool) -> Result<Value, EvalError> {
    let t = a.finite("wp at an essential singularity")?;
    let order = t.order();
    match params.local(t.value(), order)? {
        WpLocal::Lattice => Ok(Value::Recip(
            t.compose(&lattice_recip(params, order, derivative)),
        )),
        WpLocal::Regular(a) => {
            let local: Vec<Complex64> = if derivative {
                (0..=order).map(|k| a[k + 1] * (k + 1) as f64).collect()
            } else {
                a[..=order].to_vec()
            };
            if local[0].norm() > POLE_THRESHOLD {
                let s = Taylor::from_coeffs(&local, order);
                let r = checked(s.recip().expect("large constant term"))?;
                from_recip(t.compose(r.coeffs()))
            } else {
                from_finite(t.compose(&local))
            }
        }
    }
}

fn mobius(m: &[Complex64; 4], a: Value) -> Result<Value, EvalError> {
    let (p, q) = a.pair();
    from_pair(p.scale(m[0]) + q.scale(m[1]), p.scale(m[2]) + q.scale(m[3]))
}

fn eval(e: &Expr, z: &Value) -> Result<Value, EvalError> {
    let order = match z {
        Value::Finite(t) | Value::Recip(t) => t.order(),
    };
    Ok(match e {
        Expr::Var => *z,
        Expr::Const(c) => from_finite(Taylor::constant(*c, order))?,
        Expr::Neg(a) => neg(eval(a, z)?),
        Expr::Add(a, b) => add(eval(a, z)?, eval(b, z)?)?,
        Expr::Sub(a, b) => add(eval(a, z)?, neg(eval(b, z)?))?,
        Expr::Mul(a, b) => mul(eval(a, z)?, eval(b, z)?)?,
        Expr::Div(a, b) => mul(eval(a, z)?, eval(b, z)?.recip()?)?,
        Expr::Pow(a, n) => powi(eval(a, z)?, *n)?,
        Expr::Exp(a) => exp(eval(a, z)?)?,
        Expr::Sin(a) => trig(eval(a, z)?, false)?,
        Expr::Cos(a) => trig(eval(a, z)?, true)?,
        Expr::Wp(p, a) => weierstrass(p, eval(a, z)?, false)?,
        Expr::WpPrime(p, a) => weierstrass(p, eval(a, z)?, true)?,
        Expr::Mobius(m, a) => mobius(m, eval(a, z)?)?,
    })
}

pub(crate) fn eval_jet(e: &Expr, z: Complex64, order: usize) -> Result<Jet, EvalError> {
    if order > MAX_ORDER {
        return Err(EvalError::OrderTooHigh(order));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(EvalError::NonFinitePoint);
    }
    let v = eval(e, &from_finite(Taylor::variable(z, order))?)?;
    Ok(match v {
        Value::Finite(series) => Jet {
            series,
            pole: false,
        },
        Value::Recip(series) => Jet { series, pole: true },
    })
}
