//! Truncated Taylor arithmetic over complex doubles.
//!
//! A [`Taylor`] holds normalized coefficients `c_k = f^(k)(z0) / k!` up to a
//! fixed order. Arithmetic truncates every product at that order, which is
//! exactly the algebra of power series modulo `t^(order+1)`.
//!
//! A [`Jet`] is the public evaluation result: a `Taylor` tagged with the chart
//! it lives on. When the pole flag is set, the coefficients describe `1/f`.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// Highest derivative order supported by evaluation.
pub const MAX_ORDER: usize = 6;

const CAP: usize = MAX_ORDER + 1;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Taylor {
    order: usize,
    c: [Complex64; CAP],
}

impl Taylor {
    pub fn constant(value: Complex64, order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds cap {MAX_ORDER}");
        let mut c = [ZERO; CAP];
        c[0] = value;
        Self { order, c }
    }

    /// The identity function expanded at `z0`.
    pub fn variable(z0: Complex64, order: usize) -> Self {
        let mut t = Self::constant(z0, order);
        if order >= 1 {
            t.c[1] = ONE;
        }
        t
    }

    pub fn from_coeffs(coeffs: &[Complex64], order: usize) -> Self {
        let mut t = Self::constant(ZERO, order);
        for (k, v) in coeffs.iter().take(order + 1).enumerate() {
            t.c[k] = *v;
        }
        t
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        if k <= self.order {
            self.c[k]
        } else {
            ZERO
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.c[..=self.order]
    }

    /// The k-th derivative, `k! * c_k`.
    pub fn derivative(&self, k: usize) -> Complex64 {
        self.coeff(k) * factorial(k)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let order = self.order.min(other.order);
        let mut out = Self::constant(ZERO, order);
        for k in 0..=order {
            out.c[k] = f(self.c[k], other.c[k]);
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = *self;
        for v in out.c[..=self.order].iter_mut() {
            *v *= s;
        }
        out
    }

    pub fn add_scalar(&self, s: Complex64) -> Self {
        let mut out = *self;
        out.c[0] += s;
        out
    }

    /// Coefficients of `f(z0 + rho * xi)` as a series in `xi`.
    pub fn rescale(&self, rho: f64) -> Self {
        let mut out = *self;
        let mut p = 1.0;
        for v in out.c[..=self.order].iter_mut() {
            *v *= p;
            p *= rho;
        }
        out
    }

    /// Multiplicative inverse. Returns `None` when the constant term is zero.
    pub fn recip(&self) -> Option<Self> {
        let a0 = self.c[0];
        if a0 == ZERO {
            return None;
        }
        let inv0 = a0.inv();
        let mut out = Self::constant(inv0, self.order);
        for k in 1..=self.order {
            let mut s = ZERO;
            for j in 1..=k {
                s += self.c[j] * out.c[k - j];
            }
            out.c[k] = -s * inv0;
        }
        Some(out)
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.recip().map(|r| *self * r)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut result = Self::constant(ONE, self.order);
        let mut base = *self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        result
    }

    /// Composes an outer series with `self`.
    ///
    /// `outer[k]` are the Taylor coefficients of the outer function at
    /// `self.value()`. Only the non-constant part of `self` is substituted.
    pub fn compose(&self, outer: &[Complex64]) -> Self {
        let order = self.order;
        let mut t = *self;
        t.c[0] = ZERO;
        let mut acc = Self::constant(outer.get(order).copied().unwrap_or(ZERO), order);
        for k in (0..order).rev() {
            acc = acc * t;
            acc.c[0] += outer.get(k).copied().unwrap_or(ZERO);
        }
        acc
    }
}

impl Add for Taylor {
    type Output = Taylor;
    fn add(self, rhs: Taylor) -> Taylor {
        self.zip(&rhs, |a, b| a + b)
    }
}

impl Sub for Taylor {
    type Output = Taylor;
    fn sub(self, rhs: Taylor) -> Taylor {
        self.zip(&rhs, |a, b| a - b)
    }
}

impl Neg for Taylor {
    type Output = Taylor;
    fn neg(self) -> Taylor {
        self.scale(-ONE)
    }
}

impl Mul for Taylor {
    type Output = Taylor;
    fn mul(self, rhs: Taylor) -> Taylor {
        let order = self.order.min(rhs.order);
        let mut out = Taylor::constant(ZERO, order);
        for k in 0..=order {
            let mut s = ZERO;
            for j in 0..=k {
                s += self.c[j] * rhs.c[k - j];
            }
            out.c[k] = s;
        }
        out
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, v| acc * v as f64)
}

/// Taylor coefficients of `exp` at `u0`, up to `order`.
pub(crate) fn exp_series(u0: Complex64, order: usize) -> Vec<Complex64> {
    let e = u0.exp();
    (0..=order).map(|k| e / factorial(k)).collect()
}

/// Taylor coefficients of `sin` (shift 0) or `cos` (shift 1) at `u0`.
pub(crate) fn trig_series(u0: Complex64, order: usize, shift: usize) -> Vec<Complex64> {
    let (s, c) = (u0.sin(), u0.cos());
    // derivative cycle of sin: sin, cos, -sin, -cos
    let cycle = [s, c, -s, -c];
    (0..=order)
        .map(|k| cycle[(k + shift) % 4] / factorial(k))
        .collect()
}

/// Result of evaluating a function with derivatives at a point.
///
/// When `pole` is set the series describes `1/f`, which is finite there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub series: Taylor,
    pub pole: bool,
}

impl Jet {
    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.series.coeff(k)
    }

    /// Spherical derivative `|f'| / (1 + |f|^2)`, identical on either chart.
    pub fn spherical_derivative(&self) -> f64 {
        let v = self.series.value();
        let d = self.series.coeff(1);
        d.norm() / (1.0 + v.norm_sqr())
    }
}
