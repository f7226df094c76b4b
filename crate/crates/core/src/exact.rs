//! Exact Gaussian rationals and points of the sphere over them.
//!
//! Interchange strings look like `"3"`, `"-1/2"`, `"2i"`, `"1/2-3/4i"` or
//! `"inf"`. Each integer in a string must fit in 64 bits.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactParseError {
    #[error("empty value")]
    Empty,
    #[error("malformed exact value `{0}`")]
    Malformed(String),
    #[error("integer `{0}` does not fit in 64 bits")]
    Overflow(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(v: i64) -> Self {
        Self::new(BigRational::from_integer(v.into()), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
        )
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        Self::new(
            BigRational::new(re.0.into(), re.1.into()),
            BigRational::new(im.0.into(), im.1.into()),
        )
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Best approximation with denominators up to `max_den`, accepted only if
    /// both components lie within `tol` of the input.
    pub fn approximate(z: Complex64, max_den: u64, tol: f64) -> Option<Self> {
        let re = best_rational(z.re, max_den)?;
        let im = best_rational(z.im, max_den)?;
        let g = Self::new(re, im);
        let back = g.to_complex();
        if (back.re - z.re).abs() <= tol && (back.im - z.im).abs() <= tol {
            Some(g)
        } else {
            None
        }
    }

    /// True when both components fit the 64-bit interchange format.
    pub fn fits_i64(&self) -> bool {
        [&self.re, &self.im]
            .iter()
            .all(|r| r.numer().to_i64().is_some() && r.denom().to_i64().is_some())
    }
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back to a scaled division for huge numerators and denominators
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Continued-fraction convergent nearest to `x` with denominator `<= max_den`.
fn best_rational(x: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut v = x;
    let mut best = None;
    for _ in 0..64 {
        let a = v.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        best = Some(BigRational::new(h2.clone(), k2.clone()));
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
        let frac = v - a;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
        if !v.is_finite() || v.abs() > 1e15 {
            break;
        }
    }
    best
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Div for &GaussRat {
    type Output = GaussRat;
    /// Panics on division by zero.
    fn div(self, o: &GaussRat) -> GaussRat {
        self * &o.inv().expect("division by zero Gaussian rational")
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-&self.re, -&self.im)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussRat {
            type Output = GaussRat;
            fn $m(self, o: GaussRat) -> GaussRat {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rat(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}i", fmt_rat(&self.im));
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", fmt_rat(&self.re), sign, fmt_rat(&self.im.abs()))
    }
}

fn parse_i64(s: &str, whole: &str) -> Result<BigInt, ExactParseError> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ExactParseError::Malformed(whole.to_string()));
    }
    s.parse::<i64>()
        .map(BigInt::from)
        .map_err(|_| ExactParseError::Overflow(s.to_string()))
}

fn parse_rational(s: &str, whole: &str) -> Result<BigRational, ExactParseError> {
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_i64(s, whole)?)),
        Some((n, d)) => {
            if d.starts_with(['+', '-']) {
                return Err(ExactParseError::Malformed(whole.to_string()));
            }
            let n = parse_i64(n, whole)?;
            let d = parse_i64(d, whole)?;
            if d.is_zero() {
                return Err(ExactParseError::ZeroDenominator(whole.to_string()));
            }
            Ok(BigRational::new(n, d))
        }
    }
}

impl FromStr for GaussRat {
    type Err = ExactParseError;
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(ExactParseError::Empty);
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Self::new(parse_rational(&s, text)?, BigRational::zero()));
        };
        // split at the last sign that is not leading
        let split = body
            .char_indices()
            .filter(|&(idx, ch)| idx > 0 && (ch == '+' || ch == '-'))
            .map(|(idx, _)| idx)
            .next_back();
        let (re_part, im_part) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let re = if re_part.is_empty() {
            BigRational::zero()
        } else {
            parse_rational(re_part, text)?
        };
        let im = match im_part {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            p => parse_rational(p, text)?,
        };
        Ok(Self::new(re, im))
    }
}

/// A point of `ℂ ∪ {∞}` with exact finite coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactValue {
    Finite(GaussRat),
    Infinity,
}

impl ExactValue {
    pub fn int(v: i64) -> Self {
        Self::Finite(GaussRat::from_int(v))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::Finite(GaussRat::from_ratio(n, d))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Finite(g) if g.is_zero())
    }

    pub fn as_finite(&self) -> Option<&GaussRat> {
        match self {
            Self::Finite(g) => Some(g),
            Self::Infinity => None,
        }
    }

    pub fn to_extended(&self) -> crate::ExtendedComplex {
        match self {
            Self::Finite(g) => crate::ExtendedComplex::Finite(g.to_complex()),
            Self::Infinity => crate::ExtendedComplex::Infinity,
        }
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(g) => g.fmt(f),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ExactValue {
    type Err = ExactParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "inf" {
            Ok(Self::Infinity)
        } else {
            s.parse().map(Self::Finite)
        }
    }
}

impl Serialize for ExactValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for GaussRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
