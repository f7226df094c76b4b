//! Points of the Riemann sphere and the chordal metric.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Magnitude above which a value is treated as a pole and the reciprocal
/// chart is used instead.
pub const POLE_THRESHOLD: f64 = 1e8;

/// Serialized as `"inf"` or as a `[re, im]` pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "Repr", try_from = "Repr")]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtendedComplex {
    /// Builds a finite point. Non-finite components collapse to `Infinity`
    /// only when they are infinite; NaN yields `None`.
    pub fn from_complex(z: Complex64) -> Option<Self> {
        if z.re.is_nan() || z.im.is_nan() {
            None
        } else if z.re.is_infinite() || z.im.is_infinite() {
            Some(Self::Infinity)
        } else {
            Some(Self::Finite(z))
        }
    }

    pub fn finite(re: f64, im: f64) -> Self {
        Self::from_complex(Complex64::new(re, im)).expect("NaN component")
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match self {
            Self::Finite(z) => Some(*z),
            Self::Infinity => None,
        }
    }

    /// Homogeneous coordinates `[p : q]` with `|p|^2 + |q|^2 = 1`.
    pub fn homogeneous(&self) -> (Complex64, Complex64) {
        match self {
            Self::Infinity => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            Self::Finite(z) => {
                let n = (1.0 + z.norm_sqr()).sqrt();
                if n.is_finite() {
                    (z / n, Complex64::new(1.0 / n, 0.0))
                } else {
                    // |z| beyond sqrt(f64::MAX): rescale before normalizing
                    let m = z.norm();
                    (z / m, Complex64::new(1.0 / m, 0.0))
                }
            }
        }
    }

    pub fn chordal(&self, other: &Self) -> f64 {
        chordal_homogeneous(self.homogeneous(), other.homogeneous())
    }

    pub fn recip(&self) -> Self {
        match self {
            Self::Infinity => Self::Finite(Complex64::new(0.0, 0.0)),
            Self::Finite(z) if *z == Complex64::new(0.0, 0.0) => Self::Infinity,
            Self::Finite(z) => Self::from_complex(z.inv()).unwrap_or(Self::Infinity),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Pair([f64; 2]),
    Tag(String),
}

impl From<ExtendedComplex> for Repr {
    fn from(v: ExtendedComplex) -> Self {
        match v {
            ExtendedComplex::Finite(z) => Repr::Pair([z.re, z.im]),
            ExtendedComplex::Infinity => Repr::Tag("inf".into()),
        }
    }
}

impl TryFrom<Repr> for ExtendedComplex {
    type Error = String;
    fn try_from(r: Repr) -> Result<Self, String> {
        match r {
            Repr::Pair([re, im]) => Self::from_complex(Complex64::new(re, im)).ok_or_else(|| "NaN component".into()),
            Repr::Tag(t) if t == "inf" => Ok(Self::Infinity),
            Repr::Tag(t) => Err(format!("expected \"inf\" or [re, im], found {t:?}")),
        }
    }
}

impl From<Complex64> for ExtendedComplex {
    fn from(z: Complex64) -> Self {
        Self::from_complex(z).expect("NaN component")
    }
}

impl fmt::Display for ExtendedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Infinity => write!(f, "inf"),
            Self::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}

/// Chordal distance between two points given in homogeneous coordinates.
pub fn chordal_homogeneous(a: (Complex64, Complex64), b: (Complex64, Complex64)) -> f64 {
    let na = (a.0.norm_sqr() + a.1.norm_sqr()).sqrt();
    let nb = (b.0.norm_sqr() + b.1.norm_sqr()).sqrt();
    (a.0 * b.1 - a.1 * b.0).norm() / (na * nb)
}

/// Chordal distance between two finite points.
pub fn chordal(z: Complex64, w: Complex64) -> f64 {
    ExtendedComplex::Finite(z).chordal(&ExtendedComplex::Finite(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chordal_known_values() {
        let zero = ExtendedComplex::finite(0.0, 0.0);
        let one = ExtendedComplex::finite(1.0, 0.0);
        assert!((zero.chordal(&ExtendedComplex::Infinity) - 1.0).abs() < 1e-15);
        assert!((one.chordal(&ExtendedComplex::Infinity) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((zero.chordal(&one) - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(one.chordal(&one), 0.0);
    }

    #[test]
    fn chordal_is_invariant_under_inversion() {
        let a = ExtendedComplex::finite(0.3, -2.0);
        let b = ExtendedComplex::finite(-1.5, 0.25);
        let d1 = a.chordal(&b);
        let d2 = a.recip().chordal(&b.recip());
        assert!((d1 - d2).abs() < 1e-14);
    }

    #[test]
    fn nan_is_rejected() {
        assert!(ExtendedComplex::from_complex(Complex64::new(f64::NAN, 0.0)).is_none());
        assert_eq!(
            ExtendedComplex::from_complex(Complex64::new(f64::INFINITY, 0.0)),
            Some(ExtendedComplex::Infinity)
        );
    }
}
