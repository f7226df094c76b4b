//! Exact value distribution of rational functions.
//!
//! Multiplicity data comes from squarefree decompositions over the Gaussian
//! rationals, so distinct-point counts are exact without factoring. Critical
//! values are located numerically and then confirmed exactly whenever they
//! round to a Gaussian rational.

use crate::exact::{ExactValue, GaussRat};
use crate::extended::{chordal_homogeneous, ExtendedComplex};
use crate::poly::GPolynomial;
use crate::roots::roots;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-8;
/// Largest denominator tried when snapping a numeric critical value.
const SNAP_MAX_DEN: u64 = 10_000;
/// Chordal spread attributed to rounding; wider unconfirmed clusters are ambiguous.
const ROUNDOFF_SPREAD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RatFunError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("function is constant after cancellation")]
    Constant,
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("critical values cannot be separated at tolerance {tol:e} (cluster diameter {diameter:e}); retry with a smaller tolerance or check exact candidates")]
    ClusteringAmbiguity { tol: f64, diameter: f64 },
    #[error("mode c requires a1")]
    MissingA1,
    #[error("a1 = {value} must have exactly one finite preimage, found {found}")]
    Precondition { value: ExactValue, found: usize },
}

/// `num / den` in lowest terms with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(try_from = "RawRational")]
pub struct RationalFunction {
    num: GPolynomial,
    den: GPolynomial,
}

#[derive(Deserialize)]
struct RawRational {
    num: Vec<GaussRat>,
    den: Vec<GaussRat>,
}

impl TryFrom<RawRational> for RationalFunction {
    type Error = RatFunError;
    fn try_from(r: RawRational) -> Result<Self, RatFunError> {
        reduce(&GPolynomial::new(r.num), &GPolynomial::new(r.den))
    }
}

/// Cancels common factors and normalizes the denominator to be monic.
pub fn reduce(p: &GPolynomial, q: &GPolynomial) -> Result<RationalFunction, RatFunError> {
    if q.is_zero() {
        return Err(RatFunError::ZeroDenominator);
    }
    let g = p.gcd(q);
    let (mut num, mut den) = if p.is_zero() {
        (GPolynomial::zero(), GPolynomial::one())
    } else {
        (p.exact_div(&g), q.exact_div(&g))
    };
    let lead = den.leading().expect("nonzero").inv().expect("nonzero");
    num = num.scale(&lead);
    den = den.scale(&lead);
    if num.is_constant() && den.is_constant() {
        return Err(RatFunError::Constant);
    }
    Ok(RationalFunction { num, den })
}

/// Distinct-point counts for the preimage of one target value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreimageProfile {
    pub target: ExactValue,
    /// `(multiplicity, number of distinct finite points)` in increasing multiplicity.
    pub entries: Vec<(usize, usize)>,
    pub infinity_multiplicity: usize,
}

impl PreimageProfile {
    pub fn finite_points(&self) -> usize {
        self.entries.iter().map(|(_, n)| n).sum()
    }

    /// Distinct preimages on the sphere.
    pub fn sphere_points(&self) -> usize {
        self.finite_points() + usize::from(self.infinity_multiplicity > 0)
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|(m, n)| m * n).sum::<usize>() + self.infinity_multiplicity
    }

    pub fn min_multiplicity(&self) -> usize {
        let finite = self.entries.iter().map(|(m, _)| *m).min();
        let inf = (self.infinity_multiplicity > 0).then_some(self.infinity_multiplicity);
        finite.into_iter().chain(inf).min().expect("every value has a preimage on the sphere")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MinMultiplicity {
    /// No preimage in ℂ.
    Omitted,
    Min(usize),
}

/// A value on the sphere, exact when it is known to be a Gaussian rational.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphereValue {
    pub approx: ExtendedComplex,
    pub exact: Option<ExactValue>,
}

impl SphereValue {
    pub fn exact(v: ExactValue) -> Self {
        Self {
            approx: v.to_extended(),
            exact: Some(v),
        }
    }

    fn close_to(&self, other: &SphereValue, tol: f64) -> bool {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a == b,
            _ => self.approx.chordal(&other.approx) <= tol,
        }
    }
}

impl fmt::Display for SphereValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(v) => v.fmt(f),
            None => self.approx.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub point: ExtendedComplex,
    /// Local degree of `f` at the point.
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalValue {
    pub value: SphereValue,
    pub points: Vec<CriticalPoint>,
    /// `d - #f⁻¹(value)`.
    pub ramification: usize,
    /// Whether `ramification` was obtained from an exact preimage profile.
    pub confirmed_exact: bool,
    pub totally_ramified: bool,
    pub min_multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RiemannHurwitz {
    pub degree: usize,
    pub total_ramification: usize,
    pub expected: usize,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DefectMode {
    B,
    C,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RamifiedValue {
    pub value: SphereValue,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefectReport {
    pub mode: DefectMode,
    #[serde(rename = "U")]
    pub u: Vec<SphereValue>,
    #[serde(rename = "R")]
    pub r: Vec<RamifiedValue>,
    #[serde(serialize_with = "rational_string")]
    pub bound: BigRational,
    pub pass: bool,
}

fn rational_string<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

fn normalize(p: Complex64, q: Complex64) -> (Complex64, Complex64) {
    let n = p.norm().max(q.norm());
    if n > 0.0 && n.is_finite() {
        (p / n, q / n)
    } else {
        (p, q)
    }
}

fn pair_to_extended(p: Complex64, q: Complex64) -> ExtendedComplex {
    let (p, q) = normalize(p, q);
    if q == Complex64::new(0.0, 0.0) {
        ExtendedComplex::Infinity
    } else {
        ExtendedComplex::from_complex(p / q).unwrap_or(ExtendedComplex::Infinity)
    }
}

impl RationalFunction {
    pub fn num(&self) -> &GPolynomial {
        &self.num
    }

    pub fn den(&self) -> &GPolynomial {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }

    /// `f(z)` as a homogeneous pair `(num(z), den(z))`.
    pub fn eval_pair(&self, z: Complex64) -> (Complex64, Complex64) {
        (self.num.eval_complex(z), self.den.eval_complex(z))
    }

    pub fn eval(&self, z: Complex64) -> ExtendedComplex {
        let (p, q) = self.eval_pair(z);
        pair_to_extended(p, q)
    }

    pub fn eval_exact(&self, z: &GaussRat) -> ExactValue {
        let q = self.den.eval(z);
        match q.inv() {
            Some(qi) => ExactValue::Finite(&self.num.eval(z) * &qi),
            None => ExactValue::Infinity,
        }
    }

    pub fn value_at_infinity(&self) -> ExactValue {
        let (dn, dd) = (self.num.deg(), self.den.deg());
        if self.num.is_zero() || dn < dd {
            ExactValue::int(0)
        } else if dn > dd {
            ExactValue::Infinity
        } else {
            ExactValue::Finite(self.num.leading().expect("nonzero").clone())
        }
    }

    /// `num - c·den`.
    pub fn level_polynomial(&self, c: &GaussRat) -> GPolynomial {
        self.num.sub(&self.den.scale(c))
    }

    pub fn preimage_profile(&self, c: &ExactValue) -> PreimageProfile {
        let p = match c {
            ExactValue::Finite(g) => self.level_polynomial(g),
            ExactValue::Infinity => self.den.clone(),
        };
        PreimageProfile {
            target: c.clone(),
            entries: p.multiplicity_counts(),
            infinity_multiplicity: self.degree() - p.deg(),
        }
    }

    /// Values without a preimage in ℂ; at most `f(∞)`.
    pub fn omitted_values(&self) -> Vec<ExactValue> {
        let c = self.value_at_infinity();
        let omitted = match &c {
            ExactValue::Infinity => self.den.is_constant(),
            ExactValue::Finite(g) => self.level_polynomial(g).is_constant(),
        };
        if omitted {
            vec![c]
        } else {
            Vec::new()
        }
    }

    pub fn min_multiplicity(&self, c: &ExactValue) -> MinMultiplicity {
        let prof = self.preimage_profile(c);
        if prof.finite_points() == 0 {
            MinMultiplicity::Omitted
        } else {
            MinMultiplicity::Min(prof.min_multiplicity())
        }
    }

    /// Wronskian `num'·den - num·den'`. A finite point of local degree `e`,
    /// pole or not, is a root of order `e - 1`.
    pub fn wronskian(&self) -> GPolynomial {
        self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()))
    }

    fn critical_points(&self) -> Vec<(CriticalPoint, (Complex64, Complex64))> {
        let mut out = Vec::new();
        for (k, factor) in self.wronskian().squarefree().iter().enumerate() {
            if factor.deg() == 0 {
                continue;
            }
            for z in roots(&factor.to_complex()) {
                let (p, q) = self.eval_pair(z);
                out.push((
                    CriticalPoint {
                        point: ExtendedComplex::Finite(z),
                        multiplicity: k + 2,
                    },
                    normalize(p, q),
                ));
            }
        }
        let at_inf = self.value_at_infinity();
        let e_inf = self.preimage_profile(&at_inf).infinity_multiplicity;
        if e_inf >= 2 {
            out.push((
                CriticalPoint {
                    point: ExtendedComplex::Infinity,
                    multiplicity: e_inf,
                },
                at_inf.to_extended().homogeneous(),
            ));
        }
        out
    }

    fn snap(&self, v: ExtendedComplex, tol: f64) -> Option<ExactValue> {
        if v.chordal(&ExtendedComplex::Infinity) <= tol {
            return Some(ExactValue::Infinity);
        }
        let z = v.as_finite()?;
        let g = GaussRat::approximate(z, SNAP_MAX_DEN, tol * (1.0 + z.norm_sqr()))?;
        let c = ExactValue::Finite(g);
        (c.to_extended().chordal(&v) <= tol).then_some(c)
    }

    /// Critical values with their ramification `d - #f⁻¹(c)`.
    pub fn critical_values_numeric(&self, tol: f64) -> Result<Vec<CriticalValue>, RatFunError> {
        if !(tol > 0.0) {
            return Err(RatFunError::BadTolerance);
        }
        let pts = self.critical_points();
        let n = pts.len();
        // connected components at threshold tol, then reject wide components
        let mut comp: Vec<usize> = (0..n).collect();
        fn find(c: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while c[r] != r {
                r = c[r];
            }
            c[i] = r;
            r
        }
        for i in 0..n {
            for j in i + 1..n {
                if chordal_homogeneous(pts[i].1, pts[j].1) <= tol {
                    let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                    comp[a] = b;
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut root_of: Vec<Option<usize>> = vec![None; n];
        for i in 0..n {
            let r = find(&mut comp, i);
            match root_of[r] {
                Some(g) => groups[g].push(i),
                None => {
                    root_of[r] = Some(groups.len());
                    groups.push(vec![i]);
                }
            }
        }
        let d = self.degree();
        let mut out: Vec<CriticalValue> = Vec::new();
        for g in groups {
            let mut diameter = 0.0_f64;
            for (a, &i) in g.iter().enumerate() {
                for &j in &g[a + 1..] {
                    diameter = diameter.max(chordal_homogeneous(pts[i].1, pts[j].1));
                }
            }
            if diameter > tol {
                return Err(RatFunError::ClusteringAmbiguity { tol, diameter });
            }
            let (p, q) = pts[g[0]].1;
            let approx = pair_to_extended(p, q);
            let points: Vec<CriticalPoint> = g.iter().map(|&i| pts[i].0.clone()).collect();
            let numeric: usize = points.iter().map(|c| c.multiplicity - 1).sum();
            let mut value = SphereValue { approx, exact: None };
            let mut ramification = numeric;
            let mut confirmed_exact = false;
            let mut min_mult = None;
            if let Some(c) = self.snap(approx, tol) {
                let prof = self.preimage_profile(&c);
                let exact_ram = d - prof.sphere_points();
                if exact_ram > 0 {
                    ramification = exact_ram;
                    confirmed_exact = true;
                    min_mult = Some(prof.min_multiplicity());
                    value = SphereValue::exact(c);
                }
            }
            if !confirmed_exact && points.len() > 1 && diameter > ROUNDOFF_SPREAD {
                return Err(RatFunError::ClusteringAmbiguity { tol, diameter });
            }
            let covered: usize = points.iter().map(|c| c.multiplicity).sum();
            let totally_ramified = match min_mult {
                Some(m) => m >= 2,
                None => covered == d,
            };
            let min_multiplicity = min_mult.unwrap_or_else(|| {
                if covered == d {
                    points.iter().map(|c| c.multiplicity).min().unwrap_or(1)
                } else {
                    1
                }
            });
            // two numeric clusters snapping to one exact value describe the same fibre
            if let Some(prev) = out
                .iter_mut()
                .find(|cv| cv.value.exact.is_some() && cv.value.exact == value.exact)
            {
                prev.points.extend(points);
                continue;
            }
            out.push(CriticalValue {
                value,
                points,
                ramification,
                confirmed_exact,
                totally_ramified,
                min_multiplicity,
            });
        }
        Ok(out)
    }

    pub fn riemann_hurwitz_check(&self, tol: f64) -> Result<RiemannHurwitz, RatFunError> {
        let total = self
            .critical_values_numeric(tol)?
            .iter()
            .map(|c| c.ramification)
            .sum();
        let d = self.degree();
        Ok(RiemannHurwitz {
            degree: d,
            total_ramification: total,
            expected: 2 * d - 2,
            pass: total == 2 * d - 2,
        })
    }

    /// Checks `|U| + Σ (1 - 1/m_j) <= 2`, with `U` the omitted values (plus
    /// `a1` in mode `C`) and `R` the totally ramified values outside `U`.
    pub fn verify_defect_bound(
        &self,
        mode: DefectMode,
        a1: Option<&ExactValue>,
        candidates: &[ExactValue],
        tol: f64,
    ) -> Result<DefectReport, RatFunError> {
        let mut u: Vec<SphereValue> = self.omitted_values().into_iter().map(SphereValue::exact).collect();
        if mode == DefectMode::C {
            let a1 = a1.cloned().ok_or(RatFunError::MissingA1)?;
            let found = self.preimage_profile(&a1).finite_points();
            if found != 1 {
                return Err(RatFunError::Precondition { value: a1, found });
            }
            u.push(SphereValue::exact(a1));
        }
        let mut r: Vec<RamifiedValue> = Vec::new();
        let in_u = |v: &SphereValue, u: &[SphereValue]| u.iter().any(|w| w.close_to(v, tol));
        for c in candidates {
            let v = SphereValue::exact(c.clone());
            if in_u(&v, &u) || r.iter().any(|x| x.value.close_to(&v, tol)) {
                continue;
            }
            if let MinMultiplicity::Min(m) = self.min_multiplicity(c) {
                if m >= 2 {
                    r.push(RamifiedValue { value: v, m });
                }
            }
        }
        for cv in self.critical_values_numeric(tol)? {
            if !cv.totally_ramified || in_u(&cv.value, &u) || r.iter().any(|x| x.value.close_to(&cv.value, tol)) {
                continue;
            }
            r.push(RamifiedValue {
                value: cv.value,
                m: cv.min_multiplicity,
            });
        }
        let one = BigRational::one();
        let mut bound = BigRational::from_integer(u.len().into());
        for x in &r {
            bound += &one - BigRational::new(one.numer().clone(), x.m.into());
        }
        let pass = bound <= BigRational::from_integer(2.into());
        Ok(DefectReport {
            mode,
            u,
            r,
            bound,
            pass,
        })
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RationalFunction", 2)?;
        st.serialize_field("num", self.num.coeffs())?;
        st.serialize_field("den", self.den.coeffs())?;
        st.end()
    }
}
