//! Hypothesis profiles `(A, B, C)`, the exact criterion sum, and witness
//! families for profiles whose sum does not exceed 2.

use crate::exact::{ExactValue, GaussRat};
use crate::expr::{Expr, FunctionHandle};
use crate::specialfn::{params_from_roots, WeierstrassParams};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// One entry of `C`: every `value`-point has multiplicity at least `m`, or
/// derivatives `1..m` bounded by `M` when the value is finite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CEntry {
    pub value: ExactValue,
    pub m: u32,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
}

impl CEntry {
    pub fn new(value: ExactValue, m: u32, bound: Option<f64>) -> Self {
        Self { value, m, bound }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionProfile {
    #[serde(rename = "A", default)]
    pub a: Vec<ExactValue>,
    #[serde(rename = "B", default)]
    pub b: Vec<ExactValue>,
    #[serde(rename = "C", default)]
    pub c: Vec<CEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetName {
    A,
    B,
    C,
}

impl fmt::Display for SetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetName::A => "A",
            SetName::B => "B",
            SetName::C => "C",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Duplicate { set: SetName, value: ExactValue },
    NotDisjoint { value: ExactValue, first: SetName, second: SetName },
    BContainsZero,
    BContainsInfinity,
    MultiplicityTooSmall { value: ExactValue, m: u32 },
    MissingBound { value: ExactValue },
    InvalidBound { value: ExactValue, bound: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Duplicate { set, value } => write!(f, "duplicate value {value} in {set}"),
            Violation::NotDisjoint { value, first, second } => {
                write!(f, "disjointness: {value} appears in both {first} and {second}")
            }
            Violation::BContainsZero => f.write_str("B must exclude 0"),
            Violation::BContainsInfinity => f.write_str("B must exclude inf"),
            Violation::MultiplicityTooSmall { value, m } => {
                write!(f, "m must be at least 2 (value {value} has m = {m})")
            }
            Violation::MissingBound { value } => write!(f, "M is required for finite value {value}"),
            Violation::InvalidBound { value, bound } => {
                write!(f, "M must be a finite nonnegative number (value {value} has M = {bound})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ProfileError {
    #[error("invalid profile: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("witness search requires a criterion sum of at most 2, found {0}")]
    SumAboveTwo(BigRational),
}

/// Every violated hypothesis; empty when the profile is well formed.
pub fn validate_profile(p: &ConditionProfile) -> Vec<Violation> {
    let mut out = Vec::new();
    let sets: [(SetName, Vec<&ExactValue>); 3] = [
        (SetName::A, p.a.iter().collect()),
        (SetName::B, p.b.iter().collect()),
        (SetName::C, p.c.iter().map(|e| &e.value).collect()),
    ];
    for (name, vals) in &sets {
        let mut reported: Vec<&ExactValue> = Vec::new();
        for (i, v) in vals.iter().enumerate() {
            if vals[..i].contains(v) && !reported.contains(v) {
                reported.push(v);
                out.push(Violation::Duplicate {
                    set: *name,
                    value: (*v).clone(),
                });
            }
        }
    }
    for i in 0..3 {
        for j in i + 1..3 {
            let mut seen: Vec<&ExactValue> = Vec::new();
            for v in &sets[i].1 {
                if sets[j].1.contains(v) && !seen.contains(v) {
                    seen.push(v);
                    out.push(Violation::NotDisjoint {
                        value: (*v).clone(),
                        first: sets[i].0,
                        second: sets[j].0,
                    });
                }
            }
        }
    }
    if p.b.iter().any(ExactValue::is_zero) {
        out.push(Violation::BContainsZero);
    }
    if p.b.iter().any(ExactValue::is_infinite) {
        out.push(Violation::BContainsInfinity);
    }
    for e in &p.c {
        if e.m < 2 {
            out.push(Violation::MultiplicityTooSmall {
                value: e.value.clone(),
                m: e.m,
            });
        }
        match e.bound {
            None if !e.value.is_infinite() => out.push(Violation::MissingBound { value: e.value.clone() }),
            Some(b) if !(b.is_finite() && b >= 0.0) => out.push(Violation::InvalidBound {
                value: e.value.clone(),
                bound: b,
            }),
            _ => {}
        }
    }
    out
}

fn validated(p: &ConditionProfile) -> Result<(), ProfileError> {
    let v = validate_profile(p);
    if v.is_empty() {
        Ok(())
    } else {
        Err(ProfileError::Invalid(v))
    }
}

/// `n + s + Σ (1 - 1/m_j)` in exact arithmetic.
pub fn criterion_sum(p: &ConditionProfile) -> Result<BigRational, ProfileError> {
    validated(p)?;
    Ok(raw_sum(p))
}

fn raw_sum(p: &ConditionProfile) -> BigRational {
    let one = BigRational::one();
    let mut s = BigRational::from_integer((p.a.len() + p.b.len()).into());
    for e in &p.c {
        s += &one - BigRational::new(1.into(), e.m.into());
    }
    s
}

fn two() -> BigRational {
    BigRational::from_integer(2.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Normal,
    Inconclusive,
}

fn rational_string<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionVerdict {
    #[serde(serialize_with = "rational_string")]
    pub sum: BigRational,
    pub verdict: Verdict,
    pub witness: Option<WitnessSpec>,
    /// Inconclusive, but no registered family realizes the profile.
    pub not_covered: bool,
}

/// `Normal` exactly when the sum exceeds 2.
pub fn verdict_for_sum(sum: &BigRational) -> Verdict {
    if *sum > two() {
        Verdict::Normal
    } else {
        Verdict::Inconclusive
    }
}

pub fn decide(p: &ConditionProfile) -> Result<CriterionVerdict, ProfileError> {
    let sum = criterion_sum(p)?;
    if verdict_for_sum(&sum) == Verdict::Normal {
        return Ok(CriterionVerdict {
            sum,
            verdict: Verdict::Normal,
            witness: None,
            not_covered: false,
        });
    }
    let witness = witness_for_gap(p)?;
    Ok(CriterionVerdict {
        sum,
        verdict: Verdict::Inconclusive,
        not_covered: witness.is_none(),
        witness,
    })
}

/// `z ↦ (a z + b) / (c z + d)` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mobius {
    pub a: GaussRat,
    pub b: GaussRat,
    pub c: GaussRat,
    pub d: GaussRat,
}

impl Mobius {
    pub fn identity() -> Self {
        Self::new([GaussRat::one(), GaussRat::zero(), GaussRat::zero(), GaussRat::one()])
    }

    fn new([a, b, c, d]: [GaussRat; 4]) -> Self {
        Self { a, b, c, d }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn determinant(&self) -> GaussRat {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    /// Projective normalization: `d = 1` when possible, else `c = 1`.
    fn normalized(self) -> Self {
        let s = if !self.d.is_zero() { self.d.clone() } else { self.c.clone() };
        let inv = s.inv().expect("nondegenerate matrix");
        Self::new([&self.a * &inv, &self.b * &inv, &self.c * &inv, &self.d * &inv])
    }

    pub fn inverse(&self) -> Self {
        Self::new([self.d.clone(), -&self.b, -&self.c, self.a.clone()]).normalized()
    }

    /// `self ∘ other`.
    pub fn compose(&self, o: &Self) -> Self {
        Self::new([
            &(&self.a * &o.a) + &(&self.b * &o.c),
            &(&self.a * &o.b) + &(&self.b * &o.d),
            &(&self.c * &o.a) + &(&self.d * &o.c),
            &(&self.c * &o.b) + &(&self.d * &o.d),
        ])
        .normalized()
    }

    pub fn apply(&self, z: &ExactValue) -> ExactValue {
        let (num, den) = match z {
            ExactValue::Infinity => (self.a.clone(), self.c.clone()),
            ExactValue::Finite(z) => (&(&self.a * z) + &self.b, &(&self.c * z) + &self.d),
        };
        match den.inv() {
            Some(inv) => ExactValue::Finite(&num * &inv),
            None => ExactValue::Infinity,
        }
    }

    /// The map sending `z1, z2, z3` to `0, 1, ∞`.
    fn to_standard(z: [&ExactValue; 3]) -> Self {
        use ExactValue::*;
        let o = GaussRat::one;
        let zero = GaussRat::zero;
        match z {
            [Infinity, Finite(z2), Finite(z3)] => Self::new([zero(), z2 - z3, o(), -z3]),
            [Finite(z1), Infinity, Finite(z3)] => Self::new([o(), -z1, o(), -z3]),
            [Finite(z1), Finite(z2), Infinity] => Self::new([o(), -z1, zero(), z2 - z1]),
            [Finite(z1), Finite(z2), Finite(z3)] => {
                let (p, q) = (z2 - z3, z2 - z1);
                Self::new([p.clone(), -&(z1 * &p), q.clone(), -&(z3 * &q)])
            }
            _ => panic!("points must be distinct"),
        }
    }

    /// The unique map with `from[k] ↦ to[k]`; both triples must be distinct.
    pub fn from_three_points(from: [&ExactValue; 3], to: [&ExactValue; 3]) -> Self {
        Self::to_standard(to).inverse().compose(&Self::to_standard(from))
    }

    pub fn to_complex(&self) -> [Complex64; 4] {
        [&self.a, &self.b, &self.c, &self.d].map(GaussRat::to_complex)
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}; {}, {}]", self.a, self.b, self.c, self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseFamily {
    #[serde(rename = "EXP3")]
    Exp3,
    #[serde(rename = "SIN")]
    Sin,
    #[serde(rename = "WP")]
    Wp,
    #[serde(rename = "WP2")]
    Wp2,
    #[serde(rename = "WPP")]
    Wpp,
    #[serde(rename = "WPP2")]
    Wpp2,
    #[serde(rename = "LAHIRI42")]
    Lahiri42,
    #[serde(rename = "RECIP43")]
    Recip43,
}

/// Bases tried by the witness search, in order.
pub const WITNESS_ORDER: [BaseFamily; 6] = [
    BaseFamily::Sin,
    BaseFamily::Exp3,
    BaseFamily::Wp,
    BaseFamily::Wpp,
    BaseFamily::Wp2,
    BaseFamily::Wpp2,
];

impl fmt::Display for BaseFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseFamily::Exp3 => "EXP3",
            BaseFamily::Sin => "SIN",
            BaseFamily::Wp => "WP",
            BaseFamily::Wp2 => "WP2",
            BaseFamily::Wpp => "WPP",
            BaseFamily::Wpp2 => "WPP2",
            BaseFamily::Lahiri42 => "LAHIRI42",
            BaseFamily::Recip43 => "RECIP43",
        })
    }
}

/// Distinguished sphere points of a translation-family base.
#[derive(Clone, Debug, PartialEq)]
pub struct BasePoints {
    pub omitted: Vec<ExactValue>,
    /// `(value, k)`: every value-point has multiplicity exactly `k`.
    pub genuine: Vec<(ExactValue, u32)>,
}

/// Default second root `b` in `(℘')² = 4℘(℘ - 1)(℘ - b)`.
pub const WP_DEFAULT_B: i64 = -1;

fn wp_roots(b: &GaussRat) -> Arc<WeierstrassParams> {
    Arc::new(params_from_roots(Complex64::new(1.0, 0.0), b.to_complex()).expect("distinct nonzero roots"))
}

/// `(℘')² = 4℘³ + 1`.
fn equianharmonic() -> Arc<WeierstrassParams> {
    Arc::new(WeierstrassParams::new(Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)).expect("nondegenerate"))
}

fn exp_z() -> Expr {
    Expr::Exp(Box::new(Expr::Var))
}

impl BaseFamily {
    /// `None` for the sequence families, which are not translation families.
    pub fn points(self, wp_b: &GaussRat) -> Option<BasePoints> {
        let v = ExactValue::int;
        let inf = ExactValue::Infinity;
        Some(match self {
            BaseFamily::Sin => BasePoints {
                omitted: vec![inf],
                genuine: vec![(v(1), 2), (v(-1), 2)],
            },
            BaseFamily::Exp3 => BasePoints {
                omitted: vec![inf, v(0)],
                genuine: vec![],
            },
            BaseFamily::Wp => BasePoints {
                omitted: vec![],
                genuine: vec![(inf, 2), (v(0), 2), (v(1), 2), (ExactValue::Finite(wp_b.clone()), 2)],
            },
            BaseFamily::Wpp => BasePoints {
                omitted: vec![],
                genuine: vec![(inf, 3), (v(1), 3), (v(-1), 3)],
            },
            BaseFamily::Wp2 => BasePoints {
                omitted: vec![],
                genuine: vec![(inf, 4), (v(0), 4), (v(1), 2)],
            },
            BaseFamily::Wpp2 => BasePoints {
                omitted: vec![],
                genuine: vec![(inf, 6), (v(0), 2), (v(1), 3)],
            },
            BaseFamily::Lahiri42 | BaseFamily::Recip43 => return None,
        })
    }

    /// The base function `h`; `None` for the sequence families.
    pub fn function(self, wp_b: &GaussRat) -> Option<FunctionHandle> {
        let e = match self {
            BaseFamily::Sin => Expr::Sin(Box::new(exp_z())),
            BaseFamily::Exp3 => Expr::Exp(Box::new(Expr::Pow(Box::new(Expr::Var), 3))),
            BaseFamily::Wp => Expr::Wp(wp_roots(wp_b), Box::new(exp_z())),
            BaseFamily::Wp2 => Expr::Pow(
                Box::new(Expr::Wp(wp_roots(&GaussRat::from_int(-1)), Box::new(exp_z()))),
                2,
            ),
            BaseFamily::Wpp => Expr::WpPrime(equianharmonic(), Box::new(exp_z())),
            BaseFamily::Wpp2 => Expr::Pow(Box::new(Expr::WpPrime(equianharmonic(), Box::new(exp_z()))), 2),
            BaseFamily::Lahiri42 | BaseFamily::Recip43 => return None,
        };
        Some(FunctionHandle::from_expr(e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "k", rename_all = "snake_case")]
pub enum Guarantee {
    Omitted,
    Multiplicity(u32),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlotAssignment {
    pub set: SetName,
    pub value: ExactValue,
    /// Required multiplicity for `C` slots.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    pub base_point: ExactValue,
    pub guarantee: Guarantee,
}

impl SlotAssignment {
    pub fn is_dominated(&self) -> bool {
        match (self.set, &self.guarantee) {
            (_, Guarantee::Omitted) => true,
            (SetName::C, Guarantee::Multiplicity(k)) => self.m.is_some_and(|m| *k >= m),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessSpec {
    pub base: BaseFamily,
    /// The root `b` of the `WP` lattice; unused by other bases.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wp_b: Option<GaussRat>,
    pub mobius: Mobius,
    pub assignment: Vec<SlotAssignment>,
}

impl WitnessSpec {
    fn wp_b(&self) -> GaussRat {
        self.wp_b.clone().unwrap_or_else(|| GaussRat::from_int(WP_DEFAULT_B))
    }

    /// Structural soundness: nondegenerate map, injective assignment, every
    /// guarantee dominating its slot, and each base point mapped to its value.
    pub fn check(&self) -> bool {
        let Some(points) = self.base.points(&self.wp_b()) else {
            return false;
        };
        if self.mobius.determinant().is_zero() {
            return false;
        }
        let distinct = self
            .assignment
            .iter()
            .enumerate()
            .all(|(i, s)| self.assignment[..i].iter().all(|t| t.base_point != s.base_point));
        distinct
            && self.assignment.iter().all(|s| {
                let listed = match &s.guarantee {
                    Guarantee::Omitted => points.omitted.contains(&s.base_point),
                    Guarantee::Multiplicity(k) => points.genuine.contains(&(s.base_point.clone(), *k)),
                };
                listed && s.is_dominated() && self.mobius.apply(&s.base_point) == s.value
            })
    }

    /// `T ∘ h` for the base `h` and Möbius map `T`.
    pub fn instantiate(&self) -> FunctionHandle {
        let h = self.base.function(&self.wp_b()).expect("translation-family base");
        if self.mobius.is_identity() {
            h
        } else {
            FunctionHandle::from_expr(Expr::Mobius(self.mobius.to_complex(), Box::new(h.expr().clone())))
        }
    }
}

struct Slot<'a> {
    set: SetName,
    value: &'a ExactValue,
    m: Option<u32>,
}

/// Sphere points used to complete a partial Möbius specification.
fn padding_points() -> Vec<ExactValue> {
    let mut v = vec![ExactValue::Infinity, ExactValue::int(0), ExactValue::int(1), ExactValue::int(-1)];
    v.extend((2..8).flat_map(|k| [ExactValue::int(k), ExactValue::int(-k)]));
    v.push(ExactValue::Finite(GaussRat::i()));
    v
}

fn try_base(base: BaseFamily, slots: &[Slot<'_>]) -> Option<WitnessSpec> {
    let default_b = GaussRat::from_int(WP_DEFAULT_B);
    let points = base.points(&default_b)?;
    // omitted points go to A, then B, then C by descending m
    let mut order: Vec<usize> = (0..slots.len()).collect();
    order.sort_by_key(|&i| {
        let s = &slots[i];
        let rank = match s.set {
            SetName::A => 0,
            SetName::B => 1,
            SetName::C => 2,
        };
        (rank, std::cmp::Reverse(s.m.unwrap_or(0)))
    });
    let mut picks: Vec<(usize, ExactValue, Guarantee)> = Vec::new();
    let mut omitted = points.omitted.iter();
    let mut rest = Vec::new();
    for &i in &order {
        match omitted.next() {
            Some(p) => picks.push((i, p.clone(), Guarantee::Omitted)),
            None => rest.push(i),
        }
    }
    if rest.iter().any(|&i| slots[i].set != SetName::C) {
        return None;
    }
    let mut genuine = points.genuine.clone();
    genuine.sort_by_key(|(_, k)| std::cmp::Reverse(*k));
    if rest.len() > genuine.len() {
        return None;
    }
    for (&i, (p, k)) in rest.iter().zip(&genuine) {
        if *k < slots[i].m.unwrap_or(u32::MAX) {
            return None;
        }
        picks.push((i, p.clone(), Guarantee::Multiplicity(*k)));
    }
    picks.sort_by_key(|(i, _, _)| *i);

    let mut wp_b = None;
    let mobius = if picks.len() <= 3 {
        let mut from: Vec<ExactValue> = picks.iter().map(|(_, p, _)| p.clone()).collect();
        let mut to: Vec<ExactValue> = picks.iter().map(|(i, _, _)| slots[*i].value.clone()).collect();
        for p in padding_points() {
            if from.len() == 3 {
                break;
            }
            if !from.contains(&p) && !to.contains(&p) {
                from.push(p.clone());
                to.push(p);
            }
        }
        Mobius::from_three_points([&from[0], &from[1], &from[2]], [&to[0], &to[1], &to[2]])
    } else {
        // four genuine points: only the free WP root can absorb the cross-ratio
        if base != BaseFamily::Wp || picks.len() != 4 {
            return None;
        }
        let free = ExactValue::Finite(default_b.clone());
        let fixed: Vec<&(usize, ExactValue, Guarantee)> = picks.iter().filter(|(_, p, _)| *p != free).collect();
        let t = Mobius::from_three_points(
            [&fixed[0].1, &fixed[1].1, &fixed[2].1],
            [slots[fixed[0].0].value, slots[fixed[1].0].value, slots[fixed[2].0].value],
        );
        let slot_of_free = picks.iter().find(|(_, p, _)| *p == free).expect("four points").0;
        let b = t.inverse().apply(slots[slot_of_free].value);
        let b = b.as_finite().expect("distinct targets keep b finite").clone();
        for pick in picks.iter_mut() {
            if pick.1 == free {
                pick.1 = ExactValue::Finite(b.clone());
            }
        }
        wp_b = Some(b);
        t
    };
    let assignment = picks
        .into_iter()
        .map(|(i, base_point, guarantee)| SlotAssignment {
            set: slots[i].set,
            value: slots[i].value.clone(),
            m: slots[i].m,
            base_point,
            guarantee,
        })
        .collect();
    let spec = WitnessSpec {
        base,
        wp_b,
        mobius,
        assignment,
    };
    debug_assert!(spec.check());
    Some(spec)
}

/// A registered non-normal translation family satisfying the profile, or
/// `None` when no base dominates it.
pub fn witness_for_gap(p: &ConditionProfile) -> Result<Option<WitnessSpec>, ProfileError> {
    validated(p)?;
    let sum = raw_sum(p);
    if sum > two() {
        return Err(ProfileError::SumAboveTwo(sum));
    }
    let mut slots: Vec<Slot<'_>> = Vec::new();
    slots.extend(p.a.iter().map(|v| Slot { set: SetName::A, value: v, m: None }));
    slots.extend(p.b.iter().map(|v| Slot { set: SetName::B, value: v, m: None }));
    slots.extend(p.c.iter().map(|e| Slot {
        set: SetName::C,
        value: &e.value,
        m: Some(e.m),
    }));
    Ok(WITNESS_ORDER.iter().find_map(|&b| try_base(b, &slots)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> ExactValue {
        s.parse().unwrap()
    }

    #[test]
    fn three_point_maps() {
        let pts = [v("inf"), v("1"), v("-1")];
        let to = [v("2"), v("1"), v("3")];
        let t = Mobius::from_three_points([&pts[0], &pts[1], &pts[2]], [&to[0], &to[1], &to[2]]);
        for (a, b) in pts.iter().zip(&to) {
            assert_eq!(&t.apply(a), b);
        }
        // 2 - 1/w
        assert_eq!(t, Mobius::new([v("2"), v("-1"), v("1"), v("0")].map(|x| x.as_finite().unwrap().clone())));
        let id = Mobius::from_three_points([&pts[0], &pts[1], &pts[2]], [&pts[0], &pts[1], &pts[2]]);
        assert!(id.is_identity());
        let w = Mobius::from_three_points([&v("0"), &v("1/2+i"), &v("-3")], [&v("inf"), &v("7"), &v("i")]);
        assert_eq!(w.apply(&v("0")), v("inf"));
        assert_eq!(w.apply(&v("1/2+i")), v("7"));
        assert_eq!(w.apply(&v("-3")), v("i"));
        assert_eq!(w.inverse().apply(&v("7")), v("1/2+i"));
    }
}
