//! Numeric spot checks of the normality hypotheses on a single function.

use super::level;
use crate::criterion::{ConditionProfile, SetName};
use crate::exact::ExactValue;
use crate::expr::FunctionHandle;
use crate::extended::ExtendedComplex;
use crate::jet::{Jet, MAX_ORDER};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

pub const MIN_SAMPLES: usize = 1_000;
/// Closest samples refined per target value.
const SEEDS_PER_VALUE: usize = 48;
const SEED_RADIUS: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Self {
        Self { center, radius }
    }

    fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbeOptions {
    /// Chordal radius of a near-level neighbourhood.
    pub delta: f64,
    /// Absolute tolerance on derivative conditions.
    pub tol: f64,
    pub seed: u64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self {
            delta: super::DEFAULT_DELTA,
            tol: super::DEFAULT_TOL,
            seed: crate::sphere::DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeViolation {
    pub z: Complex64,
    pub measured: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub set: SetName,
    pub value: ExactValue,
    pub requirement: String,
    /// Refined level points examined.
    pub level_points: usize,
    /// Samples within `delta` of the value with no level point nearby.
    pub unresolved: usize,
    pub violations: Vec<ProbeViolation>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SetSharingReport {
    pub set: Vec<ExactValue>,
    pub requirement: String,
    pub level_points: usize,
    pub unresolved: usize,
    pub violations: Vec<ProbeViolation>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub region: Disk,
    pub samples: usize,
    pub failed_evaluations: usize,
    pub conditions: Vec<ConditionReport>,
    pub pass: bool,
}

struct Sampled {
    z: Complex64,
    jet: Option<Jet>,
}

impl Sampled {
    fn value(&self) -> Option<ExtendedComplex> {
        let j = self.jet.as_ref()?;
        let v = ExtendedComplex::Finite(j.series.value());
        Some(if j.pole { v.recip() } else { v })
    }
}

fn sample_disk(region: &Disk, n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = (PI * region.radius * region.radius / n as f64).sqrt();
    let side = (2.0 * region.radius / h).ceil() as usize;
    let mut pts = Vec::with_capacity(n);
    for i in 0..side {
        for j in 0..side {
            let (a, b): (f64, f64) = (rng.gen(), rng.gen());
            let z = Complex64::new(-region.radius + (i as f64 + a) * h, -region.radius + (j as f64 + b) * h);
            if z.norm() <= region.radius && pts.len() < n {
                pts.push(region.center + z);
            }
        }
    }
    pts
}

/// Samples the region and refines level points of every target.
struct Survey<'a> {
    f: &'a FunctionHandle,
    region: Disk,
    samples: Vec<Sampled>,
}

impl<'a> Survey<'a> {
    fn new(f: &'a FunctionHandle, region: Disk, n: usize, order: usize, seed: u64) -> Self {
        let samples = sample_disk(&region, n, seed)
            .par_iter()
            .map(|&z| Sampled {
                z,
                jet: f.eval_jet(z, order).ok(),
            })
            .collect();
        Self { f, region, samples }
    }

    fn failed(&self) -> usize {
        self.samples.iter().filter(|s| s.jet.is_none()).count()
    }

    /// Jets at refined level points of `target`, and the number of samples
    /// within `delta` whose refinement found no level point (asymptotic
    /// approach to the value, e.g. toward an omitted value). `expect` is the
    /// multiplicity under test.
    fn level_points(&self, target: &ExtendedComplex, delta: f64, expect: usize) -> (Vec<(Complex64, Jet)>, usize) {
        let mut near: Vec<(f64, f64, Complex64)> = self
            .samples
            .iter()
            .filter_map(|s| {
                let d = s.value()?.chordal(target);
                let jet = s.jet.as_ref()?;
                (d <= SEED_RADIUS).then(|| (d, level::newton_step(jet, target), s.z))
            })
            .collect();
        let within = level::rank_seeds(&mut near, delta);
        near.truncate(SEEDS_PER_VALUE.max(within));
        let eval = |z: Complex64| self.f.eval_jet(z, MAX_ORDER).ok();
        let region = self.region;
        let found: Vec<Option<Complex64>> = near
            .par_iter()
            .map(|(_, _, z)| level::refine(eval, *z, target, |z| region.contains(z), expect))
            .collect();
        let unresolved = found.iter().take(within).filter(|z| z.is_none()).count();
        let mut pts = Vec::new();
        let mut out = Vec::new();
        for z in found.iter().flatten() {
            if level::push_distinct(&mut pts, *z, 1e-7 * (1.0 + z.norm())) {
                if let Some(j) = eval(*z) {
                    out.push((*z, j));
                }
            }
        }
        (out, unresolved)
    }
}

fn derivs(jet: &Jet, target: &ExtendedComplex) -> Option<Vec<Complex64>> {
    let s = level::chart_series(jet, target)?;
    Some((0..=s.order()).map(|k| s.derivative(k)).collect())
}

/// Checks hypotheses (a), (b), (c) of the profile on `region`:
/// `A` values must not be taken, `f = b ⇒ f' = b` up to `tol`, and at
/// `c`-points `|f^(k)| ≤ M + tol` for `k < m` (on `1/f` for infinity, with `M = 0`).
/// Derivative orders above the jet cap are not checked.
pub fn hypothesis_probe(
    h: &FunctionHandle,
    profile: &ConditionProfile,
    region: Disk,
    samples: usize,
    opts: &ProbeOptions,
) -> ProbeReport {
    let samples = samples.max(MIN_SAMPLES);
    let max_m = profile.c.iter().map(|e| e.m as usize).max().unwrap_or(2);
    let order = max_m.saturating_sub(1).clamp(2, MAX_ORDER);
    let survey = Survey::new(h, region, samples, order, opts.seed);
    let mut conditions = Vec::new();
    for a in &profile.a {
        let target = a.to_extended();
        let (pts, unresolved) = survey.level_points(&target, opts.delta, 1);
        let violations: Vec<ProbeViolation> = pts
            .iter()
            .map(|(z, j)| ProbeViolation {
                z: *z,
                measured: value_of(j).chordal(&target),
            })
            .collect();
        conditions.push(ConditionReport {
            set: SetName::A,
            value: a.clone(),
            requirement: "value omitted on the region".into(),
            level_points: pts.len(),
            unresolved,
            pass: violations.is_empty(),
            violations,
        });
    }
    for b in &profile.b {
        let target = b.to_extended();
        let bc = target.as_finite().unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        let (pts, unresolved) = survey.level_points(&target, opts.delta, 1);
        let mut violations = Vec::new();
        for (z, j) in &pts {
            let Some(d) = derivs(j, &target) else { continue };
            let dev = (d[1] - bc).norm();
            if !(dev <= opts.tol) {
                violations.push(ProbeViolation { z: *z, measured: dev });
            }
        }
        conditions.push(ConditionReport {
            set: SetName::B,
            value: b.clone(),
            requirement: format!("f = {b} implies |f' - {b}| <= {}", opts.tol),
            level_points: pts.len(),
            unresolved,
            pass: violations.is_empty(),
            violations,
        });
    }
    for e in &profile.c {
        let target = e.value.to_extended();
        let bound = if target.is_infinite() { 0.0 } else { e.bound.unwrap_or(0.0) };
        let top = (e.m as usize - 1).min(order);
        let (pts, unresolved) = survey.level_points(&target, opts.delta, e.m as usize);
        let mut violations = Vec::new();
        for (z, j) in &pts {
            let Some(d) = derivs(j, &target) else { continue };
            let worst = d[1..=top].iter().map(|v| v.norm() - bound).fold(f64::NEG_INFINITY, f64::max);
            if !(worst <= opts.tol) {
                violations.push(ProbeViolation { z: *z, measured: worst });
            }
        }
        let chart = if target.is_infinite() { "(1/f)" } else { "f" };
        conditions.push(ConditionReport {
            set: SetName::C,
            value: e.value.clone(),
            requirement: format!("at {} points |{chart}^(k)| <= {bound} + {} for k = 1..{top}", e.value, opts.tol),
            level_points: pts.len(),
            unresolved,
            pass: violations.is_empty(),
            violations,
        });
    }
    ProbeReport {
        region,
        samples: survey.samples.len(),
        failed_evaluations: survey.failed(),
        pass: conditions.iter().all(|c| c.pass),
        conditions,
    }
}

fn value_of(j: &Jet) -> ExtendedComplex {
    let v = ExtendedComplex::Finite(j.series.value());
    if j.pole {
        v.recip()
    } else {
        v
    }
}

/// Set version of (b): wherever `f` lies in the set, `f'` must lie within
/// chordal distance `tol` of the set.
pub fn set_sharing_probe(
    f: &FunctionHandle,
    set: &[ExactValue],
    region: Disk,
    samples: usize,
    opts: &ProbeOptions,
) -> SetSharingReport {
    let samples = samples.max(MIN_SAMPLES);
    let survey = Survey::new(f, region, samples, 2, opts.seed);
    let targets: Vec<ExtendedComplex> = set.iter().map(ExactValue::to_extended).collect();
    let mut count = 0;
    let mut unresolved = 0;
    let mut violations = Vec::new();
    for t in &targets {
        let (pts, miss) = survey.level_points(t, opts.delta, 1);
        unresolved += miss;
        for (z, j) in pts {
            let Some(d) = derivs(&j, &ExtendedComplex::Finite(Complex64::new(0.0, 0.0))) else {
                continue;
            };
            count += 1;
            let dist = targets
                .iter()
                .map(|s| ExtendedComplex::Finite(d[1]).chordal(s))
                .fold(f64::INFINITY, f64::min);
            if !(dist <= opts.tol) {
                violations.push(ProbeViolation { z, measured: dist });
            }
        }
    }
    let names: Vec<String> = set.iter().map(ToString::to_string).collect();
    SetSharingReport {
        set: set.to_vec(),
        requirement: format!("f in {{{0}}} implies f' in {{{0}}}", names.join(", ")),
        level_points: count,
        unresolved,
        pass: violations.is_empty(),
        violations,
    }
}

