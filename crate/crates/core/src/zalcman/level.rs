//! Near-level refinement: Halley iteration on `(f - c) / f'`, whose zeros are
//! simple whatever the multiplicity of the `c`-point.

use crate::extended::ExtendedComplex;
use crate::jet::{Jet, Taylor};
use num_complex::Complex64;

const MAX_ITER: usize = 60;
/// Chordal distance to the target below which a converged point is accepted.
const ACCEPT: f64 = 1e-6;

/// Series of a function vanishing exactly on the `target` level set.
pub(crate) fn level_series(jet: &Jet, target: &ExtendedComplex) -> Option<Taylor> {
    match (target, jet.pole) {
        (ExtendedComplex::Infinity, true) => Some(jet.series),
        (ExtendedComplex::Infinity, false) => jet.series.recip(),
        (ExtendedComplex::Finite(c), false) => Some(jet.series.add_scalar(-c)),
        (ExtendedComplex::Finite(c), true) => jet.series.recip().map(|s| s.add_scalar(-c)),
    }
}

/// Series of `f` on the chart adapted to `target`: `1/f` for infinity, `f` otherwise.
pub(crate) fn chart_series(jet: &Jet, target: &ExtendedComplex) -> Option<Taylor> {
    match (target, jet.pole) {
        (ExtendedComplex::Infinity, true) | (ExtendedComplex::Finite(_), false) => Some(jet.series),
        _ => jet.series.recip(),
    }
}

/// Length of the Newton step toward `target` predicted by the jet.
pub(crate) fn newton_step(jet: &Jet, target: &ExtendedComplex) -> f64 {
    level_series(jet, target).map_or(f64::INFINITY, |s| {
        let step = (s.coeff(0) / s.coeff(1)).norm();
        if step.is_nan() {
            f64::INFINITY
        } else {
            step
        }
    })
}

/// Orders `(chordal distance, newton step, point)` seeds: those within
/// `always` first by distance, the rest by predicted step. Returns the
/// number within `always`.
pub(crate) fn rank_seeds(seeds: &mut [(f64, f64, Complex64)], always: f64) -> usize {
    let key = |s: &(f64, f64, Complex64)| if s.0 <= always { (0, s.0) } else { (1, s.1) };
    seeds.sort_by(|a, b| {
        let (ka, kb) = (key(a), key(b));
        ka.0.cmp(&kb.0)
            .then(ka.1.total_cmp(&kb.1))
            .then(a.2.re.total_cmp(&b.2.re))
            .then(a.2.im.total_cmp(&b.2.im))
    });
    seeds.iter().filter(|s| s.0 <= always).count()
}

/// Refines `seed` to a point of the `target` level set, staying where
/// `inside` holds. `eval` returns a jet of order at least 2. `expect` is the
/// multiplicity the caller tests for (1 when none).
pub(crate) fn refine<E, I>(eval: E, seed: Complex64, target: &ExtendedComplex, inside: I, expect: usize) -> Option<Complex64>
where
    E: Fn(Complex64) -> Option<Jet>,
    I: Fn(Complex64) -> bool,
{
    let z = halley(&eval, seed, target, inside)?;
    let z = polish_multiple(&eval, z, target, expect);
    // (f - c)/f' also vanishes at simple poles of f
    let value = eval(z)?;
    let v = ExtendedComplex::Finite(value.series.value());
    let v = if value.pole { v.recip() } else { v };
    (v.chordal(target) <= ACCEPT).then_some(z)
}

fn halley<E, I>(eval: &E, seed: Complex64, target: &ExtendedComplex, inside: I) -> Option<Complex64>
where
    E: Fn(Complex64) -> Option<Jet>,
    I: Fn(Complex64) -> bool,
{
    let mut z = seed;
    let mut prev_step = f64::INFINITY;
    let mut best: Option<(f64, Complex64)> = None;
    for _ in 0..MAX_ITER {
        let s = level_series(&eval(z)?, target)?;
        let (f0, f1, f2) = (s.coeff(0), s.coeff(1), s.coeff(2) * 2.0);
        // inside the rounding floor the iteration only wanders
        if f0.norm() <= noise_floor(target) {
            return Some(z);
        }
        if best.is_none_or(|(b, _)| f0.norm() < b) {
            best = Some((f0.norm(), z));
        }
        let den = f1 * f1 - f0 * f2;
        if den.norm() == 0.0 {
            return None;
        }
        let step = f0 * f1 / den;
        if !(step.re.is_finite() && step.im.is_finite()) {
            return None;
        }
        let scale = 1.0 + z.norm();
        let size = step.norm();
        if size <= 1e-15 * scale {
            return Some(z);
        }
        // near a multiple point rounding noise keeps the step from vanishing
        if size <= 1e-6 * scale && size >= 0.5 * prev_step {
            return best.map(|(_, b)| b);
        }
        prev_step = size;
        z -= step;
        if !inside(z) {
            return None;
        }
    }
    None
}

/// Cluster radius below which `k` nearby level points count as one
/// multiplicity-`k` point, relative to the radius where the tail beyond `c_k`
/// becomes comparable to `c_k`.
const CLUSTER: f64 = 1e-2;

/// Multiplicity estimate at a point near a level point: the largest `k` such
/// that all `k` zeros of the truncated series lie within a radius tiny against
/// `min_(j>k) |c_k / c_j|^(1/(j-k))`. Rounding splits a multiple point into such a cluster.
/// Returns `k` and the cluster radius.
fn multiplicity(s: &Taylor) -> Option<(usize, f64)> {
    let c = |j: usize| s.coeff(j).norm();
    (2..s.order()).rev().find_map(|k| {
        let ck = c(k);
        if ck == 0.0 {
            return None;
        }
        let scale = (k + 1..=s.order()).map(|j| (ck / c(j)).powf(1.0 / (j - k) as f64)).fold(f64::INFINITY, f64::min);
        let radius = (0..k).map(|j| (c(j) / ck).powf(1.0 / (k - j) as f64)).fold(0.0, f64::max);
        (radius <= CLUSTER * scale).then_some((k, radius))
    })
}

/// Rounding floor of `f - c` near a `c`-point.
fn noise_floor(target: &ExtendedComplex) -> f64 {
    match target {
        ExtendedComplex::Finite(c) => 16.0 * f64::EPSILON * (1.0 + c.norm()),
        ExtendedComplex::Infinity => 0.0,
    }
}

/// A multiplicity-`k` point is a simple zero of the `(k-1)`-th derivative;
/// Newton on that derivative moves from a rounding-split zero, or from the
/// edge of the rounding floor, to the centre. `k` is the detected cluster
/// size or `expect`, whichever is larger. The result is kept only if it is
/// still a level point to within the rounding floor.
fn polish_multiple<E>(eval: &E, z0: Complex64, target: &ExtendedComplex, expect: usize) -> Complex64
where
    E: Fn(Complex64) -> Option<Jet>,
{
    let Some(s0) = eval(z0).and_then(|j| level_series(&j, target)) else {
        return z0;
    };
    let detected = multiplicity(&s0);
    let k = detected.map_or(0, |(k, _)| k).max(expect.min(s0.order()));
    if k < 2 {
        return z0;
    }
    let mut allowed = s0.coeff(0).norm().max(noise_floor(target));
    let mut reach = 1e-3 * (1.0 + z0.norm());
    if let Some((dk, radius)) = detected {
        // the value at the centre of a cluster of radius r is about |c_k| r^k
        allowed = allowed.max(s0.coeff(dk).norm() * radius.powi(dk as i32));
        reach = reach.max(2.0 * radius);
    }
    let mut z = z0;
    let mut prev = f64::INFINITY;
    for _ in 0..40 {
        let Some(s) = eval(z).and_then(|j| level_series(&j, target)) else { break };
        let ck = s.coeff(k);
        if ck.norm() == 0.0 {
            break;
        }
        let step = s.coeff(k - 1) / (ck * k as f64);
        let size = step.norm();
        if !size.is_finite() || size >= prev {
            break;
        }
        prev = size;
        z -= step;
        if size <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    let accept = (z - z0).norm() <= reach
        && eval(z)
            .and_then(|j| level_series(&j, target))
            .is_some_and(|s| s.coeff(0).norm() <= 10.0 * allowed);
    if accept {
        z
    } else {
        z0
    }
}

/// Appends `z` unless a point within `tol` is already present.
pub(crate) fn push_distinct(points: &mut Vec<Complex64>, z: Complex64, tol: f64) -> bool {
    if points.iter().any(|p| (p - z).norm() <= tol) {
        false
    } else {
        points.push(z);
        true
    }
}
