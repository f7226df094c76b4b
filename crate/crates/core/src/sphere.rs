//! Spherical-derivative numerics: suprema on disks, the Ahlfors–Shimizu
//! characteristic, growth-order estimates and Marty-type probes.
//!
//! All sampling is deterministic for a given seed and budget; parallel work
//! is collected in index order so results do not depend on scheduling.

use crate::expr::{EvalError, FunctionHandle};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{PI, TAU};
use std::io::{self, Write};
use thiserror::Error;

pub const DEFAULT_SEED: u64 = 0xC0FFEE;
pub const MIN_SUP_BUDGET: usize = 1_000;
pub const MIN_T_BUDGET: usize = 10_000;
/// Maximum subdivision depth of a quadrature cell.
pub const MAX_DEPTH: u32 = 12;
/// Relative error at which the characteristic counts as converged.
pub const T_REL_TOL: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SphereError {
    #[error("budget {got} is below the minimum {min}")]
    BudgetTooSmall { got: usize, min: usize },
    #[error("invalid radii: {0}")]
    BadRadii(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// `|f'(z)| / (1 + |f(z)|²)`, computed on whichever chart the jet uses.
pub fn spherical_derivative(f: &FunctionHandle, z: Complex64) -> Result<f64, EvalError> {
    Ok(f.eval_jet(z, 1)?.spherical_derivative())
}

type Weight<'a> = &'a (dyn Fn(Complex64) -> f64 + Sync);

fn sph_or_zero(f: &FunctionHandle, z: Complex64, w: Weight<'_>) -> f64 {
    spherical_derivative(f, z).map_or(0.0, |s| s * w(z))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupEstimate {
    /// Lower bound for the supremum of `f#` on the disk.
    pub sup: f64,
    pub argmax: [f64; 2],
    pub evaluations: usize,
}

struct Probe {
    z: Complex64,
    sph: f64,
    /// Predicted `f#` after moving onto the unit circle of values.
    predicted: f64,
}

fn probe(f: &FunctionHandle, z: Complex64, h: f64, w: Weight<'_>) -> Probe {
    match f.eval_jet(z, 1) {
        Ok(jet) => {
            let wz = w(z);
            let sph = jet.spherical_derivative() * wz;
            let (c0, c1) = (jet.coeff(0), jet.coeff(1));
            let predicted = if c0.norm() > 0.0 {
                let log_deriv = c1.norm() / c0.norm();
                let step = c0.norm().ln().abs() / log_deriv;
                if step.is_finite() && step <= 2.0 * h {
                    0.5 * log_deriv * wz
                } else {
                    0.0
                }
            } else {
                0.0
            };
            Probe { z, sph, predicted }
        }
        Err(_) => Probe {
            z,
            sph: 0.0,
            predicted: 0.0,
        },
    }
}

fn clamp_to_disk(z: Complex64, center: Complex64, radius: f64) -> Complex64 {
    let d = z - center;
    let n = d.norm();
    if n <= radius {
        z
    } else {
        center + d * (radius / n)
    }
}

/// Local ascent from a seed: Newton steps on `log|f| = 0`, then a
/// compass search with halving steps. Returns the best point seen.
fn ascend(
    f: &FunctionHandle,
    seed: Complex64,
    center: Complex64,
    radius: f64,
    h: f64,
    budget: usize,
    w: Weight<'_>,
) -> (Complex64, f64, usize) {
    let mut used = 0;
    let mut best = (seed, sph_or_zero(f, seed, w));
    used += 1;
    let mut z = seed;
    for _ in 0..3 {
        if used >= budget {
            break;
        }
        let Ok(jet) = f.eval_jet(z, 1) else { break };
        used += 1;
        let (c0, c1) = (jet.coeff(0), jet.coeff(1));
        if c0.norm() == 0.0 || c1.norm() == 0.0 {
            break;
        }
        // log of the chart value; both charts share |log f| up to sign
        let step = -Complex64::new(c0.norm().ln(), 0.0) / (c1 / c0);
        if !(step.re.is_finite() && step.im.is_finite()) || step.norm() > 4.0 * h {
            break;
        }
        z = clamp_to_disk(z + step, center, radius);
        let s = sph_or_zero(f, z, w);
        used += 1;
        if s > best.1 {
            best = (z, s);
        }
    }
    let d = std::f64::consts::FRAC_1_SQRT_2;
    let dirs = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(d, d),
        Complex64::new(-d, d),
        Complex64::new(-d, -d),
        Complex64::new(d, -d),
    ];
    let mut step = 0.25 * h / (1.0 + best.1).sqrt();
    let floor = 1e-13 * (1.0 + radius);
    while used + dirs.len() <= budget && step > floor {
        let mut improved = false;
        for d in dirs {
            let p = clamp_to_disk(best.0 + d * step, center, radius);
            let s = sph_or_zero(f, p, w);
            used += 1;
            if s > best.1 {
                best = (p, s);
                improved = true;
                break;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best.0, best.1, used)
}

/// Stratified jittered grid over the disk followed by local ascent from the
/// most promising samples. A lower-bound estimator of `sup f#`.
pub fn sup_sph_on_disk(
    f: &FunctionHandle,
    center: Complex64,
    radius: f64,
    budget: usize,
    seed: u64,
) -> Result<SupEstimate, SphereError> {
    max_weighted_sph(f, center, radius, budget, seed, &|_| 1.0)
}

/// Maximizes `weight(z) * f#(z)` over the disk with the same sampler as
/// [`sup_sph_on_disk`]. The weight must be nonnegative and continuous.
pub fn max_weighted_sph(
    f: &FunctionHandle,
    center: Complex64,
    radius: f64,
    budget: usize,
    seed: u64,
    weight: &(dyn Fn(Complex64) -> f64 + Sync),
) -> Result<SupEstimate, SphereError> {
    if budget < MIN_SUP_BUDGET {
        return Err(SphereError::BudgetTooSmall {
            got: budget,
            min: MIN_SUP_BUDGET,
        });
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(SphereError::BadRadii(format!("radius {radius}")));
    }
    let grid_budget = budget * 6 / 10;
    let h = (PI * radius * radius / grid_budget as f64).sqrt();
    let n_side = (2.0 * radius / h).ceil() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(grid_budget);
    for i in 0..n_side {
        for j in 0..n_side {
            let jx: f64 = rng.gen();
            let jy: f64 = rng.gen();
            let z = Complex64::new(-radius + (i as f64 + jx) * h, -radius + (j as f64 + jy) * h);
            if z.norm() <= radius && pts.len() < grid_budget {
                pts.push(center + z);
            }
        }
    }
    pts.push(center);
    let probes: Vec<Probe> = pts.par_iter().map(|&z| probe(f, z, h, weight)).collect();
    let mut used = probes.len();
    let mut best = probes
        .iter()
        .fold((center, -1.0_f64), |b, p| if p.sph > b.1 { (p.z, p.sph) } else { b });

    // seeds: the top samples by observed and by predicted value
    let per_seed = 40;
    let n_seeds = ((budget - used.min(budget)) / per_seed).max(1);
    let mut by_sph: Vec<usize> = (0..probes.len()).collect();
    by_sph.sort_by(|&a, &b| probes[b].sph.total_cmp(&probes[a].sph).then(a.cmp(&b)));
    let mut by_pred: Vec<usize> = (0..probes.len()).filter(|&i| probes[i].predicted > probes[i].sph).collect();
    by_pred.sort_by(|&a, &b| probes[b].predicted.total_cmp(&probes[a].predicted).then(a.cmp(&b)));
    let mut seeds: Vec<usize> = Vec::with_capacity(n_seeds);
    let (mut ia, mut ib) = (0, 0);
    while seeds.len() < n_seeds && (ia < by_sph.len() || ib < by_pred.len()) {
        if ia < by_sph.len() {
            if !seeds.contains(&by_sph[ia]) {
                seeds.push(by_sph[ia]);
            }
            ia += 1;
        }
        if ib < by_pred.len() && seeds.len() < n_seeds {
            if !seeds.contains(&by_pred[ib]) {
                seeds.push(by_pred[ib]);
            }
            ib += 1;
        }
    }
    let remaining = budget.saturating_sub(used);
    let per = (remaining / seeds.len().max(1)).max(1);
    let results: Vec<(Complex64, f64, usize)> = seeds
        .par_iter()
        .map(|&i| ascend(f, probes[i].z, center, radius, h, per, weight))
        .collect();
    for (z, s, u) in results {
        used += u;
        if s > best.1 {
            best = (z, s);
        }
    }
    Ok(SupEstimate {
        sup: best.1.max(0.0),
        argmax: [best.0.re, best.0.im],
        evaluations: used,
    })
}

/// Samples of `f#` on a regular `n × n` grid over the square circumscribing the disk.
pub fn grid_samples(f: &FunctionHandle, center: Complex64, radius: f64, n: usize) -> Vec<(f64, f64, f64)> {
    let n = n.max(2);
    let pts: Vec<Complex64> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let t = |a: usize| -radius + 2.0 * radius * a as f64 / (n - 1) as f64;
            center + Complex64::new(t(i), t(j))
        })
        .collect();
    pts.par_iter()
        .map(|&z| (z.re, z.im, spherical_derivative(f, z).unwrap_or(f64::NAN)))
        .collect()
}

pub fn write_grid_csv<W: Write>(mut w: W, samples: &[(f64, f64, f64)]) -> io::Result<()> {
    writeln!(w, "re,im,sph_deriv")?;
    for (re, im, s) in samples {
        writeln!(w, "{re:?},{im:?},{s:?}")?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Ahlfors–Shimizu characteristic

const GAUSS_OFFSET: f64 = 0.577_350_269_189_625_8; // 1/sqrt(3)

#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    /// ∬ f#² dA
    i0: f64,
    /// ∬ f#² log|z| dA
    i1: f64,
}

impl std::ops::Add for Moments {
    type Output = Moments;
    fn add(self, o: Moments) -> Moments {
        Moments {
            i0: self.i0 + o.i0,
            i1: self.i1 + o.i1,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    r0: f64,
    r1: f64,
    t0: f64,
    t1: f64,
    depth: u32,
    ring: usize,
}

impl Cell {
    fn children(&self) -> [Cell; 4] {
        let rm = 0.5 * (self.r0 + self.r1);
        let tm = 0.5 * (self.t0 + self.t1);
        let c = |r0, r1, t0, t1| Cell {
            r0,
            r1,
            t0,
            t1,
            depth: self.depth + 1,
            ring: self.ring,
        };
        [
            c(self.r0, rm, self.t0, tm),
            c(rm, self.r1, self.t0, tm),
            c(self.r0, rm, tm, self.t1),
            c(rm, self.r1, tm, self.t1),
        ]
    }
}

/// 2×2 Gauss rule in polar coordinates; counts failed evaluations.
fn gauss(f: &FunctionHandle, c: &Cell, failures: &mut usize) -> Moments {
    let (rm, rh) = (0.5 * (c.r0 + c.r1), 0.5 * (c.r1 - c.r0));
    let (tm, th) = (0.5 * (c.t0 + c.t1), 0.5 * (c.t1 - c.t0));
    let mut m = Moments::default();
    for a in [-GAUSS_OFFSET, GAUSS_OFFSET] {
        let rho = rm + rh * a;
        for b in [-GAUSS_OFFSET, GAUSS_OFFSET] {
            let theta = tm + th * b;
            let z = Complex64::from_polar(rho, theta);
            let s = match spherical_derivative(f, z) {
                Ok(s) if s.is_finite() => s,
                _ => {
                    *failures += 1;
                    0.0
                }
            };
            let w = rh * th * rho * s * s;
            m.i0 += w;
            m.i1 += w * rho.ln();
        }
    }
    m
}

#[derive(Clone, Debug)]
struct Evaluated {
    cell: Cell,
    /// Coarse estimates of the four children (their sum is the fine estimate).
    kids: [Moments; 4],
    fine: Moments,
    err: f64,
    index: u64,
}

struct Keyed(Evaluated);

impl PartialEq for Keyed {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Keyed {}
impl PartialOrd for Keyed {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Keyed {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.err.total_cmp(&o.0.err).then(o.0.index.cmp(&self.0.index))
    }
}

fn evaluate(f: &FunctionHandle, cell: Cell, coarse: Moments, log_scale: f64, index: u64) -> (Evaluated, usize) {
    let mut failures = 0;
    let ch = cell.children();
    let kids = ch.map(|c| gauss(f, &c, &mut failures));
    let fine = kids.iter().fold(Moments::default(), |a, &b| a + b);
    let err = (fine.i0 - coarse.i0).abs() * log_scale + (fine.i1 - coarse.i1).abs();
    (
        Evaluated {
            cell,
            kids,
            fine,
            err,
            index,
        },
        failures,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Characteristic {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    /// Estimated absolute error of the largest-radius value.
    pub error_estimate: f64,
    pub converged: bool,
    pub evaluations: usize,
    pub failed_evaluations: usize,
}

/// `T(r) = (1/π) ∬_{|z|≤r} f#² log(r/|z|) dA` at every requested radius,
/// from one adaptive quadrature whose ring boundaries sit on the radii.
pub fn ahlfors_shimizu_many(f: &FunctionHandle, radii: &[f64], budget: usize) -> Result<Characteristic, SphereError> {
    if budget < MIN_T_BUDGET {
        return Err(SphereError::BudgetTooSmall {
            got: budget,
            min: MIN_T_BUDGET,
        });
    }
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SphereError::BadRadii("radii must be positive and strictly increasing".into()));
    }
    let r_max = *radii.last().expect("nonempty");
    let log_scale = 1.0 + r_max.ln().abs().max(radii[0].ln().abs());
    // initial mesh with cells of roughly equal side, using a fifth of the budget
    let n0 = (budget / 5 / 20).max(16);
    let side = (PI * r_max * r_max / n0 as f64).sqrt();
    let mut cells = Vec::new();
    let mut inner = 0.0;
    for (k, &r) in radii.iter().enumerate() {
        let n_r = ((r - inner) / side).ceil().max(1.0) as usize;
        for i in 0..n_r {
            let a = inner + (r - inner) * i as f64 / n_r as f64;
            let b = inner + (r - inner) * (i + 1) as f64 / n_r as f64;
            let n_t = ((TAU * 0.5 * (a + b) / side).ceil() as usize).max(4);
            for j in 0..n_t {
                cells.push(Cell {
                    r0: a,
                    r1: b,
                    t0: TAU * j as f64 / n_t as f64,
                    t1: TAU * (j + 1) as f64 / n_t as f64,
                    depth: 0,
                    ring: k,
                });
            }
        }
        inner = r;
    }
    let mut next_index = 0u64;
    let initial: Vec<(Evaluated, usize)> = cells
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let mut fails = 0;
            let coarse = gauss(f, c, &mut fails);
            let (e, more) = evaluate(f, *c, coarse, log_scale, i as u64);
            (e, fails + more)
        })
        .collect();
    next_index += initial.len() as u64;
    let mut evaluations = initial.len() * 20;
    let mut failed = 0;
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Evaluated> = Vec::new();
    for (e, fl) in initial {
        failed += fl;
        heap.push(Keyed(e));
    }
    let total_of = |heap: &BinaryHeap<Keyed>, frozen: &[Evaluated]| -> (f64, f64) {
        let mut t = 0.0;
        let mut err = 0.0;
        for e in heap.iter().map(|k| &k.0).chain(frozen.iter()) {
            t += r_max.ln() * e.fine.i0 - e.fine.i1;
            err += e.err;
        }
        (t / PI, err / PI)
    };
    const BATCH: usize = 32;
    loop {
        let (t, err) = total_of(&heap, &frozen);
        if err <= 1e-3 * t.abs().max(1e-300) || heap.is_empty() {
            break;
        }
        if evaluations + BATCH * 64 > budget {
            break;
        }
        let mut batch = Vec::with_capacity(BATCH);
        while batch.len() < BATCH {
            match heap.pop() {
                Some(Keyed(e)) if e.cell.depth >= MAX_DEPTH => frozen.push(e),
                Some(Keyed(e)) => batch.push(e),
                None => break,
            }
        }
        if batch.is_empty() {
            break;
        }
        let jobs: Vec<(Cell, Moments, u64)> = batch
            .iter()
            .flat_map(|e| {
                let ch = e.cell.children();
                (0..4).map(move |q| (ch[q], e.kids[q]))
            })
            .enumerate()
            .map(|(i, (c, m))| (c, m, next_index + i as u64))
            .collect();
        next_index += jobs.len() as u64;
        let done: Vec<(Evaluated, usize)> = jobs
            .par_iter()
            .map(|&(c, m, idx)| evaluate(f, c, m, log_scale, idx))
            .collect();
        evaluations += done.len() * 16;
        for (e, fl) in done {
            failed += fl;
            heap.push(Keyed(e));
        }
    }
    let mut all: Vec<&Evaluated> = heap.iter().map(|k| &k.0).chain(frozen.iter()).collect();
    all.sort_by_key(|e| e.index);
    let mut ring_moments = vec![Moments::default(); radii.len()];
    let mut ring_err = 0.0;
    for e in &all {
        ring_moments[e.cell.ring] = ring_moments[e.cell.ring] + e.fine;
        ring_err += e.err;
    }
    let mut values = Vec::with_capacity(radii.len());
    for (k, &r) in radii.iter().enumerate() {
        let mut t = 0.0;
        for m in &ring_moments[..=k] {
            t += r.ln() * m.i0 - m.i1;
        }
        values.push((t / PI).max(0.0));
    }
    let error_estimate = ring_err / PI;
    let top = *values.last().expect("nonempty");
    Ok(Characteristic {
        radii: radii.to_vec(),
        converged: error_estimate <= T_REL_TOL * top,
        values,
        error_estimate,
        evaluations,
        failed_evaluations: failed,
    })
}

/// Single-radius characteristic.
pub fn ahlfors_shimizu_t(f: &FunctionHandle, r: f64, budget: usize) -> Result<Characteristic, SphereError> {
    ahlfors_shimizu_many(f, &[r], budget)
}

// ---------------------------------------------------------------------------
// Growth order

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub radii: Vec<f64>,
    pub sup_values: Vec<f64>,
    #[serde(rename = "T_values")]
    pub t_values: Vec<f64>,
    /// Least-squares slope of `log T` against `log r`.
    pub order_estimate: f64,
    pub local_slopes: Vec<f64>,
    pub superpolynomial: bool,
    pub quadrature_converged: bool,
    pub budget_used: usize,
}

fn lsq_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Local slopes increase at every step and by more than 1 overall.
pub fn is_superpolynomial(local_slopes: &[f64]) -> bool {
    local_slopes.len() >= 2
        && local_slopes.windows(2).all(|w| w[1] > w[0])
        && local_slopes[local_slopes.len() - 1] - local_slopes[0] > 1.0
}

/// Geometrically spaced radii from `r_min` to `r_max`.
pub fn geometric_radii(r_min: f64, r_max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|k| r_min * (r_max / r_min).powf(k as f64 / (steps - 1) as f64))
        .collect()
}

pub fn order_estimate(
    f: &FunctionHandle,
    r_min: f64,
    r_max: f64,
    steps: usize,
    budget: usize,
    seed: u64,
) -> Result<GrowthReport, SphereError> {
    if !(r_min > 0.0 && r_min < r_max && r_max.is_finite()) || steps < 4 {
        return Err(SphereError::BadRadii(format!(
            "need 0 < r_min < r_max and steps >= 4 (got {r_min}, {r_max}, {steps})"
        )));
    }
    let radii = geometric_radii(r_min, r_max, steps);
    let sup_share = (budget / 5 / steps).max(MIN_SUP_BUDGET);
    let t_budget = budget.saturating_sub(sup_share * steps).max(MIN_T_BUDGET);
    let ch = ahlfors_shimizu_many(f, &radii, t_budget)?;
    let mut sup_values = Vec::with_capacity(steps);
    let mut used = ch.evaluations;
    let mut running = 0.0_f64;
    for (k, &r) in radii.iter().enumerate() {
        let s = sup_sph_on_disk(f, Complex64::new(0.0, 0.0), r, sup_share, seed.wrapping_add(k as u64))?;
        used += s.evaluations;
        running = running.max(s.sup);
        sup_values.push(running);
    }
    let lx: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ly: Vec<f64> = ch.values.iter().map(|t| t.max(1e-300).ln()).collect();
    let local_slopes: Vec<f64> = (1..steps).map(|k| (ly[k] - ly[k - 1]) / (lx[k] - lx[k - 1])).collect();
    Ok(GrowthReport {
        order_estimate: lsq_slope(&lx, &ly),
        superpolynomial: is_superpolynomial(&local_slopes),
        local_slopes,
        radii,
        sup_values,
        t_values: ch.values,
        quadrature_converged: ch.converged,
        budget_used: used,
    })
}

// ---------------------------------------------------------------------------
// Marty probe

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MartyReport {
    pub center: [f64; 2],
    pub radii: Vec<f64>,
    /// Running maxima of the disk suprema (nested disks).
    pub sup_values: Vec<f64>,
    pub argmax: Vec<[f64; 2]>,
    /// Log-log slope of the suprema over the last half of the schedule.
    pub growth_exponent: f64,
    /// Mean growth factor of the suprema per unit radius over the same range.
    pub growth_per_unit_radius: f64,
    pub evidence: bool,
    pub evaluations: usize,
}

/// Minimal log-log growth exponent of the suprema that counts as evidence.
pub const MARTY_MIN_EXPONENT: f64 = 1.0;

/// Growth of `sup h#` on expanding disks around `z0`: evidence that the
/// translates `h(z + ω)` do not form a normal family.
pub fn marty_probe(
    h: &FunctionHandle,
    z0: Complex64,
    radii: &[f64],
    budget: usize,
    seed: u64,
) -> Result<MartyReport, SphereError> {
    if radii.len() < 2 || radii.windows(2).any(|w| w[0] >= w[1]) || radii[0] <= 0.0 {
        return Err(SphereError::BadRadii("need at least two increasing positive radii".into()));
    }
    let mut sup_values = Vec::new();
    let mut argmax = Vec::new();
    let mut evaluations = 0;
    let mut best = (0.0_f64, [z0.re, z0.im]);
    for (k, &r) in radii.iter().enumerate() {
        let s = sup_sph_on_disk(h, z0, r, budget, seed.wrapping_add(k as u64))?;
        evaluations += s.evaluations;
        if s.sup > best.0 {
            best = (s.sup, s.argmax);
        }
        sup_values.push(best.0);
        argmax.push(best.1);
    }
    let half = radii.len() / 2;
    let (lo, hi) = (half.min(radii.len() - 2), radii.len() - 1);
    let tail = lo..=hi;
    let lx: Vec<f64> = radii[tail.clone()].iter().map(|r| r.ln()).collect();
    let ly: Vec<f64> = sup_values[tail].iter().map(|s| s.max(1e-300).ln()).collect();
    let growth_exponent = lsq_slope(&lx, &ly);
    let growth_per_unit_radius = ((sup_values[hi].max(1e-300) / sup_values[lo].max(1e-300)).ln()
        / (radii[hi] - radii[lo]))
        .exp();
    Ok(MartyReport {
        center: [z0.re, z0.im],
        radii: radii.to_vec(),
        sup_values,
        argmax,
        evidence: growth_exponent >= MARTY_MIN_EXPONENT,
        growth_exponent,
        growth_per_unit_radius,
        evaluations,
    })
}
