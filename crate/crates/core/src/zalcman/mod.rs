//! Zalcman rescaling of non-normal families and checks on the rescaled
//! functions `g_n(ξ) = f_n(z_n + ρ_n ξ)`.

mod level;
pub mod probe;

pub use probe::{
    hypothesis_probe, MIN_SAMPLES, set_sharing_probe, ConditionReport, Disk, ProbeOptions, ProbeReport, ProbeViolation, SetSharingReport,
};

use crate::expr::FunctionHandle;
use crate::extended::ExtendedComplex;
use crate::jet::{Jet, Taylor, MAX_ORDER};
use crate::sphere::{max_weighted_sph, SphereError};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::io::{self, Write};
use thiserror::Error;

pub const DEFAULT_DELTA: f64 = 1e-4;
pub const DEFAULT_TOL: f64 = 1e-2;
/// Largest derivative order stored in a trace.
pub const MAX_K: usize = 5;
/// A trace is conclusive when `ρ` decreases strictly and ends below this
/// fraction of its first value.
pub const CONCLUSIVE_SHRINK: f64 = 0.25;
/// Raw samples within this fraction of the grid radius of a refined level
/// point are checked through that point.
const REPRESENTED_RADIUS: f64 = 0.05;
/// Closest samples refined per level target.
const LEVEL_SEEDS: usize = 24;
/// Samples this close to a level are always refined.
const LEVEL_SEED_ALWAYS: f64 = 1e-3;
/// Chordal radius within which a sample seeds level refinement.
const LEVEL_SEED_RADIUS: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZalcmanError {
    #[error("k_max must be at most {MAX_K}, got {0}")]
    OrderTooHigh(usize),
    #[error("empty schedule")]
    EmptySchedule,
    #[error("invalid grid: {0}")]
    BadGrid(String),
    #[error(transparent)]
    Sphere(#[from] SphereError),
}

/// Square sampling grid on `|ξ| ≤ xi_radius` plus refined points of each level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub xi_radius: f64,
    /// Points per side; odd values include `ξ = 0`.
    pub n: usize,
    pub levels: Vec<ExtendedComplex>,
}

impl GridSpec {
    pub fn new(xi_radius: f64, n: usize) -> Self {
        Self {
            xi_radius,
            n,
            levels: Vec::new(),
        }
    }

    pub fn with_levels(mut self, levels: impl IntoIterator<Item = ExtendedComplex>) -> Self {
        self.levels.extend(levels);
        self
    }

    fn points(&self) -> Vec<Complex64> {
        let n = self.n;
        let step = 2.0 * self.xi_radius / (n - 1) as f64;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let xi = Complex64::new(-self.xi_radius + i as f64 * step, -self.xi_radius + j as f64 * step);
                if xi.norm() <= self.xi_radius * (1.0 + 1e-12) {
                    out.push(xi);
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Value,
    Reciprocal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSample {
    pub xi: Complex64,
    /// Index into the grid's level list when the point was refined onto that level.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    pub chart: Chart,
    /// Derivatives `g^(k)(ξ)`, `k = 0..=k_max`, on `chart`.
    pub derivs: Vec<Complex64>,
    pub sph: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl GridSample {
    fn from_jet(xi: Complex64, level: Option<usize>, jet: &Jet) -> Self {
        Self {
            xi,
            level,
            chart: if jet.pole { Chart::Reciprocal } else { Chart::Value },
            derivs: (0..=jet.order()).map(|k| jet.series.derivative(k)).collect(),
            sph: jet.spherical_derivative(),
            error: None,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    fn jet(&self) -> Option<Jet> {
        if !self.is_ok() {
            return None;
        }
        let coeffs: Vec<Complex64> = self
            .derivs
            .iter()
            .enumerate()
            .map(|(k, d)| d / crate::jet::factorial(k))
            .collect();
        Some(Jet {
            series: Taylor::from_coeffs(&coeffs, coeffs.len() - 1),
            pole: self.chart == Chart::Reciprocal,
        })
    }

    pub fn value(&self) -> Option<ExtendedComplex> {
        let v = *self.derivs.first()?;
        if !self.is_ok() {
            return None;
        }
        Some(match self.chart {
            Chart::Value => ExtendedComplex::Finite(v),
            Chart::Reciprocal => ExtendedComplex::Finite(v).recip(),
        })
    }

    /// Derivatives on the chart adapted to `target` (`1/g` for infinity).
    pub fn derivs_for(&self, target: &ExtendedComplex) -> Option<Vec<Complex64>> {
        let s = level::chart_series(&self.jet()?, target)?;
        Some((0..=s.order()).map(|k| s.derivative(k)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceStep {
    pub n: usize,
    pub search_center: Complex64,
    pub search_radius: f64,
    pub z_n: Complex64,
    /// Weighted maximum `(R_n - |z_n - z0|) h#(z_n)`.
    pub m_n: f64,
    pub rho_n: f64,
    /// `g_n#(0)`.
    pub sph_at_origin: f64,
    pub samples: Vec<GridSample>,
    pub failed_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RescalingTrace {
    pub family: String,
    pub k_max: usize,
    pub grid: GridSpec,
    pub steps: Vec<TraceStep>,
    pub conclusive: bool,
}

/// One member `f_n` of a family with its search disk.
#[derive(Clone, Debug)]
pub struct StepInput {
    pub n: usize,
    pub f: FunctionHandle,
    pub center: Complex64,
    pub radius: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtractOptions {
    pub k_max: usize,
    /// Evaluations per maximization.
    pub budget: usize,
    pub seed: u64,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        Self {
            k_max: 3,
            budget: 20_000,
            seed: crate::sphere::DEFAULT_SEED,
        }
    }
}

fn check_inputs(grid: &GridSpec, k_max: usize) -> Result<(), ZalcmanError> {
    if k_max > MAX_K {
        return Err(ZalcmanError::OrderTooHigh(k_max));
    }
    if grid.n < 3 || !(grid.xi_radius > 0.0 && grid.xi_radius.is_finite()) {
        return Err(ZalcmanError::BadGrid(format!("n = {}, radius = {}", grid.n, grid.xi_radius)));
    }
    Ok(())
}

/// Translation family `{h(z + ω)}`: step `n` searches the disk of radius
/// `schedule[n]` around `z0`.
pub fn extract(
    h: &FunctionHandle,
    z0: Complex64,
    schedule: &[f64],
    grid: &GridSpec,
    opts: &ExtractOptions,
) -> Result<RescalingTrace, ZalcmanError> {
    let steps: Vec<StepInput> = schedule
        .iter()
        .enumerate()
        .map(|(n, &radius)| StepInput {
            n,
            f: h.clone(),
            center: z0,
            radius,
        })
        .collect();
    extract_steps(&format!("translates of {}", h.print()), &steps, grid, opts)
}

/// Arbitrary sequence `f_n`, each with its own search disk.
pub fn extract_steps(
    family: &str,
    steps: &[StepInput],
    grid: &GridSpec,
    opts: &ExtractOptions,
) -> Result<RescalingTrace, ZalcmanError> {
    check_inputs(grid, opts.k_max)?;
    if steps.is_empty() {
        return Err(ZalcmanError::EmptySchedule);
    }
    let mut out = Vec::with_capacity(steps.len());
    for (k, s) in steps.iter().enumerate() {
        let (center, radius) = (s.center, s.radius);
        let weight = move |z: Complex64| (radius - (z - center).norm()).max(0.0);
        let best = max_weighted_sph(&s.f, center, radius, opts.budget, opts.seed.wrapping_add(k as u64), &weight)?;
        let z_n = Complex64::new(best.argmax[0], best.argmax[1]);
        let sph = crate::sphere::spherical_derivative(&s.f, z_n).map_err(SphereError::from)?;
        // a vanishing spherical derivative leaves no scale; keep ρ = 1
        let rho = if sph > 0.0 { 1.0 / sph } else { 1.0 };
        out.push(rescaled_step(s.n, &s.f, center, radius, z_n, best.sup, rho, grid, opts.k_max));
    }
    let conclusive = is_conclusive(&out);
    Ok(RescalingTrace {
        family: family.to_string(),
        k_max: opts.k_max,
        grid: grid.clone(),
        steps: out,
        conclusive,
    })
}

/// A trace from prescribed centers and scales, without any maximization.
pub fn trace_from_points(
    family: &str,
    f: &FunctionHandle,
    points: &[(Complex64, f64)],
    grid: &GridSpec,
    k_max: usize,
) -> Result<RescalingTrace, ZalcmanError> {
    check_inputs(grid, k_max)?;
    if points.is_empty() {
        return Err(ZalcmanError::EmptySchedule);
    }
    let steps: Vec<TraceStep> = points
        .iter()
        .enumerate()
        .map(|(n, &(z, rho))| {
            let m = crate::sphere::spherical_derivative(f, z).unwrap_or(0.0);
            rescaled_step(n, f, z, 0.0, z, m, rho, grid, k_max)
        })
        .collect();
    let conclusive = is_conclusive(&steps);
    Ok(RescalingTrace {
        family: family.to_string(),
        k_max,
        grid: grid.clone(),
        steps,
        conclusive,
    })
}

fn is_conclusive(steps: &[TraceStep]) -> bool {
    let rho: Vec<f64> = steps.iter().map(|s| s.rho_n).collect();
    rho.len() >= 2 && rho.windows(2).all(|w| w[1] < w[0]) && rho[rho.len() - 1] <= CONCLUSIVE_SHRINK * rho[0]
}

#[allow(clippy::too_many_arguments)]
fn rescaled_step(
    n: usize,
    f: &FunctionHandle,
    center: Complex64,
    radius: f64,
    z_n: Complex64,
    m_n: f64,
    rho: f64,
    grid: &GridSpec,
    k_max: usize,
) -> TraceStep {
    let order = k_max.clamp(2, MAX_ORDER);
    let g = |xi: Complex64| -> Result<Jet, String> {
        let jet = f.eval_jet(z_n + xi * rho, order).map_err(|e| e.to_string())?;
        Ok(Jet {
            series: jet.series.rescale(rho),
            pole: jet.pole,
        })
    };
    let g_fine = |xi: Complex64| -> Result<Jet, String> {
        let jet = f.eval_jet(z_n + xi * rho, MAX_ORDER).map_err(|e| e.to_string())?;
        Ok(Jet {
            series: jet.series.rescale(rho),
            pole: jet.pole,
        })
    };
    let truncate = |mut s: GridSample| {
        s.derivs.truncate(k_max + 1);
        s
    };
    let mut samples: Vec<GridSample> = grid
        .points()
        .par_iter()
        .map(|&xi| match g(xi) {
            Ok(jet) => truncate(GridSample::from_jet(xi, None, &jet)),
            Err(e) => GridSample {
                xi,
                level: None,
                chart: Chart::Value,
                derivs: Vec::new(),
                sph: 0.0,
                error: Some(e),
            },
        })
        .collect();
    let inside = |xi: Complex64| xi.norm() <= grid.xi_radius;
    for (li, target) in grid.levels.iter().enumerate() {
        let mut seeds: Vec<(f64, f64, Complex64)> = samples
            .iter()
            .filter(|s| s.level.is_none())
            .filter_map(|s| {
                let d = s.value()?.chordal(target);
                let jet = s.jet()?;
                (d <= LEVEL_SEED_RADIUS).then(|| (d, level::newton_step(&jet, target), s.xi))
            })
            .collect();
        let within = level::rank_seeds(&mut seeds, LEVEL_SEED_ALWAYS);
        seeds.truncate(LEVEL_SEEDS.max(within));
        let found: Vec<Option<Complex64>> = seeds
            .par_iter()
            .map(|(_, _, xi)| level::refine(|x| g_fine(x).ok(), *xi, target, inside, 1))
            .collect();
        let mut distinct = Vec::new();
        for xi in found.into_iter().flatten() {
            if level::push_distinct(&mut distinct, xi, 1e-8 * grid.xi_radius) {
                if let Ok(jet) = g(xi) {
                    samples.push(truncate(GridSample::from_jet(xi, Some(li), &jet)));
                }
            }
        }
    }
    let failed_points = samples.iter().filter(|s| !s.is_ok()).count();
    let sph_at_origin = g(Complex64::new(0.0, 0.0)).map_or(f64::NAN, |j| j.spherical_derivative());
    TraceStep {
        n,
        search_center: center,
        search_radius: radius,
        z_n,
        m_n,
        rho_n: rho,
        sph_at_origin,
        samples,
        failed_points,
    }
}

// ---------------------------------------------------------------------------
// checks

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub pass: bool,
    /// Worst measured quantity over the checked points.
    pub measured: f64,
    pub threshold: f64,
    pub points_checked: usize,
    /// Samples near the level with no refined level point nearby.
    pub unresolved: usize,
    /// `(step n, ξ)` of every violating point.
    pub violations: Vec<(usize, Complex64)>,
    pub detail: String,
}

impl CheckOutcome {
    fn fail(check: &str, detail: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            pass: false,
            measured: f64::NAN,
            threshold: f64::NAN,
            points_checked: 0,
            unresolved: 0,
            violations: Vec::new(),
            detail: detail.into(),
        }
    }
}

/// Refined level points within `delta` of `target`, and the number of raw
/// samples within `delta` that no refined point accounts for.
fn near_level<'a>(
    trace: &RescalingTrace,
    step: &'a TraceStep,
    target: &ExtendedComplex,
    delta: f64,
) -> (Vec<&'a GridSample>, usize) {
    let near: Vec<&GridSample> = step
        .samples
        .iter()
        .filter(|s| s.value().is_some_and(|v| v.chordal(target) <= delta))
        .collect();
    let refined: Vec<&GridSample> = near.iter().copied().filter(|s| s.level.is_some()).collect();
    let shadow = REPRESENTED_RADIUS * trace.grid.xi_radius;
    let unresolved = near
        .iter()
        .filter(|s| s.level.is_none() && refined.iter().all(|p| (p.xi - s.xi).norm() > shadow))
        .count();
    (refined, unresolved)
}

fn final_two(trace: &RescalingTrace) -> &[TraceStep] {
    let n = trace.steps.len();
    &trace.steps[n.saturating_sub(2)..]
}

/// `sup_{|ξ| ≤ Ξ} g_n#(ξ) ≤ 1 + slack` at the final step.
pub fn check_bounded_blowup(trace: &RescalingTrace, xi: f64, slack: f64) -> CheckOutcome {
    let name = "bounded_blowup";
    if !trace.conclusive {
        return CheckOutcome::fail(name, "trace not conclusive");
    }
    if xi > trace.grid.xi_radius {
        return CheckOutcome::fail(name, format!("grid radius {} is below {xi}", trace.grid.xi_radius));
    }
    let last = trace.steps.last().expect("nonempty trace");
    let pts: Vec<&GridSample> = last.samples.iter().filter(|s| s.is_ok() && s.xi.norm() <= xi).collect();
    let sup = pts.iter().map(|s| s.sph).fold(0.0, f64::max);
    let threshold = 1.0 + slack;
    CheckOutcome {
        check: name.into(),
        pass: sup <= threshold,
        measured: sup,
        threshold,
        points_checked: pts.len(),
        unresolved: 0,
        violations: pts.iter().filter(|s| s.sph > threshold).map(|s| (last.n, s.xi)).collect(),
        detail: format!("sup of g# on |xi| <= {xi} at step {}", last.n),
    }
}

/// Every sample keeps chordal distance at least `delta` from `a`.
pub fn check_inherited_omission(trace: &RescalingTrace, a: &ExtendedComplex, delta: f64) -> CheckOutcome {
    let mut worst = f64::INFINITY;
    let mut checked = 0;
    let mut violations = Vec::new();
    for step in final_two(trace) {
        for s in &step.samples {
            let Some(v) = s.value() else { continue };
            checked += 1;
            let d = v.chordal(a);
            worst = worst.min(d);
            if d < delta {
                violations.push((step.n, s.xi));
            }
        }
    }
    CheckOutcome {
        check: "inherited_omission".into(),
        pass: violations.is_empty() && checked > 0,
        measured: worst,
        threshold: delta,
        points_checked: checked,
        unresolved: 0,
        violations,
        detail: format!("minimal chordal distance to {a} over the final two steps"),
    }
}

/// Near `b`: `|g_n' - ρ_n b| ≤ delta (1 + |b|)`.
pub fn check_inherited_b(trace: &RescalingTrace, b: Complex64, delta: f64) -> CheckOutcome {
    let target = ExtendedComplex::Finite(b);
    let threshold = delta * (1.0 + b.norm());
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    let mut unresolved = 0;
    let mut violations = Vec::new();
    for step in final_two(trace) {
        let (pts, miss) = near_level(trace, step, &target, delta);
        unresolved += miss;
        for s in pts {
            let Some(d) = s.derivs_for(&target) else { continue };
            checked += 1;
            let dev = (d[1] - b * step.rho_n).norm();
            worst = worst.max(dev);
            if dev > threshold {
                violations.push((step.n, s.xi));
            }
        }
    }
    CheckOutcome {
        check: "inherited_b".into(),
        pass: violations.is_empty(),
        measured: worst,
        threshold,
        points_checked: checked,
        unresolved,
        violations,
        detail: format!("max |g' - rho*b| at points within {delta} of b = {target}"),
    }
}

/// Near `c`: `|g_n^(k)| ≤ ρ_n^k M + tol` for `k = 1..m-1` (on `1/g` for infinity).
pub fn check_inherited_c(
    trace: &RescalingTrace,
    c: &ExtendedComplex,
    m: usize,
    bound: f64,
    delta: f64,
    tol: f64,
) -> CheckOutcome {
    let name = "inherited_c";
    if m < 2 || m - 1 > trace.k_max {
        return CheckOutcome::fail(name, format!("m = {m} needs derivatives beyond k_max = {}", trace.k_max));
    }
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    let mut unresolved = 0;
    let mut violations = Vec::new();
    for step in final_two(trace) {
        let (pts, miss) = near_level(trace, step, c, delta);
        unresolved += miss;
        for s in pts {
            let Some(d) = s.derivs_for(c) else { continue };
            checked += 1;
            let mut bad = false;
            for (k, dk) in d.iter().enumerate().take(m).skip(1) {
                let excess = dk.norm() - step.rho_n.powi(k as i32) * bound;
                worst = worst.max(excess);
                bad |= excess > tol;
            }
            if bad {
                violations.push((step.n, s.xi));
            }
        }
    }
    CheckOutcome {
        check: name.into(),
        pass: violations.is_empty(),
        measured: worst,
        threshold: tol,
        points_checked: checked,
        unresolved,
        violations,
        detail: format!("max over k < {m} of |g^(k)| - rho^k M at points within {delta} of {c}"),
    }
}

/// CSV of one step: `xi_re,xi_im,g_re,g_im,sph,g1_re,g1_im,...` on the value chart.
pub fn write_step_csv<W: Write>(mut w: W, trace: &RescalingTrace, step: &TraceStep) -> io::Result<()> {
    let mut header = vec!["xi_re".to_string(), "xi_im".into(), "g_re".into(), "g_im".into(), "sph".into()];
    for k in 1..=trace.k_max {
        header.push(format!("g{k}_re"));
        header.push(format!("g{k}_im"));
    }
    writeln!(w, "{}", header.join(","))?;
    let finite = ExtendedComplex::Finite(Complex64::new(0.0, 0.0));
    for s in &step.samples {
        let mut row = vec![format!("{:?}", s.xi.re), format!("{:?}", s.xi.im)];
        match s.derivs_for(&finite) {
            Some(d) if s.is_ok() => {
                row.push(format!("{:?}", d[0].re));
                row.push(format!("{:?}", d[0].im));
                row.push(format!("{:?}", s.sph));
                for k in 1..=trace.k_max {
                    let v = d.get(k).copied().unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                    row.push(format!("{:?}", v.re));
                    row.push(format!("{:?}", v.im));
                }
            }
            _ => {
                let (g, sph) = if s.is_ok() { ("inf", format!("{:?}", s.sph)) } else { ("NaN", "NaN".into()) };
                row.push(g.into());
                row.push(g.into());
                row.push(sph);
                for _ in 0..2 * trace.k_max {
                    row.push("NaN".into());
                }
            }
        }
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}
