//! Weierstrass `℘` and `℘'` from cubic data.
//!
//! Evaluation uses the Laurent expansion at the origin on a small disk, then
//! repeated duplication of the pair `(℘, ℘')` to reach the requested argument.
//! No period lattice is ever computed.

use crate::extended::ExtendedComplex;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialFnError {
    #[error("degenerate cubic: discriminant g2^3 - 27 g3^2 vanishes")]
    Degenerate,
    #[error("series order {0} below minimum 10")]
    SeriesOrder(usize),
    #[error("argument needs {needed} duplication steps, cap is {cap}")]
    TooManySteps { needed: usize, cap: usize },
}

pub const DEFAULT_SERIES_ORDER: usize = 24;
pub const DEFAULT_DUPLICATION_CAP: usize = 64;
const MAX_SERIES_RADIUS: f64 = 0.5;

/// Normal-form invariants plus the substitution constant of the original cubic.
///
/// The values returned by [`wp_pair`] satisfy the original cubic,
/// `(℘')² = 4℘³ + α℘² + β℘ + γ`, i.e. they equal `X - shift` where `X` solves
/// the normal form `(X')² = 4X³ - g2 X - g3`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassParams {
    pub g2: Complex64,
    pub g3: Complex64,
    pub shift: Complex64,
    pub series_order: usize,
    /// Upper bound on the number of duplications per evaluation.
    pub duplication_steps: usize,
    laurent: Vec<Complex64>,
    series_radius: f64,
}

impl WeierstrassParams {
    pub fn new(g2: Complex64, g3: Complex64) -> Result<Self, SpecialFnError> {
        Self::with_options(
            g2,
            g3,
            Complex64::new(0.0, 0.0),
            DEFAULT_SERIES_ORDER,
            DEFAULT_DUPLICATION_CAP,
        )
    }

    pub fn with_options(
        g2: Complex64,
        g3: Complex64,
        shift: Complex64,
        series_order: usize,
        duplication_steps: usize,
    ) -> Result<Self, SpecialFnError> {
        if series_order < 10 {
            return Err(SpecialFnError::SeriesOrder(series_order));
        }
        let disc = g2 * g2 * g2 - 27.0 * g3 * g3;
        let scale = g2.norm().powi(3) + 27.0 * g3.norm_sqr();
        if scale == 0.0 || disc.norm() <= 1e-12 * scale {
            return Err(SpecialFnError::Degenerate);
        }
        let laurent = laurent_coefficients(g2, g3, series_order);
        let series_radius = series_radius(&laurent);
        Ok(Self {
            g2,
            g3,
            shift,
            series_order,
            duplication_steps,
            laurent,
            series_radius,
        })
    }

    /// Radius of the disk on which the truncated Laurent series is used.
    pub fn series_radius(&self) -> f64 {
        self.series_radius
    }

    /// Evaluates the original-cubic polynomial `4x³ + αx² + βx + γ` at `x`.
    pub fn cubic(&self, x: Complex64) -> Complex64 {
        // 4X³ - g2 X - g3 with X = x + shift
        let xx = x + self.shift;
        4.0 * xx * xx * xx - self.g2 * xx - self.g3
    }

    /// Normal-form pair `(X, X')` before the shift is applied.
    fn normal_pair(&self, z: Complex64) -> Result<Option<(Complex64, Complex64)>, SpecialFnError> {
        if z == Complex64::new(0.0, 0.0) {
            return Ok(None);
        }
        let mut steps = 0usize;
        let mut w = z;
        while w.norm() > self.series_radius {
            w /= 2.0;
            steps += 1;
        }
        if steps > self.duplication_steps {
            return Err(SpecialFnError::TooManySteps {
                needed: steps,
                cap: self.duplication_steps,
            });
        }
        let (mut p, mut dp) = self.laurent_pair(w);
        for _ in 0..steps {
            match self.duplicate(p, dp) {
                Some(next) => (p, dp) = next,
                None => return Ok(None),
            }
        }
        if finite(p) && finite(dp) {
            Ok(Some((p, dp)))
        } else {
            Ok(None)
        }
    }

    fn laurent_pair(&self, w: Complex64) -> (Complex64, Complex64) {
        let w2 = w * w;
        let mut p = w2.inv();
        let mut dp = -2.0 / (w2 * w);
        // ℘ - w^-2 = Σ_{k>=2} c_k w^(2k-2)
        let mut pow = w2; // w^(2k-2) for k = 2
        for (idx, c) in self.laurent.iter().enumerate() {
            let k = idx + 2;
            p += c * pow;
            dp += c * (2.0 * k as f64 - 2.0) * pow / w;
            pow *= w2;
        }
        (p, dp)
    }

    fn duplicate(&self, p: Complex64, dp: Complex64) -> Option<(Complex64, Complex64)> {
        if dp == Complex64::new(0.0, 0.0) || !finite(p) || !finite(dp) {
            return None;
        }
        let ddp = 6.0 * p * p - self.g2 / 2.0;
        let slope = ddp / dp;
        let p2 = slope * slope / 4.0 - 2.0 * p;
        let dp2 = -(dp + slope * (p2 - p));
        if finite(p2) && finite(dp2) {
            Some((p2, dp2))
        } else {
            None
        }
    }

    /// Local behaviour of `℘` around `u0`.
    pub fn local(&self, u0: Complex64, order: usize) -> Result<WpLocal, SpecialFnError> {
        match self.normal_pair(u0)? {
            Some((p, dp)) => {
                let a = self.taylor_from_pair(p, dp, order + 1);
                Ok(WpLocal::Regular(a))
            }
            None => Ok(WpLocal::Lattice),
        }
    }

    /// Taylor coefficients of the shifted `℘` at a regular point, via the
    /// recurrence implied by `℘'' = 6℘² - g2/2`.
    fn taylor_from_pair(&self, p: Complex64, dp: Complex64, order: usize) -> Vec<Complex64> {
        let mut a = vec![Complex64::new(0.0, 0.0); order + 1];
        a[0] = p;
        if order >= 1 {
            a[1] = dp;
        }
        for k in 0..order.saturating_sub(1) {
            let mut conv = Complex64::new(0.0, 0.0);
            for i in 0..=k {
                conv += a[i] * a[k - i];
            }
            let mut rhs = 6.0 * conv;
            if k == 0 {
                rhs -= self.g2 / 2.0;
            }
            a[k + 2] = rhs / (((k + 2) * (k + 1)) as f64);
        }
        a[0] -= self.shift;
        a
    }

    /// Laurent coefficients `c_k`, `k = 2..=series_order`, of the normal-form `℘`.
    pub fn laurent(&self) -> &[Complex64] {
        &self.laurent
    }
}

/// `℘` near a point: Taylor coefficients of the shifted `℘` (enough for `℘'`
/// at the requested order), or a lattice point where both have poles.
#[derive(Clone, Debug, PartialEq)]
pub enum WpLocal {
    Regular(Vec<Complex64>),
    Lattice,
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn laurent_coefficients(g2: Complex64, g3: Complex64, order: usize) -> Vec<Complex64> {
    // c[k] for k = 2..=order, stored at index k
    let mut c = vec![Complex64::new(0.0, 0.0); order + 1];
    c[2] = g2 / 20.0;
    c[3] = g3 / 28.0;
    for k in 4..=order {
        let mut s = Complex64::new(0.0, 0.0);
        for m in 2..=k - 2 {
            s += c[m] * c[k - m];
        }
        c[k] = s * 3.0 / (((2 * k + 1) * (k - 3)) as f64);
    }
    c.drain(..2);
    c
}

fn series_radius(laurent: &[Complex64]) -> f64 {
    // crude root test on the upper half of the coefficients
    let n = laurent.len();
    let mut radius = f64::INFINITY;
    for (idx, c) in laurent.iter().enumerate().skip(n / 2) {
        let k = idx + 2;
        let m = c.norm();
        if m > 0.0 {
            radius = radius.min(m.powf(-1.0 / (2.0 * k as f64)));
        }
    }
    (0.45 * radius).min(MAX_SERIES_RADIUS)
}

/// Reduces `4x³ + αx² + βx + γ` to normal form via `x = X - α/12`.
pub fn params_from_cubic(
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
) -> Result<WeierstrassParams, SpecialFnError> {
    let s = alpha / 12.0;
    let g2 = 12.0 * s * s - beta;
    let g3 = -8.0 * s * s * s + beta * s - gamma;
    WeierstrassParams::with_options(g2, g3, s, DEFAULT_SERIES_ORDER, DEFAULT_DUPLICATION_CAP)
}

/// Parameters for `(℘')² = 4℘(℘ - a)(℘ - b)`.
pub fn params_from_roots(a: Complex64, b: Complex64) -> Result<WeierstrassParams, SpecialFnError> {
    params_from_cubic(-4.0 * (a + b), 4.0 * a * b, Complex64::new(0.0, 0.0))
}

/// `(℘(z), ℘'(z))` with the shift applied; both `Infinity` at lattice points.
pub fn wp_pair(
    params: &WeierstrassParams,
    z: Complex64,
) -> Result<(ExtendedComplex, ExtendedComplex), SpecialFnError> {
    match params.normal_pair(z)? {
        Some((p, dp)) => Ok((
            ExtendedComplex::Finite(p - params.shift),
            ExtendedComplex::Finite(dp),
        )),
        None => Ok((ExtendedComplex::Infinity, ExtendedComplex::Infinity)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn residual(params: &WeierstrassParams, z: Complex64) -> f64 {
        let (p, dp) = wp_pair(params, z).unwrap();
        let (p, dp) = (p.as_finite().unwrap(), dp.as_finite().unwrap());
        (dp * dp - params.cubic(p)).norm() / (1.0 + p.norm().powi(3))
    }

    #[test]
    fn normal_form_from_pure_cubic() {
        let p = params_from_cubic(c(0.0, 0.0), c(0.0, 0.0), c(2.5, 0.0)).unwrap();
        assert_eq!(p.g2, c(0.0, 0.0));
        assert_eq!(p.g3, c(-2.5, 0.0));
        assert_eq!(p.shift, c(0.0, 0.0));
    }

    #[test]
    fn normal_form_symmetric_roots() {
        let a = c(1.5, 0.0);
        let p = params_from_roots(a, -a).unwrap();
        assert!((p.g2 - 4.0 * a * a).norm() < 1e-14);
        assert!(p.g3.norm() < 1e-14);
        assert_eq!(p.shift, c(0.0, 0.0));
    }

    #[test]
    fn normal_form_general_roots_satisfies_original_cubic() {
        let (a, b) = (c(1.0, 0.0), c(-0.3, 0.7));
        let p = params_from_roots(a, b).unwrap();
        assert!((p.shift + (a + b) / 3.0).norm() < 1e-15);
        for z in [c(0.3, 0.2), c(-0.7, 0.4), c(1.1, -0.2)] {
            let (w, dw) = wp_pair(&p, z).unwrap();
            let (w, dw) = (w.as_finite().unwrap(), dw.as_finite().unwrap());
            let original = 4.0 * w * (w - a) * (w - b);
            assert!((dw * dw - original).norm() / (1.0 + w.norm().powi(3)) < 1e-9);
        }
    }

    #[test]
    fn degenerate_cubic_rejected() {
        // 4x³ - 3x - 1 = (x - 1)(2x + 1)²
        assert_eq!(
            WeierstrassParams::new(c(3.0, 0.0), c(1.0, 0.0)).unwrap_err(),
            SpecialFnError::Degenerate
        );
        assert!(WeierstrassParams::new(c(0.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn laurent_leading_term() {
        let p = WeierstrassParams::new(c(0.0, 0.0), c(-1.0, 0.0)).unwrap();
        let z = c(1e-3, 0.0);
        let (w, _) = wp_pair(&p, z).unwrap();
        assert!((z * z * w.as_finite().unwrap() - 1.0).norm() <= 1e-6);
        assert_eq!(
            wp_pair(&p, c(0.0, 0.0)).unwrap(),
            (ExtendedComplex::Infinity, ExtendedComplex::Infinity)
        );
    }

    #[test]
    fn ode_residual_example_point() {
        let p = WeierstrassParams::new(c(0.0, 0.0), c(-1.0, 0.0)).unwrap();
        assert!(residual(&p, c(0.3, 0.2)) <= 1e-9);
    }

    #[test]
    fn second_derivative_identity() {
        let p = WeierstrassParams::new(c(0.4, -0.1), c(-1.0, 0.3)).unwrap();
        let z = c(0.6, 0.35);
        let h = 1e-6;
        let (w, dw) = wp_pair(&p, z).unwrap();
        let (_, dw_h) = wp_pair(&p, z + h).unwrap();
        let fd = (dw_h.as_finite().unwrap() - dw.as_finite().unwrap()) / h;
        let w = w.as_finite().unwrap();
        let exact = 6.0 * w * w - p.g2 / 2.0;
        assert!((fd - exact).norm() / exact.norm() <= 1e-5);
    }

    #[test]
    fn random_invariants_residual_and_parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let g2 = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let g3 = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let p = WeierstrassParams::new(g2, g3).unwrap();
            for _ in 0..100 {
                let r = rng.gen_range(0.05..1.5);
                let t = rng.gen_range(0.0..std::f64::consts::TAU);
                let z = Complex64::from_polar(r, t);
                let (w, dw) = wp_pair(&p, z).unwrap();
                let (wm, dwm) = wp_pair(&p, -z).unwrap();
                let (w, dw) = (w.as_finite().unwrap(), dw.as_finite().unwrap());
                let (wm, dwm) = (wm.as_finite().unwrap(), dwm.as_finite().unwrap());
                let res = (dw * dw - p.cubic(w)).norm() / (1.0 + w.norm().powi(3));
                assert!(res <= 1e-8, "residual {res} at {z} for g2={g2} g3={g3}");
                assert!((w - wm).norm() <= 1e-9 * (1.0 + w.norm()));
                assert!((dw + dwm).norm() <= 1e-9 * (1.0 + dw.norm()));
            }
        }
    }

    #[test]
    fn taylor_recurrence_matches_pair() {
        let p = WeierstrassParams::new(c(0.5, 0.0), c(0.2, 0.1)).unwrap();
        let z = c(0.4, 0.3);
        let WpLocal::Regular(a) = p.local(z, 3).unwrap() else {
            panic!("unexpected lattice point");
        };
        let (w, dw) = wp_pair(&p, z).unwrap();
        assert!((a[0] - w.as_finite().unwrap()).norm() < 1e-15);
        assert!((a[1] - dw.as_finite().unwrap()).norm() < 1e-15);
        // c_3 = ℘'''/6 = 12 ℘ ℘' / 6
        assert!((a[3] - 2.0 * a[0] * a[1]).norm() < 1e-12 * (1.0 + a[3].norm()));
    }
}
