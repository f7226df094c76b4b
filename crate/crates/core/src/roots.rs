//! Simultaneous polynomial root finding (Aberth–Ehrlich iteration).

use num_complex::Complex64;

const MAX_ITER: usize = 500;

fn horner(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for c in p.iter().rev() {
        d = d * z + v;
        v = v * z + c;
    }
    (v, d)
}

/// All complex roots of `p` (ascending coefficients, nonzero leading term).
/// Intended for squarefree inputs of moderate degree.
pub fn roots(p: &[Complex64]) -> Vec<Complex64> {
    let mut p = p.to_vec();
    while p.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
        p.pop();
    }
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n];
    let monic: Vec<Complex64> = p.iter().map(|c| c / lead).collect();
    if n == 1 {
        return vec![-monic[0]];
    }
    // Fujiwara-type radius for the starting circle
    let radius = (0..n)
        .map(|k| monic[k].norm().powf(1.0 / (n - k) as f64))
        .fold(0.0_f64, f64::max)
        .max(1e-3)
        * 2.0;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius * 0.5, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    for _ in 0..MAX_ITER {
        let mut moved = 0.0_f64;
        for k in 0..n {
            let (v, d) = horner(&monic, z[k]);
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = v / d;
            let repulse: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulse);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    // Newton polish on the original coefficients
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (v, d) = horner(&p, *r);
            if d.norm() == 0.0 {
                break;
            }
            let step = v / d;
            if !(step.re.is_finite() && step.im.is_finite()) {
                break;
            }
            *r -= step;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn recovers_planted_roots() {
        let planted = [c(1.0, 0.0), c(-2.0, 0.5), c(0.0, 3.0), c(0.25, -0.25), c(5.0, 5.0)];
        let mut p = vec![c(1.0, 0.0)];
        for r in planted {
            let mut q = vec![c(0.0, 0.0); p.len() + 1];
            for (k, a) in p.iter().enumerate() {
                q[k + 1] += a;
                q[k] -= a * r;
            }
            p = q;
        }
        let found = roots(&p);
        assert_eq!(found.len(), planted.len());
        for r in planted {
            let best = found.iter().map(|z| (z - r).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-10, "root {r} missed by {best}");
        }
    }

    #[test]
    fn low_degrees() {
        assert!(roots(&[c(3.0, 0.0)]).is_empty());
        let r = roots(&[c(2.0, 0.0), c(4.0, 0.0)]);
        assert!((r[0] + 0.5).norm() < 1e-15);
    }
}
