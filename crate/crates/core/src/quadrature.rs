//! Adaptive composite Gauss-Legendre quadrature for complex-valued integrands
//! on `(0, 1]` that may carry an integrable singularity at `s = 0`.
//!
//! `(0, 1]` is cut into dyadic panels `[2^{-j-1}, 2^{-j}]`. Each panel is
//! integrated by recursive bisection, comparing one 20-point rule against the
//! two 20-point rules on its halves. Panels are added until the contributions
//! toward the origin are negligible.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Result, StarlabError};

const RULE_POINTS: usize = 20;
const MAX_DEPTH: u32 = 20;
const MAX_PANELS: usize = 1060;

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Nodes and weights on `[-1, 1]` via Newton iteration on `P_n`.
fn legendre_rule(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(RULE_POINTS))
}

fn gauss<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Complex64 {
    let r = rule();
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    r.nodes
        .iter()
        .zip(&r.weights)
        .fold(Complex64::default(), |acc, (&x, &w)| acc + f(mid + half * x) * w)
        * half
}

fn adaptive<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Result<Complex64> {
    let m = 0.5 * (a + b);
    let left = gauss(f, a, m);
    let right = gauss(f, m, b);
    let split = left + right;
    // below ~1e-14 relative the comparison only sees rounding noise
    if (split - whole).norm() <= tol.max(1e-14 * split.norm()) {
        return Ok(split);
    }
    if depth >= MAX_DEPTH {
        return Err(StarlabError::QuadratureNonConvergence { a, b });
    }
    Ok(adaptive(f, a, m, left, 0.5 * tol, depth + 1)? + adaptive(f, m, b, right, 0.5 * tol, depth + 1)?)
}

/// Adaptive Gauss-Legendre on a finite interval.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Result<Complex64> {
    let whole = gauss(&f, a, b);
    adaptive(&f, a, b, whole, tol, 0)
}

/// Integral over `(0, 1]` with geometric refinement toward the origin.
pub fn integrate_unit_interval<F: Fn(f64) -> Complex64>(f: F, tol: f64) -> Result<Complex64> {
    let mut total = Complex64::default();
    let mut quiet = 0;
    let mut hi = 1.0_f64;
    for _ in 0..MAX_PANELS {
        let lo = 0.5 * hi;
        let whole = gauss(&f, lo, hi);
        let part = adaptive(&f, lo, hi, whole, tol, 0)?;
        total += part;
        if part.norm() <= 1e-17 * total.norm().max(tol) {
            quiet += 1;
            if quiet >= 4 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
        hi = lo;
        if hi == 0.0 {
            break;
        }
    }
    Err(StarlabError::QuadratureNonConvergence { a: 0.0, b: hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let r = rule();
        let s: f64 = r.weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(38)).sum();
        assert!((m - 2.0 / 39.0).abs() < 1e-14);
    }

    #[test]
    fn inverse_square_root_singularity() {
        let v = integrate_unit_interval(|s| Complex64::new(s.powf(-0.5), 0.0), 1e-14).unwrap();
        assert!((v.re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn logarithmic_kernel() {
        // int_0^1 (-ln s)^2 s^{0.3} ds = 2 / 1.3^3
        let v = integrate_unit_interval(|s| Complex64::new((-s.ln()).powi(2) * s.powf(0.3), 0.0), 1e-14).unwrap();
        assert!((v.re - 2.0 / 1.3f64.powi(3)).abs() < 1e-12);
    }

    #[test]
    fn peaked_integrand_near_one() {
        // int_0^1 (1 - 0.99 s)^{-2} ds = 1/(1 - 0.99)
        let v = integrate_unit_interval(|s| Complex64::new((1.0 - 0.99 * s).powi(-2), 0.0), 1e-13).unwrap();
        assert!((v.re - 100.0).abs() < 1e-9);
    }

    #[test]
    fn nonintegrable_fails() {
        assert!(integrate_unit_interval(|s| Complex64::new(1.0 / s, 0.0), 1e-12).is_err());
    }
}
