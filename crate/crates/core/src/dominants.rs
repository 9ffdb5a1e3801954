//! Best dominants for `p + z p'/(mu + p) < h` with the half-plane target
//! `h(z) = (1 + (1 - 2 lambda0) z)/(1 - z)`.
//!
//! Two independent constructions of the dominant `q` are provided:
//!
//! * [`FormalSolution`] builds `H`, `F` and `q = (1 + mu) H/F - mu` as
//!   truncated series from `h` alone (exp of a termwise integral, then a
//!   second termwise integral).
//! * [`best_dominant_q`] evaluates the closed expression
//!   `q(z) = z^{1+mu} (1-z)^{-a} / int_0^z t^mu (1-t)^{-a} dt - mu`,
//!   `a = 2 (1 - lambda0)`, with the integral done by quadrature along
//!   `t = s z`, so that `z^{1+mu}` cancels and no branch choice is needed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, StarlabError};
use crate::quadrature;
use crate::series::{AnalyticElement, TruncatedSeries};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const QUAD_TOL: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominantSpec {
    mu: f64,
    lambda0: f64,
}

impl DominantSpec {
    pub fn new(mu: f64, lambda0: f64) -> Result<Self> {
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(StarlabError::InvalidParams(format!("mu = {mu} must be >= 0")));
        }
        if !(0.0..1.0).contains(&lambda0) {
            return Err(StarlabError::InvalidParams(format!(
                "lambda0 = {lambda0} must lie in [0, 1)"
            )));
        }
        Ok(Self { mu, lambda0 })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    /// Always 1 for the relation between consecutive operator levels.
    pub fn eta(&self) -> f64 {
        1.0
    }

    /// `2 (1 - lambda0)`.
    pub fn exponent(&self) -> f64 {
        2.0 * (1.0 - self.lambda0)
    }
}

/// Mobius map of the disk onto `Re w > lambda0` with `h(0) = 1`.
pub fn halfplane_h(lambda0: f64, z: Complex64) -> Complex64 {
    (ONE + z * (1.0 - 2.0 * lambda0)) / (ONE - z)
}

/// Series form of the dominant obtained from `h` through `H` and `F`.
#[derive(Clone, Debug)]
pub struct FormalSolution {
    pub spec: DominantSpec,
    /// `H(z)/z`.
    pub h_unit: TruncatedSeries,
    /// `F(z)/z`.
    pub f_unit: TruncatedSeries,
    pub q: TruncatedSeries,
}

impl FormalSolution {
    pub fn build(spec: DominantSpec, order: usize) -> Result<Self> {
        let n = order + 1;
        let l0 = spec.lambda0;
        let num = TruncatedSeries::new(vec![ONE, Complex64::new(1.0 - 2.0 * l0, 0.0)])?;
        let num = {
            let mut c = num.into_coeffs();
            c.resize(n + 1, Complex64::default());
            TruncatedSeries::new(c)?
        };
        let den = {
            let mut c = vec![Complex64::default(); n + 1];
            c[0] = ONE;
            c[1] = -ONE;
            TruncatedSeries::new(c)?
        };
        let h = num.div(&den)?;
        // H/z = exp(int_0^z (h(t) - 1)/t dt)
        let h_unit = h.shift_down().antiderivative().exp();
        // F = (1 + mu) z^{-mu} int_0^z t^{mu-1} H(t) dt, with t^{mu-1} H = t^mu (H/t)
        let integrand = AnalyticElement::new(spec.mu, h_unit.clone())?;
        let f = integrand
            .integrate_termwise()?
            .mul_monomial(Complex64::new(1.0 + spec.mu, 0.0), Complex64::new(-spec.mu, 0.0));
        debug_assert!((f.head() - ONE).norm() < 1e-12);
        let f_unit = f.unit().scale(f.scale());
        let q = h_unit
            .div(&f_unit)?
            .scale(Complex64::new(1.0 + spec.mu, 0.0))
            .sub(&TruncatedSeries::constant(Complex64::new(spec.mu, 0.0), order));
        Ok(Self {
            spec,
            h_unit,
            f_unit,
            q,
        })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.q.eval(z)
    }
}

/// `q(z)` through the series construction at truncation order `order`.
pub fn lemma2_pipeline(spec: DominantSpec, z: Complex64, order: usize) -> Result<Complex64> {
    if z.norm() > 0.99 {
        return Err(StarlabError::InvalidInput(format!("|z| = {} exceeds 0.99", z.norm())));
    }
    Ok(FormalSolution::build(spec, order)?.eval(z))
}

/// `q(z)` from the closed expression with the integral done by quadrature.
pub fn best_dominant_q(spec: DominantSpec, z: Complex64) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(StarlabError::OutsideDisk(z));
    }
    if z == Complex64::default() {
        return Ok(ONE);
    }
    let a = spec.exponent();
    let mu = spec.mu;
    let integrand = |s: f64| {
        let w = (ONE - z * s).powf(-a);
        if mu == 0.0 {
            w
        } else {
            w * s.powf(mu)
        }
    };
    // s^mu is smooth for integer mu; otherwise refine toward s = 0
    let integral = if mu.fract() == 0.0 {
        quadrature::integrate(integrand, 0.0, 1.0, QUAD_TOL)?
    } else {
        quadrature::integrate_unit_interval(integrand, QUAD_TOL)?
    };
    Ok((ONE - z).powf(-a) / integral - mu)
}

/// `q` for `mu = 0`, `lambda0 = 0`.
pub fn q_closed_mu0(z: Complex64) -> Complex64 {
    ONE / (ONE - z)
}

/// `q` for `mu = 1`, `lambda0 = 0`:
/// `z^2 / ((1 - z) [(1 - z) ln(1 - z) + z]) - 1`.
pub fn q_closed_mu1(z: Complex64) -> Complex64 {
    // (1 - z) ln(1 - z) + z = sum_{k>=2} z^k / (k (k - 1)); the series avoids
    // cancellation near the origin
    let bracket_over_z2 = if z.norm() < 0.1 {
        let mut acc = Complex64::default();
        let mut p = ONE;
        for k in 2..40 {
            acc += p / (k * (k - 1)) as f64;
            p *= z;
        }
        acc
    } else {
        ((ONE - z) * (ONE - z).ln() + z) / (z * z)
    };
    ONE / ((ONE - z) * bracket_over_z2) - 1.0
}

/// The closed forms above when available.
pub fn q_closed_form(spec: DominantSpec) -> Option<fn(Complex64) -> Complex64> {
    match (spec.mu, spec.lambda0) {
        (m, l) if m == 0.0 && l == 0.0 => Some(q_closed_mu0),
        (m, l) if m == 1.0 && l == 0.0 => Some(q_closed_mu1),
        _ => None,
    }
}

/// Max of `|q + z q'/(mu + q) - h|` over `r in {0.2, 0.5, 0.8}` and 64
/// angles, with `q'` by central differences (step `1e-5`) and one
/// Richardson step.
pub fn verify_ode4(spec: DominantSpec) -> Result<f64> {
    let step = 1e-5;
    let q = |z: Complex64| best_dominant_q(spec, z);
    let central = |z: Complex64, h: f64| -> Result<Complex64> { Ok((q(z + h)? - q(z - h)?) / (2.0 * h)) };
    let mut worst: f64 = 0.0;
    for &r in &[0.2, 0.5, 0.8] {
        for j in 0..64 {
            let z = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / 64.0);
            let d = (central(z, 0.5 * step)? * 4.0 - central(z, step)?) / 3.0;
            let qz = q(z)?;
            let lhs = qz + z * d / (qz + spec.mu);
            worst = worst.max((lhs - halfplane_h(spec.lambda0, z)).norm());
        }
    }
    Ok(worst)
}

/// `(3 - 4 ln 2) / (2 (2 ln 2 - 1))`.
pub fn mu1_sharp_constant() -> f64 {
    let l2 = std::f64::consts::LN_2;
    (3.0 - 4.0 * l2) / (2.0 * (2.0 * l2 - 1.0))
}

/// How [`rho_limit`] arrived at its value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoLimit {
    pub value: f64,
    pub closed_form: bool,
    /// `q(-r_k)` for `r_k = 1 - 2^{-k}`, empty for closed forms.
    pub samples: Vec<(f64, f64)>,
    pub last_change: f64,
}

/// `lim_{r -> 1-} q(-r)`.
///
/// Closed forms for `(mu, lambda0) = (0, 0)` and `(1, 0)`. Otherwise `q(-r)`
/// is sampled at `r_k = 1 - 2^{-k}`, `k = 4..12`, and extrapolated to
/// `1 - r = 0` with a Richardson tableau in `1 - r`.
pub fn rho_limit(spec: DominantSpec) -> Result<RhoLimit> {
    if spec.lambda0 == 0.0 && spec.mu == 0.0 {
        return Ok(RhoLimit {
            value: 0.5,
            closed_form: true,
            samples: Vec::new(),
            last_change: 0.0,
        });
    }
    if spec.lambda0 == 0.0 && spec.mu == 1.0 {
        return Ok(RhoLimit {
            value: mu1_sharp_constant(),
            closed_form: true,
            samples: Vec::new(),
            last_change: 0.0,
        });
    }
    rho_limit_extrapolated(spec)
}

/// [`rho_limit`] without the closed-form shortcuts.
pub fn rho_limit_extrapolated(spec: DominantSpec) -> Result<RhoLimit> {
    let mut samples = Vec::new();
    for k in 4..=12 {
        let r = 1.0 - (0.5f64).powi(k);
        samples.push((r, best_dominant_q(spec, Complex64::new(-r, 0.0))?.re));
    }
    let (value, last_change) = richardson_limit(&samples);
    if !(last_change < 1e-7) {
        return Err(StarlabError::ExtrapolationUnstable(last_change));
    }
    Ok(RhoLimit {
        value,
        closed_form: false,
        samples,
        last_change,
    })
}

/// Richardson tableau for samples at step `1 - r` halving each time; returns
/// the last diagonal entry and its change from the previous one.
fn richardson_limit(samples: &[(f64, f64)]) -> (f64, f64) {
    let mut prev_row: Vec<f64> = Vec::new();
    let mut diag = Vec::new();
    for &(_, v) in samples {
        let mut row = vec![v];
        for j in 1..=prev_row.len() {
            let f = (2.0f64).powi(j as i32);
            let t = (f * row[j - 1] - prev_row[j - 1]) / (f - 1.0);
            row.push(t);
        }
        diag.push(*row.last().unwrap());
        prev_row = row;
    }
    let n = diag.len();
    (diag[n - 1], (diag[n - 1] - diag[n - 2]).abs())
}

/// Samples of `q(r e^{i theta})` on a uniform grid of `count` angles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominantCurve {
    pub r: f64,
    pub thetas: Vec<f64>,
    pub samples: Vec<Complex64>,
}

impl DominantCurve {
    pub fn sample(spec: DominantSpec, r: f64, count: usize) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(StarlabError::InvalidInput(format!("radius {r} outside (0, 1)")));
        }
        let thetas: Vec<f64> = (0..count)
            .map(|j| 2.0 * std::f64::consts::PI * j as f64 / count as f64)
            .collect();
        let samples = thetas
            .iter()
            .map(|&t| best_dominant_q(spec, Complex64::from_polar(r, t)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { r, thetas, samples })
    }

    /// Index of the sample with the smallest real part.
    pub fn argmin_re(&self) -> usize {
        self.samples
            .iter()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |(bi, bv), (i, s)| if s.re < bv { (i, s.re) } else { (bi, bv) },
            )
            .0
    }

    /// `theta,re_q,im_q` rows, closed by repeating the first sample at `2 pi`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,re_q,im_q\n");
        for (t, s) in self.thetas.iter().zip(&self.samples) {
            out.push_str(&format!("{t:.17e},{:.17e},{:.17e}\n", s.re, s.im));
        }
        if let Some(first) = self.samples.first() {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e}\n",
                2.0 * std::f64::consts::PI,
                first.re,
                first.im
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(mu: f64, l0: f64) -> DominantSpec {
        DominantSpec::new(mu, l0).unwrap()
    }

    #[test]
    fn halfplane_examples() {
        assert_eq!(halfplane_h(0.3, Complex64::default()), ONE);
        let r = 0.4;
        let v = halfplane_h(0.0, Complex64::new(-r, 0.0));
        assert!((v.re - (1.0 - r) / (1.0 + r)).abs() < 1e-15);
        for i in 0..100 {
            for j in 0..100 {
                let z = Complex64::from_polar(0.999 * i as f64 / 99.0, j as f64 * 0.0628);
                assert!(halfplane_h(0.3, z).re > 0.3);
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(DominantSpec::new(-0.1, 0.0).is_err());
        assert!(DominantSpec::new(0.0, 1.0).is_err());
        assert_eq!(spec(1.0, 0.25).eta(), 1.0);
    }

    #[test]
    fn q_at_origin() {
        for &(m, l) in &[(0.0, 0.0), (0.5, 0.25), (2.0, 0.0)] {
            assert_eq!(best_dominant_q(spec(m, l), Complex64::default()).unwrap(), ONE);
            let s = FormalSolution::build(spec(m, l), 64).unwrap();
            assert!((s.q.coeff(0) - ONE).norm() < 1e-14);
        }
    }

    #[test]
    fn mu0_value() {
        let v = best_dominant_q(spec(0.0, 0.0), Complex64::new(-0.5, 0.0)).unwrap();
        assert!((v.re - 1.0 / 1.5).abs() < 1e-13);
    }

    #[test]
    fn pipeline_reproduces_closed_forms() {
        let s0 = FormalSolution::build(spec(0.0, 0.0), 512).unwrap();
        let s1 = FormalSolution::build(spec(1.0, 0.0), 512).unwrap();
        for i in 1..=9 {
            for j in 0..24 {
                let z = Complex64::from_polar(0.1 * i as f64, j as f64 * 0.2618);
                assert!((s0.eval(z) - q_closed_mu0(z)).norm() < 1e-10);
                assert!((s1.eval(z) - q_closed_mu1(z)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let z = Complex64::new(0.3, 0.6);
        let s = spec(0.5, 0.25);
        let a = best_dominant_q(s, z).unwrap();
        let b = best_dominant_q(s, z.conj()).unwrap();
        assert!((a.conj() - b).norm() < 1e-13);
    }

    #[test]
    fn richardson_recovers_polynomial_limit() {
        let samples: Vec<(f64, f64)> = (4..=12)
            .map(|k| {
                let x = 0.5f64.powi(k);
                (1.0 - x, 0.3 + 2.0 * x - 5.0 * x * x + x * x * x)
            })
            .collect();
        let (v, d) = richardson_limit(&samples);
        assert!((v - 0.3).abs() < 1e-12);
        assert!(d < 1e-12);
    }

    #[test]
    fn curve_csv_is_closed() {
        let c = DominantCurve::sample(spec(0.0, 0.0), 0.9, 64).unwrap();
        let csv = c.to_csv();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[0], "theta,re_q,im_q");
        assert_eq!(rows.len(), 66);
        let first: Vec<&str> = rows[1].split(',').collect();
        let last: Vec<&str> = rows[65].split(',').collect();
        assert_eq!(first[1..], last[1..]);
        let min = c.samples[c.argmin_re()].re;
        assert!((min - 1.0 / 1.9).abs() < 1e-13);
    }
}
