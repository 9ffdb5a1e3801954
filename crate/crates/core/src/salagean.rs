//! The Salagean operator `D^n f = z (D^{n-1} f)'` and the ratio functional
//! `D^{n+1} g / D^n g` that defines the classes `S_n(lambda)`.

use num_complex::Complex64;

use crate::error::{Result, StarlabError};
use crate::series::{AnalyticElement, NormalizedFunction, TruncatedSeries};

/// `D^n` applied to an element; on `z^rho u` each step gives `z^rho (rho u + z u')`.
pub fn salagean_apply(e: &AnalyticElement, n: u32) -> AnalyticElement {
    (0..n).fold(e.clone(), |acc, _| acc.salagean_step())
}

/// `D^n` on a normalized function: `a_k -> k^n a_k`.
pub fn salagean_apply_normalized(f: &NormalizedFunction, n: u32) -> NormalizedFunction {
    map_coeffs(f, |k| (k as f64).powi(n as i32))
}

/// Inverse of `D^n` on class A: `a_k -> a_k / k^n`.
pub fn salagean_inverse(f: &NormalizedFunction, n: u32) -> NormalizedFunction {
    map_coeffs(f, |k| (k as f64).powi(-(n as i32)))
}

fn map_coeffs(f: &NormalizedFunction, factor: impl Fn(usize) -> f64) -> NormalizedFunction {
    let coeffs = f
        .series()
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &c)| if k == 0 { c } else { c * factor(k) })
        .collect();
    NormalizedFunction::new(TruncatedSeries::from_vec(coeffs)).expect("coefficient scaling keeps a_0 = 0 and a_1 = 1")
}

/// `D^{n+1} g / D^n g`, computed on the unit parts.
#[derive(Clone, Debug)]
pub struct SalageanRatio {
    pub numerator: AnalyticElement,
    pub denominator: AnalyticElement,
    /// The quotient as a power series. Its constant term is the head of `g`
    /// (1 for normalized functions).
    pub ratio_series: TruncatedSeries,
    pub n: u32,
}

impl SalageanRatio {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.ratio_series.eval(z)
    }
}

pub fn salagean_ratio(e: &AnalyticElement, n: u32) -> Result<SalageanRatio> {
    let denominator = salagean_apply(e, n);
    let numerator = denominator.salagean_step();
    if (numerator.head() - denominator.head()).norm() > 1e-12 {
        return Err(StarlabError::InvalidInput(format!(
            "D^{} image has a vanishing leading term",
            n + 1
        )));
    }
    if denominator.scale().norm() < 1e-300 {
        return Err(StarlabError::ZeroConstantTerm);
    }
    let q = numerator.unit().div(denominator.unit())?;
    let ratio_series = q.scale(numerator.scale() / denominator.scale());
    Ok(SalageanRatio {
        numerator,
        denominator,
        ratio_series,
        n,
    })
}

pub fn salagean_ratio_normalized(f: &NormalizedFunction, n: u32) -> Result<SalageanRatio> {
    salagean_ratio(&f.as_element(), n)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    fn koebe(order: usize) -> NormalizedFunction {
        let coeffs = (0..=order).map(|k| Complex64::new(k as f64, 0.0)).collect();
        NormalizedFunction::new(TruncatedSeries::new(coeffs).unwrap()).unwrap()
    }

    #[test]
    fn identity_is_fixed() {
        let z = NormalizedFunction::identity(16);
        for n in 0..5 {
            assert_eq!(salagean_apply_normalized(&z, n).series(), z.series());
            assert_eq!(salagean_inverse(&z, n).series(), z.series());
        }
        let r = salagean_ratio_normalized(&z, 3).unwrap();
        assert_eq!(r.ratio_series, TruncatedSeries::one(15));
    }

    #[test]
    fn eigen_action_on_two_term_polynomial() {
        let a2 = Complex64::new(0.3, -0.2);
        let f = NormalizedFunction::new(TruncatedSeries::new(vec![Complex64::default(), ONE, a2]).unwrap()).unwrap();
        let d2 = salagean_apply(&f.as_element(), 2);
        assert!((d2.scaled_coeffs()[1] - a2 * 4.0).norm() < 1e-15);
        assert_eq!(salagean_apply_normalized(&f, 2).coeff(2), a2 * 4.0);
    }

    #[test]
    fn d1_koebe_matches_closed_form() {
        // z (1 + z) / (1 - z)^3 has coefficients k^2
        let f = koebe(128);
        let d1 = salagean_apply(&f.as_element(), 1);
        let coeffs = d1.scaled_coeffs();
        for (i, c) in coeffs.iter().enumerate() {
            let k = (i + 1) as f64;
            assert!((c - Complex64::new(k * k, 0.0)).norm() < 1e-12 * k * k);
        }
    }

    #[test]
    fn inverse_of_koebe_is_geometric() {
        let g = salagean_inverse(&koebe(64), 1);
        for k in 1..=64 {
            assert!((g.coeff(k) - ONE).norm() < 1e-15);
        }
    }

    #[test]
    fn koebe_ratio_is_mobius() {
        let r = salagean_ratio_normalized(&koebe(200), 0).unwrap();
        // (1 + z)/(1 - z) = 1 + 2z + 2z^2 + ...
        assert!((r.ratio_series.coeff(0) - ONE).norm() < 1e-14);
        for k in 1..=199 {
            assert!((r.ratio_series.coeff(k) - Complex64::new(2.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn fractional_power_ratio_is_scaled() {
        let f = koebe(128);
        let alpha = 0.5;
        let fa = f.as_element().pow_real(alpha).unwrap();
        let r = salagean_ratio(&fa, 0).unwrap();
        let base = salagean_ratio_normalized(&f, 0).unwrap();
        let expected = base.ratio_series.scale(Complex64::new(alpha, 0.0));
        assert!(r.ratio_series.max_abs_diff(&expected) < 1e-12);
    }
}
