//! Test-function generators: the extremal starlike functions, Caratheodory
//! functions from discrete Herglotz measures, and members of `S_n(lambda)`
//! obtained by inverting the Salagean operator.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, StarlabError};
use crate::geometry::DiskFunction;
use crate::salagean::salagean_inverse;
use crate::series::{ClosedForm, NormalizedFunction, TruncatedSeries};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const MAX_ATOMS: usize = 16;
pub const MAX_LEVEL: u32 = 6;

/// `z/(1 - z)^{2(1 - lambda)}`, extremal in the starlike class of order `lambda`.
pub fn koebe_lambda(lambda: f64, order: usize) -> Result<NormalizedFunction> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(StarlabError::InvalidInput(format!("lambda = {lambda} outside [0, 1)")));
    }
    NormalizedFunction::from_closed_form(
        ClosedForm {
            factors: vec![(ONE, 2.0 * (1.0 - lambda))],
        },
        order,
    )
}

/// Weights and unimodular points of `p(z) = sum w_j (1 + x_j z)/(1 - x_j z)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HerglotzAtoms {
    atoms: Vec<(f64, Complex64)>,
}

impl HerglotzAtoms {
    pub fn new(atoms: Vec<(f64, Complex64)>) -> Result<Self> {
        if atoms.is_empty() || atoms.len() > MAX_ATOMS {
            return Err(StarlabError::InvalidInput(format!(
                "need 1..={MAX_ATOMS} atoms, got {}",
                atoms.len()
            )));
        }
        if atoms.iter().any(|&(w, x)| !(w > 0.0) || (x.norm() - 1.0).abs() > 1e-12) {
            return Err(StarlabError::InvalidInput(
                "atom weights must be positive and points unimodular".into(),
            ));
        }
        let total: f64 = atoms.iter().map(|a| a.0).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(StarlabError::InvalidInput(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { atoms })
    }

    /// `count` atoms with uniform angles and normalized uniform weights.
    pub fn random<R: Rng>(rng: &mut R, count: usize) -> Result<Self> {
        let raw: Vec<(f64, f64)> = (0..count)
            .map(|_| {
                (
                    rng.random_range(0.05..1.0),
                    rng.random_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        let total: f64 = raw.iter().map(|a| a.0).sum();
        let mut atoms: Vec<(f64, Complex64)> = raw
            .into_iter()
            .map(|(w, t)| (w / total, Complex64::from_polar(1.0, t)))
            .collect();
        // absorb rounding so the weights sum to one
        let sum_rest: f64 = atoms[1..].iter().map(|a| a.0).sum();
        if let Some(first) = atoms.first_mut() {
            first.0 = 1.0 - sum_rest;
        }
        Self::new(atoms)
    }

    pub fn from_seed(seed: u64, count: usize) -> Result<Self> {
        Self::random(&mut ChaCha8Rng::seed_from_u64(seed), count)
    }

    pub fn atoms(&self) -> &[(f64, Complex64)] {
        &self.atoms
    }
}

/// A Caratheodory function given by Herglotz atoms, with its Taylor series.
#[derive(Clone, Debug)]
pub struct PFunction {
    pub atoms: HerglotzAtoms,
    pub series: TruncatedSeries,
}

impl PFunction {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.atoms.atoms.iter().fold(Complex64::default(), |acc, &(w, x)| {
            acc + (ONE + x * z) / (ONE - x * z) * w
        })
    }
}

impl DiskFunction for PFunction {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval(z))
    }
}

/// `p(z) = 1 + sum_k (2 sum_j w_j x_j^k) z^k`.
pub fn p_from_atoms(atoms: &HerglotzAtoms, order: usize) -> PFunction {
    let mut coeffs = vec![Complex64::default(); order + 1];
    coeffs[0] = ONE;
    for &(w, x) in atoms.atoms() {
        let mut p = x;
        for c in coeffs.iter_mut().skip(1) {
            *c += p * (2.0 * w);
            p *= x;
        }
    }
    PFunction {
        atoms: atoms.clone(),
        series: TruncatedSeries::new(coeffs).expect("finite coefficients"),
    }
}

/// Solves `z f'/f = lambda + (1 - lambda) p` by
/// `f = z exp((1 - lambda) int_0^z (p(t) - 1)/t dt)`.
pub fn starlike_from_p(p: &TruncatedSeries, lambda: f64) -> Result<NormalizedFunction> {
    if !p.is_unit_leading() {
        return Err(StarlabError::NotUnitLeading(p.coeff(0)));
    }
    if p.order() == 0 {
        return Ok(NormalizedFunction::identity(1));
    }
    let unit = p
        .shift_down()
        .antiderivative()
        .scale(Complex64::new(1.0 - lambda, 0.0))
        .exp();
    NormalizedFunction::from_unit(&unit)
}

/// `z prod_j (1 - x_j z)^{-2 (1 - lambda) w_j}` with its closed form attached.
pub fn starlike_from_atoms(atoms: &HerglotzAtoms, lambda: f64, order: usize) -> Result<NormalizedFunction> {
    let e = 2.0 * (1.0 - lambda);
    NormalizedFunction::from_closed_form(
        ClosedForm {
            factors: atoms.atoms().iter().map(|&(w, x)| (x, e * w)).collect(),
        },
        order,
    )
}

/// A member of `S_n(lambda)`: the Salagean preimage of `starlike_from_p(p, lambda)`.
pub fn sn_member(p: &TruncatedSeries, lambda: f64, n: u32) -> Result<NormalizedFunction> {
    if n > MAX_LEVEL {
        return Err(StarlabError::InvalidInput(format!("n = {n} exceeds {MAX_LEVEL}")));
    }
    if !(0.0..1.0).contains(&lambda) {
        return Err(StarlabError::InvalidInput(format!("lambda = {lambda} outside [0, 1)")));
    }
    let g = starlike_from_p(p, lambda)?;
    Ok(if n == 0 { g } else { salagean_inverse(&g, n) })
}

/// Seeded member of `S_n(lambda)` from 1..=8 random atoms. The closed form
/// is kept when `n = 0`.
pub fn random_sn_member(seed: u64, lambda: f64, n: u32, order: usize) -> Result<NormalizedFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.random_range(1..=8);
    let atoms = HerglotzAtoms::random(&mut rng, count)?;
    let g = starlike_from_atoms(&atoms, lambda, order)?;
    if n > MAX_LEVEL {
        return Err(StarlabError::InvalidInput(format!("n = {n} exceeds {MAX_LEVEL}")));
    }
    Ok(if n == 0 { g } else { salagean_inverse(&g, n) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::salagean::salagean_ratio_normalized;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn koebe_family_coefficients() {
        let k0 = koebe_lambda(0.0, 40).unwrap();
        let k_half = koebe_lambda(0.5, 40).unwrap();
        for k in 1..=40 {
            assert!((k0.coeff(k) - c(k as f64)).norm() < 1e-12);
            assert!((k_half.coeff(k) - ONE).norm() < 1e-12);
        }
        let k_quarter = koebe_lambda(0.25, 60).unwrap();
        let direct = TruncatedSeries::geometric(ONE, 59).pow_real(1.5).unwrap().shift_up();
        assert!(k_quarter.series().max_abs_diff(&direct) < 1e-12);
        assert!(koebe_lambda(1.0, 8).is_err());
    }

    #[test]
    fn single_atom_is_mobius() {
        let atoms = HerglotzAtoms::new(vec![(1.0, ONE)]).unwrap();
        let p = p_from_atoms(&atoms, 10);
        assert_eq!(p.series.coeff(0), ONE);
        for k in 1..=10 {
            assert_eq!(p.series.coeff(k), c(2.0));
        }
        let z = Complex64::new(0.3, 0.2);
        assert!((p.eval(z) - (ONE + z) / (ONE - z)).norm() < 1e-15);
    }

    #[test]
    fn two_antipodal_atoms() {
        let atoms = HerglotzAtoms::new(vec![(0.5, ONE), (0.5, -ONE)]).unwrap();
        let p = p_from_atoms(&atoms, 16);
        let mut min_re = f64::INFINITY;
        for i in 0..100 {
            for j in 0..100 {
                let z = Complex64::from_polar(0.999 * (i as f64 + 1.0) / 100.0, j as f64 * 0.0628);
                let v = p.eval(z);
                assert!((v - (ONE + z * z) / (ONE - z * z)).norm() < 1e-9 * v.norm().max(1.0));
                min_re = min_re.min(v.re);
            }
        }
        assert!(min_re > 0.0);
    }

    #[test]
    fn atoms_validation() {
        assert!(HerglotzAtoms::new(vec![(0.5, ONE)]).is_err());
        assert!(HerglotzAtoms::new(vec![(1.0, c(0.9))]).is_err());
        assert!(HerglotzAtoms::new(vec![]).is_err());
    }

    #[test]
    fn starlike_reconstruction() {
        assert_eq!(
            starlike_from_p(&TruncatedSeries::one(12), 0.3).unwrap().series(),
            NormalizedFunction::identity(13).series()
        );
        let mobius = p_from_atoms(&HerglotzAtoms::new(vec![(1.0, ONE)]).unwrap(), 60).series;
        let k = starlike_from_p(&mobius, 0.0).unwrap();
        assert!(k.series().max_abs_diff(koebe_lambda(0.0, 61).unwrap().series()) < 1e-10);
        let g = starlike_from_p(&mobius, 0.5).unwrap();
        assert!(g.series().max_abs_diff(koebe_lambda(0.5, 61).unwrap().series()) < 1e-12);
    }

    #[test]
    fn convex_relative_of_koebe() {
        let mobius = p_from_atoms(&HerglotzAtoms::new(vec![(1.0, ONE)]).unwrap(), 60).series;
        let f = sn_member(&mobius, 0.0, 1).unwrap();
        for k in 1..=60 {
            assert!((f.coeff(k) - ONE).norm() < 1e-10);
        }
        assert!(sn_member(&mobius, 0.0, 7).is_err());
    }

    #[test]
    fn generated_members_have_prescribed_ratio() {
        for seed in 0..5 {
            let atoms = HerglotzAtoms::from_seed(seed, 6).unwrap();
            let p = p_from_atoms(&atoms, 128);
            for &(lambda, n) in &[(0.0, 0u32), (0.3, 2), (0.6, 4)] {
                let f = sn_member(&p.series, lambda, n).unwrap();
                let r = salagean_ratio_normalized(&f, n).unwrap().ratio_series;
                let expected = p
                    .series
                    .scale(c(1.0 - lambda))
                    .add(&TruncatedSeries::constant(c(lambda), 128));
                assert!(r.max_abs_diff(&expected) < 1e-11, "seed {seed} n {n}");
            }
        }
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let a = random_sn_member(9, 0.3, 2, 64).unwrap();
        let b = random_sn_member(9, 0.3, 2, 64).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_sn_member(10, 0.3, 2, 64).unwrap());
    }
}
