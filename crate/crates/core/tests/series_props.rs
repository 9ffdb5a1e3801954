//! Ring laws and round trips for truncated series, on random coefficient
//! vectors inside the unit disk.

use num_complex::Complex64;
use proptest::prelude::*;
use starlab_core::series::TruncatedSeries;

const N: usize = 64;

fn disk_coeffs(unit_leading: bool) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((0.0f64..1.0, 0.0f64..std::f64::consts::TAU), N + 1).prop_map(move |v| {
        let mut c: Vec<Complex64> = v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect();
        if unit_leading {
            c[0] = Complex64::new(1.0, 0.0);
        }
        TruncatedSeries::new(c).unwrap()
    })
}

/// Random unit with geometrically decaying coefficients, so powers and
/// logs stay well scaled at N = 64.
fn tame_unit() -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((0.0f64..1.0, 0.0f64..std::f64::consts::TAU), N + 1).prop_map(|v| {
        let c = v
            .into_iter()
            .enumerate()
            .map(|(k, (r, t))| {
                if k == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::from_polar(r * 0.5f64.powi(k as i32), t)
                }
            })
            .collect();
        TruncatedSeries::new(c).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mul_commutes(a in disk_coeffs(false), b in disk_coeffs(false)) {
        prop_assert!(a.mul(&b).max_abs_diff(&b.mul(&a)) < 1e-13);
    }

    #[test]
    fn mul_associates_and_distributes(a in disk_coeffs(false), b in disk_coeffs(false), c in disk_coeffs(false)) {
        let l = a.mul(&b).mul(&c);
        let r = a.mul(&b.mul(&c));
        let scale = l.coeffs().iter().map(|x| x.norm()).fold(1.0, f64::max);
        prop_assert!(l.max_abs_diff(&r) < 1e-13 * scale);
        let d = a.mul(&b.add(&c)).sub(&a.mul(&b).add(&a.mul(&c)));
        prop_assert!(d.max_abs_diff(&TruncatedSeries::zero(N)) < 1e-13 * scale);
    }

    #[test]
    fn div_undoes_mul(a in tame_unit(), b in tame_unit()) {
        let back = a.mul(&b).div(&b).unwrap();
        prop_assert!(back.max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn exp_log_round_trip(u in tame_unit()) {
        let back = u.log().unwrap().exp();
        prop_assert!(back.max_abs_diff(&u) < 1e-12);
    }

    #[test]
    fn pow_exponents_add(u in tame_unit(), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let lhs = u.pow_real(s).unwrap().mul(&u.pow_real(t).unwrap());
        let rhs = u.pow_real(s + t).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-11);
    }
}
