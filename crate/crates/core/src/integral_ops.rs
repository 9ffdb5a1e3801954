//! The integral operator families `J_m^1` (logarithmic kernel) and `J_m^2`
//! (binomial kernel), the `m = 1` operator built by termwise integration,
//! a direct quadrature of the defining integrals, and the structural
//! identities relating consecutive levels `m - 1` and `m`.
//!
//! Every operator is realized on coefficients. With
//! `f(z)^alpha = z^alpha (1 + A_2 z + A_3 z^2 + ...)`, the `beta`-th power of
//! the image is `z^beta (1 + sum_{k>=2} w_k A_k z^{k-1})` for a weight
//! sequence `w_k` that depends on the family, and the image itself is the
//! normalized `1/beta` root of that.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, StarlabError};
use crate::quadrature;
use crate::salagean::salagean_ratio;
use crate::series::{AnalyticElement, NormalizedFunction, TruncatedSeries};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `J_m^1`, kernel `(log z/t)^{m-1}`.
    Logarithmic,
    /// `J_m^2`, kernel `(1 - t/z)^{m-1}`.
    Binomial,
}

impl Family {
    pub fn index(self) -> u8 {
        match self {
            Family::Logarithmic => 1,
            Family::Binomial => 2,
        }
    }
}

/// `(alpha, beta, gamma, delta, m, family)` with `alpha + delta = beta + gamma`.
///
/// `delta` is always derived from the other three.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorParams {
    alpha: f64,
    beta: f64,
    gamma: Complex64,
    delta: Complex64,
    m: u32,
    family: Family,
}

impl OperatorParams {
    pub fn new(alpha: f64, beta: f64, gamma: Complex64, m: u32, family: Family) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(StarlabError::InvalidParams(format!("alpha = {alpha} must be >= 0")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(StarlabError::InvalidParams(format!("beta = {beta} must be > 0")));
        }
        if !(gamma.re.is_finite() && gamma.im.is_finite()) {
            return Err(StarlabError::InvalidParams("gamma must be finite".into()));
        }
        if m == 0 {
            return Err(StarlabError::InvalidParams("m must be >= 1".into()));
        }
        // at m = 1 both families reduce to the single operator with beta + Re gamma >= 0
        let ok = if m == 1 {
            beta + gamma.re >= 0.0
        } else {
            match family {
                Family::Logarithmic => gamma.re >= 0.0,
                Family::Binomial => (m - 1) as f64 + gamma.re >= 0.0,
            }
        };
        if !ok {
            return Err(StarlabError::InvalidParams(format!(
                "gamma = {gamma} violates the range condition for family {} with m = {m}",
                family.index()
            )));
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta: Complex64::new(beta - alpha, 0.0) + gamma,
            m,
            family,
        })
    }

    /// The `m = 1` operator `{(beta+gamma) z^{-gamma} int_0^z t^{delta-1} f^alpha dt}^{1/beta}`.
    pub fn single(alpha: f64, beta: f64, gamma: Complex64) -> Result<Self> {
        Self::new(alpha, beta, gamma, 1, Family::Logarithmic)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }
    pub fn delta(&self) -> Complex64 {
        self.delta
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn with_m(&self, m: u32) -> Result<Self> {
        Self::new(self.alpha, self.beta, self.gamma, m, self.family)
    }

    pub fn with_family(&self, family: Family) -> Result<Self> {
        Self::new(self.alpha, self.beta, self.gamma, self.m, family)
    }

    pub fn mu_xi(&self) -> MuXi {
        let bg = self.gamma + self.beta;
        match self.family {
            Family::Logarithmic => MuXi { mu: self.gamma, xi: bg },
            Family::Binomial => {
                let shift = (self.m - 1) as f64;
                MuXi {
                    mu: self.gamma + shift,
                    xi: bg + shift,
                }
            }
        }
    }
}

/// The constants of the first-order relation between levels `m` and `m - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuXi {
    pub mu: Complex64,
    pub xi: Complex64,
}

/// `f(z)^alpha = z^alpha (f/z)^alpha`; unit coefficient `k - 2` is `A_k(alpha)`.
pub fn f_power_alpha(f: &NormalizedFunction, alpha: f64) -> Result<AnalyticElement> {
    let unit = f.unit().pow_real(alpha)?;
    AnalyticElement::new(alpha, unit)
}

fn weight_at_level(params: &OperatorParams, m: u32, k: usize) -> Result<Complex64> {
    let bg = params.gamma + params.beta;
    let shift = (k - 1) as f64;
    let mut w = ONE;
    for i in 0..m {
        let (num, den) = match params.family {
            Family::Logarithmic => (bg, bg + shift),
            Family::Binomial => (bg + i as f64, bg + shift + i as f64),
        };
        if den.norm() < 1e-12 {
            return Err(StarlabError::PoleInWeight(k));
        }
        w *= num / den;
    }
    Ok(w)
}

/// Weight `w_k` multiplying `A_k(alpha)`: `((b+g)/(b+g+k-1))^m` for family 1,
/// `prod_{i<m} (b+g+i)/(b+g+k-1+i)` for family 2.
pub fn weight_factor(params: &OperatorParams, k: usize) -> Result<Complex64> {
    if k < 2 {
        return Err(StarlabError::InvalidInput(format!("weights start at k = 2, got {k}")));
    }
    weight_at_level(params, params.m, k)
}

/// `J_m(f)^beta` as an element of head `beta`, at an explicit level `m`
/// (`m = 0` gives `z^{beta} (f/z)^alpha`).
pub fn j_power_beta(f: &NormalizedFunction, params: &OperatorParams, m: u32) -> Result<AnalyticElement> {
    let u = f.unit().pow_real(params.alpha)?;
    let mut coeffs = Vec::with_capacity(u.order() + 1);
    coeffs.push(ONE);
    for (i, &c) in u.coeffs().iter().enumerate().skip(1) {
        coeffs.push(c * weight_at_level(params, m, i + 1)?);
    }
    AnalyticElement::new(params.beta, TruncatedSeries::from_vec(coeffs))
}

/// `J_m^j(f)` as a normalized function.
pub fn apply_jm(f: &NormalizedFunction, params: &OperatorParams) -> Result<NormalizedFunction> {
    if params.alpha == 0.0 {
        return Ok(NormalizedFunction::identity(f.order()));
    }
    let jb = j_power_beta(f, params, params.m)?;
    NormalizedFunction::from_unit(&jb.unit().pow_real(1.0 / params.beta)?)
}

/// `J(f)^beta` for `m = 1`, computed independently of [`weight_factor`]:
/// termwise integration of `t^{delta-1} f(t)^alpha`, then multiplication by
/// `(beta+gamma) z^{-gamma}`.
pub fn j_single_power_beta(f: &NormalizedFunction, params: &OperatorParams) -> Result<AnalyticElement> {
    if params.m != 1 {
        return Err(StarlabError::InvalidParams(format!(
            "single-level operator needs m = 1, got {}",
            params.m
        )));
    }
    let integrand = f_power_alpha(f, params.alpha)?.mul_monomial(ONE, params.delta - 1.0);
    if integrand.head().re <= -1.0 {
        return Err(StarlabError::DivergentAtOrigin(integrand.head()));
    }
    let primitive = integrand.integrate_termwise()?;
    let jb = primitive.mul_monomial(params.gamma + params.beta, -params.gamma);
    if (jb.head() - params.beta).norm() > 1e-12 || (jb.scale() - ONE).norm() > 1e-12 {
        return Err(StarlabError::InvalidInput(format!(
            "unexpected leading term {} z^{}",
            jb.scale(),
            jb.head()
        )));
    }
    Ok(jb)
}

/// The `m = 1` operator via [`j_single_power_beta`] and the normalized `1/beta` root.
pub fn apply_j_single(f: &NormalizedFunction, params: &OperatorParams) -> Result<NormalizedFunction> {
    if params.m != 1 {
        return Err(StarlabError::InvalidParams(format!(
            "single-level operator needs m = 1, got {}",
            params.m
        )));
    }
    if params.alpha == 0.0 {
        return Ok(NormalizedFunction::identity(f.order()));
    }
    let jb = j_single_power_beta(f, params)?;
    NormalizedFunction::from_unit(&jb.unit().pow_real(1.0 / params.beta)?)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `J_m^j(f)(z)` by quadrature of the defining integral along `t = s z`.
///
/// After factoring `z^{beta+gamma}` out of the integral the image becomes
/// `z * B(z)^{1/beta}` with
/// `B(z) = c_m int_0^1 K(s) s^{beta+gamma-1} (f(sz)/(sz))^alpha ds`,
/// `K(s) = (-ln s)^{m-1}` or `(1-s)^{m-1}`, and `f` evaluated pointwise.
pub fn quadrature_oracle(f: &NormalizedFunction, params: &OperatorParams, z: Complex64, tol: f64) -> Result<Complex64> {
    let r = z.norm();
    if r == 0.0 || r > 0.5 {
        return Err(StarlabError::InvalidInput(format!(
            "oracle needs 0 < |z| <= 0.5, got {z}"
        )));
    }
    let bg = params.gamma + params.beta;
    if bg.re <= 0.0 {
        return Err(StarlabError::DivergentAtOrigin(bg - 1.0));
    }
    let m = params.m;
    let expo = bg - 1.0;
    let alpha = params.alpha;
    let prefactor = match params.family {
        Family::Logarithmic => bg.powu(m) / factorial(m - 1),
        Family::Binomial => (0..m).fold(ONE, |acc, i| acc * (bg + i as f64)) / factorial(m - 1),
    };
    let family = params.family;
    let integrand = |s: f64| -> Complex64 {
        let kernel = match family {
            Family::Logarithmic => (-s.ln()).powi(m as i32 - 1),
            Family::Binomial => (1.0 - s).powi(m as i32 - 1),
        };
        let q = f.eval_quotient(z * s);
        let qa = if alpha == 0.0 { ONE } else { q.powf(alpha) };
        (expo * s.ln()).exp() * qa * kernel
    };
    let integral = quadrature::integrate_unit_interval(integrand, tol)?;
    Ok(z * (prefactor * integral).powf(1.0 / params.beta))
}

/// Max over coefficients of `|mu J_m^b + z (J_m^b)' - xi J_{m-1}^b|`, each
/// divided by `max(1, |xi J_{m-1}^b coefficient|)`.
pub fn check_recurrence(f: &NormalizedFunction, params: &OperatorParams) -> Result<f64> {
    let MuXi { mu, xi } = params.mu_xi();
    let upper = j_power_beta(f, params, params.m)?;
    let lower = j_power_beta(f, params, params.m - 1)?;
    let beta = params.beta;
    let u = upper.unit().coeffs();
    let l = lower.unit().coeffs();
    Ok(u.iter()
        .zip(l)
        .enumerate()
        .map(|(k, (&a, &b))| {
            let lhs = a * (mu + beta + k as f64);
            let rhs = b * xi;
            (lhs - rhs).norm() / rhs.norm().max(1.0)
        })
        .fold(0.0, f64::max))
}

/// With `p = D^{n+1} J_m^b / D^n J_m^b`, the coefficientwise difference
/// between `D^{n+1} J_{m-1}^b / D^n J_{m-1}^b` and `p + z p'/(mu + p)`.
///
/// Both ratios come out of series divisions whose rounding error scales
/// with the size of the divided coefficients, which grow like `k^n`. Each
/// difference is therefore divided by the larger of `|rhs_k|` and the
/// largest unit coefficient among the four `D^n`, `D^{n+1}` images.
pub fn ratio_relation(f: &NormalizedFunction, params: &OperatorParams, n: u32) -> Result<f64> {
    let mu = params.mu_xi().mu;
    let upper = salagean_ratio(&j_power_beta(f, params, params.m)?, n)?;
    let lower = salagean_ratio(&j_power_beta(f, params, params.m - 1)?, n)?;
    let scale = [
        &upper.numerator,
        &upper.denominator,
        &lower.numerator,
        &lower.denominator,
    ]
    .iter()
    .flat_map(|e| e.unit().coeffs().iter().map(|c| c.norm()))
    .fold(1.0, f64::max);
    let p = &upper.ratio_series;
    let denom = p.add(&TruncatedSeries::constant(mu, p.order()));
    let rhs = p.add(&p.z_derivative().div(&denom)?);
    Ok(lower
        .ratio_series
        .coeffs()
        .iter()
        .zip(rhs.coeffs())
        .map(|(&a, &b)| (a - b).norm() / b.norm().max(scale))
        .fold(0.0, f64::max))
}
