//! Truncated complex power series and the fractional-head elements built on
//! top of them.
//!
//! A [`TruncatedSeries`] of order `N` stores `c_0..c_N` and stands for
//! `sum c_k z^k + O(z^{N+1})`. Binary operations between series of different
//! orders adopt the lesser order. An [`AnalyticElement`] is `s * z^rho * u(z)`
//! with `u(0) = 1`, which is how non-integer powers such as `f(z)^alpha` and
//! their Salagean images are carried around.

use num_complex::Complex64;

use crate::error::{Result, StarlabError};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance used to decide that a leading coefficient "is" one.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(StarlabError::InvalidInput("empty coefficient vector".into()));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(StarlabError::NonFinite(i));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    // Internal constructor for results of finite arithmetic on finite inputs.
    pub(crate) fn from_vec(coeffs: Vec<Complex64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::from_vec(vec![ZERO; order + 1])
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(ONE, order)
    }

    /// `z^k` truncated at `order` (zero if `k > order`).
    pub fn monomial(k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = ONE;
        }
        s
    }

    /// `1/(1 - x z)` truncated at `order`.
    pub fn geometric(x: Complex64, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut p = ONE;
        for _ in 0..=order {
            coeffs.push(p);
            p *= x;
        }
        Self::from_vec(coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Self::from_vec(self.coeffs[..=order].to_vec())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_vec((0..=n).map(|k| self.coeffs[k] + other.coeffs[k]).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_vec((0..=n).map(|k| self.coeffs[k] - other.coeffs[k]).collect())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_vec(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Cauchy product truncated at the lesser order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let a = &self.coeffs[..=n];
        let b = &other.coeffs[..=n];
        let out = (0..=n)
            .map(|k| {
                a[..=k]
                    .iter()
                    .zip(b[..=k].iter().rev())
                    .fold(ZERO, |acc, (x, y)| acc + x * y)
            })
            .collect();
        Self::from_vec(out)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let b0 = other.coeffs[0];
        if b0.norm() < 1e-300 {
            return Err(StarlabError::ZeroConstantTerm);
        }
        let n = self.order().min(other.order());
        let b = &other.coeffs[..=n];
        let inv = b0.inv();
        let mut q: Vec<Complex64> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let s = (1..=k).fold(self.coeffs[k], |acc, j| acc - b[j] * q[k - j]);
            q.push(s * inv);
        }
        Ok(Self::from_vec(q))
    }

    /// Formal exponential: `b_0 = e^{a_0}`, `k b_k = sum_{j=1..k} j a_j b_{k-j}`.
    pub fn exp(&self) -> Self {
        let n = self.order();
        let a = &self.coeffs;
        let mut b = Vec::with_capacity(n + 1);
        b.push(a[0].exp());
        for k in 1..=n {
            let s = (1..=k).fold(ZERO, |acc, j| acc + a[j] * b[k - j] * j as f64);
            b.push(s / k as f64);
        }
        Self::from_vec(b)
    }

    /// Formal logarithm of a unit-leading series.
    pub fn log(&self) -> Result<Self> {
        self.require_unit_leading()?;
        let n = self.order();
        let u = &self.coeffs;
        let mut l: Vec<Complex64> = Vec::with_capacity(n + 1);
        l.push(ZERO);
        for k in 1..=n {
            let s = (1..k).fold(u[k] * k as f64, |acc, j| acc - l[j] * u[k - j] * j as f64);
            l.push(s / k as f64);
        }
        Ok(Self::from_vec(l))
    }

    /// `u^t` for unit-leading `u` by the convolution recurrence
    /// `k b_k = sum_{j=1..k} (t j - (k - j)) u_j b_{k-j}`.
    pub fn pow_real(&self, t: f64) -> Result<Self> {
        self.require_unit_leading()?;
        if t == 1.0 {
            return Ok(self.clone());
        }
        let n = self.order();
        let u = &self.coeffs;
        let mut b: Vec<Complex64> = Vec::with_capacity(n + 1);
        b.push(ONE);
        for k in 1..=n {
            let s = (1..=k).fold(ZERO, |acc, j| acc + u[j] * b[k - j] * (t * j as f64 - (k - j) as f64));
            b.push(s / k as f64);
        }
        Ok(Self::from_vec(b))
    }

    /// Ordinary derivative; the result has order `N - 1` (order 0 stays 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::from_vec(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// `z u'(z)`, keeping the order.
    pub fn z_derivative(&self) -> Self {
        Self::from_vec(self.coeffs.iter().enumerate().map(|(k, &c)| c * k as f64).collect())
    }

    /// Antiderivative vanishing at the origin; order grows by one.
    pub fn antiderivative(&self) -> Self {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(ZERO);
        c.extend(self.coeffs.iter().enumerate().map(|(k, &a)| a / (k + 1) as f64));
        Self::from_vec(c)
    }

    /// Drops the constant term and divides by `z`: `(u - u_0)/z`, order `N - 1`.
    pub fn shift_down(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::from_vec(self.coeffs[1..].to_vec())
    }

    /// Multiplies by `z`: order grows by one.
    pub fn shift_up(&self) -> Self {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(ZERO);
        c.extend_from_slice(&self.coeffs);
        Self::from_vec(c)
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Tail estimate `|c_N| r^N / (1 - r)` at radius `r < 1`.
    pub fn tail_bound(&self, r: f64) -> f64 {
        if r >= 1.0 {
            return f64::INFINITY;
        }
        let n = self.order();
        self.coeffs[n].norm() * r.powi(n as i32) / (1.0 - r)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.order().min(other.order());
        (0..=n)
            .map(|k| (self.coeffs[k] - other.coeffs[k]).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unit_leading(&self) -> bool {
        (self.coeffs[0] - ONE).norm() <= UNIT_TOL
    }

    fn require_unit_leading(&self) -> Result<()> {
        if self.is_unit_leading() {
            Ok(())
        } else {
            Err(StarlabError::NotUnitLeading(self.coeffs[0]))
        }
    }

    pub(crate) fn set_coeff(&mut self, k: usize, c: Complex64) {
        self.coeffs[k] = c;
    }
}

/// Principal branch `z^rho`, with the conventions used at the origin.
pub fn principal_pow(z: Complex64, rho: Complex64) -> Result<Complex64> {
    if z == ZERO {
        if rho.re > 0.0 {
            return Ok(ZERO);
        }
        if rho == ZERO {
            return Ok(ONE);
        }
        let is_int = rho.im == 0.0 && rho.re.fract() == 0.0;
        return Err(if is_int {
            StarlabError::PoleAtOrigin(rho)
        } else {
            StarlabError::BranchPointAtZero(rho)
        });
    }
    if rho.im == 0.0 && rho.re.fract() == 0.0 && rho.re.abs() < 64.0 {
        return Ok(z.powi(rho.re as i32));
    }
    Ok((rho * z.ln()).exp())
}

/// `scale * z^head * unit(z)` with `unit(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticElement {
    head: Complex64,
    scale: Complex64,
    unit: TruncatedSeries,
}

/// Value of an element at a point together with a truncation tail estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub tail: f64,
}

impl AnalyticElement {
    pub fn new(head: f64, unit: TruncatedSeries) -> Result<Self> {
        Self::with_scale(Complex64::new(head, 0.0), ONE, unit)
    }

    pub fn with_scale(head: Complex64, scale: Complex64, unit: TruncatedSeries) -> Result<Self> {
        if !unit.is_unit_leading() {
            return Err(StarlabError::NotUnitLeading(unit.coeffs[0]));
        }
        let mut unit = unit;
        unit.set_coeff(0, ONE);
        Ok(Self { head, scale, unit })
    }

    /// `z^head` as an element of the given order.
    pub fn monomial(head: f64, order: usize) -> Self {
        Self {
            head: Complex64::new(head, 0.0),
            scale: ONE,
            unit: TruncatedSeries::one(order),
        }
    }

    /// Normalizes `z^head * sum c_k z^k` by its first nonzero coefficient.
    /// A vanishing series yields the zero element (scale 0).
    pub fn from_raw(head: Complex64, coeffs: Vec<Complex64>) -> Self {
        match coeffs.iter().position(|c| *c != ZERO) {
            None => Self {
                head,
                scale: ZERO,
                unit: TruncatedSeries::one(coeffs.len() - 1),
            },
            Some(i) => {
                let lead = coeffs[i];
                let inv = lead.inv();
                let mut unit: Vec<Complex64> = coeffs[i..].iter().map(|&c| c * inv).collect();
                unit[0] = ONE;
                Self {
                    head: head + i as f64,
                    scale: lead,
                    unit: TruncatedSeries::from_vec(unit),
                }
            }
        }
    }

    pub fn head(&self) -> Complex64 {
        self.head
    }

    pub fn scale(&self) -> Complex64 {
        self.scale
    }

    pub fn unit(&self) -> &TruncatedSeries {
        &self.unit
    }

    pub fn order(&self) -> usize {
        self.unit.order()
    }

    /// Coefficients of `scale * unit`, i.e. the element with `z^head` factored out.
    pub fn scaled_coeffs(&self) -> Vec<Complex64> {
        self.unit.coeffs().iter().map(|&c| c * self.scale).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            head: self.head + other.head,
            scale: self.scale * other.scale,
            unit: self.unit.mul(&other.unit),
        }
    }

    /// Multiplies by `c * z^shift`.
    pub fn mul_monomial(&self, c: Complex64, shift: Complex64) -> Self {
        Self {
            head: self.head + shift,
            scale: self.scale * c,
            unit: self.unit.clone(),
        }
    }

    /// Real power: heads scale, units go through [`TruncatedSeries::pow_real`],
    /// and the prefactor uses the principal branch.
    pub fn pow_real(&self, t: f64) -> Result<Self> {
        Ok(Self {
            head: self.head * t,
            scale: self.scale.powf(t),
            unit: self.unit.pow_real(t)?,
        })
    }

    pub fn eval(&self, z: Complex64) -> Result<Evaluation> {
        let r = z.norm();
        if r >= 1.0 {
            return Err(StarlabError::OutsideDisk(z));
        }
        let zh = principal_pow(z, self.head)?;
        let pref = self.scale * zh;
        Ok(Evaluation {
            value: pref * self.unit.eval(z),
            tail: pref.norm() * self.unit.tail_bound(r),
        })
    }

    /// Termwise antiderivative from the origin: `c_k z^{rho+k}` maps to
    /// `c_k z^{rho+k+1} / (rho+k+1)`.
    pub fn integrate_termwise(&self) -> Result<Self> {
        let rho = self.head;
        for (k, c) in self.unit.coeffs().iter().enumerate() {
            if *c != ZERO && (rho + (k + 1) as f64).norm() < 1e-12 {
                return Err(StarlabError::LogarithmicTerm(k));
            }
        }
        if rho.re <= -1.0 {
            return Err(StarlabError::DivergentAtOrigin(rho));
        }
        let lead = rho + 1.0;
        let unit = self
            .unit
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, &c)| c * lead / (rho + (k + 1) as f64))
            .collect::<Vec<_>>();
        let mut unit = TruncatedSeries::from_vec(unit);
        unit.set_coeff(0, ONE);
        Ok(Self {
            head: lead,
            scale: self.scale / lead,
            unit,
        })
    }

    /// Salagean step `D(z^rho u) = z^rho (rho u + z u')`.
    pub fn salagean_step(&self) -> Self {
        let rho = self.head;
        let raw = self
            .unit
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, &c)| c * self.scale * (rho + k as f64))
            .collect();
        Self::from_raw(rho, raw)
    }
}

/// Pointwise closed form `z * prod_j (1 - x_j z)^{-e_j}` attached to a
/// normalized function for boundary-accurate evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm {
    pub factors: Vec<(Complex64, f64)>,
}

impl ClosedForm {
    pub fn identity() -> Self {
        Self { factors: Vec::new() }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.factors.iter().fold(z, |acc, &(x, e)| acc * (ONE - x * z).powf(-e))
    }

    /// `f(z)/z`, analytic at the origin.
    pub fn eval_quotient(&self, z: Complex64) -> Complex64 {
        self.factors
            .iter()
            .fold(ONE, |acc, &(x, e)| acc * (ONE - x * z).powf(-e))
    }

    /// Taylor coefficients `c_0 = 0, c_1 = 1, ...` of the product up to `order`.
    pub fn series(&self, order: usize) -> Result<TruncatedSeries> {
        let n = order.max(1) - 1;
        let mut unit = TruncatedSeries::one(n);
        for &(x, e) in &self.factors {
            unit = unit.mul(&binomial_unit(x, -e, n));
        }
        Ok(unit.shift_up())
    }
}

/// `(1 - x z)^t` by the binomial series.
fn binomial_unit(x: Complex64, t: f64, order: usize) -> TruncatedSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c = ONE;
    coeffs.push(c);
    for k in 1..=order {
        c = c * (-x) * ((t - (k - 1) as f64) / k as f64);
        coeffs.push(c);
    }
    TruncatedSeries::from_vec(coeffs)
}

/// A member of class A: `f(z) = z + a_2 z^2 + ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedFunction {
    series: TruncatedSeries,
    closed_form: Option<ClosedForm>,
}

impl NormalizedFunction {
    pub fn new(series: TruncatedSeries) -> Result<Self> {
        if series.order() < 1 || series.coeff(0) != ZERO || series.coeff(1) != ONE {
            return Err(StarlabError::NotNormalized);
        }
        Ok(Self {
            series,
            closed_form: None,
        })
    }

    /// Accepts `c_0`, `c_1` within rounding of `0`, `1` and snaps them.
    pub(crate) fn snapped(mut series: TruncatedSeries) -> Result<Self> {
        if series.order() < 1 || series.coeff(0).norm() > UNIT_TOL || (series.coeff(1) - ONE).norm() > UNIT_TOL {
            return Err(StarlabError::NotNormalized);
        }
        series.set_coeff(0, ZERO);
        series.set_coeff(1, ONE);
        Ok(Self {
            series,
            closed_form: None,
        })
    }

    /// Builds `z * unit(z)`.
    pub fn from_unit(unit: &TruncatedSeries) -> Result<Self> {
        Self::snapped(unit.shift_up())
    }

    pub fn from_closed_form(form: ClosedForm, order: usize) -> Result<Self> {
        let series = form.series(order)?;
        Ok(Self::snapped(series)?.with_closed_form(form))
    }

    pub fn identity(order: usize) -> Self {
        Self {
            series: TruncatedSeries::monomial(1, order.max(1)),
            closed_form: Some(ClosedForm::identity()),
        }
    }

    pub fn with_closed_form(mut self, form: ClosedForm) -> Self {
        self.closed_form = Some(form);
        self
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn closed_form(&self) -> Option<&ClosedForm> {
        self.closed_form.as_ref()
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    /// Coefficient `a_k` (with `a_1 = 1`).
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.series.coeff(k)
    }

    /// `f(z)/z` as a unit-leading series of order `N - 1`.
    pub fn unit(&self) -> TruncatedSeries {
        self.series.shift_down()
    }

    pub fn as_element(&self) -> AnalyticElement {
        AnalyticElement {
            head: ONE,
            scale: ONE,
            unit: self.unit(),
        }
    }

    /// Closed form if present, otherwise the truncated series.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match &self.closed_form {
            Some(form) => form.eval(z),
            None => self.series.eval(z),
        }
    }

    /// `f(z)/z`, closed form if present.
    pub fn eval_quotient(&self, z: Complex64) -> Complex64 {
        match &self.closed_form {
            Some(form) => form.eval_quotient(z),
            None => self.unit().eval(z),
        }
    }

    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        self.series.max_abs_diff(&other.series)
    }
}
