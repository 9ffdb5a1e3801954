//! Numerical functionals on the unit disk: boundary minima of `Re` of a
//! ratio functional, `S_n(lambda)` membership margins, a containment test for
//! subordination, and the admissibility margin of the first-order relation
//! `psi(u, v) = u + v/(mu + u)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dominants::{best_dominant_q, DominantSpec};
use crate::error::{Result, StarlabError};
use crate::salagean::{salagean_ratio_normalized, SalageanRatio};
use crate::series::{NormalizedFunction, TruncatedSeries};

/// Largest admissible truncation tail at the outermost radius.
pub const MAX_TAIL: f64 = 1e-6;
/// Base boundary tolerance for containment.
pub const BOUNDARY_TOL: f64 = 1e-9;
/// Number of points on each dominant curve before refinement.
pub const CURVE_POINTS: usize = 4096;
const CURVE_POINT_CAP: usize = 32768;

/// Something that can be evaluated pointwise on the disk.
pub trait DiskFunction {
    fn value(&self, z: Complex64) -> Result<Complex64>;

    /// Bound on the evaluation error at radius `r` (zero for closed forms).
    fn tail_bound(&self, _r: f64) -> f64 {
        0.0
    }
}

impl DiskFunction for TruncatedSeries {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval(z))
    }

    fn tail_bound(&self, r: f64) -> f64 {
        TruncatedSeries::tail_bound(self, r)
    }
}

impl DiskFunction for SalageanRatio {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.ratio_series.eval(z))
    }

    fn tail_bound(&self, r: f64) -> f64 {
        self.ratio_series.tail_bound(r)
    }
}

impl DiskFunction for DominantSpec {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        best_dominant_q(*self, z)
    }
}

/// Wraps a pointwise closed form.
pub struct ClosedFormFn<F>(pub F);

impl<F: Fn(Complex64) -> Complex64> DiskFunction for ClosedFormFn<F> {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok((self.0)(z))
    }
}

/// Sampling circles for boundary scans.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub radii: Vec<f64>,
    pub theta_count: usize,
    pub refine: bool,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            radii: vec![0.5, 0.9, 0.99],
            theta_count: 1024,
            refine: true,
        }
    }
}

impl GridSpec {
    pub fn new(radii: Vec<f64>, theta_count: usize, refine: bool) -> Result<Self> {
        let g = Self {
            radii,
            theta_count,
            refine,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.radii.is_empty() {
            return Err(StarlabError::InvalidInput("grid needs at least one radius".into()));
        }
        if self.radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(StarlabError::InvalidInput("grid radii must lie in (0, 1)".into()));
        }
        if self.radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(StarlabError::InvalidInput("grid radii must increase".into()));
        }
        if self.theta_count < 16 {
            return Err(StarlabError::InvalidInput("theta_count must be >= 16".into()));
        }
        Ok(())
    }

    pub fn max_radius(&self) -> f64 {
        *self.radii.last().expect("validated grid")
    }

    fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.theta_count as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusMin {
    pub r: f64,
    pub min_re: f64,
    pub argmin_theta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderEstimate {
    pub per_radius_min: Vec<RadiusMin>,
    /// Linear extrapolation in `1 - r` through the last two radii.
    pub extrapolated: f64,
    /// `extrapolated - claimed`.
    pub margin: f64,
    pub claimed: f64,
    /// Whether the per-radius minima are non-increasing in `r`.
    pub monotone: bool,
}

impl OrderEstimate {
    pub fn with_claim(mut self, claimed: f64) -> Self {
        self.claimed = claimed;
        self.margin = self.extrapolated - claimed;
        self
    }
}

fn golden_min<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..60 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
        if (b - a).abs() < 1e-12 {
            break;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

/// Minimum of `Re ratio` over each circle of the grid.
pub fn estimate_order(ratio: &dyn DiskFunction, grid: &GridSpec) -> Result<OrderEstimate> {
    grid.validate()?;
    let rmax = grid.max_radius();
    let bound = ratio.tail_bound(rmax);
    if !(bound <= MAX_TAIL) {
        return Err(StarlabError::TailTooLarge { r: rmax, bound });
    }
    let mut per_radius_min = Vec::with_capacity(grid.radii.len());
    for &r in &grid.radii {
        let re_at = |t: f64| ratio.value(Complex64::from_polar(r, t)).map(|v| v.re);
        let mut best = (0.0, f64::INFINITY);
        for j in 0..grid.theta_count {
            let t = grid.theta(j);
            let v = re_at(t)?;
            if v < best.1 {
                best = (t, v);
            }
        }
        if grid.refine {
            let h = 2.0 * PI / grid.theta_count as f64;
            let refined = golden_min(re_at, best.0 - h, best.0 + h)?;
            if refined.1 < best.1 {
                best = (refined.0.rem_euclid(2.0 * PI), refined.1);
            }
        }
        per_radius_min.push(RadiusMin {
            r,
            min_re: best.1,
            argmin_theta: best.0,
        });
    }
    let extrapolated = match per_radius_min.as_slice() {
        [.., a, b] => {
            let (x1, x2) = (1.0 - a.r, 1.0 - b.r);
            b.min_re - (a.min_re - b.min_re) / (x1 - x2) * x2
        }
        [only] => only.min_re,
        [] => unreachable!(),
    };
    let monotone = per_radius_min.windows(2).all(|w| w[1].min_re <= w[0].min_re + 1e-12);
    Ok(OrderEstimate {
        per_radius_min,
        extrapolated,
        margin: extrapolated,
        claimed: 0.0,
        monotone,
    })
}

/// Order estimate of `D^{n+1} f / D^n f` against the claimed order `lambda`.
pub fn membership_estimate(f: &NormalizedFunction, n: u32, lambda: f64, grid: &GridSpec) -> Result<OrderEstimate> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(StarlabError::InvalidInput(format!("lambda = {lambda} outside [0, 1)")));
    }
    let ratio = salagean_ratio_normalized(f, n)?;
    Ok(estimate_order(&ratio, grid)?.with_claim(lambda))
}

/// Extrapolated infimum of `Re D^{n+1} f / D^n f` minus `lambda`.
pub fn check_membership(f: &NormalizedFunction, n: u32, lambda: f64, grid: &GridSpec) -> Result<f64> {
    Ok(membership_estimate(f, n, lambda, grid)?.margin)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Violated {
        witness: Complex64,
        p_value: Complex64,
        r: f64,
    },
}

impl Verdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Verdict::Consistent)
    }
}

/// A sampled closed curve with, per edge, the deviation of the true curve
/// from the chord at the edge midpoint.
#[derive(Clone, Debug)]
pub struct SampledCurve {
    pub points: Vec<Complex64>,
    pub sag: Vec<f64>,
}

fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

impl SampledCurve {
    /// Samples `q(r e^{i theta})` at `CURVE_POINTS` angles and bisects edges
    /// whose midpoint sag exceeds `1e-6` times the curve diameter, up to a
    /// cap of `CURVE_POINT_CAP` points.
    pub fn sample(q: &dyn DiskFunction, r: f64) -> Result<Self> {
        struct Edge {
            t0: f64,
            t1: f64,
            a: Complex64,
            b: Complex64,
            mid: Complex64,
            sag: f64,
        }
        let eval = |t: f64| q.value(Complex64::from_polar(r, t));
        let make = |t0: f64, t1: f64, a: Complex64, b: Complex64| -> Result<Edge> {
            let mid = eval(0.5 * (t0 + t1))?;
            Ok(Edge {
                t0,
                t1,
                a,
                b,
                mid,
                sag: point_segment_distance(mid, a, b),
            })
        };
        let step = 2.0 * PI / CURVE_POINTS as f64;
        let base = (0..CURVE_POINTS)
            .map(|j| eval(j as f64 * step))
            .collect::<Result<Vec<_>>>()?;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in &base {
            lo = lo.min(p.re.min(p.im));
            hi = hi.max(p.re.max(p.im));
        }
        let sag_target = 1e-6 * (hi - lo).max(1.0);
        let mut edges = (0..CURVE_POINTS)
            .map(|j| {
                make(
                    j as f64 * step,
                    (j + 1) as f64 * step,
                    base[j],
                    base[(j + 1) % CURVE_POINTS],
                )
            })
            .collect::<Result<Vec<_>>>()?;
        loop {
            let mut next = Vec::with_capacity(edges.len() * 2);
            let mut budget = CURVE_POINT_CAP.saturating_sub(edges.len());
            let mut refined = false;
            for e in edges {
                if e.sag > sag_target && budget > 0 {
                    budget -= 1;
                    refined = true;
                    let tm = 0.5 * (e.t0 + e.t1);
                    next.push(make(e.t0, tm, e.a, e.mid)?);
                    next.push(make(tm, e.t1, e.mid, e.b)?);
                } else {
                    next.push(e);
                }
            }
            edges = next;
            if !refined {
                break;
            }
        }
        Ok(Self {
            points: edges.iter().map(|e| e.a).collect(),
            sag: edges.iter().map(|e| e.sag).collect(),
        })
    }

    /// Nonzero winding number of the closed polygon around `p`.
    pub fn winding_number(&self, p: Complex64) -> i32 {
        let n = self.points.len();
        let mut w = 0;
        for i in 0..n {
            let a = self.points[i];
            let b = self.points[(i + 1) % n];
            let cross = (b.re - a.re) * (p.im - a.im) - (p.re - a.re) * (b.im - a.im);
            if a.im <= p.im {
                if b.im > p.im && cross > 0.0 {
                    w += 1;
                }
            } else if b.im <= p.im && cross < 0.0 {
                w -= 1;
            }
        }
        w
    }

    /// Whether `p` is within `tol` (plus twice the local sag) of some edge.
    pub fn near_boundary(&self, p: Complex64, tol: f64) -> bool {
        let n = self.points.len();
        (0..n).any(|i| point_segment_distance(p, self.points[i], self.points[(i + 1) % n]) <= tol + 2.0 * self.sag[i])
    }

    /// Checks every pair of non-adjacent edges for a proper crossing, with a
    /// sweep over edges sorted by their left end.
    pub fn self_intersects(&self) -> bool {
        let n = self.points.len();
        if n < 4 {
            return false;
        }
        let edge = |i: usize| (self.points[i], self.points[(i + 1) % n]);
        let mut order: Vec<usize> = (0..n).collect();
        let xmin = |i: usize| {
            let (a, b) = edge(i);
            a.re.min(b.re)
        };
        order.sort_by(|&i, &j| xmin(i).total_cmp(&xmin(j)));
        let mut active: Vec<usize> = Vec::new();
        for &i in &order {
            let x = xmin(i);
            active.retain(|&j| {
                let (a, b) = edge(j);
                a.re.max(b.re) >= x
            });
            for &j in &active {
                let adjacent = (i + 1) % n == j || (j + 1) % n == i;
                if !adjacent && segments_cross(edge(i), edge(j)) {
                    return true;
                }
            }
            active.push(i);
        }
        false
    }
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)
}

fn segments_cross((a, b): (Complex64, Complex64), (c, d): (Complex64, Complex64)) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Necessary conditions for `p < q` with univalent `q`: `p(0) = q(0)` and,
/// for each grid radius, every sample of `p` on `|z| = r` lies inside the
/// closed curve `q(|z| = r)`.
pub fn subordination_falsify(p: &dyn DiskFunction, q: &dyn DiskFunction, grid: &GridSpec) -> Result<Verdict> {
    let curves = grid
        .radii
        .iter()
        .map(|&r| SampledCurve::sample(q, r))
        .collect::<Result<Vec<_>>>()?;
    subordination_falsify_with_curves(p, q, grid, &curves)
}

/// As [`subordination_falsify`], with pre-sampled `q` curves (one per radius).
pub fn subordination_falsify_with_curves(
    p: &dyn DiskFunction,
    q: &dyn DiskFunction,
    grid: &GridSpec,
    curves: &[SampledCurve],
) -> Result<Verdict> {
    grid.validate()?;
    let origin = Complex64::default();
    let p0 = p.value(origin)?;
    if (p0 - q.value(origin)?).norm() > BOUNDARY_TOL {
        return Ok(Verdict::Violated {
            witness: origin,
            p_value: p0,
            r: 0.0,
        });
    }
    for (&r, curve) in grid.radii.iter().zip(curves) {
        if curve.self_intersects() {
            return Err(StarlabError::CurveSelfIntersection(r));
        }
        let tol = BOUNDARY_TOL + p.tail_bound(r) + q.tail_bound(r);
        for j in 0..grid.theta_count {
            let z = Complex64::from_polar(r, grid.theta(j));
            let v = p.value(z)?;
            if curve.winding_number(v) == 0 && !curve.near_boundary(v, tol) {
                return Ok(Verdict::Violated {
                    witness: z,
                    p_value: v,
                    r,
                });
            }
        }
    }
    Ok(Verdict::Consistent)
}

/// `lambda0 - Re psi(lambda0 + (1 - lambda0) u2 i, v1)` for
/// `psi(u, v) = u + v/(mu + u)`, in the regime `2 v1 <= -(1 - lambda0)(1 + u2^2)`.
pub fn admissibility_margin(mu: Complex64, lambda0: f64, u2: f64, v1: f64) -> Result<f64> {
    let limit = -0.5 * (1.0 - lambda0) * (1.0 + u2 * u2);
    if v1 > limit + 1e-12 * limit.abs().max(1.0) {
        return Err(StarlabError::OutsideRegime(format!("v1 = {v1} > {limit}")));
    }
    let a = mu.re + lambda0;
    if a == 0.0 {
        return Ok(0.0);
    }
    let b = mu.im + (1.0 - lambda0) * u2;
    Ok(-a * v1 / (a * a + b * b))
}
