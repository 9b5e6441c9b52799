//! Convex polytopes `{x : Gx ≤ h, Ex = e}`, their Chebyshev centers, and a
//! hit-and-run sampler whose emitted points are exact rationals strictly
//! inside the region.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::rng::RngStream;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Mantissa bits used when a float iterate is rounded to a rational.
const ROUNDING_BITS: u32 = 32;

/// Radius below which the inscribed ball is treated as empty.
const MIN_RADIUS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    g: Vec<Vec<Rational>>,
    h: Vec<Rational>,
    e: Vec<Vec<Rational>>,
    e_rhs: Vec<Rational>,
    dim: usize,
}

fn check_rows(rows: &[Vec<Rational>], rhs: &[Rational], dim: usize) -> Result<()> {
    if rows.len() != rhs.len() {
        return Err(Error::DimensionMismatch {
            left: rows.len(),
            right: rhs.len(),
        });
    }
    match rows.iter().find(|r| r.len() != dim) {
        Some(r) => Err(Error::DimensionMismatch { left: dim, right: r.len() }),
        None => Ok(()),
    }
}

impl Polytope {
    /// `{x ∈ ℝ^dim : Gx ≤ h}`.
    pub fn new(dim: usize, g: Vec<Vec<Rational>>, h: Vec<Rational>) -> Result<Polytope> {
        if dim == 0 {
            return Err(Error::InvalidParameter("polytope dimension must be positive".into()));
        }
        check_rows(&g, &h, dim)?;
        Ok(Polytope {
            g,
            h,
            e: Vec::new(),
            e_rhs: Vec::new(),
            dim,
        })
    }

    /// Adds the equalities `Ex = e`. `E` must have full row rank.
    pub fn with_equalities(mut self, e: Vec<Vec<Rational>>, e_rhs: Vec<Rational>) -> Result<Polytope> {
        check_rows(&e, &e_rhs, self.dim)?;
        self.e.extend(e);
        self.e_rhs.extend(e_rhs);
        if !self.e.is_empty() {
            solve_exact(gram(&self.e), vec![Rational::zero(); self.e.len()])
                .map_err(|_| Error::InvalidParameter("equality constraints are linearly dependent".into()))?;
        }
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> (&[Vec<Rational>], &[Rational]) {
        (&self.g, &self.h)
    }

    pub fn equalities(&self) -> (&[Vec<Rational>], &[Rational]) {
        (&self.e, &self.e_rhs)
    }

    /// Exact test of `Gx < h` and `Ex = e`.
    pub fn contains_strictly(&self, x: &[Rational]) -> bool {
        x.len() == self.dim
            && self.g.iter().zip(&self.h).all(|(row, b)| dot(row, x) < *b)
            && self.e.iter().zip(&self.e_rhs).all(|(row, b)| dot(row, x) == *b)
    }

    /// Exact test of `Gx ≤ h` and `Ex = e`.
    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim
            && self.g.iter().zip(&self.h).all(|(row, b)| dot(row, x) <= *b)
            && self.e.iter().zip(&self.e_rhs).all(|(row, b)| dot(row, x) == *b)
    }

    /// Whether every coordinate is bounded above and below on the region.
    pub fn is_bounded(&self) -> bool {
        (0..self.dim).all(|i| {
            [1.0, -1.0].into_iter().all(|sign| {
                let mut lp = Problem::new(OptimizationDirection::Maximize);
                let xs: Vec<_> = (0..self.dim)
                    .map(|j| lp.add_var(if i == j { sign } else { 0.0 }, (f64::NEG_INFINITY, f64::INFINITY)))
                    .collect();
                for (rows, rhs, op) in [(&self.g, &self.h, ComparisonOp::Le), (&self.e, &self.e_rhs, ComparisonOp::Eq)] {
                    for (row, b) in rows.iter().zip(rhs) {
                        let expr: Vec<_> = xs.iter().zip(row).map(|(&v, c)| (v, c.to_f64())).collect();
                        lp.add_constraint(expr.as_slice(), op, b.to_f64());
                    }
                }
                !matches!(lp.solve(), Err(minilp::Error::Unbounded))
            })
        })
    }

    fn float_matrix(rows: &[Vec<Rational>], dim: usize) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), dim, |i, j| rows[i][j].to_f64())
    }

    fn float_vector(v: &[Rational]) -> DVector<f64> {
        DVector::from_iterator(v.len(), v.iter().map(Rational::to_f64))
    }

    /// Orthogonal projector onto the null space of `E` (identity without
    /// equalities).
    fn null_projector(&self) -> DMatrix<f64> {
        let id = DMatrix::identity(self.dim, self.dim);
        if self.e.is_empty() {
            return id;
        }
        let e = Self::float_matrix(&self.e, self.dim);
        let gram_inv = (&e * e.transpose())
            .try_inverse()
            .expect("equalities have full row rank");
        id - e.transpose() * gram_inv * e
    }

    /// Rounds a float point to the dyadic grid and then projects it exactly
    /// onto `Ex = e`.
    fn rationalize(&self, x: &DVector<f64>) -> Result<Vec<Rational>> {
        let scale = (1u64 << ROUNDING_BITS) as f64;
        let mut r: Vec<Rational> = x
            .iter()
            .map(|v| Rational::dyadic((v * scale).round() as i64, ROUNDING_BITS))
            .collect();
        if !self.e.is_empty() {
            let residual: Vec<Rational> = self.e.iter().zip(&self.e_rhs).map(|(row, b)| dot(row, &r) - b).collect();
            let y = solve_exact(gram(&self.e), residual)?;
            for (row, yi) in self.e.iter().zip(&y) {
                for (xj, ej) in r.iter_mut().zip(row) {
                    *xj = &*xj - &(ej * yi);
                }
            }
        }
        Ok(r)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram(rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    rows.iter().map(|a| rows.iter().map(|b| dot(a, b)).collect()).collect()
}

/// Solves a square rational system by Gaussian elimination.
fn solve_exact(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Result<Vec<Rational>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or(Error::DivisionByZero("singular linear system"))?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] / &m[col][col];
                for c in col..n {
                    let delta = &f * &m[col][c];
                    m[r][c] = &m[r][c] - &delta;
                }
                let delta = &f * &rhs[col];
                rhs[r] = &rhs[r] - &delta;
            }
        }
    }
    Ok((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

/// Center of the largest ball inside the polytope within its affine hull.
///
/// Solves `max r` subject to `G_i·x + ‖P G_i‖ r ≤ h_i` and `Ex = e`, where `P`
/// projects onto the null space of `E`, in floating point; the rounded center
/// is then checked exactly for strict interiority.
pub fn chebyshev_center(p: &Polytope) -> Result<Vec<Rational>> {
    let proj = p.null_projector();
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let xs: Vec<_> = (0..p.dim).map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY))).collect();
    let r = lp.add_var(1.0, (0.0, f64::INFINITY));
    for (row, b) in p.g.iter().zip(&p.h) {
        let g = Polytope::float_vector(row);
        let norm = (&proj * &g).norm();
        let mut expr: Vec<_> = xs.iter().zip(g.iter()).map(|(&v, &c)| (v, c)).collect();
        expr.push((r, norm));
        lp.add_constraint(expr.as_slice(), ComparisonOp::Le, b.to_f64());
    }
    for (row, b) in p.e.iter().zip(&p.e_rhs) {
        let expr: Vec<_> = xs.iter().zip(row).map(|(&v, c)| (v, c.to_f64())).collect();
        lp.add_constraint(expr.as_slice(), ComparisonOp::Eq, b.to_f64());
    }
    let sol = lp.solve().map_err(|e| match e {
        minilp::Error::Infeasible => Error::Infeasible,
        minilp::Error::Unbounded => Error::Unbounded,
    })?;
    if *sol.var_value(r) < MIN_RADIUS {
        return Err(Error::LowerDimensional);
    }
    let center = DVector::from_iterator(p.dim, xs.iter().map(|&v| *sol.var_value(v)));
    let exact = p.rationalize(&center)?;
    if !p.contains_strictly(&exact) {
        return Err(Error::LowerDimensional);
    }
    Ok(exact)
}

/// Exact chord `[λ⁻, λ⁺]` of the line `x + λ·d` through the region
/// `Gx ≤ h`.
pub fn chord(p: &Polytope, x: &[Rational], d: &[Rational]) -> Result<(Rational, Rational)> {
    let (mut lo, mut hi): (Option<Rational>, Option<Rational>) = (None, None);
    for (row, b) in p.g.iter().zip(&p.h) {
        let rate = dot(row, d);
        if rate.is_zero() {
            continue;
        }
        let limit = (b - &dot(row, x)) / &rate;
        if rate.is_positive() {
            if hi.as_ref().is_none_or(|h| &limit < h) {
                hi = Some(limit);
            }
        } else if lo.as_ref().is_none_or(|l| &limit > l) {
            lo = Some(limit);
        }
    }
    match (lo, hi) {
        (Some(lo), Some(hi)) => Ok((lo, hi)),
        _ => Err(Error::Unbounded),
    }
}

/// Hit-and-run chain parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainParams {
    /// Transitions discarded before recording.
    pub burn_in: usize,
    /// Record every `thinning`-th state after burn-in.
    pub thinning: usize,
}

impl Default for ChainParams {
    fn default() -> ChainParams {
        ChainParams {
            burn_in: 1000,
            thinning: 10,
        }
    }
}

/// Runs `burn_in + steps` hit-and-run transitions from the strictly interior
/// point `x0` and returns every `thinning`-th state after burn-in.
///
/// Directions are isotropic Gaussians projected onto the null space of `E`,
/// hence uniform on the unit sphere of the affine hull. The walk itself runs
/// in floating point; each recorded state is rounded to an exact rational
/// on the affine hull and kept only if it is strictly interior.
pub fn hit_and_run(
    p: &Polytope,
    x0: &[Rational],
    steps: usize,
    params: ChainParams,
    rng: &mut RngStream,
) -> Result<Vec<Vec<Rational>>> {
    if params.thinning == 0 {
        return Err(Error::InvalidParameter("thinning must be at least 1".into()));
    }
    if !p.contains_strictly(x0) {
        return Err(Error::NotInterior);
    }
    if !p.is_bounded() {
        return Err(Error::Unbounded);
    }
    let g = Polytope::float_matrix(&p.g, p.dim);
    let h = Polytope::float_vector(&p.h);
    let proj = p.null_projector();
    let mut x = Polytope::float_vector(x0);
    let mut out = Vec::with_capacity(steps / params.thinning);

    for step in 1..=params.burn_in + steps {
        let z = DVector::from_fn(p.dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let d = &proj * z;
        let rates = &g * &d;
        let slack = &h - &g * &x;
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (rate, s) in rates.iter().zip(slack.iter()) {
            if *rate > 0.0 {
                hi = hi.min(s / rate);
            } else if *rate < 0.0 {
                lo = lo.max(s / rate);
            }
        }
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Unbounded);
        }
        if hi > lo {
            x += d * rng.gen_range(lo..hi);
        }
        if step > params.burn_in && (step - params.burn_in).is_multiple_of(params.thinning) {
            let exact = p.rationalize(&x)?;
            if p.contains_strictly(&exact) {
                out.push(exact);
            }
        }
    }
    Ok(out)
}
