//! Random triangles: simplex, integer grid, type-conditioned rejection and
//! the higher-dimensional fat family.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use super::rng::{RngStream, DYADIC_BITS};
use crate::error::{Error, Result};
use crate::point::{canonicalize, trop_distance, ProjectivePoint};
use crate::rational::Rational;
use crate::segment::{segment_point, trop_segment};
use crate::types::{classify_type, TriangleType};

pub type Triangle = [ProjectivePoint; 3];

/// Resampling budget for continuous samplers; hitting it means the
/// degeneracy check rejects almost everything, which signals a bug.
const MAX_DEGENERATE_REDRAWS: usize = 1000;

/// How "uniform from the simplex" is read for triangles in ℝⁿ/ℝ𝟏.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SimplexMode {
    /// The 3(n−1) affine coordinates of the triangle jointly uniform on one
    /// standard simplex.
    #[default]
    Joint,
    /// Each vertex independently uniform on the standard simplex in ℝⁿ.
    Vertex,
}

impl fmt::Display for SimplexMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimplexMode::Joint => "joint",
            SimplexMode::Vertex => "vertex",
        })
    }
}

impl FromStr for SimplexMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<SimplexMode> {
        match s {
            "joint" => Ok(SimplexMode::Joint),
            "vertex" => Ok(SimplexMode::Vertex),
            other => Err(Error::Parse(format!("unknown simplex mode `{other}` (joint or vertex)"))),
        }
    }
}

/// Uniform point of the standard simplex in ℝᵐ, from the spacings of sorted
/// uniforms on the dyadic grid. Coordinates are nonnegative and sum to 1
/// exactly.
pub fn simplex_coordinates(m: usize, rng: &mut RngStream) -> Vec<Rational> {
    let top = 1i64 << DYADIC_BITS;
    let mut cuts: Vec<i64> = (0..m.saturating_sub(1)).map(|_| rng.dyadic_mantissa()).collect();
    cuts.push(0);
    cuts.push(top);
    cuts.sort_unstable();
    cuts.windows(2).map(|w| Rational::dyadic(w[1] - w[0], DYADIC_BITS)).collect()
}

/// A vertex uniform on the standard simplex in ℝⁿ, as a point of ℝⁿ/ℝ𝟏.
pub fn sample_simplex_vertex(n: usize, rng: &mut RngStream) -> Result<ProjectivePoint> {
    if n < 3 {
        return Err(Error::DimensionTooSmall { min: 3, got: n });
    }
    canonicalize(&simplex_coordinates(n, rng))
}

/// A random triangle in ℝⁿ/ℝ𝟏 drawn from the simplex under `mode`.
/// Degenerate draws are redrawn.
pub fn sample_simplex_triangle(n: usize, mode: SimplexMode, rng: &mut RngStream) -> Result<Triangle> {
    if n < 3 {
        return Err(Error::DimensionTooSmall { min: 3, got: n });
    }
    redraw_degenerate(|| match mode {
        SimplexMode::Vertex => Ok([
            sample_simplex_vertex(n, rng)?,
            sample_simplex_vertex(n, rng)?,
            sample_simplex_vertex(n, rng)?,
        ]),
        SimplexMode::Joint => {
            let x = simplex_coordinates(3 * (n - 1), rng);
            let mut it = x.chunks(n - 1).map(ProjectivePoint::from_affine);
            Ok([
                it.next().expect("three chunks")?,
                it.next().expect("three chunks")?,
                it.next().expect("three chunks")?,
            ])
        }
    })
}

fn redraw_degenerate(mut draw: impl FnMut() -> Result<Triangle>) -> Result<Triangle> {
    for _ in 0..MAX_DEGENERATE_REDRAWS {
        let t = draw()?;
        if !is_degenerate(&t)? {
            return Ok(t);
        }
    }
    Err(Error::TriesExhausted {
        tries: MAX_DEGENERATE_REDRAWS,
        accepted: 0,
    })
}

/// True for coinciding vertices or when a vertex lies on the tropical
/// segment joining the other two.
pub fn is_degenerate(t: &Triangle) -> Result<bool> {
    let [a, b, c] = t;
    if a == b || a == c || b == c {
        return Ok(true);
    }
    for (v, p, q) in [(a, b, c), (b, a, c), (c, a, b)] {
        let seg = trop_segment(p, q)?;
        let t = trop_distance(p, v)?;
        if &t <= seg.length() && segment_point(&seg, &t)? == *v {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Six independent uniform integers in `[lo, hi]` forming three plane
/// points. Coinciding vertices are redrawn; collinear triples are kept.
pub fn sample_integer_triangle(lo: i64, hi: i64, rng: &mut RngStream) -> Result<Triangle> {
    if lo >= hi {
        return Err(Error::InvalidParameter(format!("empty grid range [{lo}, {hi}]")));
    }
    loop {
        let mut draw = || ProjectivePoint::from_ints(&[rng.gen_range(lo..=hi), rng.gen_range(lo..=hi)]);
        let t = [draw(), draw(), draw()];
        if t[0] != t[1] && t[0] != t[2] && t[1] != t[2] {
            return Ok(t);
        }
    }
}

/// An accepted draw of [`sample_type_conditioned`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionedSample {
    pub triangle: Triangle,
    /// Draws consumed, including the accepted one.
    pub tries: usize,
}

/// Rejection sampling of plane triangles from the joint simplex until the
/// classifier returns exactly `{ty}`.
pub fn sample_type_conditioned(ty: TriangleType, rng: &mut RngStream, max_tries: usize) -> Result<ConditionedSample> {
    for tries in 1..=max_tries {
        let t = sample_simplex_triangle(3, SimplexMode::Joint, rng)?;
        if classify_type(&t[0], &t[1], &t[2])?.single() == Some(ty) {
            return Ok(ConditionedSample { triangle: t, tries });
        }
    }
    Err(Error::TriesExhausted {
        tries: max_tries,
        accepted: 0,
    })
}

/// `k` distinct values from `draw`, sorted in decreasing order.
fn strictly_decreasing(k: usize, mut draw: impl FnMut() -> Rational) -> Vec<Rational> {
    loop {
        let mut v: Vec<Rational> = (0..k).map(|_| draw()).collect();
        v.sort_by(|a, b| b.cmp(a));
        if v.windows(2).all(|w| w[0] > w[1]) {
            return v;
        }
    }
}

/// A triangle in ℝⁿ⁺¹/ℝ𝟏 whose affine coordinates satisfy
/// `a_i < b_i < c_i` for `i < n`, `a_n > b_n > c_n`, and strictly decreasing
/// gaps `b_i − a_i` and `c_i − b_i` over `i < n`. Such triangles are fat.
pub fn sample_fat_family(n: usize, rng: &mut RngStream) -> Result<Triangle> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("fat family needs n ≥ 3, got {n}")));
    }
    let base: Vec<Rational> = (0..n - 1).map(|_| rng.unit_rational()).collect();
    let first_gaps = strictly_decreasing(n - 1, || rng.positive_unit_rational());
    let second_gaps = strictly_decreasing(n - 1, || rng.positive_unit_rational());
    let c_last = rng.unit_rational();
    let b_last = &c_last + &rng.positive_unit_rational();
    let a_last = &b_last + &rng.positive_unit_rational();

    let mut a = base.clone();
    let mut b: Vec<Rational> = base.iter().zip(&first_gaps).map(|(x, g)| x + g).collect();
    let mut c: Vec<Rational> = b.iter().zip(&second_gaps).map(|(x, g)| x + g).collect();
    a.push(a_last);
    b.push(b_last);
    c.push(c_last);
    Ok([
        ProjectivePoint::from_affine(&a)?,
        ProjectivePoint::from_affine(&b)?,
        ProjectivePoint::from_affine(&c)?,
    ])
}

/// Exact check of the fat-family inequality chains.
pub fn in_fat_family(t: &Triangle) -> bool {
    let (a, b, c) = (t[0].affine(), t[1].affine(), t[2].affine());
    let n = a.len();
    if n < 3 || b.len() != n || c.len() != n {
        return false;
    }
    let last = n - 1;
    let ordered = (0..last).all(|i| a[i] < b[i] && b[i] < c[i]) && a[last] > b[last] && b[last] > c[last];
    let gaps_ab: Vec<Rational> = (0..last).map(|i| &b[i] - &a[i]).collect();
    let gaps_bc: Vec<Rational> = (0..last).map(|i| &c[i] - &b[i]).collect();
    let decreasing = |g: &[Rational]| g.windows(2).all(|w| w[0] > w[1]);
    ordered && decreasing(&gaps_ab) && decreasing(&gaps_bc)
}
