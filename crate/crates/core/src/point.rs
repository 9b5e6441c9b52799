//! Points of the tropical projective torus ℝⁿ/ℝ𝟏 and the tropical metric.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A point of ℝⁿ/ℝ𝟏, stored as the representative whose first coordinate is 0.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjectivePoint {
    coords: Vec<Rational>,
}

/// Shifts `raw` by its first entry so the representative starts with 0.
pub fn canonicalize(raw: &[Rational]) -> Result<ProjectivePoint> {
    if raw.len() < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: raw.len() });
    }
    let shift = &raw[0];
    let coords = if shift.is_zero() {
        raw.to_vec()
    } else {
        raw.iter().map(|x| x - shift).collect()
    };
    Ok(ProjectivePoint { coords })
}

impl ProjectivePoint {
    /// Point given by its coordinates after the implicit leading zero, so
    /// `(a₁, …, aₙ₋₁)` denotes `[(0, a₁, …, aₙ₋₁)]`.
    pub fn from_affine(tail: &[Rational]) -> Result<ProjectivePoint> {
        if tail.is_empty() {
            return Err(Error::DimensionTooSmall { min: 2, got: 1 });
        }
        let mut coords = Vec::with_capacity(tail.len() + 1);
        coords.push(Rational::zero());
        coords.extend_from_slice(tail);
        Ok(ProjectivePoint { coords })
    }

    /// Integer convenience for [`ProjectivePoint::from_affine`].
    pub fn from_ints(tail: &[i64]) -> ProjectivePoint {
        let tail: Vec<Rational> = tail.iter().map(|&x| Rational::from_integer(x)).collect();
        ProjectivePoint::from_affine(&tail).expect("at least one coordinate")
    }

    /// Ambient dimension n of ℝⁿ.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Coordinates after the leading zero.
    pub fn affine(&self) -> &[Rational] {
        &self.coords[1..]
    }

    pub fn origin(dim: usize) -> Result<ProjectivePoint> {
        canonicalize(&vec![Rational::zero(); dim])
    }

    /// The point α·x (well defined on the quotient).
    pub fn scale(&self, alpha: &Rational) -> ProjectivePoint {
        ProjectivePoint {
            coords: self.coords.iter().map(|x| x * alpha).collect(),
        }
    }

    /// Translation by `v`, computed on representatives.
    pub fn translate(&self, v: &[Rational]) -> Result<ProjectivePoint> {
        check_dims(self.dim(), v.len())?;
        let raw: Vec<Rational> = self.coords.iter().zip(v).map(|(x, y)| x + y).collect();
        canonicalize(&raw)
    }

    /// Applies a permutation of the n homogeneous coordinates: new[i] = old[perm[i]].
    /// Every such permutation is an isometry of the tropical metric.
    pub fn permute(&self, perm: &[usize]) -> Result<ProjectivePoint> {
        check_dims(self.dim(), perm.len())?;
        let raw: Vec<Rational> = perm.iter().map(|&j| self.coords[j].clone()).collect();
        canonicalize(&raw)
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for ProjectivePoint {
    /// Writes the affine part, in the same form the point parser accepts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.affine().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

pub(crate) fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

/// Tropical distance: max minus min of the coordinate differences.
pub fn trop_distance(p: &ProjectivePoint, q: &ProjectivePoint) -> Result<Rational> {
    check_dims(p.dim(), q.dim())?;
    let mut diffs = p.coords.iter().zip(&q.coords).map(|(a, b)| a - b);
    let first = diffs.next().expect("dimension at least 2");
    let (lo, hi) = diffs.fold((first.clone(), first), |(lo, hi), d| {
        if d < lo {
            (d, hi)
        } else if d > hi {
            (lo, d)
        } else {
            (lo, hi)
        }
    });
    Ok(hi - lo)
}

/// Norm on ℝⁿ⁻¹ induced by the tropical metric through x ↦ (x₂ − x₁, …, xₙ − x₁):
/// `max(max_{i<j} |vᵢ − vⱼ|, max_i |vᵢ|)`.
pub fn trop_norm(v: &[Rational]) -> Result<Rational> {
    if v.is_empty() {
        return Err(Error::EmptyVector);
    }
    // Equivalent to max(v ∪ {0}) − min(v ∪ {0}).
    let zero = Rational::zero();
    let hi = v.iter().fold(&zero, |m, x| Rational::max_of(m, x));
    let lo = v.iter().fold(&zero, |m, x| Rational::min_of(m, x));
    Ok(hi - lo)
}

/// Parses `"x,y;x,y;…"`: vertices separated by `;`, coordinates by `,`, with
/// the leading zero coordinate implicit. Coordinates may be integers,
/// fractions `p/q` or decimals.
pub fn parse_points(text: &str) -> Result<Vec<ProjectivePoint>> {
    let mut points = Vec::new();
    for chunk in text.split(';') {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        let tail = chunk
            .split(',')
            .map(|c| c.trim().parse::<Rational>())
            .collect::<Result<Vec<_>>>()?;
        points.push(ProjectivePoint::from_affine(&tail)?);
    }
    if points.is_empty() {
        return Err(Error::Parse("no points given".into()));
    }
    let dim = points[0].dim();
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(Error::Parse(format!(
            "points of different dimensions ({} and {})",
            dim - 1,
            p.dim() - 1
        )));
    }
    Ok(points)
}
