//! Tropical line segments, parametrized by arc length.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::{canonicalize, check_dims, trop_distance, ProjectivePoint};
use crate::rational::Rational;

/// A breakpoint of a tropical segment: arc-length parameter and position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Breakpoint {
    pub t: Rational,
    pub point: ProjectivePoint,
}

/// The tropical geodesic from `start` to `end`, a polyline whose coordinates
/// are affine in the arc-length parameter between consecutive breakpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TropicalSegment {
    start: ProjectivePoint,
    end: ProjectivePoint,
    breakpoints: Vec<Breakpoint>,
}

/// Computes the tropical segment directed from `p` to `q`.
///
/// With δ = q − p and the representative of `q` shifted so that min δ = 0,
/// the segment is `γ(t)_i = min(p_i + t, q_i)` for `t ∈ [0, max δ]`; it bends
/// exactly at the distinct values of δ.
pub fn trop_segment(p: &ProjectivePoint, q: &ProjectivePoint) -> Result<TropicalSegment> {
    check_dims(p.dim(), q.dim())?;
    if p == q {
        return Err(Error::DegenerateSegment);
    }
    let delta: Vec<Rational> = q.coords().iter().zip(p.coords()).map(|(b, a)| b - a).collect();
    let shift = delta.iter().min().expect("nonempty").clone();
    let q_rep: Vec<Rational> = q.coords().iter().map(|b| b - &shift).collect();
    let mut levels: Vec<Rational> = delta.iter().map(|d| d - &shift).collect();
    levels.sort();
    levels.dedup();

    let breakpoints = levels
        .into_iter()
        .map(|lambda| {
            let raw: Vec<Rational> = p
                .coords()
                .iter()
                .zip(&q_rep)
                .map(|(a, b)| Rational::min_of(&(a + &lambda), b).clone())
                .collect();
            Ok(Breakpoint {
                point: canonicalize(&raw)?,
                t: lambda,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    debug_assert_eq!(breakpoints.last().map(|b| &b.point), Some(q));
    debug_assert_eq!(
        breakpoints.last().map(|b| b.t.clone()),
        trop_distance(p, q).ok()
    );
    Ok(TropicalSegment {
        start: p.clone(),
        end: q.clone(),
        breakpoints,
    })
}

impl TropicalSegment {
    pub fn start(&self) -> &ProjectivePoint {
        &self.start
    }

    pub fn end(&self) -> &ProjectivePoint {
        &self.end
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    /// Arc length, equal to the tropical distance between the endpoints.
    pub fn length(&self) -> &Rational {
        &self.breakpoints.last().expect("at least two breakpoints").t
    }

    /// Number of Euclidean pieces (at most n − 1).
    pub fn piece_count(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.start.dim()
    }

    /// Index `k` of the piece `[t_k, t_{k+1}]` containing `t`.
    fn piece_index(&self, t: &Rational) -> usize {
        // First breakpoint strictly after t, minus one; clamp the right end.
        let idx = self.breakpoints.partition_point(|b| &b.t <= t);
        idx.saturating_sub(1).min(self.piece_count() - 1)
    }

    /// The coordinate slopes dγ/dt on piece `k`.
    pub(crate) fn piece_slopes(&self, k: usize) -> Vec<Rational> {
        let (lo, hi) = (&self.breakpoints[k], &self.breakpoints[k + 1]);
        let span = &hi.t - &lo.t;
        lo.point
            .coords()
            .iter()
            .zip(hi.point.coords())
            .map(|(a, b)| (b - a) / &span)
            .collect()
    }
}

/// The point at arc length `t` along the segment.
pub fn segment_point(seg: &TropicalSegment, t: &Rational) -> Result<ProjectivePoint> {
    if t.is_negative() || t > seg.length() {
        return Err(Error::OutsideDomain {
            t: t.to_string(),
            len: seg.length().to_string(),
        });
    }
    let k = seg.piece_index(t);
    let lo = &seg.breakpoints[k];
    if &lo.t == t {
        return Ok(lo.point.clone());
    }
    let offset = t - &lo.t;
    let raw: Vec<Rational> = lo
        .point
        .coords()
        .iter()
        .zip(seg.piece_slopes(k))
        .map(|(x, s)| x + &(s * &offset))
        .collect();
    canonicalize(&raw)
}

/// The three shapes of a tropical segment in the plane ℝ³/ℝ𝟏.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PlaneSegmentType {
    /// Diagonal first, then horizontal.
    L1,
    /// Diagonal first, then vertical.
    L2,
    /// Vertical down first, then horizontal.
    L3,
}

/// Orients a plane pair so that `(a₁, a₂) < (b₁, b₂)` lexicographically.
pub fn orient_plane_pair<'a>(
    p: &'a ProjectivePoint,
    q: &'a ProjectivePoint,
) -> (&'a ProjectivePoint, &'a ProjectivePoint) {
    if p.affine() <= q.affine() {
        (p, q)
    } else {
        (q, p)
    }
}

/// Shape of the segment between two plane points, in affine coordinates
/// `a = (a₁, a₂)`, `b = (b₁, b₂)` after orienting so that `a < b`
/// lexicographically.
///
/// Ties are single-piece segments and are reported as the type whose
/// inequalities hold weakly: horizontal and diagonal segments are `L1`,
/// vertical ones `L2`.
pub fn plane_segment_type(p: &ProjectivePoint, q: &ProjectivePoint) -> Result<PlaneSegmentType> {
    check_dims(p.dim(), q.dim())?;
    if p.dim() != 3 {
        return Err(Error::InvalidParameter(format!(
            "plane segment types need points of ℝ³/ℝ𝟏, got dimension {}",
            p.dim()
        )));
    }
    if p == q {
        return Err(Error::DegenerateSegment);
    }
    let (a, b) = orient_plane_pair(p, q);
    let (a1, a2) = (&a.affine()[0], &a.affine()[1]);
    let (b1, b2) = (&b.affine()[0], &b.affine()[1]);
    Ok(if a2 > b2 {
        PlaneSegmentType::L3
    } else if a2 == b2 || a1 - a2 <= b1 - b2 {
        PlaneSegmentType::L1
    } else {
        PlaneSegmentType::L2
    })
}
