//! Exact piecewise-linear functions and the vertex-to-segment distance profile.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::{check_dims, ProjectivePoint};
use crate::rational::Rational;
use crate::segment::TropicalSegment;

/// `value_at_lo + slope·(t − t_lo)` on `[t_lo, t_hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffinePiece {
    pub t_lo: Rational,
    pub t_hi: Rational,
    pub value_at_lo: Rational,
    pub slope: Rational,
}

impl AffinePiece {
    pub fn eval(&self, t: &Rational) -> Rational {
        &self.value_at_lo + &(&self.slope * &(t - &self.t_lo))
    }

    pub fn value_at_hi(&self) -> Rational {
        self.eval(&self.t_hi)
    }

    /// Coefficients `(c1, c0)` of the piece as `c1·t + c0`.
    pub fn linear_coefficients(&self) -> (Rational, Rational) {
        let c0 = &self.value_at_lo - &(&self.slope * &self.t_lo);
        (self.slope.clone(), c0)
    }
}

/// A continuous piecewise-linear function on `[0, T]` with maximal pieces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiecewiseLinearFn {
    pieces: Vec<AffinePiece>,
}

impl PiecewiseLinearFn {
    /// Builds a function through the given `(t, value)` knots, merging
    /// collinear neighbours. Knots must have strictly increasing `t`.
    pub fn from_knots(knots: &[(Rational, Rational)]) -> Result<PiecewiseLinearFn> {
        if knots.len() < 2 {
            return Err(Error::InvalidParameter("need at least two knots".into()));
        }
        let mut pieces: Vec<AffinePiece> = Vec::with_capacity(knots.len() - 1);
        for w in knots.windows(2) {
            let ((t0, v0), (t1, v1)) = (&w[0], &w[1]);
            if t1 <= t0 {
                return Err(Error::EmptyInterval {
                    lo: t0.to_string(),
                    hi: t1.to_string(),
                });
            }
            let slope = (v1 - v0) / (t1 - t0);
            match pieces.last_mut() {
                Some(last) if last.slope == slope => last.t_hi = t1.clone(),
                _ => pieces.push(AffinePiece {
                    t_lo: t0.clone(),
                    t_hi: t1.clone(),
                    value_at_lo: v0.clone(),
                    slope,
                }),
            }
        }
        Ok(PiecewiseLinearFn { pieces })
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn domain_start(&self) -> &Rational {
        &self.pieces[0].t_lo
    }

    pub fn domain_end(&self) -> &Rational {
        &self.pieces.last().expect("nonempty").t_hi
    }

    /// The breakpoints `(t, f(t))` including both domain endpoints.
    pub fn knots(&self) -> Vec<(Rational, Rational)> {
        let mut out: Vec<(Rational, Rational)> = self
            .pieces
            .iter()
            .map(|p| (p.t_lo.clone(), p.value_at_lo.clone()))
            .collect();
        let last = self.pieces.last().expect("nonempty");
        out.push((last.t_hi.clone(), last.value_at_hi()));
        out
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        if t < self.domain_start() || t > self.domain_end() {
            return Err(Error::OutsideDomain {
                t: t.to_string(),
                len: self.domain_end().to_string(),
            });
        }
        let idx = self.pieces.partition_point(|p| &p.t_hi < t);
        Ok(self.pieces[idx.min(self.pieces.len() - 1)].eval(t))
    }
}

/// `f(t) = d_tr(v, γ(t))` along the segment, as an exact piecewise-linear
/// function on `[0, length]`.
///
/// On every segment piece each coordinate difference `v_i − γ_i(t)` is
/// affine, so `f` is the upper minus the lower envelope of finitely many
/// lines. Between consecutive pairwise crossings both envelopes are a single
/// line, which makes `f` affine there.
pub fn distance_profile(v: &ProjectivePoint, seg: &TropicalSegment) -> Result<PiecewiseLinearFn> {
    check_dims(v.dim(), seg.dim())?;
    let bps = seg.breakpoints();
    let mut knots: Vec<(Rational, Rational)> = Vec::new();
    for k in 0..seg.piece_count() {
        let (t_lo, t_hi) = (&bps[k].t, &bps[k + 1].t);
        // d_i(t) = offsets[i] − slopes[i]·(t − t_lo)
        let offsets: Vec<Rational> = v
            .coords()
            .iter()
            .zip(bps[k].point.coords())
            .map(|(a, b)| a - b)
            .collect();
        let slopes = seg.piece_slopes(k);
        let span = t_hi - t_lo;

        let mut cuts: Vec<Rational> = Vec::new();
        for i in 0..offsets.len() {
            for j in i + 1..offsets.len() {
                let ds = &slopes[i] - &slopes[j];
                if ds.is_zero() {
                    continue;
                }
                let s = (&offsets[i] - &offsets[j]) / ds;
                if s.is_positive() && s < span {
                    cuts.push(s);
                }
            }
        }
        cuts.sort();
        cuts.dedup();

        let spread = |s: &Rational| -> Rational {
            let mut it = offsets.iter().zip(&slopes).map(|(o, m)| o - &(m * s));
            let first = it.next().expect("dimension ≥ 2");
            let (lo, hi) = it.fold((first.clone(), first), |(lo, hi), d| {
                if d < lo {
                    (d, hi)
                } else if d > hi {
                    (lo, d)
                } else {
                    (lo, hi)
                }
            });
            hi - lo
        };

        if k == 0 {
            knots.push((t_lo.clone(), spread(&Rational::zero())));
        }
        for s in cuts.iter().chain(std::iter::once(&span)) {
            knots.push((t_lo + s, spread(s)));
        }
    }
    PiecewiseLinearFn::from_knots(&knots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::trop_distance;
    use crate::segment::{segment_point, trop_segment};

    fn pt(v: &[i64]) -> ProjectivePoint {
        ProjectivePoint::from_ints(v)
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn knots(f: &PiecewiseLinearFn) -> Vec<(Rational, Rational)> {
        f.knots()
    }

    #[test]
    fn skinny_equilateral_profile() {
        let seg = trop_segment(&pt(&[0, 0]), &pt(&[3, 2])).unwrap();
        let f = distance_profile(&pt(&[1, 3]), &seg).unwrap();
        assert_eq!(
            knots(&f),
            vec![(q(0), q(3)), (q(1), q(2)), (q(2), q(2)), (q(3), q(3))]
        );
        let slopes: Vec<Rational> = f.pieces().iter().map(|p| p.slope.clone()).collect();
        assert_eq!(slopes, vec![q(-1), q(0), q(1)]);
    }

    #[test]
    fn fat_equilateral_profile_is_constant() {
        let seg = trop_segment(&pt(&[1, 0]), &pt(&[3, 3])).unwrap();
        let f = distance_profile(&pt(&[0, 2]), &seg).unwrap();
        assert_eq!(f.pieces().len(), 1);
        assert_eq!(knots(&f), vec![(q(0), q(3)), (q(3), q(3))]);
    }

    #[test]
    fn counterexample_profile() {
        let seg = trop_segment(&pt(&[0, 0]), &pt(&[452, 256])).unwrap();
        let f = distance_profile(&pt(&[448, 449]), &seg).unwrap();
        assert_eq!(
            knots(&f),
            vec![(q(0), q(449)), (q(256), q(193)), (q(448), q(193)), (q(452), q(197))]
        );
    }

    #[test]
    fn profile_matches_pointwise_distance() {
        let a = pt(&[3, -1, 5]);
        let b = pt(&[-2, 4, 1]);
        let v = pt(&[1, 1, -3]);
        let seg = trop_segment(&a, &b).unwrap();
        let f = distance_profile(&v, &seg).unwrap();
        let len = seg.length().clone();
        for k in 0..=40 {
            let t = &len * &Rational::new(k, 40);
            let direct = trop_distance(&v, &segment_point(&seg, &t).unwrap()).unwrap();
            assert_eq!(f.eval(&t).unwrap(), direct, "t = {t}");
        }
    }

    #[test]
    fn from_knots_merges_and_validates() {
        let f = PiecewiseLinearFn::from_knots(&[(q(0), q(0)), (q(1), q(1)), (q(3), q(3))]).unwrap();
        assert_eq!(f.pieces().len(), 1);
        assert!(PiecewiseLinearFn::from_knots(&[(q(0), q(0))]).is_err());
        assert!(PiecewiseLinearFn::from_knots(&[(q(1), q(0)), (q(1), q(2))]).is_err());
        assert!(f.eval(&q(4)).is_err());
        assert_eq!(f.eval(&q(2)).unwrap(), q(2));
    }

    #[test]
    fn profile_dimension_mismatch() {
        let seg = trop_segment(&pt(&[0, 0]), &pt(&[3, 2])).unwrap();
        assert!(distance_profile(&pt(&[1, 1, 1]), &seg).is_err());
    }
}
