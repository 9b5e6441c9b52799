//! Alexandrov curvature of tropical triangles by exact comparison with the
//! Euclidean comparison triangle.
//!
//! For a vertex `v` and its opposite side from `p` to `q`, the tropical
//! profile `f(t) = d_tr(v, γ_pq(t))` is compared with the distance `h(t)`
//! from the comparison vertex `v'` to the point of `p'q'` at distance `t`
//! from `p'`. Both are nonnegative, so the sign of `f − h` equals the sign of
//! `Δ = f² − h²`, which is a quadratic on every linear piece of `f` and can
//! be decided exactly.

use std::fmt;
use std::ops::BitOr;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::{trop_distance, ProjectivePoint};
use crate::pwl::{distance_profile, PiecewiseLinearFn};
use crate::rational::Rational;
use crate::segment::trop_segment;

/// `c2·t² + c1·t + c0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticPoly {
    pub c2: Rational,
    pub c1: Rational,
    pub c0: Rational,
}

impl QuadraticPoly {
    pub fn new(c2: Rational, c1: Rational, c0: Rational) -> QuadraticPoly {
        QuadraticPoly { c2, c1, c0 }
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        &(&(&self.c2 * t) + &self.c1) * t + &self.c0
    }

    pub fn is_zero(&self) -> bool {
        self.c2.is_zero() && self.c1.is_zero() && self.c0.is_zero()
    }

    /// Square of the line `slope·t + intercept`.
    pub fn square_of_line(slope: &Rational, intercept: &Rational) -> QuadraticPoly {
        QuadraticPoly {
            c2: slope.square(),
            c1: Rational::from_integer(2) * slope * intercept,
            c0: intercept.square(),
        }
    }

    pub fn sub(&self, other: &QuadraticPoly) -> QuadraticPoly {
        QuadraticPoly {
            c2: &self.c2 - &other.c2,
            c1: &self.c1 - &other.c1,
            c0: &self.c0 - &other.c0,
        }
    }
}

/// Squared distance from the apex of a Euclidean triangle to the point of
/// the base at distance `t` from one base endpoint.
///
/// `B` is the base length, `C` the distance from the apex to the endpoint
/// where `t = 0`, and `A` the distance from the apex to the other endpoint.
/// By the law of cosines, `h²(t) = t² + ((A² − B² − C²)/B)·t + C²`, so that
/// `h²(0) = C²` and `h²(B) = A²`. Degenerate (collinear) triangles are
/// accepted.
pub fn comparison_quadratic(a: &Rational, b: &Rational, c: &Rational) -> Result<QuadraticPoly> {
    if b.is_zero() {
        return Err(Error::DivisionByZero("comparison base length is zero"));
    }
    let invalid = || Error::InvalidSideLengths {
        a: a.to_string(),
        b: b.to_string(),
        c: c.to_string(),
    };
    if !a.is_positive() || !b.is_positive() || !c.is_positive() {
        return Err(invalid());
    }
    if a > &(b + c) || b > &(a + c) || c > &(a + b) {
        return Err(invalid());
    }
    let (a2, b2, c2) = (a.square(), b.square(), c.square());
    Ok(QuadraticPoly {
        c2: Rational::one(),
        c1: (a2 - &b2 - &c2) / b,
        c0: c2,
    })
}

/// A subset of {−, 0, +}.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct SignSet {
    pub minus: bool,
    pub zero: bool,
    pub plus: bool,
}

impl SignSet {
    pub const EMPTY: SignSet = SignSet { minus: false, zero: false, plus: false };
    pub const ZERO: SignSet = SignSet { minus: false, zero: true, plus: false };

    pub fn of_sign(s: i8) -> SignSet {
        match s {
            x if x < 0 => SignSet { minus: true, ..SignSet::EMPTY },
            0 => SignSet::ZERO,
            _ => SignSet { plus: true, ..SignSet::EMPTY },
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.minus || self.zero || self.plus)
    }
}

impl BitOr for SignSet {
    type Output = SignSet;
    fn bitor(self, rhs: SignSet) -> SignSet {
        SignSet {
            minus: self.minus || rhs.minus,
            zero: self.zero || rhs.zero,
            plus: self.plus || rhs.plus,
        }
    }
}

impl fmt::Display for SignSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = [(self.minus, "-"), (self.zero, "0"), (self.plus, "+")]
            .iter()
            .filter(|(on, _)| *on)
            .map(|(_, s)| *s)
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for SignSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for SignSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Exact set of signs taken by `q` on `[lo, hi]`.
pub fn quad_sign_set(q: &QuadraticPoly, lo: &Rational, hi: &Rational) -> Result<SignSet> {
    if lo >= hi {
        return Err(Error::EmptyInterval {
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    if q.is_zero() {
        return Ok(SignSet::ZERO);
    }
    let mut set = SignSet::of_sign(q.eval(lo).signum()) | SignSet::of_sign(q.eval(hi).signum());
    if !q.c2.is_zero() {
        let vertex = -(&q.c1 / &(Rational::from_integer(2) * &q.c2));
        if &vertex > lo && &vertex < hi {
            set = set | SignSet::of_sign(q.eval(&vertex).signum());
        }
    }
    if set.plus && set.minus {
        set.zero = true;
    }
    Ok(set)
}

/// A vertex of a triangle `(a, b, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Vertex {
    A,
    B,
    C,
}

impl Vertex {
    pub const ALL: [Vertex; 3] = [Vertex::A, Vertex::B, Vertex::C];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Endpoints `(p, q)` of the opposite side, in the order the side is walked.
    pub fn opposite(self) -> (usize, usize) {
        match self {
            Vertex::A => (1, 2),
            Vertex::B => (0, 2),
            Vertex::C => (0, 1),
        }
    }

    /// Side label such as `a:bc`.
    pub fn side_label(self) -> &'static str {
        match self {
            Vertex::A => "a:bc",
            Vertex::B => "b:ac",
            Vertex::C => "c:ab",
        }
    }
}

impl FromStr for Vertex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Vertex> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" | "a:bc" => Ok(Vertex::A),
            "b" | "b:ac" => Ok(Vertex::B),
            "c" | "c:ab" => Ok(Vertex::C),
            other => Err(Error::Parse(format!("unknown side `{other}` (expected a:bc, b:ac or c:ab)"))),
        }
    }
}

/// Sign of `Δ = f² − h²` on one linear piece of the profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PieceSign {
    pub t_lo: Rational,
    pub t_hi: Rational,
    pub delta: QuadraticPoly,
    pub signs: SignSet,
}

/// Comparison of one vertex against its opposite side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SideComparison {
    pub vertex: Vertex,
    /// `d_tr(v, q)`, `d_tr(p, q)`, `d_tr(v, p)` for the side walked from `p` to `q`.
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub profile: PiecewiseLinearFn,
    pub h_squared: QuadraticPoly,
    pub pieces: Vec<PieceSign>,
    pub union_signs: SignSet,
}

fn check_distinct(pts: &[&ProjectivePoint; 3]) -> Result<()> {
    if pts[0] == pts[1] || pts[0] == pts[2] || pts[1] == pts[2] {
        return Err(Error::DuplicateVertices);
    }
    Ok(())
}

/// Compares the tropical distance from `vertex` to its opposite side with
/// the comparison-triangle distance.
pub fn side_comparison(
    vertex: Vertex,
    a: &ProjectivePoint,
    b: &ProjectivePoint,
    c: &ProjectivePoint,
) -> Result<SideComparison> {
    let pts = [a, b, c];
    check_distinct(&pts)?;
    let v = pts[vertex.index()];
    let (pi, qi) = vertex.opposite();
    let (p, q) = (pts[pi], pts[qi]);

    let seg = trop_segment(p, q)?;
    let profile = distance_profile(v, &seg)?;
    let side_a = trop_distance(v, q)?;
    let side_b = seg.length().clone();
    let side_c = trop_distance(v, p)?;
    let h_squared = comparison_quadratic(&side_a, &side_b, &side_c)?;

    let mut pieces = Vec::with_capacity(profile.pieces().len());
    let mut union_signs = SignSet::EMPTY;
    for piece in profile.pieces() {
        let (slope, intercept) = piece.linear_coefficients();
        let delta = QuadraticPoly::square_of_line(&slope, &intercept).sub(&h_squared);
        let signs = quad_sign_set(&delta, &piece.t_lo, &piece.t_hi)?;
        union_signs = union_signs | signs;
        pieces.push(PieceSign {
            t_lo: piece.t_lo.clone(),
            t_hi: piece.t_hi.clone(),
            delta,
            signs,
        });
    }
    Ok(SideComparison {
        vertex,
        a: side_a,
        b: side_b,
        c: side_c,
        profile,
        h_squared,
        pieces,
        union_signs,
    })
}

/// Curvature class of a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CurvatureClass {
    Flat,
    Positive,
    Negative,
    Undefined,
}

impl CurvatureClass {
    pub const ALL: [CurvatureClass; 4] = [
        CurvatureClass::Flat,
        CurvatureClass::Positive,
        CurvatureClass::Negative,
        CurvatureClass::Undefined,
    ];

    /// Decision rule on the union of all piece sign sets.
    pub fn from_signs(u: SignSet) -> CurvatureClass {
        match (u.plus, u.minus) {
            (true, true) => CurvatureClass::Undefined,
            (true, false) => CurvatureClass::Positive,
            (false, true) => CurvatureClass::Negative,
            (false, false) => CurvatureClass::Flat,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CurvatureClass::Flat => "flat",
            CurvatureClass::Positive => "positive",
            CurvatureClass::Negative => "negative",
            CurvatureClass::Undefined => "undefined",
        }
    }
}

impl fmt::Display for CurvatureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CurvatureClass::Flat => "Flat",
            CurvatureClass::Positive => "Positive",
            CurvatureClass::Negative => "Negative",
            CurvatureClass::Undefined => "Undefined",
        };
        f.write_str(s)
    }
}

/// Tropical side lengths of a triangle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SideLengths {
    pub ab: Rational,
    pub ac: Rational,
    pub bc: Rational,
}

/// An interval of a side on which `f − h` takes a given strict sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub sign: char,
    pub side: &'static str,
    pub t_lo: Rational,
    pub t_hi: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurvatureReport {
    pub triangle: [ProjectivePoint; 3],
    pub side_lengths: SideLengths,
    pub comparisons: [SideComparison; 3],
    pub class: CurvatureClass,
}

impl CurvatureReport {
    pub fn union_signs(&self) -> SignSet {
        self.comparisons
            .iter()
            .fold(SignSet::EMPTY, |acc, s| acc | s.union_signs)
    }

    pub fn comparison(&self, vertex: Vertex) -> &SideComparison {
        &self.comparisons[vertex.index()]
    }

    /// For each strict sign present, the first piece (side order a, b, c)
    /// on which it occurs.
    pub fn witnesses(&self) -> Vec<Witness> {
        let mut out = Vec::new();
        for (want, sign) in [(true, '+'), (false, '-')] {
            let hit = self.comparisons.iter().find_map(|cmp| {
                cmp.pieces
                    .iter()
                    .find(|p| if want { p.signs.plus } else { p.signs.minus })
                    .map(|p| Witness {
                        sign,
                        side: cmp.vertex.side_label(),
                        t_lo: p.t_lo.clone(),
                        t_hi: p.t_hi.clone(),
                    })
            });
            out.extend(hit);
        }
        out
    }
}

/// Classifies a tropical triangle as flat, positively curved (fat),
/// negatively curved (skinny) or of undefined curvature.
///
/// All three vertex-to-side comparisons are pooled: a triangle that is
/// strictly fat somewhere and strictly skinny somewhere else is undefined.
pub fn classify_curvature(
    a: &ProjectivePoint,
    b: &ProjectivePoint,
    c: &ProjectivePoint,
) -> Result<CurvatureReport> {
    check_distinct(&[a, b, c])?;
    let ca = side_comparison(Vertex::A, a, b, c)?;
    let cb = side_comparison(Vertex::B, a, b, c)?;
    let cc = side_comparison(Vertex::C, a, b, c)?;
    let side_lengths = SideLengths {
        ab: cc.b.clone(),
        ac: cb.b.clone(),
        bc: ca.b.clone(),
    };
    let class = CurvatureClass::from_signs(ca.union_signs | cb.union_signs | cc.union_signs);
    Ok(CurvatureReport {
        triangle: [a.clone(), b.clone(), c.clone()],
        side_lengths,
        comparisons: [ca, cb, cc],
        class,
    })
}

/// Just the class, for bulk experiments.
pub fn curvature_class(
    a: &ProjectivePoint,
    b: &ProjectivePoint,
    c: &ProjectivePoint,
) -> Result<CurvatureClass> {
    classify_curvature(a, b, c).map(|r| r.class)
}
