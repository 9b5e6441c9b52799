//! Named inequality systems on the six coordinates `(a₁, a₂, b₁, b₂, c₁, c₂)`
//! of a plane triangle, intersected with the probability simplex.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::polytope::Polytope;
use super::triangles::Triangle;
use crate::error::{Error, Result};
use crate::point::ProjectivePoint;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SystemId {
    #[serde(rename = "T1-ineq")]
    T1,
    #[serde(rename = "T2-ineq")]
    T2,
    #[serde(rename = "T3-ineq")]
    T3,
    #[serde(rename = "T4-ineq")]
    T4,
    #[serde(rename = "T5-ineq")]
    T5,
}

impl SystemId {
    pub const ALL: [SystemId; 5] = [SystemId::T1, SystemId::T2, SystemId::T3, SystemId::T4, SystemId::T5];

    pub fn as_str(self) -> &'static str {
        match self {
            SystemId::T1 => "T1-ineq",
            SystemId::T2 => "T2-ineq",
            SystemId::T3 => "T3-ineq",
            SystemId::T4 => "T4-ineq",
            SystemId::T5 => "T5-ineq",
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SystemId {
    type Err = Error;
    fn from_str(s: &str) -> Result<SystemId> {
        SystemId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownSystem(s.to_string()))
    }
}

const A1: usize = 0;
const A2: usize = 1;
const B1: usize = 2;
const B2: usize = 3;
const C1: usize = 4;
const C2: usize = 5;

/// `x_i < x_j`
fn lt(i: usize, j: usize) -> [i64; 6] {
    let mut r = [0; 6];
    r[i] += 1;
    r[j] -= 1;
    r
}

/// `x_i − x_j < x_k − x_l`
fn diff_lt(i: usize, j: usize, k: usize, l: usize) -> [i64; 6] {
    let mut r = [0; 6];
    r[i] += 1;
    r[j] -= 1;
    r[k] -= 1;
    r[l] += 1;
    r
}

/// Rows `r` of the strict system `r·x < 0`.
pub fn strict_rows(id: SystemId) -> Vec<[i64; 6]> {
    let mut rows = vec![lt(A1, B1), lt(B1, C1)];
    match id {
        SystemId::T1 => rows.extend([
            lt(A2, B2),
            lt(B2, C2),
            diff_lt(B1, B2, A1, A2),
            diff_lt(A1, A2, C1, C2),
        ]),
        SystemId::T2 => rows.extend([lt(A2, C2), lt(C2, B2), diff_lt(A1, A2, B1, B2)]),
        SystemId::T3 => rows.extend([
            lt(A2, B2),
            lt(B2, C2),
            diff_lt(A1, A2, B1, B2),
            diff_lt(B1, B2, C1, C2),
        ]),
        SystemId::T4 => rows.extend([
            lt(B2, A2),
            lt(A2, C2),
            diff_lt(A1, A2, C1, C2),
            diff_lt(B1, B2, C1, C2),
        ]),
        SystemId::T5 => rows.extend([
            lt(B2, A2),
            lt(A2, C2),
            diff_lt(A1, A2, C1, C2),
            diff_lt(C1, C2, B1, B2),
        ]),
    }
    rows
}

/// Exact check of the strict system on the affine coordinates of a plane
/// triangle.
pub fn satisfies_system(id: SystemId, t: &Triangle) -> bool {
    let x = triangle_coordinates(t);
    x.len() == 6
        && strict_rows(id).iter().all(|row| {
            let v: Rational = row.iter().zip(&x).map(|(&c, xi)| Rational::from_integer(c) * xi).sum();
            v.is_negative()
        })
}

/// The closed region of the system plus `x ≥ 0` and `Σx = 1`.
pub fn region_for_system(id: SystemId) -> Polytope {
    let to_row = |r: &[i64; 6]| r.iter().map(|&c| Rational::from_integer(c)).collect::<Vec<_>>();
    let mut g: Vec<Vec<Rational>> = strict_rows(id).iter().map(to_row).collect();
    for i in 0..6 {
        let mut r = [0; 6];
        r[i] = -1;
        g.push(to_row(&r));
    }
    let h = vec![Rational::zero(); g.len()];
    Polytope::new(6, g, h)
        .and_then(|p| p.with_equalities(vec![vec![Rational::one(); 6]], vec![Rational::one()]))
        .expect("well-formed system")
}

/// `(a₁, a₂, b₁, b₂, c₁, c₂)` → triangle with implicit leading zeros.
pub fn triangle_from_coordinates(x: &[Rational]) -> Result<Triangle> {
    if x.len() != 6 {
        return Err(Error::DimensionMismatch { left: 6, right: x.len() });
    }
    Ok([
        ProjectivePoint::from_affine(&x[0..2])?,
        ProjectivePoint::from_affine(&x[2..4])?,
        ProjectivePoint::from_affine(&x[4..6])?,
    ])
}

fn triangle_coordinates(t: &Triangle) -> Vec<Rational> {
    t.iter().flat_map(|p| p.affine().iter().cloned()).collect()
}
