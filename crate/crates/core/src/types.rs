//! Combinatorial types of tropical triangles in the plane ℝ³/ℝ𝟏.
//!
//! The tropical convex hull of three points is decomposed into type cells: a
//! point `x` has type `(S₁, S₂, S₃)` where `S_j` is the set of coordinates
//! at which `v^(j) − x` attains its minimum. The set of labels with nonempty
//! cells, taken up to the symmetries that permute coordinates and vertices,
//! determines which of the five combinatorial types the triangle has.

use std::fmt;
use std::str::FromStr;

use once_cell::sync::Lazy;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::{check_dims, ProjectivePoint};
use crate::rational::Rational;

const PERMS3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// `(S₁, S₂, S₃)`, each a nonempty subset of the coordinates `{0, 1, 2}`
/// stored as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TypeCellLabel {
    masks: [u8; 3],
}

impl Ord for TypeCellLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.code().cmp(&other.code())
    }
}

impl PartialOrd for TypeCellLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl TypeCellLabel {
    pub fn new(masks: [u8; 3]) -> Result<TypeCellLabel> {
        if masks.iter().any(|&m| m == 0 || m > 7) {
            return Err(Error::InvalidParameter(format!(
                "type cell masks must be nonempty subsets of three coordinates, got {masks:?}"
            )));
        }
        Ok(TypeCellLabel { masks })
    }

    pub fn masks(&self) -> [u8; 3] {
        self.masks
    }

    /// Packs the label into 9 bits, `S₁ | S₂ << 3 | S₃ << 6`.
    pub fn code(&self) -> u16 {
        self.masks[0] as u16 | (self.masks[1] as u16) << 3 | (self.masks[2] as u16) << 6
    }

    fn from_code(code: u16) -> TypeCellLabel {
        TypeCellLabel {
            masks: [(code & 7) as u8, (code >> 3 & 7) as u8, (code >> 6 & 7) as u8],
        }
    }

    /// Image under relabeling coordinates by `coord` and vertices by `vert`:
    /// the new `S_j` is the old `S_{vert[j]}` with coordinate `coord[i]`
    /// renamed to `i`.
    fn transform(&self, coord: &[usize; 3], vert: &[usize; 3]) -> TypeCellLabel {
        let mut masks = [0u8; 3];
        for (j, m) in masks.iter_mut().enumerate() {
            let old = self.masks[vert[j]];
            for (i, &src) in coord.iter().enumerate() {
                if old >> src & 1 == 1 {
                    *m |= 1 << i;
                }
            }
        }
        TypeCellLabel { masks }
    }

    /// Componentwise inclusion of the coordinate sets.
    pub fn is_subset_of(&self, other: &TypeCellLabel) -> bool {
        self.masks.iter().zip(other.masks).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Display for TypeCellLabel {
    /// Writes `(12,3,123)` with 1-based coordinates.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, m) in self.masks.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            for i in 0..3 {
                if m >> i & 1 == 1 {
                    write!(f, "{}", i + 1)?;
                }
            }
        }
        write!(f, ")")
    }
}

impl Serialize for TypeCellLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Subset of the 512 possible label codes.
#[derive(Clone, Copy, Default, PartialEq, Eq)]
struct CodeSet([u64; 8]);

impl CodeSet {
    fn insert(&mut self, code: u16) {
        self.0[(code >> 6) as usize] |= 1 << (code & 63);
    }

    fn contains(&self, code: u16) -> bool {
        self.0[(code >> 6) as usize] >> (code & 63) & 1 == 1
    }
}

/// The labels whose type cells are nonempty, in increasing code order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TypeComplex {
    labels: Vec<TypeCellLabel>,
}

impl TypeComplex {
    pub fn labels(&self) -> &[TypeCellLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn contains(&self, label: &TypeCellLabel) -> bool {
        self.labels.binary_search(label).is_ok()
    }

    fn code_set(&self) -> CodeSet {
        let mut set = CodeSet::default();
        for l in &self.labels {
            set.insert(l.code());
        }
        set
    }

    fn transformed_codes(&self, coord: &[usize; 3], vert: &[usize; 3]) -> Vec<u16> {
        let mut codes: Vec<u16> = self.labels.iter().map(|l| l.transform(coord, vert).code()).collect();
        codes.sort_unstable();
        codes
    }

    /// The complex of the triangle with coordinates relabeled by `coord` and
    /// vertices by `vert`.
    pub fn transform(&self, coord: &[usize; 3], vert: &[usize; 3]) -> TypeComplex {
        TypeComplex {
            labels: self
                .transformed_codes(coord, vert)
                .into_iter()
                .map(TypeCellLabel::from_code)
                .collect(),
        }
    }
}

/// Computes the nonempty type cells of the triangle `(a, b, c)`.
///
/// The cell of `(S₁, S₂, S₃)` is `{x : x_k − x_i ≤ v^(j)_k − v^(j)_i for all
/// j, all i ∈ S_j and all k}`, a system of difference constraints on three
/// variables taken modulo ℝ𝟏. It is nonempty exactly when the constraint
/// graph has no negative cycle, and on three nodes only the 2-cycles and the
/// two 3-cycles need checking.
pub fn type_cells(a: &ProjectivePoint, b: &ProjectivePoint, c: &ProjectivePoint) -> Result<TypeComplex> {
    check_plane_triangle(a, b, c)?;
    let verts = [a, b, c];
    // diff[j][i][k] = v^(j)_k − v^(j)_i
    let diff: Vec<[[Rational; 3]; 3]> = verts
        .iter()
        .map(|v| {
            let x = v.coords();
            std::array::from_fn(|i| std::array::from_fn(|k| &x[k] - &x[i]))
        })
        .collect();

    // bound[J][i][k]: tightest bound on x_k − x_i from the vertices in the
    // bit set J, or None when J is empty.
    let bound: Vec<[[Option<Rational>; 3]; 3]> = (0u8..8)
        .map(|set| {
            std::array::from_fn(|i| {
                std::array::from_fn(|k| {
                    (0..3)
                        .filter(|j| set >> j & 1 == 1)
                        .map(|j| &diff[j][i][k])
                        .min()
                        .cloned()
                })
            })
        })
        .collect();

    // Codes are visited in increasing order, so `labels` comes out sorted.
    let mut labels = Vec::new();
    for code in 0u16..512 {
        let label = TypeCellLabel::from_code(code);
        if label.masks.contains(&0) {
            continue;
        }
        // vertices constraining coordinate i
        let owners: [u8; 3] = std::array::from_fn(|i| {
            (0..3).filter(|&j| label.masks[j] >> i & 1 == 1).fold(0u8, |acc, j| acc | 1 << j)
        });
        let w = |i: usize, k: usize| bound[owners[i] as usize][i][k].as_ref();
        if cell_is_feasible(&w) {
            labels.push(label);
        }
    }
    Ok(TypeComplex { labels })
}

fn cell_is_feasible<'a>(w: &impl Fn(usize, usize) -> Option<&'a Rational>) -> bool {
    let cycle = |path: &[usize]| -> bool {
        let mut sum = Rational::zero();
        for e in 0..path.len() {
            match w(path[e], path[(e + 1) % path.len()]) {
                Some(x) => sum = sum + x,
                None => return true,
            }
        }
        !sum.is_negative()
    };
    cycle(&[0, 1]) && cycle(&[0, 2]) && cycle(&[1, 2]) && cycle(&[0, 1, 2]) && cycle(&[0, 2, 1])
}

fn check_plane_triangle(a: &ProjectivePoint, b: &ProjectivePoint, c: &ProjectivePoint) -> Result<()> {
    check_dims(a.dim(), b.dim())?;
    check_dims(a.dim(), c.dim())?;
    if a.dim() != 3 {
        return Err(Error::InvalidParameter(format!(
            "triangle types are defined in ℝ³/ℝ𝟏, got dimension {}",
            a.dim()
        )));
    }
    if a == b || a == c || b == c {
        return Err(Error::DuplicateVertices);
    }
    Ok(())
}

/// Orbit representative of a type complex under the 36 relabelings of
/// coordinates and vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u16>);

impl CanonicalForm {
    pub fn codes(&self) -> &[u16] {
        &self.0
    }
}

/// The lexicographically smallest sorted code list over all 36 relabelings.
pub fn canonical_invariant(tc: &TypeComplex) -> CanonicalForm {
    let mut best: Option<Vec<u16>> = None;
    for coord in &PERMS3 {
        for vert in &PERMS3 {
            let codes = tc.transformed_codes(coord, vert);
            if best.as_ref().is_none_or(|b| codes < *b) {
                best = Some(codes);
            }
        }
    }
    CanonicalForm(best.expect("36 transforms"))
}

/// The five combinatorial types of plane tropical triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TriangleType {
    T1,
    T2,
    T3,
    T4,
    T5,
}

impl TriangleType {
    pub const ALL: [TriangleType; 5] = [
        TriangleType::T1,
        TriangleType::T2,
        TriangleType::T3,
        TriangleType::T4,
        TriangleType::T5,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TriangleType::T1 => "T1",
            TriangleType::T2 => "T2",
            TriangleType::T3 => "T3",
            TriangleType::T4 => "T4",
            TriangleType::T5 => "T5",
        }
    }

    /// The exemplar triangle whose type complex defines this type.
    pub fn exemplar(self) -> [ProjectivePoint; 3] {
        let p = |x: i64, y: i64| ProjectivePoint::from_ints(&[x, y]);
        match self {
            TriangleType::T1 => [p(0, 0), p(2, 4), p(5, 1)],
            TriangleType::T2 => [p(0, 0), p(3, 2), p(4, 1)],
            TriangleType::T3 => [p(0, 0), p(4, 1), p(7, 3)],
            TriangleType::T4 => [p(3, 4), p(6, 3), p(9, 5)],
            TriangleType::T5 => [p(0, 4), p(3, 0), p(5, 6)],
        }
    }

    /// Type complex of the exemplar.
    pub fn reference_complex(self) -> &'static TypeComplex {
        &REFERENCES[self as usize].0
    }
}

impl fmt::Display for TriangleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TriangleType {
    type Err = Error;
    fn from_str(s: &str) -> Result<TriangleType> {
        TriangleType::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown triangle type `{s}` (expected T1..T5)")))
    }
}

static REFERENCES: Lazy<Vec<(TypeComplex, CanonicalForm)>> = Lazy::new(|| {
    TriangleType::ALL
        .iter()
        .map(|t| {
            let [a, b, c] = t.exemplar();
            let tc = type_cells(&a, &b, &c).expect("exemplars are valid triangles");
            let form = canonical_invariant(&tc);
            (tc, form)
        })
        .collect()
});

/// Result of type classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangleTypeSet {
    /// Matching types in increasing order.
    pub types: Vec<TriangleType>,
    /// False when the complex matches no reference exactly; `types` then
    /// lists the references that degenerate to it.
    pub generic: bool,
}

impl TriangleTypeSet {
    /// The type of a generic triangle.
    pub fn single(&self) -> Option<TriangleType> {
        match (self.generic, self.types.as_slice()) {
            (true, [t]) => Some(*t),
            _ => None,
        }
    }
}

impl fmt::Display for TriangleTypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.types.iter().map(|t| t.as_str()).collect();
        write!(f, "{{{}}}", names.join(","))?;
        if !self.generic {
            write!(f, " (non-generic)")?;
        }
        Ok(())
    }
}

/// Classifies a plane triangle by its type complex.
///
/// A generic triangle matches exactly one reference complex up to symmetry.
/// Otherwise the result lists every type some relabeling of whose reference
/// complex is contained in the input's complex: cells of a nearby generic
/// triangle stay nonempty in the limit, so those are the types the input can
/// be perturbed into.
pub fn classify_type(a: &ProjectivePoint, b: &ProjectivePoint, c: &ProjectivePoint) -> Result<TriangleTypeSet> {
    let tc = type_cells(a, b, c)?;
    Ok(classify_complex(&tc))
}

pub fn classify_complex(tc: &TypeComplex) -> TriangleTypeSet {
    let form = canonical_invariant(tc);
    if let Some(i) = REFERENCES.iter().position(|(_, f)| *f == form) {
        return TriangleTypeSet {
            types: vec![TriangleType::ALL[i]],
            generic: true,
        };
    }
    let present = tc.code_set();
    let types = TriangleType::ALL
        .into_iter()
        .filter(|t| {
            let reference = t.reference_complex();
            PERMS3.iter().any(|coord| {
                PERMS3.iter().any(|vert| {
                    reference
                        .labels
                        .iter()
                        .all(|l| present.contains(l.transform(coord, vert).code()))
                })
            })
        })
        .collect();
    TriangleTypeSet { types, generic: false }
}
