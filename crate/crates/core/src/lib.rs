//! Exact tropical metric geometry in the tropical projective torus ℝⁿ/ℝ𝟏:
//! tropical segments, vertex-to-side distance profiles, Alexandrov curvature
//! classification, combinatorial types of plane triangles, and the random
//! samplers and experiment harness built on top of them.
//!
//! All geometric kernels work in exact rational arithmetic.

pub mod curvature;
pub mod error;
pub mod experiments;
pub mod point;
pub mod pwl;
pub mod rational;
pub mod sampling;
pub mod segment;
pub mod types;

pub use curvature::{
    classify_curvature, comparison_quadratic, curvature_class, quad_sign_set, side_comparison,
    CurvatureClass, CurvatureReport, QuadraticPoly, SideComparison, SignSet, Vertex,
};
pub use error::{Error, Result};
pub use experiments::{run_experiment, ExperimentConfig, ExperimentId, ProportionGroup, ProportionTable};
pub use point::{canonicalize, parse_points, trop_distance, trop_norm, ProjectivePoint};
pub use pwl::{distance_profile, AffinePiece, PiecewiseLinearFn};
pub use rational::Rational;
pub use sampling::{draw_samples, Draw, RngStream, SamplerSpec, SimplexMode, Triangle};
pub use segment::{plane_segment_type, segment_point, trop_segment, PlaneSegmentType, TropicalSegment};
pub use types::{canonical_invariant, classify_type, type_cells, TriangleType, TriangleTypeSet, TypeCellLabel, TypeComplex};
