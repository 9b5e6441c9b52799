//! Seeded random generation of triangles and trees.

pub mod polytope;
pub mod regions;
pub mod rng;
pub mod trees;
pub mod triangles;

pub use polytope::{chebyshev_center, chord, hit_and_run, ChainParams, Polytope};
pub use regions::{region_for_system, satisfies_system, strict_rows, triangle_from_coordinates, SystemId};
pub use rng::RngStream;
pub use trees::{
    perturb_tree, round_heights, sample_tree_set, sample_tree_triple, sample_ultrametric_tree, TreeSetParams,
    UltrametricVector,
};
pub use triangles::{
    in_fat_family, is_degenerate, sample_fat_family, sample_integer_triangle, sample_simplex_triangle,
    sample_simplex_vertex, sample_type_conditioned, simplex_coordinates, ConditionedSample, SimplexMode, Triangle,
};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::types::TriangleType;

/// Stream index reserved for state shared by all draws of one sampler (the
/// tree set, the hit-and-run chain).
const SHARED_STREAM: u64 = u64::MAX;

/// Default budget of the rejection sampler per accepted triangle.
pub const DEFAULT_MAX_TRIES: usize = 100_000;

/// A sampler and its parameters, as written on the command line, e.g.
/// `simplex:n=3`, `grid:lo=0,hi=10`, `hitrun:system=T3-ineq`,
/// `reject:type=T5`, `fatfamily:n=5`, `trees:leaves=4,count=480,eps=0.05`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SamplerSpec {
    Simplex { n: usize, mode: SimplexMode },
    Grid { lo: i64, hi: i64 },
    HitRun { system: SystemId, burn_in: usize, thinning: usize },
    Reject { triangle_type: TriangleType, max_tries: usize },
    FatFamily { n: usize },
    Trees(TreeSetParams),
}

impl SamplerSpec {
    /// Ambient dimension `n` of the sampled triangles in ℝⁿ/ℝ𝟏.
    pub fn dim(&self) -> usize {
        match self {
            SamplerSpec::Simplex { n, .. } => *n,
            SamplerSpec::FatFamily { n } => n + 1,
            SamplerSpec::Trees(p) => p.leaves * (p.leaves - 1) / 2,
            _ => 3,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| Error::Parse(format!("bad value `{raw}` for sampler parameter `{key}`")))
}

impl FromStr for SamplerSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<SamplerSpec> {
        let (kind, rest) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        let mut params = Vec::new();
        for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("sampler parameter `{part}` is not key=value")))?;
            params.push((k.trim(), v.trim()));
        }
        let mut spec = match kind {
            "simplex" => SamplerSpec::Simplex {
                n: 3,
                mode: SimplexMode::default(),
            },
            "grid" => SamplerSpec::Grid { lo: 0, hi: 10 },
            "hitrun" => SamplerSpec::HitRun {
                system: SystemId::T3,
                burn_in: ChainParams::default().burn_in,
                thinning: ChainParams::default().thinning,
            },
            "reject" => SamplerSpec::Reject {
                triangle_type: TriangleType::T1,
                max_tries: DEFAULT_MAX_TRIES,
            },
            "fatfamily" => SamplerSpec::FatFamily { n: 3 },
            "trees" => SamplerSpec::Trees(TreeSetParams::default()),
            other => return Err(Error::Parse(format!("unknown sampler `{other}`"))),
        };
        for (k, v) in params {
            match (&mut spec, k) {
                (SamplerSpec::Simplex { n, .. } | SamplerSpec::FatFamily { n }, "n") => *n = parse_value(k, v)?,
                (SamplerSpec::Simplex { mode, .. }, "mode") => *mode = v.parse()?,
                (SamplerSpec::Grid { lo, .. }, "lo") => *lo = parse_value(k, v)?,
                (SamplerSpec::Grid { hi, .. }, "hi") => *hi = parse_value(k, v)?,
                (SamplerSpec::HitRun { system, .. }, "system") => *system = v.parse()?,
                (SamplerSpec::HitRun { burn_in, .. }, "burn_in") => *burn_in = parse_value(k, v)?,
                (SamplerSpec::HitRun { thinning, .. }, "thinning") => *thinning = parse_value(k, v)?,
                (SamplerSpec::Reject { triangle_type, .. }, "type") => *triangle_type = v.parse()?,
                (SamplerSpec::Reject { max_tries, .. }, "max_tries") => *max_tries = parse_value(k, v)?,
                (SamplerSpec::Trees(p), "leaves") => p.leaves = parse_value(k, v)?,
                (SamplerSpec::Trees(p), "count") => p.count = parse_value(k, v)?,
                (SamplerSpec::Trees(p), "bases") => p.bases = parse_value(k, v)?,
                (SamplerSpec::Trees(p), "eps") => p.eps = parse_value(k, v)?,
                (SamplerSpec::Trees(p), "resolution") => {
                    p.resolution = if v == "none" { None } else { Some(parse_value(k, v)?) }
                }
                _ => return Err(Error::Parse(format!("unknown parameter `{k}` for sampler `{kind}`"))),
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

impl SamplerSpec {
    /// Range checks that do not depend on any draw.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match self {
            SamplerSpec::Simplex { n, .. } | SamplerSpec::FatFamily { n } if *n < 3 => {
                bad(format!("sampler needs n ≥ 3, got {n}"))
            }
            SamplerSpec::Grid { lo, hi } if lo >= hi => bad(format!("grid needs lo < hi, got {lo}..{hi}")),
            SamplerSpec::HitRun { thinning: 0, .. } => bad("thinning must be at least 1".into()),
            SamplerSpec::Reject { max_tries: 0, .. } => bad("max_tries must be at least 1".into()),
            SamplerSpec::Trees(p) if p.leaves < 3 || p.count < 3 || p.bases == 0 => {
                bad("trees need leaves ≥ 3, count ≥ 3 and bases ≥ 1".into())
            }
            SamplerSpec::Trees(p) if p.eps.is_negative() || p.eps >= Rational::one() => {
                bad(format!("eps must lie in [0, 1), got {}", p.eps))
            }
            SamplerSpec::Trees(TreeSetParams {
                resolution: Some(r), ..
            }) if !r.is_positive() => bad("resolution must be positive".into()),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SamplerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplerSpec::Simplex { n, mode } => write!(f, "simplex:n={n},mode={mode}"),
            SamplerSpec::Grid { lo, hi } => write!(f, "grid:lo={lo},hi={hi}"),
            SamplerSpec::HitRun {
                system,
                burn_in,
                thinning,
            } => write!(f, "hitrun:system={system},burn_in={burn_in},thinning={thinning}"),
            SamplerSpec::Reject {
                triangle_type,
                max_tries,
            } => write!(f, "reject:type={triangle_type},max_tries={max_tries}"),
            SamplerSpec::FatFamily { n } => write!(f, "fatfamily:n={n}"),
            SamplerSpec::Trees(p) => {
                write!(f, "trees:leaves={},count={},bases={},eps={}", p.leaves, p.count, p.bases, p.eps)?;
                match &p.resolution {
                    Some(r) => write!(f, ",resolution={r}"),
                    None => write!(f, ",resolution=none"),
                }
            }
        }
    }
}

/// One draw of a sampler. `triangle` is `None` when the draw was rejected
/// (three trees of a triple not pairwise distinct as points).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Draw {
    pub triangle: Option<Triangle>,
    /// Proposals consumed; above 1 only for the rejection sampler.
    pub tries: usize,
}

impl Draw {
    fn accepted(triangle: Triangle) -> Draw {
        Draw {
            triangle: Some(triangle),
            tries: 1,
        }
    }
}

/// `count` draws with indices `first..first + count`.
///
/// Draw `i` consumes its own stream `(seed, i)`, so the result does not
/// depend on thread scheduling. The hit-and-run chain and the tree set are
/// built once from the shared stream `(seed, u64::MAX)`.
pub fn draw_samples(spec: &SamplerSpec, seed: u64, first: u64, count: usize) -> Result<Vec<Draw>> {
    spec.validate()?;
    let indices: Vec<u64> = (first..first + count as u64).collect();
    let per_index = |draw: &(dyn Fn(&mut RngStream) -> Result<Draw> + Sync)| -> Result<Vec<Draw>> {
        indices
            .par_iter()
            .map(|&i| draw(&mut RngStream::new(seed, i)))
            .collect()
    };
    match spec {
        SamplerSpec::Simplex { n, mode } => {
            per_index(&|rng| Ok(Draw::accepted(sample_simplex_triangle(*n, *mode, rng)?)))
        }
        SamplerSpec::Grid { lo, hi } => per_index(&|rng| Ok(Draw::accepted(sample_integer_triangle(*lo, *hi, rng)?))),
        SamplerSpec::FatFamily { n } => per_index(&|rng| Ok(Draw::accepted(sample_fat_family(*n, rng)?))),
        SamplerSpec::Reject {
            triangle_type,
            max_tries,
        } => per_index(&|rng| {
            let s = sample_type_conditioned(*triangle_type, rng, *max_tries)?;
            Ok(Draw {
                triangle: Some(s.triangle),
                tries: s.tries,
            })
        }),
        SamplerSpec::Trees(params) => {
            let set: Vec<_> = sample_tree_set(params, &mut RngStream::new(seed, SHARED_STREAM))?
                .iter()
                .map(UltrametricVector::to_point)
                .collect::<Result<_>>()?;
            per_index(&|rng| {
                let idx = rand::seq::index::sample(rng, set.len(), 3);
                let t = [set[idx.index(0)].clone(), set[idx.index(1)].clone(), set[idx.index(2)].clone()];
                let distinct = t[0] != t[1] && t[0] != t[2] && t[1] != t[2];
                Ok(Draw {
                    triangle: distinct.then_some(t),
                    tries: 1,
                })
            })
        }
        SamplerSpec::HitRun {
            system,
            burn_in,
            thinning,
        } => {
            // A single chain; draw i is its (first + i)-th recorded state.
            let states = hit_and_run_states(*system, *burn_in, *thinning, seed, first as usize + count)?;
            states[first as usize..]
                .iter()
                .map(|x| Ok(Draw::accepted(triangle_from_coordinates(x)?)))
                .collect()
        }
    }
}

fn hit_and_run_states(
    system: SystemId,
    burn_in: usize,
    thinning: usize,
    seed: u64,
    wanted: usize,
) -> Result<Vec<Vec<Rational>>> {
    let region = region_for_system(system);
    let mut rng = RngStream::new(seed, SHARED_STREAM);
    let mut start = chebyshev_center(&region)?;
    let mut params = ChainParams { burn_in, thinning };
    let mut states: Vec<Vec<Rational>> = Vec::with_capacity(wanted);
    while states.len() < wanted {
        let batch = hit_and_run(&region, &start, (wanted - states.len()) * thinning, params, &mut rng)?;
        if let Some(last) = batch.last() {
            start = last.clone();
        }
        states.extend(batch);
        params.burn_in = 0;
    }
    states.truncate(wanted);
    Ok(states)
}
