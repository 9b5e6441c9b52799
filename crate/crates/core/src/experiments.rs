//! Monte Carlo experiments over the samplers: curvature and type
//! proportions, aggregated into tables.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{curvature_class, CurvatureClass};
use crate::error::{Error, Result};
use crate::sampling::{draw_samples, Draw, SamplerSpec, SimplexMode, SystemId, TreeSetParams, DEFAULT_MAX_TRIES};
use crate::types::{classify_type, TriangleType};

pub const DEFAULT_SEED: u64 = 20_211_105;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentId {
    Table1,
    Table2,
    Table3,
    Table4,
    Table5,
    Custom,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 6] = [
        ExperimentId::Table1,
        ExperimentId::Table2,
        ExperimentId::Table3,
        ExperimentId::Table4,
        ExperimentId::Table5,
        ExperimentId::Custom,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::Table1 => "table1",
            ExperimentId::Table2 => "table2",
            ExperimentId::Table3 => "table3",
            ExperimentId::Table4 => "table4",
            ExperimentId::Table5 => "table5",
            ExperimentId::Custom => "custom",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;
    fn from_str(s: &str) -> Result<ExperimentId> {
        ExperimentId::ALL
            .into_iter()
            .find(|id| id.as_str() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}` (table1..table5 or custom)")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExperimentConfig {
    pub id: ExperimentId,
    /// Draws per run and group.
    pub trials: usize,
    pub runs: usize,
    pub seed: u64,
    /// Required for `custom`; for the tables it replaces the default sampler
    /// where that makes sense (table1 ignores it).
    pub sampler: Option<SamplerSpec>,
    /// Restricts table4 to one `n`; for table2/table3 only 3 is valid.
    pub dim: Option<usize>,
}

impl ExperimentConfig {
    /// Runs and trials default to 10 × 1000.
    pub fn new(id: ExperimentId, seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            id,
            trials: 1000,
            runs: 10,
            seed,
            sampler: None,
            dim: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.runs == 0 {
            return Err(Error::Config("trials and runs must be at least 1".into()));
        }
        if let Some(s) = &self.sampler {
            s.validate().map_err(|e| Error::Config(e.to_string()))?;
            if let Some(n) = self.dim {
                if s.dim() != n {
                    return Err(Error::Config(format!("sampler `{s}` produces n = {}, not {n}", s.dim())));
                }
            }
        }
        match (self.id, self.dim) {
            (ExperimentId::Custom, _) if self.sampler.is_none() => {
                Err(Error::Config("the custom experiment needs a sampler".into()))
            }
            (ExperimentId::Table1 | ExperimentId::Table2 | ExperimentId::Table3, Some(n)) if n != 3 => {
                Err(Error::Config(format!("{} is defined for plane triangles only (n = 3), got n = {n}", self.id)))
            }
            (ExperimentId::Table4, Some(n)) if n < 3 => Err(Error::Config(format!("table4 needs n ≥ 3, got {n}"))),
            (ExperimentId::Table3, _)
                if self.sampler.as_ref().is_some_and(|s| s.dim() != 3) =>
            {
                Err(Error::Config("table3 types are defined for n = 3 only".into()))
            }
            _ => Ok(()),
        }
    }

    fn total(&self) -> usize {
        self.trials * self.runs
    }
}

/// Counts of one group of draws (one sampler configuration).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProportionGroup {
    pub label: String,
    pub sampler: String,
    /// All draws, rejected ones included.
    pub total: usize,
    /// Draws that produced no admissible triangle.
    pub rejected: usize,
    /// Proposals consumed by the rejection sampler; equals `total` elsewhere.
    pub proposals: usize,
    pub counts: Vec<(String, usize)>,
}

impl ProportionGroup {
    /// Draws that were classified.
    pub fn classified(&self) -> usize {
        self.total - self.rejected
    }

    pub fn count(&self, category: &str) -> usize {
        self.counts
            .iter()
            .find(|(c, _)| c == category)
            .map_or(0, |(_, n)| *n)
    }

    /// Percentage of classified draws in `category`.
    pub fn percentage(&self, category: &str) -> f64 {
        match self.classified() {
            0 => 0.0,
            n => 100.0 * self.count(category) as f64 / n as f64,
        }
    }

    /// Accepted fraction of proposals, in percent.
    pub fn acceptance_rate(&self) -> f64 {
        100.0 * self.total as f64 / self.proposals.max(1) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProportionTable {
    pub config: ExperimentConfig,
    pub groups: Vec<ProportionGroup>,
}

impl ProportionTable {
    pub fn group(&self, label: &str) -> Option<&ProportionGroup> {
        self.groups.iter().find(|g| g.label == label)
    }

    /// Long format `group,category,count,percentage`. Percentages are over
    /// classified draws; the `rejected` row is a percentage of all draws.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("group,category,count,percentage\n");
        for g in &self.groups {
            for (cat, n) in &g.counts {
                let _ = writeln!(out, "{},{},{},{:.2}", g.label, cat, n, g.percentage(cat));
            }
            let rej = 100.0 * g.rejected as f64 / g.total.max(1) as f64;
            let _ = writeln!(out, "{},rejected,{},{:.2}", g.label, g.rejected, rej);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialize")
    }
}

/// Mixes a group index into the master seed so that groups use unrelated
/// streams.
fn group_seed(seed: u64, group: usize) -> u64 {
    seed ^ (group as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

enum Classifier {
    Curvature,
    Type,
}

impl Classifier {
    fn categories(&self) -> Vec<String> {
        match self {
            Classifier::Curvature => CurvatureClass::ALL.iter().map(|c| c.as_str().to_string()).collect(),
            Classifier::Type => TriangleType::ALL
                .iter()
                .map(|t| t.as_str().to_string())
                .chain(["non-generic".to_string()])
                .collect(),
        }
    }

    fn label(&self, draw: &Draw) -> Result<Option<&'static str>> {
        let Some(t) = &draw.triangle else {
            return Ok(None);
        };
        Ok(Some(match self {
            Classifier::Curvature => curvature_class(&t[0], &t[1], &t[2])?.as_str(),
            Classifier::Type => match classify_type(&t[0], &t[1], &t[2])?.single() {
                Some(ty) => ty.as_str(),
                None => "non-generic",
            },
        }))
    }
}

fn run_group(
    cfg: &ExperimentConfig,
    index: usize,
    label: String,
    spec: &SamplerSpec,
    classifier: Classifier,
) -> Result<ProportionGroup> {
    let draws = draw_samples(spec, group_seed(cfg.seed, index), 0, cfg.total())?;
    let labels: Vec<Option<&'static str>> = draws
        .par_iter()
        .map(|d| classifier.label(d))
        .collect::<Result<_>>()?;
    let mut counts: Vec<(String, usize)> = classifier.categories().into_iter().map(|c| (c, 0)).collect();
    let mut rejected = 0;
    for l in labels {
        match l {
            Some(l) => {
                let slot = counts.iter_mut().find(|(c, _)| c == l).expect("known category");
                slot.1 += 1;
            }
            None => rejected += 1,
        }
    }
    Ok(ProportionGroup {
        label,
        sampler: spec.to_string(),
        total: draws.len(),
        rejected,
        proposals: draws.iter().map(|d| d.tries).sum(),
        counts,
    })
}

fn simplex(n: usize) -> SamplerSpec {
    SamplerSpec::Simplex {
        n,
        mode: SimplexMode::Joint,
    }
}

/// Runs one experiment. Identical configurations give identical tables
/// whatever the thread count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ProportionTable> {
    cfg.validate()?;
    let chosen = |default: SamplerSpec| cfg.sampler.clone().unwrap_or(default);
    let groups = match cfg.id {
        ExperimentId::Table1 => {
            let mut groups = Vec::new();
            for (i, ty) in [TriangleType::T1, TriangleType::T5].into_iter().enumerate() {
                let spec = SamplerSpec::Reject {
                    triangle_type: ty,
                    max_tries: DEFAULT_MAX_TRIES,
                };
                groups.push(run_group(cfg, i, format!("reject:{ty}"), &spec, Classifier::Curvature)?);
            }
            for (i, system) in [SystemId::T1, SystemId::T5].into_iter().enumerate() {
                let spec: SamplerSpec = format!("hitrun:system={system}").parse()?;
                groups.push(run_group(cfg, 2 + i, format!("hitrun:{system}"), &spec, Classifier::Curvature)?);
            }
            groups
        }
        ExperimentId::Table2 => {
            let spec = chosen(SamplerSpec::Grid { lo: 0, hi: 10 });
            vec![run_group(cfg, 0, "grid".into(), &spec, Classifier::Curvature)?]
        }
        ExperimentId::Table3 => {
            let spec = chosen(simplex(3));
            vec![run_group(cfg, 0, "n=3".into(), &spec, Classifier::Type)?]
        }
        ExperimentId::Table4 => {
            let dims: Vec<usize> = match cfg.dim {
                Some(n) => vec![n],
                None => (3..=8).collect(),
            };
            dims.into_iter()
                .map(|n| {
                    let spec = match &cfg.sampler {
                        Some(SamplerSpec::Simplex { mode, .. }) => SamplerSpec::Simplex { n, mode: *mode },
                        _ => simplex(n),
                    };
                    run_group(cfg, n, format!("n={n}"), &spec, Classifier::Curvature)
                })
                .collect::<Result<_>>()?
        }
        ExperimentId::Table5 => {
            let spec = chosen(SamplerSpec::Trees(TreeSetParams::default()));
            vec![run_group(cfg, 0, "trees".into(), &spec, Classifier::Curvature)?]
        }
        ExperimentId::Custom => {
            let spec = cfg.sampler.clone().expect("validated");
            vec![run_group(cfg, 0, spec.to_string(), &spec, Classifier::Curvature)?]
        }
    };
    Ok(ProportionTable {
        config: cfg.clone(),
        groups,
    })
}
