//! Random equidistant (ultrametric) trees as vectors of pairwise leaf
//! distances.

use rand::Rng;
use serde::Serialize;

use super::rng::RngStream;
use crate::error::{Error, Result};
use crate::point::{canonicalize, ProjectivePoint};
use crate::rational::Rational;

/// Pairwise leaf distances `u_ij` for `i < j`, in lexicographic pair order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct UltrametricVector {
    n_leaves: usize,
    entries: Vec<Rational>,
}

fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

impl UltrametricVector {
    /// Wraps raw entries after checking their count and nonnegativity.
    pub fn new(n_leaves: usize, entries: Vec<Rational>) -> Result<UltrametricVector> {
        if n_leaves < 3 {
            return Err(Error::InvalidParameter(format!("trees need at least 3 leaves, got {n_leaves}")));
        }
        if entries.len() != pair_count(n_leaves) {
            return Err(Error::DimensionMismatch {
                left: pair_count(n_leaves),
                right: entries.len(),
            });
        }
        if entries.iter().any(Rational::is_negative) {
            return Err(Error::InvalidParameter("negative leaf distance".into()));
        }
        Ok(UltrametricVector { n_leaves, entries })
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        i * (2 * self.n_leaves - i - 1) / 2 + (j - i - 1)
    }

    /// `u_ij`, zero on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> Rational {
        if i == j {
            Rational::zero()
        } else {
            self.entries[self.index(i, j)].clone()
        }
    }

    /// Three-point condition: in every triple the maximum is attained at
    /// least twice.
    pub fn is_ultrametric(&self) -> bool {
        let n = self.n_leaves;
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                (j + 1..n).all(|k| {
                    let mut v = [self.get(i, j), self.get(i, k), self.get(j, k)];
                    v.sort();
                    v[1] == v[2]
                })
            })
        })
    }

    /// The tree as a point of ℝ^(N choose 2)/ℝ𝟏.
    pub fn to_point(&self) -> Result<ProjectivePoint> {
        canonicalize(&self.entries)
    }
}

/// A cluster of the hierarchy: its leaves and the height of its root.
#[derive(Debug, Clone)]
struct Cluster {
    leaves: Vec<usize>,
    height: Rational,
}

/// Internal clusters of the tree encoded by `u`, with heights `u/2`.
fn clusters(u: &UltrametricVector) -> Vec<Cluster> {
    let mut out = Vec::new();
    let mut stack = vec![(0..u.n_leaves).collect::<Vec<usize>>()];
    while let Some(leaves) = stack.pop() {
        if leaves.len() < 2 {
            continue;
        }
        let top = leaves
            .iter()
            .flat_map(|&i| leaves.iter().map(move |&j| (i, j)))
            .filter(|(i, j)| i < j)
            .map(|(i, j)| u.get(i, j))
            .max()
            .expect("at least one pair");
        // Children are the classes of "closer than the top".
        let mut assigned = vec![false; leaves.len()];
        for s in 0..leaves.len() {
            if assigned[s] {
                continue;
            }
            let part: Vec<usize> = (s..leaves.len())
                .filter(|&t| !assigned[t] && (t == s || u.get(leaves[s], leaves[t]) < top))
                .collect();
            for &t in &part {
                assigned[t] = true;
            }
            stack.push(part.into_iter().map(|t| leaves[t]).collect());
        }
        out.push(Cluster {
            leaves,
            height: top / Rational::from_integer(2),
        });
    }
    out
}

fn from_clusters(n_leaves: usize, clusters: &[Cluster]) -> UltrametricVector {
    // Smallest cluster containing both leaves gives the lca.
    let mut by_size: Vec<&Cluster> = clusters.iter().collect();
    by_size.sort_by_key(|c| c.leaves.len());
    let two = Rational::from_integer(2);
    let mut entries = Vec::with_capacity(pair_count(n_leaves));
    for i in 0..n_leaves {
        for j in i + 1..n_leaves {
            let lca = by_size
                .iter()
                .find(|c| c.leaves.contains(&i) && c.leaves.contains(&j))
                .expect("root contains all leaves");
            entries.push(&two * &lca.height);
        }
    }
    UltrametricVector { n_leaves, entries }
}

/// A random ultrametric tree on `n_leaves` leaves.
///
/// The labeled rooted binary topology is uniform (each new leaf attaches to
/// a uniformly chosen edge, the edge above the root included). The root sits
/// at `height`; the other internal heights are sorted uniforms in
/// `(0, height)` handed out in order of increasing clade size, so every
/// parent is above its children.
pub fn sample_ultrametric_tree(n_leaves: usize, height: &Rational, rng: &mut RngStream) -> Result<UltrametricVector> {
    if n_leaves < 3 {
        return Err(Error::InvalidParameter(format!("trees need at least 3 leaves, got {n_leaves}")));
    }
    if !height.is_positive() {
        return Err(Error::InvalidParameter("tree height must be positive".into()));
    }
    // Nodes 0..n are leaves; internal nodes are appended. parent[root] = None.
    let mut parent: Vec<Option<usize>> = vec![None; n_leaves];
    let mut alive: Vec<usize> = vec![0, 1];
    let first = parent.len();
    parent.push(None);
    parent[0] = Some(first);
    parent[1] = Some(first);
    alive.push(first);
    for leaf in 2..n_leaves {
        let target = alive[rng.gen_range(0..alive.len())];
        let joint = parent.len();
        parent.push(parent[target]);
        parent[target] = Some(joint);
        parent[leaf] = Some(joint);
        alive.push(leaf);
        alive.push(joint);
    }

    let internal: Vec<usize> = (n_leaves..parent.len()).collect();
    let leaves_under = |node: usize| -> Vec<usize> {
        (0..n_leaves)
            .filter(|&leaf| {
                let mut cur = Some(leaf);
                while let Some(c) = cur {
                    if c == node {
                        return true;
                    }
                    cur = parent[c];
                }
                false
            })
            .collect()
    };
    let mut clusters: Vec<Cluster> = internal
        .iter()
        .map(|&node| Cluster {
            leaves: leaves_under(node),
            height: Rational::zero(),
        })
        .collect();
    clusters.sort_by_key(|c| c.leaves.len());

    let heights = distinct_sorted_heights(n_leaves - 2, rng);
    let last = clusters.len() - 1;
    for (c, h) in clusters[..last].iter_mut().zip(heights) {
        c.height = h * height;
    }
    clusters[last].height = height.clone();
    Ok(from_clusters(n_leaves, &clusters))
}

/// `k` distinct values strictly inside `(0, 1)`, increasing.
fn distinct_sorted_heights(k: usize, rng: &mut RngStream) -> Vec<Rational> {
    loop {
        let mut v: Vec<Rational> = (0..k).map(|_| rng.unit_rational()).collect();
        v.sort();
        if v.first().is_none_or(|x| x.is_positive()) && v.windows(2).all(|w| w[0] < w[1]) {
            return v;
        }
    }
}

/// Multiplies every internal height by `1 + eps·U(−1, 1)` and reassigns the
/// perturbed values in the original height order, so parents stay above
/// their children and the output is again ultrametric.
pub fn perturb_tree(u: &UltrametricVector, eps: &Rational, rng: &mut RngStream) -> Result<UltrametricVector> {
    if eps.is_negative() || eps >= &Rational::one() {
        return Err(Error::InvalidParameter(format!("perturbation eps must lie in [0, 1), got {eps}")));
    }
    let mut clusters = clusters(u);
    clusters.sort_by(|a, b| a.height.cmp(&b.height).then(a.leaves.len().cmp(&b.leaves.len())));
    let mut perturbed: Vec<Rational> = clusters
        .iter()
        .map(|c| &c.height * &(Rational::one() + eps * &rng.symmetric_unit_rational()))
        .collect();
    perturbed.sort();
    for (c, h) in clusters.iter_mut().zip(perturbed) {
        c.height = h;
    }
    Ok(from_clusters(u.n_leaves, &clusters))
}

/// Rounds every internal height to the nearest multiple of `resolution`
/// (halves round up). Rounding is monotone, so the result is ultrametric;
/// nearby heights may merge into a multifurcation.
pub fn round_heights(u: &UltrametricVector, resolution: &Rational) -> Result<UltrametricVector> {
    if !resolution.is_positive() {
        return Err(Error::InvalidParameter("height resolution must be positive".into()));
    }
    let half = Rational::new(1, 2);
    let two = Rational::from_integer(2);
    let entries = u
        .entries
        .iter()
        .map(|x| {
            let steps = (&(x / &two) / resolution + &half).floor();
            &two * &(steps * resolution)
        })
        .collect();
    Ok(UltrametricVector {
        n_leaves: u.n_leaves,
        entries,
    })
}

/// Parameters of a simulated tree set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeSetParams {
    pub leaves: usize,
    pub count: usize,
    /// Number of independent base trees; tree `i` perturbs base `i mod bases`.
    pub bases: usize,
    pub eps: Rational,
    /// Grid for internal heights after perturbation; `None` keeps them exact.
    pub resolution: Option<Rational>,
}

impl Default for TreeSetParams {
    fn default() -> TreeSetParams {
        TreeSetParams {
            leaves: 4,
            count: 480,
            bases: 15,
            eps: Rational::new(1, 20),
            resolution: Some(Rational::new(1, 20)),
        }
    }
}

/// A set of slightly perturbed ultrametric trees with root height 1.
pub fn sample_tree_set(params: &TreeSetParams, rng: &mut RngStream) -> Result<Vec<UltrametricVector>> {
    if params.count < 3 || params.bases == 0 {
        return Err(Error::InvalidParameter(
            "a tree set needs at least 3 trees and 1 base tree".into(),
        ));
    }
    let one = Rational::one();
    let bases = (0..params.bases)
        .map(|_| sample_ultrametric_tree(params.leaves, &one, rng))
        .collect::<Result<Vec<_>>>()?;
    (0..params.count)
        .map(|i| {
            let t = perturb_tree(&bases[i % params.bases], &params.eps, rng)?;
            match &params.resolution {
                Some(res) => round_heights(&t, res),
                None => Ok(t),
            }
        })
        .collect()
}

/// Three distinct members of `set`, chosen uniformly.
pub fn sample_tree_triple<'a>(set: &'a [UltrametricVector], rng: &mut RngStream) -> Result<[&'a UltrametricVector; 3]> {
    if set.len() < 3 {
        return Err(Error::InvalidParameter("tree set has fewer than 3 trees".into()));
    }
    let idx = rand::seq::index::sample(rng, set.len(), 3);
    Ok([&set[idx.index(0)], &set[idx.index(1)], &set[idx.index(2)]])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn caterpillar_vector() {
        let clusters = vec![
            Cluster { leaves: vec![0, 1], height: r(3, 10) },
            Cluster { leaves: vec![0, 1, 2], height: r(7, 10) },
            Cluster { leaves: vec![0, 1, 2, 3], height: r(1, 1) },
        ];
        let u = from_clusters(4, &clusters);
        assert_eq!(u.entries(), &[r(3, 5), r(7, 5), r(2, 1), r(7, 5), r(2, 1), r(2, 1)][..]);
        assert!(u.is_ultrametric());
        assert_eq!(u.get(2, 1), r(7, 5));
    }

    #[test]
    fn cluster_reconstruction_round_trips() {
        let mut rng = RngStream::new(4, 0);
        for _ in 0..50 {
            let u = sample_ultrametric_tree(6, &Rational::one(), &mut rng).unwrap();
            let again = from_clusters(6, &clusters(&u));
            assert_eq!(u, again);
        }
    }

    #[test]
    fn sampled_trees_are_ultrametric() {
        let mut rng = RngStream::new(5, 0);
        for n in 3..8 {
            for _ in 0..20 {
                let u = sample_ultrametric_tree(n, &Rational::one(), &mut rng).unwrap();
                assert!(u.is_ultrametric());
                assert_eq!(u.entries().len(), n * (n - 1) / 2);
                assert_eq!(u.entries().iter().max().unwrap(), &Rational::from_integer(2));
            }
        }
    }

    #[test]
    fn perturbation_preserves_three_point_condition() {
        let mut rng = RngStream::new(6, 0);
        let eps = r(1, 20);
        for _ in 0..1000 {
            let u = sample_ultrametric_tree(4, &Rational::one(), &mut rng).unwrap();
            let v = perturb_tree(&u, &eps, &mut rng).unwrap();
            assert!(v.is_ultrametric());
        }
    }

    #[test]
    fn topologies_are_roughly_uniform() {
        // 15 rooted topologies on 4 leaves: 12 caterpillars and 3 balanced.
        let mut rng = RngStream::new(7, 0);
        let trials = 6000;
        let balanced = (0..trials)
            .filter(|_| {
                let u = sample_ultrametric_tree(4, &Rational::one(), &mut rng).unwrap();
                u.entries().iter().filter(|x| **x == Rational::from_integer(2)).count() == 4
            })
            .count();
        let share = balanced as f64 / trials as f64;
        assert!((share - 0.2).abs() < 0.03, "balanced share {share}");
    }

    #[test]
    fn rounding_keeps_ultrametric() {
        let u = from_clusters(
            4,
            &[
                Cluster { leaves: vec![0, 1], height: r(31, 100) },
                Cluster { leaves: vec![0, 1, 2], height: r(32, 100) },
                Cluster { leaves: vec![0, 1, 2, 3], height: r(1, 1) },
            ],
        );
        let v = round_heights(&u, &r(1, 20)).unwrap();
        // 0.31 and 0.32 both round to 0.30 and merge.
        assert_eq!(v.get(0, 1), r(3, 5));
        assert_eq!(v.get(0, 2), r(3, 5));
        assert_eq!(v.get(0, 3), r(2, 1));
        assert!(v.is_ultrametric());
        let mut rng = RngStream::new(9, 0);
        for _ in 0..200 {
            let t = sample_ultrametric_tree(5, &Rational::one(), &mut rng).unwrap();
            assert!(round_heights(&t, &r(1, 7)).unwrap().is_ultrametric());
        }
    }

    #[test]
    fn tree_sets_are_deterministic() {
        let params = TreeSetParams::default();
        let a = sample_tree_set(&params, &mut RngStream::new(3, 0)).unwrap();
        let b = sample_tree_set(&params, &mut RngStream::new(3, 0)).unwrap();
        assert_eq!(a.len(), 480);
        assert_eq!(a, b);
        assert!(a.iter().all(UltrametricVector::is_ultrametric));
        let mut rng = RngStream::new(3, 1);
        let [x, y, z] = sample_tree_triple(&a, &mut rng).unwrap();
        assert!(a.iter().any(|t| t == x) && a.iter().any(|t| t == y) && a.iter().any(|t| t == z));
    }

    #[test]
    fn parameter_errors() {
        let mut rng = RngStream::new(8, 0);
        assert!(sample_ultrametric_tree(2, &Rational::one(), &mut rng).is_err());
        assert!(sample_ultrametric_tree(4, &Rational::zero(), &mut rng).is_err());
        let u = sample_ultrametric_tree(4, &Rational::one(), &mut rng).unwrap();
        assert!(perturb_tree(&u, &Rational::one(), &mut rng).is_err());
        assert!(UltrametricVector::new(4, vec![Rational::one(); 5]).is_err());
    }
}
