//! Uniform spanning trees and the leaf-weight functional
//! `w(T) = sum over leaves v of T of 1/d(v)`, with `d` the host degree.
//!
//! Trees are drawn with Wilson's algorithm. Monte Carlo runs are split into
//! fixed blocks of samples; block `b` draws from ChaCha stream `b` of the
//! run seed, so results do not depend on how many threads execute the
//! blocks. Weights are accumulated exactly as integer numerators over the
//! least common multiple of the host degrees.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::counting::{self, SubtreeCountVector, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::report::{rational_decimal, rational_f64, ser_biguint, ser_rational};
use crate::stats::binomial_standard_error;

/// Samples per independently seeded block.
pub const BLOCK_SIZE: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    edges: Vec<(usize, usize)>,
    parent: Vec<Option<usize>>,
    leaves: Vec<usize>,
}

impl SpanningTree {
    /// Validates that `edges` form a spanning tree on `0..n`; the parent map
    /// is rooted at vertex 0.
    pub fn from_edges(n: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 || edges.len() + 1 != n {
            return Err(Error::Validation(format!(
                "a spanning tree on {n} vertices needs {} edges, got {}",
                n.saturating_sub(1),
                edges.len()
            )));
        }
        for e in &mut edges {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        let g = Graph::from_edges(n, &edges)?;
        if !g.is_connected() {
            return Err(Error::Validation("edge set is not connected".into()));
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    stack.push(v);
                }
            }
        }
        let leaves = (0..n).filter(|&v| g.degree(v) == 1).collect();
        Ok(SpanningTree {
            edges,
            parent,
            leaves,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Parent of each vertex when rooted at 0; `None` for the root.
    pub fn parent(&self) -> &[Option<usize>] {
        &self.parent
    }

    /// Vertices of tree degree one, increasing.
    pub fn leaves(&self) -> &[usize] {
        &self.leaves
    }
}

fn require_connected(g: &Graph) -> Result<()> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(Error::Domain("host graph is disconnected".into()))
    }
}

/// Wilson's algorithm rooted at vertex 0: loop-erased random walks from
/// each vertex not yet in the tree until they hit it. Returns, for every
/// vertex but the root, its successor toward the root.
fn wilson_successors<R: Rng>(g: &Graph, rng: &mut R) -> Vec<usize> {
    let n = g.vertex_count();
    let mut in_tree = vec![false; n];
    let mut next = vec![usize::MAX; n];
    in_tree[0] = true;
    for start in 1..n {
        let mut u = start;
        while !in_tree[u] {
            let ns = g.neighbors(u);
            // Overwriting `next` erases loops in chronological order.
            next[u] = ns[rng.gen_range(0..ns.len())];
            u = next[u];
        }
        u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            u = next[u];
        }
    }
    next
}

/// A uniformly random spanning tree of a connected graph.
pub fn wilson_sample<R: Rng>(g: &Graph, rng: &mut R) -> Result<SpanningTree> {
    require_connected(g)?;
    let next = wilson_successors(g, rng);
    let edges = (1..g.vertex_count()).map(|v| (v, next[v])).collect();
    SpanningTree::from_edges(g.vertex_count(), edges)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightSample {
    #[serde(serialize_with = "ser_rational")]
    pub weight: BigRational,
    pub leaf_count: usize,
}

/// Exact leaf weight of `t` with leaf degrees taken in the host `g`.
pub fn leaf_weight(t: &SpanningTree, g: &Graph) -> Result<WeightSample> {
    if t.vertex_count() != g.vertex_count() {
        return Err(Error::Validation(
            "tree and host have different vertex counts".into(),
        ));
    }
    if let Some(&(u, v)) = t.edges().iter().find(|&&(u, v)| !g.has_edge(u, v)) {
        return Err(Error::Validation(format!(
            "tree edge ({u}, {v}) is not in the host"
        )));
    }
    let weight = t
        .leaves()
        .iter()
        .map(|&v| BigRational::new(BigInt::one(), BigInt::from(g.degree(v))))
        .fold(BigRational::zero(), |acc, x| acc + x);
    Ok(WeightSample {
        weight,
        leaf_count: t.leaves().len(),
    })
}

/// Integer weights: `w(T) = numerator / scale` with `scale = lcm(degrees)`.
struct Weigher {
    scale: BigUint,
    units: Vec<BigUint>,
    n: usize,
    min_degree: usize,
    max_degree: usize,
}

impl Weigher {
    fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let scale = (0..n)
            .map(|v| BigUint::from(g.degree(v).max(1)))
            .fold(BigUint::one(), |acc, d| acc.lcm(&d));
        let units = (0..n)
            .map(|v| &scale / BigUint::from(g.degree(v).max(1)))
            .collect();
        let profile = g.degree_profile();
        Weigher {
            scale,
            units,
            n,
            min_degree: profile.min_degree,
            max_degree: profile.max_degree,
        }
    }

    /// Whether `|l|/n <= w <= 1/alpha` and `|l|/max_deg <= w <= |l|/min_deg`.
    fn within_bounds(&self, numerator: &BigUint, leaves: usize) -> bool {
        let lhs_n = BigUint::from(leaves) * &self.scale;
        let lower =
            lhs_n.clone() <= numerator * self.n && lhs_n.clone() <= numerator * self.max_degree;
        let upper = numerator * self.min_degree <= BigUint::from(self.n) * &self.scale
            && numerator * self.min_degree <= lhs_n;
        lower && upper
    }
}

#[derive(Clone, Debug, Default)]
struct Block {
    sum: BigUint,
    sum_sq: BigUint,
    min: Option<BigUint>,
    max: Option<BigUint>,
    leaf_histogram: BTreeMap<usize, u64>,
    weights: Vec<f64>,
    leaf_counts: Vec<usize>,
    bound_violations: u64,
}

/// One reproducible Monte Carlo run of uniform spanning trees.
#[derive(Clone, Debug)]
pub struct SampleRun {
    pub samples: u64,
    pub seed: u64,
    n: usize,
    min_degree: usize,
    scale: BigUint,
    totals: Block,
}

impl SampleRun {
    pub fn collect(g: &Graph, samples: u64, seed: u64) -> Result<Self> {
        require_connected(g)?;
        if samples == 0 {
            return Err(Error::InvalidArgument("samples must be positive".into()));
        }
        if g.vertex_count() < 2 {
            return Err(Error::Domain("need at least two vertices".into()));
        }
        let weigher = Weigher::new(g);
        let blocks = (samples as usize).div_ceil(BLOCK_SIZE);
        let parts: Vec<Block> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let len = BLOCK_SIZE.min(samples as usize - b * BLOCK_SIZE);
                run_block(g, &weigher, seed, b as u64, len)
            })
            .collect();
        let mut totals = Block::default();
        for part in parts {
            totals.sum += part.sum;
            totals.sum_sq += part.sum_sq;
            totals.min = match (totals.min, part.min) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
            totals.max = match (totals.max, part.max) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            };
            for (k, c) in part.leaf_histogram {
                *totals.leaf_histogram.entry(k).or_insert(0) += c;
            }
            totals.weights.extend(part.weights);
            totals.leaf_counts.extend(part.leaf_counts);
            totals.bound_violations += part.bound_violations;
        }
        Ok(SampleRun {
            samples,
            seed,
            n: g.vertex_count(),
            min_degree: weigher.min_degree,
            scale: weigher.scale,
            totals,
        })
    }

    fn ratio(&self, numerator: &BigUint, extra_denominator: &BigUint) -> BigRational {
        BigRational::new(
            BigInt::from(numerator.clone()),
            BigInt::from(&self.scale * extra_denominator),
        )
    }

    /// Exact sample mean of `w(T)`.
    pub fn mean(&self) -> BigRational {
        self.ratio(&self.totals.sum, &BigUint::from(self.samples))
    }

    /// Sample standard deviation (denominator `samples - 1`).
    pub fn std_dev(&self) -> f64 {
        if self.samples < 2 {
            return 0.0;
        }
        let n = BigUint::from(self.samples);
        // (N * sum_sq - sum^2) / (N (N - 1) scale^2), exact before the root.
        let numer = &n * &self.totals.sum_sq - &self.totals.sum * &self.totals.sum;
        let denom = &n * (&n - 1u32) * &self.scale * &self.scale;
        let var = BigRational::new(BigInt::from(numer), BigInt::from(denom));
        rational_f64(&var).max(0.0).sqrt()
    }

    /// Weights of every sampled tree, in sample order.
    pub fn weights(&self) -> &[f64] {
        &self.totals.weights
    }

    pub fn leaf_counts(&self) -> &[usize] {
        &self.totals.leaf_counts
    }

    /// Sampled trees violating `|l|/n <= w <= 1/alpha` (or the degree
    /// sandwich `|l|/max_deg <= w <= |l|/min_deg`), checked exactly.
    pub fn bound_violations(&self) -> u64 {
        self.totals.bound_violations
    }

    pub fn beta_estimate(&self) -> BetaEstimate {
        let mean = self.mean();
        let one = BigUint::one();
        BetaEstimate {
            estimate: rational_f64(&mean),
            estimate_decimal: rational_decimal(&mean, 30),
            standard_error: self.std_dev() / (self.samples as f64).sqrt(),
            samples: self.samples,
            seed: self.seed,
            min_weight: rational_f64(&self.ratio(self.totals.min.as_ref().unwrap_or(&one), &one)),
            max_weight: rational_f64(&self.ratio(self.totals.max.as_ref().unwrap_or(&one), &one)),
            bound_violations: self.bound_violations(),
            mean,
        }
    }

    pub fn leaf_count_stats(&self, epsilon: f64) -> LeafCountStats {
        let count = self.samples as f64;
        let counts = self.leaf_counts();
        let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / count;
        let variance = if self.samples < 2 {
            0.0
        } else {
            counts
                .iter()
                .map(|&c| (c as f64 - mean).powi(2))
                .sum::<f64>()
                / (count - 1.0)
        };
        let threshold = ((-1f64).exp() - epsilon) * self.n as f64;
        let below = counts.iter().filter(|&&c| (c as f64) < threshold).count();
        LeafCountStats {
            samples: self.samples,
            seed: self.seed,
            mean,
            variance,
            standard_error: (variance / count).sqrt(),
            histogram: self
                .totals
                .leaf_histogram
                .iter()
                .map(|(&leaves, &count)| HistogramBin { leaves, count })
                .collect(),
            epsilon,
            threshold,
            below_threshold_fraction: below as f64 / count,
        }
    }

    /// Empirical tails `P(|w - mean| >= b)` against the concentration bounds
    /// `2 exp(-delta^2 b^2 / (32 n))` and `2 exp(-alpha^2 b^2 n / 32)`.
    pub fn concentration(&self, b_grid: &[f64]) -> Result<ConcentrationReport> {
        if let Some(b) = b_grid.iter().find(|&&b| !b.is_finite() || b <= 0.0) {
            return Err(Error::InvalidArgument(format!("b = {b} must be positive")));
        }
        let estimate = self.beta_estimate();
        let mean = estimate.estimate;
        let n = self.n as f64;
        let delta = self.min_degree as f64;
        let alpha = delta / n;
        let rows = b_grid
            .iter()
            .map(|&b| {
                let tail_count = self
                    .weights()
                    .iter()
                    .filter(|&&w| (w - mean).abs() >= b)
                    .count() as u64;
                let empirical_tail = tail_count as f64 / self.samples as f64;
                let bound_degree = concentration_bound(self.min_degree, self.n, b);
                let bound_density = 2.0 * (-(alpha * alpha) * b * b * n / 32.0).exp();
                TailRow {
                    b,
                    tail_count,
                    empirical_tail,
                    bound_degree,
                    bound_density,
                    binomial_se: binomial_standard_error(bound_degree, self.samples),
                    status_degree: tail_status(empirical_tail, bound_degree, self.samples),
                    status_density: tail_status(empirical_tail, bound_density, self.samples),
                }
            })
            .collect();
        Ok(ConcentrationReport {
            n: self.n,
            min_degree: self.min_degree,
            estimate: estimate.estimate,
            standard_error: estimate.standard_error,
            samples: self.samples,
            seed: self.seed,
            tails: rows,
        })
    }
}

fn run_block(g: &Graph, weigher: &Weigher, seed: u64, block: u64, len: usize) -> Block {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let n = g.vertex_count();
    let mut out = Block {
        weights: Vec::with_capacity(len),
        leaf_counts: Vec::with_capacity(len),
        ..Block::default()
    };
    let mut tree_degree = vec![0usize; n];
    for _ in 0..len {
        let next = wilson_successors(g, &mut rng);
        tree_degree.fill(0);
        for v in 1..n {
            tree_degree[v] += 1;
            tree_degree[next[v]] += 1;
        }
        let mut numerator = BigUint::zero();
        let mut leaves = 0;
        for (v, &d) in tree_degree.iter().enumerate() {
            if d == 1 {
                numerator += &weigher.units[v];
                leaves += 1;
            }
        }
        if !weigher.within_bounds(&numerator, leaves) {
            out.bound_violations += 1;
        }
        out.weights.push(
            BigRational::new(
                BigInt::from(numerator.clone()),
                BigInt::from(weigher.scale.clone()),
            )
            .to_f64()
            .unwrap_or(f64::NAN),
        );
        out.leaf_counts.push(leaves);
        *out.leaf_histogram.entry(leaves).or_insert(0) += 1;
        out.sum_sq += &numerator * &numerator;
        out.sum += &numerator;
        out.min = Some(match out.min {
            Some(m) if m <= numerator => m,
            _ => numerator.clone(),
        });
        out.max = Some(match out.max {
            Some(m) if m >= numerator => m,
            _ => numerator,
        });
    }
    out
}

/// `2 exp(-delta^2 b^2 / (32 n))`.
pub fn concentration_bound(min_degree: usize, n: usize, b: f64) -> f64 {
    let delta = min_degree as f64;
    2.0 * (-(delta * delta) * b * b / (32.0 * n as f64)).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TailStatus {
    Pass,
    /// Above the bound, but within three binomial standard errors of it.
    Inconclusive,
    Fail,
}

fn tail_status(empirical: f64, bound: f64, samples: u64) -> TailStatus {
    if empirical <= bound {
        TailStatus::Pass
    } else if empirical - bound <= 3.0 * binomial_standard_error(bound, samples) {
        TailStatus::Inconclusive
    } else {
        TailStatus::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BetaEstimate {
    pub estimate: f64,
    pub estimate_decimal: String,
    pub standard_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub min_weight: f64,
    pub max_weight: f64,
    pub bound_violations: u64,
    #[serde(skip)]
    pub mean: BigRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct HistogramBin {
    pub leaves: usize,
    pub count: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeafCountStats {
    pub samples: u64,
    pub seed: u64,
    pub mean: f64,
    pub variance: f64,
    pub standard_error: f64,
    pub histogram: Vec<HistogramBin>,
    pub epsilon: f64,
    /// `(1/e - epsilon) n`.
    pub threshold: f64,
    pub below_threshold_fraction: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TailRow {
    pub b: f64,
    pub tail_count: u64,
    pub empirical_tail: f64,
    pub bound_degree: f64,
    pub bound_density: f64,
    pub binomial_se: f64,
    pub status_degree: TailStatus,
    pub status_density: TailStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConcentrationReport {
    pub n: usize,
    pub min_degree: usize,
    pub estimate: f64,
    pub standard_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub tails: Vec<TailRow>,
}

pub fn estimate_beta(g: &Graph, samples: u64, seed: u64) -> Result<BetaEstimate> {
    Ok(SampleRun::collect(g, samples, seed)?.beta_estimate())
}

pub fn leaf_count_stats(
    g: &Graph,
    samples: u64,
    seed: u64,
    epsilon: f64,
) -> Result<LeafCountStats> {
    Ok(SampleRun::collect(g, samples, seed)?.leaf_count_stats(epsilon))
}

pub fn concentration_profile(
    g: &Graph,
    samples: u64,
    b_grid: &[f64],
    seed: u64,
) -> Result<ConcentrationReport> {
    SampleRun::collect(g, samples, seed)?.concentration(b_grid)
}

/// `beta(G) = s_{n-1} / s_n`.
pub fn exact_beta(counts: &SubtreeCountVector) -> Result<BigRational> {
    let n = counts.n();
    let s_n = counts.spanning();
    if s_n.is_zero() {
        return Err(Error::Domain(
            "s_n = 0: the source graph is disconnected".into(),
        ));
    }
    Ok(BigRational::new(
        BigInt::from(counts.get(n - 1)),
        BigInt::from(s_n.clone()),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightIdentityReport {
    pub spanning_trees: u64,
    /// Sum of `w(T)` over all spanning trees.
    #[serde(serialize_with = "ser_rational")]
    pub lhs: BigRational,
    /// `s_{n-1}`.
    #[serde(serialize_with = "ser_biguint")]
    pub rhs: BigUint,
    pub equal: bool,
}

/// Sums `w(T)` over every spanning tree and compares with `s_{n-1}`.
pub fn verify_weight_identity(g: &Graph) -> Result<WeightIdentityReport> {
    if g.vertex_count() < 2 {
        return Err(Error::Domain("need at least two vertices".into()));
    }
    let mut lhs = BigRational::zero();
    let mut trees = 0u64;
    for t in counting::enumerate_spanning_trees(g)? {
        lhs += leaf_weight(&t, g)?.weight;
        trees += 1;
    }
    let rhs = if g.vertex_count() <= DEFAULT_ENUMERATION_CAP {
        counting::counts_for(g, DEFAULT_ENUMERATION_CAP)?.get(g.vertex_count() - 1)
    } else {
        counting::near_spanning_count(g)?
    };
    let equal = lhs == BigRational::from_integer(BigInt::from(rhs.clone()));
    Ok(WeightIdentityReport {
        spanning_trees: trees,
        lhs,
        rhs,
        equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{complete_graph_counts, enumerate_spanning_trees, subtree_counts};
    use crate::graph::{generate, Family};
    use crate::stats::chi_square_uniform;
    use proptest::prelude::*;

    fn fam(f: Family) -> Graph {
        generate(&f, 0).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn tree_host_returns_itself() {
        let t = fam(Family::RandomTree(9));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let s = wilson_sample(&t, &mut rng).unwrap();
            assert_eq!(s.edges(), t.edges().collect::<Vec<_>>().as_slice());
        }
    }

    fn uniformity(g: &Graph, samples: usize) -> f64 {
        let index: BTreeMap<Vec<(usize, usize)>, usize> = enumerate_spanning_trees(g)
            .unwrap()
            .enumerate()
            .map(|(i, t)| (t.edges().to_vec(), i))
            .collect();
        let mut observed = vec![0u64; index.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..samples {
            let t = wilson_sample(g, &mut rng).unwrap();
            observed[index[t.edges()]] += 1;
        }
        chi_square_uniform(&observed).unwrap().p_value
    }

    #[test]
    fn wilson_is_uniform_on_small_complete_graphs() {
        assert!(uniformity(&fam(Family::Complete(3)), 30_000) > 1e-3);
        assert!(uniformity(&fam(Family::Complete(4)), 32_000) > 1e-3);
    }

    #[test]
    fn wilson_rejects_disconnected_hosts() {
        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            wilson_sample(&split, &mut rng),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            estimate_beta(&split, 10, 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn leaf_weight_examples() {
        let p5 = fam(Family::Path(5));
        let t = SpanningTree::from_edges(5, p5.edges().collect()).unwrap();
        assert_eq!(leaf_weight(&t, &p5).unwrap().weight, q(2, 1));

        let k4 = fam(Family::Complete(4));
        let star = SpanningTree::from_edges(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        let w = leaf_weight(&star, &k4).unwrap();
        assert_eq!((w.weight, w.leaf_count), (q(1, 1), 3));

        let path = SpanningTree::from_edges(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(leaf_weight(&path, &k4).unwrap().weight, q(2, 3));

        let c4 = fam(Family::Cycle(4));
        let not_sub = SpanningTree::from_edges(4, vec![(0, 2), (0, 1), (1, 3)]).unwrap();
        assert!(matches!(
            leaf_weight(&not_sub, &c4),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn spanning_tree_validation() {
        assert!(SpanningTree::from_edges(4, vec![(0, 1), (1, 2)]).is_err());
        assert!(SpanningTree::from_edges(4, vec![(0, 1), (1, 0), (2, 3)]).is_err());
        assert!(SpanningTree::from_edges(4, vec![(0, 1), (1, 2), (0, 2)]).is_err());
        let t = SpanningTree::from_edges(4, vec![(3, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(t.parent(), &[None, Some(0), Some(1), Some(1)]);
        assert_eq!(t.leaves(), &[0, 2, 3]);
    }

    #[test]
    fn beta_on_triangle_is_exactly_one() {
        let est = estimate_beta(&fam(Family::Complete(3)), 500, 1).unwrap();
        assert_eq!(est.mean, q(1, 1));
        assert_eq!(est.standard_error, 0.0);
        let all: Vec<_> = enumerate_spanning_trees(&fam(Family::Complete(3)))
            .unwrap()
            .collect();
        assert!(all
            .iter()
            .all(|t| leaf_weight(t, &fam(Family::Complete(3))).unwrap().weight == q(1, 1)));
    }

    #[test]
    fn beta_estimates_within_four_standard_errors() {
        for (n, samples) in [(4, 20_000), (10, 20_000)] {
            let g = fam(Family::Complete(n));
            let exact = rational_f64(&exact_beta(&complete_graph_counts(n).unwrap()).unwrap());
            let est = estimate_beta(&g, samples, 17).unwrap();
            assert!(
                (est.estimate - exact).abs() <= 4.0 * est.standard_error,
                "K_{n}: {} vs {exact} (se {})",
                est.estimate,
                est.standard_error
            );
            assert_eq!(est.bound_violations, 0);
        }
        assert!(
            (rational_f64(&exact_beta(&complete_graph_counts(10).unwrap()).unwrap()) - 0.4782969)
                .abs()
                < 1e-15
        );
    }

    #[test]
    fn two_seeds_agree_on_k12() {
        let g = fam(Family::Complete(12));
        let exact = rational_f64(&exact_beta(&complete_graph_counts(12).unwrap()).unwrap());
        let a = estimate_beta(&g, 20_000, 1).unwrap();
        let b = estimate_beta(&g, 20_000, 2).unwrap();
        let combined = a.standard_error.hypot(b.standard_error);
        assert_ne!(a.estimate, b.estimate);
        assert!((a.estimate - b.estimate).abs() <= 5.0 * combined);
        assert!(((a.estimate + b.estimate) / 2.0 - exact).abs() <= 5.0 * combined);
    }

    #[test]
    fn exact_beta_examples() {
        assert_eq!(
            exact_beta(&complete_graph_counts(4).unwrap()).unwrap(),
            q(3, 4)
        );
        assert_eq!(
            exact_beta(&subtree_counts(&fam(Family::Path(3))).unwrap()).unwrap(),
            q(2, 1)
        );
        assert_eq!(
            exact_beta(&complete_graph_counts(3).unwrap()).unwrap(),
            q(1, 1)
        );
        let split = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            exact_beta(&subtree_counts(&split).unwrap()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn weight_identity_examples() {
        let k3 = verify_weight_identity(&fam(Family::Complete(3))).unwrap();
        assert!(k3.equal);
        assert_eq!(k3.rhs, BigUint::from(3u32));

        let p4 = verify_weight_identity(&fam(Family::Path(4))).unwrap();
        assert_eq!(
            (p4.lhs.clone(), p4.rhs.clone()),
            (q(2, 1), BigUint::from(2u32))
        );

        let k4 = verify_weight_identity(&fam(Family::Complete(4))).unwrap();
        assert_eq!(k4.spanning_trees, 16);
        assert_eq!(k4.lhs, q(12, 1));
        assert!(k4.equal);
    }

    #[test]
    fn leaf_counts_on_paths_and_triangle() {
        let stats = leaf_count_stats(&fam(Family::Path(7)), 200, 3, 0.05).unwrap();
        assert_eq!(stats.mean, 2.0);
        assert_eq!(stats.variance, 0.0);
        let stats = leaf_count_stats(&fam(Family::Complete(3)), 200, 3, 0.05).unwrap();
        assert_eq!(stats.histogram.len(), 1);
        assert_eq!(stats.histogram[0].leaves, 2);
    }

    /// Exhaustive oracle: average leaf count over every labeled tree on n
    /// vertices, which should equal n (1 - 1/n)^(n-2).
    #[test]
    fn expected_leaf_count_of_uniform_labeled_trees() {
        for n in 3..=6 {
            let g = fam(Family::Complete(n));
            let (mut trees, mut leaves) = (0u64, 0u64);
            for t in enumerate_spanning_trees(&g).unwrap() {
                trees += 1;
                leaves += t.leaves().len() as u64;
            }
            let exhaustive = leaves as f64 / trees as f64;
            let formula = n as f64 * (1.0 - 1.0 / n as f64).powi(n as i32 - 2);
            assert!((exhaustive - formula).abs() < 1e-12, "n = {n}");
        }
        let k15 = leaf_count_stats(&fam(Family::Complete(15)), 30_000, 9, 0.05).unwrap();
        let expected = 15.0 * (14.0f64 / 15.0).powi(13);
        assert!((k15.mean - expected).abs() <= 4.0 * k15.standard_error);
    }

    #[test]
    fn concentration_examples() {
        assert!((concentration_bound(14, 15, 0.5) - 1.806).abs() < 5e-4);
        let path = concentration_profile(&fam(Family::Path(6)), 300, &[0.01, 0.5], 2).unwrap();
        assert!(path
            .tails
            .iter()
            .all(|r| r.empirical_tail == 0.0 && r.status_degree == TailStatus::Pass));
        let k15 = concentration_profile(&fam(Family::Complete(15)), 20_000, &[0.3], 4).unwrap();
        assert_ne!(k15.tails[0].status_degree, TailStatus::Fail);
        assert!(concentration_profile(&fam(Family::Path(3)), 10, &[0.0], 1).is_err());
    }

    #[test]
    fn tail_status_bands() {
        assert_eq!(tail_status(0.1, 0.2, 100), TailStatus::Pass);
        // se = sqrt(0.2 * 0.8 / 100) = 0.04
        assert_eq!(tail_status(0.3, 0.2, 100), TailStatus::Inconclusive);
        assert_eq!(tail_status(0.33, 0.2, 100), TailStatus::Fail);
    }

    #[test]
    fn runs_are_thread_count_independent() {
        let g = fam(Family::CompleteMinusPerfectMatching(10));
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = one.install(|| SampleRun::collect(&g, 5000, 21).unwrap());
        let b = four.install(|| SampleRun::collect(&g, 5000, 21).unwrap());
        assert_eq!(a.weights(), b.weights());
        assert_eq!(a.mean(), b.mean());
        let c = SampleRun::collect(&g, 5000, 22).unwrap();
        assert_ne!(a.weights(), c.weights());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn sampled_weights_respect_bounds(n in 2usize..12, p in 0.3f64..1.0, seed: u64) {
            let g = generate(&Family::Gnp(n, p), seed).unwrap();
            prop_assume!(g.is_connected());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let profile = g.degree_profile();
            for _ in 0..20 {
                let t = wilson_sample(&g, &mut rng).unwrap();
                let w = leaf_weight(&t, &g).unwrap();
                let l = w.leaf_count as i64;
                prop_assert!(2 <= l && l <= n as i64 - (n > 2) as i64);
                prop_assert!(q(l, n as i64) <= w.weight);
                prop_assert!(w.weight <= q(n as i64, profile.min_degree as i64));
                prop_assert!(q(l, profile.max_degree as i64) <= w.weight);
                prop_assert!(w.weight <= q(l, profile.min_degree as i64));
            }
            prop_assert_eq!(SampleRun::collect(&g, 50, seed).unwrap().bound_violations(), 0);
        }

        #[test]
        fn weight_identity_holds(n in 2usize..=7, p in 0.3f64..1.0, seed: u64) {
            let g = generate(&Family::Gnp(n, p), seed).unwrap();
            prop_assume!(g.is_connected());
            prop_assert!(verify_weight_identity(&g).unwrap().equal);
        }
    }
}
