//! Exact subtree counts.
//!
//! `s_k(G)` is computed by vertex support: every k-vertex subtree is a
//! spanning tree of the subgraph induced on its vertex set, so
//! `s_k = sum over connected k-subsets W of tau(G[W])`, where `tau` is the
//! spanning tree count from the matrix-tree theorem. The connected subsets
//! are streamed without duplicates by anchoring each at its minimum vertex
//! and only growing through higher-numbered exclusive neighbors.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Family, Graph};
use crate::report::{rational_string, ser_rational};
use crate::spanning::SpanningTree;

pub const DEFAULT_ENUMERATION_CAP: usize = 24;
pub const DEFAULT_SPANNING_TREE_CAP: u64 = 1_000_000;
pub const BRUTE_FORCE_CAP: u64 = 100_000_000;

/// The coefficient list `s_1, ..., s_n` of the subtree polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtreeCountVector {
    counts: Vec<BigUint>,
    fingerprint: String,
}

#[derive(Serialize, Deserialize)]
struct CountsDocument {
    n: usize,
    counts: Vec<String>,
}

impl SubtreeCountVector {
    pub fn new(counts: Vec<BigUint>, fingerprint: String) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidArgument("count vector is empty".into()));
        }
        Ok(SubtreeCountVector {
            counts,
            fingerprint,
        })
    }

    pub fn n(&self) -> usize {
        self.counts.len()
    }

    /// `s_k`, 1-based; zero outside `1..=n`.
    pub fn get(&self, k: usize) -> BigUint {
        if k == 0 || k > self.counts.len() {
            BigUint::zero()
        } else {
            self.counts[k - 1].clone()
        }
    }

    pub fn as_slice(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn spanning(&self) -> &BigUint {
        self.counts.last().expect("nonempty")
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn decimal_strings(&self) -> Vec<String> {
        self.counts.iter().map(|c| c.to_str_radix(10)).collect()
    }

    /// `{"n": .., "counts": ["s_1", ..., "s_n"]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&CountsDocument {
            n: self.n(),
            counts: self.decimal_strings(),
        })
        .expect("plain strings serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CountsDocument = serde_json::from_str(text)?;
        if doc.counts.len() != doc.n {
            return Err(Error::InvalidArgument(format!(
                "n = {} but {} counts given",
                doc.n,
                doc.counts.len()
            )));
        }
        let counts = doc
            .counts
            .iter()
            .map(|s| {
                s.parse::<BigUint>()
                    .map_err(|_| Error::InvalidArgument(format!("bad count \"{s}\"")))
            })
            .collect::<Result<Vec<_>>>()?;
        SubtreeCountVector::new(counts, String::new())
    }
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
/// Runs in `i128` and restarts with big integers on overflow.
pub fn bareiss_determinant(matrix: &[Vec<i64>]) -> BigInt {
    let small: Vec<Vec<i128>> = matrix
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    if let Some(det) = bareiss_i128(small) {
        return BigInt::from(det);
    }
    let big: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    bareiss_big(big)
}

fn bareiss_i128(mut a: Vec<Vec<i128>>) -> Option<i128> {
    let n = a.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let lhs = a[i][j].checked_mul(a[k][k])?;
                let rhs = a[i][k].checked_mul(a[k][j])?;
                a[i][j] = lhs.checked_sub(rhs)? / prev;
            }
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

fn bareiss_big(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Number of spanning trees: the determinant of the Laplacian with the last
/// row and column removed. Zero iff disconnected; one for a single vertex.
pub fn spanning_tree_count(g: &Graph) -> BigUint {
    let n = g.vertex_count();
    let mut lap = vec![vec![0i64; n - 1]; n - 1];
    for (u, row) in lap.iter_mut().enumerate() {
        row[u] = g.degree(u) as i64;
        for &v in g.neighbors(u) {
            if v < n - 1 {
                row[v] = -1;
            }
        }
    }
    to_count(bareiss_determinant(&lap))
}

fn to_count(det: BigInt) -> BigUint {
    debug_assert!(!det.is_negative());
    det.to_biguint().unwrap_or_default()
}

/// Spanning tree count of `G[mask]` using word-sized adjacency rows.
fn induced_spanning_count(adj: &[u64], mask: u64) -> BigUint {
    let size = mask.count_ones() as usize;
    match size {
        0 => return BigUint::zero(),
        1 | 2 => return BigUint::one(),
        _ => {}
    }
    let vertices: Vec<usize> = bits(mask).collect();
    let dim = size - 1;
    let mut lap = vec![vec![0i64; dim]; dim];
    for (i, &u) in vertices[..dim].iter().enumerate() {
        lap[i][i] = (adj[u] & mask).count_ones() as i64;
        for (j, &v) in vertices[..dim].iter().enumerate() {
            if adj[u] >> v & 1 == 1 {
                lap[i][j] = -1;
            }
        }
    }
    to_count(bareiss_determinant(&lap))
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

/// A vertex subset of a graph with at most 64 vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn vertices(&self) -> Vec<usize> {
        bits(self.0).collect()
    }
}

#[derive(Clone, Copy)]
struct Frame {
    subset: u64,
    extension: u64,
    closed_neighborhood: u64,
    size: usize,
    reported: bool,
}

/// Streams connected vertex subsets. Each subset is produced exactly once,
/// from the search rooted at its minimum vertex.
pub struct ConnectedSubsets {
    adj: Vec<u64>,
    k: usize,
    all_sizes: bool,
    next_anchor: usize,
    end_anchor: usize,
    above_anchor: u64,
    stack: Vec<Frame>,
}

impl ConnectedSubsets {
    fn new(g: &Graph, k: usize, anchors: std::ops::Range<usize>, all_sizes: bool) -> Self {
        ConnectedSubsets {
            adj: (0..g.vertex_count()).map(|v| g.row_mask(v)).collect(),
            k,
            all_sizes,
            next_anchor: anchors.start,
            end_anchor: anchors.end,
            above_anchor: 0,
            stack: Vec::new(),
        }
    }
}

impl Iterator for ConnectedSubsets {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        loop {
            let Some(frame) = self.stack.pop() else {
                if self.next_anchor >= self.end_anchor {
                    return None;
                }
                let v = self.next_anchor;
                self.next_anchor += 1;
                self.above_anchor = if v >= 63 { 0 } else { !((1u64 << (v + 1)) - 1) };
                self.stack.push(Frame {
                    subset: 1 << v,
                    extension: self.adj[v] & self.above_anchor,
                    closed_neighborhood: (1 << v) | self.adj[v],
                    size: 1,
                    reported: false,
                });
                continue;
            };
            if !frame.reported {
                let emit = frame.size == self.k || self.all_sizes;
                let subset = frame.subset;
                if frame.size < self.k && frame.extension != 0 {
                    self.stack.push(Frame {
                        reported: true,
                        ..frame
                    });
                }
                if emit {
                    return Some(VertexSet(subset));
                }
                continue;
            }
            let w = frame.extension.trailing_zeros() as usize;
            let rest = frame.extension & !(1 << w);
            if rest != 0 {
                self.stack.push(Frame {
                    extension: rest,
                    ..frame
                });
            }
            self.stack.push(Frame {
                subset: frame.subset | 1 << w,
                extension: rest | (self.adj[w] & !frame.closed_neighborhood & self.above_anchor),
                closed_neighborhood: frame.closed_neighborhood | self.adj[w],
                size: frame.size + 1,
                reported: false,
            });
        }
    }
}

/// All connected `k`-vertex subsets of `g`, each exactly once, in a fixed
/// order (by minimum vertex, then depth-first).
pub fn enumerate_connected_subsets(g: &Graph, k: usize) -> Result<ConnectedSubsets> {
    let n = g.vertex_count();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} not in 1..={n}")));
    }
    if n > 64 {
        return Err(Error::Capacity(format!(
            "subset enumeration supports at most 64 vertices, got {n}"
        )));
    }
    Ok(ConnectedSubsets::new(g, k, 0..n, false))
}

/// Exact `s_1..s_n` by vertex-support decomposition, refusing graphs with
/// more than `cap` vertices. Anchors are processed in parallel on the
/// current rayon pool; the exact reduction is order independent.
pub fn subtree_counts_with_cap(g: &Graph, cap: usize) -> Result<SubtreeCountVector> {
    let n = g.vertex_count();
    let cap = cap.min(64);
    if n > cap {
        return Err(Error::Capacity(format!(
            "subtree enumeration is capped at n = {cap}, graph has n = {n}"
        )));
    }
    let adj: Vec<u64> = (0..n).map(|v| g.row_mask(v)).collect();
    let per_anchor: Vec<Vec<BigUint>> = (0..n)
        .into_par_iter()
        .map(|anchor| {
            let mut counts = vec![BigUint::zero(); n];
            for set in ConnectedSubsets::new(g, n, anchor..anchor + 1, true) {
                counts[set.len() - 1] += induced_spanning_count(&adj, set.0);
            }
            counts
        })
        .collect();
    let mut counts = vec![BigUint::zero(); n];
    for part in per_anchor {
        for (total, c) in counts.iter_mut().zip(part) {
            *total += c;
        }
    }
    SubtreeCountVector::new(counts, g.fingerprint())
}

pub fn subtree_counts(g: &Graph) -> Result<SubtreeCountVector> {
    subtree_counts_with_cap(g, DEFAULT_ENUMERATION_CAP)
}

/// Closed form for the complete graph: `s_k(K_n) = C(n, k) * k^(k-2)`.
pub fn complete_graph_counts(n: usize) -> Result<SubtreeCountVector> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let mut counts = Vec::with_capacity(n);
    let mut binom = BigUint::one();
    for k in 1..=n {
        // C(n, k) = C(n, k - 1) * (n - k + 1) / k
        binom = binom * (n - k + 1) / k;
        let trees = if k <= 2 {
            BigUint::one()
        } else {
            BigUint::from(k).pow(k as u32 - 2)
        };
        counts.push(&binom * trees);
    }
    let fingerprint = crate::graph::generate(&Family::Complete(n), 0)?.fingerprint();
    SubtreeCountVector::new(counts, fingerprint)
}

/// Counts for `g`, through the closed form when `g` is complete.
pub fn counts_for(g: &Graph, cap: usize) -> Result<SubtreeCountVector> {
    if g.is_complete() {
        complete_graph_counts(g.vertex_count())
    } else {
        subtree_counts_with_cap(g, cap)
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Independent oracle for `s_k`: counts `(k-1)`-edge subsets that form a
/// tree on exactly `k` vertices.
pub fn brute_force_subtree_count(g: &Graph, k: usize) -> Result<BigUint> {
    let n = g.vertex_count();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} not in 1..={n}")));
    }
    if k == 1 {
        return Ok(BigUint::from(n));
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let r = k - 1;
    let work = binomial(edges.len() as u64, r as u64);
    if work > BigUint::from(BRUTE_FORCE_CAP) {
        return Err(Error::Capacity(format!(
            "C({}, {r}) = {work} edge subsets exceeds {BRUTE_FORCE_CAP}",
            edges.len()
        )));
    }
    if r > edges.len() {
        return Ok(BigUint::zero());
    }
    let mut idx: Vec<usize> = (0..r).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut count = 0u64;
    loop {
        if forms_tree(&edges, &idx, &mut parent, k) {
            count += 1;
        }
        // Advance to the next r-combination in lexicographic order.
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + edges.len() - r) else {
            break;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
    Ok(BigUint::from(count))
}

fn forms_tree(edges: &[(usize, usize)], idx: &[usize], parent: &mut [usize], k: usize) -> bool {
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut touched = Vec::with_capacity(2 * idx.len());
    for &e in idx {
        let (u, v) = edges[e];
        touched.push(u);
        touched.push(v);
    }
    for &v in &touched {
        parent[v] = v;
    }
    let mut acyclic = true;
    for &e in idx {
        let (u, v) = edges[e];
        let (a, b) = (find(parent, u), find(parent, v));
        if a == b {
            acyclic = false;
            break;
        }
        parent[a] = b;
    }
    touched.sort_unstable();
    touched.dedup();
    // k - 1 acyclic edges on exactly k vertices form a tree.
    acyclic && touched.len() == k
}

struct TreeFrame {
    next_edge: usize,
    chosen: Vec<usize>,
    excluded: Vec<bool>,
}

/// Streams every spanning tree exactly once by deciding edges in order:
/// an edge may be included if it closes no cycle and excluded if it is not
/// a bridge of the edges still available.
pub struct SpanningTrees {
    n: usize,
    edges: Vec<(usize, usize)>,
    stack: Vec<TreeFrame>,
}

impl SpanningTrees {
    fn available_connected(&self, excluded: &[bool]) -> bool {
        let mut uf = UnionFind::new(self.n);
        let mut components = self.n;
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if !excluded[e] && uf.union(u, v) {
                components -= 1;
            }
        }
        components == 1
    }
}

impl Iterator for SpanningTrees {
    type Item = SpanningTree;

    fn next(&mut self) -> Option<SpanningTree> {
        while let Some(frame) = self.stack.pop() {
            if frame.chosen.len() + 1 == self.n {
                let edges = frame.chosen.iter().map(|&e| self.edges[e]).collect();
                return Some(
                    SpanningTree::from_edges(self.n, edges).expect("valid by construction"),
                );
            }
            let e = frame.next_edge;
            if e >= self.edges.len() {
                continue;
            }
            let mut excluded = frame.excluded.clone();
            excluded[e] = true;
            if self.available_connected(&excluded) {
                self.stack.push(TreeFrame {
                    next_edge: e + 1,
                    chosen: frame.chosen.clone(),
                    excluded,
                });
            }
            let mut uf = UnionFind::new(self.n);
            for &c in &frame.chosen {
                uf.union(self.edges[c].0, self.edges[c].1);
            }
            if uf.find(self.edges[e].0) != uf.find(self.edges[e].1) {
                let mut chosen = frame.chosen;
                chosen.push(e);
                self.stack.push(TreeFrame {
                    next_edge: e + 1,
                    chosen,
                    excluded: frame.excluded,
                });
            }
        }
        None
    }
}

pub fn enumerate_spanning_trees(g: &Graph) -> Result<SpanningTrees> {
    enumerate_spanning_trees_with_cap(g, DEFAULT_SPANNING_TREE_CAP)
}

pub fn enumerate_spanning_trees_with_cap(g: &Graph, cap: u64) -> Result<SpanningTrees> {
    if !g.is_connected() {
        return Err(Error::Domain(
            "graph is disconnected; it has no spanning tree".into(),
        ));
    }
    let total = spanning_tree_count(g);
    if total > BigUint::from(cap) {
        return Err(Error::Capacity(format!(
            "{total} spanning trees exceeds the enumeration cap {cap}"
        )));
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let m = edges.len();
    Ok(SpanningTrees {
        n: g.vertex_count(),
        edges,
        stack: vec![TreeFrame {
            next_edge: 0,
            chosen: Vec::new(),
            excluded: vec![false; m],
        }],
    })
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `u` and `v` were already joined.
    pub(crate) fn union(&mut self, u: usize, v: usize) -> bool {
        let (a, b) = (self.find(u), self.find(v));
        if a == b {
            return false;
        }
        self.parent[a] = b;
        true
    }
}

/// `s_{n-1}(G) = sum over v of tau(G - v)`: an (n-1)-vertex subtree spans
/// the graph with one vertex deleted.
pub fn near_spanning_count(g: &Graph) -> Result<BigUint> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::Domain("s_(n-1) needs at least two vertices".into()));
    }
    let mut total = BigUint::zero();
    for v in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&w| w != v).collect();
        total += spanning_tree_count(&g.induced_subgraph(&rest)?.graph);
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityCheck {
    pub index: usize,
    #[serde(serialize_with = "ser_rational")]
    pub lhs: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub rhs: BigRational,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    #[serde(serialize_with = "ser_rational")]
    pub alpha: BigRational,
    pub min_degree: usize,
    /// `None` when the checks ran; otherwise why they were skipped.
    pub precondition_violation: Option<String>,
    /// `s_{n-k}/s_n <= (alpha^k k!)^{-1} (1 - k/(alpha n))^{-k}` for `1 <= k < alpha n`.
    pub ratio_bound: Vec<InequalityCheck>,
    /// `s_1 + ... + s_r <= 2^r s_r` for `1 <= r <= n`.
    pub partial_sum_bound: Vec<InequalityCheck>,
}

impl InequalityReport {
    pub fn all_pass(&self) -> bool {
        self.precondition_violation.is_none()
            && self.ratio_bound.iter().all(|c| c.pass)
            && self.partial_sum_bound.iter().all(|c| c.pass)
    }
}

fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

/// Checks the two coefficient inequalities in exact rational arithmetic.
/// `min_degree` is the source graph's minimum degree; the checks are skipped
/// (and the violation reported) when `alpha * n > min_degree` or `s_n = 0`.
pub fn check_ratio_inequalities(
    counts: &SubtreeCountVector,
    alpha: &BigRational,
    min_degree: usize,
) -> InequalityReport {
    let n = counts.n();
    let mut report = InequalityReport {
        alpha: alpha.clone(),
        min_degree,
        precondition_violation: None,
        ratio_bound: Vec::new(),
        partial_sum_bound: Vec::new(),
    };
    let alpha_n = alpha * int(n as u64);
    if !alpha.is_positive() {
        report.precondition_violation = Some(format!(
            "alpha = {} is not positive",
            rational_string(alpha)
        ));
        return report;
    }
    if alpha_n > int(min_degree as u64) {
        report.precondition_violation = Some(format!(
            "alpha * n = {} exceeds the minimum degree {min_degree}",
            rational_string(&alpha_n)
        ));
        return report;
    }
    let s_n = counts.spanning().clone();
    if s_n.is_zero() {
        report.precondition_violation = Some("s_n = 0: source graph is disconnected".into());
        return report;
    }
    let s_n = int(BigInt::from(s_n));
    let mut factorial = BigInt::one();
    let mut k = 1usize;
    while int(k as u64) < alpha_n {
        factorial *= k;
        let lhs = int(BigInt::from(counts.get(n - k))) / &s_n;
        let base = alpha.pow(k as i32) * int(factorial.clone());
        let stretch = (alpha_n.clone() / (alpha_n.clone() - int(k as u64))).pow(k as i32);
        let rhs = stretch / base;
        report.ratio_bound.push(InequalityCheck {
            index: k,
            pass: lhs <= rhs,
            lhs,
            rhs,
        });
        k += 1;
    }
    let mut partial = BigInt::zero();
    for r in 1..=n {
        let s_r = BigInt::from(counts.get(r));
        partial += &s_r;
        let rhs = s_r << r;
        report.partial_sum_bound.push(InequalityCheck {
            index: r,
            pass: partial <= rhs,
            lhs: int(partial.clone()),
            rhs: int(rhs),
        });
    }
    report
}

/// `C(n, k)` as a big integer.
pub fn choose(n: usize, k: usize) -> BigUint {
    binomial(n as u64, k as u64)
}
