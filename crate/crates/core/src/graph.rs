//! Simple undirected graphs, the deterministic test families, and the
//! edge-list text format.
//!
//! Vertices are `0..n`. Adjacency is kept twice: as bitset rows (used by the
//! subset enumeration) and as sorted neighbor lists (used by random walks).

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    rows: Vec<Vec<u64>>,
    neighbors: Vec<Vec<usize>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// An edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "graph needs at least one vertex".into(),
            ));
        }
        let words = n.div_ceil(WORD);
        Ok(Graph {
            n,
            m: 0,
            rows: vec![vec![0; words]; n],
            neighbors: vec![Vec::new(); n],
        })
    }

    /// Builds a simple graph from an edge list, rejecting loops, duplicates
    /// and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.insert_edge(u, v)?;
        }
        g.finish();
        Ok(g)
    }

    fn insert_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::Validation(format!(
                "edge ({u}, {v}) has an endpoint outside 0..{}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::Validation(format!("self-loop at vertex {u}")));
        }
        if self.has_edge(u, v) {
            return Err(Error::Validation(format!("duplicate edge ({u}, {v})")));
        }
        self.rows[u][v / WORD] |= 1 << (v % WORD);
        self.rows[v][u / WORD] |= 1 << (u % WORD);
        self.neighbors[u].push(v);
        self.neighbors[v].push(u);
        self.m += 1;
        Ok(())
    }

    fn finish(&mut self) {
        for list in &mut self.neighbors {
            list.sort_unstable();
        }
    }

    /// Parses the edge-list document: a header line `n m` followed by exactly
    /// `m` lines `u v` with `0 <= u < v < n`.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (header_line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header line \"n m\"".into(),
        })?;
        let (n, m) = parse_pair(header_line, header)?;
        if n == 0 {
            return Err(Error::Parse {
                line: header_line,
                message: "vertex count must be positive".into(),
            });
        }
        let mut g = Graph::empty(n)?;
        let mut seen = 0usize;
        for (line, content) in lines {
            if seen == m {
                return Err(Error::Parse {
                    line,
                    message: format!("more than the declared {m} edge lines"),
                });
            }
            let (u, v) = parse_pair(line, content)?;
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexRange { line, vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::Validation(format!(
                    "line {line}: self-loop at vertex {u}"
                )));
            }
            if u > v {
                return Err(Error::Parse {
                    line,
                    message: format!("expected u < v, got \"{u} {v}\""),
                });
            }
            if g.has_edge(u, v) {
                return Err(Error::Validation(format!(
                    "line {line}: duplicate edge ({u}, {v})"
                )));
            }
            g.insert_edge(u, v)?;
            seen += 1;
        }
        if seen != m {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                message: format!("header declares {m} edges but {seen} were listed"),
            });
        }
        g.finish();
        Ok(g)
    }

    /// Serializes to the edge-list format, edges in lexicographic order.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u][v / WORD] >> (v % WORD) & 1 == 1
    }

    /// Adjacency row of `v` as a single machine word. Only valid for `n <= 64`.
    pub fn row_mask(&self, v: usize) -> u64 {
        debug_assert!(self.n <= WORD);
        self.rows[v][0]
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn is_complete(&self) -> bool {
        self.m == self.n * (self.n - 1) / 2
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.neighbors[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    stack.push(v);
                }
            }
        }
        reached == self.n
    }

    pub fn is_tree(&self) -> bool {
        self.m + 1 == self.n && self.is_connected()
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let degrees = (0..self.n).map(|v| self.degree(v));
        let min_degree = degrees.clone().min().unwrap_or(0);
        let max_degree = degrees.max().unwrap_or(0);
        DegreeProfile {
            n: self.n,
            min_degree,
            max_degree,
            alpha: BigRational::new(BigInt::from(min_degree), BigInt::from(self.n)),
        }
    }

    /// The subgraph induced on `subset`, relabeled to `0..|subset|` in
    /// increasing order of original id.
    pub fn induced_subgraph(&self, subset: &[usize]) -> Result<InducedSubgraph> {
        let mut labels = subset.to_vec();
        labels.sort_unstable();
        labels.dedup();
        if labels.is_empty() {
            return Err(Error::InvalidArgument("vertex subset is empty".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&v| v >= self.n) {
            return Err(Error::InvalidArgument(format!(
                "vertex {bad} out of range for n = {}",
                self.n
            )));
        }
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in labels.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in labels.iter().enumerate() {
            for &w in &self.neighbors[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Ok(InducedSubgraph {
            graph: Graph::from_edges(labels.len(), &edges)?,
            labels,
        })
    }

    /// Hex SHA-256 prefix of the canonical edge list.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_edge_list().as_bytes());
        hex::encode(&digest[..16])
    }
}

fn parse_pair(line: usize, content: &str) -> Result<(usize, usize)> {
    let fields: Vec<&str> = content.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::Parse {
            line,
            message: format!("expected two integers, got \"{content}\""),
        });
    }
    let parse = |s: &str| {
        s.parse::<usize>().map_err(|_| Error::Parse {
            line,
            message: format!("\"{s}\" is not a nonnegative integer"),
        })
    };
    Ok((parse(fields[0])?, parse(fields[1])?))
}

#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `labels[i]` is the original id of new vertex `i`.
    pub labels: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub n: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    /// Exact `min_degree / n`.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub alpha: BigRational,
}

/// A named graph family with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Complete(usize),
    Cycle(usize),
    Path(usize),
    Star(usize),
    Gnp(usize, f64),
    RandomTree(usize),
    CompleteMinusPerfectMatching(usize),
}

impl Family {
    pub fn vertex_count(&self) -> usize {
        match *self {
            Family::Complete(n)
            | Family::Cycle(n)
            | Family::Path(n)
            | Family::Star(n)
            | Family::Gnp(n, _)
            | Family::RandomTree(n)
            | Family::CompleteMinusPerfectMatching(n) => n,
        }
    }

    /// The same family with a different vertex count.
    pub fn with_vertex_count(&self, n: usize) -> Family {
        match *self {
            Family::Complete(_) => Family::Complete(n),
            Family::Cycle(_) => Family::Cycle(n),
            Family::Path(_) => Family::Path(n),
            Family::Star(_) => Family::Star(n),
            Family::Gnp(_, p) => Family::Gnp(n, p),
            Family::RandomTree(_) => Family::RandomTree(n),
            Family::CompleteMinusPerfectMatching(_) => Family::CompleteMinusPerfectMatching(n),
        }
    }

    /// Whether the generated graph depends on the seed.
    pub fn is_random(&self) -> bool {
        matches!(self, Family::Gnp(..) | Family::RandomTree(_))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Complete(n) => write!(f, "complete({n})"),
            Family::Cycle(n) => write!(f, "cycle({n})"),
            Family::Path(n) => write!(f, "path({n})"),
            Family::Star(n) => write!(f, "star({n})"),
            Family::Gnp(n, p) => write!(f, "gnp({n},{p})"),
            Family::RandomTree(n) => write!(f, "random_tree({n})"),
            Family::CompleteMinusPerfectMatching(n) => {
                write!(f, "complete_minus_perfect_matching({n})")
            }
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidFamily(format!("cannot parse \"{s}\""));
        let open = s.find('(').ok_or_else(bad)?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let name = s[..open].trim();
        let args: Vec<&str> = inner.split(',').map(str::trim).collect();
        let size = |a: &str| a.parse::<usize>().map_err(|_| bad());
        let one = || -> Result<usize> {
            match args.as_slice() {
                [a] => size(a),
                _ => Err(bad()),
            }
        };
        match name {
            "complete" => Ok(Family::Complete(one()?)),
            "cycle" => Ok(Family::Cycle(one()?)),
            "path" => Ok(Family::Path(one()?)),
            "star" => Ok(Family::Star(one()?)),
            "random_tree" => Ok(Family::RandomTree(one()?)),
            "complete_minus_perfect_matching" => Ok(Family::CompleteMinusPerfectMatching(one()?)),
            "gnp" => match args.as_slice() {
                [a, p] => Ok(Family::Gnp(size(a)?, p.parse::<f64>().map_err(|_| bad())?)),
                _ => Err(bad()),
            },
            _ => Err(Error::InvalidFamily(format!("unknown family \"{name}\""))),
        }
    }
}

/// Instantiates `family`; a pure function of `(family, seed)`.
pub fn generate(family: &Family, seed: u64) -> Result<Graph> {
    let n = family.vertex_count();
    if n == 0 {
        return Err(Error::InvalidArgument(format!(
            "{family}: size must be positive"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize)> = match *family {
        Family::Complete(n) => all_pairs(n).collect(),
        Family::Path(n) => (1..n).map(|v| (v - 1, v)).collect(),
        Family::Star(n) => (1..n).map(|v| (0, v)).collect(),
        Family::Cycle(n) => {
            if n < 3 {
                return Err(Error::InvalidFamily(format!(
                    "cycle needs at least 3 vertices, got {n}"
                )));
            }
            (0..n)
                .map(|v| (v.min((v + 1) % n), v.max((v + 1) % n)))
                .collect()
        }
        Family::Gnp(n, p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidFamily(format!(
                    "gnp edge probability {p} not in [0, 1]"
                )));
            }
            all_pairs(n).filter(|_| rng.gen::<f64>() < p).collect()
        }
        Family::RandomTree(n) => {
            let code: Vec<usize> = (0..n.saturating_sub(2))
                .map(|_| rng.gen_range(0..n))
                .collect();
            prufer_decode(n, &code)?
        }
        Family::CompleteMinusPerfectMatching(n) => {
            if n % 2 == 1 {
                return Err(Error::InvalidFamily(format!(
                    "complete_minus_perfect_matching needs even n, got {n}"
                )));
            }
            all_pairs(n)
                .filter(|&(u, v)| !(u % 2 == 0 && v == u + 1))
                .collect()
        }
    };
    Graph::from_edges(n, &edges)
}

/// Seeds tried by [`generate_connected`] before giving up.
pub const MAX_RESAMPLES: u64 = 10_000;

/// A connected instance of a family, with the seed that produced it.
#[derive(Clone, Debug)]
pub struct ConnectedInstance {
    pub graph: Graph,
    pub seed: u64,
    /// Disconnected draws rejected before `seed`.
    pub rejections: u64,
}

/// Draws `family` with seeds `seed, seed + 1, ...` until the result is
/// connected. `gnp` itself never conditions on connectivity.
pub fn generate_connected(family: &Family, seed: u64) -> Result<ConnectedInstance> {
    let tries = if family.is_random() { MAX_RESAMPLES } else { 1 };
    for rejections in 0..tries {
        let s = seed.wrapping_add(rejections);
        let graph = generate(family, s)?;
        if graph.is_connected() {
            return Ok(ConnectedInstance {
                graph,
                seed: s,
                rejections,
            });
        }
    }
    Err(Error::Domain(format!(
        "{family}: no connected instance in {tries} draws from seed {seed}"
    )))
}

fn all_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
}

/// Decodes a Prüfer sequence of length `n - 2` into the edges of the labeled
/// tree it encodes. Uniform sequences give uniform labeled trees.
pub fn prufer_decode(n: usize, code: &[usize]) -> Result<Vec<(usize, usize)>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "tree needs at least one vertex".into(),
        ));
    }
    if n == 1 {
        return if code.is_empty() {
            Ok(Vec::new())
        } else {
            Err(Error::InvalidArgument(
                "single-vertex tree has an empty code".into(),
            ))
        };
    }
    if code.len() != n - 2 {
        return Err(Error::InvalidArgument(format!(
            "Prüfer code for n = {n} must have length {}, got {}",
            n - 2,
            code.len()
        )));
    }
    if let Some(&bad) = code.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidArgument(format!(
            "Prüfer entry {bad} out of range"
        )));
    }
    let mut remaining = vec![1usize; n];
    for &v in code {
        remaining[v] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| remaining[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &v in code {
        let Reverse(leaf) = leaves.pop().expect("a tree always has a leaf");
        edges.push((leaf.min(v), leaf.max(v)));
        remaining[v] -= 1;
        if remaining[v] == 1 {
            leaves.push(Reverse(v));
        }
    }
    let Reverse(a) = leaves.pop().expect("two leaves remain");
    let Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a.min(b), a.max(b)));
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn degree_sum(g: &Graph) -> usize {
        (0..g.vertex_count()).map(|v| g.degree(v)).sum()
    }

    #[test]
    fn connected_resampling() {
        let inst = generate_connected(&Family::Gnp(8, 0.3), 0).unwrap();
        assert!(inst.graph.is_connected());
        for s in 0..inst.rejections {
            assert!(!generate(&Family::Gnp(8, 0.3), s).unwrap().is_connected());
        }
        assert_eq!(inst.seed, inst.rejections);
        let k5 = generate_connected(&Family::Complete(5), 9).unwrap();
        assert_eq!((k5.seed, k5.rejections), (9, 0));
        assert!(matches!(
            generate_connected(&Family::Gnp(2, 0.0), 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn parses_path_and_single_vertex() {
        let p3 = Graph::from_edge_list("3 2\n0 1\n1 2").unwrap();
        assert_eq!(p3.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        let k1 = Graph::from_edge_list("1 0").unwrap();
        assert_eq!((k1.vertex_count(), k1.edge_count()), (1, 0));
    }

    #[test]
    fn parses_triangle() {
        let k3 = Graph::from_edge_list("3 3\n0 1\n1 2\n0 2\n").unwrap();
        assert!((0..3).all(|v| k3.degree(v) == 2));
        assert_eq!(degree_sum(&k3), 2 * k3.edge_count());
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(
            Graph::from_edge_list("3 2\n0 1\n1 x"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            Graph::from_edge_list("3 1\n1 1"),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            Graph::from_edge_list("3 2\n0 1\n0 1"),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            Graph::from_edge_list("3 1\n0 3"),
            Err(Error::VertexRange {
                line: 2,
                vertex: 3,
                n: 3
            })
        ));
        assert!(matches!(
            Graph::from_edge_list("3 2\n0 1"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            Graph::from_edge_list("3 0\n0 1"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Graph::from_edge_list(""),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            Graph::from_edge_list("0 0"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn family_examples() {
        let k4 = generate(&Family::Complete(4), 0).unwrap();
        assert_eq!(k4.edge_count(), 6);
        assert_eq!(k4.degree_profile().min_degree, 3);

        let dense = generate(&Family::Gnp(10, 1.0), 7).unwrap();
        assert_eq!(dense, generate(&Family::Complete(10), 0).unwrap());

        let t = generate(&Family::RandomTree(5), 1).unwrap();
        assert_eq!(t.edge_count(), 4);
        assert!(t.is_connected());

        let cmpm = generate(&Family::CompleteMinusPerfectMatching(6), 0).unwrap();
        assert_eq!(cmpm.edge_count(), 15 - 3);
        assert!((0..6).all(|v| cmpm.degree(v) == 4));
    }

    #[test]
    fn family_errors() {
        assert!(matches!(
            generate(&Family::Complete(0), 0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            generate(&Family::CompleteMinusPerfectMatching(5), 0),
            Err(Error::InvalidFamily(_))
        ));
        assert!(matches!(
            generate(&Family::Gnp(4, 1.5), 0),
            Err(Error::InvalidFamily(_))
        ));
        assert!(matches!(
            generate(&Family::Cycle(2), 0),
            Err(Error::InvalidFamily(_))
        ));
    }

    #[test]
    fn family_parse_round_trip() {
        for text in [
            "complete(4)",
            "gnp(10,0.5)",
            "random_tree(7)",
            "complete_minus_perfect_matching(8)",
        ] {
            let f: Family = text.parse().unwrap();
            assert_eq!(f.to_string(), text);
        }
        assert!("gnp(10)".parse::<Family>().is_err());
        assert!("hypercube(3)".parse::<Family>().is_err());
    }

    #[test]
    fn degree_profiles() {
        let profile = |f| generate(&f, 0).unwrap().degree_profile();
        let k4 = profile(Family::Complete(4));
        assert_eq!((k4.min_degree, k4.max_degree), (3, 3));
        assert_eq!(k4.alpha, BigRational::new(3.into(), 4.into()));
        let p3 = profile(Family::Path(3));
        assert_eq!((p3.min_degree, p3.max_degree), (1, 2));
        assert_eq!(p3.alpha, BigRational::new(1.into(), 3.into()));
        let c5 = profile(Family::Cycle(5));
        assert_eq!((c5.min_degree, c5.max_degree), (2, 2));
        assert_eq!(c5.alpha, BigRational::new(2.into(), 5.into()));
    }

    #[test]
    fn connectivity() {
        assert!(generate(&Family::Complete(4), 0).unwrap().is_connected());
        assert!(!Graph::from_edges(4, &[(0, 1), (2, 3)])
            .unwrap()
            .is_connected());
        assert!(Graph::empty(1).unwrap().is_connected());
    }

    #[test]
    fn induced_subgraphs() {
        let k4 = generate(&Family::Complete(4), 0).unwrap();
        let sub = k4.induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(sub.graph, generate(&Family::Complete(3), 0).unwrap());

        let p3 = generate(&Family::Path(3), 0).unwrap();
        let ends = p3.induced_subgraph(&[2, 0]).unwrap();
        assert_eq!(ends.graph.edge_count(), 0);
        assert_eq!(ends.labels, vec![0, 2]);

        let c5 = generate(&Family::Cycle(5), 0).unwrap();
        let arc = c5.induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(arc.graph.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);

        assert!(matches!(
            k4.induced_subgraph(&[]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            k4.induced_subgraph(&[4]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn prufer_known_codes() {
        // Code [3, 3] on 4 vertices is the star centered at 3.
        assert_eq!(
            prufer_decode(4, &[3, 3]).unwrap(),
            vec![(0, 3), (1, 3), (2, 3)]
        );
        assert_eq!(prufer_decode(2, &[]).unwrap(), vec![(0, 1)]);
        assert!(prufer_decode(4, &[3]).is_err());
    }

    #[test]
    fn prufer_is_a_bijection_for_small_n() {
        // All 5^3 codes decode to distinct trees (Cayley: 125 labeled trees).
        let n = 5;
        let mut seen = std::collections::BTreeSet::new();
        for c in 0..n * n * n {
            let code = [c % n, c / n % n, c / (n * n)];
            let mut edges = prufer_decode(n, &code).unwrap();
            edges.sort_unstable();
            assert!(Graph::from_edges(n, &edges).unwrap().is_tree());
            seen.insert(edges);
        }
        assert_eq!(seen.len(), 125);
    }

    proptest! {
        #[test]
        fn generated_graphs_are_consistent(n in 1usize..24, p in 0.0f64..=1.0, seed: u64) {
            let g = generate(&Family::Gnp(n, p), seed).unwrap();
            prop_assert_eq!(degree_sum(&g), 2 * g.edge_count());
            for (u, v) in g.edges() {
                prop_assert!(g.has_edge(v, u) && u != v);
            }
            prop_assert_eq!(&g, &generate(&Family::Gnp(n, p), seed).unwrap());
            let all: Vec<usize> = (0..n).collect();
            let same = g.induced_subgraph(&all).unwrap();
            prop_assert_eq!(&same.graph, &g);
            prop_assert_eq!(same.labels, all);
            prop_assert_eq!(Graph::from_edge_list(&g.to_edge_list()).unwrap(), g);
        }

        #[test]
        fn gnp_extremes(n in 1usize..20, seed: u64) {
            prop_assert_eq!(generate(&Family::Gnp(n, 0.0), seed).unwrap().edge_count(), 0);
            prop_assert_eq!(
                generate(&Family::Gnp(n, 1.0), seed).unwrap(),
                generate(&Family::Complete(n), 0).unwrap()
            );
        }

        #[test]
        fn random_trees_are_trees(n in 1usize..40, seed: u64) {
            let t = generate(&Family::RandomTree(n), seed).unwrap();
            prop_assert_eq!(t.edge_count(), n - 1);
            prop_assert!(t.is_connected());
        }
    }
}
