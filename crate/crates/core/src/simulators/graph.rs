//! Random graph sampling and small-pattern subgraph counting.
//!
//! Graphs live in adjacency bitsets (one `u64` row word per 64 vertices), and
//! pattern copies are counted as embeddings divided by the automorphism count,
//! so a copy means an unlabeled subgraph isomorphic to the pattern.

use super::rng::SplitMix64;
use crate::error::{Error, Result};

/// Largest pattern size supported by the counters.
pub const MAX_PATTERN_VERTICES: u8 = 5;

/// A small simple graph used as a counting pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternGraph {
    vertex_count: u8,
    edges: Vec<(u8, u8)>,
    automorphisms: u64,
}

impl PatternGraph {
    /// Builds a pattern from an edge list; vertex ids must form `0..l` with no
    /// isolated vertices, and `l` is capped at [`MAX_PATTERN_VERTICES`].
    pub fn from_edges(edges: &[(u8, u8)]) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidArgument("pattern needs at least one edge".into()));
        }
        let mut canonical: Vec<(u8, u8)> = Vec::with_capacity(edges.len());
        let mut max_vertex = 0u8;
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidArgument("pattern has a self-loop".into()));
            }
            let e = (a.min(b), a.max(b));
            max_vertex = max_vertex.max(e.1);
            canonical.push(e);
        }
        canonical.sort_unstable();
        canonical.dedup();
        if canonical.len() != edges.len() {
            return Err(Error::InvalidArgument("pattern has a duplicate edge".into()));
        }
        let vertex_count = max_vertex + 1;
        if vertex_count > MAX_PATTERN_VERTICES {
            return Err(Error::InvalidArgument(format!(
                "pattern has {vertex_count} vertices, maximum is {MAX_PATTERN_VERTICES}"
            )));
        }
        let mut seen = vec![false; vertex_count as usize];
        for &(a, b) in &canonical {
            seen[a as usize] = true;
            seen[b as usize] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument("pattern has an isolated vertex".into()));
        }
        let automorphisms = count_automorphisms(vertex_count, &canonical);
        Ok(PatternGraph { vertex_count, edges: canonical, automorphisms })
    }

    /// A handful of named patterns for configs and CLI flags.
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "edge" => Self::from_edges(&[(0, 1)]),
            "path2" => Self::from_edges(&[(0, 1), (1, 2)]),
            "path3" => Self::from_edges(&[(0, 1), (1, 2), (2, 3)]),
            "triangle" => Self::from_edges(&[(0, 1), (0, 2), (1, 2)]),
            "claw" => Self::from_edges(&[(0, 1), (0, 2), (0, 3)]),
            "cycle4" => Self::from_edges(&[(0, 1), (1, 2), (2, 3), (0, 3)]),
            "k4" => Self::from_edges(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
            other => Err(Error::InvalidArgument(format!("unknown pattern '{other}'"))),
        }
    }

    pub fn triangle() -> Self {
        Self::named("triangle").unwrap()
    }

    pub fn single_edge() -> Self {
        Self::named("edge").unwrap()
    }

    pub fn vertex_count(&self) -> u8 {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u8, u8)] {
        &self.edges
    }

    pub fn automorphism_count(&self) -> u64 {
        self.automorphisms
    }

    /// Whether the pattern is connected (depth-first walk from vertex 0).
    pub fn is_connected(&self) -> bool {
        let l = self.vertex_count as usize;
        let mut seen = vec![false; l];
        let mut stack = vec![0u8];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                let other = if a == v { b } else if b == v { a } else { continue };
                if !seen[other as usize] {
                    seen[other as usize] = true;
                    stack.push(other);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn is_triangle(&self) -> bool {
        self.vertex_count == 3 && self.edges.len() == 3
    }

    fn is_single_edge(&self) -> bool {
        self.vertex_count == 2 && self.edges.len() == 1
    }
}

fn count_automorphisms(l: u8, edges: &[(u8, u8)]) -> u64 {
    let mut perm: Vec<u8> = (0..l).collect();
    let mut count = 0u64;
    permute(&mut perm, 0, edges, &mut count);
    count
}

fn permute(perm: &mut Vec<u8>, k: usize, edges: &[(u8, u8)], count: &mut u64) {
    if k == perm.len() {
        let preserved = edges.iter().all(|&(a, b)| {
            let (x, y) = (perm[a as usize], perm[b as usize]);
            edges.binary_search(&(x.min(y), x.max(y))).is_ok()
        });
        if preserved {
            *count += 1;
        }
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, edges, count);
        perm.swap(k, i);
    }
}

/// Simple graph on `0..n` stored as row bitsets.
#[derive(Debug, Clone)]
pub struct AdjacencyGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl AdjacencyGraph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        AdjacencyGraph { n, words, rows: vec![0; n * words] }
    }

    #[inline]
    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.rows[a * self.words + b / 64] |= 1 << (b % 64);
        self.rows[b * self.words + a / 64] |= 1 << (a % 64);
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.rows[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    #[inline]
    fn row(&self, a: usize) -> &[u64] {
        &self.rows[a * self.words..(a + 1) * self.words]
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> u64 {
        let total: u32 = self.rows.iter().map(|w| w.count_ones()).sum();
        u64::from(total) / 2
    }

    /// Number of triangles, via common-neighbour bitset intersections. Each
    /// triangle `a < b < c` is found once from its edge `(a, b)`.
    pub fn triangle_count(&self) -> u64 {
        let mut count = 0u64;
        for a in 0..self.n {
            let row_a = self.row(a);
            for b in (a + 1)..self.n {
                if !self.has_edge(a, b) {
                    continue;
                }
                let row_b = self.row(b);
                // Mask off vertices <= b so each triangle is counted once.
                let start_word = (b + 1) / 64;
                for w in start_word..self.words {
                    let mut bits = row_a[w] & row_b[w];
                    if w == start_word {
                        let shift = (b + 1) % 64;
                        if shift > 0 {
                            bits &= !0u64 << shift;
                        }
                    }
                    count += u64::from(bits.count_ones());
                }
            }
        }
        count
    }

    /// Unlabeled copies of `pattern`: injective embeddings divided by the
    /// automorphism count. Backtracks over pattern vertices in index order.
    pub fn pattern_count(&self, pattern: &PatternGraph) -> u64 {
        if pattern.is_single_edge() {
            return self.edge_count();
        }
        if pattern.is_triangle() {
            return self.triangle_count();
        }
        let l = pattern.vertex_count() as usize;
        if self.n < l {
            return 0;
        }
        let mut assignment = vec![usize::MAX; l];
        let mut used = vec![false; self.n];
        let embeddings = self.embed(pattern, 0, &mut assignment, &mut used);
        embeddings / pattern.automorphism_count()
    }

    fn embed(
        &self,
        pattern: &PatternGraph,
        depth: usize,
        assignment: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> u64 {
        let l = pattern.vertex_count() as usize;
        if depth == l {
            return 1;
        }
        let mut total = 0;
        'candidates: for v in 0..self.n {
            if used[v] {
                continue;
            }
            for &(a, b) in pattern.edges() {
                let (a, b) = (a as usize, b as usize);
                if b == depth && assignment[a] != usize::MAX && !self.has_edge(assignment[a], v) {
                    continue 'candidates;
                }
                if a == depth && assignment[b] != usize::MAX && !self.has_edge(assignment[b], v) {
                    continue 'candidates;
                }
            }
            assignment[depth] = v;
            used[v] = true;
            total += self.embed(pattern, depth + 1, assignment, used);
            used[v] = false;
            assignment[depth] = usize::MAX;
        }
        total
    }
}

fn pair_count(n: u64) -> u64 {
    n * (n - 1) / 2
}

/// Edge index in row-major order over pairs `i < j`.
fn edge_from_index(n: u64, mut idx: u64) -> (usize, usize) {
    for i in 0..n {
        let row = n - 1 - i;
        if idx < row {
            return (i as usize, (i + 1 + idx) as usize);
        }
        idx -= row;
    }
    unreachable!("edge index out of range")
}

/// Draws a Bernoulli-edge random graph with edge probability `p`.
pub fn sample_gnp(n: u64, p: f64, rng: &mut SplitMix64) -> Result<AdjacencyGraph> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("edge probability {p} must be in (0,1)")));
    }
    if n < 1 {
        return Err(Error::InvalidArgument("graph needs at least one vertex".into()));
    }
    let mut g = AdjacencyGraph::empty(n as usize);
    for i in 0..n as usize {
        for j in (i + 1)..n as usize {
            if rng.next_f64() < p {
                g.add_edge(i, j);
            }
        }
    }
    Ok(g)
}

/// Draws a uniform graph with exactly `m` edges via a partial Fisher-Yates
/// shuffle of the edge indices.
pub fn sample_gnm(n: u64, m: u64, rng: &mut SplitMix64) -> Result<AdjacencyGraph> {
    if n < 1 {
        return Err(Error::InvalidArgument("graph needs at least one vertex".into()));
    }
    let total = pair_count(n);
    if m > total {
        return Err(Error::InvalidArgument(format!("m = {m} exceeds the {total} possible edges")));
    }
    let mut indices: Vec<u32> = (0..total as u32).collect();
    let mut g = AdjacencyGraph::empty(n as usize);
    for i in 0..m {
        let j = i + rng.next_below(total - i);
        indices.swap(i as usize, j as usize);
        let (a, b) = edge_from_index(n, u64::from(indices[i as usize]));
        g.add_edge(a, b);
    }
    Ok(g)
}

/// One draw of the pattern count in a Bernoulli-edge random graph.
pub fn sample_gnp_subgraph_count(
    n: u64,
    p: f64,
    pattern: &PatternGraph,
    rng: &mut SplitMix64,
) -> Result<u64> {
    Ok(sample_gnp(n, p, rng)?.pattern_count(pattern))
}

/// One draw of the pattern count in a uniform fixed-edge-count random graph.
pub fn sample_gnm_subgraph_count(
    n: u64,
    m: u64,
    pattern: &PatternGraph,
    rng: &mut SplitMix64,
) -> Result<u64> {
    Ok(sample_gnm(n, m, rng)?.pattern_count(pattern))
}

/// Exact mean and variance of the triangle count in a Bernoulli-edge graph:
/// `C(n,3) p^3` and `C(n,3)(p^3 - p^6) + 12 C(n,4)(p^5 - p^6)`.
pub fn gnp_triangle_moments_exact(n: u64, p: f64) -> Result<(f64, f64)> {
    if n < 3 {
        return Err(Error::InvalidArgument("triangle moments need n >= 3".into()));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidArgument(format!("edge probability {p} must be in (0,1]")));
    }
    let triples = (n * (n - 1) * (n - 2) / 6) as f64;
    let quads = if n >= 4 { (n * (n - 1) * (n - 2) * (n - 3) / 24) as f64 } else { 0.0 };
    let p3 = p.powi(3);
    let p5 = p.powi(5);
    let p6 = p.powi(6);
    let mean = triples * p3;
    let variance = triples * (p3 - p6) + 12.0 * quads * (p5 - p6);
    Ok((mean, variance))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_validation() {
        assert!(PatternGraph::from_edges(&[]).is_err());
        assert!(PatternGraph::from_edges(&[(0, 0)]).is_err());
        assert!(PatternGraph::from_edges(&[(0, 1), (1, 0)]).is_err());
        assert!(PatternGraph::from_edges(&[(0, 2)]).is_err()); // vertex 1 isolated
        assert!(PatternGraph::from_edges(&[(0, 5)]).is_err()); // too many vertices
        assert!(PatternGraph::named("heptagon").is_err());
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(PatternGraph::single_edge().automorphism_count(), 2);
        assert_eq!(PatternGraph::triangle().automorphism_count(), 6);
        assert_eq!(PatternGraph::named("path2").unwrap().automorphism_count(), 2);
        assert_eq!(PatternGraph::named("claw").unwrap().automorphism_count(), 6);
        assert_eq!(PatternGraph::named("cycle4").unwrap().automorphism_count(), 8);
        assert_eq!(PatternGraph::named("k4").unwrap().automorphism_count(), 24);
    }

    #[test]
    fn triangle_count_on_known_graphs() {
        let mut g = AdjacencyGraph::empty(4);
        for i in 0..4 {
            for j in (i + 1)..4 {
                g.add_edge(i, j);
            }
        }
        assert_eq!(g.triangle_count(), 4);
        assert_eq!(g.pattern_count(&PatternGraph::triangle()), 4);
        assert_eq!(g.pattern_count(&PatternGraph::named("k4").unwrap()), 1);
        assert_eq!(g.pattern_count(&PatternGraph::named("path2").unwrap()), 12);
        assert_eq!(g.edge_count(), 6);
    }

    /// Independent oracle: enumerate all bijections from pattern vertices onto
    /// every subset, collecting distinct edge sets.
    fn brute_force_pattern_count(g: &AdjacencyGraph, pattern: &PatternGraph) -> u64 {
        use std::collections::HashSet;
        let n = g.vertex_count();
        let l = pattern.vertex_count() as usize;
        let mut copies: HashSet<Vec<(usize, usize)>> = HashSet::new();
        let mut map = vec![0usize; l];
        fn rec(
            g: &AdjacencyGraph,
            pattern: &PatternGraph,
            depth: usize,
            n: usize,
            map: &mut Vec<usize>,
            copies: &mut HashSet<Vec<(usize, usize)>>,
        ) {
            let l = pattern.vertex_count() as usize;
            if depth == l {
                let mut edges: Vec<(usize, usize)> = Vec::with_capacity(pattern.edge_count());
                for &(a, b) in pattern.edges() {
                    let (x, y) = (map[a as usize], map[b as usize]);
                    if !g.has_edge(x, y) {
                        return;
                    }
                    edges.push((x.min(y), x.max(y)));
                }
                edges.sort_unstable();
                copies.insert(edges);
                return;
            }
            for v in 0..n {
                if map[..depth].contains(&v) {
                    continue;
                }
                map[depth] = v;
                rec(g, pattern, depth + 1, n, map, copies);
            }
        }
        rec(g, pattern, 0, n, &mut map, &mut copies);
        copies.len() as u64
    }

    #[test]
    fn pattern_counts_match_brute_force() {
        let patterns = [
            PatternGraph::single_edge(),
            PatternGraph::named("path2").unwrap(),
            PatternGraph::named("path3").unwrap(),
            PatternGraph::triangle(),
            PatternGraph::named("claw").unwrap(),
            PatternGraph::named("cycle4").unwrap(),
            PatternGraph::named("k4").unwrap(),
            PatternGraph::from_edges(&[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap(),
        ];
        let mut rng = SplitMix64::new(2024);
        for n in 4..=7u64 {
            for trial in 0..6 {
                let p = [0.2, 0.5, 0.8][trial % 3];
                let g = sample_gnp(n, p, &mut rng).unwrap();
                for pattern in &patterns {
                    assert_eq!(
                        g.pattern_count(pattern),
                        brute_force_pattern_count(&g, pattern),
                        "n={n} trial={trial} pattern with {} edges",
                        pattern.edge_count()
                    );
                }
            }
        }
    }

    #[test]
    fn gnm_edge_count_is_deterministic() {
        let mut rng = SplitMix64::new(9);
        for &(n, m) in &[(6u64, 0u64), (6, 7), (6, 15)] {
            let g = sample_gnm(n, m, &mut rng).unwrap();
            assert_eq!(g.edge_count(), m);
            assert_eq!(g.pattern_count(&PatternGraph::single_edge()), m);
        }
        assert!(sample_gnm(4, 7, &mut rng).is_err());
    }

    #[test]
    fn complete_gnm_has_one_triangle() {
        let mut rng = SplitMix64::new(1);
        let count =
            sample_gnm_subgraph_count(3, 3, &PatternGraph::triangle(), &mut rng).unwrap();
        assert_eq!(count, 1);
    }

    #[test]
    fn triangle_moment_formula_small_cases() {
        let p = 0.37;
        let (mean, var) = gnp_triangle_moments_exact(3, p).unwrap();
        assert!((mean - p.powi(3)).abs() < 1e-15);
        assert!((var - (p.powi(3) - p.powi(6))).abs() < 1e-15);

        let (mean, var) = gnp_triangle_moments_exact(4, 1.0).unwrap();
        assert_eq!(mean, 4.0);
        assert_eq!(var, 0.0);
    }

    #[test]
    fn edge_indexing_is_bijective() {
        let n = 9u64;
        let mut seen = std::collections::HashSet::new();
        for idx in 0..pair_count(n) {
            let (a, b) = edge_from_index(n, idx);
            assert!(a < b && b < n as usize);
            assert!(seen.insert((a, b)));
        }
        assert_eq!(seen.len() as u64, pair_count(n));
    }
}
