//! Block-intersection graphs and the clique routines used by the
//! two-stage search.
//!
//! Graphs here are small (vertices are candidate blocks through a fixed
//! coordinate pair), so adjacency lives in per-vertex bitsets and the
//! clique tests run directly on word operations.

use crate::error::{Error, Result};

/// A set of graph vertices (local indices), packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(capacity: usize) -> Self {
        VertexSet {
            words: vec![0; capacity.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut set = Self::empty(len);
        for v in 0..len {
            set.insert(v);
        }
        set
    }

    pub fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Intersection with another set of the same capacity.
    pub fn and(&self, other: &Self) -> Self {
        VertexSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn and_count(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Ascending iterator over members.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + bit)
                }
            })
        })
    }
}

/// The graph on the candidate blocks through one coordinate pair: vertex
/// `v` is `members[v]` (an index into the candidate set's block list) and
/// two vertices are adjacent when their blocks intersect in exactly three
/// points.
#[derive(Clone, Debug)]
pub struct PairGraph {
    /// The coordinate pair (i, j) the graph belongs to.
    pub pair: (usize, usize),
    members: Vec<usize>,
    adjacency: Vec<VertexSet>,
}

impl PairGraph {
    /// Builds a graph from the block indices through the pair and an
    /// adjacency predicate on those indices. The labels carried in
    /// `members` are opaque here; the search layer uses candidate-block
    /// indices.
    pub fn build<F>(pair: (usize, usize), members: Vec<usize>, mut adjacent: F) -> Self
    where
        F: FnMut(usize, usize) -> bool,
    {
        let n = members.len();
        let mut adjacency = vec![VertexSet::empty(n); n];
        for a in 0..n {
            for b in a + 1..n {
                if adjacent(members[a], members[b]) {
                    adjacency[a].insert(b);
                    adjacency[b].insert(a);
                }
            }
        }
        PairGraph {
            pair,
            members,
            adjacency,
        }
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// The candidate-set block indices backing the vertices, ascending.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// Whether two local vertices are adjacent.
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(b)
    }

    fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adjacency[v]
    }
}

/// Whether the graph contains a clique on at least `size` vertices.
/// Bron–Kerbosch with pivoting, branching from high-degree vertices
/// first, pruning branches that cannot reach `size`, stopping at the
/// first witness.
pub fn has_clique(graph: &PairGraph, size: usize) -> bool {
    assert!(size >= 1, "clique size must be positive");
    let n = graph.order();
    if n < size {
        return false;
    }
    let mut p = VertexSet::full(n);
    let mut x = VertexSet::empty(n);
    bk_exists(graph, 0, &mut p, &mut x, size)
}

fn bk_exists(
    graph: &PairGraph,
    clique: usize,
    p: &mut VertexSet,
    x: &mut VertexSet,
    size: usize,
) -> bool {
    if clique >= size {
        return true;
    }
    if clique + p.len() < size {
        return false;
    }
    // pivot on the vertex of P ∪ X covering most of P
    let pivot = p
        .iter()
        .chain(x.iter())
        .max_by_key(|&u| graph.neighbors(u).and_count(p))
        .expect("P nonempty by the bound check");
    let mut branches: Vec<usize> = p
        .iter()
        .filter(|&v| !graph.neighbors(pivot).contains(v))
        .collect();
    // try high-degree branches first: they bound the clique size less
    branches.sort_by_key(|&v| std::cmp::Reverse(graph.neighbors(v).and_count(p)));
    for v in branches {
        let mut p_next = p.and(graph.neighbors(v));
        let mut x_next = x.and(graph.neighbors(v));
        if bk_exists(graph, clique + 1, &mut p_next, &mut x_next, size) {
            return true;
        }
        p.remove(v);
        x.insert(v);
    }
    false
}

/// Result of a capped clique count: either the exact number of cliques of
/// the requested size, or the cap was reached. Capped counts compare
/// greater than every exact count, so a capped graph is never chosen as a
/// minimizer unless every graph is capped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CliqueCount {
    Exact(u64),
    AtLeast(u64),
}

impl CliqueCount {
    pub fn is_capped(&self) -> bool {
        matches!(self, CliqueCount::AtLeast(_))
    }
}

/// Counts cliques on exactly `size` vertices. A count that would pass
/// `cap` stops there and reports `AtLeast(cap)`; a scan that finishes —
/// even at exactly `cap` — is exact.
pub fn count_cliques(graph: &PairGraph, size: usize, cap: u64) -> CliqueCount {
    let mut count = 0;
    let overflow = visit_cliques(graph, size, |_| {
        count += 1;
        count <= cap
    });
    if overflow {
        CliqueCount::AtLeast(cap)
    } else {
        CliqueCount::Exact(count)
    }
}

/// Lists all cliques on exactly `size` vertices as ascending lists of
/// local vertex indices, in lexicographic order; errors when more than
/// `cap` exist (exactly `cap` is fine).
pub fn enumerate_cliques(graph: &PairGraph, size: usize, cap: u64) -> Result<Vec<Vec<usize>>> {
    let mut cliques = Vec::new();
    let overflow = visit_cliques(graph, size, |clique| {
        if cliques.len() as u64 == cap {
            return false;
        }
        cliques.push(clique.to_vec());
        true
    });
    if overflow {
        return Err(Error::Stage2Overflow {
            cap,
            size: graph.order(),
        });
    }
    Ok(cliques)
}

/// Depth-first scan over all cliques of exactly `size` vertices in
/// lexicographic order. The visitor returns false to stop early; the
/// return value says whether the scan was cut short.
fn visit_cliques<F>(graph: &PairGraph, size: usize, mut visitor: F) -> bool
where
    F: FnMut(&[usize]) -> bool,
{
    assert!(size >= 1, "clique size must be positive");
    let n = graph.order();
    if n < size {
        return false;
    }
    let mut clique = Vec::with_capacity(size);
    let all = VertexSet::full(n);
    extend_cliques(graph, size, &mut clique, &all, &mut visitor)
}

fn extend_cliques<F>(
    graph: &PairGraph,
    size: usize,
    clique: &mut Vec<usize>,
    allowed: &VertexSet,
    visitor: &mut F,
) -> bool
where
    F: FnMut(&[usize]) -> bool,
{
    if clique.len() == size {
        return !visitor(clique);
    }
    if clique.len() + allowed.len() < size {
        return false;
    }
    for v in allowed.iter().collect::<Vec<_>>() {
        // extend only upward so every clique appears exactly once, in
        // lexicographic order
        let mut next = allowed.and(graph.neighbors(v));
        for lower in 0..=v {
            if next.contains(lower) {
                next.remove(lower);
            }
        }
        clique.push(v);
        let stopped = extend_cliques(graph, size, clique, &next, visitor);
        clique.pop();
        if stopped {
            return true;
        }
    }
    false
}
