//! Graph representations: undirected graphs, digraphs, loop digraphs and
//! weighted digraphs.
//!
//! Nodes are contiguous 0-based indices internally. [`NodeId`] is the
//! 1-based identifier used in files, on the command line and in messages.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// 1-based external node identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct NodeId(usize);

impl NodeId {
    /// Returns `None` for id 0.
    pub fn new(id: usize) -> Option<Self> {
        (id > 0).then_some(NodeId(id))
    }

    pub fn from_index(index: usize) -> Self {
        NodeId(index + 1)
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Dense square bit matrix, one row of `u64` words per node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix {
            n,
            words,
            bits: vec![0; words * n],
        }
    }

    #[inline]
    pub(crate) fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    /// Sets a bit, returning whether it was previously clear.
    #[inline]
    pub(crate) fn set(&mut self, r: usize, c: usize) -> bool {
        let word = &mut self.bits[r * self.words + c / 64];
        let mask = 1u64 << (c % 64);
        let fresh = *word & mask == 0;
        *word |= mask;
        fresh
    }

    #[inline]
    pub(crate) fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words..(r + 1) * self.words]
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub(crate) fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.n);
        for r in 0..self.n {
            for c in self.ones(r) {
                t.set(c, r);
            }
        }
        t
    }

    pub(crate) fn ones(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(r).iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + bit)
            })
        })
    }
}

fn check_index(index: usize, n: usize) -> Result<()> {
    if index >= n {
        Err(Error::NodeOutOfRange { id: index + 1, n })
    } else {
        Ok(())
    }
}

fn check_triple(nodes: [NodeId; 3], n: usize) -> Result<[usize; 3]> {
    for id in nodes {
        if id.get() > n {
            return Err(Error::NodeOutOfRange { id: id.get(), n });
        }
    }
    if nodes[0] == nodes[1] || nodes[0] == nodes[2] {
        return Err(Error::RepeatedNode(nodes[0].get()));
    }
    if nodes[1] == nodes[2] {
        return Err(Error::RepeatedNode(nodes[1].get()));
    }
    Ok(nodes.map(NodeId::index))
}

/// Simple undirected graph: no loops, no multi-edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl UndirectedGraph {
    pub fn empty(n: usize) -> Self {
        UndirectedGraph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from 0-based endpoint pairs.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v) in edges {
            check_index(u, n)?;
            check_index(v, n)?;
            if u == v {
                return Err(Error::LoopForbidden {
                    node: u + 1,
                    mode: "undirected",
                });
            }
            adj[u].push(v);
            adj[v].push(u);
            edge_count += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (u.min(w[0]), u.max(w[0]));
                return Err(Error::DuplicateEdge { u: a + 1, v: b + 1 });
            }
        }
        Ok(UndirectedGraph { adj, edge_count })
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|u| (0..n).filter(|&v| v != u).collect())
            .collect();
        UndirectedGraph {
            adj,
            edge_count: n * n.saturating_sub(1) / 2,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Sorted neighbour list.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Edge density `2e / (n(n-1))`; zero for fewer than two nodes.
    pub fn density(&self) -> f64 {
        let n = self.node_count() as f64;
        if n < 2.0 {
            0.0
        } else {
            2.0 * self.edge_count as f64 / (n * (n - 1.0))
        }
    }

    /// Replaces every edge by a pair of opposite arcs.
    pub fn direct(&self) -> Digraph {
        let mut arcs = ArcMatrix::new(self.node_count());
        for (u, v) in self.edges() {
            arcs.insert(u, v);
            arcs.insert(v, u);
        }
        Digraph { arcs }
    }

    /// Relabels node `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        UndirectedGraph::from_edges(
            self.node_count(),
            self.edges().map(|(u, v)| (perm[u], perm[v])),
        )
        .expect("permutation preserves simplicity")
    }

    /// Graph induced on `keep`, relabelled `0..keep.len()` in the given order.
    pub fn induced(&self, keep: &[usize]) -> Self {
        let mut position = vec![usize::MAX; self.node_count()];
        for (i, &v) in keep.iter().enumerate() {
            position[v] = i;
        }
        let edges = self.edges().filter_map(|(u, v)| {
            let (a, b) = (position[u], position[v]);
            (a != usize::MAX && b != usize::MAX).then_some((a, b))
        });
        UndirectedGraph::from_edges(keep.len(), edges).expect("induced subgraph is simple")
    }
}

/// Arc set shared by [`Digraph`] and [`LoopDigraph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ArcMatrix {
    out: BitMatrix,
    arc_count: usize,
}

impl ArcMatrix {
    fn new(n: usize) -> Self {
        ArcMatrix {
            out: BitMatrix::new(n),
            arc_count: 0,
        }
    }

    fn insert(&mut self, u: usize, v: usize) -> bool {
        let fresh = self.out.set(u, v);
        if fresh {
            self.arc_count += 1;
        }
        fresh
    }

    fn build<I>(n: usize, arcs: I, allow_loops: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut matrix = ArcMatrix::new(n);
        for (u, v) in arcs {
            check_index(u, n)?;
            check_index(v, n)?;
            if u == v && !allow_loops {
                return Err(Error::LoopForbidden {
                    node: u + 1,
                    mode: "directed",
                });
            }
            if !matrix.insert(u, v) {
                return Err(Error::DuplicateEdge { u: u + 1, v: v + 1 });
            }
        }
        Ok(matrix)
    }

    fn n(&self) -> usize {
        self.out.n
    }

    fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.out.ones(u).map(move |v| (u, v)))
    }

    fn induced(&self, idx: [usize; 3]) -> ArcMatrix {
        let mut t = ArcMatrix::new(3);
        for (a, &u) in idx.iter().enumerate() {
            for (b, &v) in idx.iter().enumerate() {
                if self.out.get(u, v) {
                    t.insert(a, b);
                }
            }
        }
        t
    }

    fn permuted(&self, perm: &[usize]) -> ArcMatrix {
        let mut t = ArcMatrix::new(self.n());
        for (u, v) in self.arcs() {
            t.insert(perm[u], perm[v]);
        }
        t
    }
}

/// Directed graph without loops; at most one arc per ordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    arcs: ArcMatrix,
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        Digraph {
            arcs: ArcMatrix::new(n),
        }
    }

    /// Builds a digraph from 0-based ordered pairs.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Ok(Digraph {
            arcs: ArcMatrix::build(n, arcs, false)?,
        })
    }

    pub fn complete(n: usize) -> Self {
        UndirectedGraph::complete(n).direct()
    }

    pub fn node_count(&self) -> usize {
        self.arcs.n()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.arc_count
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.out.get(u, v)
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.arcs()
    }

    pub fn out_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs.out.ones(u)
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetric_witness().is_none()
    }

    fn asymmetric_witness(&self) -> Option<(usize, usize)> {
        self.arcs().find(|&(u, v)| !self.has_arc(v, u))
    }

    /// Collapses each mutual pair of arcs into one undirected edge.
    ///
    /// Fails on the first arc (in lexicographic order) whose reverse is
    /// missing.
    pub fn symmetrize(&self) -> Result<UndirectedGraph> {
        if let Some((u, v)) = self.asymmetric_witness() {
            return Err(Error::Asymmetric {
                from: u + 1,
                to: v + 1,
            });
        }
        UndirectedGraph::from_edges(self.node_count(), self.arcs().filter(|&(u, v)| u < v))
    }

    pub fn reversed(&self) -> Self {
        Digraph::from_arcs(self.node_count(), self.arcs().map(|(u, v)| (v, u)))
            .expect("reversal preserves simplicity")
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        Digraph {
            arcs: self.arcs.permuted(perm),
        }
    }
}

/// Digraph that may contain loops `v -> v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopDigraph {
    arcs: ArcMatrix,
}

impl LoopDigraph {
    pub fn empty(n: usize) -> Self {
        LoopDigraph {
            arcs: ArcMatrix::new(n),
        }
    }

    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Ok(LoopDigraph {
            arcs: ArcMatrix::build(n, arcs, true)?,
        })
    }

    /// All `n^2` arcs, loops included.
    pub fn complete(n: usize) -> Self {
        let mut arcs = ArcMatrix::new(n);
        for u in 0..n {
            for v in 0..n {
                arcs.insert(u, v);
            }
        }
        LoopDigraph { arcs }
    }

    pub fn node_count(&self) -> usize {
        self.arcs.n()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.arc_count
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.out.get(u, v)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.arcs()
    }

    pub fn loop_count(&self) -> usize {
        (0..self.node_count())
            .filter(|&v| self.has_arc(v, v))
            .count()
    }

    /// Drops loops.
    pub fn without_loops(&self) -> Digraph {
        Digraph::from_arcs(self.node_count(), self.arcs().filter(|&(u, v)| u != v))
            .expect("loop-free arcs form a digraph")
    }

    /// Arc density `e / n^2`.
    pub fn density(&self) -> f64 {
        let n = self.node_count() as f64;
        if n == 0.0 {
            0.0
        } else {
            self.arc_count() as f64 / (n * n)
        }
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        LoopDigraph {
            arcs: self.arcs.permuted(perm),
        }
    }

    pub(crate) fn matrix(&self) -> &BitMatrix {
        &self.arcs.out
    }
}

impl From<&Digraph> for LoopDigraph {
    fn from(d: &Digraph) -> Self {
        LoopDigraph {
            arcs: d.arcs.clone(),
        }
    }
}

/// Digraph with nonnegative arc weights; an absent arc has weight zero.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedDigraph<W> {
    n: usize,
    weights: BTreeMap<(usize, usize), W>,
}

impl<W: Scalar> WeightedDigraph<W> {
    pub fn empty(n: usize) -> Self {
        WeightedDigraph {
            n,
            weights: BTreeMap::new(),
        }
    }

    pub fn from_weighted_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, W)>,
    {
        let mut weights = BTreeMap::new();
        for (u, v, w) in arcs {
            check_index(u, n)?;
            check_index(v, n)?;
            if u == v {
                return Err(Error::LoopForbidden {
                    node: u + 1,
                    mode: "weighted",
                });
            }
            if w < W::zero() {
                return Err(Error::NegativeWeight { weight: w.as_f64() });
            }
            if weights.insert((u, v), w).is_some() {
                return Err(Error::DuplicateEdge { u: u + 1, v: v + 1 });
            }
        }
        Ok(WeightedDigraph { n, weights })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, u: usize, v: usize) -> W {
        self.weights.get(&(u, v)).cloned().unwrap_or_else(W::zero)
    }

    pub fn weighted_arcs(&self) -> impl Iterator<Item = (usize, usize, &W)> + '_ {
        self.weights.iter().map(|(&(u, v), w)| (u, v, w))
    }

    /// Arcs of strictly positive weight.
    pub fn support(&self) -> Digraph {
        Digraph::from_arcs(
            self.n,
            self.weighted_arcs()
                .filter(|(_, _, w)| **w > W::zero())
                .map(|(u, v, _)| (u, v)),
        )
        .expect("weighted arcs are distinct and loop-free")
    }

    pub fn reversed(&self) -> Self {
        WeightedDigraph {
            n: self.n,
            weights: self
                .weights
                .iter()
                .map(|(&(u, v), w)| ((v, u), w.clone()))
                .collect(),
        }
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        WeightedDigraph {
            n: self.n,
            weights: self
                .weights
                .iter()
                .map(|(&(u, v), w)| ((perm[u], perm[v]), w.clone()))
                .collect(),
        }
    }
}

impl Digraph {
    /// Unit weight on every arc.
    pub fn with_unit_weights<W: Scalar>(&self) -> WeightedDigraph<W> {
        WeightedDigraph::from_weighted_arcs(
            self.node_count(),
            self.arcs().map(|(u, v)| (u, v, W::one())),
        )
        .expect("digraph arcs are valid weighted arcs")
    }
}

/// Subgraph induced on three nodes, relabelled 1..3 in the given order.
pub trait InducedTriad: Sized {
    fn induced_triad(&self, nodes: [NodeId; 3]) -> Result<Self>;
}

impl InducedTriad for UndirectedGraph {
    fn induced_triad(&self, nodes: [NodeId; 3]) -> Result<Self> {
        let idx = check_triple(nodes, self.node_count())?;
        Ok(self.induced(&idx))
    }
}

impl InducedTriad for Digraph {
    fn induced_triad(&self, nodes: [NodeId; 3]) -> Result<Self> {
        let idx = check_triple(nodes, self.node_count())?;
        Ok(Digraph {
            arcs: self.arcs.induced(idx),
        })
    }
}

impl InducedTriad for LoopDigraph {
    fn induced_triad(&self, nodes: [NodeId; 3]) -> Result<Self> {
        let idx = check_triple(nodes, self.node_count())?;
        Ok(LoopDigraph {
            arcs: self.arcs.induced(idx),
        })
    }
}

impl<W: Scalar> InducedTriad for WeightedDigraph<W> {
    fn induced_triad(&self, nodes: [NodeId; 3]) -> Result<Self> {
        let idx = check_triple(nodes, self.n)?;
        let mut weights = BTreeMap::new();
        for (a, &u) in idx.iter().enumerate() {
            for (b, &v) in idx.iter().enumerate() {
                if let Some(w) = self.weights.get(&(u, v)) {
                    weights.insert((a, b), w.clone());
                }
            }
        }
        Ok(WeightedDigraph { n: 3, weights })
    }
}
