//! Triad censuses, intransitive triple counts and flow balance.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Digraph, LoopDigraph, NodeId, UndirectedGraph, WeightedDigraph};
use crate::scalar::{triad_total, Scalar};
use crate::triad::{motto_failures_distinct, triad_mask, TriadClassD};

/// Number of triads with 0, 1, 2 and 3 edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CensusU {
    pub n: u64,
    pub counts: [u64; 4],
}

impl CensusU {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Triad counts per directed class; `counts[c - 1]` is class `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CensusD {
    pub n: u64,
    pub counts: [u64; 16],
}

impl CensusD {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn count(&self, class: TriadClassD) -> u64 {
        self.counts[class.index() - 1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TransitivityCount {
    /// Ordered triples of distinct nodes with `x->y`, `y->z` but no `x->z`.
    pub intransitive_triples: u64,
    /// `n(n-1)(n-2)`.
    pub total_triples: u64,
}

fn require_triads(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::TooFewNodes { n, required: 3 })
    } else {
        Ok(())
    }
}

/// Triangles, counted once each via sorted-list intersection on `u < v < w`.
pub fn triangle_count(g: &UndirectedGraph) -> u64 {
    g.edges()
        .map(|(u, v)| {
            let (a, b) = (g.neighbors(u), g.neighbors(v));
            let (mut i, mut j) = (
                a.partition_point(|&w| w <= v),
                b.partition_point(|&w| w <= v),
            );
            let mut common = 0;
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        common += 1;
                        i += 1;
                        j += 1;
                    }
                }
            }
            common
        })
        .sum()
}

/// Undirected census from edge, wedge and triangle counts.
///
/// With `m` edges, `T` triangles and `P2 = sum_v C(deg v, 2)` paths of
/// length two: `c3 = T`, `c2 = P2 - 3T`, `c1 = m(n-2) - 2 P2 + 3T`, and `c0`
/// is the remainder of `C(n, 3)`.
pub fn census_undirected(g: &UndirectedGraph) -> Result<CensusU> {
    let n = g.node_count();
    require_triads(n)?;
    let m = g.edge_count() as u128;
    let t = u128::from(triangle_count(g));
    let p2: u128 = (0..n)
        .map(|v| {
            let d = g.degree(v) as u128;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    let total = u128::from(triad_total(n as u64));
    let c3 = t;
    let c2 = p2 - 3 * t;
    let c1 = m * (n as u128 - 2) + 3 * t - 2 * p2;
    let c0 = total - c1 - c2 - c3;
    let narrow = |x: u128| u64::try_from(x).expect("triad count fits u64");
    Ok(CensusU {
        n: n as u64,
        counts: [narrow(c0), narrow(c1), narrow(c2), narrow(c3)],
    })
}

const PARALLEL_THRESHOLD: usize = 64;

/// Directed census by classifying every unordered node triple.
pub fn census_directed(g: &Digraph) -> Result<CensusD> {
    let n = g.node_count();
    require_triads(n)?;
    let row = |i: usize| {
        let mut local = [0u64; 16];
        for j in i + 1..n {
            for k in j + 1..n {
                local[TriadClassD::from_mask(triad_mask(g, [i, j, k])).index() - 1] += 1;
            }
        }
        local
    };
    let add = |mut a: [u64; 16], b: [u64; 16]| {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        a
    };
    let counts = if n >= PARALLEL_THRESHOLD {
        (0..n).into_par_iter().map(row).reduce(|| [0; 16], add)
    } else {
        (0..n).map(row).fold([0; 16], add)
    };
    Ok(CensusD {
        n: n as u64,
        counts,
    })
}

pub fn count_intransitive_triples(g: &Digraph) -> Result<TransitivityCount> {
    let n = g.node_count();
    require_triads(n)?;
    let n = n as u64;
    Ok(TransitivityCount {
        intransitive_triples: motto_failures_distinct(&LoopDigraph::from(g))[0],
        total_triples: n * (n - 1) * (n - 2),
    })
}

/// Result of testing whether every triad of a graph is balanced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompleteBalance {
    /// One clique, or two disjoint cliques.
    Balanced { parts: Vec<Vec<NodeId>> },
    /// A triad with 0 or 2 edges.
    Unbalanced { witness: [NodeId; 3], edges: usize },
}

fn components(g: &UndirectedGraph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut head = 0;
        while head < comp.len() {
            let u = comp[head];
            head += 1;
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Some `u - v - w` path with `u` and `w` not adjacent, if the component
/// of `u` is not a clique.
fn open_wedge(g: &UndirectedGraph, u: usize) -> Option<[usize; 3]> {
    g.neighbors(u).iter().find_map(|&v| {
        g.neighbors(v)
            .iter()
            .find(|&&w| w != u && !g.has_edge(u, w))
            .map(|&w| [u, v, w])
    })
}

pub fn is_completely_balanced(g: &UndirectedGraph) -> Result<CompleteBalance> {
    require_triads(g.node_count())?;
    let comps = components(g);
    if comps.len() > 2 {
        let witness = [comps[0][0], comps[1][0], comps[2][0]].map(NodeId::from_index);
        return Ok(CompleteBalance::Unbalanced { witness, edges: 0 });
    }
    for comp in &comps {
        for &u in comp {
            if let Some(triple) = open_wedge(g, u) {
                return Ok(CompleteBalance::Unbalanced {
                    witness: triple.map(NodeId::from_index),
                    edges: 2,
                });
            }
        }
    }
    Ok(CompleteBalance::Balanced {
        parts: comps
            .into_iter()
            .map(|c| c.into_iter().map(NodeId::from_index).collect())
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowBalance<W> {
    Balanced,
    Unbalanced {
        node: NodeId,
        in_weight: W,
        out_weight: W,
    },
}

fn node_flows<W: Scalar>(g: &WeightedDigraph<W>) -> Vec<(W, W)> {
    let mut flows = vec![(W::zero(), W::zero()); g.node_count()];
    for (u, v, w) in g.weighted_arcs() {
        flows[u].1 = flows[u].1.clone() + w.clone();
        flows[v].0 = flows[v].0.clone() + w.clone();
    }
    flows
}

/// Scale-aware tolerance: zero when every weight is integral, otherwise
/// the scalar's relative tolerance times the largest in- or out-flow.
pub fn default_flow_tolerance<W: Scalar>(g: &WeightedDigraph<W>) -> W {
    if g.weighted_arcs().all(|(_, _, w)| w.as_f64().fract() == 0.0) {
        return W::zero();
    }
    let peak = node_flows(g)
        .into_iter()
        .flat_map(|(i, o)| [i, o])
        .fold(W::zero(), |a, b| if b > a { b } else { a });
    W::default_rel_tol() * peak
}

/// In-weight equals out-weight, within `tol`, at every node.
pub fn flow_balance<W: Scalar>(g: &WeightedDigraph<W>, tol: W) -> Result<FlowBalance<W>> {
    if tol < W::zero() {
        return Err(Error::InvalidParameter(
            "tolerance must be nonnegative".into(),
        ));
    }
    for (v, (inw, outw)) in node_flows(g).into_iter().enumerate() {
        if inw.abs_diff(&outw) > tol {
            return Ok(FlowBalance::Unbalanced {
                node: NodeId::from_index(v),
                in_weight: inw,
                out_weight: outw,
            });
        }
    }
    Ok(FlowBalance::Balanced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{clique_union, star_graph};
    use crate::graph::InducedTriad;
    use crate::triad::classify_undirected_triad;
    use num_rational::Ratio;
    use proptest::prelude::*;

    fn brute_census(g: &UndirectedGraph) -> [u64; 4] {
        let n = g.node_count();
        let mut counts = [0; 4];
        for a in 1..=n {
            for b in a + 1..=n {
                for c in b + 1..=n {
                    let ids = [a, b, c].map(|i| NodeId::new(i).unwrap());
                    let t = g.induced_triad(ids).unwrap();
                    counts[classify_undirected_triad(&t).unwrap().edge_count()] += 1;
                }
            }
        }
        counts
    }

    fn arb_undirected(max_n: usize) -> impl Strategy<Value = UndirectedGraph> {
        (3..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
                UndirectedGraph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e))
                    .unwrap()
            })
        })
    }

    #[test]
    fn census_examples() {
        let star = star_graph(10).unwrap();
        assert_eq!(census_undirected(&star).unwrap().counts, [84, 0, 36, 0]);
        let two = clique_union(2, 3).unwrap();
        assert_eq!(census_undirected(&two).unwrap().counts, [0, 18, 0, 2]);
        assert_eq!(
            census_undirected(&UndirectedGraph::empty(2)),
            Err(Error::TooFewNodes { n: 2, required: 3 })
        );
    }

    #[test]
    fn directed_census_examples() {
        let c = census_directed(&Digraph::empty(4)).unwrap();
        assert_eq!(c.counts[0], 4);
        assert_eq!(c.total(), 4);
        assert_eq!(
            census_directed(&Digraph::complete(3)).unwrap().counts[15],
            1
        );
        let mutual = Digraph::from_arcs(3, [(0, 1), (1, 0)]).unwrap();
        let c = census_directed(&mutual).unwrap();
        let mut expect = [0; 16];
        expect[2] = 1;
        assert_eq!(c.counts, expect);
    }

    #[test]
    fn directed_census_parallel_path_matches_total() {
        let g = crate::null_model::sample_er_directed(
            &crate::null_model::ErParams::new(70, 0.1).unwrap(),
            &mut crate::rng::sample_rng(3, 0),
        );
        assert_eq!(census_directed(&g).unwrap().total(), triad_total(70));
    }

    #[test]
    fn intransitive_examples() {
        for i in [7, 8] {
            let t = TriadClassD::new(i).unwrap().canonical_rep();
            let c = count_intransitive_triples(&t).unwrap();
            assert_eq!(c.intransitive_triples, 1);
            assert_eq!(c.total_triples, 6);
        }
        for n in [3, 5, 9] {
            assert_eq!(
                count_intransitive_triples(&Digraph::complete(n))
                    .unwrap()
                    .intransitive_triples,
                0
            );
        }
    }

    #[test]
    fn complete_balance_examples() {
        let ids = |v: &[usize]| {
            v.iter()
                .map(|&i| NodeId::new(i).unwrap())
                .collect::<Vec<_>>()
        };
        match is_completely_balanced(&UndirectedGraph::complete(5)).unwrap() {
            CompleteBalance::Balanced { parts } => assert_eq!(parts, vec![ids(&[1, 2, 3, 4, 5])]),
            other => panic!("{other:?}"),
        }
        let g = UndirectedGraph::from_edges(
            7,
            [
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (2, 3),
                (4, 5),
                (4, 6),
                (5, 6),
            ],
        )
        .unwrap();
        match is_completely_balanced(&g).unwrap() {
            CompleteBalance::Balanced { parts } => {
                assert_eq!(parts, vec![ids(&[1, 2, 3, 4]), ids(&[5, 6, 7])])
            }
            other => panic!("{other:?}"),
        }
        let path = UndirectedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        match is_completely_balanced(&path).unwrap() {
            CompleteBalance::Unbalanced { witness, edges } => {
                let mut w = witness.map(NodeId::get);
                w.sort();
                assert_eq!((w, edges), ([1, 2, 3], 2));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            is_completely_balanced(&clique_union(3, 2).unwrap()).unwrap(),
            CompleteBalance::Unbalanced { edges: 0, .. }
        ));
    }

    #[test]
    fn flow_balance_examples() {
        let cycle = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(
            flow_balance(&cycle.with_unit_weights::<f64>(), 0.0).unwrap(),
            FlowBalance::Balanced
        );
        let arc = WeightedDigraph::from_weighted_arcs(2, [(0, 1, 1.0)]).unwrap();
        assert_eq!(
            flow_balance(&arc, 0.0).unwrap(),
            FlowBalance::Unbalanced {
                node: NodeId::new(1).unwrap(),
                in_weight: 0.0,
                out_weight: 1.0
            }
        );
        assert!(flow_balance(&arc, -1.0).is_err());

        let exact = WeightedDigraph::from_weighted_arcs(
            3,
            [
                (0, 1, Ratio::new(1i64, 3)),
                (1, 0, Ratio::new(1, 3)),
                (1, 2, Ratio::new(2, 7)),
                (2, 1, Ratio::new(2, 7)),
            ],
        )
        .unwrap();
        assert_eq!(default_flow_tolerance(&exact), Ratio::from_integer(0));
        assert_eq!(
            flow_balance(&exact, Ratio::from_integer(0)).unwrap(),
            FlowBalance::Balanced
        );
    }

    #[test]
    fn default_tolerance_scales() {
        let ints = WeightedDigraph::from_weighted_arcs(2, [(0, 1, 4.0), (1, 0, 4.0)]).unwrap();
        assert_eq!(default_flow_tolerance(&ints), 0.0);
        let reals = WeightedDigraph::from_weighted_arcs(2, [(0, 1, 0.5), (1, 0, 0.5)]).unwrap();
        assert!((default_flow_tolerance::<f64>(&reals) - 0.5e-9).abs() < 1e-20);
    }

    proptest! {
        #[test]
        fn fast_census_matches_brute_force(g in arb_undirected(10)) {
            let fast = census_undirected(&g).unwrap();
            prop_assert_eq!(fast.counts, brute_census(&g));
            prop_assert_eq!(fast.total(), triad_total(g.node_count() as u64));
        }

        #[test]
        fn symmetric_digraph_census_collapses(g in arb_undirected(9)) {
            let u = census_undirected(&g).unwrap().counts;
            let d = census_directed(&g.direct()).unwrap().counts;
            for (class, count) in d.iter().enumerate() {
                match class + 1 {
                    1 => prop_assert_eq!(*count, u[0]),
                    3 => prop_assert_eq!(*count, u[1]),
                    11 => prop_assert_eq!(*count, u[2]),
                    16 => prop_assert_eq!(*count, u[3]),
                    _ => prop_assert_eq!(*count, 0),
                }
            }
        }

        #[test]
        fn intransitive_triples_double_two_edge_triads(g in arb_undirected(10)) {
            let u = census_undirected(&g).unwrap().counts;
            let t = count_intransitive_triples(&g.direct()).unwrap();
            prop_assert_eq!(t.intransitive_triples, 2 * u[2]);
        }

        #[test]
        fn flow_balance_reversal_invariant(
            n in 2usize..7,
            raw in proptest::collection::vec((0usize..7, 0usize..7, 0u32..5), 0..20),
        ) {
            let mut seen = std::collections::HashSet::new();
            let arcs: Vec<_> = raw
                .into_iter()
                .map(|(u, v, w)| (u % n, v % n, f64::from(w)))
                .filter(|&(u, v, _)| u != v && seen.insert((u, v)))
                .collect();
            let g = WeightedDigraph::from_weighted_arcs(n, arcs).unwrap();
            let fwd = flow_balance(&g, 0.0).unwrap();
            let rev = flow_balance(&g.reversed(), 0.0).unwrap();
            prop_assert_eq!(fwd == FlowBalance::Balanced, rev == FlowBalance::Balanced);
        }

        #[test]
        fn symmetric_weights_are_balanced(
            n in 2usize..7,
            raw in proptest::collection::vec((0usize..7, 0usize..7, 1u32..50), 0..20),
        ) {
            let mut seen = std::collections::HashSet::new();
            let mut arcs = Vec::new();
            for (u, v, w) in raw {
                let (u, v) = (u % n, v % n);
                if u != v && seen.insert((u.min(v), u.max(v))) {
                    let w = f64::from(w) / 10.0;
                    arcs.push((u, v, w));
                    arcs.push((v, u, w));
                }
            }
            let g = WeightedDigraph::from_weighted_arcs(n, arcs).unwrap();
            let tol = default_flow_tolerance(&g);
            prop_assert_eq!(flow_balance(&g, tol).unwrap(), FlowBalance::Balanced);
        }
    }
}
