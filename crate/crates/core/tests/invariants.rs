use proptest::prelude::*;

use triadic::generators::{sample_constellation, ConstellationParams};
use triadic::rng::sample_rng;
use triadic::triad::{
    is_balanced_triad, motto_failures_distinct, motto_prime_failures, Motto, TriadClassU,
};
use triadic::{
    classify_directed_triad, classify_undirected_triad, Digraph, InducedTriad, LoopDigraph, NodeId,
    UndirectedGraph,
};

const SLOTS: [(usize, usize); 6] = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)];
const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn triad(mask: u8) -> Digraph {
    Digraph::from_arcs(
        3,
        SLOTS
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, a)| *a),
    )
    .unwrap()
}

#[test]
fn classification_is_permutation_invariant() {
    for mask in 0u8..64 {
        let t = triad(mask);
        let class = classify_directed_triad(&t).unwrap();
        for perm in PERMS {
            assert_eq!(
                classify_directed_triad(&t.permuted(&perm)).unwrap(),
                class,
                "mask {mask:06b}"
            );
        }
    }
}

#[test]
fn balanced_triads_are_symmetric_with_one_or_three_edges() {
    let mut balanced = 0;
    for mask in 0u8..64 {
        let t = triad(mask);
        if is_balanced_triad(&t).unwrap() {
            balanced += 1;
            assert!(t.is_symmetric(), "mask {mask:06b}");
            let u = t.symmetrize().unwrap();
            assert!(matches!(
                classify_undirected_triad(&u).unwrap(),
                TriadClassU::OneEdge | TriadClassU::Triangle
            ));
        }
    }
    // 3 one-edge graphs and 1 triangle.
    assert_eq!(balanced, 4);
}

/// M1-M4 failures over ordered triples of distinct nodes, read straight
/// from the motto statements.
fn distinct_failures(g: &LoopDigraph) -> [u64; 4] {
    let n = g.node_count();
    let mut out = [0u64; 4];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if x == y || y == z || x == z {
                    continue;
                }
                let (xy, yz, xz) = (g.has_arc(x, y), g.has_arc(y, z), g.has_arc(x, z));
                let holds = [
                    !(xy && yz) || xz,
                    xy || yz || xz,
                    !(xy && !yz) || !xz,
                    !(!xy && yz) || !xz,
                ];
                for (o, h) in out.iter_mut().zip(holds) {
                    *o += u64::from(!h);
                }
            }
        }
    }
    out
}

fn arb_loop_digraph() -> impl Strategy<Value = LoopDigraph> {
    (1usize..70).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let arcs = bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| (i / n, i % n));
            LoopDigraph::from_arcs(n, arcs).unwrap()
        })
    })
}

fn arb_undirected(max_n: usize) -> impl Strategy<Value = UndirectedGraph> {
    (3usize..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            UndirectedGraph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e))
                .unwrap()
        })
    })
}

fn arb_digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (3usize..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let arcs = bits
                .iter()
                .enumerate()
                .filter(|&(i, &b)| b && i / n != i % n)
                .map(|(i, _)| (i / n, i % n));
            Digraph::from_arcs(n, arcs).unwrap()
        })
    })
}

fn arb_triple_and_perm(n: usize) -> impl Strategy<Value = ([usize; 3], Vec<usize>)> {
    (
        proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 3).prop_shuffle(),
        Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
    )
        .prop_map(|(t, p)| ([t[0], t[1], t[2]], p))
}

proptest! {
    #[test]
    fn distinct_triple_failures_match_motto_statements(g in arb_loop_digraph()) {
        prop_assert_eq!(motto_failures_distinct(&g), distinct_failures(&g));
    }

    #[test]
    fn loop_free_failures_include_distinct_ones(g in arb_loop_digraph()) {
        let all = motto_prime_failures(&g);
        let distinct = motto_failures_distinct(&g);
        for m in 0..4 {
            prop_assert!(all[m] >= distinct[m], "{:?}", Motto::ALL[m]);
        }
    }

    #[test]
    fn symmetrize_inverts_direct(g in arb_undirected(15)) {
        prop_assert_eq!(g.direct().symmetrize().unwrap(), g);
    }

    #[test]
    fn induced_triad_commutes_with_relabeling(
        (g, (t, perm)) in arb_digraph(9).prop_flat_map(|g| {
            let n = g.node_count();
            (Just(g), arb_triple_and_perm(n))
        })
    ) {
        // `permuted(perm)` sends node v to perm[v].
        let ids = |t: [usize; 3]| t.map(NodeId::from_index);
        let before = g.induced_triad(ids(t)).unwrap();
        let after = g.permuted(&perm).induced_triad(ids(t.map(|v| perm[v]))).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn undirected_induced_triad_commutes_with_relabeling(
        (g, (t, perm)) in arb_undirected(9).prop_flat_map(|g| {
            let n = g.node_count();
            (Just(g), arb_triple_and_perm(n))
        })
    ) {
        let ids = |t: [usize; 3]| t.map(NodeId::from_index);
        let before = g.induced_triad(ids(t)).unwrap();
        let after = g.permuted(&perm).induced_triad(ids(t.map(|v| perm[v]))).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn constellations_keep_their_stars(k in 1usize..4, n in 2usize..12, delta in 0.0f64..=1.0, seed: u64) {
        let params = ConstellationParams::new(k, n, delta).unwrap();
        let g = sample_constellation(&params, &mut sample_rng(seed, 0));
        for c in 0..k {
            prop_assert!(g.degree(c * n) >= n - 1);
        }
        for (u, v) in g.edges() {
            prop_assert_eq!(u / n, v / n, "edge {}-{} crosses components", u, v);
        }
    }
}
