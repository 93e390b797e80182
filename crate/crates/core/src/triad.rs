//! Triad isomorphism classes and the four friendship mottoes.
//!
//! A 3-node digraph is encoded as a 6-bit mask, one bit per ordered pair of
//! its nodes (see [`arc_bit`]). The 64 masks fall into 16 isomorphism
//! classes, numbered 1..=16 in the conventional M-A-N order
//! (003, 012, 102, 021D, 021U, 021C, 111D, 111U, 030T, 030C, 201, 120D,
//! 120U, 120C, 210, 300).
//!
//! The mottoes, for an ordered triple `(x, y, z)` with arcs
//! `a = x->y`, `b = y->z` and `c = x->z`:
//!
//! | motto | hypothesis        | conclusion |
//! |-------|-------------------|------------|
//! | M1    | `a` and `b`       | `c`        |
//! | M2    | not `a`, not `b`  | `c`        |
//! | M3    | `a`, not `b`      | not `c`    |
//! | M4    | not `a`, `b`      | not `c`    |

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BitMatrix, Digraph, LoopDigraph, NodeId, UndirectedGraph};

/// All six permutations of three positions.
pub const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Bit position of the arc `i -> j` (`i != j`, both in `0..3`).
#[inline]
pub const fn arc_bit(i: usize, j: usize) -> u8 {
    match (i, j) {
        (0, 1) => 0,
        (1, 0) => 1,
        (0, 2) => 2,
        (2, 0) => 3,
        (1, 2) => 4,
        (2, 1) => 5,
        _ => panic!("arc_bit needs distinct positions below 3"),
    }
}

#[inline]
fn mask_has(mask: u8, i: usize, j: usize) -> bool {
    mask >> arc_bit(i, j) & 1 == 1
}

/// Mask of the triad induced on `(a, b, c)` in `d`, nodes mapped to 0, 1, 2.
#[inline]
pub fn triad_mask(d: &Digraph, nodes: [usize; 3]) -> u8 {
    let mut mask = 0;
    for i in 0..3 {
        for j in 0..3 {
            if i != j && d.has_arc(nodes[i], nodes[j]) {
                mask |= 1 << arc_bit(i, j);
            }
        }
    }
    mask
}

/// Mask after relabelling position `i` as `perm[i]`.
pub fn permute_mask(mask: u8, perm: [usize; 3]) -> u8 {
    let mut out = 0;
    for i in 0..3 {
        for j in 0..3 {
            if i != j && mask_has(mask, i, j) {
                out |= 1 << arc_bit(perm[i], perm[j]);
            }
        }
    }
    out
}

fn mask_of_arcs(arcs: &[(usize, usize)]) -> u8 {
    arcs.iter().fold(0, |m, &(i, j)| m | 1 << arc_bit(i, j))
}

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;

/// Representative arcs for classes 1..=16 on nodes A=0, B=1, C=2.
const REPRESENTATIVES: [(&str, &[(usize, usize)]); 16] = [
    ("003", &[]),
    ("012", &[(A, B)]),
    ("102", &[(A, B), (B, A)]),
    ("021D", &[(B, A), (B, C)]),
    ("021U", &[(A, B), (C, B)]),
    ("021C", &[(A, B), (B, C)]),
    ("111D", &[(A, B), (B, A), (C, B)]),
    ("111U", &[(A, B), (B, A), (B, C)]),
    ("030T", &[(A, B), (B, C), (A, C)]),
    ("030C", &[(A, B), (B, C), (C, A)]),
    ("201", &[(A, B), (B, A), (A, C), (C, A)]),
    ("120D", &[(A, C), (C, A), (B, A), (B, C)]),
    ("120U", &[(A, C), (C, A), (A, B), (C, B)]),
    ("120C", &[(A, C), (C, A), (A, B), (B, C)]),
    ("210", &[(A, B), (B, A), (B, C), (C, B), (A, C)]),
    ("300", &[(A, B), (B, A), (A, C), (C, A), (B, C), (C, B)]),
];

fn class_table() -> &'static [u8; 64] {
    static TABLE: OnceLock<[u8; 64]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0u8; 64];
        for (c, (_, arcs)) in REPRESENTATIVES.iter().enumerate() {
            let rep = mask_of_arcs(arcs);
            for perm in PERMUTATIONS {
                let m = permute_mask(rep, perm) as usize;
                assert!(
                    table[m] == 0 || table[m] == c as u8 + 1,
                    "representatives {} and {} are isomorphic",
                    table[m],
                    c + 1
                );
                table[m] = c as u8 + 1;
            }
        }
        assert!(
            table.iter().all(|&c| c != 0),
            "representatives miss a class"
        );
        table
    })
}

/// Isomorphism class of a directed triad, 1..=16.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriadClassD(u8);

impl TriadClassD {
    pub const COUNT: usize = 16;

    pub fn new(index: usize) -> Option<Self> {
        (1..=16)
            .contains(&index)
            .then_some(TriadClassD(index as u8))
    }

    pub fn all() -> impl Iterator<Item = TriadClassD> {
        (1..=16).map(TriadClassD)
    }

    #[inline]
    pub fn from_mask(mask: u8) -> Self {
        TriadClassD(class_table()[mask as usize & 63])
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// M-A-N code such as `"111D"`.
    pub fn code(self) -> &'static str {
        REPRESENTATIVES[self.index() - 1].0
    }

    pub fn canonical_mask(self) -> u8 {
        mask_of_arcs(REPRESENTATIVES[self.index() - 1].1)
    }

    pub fn canonical_rep(self) -> Digraph {
        Digraph::from_arcs(3, REPRESENTATIVES[self.index() - 1].1.iter().copied())
            .expect("representative arcs are valid")
    }

    /// Number of labelled triads in the class.
    pub fn class_size(self) -> usize {
        class_table().iter().filter(|&&c| c == self.0).count()
    }

    pub fn arc_count(self) -> u32 {
        self.canonical_mask().count_ones()
    }
}

impl fmt::Display for TriadClassD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.code())
    }
}

/// Undirected triad class, determined by its edge count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriadClassU {
    Empty,
    OneEdge,
    Intransitive,
    Triangle,
}

impl TriadClassU {
    pub const ALL: [TriadClassU; 4] = [
        TriadClassU::Empty,
        TriadClassU::OneEdge,
        TriadClassU::Intransitive,
        TriadClassU::Triangle,
    ];

    pub fn from_edge_count(edges: usize) -> Option<Self> {
        Self::ALL.get(edges).copied()
    }

    pub fn edge_count(self) -> usize {
        self as usize
    }

    /// `"0-edge"` through `"3-edge"`.
    pub fn label(self) -> &'static str {
        ["0-edge", "1-edge", "2-edge", "3-edge"][self as usize]
    }
}

pub fn classify_directed_triad(t: &Digraph) -> Result<TriadClassD> {
    if t.node_count() != 3 {
        return Err(Error::NotATriad(t.node_count()));
    }
    Ok(TriadClassD::from_mask(triad_mask(t, [0, 1, 2])))
}

pub fn classify_undirected_triad(t: &UndirectedGraph) -> Result<TriadClassU> {
    if t.node_count() != 3 {
        return Err(Error::NotATriad(t.node_count()));
    }
    Ok(TriadClassU::from_edge_count(t.edge_count()).expect("3 nodes carry at most 3 edges"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Motto {
    M1,
    M2,
    M3,
    M4,
}

impl Motto {
    pub const ALL: [Motto; 4] = [Motto::M1, Motto::M2, Motto::M3, Motto::M4];

    /// `(x->y, y->z, x->z)` pattern that violates the motto.
    #[inline]
    pub const fn violation(self) -> (bool, bool, bool) {
        match self {
            Motto::M1 => (true, true, false),
            Motto::M2 => (false, false, false),
            Motto::M3 => (true, false, true),
            Motto::M4 => (false, true, true),
        }
    }

    #[inline]
    pub fn fails(self, xy: bool, yz: bool, xz: bool) -> bool {
        self.violation() == (xy, yz, xz)
    }
}

impl fmt::Display for Motto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Ordered triples `(x, y, z)` of distinct triad positions violating `motto`.
pub fn motto_violations_in_mask(mask: u8, motto: Motto) -> impl Iterator<Item = [usize; 3]> {
    PERMUTATIONS.into_iter().filter(move |&[x, y, z]| {
        motto.fails(
            mask_has(mask, x, y),
            mask_has(mask, y, z),
            mask_has(mask, x, z),
        )
    })
}

pub fn motto_holds_for_mask(mask: u8, motto: Motto) -> bool {
    motto_violations_in_mask(mask, motto).next().is_none()
}

/// Whether `motto` holds for every ordered triple of distinct nodes of `t`.
pub fn motto_holds(t: &Digraph, motto: Motto) -> Result<bool> {
    if t.node_count() != 3 {
        return Err(Error::NotATriad(t.node_count()));
    }
    Ok(motto_holds_for_mask(triad_mask(t, [0, 1, 2]), motto))
}

/// Which mottoes hold for one triad class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MottoProfile {
    pub m1: bool,
    pub m2: bool,
    pub m3: bool,
    pub m4: bool,
}

impl MottoProfile {
    pub fn of_mask(mask: u8) -> Self {
        let [m1, m2, m3, m4] = Motto::ALL.map(|m| motto_holds_for_mask(mask, m));
        MottoProfile { m1, m2, m3, m4 }
    }

    pub fn as_array(self) -> [bool; 4] {
        [self.m1, self.m2, self.m3, self.m4]
    }

    pub fn all_hold(self) -> bool {
        self.as_array().iter().all(|&b| b)
    }
}

/// Profiles of classes 1..=16, evaluated on the canonical representatives.
pub fn motto_table() -> [(TriadClassD, MottoProfile); 16] {
    std::array::from_fn(|i| {
        let class = TriadClassD(i as u8 + 1);
        let profile = MottoProfile::of_mask(triad_mask(&class.canonical_rep(), [0, 1, 2]));
        (class, profile)
    })
}

/// All four mottoes hold.
pub fn is_balanced_triad(t: &Digraph) -> Result<bool> {
    if t.node_count() != 3 {
        return Err(Error::NotATriad(t.node_count()));
    }
    Ok(MottoProfile::of_mask(triad_mask(t, [0, 1, 2])).all_hold())
}

/// Row-major view of a loop digraph as out- and in-neighbour bitsets.
struct TripleScanner<'a> {
    n: usize,
    out: &'a BitMatrix,
    inc: BitMatrix,
    tail_mask: u64,
}

impl<'a> TripleScanner<'a> {
    fn new(out: &'a BitMatrix, n: usize) -> Self {
        let tail_mask = match n % 64 {
            0 => u64::MAX,
            r => (1u64 << r) - 1,
        };
        TripleScanner {
            n,
            out,
            inc: out.transpose(),
            tail_mask,
        }
    }

    /// Number of `y` with `x->y == xy` and `y->z == yz`, loops and
    /// coincidences included.
    fn middle_count(&self, x: usize, z: usize, xy: bool, yz: bool) -> u64 {
        let (row, col) = (self.out.row(x), self.inc.row(z));
        let words = self.out.words();
        let mut total = 0u64;
        for w in 0..words {
            let a = if xy { row[w] } else { !row[w] };
            let b = if yz { col[w] } else { !col[w] };
            let mut both = a & b;
            if w + 1 == words {
                both &= self.tail_mask;
            }
            total += u64::from(both.count_ones());
        }
        total
    }

    fn failures(&self, motto: Motto, distinct: bool) -> u64 {
        let (xy, yz, xz) = motto.violation();
        let out = self.out;
        let mut total = 0;
        for x in 0..self.n {
            for z in 0..self.n {
                if distinct && x == z {
                    continue;
                }
                if out.get(x, z) != xz {
                    continue;
                }
                let mut count = self.middle_count(x, z, xy, yz);
                if distinct {
                    if out.get(x, x) == xy && out.get(x, z) == yz {
                        count -= 1;
                    }
                    if out.get(x, z) == xy && out.get(z, z) == yz {
                        count -= 1;
                    }
                }
                total += count;
            }
        }
        total
    }

    fn first_violation(&self, motto: Motto) -> Option<[usize; 3]> {
        let (xy, yz, xz) = motto.violation();
        (0..self.n)
            .flat_map(|x| (0..self.n).map(move |z| (x, z)))
            .filter(|&(x, z)| self.out.get(x, z) == xz)
            .find_map(|(x, z)| {
                (0..self.n)
                    .find(|&y| self.out.get(x, y) == xy && self.out.get(y, z) == yz)
                    .map(|y| [x, y, z])
            })
    }
}

/// Violations of M1'..M4' over all `n^3` ordered triples, repeats allowed.
pub fn motto_prime_failures(g: &LoopDigraph) -> [u64; 4] {
    let scanner = TripleScanner::new(g.matrix(), g.node_count());
    Motto::ALL.map(|m| scanner.failures(m, false))
}

/// Violations of M1..M4 over ordered triples of distinct nodes; loops are
/// ignored.
pub fn motto_failures_distinct(g: &LoopDigraph) -> [u64; 4] {
    let scanner = TripleScanner::new(g.matrix(), g.node_count());
    Motto::ALL.map(|m| scanner.failures(m, true))
}

/// Outcome of checking M1'..M4' on a loop digraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopBalance {
    NotBalanced {
        motto: Motto,
        triple: [NodeId; 3],
    },
    /// The arc relation is an equivalence relation with these classes.
    Equivalence {
        classes: Vec<Vec<NodeId>>,
    },
}

pub fn balanced_loop_digraph_structure(g: &LoopDigraph) -> LoopBalance {
    let scanner = TripleScanner::new(g.matrix(), g.node_count());
    for motto in Motto::ALL {
        if let Some(triple) = scanner.first_violation(motto) {
            return LoopBalance::NotBalanced {
                motto,
                triple: triple.map(NodeId::from_index),
            };
        }
    }
    let n = g.node_count();
    let mut assigned = vec![false; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if assigned[x] {
            continue;
        }
        let class: Vec<usize> = g.matrix().ones(x).collect();
        for &y in &class {
            assigned[y] = true;
        }
        classes.push(class.into_iter().map(NodeId::from_index).collect());
    }
    debug_assert!(classes.len() <= 2);
    LoopBalance::Equivalence { classes }
}
