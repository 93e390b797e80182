//! Erdős–Rényi null models and their closed-form expected counts.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Digraph, LoopDigraph, UndirectedGraph};
use crate::scalar::{binomial_in, one_minus, Scalar};
use crate::triad::{Motto, TriadClassD};

/// Node count and independent edge probability.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErParams<T> {
    pub n: usize,
    pub p: T,
}

impl<T: Scalar> ErParams<T> {
    pub fn new(n: usize, p: T) -> Result<Self> {
        if !p.is_probability() {
            return Err(Error::InvalidParameter(format!(
                "edge probability {p:?} outside [0, 1]"
            )));
        }
        Ok(ErParams { n, p })
    }

    fn matched(n: usize, edges: u64, slots: u64) -> Result<Self> {
        if slots == 0 {
            return Err(Error::InvalidParameter(format!(
                "no edge slots on {n} nodes"
            )));
        }
        if edges > slots {
            return Err(Error::InvalidParameter(format!(
                "{edges} edges exceed the {slots} available slots"
            )));
        }
        ErParams::new(n, T::ratio(edges, slots))
    }

    /// Undirected density `2e / (n(n-1))`.
    pub fn matched_undirected(n: usize, edges: u64) -> Result<Self> {
        let n64 = n as u64;
        Self::matched(n, edges, n64 * n64.saturating_sub(1) / 2)
    }

    /// Directed density `e / (n(n-1))`.
    pub fn matched_directed(n: usize, edges: u64) -> Result<Self> {
        let n64 = n as u64;
        Self::matched(n, edges, n64 * n64.saturating_sub(1))
    }

    /// Loop-digraph density `e / n^2`.
    pub fn matched_loop(n: usize, edges: u64) -> Result<Self> {
        let n64 = n as u64;
        Self::matched(n, edges, n64 * n64)
    }

    pub fn p_f64(&self) -> f64 {
        self.p.as_f64()
    }

    pub fn is_degenerate(&self) -> bool {
        self.p == T::zero() || self.p == T::one()
    }
}

pub fn sample_er_undirected<T: Scalar, R: Rng + ?Sized>(
    params: &ErParams<T>,
    rng: &mut R,
) -> UndirectedGraph {
    let (n, p) = (params.n, params.p_f64());
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    UndirectedGraph::from_edges(n, edges).expect("sampled pairs are distinct")
}

pub fn sample_er_directed<T: Scalar, R: Rng + ?Sized>(
    params: &ErParams<T>,
    rng: &mut R,
) -> Digraph {
    let (n, p) = (params.n, params.p_f64());
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    Digraph::from_arcs(n, arcs).expect("sampled arcs are distinct")
}

/// Draws each of the `n^2` arcs, loops included.
pub fn sample_er_loop<T: Scalar, R: Rng + ?Sized>(
    params: &ErParams<T>,
    rng: &mut R,
) -> LoopDigraph {
    let (n, p) = (params.n, params.p_f64());
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if rng.random_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    LoopDigraph::from_arcs(n, arcs).expect("sampled arcs are distinct")
}

/// Expected number of 0-, 1-, 2- and 3-edge triads in `G(n, p)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpectationVectorU<T> {
    pub n: usize,
    pub p: T,
    pub expected: [T; 4],
}

impl<T: Scalar> ExpectationVectorU<T> {
    /// `[(1-p)^3, 3p(1-p)^2, 3p^2(1-p), p^3]`.
    pub fn proportions(p: &T) -> [T; 4] {
        let q = one_minus(p);
        let three = T::from_count(3);
        [
            q.powi(3),
            three.clone() * p.clone() * q.powi(2),
            three * p.powi(2) * q.clone(),
            p.powi(3),
        ]
    }

    pub fn total(&self) -> T {
        self.expected.iter().cloned().fold(T::zero(), |a, b| a + b)
    }
}

pub fn expected_census_undirected<T: Scalar>(params: &ErParams<T>) -> ExpectationVectorU<T> {
    let triads: T = binomial_in(params.n as u64, 3);
    ExpectationVectorU {
        n: params.n,
        p: params.p.clone(),
        expected: ExpectationVectorU::proportions(&params.p).map(|e| triads.clone() * e),
    }
}

/// Expected class counts in the directed `G(n, p)`; `expected[c - 1]` is
/// class `c`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpectationVectorD<T> {
    pub n: usize,
    pub p: T,
    pub expected: [T; 16],
}

impl<T: Scalar> ExpectationVectorD<T> {
    pub fn get(&self, class: TriadClassD) -> &T {
        &self.expected[class.index() - 1]
    }

    pub fn total(&self) -> T {
        self.expected.iter().cloned().fold(T::zero(), |a, b| a + b)
    }
}

/// `C(n,3) * size(c) * p^d (1-p)^(6-d)` for each class `c` with `d` arcs.
pub fn expected_census_directed<T: Scalar>(params: &ErParams<T>) -> ExpectationVectorD<T> {
    let triads: T = binomial_in(params.n as u64, 3);
    let q = one_minus(&params.p);
    let mut expected: [T; 16] = std::array::from_fn(|_| T::zero());
    for class in TriadClassD::all() {
        let d = class.arc_count();
        expected[class.index() - 1] = triads.clone()
            * T::from_count(class.class_size() as u64)
            * params.p.powi(d)
            * q.powi(6 - d);
    }
    ExpectationVectorD {
        n: params.n,
        p: params.p.clone(),
        expected,
    }
}

/// `n(n-1)(n-2) p^2 (1-p)`.
pub fn expected_intransitive_triples<T: Scalar>(params: &ErParams<T>) -> T {
    let n = params.n as u64;
    if n < 3 {
        return T::zero();
    }
    T::from_count(n * (n - 1) * (n - 2)) * params.p.powi(2) * one_minus(&params.p)
}

/// Coincidence pattern of an ordered triple `(x, y, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriplePattern {
    Distinct,
    XEqualsY,
    YEqualsZ,
    XEqualsZ,
    AllEqual,
}

impl TriplePattern {
    pub const ALL: [TriplePattern; 5] = [
        TriplePattern::Distinct,
        TriplePattern::XEqualsY,
        TriplePattern::YEqualsZ,
        TriplePattern::XEqualsZ,
        TriplePattern::AllEqual,
    ];

    pub fn count(self, n: u64) -> u64 {
        match self {
            TriplePattern::Distinct => n * n.saturating_sub(1) * n.saturating_sub(2),
            TriplePattern::XEqualsY | TriplePattern::YEqualsZ | TriplePattern::XEqualsZ => {
                n * n.saturating_sub(1)
            }
            TriplePattern::AllEqual => n,
        }
    }

    /// Which of the arcs `x->y`, `y->z`, `x->z` are the same arc: equal
    /// labels denote the same arc.
    fn arc_labels(self) -> [u8; 3] {
        match self {
            TriplePattern::Distinct | TriplePattern::XEqualsZ => [0, 1, 2],
            // x->x, x->z, x->z
            TriplePattern::XEqualsY => [0, 1, 1],
            // x->y, y->y, x->y
            TriplePattern::YEqualsZ => [0, 1, 0],
            TriplePattern::AllEqual => [0, 0, 0],
        }
    }

    /// Probability that a triple of this pattern violates `motto` when
    /// every arc is present independently with probability `p`.
    pub fn failure_probability<T: Scalar>(self, motto: Motto, p: &T) -> T {
        let (a, b, c) = motto.violation();
        let required = [a, b, c];
        let labels = self.arc_labels();
        let mut assigned: [Option<bool>; 3] = [None; 3];
        for (label, want) in labels.into_iter().zip(required) {
            match assigned[label as usize] {
                Some(have) if have != want => return T::zero(),
                _ => assigned[label as usize] = Some(want),
            }
        }
        assigned
            .into_iter()
            .flatten()
            .fold(T::one(), |acc, present| {
                acc * if present { p.clone() } else { one_minus(p) }
            })
    }
}

/// Expected M1'..M4' violations in a random loop digraph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MottoPrimeExpectation<T> {
    /// Leading-order values `n^3 p^2 (1-p)` (M1', M3', M4') and
    /// `n^3 (1-p)^3` (M2'), exact only for distinct-node triples.
    pub leading_order: [T; 4],
    /// Exact expectation summed over coincidence patterns.
    pub exact: [T; 4],
    /// Per-pattern contributions to `exact`.
    pub by_pattern: Vec<(TriplePattern, [T; 4])>,
}

pub fn expected_motto_prime_failures<T: Scalar>(params: &ErParams<T>) -> MottoPrimeExpectation<T> {
    let n = params.n as u64;
    let p = &params.p;
    let cube = T::from_count(n).powi(3);
    let q = one_minus(p);
    let generic = cube.clone() * p.powi(2) * q.clone();
    let leading_order = [generic.clone(), cube * q.powi(3), generic.clone(), generic];

    let by_pattern: Vec<(TriplePattern, [T; 4])> = TriplePattern::ALL
        .into_iter()
        .map(|pattern| {
            let count = T::from_count(pattern.count(n));
            let row = Motto::ALL.map(|m| count.clone() * pattern.failure_probability(m, p));
            (pattern, row)
        })
        .collect();
    let exact = std::array::from_fn(|m| {
        by_pattern
            .iter()
            .fold(T::zero(), |acc, (_, row)| acc + row[m].clone())
    });
    MottoPrimeExpectation {
        leading_order,
        exact,
        by_pattern,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{census_directed, census_undirected, count_intransitive_triples};
    use crate::rng::{monte_carlo, sample_rng, SampleSummary};
    use crate::scalar::binomial;
    use crate::triad::motto_prime_failures;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn rejects_bad_probability() {
        assert!(ErParams::new(5, 1.5).is_err());
        assert!(ErParams::new(5, -0.1).is_err());
        assert!(ErParams::<f64>::matched_undirected(1, 0).is_err());
        assert!(ErParams::<f64>::matched_undirected(4, 7).is_err());
    }

    #[test]
    fn degenerate_samples() {
        let mut rng = sample_rng(1, 0);
        let g = sample_er_undirected(&ErParams::new(6, 0.0).unwrap(), &mut rng);
        assert_eq!(g.edge_count(), 0);
        let g = sample_er_undirected(&ErParams::new(6, 1.0).unwrap(), &mut rng);
        assert_eq!(g, UndirectedGraph::complete(6));
        let d = sample_er_directed(&ErParams::new(5, 1.0).unwrap(), &mut rng);
        assert_eq!(d, Digraph::complete(5));
        assert_eq!(
            sample_er_directed(&ErParams::new(5, 0.0).unwrap(), &mut rng).arc_count(),
            0
        );
        let l = sample_er_loop(&ErParams::new(4, 1.0).unwrap(), &mut rng);
        assert_eq!(l, LoopDigraph::complete(4));
        assert_eq!(
            sample_er_loop(&ErParams::new(4, 0.0).unwrap(), &mut rng).arc_count(),
            0
        );
    }

    #[test]
    fn undirected_expectations_karate_density() {
        let params = ErParams::<f64>::matched_undirected(34, 78).unwrap();
        let e = expected_census_undirected(&params).expected;
        for (got, want) in e.iter().zip([3818.95, 1850.18, 298.79, 16.08]) {
            assert!((got - want).abs() <= 0.01, "{got} vs {want}");
        }
        let exact = expected_census_undirected(&ErParams::<Q>::matched_undirected(34, 78).unwrap());
        assert_eq!(exact.total(), Q::from_count(5984));
        let zero = expected_census_undirected(&ErParams::new(10, 0.0).unwrap());
        assert_eq!(zero.expected, [120.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn proportions_sum_to_one_on_grid() {
        for i in 0..100u64 {
            let p = Q::ratio(i, 99);
            let sum = ExpectationVectorU::proportions(&p)
                .into_iter()
                .fold(Q::from_count(0), |a, b| a + b);
            assert_eq!(sum, Q::from_count(1));
            let pf = i as f64 / 99.0;
            let sumf: f64 = ExpectationVectorU::proportions(&pf).iter().sum();
            assert!((sumf - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn directed_expectations() {
        let params = ErParams::<f64>::matched_undirected(34, 78).unwrap();
        let d = expected_census_directed(&params);
        assert!((d.expected[2] - 190.68).abs() <= 0.01);
        assert!((d.expected[15] - 0.04).abs() <= 0.01);
        let full = expected_census_directed(&ErParams::new(7, 1.0).unwrap());
        assert_eq!(full.expected[15], 35.0);
        for (n, num, den) in [(5u64, 1u64, 3u64), (12, 2, 7), (40, 5, 11)] {
            let e = expected_census_directed(
                &ErParams::<Q>::new(n as usize, Q::ratio(num, den)).unwrap(),
            );
            assert_eq!(e.total(), Q::from_count(binomial(n, 3)));
        }
    }

    #[test]
    fn intransitive_expectation() {
        let half = ErParams::new(3, 0.5).unwrap();
        assert_eq!(expected_intransitive_triples(&half), 0.75);
        assert_eq!(
            expected_intransitive_triples(&ErParams::new(9, 1.0).unwrap()),
            0.0
        );
    }

    fn q(num: u64, den: u64) -> Q {
        Q::ratio(num, den)
    }

    #[test]
    fn motto_prime_closed_forms() {
        // Hand-summed patterns: M1' = n(n-1)^2 p^2 q; M3' = M4' = that plus
        // n(n-1) p q; M2' = n(n-1)^2 q^3 + 2n(n-1) q^2 + n q.
        for (n, p) in [(1u64, q(1, 3)), (4, q(2, 5)), (9, q(1, 2))] {
            let e =
                expected_motto_prime_failures(&ErParams::<Q>::new(n as usize, p.clone()).unwrap());
            let qq = Q::from_count(1) - p.clone();
            let nn = Q::from_count(n);
            let n1 = Q::from_count(n - 1);
            let m1 = nn.clone() * n1.clone() * n1.clone() * p.clone() * p.clone() * qq.clone();
            let m3 = m1.clone() + nn.clone() * n1.clone() * p.clone() * qq.clone();
            let m2 = nn.clone() * n1.clone() * n1.clone() * Scalar::powi(&qq, 3)
                + Q::from_count(2) * nn.clone() * n1 * Scalar::powi(&qq, 2)
                + nn * qq;
            assert_eq!(e.exact, [m1, m2, m3.clone(), m3]);
        }
        let all_equal = TriplePattern::AllEqual;
        assert_eq!(all_equal.failure_probability(Motto::M1, &0.3), 0.0);
        let e = expected_motto_prime_failures(&ErParams::<f64>::new(10, 0.2).unwrap());
        assert!((e.leading_order[0] - 1000.0 * 0.04 * 0.8).abs() < 1e-9);
    }

    #[test]
    fn motto_prime_exact_matches_all_loop_digraphs_n2() {
        // All 2^4 loop digraphs on two nodes are equally likely at p = 1/2.
        let mut sums = [0u64; 4];
        for bits in 0u8..16 {
            let arcs = [(0, 0), (0, 1), (1, 0), (1, 1)]
                .into_iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, a)| a);
            let g = LoopDigraph::from_arcs(2, arcs).unwrap();
            for (s, f) in sums.iter_mut().zip(motto_prime_failures(&g)) {
                *s += f;
            }
        }
        let e = expected_motto_prime_failures(&ErParams::<Q>::new(2, q(1, 2)).unwrap());
        assert_eq!(e.exact, sums.map(|s| q(s, 16)));
    }

    #[test]
    fn leading_order_close_to_exact_at_n50() {
        let e = expected_motto_prime_failures(&ErParams::<f64>::new(50, 0.2).unwrap());
        for (lead, exact) in e.leading_order.iter().zip(&e.exact) {
            assert!((lead - exact).abs() / exact <= 5.0 / 50.0);
        }
    }

    fn within_three_se(values: &[Vec<f64>], expected: &[f64]) {
        for (k, want) in expected.iter().enumerate() {
            let s = SampleSummary::new(values.iter().map(|v| v[k]));
            let z = s.z_score(*want);
            assert!(
                z.abs() <= 3.0,
                "class {k}: mean {} vs {want}, z = {z}",
                s.mean
            );
        }
    }

    #[test]
    fn directed_monte_carlo_consistency() {
        let params = ErParams::new(20, 0.15).unwrap();
        let runs = monte_carlo(10_000, 20_150, |rng| {
            let d = sample_er_directed(&params, rng);
            let mut row: Vec<f64> = census_directed(&d)
                .unwrap()
                .counts
                .iter()
                .map(|&c| c as f64)
                .collect();
            row.push(count_intransitive_triples(&d).unwrap().intransitive_triples as f64);
            row
        });
        let mut expected = expected_census_directed(&params).expected.to_vec();
        expected.push(expected_intransitive_triples(&params));
        within_three_se(&runs, &expected);
    }

    #[test]
    fn undirected_monte_carlo_edge_count() {
        let params = ErParams::<f64>::matched_undirected(34, 78).unwrap();
        let edges = monte_carlo(10_000, 34, |rng| {
            sample_er_undirected(&params, rng).edge_count() as f64
        });
        let s = SampleSummary::new(edges);
        let sigma = (561.0 * params.p * (1.0 - params.p)).sqrt();
        assert!((s.mean - 78.0).abs() <= 3.0 * sigma);
        assert!(s.z_score(78.0).abs() <= 3.0);
    }

    #[test]
    fn undirected_monte_carlo_census() {
        let params = ErParams::<f64>::matched_undirected(34, 78).unwrap();
        let runs = monte_carlo(10_000, 78, |rng| {
            census_undirected(&sample_er_undirected(&params, rng))
                .unwrap()
                .counts
                .iter()
                .map(|&c| c as f64)
                .collect::<Vec<_>>()
        });
        within_three_se(&runs, &expected_census_undirected(&params).expected);
    }
}
