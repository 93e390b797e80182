//! Balance and transitivity hypotheses against density-matched null models.
//!
//! The balance hypothesis (GBH) predicts that in an undirected network
//! triads with 1 or 3 edges are over-represented, and triads with 0 or 2
//! edges under-represented, relative to `G(n, p)` with `p = 2e/(n(n-1))`.
//! The transitivity hypothesis (GTH) predicts that a digraph has fewer
//! ordered triples violating M1 than the directed `G(n, p)` with
//! `p = e/(n(n-1))`. Significance is reported as the empirical quantile of
//! the observed count among Monte Carlo null samples.

use num_rational::BigRational;
use serde::Serialize;

use crate::census::{census_undirected, count_intransitive_triples, CensusU};
use crate::error::{Error, Result};
use crate::graph::{Digraph, NodeId, UndirectedGraph};
use crate::karate::{faction, karate_club, HUBS};
use crate::null_model::{
    expected_census_directed, expected_census_undirected, expected_intransitive_triples,
    sample_er_directed, sample_er_undirected, ErParams,
};
use crate::rng::{monte_carlo, SampleSummary};
use crate::scalar::{binomial, Scalar};
use crate::triad::TriadClassU;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    Gbh,
    Gth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Over,
    Under,
    Exact,
}

impl Direction {
    pub fn compare(observed: u64, expected: f64) -> Direction {
        let o = observed as f64;
        if (o - expected).abs() <= 1e-9 * expected.abs().max(1.0) {
            Direction::Exact
        } else if o > expected {
            Direction::Over
        } else {
            Direction::Under
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub hypothesis: Hypothesis,
    pub n: usize,
    pub edges: usize,
    /// Density of the matched null model.
    pub p: f64,
    pub labels: Vec<String>,
    pub observed: Vec<u64>,
    pub expected: Vec<f64>,
    /// Direction the hypothesis predicts for each entry.
    pub predicted: Vec<Direction>,
    pub direction: Vec<Direction>,
    /// Whether each entry agrees with the prediction.
    pub verdict: Vec<bool>,
    pub passes: bool,
    /// `p` is 0 or 1, so the null model is deterministic.
    pub degenerate: bool,
    pub samples: usize,
    pub seed: Option<u64>,
    pub mc_mean: Option<Vec<f64>>,
    /// Fraction of null samples with a count `<=` the observed one.
    pub mc_quantile: Option<Vec<f64>>,
    pub warnings: Vec<String>,
}

fn degenerate_warning(p: f64) -> String {
    format!("matched density p = {p} is degenerate; the null model has no randomness")
}

/// Balance hypothesis for an undirected graph. `samples = 0` skips the
/// Monte Carlo step.
pub fn evaluate_gbh(g: &UndirectedGraph, samples: usize, seed: u64) -> Result<HypothesisReport> {
    let n = g.node_count();
    if n < 3 {
        return Err(Error::TooFewNodes { n, required: 3 });
    }
    let census = census_undirected(g)?;
    let exact = ErParams::<BigRational>::matched_undirected(n, g.edge_count() as u64)?;
    let expected: Vec<f64> = expected_census_undirected(&exact)
        .expected
        .iter()
        .map(Scalar::as_f64)
        .collect();
    let params = ErParams::new(n, exact.p.as_f64())?;

    let predicted = vec![
        Direction::Under,
        Direction::Over,
        Direction::Under,
        Direction::Over,
    ];
    let direction: Vec<Direction> = census
        .counts
        .iter()
        .zip(&expected)
        .map(|(&o, &e)| Direction::compare(o, e))
        .collect();
    let verdict: Vec<bool> = direction
        .iter()
        .zip(&predicted)
        .map(|(d, p)| d == p)
        .collect();

    let (mc_mean, mc_quantile) = if samples > 0 {
        let runs = monte_carlo(samples, seed, |rng| {
            census_undirected(&sample_er_undirected(&params, rng))
                .expect("n >= 3")
                .counts
        });
        let summaries: Vec<SampleSummary> = (0..4)
            .map(|i| SampleSummary::new(runs.iter().map(|c| c[i] as f64)))
            .collect();
        (
            Some(summaries.iter().map(|s| s.mean).collect()),
            Some(
                summaries
                    .iter()
                    .zip(census.counts)
                    .map(|(s, o)| s.quantile_of(o as f64))
                    .collect(),
            ),
        )
    } else {
        (None, None)
    };

    let degenerate = exact.is_degenerate();
    Ok(HypothesisReport {
        hypothesis: Hypothesis::Gbh,
        n,
        edges: g.edge_count(),
        p: params.p,
        labels: TriadClassU::ALL.map(|c| c.label().to_string()).to_vec(),
        observed: census.counts.to_vec(),
        expected,
        predicted,
        passes: verdict.iter().all(|&v| v),
        direction,
        verdict,
        degenerate,
        samples,
        seed: (samples > 0).then_some(seed),
        mc_mean,
        mc_quantile,
        warnings: if degenerate {
            vec![degenerate_warning(params.p)]
        } else {
            Vec::new()
        },
    })
}

/// Transitivity hypothesis for a digraph. Zero observed against zero
/// expected counts as a pass.
pub fn evaluate_gth(g: &Digraph, samples: usize, seed: u64) -> Result<HypothesisReport> {
    let n = g.node_count();
    if n < 3 {
        return Err(Error::TooFewNodes { n, required: 3 });
    }
    let observed = count_intransitive_triples(g)?.intransitive_triples;
    let exact = ErParams::<BigRational>::matched_directed(n, g.arc_count() as u64)?;
    let expected = expected_intransitive_triples(&exact).as_f64();
    let params = ErParams::new(n, exact.p.as_f64())?;

    let direction = Direction::compare(observed, expected);
    let verdict = direction == Direction::Under || (direction == Direction::Exact && observed == 0);

    let (mc_mean, mc_quantile) = if samples > 0 {
        let runs = monte_carlo(samples, seed, |rng| {
            count_intransitive_triples(&sample_er_directed(&params, rng))
                .expect("n >= 3")
                .intransitive_triples as f64
        });
        let s = SampleSummary::new(runs);
        (
            Some(vec![s.mean]),
            Some(vec![s.quantile_of(observed as f64)]),
        )
    } else {
        (None, None)
    };

    let degenerate = exact.is_degenerate();
    Ok(HypothesisReport {
        hypothesis: Hypothesis::Gth,
        n,
        edges: g.arc_count(),
        p: params.p,
        labels: vec!["intransitive_triples".into()],
        observed: vec![observed],
        expected: vec![expected],
        predicted: vec![Direction::Under],
        direction: vec![direction],
        verdict: vec![verdict],
        passes: verdict,
        degenerate,
        samples,
        seed: (samples > 0).then_some(seed),
        mc_mean,
        mc_quantile,
        warnings: if degenerate {
            vec![degenerate_warning(params.p)]
        } else {
            Vec::new()
        },
    })
}

pub const WRONG_NULL_LABEL: &str =
    "INVALID COMPARISON: directed null model applied to an undirected graph";

/// Directed-null expectations evaluated at an undirected graph's density:
/// class 3 (one mutual dyad) stands in for 1-edge triads and class 16 for
/// triangles. Reproduces a known analysis error; never a valid null.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WrongNull {
    pub label: &'static str,
    pub n: usize,
    pub p: f64,
    /// Class 3 expectation, `C(n,3) 3p^2(1-p)^4`.
    pub one_edge_as_mutual_dyad: f64,
    /// Class 16 expectation, `C(n,3) p^6`.
    pub triangle_as_complete_triad: f64,
    pub expected_directed: Vec<f64>,
}

pub fn wrong_null(n: usize, undirected_edges: u64) -> Result<WrongNull> {
    let params = ErParams::<BigRational>::matched_undirected(n, undirected_edges)?;
    let e = expected_census_directed(&params);
    let expected_directed: Vec<f64> = e.expected.iter().map(Scalar::as_f64).collect();
    Ok(WrongNull {
        label: WRONG_NULL_LABEL,
        n,
        p: params.p.as_f64(),
        one_edge_as_mutual_dyad: expected_directed[2],
        triangle_as_complete_triad: expected_directed[15],
        expected_directed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KarateValidation {
    pub nodes: usize,
    pub edges: usize,
    pub possible_edges: u64,
    pub density: f64,
    /// Degrees of the instructor, the president and the three other hubs.
    pub hub_degrees: Vec<(NodeId, usize)>,
    pub residual_nodes: usize,
    pub residual_edges: usize,
    pub residual_density: f64,
    pub residual_within_instructor_faction: usize,
    pub residual_within_president_faction: usize,
    /// Residual edges joining the two post-split factions.
    pub residual_crossing_edges: Vec<[NodeId; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KarateReport {
    pub census: CensusU,
    pub gbh: HypothesisReport,
    pub wrong_null: WrongNull,
    pub validation: KarateValidation,
    pub notes: Vec<String>,
}

fn karate_validation(g: &UndirectedGraph) -> KarateValidation {
    let hubs: Vec<usize> = HUBS.iter().map(|&h| usize::from(h) - 1).collect();
    let keep: Vec<usize> = (0..g.node_count()).filter(|v| !hubs.contains(v)).collect();
    let residual: Vec<[NodeId; 2]> = g
        .edges()
        .filter(|(u, v)| !hubs.contains(u) && !hubs.contains(v))
        .map(|(u, v)| [NodeId::from_index(u), NodeId::from_index(v)])
        .collect();
    let same_side = |e: &&[NodeId; 2]| faction(e[0]) == faction(e[1]);
    let within_instructor = residual
        .iter()
        .filter(same_side)
        .filter(|e| faction(e[0]) == crate::karate::Faction::Instructor)
        .count();
    let within_president = residual.iter().filter(same_side).count() - within_instructor;
    let crossing: Vec<[NodeId; 2]> = residual.iter().filter(|e| !same_side(e)).copied().collect();
    let n = g.node_count() as u64;
    KarateValidation {
        nodes: g.node_count(),
        edges: g.edge_count(),
        possible_edges: binomial(n, 2),
        density: g.density(),
        hub_degrees: HUBS
            .iter()
            .map(|&h| {
                (
                    NodeId::from_index(usize::from(h) - 1),
                    g.degree(usize::from(h) - 1),
                )
            })
            .collect(),
        residual_nodes: keep.len(),
        residual_edges: residual.len(),
        residual_density: residual.len() as f64 / binomial(keep.len() as u64, 2) as f64,
        residual_within_instructor_faction: within_instructor,
        residual_within_president_faction: within_president,
        residual_crossing_edges: crossing,
    }
}

/// Full triad analysis of the embedded karate club graph.
pub fn karate_reference_report(samples: usize, seed: u64) -> Result<KarateReport> {
    let g = karate_club();
    let gbh = evaluate_gbh(&g, samples, seed)?;
    Ok(KarateReport {
        census: census_undirected(&g)?,
        wrong_null: wrong_null(g.node_count(), g.edge_count() as u64)?,
        validation: karate_validation(&g),
        gbh,
        notes: vec![
            "edge list from the 78-edge adjacency matrix, including {23, 34}".into(),
            "node 33 has degree 12 in this edge list".into(),
        ],
    })
}
