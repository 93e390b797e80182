//! Triad censuses for social networks, with balance and transitivity
//! tests against density-matched random graph models.
//!
//! Numeric code is generic over [`Scalar`], so expectations can be
//! computed in `f64`, `f32` or exact rationals. The aliases at the crate
//! root fix the common choices.
//!
//! ```
//! use triadic::karate::karate_club;
//! use triadic::{census_undirected, evaluate_gbh, expected_census_undirected, ExactErParams};
//!
//! let g = karate_club();
//! assert_eq!(census_undirected(&g)?.counts, [3971, 1575, 393, 45]);
//! let null = ExactErParams::matched_undirected(34, 78)?;
//! let expected = expected_census_undirected(&null);
//! assert_eq!(expected.total(), triadic::Rational::from_integer(5984.into()));
//! let report = evaluate_gbh(&g, 200, 42)?;
//! assert!(!report.passes);
//! # Ok::<(), triadic::Error>(())
//! ```

pub mod census;
pub mod error;
pub mod generators;
pub mod graph;
pub mod hypothesis;
pub mod io;
pub mod karate;
pub mod null_model;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod triad;

pub use census::{
    census_directed, census_undirected, count_intransitive_triples, flow_balance,
    is_completely_balanced, triangle_count, CensusD, CensusU, CompleteBalance, FlowBalance,
    TransitivityCount,
};
pub use error::{Error, Result};
pub use generators::{
    clique_union, constellation_expectation, constellation_report, sample_constellation,
    star_graph, ConstellationExpectation, ConstellationParams,
};
pub use graph::{Digraph, InducedTriad, LoopDigraph, NodeId, UndirectedGraph, WeightedDigraph};
pub use hypothesis::{evaluate_gbh, evaluate_gth, Direction, HypothesisReport};
pub use io::{parse_edge_list, AnyGraph, Mode};
pub use null_model::{
    expected_census_directed, expected_census_undirected, expected_intransitive_triples,
    expected_motto_prime_failures, ErParams, ExpectationVectorD, ExpectationVectorU,
};
pub use scalar::Scalar;
pub use triad::{
    classify_directed_triad, classify_undirected_triad, Motto, TriadClassD, TriadClassU,
};

/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

pub type ErParamsF64 = ErParams<f64>;
pub type ExactErParams = ErParams<Rational>;
pub type ExpectationU = ExpectationVectorU<f64>;
pub type ExactExpectationU = ExpectationVectorU<Rational>;
pub type ExpectationD = ExpectationVectorD<f64>;
pub type ExactExpectationD = ExpectationVectorD<Rational>;
pub type ConstellationParamsF64 = ConstellationParams<f64>;
pub type ExactConstellationParams = ConstellationParams<Rational>;
pub type WeightedDigraphF64 = WeightedDigraph<f64>;
