//! Structured generators: stars, noisy star constellations and clique
//! unions, with the exact expected census of a constellation.
//!
//! A `(k, n, delta)` constellation is `k` disjoint stars on `n` nodes each.
//! Component `c` occupies indices `c*n .. (c+1)*n` with its hub at `c*n`;
//! every leaf pair inside a component is joined independently with
//! probability `delta`.

use rand::Rng;
use serde::Serialize;

use crate::census::census_undirected;
use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::null_model::ErParams;
use crate::rng::{monte_carlo, SampleSummary};
use crate::scalar::{binomial, binomial_in, one_minus, Scalar};

/// Node 1 joined to every other node.
pub fn star_graph(n: usize) -> Result<UndirectedGraph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "star needs n >= 2, got {n}"
        )));
    }
    UndirectedGraph::from_edges(n, (1..n).map(|v| (0, v)))
}

/// `k` disjoint complete graphs on `n` nodes.
pub fn clique_union(k: usize, n: usize) -> Result<UndirectedGraph> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "clique union needs k, n >= 1, got k={k}, n={n}"
        )));
    }
    let edges = (0..k).flat_map(|c| {
        let base = c * n;
        (0..n).flat_map(move |u| (u + 1..n).map(move |v| (base + u, base + v)))
    });
    UndirectedGraph::from_edges(k * n, edges)
}

/// Census of [`clique_union`] in closed form.
pub fn clique_union_census(k: u64, n: u64) -> [u64; 4] {
    let one = k * k.saturating_sub(1) * n * binomial(n, 2);
    let three = k * binomial(n, 3);
    [binomial(k * n, 3) - one - three, one, 0, three]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstellationParams<T> {
    pub k: usize,
    pub n: usize,
    pub delta: T,
}

impl<T: Scalar> ConstellationParams<T> {
    pub fn new(k: usize, n: usize, delta: T) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("constellation needs k >= 1".into()));
        }
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "constellation components need n >= 2, got {n}"
            )));
        }
        if !delta.is_probability() {
            return Err(Error::InvalidParameter(format!(
                "noise probability {delta:?} outside [0, 1]"
            )));
        }
        Ok(ConstellationParams { k, n, delta })
    }

    pub fn total_nodes(&self) -> usize {
        self.k * self.n
    }

    /// Operational reading of `n^-2 << delta << n^-1/2`:
    /// `delta n^2 >= 10` and `delta sqrt(n) <= 0.1`.
    pub fn in_asymptotic_regime(&self) -> bool {
        let (d, n) = (self.delta.as_f64(), self.n as f64);
        d * n * n >= 10.0 && d * n.sqrt() <= 0.1
    }

    pub fn to_f64(&self) -> ConstellationParams<f64> {
        ConstellationParams {
            k: self.k,
            n: self.n,
            delta: self.delta.as_f64(),
        }
    }
}

pub fn sample_constellation<T: Scalar, R: Rng + ?Sized>(
    params: &ConstellationParams<T>,
    rng: &mut R,
) -> UndirectedGraph {
    let (k, n, delta) = (params.k, params.n, params.delta.as_f64());
    let mut edges = Vec::new();
    for c in 0..k {
        let hub = c * n;
        for leaf in hub + 1..hub + n {
            edges.push((hub, leaf));
        }
        for u in hub + 1..hub + n {
            for v in u + 1..hub + n {
                if rng.random_bool(delta) {
                    edges.push((u, v));
                }
            }
        }
    }
    UndirectedGraph::from_edges(k * n, edges).expect("constellation edges are distinct")
}

/// Exact expected census of a constellation (`ea`) and of the
/// density-matched Erdős–Rényi graph on `kn` nodes (`eb`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstellationExpectation<T> {
    /// Expected edge count.
    pub eps: T,
    /// `eps / C(kn, 2)`.
    pub p_match: T,
    pub ea: [T; 4],
    pub eb: [T; 4],
}

pub fn constellation_expectation<T: Scalar>(
    params: &ConstellationParams<T>,
) -> ConstellationExpectation<T> {
    let (k, n) = (params.k as u64, params.n as u64);
    let d = params.delta.clone();
    let nd = one_minus(&d);
    let kt = T::from_count(k);
    let leaf_pairs: T = binomial_in(n - 1, 2);
    let leaf_triples: T = binomial_in(n - 1, 3);
    let total_nodes = k * n;

    let eps = kt.clone() * (T::from_count(n - 1) + d.clone() * leaf_pairs.clone());
    let p_match = eps.clone() / binomial_in::<T>(total_nodes, 2);

    let ea3 = kt.clone() * (d.powi(3) * leaf_triples.clone() + d.clone() * leaf_pairs.clone());
    let ea2 = kt.clone()
        * (nd.clone() * leaf_pairs.clone()
            + T::from_count(3) * d.powi(2) * nd.clone() * leaf_triples.clone());
    let ea1 = kt.clone() * leaf_triples * T::from_count(3) * d.clone() * nd.powi(2)
        + T::from_count(k * (k - 1))
            * (T::from_count(n * (n - 1)) + d * T::from_count(n) * leaf_pairs);
    let ea0 = binomial_in::<T>(total_nodes, 3) - ea1.clone() - ea2.clone() - ea3.clone();

    let matched = ErParams {
        n: total_nodes as usize,
        p: p_match.clone(),
    };
    let eb = crate::null_model::expected_census_undirected(&matched).expected;

    ConstellationExpectation {
        eps,
        p_match,
        ea: [ea0, ea1, ea2, ea3],
        eb,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
    #[serde(rename = "0")]
    Zero,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

/// Finite-`n` ratios that tend to 1 in the asymptotic regime.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticRatios {
    /// `Ea[3] / ((k/2) n^2 delta)`.
    pub triangles: f64,
    /// `Ea[2] / ((k/2) n^2)`.
    pub two_edge: f64,
    /// `(Eb[1] - Ea[1]) / (k n^2)`.
    pub one_edge_deficit: f64,
    /// `(Ea[0] - Eb[0]) / ((k/2) n^2)`.
    pub empty_excess: f64,
    /// When `delta n <= 0.1`: `Ea[1] / (k(k-1) n^2)` for `k >= 2`, or
    /// `Ea[1] / (n^3 delta / 2)` for `k = 1`.
    pub one_edge_small_noise: Option<f64>,
}

/// Over/under pattern of a constellation against its matched null.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstellationReport {
    pub k: usize,
    pub n: usize,
    pub delta: f64,
    pub in_regime: bool,
    pub eps: f64,
    pub p_match: f64,
    pub ea: [f64; 4],
    pub eb: [f64; 4],
    /// `sign(Ea[i] - Eb[i])`.
    pub signs: [Sign; 4],
    /// `Ea[1] < Eb[1]` and `Ea[i] > Eb[i]` for `i` in {0, 2, 3}.
    pub gbh_violation_pattern: bool,
    pub ratios: AsymptoticRatios,
    pub warnings: Vec<String>,
}

pub fn constellation_report<T: Scalar>(params: &ConstellationParams<T>) -> ConstellationReport {
    let expectation = constellation_expectation(params);
    let ea = expectation.ea.clone().map(|x| x.as_f64());
    let eb = expectation.eb.clone().map(|x| x.as_f64());
    let diffs: [T; 4] =
        std::array::from_fn(|i| expectation.ea[i].clone() - expectation.eb[i].clone());
    let signs = diffs.clone().map(|d| Sign::of(d.as_f64()));

    let (k, n, delta) = (params.k as f64, params.n as f64, params.delta.as_f64());
    let n2 = n * n;
    let small_noise = delta * n <= 0.1;
    let ratios = AsymptoticRatios {
        triangles: ea[3] / (k / 2.0 * n2 * delta),
        two_edge: ea[2] / (k / 2.0 * n2),
        one_edge_deficit: -diffs[1].as_f64() / (k * n2),
        empty_excess: diffs[0].as_f64() / (k / 2.0 * n2),
        one_edge_small_noise: small_noise.then(|| {
            if params.k >= 2 {
                ea[1] / (k * (k - 1.0) * n2)
            } else {
                ea[1] / (n2 * n * delta / 2.0)
            }
        }),
    };

    let in_regime = params.in_asymptotic_regime();
    let mut warnings = Vec::new();
    if !in_regime {
        warnings.push(format!(
            "delta = {delta} is outside the operational regime (delta n^2 >= 10, delta sqrt(n) <= 0.1); ratios may be far from 1"
        ));
    }

    ConstellationReport {
        k: params.k,
        n: params.n,
        delta,
        in_regime,
        eps: expectation.eps.as_f64(),
        p_match: expectation.p_match.as_f64(),
        gbh_violation_pattern: signs
            == [
                Sign::Positive,
                Sign::Negative,
                Sign::Positive,
                Sign::Positive,
            ],
        ea,
        eb,
        signs,
        ratios,
        warnings,
    }
}

/// Sample means of constellation censuses compared with the closed forms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstellationSampling {
    pub samples: usize,
    pub seed: u64,
    pub edge_mean: f64,
    pub edge_std_error: f64,
    pub census_mean: [f64; 4],
    pub census_std_error: [f64; 4],
    /// `|mean - Ea[i]| <= 3` standard errors.
    pub within_three_se: [bool; 4],
}

pub fn sample_constellation_censuses<T: Scalar>(
    params: &ConstellationParams<T>,
    samples: usize,
    seed: u64,
) -> Result<ConstellationSampling> {
    if params.total_nodes() < 3 {
        return Err(Error::TooFewNodes {
            n: params.total_nodes(),
            required: 3,
        });
    }
    let runs = monte_carlo(samples, seed, |rng| {
        let g = sample_constellation(params, rng);
        let c = census_undirected(&g).expect("at least three nodes");
        (g.edge_count() as f64, c.counts.map(|x| x as f64))
    });
    let edges = SampleSummary::new(runs.iter().map(|r| r.0));
    let per_class: [SampleSummary; 4] =
        std::array::from_fn(|i| SampleSummary::new(runs.iter().map(|r| r.1[i])));
    let ea = constellation_expectation(params).ea.map(|x| x.as_f64());
    Ok(ConstellationSampling {
        samples,
        seed,
        edge_mean: edges.mean,
        edge_std_error: edges.std_error,
        census_mean: std::array::from_fn(|i| per_class[i].mean),
        census_std_error: std::array::from_fn(|i| per_class[i].std_error),
        within_three_se: std::array::from_fn(|i| per_class[i].z_score(ea[i]).abs() <= 3.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::is_completely_balanced;
    use crate::census::CompleteBalance;
    use crate::rng::sample_rng;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn stars() {
        let s = star_graph(8).unwrap();
        assert_eq!(s.edge_count(), 7);
        assert_eq!(s.degree(0), 7);
        assert!((1..8).all(|v| s.degree(v) == 1));
        assert_eq!(star_graph(2).unwrap().edge_count(), 1);
        assert!(star_graph(1).is_err());
    }

    #[test]
    fn clique_unions() {
        let k1 = clique_union(1, 6).unwrap();
        assert_eq!(k1, UndirectedGraph::complete(6));
        assert!(matches!(
            is_completely_balanced(&k1).unwrap(),
            CompleteBalance::Balanced { parts } if parts.len() == 1
        ));
        for k in 1..5u64 {
            for n in 1..7u64 {
                if k * n < 3 {
                    continue;
                }
                let g = clique_union(k as usize, n as usize).unwrap();
                assert_eq!(
                    census_undirected(&g).unwrap().counts,
                    clique_union_census(k, n)
                );
            }
        }
    }

    #[test]
    fn large_clique_union_proportions() {
        let (k, n) = (3u64, 100u64);
        let c = census_undirected(&clique_union(3, 100).unwrap()).unwrap();
        let total = binomial(k * n, 3) as f64;
        let kf = k as f64;
        let approx =
            [kf * (kf - 1.0) * (kf - 2.0), 3.0 * kf * (kf - 1.0), 0.0, kf].map(|x| x / kf.powi(3));
        for (i, (count, want)) in c.counts.iter().zip(approx).enumerate() {
            let got = *count as f64 / total;
            assert!(
                (got - want).abs() <= 0.05 * want,
                "class {i}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn constellation_extremes() {
        let mut rng = sample_rng(5, 0);
        let g = sample_constellation(&ConstellationParams::new(3, 5, 0.0).unwrap(), &mut rng);
        assert_eq!(g.edge_count(), 12);
        let g = sample_constellation(&ConstellationParams::new(3, 5, 1.0).unwrap(), &mut rng);
        assert_eq!(g, clique_union(3, 5).unwrap());
        assert!(ConstellationParams::new(0, 5, 0.1).is_err());
        assert!(ConstellationParams::new(2, 1, 0.1).is_err());
        assert!(ConstellationParams::new(2, 5, 1.1).is_err());
    }

    #[test]
    fn pure_star_expectation() {
        for (k, n) in [(1u64, 4u64), (2, 5), (3, 7)] {
            let e = constellation_expectation(
                &ConstellationParams::<Q>::new(k as usize, n as usize, Q::from_count(0)).unwrap(),
            );
            let one = k * (k - 1) * n * (n - 1);
            let two = k * binomial(n - 1, 2);
            let want = [binomial(k * n, 3) - one - two, one, two, 0].map(Q::from_count);
            assert_eq!(e.ea, want);
        }
    }

    #[test]
    fn plug_in_example() {
        let e = constellation_expectation(&ConstellationParams::new(2, 4, 0.5).unwrap());
        assert_eq!(e.eps, 9.0);
        assert_eq!(e.ea[3], 3.25);
        assert_eq!(e.p_match, 9.0 / 28.0);
    }

    #[test]
    fn full_noise_is_clique_union() {
        for (k, n) in [(1u64, 3u64), (2, 4), (3, 6)] {
            let e = constellation_expectation(
                &ConstellationParams::<Q>::new(k as usize, n as usize, Q::from_count(1)).unwrap(),
            );
            assert_eq!(e.ea, clique_union_census(k, n).map(Q::from_count));
        }
    }

    #[test]
    fn expectations_sum_to_triad_total() {
        let e = constellation_expectation(
            &ConstellationParams::<Q>::new(3, 9, Q::ratio(2, 13)).unwrap(),
        );
        let total = Q::from_count(binomial(27, 3));
        let sum = |v: &[Q; 4]| v.iter().cloned().fold(Q::from_count(0), |a, b| a + b);
        assert_eq!(sum(&e.ea), total);
        assert_eq!(sum(&e.eb), total);
    }

    #[test]
    fn asymptotic_pattern_signs() {
        let n = 400usize;
        let delta = (n as f64).powf(-0.75);
        let r = constellation_report(&ConstellationParams::new(2, n, delta).unwrap());
        assert_eq!(
            r.signs,
            [
                Sign::Positive,
                Sign::Negative,
                Sign::Positive,
                Sign::Positive
            ]
        );
        assert!(r.gbh_violation_pattern);
    }

    #[test]
    fn one_edge_deficit_ratio_approaches_one() {
        let ratios: Vec<f64> = [200usize, 400, 800]
            .into_iter()
            .map(|n| {
                let delta = (n as f64).powf(-0.75);
                constellation_report(&ConstellationParams::new(2, n, delta).unwrap())
                    .ratios
                    .one_edge_deficit
            })
            .collect();
        let gaps: Vec<f64> = ratios.iter().map(|r| (r - 1.0).abs()).collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{ratios:?}");
        assert!(gaps[2] <= 0.25, "{ratios:?}");
    }

    #[test]
    fn small_noise_branch() {
        let n = 1000usize;
        let delta = (n as f64).powf(-1.5);
        let single = constellation_report(&ConstellationParams::new(1, n, delta).unwrap());
        let r = single.ratios.one_edge_small_noise.unwrap();
        assert!((r - 1.0).abs() < 0.05, "{r}");
        let pair = constellation_report(&ConstellationParams::new(2, n, delta).unwrap());
        assert!((pair.ratios.one_edge_small_noise.unwrap() - 1.0).abs() < 0.05);
        let noisy = constellation_report(&ConstellationParams::new(2, n, 0.01).unwrap());
        assert!(noisy.ratios.one_edge_small_noise.is_none());
    }

    #[test]
    fn regime_flag() {
        assert!(ConstellationParams::new(2, 10_000, 1e-4)
            .unwrap()
            .in_asymptotic_regime());
        assert!(!ConstellationParams::new(2, 10, 0.5)
            .unwrap()
            .in_asymptotic_regime());
        let r = constellation_report(&ConstellationParams::new(2, 10, 0.5).unwrap());
        assert!(!r.warnings.is_empty());
    }
}
