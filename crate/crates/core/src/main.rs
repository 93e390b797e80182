use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use triadic::census::{
    census_directed, census_undirected, default_flow_tolerance, flow_balance, FlowBalance,
};
use triadic::generators::{
    clique_union, constellation_report, sample_constellation, sample_constellation_censuses,
    star_graph, ConstellationParams, ConstellationReport, ConstellationSampling, Sign,
};
use triadic::hypothesis::{evaluate_gbh, evaluate_gth, karate_reference_report, wrong_null};
use triadic::io::{from_json, parse_edge_list, to_edge_list, to_json, AnyGraph, Mode};
use triadic::null_model::{
    expected_census_directed, expected_census_undirected, expected_intransitive_triples,
    expected_motto_prime_failures, sample_er_directed, sample_er_loop, sample_er_undirected,
    ErParams,
};
use triadic::report::{fmt_f64, json_document, Table};
use triadic::rng::sample_rng;
use triadic::scalar::Scalar;
use triadic::triad::{
    balanced_loop_digraph_structure, motto_failures_distinct, motto_prime_failures, motto_table,
    Motto, TriadClassD,
};
use triadic::{Error, LoopDigraph, Rational, TriadClassU};

#[derive(Parser, Debug)]
#[command(
    name = "triadic",
    version,
    about = "Triad censuses, balance and transitivity tests, and random-graph null models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output encoding. Defaults to json, or to an edge list for `generate`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone, Copy)]
#[group(multiple = false)]
struct ModeFlags {
    /// Arcs `u v` are ordered pairs.
    #[arg(long)]
    directed: bool,
    /// Directed, and loops `v v` are allowed.
    #[arg(long = "loop")]
    loops: bool,
    /// Directed with a nonnegative weight per arc: `u v w`.
    #[arg(long)]
    weighted: bool,
}

impl ModeFlags {
    fn mode(self) -> Option<Mode> {
        if self.directed {
            Some(Mode::Directed)
        } else if self.loops {
            Some(Mode::Loop)
        } else if self.weighted {
            Some(Mode::Weighted)
        } else {
            None
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Triad census: counts of 3-node induced subgraphs by class.
    ///
    /// Undirected graphs give 4 classes by edge count; digraphs give the
    /// 16 isomorphism classes 003..300. Loop and weighted inputs are
    /// censused through their loop-free, positive-weight arcs.
    /// INPUT is an edge list or graph JSON; `-` reads standard input.
    Census {
        input: String,
        #[command(flatten)]
        mode: ModeFlags,
    },
    /// Expected census of the Erdős–Rényi graph matched to n nodes and e edges.
    ///
    /// Undirected: p = 2e/(n(n-1)) and proportions (1-p)^3, 3p(1-p)^2,
    /// 3p^2(1-p), p^3 of C(n,3). Directed: p = e/(n(n-1)), the 16-class
    /// expectation and the expected number of ordered triples violating
    /// transitivity, n(n-1)(n-2)p^2(1-p). Loop: p = e/n^2 and expected
    /// motto failures over all n^3 triples, both leading-order and exact.
    Expected {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        edges: u64,
        /// Arcs are ordered pairs.
        #[arg(long, conflicts_with = "loops")]
        directed: bool,
        /// Loop digraph model.
        #[arg(long = "loop")]
        loops: bool,
        /// Also print directed-null expectations at the undirected density.
        /// This comparison is invalid and is labelled as such.
        #[arg(long, conflicts_with_all = ["directed", "loops"])]
        wrong_null: bool,
    },
    /// Test the balance hypothesis (undirected) or transitivity hypothesis (--directed).
    ///
    /// Balance predicts more 1- and 3-edge triads and fewer 0- and 2-edge
    /// triads than the density-matched random graph. Transitivity
    /// predicts fewer intransitive ordered triples. With --samples, the
    /// observed counts are placed among that many random null graphs.
    Hypothesis {
        input: String,
        #[arg(long)]
        directed: bool,
        #[command(flatten)]
        mc: MonteCarlo,
    },
    /// Write a generated graph as an edge list (or graph JSON with --format json).
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Compare the noisy star constellation with its density-matched random graph.
    ///
    /// k disjoint stars of n nodes whose leaves are joined independently
    /// with probability delta. Reports exact expected censuses of the
    /// constellation and of G(kn, p) with p matched to the expected edge
    /// count, the sign pattern of their differences, and ratios that tend
    /// to 1 when 1/n^2 << delta << 1/sqrt(n).
    VerifyConstellation {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        delta: DeltaArg,
        #[command(flatten)]
        mc: MonteCarlo,
    },
    /// Print which of the mottoes M1-M4 hold for each of the 16 triad classes.
    ///
    /// For ordered distinct x, y, z: M1 x->y, y->z => x->z; M2 not x->y,
    /// not y->z => x->z; M3 x->y, not y->z => not x->z; M4 not x->y,
    /// y->z => not x->z. A triad is balanced when all four hold.
    TriadTable,
    /// Motto failure counts over all n^3 ordered triples of a loop digraph.
    ///
    /// Triples may repeat nodes. Also reports failures over distinct
    /// triples, the expectation at the matched density p = e/n^2, and the
    /// equivalence classes when no motto fails.
    LoopCensus { input: String },
    /// Check that every node's total in-weight equals its total out-weight.
    FlowBalance {
        input: String,
        /// Absolute tolerance. Defaults to 0 for integer weights, otherwise
        /// 1e-9 times the largest node flow.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Analyse the built-in karate club network (34 members, 78 ties).
    ///
    /// Census, balance hypothesis against the matched random graph, the
    /// invalid directed-null comparison, and structural checks after
    /// removing the five best-connected members.
    Karate {
        #[command(flatten)]
        mc: MonteCarlo,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct MonteCarlo {
    /// Number of random null graphs; 0 skips sampling.
    #[arg(long, default_value_t = 0)]
    samples: usize,
    /// Seed for the sample streams; required when --samples > 0.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug, Clone, Copy)]
#[group(required = true, multiple = false)]
struct DeltaArg {
    /// Leaf-leaf edge probability.
    #[arg(long)]
    delta: Option<f64>,
    /// Use delta = n^(-a).
    #[arg(long, value_name = "A")]
    delta_exponent: Option<f64>,
}

impl DeltaArg {
    fn value(self, n: usize) -> f64 {
        match (self.delta, self.delta_exponent) {
            (Some(d), _) => d,
            (None, Some(a)) => (n as f64).powf(-a),
            (None, None) => unreachable!("clap requires one of the group"),
        }
    }
}

#[derive(Subcommand, Debug)]
enum GenerateKind {
    /// One hub joined to n-1 leaves.
    Star {
        #[arg(long)]
        n: usize,
    },
    /// k disjoint cliques of n nodes.
    Cliques {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// k disjoint stars of n nodes with leaf-leaf noise edges.
    Constellation {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        delta: DeltaArg,
        #[arg(long)]
        seed: u64,
    },
    /// Erdős–Rényi random graph G(n, p).
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, conflicts_with = "loops")]
        directed: bool,
        #[arg(long = "loop")]
        loops: bool,
        #[arg(long)]
        seed: u64,
    },
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::TooFewNodes { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// A command's result in every output encoding.
struct Rendered {
    json: String,
    tables: Vec<(String, Table)>,
    notes: Vec<String>,
}

impl Rendered {
    fn new(command: &str, body: &impl Serialize) -> Self {
        Rendered {
            json: json_document(command, body),
            tables: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn table(mut self, title: &str, t: Table) -> Self {
        self.tables.push((title.to_string(), t));
        self
    }

    fn note(mut self, line: impl Into<String>) -> Self {
        self.notes.push(line.into());
        self
    }

    fn encode(self, format: Format) -> String {
        match format {
            Format::Json => self.json,
            Format::Csv => self
                .tables
                .first()
                .map(|(_, t)| t.to_csv())
                .unwrap_or_default(),
            Format::Text => {
                let mut out = String::new();
                for line in &self.notes {
                    out += line;
                    out.push('\n');
                }
                for (title, t) in &self.tables {
                    if !out.is_empty() {
                        out.push('\n');
                    }
                    if !title.is_empty() {
                        out += title;
                        out.push('\n');
                    }
                    out += &t.to_text();
                }
                out
            }
        }
    }
}

fn read_input(path: &str) -> Outcome<String> {
    let mut text = String::new();
    let res = if path == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::Data(format!("cannot read {path}: {e}")))?;
    Ok(text)
}

/// Parses graph JSON when the text starts with `{`, else an edge list.
fn load_graph(path: &str, flag: Option<Mode>) -> Outcome<AnyGraph> {
    let text = read_input(path)?;
    if text.trim_start().starts_with('{') {
        let g = from_json(&text)?;
        if let Some(m) = flag {
            if m != g.mode() {
                return Err(Failure::Data(format!(
                    "input declares mode {} but --{} was given",
                    g.mode().as_str(),
                    m.as_str()
                )));
            }
        }
        Ok(g)
    } else {
        Ok(parse_edge_list(&text, flag.unwrap_or(Mode::Undirected))?)
    }
}

fn require_seed(mc: MonteCarlo) -> Outcome<u64> {
    match (mc.samples, mc.seed) {
        (0, seed) => Ok(seed.unwrap_or(0)),
        (_, Some(seed)) => Ok(seed),
        (_, None) => Err(Failure::Usage(
            "--seed is required when --samples > 0".into(),
        )),
    }
}

fn f(x: &Rational) -> f64 {
    x.as_f64()
}

#[derive(Serialize)]
struct CensusBody {
    n: u64,
    mode: Mode,
    labels: Vec<String>,
    counts: Vec<u64>,
    total: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    loops_ignored: Option<usize>,
}

fn cmd_census(input: &str, mode: ModeFlags) -> Outcome<Rendered> {
    let g = load_graph(input, mode.mode())?;
    let mut loops_ignored = None;
    let digraph = match &g {
        AnyGraph::Undirected(u) => {
            let c = census_undirected(u)?;
            let labels = TriadClassU::ALL
                .iter()
                .map(|c| c.label().to_string())
                .collect();
            return Ok(census_rendered(CensusBody {
                n: c.n,
                mode: g.mode(),
                labels,
                counts: c.counts.to_vec(),
                total: c.total(),
                loops_ignored,
            }));
        }
        AnyGraph::Directed(d) => d.clone(),
        AnyGraph::Loop(l) => {
            loops_ignored = Some(l.loop_count());
            l.without_loops()
        }
        AnyGraph::Weighted(w) => w.support(),
    };
    let c = census_directed(&digraph)?;
    let labels = TriadClassD::all().map(|c| c.to_string()).collect();
    Ok(census_rendered(CensusBody {
        n: c.n,
        mode: g.mode(),
        labels,
        counts: c.counts.to_vec(),
        total: c.total(),
        loops_ignored,
    }))
}

fn census_rendered(body: CensusBody) -> Rendered {
    let mut t = Table::new(["class", "count"]);
    for (l, c) in body.labels.iter().zip(&body.counts) {
        t.push([l.clone(), c.to_string()]);
    }
    let mut r =
        Rendered::new("census", &body).note(format!("n = {}, total = {}", body.n, body.total));
    if let Some(loops) = body.loops_ignored {
        r = r.note(format!("{loops} loops ignored"));
    }
    r.table("", t)
}

#[derive(Serialize)]
struct ExpectedBody {
    n: usize,
    edges: u64,
    mode: Mode,
    p: f64,
    labels: Vec<String>,
    expected: Vec<f64>,
    total: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_intransitive_triples: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    leading_order: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wrong_null: Option<triadic::hypothesis::WrongNull>,
}

fn cmd_expected(
    n: usize,
    edges: u64,
    directed: bool,
    loops: bool,
    wrong: bool,
) -> Outcome<Rendered> {
    let body = if loops {
        let params = ErParams::<Rational>::matched_loop(n, edges)?;
        let e = expected_motto_prime_failures(&params);
        ExpectedBody {
            n,
            edges,
            mode: Mode::Loop,
            p: f(&params.p),
            labels: Motto::ALL.iter().map(|m| format!("{m}'")).collect(),
            expected: e.exact.iter().map(f).collect(),
            total: (n as f64).powi(3),
            expected_intransitive_triples: None,
            leading_order: Some(e.leading_order.iter().map(f).collect()),
            wrong_null: None,
        }
    } else if directed {
        let params = ErParams::<Rational>::matched_directed(n, edges)?;
        let e = expected_census_directed(&params);
        ExpectedBody {
            n,
            edges,
            mode: Mode::Directed,
            p: f(&params.p),
            labels: TriadClassD::all().map(|c| c.to_string()).collect(),
            expected: e.expected.iter().map(f).collect(),
            total: f(&e.total()),
            expected_intransitive_triples: Some(f(&expected_intransitive_triples(&params))),
            leading_order: None,
            wrong_null: None,
        }
    } else {
        let params = ErParams::<Rational>::matched_undirected(n, edges)?;
        let e = expected_census_undirected(&params);
        ExpectedBody {
            n,
            edges,
            mode: Mode::Undirected,
            p: f(&params.p),
            labels: TriadClassU::ALL
                .iter()
                .map(|c| c.label().to_string())
                .collect(),
            expected: e.expected.iter().map(f).collect(),
            total: f(&e.total()),
            expected_intransitive_triples: None,
            leading_order: None,
            wrong_null: if wrong {
                Some(wrong_null(n, edges)?)
            } else {
                None
            },
        }
    };

    let mut t = match &body.leading_order {
        Some(_) => Table::new(["motto", "expected_exact", "expected_leading_order"]),
        None => Table::new(["class", "expected"]),
    };
    for (i, (l, e)) in body.labels.iter().zip(&body.expected).enumerate() {
        match &body.leading_order {
            Some(lead) => t.push([l.clone(), fmt_f64(*e), fmt_f64(lead[i])]),
            None => t.push([l.clone(), fmt_f64(*e)]),
        }
    }
    let mut r = Rendered::new("expected", &body)
        .note(format!("n = {n}, edges = {edges}, p = {}", fmt_f64(body.p)));
    if let Some(x) = body.expected_intransitive_triples {
        r = r.note(format!("expected intransitive triples = {}", fmt_f64(x)));
    }
    r = r.table("", t);
    if let Some(w) = &body.wrong_null {
        let mut wt = Table::new(["class", "expected"]);
        for (c, e) in TriadClassD::all().zip(&w.expected_directed) {
            wt.push([c.to_string(), fmt_f64(*e)]);
        }
        r = r.table(w.label, wt);
    }
    Ok(r)
}

fn cmd_hypothesis(input: &str, directed: bool, mc: MonteCarlo) -> Outcome<Rendered> {
    let seed = require_seed(mc)?;
    let report = if directed {
        match load_graph(input, Some(Mode::Directed))? {
            AnyGraph::Directed(d) => evaluate_gth(&d, mc.samples, seed)?,
            _ => unreachable!("directed mode yields a digraph"),
        }
    } else {
        match load_graph(input, Some(Mode::Undirected))? {
            AnyGraph::Undirected(g) => evaluate_gbh(&g, mc.samples, seed)?,
            _ => unreachable!("undirected mode yields a graph"),
        }
    };
    Ok(hypothesis_rendered("hypothesis", &report))
}

fn hypothesis_table(r: &triadic::HypothesisReport) -> Table {
    let mut t = Table::new([
        "label",
        "observed",
        "expected",
        "direction",
        "predicted",
        "agrees",
        "mc_mean",
        "mc_quantile",
    ]);
    for i in 0..r.labels.len() {
        let opt = |v: &Option<Vec<f64>>| v.as_ref().map(|v| fmt_f64(v[i])).unwrap_or_default();
        t.push([
            r.labels[i].clone(),
            r.observed[i].to_string(),
            fmt_f64(r.expected[i]),
            direction_name(r.direction[i]).into(),
            direction_name(r.predicted[i]).into(),
            r.verdict[i].to_string(),
            opt(&r.mc_mean),
            opt(&r.mc_quantile),
        ]);
    }
    t
}

fn direction_name(d: triadic::Direction) -> &'static str {
    match d {
        triadic::Direction::Over => "over",
        triadic::Direction::Under => "under",
        triadic::Direction::Exact => "exact",
    }
}

fn hypothesis_rendered(command: &str, r: &triadic::HypothesisReport) -> Rendered {
    let name = match r.hypothesis {
        triadic::hypothesis::Hypothesis::Gbh => "balance",
        triadic::hypothesis::Hypothesis::Gth => "transitivity",
    };
    let mut out = Rendered::new(command, r).note(format!(
        "{name} hypothesis: {} (n = {}, edges = {}, p = {})",
        if r.passes { "passes" } else { "fails" },
        r.n,
        r.edges,
        fmt_f64(r.p)
    ));
    for w in &r.warnings {
        out = out.note(format!("warning: {w}"));
    }
    out.table("", hypothesis_table(r))
}

fn write_graph(g: &AnyGraph, format: Option<Format>) -> String {
    match format.unwrap_or(Format::Text) {
        Format::Text => to_edge_list(g),
        Format::Json => to_json(g) + "\n",
        Format::Csv => {
            let mut t = Table::new(["u", "v"]);
            for line in to_edge_list(g).lines().filter(|l| !l.starts_with("n=")) {
                t.push(line.split_whitespace());
            }
            t.to_csv()
        }
    }
}

fn cmd_generate(kind: GenerateKind) -> Outcome<AnyGraph> {
    Ok(match kind {
        GenerateKind::Star { n } => AnyGraph::Undirected(star_graph(n)?),
        GenerateKind::Cliques { k, n } => AnyGraph::Undirected(clique_union(k, n)?),
        GenerateKind::Constellation { k, n, delta, seed } => {
            let params = ConstellationParams::new(k, n, delta.value(n))?;
            AnyGraph::Undirected(sample_constellation(&params, &mut sample_rng(seed, 0)))
        }
        GenerateKind::Er {
            n,
            p,
            directed,
            loops,
            seed,
        } => {
            let params = ErParams::new(n, p)?;
            let mut rng = sample_rng(seed, 0);
            if loops {
                AnyGraph::Loop(sample_er_loop(&params, &mut rng))
            } else if directed {
                AnyGraph::Directed(sample_er_directed(&params, &mut rng))
            } else {
                AnyGraph::Undirected(sample_er_undirected(&params, &mut rng))
            }
        }
    })
}

#[derive(Serialize)]
struct ConstellationBody {
    #[serde(flatten)]
    report: ConstellationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    sampling: Option<ConstellationSampling>,
}

fn cmd_verify(k: usize, n: usize, delta: DeltaArg, mc: MonteCarlo) -> Outcome<Rendered> {
    let seed = require_seed(mc)?;
    let params = ConstellationParams::new(k, n, delta.value(n))?;
    let report = constellation_report(&params);
    let sampling = if mc.samples > 0 {
        Some(sample_constellation_censuses(&params, mc.samples, seed)?)
    } else {
        None
    };
    let (means, errors) = match &sampling {
        Some(s) => (s.census_mean.map(fmt_f64), s.census_std_error.map(fmt_f64)),
        None => Default::default(),
    };
    let mut t = Table::new(["edges", "ea", "eb", "sign", "mc_mean", "mc_std_error"]);
    for i in 0..4 {
        let sign = match report.signs[i] {
            Sign::Positive => "+",
            Sign::Negative => "-",
            Sign::Zero => "0",
        };
        t.push([
            format!("{i}-edge"),
            fmt_f64(report.ea[i]),
            fmt_f64(report.eb[i]),
            sign.to_string(),
            means[i].clone(),
            errors[i].clone(),
        ]);
    }
    let mut r = Rendered::new(
        "verify-constellation",
        &ConstellationBody {
            report: report.clone(),
            sampling,
        },
    )
    .note(format!(
        "k = {k}, n = {n}, delta = {}, expected edges = {}, matched p = {}",
        fmt_f64(report.delta),
        fmt_f64(report.eps),
        fmt_f64(report.p_match)
    ))
    .note(format!(
        "constellation over/under pattern (+ - + +): {}",
        report.gbh_violation_pattern
    ));
    for w in &report.warnings {
        r = r.note(format!("warning: {w}"));
    }
    Ok(r.table("", t))
}

#[derive(Serialize)]
struct TriadRow {
    class: usize,
    code: &'static str,
    size: usize,
    arcs: u32,
    m1: bool,
    m2: bool,
    m3: bool,
    m4: bool,
    balanced: bool,
}

fn cmd_triad_table() -> Rendered {
    let rows: Vec<TriadRow> = motto_table()
        .iter()
        .map(|(c, p)| TriadRow {
            class: c.index(),
            code: c.code(),
            size: c.class_size(),
            arcs: c.arc_count(),
            m1: p.m1,
            m2: p.m2,
            m3: p.m3,
            m4: p.m4,
            balanced: p.all_hold(),
        })
        .collect();
    let yn = |b: bool| if b { "Y" } else { "N" };
    let mut t = Table::new(["class", "code", "size", "M1", "M2", "M3", "M4", "balanced"]);
    for r in &rows {
        t.push([
            r.class.to_string(),
            r.code.to_string(),
            r.size.to_string(),
            yn(r.m1).into(),
            yn(r.m2).into(),
            yn(r.m3).into(),
            yn(r.m4).into(),
            yn(r.balanced).into(),
        ]);
    }
    #[derive(Serialize)]
    struct Body {
        rows: Vec<TriadRow>,
    }
    Rendered::new("triad-table", &Body { rows }).table("", t)
}

#[derive(Serialize)]
struct LoopCensusBody {
    n: usize,
    arcs: usize,
    loops: usize,
    p: f64,
    labels: Vec<String>,
    failures: [u64; 4],
    failures_distinct: [u64; 4],
    expected_exact: Vec<f64>,
    expected_leading_order: Vec<f64>,
    structure: triadic::triad::LoopBalance,
}

fn cmd_loop_census(input: &str) -> Outcome<Rendered> {
    let g: LoopDigraph = match load_graph(input, Some(Mode::Loop))? {
        AnyGraph::Loop(g) => g,
        _ => unreachable!("loop mode yields a loop digraph"),
    };
    let params = ErParams::<Rational>::matched_loop(g.node_count(), g.arc_count() as u64)?;
    let e = expected_motto_prime_failures(&params);
    let body = LoopCensusBody {
        n: g.node_count(),
        arcs: g.arc_count(),
        loops: g.loop_count(),
        p: f(&params.p),
        labels: Motto::ALL.iter().map(|m| format!("{m}'")).collect(),
        failures: motto_prime_failures(&g),
        failures_distinct: motto_failures_distinct(&g),
        expected_exact: e.exact.iter().map(f).collect(),
        expected_leading_order: e.leading_order.iter().map(f).collect(),
        structure: balanced_loop_digraph_structure(&g),
    };
    let mut t = Table::new([
        "motto",
        "failures",
        "distinct",
        "expected_exact",
        "expected_leading_order",
    ]);
    for i in 0..4 {
        t.push([
            body.labels[i].clone(),
            body.failures[i].to_string(),
            body.failures_distinct[i].to_string(),
            fmt_f64(body.expected_exact[i]),
            fmt_f64(body.expected_leading_order[i]),
        ]);
    }
    let structure = match &body.structure {
        triadic::triad::LoopBalance::Equivalence { classes } => {
            format!(
                "balanced: equivalence relation with {} classes",
                classes.len()
            )
        }
        triadic::triad::LoopBalance::NotBalanced { motto, triple } => format!(
            "not balanced: {motto}' fails at ({}, {}, {})",
            triple[0], triple[1], triple[2]
        ),
    };
    Ok(Rendered::new("loop-census", &body)
        .note(format!(
            "n = {}, arcs = {}, loops = {}",
            body.n, body.arcs, body.loops
        ))
        .note(structure)
        .table("", t))
}

fn cmd_flow_balance(input: &str, tol: Option<f64>) -> Outcome<Rendered> {
    let g = match load_graph(input, Some(Mode::Weighted))? {
        AnyGraph::Weighted(g) => g,
        _ => unreachable!("weighted mode yields a weighted digraph"),
    };
    let tol = tol.unwrap_or_else(|| default_flow_tolerance(&g));
    let result = flow_balance(&g, tol)?;
    #[derive(Serialize)]
    struct Body {
        n: usize,
        arcs: usize,
        tolerance: f64,
        balanced: bool,
        result: FlowBalance<f64>,
    }
    let body = Body {
        n: g.node_count(),
        arcs: g.arc_count(),
        tolerance: tol,
        balanced: result == FlowBalance::Balanced,
        result,
    };
    let mut t = Table::new(["balanced", "node", "in_weight", "out_weight"]);
    match &body.result {
        FlowBalance::Balanced => t.push(["true", "", "", ""].map(String::from)),
        FlowBalance::Unbalanced {
            node,
            in_weight,
            out_weight,
        } => t.push([
            "false".to_string(),
            node.to_string(),
            fmt_f64(*in_weight),
            fmt_f64(*out_weight),
        ]),
    }
    Ok(Rendered::new("flow-balance", &body).table("", t))
}

fn cmd_karate(mc: MonteCarlo) -> Outcome<Rendered> {
    let seed = require_seed(mc)?;
    let k = karate_reference_report(mc.samples, seed)?;
    let v = &k.validation;
    let mut census = Table::new(["class", "count"]);
    for (c, n) in TriadClassU::ALL.iter().zip(k.census.counts) {
        census.push([c.label().to_string(), n.to_string()]);
    }
    let mut wrong = Table::new(["quantity", "expected"]);
    wrong.push([
        "class 102 (one mutual dyad)".to_string(),
        fmt_f64(k.wrong_null.one_edge_as_mutual_dyad),
    ]);
    wrong.push([
        "class 300 (complete triad)".to_string(),
        fmt_f64(k.wrong_null.triangle_as_complete_triad),
    ]);
    let mut checks = Table::new(["check", "value"]);
    checks.push([
        "edges".to_string(),
        format!("{} of {}", v.edges, v.possible_edges),
    ]);
    for (id, d) in &v.hub_degrees {
        checks.push([format!("degree of node {id}"), d.to_string()]);
    }
    checks.push([
        "residual without hubs".to_string(),
        format!(
            "{} nodes, {} edges, density {}",
            v.residual_nodes,
            v.residual_edges,
            fmt_f64(v.residual_density)
        ),
    ]);
    checks.push([
        "residual within factions".to_string(),
        format!(
            "{} + {}",
            v.residual_within_instructor_faction, v.residual_within_president_faction
        ),
    ]);
    let crossing: Vec<String> = v
        .residual_crossing_edges
        .iter()
        .map(|e| format!("{{{}, {}}}", e[0], e[1]))
        .collect();
    checks.push(["residual crossing edges".to_string(), crossing.join(" ")]);

    let mut r = Rendered::new("karate", &k)
        .table("census", census)
        .table("balance hypothesis", hypothesis_table(&k.gbh))
        .table(k.wrong_null.label, wrong)
        .table("dataset checks", checks);
    for n in &k.notes {
        r = r.note(format!("note: {n}"));
    }
    Ok(r)
}

fn configure_threads() -> Outcome<()> {
    if let Ok(v) = std::env::var("TRIADIC_THREADS") {
        let threads: usize = v.parse().ok().filter(|&t| t > 0).ok_or_else(|| {
            Failure::Usage(format!(
                "TRIADIC_THREADS must be a positive integer, got {v:?}"
            ))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome<String> {
    configure_threads()?;
    let format = cli.format;
    let rendered = match cli.command {
        Command::Census { input, mode } => cmd_census(&input, mode)?,
        Command::Expected {
            n,
            edges,
            directed,
            loops,
            wrong_null,
        } => cmd_expected(n, edges, directed, loops, wrong_null)?,
        Command::Hypothesis {
            input,
            directed,
            mc,
        } => cmd_hypothesis(&input, directed, mc)?,
        Command::Generate { kind } => return Ok(write_graph(&cmd_generate(kind)?, format)),
        Command::VerifyConstellation { k, n, delta, mc } => cmd_verify(k, n, delta, mc)?,
        Command::TriadTable => cmd_triad_table(),
        Command::LoopCensus { input } => cmd_loop_census(&input)?,
        Command::FlowBalance { input, tol } => cmd_flow_balance(&input, tol)?,
        Command::Karate { mc } => cmd_karate(mc)?,
    };
    Ok(rendered.encode(format.unwrap_or(Format::Json)))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    let output = cli.output.clone();
    let result = run(cli).and_then(|text| {
        match &output {
            Some(path) => fs::write(path, text),
            None => io::stdout().lock().write_all(text.as_bytes()),
        }
        .map_err(|e| Failure::Data(format!("cannot write output: {e}")))
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
