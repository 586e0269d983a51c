//! The `subtree-poly-lab` command line driver.
//!
//! Every run is described by an [`ExperimentSpec`]; the resolved spec and the
//! crate version are echoed into the output so a document can be reproduced
//! from itself. JSON documents have the shape
//! `{"version": ..., "spec": {...}, "result": {...}}`. CSV output starts with
//! a `#` comment line carrying the same echo, followed by a header and rows
//! with fixed columns per command.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::counting::{self, counts_for, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::graph::{generate, generate_connected, Family, Graph};
use crate::poly::{
    build_polynomial, find_roots_with, poisson_deviation, rouche_margin, tree_root_check,
    RootOptions, DEFAULT_C, DEFAULT_CIRCLE_POINTS, DEFAULT_PRECISION_BITS,
};
use crate::report::{rational_decimal, rational_f64, rational_string};
use crate::spanning::{exact_beta, verify_weight_identity, SampleRun};
use crate::VERSION;

pub const THREADS_ENV: &str = "SUBTREE_POLY_LAB_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "subtree-poly-lab",
    version,
    about = "Subtree polynomials of graphs: exact counts, spanning tree sampling, roots"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true, env = THREADS_ENV)]
    threads: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct SourceArgs {
    /// Graph family, e.g. `complete(10)`, `gnp(8,0.5)`, `random_tree(9)`.
    #[arg(
        long,
        conflicts_with = "edge_list",
        required_unless_present = "edge_list"
    )]
    graph: Option<String>,

    /// Edge-list file: header `n m`, then `m` lines `u v` with `u < v`.
    #[arg(long)]
    edge_list: Option<PathBuf>,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum CommandArgs {
    /// Subtree count vector s_1..s_n.
    /// CSV columns: k,s_k.
    Counts {
        #[command(flatten)]
        source: SourceArgs,
        /// Largest n for exhaustive enumeration (complete graphs use the closed form).
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Monte Carlo estimate of beta = s_{n-1}/s_n from uniform spanning trees.
    /// CSV columns: estimate,standard_error,samples,seed,exact,z_score,bound_violations.
    Beta {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Leaf-count statistics and weight concentration tails of sampled trees.
    /// CSV columns: b,tail_count,empirical_tail,bound_degree,bound_density,binomial_se,status_degree,status_density.
    Sample {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, value_delimiter = ',', default_value = "0.2,0.3,0.4,0.5")]
        b_grid: Vec<f64>,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
    },
    /// Certified roots of the subtree polynomial.
    /// CSV columns: re,im,modulus,residual.
    Roots {
        #[command(flatten)]
        source: SourceArgs,
        /// 53 or 106.
        #[arg(long, default_value_t = DEFAULT_PRECISION_BITS)]
        precision_bits: u32,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Sampled Rouché margin on the circle |y| = alpha log n / C.
    /// CSV columns: n,c,radius,circle_points,sampled_supremum,min_exp_modulus,witness_bound,witness_holds.
    Rouche {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long = "C", default_value_t = DEFAULT_C)]
        c: f64,
        #[arg(long, default_value_t = DEFAULT_CIRCLE_POINTS)]
        circle_points: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Deviations of s_{n-k}/s_n from beta^k/k!.
    /// CSV columns: k,ratio,poisson_term,deviation.
    Poisson {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Exact identities and inequalities on one graph.
    /// CSV columns: check,value,pass.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Root moduli of a tree against 1 + 3^{1/3}.
    /// CSV columns: n,max_modulus,bound,within_bound,roots_outside_annulus.
    TreeCheck {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Sweep a family over several sizes; one CSV row per n.
    /// Columns depend on --run: roots: n,max_modulus,vieta_relative_error;
    /// poisson: n,beta,dev_1..dev_{k_max},max_abs_deviation;
    /// rouche: n,radius,sampled_supremum,min_exp_modulus,witness_bound,witness_holds;
    /// counts: n,s_n,s_n_minus_1,beta; beta: n,estimate,standard_error,exact.
    Experiment {
        /// Family template; its size argument is replaced by each n.
        #[arg(long)]
        graph: String,
        /// Comma-separated sizes; may be empty.
        #[arg(long, default_value = "")]
        n_list: String,
        #[arg(long, value_enum)]
        run: SweepCommand,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long = "C", default_value_t = DEFAULT_C)]
        c: f64,
        #[arg(long, default_value_t = DEFAULT_CIRCLE_POINTS)]
        circle_points: usize,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        #[arg(long, default_value_t = DEFAULT_PRECISION_BITS)]
        precision_bits: u32,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepCommand {
    Counts,
    Beta,
    Roots,
    Rouche,
    Poisson,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Counts,
    Beta,
    Sample,
    Roots,
    Rouche,
    Poisson,
    Verify,
    TreeCheck,
    Experiment,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphSource {
    Family(String),
    EdgeList(PathBuf),
}

/// Command-specific settings; only those relevant to the command are set.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circle_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub run: Option<SweepCommand>,
}

/// A fully resolved run. The worker count is deliberately absent: it never
/// changes the output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub command: Command,
    pub graph_source: GraphSource,
    pub parameters: Parameters,
    pub seed: u64,
    pub output_format: Format,
}

/// Rows of a CSV table.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// What a command produced. `failure` is set when an assertion the command
/// checks does not hold; the document is still written.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub result: Value,
    pub table: Table,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(result: Value, table: Table) -> Self {
        Outcome {
            result,
            table,
            failure: None,
        }
    }
}

fn float(x: f64) -> String {
    format!("{x}")
}

impl ExperimentSpec {
    /// The input graph, plus how it was drawn. With `connected`, random
    /// families are redrawn from successive seeds until connected.
    fn load_graph(&self, connected: bool) -> Result<(Graph, Value)> {
        match &self.graph_source {
            GraphSource::Family(f) => {
                let family: Family = f.parse()?;
                if connected {
                    let inst = generate_connected(&family, self.seed)?;
                    let drawn = json!({ "seed": inst.seed, "rejections": inst.rejections });
                    Ok((inst.graph, drawn))
                } else {
                    Ok((
                        generate(&family, self.seed)?,
                        json!({ "seed": self.seed, "rejections": 0 }),
                    ))
                }
            }
            GraphSource::EdgeList(path) => Ok((
                Graph::from_edge_list(&std::fs::read_to_string(path)?)?,
                Value::Null,
            )),
        }
    }

    fn cap(&self) -> usize {
        self.parameters.cap.unwrap_or(DEFAULT_ENUMERATION_CAP)
    }

    /// Renders the output document for `outcome`.
    pub fn render(&self, outcome: &Outcome) -> Result<String> {
        match self.output_format {
            Format::Json => {
                let doc = json!({ "version": VERSION, "spec": self, "result": outcome.result });
                let mut text = serde_json::to_string_pretty(&doc)?;
                text.push('\n');
                Ok(text)
            }
            Format::Csv => {
                let mut out = format!(
                    "# subtree-poly-lab {VERSION} {}\n",
                    serde_json::to_string(self)?
                );
                let mut writer = csv::Writer::from_writer(Vec::new());
                writer.write_record(&outcome.table.header)?;
                for row in &outcome.table.rows {
                    writer.write_record(row)?;
                }
                let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
                out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
                Ok(out)
            }
        }
    }
}

/// Executes the spec on the current rayon pool.
pub fn run(spec: &ExperimentSpec) -> Result<Outcome> {
    match spec.command {
        Command::Counts => run_counts(spec),
        Command::Beta => run_beta(spec),
        Command::Sample => run_sample(spec),
        Command::Roots => run_roots(spec),
        Command::Rouche => run_rouche(spec),
        Command::Poisson => run_poisson(spec),
        Command::Verify => run_verify(spec),
        Command::TreeCheck => run_tree_check(spec),
        Command::Experiment => run_sweep(spec),
    }
}

fn run_counts(spec: &ExperimentSpec) -> Result<Outcome> {
    let (g, instance) = spec.load_graph(false)?;
    let counts = counts_for(&g, spec.cap())?;
    let mut table = Table::new(&["k", "s_k"]);
    for (k, s) in counts.decimal_strings().into_iter().enumerate() {
        table.push(vec![(k + 1).to_string(), s]);
    }
    let result = json!({
        "n": g.vertex_count(),
        "m": g.edge_count(),
        "fingerprint": counts.fingerprint(),
        "instance": instance,
        "method": if g.is_complete() { "closed_form" } else { "enumeration" },
        "counts": counts.decimal_strings(),
        "polynomial": build_polynomial(&counts).to_text(),
    });
    Ok(Outcome::ok(result, table))
}

/// `beta` when the counts are within reach, `None` past the cap.
fn try_exact_beta(g: &Graph, cap: usize) -> Result<Option<BigRational>> {
    match counts_for(g, cap) {
        Ok(c) => exact_beta(&c).map(Some),
        Err(Error::Capacity(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn run_beta(spec: &ExperimentSpec) -> Result<Outcome> {
    let (g, instance) = spec.load_graph(true)?;
    let samples = spec.parameters.samples.unwrap_or(100_000);
    let estimate = SampleRun::collect(&g, samples, spec.seed)?.beta_estimate();
    let exact = try_exact_beta(&g, spec.cap())?;
    let z = exact
        .as_ref()
        .map(|b| (estimate.estimate - rational_f64(b)) / estimate.standard_error);
    let mut table = Table::new(&[
        "estimate",
        "standard_error",
        "samples",
        "seed",
        "exact",
        "z_score",
        "bound_violations",
    ]);
    table.push(vec![
        float(estimate.estimate),
        float(estimate.standard_error),
        samples.to_string(),
        spec.seed.to_string(),
        exact
            .as_ref()
            .map(|b| rational_decimal(b, 30))
            .unwrap_or_default(),
        z.map(float).unwrap_or_default(),
        estimate.bound_violations.to_string(),
    ]);
    let failure = (estimate.bound_violations > 0).then(|| {
        format!(
            "{} sampled trees violate the weight bounds",
            estimate.bound_violations
        )
    });
    let result = json!({
        "fingerprint": g.fingerprint(),
        "instance": instance,
        "estimate": estimate,
        "exact_beta": exact.as_ref().map(rational_string),
        "exact_beta_decimal": exact.as_ref().map(|b| rational_decimal(b, 30)),
        "z_score": z,
    });
    Ok(Outcome {
        result,
        table,
        failure,
    })
}

fn run_sample(spec: &ExperimentSpec) -> Result<Outcome> {
    let (g, instance) = spec.load_graph(true)?;
    let p = &spec.parameters;
    let run = SampleRun::collect(&g, p.samples.unwrap_or(100_000), spec.seed)?;
    let leaves = run.leaf_count_stats(p.eps.unwrap_or(0.05));
    let tails = run.concentration(p.b_grid.as_deref().unwrap_or(&[]))?;
    let mut table = Table::new(&[
        "b",
        "tail_count",
        "empirical_tail",
        "bound_degree",
        "bound_density",
        "binomial_se",
        "status_degree",
        "status_density",
    ]);
    let status = |s| {
        serde_json::to_value(s)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default()
    };
    for row in &tails.tails {
        table.push(vec![
            float(row.b),
            row.tail_count.to_string(),
            float(row.empirical_tail),
            float(row.bound_degree),
            float(row.bound_density),
            float(row.binomial_se),
            status(row.status_degree),
            status(row.status_density),
        ]);
    }
    let failure = (run.bound_violations() > 0).then(|| {
        format!(
            "{} sampled trees violate the weight bounds",
            run.bound_violations()
        )
    });
    let result = json!({
        "fingerprint": g.fingerprint(),
        "instance": instance,
        "bound_violations": run.bound_violations(),
        "leaf_counts": leaves,
        "concentration": tails,
    });
    Ok(Outcome {
        result,
        table,
        failure,
    })
}

fn root_options(spec: &ExperimentSpec) -> RootOptions {
    RootOptions {
        precision_bits: spec
            .parameters
            .precision_bits
            .unwrap_or(DEFAULT_PRECISION_BITS),
        ..RootOptions::default()
    }
}

fn run_roots(spec: &ExperimentSpec) -> Result<Outcome> {
    let options = root_options(spec);
    options.validate()?;
    let (g, instance) = spec.load_graph(true)?;
    let counts = counts_for(&g, spec.cap())?;
    let analysis = find_roots_with(&build_polynomial(&counts), &options)?;
    let mut table = Table::new(&["re", "im", "modulus", "residual"]);
    for ((z, m), r) in analysis
        .roots
        .iter()
        .zip(&analysis.moduli)
        .zip(&analysis.residuals)
    {
        table.push(vec![z[0].clone(), z[1].clone(), float(*m), float(*r)]);
    }
    let result =
        json!({ "fingerprint": g.fingerprint(), "instance": instance, "analysis": analysis });
    Ok(Outcome::ok(result, table))
}

fn run_rouche(spec: &ExperimentSpec) -> Result<Outcome> {
    let (g, instance) = spec.load_graph(true)?;
    let p = &spec.parameters;
    let counts = counts_for(&g, spec.cap())?;
    let profile = g.degree_profile();
    let report = rouche_margin(
        &counts,
        &profile.alpha,
        p.c.unwrap_or(DEFAULT_C),
        p.circle_points.unwrap_or(DEFAULT_CIRCLE_POINTS),
    )?;
    let mut table = Table::new(&[
        "n",
        "c",
        "radius",
        "circle_points",
        "sampled_supremum",
        "min_exp_modulus",
        "witness_bound",
        "witness_holds",
    ]);
    table.push(vec![
        report.n.to_string(),
        float(report.c),
        float(report.radius),
        report.circle_points.to_string(),
        float(report.sampled_supremum),
        float(report.min_exp_modulus),
        float(report.witness_bound),
        report.witness_holds.to_string(),
    ]);
    let result = json!({ "fingerprint": g.fingerprint(),
        "instance": instance, "rouche": report });
    Ok(Outcome::ok(result, table))
}

fn run_poisson(spec: &ExperimentSpec) -> Result<Outcome> {
    let (g, instance) = spec.load_graph(true)?;
    let counts = counts_for(&g, spec.cap())?;
    let report = poisson_deviation(&counts, spec.parameters.k_max.unwrap_or(3))?;
    let mut table = Table::new(&["k", "ratio", "poisson_term", "deviation"]);
    for row in &report.rows {
        table.push(vec![
            row.k.to_string(),
            row.ratio.clone(),
            row.poisson_term.clone(),
            row.deviation.clone(),
        ]);
    }
    let failure = report.rows[..2.min(report.rows.len())]
        .iter()
        .any(|r| !r.deviation_rational.is_zero())
        .then(|| "dev_0 or dev_1 is not exactly zero".to_string());
    let result = json!({ "fingerprint": g.fingerprint(),
        "instance": instance, "poisson": report });
    Ok(Outcome {
        result,
        table,
        failure,
    })
}

fn run_verify(spec: &ExperimentSpec) -> Result<Outcome> {
    let (g, instance) = spec.load_graph(true)?;
    let profile = g.degree_profile();
    let mut table = Table::new(&["check", "value", "pass"]);
    if !g.is_connected() {
        table.push(vec!["connected".into(), "false".into(), "false".into()]);
        let result = json!({
            "fingerprint": g.fingerprint(),
        "instance": instance,
            "connected": false,
            "profile": profile,
            "note": "disconnected graph: s_n = 0, so beta and the weight identity are undefined",
        });
        return Ok(Outcome::ok(result, table));
    }
    let counts = counts_for(&g, spec.cap())?;
    let matrix_tree = counting::spanning_tree_count(&g);
    let identity = verify_weight_identity(&g)?;
    let inequalities =
        counting::check_ratio_inequalities(&counts, &profile.alpha, profile.min_degree);
    let beta = exact_beta(&counts)?;
    let spanning_agree = counts.spanning() == &matrix_tree
        && BigRational::from_integer(identity.spanning_trees.into())
            == BigRational::from_integer(matrix_tree.clone().into());
    let inverse_e = (-1f64).exp();

    table.push(vec!["connected".into(), "true".into(), "true".into()]);
    table.push(vec![
        "spanning_trees".into(),
        matrix_tree.to_string(),
        spanning_agree.to_string(),
    ]);
    table.push(vec![
        "weight_identity".into(),
        rational_string(&identity.lhs),
        identity.equal.to_string(),
    ]);
    table.push(vec![
        "inequalities".into(),
        String::new(),
        inequalities.all_pass().to_string(),
    ]);
    table.push(vec![
        "beta_at_least_inverse_e".into(),
        rational_decimal(&beta, 30),
        (rational_f64(&beta) >= inverse_e).to_string(),
    ]);

    let mut failures = Vec::new();
    if !spanning_agree {
        failures.push("matrix-tree count disagrees with s_n or the enumeration");
    }
    if !identity.equal {
        failures.push("weight identity does not hold");
    }
    if !inequalities.all_pass() {
        failures.push("ratio or partial-sum inequality fails");
    }
    let result = json!({
        "fingerprint": g.fingerprint(),
        "instance": instance,
        "connected": true,
        "profile": profile,
        "counts": counts.decimal_strings(),
        "spanning_tree_count": matrix_tree.to_string(),
        "spanning_counts_agree": spanning_agree,
        "weight_identity": identity,
        "inequalities": inequalities,
        "beta": rational_string(&beta),
        "beta_decimal": rational_decimal(&beta, 30),
        "beta_at_least_inverse_e": rational_f64(&beta) >= inverse_e,
    });
    Ok(Outcome {
        result,
        table,
        failure: (!failures.is_empty()).then(|| failures.join("; ")),
    })
}

fn run_tree_check(spec: &ExperimentSpec) -> Result<Outcome> {
    let (g, instance) = spec.load_graph(true)?;
    let report = tree_root_check(&g)?;
    let mut table = Table::new(&[
        "n",
        "max_modulus",
        "bound",
        "within_bound",
        "roots_outside_annulus",
    ]);
    table.push(vec![
        report.n.to_string(),
        float(report.max_modulus),
        float(report.bound),
        report.within_bound.to_string(),
        report.roots_outside_annulus.to_string(),
    ]);
    let failure = (!report.within_bound).then(|| {
        format!(
            "max modulus {} exceeds {}",
            report.max_modulus, report.bound
        )
    });
    let result = json!({ "fingerprint": g.fingerprint(),
        "instance": instance, "tree_check": report });
    Ok(Outcome {
        result,
        table,
        failure,
    })
}

fn run_sweep(spec: &ExperimentSpec) -> Result<Outcome> {
    let template: Family = match &spec.graph_source {
        GraphSource::Family(f) => f.parse()?,
        GraphSource::EdgeList(_) => {
            return Err(Error::InvalidArgument(
                "experiment needs a family template".into(),
            ))
        }
    };
    let p = &spec.parameters;
    let n_list = p.n_list.clone().unwrap_or_default();
    let run = p.run.unwrap_or(SweepCommand::Roots);
    let k_max = p.k_max.unwrap_or(3);
    let mut header: Vec<String> = match run {
        SweepCommand::Counts => vec!["n", "s_n", "s_n_minus_1", "beta"],
        SweepCommand::Beta => vec!["n", "estimate", "standard_error", "exact"],
        SweepCommand::Roots => vec!["n", "max_modulus", "vieta_relative_error"],
        SweepCommand::Rouche => vec![
            "n",
            "radius",
            "sampled_supremum",
            "min_exp_modulus",
            "witness_bound",
            "witness_holds",
        ],
        SweepCommand::Poisson => vec!["n", "beta"],
    }
    .into_iter()
    .map(String::from)
    .collect();
    if run == SweepCommand::Poisson {
        header.extend((1..=k_max).map(|k| format!("dev_{k}")));
        header.push("max_abs_deviation".into());
    }
    header.extend(["seed".to_string(), "rejections".to_string()]);
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    let mut records = Vec::new();
    for &n in &n_list {
        let row =
            sweep_row(spec, &template.with_vertex_count(n), run).map_err(|e| annotate(e, n))?;
        records.push(
            table
                .header
                .iter()
                .cloned()
                .zip(row.iter().cloned().map(Value::String))
                .collect::<serde_json::Map<_, _>>(),
        );
        table.push(row);
    }
    Ok(Outcome::ok(json!({ "rows": records }), table))
}

fn annotate(e: Error, n: usize) -> Error {
    let at = |m: String| format!("n = {n}: {m}");
    match e {
        Error::Capacity(m) => Error::Capacity(at(m)),
        Error::Assertion(m) => Error::Assertion(at(m)),
        Error::Domain(m) => Error::Domain(at(m)),
        Error::InvalidArgument(m) => Error::InvalidArgument(at(m)),
        Error::InvalidFamily(m) => Error::InvalidFamily(at(m)),
        Error::Validation(m) => Error::Validation(at(m)),
        Error::Certification(mut f) => {
            f.reason = at(f.reason);
            Error::Certification(f)
        }
        other => other,
    }
}

fn sweep_row(spec: &ExperimentSpec, family: &Family, run: SweepCommand) -> Result<Vec<String>> {
    let p = &spec.parameters;
    let inst = generate_connected(family, spec.seed)?;
    let g = inst.graph;
    let n = g.vertex_count();
    let mut row = match run {
        SweepCommand::Beta => {
            let est =
                SampleRun::collect(&g, p.samples.unwrap_or(100_000), spec.seed)?.beta_estimate();
            let exact = try_exact_beta(&g, spec.cap())?;
            vec![
                n.to_string(),
                float(est.estimate),
                float(est.standard_error),
                exact.map(|b| rational_decimal(&b, 30)).unwrap_or_default(),
            ]
        }
        _ => {
            let counts = counts_for(&g, spec.cap())?;
            match run {
                SweepCommand::Counts => vec![
                    n.to_string(),
                    counts.get(n).to_string(),
                    counts.get(n - 1).to_string(),
                    if n >= 2 {
                        rational_decimal(&exact_beta(&counts)?, 30)
                    } else {
                        String::new()
                    },
                ],
                SweepCommand::Roots => {
                    let a = find_roots_with(&build_polynomial(&counts), &root_options(spec))?;
                    vec![
                        n.to_string(),
                        float(a.max_modulus),
                        float(a.vieta_relative_error),
                    ]
                }
                SweepCommand::Rouche => {
                    let r = rouche_margin(
                        &counts,
                        &g.degree_profile().alpha,
                        p.c.unwrap_or(DEFAULT_C),
                        p.circle_points.unwrap_or(DEFAULT_CIRCLE_POINTS),
                    )?;
                    vec![
                        n.to_string(),
                        float(r.radius),
                        float(r.sampled_supremum),
                        float(r.min_exp_modulus),
                        float(r.witness_bound),
                        r.witness_holds.to_string(),
                    ]
                }
                SweepCommand::Poisson => {
                    let rep = poisson_deviation(&counts, p.k_max.unwrap_or(3))?;
                    let mut row = vec![n.to_string(), rep.beta.clone()];
                    row.extend(rep.rows.iter().skip(1).map(|r| r.deviation.clone()));
                    row.push(float(rep.max_abs_deviation));
                    row
                }
                SweepCommand::Beta => unreachable!(),
            }
        }
    };
    row.extend([inst.seed.to_string(), inst.rejections.to_string()]);
    Ok(row)
}

fn parse_n_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("bad size \"{s}\" in --n-list")))
        })
        .collect()
}

fn resolve(
    source: SourceArgs,
    command: Command,
    parameters: Parameters,
    format: Format,
) -> Result<ExperimentSpec> {
    let graph_source = match (source.graph, source.edge_list) {
        // Canonicalize the family text so equivalent spellings echo alike.
        (Some(f), None) => GraphSource::Family(f.parse::<Family>()?.to_string()),
        (None, Some(path)) => GraphSource::EdgeList(path),
        _ => {
            return Err(Error::InvalidArgument(
                "give exactly one of --graph and --edge-list".into(),
            ))
        }
    };
    Ok(ExperimentSpec {
        command,
        graph_source,
        parameters,
        seed: source.seed,
        output_format: format,
    })
}

fn spec_from(cli: Cli) -> Result<ExperimentSpec> {
    let format = cli.format;
    let none = Parameters::default;
    match cli.command {
        CommandArgs::Counts { source, cap } => resolve(
            source,
            Command::Counts,
            Parameters {
                cap: Some(cap),
                ..none()
            },
            format,
        ),
        CommandArgs::Beta {
            source,
            samples,
            cap,
        } => resolve(
            source,
            Command::Beta,
            Parameters {
                samples: Some(samples),
                cap: Some(cap),
                ..none()
            },
            format,
        ),
        CommandArgs::Sample {
            source,
            samples,
            b_grid,
            eps,
        } => resolve(
            source,
            Command::Sample,
            Parameters {
                samples: Some(samples),
                b_grid: Some(b_grid),
                eps: Some(eps),
                ..none()
            },
            format,
        ),
        CommandArgs::Roots {
            source,
            precision_bits,
            cap,
        } => resolve(
            source,
            Command::Roots,
            Parameters {
                precision_bits: Some(precision_bits),
                cap: Some(cap),
                ..none()
            },
            format,
        ),
        CommandArgs::Rouche {
            source,
            c,
            circle_points,
            cap,
        } => resolve(
            source,
            Command::Rouche,
            Parameters {
                c: Some(c),
                circle_points: Some(circle_points),
                cap: Some(cap),
                ..none()
            },
            format,
        ),
        CommandArgs::Poisson { source, k_max, cap } => resolve(
            source,
            Command::Poisson,
            Parameters {
                k_max: Some(k_max),
                cap: Some(cap),
                ..none()
            },
            format,
        ),
        CommandArgs::Verify { source, cap } => resolve(
            source,
            Command::Verify,
            Parameters {
                cap: Some(cap),
                ..none()
            },
            format,
        ),
        CommandArgs::TreeCheck { source } => resolve(source, Command::TreeCheck, none(), format),
        CommandArgs::Experiment {
            graph,
            n_list,
            run,
            seed,
            samples,
            c,
            circle_points,
            k_max,
            precision_bits,
            cap,
        } => {
            let mut parameters = Parameters {
                n_list: Some(parse_n_list(&n_list)?),
                run: Some(run),
                cap: Some(cap),
                ..none()
            };
            match run {
                SweepCommand::Beta => parameters.samples = Some(samples),
                SweepCommand::Roots => parameters.precision_bits = Some(precision_bits),
                SweepCommand::Rouche => {
                    parameters.c = Some(c);
                    parameters.circle_points = Some(circle_points);
                }
                SweepCommand::Poisson => parameters.k_max = Some(k_max),
                SweepCommand::Counts => {}
            }
            let source = SourceArgs {
                graph: Some(graph),
                edge_list: None,
                seed,
            };
            resolve(source, Command::Experiment, parameters, format)
        }
    }
}

/// Runs the driver on `args` (including the program name), writing the
/// document to `out` and diagnostics to `err`; returns the exit status.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let threads = cli.threads;
    let result = spec_from(cli).and_then(|spec| {
        let mut pool = rayon::ThreadPoolBuilder::new();
        if let Some(t) = threads {
            if t == 0 {
                return Err(Error::InvalidArgument("--threads must be positive".into()));
            }
            pool = pool.num_threads(t);
        }
        let pool = pool
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        let outcome = pool.install(|| run(&spec))?;
        Ok((spec.render(&outcome)?, outcome.failure))
    });
    match result {
        Ok((document, failure)) => {
            if out.write_all(document.as_bytes()).is_err() {
                return 1;
            }
            match failure {
                Some(reason) => {
                    let _ = writeln!(err, "error: assertion failed: {reason}");
                    3
                }
                None => 0,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli(args, &mut stdout.lock(), &mut stderr.lock())
}
