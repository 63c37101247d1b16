//! Command-line front end: graph validation, class enumeration, exact
//! counts, spectral cross-checks, growth diagnostics, and the built-in
//! verification suite.
//!
//! Exit codes: 0 success, 2 usage error, 3 validation failure, 4 budget
//! exceeded, 5 verification failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;
use treecount::asymptotics::{
    constants, convergence_report, AsymptoticConstants, ConvergenceDiagnostics,
};
use treecount::counter::count_class;
use treecount::cover::TreePath;
use treecount::error::Error;
use treecount::fixtures;
use treecount::graph::RegularGraph;
use treecount::spectral::{eigendecompose, g_closed, g_series};
use treecount::verify;
use treecount::words::{
    class_of_walk, class_of_word, enumerate_classes, ClassDescriptor, SpanningTree, Walk, Word,
};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "treecount",
    version,
    about = "Exact conjugacy-class lattice-point counts on regular trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArg {
    /// Path to an edge-list file, or a built-in fixture name
    /// (k4, k5, petersen, k33)
    #[arg(long)]
    graph: String,
}

#[derive(Args)]
struct ClassArg {
    /// Closed walk as a vertex sequence, e.g. "0 1 2 0"
    #[arg(long, conflicts_with = "class_word")]
    class_walk: Option<String>,
    /// Free-group word as signed generator indices, e.g. "1 -2 3"
    #[arg(long)]
    class_word: Option<String>,
}

#[derive(Args)]
struct BasepointArgs {
    /// Quotient vertex under the basepoint (spanning-tree base)
    #[arg(long, default_value_t = 0)]
    base_vertex: usize,
    /// Walk from the base vertex whose lift is the basepoint, e.g. "0 3 1"
    #[arg(long)]
    offset_walk: Option<String>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format; counts default to csv, everything else to json
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a graph and report bipartiteness with a certificate
    Validate {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Enumerate conjugacy classes up to a walk length
    Classes {
        #[command(flatten)]
        graph: GraphArg,
        /// Largest class length mu to enumerate
        #[arg(long)]
        mu_max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact count table N_K(x, n) for one class
    Count {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        class: ClassArg,
        #[command(flatten)]
        basepoint: BasepointArgs,
        #[arg(long, default_value_t = 15)]
        n_max: usize,
        /// Maximum number of tree vertices to enumerate
        #[arg(long, default_value_t = verify::DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closed form vs direct series at one or more s-points
    SpectralCheck {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        class: ClassArg,
        /// s-points as "RE[,IM][;RE[,IM]...]"
        #[arg(long, default_value = "2.5;3.0;2.5,0.7")]
        s: String,
        /// Series truncation depth (clamped to the budget-feasible radius)
        #[arg(long, default_value_t = 40)]
        truncation: usize,
        #[arg(long, default_value_t = verify::DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Asymptotic constants and convergence diagnostics for one class
    Asymptotics {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        class: ClassArg,
        #[command(flatten)]
        basepoint: BasepointArgs,
        #[arg(long, default_value_t = 15)]
        n_max: usize,
        #[arg(long, default_value_t = verify::DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Count table plus asymptotic report in one document
    Report {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        class: ClassArg,
        #[command(flatten)]
        basepoint: BasepointArgs,
        #[arg(long, default_value_t = 15)]
        n_max: usize,
        #[arg(long, default_value_t = verify::DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the full verification suite on the embedded fixtures
    Verify {
        #[arg(long, default_value_t = verify::DEFAULT_BUDGET)]
        budget: u64,
    },
}

/// Failure modes mapped to exit codes.
enum CliError {
    Usage(String),
    Validation(String),
    Budget(String),
    VerifyFailed,
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Validation(format!("io: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
        Err(CliError::VerifyFailed) => {
            eprintln!("error: verification suite failed");
            ExitCode::from(5)
        }
    }
}

fn load_graph(spec: &str) -> Result<RegularGraph, CliError> {
    let text = match fixtures::by_name(spec) {
        Some(embedded) => embedded.to_string(),
        None => std::fs::read_to_string(spec)
            .map_err(|e| CliError::Validation(format!("cannot read {spec}: {e}")))?,
    };
    Ok(RegularGraph::parse(&text)?)
}

fn parse_vertices(text: &str) -> Result<Vec<usize>, CliError> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad vertex '{t}' in walk")))
        })
        .collect()
}

fn resolve_class(
    g: &RegularGraph,
    st: &SpanningTree,
    class: &ClassArg,
) -> Result<ClassDescriptor, CliError> {
    match (&class.class_walk, &class.class_word) {
        (Some(walk), None) => {
            let vs = parse_vertices(walk)?;
            let w = Walk::from_vertices(g, &vs)?;
            Ok(class_of_walk(g, &w)?)
        }
        (None, Some(word)) => {
            let letters: Vec<i64> = word
                .split_whitespace()
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| CliError::Usage(format!("bad letter '{t}' in word")))
                })
                .collect::<Result<_, _>>()?;
            let w = Word::reduce(&letters, st.rank())?;
            Ok(class_of_word(g, st, &w)?)
        }
        _ => Err(CliError::Usage(
            "exactly one of --class-walk or --class-word is required".into(),
        )),
    }
}

fn resolve_basepoint(
    g: &RegularGraph,
    st: &SpanningTree,
    args: &BasepointArgs,
) -> Result<TreePath, CliError> {
    match &args.offset_walk {
        None => Ok(TreePath::root()),
        Some(text) => {
            let vs = parse_vertices(text)?;
            if vs.first() != Some(&args.base_vertex) {
                return Err(CliError::Usage(format!(
                    "offset walk must start at base vertex {}",
                    args.base_vertex
                )));
            }
            let w = Walk::from_vertices(g, &vs)?;
            Ok(TreePath::from_walk(g, st, &w)?)
        }
    }
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    schema_version: u32,
    command: &'static str,
    data: T,
}

fn emit<T: Serialize>(
    command: &'static str,
    data: T,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let doc = serde_json::to_string_pretty(&Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        data,
    })
    .expect("report types serialize");
    write_out(output, &format!("{doc}\n"))
}

fn write_out(output: &OutputArgs, text: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// One s-point of a spectral check, with complex values flattened for
/// stable serialization.
#[derive(Serialize)]
struct SpectralCheckRow {
    s_re: f64,
    s_im: f64,
    closed_re: f64,
    closed_im: f64,
    series_re: f64,
    series_im: f64,
    abs_error: f64,
    rel_error: f64,
    tail_bound: f64,
    tail_rigorous: bool,
    truncation: usize,
    min_denominator: f64,
    within_tolerance: bool,
}

fn parse_s_points(text: &str) -> Result<Vec<Complex64>, CliError> {
    let mut out = Vec::new();
    for part in text.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let mut nums = part.split(',').map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad s-point component '{t}'")))
        });
        let re = nums
            .next()
            .ok_or_else(|| CliError::Usage("empty s-point".into()))??;
        let im = nums.next().transpose()?.unwrap_or(0.0);
        if nums.next().is_some() {
            return Err(CliError::Usage(format!("too many components in '{part}'")));
        }
        out.push(Complex64::new(re, im));
    }
    if out.is_empty() {
        return Err(CliError::Usage("no s-points given".into()));
    }
    Ok(out)
}

#[derive(Serialize)]
struct AsymptoticsDoc {
    constants: AsymptoticConstants,
    diagnostics: ConvergenceDiagnostics,
}

#[derive(Serialize)]
struct ReportDoc {
    table_csv: String,
    constants: AsymptoticConstants,
    diagnostics: ConvergenceDiagnostics,
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Validate { graph, output } => {
            let g = load_graph(&graph.graph)?;
            emit("validate", g.validate(), &output)
        }
        Command::Classes {
            graph,
            mu_max,
            output,
        } => {
            let g = load_graph(&graph.graph)?;
            let classes = enumerate_classes(&g, mu_max);
            emit("classes", classes, &output)
        }
        Command::Count {
            graph,
            class,
            basepoint,
            n_max,
            budget,
            output,
        } => {
            let g = load_graph(&graph.graph)?;
            let st = SpanningTree::new(&g, checked_vertex(&g, basepoint.base_vertex)?);
            let k = resolve_class(&g, &st, &class)?;
            let x = resolve_basepoint(&g, &st, &basepoint)?;
            let table = count_class(&g, &st, &k, &x, n_max, budget)?;
            match output.format.unwrap_or(Format::Csv) {
                Format::Csv => write_out(&output, &table.to_csv()),
                Format::Json => emit("count", table, &output),
            }
        }
        Command::SpectralCheck {
            graph,
            class,
            s,
            truncation,
            budget,
            output,
        } => {
            let g = load_graph(&graph.graph)?;
            let st = SpanningTree::new(&g, 0);
            let k = resolve_class(&g, &st, &class)?;
            let points = parse_s_points(&s)?;
            let spec = eigendecompose(&g);
            let n_max = truncation.min(verify::max_radius(g.q(), budget));
            let table = count_class(&g, &st, &k, &TreePath::root(), n_max, budget)?;
            let mut rows = Vec::new();
            for s in points {
                let closed = g_closed(&g, &spec, &k, st.base_vertex(), s)?;
                let series = g_series(&table, s);
                let abs_error = (closed.value - series.value).norm();
                rows.push(SpectralCheckRow {
                    s_re: s.re,
                    s_im: s.im,
                    closed_re: closed.value.re,
                    closed_im: closed.value.im,
                    series_re: series.value.re,
                    series_im: series.value.im,
                    abs_error,
                    rel_error: abs_error / closed.value.norm(),
                    tail_bound: series.tail_bound,
                    tail_rigorous: series.rigorous,
                    truncation: series.truncation,
                    min_denominator: closed.min_denominator,
                    within_tolerance: abs_error
                        <= 1e-6 * closed.value.norm() + series.tail_bound,
                });
            }
            emit("spectral-check", rows, &output)
        }
        Command::Asymptotics {
            graph,
            class,
            basepoint,
            n_max,
            budget,
            output,
        } => {
            let (doc, output) =
                build_asymptotics(graph, class, basepoint, n_max, budget, output)?;
            emit("asymptotics", doc, &output)
        }
        Command::Report {
            graph,
            class,
            basepoint,
            n_max,
            budget,
            output,
        } => {
            let g = load_graph(&graph.graph)?;
            let st = SpanningTree::new(&g, checked_vertex(&g, basepoint.base_vertex)?);
            let k = resolve_class(&g, &st, &class)?;
            let x = resolve_basepoint(&g, &st, &basepoint)?;
            let table = count_class(&g, &st, &k, &x, n_max, budget)?;
            let c = constants(&g, &k);
            let diagnostics = convergence_report(&table, &c)?;
            emit(
                "report",
                ReportDoc {
                    table_csv: table.to_csv(),
                    constants: c,
                    diagnostics,
                },
                &output,
            )
        }
        Command::Verify { budget } => {
            let outcomes = verify::run_all(budget);
            for o in &outcomes {
                println!("{}", o.line());
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            println!(
                "{} passed, {} failed of {} criteria",
                outcomes.len() - failed,
                failed,
                outcomes.len()
            );
            if failed > 0 {
                return Err(CliError::VerifyFailed);
            }
            Ok(())
        }
    }
}

fn checked_vertex(g: &RegularGraph, v: usize) -> Result<usize, CliError> {
    if v >= g.num_vertices() {
        return Err(CliError::Validation(format!(
            "base vertex {v} out of range 0..{}",
            g.num_vertices()
        )));
    }
    Ok(v)
}

fn build_asymptotics(
    graph: GraphArg,
    class: ClassArg,
    basepoint: BasepointArgs,
    n_max: usize,
    budget: u64,
    output: OutputArgs,
) -> Result<(AsymptoticsDoc, OutputArgs), CliError> {
    let g = load_graph(&graph.graph)?;
    let st = SpanningTree::new(&g, checked_vertex(&g, basepoint.base_vertex)?);
    let k = resolve_class(&g, &st, &class)?;
    let x = resolve_basepoint(&g, &st, &basepoint)?;
    let table = count_class(&g, &st, &k, &x, n_max, budget)?;
    let c = constants(&g, &k);
    let diagnostics = convergence_report(&table, &c)?;
    Ok((
        AsymptoticsDoc {
            constants: c,
            diagnostics,
        },
        output,
    ))
}
