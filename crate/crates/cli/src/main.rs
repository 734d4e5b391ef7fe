//! `arboreq`: generate graphs, solve and verify equitable arborable list
//! colorings, run exact decisions, and replay the reproduction table.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use arboreq::bipartite::{solve_bipartite_exact, BipartiteInstance};
use arboreq::coloring::ColoringFile;
use arboreq::oracle::{
    decide_equitable_vertex_arborable, decide_equitably_k_list_arborable, exact_equitable_arborable,
};
use arboreq::random::random_assignment;
use arboreq::repro::{format_table, reproduce, ReproConfig, ReproStatus};
use arboreq::solvers::{solve, SolveOptions, Strategy};
use arboreq::{
    equity_cap, verify_certificate, Certificate, ColorId, Error, FamilySpec, Graph, ListAssignment,
    SearchBudget, Status, VerificationReport,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `println!` that exits quietly once stdout is closed, e.g. by `| head`.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout().lock(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

const EXIT_FAIL: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(
    name = "arboreq",
    version,
    about = "Equitable list arborable colorings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a graph from a named family as JSON.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Find an equitable arborable coloring and write a certificate.
    Solve {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        lists: ListArgs,
        #[arg(long)]
        k: usize,
        /// `auto` or one of the strategy names.
        #[arg(long, default_value = "auto")]
        strategy: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the extension contexts of each peel step.
        #[arg(long)]
        dump_context: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Check a certificate, or a coloring against lists and k.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, conflicts_with_all = ["coloring", "lists", "k"])]
        certificate: Option<PathBuf>,
        #[arg(long, requires_all = ["lists", "k"])]
        coloring: Option<PathBuf>,
        #[arg(long)]
        lists: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Exact feasibility decisions.
    Decide {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        k: usize,
        /// Equitable vertex arborability (no lists).
        #[arg(long, conflicts_with_all = ["all_assignments", "lists", "constant", "random"])]
        vertex: bool,
        /// Every k-assignment over colors 0..universe.
        #[arg(long, requires = "universe", conflicts_with_all = ["lists", "constant", "random"])]
        all_assignments: bool,
        #[command(flatten)]
        lists: ListArgs,
        /// Class size bound; defaults to ceil(n/k).
        #[arg(long)]
        cap: Option<usize>,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Replay the reproduction claims and print a PASS/FAIL table.
    Reproduce {
        /// A single claim id such as `thm2.7`.
        #[arg(long, conflicts_with = "all")]
        subset: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the table as JSON.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Convert a graph file to Graphviz DOT.
    ExportDot {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    PathPower,
    CyclePower,
    Complete,
    CompleteMinusEdge,
    CompleteBipartite,
    Union,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    /// Graph files joined by `--family union`.
    #[arg(long, value_delimiter = ',')]
    of: Vec<PathBuf>,
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long, conflicts_with = "family")]
    graph: Option<PathBuf>,
    #[command(flatten)]
    family: FamilyArgs,
}

#[derive(Args)]
struct ListArgs {
    /// List assignment file.
    #[arg(long, conflicts_with_all = ["constant", "random"])]
    lists: Option<PathBuf>,
    /// The same list at every vertex, e.g. `1,2,3`.
    #[arg(long, value_delimiter = ',', conflicts_with = "random")]
    constant: Option<Vec<ColorId>>,
    /// Uniform random k-subsets of `0..universe`.
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Color universe for `--random` (default 2k) and `--all-assignments`.
    #[arg(long)]
    universe: Option<usize>,
}

#[derive(Args)]
struct BudgetArg {
    /// Search budget in seconds, e.g. `30` or `600s`.
    #[arg(long, env = "ARBOREQ_BUDGET_SECS")]
    budget: Option<String>,
}

impl BudgetArg {
    fn get(&self) -> Result<SearchBudget, Failure> {
        let Some(text) = &self.budget else {
            return Ok(SearchBudget::unlimited());
        };
        let secs: f64 = text
            .trim()
            .trim_end_matches('s')
            .parse()
            .map_err(|_| Failure::usage(format!("bad budget '{text}'; expected seconds")))?;
        if !(secs.is_finite() && secs > 0.0) {
            return Err(Failure::usage(format!(
                "budget must be positive, got '{text}'"
            )));
        }
        Ok(SearchBudget::seconds(secs))
    }
}

/// An error message paired with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PRECONDITION,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Refuted(_) | Error::Internal(_) => EXIT_FAIL,
            Error::Budget => EXIT_UNKNOWN,
            _ => EXIT_PRECONDITION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Gen { family, output } => {
            let g = build_family(&family)?;
            emit(output.as_deref(), &g.to_json())?;
            Ok(0)
        }
        Command::Solve {
            graph,
            lists,
            k,
            strategy,
            output,
            dump_context,
            budget,
        } => cmd_solve(
            &graph,
            &lists,
            k,
            &strategy,
            output.as_deref(),
            dump_context.as_deref(),
            budget.get()?,
        ),
        Command::Verify {
            graph,
            certificate,
            coloring,
            lists,
            k,
        } => cmd_verify(
            &graph,
            certificate.as_deref(),
            coloring.as_deref(),
            lists.as_deref(),
            k,
        ),
        Command::Decide {
            graph,
            k,
            vertex,
            all_assignments,
            lists,
            cap,
            budget,
        } => cmd_decide(
            &graph,
            k,
            vertex,
            all_assignments,
            &lists,
            cap,
            budget.get()?,
        ),
        Command::Reproduce {
            subset,
            all,
            jobs,
            seed,
            json,
            budget,
        } => {
            if subset.is_none() && !all {
                return Err(Failure::usage("pass --subset <claim> or --all"));
            }
            let cfg = ReproConfig {
                budget: budget.get()?,
                seed,
            };
            let lines = reproduce(subset.as_deref(), &cfg, jobs)?;
            if json {
                say!("{}", serde_json::to_string_pretty(&lines)?);
            } else {
                say!("{}", format_table(&lines).trim_end());
            }
            let code = if lines.iter().any(|l| l.status == ReproStatus::Fail) {
                EXIT_FAIL
            } else if lines.iter().any(|l| l.status == ReproStatus::Skip) {
                EXIT_UNKNOWN
            } else {
                0
            };
            Ok(code)
        }
        Command::ExportDot { graph, output } => {
            let g = read_graph(&graph)?;
            emit(output.as_deref(), &g.to_dot())?;
            Ok(0)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, format!("{text}\n"))
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            say!("{text}");
            Ok(())
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(Graph::from_json(&read(path)?)?)
}

fn need(value: Option<usize>, flag: &str, family: &str) -> Result<usize, Failure> {
    value.ok_or_else(|| Failure::usage(format!("--family {family} needs --{flag}")))
}

fn build_family(args: &FamilyArgs) -> Result<Graph, Failure> {
    let family = args
        .family
        .ok_or_else(|| Failure::usage("missing --family"))?;
    let spec = match family {
        Family::PathPower => FamilySpec::PathPower {
            n: need(args.n, "n", "path-power")?,
            p: need(args.p, "p", "path-power")?,
        },
        Family::CyclePower => FamilySpec::CyclePower {
            n: need(args.n, "n", "cycle-power")?,
            p: need(args.p, "p", "cycle-power")?,
        },
        Family::Complete => FamilySpec::Complete {
            n: need(args.n, "n", "complete")?,
        },
        Family::CompleteMinusEdge => FamilySpec::CompleteMinusEdge {
            n: need(args.n, "n", "complete-minus-edge")?,
        },
        Family::CompleteBipartite => FamilySpec::CompleteBipartite {
            a: need(args.a, "a", "complete-bipartite")?,
            b: need(args.b, "b", "complete-bipartite")?,
        },
        Family::Union => {
            if args.of.is_empty() {
                return Err(Failure::usage("--family union needs --of g1.json,g2.json"));
            }
            let parts = args
                .of
                .iter()
                .map(|p| read_graph(p))
                .collect::<Result<Vec<_>, _>>()?;
            FamilySpec::Union(parts)
        }
    };
    Ok(Graph::build(&spec)?)
}

fn load_graph(args: &GraphArgs) -> Result<Graph, Failure> {
    match &args.graph {
        Some(path) => read_graph(path),
        None if args.family.family.is_some() => build_family(&args.family),
        None => Err(Failure::usage("pass --graph <file> or --family ...")),
    }
}

fn load_lists(args: &ListArgs, n: usize, k: usize) -> Result<ListAssignment, Failure> {
    let lists = if let Some(path) = &args.lists {
        ListAssignment::from_json(&read(path)?)?
    } else if let Some(colors) = &args.constant {
        ListAssignment::constant(n, colors)
    } else if args.random {
        let universe = args.universe.unwrap_or(2 * k);
        if universe < k {
            return Err(Failure::usage(format!(
                "--universe {universe} is smaller than k = {k}"
            )));
        }
        random_assignment(n, k, universe, &mut ChaCha8Rng::seed_from_u64(args.seed))
    } else {
        return Err(Failure::usage(
            "pass --lists <file>, --constant c1,c2,.. or --random",
        ));
    };
    lists.require_k_assignment(n, k)?;
    Ok(lists)
}

fn cmd_solve(
    graph: &GraphArgs,
    lists: &ListArgs,
    k: usize,
    strategy: &str,
    output: Option<&Path>,
    dump_context: Option<&Path>,
    budget: SearchBudget,
) -> CmdResult {
    let g = load_graph(graph)?;
    let lists = load_lists(lists, g.n(), k)?;
    let strategy = match strategy {
        "auto" => None,
        name => Some(Strategy::parse(name).ok_or_else(|| {
            let names: Vec<&str> = Strategy::ALL.iter().map(|s| s.name()).collect();
            Failure::usage(format!(
                "unknown strategy '{name}'; expected auto or one of {}",
                names.join(", ")
            ))
        })?),
    };
    let opts = SolveOptions {
        record_contexts: dump_context.is_some(),
        budget,
    };
    let out = solve(&g, k, &lists, strategy, &opts)?;
    let cert = Certificate::new(
        &g,
        &lists,
        k,
        &out.coloring,
        Some(out.theorem.name().to_string()),
    );
    emit(output, &serde_json::to_string_pretty(&cert)?)?;
    if let Some(path) = dump_context {
        let dump = serde_json::json!({
            "recursion_trace": out.recursion_trace,
            "contexts": out.contexts,
        });
        emit(Some(path), &serde_json::to_string_pretty(&dump)?)?;
    }
    let report = cert.report.as_ref().expect("certificate carries a report");
    eprintln!(
        "solved n = {} with {}; max class {} <= cap {}",
        g.n(),
        out.theorem.name(),
        report.max_class_size,
        report.cap
    );
    Ok(if report.passed() { 0 } else { EXIT_FAIL })
}

fn cmd_verify(
    graph: &Path,
    certificate: Option<&Path>,
    coloring: Option<&Path>,
    lists: Option<&Path>,
    k: Option<usize>,
) -> CmdResult {
    let g = read_graph(graph)?;
    let (lists, k, f) = match (certificate, coloring, lists, k) {
        (Some(cert), ..) => {
            let cert: Certificate = serde_json::from_str(&read(cert)?)?;
            if cert.schema != Certificate::SCHEMA {
                return Err(Failure::usage(format!(
                    "unsupported certificate schema {}",
                    cert.schema
                )));
            }
            let lists = cert
                .lists
                .clone()
                .ok_or_else(|| Failure::usage("certificate has no lists"))?
                .into_assignment()?;
            let f = cert.coloring(g.n())?;
            (lists, cert.k, f)
        }
        (None, Some(col), Some(lists), Some(k)) => {
            let lists = ListAssignment::from_json(&read(lists)?)?;
            let file: ColoringFile = serde_json::from_str(&read(col)?)?;
            (lists, k, file.into_coloring(g.n())?)
        }
        _ => {
            return Err(Failure::usage(
                "pass --certificate, or --coloring with --lists and --k",
            ))
        }
    };
    if lists.n() != g.n() {
        return Err(Failure::usage(format!(
            "{} lists for {} vertices",
            lists.n(),
            g.n()
        )));
    }
    if k == 0 {
        return Err(Failure::usage("k must be positive"));
    }
    let report = verify_certificate(&g, &lists, k, &f);
    print_report(&report);
    Ok(if report.passed() { 0 } else { EXIT_FAIL })
}

fn print_report(r: &VerificationReport) {
    if r.passed() {
        say!(
            "PASS: arborable, list-respecting, max class {} <= cap {}",
            r.max_class_size,
            r.cap
        );
        return;
    }
    say!("FAIL");
    if !r.total {
        say!("  not every vertex is colored");
    }
    if let Some(v) = r.list_violation {
        say!("  vertex {v} has a color outside its list");
    }
    if let (Some(c), Some(cycle)) = (r.offending_class, &r.offending_cycle) {
        let cycle: Vec<String> = cycle.iter().map(|v| v.to_string()).collect();
        say!("  class {c} contains the cycle {}", cycle.join(" - "));
    }
    if let Some(c) = r.over_cap_class {
        say!(
            "  class {c} has more than {} vertices (largest class: {})",
            r.cap,
            r.max_class_size
        );
    }
}

fn cmd_decide(
    graph: &GraphArgs,
    k: usize,
    vertex: bool,
    all_assignments: bool,
    lists: &ListArgs,
    cap: Option<usize>,
    budget: SearchBudget,
) -> CmdResult {
    let g = load_graph(graph)?;
    if k == 0 {
        return Err(Failure::usage("k must be positive"));
    }
    let verdict = if vertex {
        decide_equitable_vertex_arborable(&g, k, budget)
    } else if all_assignments {
        let universe = lists.universe.expect("clap requires --universe");
        if universe < k {
            return Err(Failure::usage(format!(
                "--universe {universe} is smaller than k = {k}"
            )));
        }
        let v = decide_equitably_k_list_arborable(&g, k, universe, budget);
        if !v.complete {
            say!(
                "note: incomplete decision; only assignments over {universe} colors were checked (complete needs {})",
                k * g.n()
            );
        }
        if let Some(bad) = &v.refuted_assignment {
            say!("refuting assignment: {}", bad.to_json());
        }
        v
    } else {
        let lists = load_lists(lists, g.n(), k)?;
        let cap = cap.unwrap_or_else(|| equity_cap(g.n().max(1), k));
        match g.complete_bipartite_sides() {
            Some((x, _)) if x.iter().copied().eq(0..x.len()) => {
                let inst = BipartiteInstance::new(x.len(), g.n() - x.len(), lists)?;
                solve_bipartite_exact(&inst, cap, budget)
            }
            _ => exact_equitable_arborable(&g, &lists, cap, budget),
        }
    };
    say!("{:?} (nodes: {})", verdict.status, verdict.nodes);
    if let Some(w) = &verdict.witness {
        say!("witness: {}", w.to_json());
    }
    Ok(match verdict.status {
        Status::Feasible => 0,
        Status::Infeasible => EXIT_FAIL,
        Status::Unknown => EXIT_UNKNOWN,
    })
}
