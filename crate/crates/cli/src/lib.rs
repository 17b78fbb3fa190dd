//! Batch command-line surface: `check`, `search`, `la`, `construct`, `conjectures`.
//!
//! Exit codes: 0 when the property holds or the optimum is proven, 1 on a
//! violation (or a bound-only result under `--require-exact`), 2 on usage
//! and parse errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use trace_sperner::constructions::parse_construction;
use trace_sperner::report::{
    conjecture_table, table_to_csv, table_to_json, table_to_text, CheckDocument, ProblemDescriptor,
    SearchDocument,
};
use trace_sperner::search::{max_p_free_with, max_trace_sperner_with, SearchBudget, SearchOptions};
use trace_sperner::text::{parse_family, parse_poset, parse_poset_shorthand, write_family};
use trace_sperner::{GroundSize, TraceProblem, TreePoset};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "tsperner", version, about = "Traces of set families: trace-Sperner checks and exact extremal searches")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Wall-clock budget per search, in seconds.
    #[arg(long, global = true)]
    pub max_seconds: Option<f64>,
    /// Branch-node budget per search.
    #[arg(long, global = true)]
    pub max_nodes: Option<u64>,
    #[arg(long, default_value_t = 1, global = true)]
    pub threads: usize,
    /// Schedule-independent results and byte-stable documents.
    #[arg(long, global = true)]
    pub deterministic: bool,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Disable symmetry pruning.
    #[arg(long, global = true)]
    pub no_symmetry: bool,
    /// Number of extremal families to report.
    #[arg(long, default_value_t = 4, global = true)]
    pub witnesses: usize,
    /// Depth at which subtrees are handed to worker threads.
    #[arg(long, default_value_t = 3, global = true)]
    pub frontier_depth: usize,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct WindowArg {
    /// Window size l.
    #[arg(long)]
    pub l: Option<u32>,
    /// Removed-set size l' (window size n - l').
    #[arg(long)]
    pub lp: Option<u32>,
}

impl WindowArg {
    fn problem(&self, ground: GroundSize, k: usize) -> trace_sperner::Result<TraceProblem> {
        match (self.l, self.lp) {
            (Some(l), None) => TraceProblem::new(ground, l, k),
            (None, Some(lp)) => TraceProblem::co_window(ground, lp, k),
            _ => unreachable!("clap enforces exactly one of --l / --lp"),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check whether a family file is l-trace k-Sperner.
    Check {
        family: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        window: WindowArg,
    },
    /// Compute f(n, k, l).
    Search {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        window: WindowArg,
        /// Exit 1 unless optimality is proven.
        #[arg(long)]
        require_exact: bool,
    },
    /// Compute La(n, P) for a tree poset.
    La {
        #[arg(long)]
        n: u32,
        /// `chain:<k>`, `tree:h=<h>,c=<c>`, or a path to a poset file.
        #[arg(long)]
        poset: String,
        #[arg(long)]
        require_exact: bool,
    },
    /// Write a named family in the family text format.
    Construct {
        /// `level:n=..,i=..`, `band:n=..,lo=..,hi=..`, `low:n=..,l=..`, or `midband:n=..,k=..,lp=..`
        shorthand: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Tabulate f(n, k, n - l') against the conjectured forms.
    Conjectures {
        #[arg(long)]
        n_max: u32,
        #[arg(long)]
        k_max: usize,
    },
}

impl GlobalOpts {
    pub fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_seconds: self.max_seconds,
            max_nodes: self.max_nodes.unwrap_or(u64::MAX),
            threads: self.threads.max(1),
            deterministic: self.deterministic,
        }
    }

    pub fn options(&self) -> SearchOptions {
        SearchOptions {
            symmetry: !self.no_symmetry,
            frontier_depth: self.frontier_depth,
            witness_limit: self.witnesses.max(1),
            seed: self.seed,
            ..SearchOptions::default()
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            code
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[derive(Debug)]
enum CliError {
    Engine(trace_sperner::Error),
    Io(PathBuf, std::io::Error),
    Output(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Engine(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Output(e) => write!(f, "writing output: {e}"),
        }
    }
}

impl From<trace_sperner::Error> for CliError {
    fn from(e: trace_sperner::Error) -> Self {
        CliError::Engine(e)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(CliError::Output)
}

fn load_poset(spec: &str) -> Result<TreePoset, CliError> {
    if spec.starts_with("chain:") || spec.starts_with("tree:") {
        return Ok(parse_poset_shorthand(spec)?);
    }
    Ok(parse_poset(&read(Path::new(spec))?)?)
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    let g = &cli.global;
    let format = g.format;
    match &cli.command {
        Command::Check { family, k, window } => {
            let fam = parse_family(&read(family)?)?;
            let problem = window.problem(fam.ground(), *k)?;
            let violation = fam.find_violation(&problem)?;
            let doc = CheckDocument::new(&fam, &problem, violation.as_ref());
            emit(
                out,
                &match format {
                    Format::Json => doc.to_json(),
                    Format::Csv => doc.to_csv(),
                    Format::Text => doc.to_text(),
                },
            )?;
            Ok(if doc.holds { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Search {
            n,
            k,
            window,
            require_exact,
        } => {
            let problem = window.problem(GroundSize::new(*n)?, *k)?;
            let (budget, options) = (g.budget(), g.options());
            let result = max_trace_sperner_with(&problem, &budget, &options);
            let doc = SearchDocument::new(ProblemDescriptor::trace(&problem), &result, &budget, &options);
            emit_search(out, &doc, format)?;
            Ok(exactness_code(result.is_optimal(), *require_exact))
        }
        Command::La {
            n,
            poset,
            require_exact,
        } => {
            let ground = GroundSize::new(*n)?;
            let poset = load_poset(poset)?;
            let (budget, options) = (g.budget(), g.options());
            let result = max_p_free_with(ground, &poset, &budget, &options);
            let doc = SearchDocument::new(ProblemDescriptor::p_free(ground, &poset), &result, &budget, &options);
            emit_search(out, &doc, format)?;
            Ok(exactness_code(result.is_optimal(), *require_exact))
        }
        Command::Construct { shorthand, output } => {
            let fam = parse_construction(shorthand)?;
            let text = write_family(&fam);
            match output {
                Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(path.clone(), e))?,
                None => emit(out, &text)?,
            }
            Ok(EXIT_OK)
        }
        Command::Conjectures { n_max, k_max } => {
            let rows = conjecture_table(*n_max, *k_max, &g.budget(), &g.options())?;
            emit(
                out,
                &match format {
                    Format::Json => table_to_json(&rows),
                    Format::Csv => table_to_csv(&rows),
                    Format::Text => table_to_text(&rows),
                },
            )?;
            Ok(EXIT_OK)
        }
    }
}

fn emit_search(out: &mut dyn Write, doc: &SearchDocument, format: Format) -> Result<(), CliError> {
    emit(
        out,
        &match format {
            Format::Json => doc.to_json(),
            Format::Csv => doc.to_csv(),
            Format::Text => doc.to_text(),
        },
    )
}

fn exactness_code(optimal: bool, required: bool) -> u8 {
    if optimal || !required {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}
