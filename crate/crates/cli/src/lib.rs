//! Batch front-end for `edgecolor-core`.
//!
//! [`run_command`] takes the argument vector and returns the exit status with
//! the captured output, so tests can drive the tool without a subprocess.
//! Exit statuses: 0 success, 1 negative answer, 2 input error, 3 search
//! budget exhausted, 4 internal failure.

pub mod generate;
pub mod io;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use edgecolor_core::base_color::{exact_chromatic_index, vizing_gupta_color, DEFAULT_BUDGET};
use edgecolor_core::density::{gamma, maximal_k_dense_subgraphs};
use edgecolor_core::extend::{extend_precoloring, Strategy};
use edgecolor_core::oracle::verify_extension;
use edgecolor_core::trace::{from_json, replay, to_json};
use edgecolor_core::{Error, Multigraph};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "edgecolor", about = "Edge coloring of multigraphs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    PaperFirst,
    OracleOnly,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Color with at most Δ+μ colors
    Color { graph: PathBuf },
    /// Extend a precolored distance-3 matching to a (Δ+μ)-coloring
    Extend {
        graph: PathBuf,
        precoloring: PathBuf,
        #[arg(long, value_enum, default_value = "paper-first")]
        strategy: StrategyArg,
        /// Write the JSON operation trace here
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the coloring here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a coloring against a graph and precoloring
    Verify {
        graph: PathBuf,
        precoloring: PathBuf,
        coloring: PathBuf,
    },
    /// Exact density Γ
    Gamma { graph: PathBuf },
    /// Maximal k-dense subgraphs
    Dense {
        graph: PathBuf,
        #[arg(long)]
        k: u32,
    },
    /// Exact chromatic index
    Chi { graph: PathBuf },
    /// Replay a JSON trace and print the final coloring
    Trace { graph: PathBuf, trace: PathBuf },
    /// Print a seeded random connected multigraph
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        max_edges: usize,
        #[arg(long, default_value_t = 3)]
        mu: usize,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_) | Error::Parse { .. } => 2,
        Error::Resource { .. } => 3,
        _ => 4,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Multigraph, Error> {
    io::parse_graph_file(&read(path)?)
}

/// Runs one command. `argv[0]` is the program name.
pub fn run_command<I, S>(argv: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut out = Output::default();
    if let Err(e) = dispatch(cli.command, &mut out) {
        out.code = exit_code(&e);
        out.stderr.push_str(&format!("error: {e}\n"));
    }
    out
}

fn dispatch(cmd: Command, out: &mut Output) -> Result<(), Error> {
    match cmd {
        Command::Color { graph } => {
            let g = load_graph(&graph)?;
            let c = vizing_gupta_color(&g)?;
            let used = c.used_colors(&g).len();
            out.stdout.push_str(&format!(
                "# colors used: {used} of Δ+μ = {}\n",
                g.max_degree() + g.max_multiplicity()
            ));
            out.stdout.push_str(&io::write_coloring(&g, &c));
        }
        Command::Extend {
            graph,
            precoloring,
            strategy,
            trace,
            output,
        } => {
            let g = load_graph(&graph)?;
            let p = io::parse_precoloring_file(&g, &read(&precoloring)?)?;
            let strategy = match strategy {
                StrategyArg::PaperFirst => Strategy::PaperFirst,
                StrategyArg::OracleOnly => Strategy::OracleOnly,
            };
            let ext = extend_precoloring(&g, &p, strategy)?;
            let coloring = io::write_coloring(&g, &ext.coloring);
            match output {
                Some(path) => write(&path, &coloring)?,
                None => out.stdout.push_str(&coloring),
            }
            if let Some(path) = trace {
                write(&path, &to_json(&ext.trace))?;
            }
            let cases: Vec<&str> = ext.cases.iter().map(|c| c.name()).collect();
            out.stderr.push_str(&format!("cases: [{}]\n", cases.join(", ")));
            match &ext.fallback_reason {
                Some(r) if ext.fallback => out.stderr.push_str(&format!("fallback: {r}\n")),
                _ => out.stderr.push_str("fallback: none\n"),
            }
        }
        Command::Verify {
            graph,
            precoloring,
            coloring,
        } => {
            let g = load_graph(&graph)?;
            let p = io::parse_precoloring_file(&g, &read(&precoloring)?)?;
            let c = io::parse_coloring_file(&g, &read(&coloring)?)?;
            let report = verify_extension(&g, &p, &c);
            if report.ok {
                out.stdout.push_str("ok\n");
            } else {
                out.code = 1;
                for d in &report.diagnostics {
                    out.stdout.push_str(&format!("{d}\n"));
                }
            }
        }
        Command::Gamma { graph } => {
            let g = load_graph(&graph)?;
            let r = gamma(&g, g.vertex_count().max(3))?;
            out.stdout.push_str(&format!("{r}\n"));
        }
        Command::Dense { graph, k } => {
            let g = load_graph(&graph)?;
            for h in maximal_k_dense_subgraphs(&g, k)? {
                let vs: Vec<String> = h.vertices.iter().map(|v| v.to_string()).collect();
                out.stdout.push_str(&format!("{}\n", vs.join(" ")));
            }
        }
        Command::Chi { graph } => {
            let g = load_graph(&graph)?;
            let (chi, _) = exact_chromatic_index(&g, DEFAULT_BUDGET)?;
            out.stdout.push_str(&format!("{chi}\n"));
        }
        Command::Trace { graph, trace } => {
            let g = load_graph(&graph)?;
            let steps = from_json(&read(&trace)?)?;
            let palette = (g.max_degree() + g.max_multiplicity()) as u32;
            let c = replay(&g, palette, &steps)?;
            out.stdout.push_str(&io::write_coloring(&g, &c));
        }
        Command::Gen {
            seed,
            n,
            max_edges,
            mu,
        } => {
            if n == 0 || mu == 0 || max_edges + 1 < n {
                return Err(Error::Input("need n >= 1, mu >= 1 and max-edges >= n - 1".into()));
            }
            let g = generate::random_multigraph(&mut generate::rng(seed), n, max_edges, mu);
            out.stdout.push_str(&io::write_graph(&g));
        }
    }
    Ok(())
}
