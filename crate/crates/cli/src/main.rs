//! `zhat`: exact q-series invariants of negative-definite plumbed 3-manifolds.
//!
//! Every `--order` is measured in q-exponent units of the series that is printed.

mod commands;
mod input;

use clap::{Args, Parser, Subcommand, ValueEnum};
use commands::Report;
use num_rational::Rational64;
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use zhat::seifert::SeifertData;
use zhat::Error;

#[derive(Parser)]
#[command(
    name = "zhat",
    version,
    about = "Exact q-series invariants of negative-definite plumbed 3-manifolds"
)]
struct Cli {
    /// Output rendering.
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Pretty,
    Json,
}

/// A plumbing graph file (text or JSON, `-` for stdin) or Seifert data.
#[derive(Args)]
struct GraphInput {
    graph: Option<PathBuf>,
    /// Seifert data `b; a1/b1 a2/b2 …` instead of a graph file.
    #[arg(long)]
    seifert: Option<String>,
}

impl GraphInput {
    fn load(&self) -> zhat::Result<zhat::plumbing::PlumbingGraph> {
        input::resolve_graph(self.graph.as_deref(), self.seifert.as_deref())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Ẑ_b for every spin^c class (order in units of q).
    Zhat {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_parser = input::parse_order)]
        order: Rational64,
        /// Index of a single spin^c class.
        #[arg(long)]
        spinc: Option<usize>,
        /// Report enumeration progress on stderr.
        #[arg(long)]
        progress: bool,
    },
    /// Ẑ'_h for every h in H (order in units of q).
    ZhatPrime {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_parser = input::parse_order)]
        order: Rational64,
        /// A single element `x1,x2,…` in divisor coordinates.
        #[arg(long)]
        element: Option<String>,
    },
    /// Z₀; with --scaled, Z₀(q^|H|) with the order in scaled units.
    Z0 {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_parser = input::parse_order)]
        order: Rational64,
        #[arg(long)]
        scaled: bool,
    },
    /// q^(−6λ)·Z₀(q^|H|) (order in its own units).
    Z0Normalized {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_parser = input::parse_order)]
        order: Rational64,
    },
    /// Splice diagram, maximal weights and the adjugate identity.
    Splice {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Casson–Walker invariant λ.
    CassonWalker {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Z₀(q^|H|) and Ẑ'_h(q^|H|) of Seifert data by the one-variable reduction.
    SeifertReduce {
        /// Seifert data `b; a1/b1 a2/b2 …`.
        data: String,
        /// Order in units of q^|H|-scaled series.
        #[arg(long, value_parser = input::parse_order)]
        order: Rational64,
        /// Recompute along the plumbing path and compare termwise.
        #[arg(long)]
        compare: bool,
    },
    /// Flat-connection census and the Casson–Milnor check.
    Connections {
        #[arg(required = true, num_args = 3..)]
        fibres: Vec<i64>,
    },
    /// Match the Ẑ_b family against (1,p) singlet characters.
    Identify {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_parser = input::parse_order, default_value = "60")]
        order: Rational64,
        #[arg(long, default_value_t = 12)]
        max_p: i64,
    },
    /// Apply a script of Neumann moves.
    Moves {
        #[command(flatten)]
        input: GraphInput,
        /// One move per line: `blowup-leaf L ±1`, `blowup-edge L1 L2 ±1`, `blowdown L`.
        #[arg(long)]
        script: PathBuf,
    },
    /// Write the golden graphs and series into a directory.
    SeedCorpus { dir: PathBuf },
}

fn run(cmd: &Command) -> zhat::Result<Report> {
    match cmd {
        Command::Zhat {
            input,
            order,
            spinc,
            progress,
        } => commands::zhat(&input.load()?, *order, *spinc, *progress),
        Command::ZhatPrime { input, order, element } => {
            commands::zhat_prime(&input.load()?, *order, element.as_deref())
        }
        Command::Z0 { input, order, scaled } => commands::z0(&input.load()?, *order, *scaled),
        Command::Z0Normalized { input, order } => commands::z0_normalized(&input.load()?, *order),
        Command::Splice { input } => commands::splice(&input.load()?),
        Command::CassonWalker { input } => commands::casson_walker_cmd(&input.load()?),
        Command::SeifertReduce { data, order, compare } => {
            commands::seifert_reduce(&SeifertData::parse(data)?, *order, *compare)
        }
        Command::Connections { fibres } => commands::connections(fibres),
        Command::Identify { input, order, max_p } => commands::identify(&input.load()?, *order, *max_p),
        Command::Moves { input, script } => commands::moves(&input.load()?, &input::read_text(script)?),
        Command::SeedCorpus { dir } => commands::seed_corpus(dir),
    }
}

fn error_record(e: &Error) -> serde_json::Value {
    let mut rec = json!({ "error": { "kind": e.kind(), "message": e.to_string(), "exit_code": e.exit_code() } });
    if let Error::Parse { line, column, .. } = e {
        rec["error"]["line"] = json!(line);
        rec["error"]["column"] = json!(column);
    }
    rec
}

fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("ZHAT_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| Error::Parse {
        line: 1,
        column: 1,
        message: format!("ZHAT_THREADS must be a positive integer, got {v:?}"),
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Internal(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| run(&cli.command));
    match outcome {
        Ok(report) => {
            let text = match cli.format {
                Format::Pretty => report.pretty,
                Format::Json => serde_json::to_string_pretty(&report.json).expect("report serialises") + "\n",
            };
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
                Ok(()) => ExitCode::from(report.exit as u8),
                // A closed reader is not an error of ours.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::from(report.exit as u8),
                Err(e) => {
                    eprintln!("error: writing output: {e}");
                    ExitCode::from(4)
                }
            }
        }
        Err(e) => {
            let rec = error_record(&e);
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&rec).expect("record serialises")),
                Format::Pretty => eprintln!("error: {e}\n{rec}"),
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
