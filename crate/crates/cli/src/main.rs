use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use arborist::generate::random_graph;
use arborist::Graph;
use arborist_cli::commands::{self, TreeRecord};
use arborist_cli::graph_io::{parse_graph, write_graph, Format};
use arborist_cli::CliError;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "arborist",
    version,
    about = "K-best maximum spanning arborescences and dependency trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Where the graph comes from: a file, a seeded generator, or stdin.
#[derive(Args)]
struct Source {
    /// Graph file; read from stdin when neither this nor --n is given.
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Input format; defaults to the file extension, JSON otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Generate a random graph with this many non-root nodes instead.
    #[arg(long, conflicts_with = "input")]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge probability for the generator.
    #[arg(long, default_value_t = 1.0)]
    density: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Print the K best trees, one JSON object per line.
    Kbest {
        #[command(flatten)]
        source: Source,
        #[arg(long, short, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Only dependency trees (a single edge leaving the root).
        #[arg(long)]
        dep: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Compare the full decoded stream with exhaustive enumeration.
    Check {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        dep: bool,
        /// Check a previously saved `kbest` stream instead of decoding afresh.
        #[arg(long)]
        stream: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Count K-best trees that have more than one root child.
    Stats {
        #[command(flatten)]
        source: Source,
        #[arg(long, short, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long)]
        dep: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Time K-best with the integrated second-best step against re-decoding.
    Bench {
        #[command(flatten)]
        source: Source,
        #[arg(long, short, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Write a seeded random graph with distinct integer weights.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn load(source: &Source) -> Result<Graph, CliError> {
    if let Some(n) = source.n {
        if !(0.0..=1.0).contains(&source.density) {
            return Err(CliError::Parse(format!("density {} is not in [0, 1]", source.density)));
        }
        return Ok(random_graph(n, source.density, source.seed));
    }
    let (text, format) = match &source.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
            (text, source.format.unwrap_or_else(|| Format::from_path(path)))
        }
        None => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            (text, source.format.unwrap_or_default())
        }
    };
    let g = parse_graph(&text, format)?;
    log::info!(
        "loaded graph with {} nodes and {} edges",
        g.node_count(),
        g.edge_count()
    );
    Ok(g)
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_stream(path: &PathBuf) -> Result<Vec<TreeRecord>, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(TreeRecord::parse)
        .collect()
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Kbest { source, k, dep, output } => {
            let g = load(&source)?;
            let mut out = sink(&output)?;
            commands::write_kbest(&g, k as usize, dep, &mut out)?;
            out.flush()?;
        }
        Command::Check {
            source,
            dep,
            stream,
            output,
        } => {
            let g = load(&source)?;
            let candidate = stream.as_ref().map(read_stream).transpose()?;
            let report = commands::check(&g, dep, candidate)?;
            let mut out = sink(&output)?;
            writeln!(out, "{report}")?;
            out.flush()?;
            if let Some(d) = report.divergence {
                return Err(CliError::Divergence(d.to_string()));
            }
        }
        Command::Stats { source, k, dep, output } => {
            let g = load(&source)?;
            let report = commands::stats(&g, k as usize, dep)?;
            let mut out = sink(&output)?;
            writeln!(out, "{}", serde_json::to_string(&report).expect("reports serialize"))?;
            out.flush()?;
        }
        Command::Bench { source, k, output } => {
            let g = load(&source)?;
            let report = commands::bench(&g, k as usize)?;
            let mut out = sink(&output)?;
            writeln!(out, "{}", serde_json::to_string(&report).expect("reports serialize"))?;
            out.flush()?;
            if !report.identical {
                return Err(CliError::Divergence(
                    "the two K-best variants produced different weights".into(),
                ));
            }
        }
        Command::Generate {
            n,
            seed,
            density,
            format,
            output,
        } => {
            if !(0.0..=1.0).contains(&density) {
                return Err(CliError::Parse(format!("density {density} is not in [0, 1]")));
            }
            let mut out = sink(&output)?;
            out.write_all(write_graph(&random_graph(n, density, seed), format).as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ARBORIST_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("arborist: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
