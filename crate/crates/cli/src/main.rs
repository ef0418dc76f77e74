//! `resistweave`: generate graphs, decompose them, build and verify
//! resistance sparsifiers, and play Cut-Weave games.
//!
//! Exit codes: 0 when every hard assertion passed, 1 when one failed or the
//! run hit an error (reported as a JSON error object), 2 for an invalid
//! configuration (nothing is written).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use resistweave::experiment::{
    run_certify, run_experiment, run_sparsify, ElementKind, ExperimentConfig,
    GeneratorSpec, Report,
};
use resistweave::report::{to_json, SCHEMA_VERSION};
use resistweave::spectral::all_resistances;
use resistweave::{io, Error, WeightedMultigraph};

#[derive(Parser)]
#[command(name = "resistweave", version, about = "Resistance sparsifiers of dense regular expanders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a graph as an edge list.
    Generate {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Split a regular graph into perfect matchings of its double cover
    /// (or Hamiltonian cycles of an odd complete graph).
    Decompose {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value_t = DecomposeKind::DoubleCover)]
        elements: DecomposeKind,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sample matching-union sparsifiers and measure their resistance error.
    Sparsify {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Play the Cut-Weave game and report expansion certificates.
    Certify {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// All-pairs effective resistances.
    Resist {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sparsify and compare against independent edge sampling at an equal
    /// edge budget.
    Experiment {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Complete,
    RandomRegular,
    Circulant,
    Hypercube,
    Petersen,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecomposeKind {
    DoubleCover,
    Matchings,
    Cycles,
}

#[derive(Clone, Copy, ValueEnum)]
enum ElementArg {
    Auto,
    Matchings,
    DoubleCover,
    Cycles,
    Routed,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args)]
struct GraphArgs {
    /// Graph family; ignored when --input is given.
    #[arg(long, value_enum, default_value_t = Family::Complete)]
    graph: Family,
    /// Edge-list file to read instead of generating.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    degree: Option<usize>,
    /// Hypercube dimension.
    #[arg(long)]
    dim: Option<u32>,
    /// Circulant offsets, comma separated.
    #[arg(long, value_delimiter = ',')]
    offsets: Vec<usize>,
    #[arg(long, env = "RESISTWEAVE_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    d_target: Option<usize>,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Pairs checked per trial when the graph is too large for all pairs.
    #[arg(long, default_value_t = resistweave::sparsify::DEFAULT_PAIR_BUDGET)]
    pairs: usize,
    /// `C` in the round cap `⌈C·r·(ln n)²⌉`.
    #[arg(long, default_value_t = 10.0)]
    round_constant: f64,
    /// Weave degree; defaults to every element at once.
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, value_enum, default_value_t = ElementArg::Auto)]
    elements: ElementArg,
}

#[derive(Args)]
struct OutArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// Failures split by exit code.
enum Failure {
    Config(anyhow::Error),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

fn config_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Config(e.into())
}

impl GraphArgs {
    fn spec(&self) -> Result<GeneratorSpec, Failure> {
        if let Some(path) = &self.input {
            return Ok(GeneratorSpec::File { path: path.clone() });
        }
        let need_n = || self.n.context("--n is required for this graph family").map_err(config_err);
        Ok(match self.graph {
            Family::Complete => GeneratorSpec::Complete { n: need_n()? },
            Family::RandomRegular => GeneratorSpec::RandomRegular {
                n: need_n()?,
                degree: self.degree.context("--degree is required for random-regular").map_err(config_err)?,
            },
            Family::Circulant => {
                if self.offsets.is_empty() {
                    return Err(config_err(anyhow::anyhow!("--offsets is required for circulant")));
                }
                GeneratorSpec::Circulant {
                    n: need_n()?,
                    offsets: self.offsets.clone(),
                }
            }
            Family::Hypercube => GeneratorSpec::Hypercube {
                dim: self.dim.context("--dim is required for hypercube").map_err(config_err)?,
            },
            Family::Petersen => GeneratorSpec::Petersen,
        })
    }

    /// Builds the graph; a bad file or infeasible parameters are config errors.
    fn build(&self) -> Result<WeightedMultigraph, Failure> {
        self.spec()?.generate(self.seed).map_err(config_err)
    }
}

impl RunArgs {
    fn config(&self, graph: &GraphArgs) -> Result<ExperimentConfig, Failure> {
        let mut cfg = ExperimentConfig::new(graph.spec()?);
        cfg.seed = graph.seed;
        cfg.epsilon = self.epsilon;
        cfg.d_target = self.d_target;
        cfg.trials = self.trials;
        cfg.pair_budget = self.pairs;
        cfg.round_constant = self.round_constant;
        cfg.r = self.r;
        cfg.elements = match self.elements {
            ElementArg::Auto => ElementKind::Auto,
            ElementArg::Matchings => ElementKind::Matchings,
            ElementArg::DoubleCover => ElementKind::DoubleCover,
            ElementArg::Cycles => ElementKind::Cycles,
            ElementArg::Routed => ElementKind::Routed,
        };
        cfg.validate().map_err(config_err)?;
        Ok(cfg)
    }

    /// Sparsifying additionally needs a target degree.
    fn sparsify_config(&self, graph: &GraphArgs) -> Result<ExperimentConfig, Failure> {
        let cfg = self.config(graph)?;
        cfg.resolved_d_target().map_err(config_err)?;
        Ok(cfg)
    }
}

fn emit(out: &OutArgs, text: &str) -> Result<(), Failure> {
    match &out.out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Run(e.into()))
}

fn emit_report(out: &OutArgs, report: &Report) -> Result<bool, Failure> {
    let text = match out.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    };
    emit(out, &text)?;
    for a in report.assertions.iter().filter(|a| !a.passed) {
        eprintln!("assertion failed: {}: {}", a.name, a.detail);
    }
    Ok(report.passed())
}

fn error_kind(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug
        .split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or("Error")
        .to_string()
}

fn error_json(command: &str, e: &Error) -> String {
    let value = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "error": { "kind": error_kind(e), "message": e.to_string() },
    });
    to_json(&value) + "\n"
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    match &cli.command {
        Command::Generate { graph, out } => {
            let g = graph.build()?;
            emit(out, &io::write_edge_list(&g))?;
            Ok(true)
        }
        Command::Decompose { graph, elements, out } => {
            let g = graph.build()?;
            let kind = match elements {
                DecomposeKind::DoubleCover => ElementKind::DoubleCover,
                DecomposeKind::Matchings => ElementKind::Matchings,
                DecomposeKind::Cycles => ElementKind::Cycles,
            };
            if kind == ElementKind::Cycles {
                let d = resistweave::decompose::walecki_decomposition(g.n())?;
                let all: Vec<usize> = (0..d.len()).collect();
                let ok = d.verify() && d.union_of(&all) == g;
                emit(out, &d.to_blocks())?;
                if !ok {
                    eprintln!("assertion failed: cycles do not partition the input graph");
                }
                return Ok(ok);
            }
            let base = if kind == ElementKind::DoubleCover { g.double_cover()? } else { g };
            let d = resistweave::decompose::matching_decomposition(&base)?;
            let audit = d.audit(&base);
            emit(out, &d.to_blocks())?;
            eprintln!("{}", serde_json::to_string(&audit).expect("audit serializes"));
            Ok(audit.passed())
        }
        Command::Resist { graph, out } => {
            let g = graph.build()?;
            let table = all_resistances(&g)?;
            let text = match out.format {
                Format::Csv => table.to_csv(),
                Format::Json => {
                    to_json(&serde_json::json!({
                        "schema_version": SCHEMA_VERSION,
                        "n": table.n(),
                        "resistance": table.rows(),
                    })) + "\n"
                }
            };
            emit(out, &text)?;
            Ok(true)
        }
        Command::Sparsify { graph, run, out } => emit_report(out, &run_sparsify(&run.sparsify_config(graph)?)?),
        Command::Certify { graph, run, out } => emit_report(out, &run_certify(&run.config(graph)?)?),
        Command::Experiment { graph, run, out } => emit_report(out, &run_experiment(&run.sparsify_config(graph)?)?),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Generate { .. } => "generate",
        Command::Decompose { .. } => "decompose",
        Command::Sparsify { .. } => "sparsify",
        Command::Certify { .. } => "certify",
        Command::Resist { .. } => "resist",
        Command::Experiment { .. } => "experiment",
    }
}

fn out_args(c: &Command) -> &OutArgs {
    match c {
        Command::Generate { out, .. }
        | Command::Decompose { out, .. }
        | Command::Sparsify { out, .. }
        | Command::Certify { out, .. }
        | Command::Resist { out, .. }
        | Command::Experiment { out, .. } => out,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Config(e)) => {
            eprintln!("invalid configuration: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            let text = error_json(command_name(&cli.command), &e);
            let out = out_args(&cli.command);
            match &out.out {
                Some(path) => {
                    let _ = fs::write(path, text);
                }
                None => print!("{text}"),
            }
            ExitCode::from(1)
        }
    }
}
