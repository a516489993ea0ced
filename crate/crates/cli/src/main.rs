//! `conpath`: validate path decompositions, convert them into connected ones,
//! derive search strategies and simulate them.
//!
//! Statistics always go to standard output as `key=value` lines. Artifacts
//! (decompositions, strategies, derived graph dumps) go to the file given by
//! `-o`, or to standard output ahead of the statistics when `-o` is absent.
//! Traces and derived graph dumps requested by `--trace` and
//! `--dump-derived` go to standard error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "conpath", version, about = "Connected path decompositions and search strategies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a decomposition against a graph and report each axiom.
    Validate(Pair),
    /// Print the derived layer graph of a decomposition.
    Derive(DeriveArgs),
    /// Run the simple conversion, which is connected but unbounded in width.
    Scp(ScpArgs),
    /// Convert into a connected decomposition of width at most 2k+1.
    Convert(ConvertArgs),
    /// Like `convert`, with a prescribed vertex in the first bag.
    Cph(CphArgs),
    /// Turn a decomposition into a node or an edge search strategy.
    ToStrategy(StrategyArgs),
    /// Play a strategy and report whether it clears the graph.
    Simulate(SimulateArgs),
    /// Exact pathwidth or connected pathwidth of a small graph.
    Oracle(OracleArgs),
    /// Convert many instances and report one line each.
    Batch(BatchArgs),
}

#[derive(Debug, Args)]
struct Pair {
    /// Graph file (`p <n> <m>` header, `e <u> <v>` lines).
    graph: PathBuf,
    /// Decomposition file (`pd <d> <w>` header, `b <i> <labels...>` lines).
    decomposition: PathBuf,
}

#[derive(Debug, Args)]
struct Output {
    /// Write the artifact here instead of standard output.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Verify {
    Off,
    Cheap,
    Full,
}

impl From<Verify> for conpath::cp::VerifyLevel {
    fn from(v: Verify) -> Self {
        match v {
            Verify::Off => Self::Off,
            Verify::Cheap => Self::Cheap,
            Verify::Full => Self::Full,
        }
    }
}

#[derive(Debug, Args)]
struct RunFlags {
    /// Runtime checking of the conversion invariants.
    #[arg(long, value_enum, default_value = "cheap")]
    verify: Verify,
    /// Print the expansion trace to standard error.
    #[arg(long)]
    trace: bool,
    /// Print the derived graph to standard error.
    #[arg(long)]
    dump_derived: bool,
}

#[derive(Debug, Args)]
struct DeriveArgs {
    #[command(flatten)]
    input: Pair,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Chooser {
    /// The first growing move in canonical order.
    First,
    /// A uniformly random growing move; requires `--seed`.
    Random,
}

#[derive(Debug, Args)]
struct ScpArgs {
    #[command(flatten)]
    input: Pair,
    #[arg(long, value_enum, default_value = "first")]
    chooser: Chooser,
    /// Seed of the random chooser.
    #[arg(long, required_if_eq("chooser", "random"))]
    seed: Option<u64>,
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    dump_derived: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct ConvertArgs {
    #[command(flatten)]
    input: Pair,
    /// Vertex label forced into the first bag.
    #[arg(long)]
    homebase: Option<String>,
    #[command(flatten)]
    flags: RunFlags,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct CphArgs {
    #[command(flatten)]
    input: Pair,
    /// Vertex label forced into the first bag.
    #[arg(long)]
    homebase: String,
    #[command(flatten)]
    flags: RunFlags,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    /// Place and remove only; one searcher per bag vertex.
    Node,
    /// Place, slide and remove; needs a connected decomposition.
    Edge,
}

impl From<Mode> for conpath::search::Mode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Node => Self::Node,
            Mode::Edge => Self::Edge,
        }
    }
}

#[derive(Debug, Args)]
struct StrategyArgs {
    #[command(flatten)]
    input: Pair,
    #[arg(long, value_enum, default_value = "edge")]
    mode: Mode,
    /// Start vertex of an edge strategy; must lie in the first bag.
    #[arg(long)]
    homebase: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    graph: PathBuf,
    /// Strategy file (`place`, `remove` and `slide` lines).
    strategy: PathBuf,
    #[arg(long, value_enum, default_value = "edge")]
    mode: Mode,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Measure {
    Pw,
    Cpw,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(value_enum)]
    measure: Measure,
    graph: PathBuf,
    /// Give up once the width provably exceeds this value.
    #[arg(long)]
    budget: Option<usize>,
    /// Refuse graphs with more vertices than this.
    #[arg(long, default_value_t = conpath::oracle::DEFAULT_CAP)]
    cap: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct BatchArgs {
    /// Graph files. A decomposition next to a graph (same stem, `.pd`) is
    /// converted too.
    graphs: Vec<PathBuf>,
    /// Add every connected graph with up to this many vertices, one per
    /// isomorphism class (at most 7).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=7))]
    corpus: Option<u8>,
    /// Random valid decompositions per graph, in addition to the optimal one.
    #[arg(long, default_value_t = 0, requires = "seed")]
    random: usize,
    /// Seed of the random decompositions.
    #[arg(long)]
    seed: Option<u64>,
    /// Also run the homebase variant for every vertex.
    #[arg(long)]
    homebase_all: bool,
    #[arg(long, value_enum, default_value = "cheap")]
    verify: Verify,
    /// Worker threads; results are reported in input order regardless.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(commands::EXIT_PARSE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Command::Scp(a) = &cli.command {
        if matches!(a.chooser, Chooser::First) && a.seed.is_some() {
            eprintln!("error: --seed only applies to the random chooser");
            return ExitCode::from(commands::EXIT_PARSE);
        }
    }
    let result = match cli.command {
        Command::Validate(a) => commands::validate(&a.graph, &a.decomposition),
        Command::Derive(a) => commands::derive(&a.input.graph, &a.input.decomposition, a.output.output.as_deref()),
        Command::Scp(a) => commands::scp(&commands::ScpConfig {
            graph: a.input.graph,
            decomposition: a.input.decomposition,
            seed: match a.chooser {
                Chooser::First => None,
                Chooser::Random => a.seed,
            },
            trace: a.trace,
            dump_derived: a.dump_derived,
            output: a.output.output,
        }),
        Command::Convert(a) => commands::convert(&commands::ConvertConfig {
            graph: a.input.graph,
            decomposition: a.input.decomposition,
            homebase: a.homebase,
            verify: a.flags.verify.into(),
            trace: a.flags.trace,
            dump_derived: a.flags.dump_derived,
            output: a.output.output,
        }),
        Command::Cph(a) => commands::convert(&commands::ConvertConfig {
            graph: a.input.graph,
            decomposition: a.input.decomposition,
            homebase: Some(a.homebase),
            verify: a.flags.verify.into(),
            trace: a.flags.trace,
            dump_derived: a.flags.dump_derived,
            output: a.output.output,
        }),
        Command::ToStrategy(a) => commands::to_strategy(
            &a.input.graph,
            &a.input.decomposition,
            a.mode.into(),
            a.homebase.as_deref(),
            a.output.output.as_deref(),
        ),
        Command::Simulate(a) => commands::simulate(&a.graph, &a.strategy, a.mode.into()),
        Command::Oracle(a) => commands::oracle(
            &a.graph,
            matches!(a.measure, Measure::Cpw),
            a.budget,
            a.cap,
            a.output.output.as_deref(),
        ),
        Command::Batch(a) => commands::batch(&commands::BatchConfig {
            graphs: a.graphs,
            corpus: a.corpus.map(usize::from),
            random: a.random,
            seed: a.seed.unwrap_or(0),
            homebase_all: a.homebase_all,
            verify: a.verify.into(),
            jobs: a.jobs.max(1),
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
