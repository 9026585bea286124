//! `clustering-games`: analyze, solve, classify, generate and experiment on
//! clustering games stored as JSON game files.

mod commands;
mod error;
mod graphs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clustering_games::equilibria::{DEFAULT_COALITION_CAP, DEFAULT_PROFILE_CAP};
use clustering_games::rational::{parse_rational, Rational};
use clustering_games::topology::DEFAULT_CHROMATIC_CAP;

use crate::error::CliError;

fn rational(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "clustering-games",
    version,
    about = "Exact equilibria, price of anarchy and random-graph experiments for clustering games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Graph parameters: densities, maximum degree, chromatic number, matching.
    Analyze(AnalyzeArgs),
    /// Exact (ε,k) price of anarchy with the applicable topological bounds.
    Poa(PoaArgs),
    /// Search the best-response graph for a cycle.
    BrGraph(BrGraphArgs),
    /// Decide whether the distribution rule is a generalized weighted Shapley rule.
    Classify(ClassifyArgs),
    /// Write a game file: a construction, a random game or a plain game.
    Gen(GenArgs),
    /// Run a Monte Carlo experiment; writes `<name>.csv` and `<name>.summary.json`.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub game: PathBuf,
    /// Skip the chromatic number.
    #[arg(long)]
    pub no_chromatic: bool,
    #[arg(long, default_value_t = DEFAULT_CHROMATIC_CAP)]
    pub cap_chromatic: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct PoaArgs {
    #[arg(long)]
    pub game: PathBuf,
    #[arg(long, value_parser = rational, default_value = "1")]
    pub eps: Rational,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Treat the graph as planar (not checked).
    #[arg(long)]
    pub planar: bool,
    #[arg(long, default_value_t = DEFAULT_PROFILE_CAP)]
    pub cap_profiles: u128,
    #[arg(long, default_value_t = DEFAULT_COALITION_CAP)]
    pub cap_coalition: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct BrGraphArgs {
    #[arg(long)]
    pub game: PathBuf,
    #[arg(long, default_value_t = DEFAULT_PROFILE_CAP)]
    pub cap_profiles: u128,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub game: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructionName {
    BipartiteTightness,
    DensityLb,
    MatchingLb,
    ChromaticLb,
    ChromaticRestricted,
    DegreeLb,
    BrCycle,
    NoPne,
    Random,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleName {
    EqualSplit,
    RandomPositive,
    WeightedShapley,
    WithZeros,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindsName {
    Keep,
    Coord,
    Anti,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetsName {
    Uniform,
    Pairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BlockName {
    Densest,
    Prefix,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub construction: ConstructionName,
    /// Output game file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Named graph: triangle, petersen, mixed-triangle, complete:N, cycle:N,
    /// path:N, star:N, grid:RxC, bipartite:LxR, theta:A,B,C.
    #[arg(long)]
    pub family: Option<String>,
    /// Take the graph of this game file.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// G(n, p) with --p, or G(n, d/n) with --d.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_parser = rational)]
    pub p: Option<Rational>,
    #[arg(long, value_parser = rational)]
    pub d: Option<Rational>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Source of the distribution rule for br-cycle and no-pne.
    #[arg(long)]
    pub game: Option<PathBuf>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long, value_parser = rational, default_value = "1")]
    pub gamma_l: Rational,
    #[arg(long, value_parser = rational, default_value = "1")]
    pub gamma_r: Rational,
    /// Node subset for density-lb, e.g. 0,1,2; the densest subgraph when absent.
    #[arg(long, value_delimiter = ',')]
    pub subset: Option<Vec<usize>>,
    /// Number of colors.
    #[arg(long)]
    pub c: Option<usize>,
    #[arg(long, value_enum, default_value_t = BlockName::Densest)]
    pub block: BlockName,
    #[arg(long, value_parser = rational, default_value = "1")]
    pub eps: Rational,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = RuleName::EqualSplit)]
    pub rule: RuleName,
    #[arg(long, value_enum, default_value_t = KindsName::Keep)]
    pub kinds: KindsName,
    /// Weights k/den with k uniform in 1..=weight-max.
    #[arg(long, default_value_t = 1)]
    pub weight_max: i64,
    /// Preferences k/den with k uniform in 0..=pref-max; none when absent.
    #[arg(long)]
    pub pref_max: Option<i64>,
    #[arg(long, default_value_t = 1)]
    pub den: i64,
    /// Random strategy sets instead of a symmetric game.
    #[arg(long, value_enum)]
    pub sets: Option<SetsName>,
    #[arg(long, default_value_t = DEFAULT_CHROMATIC_CAP)]
    pub cap_chromatic: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Uniform,
    SharedPlusPrivate,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// sparse-poa, dense-poa, degree-scaling or common-color.
    #[arg(long)]
    pub name: String,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Graph sizes, e.g. 200,400,800.
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<usize>>,
    /// Graph size of the dense run.
    #[arg(long)]
    pub n: Option<usize>,
    /// Expected degree (sparse runs) or edge probability (dense run).
    #[arg(long, value_parser = rational)]
    pub d: Option<Rational>,
    /// Color counts of the dense run, e.g. 8,16,24.
    #[arg(long, value_delimiter = ',')]
    pub cs: Option<Vec<usize>>,
    #[arg(long, value_parser = rational)]
    pub eps: Option<Rational>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    /// Colors of the uniform strategy-set family or of random games.
    #[arg(long)]
    pub colors: Option<usize>,
    /// Largest n with exact price-of-anarchy computations.
    #[arg(long)]
    pub exact_max_n: Option<usize>,
    #[arg(long)]
    pub cap_profiles: Option<u128>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze(args) => commands::analyze(&args),
        Command::Poa(args) => commands::poa(&args),
        Command::BrGraph(args) => commands::br_graph(&args),
        Command::Classify(args) => commands::classify(&args),
        Command::Gen(args) => commands::gen(&args),
        Command::Experiment(args) => commands::experiment(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.render().to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code())
        }
    }
}
