use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use compacta::rational::parse_rational;
use compacta::Rational;

#[derive(Debug, Parser)]
#[command(
    name = "compacta",
    version,
    about = "Equipped Markov compacta: graphs, cotransitions, measures, boundaries"
)]
pub struct Cli {
    /// Print a JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Directory for relative `--out` paths.
    #[arg(long, global = true, env = "COMPACTA_OUT_DIR", value_name = "DIR")]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Graded graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Cotransition systems.
    #[command(subcommand)]
    Equip(EquipCmd),
    /// Markov measures.
    #[command(subcommand)]
    Measure(MeasureCmd),
    /// Backward distributions, Martin kernels, boundary and ergodicity checks.
    #[command(subcommand)]
    Absolute(AbsoluteCmd),
    /// RSK insertion and letter pushforwards.
    #[command(subcommand)]
    Rsk(RskCmd),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Builtin {
    Pascal,
    Young,
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Output file (written atomically). Without it the product goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckDepth {
    /// Number of levels to check (default: the whole graph).
    #[arg(long)]
    pub depth: Option<usize>,
    /// Maximum number of paths enumerated into one vertex.
    #[arg(long, default_value_t = 100_000)]
    pub cap: usize,
}

#[derive(Debug, Subcommand)]
pub enum GraphCmd {
    /// Check a graph file for structural problems.
    Validate { graph: PathBuf },
    /// Write the Pascal or Young graph.
    Builtin {
        kind: Builtin,
        #[arg(long, value_parser = positive)]
        depth: usize,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum EquipCmd {
    /// Write the central equipment P(y | x) = dim(y) mult(y, x) / dim(x).
    Central {
        graph: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check the cocycle identities of an equipment on all tail-equivalent paths.
    Check {
        graph: PathBuf,
        equip: PathBuf,
        #[command(flatten)]
        bound: CheckDepth,
    },
}

#[derive(Debug, Subcommand)]
pub enum MeasureCmd {
    /// Probability of a cylinder given by a path from level 0.
    Cylinder {
        graph: PathBuf,
        measure: PathBuf,
        path: String,
    },
    /// Check that the measure's Radon-Nikodym cocycle is the equipment's cocycle.
    Check {
        graph: PathBuf,
        measure: PathBuf,
        equip: PathBuf,
        #[command(flatten)]
        bound: CheckDepth,
    },
    /// Sample paths; CSV `path_id,level,vertex`.
    Sample {
        graph: PathBuf,
        measure: PathBuf,
        /// Number of levels per path (default: the whole graph).
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Write the Plancherel measure on the Young graph of the given depth.
    Plancherel {
        #[arg(long, value_parser = positive)]
        depth: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Write the Bernoulli(p) measure on the Pascal graph of the given depth.
    Bernoulli {
        #[arg(long, value_parser = rational)]
        p: Rational,
        #[arg(long, value_parser = positive)]
        depth: usize,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Debug, Args)]
pub struct ImplicitOrFiles {
    /// Graph file (omit for the implicit Pascal graph with its central equipment).
    #[arg(long, requires = "equip")]
    pub graph: Option<PathBuf>,
    #[arg(long, requires = "graph")]
    pub equip: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum AbsoluteCmd {
    /// Law of the level-n vertex given the vertex on a later level.
    Backward {
        graph: PathBuf,
        equip: PathBuf,
        /// Terminal vertex label.
        #[arg(long)]
        to: String,
        #[arg(long)]
        level: usize,
    },
    /// Martin kernel K(path, w).
    Kernel {
        graph: PathBuf,
        equip: PathBuf,
        /// Prefix from level 0, labels joined by '/'.
        #[arg(long)]
        path: String,
        /// Terminal vertex label.
        #[arg(long)]
        to: String,
    },
    /// Kernel values along a boundary sequence; CSV `N,value`.
    Limit {
        #[command(flatten)]
        source: ImplicitOrFiles,
        /// Frequency sequence w_N = (N, round(pN)) on the Pascal graph.
        #[arg(long, value_parser = rational, conflicts_with = "sequence")]
        p: Option<Rational>,
        /// Explicit terminal vertices, comma separated labels (use ';' if labels contain commas).
        #[arg(long)]
        sequence: Option<String>,
        /// Levels N, comma separated (ignored with --sequence).
        #[arg(long, value_delimiter = ',', default_values_t = [100usize, 1000, 5000])]
        levels: Vec<usize>,
        /// Target prefix from level 0.
        #[arg(long, conflicts_with = "vertex")]
        prefix: Option<String>,
        /// Target vertex (its backward mass).
        #[arg(long)]
        vertex: Option<String>,
        /// Convergence tolerance on the last successive difference.
        #[arg(long, default_value_t = 1e-3, value_parser = nonnegative)]
        tolerance: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Variance of k_n/n across sampled paths; CSV `n,variance,stderr`.
    Ergodic {
        /// Bernoulli(p) on the implicit Pascal graph.
        #[arg(long, value_parser = rational, conflicts_with_all = ["mixture", "graph"])]
        p: Option<Rational>,
        /// Mixture of Bernoulli measures, `w:p` pairs separated by commas.
        #[arg(long, conflicts_with = "graph")]
        mixture: Option<String>,
        #[arg(long, requires = "measure")]
        graph: Option<PathBuf>,
        #[arg(long, requires = "graph")]
        measure: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values_t = [100usize, 400, 1600])]
        levels: Vec<usize>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-3, value_parser = nonnegative)]
        threshold: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check that cylinder probabilities at a level depend only on the endpoint.
    Exchange {
        graph: PathBuf,
        measure: PathBuf,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum RskCmd {
    /// Insertion and recording tableaux of a word, with the recording shape path.
    Word {
        #[arg(required = true, num_args = 1..)]
        letters: Vec<String>,
    },
    /// Sample shape paths of i.i.d. words; CSV `row,frequency,stderr`.
    Push {
        /// Atom probabilities, nonincreasing, comma separated; the rest is continuous.
        #[arg(long, value_delimiter = ',', value_parser = rational)]
        atoms: Vec<Rational>,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = compacta::DEFAULT_ROW_CAP)]
        rows: usize,
        /// Estimate column frequencies instead of row frequencies.
        #[arg(long)]
        columns: bool,
        /// Also write the sampled paths (JSON) for `rsk freq`.
        #[arg(long)]
        paths: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Row (or column) frequencies of saved shape paths.
    Freq {
        paths: PathBuf,
        #[arg(long, default_value_t = compacta::DEFAULT_ROW_CAP)]
        rows: usize,
        #[arg(long)]
        columns: bool,
        #[command(flatten)]
        out: OutArg,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("not a rational number: {s}"))
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("expected a positive integer, got {s}")),
    }
}

fn nonnegative(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a nonnegative number, got {s}")),
    }
}
