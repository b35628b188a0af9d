use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod manifest;

#[derive(Parser, Debug)]
#[command(
    name = "rank2d",
    version,
    about = "PageRank, CheiRank and 2DRank for directed networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank every node of an edge list; writes rank_table.tsv, pagerank.tsv,
    /// cheirank.tsv and manifest.json into the output directory.
    Rank {
        edges: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value_t = Separator::Tab)]
        separator: Separator,
    },
    /// Statistics derived from a rank table.
    Stats {
        table: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Refuse tables whose graph hash differs from this value.
        #[arg(long)]
        expect_graph: Option<String>,
        #[command(subcommand)]
        which: StatsKind,
    },
    /// Correlator as a function of the damping factors.
    Sweep {
        edges: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = SweepKind::Diagonal)]
        mode: SweepKind,
        /// Comma-separated damping values to sweep.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        /// Fixed partner value for fix-alpha / fix-alpha-star modes.
        #[arg(long, default_value_t = 0.85)]
        fixed: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value_t = Separator::Tab)]
        separator: Separator,
    },
    /// In- and out-degree histograms with power-law fits.
    Degrees {
        edges: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, value_parser = parse_range)]
        fit_range: (f64, f64),
        #[arg(long)]
        unweighted: bool,
        #[arg(long, value_enum, default_value_t = Separator::Tab)]
        separator: Separator,
    },
    /// Compare two ranked lists, or a ranking against a subset.
    Overlap {
        #[arg(long, value_enum)]
        mode: OverlapMode,
        /// Ranked list, one name per line, best first.
        list_a: PathBuf,
        /// Second ranked list, or the subset file in `subset` mode.
        list_b: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 20)]
        window: usize,
        /// Depth of the cumulative curve; defaults to the shorter list.
        #[arg(long)]
        ks_max: Option<usize>,
    },
    /// Re-rank a category of nodes densely.
    Subset {
        table: PathBuf,
        subset: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        resolution: ResolutionArgs,
        #[arg(long)]
        expect_graph: Option<String>,
    },
    /// Write a seeded scale-free configuration-model graph as an edge list.
    Synth {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2.1)]
        mu_in: f64,
        #[arg(long, default_value_t = 2.76)]
        mu_out: f64,
        #[arg(long, default_value_t = 5.0)]
        mean_degree: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum StatsKind {
    /// Density grid in the (ln K, ln K*) plane; with --seed also the
    /// independent-product null model.
    Density {
        #[arg(long, default_value_t = 100)]
        cells: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Null-model sample size; defaults to the number of nodes.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Density along ln K = x0 + η/2, ln K* = x0 − η/2.
    Slice {
        #[arg(long)]
        x0: f64,
        #[arg(long, default_value_t = 100)]
        cells: usize,
    },
    /// Correlator of the stored probability vectors.
    Correlator,
    /// Power-law fits of P(K) and P*(K*).
    Fitcurve {
        #[arg(long, value_parser = parse_range)]
        fit_range: (f64, f64),
    },
}

#[derive(Args, Debug, Clone)]
struct SolverArgs {
    #[arg(long, default_value_t = 0.85)]
    alpha: f64,
    #[arg(long, default_value_t = 0.85)]
    alpha_star: f64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args, Debug, Clone, Copy)]
#[group(multiple = false)]
struct ResolutionArgs {
    /// Abort on names that do not resolve (default).
    #[arg(long)]
    strict: bool,
    /// Skip names that do not resolve and report them.
    #[arg(long)]
    lenient: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Separator {
    Tab,
    Whitespace,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum SweepKind {
    Diagonal,
    FixAlpha,
    FixAlphaStar,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum OverlapMode {
    Cumulative,
    Window,
    Subset,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected MIN:MAX, got {s:?}"))?;
    let lo: f64 = lo.parse().map_err(|_| format!("bad lower bound {lo:?}"))?;
    let hi: f64 = hi.parse().map_err(|_| format!("bad upper bound {hi:?}"))?;
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rank2d: {} error: {e}", e.class());
            ExitCode::from(e.class().exit_code() as u8)
        }
    }
}
