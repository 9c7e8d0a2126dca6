use clap::{Parser, Subcommand};

use qid::cli::{run, CommandKind, RunConfig};

use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qid", about = "Quasi-infinite divisibility of discrete laws", version)]
struct Args {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// Law JSON file: {"atoms": [{"x": .., "p": ..}, ..], "tail_mass": ..}
    #[arg(long)]
    input: PathBuf,
    /// Output file (or prefix for multi-file commands); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 2_000_000)]
    max_evals: usize,
    /// Initial scan half-window for non-certifiable laws.
    #[arg(long)]
    window: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    zero_tol: f64,
    #[arg(long, default_value_t = 4096)]
    n_fft: usize,
    #[arg(long, default_value_t = 1e-14)]
    drop_tol: f64,
    /// Seed for scan-grid jitter; 0 disables jitter.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether the law is quasi-infinitely divisible.
    Check {
        #[command(flatten)]
        common: Common,
    },
    /// Compute the spectral decomposition and the Levy-type triplet.
    Spectrum {
        #[command(flatten)]
        common: Common,
    },
    /// Factorize into two infinitely divisible triplets.
    Factor {
        #[command(flatten)]
        common: Common,
    },
    /// Round-trip the law through spectrum, triplet, and reconstruction.
    Roundtrip {
        #[command(flatten)]
        common: Common,
    },
    /// Dump |psi_tau| over a scan grid as CSV.
    Psi {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tau: f64,
        #[arg(long, default_value_t = 31.41592653589793)]
        scan_window: f64,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
    },
    /// Dump the characteristic function over a grid as CSV.
    DumpCf {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t0: f64,
        #[arg(long)]
        t1: f64,
        #[arg(long, default_value_t = 4096)]
        n: usize,
    },
}

fn build_config(common: Common, command: CommandKind) -> RunConfig {
    let mut cfg = RunConfig::new(command, common.input);
    cfg.output_path = common.out;
    cfg.max_evals = common.max_evals;
    cfg.window0 = common.window;
    cfg.zero_tol = common.zero_tol;
    cfg.n_fft = common.n_fft;
    cfg.drop_tol = common.drop_tol;
    cfg.seed = common.seed;
    cfg
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("QID_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let args = Args::parse();
    let cfg = match args.command {
        Cmd::Check { common } => build_config(common, CommandKind::Check),
        Cmd::Spectrum { common } => build_config(common, CommandKind::Spectrum),
        Cmd::Factor { common } => build_config(common, CommandKind::Factor),
        Cmd::Roundtrip { common } => build_config(common, CommandKind::Roundtrip),
        Cmd::Psi { common, tau, scan_window, n } => {
            build_config(common, CommandKind::Psi { tau, window: scan_window, n })
        }
        Cmd::DumpCf { common, t0, t1, n } => {
            build_config(common, CommandKind::DumpCf { t0, t1, n })
        }
    };
    ExitCode::from(run(&cfg) as u8)
}
