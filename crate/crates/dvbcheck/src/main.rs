//! `dvbcheck` — randomized verification suites for the double-vector-bundle
//! and Poisson calculus in `dvbcheck-core`.
//!
//! Exit codes: `0` when every requested suite passes, `1` when any suite
//! fails, `2` on invalid usage or configuration.

use clap::{Args, Parser, Subcommand, ValueEnum};
use dvbcheck::{run_all, run_suite, RunConfig, SuiteId, SuiteReport};

#[derive(Parser)]
#[command(
    name = "dvbcheck",
    version,
    about = "Randomized verification suites for double vector bundles, canonical maps, and Poisson brackets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite, or all of them.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Suite to run.
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,

    /// RNG seed; every case derives an independent, order-insensitive stream.
    #[arg(long, env = "DVBCHECK_SEED", default_value_t = 42)]
    seed: u64,

    /// Randomized cases per suite.
    #[arg(long, default_value_t = 1000)]
    trials: u64,

    /// Upper bound for sampled base dimensions (1..=8).
    #[arg(long, default_value_t = 4)]
    dim_base: usize,

    /// Residual bound for identities that hold to rounding error.
    #[arg(long, default_value_t = 1e-12)]
    tol_exact: f64,

    /// Residual bound for finite-difference cross-checks.
    #[arg(long, default_value_t = 1e-6)]
    tol_fd: f64,

    /// Report format.
    #[arg(long, value_enum, default_value_t = ReportArg::Text)]
    report: ReportArg,

    /// Append negative-control cases to the Poisson suites; those suites must
    /// then fail, demonstrating the checks have teeth.
    #[arg(long)]
    negative_controls: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Involution,
    Naturality,
    Interchange,
    Theorem1,
    TangentPairing,
    Tulczyjew,
    PropositionR,
    Symplecto,
    PoissonJacobi,
    KoszulAnchor,
    All,
}

impl SuiteArg {
    fn as_suite(self) -> Option<SuiteId> {
        match self {
            SuiteArg::Involution => Some(SuiteId::Involution),
            SuiteArg::Naturality => Some(SuiteId::Naturality),
            SuiteArg::Interchange => Some(SuiteId::Interchange),
            SuiteArg::Theorem1 => Some(SuiteId::Theorem1),
            SuiteArg::TangentPairing => Some(SuiteId::TangentPairing),
            SuiteArg::Tulczyjew => Some(SuiteId::Tulczyjew),
            SuiteArg::PropositionR => Some(SuiteId::PropositionR),
            SuiteArg::Symplecto => Some(SuiteId::Symplecto),
            SuiteArg::PoissonJacobi => Some(SuiteId::PoissonJacobi),
            SuiteArg::KoszulAnchor => Some(SuiteId::KoszulAnchor),
            SuiteArg::All => None,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ReportArg {
    Text,
    Json,
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run(args) => run(args),
    };
    std::process::exit(code);
}

fn run(args: RunArgs) -> i32 {
    let cfg = RunConfig {
        seed: args.seed,
        trials: args.trials,
        dim_base: args.dim_base,
        tol_exact: args.tol_exact,
        tol_fd: args.tol_fd,
        negative_controls: args.negative_controls,
    };
    if let Err(message) = cfg.validate() {
        eprintln!("error: {message}");
        return 2;
    }
    let reports: Vec<SuiteReport> = match args.suite.as_suite() {
        Some(id) => vec![run_suite(id, &cfg)],
        None => run_all(&cfg),
    };
    match args.report {
        ReportArg::Text => {
            for report in &reports {
                println!("{}", report.render_text());
            }
        }
        ReportArg::Json => {
            let payload = if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0])
            } else {
                serde_json::to_string_pretty(&reports)
            }
            .expect("suite reports serialize to JSON");
            println!("{payload}");
        }
    }
    if reports.iter().all(|r| r.pass) {
        0
    } else {
        1
    }
}
