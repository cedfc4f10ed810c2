use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mconvex_cli::config::{env_overrides, AnalysisKind};
use mconvex_cli::{execute, Format, Invocation};

/// Numerical checks for m-convex domains and their plurisubharmonic barriers.
#[derive(Parser)]
#[command(name = "mconvex", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Principal curvatures and m-convexity of the boundary.
    Curvature(Common),
    /// Reach, curvature bounds and signed-distance fidelity.
    Reach(Common),
    /// Build the barrier and check m-plurisubharmonicity on a grid.
    Barrier(Common),
    /// Full barrier verification, including finite-difference spectra.
    Verify(Common),
    /// Subharmonicity of the barrier along conformal harmonic discs.
    Subharmonicity(Common),
    /// Upper bounds on the minimal pseudometric.
    Metric(Common),
    /// Distance chain and third-coordinate bound on the Ω_D example.
    OmegaD(Common),
    /// Whether convex intersections of halfspaces contain a 2-plane.
    ConvexClassify(Common),
    /// Run the analysis named by `analysis` in the config file.
    Run(Common),
}

#[derive(Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; stdout when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::JsonLines)]
    format: Format,
    /// Worker threads for data-parallel stages.
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (analysis, c) = match cli.command {
        Command::Curvature(c) => (Some(AnalysisKind::Curvature), c),
        Command::Reach(c) => (Some(AnalysisKind::Reach), c),
        Command::Barrier(c) => (Some(AnalysisKind::Barrier), c),
        Command::Verify(c) => (Some(AnalysisKind::Verify), c),
        Command::Subharmonicity(c) => (Some(AnalysisKind::Subharmonicity), c),
        Command::Metric(c) => (Some(AnalysisKind::Metric), c),
        Command::OmegaD(c) => (Some(AnalysisKind::OmegaD), c),
        Command::ConvexClassify(c) => (Some(AnalysisKind::ConvexClassify), c),
        Command::Run(c) => (None, c),
    };
    let inv = Invocation {
        analysis,
        config: c.config,
        seed: c.seed,
        out: c.out,
        format: c.format,
        workers: c.workers,
        env: env_overrides(),
    };
    let o = execute(&inv);
    if let Some(bytes) = &o.output {
        let mut out = std::io::stdout().lock();
        if out.write_all(bytes).and_then(|_| out.flush()).is_err() {
            return ExitCode::from(1);
        }
    }
    eprint!("{}", o.stderr);
    ExitCode::from(o.code as u8)
}
