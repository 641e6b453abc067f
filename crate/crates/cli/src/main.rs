mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "nlbench", version, about = "Exact and numerical checks for symplectic tensor lattices and their companions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random sample; echoed in the report header.
    #[arg(long, global = true, default_value_t = 20_241_018)]
    pub seed: u64,
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Absolute tolerance for floating-point checks (default 1e-9, 1e-3 at f32).
    #[arg(long, global = true)]
    pub tol_abs: Option<f64>,
    /// Relative tolerance for floating-point checks (default 1e-8, 1e-3 at f32).
    #[arg(long, global = true)]
    pub tol_rel: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariants of an integral lattice.
    Lattice(commands::LatticeArgs),
    /// Isogeny matrices: enumeration, reduction, orbit census.
    Isogeny {
        #[command(subcommand)]
        action: commands::IsogenyAction,
    },
    /// Period vector against the negative plane.
    Period(commands::PeriodArgs),
    /// Theta series of a positive definite lattice or one of its cosets.
    Theta(commands::ThetaArgs),
    /// Local identities at a prime dividing the level.
    PadicVerify(commands::PadicArgs),
    /// Decides the level-star condition.
    StarCheck(commands::StarArgs),
    /// Runs every acceptance criterion.
    Selftest(commands::SelftestArgs),
}

/// Exit status classes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
}

impl From<nlbench::Error> for Failure {
    fn from(e: nlbench::Error) -> Self {
        match e {
            nlbench::Error::Parse(_) | nlbench::Error::MalformedGram(_) => Failure::Usage(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(failed) => ExitCode::from(u8::from(failed)),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let g = cli.global;
    for t in [g.tol_abs, g.tol_rel].into_iter().flatten() {
        if !(t.is_finite() && t > 0.0) {
            return Err(Failure::Usage(format!("tolerance must be positive, got {t}")));
        }
    }
    if g.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(g.workers)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let mut report = Report::new(cli.command.name(), g.seed, g.workers);
    match cli.command {
        Command::Lattice(a) => commands::lattice(&a, &mut report)?,
        Command::Isogeny { action } => commands::isogeny(&action, &mut report)?,
        Command::Period(a) => commands::period(&a, &g, &mut report)?,
        Command::Theta(a) => commands::theta(&a, &g, &mut report)?,
        Command::PadicVerify(a) => commands::padic(&a, &g, &mut report)?,
        Command::StarCheck(a) => commands::star(&a, &mut report)?,
        Command::Selftest(a) => commands::selftest(&a, &g, &mut report)?,
    }
    let text = report.render(g.format);
    match &g.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(report.failed())
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Lattice(_) => "lattice",
            Command::Isogeny { .. } => "isogeny",
            Command::Period(_) => "period",
            Command::Theta(_) => "theta",
            Command::PadicVerify(_) => "padic-verify",
            Command::StarCheck(_) => "star-check",
            Command::Selftest(_) => "selftest",
        }
    }
}
