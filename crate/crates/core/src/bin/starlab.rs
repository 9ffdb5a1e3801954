//! `starlab`: run verification claims and write JSON reports / CSV curves.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use starlab_core::report::{self, Settings, VerificationReport};

#[derive(Parser)]
#[command(
    name = "starlab",
    version,
    about = "Verification laboratory for n-starlike integral operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Truncation order for identity checks (boundary scans use 4x).
    #[arg(long, global = true, default_value_t = 512)]
    order: usize,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Grid radii, comma separated.
    #[arg(long, global = true, value_delimiter = ',', default_value = "0.5,0.9,0.99")]
    radii: Vec<f64>,
    /// Angles per grid circle.
    #[arg(long, global = true, default_value_t = 1024)]
    theta: usize,
    /// Override the claim's pass threshold.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the reports here as a JSON array.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Include wall-clock time in the reports (breaks byte-for-byte reproducibility).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Recurrence, ratio relation, family collapse and quadrature agreement.
    Structural,
    /// Order preservation of the operators on seeded S_n(lambda) members.
    Theorem1 {
        /// Single lambda; both 0 and 0.3 when omitted.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 2)]
        n_max: u32,
    },
    /// Containment in the best dominant, with negative controls.
    Theorem2 {
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 2)]
        n_max: u32,
    },
    /// Sharp constants, operator orders and the Alexander witness.
    Corollaries,
    /// The two sequences of operators built from a starlike function.
    Sequences {
        #[arg(long, default_value_t = 4)]
        n_max: u32,
    },
    /// Sample the best dominant on |z| = r.
    DominantCurve {
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.9)]
        r: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn lambdas(lambda: Option<f64>) -> Vec<f64> {
    lambda.map_or_else(|| vec![0.0, 0.3], |l| vec![l])
}

fn timed<T>(timing: bool, f: impl FnOnce() -> starlab_core::Result<T>) -> starlab_core::Result<(T, Option<u64>)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, timing.then(|| start.elapsed().as_millis() as u64)))
}

fn single(
    timing: bool,
    f: impl FnOnce() -> starlab_core::Result<VerificationReport>,
) -> starlab_core::Result<VerificationReport> {
    let (mut r, ms) = timed(timing, f)?;
    r.runtime_ms = ms;
    Ok(r)
}

fn run(cli: &Cli) -> starlab_core::Result<Vec<VerificationReport>> {
    let c = &cli.common;
    let settings = Settings {
        order: c.order,
        seed: c.seed,
        radii: c.radii.clone(),
        theta: c.theta,
        tol: c.tol,
    };
    settings.grid()?;
    let t = c.timing;
    // the theorems rest on the structural identities, checked with the default threshold
    let gate = || {
        single(t, || {
            report::cmd_structural(&Settings {
                tol: None,
                ..settings.clone()
            })
        })
    };
    Ok(match &cli.command {
        Command::Structural => vec![single(t, || report::cmd_structural(&settings))?],
        Command::Theorem1 { lambda, n_max } => {
            let s = gate()?;
            let r = single(t, || report::cmd_theorem1(&settings, &lambdas(*lambda), *n_max))?;
            let r = report::gated(&s, r);
            vec![s, r]
        }
        Command::Theorem2 { lambda, n_max } => {
            let s = gate()?;
            let r = single(t, || report::cmd_theorem2(&settings, &lambdas(*lambda), *n_max))?;
            let r = report::gated(&s, r);
            vec![s, r]
        }
        Command::Corollaries => vec![single(t, || report::cmd_corollaries(&settings))?],
        Command::Sequences { n_max } => vec![single(t, || report::cmd_sequences(&settings, *n_max))?],
        Command::DominantCurve { mu, lambda, r, csv } => {
            let ((mut rep, curve), ms) = timed(t, || report::cmd_dominant_curve(&settings, *mu, *lambda, *r))?;
            rep.runtime_ms = ms;
            match csv {
                Some(path) => std::fs::write(path, curve.to_csv())
                    .map_err(|e| starlab_core::StarlabError::InvalidInput(format!("{}: {e}", path.display())))?,
                None => print!("{}", curve.to_csv()),
            }
            vec![rep]
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let reports = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    for r in &reports {
        eprintln!("{:<16} {:?}", r.claim, r.status);
    }
    let text = report::to_json(&reports);
    match &cli.common.json {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None if !matches!(cli.command, Command::DominantCurve { csv: None, .. }) => print!("{text}"),
        None => {}
    }
    if reports.iter().all(VerificationReport::passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
