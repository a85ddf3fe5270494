use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use selfsim_stefan::cli::{cmd_certify, cmd_profile, cmd_run, format_significant, parse_config, RunSpec};

#[derive(Parser)]
#[command(version, about = "Self-similar asymptotics of the one-phase Stefan problem with decaying Neumann flux")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the self-similar front and write the profile U(eta) as CSV.
    Profile {
        /// Flux amplitude h.
        #[arg(long)]
        h: Option<f64>,
        /// Read h from a run configuration instead.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[arg(long, default_value = "profile.csv")]
        out: PathBuf,
    },
    /// Integrate one trajectory and write tau,b,b_gap,profile_gap,flux0,fluxb as CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output path; overrides `out` in the configuration. Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run lower, generic and upper trajectories and check the comparison structure.
    Certify {
        #[arg(long)]
        config: PathBuf,
        /// Where to write the violations CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path) -> anyhow::Result<RunSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text).with_context(|| format!("in {}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => match io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn main() -> anyhow::Result<ExitCode> {
    let args = Args::parse();
    match args.command {
        Command::Profile { h, config, points, out } => {
            let h = match (h, config) {
                (Some(h), _) => h,
                (None, Some(path)) => load(&path)?.h,
                (None, None) => bail!("profile needs --h or --config"),
            };
            let (omega, csv) = cmd_profile(h, points)?;
            fs::write(&out, csv).with_context(|| format!("writing {}", out.display()))?;
            println!("omega = {}", format_significant(omega, 15));
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { config, out } => {
            let spec = load(&config)?;
            let csv = cmd_run(&spec)?;
            write_or_print(out.as_deref().or(spec.out.as_deref()), &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify { config, out } => {
            let spec = load(&config)?;
            let outcome = cmd_certify(&spec)?;
            print!("{}", outcome.report);
            if let Some(p) = out.as_deref().or(spec.out.as_deref()) {
                fs::write(p, outcome.violations_csv()).with_context(|| format!("writing {}", p.display()))?;
            }
            for v in outcome.violations.iter().take(20) {
                eprintln!("violation: {} tau={} eta={:?} excess={:e}", v.check, v.tau, v.eta, v.excess);
            }
            Ok(ExitCode::from(outcome.exit_code() as u8))
        }
    }
}
