use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand};
use hypcert::filling::DEFAULT_FUDGE;
use hypcert::geometry::VOLUME_TOL;

mod commands;
mod report;
mod selftest;

use commands::{GroupSource, VolumeArgs};

/// Volume target below which a filling is of interest.
const TARGET: f64 = 2.848;
const TARGET_ARG: &str = "2.848";
/// Smallest known closed hyperbolic volume, rounded down.
const FLOOR_ARG: &str = "0.943";

#[derive(Parser)]
#[command(name = "hypcert", version, about = "Certified computations for small hyperbolic 3-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Upper bound on the length of any slope whose filling has volume at most the target.
    Bound {
        #[arg(long)]
        parent: f64,
        #[arg(long, default_value_t = TARGET)]
        target: f64,
    },
    /// List every slope short enough to give a filling below the target volume.
    Enumerate {
        /// Meridian translation as `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        meridian: String,
        /// Longitude translation as `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        longitude: String,
        #[arg(long)]
        parent: f64,
        #[arg(long, default_value_t = TARGET)]
        target: f64,
        #[arg(long, default_value_t = DEFAULT_FUDGE)]
        fudge: f64,
    },
    /// Prove that gluing equations have a solution near the given shapes.
    Certify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = VOLUME_TOL)]
        tol: f64,
    },
    /// Enclose the volume and optionally prove bounds on it.
    Volume {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Use this distance bound instead of certifying.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = VOLUME_TOL)]
        tol: f64,
        /// Prove volume > value (0.943 when no value is given).
        #[arg(long, num_args = 0..=1, default_missing_value = FLOOR_ARG)]
        gt: Option<f64>,
        /// Prove volume <= value (2.848 when no value is given).
        #[arg(long, num_args = 0..=1, default_missing_value = TARGET_ARG)]
        le: Option<f64>,
    },
    /// Prove a group is not the fundamental group of a closed or cusped hyperbolic manifold.
    #[command(group(ArgGroup::new("source").args(["rel", "corpus", "presentation"])))]
    Nonhyp {
        /// Presentation file `<a,b | ...>`.
        presentation: Option<PathBuf>,
        /// Single relator in the generators a, b.
        #[arg(long, allow_hyphen_values = true)]
        rel: Option<String>,
        /// Shipped proof, e.g. `closed-01`.
        #[arg(long)]
        corpus: Option<String>,
        #[arg(long)]
        script: Option<PathBuf>,
    },
    /// Run the embedded fixture suite.
    Selftest,
}

fn run(cmd: Command) -> anyhow::Result<report::Report> {
    match cmd {
        Command::Bound { parent, target } => commands::bound(parent, target),
        Command::Enumerate { meridian, longitude, parent, target, fudge } => {
            commands::enumerate(&meridian, &longitude, parent, target, fudge)
        }
        Command::Certify { files, tol } => commands::certify(&files, tol),
        Command::Volume { files, delta, tol, gt, le } => commands::volume(&files, &VolumeArgs { delta, tol, gt, le }),
        Command::Nonhyp { presentation, rel, corpus, script } => {
            let source = match (presentation, rel, corpus) {
                (Some(p), _, _) => Some(GroupSource::File(p)),
                (_, Some(r), _) => Some(GroupSource::Relator(r)),
                (_, _, Some(c)) => Some(GroupSource::Corpus(c)),
                _ => None,
            };
            commands::nonhyp(source, script.as_deref())
        }
        Command::Selftest => Ok(selftest::run()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(cli.command) {
        Ok(r) => {
            // a closed pipe is not worth a panic
            let mut out = std::io::stdout().lock();
            let _ = write!(out, "{r}").and_then(|_| writeln!(out, "elapsed: {:.3}s", start.elapsed().as_secs_f64()));
            ExitCode::from(r.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn defaults_match_thresholds() {
        assert_eq!(TARGET_ARG.parse::<f64>().unwrap(), TARGET);
        let cli = Cli::try_parse_from(["hypcert", "volume", "f.glu", "--gt", "--le"]).unwrap();
        match cli.command {
            Command::Volume { gt, le, .. } => assert_eq!((gt, le), (Some(0.943), Some(TARGET))),
            _ => unreachable!(),
        }
    }
}
