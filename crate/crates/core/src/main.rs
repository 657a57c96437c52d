use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Parser, Subcommand};

use fidelity_gap::figures::{self, FIGURES};
use fidelity_gap::report::{run_config, write_outputs, ScanConfig};
use fidelity_gap::selftest;
use fidelity_gap::Error;

/// Fidelity balloons versus quantum resources.
#[derive(Parser)]
#[command(name = "fidelity-gap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the preset scans of one figure.
    Figure {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(FIGURES))]
        id: String,
        /// Output directory [default: out/<id>].
        #[arg(long)]
        out: Option<PathBuf>,
        /// Maximum number of worker threads.
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        threads: Option<u16>,
        /// Print the preset as a scan config and exit.
        #[arg(long)]
        dump_config: bool,
    },
    /// Run the scans described by a JSON config file.
    Scan {
        #[arg(long)]
        config: PathBuf,
        /// Output directory [default: the config's "out", else out/<name>].
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        threads: Option<u16>,
    },
    /// Run the oracle-equivalence checks.
    Selftest {
        #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        threads: Option<u16>,
    },
}

const EXIT_USAGE: u8 = 1;
const EXIT_EXPECTATION: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn with_threads<T: Send>(threads: Option<u16>, f: impl FnOnce() -> T + Send) -> Result<T, Error> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        builder = builder.num_threads(k as usize);
    }
    let pool = builder.build().map_err(|e| Error::Config(format!("threads: {e}")))?;
    Ok(pool.install(f))
}

fn dispatch(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Figure {
            id,
            out,
            threads,
            dump_config,
        } => {
            let config = figures::preset(&id).expect("clap restricts figure ids");
            if dump_config {
                print!("{}", config.to_json());
                return Ok(ExitCode::SUCCESS);
            }
            let dir = out.unwrap_or_else(|| PathBuf::from("out").join(&id));
            execute(&config, dir, threads)
        }
        Command::Scan { config, out, threads } => {
            let text =
                std::fs::read_to_string(&config).map_err(|e| Error::Config(format!("{}: {e}", config.display())))?;
            let cfg = ScanConfig::from_json(&text)?;
            let dir = out
                .or_else(|| cfg.out.clone())
                .unwrap_or_else(|| PathBuf::from("out").join(&cfg.name));
            execute(&cfg, dir, threads)
        }
        Command::Selftest { seed, threads } => {
            let checks = with_threads(threads, || selftest::run(seed))??;
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            Ok(if checks.iter().all(|c| c.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_EXPECTATION)
            })
        }
    }
}

fn execute(config: &ScanConfig, dir: PathBuf, threads: Option<u16>) -> Result<ExitCode, Error> {
    let run = with_threads(threads, || run_config(config))??;
    write_outputs(&run, &dir)?;
    for scan in &run.scans {
        let s = &scan.summary;
        println!(
            "{}: {} points, {} physical, {} in band, {} in band and window",
            scan.label, s.total_points, s.physical_points, s.balloon_points, s.window_points
        );
    }
    for o in &run.outcomes {
        println!("{} {}", if o.passed { "PASS" } else { "FAIL" }, o.description);
    }
    println!("wrote {}", dir.display());
    Ok(if run.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_EXPECTATION)
    })
}
