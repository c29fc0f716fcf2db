use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};

use effect_factor::cli::{emit_report, exit_code, parse_config, run, Format, Subcommand};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    /// Saturate, verify the factored monad, check stabilization
    Factor,
    /// Check the monad laws of the configured monad
    Laws,
    /// Kernel partitions and correctness against T
    Theory,
    /// Compare kernels under a second interpretation
    Stability,
    /// Tabulate |R X| against a closed form
    Modularity,
    /// List the built-in presets
    Presets,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutFormat {
    Human,
    Machine,
}

#[derive(Parser, Debug)]
#[command(name = "effect-factor", version, about = "Factor a monad through the effects a program uses")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// TOML run configuration
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "human")]
    format: OutFormat,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    max_carrier: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    /// Include wall-clock time in the report
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let sub = match args.command {
        Command::Factor => Subcommand::Factor,
        Command::Laws => Subcommand::Laws,
        Command::Theory => Subcommand::Theory,
        Command::Stability => Subcommand::Stability,
        Command::Modularity => Subcommand::Modularity,
        Command::Presets => Subcommand::Presets,
    };
    let format = match args.format {
        OutFormat::Human => Format::Human,
        OutFormat::Machine => Format::Machine,
    };

    let config = match &args.config {
        None => None,
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            };
            match parse_config(&text) {
                Ok(mut c) => {
                    if let Some(s) = args.seed {
                        c.seed = s;
                    }
                    if let Some(b) = args.budget {
                        c.budget = b;
                    }
                    if let Some(m) = args.max_carrier {
                        c.limits.max_carrier = m;
                    }
                    if let Some(d) = args.depth {
                        c.depth = d;
                    }
                    Some(c)
                }
                Err(e) => {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
        }
    };

    let start = Instant::now();
    let mut report = match run(sub, config.as_ref()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e) as u8);
        }
    };
    if args.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    match emit_report(&report, format) {
        Ok(text) => print!("{text}"),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
