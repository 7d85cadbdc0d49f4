use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qagt_cli::config::{CampaignConfig, Format, Suite};
use qagt_cli::report::{failure_lines, summary_table};
use qagt_cli::{configure_threads, emit, load, run, RunError};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "qagt", version, about = "Exact checks of the 5D pure SU(2) instanton sum against the deformed Virasoro algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and write a report.
    Run {
        #[arg(long, value_delimiter = ',', required = true)]
        suites: Vec<Suite>,
        #[arg(long, allow_negative_numbers = true)]
        max_level: i64,
        #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
        points: i64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Record wall times; the report is then not reproducible byte for byte.
        #[arg(long)]
        timings: bool,
    },
    /// Print a summary table of a JSON report.
    Show { report: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    match cli.command {
        Command::Run {
            suites,
            max_level,
            points,
            seed,
            out,
            format,
            timings,
        } => {
            let mut config =
                match CampaignConfig::new(max_level, points, seed, &suites, out.to_string_lossy(), format) {
                    Ok(c) => c,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(EXIT_USAGE);
                    }
                };
            config.timings = timings;
            let report = match run(&config).and_then(|r| emit(&r, format, &out).map(|_| r)) {
                Ok(r) => r,
                Err(e) => return runtime_error(e),
            };
            print!("{}", summary_table(&report));
            for line in failure_lines(&report) {
                eprintln!("failed: {line}");
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILED)
            }
        }
        Command::Show { report } => match load(&report) {
            Ok(r) => {
                print!("{}", summary_table(&r));
                for line in failure_lines(&r) {
                    println!("failed: {line}");
                }
                ExitCode::SUCCESS
            }
            Err(e) => runtime_error(e),
        },
    }
}

fn runtime_error(e: RunError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_RUNTIME)
}
