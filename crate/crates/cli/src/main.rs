use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gcores::harness::{self, ReportFormat, RunOptions, Suite};

/// Default worker count when `--jobs` is absent.
const JOBS_ENV: &str = "GCORES_JOBS";

#[derive(Parser)]
#[command(name = "gcores", version, about = "Verify corestriction and Goldman-element identities on scenario files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suites of a scenario file.
    Verify {
        #[arg(long)]
        scenario: PathBuf,
        /// Run only the named suites (repeatable).
        #[arg(long = "suite", value_parser = parse_suite)]
        suites: Vec<Suite>,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        report: Format,
        #[arg(long)]
        max_rank: Option<usize>,
        /// Worker threads; defaults to $GCORES_JOBS, then to the core count.
        #[arg(long)]
        jobs: Option<usize>,
        /// Force the full epsilon isomorphism check in the rescores suite.
        #[arg(long)]
        full_epsilon: bool,
    },
    /// List preset groups, ring carriers and suites.
    Presets,
    /// Print the JSON schema of scenario files.
    Schema,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Json,
}

fn parse_suite(name: &str) -> Result<Suite, String> {
    Suite::from_name(name).ok_or_else(|| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite {name:?}; expected one of {}", names.join(", "))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Presets => print!("{}", harness::list_presets()),
        Command::Schema => print!("{}", harness::schema()),
        Command::Verify { scenario, suites, report, max_rank, jobs, full_epsilon } => {
            let jobs = jobs.or_else(|| std::env::var(JOBS_ENV).ok().and_then(|v| v.parse().ok()));
            if let Some(n) = jobs.filter(|&n| n > 0) {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    eprintln!("warning: could not size the worker pool: {e}");
                }
            }
            let options = RunOptions { suites, max_rank, full_epsilon };
            let result = harness::run_scenario(&scenario, &options);
            let format = match report {
                Format::Human => ReportFormat::Human,
                Format::Json => ReportFormat::Json,
            };
            match &result {
                Ok(r) => print!("{}", harness::emit_report(r, format)),
                Err(e) => eprintln!("error: {e}"),
            }
            return ExitCode::from(harness::exit_code(&result) as u8);
        }
    }
    ExitCode::SUCCESS
}
