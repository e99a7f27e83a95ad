//! `mcs` — simulate Markov computational systems, certify their ergodic
//! properties, and extract the languages they recognize.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mcs_cli::commands::{self, CliError, CommandOutput};
use mcs_cli::report;
use mcs_cli::systemfile::{self, SystemFile};

#[derive(Parser)]
#[command(
    name = "mcs",
    version,
    about = "Markov computational systems: simulation, certification, language extraction",
    long_about = "Simulates probabilistic automata over finite state spaces, certifies \
ergodic properties of their Markov operators, and extracts the regular or definite \
languages they recognize, with brute-force oracle cross-checks.\n\n\
Words read left to right: the first letter is applied first. Exit codes: 0 success, \
2 certification failure (witness in the report), 3 not a recognizer, 4 invalid input."
)]
struct Cli {
    /// Write a machine-readable report (report-v1 JSON) to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FileArg {
    /// System definition file (mcs-v1 JSON).
    file: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Print the state distribution after a word, and its verdict.
    Simulate {
        #[command(flatten)]
        file: FileArg,
        /// Input word; empty or "ε" for the empty word.
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Dobrushin contraction coefficients per letter (and per word).
    Dobrushin {
        #[command(flatten)]
        file: FileArg,
        #[arg(long)]
        word: Option<String>,
    },
    /// Certify ergodic or Doeblin-type properties.
    Certify {
        #[command(subcommand)]
        what: CertifyCommand,
    },
    /// Extract the recognized language as a DFA.
    Extract {
        #[command(subcommand)]
        what: ExtractCommand,
    },
    /// Perturb the system within its stability margin and verify the
    /// language survives.
    Stability {
        #[command(flatten)]
        file: FileArg,
        /// Word-level drift budget β.
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Perturbation seed; defaults to the file's seed, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 8)]
        horizon: usize,
        /// Depth cap for the margin search.
        #[arg(long, default_value_t = 12)]
        rmax: usize,
    },
    /// Greedy ε-net sizes of the orbit {P_w μ₀}.
    Orbit {
        #[command(flatten)]
        file: FileArg,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 8)]
        maxlen: usize,
    },
    /// Greedy ε-net sizes of the word-operator set {P_w}.
    Opcover {
        #[command(flatten)]
        file: FileArg,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 8)]
        maxlen: usize,
    },
    /// Classify every word up to a horizon (the brute-force oracle).
    Oracle {
        #[command(flatten)]
        file: FileArg,
        #[arg(long)]
        maxlen: usize,
        /// Re-run in exact rational arithmetic and referee the verdicts.
        #[arg(long)]
        exact: bool,
        /// Write `<word> <verdict> <margin>` lines here.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CertifyCommand {
    /// Find the smallest r with max over length-r words of δ(P_w) < 1.
    Ergodic {
        #[command(flatten)]
        file: FileArg,
        #[arg(long)]
        rmax: usize,
        /// Require the level coefficient to fall below this cap.
        #[arg(long, default_value_t = 1.0)]
        delta_cap: f64,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Scan Condition D over a θ grid against the uniform reference.
    Doeblin {
        #[command(flatten)]
        file: FileArg,
        /// Comma-separated θ values.
        #[arg(long, value_delimiter = ',', default_values_t = default_theta_grid())]
        theta_grid: Vec<f64>,
    },
    /// Condition-D-based quasi-compactness over length-n word blocks.
    Quasicompact {
        #[command(flatten)]
        file: FileArg,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
}

fn default_theta_grid() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

#[derive(Subcommand)]
enum ExtractCommand {
    /// Breadth-first orbit-covering extraction at a merge radius.
    Dfa {
        #[command(flatten)]
        file: FileArg,
        /// Merge radius t; defaults to half the recognizer gap.
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = 10_000)]
        max_states: usize,
        /// Cross-check against the oracle up to this length (0 skips).
        #[arg(long, default_value_t = 8)]
        oracle_horizon: usize,
        /// Write the DFA text format here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Definite-order certificate and its suffix-table DFA.
    Definite {
        #[command(flatten)]
        file: FileArg,
        #[arg(long)]
        rmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.outcome.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let (name, file_path, output) = dispatch(&cli)?;
    report::write(
        cli.report.as_deref(),
        name,
        &file_path,
        output.params.clone(),
        output.results.clone(),
        output.outcome,
    )?;
    Ok(output.outcome.exit_code())
}

fn load(file: &FileArg) -> Result<systemfile::LoadedSystem, CliError> {
    SystemFile::from_path(&file.file)?
        .load()
        .map_err(CliError::invalid)
}

fn dispatch(cli: &Cli) -> Result<(&'static str, String, CommandOutput), CliError> {
    Ok(match &cli.command {
        Command::Simulate { file, word } => (
            "simulate",
            file.file.display().to_string(),
            commands::simulate(&load(file)?, word)?,
        ),
        Command::Dobrushin { file, word } => (
            "dobrushin",
            file.file.display().to_string(),
            commands::dobrushin_cmd(&load(file)?, word.as_deref())?,
        ),
        Command::Certify { what } => match what {
            CertifyCommand::Ergodic { file, rmax, delta_cap, budget } => (
                "certify-ergodic",
                file.file.display().to_string(),
                commands::certify_ergodic(&load(file)?, *rmax, *delta_cap, *budget as u128)?,
            ),
            CertifyCommand::Doeblin { file, theta_grid } => (
                "certify-doeblin",
                file.file.display().to_string(),
                commands::certify_doeblin(&load(file)?, theta_grid)?,
            ),
            CertifyCommand::Quasicompact { file, n } => (
                "certify-quasicompact",
                file.file.display().to_string(),
                commands::certify_quasicompact(&load(file)?, *n)?,
            ),
        },
        Command::Extract { what } => match what {
            ExtractCommand::Dfa { file, radius, max_states, oracle_horizon, out } => (
                "extract-dfa",
                file.file.display().to_string(),
                commands::extract_dfa_cmd(
                    &load(file)?,
                    *radius,
                    *max_states,
                    *oracle_horizon,
                    commands::out_path(out),
                )?,
            ),
            ExtractCommand::Definite { file, rmax, out } => (
                "extract-definite",
                file.file.display().to_string(),
                commands::extract_definite(&load(file)?, *rmax, commands::out_path(out))?,
            ),
        },
        Command::Stability { file, beta, trials, seed, horizon, rmax } => (
            "stability",
            file.file.display().to_string(),
            commands::stability_cmd(&load(file)?, *beta, *trials, *seed, *horizon, *rmax)?,
        ),
        Command::Orbit { file, epsilon, maxlen } => (
            "orbit",
            file.file.display().to_string(),
            commands::orbit_cmd(&load(file)?, *epsilon, *maxlen, false)?,
        ),
        Command::Opcover { file, epsilon, maxlen } => (
            "opcover",
            file.file.display().to_string(),
            commands::orbit_cmd(&load(file)?, *epsilon, *maxlen, true)?,
        ),
        Command::Oracle { file, maxlen, exact, dump } => (
            "oracle",
            file.file.display().to_string(),
            commands::oracle_cmd(&load(file)?, *maxlen, *exact, commands::out_path(dump))?,
        ),
    })
}
