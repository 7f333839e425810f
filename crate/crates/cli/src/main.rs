//! `dynmatch`: runs experiments, profiles, validation and the exact oracle
//! through the matching service. Without `--server` an embedded service is
//! started on a free local port.

mod commands;
mod input;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dynmatch_client::{Client, ClientError};
use dynmatch_core::protocol::ErrorKind;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dynmatch", version, about = "Fully dynamic matching benchmarks")]
struct Cli {
    /// Base URL of a running service; an embedded one is used otherwise.
    #[arg(long, global = true)]
    server: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay instances through one or more matchers and report quality and time.
    Run(RunArgs),
    /// Aggregate summary CSVs into a performance profile.
    Profile(ProfileArgs),
    /// Check a native update sequence for invalid operations.
    Validate(ValidateArgs),
    /// Print the maximum matching size of a graph.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// METIS graph file; edges are inserted in file order or shuffled.
    Metis,
    /// Temporal edge stream `u v [sign] [timestamp]`.
    Stream,
    /// Native sequence: header `n <n> ops <k>`, then `I u v` / `D u v`.
    Seq,
}

#[derive(Args)]
pub struct RunArgs {
    /// Instance files.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "seq")]
    pub input: InputFormat,
    /// Algorithms, comma separated or repeated.
    #[arg(long = "algo", required = true, value_delimiter = ',')]
    pub algos: Vec<String>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub settling: bool,
    #[arg(long, conflicts_with = "unsafe_")]
    pub safe: bool,
    #[arg(long = "unsafe")]
    pub unsafe_: bool,
    #[arg(long)]
    pub lazy: bool,
    #[arg(long)]
    pub bgs_c: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub reps: u32,
    /// Audit every k operations.
    #[arg(long)]
    pub verify_every: Option<usize>,
    /// Shuffle METIS edges into a seeded random insertion order.
    #[arg(long)]
    pub random_order: bool,
    /// Append the last x% of operations undone in reverse order.
    #[arg(long)]
    pub undo_percent: Option<f64>,
    /// Summary CSV output.
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    /// Quality profile SVG across the instances.
    #[arg(long)]
    pub out_svg: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Quality,
    Time,
}

#[derive(Args)]
pub struct ProfileArgs {
    /// Summary CSVs written by `run --out-csv`.
    #[arg(required = true)]
    pub csvs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "quality")]
    pub objective: ObjectiveArg,
    /// Smallest tau of the grid.
    #[arg(long, default_value_t = 0.5)]
    pub tau_min: f64,
    /// Number of tau values from 1 down to tau-min.
    #[arg(long, default_value_t = 51)]
    pub tau_steps: usize,
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    #[arg(long)]
    pub out_svg: Option<PathBuf>,
}

#[derive(Args)]
pub struct ValidateArgs {
    pub file: PathBuf,
}

#[derive(Args)]
pub struct OracleArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "metis")]
    pub input: InputFormat,
}

/// Failure classes with their exit codes.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Audit(String),
    Other(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Other(_) => 1,
            CliError::Audit(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Audit(m) | CliError::Other(m) => m,
        }
    }
}

impl From<ClientError> for CliError {
    fn from(e: ClientError) -> Self {
        let mut msg = e.to_string();
        if let ClientError::Api { body, .. } = &e {
            if let Some(i) = body.op_index {
                msg = format!("{msg} (operation {i})");
            }
        }
        match e.kind() {
            Some(ErrorKind::Audit) => CliError::Audit(msg),
            Some(ErrorKind::Input | ErrorKind::NotFound) => CliError::Input(msg),
            _ => CliError::Other(msg),
        }
    }
}

async fn connect(server: Option<String>) -> Result<Client, CliError> {
    let url = match server {
        Some(url) => url,
        None => {
            let s = dynmatch_service::spawn(([127, 0, 0, 1], 0).into())
                .await
                .map_err(|e| CliError::Other(format!("cannot start embedded service: {e}")))?;
            s.url()
        }
    };
    let client = Client::new(&url);
    client.health().await?;
    Ok(client)
}

#[tokio::main]
async fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = async {
        let client = connect(cli.server).await?;
        match cli.command {
            Command::Run(a) => commands::run(&client, a).await,
            Command::Profile(a) => commands::profile(&client, a).await,
            Command::Validate(a) => commands::validate(&client, a).await,
            Command::Oracle(a) => commands::oracle(&client, a).await,
        }
    }
    .await;
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
