//! Command-line front end: config resolution, subcommands, report writing.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod report;

use config::{BackendKind, ConfigFile, Format, RunConfig, UpdateKind};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read config {}: {source}", path.display())]
    ReadConfig { path: PathBuf, source: std::io::Error },

    #[error("invalid config {}: {source}", path.display())]
    ParseConfig { path: PathBuf, source: serde_json::Error },

    #[error("config error: {0}")]
    Config(String),

    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] hlvqe_core::Error),
}

impl CliError {
    /// 3 for numerical failures, 2 for everything the user can fix.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hlvqe", version, about = "Hamiltonian-learning VQE for the Lipkin-Meshkov-Glick model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact ground state in the full space
    Exact(Flags),
    /// Optimal rotation angle and ground state in a truncated space
    Effective(Flags),
    /// Energy errors over a list of cutoffs
    SweepLambda(Flags),
    /// Relative energy error and angle over a grid of couplings
    SweepVbar(Flags),
    /// Joint gradient descent on the angle and circuit parameters
    Hlvqe(Flags),
    /// Rotate a truncated solution back to the full basis and project parity
    Reconstruct(Flags),
    /// First excited state through a chemical-potential penalty
    Excited(Flags),
}

impl Command {
    pub fn flags(&self) -> &Flags {
        match self {
            Command::Exact(f)
            | Command::Effective(f)
            | Command::SweepLambda(f)
            | Command::SweepVbar(f)
            | Command::Hlvqe(f)
            | Command::Reconstruct(f)
            | Command::Excited(f) => f,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON config file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, conflicts_with = "v")]
    pub vbar: Option<f64>,
    /// Interaction strength V (alternative to --vbar)
    #[arg(long = "v")]
    pub v: Option<f64>,
    #[arg(long)]
    pub lambda: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub vbar_grid: Option<Vec<f64>>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub backend: Option<BackendKind>,
    /// Summary window, e.g. 70..80
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long, value_enum)]
    pub update: Option<UpdateKind>,
    #[arg(long)]
    pub init_beta: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub init_theta: Option<Vec<f64>>,
    /// Chemical potential for `excited`
    #[arg(long)]
    pub mu0: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Also write long-format CSV for plotting
    #[arg(long)]
    pub plot_data: bool,
}

impl Flags {
    fn layer(&self) -> ConfigFile {
        ConfigFile {
            n: self.n,
            epsilon: self.eps,
            v: self.v,
            vbar: self.vbar,
            lambda: self.lambda,
            lambdas: self.lambdas.clone(),
            vbar_grid: self.vbar_grid.clone(),
            eta: self.eta,
            iterations: self.iters,
            window: self.window.clone(),
            update: self.update,
            backend: self.backend,
            shots: self.shots,
            seed: self.seed,
            init_beta: self.init_beta,
            init_theta: self.init_theta.clone(),
            mu0: self.mu0,
            out: self.out.clone(),
            format: self.format,
            plot_data: self.plot_data.then_some(true),
        }
    }

    /// Defaults, then the config file, then these flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        if file.v.is_some() && file.vbar.is_some() {
            return Err(CliError::Config("both \"V\" and \"vbar\" are set; give exactly one".into()));
        }
        RunConfig::resolve(file.overlay(self.layer()))
    }
}

pub fn execute(command: &Command) -> Result<Vec<PathBuf>, CliError> {
    let cfg = command.flags().resolve()?;
    let report = match command {
        Command::Exact(_) => commands::exact(&cfg)?,
        Command::Effective(_) => commands::effective(&cfg)?,
        Command::SweepLambda(_) => commands::sweep_lambda(&cfg)?,
        Command::SweepVbar(_) => commands::sweep_vbar(&cfg)?,
        Command::Hlvqe(_) => commands::hlvqe(&cfg)?,
        Command::Reconstruct(_) => commands::reconstruct(&cfg)?,
        Command::Excited(_) => commands::excited(&cfg)?,
    };
    report.emit(&cfg)
}
