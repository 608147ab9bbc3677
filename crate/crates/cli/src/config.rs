//! Run configuration: a JSON file overlaid by command-line flags.
//!
//! Every key is optional in the file; anything left unset falls back to the
//! defaults below. Flags win over the file, the file wins over defaults.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use hlvqe_core::{Backend, HlvqeOptions, ModelParams, Update, Window};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Analytic,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum UpdateKind {
    Normalized,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// The file layer, and the shape in which the effective config is echoed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(rename = "V", skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vbar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vbar_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub update: Option<UpdateKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend: Option<BackendKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init_beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init_theta: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plot_data: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|source| CliError::ParseConfig { path: path.into(), source })
    }

    /// Fields set in `top` replace those here. Setting either coupling key
    /// replaces both, so a flag `--v` overrides a file `vbar`.
    pub fn overlay(mut self, top: ConfigFile) -> Self {
        macro_rules! take {
            ($($f:ident),*) => {$( if top.$f.is_some() { self.$f = top.$f; } )*};
        }
        if top.v.is_some() || top.vbar.is_some() {
            self.v = top.v;
            self.vbar = top.vbar;
        }
        take!(n, epsilon, lambda, lambdas, vbar_grid, eta, iterations, window, update, backend, shots, seed, init_beta, init_theta, mu0, out, format, plot_data);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    V(f64),
    Vbar(f64),
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub epsilon: f64,
    pub coupling: Coupling,
    pub lambda: usize,
    pub lambdas: Vec<usize>,
    pub vbar_grid: Vec<f64>,
    pub eta: f64,
    pub iterations: usize,
    pub window: Window,
    pub update: UpdateKind,
    pub backend: BackendKind,
    pub shots: u64,
    pub seed: u64,
    pub init_beta: f64,
    pub init_theta: Vec<f64>,
    pub mu0: f64,
    pub out: PathBuf,
    pub format: Format,
    pub plot_data: bool,
}

fn default_vbar_grid() -> Vec<f64> {
    (2..=30).map(|k| k as f64 / 10.0).collect()
}

impl RunConfig {
    pub fn resolve(layers: ConfigFile) -> Result<Self, CliError> {
        let coupling = match (layers.v, layers.vbar) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config("both \"V\" and \"vbar\" are set; give exactly one".into()));
            }
            (Some(v), None) => Coupling::V(v),
            (None, Some(vbar)) => Coupling::Vbar(vbar),
            (None, None) => Coupling::Vbar(2.0),
        };
        let n = layers.n.unwrap_or(30);
        let window = match &layers.window {
            Some(w) => w.parse().map_err(|e| CliError::Config(format!("window: {e}")))?,
            None => Window::default(),
        };
        let cfg = Self {
            n,
            epsilon: layers.epsilon.unwrap_or(1.0),
            coupling,
            lambda: layers.lambda.unwrap_or(2),
            lambdas: layers.lambdas.unwrap_or_else(|| (1..=n + 1).collect()),
            vbar_grid: layers.vbar_grid.unwrap_or_else(default_vbar_grid),
            eta: layers.eta.unwrap_or(0.07),
            iterations: layers.iterations.unwrap_or(80),
            window,
            update: layers.update.unwrap_or(UpdateKind::Normalized),
            backend: layers.backend.unwrap_or(BackendKind::Analytic),
            shots: layers.shots.unwrap_or(100_000),
            seed: layers.seed.unwrap_or(1),
            init_beta: layers.init_beta.unwrap_or(0.2),
            init_theta: layers.init_theta.unwrap_or_default(),
            mu0: layers.mu0.unwrap_or(10.0),
            out: layers.out.unwrap_or_else(|| PathBuf::from("results")),
            format: layers.format.unwrap_or(Format::Csv),
            plot_data: layers.plot_data.unwrap_or(false),
        };
        cfg.model()?;
        Ok(cfg)
    }

    pub fn model(&self) -> Result<ModelParams, CliError> {
        Ok(match self.coupling {
            Coupling::V(v) => ModelParams::new(self.n, self.epsilon, v)?,
            Coupling::Vbar(vbar) => ModelParams::with_vbar(self.n, self.epsilon, vbar)?,
        })
    }

    pub fn backend(&self) -> Backend {
        match self.backend {
            BackendKind::Analytic => Backend::Analytic,
            BackendKind::Sampled => Backend::Sampled { shots: self.shots, seed: self.seed },
        }
    }

    pub fn hlvqe_options(&self) -> HlvqeOptions {
        HlvqeOptions {
            eta: self.eta,
            max_iterations: self.iterations,
            backend: self.backend(),
            init_beta: self.init_beta,
            init_theta: self.init_theta.clone(),
            window: self.window,
            update: match self.update {
                UpdateKind::Normalized => Update::Normalized,
                UpdateKind::Plain => Update::Plain,
            },
            energy_tol: None,
        }
    }

    /// Seeds that influenced the result.
    pub fn seeds(&self) -> Vec<u64> {
        match self.backend {
            BackendKind::Sampled => vec![self.seed],
            BackendKind::Analytic => Vec::new(),
        }
    }

    /// The effective configuration in file form; loading it back resolves to `self`.
    pub fn echo(&self) -> ConfigFile {
        let (v, vbar) = match self.coupling {
            Coupling::V(v) => (Some(v), None),
            Coupling::Vbar(b) => (None, Some(b)),
        };
        ConfigFile {
            n: Some(self.n),
            epsilon: Some(self.epsilon),
            v,
            vbar,
            lambda: Some(self.lambda),
            lambdas: Some(self.lambdas.clone()),
            vbar_grid: Some(self.vbar_grid.clone()),
            eta: Some(self.eta),
            iterations: Some(self.iterations),
            window: Some(self.window.to_string()),
            update: Some(self.update),
            backend: Some(self.backend),
            shots: Some(self.shots),
            seed: Some(self.seed),
            init_beta: Some(self.init_beta),
            init_theta: Some(self.init_theta.clone()),
            mu0: Some(self.mu0),
            out: Some(self.out.clone()),
            format: Some(self.format),
            plot_data: Some(self.plot_data),
        }
    }
}
