//! Run configuration: a preset, then an optional JSON file, then flags.

use std::path::Path;

use anyhow::{bail, Context, Result};
use mvsc_core::linalg::KMEANS_RESTARTS;
use mvsc_core::solver::{Preset, SolverConfig};
use serde::Deserialize;

/// JSON configuration document. Every key is optional; unknown keys are
/// rejected.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub omega1: Option<f64>,
    pub alpha: Option<f64>,
    pub lambda: Option<f64>,
    pub mu0: Option<f64>,
    pub rho: Option<f64>,
    pub mu_max: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub clusters: Option<usize>,
    pub kmeans_restarts: Option<usize>,
    pub seed: Option<u64>,
    /// Base preset; its numeric values are overridden by any numeric keys in
    /// the same file.
    pub preset: Option<String>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("invalid run configuration")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Values set in `other` replace those in `self`.
    pub fn overlay(self, other: RunConfig) -> RunConfig {
        RunConfig {
            omega1: other.omega1.or(self.omega1),
            alpha: other.alpha.or(self.alpha),
            lambda: other.lambda.or(self.lambda),
            mu0: other.mu0.or(self.mu0),
            rho: other.rho.or(self.rho),
            mu_max: other.mu_max.or(self.mu_max),
            tol: other.tol.or(self.tol),
            max_iter: other.max_iter.or(self.max_iter),
            clusters: other.clusters.or(self.clusters),
            kmeans_restarts: other.kmeans_restarts.or(self.kmeans_restarts),
            seed: other.seed.or(self.seed),
            preset: other.preset.or(self.preset),
        }
    }

    /// Starts from the named preset (default `coil20`) and applies every
    /// numeric value that is set.
    pub fn resolve(&self) -> Result<Settings> {
        let preset: Preset = match &self.preset {
            Some(name) => name.parse()?,
            None => Preset::Coil20,
        };
        let base = SolverConfig::preset(preset);
        let solver = SolverConfig {
            omega1: self.omega1.unwrap_or(base.omega1),
            alpha: self.alpha.unwrap_or(base.alpha),
            lambda: self.lambda.unwrap_or(base.lambda),
            mu0: self.mu0.unwrap_or(base.mu0),
            rho: self.rho.unwrap_or(base.rho),
            mu_max: self.mu_max.unwrap_or(base.mu_max),
            tol: self.tol.unwrap_or(base.tol),
            max_iter: self.max_iter.unwrap_or(base.max_iter),
            seed: self.seed.unwrap_or(base.seed),
        };
        solver.validate()?;
        let kmeans_restarts = self.kmeans_restarts.unwrap_or(KMEANS_RESTARTS);
        if kmeans_restarts == 0 {
            bail!("kmeans_restarts must be positive");
        }
        if self.clusters == Some(0) {
            bail!("clusters must be positive");
        }
        Ok(Settings { solver, clusters: self.clusters, kmeans_restarts })
    }
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub solver: SolverConfig,
    pub clusters: Option<usize>,
    pub kmeans_restarts: usize,
}

impl Settings {
    pub fn clusters(&self) -> Result<usize> {
        self.clusters.context("the cluster count is required (--clusters or \"clusters\" in the config file)")
    }
}
