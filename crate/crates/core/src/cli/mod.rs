//! Command-line front end: configuration, the analysis pipeline, reports,
//! parameter sweeps, and the verification harness.

pub mod analysis;
pub mod report;
pub mod sweep;
pub mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

use crate::entangle::DEFAULT_RANK_TOL;
use crate::error::{Error, Result};
use crate::graph::{generate_family, parse_edge_list, FamilySpec, Graph};
use crate::perm_group::{Bipartition, DEFAULT_ENUMERATION_CAP};

pub use analysis::Analysis;
pub use report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    Nats,
    Bits,
}

impl LogBase {
    /// Converts a value in nats to this base.
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            LogBase::Nats => nats,
            LogBase::Bits => nats / std::f64::consts::LN_2,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            LogBase::Nats => "nats",
            LogBase::Bits => "bits",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisConfig {
    /// Vertices of part A; the first `⌊n/2⌋` vertices when absent.
    pub bipartition: Option<Vec<usize>>,
    pub seed: u64,
    pub rank_tol: f64,
    /// Random optimizer starts in addition to the best basis vector.
    pub restarts: usize,
    /// Group enumeration cap.
    pub max_group: usize,
    /// Number of seeds for the generic intertwiner rank.
    pub rank_seeds: usize,
    pub log_base: LogBase,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            bipartition: None,
            seed: 0,
            rank_tol: DEFAULT_RANK_TOL,
            restarts: 8,
            max_group: DEFAULT_ENUMERATION_CAP,
            rank_seeds: crate::bounds::DEFAULT_RANK_SEEDS,
            log_base: LogBase::Nats,
        }
    }
}

impl AnalysisConfig {
    pub fn resolve_bipartition(&self, n: usize) -> Result<Bipartition> {
        match &self.bipartition {
            Some(a) => Bipartition::new(n, a),
            None => Ok(Bipartition::first_half(n)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.rank_seeds == 0 {
            return Err(Error::InvalidConfig("at least one rank seed is required".into()));
        }
        if !(self.rank_tol > 0.0 && self.rank_tol < 1.0) {
            return Err(Error::InvalidConfig(format!("rank tolerance must lie in (0, 1), got {}", self.rank_tol)));
        }
        Ok(())
    }
}

/// Parses a comma-separated vertex list such as `0,2,4`.
pub fn parse_vertex_list(s: &str) -> Result<Vec<usize>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidBipartition(format!("bad vertex `{t}` in `{s}`")))
        })
        .collect()
}

/// Where a graph comes from.
#[derive(Clone, Debug)]
pub enum GraphSource {
    Family(FamilySpec),
    EdgeFile(PathBuf),
}

impl GraphSource {
    pub fn label(&self) -> String {
        match self {
            GraphSource::Family(spec) => spec.to_string(),
            GraphSource::EdgeFile(path) => format!("edges:{}", path.display()),
        }
    }

    pub fn family(&self) -> Option<&FamilySpec> {
        match self {
            GraphSource::Family(spec) => Some(spec),
            GraphSource::EdgeFile(_) => None,
        }
    }

    pub fn load(&self) -> Result<Graph> {
        match self {
            GraphSource::Family(spec) => generate_family(spec),
            GraphSource::EdgeFile(path) => parse_edge_list(&std::fs::read_to_string(path)?),
        }
    }
}

/// Writes `text` to `out`, or to stdout when absent.
pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}
