use std::collections::BTreeMap;
use std::path::PathBuf;

use chanent::min_output::MinOutOptions;
use chanent::states::Base;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Channel(#[from] chanent::Error),
    #[error("{0}")]
    Input(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Named tolerances, their defaults and what they bound.
pub const TOLERANCES: [(&str, f64, &str); 8] = [
    ("opt", 1e-12, "optimizer step-size stop"),
    ("ineq", 1e-7, "purity implication slack"),
    ("additivity", 1e-8, "map-entropy additivity residual"),
    ("spectrum", 1e-10, "Choi spectrum distance"),
    ("entrywise", 1e-11, "index-swap entrywise distance"),
    ("bound", 1e-9, "entropy bound slack"),
    ("classical", 1e-12, "diagonal majorization slack"),
    ("concat", 1e-10, "concatenation subadditivity slack"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    /// `None` selects the command's own default.
    pub trials: Option<usize>,
    pub starts: usize,
    pub base: Base,
    pub q: Option<f64>,
    pub tol: BTreeMap<String, f64>,
    pub out: Option<PathBuf>,
    /// Grid size for region scans and samples per tetrahedron edge.
    pub grid: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            trials: None,
            starts: MinOutOptions::default().starts,
            base: Base::Natural,
            q: None,
            tol: BTreeMap::new(),
            out: None,
            grid: 101,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.trials == Some(0) {
            return Err(CliError::Input("--trials must be at least 1".into()));
        }
        if self.starts == 0 {
            return Err(CliError::Input("--starts must be at least 1".into()));
        }
        if self.grid < 2 {
            return Err(CliError::Input("--grid must be at least 2".into()));
        }
        if let Some(q) = self.q {
            if !(q.is_finite() && q >= 0.0) {
                return Err(CliError::Input(format!(
                    "--q must be finite and non-negative, got {q}"
                )));
            }
        }
        for (name, value) in &self.tol {
            if !TOLERANCES.iter().any(|(n, _, _)| n == name) {
                let known: Vec<&str> = TOLERANCES.iter().map(|t| t.0).collect();
                return Err(CliError::Input(format!(
                    "unknown tolerance '{name}' (known: {})",
                    known.join(", ")
                )));
            }
            if !(value.is_finite() && *value > 0.0) {
                return Err(CliError::Input(format!(
                    "tolerance {name} must be positive, got {value}"
                )));
            }
        }
        Ok(())
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tol.get(name).copied().unwrap_or_else(|| {
            TOLERANCES
                .iter()
                .find(|(n, _, _)| *n == name)
                .map(|t| t.1)
                .unwrap_or_else(|| panic!("no tolerance named {name}"))
        })
    }

    pub fn trials_or(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    pub fn min_out_options(&self, seed: u64) -> MinOutOptions {
        MinOutOptions {
            starts: self.starts,
            seed,
            tol_opt: self.tol("opt"),
            ..MinOutOptions::default()
        }
    }
}

/// Parses `name=value`.
pub fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|e| format!("bad tolerance value '{value}': {e}"))?;
    Ok((name.trim().to_string(), value))
}
