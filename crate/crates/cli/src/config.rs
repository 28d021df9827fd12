//! Config documents: one JSON object per invocation.

use serde::{Deserialize, Serialize};
use wbroadcast::{CloningMachine, CloningMachineF64, Outcome, WParams, WParamsF64};

use crate::error::{CliError, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub x: f64,
    pub y: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

/// A config whose invariants have been checked.
#[derive(Debug, Clone)]
pub struct Validated {
    pub raw: ProtocolConfig,
    pub params: WParamsF64,
    pub machine: CloningMachineF64,
    pub outcome: Option<Outcome>,
}

impl ProtocolConfig {
    /// Uniform W input with a symmetric machine, `x = y = 1`.
    pub fn uniform_symmetric() -> Self {
        let a = 1.0 / 3f64.sqrt();
        Self {
            alpha: a,
            beta: a,
            gamma: a,
            x: 1.0,
            y: 1.0,
            tol: DEFAULT_TOL,
            outcome: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("cannot parse config: {e}")))
    }

    pub fn validate(self) -> Result<Validated> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(CliError::Config(format!(
                "tol must be a positive number, got {}",
                self.tol
            )));
        }
        let params = WParams::new(self.alpha, self.beta, self.gamma).map_err(|e| CliError::Config(e.to_string()))?;
        let machine = CloningMachine::new(self.x, self.y).map_err(|e| CliError::Config(e.to_string()))?;
        let outcome = self
            .outcome
            .as_deref()
            .map(str::parse::<Outcome>)
            .transpose()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(Validated {
            raw: self,
            params,
            machine,
            outcome,
        })
    }
}

/// Explicit values or an inclusive linear range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, steps: usize },
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Grid::Values(v) => v.clone(),
            Grid::Range { start, stop, steps } => match steps {
                0 => vec![],
                1 => vec![*start],
                n => (0..*n)
                    .map(|i| start + (stop - start) * i as f64 / (*n - 1) as f64)
                    .collect(),
            },
        }
    }
}

pub const SWEEP_METRICS: [&str; 8] = [
    "p_up_up_up",
    "fidelity_rho156_w",
    "min_ppt_cut1",
    "min_ppt_cut2",
    "min_ppt_cut3",
    "w3_rho14",
    "w4_rho14",
    "subspace_weight_rho156",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub alpha: Grid,
    pub beta: Grid,
    pub x: Grid,
    pub y: Grid,
    /// Subset of [`SWEEP_METRICS`]; all of them when absent.
    #[serde(default)]
    pub metrics: Option<Vec<String>>,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("cannot parse sweep spec: {e}")))
    }

    /// Metric columns in their canonical order.
    pub fn metric_columns(&self) -> Result<Vec<&'static str>> {
        match &self.metrics {
            None => Ok(SWEEP_METRICS.to_vec()),
            Some(list) => {
                if let Some(bad) = list.iter().find(|m| !SWEEP_METRICS.contains(&m.as_str())) {
                    return Err(CliError::Config(format!("unknown sweep metric {bad:?}")));
                }
                Ok(SWEEP_METRICS
                    .iter()
                    .copied()
                    .filter(|m| list.iter().any(|l| l == m))
                    .collect())
            }
        }
    }
}
