//! JSON result and histogram documents. Field order is fixed by the struct
//! declarations, so identical runs serialize byte-identically.

use qkmedians_core::{ClusteringResult, DistanceEstimate, Mode, PrecisionReport, RegisterLayout, ShotCounts};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const FORMAT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Echo of the configuration a run actually used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub input: String,
    pub has_header: bool,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_medians: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels_column: Option<usize>,
}

impl Default for ResolvedConfig {
    fn default() -> Self {
        Self {
            input: String::new(),
            has_header: false,
            mode: Mode::Exact,
            shots: None,
            epsilon: None,
            seed: 0,
            u: None,
            k: None,
            max_iterations: None,
            initial_medians: None,
            labels_column: None,
        }
    }
}

/// One row of the median command's candidate table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRow {
    pub index: usize,
    pub point: Vec<f64>,
    pub z: f64,
    pub p0: f64,
    pub distance: f64,
    pub clamped: bool,
    pub classical_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Distance {
        u: Vec<f64>,
        set_size: usize,
        dimension: usize,
        padded_dimension: usize,
        layout: RegisterLayout,
        estimate: DistanceEstimate,
        classical_distance: f64,
    },
    Median {
        median: usize,
        mean: Vec<f64>,
        candidates: Vec<CandidateRow>,
    },
    Cluster {
        points: Vec<Vec<f64>>,
        result: ClusteringResult,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        precision: Option<PrecisionReport>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub version: String,
    pub command: String,
    pub config: ResolvedConfig,
    pub result: Payload,
}

impl ResultDocument {
    pub fn new(command: &str, config: ResolvedConfig, result: Payload) -> Self {
        Self {
            version: FORMAT_VERSION.to_string(),
            command: command.to_string(),
            config,
            result,
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        to_json(self)
    }
}

/// Ancilla outcome counts of a sampled distance run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramDocument {
    pub shots: u64,
    pub seed: u64,
    pub counts: OutcomeCounts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    #[serde(rename = "0")]
    pub zero: u64,
    #[serde(rename = "1")]
    pub one: u64,
}

impl HistogramDocument {
    pub fn new(counts: ShotCounts, seed: u64) -> Self {
        Self {
            shots: counts.shots(),
            seed,
            counts: OutcomeCounts {
                zero: counts.zeros,
                one: counts.ones,
            },
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        to_json(self)
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    text.push('\n');
    Ok(text)
}
