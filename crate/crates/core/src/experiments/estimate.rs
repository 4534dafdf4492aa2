//! Monte Carlo estimates.

use serde::{Deserialize, Serialize};

use crate::numeric::mean_stderr;

/// Mean of independent trials with its standard error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub value: f64,
    /// Sample standard deviation over the square root of the trial count.
    pub stderr: f64,
    pub samples: usize,
    pub seed: Option<u64>,
    pub wall_seconds: f64,
}

impl EstimateRecord {
    /// A value known without sampling error.
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            stderr: 0.0,
            samples: 0,
            seed: None,
            wall_seconds: 0.0,
        }
    }

    /// Aggregates per-trial values given in trial order.
    pub fn from_trials(values: &[f64], seed: u64, wall_seconds: f64) -> Self {
        let (value, stderr) = mean_stderr(values);
        Self {
            value,
            stderr,
            samples: values.len(),
            seed: Some(seed),
            wall_seconds,
        }
    }
}
