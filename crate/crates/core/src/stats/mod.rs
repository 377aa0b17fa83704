//! Goodness-of-fit tests used on eigenvalue samples.

mod cdf;
mod normality;

pub use cdf::{cdf_from_density, Cdf, CdfTable};
pub use normality::{jarque_bera, ks_normal, ks_statistic, ks_test, lilliefors, normal_fit};

use serde::{Deserialize, Serialize};

pub const ALPHAS: [f64; 3] = [0.10, 0.05, 0.01];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Reject,
    FailToReject,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValue {
    pub alpha: f64,
    pub value: f64,
    pub decision: Decision,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub test_name: String,
    pub statistic: f64,
    pub sample_size: usize,
    /// One entry per α in [`ALPHAS`].
    pub critical_values: Vec<CriticalValue>,
}

impl TestReport {
    /// Rejects at α exactly when the statistic exceeds the critical value.
    pub(crate) fn new(name: &str, statistic: f64, n: usize, cv: impl Fn(f64) -> f64) -> Self {
        let critical_values = ALPHAS
            .iter()
            .map(|&alpha| {
                let value = cv(alpha);
                let decision = if statistic > value {
                    Decision::Reject
                } else {
                    Decision::FailToReject
                };
                CriticalValue { alpha, value, decision }
            })
            .collect();
        Self {
            test_name: name.to_string(),
            statistic,
            sample_size: n,
            critical_values,
        }
    }

    pub fn critical_value(&self, alpha: f64) -> Option<f64> {
        self.entry(alpha).map(|c| c.value)
    }

    pub fn rejects(&self, alpha: f64) -> Option<bool> {
        self.entry(alpha).map(|c| c.decision == Decision::Reject)
    }

    fn entry(&self, alpha: f64) -> Option<&CriticalValue> {
        self.critical_values.iter().find(|c| (c.alpha - alpha).abs() < 1e-12)
    }
}
