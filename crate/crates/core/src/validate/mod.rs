//! Goodness-of-fit checks producing pass/fail [`TestReport`]s.

mod binned;
mod ks;
mod moment;

use serde::{Deserialize, Serialize};

pub use binned::{conditional_sign_check, density_histogram_check, MIN_BIN_EXPECTED, MIN_SIGN_BIN};
pub use ks::{kolmogorov_survival, ks_one_sample, two_sample_ks, KS_MIN_N};
pub use moment::moment_scaling_check;

/// Default significance threshold for p-value tests.
pub const P_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    /// Passes when `p_or_residual ≥ threshold`.
    PValue,
    /// Passes when `p_or_residual ≤ threshold`.
    Residual,
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub name: String,
    pub statistic: f64,
    pub p_or_residual: f64,
    pub threshold: f64,
    pub passed: bool,
    pub seed: u64,
    pub n: u64,
    #[serde(skip)]
    pub kind: Option<ReportKind>,
}

impl TestReport {
    pub fn p_value(name: impl Into<String>, statistic: f64, p: f64, threshold: f64, n: u64) -> Self {
        Self {
            name: name.into(),
            statistic,
            p_or_residual: p,
            threshold,
            passed: p >= threshold,
            seed: 0,
            n,
            kind: Some(ReportKind::PValue),
        }
    }

    pub fn residual(
        name: impl Into<String>,
        statistic: f64,
        residual: f64,
        threshold: f64,
        n: u64,
    ) -> Self {
        Self {
            name: name.into(),
            statistic,
            p_or_residual: residual,
            threshold,
            // NaN residuals fail
            passed: residual <= threshold,
            seed: 0,
            n,
            kind: Some(ReportKind::Residual),
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Same report with a different threshold, re-deciding `passed`.
    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self.passed = match self.kind {
            Some(ReportKind::PValue) => self.p_or_residual >= threshold,
            _ => self.p_or_residual <= threshold,
        };
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rules() {
        assert!(TestReport::p_value("a", 0.1, 0.01, P_THRESHOLD, 10).passed);
        assert!(!TestReport::p_value("a", 0.1, 1e-4, P_THRESHOLD, 10).passed);
        assert!(TestReport::residual("b", 0.0, 1e-7, 1e-6, 1).passed);
        assert!(!TestReport::residual("b", 0.0, f64::NAN, 1e-6, 1).passed);
        let r = TestReport::residual("b", 0.0, 2e-6, 1e-6, 1).with_threshold(1e-5);
        assert!(r.passed);
    }

    #[test]
    fn json_keys() {
        let r = TestReport::p_value("x", 0.5, 0.2, P_THRESHOLD, 100).with_seed(7);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["n", "name", "p_or_residual", "passed", "seed", "statistic", "threshold"]);
    }
}
