//! Correlation statistics and monotonic regression for metric validation.

mod correlation;
mod regression;

pub use correlation::{average_ranks, kendall, pearson, spearman};
pub use regression::{
    affine_fit, fit_logistic, plcc_rmse_after_regression, AffineFit, FitOptions, LogisticFit,
    LogisticVariant, RegressionStats,
};

use crate::error::{PersimError, Result};

/// Objective scores paired with subjective ratings.
#[derive(Clone, Debug, PartialEq)]
pub struct PairedSamples {
    objective: Vec<f64>,
    subjective: Vec<f64>,
}

impl PairedSamples {
    pub fn new(objective: Vec<f64>, subjective: Vec<f64>) -> Result<Self> {
        if objective.len() != subjective.len() {
            return Err(PersimError::InvalidParameter(format!(
                "paired samples differ in length: {} vs {}",
                objective.len(),
                subjective.len()
            )));
        }
        if objective.len() < 3 {
            return Err(PersimError::InvalidParameter(format!(
                "at least 3 pairs are required, got {}",
                objective.len()
            )));
        }
        if objective.iter().chain(&subjective).any(|v| !v.is_finite()) {
            return Err(PersimError::InvalidParameter("paired samples must be finite".into()));
        }
        Ok(PairedSamples {
            objective,
            subjective,
        })
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn subjective(&self) -> &[f64] {
        &self.subjective
    }

    pub fn len(&self) -> usize {
        self.objective.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objective.is_empty()
    }

    pub fn pearson(&self) -> Result<f64> {
        pearson(&self.objective, &self.subjective)
    }

    pub fn spearman(&self) -> Result<f64> {
        spearman(&self.objective, &self.subjective)
    }

    pub fn kendall(&self) -> Result<f64> {
        kendall(&self.objective, &self.subjective)
    }
}
