use std::path::Path;

use serde::Serialize;

use super::evaluate::{EvaluationReport, OVERALL_CATEGORY};
use crate::error::{PersimError, Result};
use crate::fusion::MetricId;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScatterRow {
    pub objective: f64,
    pub mapped: f64,
    pub subjective: f64,
    pub category: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScatterSummary {
    pub rows: usize,
    pub warning: Option<String>,
}

/// Scatter data for `metric`, optionally restricted to one category. The
/// mapped column uses that category's fit, or the overall fit without a filter.
pub fn scatter_rows(report: &EvaluationReport, metric: MetricId, category: Option<&str>) -> Result<Vec<ScatterRow>> {
    if !report.metrics.contains(&metric) {
        return Err(PersimError::InvalidParameter(format!("metric {metric} was not evaluated")));
    }
    let fit_category = category.unwrap_or(OVERALL_CATEGORY);
    let fit = report.row(metric, fit_category).and_then(|r| r.fit.clone());
    let rows = report
        .pairs
        .iter()
        .filter(|p| category.is_none_or(|c| p.categories.iter().any(|pc| pc == c)))
        .map(|p| {
            let objective = p.scores[&metric];
            ScatterRow {
                objective,
                mapped: fit.as_ref().map_or(f64::NAN, |f| f.predict(objective)),
                subjective: p.subjective,
                category: p.categories.join(";"),
            }
        })
        .collect();
    Ok(rows)
}

/// Writes `objective,mapped,subjective,category` rows.
pub fn write_scatter(report: &EvaluationReport, metric: MetricId, category: Option<&str>, path: &Path) -> Result<ScatterSummary> {
    let rows = scatter_rows(report, metric, category)?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => PersimError::io(path, io),
        other => PersimError::Numerical(format!("{other:?}")),
    })?;
    let io_err = |e: csv::Error| PersimError::io(path, std::io::Error::other(e.to_string()));
    w.write_record(["objective", "mapped", "subjective", "category"]).map_err(io_err)?;
    for r in &rows {
        w.serialize(r).map_err(io_err)?;
    }
    w.flush().map_err(|e| PersimError::io(path, e))?;
    let warning = rows.is_empty().then(|| {
        let msg = format!("no pairs matched category filter {category:?}; wrote header only");
        log::warn!("{msg}");
        msg
    });
    Ok(ScatterSummary { rows: rows.len(), warning })
}
