use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::decode::load_rgb;
use super::manifest::{DatabaseManifest, ManifestEntry, ScoreConvention};
use crate::baselines::{psnr_from_rmse, rmse, PsnrParams};
use crate::color_space::rgb_to_lab;
use crate::error::{PersimError, Result};
use crate::fusion::{persim_scores, persim_single_resolution, MetricId, PersimConfig};
use crate::stats::{kendall, plcc_rmse_after_regression, spearman, FitOptions, LogisticFit, PairedSamples};

/// Label of the row computed over every entry.
pub const OVERALL_CATEGORY: &str = "All";

#[derive(Clone, Debug)]
pub struct EvaluateOptions {
    pub metrics: Vec<MetricId>,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub fit: FitOptions,
    pub psnr: PsnrParams,
}

impl Default for EvaluateOptions {
    fn default() -> Self {
        EvaluateOptions {
            metrics: vec![MetricId::Persim, MetricId::Logsim, MetricId::Psnr],
            jobs: None,
            fit: FitOptions::default(),
            psnr: PsnrParams::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairResult {
    pub index: usize,
    pub reference: String,
    pub distorted: String,
    pub distortion: String,
    pub categories: Vec<String>,
    pub subjective: f64,
    pub scores: BTreeMap<MetricId, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exclusion {
    pub index: usize,
    pub line: u64,
    pub reference: String,
    pub distorted: String,
    pub reason: String,
}

/// Correlation statistics of one metric over one category.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub metric: MetricId,
    pub category: String,
    pub n: usize,
    pub plcc: Option<f64>,
    pub rmse: Option<f64>,
    pub srocc: Option<f64>,
    pub kcc: Option<f64>,
    pub fit: Option<LogisticFit>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub database: String,
    pub convention: ScoreConvention,
    pub config_fingerprint: String,
    pub metrics: Vec<MetricId>,
    pub rows: Vec<StatsRow>,
    pub pairs: Vec<PairResult>,
    pub exclusions: Vec<Exclusion>,
}

fn score_pair(entry: &ManifestEntry, metrics: &[MetricId], cfg: &PersimConfig, psnr: &PsnrParams) -> Result<BTreeMap<MetricId, f64>> {
    let reference = load_rgb(&entry.reference)?;
    let distorted = load_rgb(&entry.distorted)?;
    if reference.dims() != distorted.dims() {
        return Err(PersimError::DimensionMismatch {
            context: "reference vs distorted image",
            left: reference.dims(),
            right: distorted.dims(),
        });
    }
    let wants = |m: MetricId| metrics.contains(&m);
    let mut scores = BTreeMap::new();
    if wants(MetricId::Persim) || wants(MetricId::Logsim) || wants(MetricId::PersimSr) {
        let ref_lab = rgb_to_lab(&reference)?;
        let dist_lab = rgb_to_lab(&distorted)?;
        if wants(MetricId::Persim) || wants(MetricId::Logsim) {
            let s = persim_scores(&ref_lab, &dist_lab, cfg)?;
            if wants(MetricId::Persim) {
                scores.insert(MetricId::Persim, s.persim);
            }
            if wants(MetricId::Logsim) {
                scores.insert(MetricId::Logsim, s.logsim);
            }
        }
        if wants(MetricId::PersimSr) {
            scores.insert(MetricId::PersimSr, persim_single_resolution(&ref_lab, &dist_lab, cfg)?.value);
        }
    }
    if wants(MetricId::Psnr) || wants(MetricId::Rmse) {
        let err = rmse(&reference, &distorted)?;
        if wants(MetricId::Psnr) {
            scores.insert(MetricId::Psnr, psnr_from_rmse(err, psnr));
        }
        if wants(MetricId::Rmse) {
            scores.insert(MetricId::Rmse, err);
        }
    }
    Ok(scores)
}

fn note<T>(result: Result<T>, what: &str, notes: &mut Vec<String>) -> Option<T> {
    match result {
        Ok(v) => Some(v),
        Err(e) => {
            notes.push(format!("{what}: {e}"));
            None
        }
    }
}

fn stats_row(metric: MetricId, category: &str, pairs: &[&PairResult], convention: ScoreConvention, fit: &FitOptions) -> StatsRow {
    let objective: Vec<f64> = pairs.iter().map(|p| p.scores[&metric]).collect();
    let subjective: Vec<f64> = pairs.iter().map(|p| p.subjective).collect();
    let oriented: Vec<f64> = match convention {
        ScoreConvention::Mos => subjective.clone(),
        ScoreConvention::Dmos => subjective.iter().map(|v| -v).collect(),
    };
    let mut notes = Vec::new();
    let srocc = note(spearman(&objective, &oriented), "srocc", &mut notes);
    let kcc = note(kendall(&objective, &oriented), "kcc", &mut notes);
    let regression = note(
        PairedSamples::new(objective, subjective).and_then(|s| plcc_rmse_after_regression(&s, fit)),
        "regression",
        &mut notes,
    );
    if let Some(r) = &regression {
        if !r.fit.converged {
            notes.push(format!("regression did not converge after {} iterations", r.fit.iterations));
        }
    }
    StatsRow {
        metric,
        category: category.to_string(),
        n: pairs.len(),
        plcc: regression.as_ref().map(|r| r.plcc),
        rmse: regression.as_ref().map(|r| r.rmse),
        srocc,
        kcc,
        fit: regression.map(|r| r.fit),
        notes,
    }
}

/// Scores every pair, then computes per-category and overall statistics.
///
/// Pairs that fail to decode or score are listed in `exclusions`; the rest
/// keep manifest order regardless of how the work was scheduled.
pub fn evaluate_database(manifest: &DatabaseManifest, options: &EvaluateOptions, cfg: &PersimConfig) -> Result<EvaluationReport> {
    if options.metrics.is_empty() {
        return Err(PersimError::InvalidParameter("at least one metric is required".into()));
    }
    cfg.validate()?;
    let mut metrics = options.metrics.clone();
    metrics.sort();
    metrics.dedup();
    log::info!("scoring {} pairs from {}", manifest.entries.len(), manifest.database);

    let work = || -> Vec<Result<BTreeMap<MetricId, f64>>> {
        manifest
            .entries
            .par_iter()
            .map(|e| score_pair(e, &metrics, cfg, &options.psnr))
            .collect()
    };
    let results = match options.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| PersimError::InvalidParameter(format!("cannot build worker pool: {e}")))?
            .install(work),
        None => work(),
    };

    let mut pairs = Vec::new();
    let mut exclusions = Vec::new();
    for (index, (entry, result)) in manifest.entries.iter().zip(results).enumerate() {
        match result {
            Ok(scores) => pairs.push(PairResult {
                index,
                reference: entry.reference_label.clone(),
                distorted: entry.distorted_label.clone(),
                distortion: entry.distortion.clone(),
                categories: entry.categories.clone(),
                subjective: entry.score,
                scores,
            }),
            Err(e) => {
                log::warn!("excluding {} vs {}: {e}", entry.reference_label, entry.distorted_label);
                exclusions.push(Exclusion {
                    index,
                    line: entry.line,
                    reference: entry.reference_label.clone(),
                    distorted: entry.distorted_label.clone(),
                    reason: e.to_string(),
                })
            }
        }
    }

    log::info!("{} pairs scored, {} excluded", pairs.len(), exclusions.len());
    let categories: BTreeSet<&str> = pairs.iter().flat_map(|p| p.categories.iter().map(String::as_str)).collect();
    let mut rows = Vec::new();
    for &metric in &metrics {
        for &category in &categories {
            let subset: Vec<&PairResult> = pairs.iter().filter(|p| p.categories.iter().any(|c| c == category)).collect();
            rows.push(stats_row(metric, category, &subset, manifest.convention, &options.fit));
        }
        let all: Vec<&PairResult> = pairs.iter().collect();
        rows.push(stats_row(metric, OVERALL_CATEGORY, &all, manifest.convention, &options.fit));
    }

    Ok(EvaluationReport {
        database: manifest.database.clone(),
        convention: manifest.convention,
        config_fingerprint: cfg.fingerprint(),
        metrics,
        rows,
        pairs,
        exclusions,
    })
}

fn fmt_opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.digits$}"))
}

impl EvaluationReport {
    pub fn row(&self, metric: MetricId, category: &str) -> Option<&StatsRow> {
        self.rows.iter().find(|r| r.metric == metric && r.category == category)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }

    /// Fixed-width table for terminals.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "database: {} ({:?}), {} pairs scored, {} excluded\n",
            self.database,
            self.convention,
            self.pairs.len(),
            self.exclusions.len()
        );
        out.push_str(&format!(
            "{:<10} {:<16} {:>6} {:>8} {:>9} {:>8} {:>8}\n",
            "metric", "category", "n", "PLCC", "RMSE", "SROCC", "KCC"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<10} {:<16} {:>6} {:>8} {:>9} {:>8} {:>8}\n",
                r.metric.as_str(),
                r.category,
                r.n,
                fmt_opt(r.plcc, 4),
                fmt_opt(r.rmse, 4),
                fmt_opt(r.srocc, 4),
                fmt_opt(r.kcc, 4)
            ));
        }
        for e in &self.exclusions {
            out.push_str(&format!("excluded line {}: {} vs {}: {}\n", e.line, e.reference, e.distorted, e.reason));
        }
        out
    }

    /// One CSV line per statistics row.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["metric", "category", "n", "plcc", "rmse", "srocc", "kcc", "b1", "b2", "b3", "b4", "b5"])
            .expect("in-memory write");
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            let beta = r.fit.as_ref().map(|f| f.beta);
            let mut record = vec![
                r.metric.as_str().to_string(),
                r.category.clone(),
                r.n.to_string(),
                opt(r.plcc),
                opt(r.rmse),
                opt(r.srocc),
                opt(r.kcc),
            ];
            record.extend((0..5).map(|k| opt(beta.map(|b| b[k]))));
            w.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}
