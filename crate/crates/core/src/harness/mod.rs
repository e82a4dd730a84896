//! Database ingestion, batch evaluation and reporting.

mod compare;
mod decode;
mod evaluate;
mod manifest;
mod scatter;

pub use compare::{compare_images, compare_paths, CompareRecord};
pub use decode::load_rgb;
pub use evaluate::{
    evaluate_database, EvaluateOptions, EvaluationReport, Exclusion, PairResult, StatsRow,
    OVERALL_CATEGORY,
};
pub use manifest::{load_manifest, DatabaseManifest, ManifestEntry, ScoreConvention};
pub use scatter::{scatter_rows, write_scatter, ScatterRow, ScatterSummary};
