use std::path::Path;

use serde::{Deserialize, Serialize};

use super::decode::load_rgb;
use crate::baselines::{psnr_from_rmse, rmse, PsnrParams};
use crate::color_space::{rgb_to_lab, RgbImage};
use crate::error::{PersimError, Result};
use crate::fusion::{persim_scores, persim_single_resolution, PersimConfig};

/// Every metric for one image pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareRecord {
    pub persim: f64,
    pub persim_sr: f64,
    pub logsim: f64,
    pub psnr: f64,
    pub rmse: f64,
    pub config_fingerprint: String,
}

impl CompareRecord {
    /// `name<TAB>value` lines.
    pub fn to_text(&self) -> String {
        format!(
            "persim\t{}\npersim_sr\t{}\nlogsim\t{}\npsnr\t{}\nrmse\t{}\nconfig\t{}\n",
            fmt_score(self.persim),
            fmt_score(self.persim_sr),
            fmt_score(self.logsim),
            fmt_score(self.psnr),
            fmt_score(self.rmse),
            self.config_fingerprint
        )
    }
}

/// Plain decimals, switching to exponent form for very small magnitudes.
fn fmt_score(v: f64) -> String {
    if v != 0.0 && v.abs() < 1e-4 {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub fn compare_images(reference: &RgbImage, distorted: &RgbImage, cfg: &PersimConfig) -> Result<CompareRecord> {
    if reference.dims() != distorted.dims() {
        return Err(PersimError::DimensionMismatch {
            context: "reference vs distorted image",
            left: reference.dims(),
            right: distorted.dims(),
        });
    }
    let ref_lab = rgb_to_lab(reference)?;
    let dist_lab = rgb_to_lab(distorted)?;
    let mr = persim_scores(&ref_lab, &dist_lab, cfg)?;
    let sr = persim_single_resolution(&ref_lab, &dist_lab, cfg)?;
    let err = rmse(reference, distorted)?;
    Ok(CompareRecord {
        persim: mr.persim,
        persim_sr: sr.value,
        logsim: mr.logsim,
        psnr: psnr_from_rmse(err, &PsnrParams::default()),
        rmse: err,
        config_fingerprint: cfg.fingerprint(),
    })
}

pub fn compare_paths(reference: &Path, distorted: &Path, cfg: &PersimConfig) -> Result<CompareRecord> {
    compare_images(&load_rgb(reference)?, &load_rgb(distorted)?, cfg)
}
