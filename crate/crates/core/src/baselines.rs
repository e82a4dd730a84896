//! Pixel-wise RMSE and PSNR.

use serde::{Deserialize, Serialize};

use crate::color_space::RgbImage;
use crate::error::{PersimError, Result};
use crate::plane::ImagePlane;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsnrParams {
    pub peak: f64,
    /// Reported for identical images and used as an upper bound.
    pub cap_db: f64,
}

impl Default for PsnrParams {
    fn default() -> Self {
        PsnrParams {
            peak: 255.0,
            cap_db: 100.0,
        }
    }
}

/// RMSE over every sample of every plane pair.
pub fn rmse_planes(reference: &[&ImagePlane], distorted: &[&ImagePlane]) -> Result<f64> {
    if reference.len() != distorted.len() {
        return Err(PersimError::InvalidParameter(format!(
            "channel count mismatch: {} vs {}",
            reference.len(),
            distorted.len()
        )));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for (r, d) in reference.iter().zip(distorted) {
        r.ensure_same_dims(d, "rmse")?;
        sum += r
            .as_slice()
            .iter()
            .zip(d.as_slice())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>();
        count += r.len();
    }
    if count == 0 {
        return Err(PersimError::Empty("rmse input"));
    }
    Ok((sum / count as f64).sqrt())
}

pub fn rmse(reference: &RgbImage, distorted: &RgbImage) -> Result<f64> {
    rmse_planes(&reference.channels(), &distorted.channels())
}

pub fn psnr_from_rmse(rmse: f64, params: &PsnrParams) -> f64 {
    if rmse == 0.0 {
        params.cap_db
    } else {
        (20.0 * (params.peak / rmse).log10()).min(params.cap_db)
    }
}

pub fn psnr(reference: &RgbImage, distorted: &RgbImage, params: &PsnrParams) -> Result<f64> {
    if params.peak.is_nan() || params.peak <= 0.0 {
        return Err(PersimError::InvalidParameter(format!(
            "PSNR peak must be positive, got {}",
            params.peak
        )));
    }
    Ok(psnr_from_rmse(rmse(reference, distorted)?, params))
}
