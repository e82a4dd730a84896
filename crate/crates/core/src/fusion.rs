//! Channel fusion, multi-resolution combination and pooling.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use crate::config::PersimConfig;

use crate::color_space::LabImage;
use crate::error::{PersimError, Result};
use crate::log_features::{convolve, Boundary, ScaleParams};
use crate::plane::ImagePlane;
use crate::resample::{resize, scaled_len};
use crate::similarity::{chroma_similarities_at, log_similarity, Channel, SimilarityMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricId {
    Persim,
    PersimSr,
    Logsim,
    Psnr,
    Rmse,
}

impl MetricId {
    pub const ALL: [MetricId; 5] = [
        MetricId::Persim,
        MetricId::PersimSr,
        MetricId::Logsim,
        MetricId::Psnr,
        MetricId::Rmse,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricId::Persim => "persim",
            MetricId::PersimSr => "persim_sr",
            MetricId::Logsim => "logsim",
            MetricId::Psnr => "psnr",
            MetricId::Rmse => "rmse",
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricId {
    type Err = PersimError;

    fn from_str(s: &str) -> Result<Self> {
        MetricId::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                PersimError::InvalidParameter(format!(
                    "unknown metric '{s}' (expected one of persim, persim_sr, logsim, psnr, rmse)"
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricScore {
    pub metric: MetricId,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distorted: Option<String>,
}

impl MetricScore {
    pub fn new(metric: MetricId, value: f64) -> Self {
        MetricScore {
            metric,
            value,
            reference: None,
            distorted: None,
        }
    }

    pub fn with_pair(mut self, reference: impl Into<String>, distorted: impl Into<String>) -> Self {
        self.reference = Some(reference.into());
        self.distorted = Some(distorted.into());
        self
    }
}

/// `v^p`, with negative bases kept real: integer powers use `powi`,
/// fractional powers of negatives floor to zero.
fn signed_power(v: f64, p: f64) -> f64 {
    if v >= 0.0 {
        v.powf(p)
    } else if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
        v.powi(p as i32)
    } else {
        0.0
    }
}

/// `min(log^log_power, a^chroma_power, b^chroma_power)` per pixel.
pub fn fuse_channels(
    logsim: &SimilarityMap,
    asim: &SimilarityMap,
    bsim: &SimilarityMap,
    log_power: f64,
    chroma_power: f64,
) -> Result<ImagePlane> {
    logsim.values.ensure_same_dims(&asim.values, "channel fusion")?;
    logsim.values.ensure_same_dims(&bsim.values, "channel fusion")?;
    let (rows, cols) = logsim.values.dims();
    let data = logsim
        .values
        .as_slice()
        .iter()
        .zip(asim.values.as_slice())
        .zip(bsim.values.as_slice())
        .map(|((&l, &a), &b)| {
            signed_power(l, log_power)
                .min(signed_power(a, chroma_power))
                .min(signed_power(b, chroma_power))
        })
        .collect();
    ImagePlane::new(rows, cols, data)
}

/// Spatial mean of a quality map.
pub fn mean_pool(map: &ImagePlane) -> Result<f64> {
    map.mean().ok_or(PersimError::Empty("pooled quality map"))
}

/// `mean(map)^c7`; a negative mean scores 0.
pub fn pool_and_map(map: &ImagePlane, c7: f64) -> Result<f64> {
    let mean = mean_pool(map)?;
    if !mean.is_finite() {
        return Err(PersimError::Numerical(format!("pooled mean is {mean}")));
    }
    Ok(if mean < 0.0 { 0.0 } else { mean.powf(c7) })
}

/// Pixel-wise geometric mean across maps. Negative products become 0
/// before the root when more than one map is combined.
pub fn geometric_mean_maps(maps: &[ImagePlane]) -> Result<ImagePlane> {
    let first = maps.first().ok_or(PersimError::Empty("geometric mean needs at least one map"))?;
    for m in &maps[1..] {
        first.ensure_same_dims(m, "geometric mean")?;
    }
    if maps.len() == 1 {
        return Ok(first.clone());
    }
    let k = maps.len() as f64;
    let mut product = first.clone();
    for m in &maps[1..] {
        for (p, v) in product.as_mut_slice().iter_mut().zip(m.as_slice()) {
            *p *= v;
        }
    }
    Ok(product.map(|p| if p <= 0.0 { 0.0 } else { p.powf(1.0 / k) }))
}

/// Similarity maps of one image pair at one scale, already brought back to
/// full resolution.
struct ScaleMaps {
    log: ImagePlane,
    a: ImagePlane,
    b: ImagePlane,
}

fn resample_lab(img: &LabImage, rows: usize, cols: usize, cfg: &PersimConfig) -> Result<LabImage> {
    LabImage::new(
        resize(&img.l, rows, cols, cfg.resample)?,
        resize(&img.a, rows, cols, cfg.resample)?,
        resize(&img.b, rows, cols, cfg.resample)?,
    )
}

fn scale_maps(
    reference: &LabImage,
    distorted: &LabImage,
    scale: &ScaleParams,
    ratio: f64,
    cfg: &PersimConfig,
) -> Result<ScaleMaps> {
    let (rows, cols) = reference.dims();
    let (sr, sc) = (scaled_len(rows, ratio), scaled_len(cols, ratio));
    let resampled = (sr, sc) != (rows, cols);
    let (ref_s, dist_s);
    let (ref_lab, dist_lab) = if resampled {
        ref_s = resample_lab(reference, sr, sc, cfg)?;
        dist_s = resample_lab(distorted, sr, sc, cfg)?;
        (&ref_s, &dist_s)
    } else {
        (reference, distorted)
    };

    let kernel = scale.kernel(cfg.literal_even_kernels)?;
    let log1 = convolve(&ref_lab.l, &kernel, Boundary::Replicate)?;
    let log2 = convolve(&dist_lab.l, &kernel, Boundary::Replicate)?;
    let mut log = log_similarity(&log1, &log2, &cfg.constants, ratio)?;
    let (mut a, mut b) = chroma_similarities_at(ref_lab, dist_lab, &cfg.constants, ratio)?;
    if cfg.clamp_negative_similarity {
        log = log.clamp_negative();
        a = a.clamp_negative();
        b = b.clamp_negative();
    }

    let restore = |m: SimilarityMap| -> Result<ImagePlane> {
        if resampled {
            Ok(resize(&m.values, rows, cols, cfg.resample)?.map(|v| v.clamp(-1.0, 1.0)))
        } else {
            Ok(m.values)
        }
    };
    Ok(ScaleMaps {
        log: restore(log)?,
        a: restore(a)?,
        b: restore(b)?,
    })
}

/// Smallest full-resolution side for which every scale still fits its kernel.
fn minimum_side(cfg: &PersimConfig) -> usize {
    let needed = |len: usize| {
        cfg.scales
            .iter()
            .all(|s| scaled_len(len, s.ratio) >= s.effective_kernel_size(cfg.literal_even_kernels))
    };
    (1..).find(|&len| needed(len)).expect("some length always fits")
}

fn check_inputs(reference: &LabImage, distorted: &LabImage, cfg: &PersimConfig) -> Result<()> {
    cfg.validate()?;
    reference.l.ensure_same_dims(&distorted.l, "reference vs distorted")?;
    reference.l.ensure_same_dims(&reference.a, "reference channels")?;
    reference.l.ensure_same_dims(&reference.b, "reference channels")?;
    distorted.l.ensure_same_dims(&distorted.a, "distorted channels")?;
    distorted.l.ensure_same_dims(&distorted.b, "distorted channels")?;
    let (rows, cols) = reference.dims();
    let min_side = minimum_side(cfg);
    if rows < min_side || cols < min_side {
        let smallest_kernel = cfg
            .scales
            .iter()
            .map(|s| s.effective_kernel_size(cfg.literal_even_kernels))
            .min()
            .unwrap_or(1);
        return Err(PersimError::ImageTooSmall {
            rows,
            cols,
            min_side: smallest_kernel,
            min_rows: min_side,
            min_cols: min_side,
        });
    }
    Ok(())
}

/// Cross-scale similarity maps at full resolution.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiResolutionMaps {
    pub log: SimilarityMap,
    pub a: SimilarityMap,
    pub b: SimilarityMap,
}

impl MultiResolutionMaps {
    pub fn compute(reference: &LabImage, distorted: &LabImage, cfg: &PersimConfig) -> Result<Self> {
        check_inputs(reference, distorted, cfg)?;
        let per_scale = cfg
            .scales
            .iter()
            .map(|s| scale_maps(reference, distorted, s, s.ratio, cfg))
            .collect::<Result<Vec<_>>>()?;
        let combine = |pick: fn(&ScaleMaps) -> &ImagePlane, channel| -> Result<SimilarityMap> {
            let planes: Vec<ImagePlane> = per_scale.iter().map(|m| pick(m).clone()).collect();
            Ok(SimilarityMap::new(geometric_mean_maps(&planes)?, channel, 1.0))
        };
        Ok(MultiResolutionMaps {
            log: combine(|m| &m.log, Channel::Log)?,
            a: combine(|m| &m.a, Channel::A)?,
            b: combine(|m| &m.b, Channel::B)?,
        })
    }

    /// Fused color quality map.
    pub fn fused(&self, cfg: &PersimConfig) -> Result<ImagePlane> {
        fuse_channels(&self.log, &self.a, &self.b, cfg.log_power, cfg.chroma_power)
    }

    /// Quality map from the LoG channel alone.
    pub fn log_only(&self, cfg: &PersimConfig) -> ImagePlane {
        self.log.values.map(|v| signed_power(v, cfg.log_power))
    }
}

/// Both multi-resolution scores from one pass over the maps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PersimScores {
    pub persim: f64,
    pub logsim: f64,
}

pub fn persim_scores(reference: &LabImage, distorted: &LabImage, cfg: &PersimConfig) -> Result<PersimScores> {
    let maps = MultiResolutionMaps::compute(reference, distorted, cfg)?;
    Ok(PersimScores {
        persim: pool_and_map(&maps.fused(cfg)?, cfg.pooling_power)?,
        logsim: pool_and_map(&maps.log_only(cfg), cfg.pooling_power)?,
    })
}

pub fn persim(reference: &LabImage, distorted: &LabImage, cfg: &PersimConfig) -> Result<MetricScore> {
    let maps = MultiResolutionMaps::compute(reference, distorted, cfg)?;
    let value = pool_and_map(&maps.fused(cfg)?, cfg.pooling_power)?;
    Ok(MetricScore::new(MetricId::Persim, value))
}

/// LoG-only ablation of [`persim`].
pub fn logsim_metric(reference: &LabImage, distorted: &LabImage, cfg: &PersimConfig) -> Result<MetricScore> {
    let maps = MultiResolutionMaps::compute(reference, distorted, cfg)?;
    let value = pool_and_map(&maps.log_only(cfg), cfg.pooling_power)?;
    Ok(MetricScore::new(MetricId::Logsim, value))
}

/// Full-resolution score using the first scale's filter parameters.
pub fn persim_single_resolution(
    reference: &LabImage,
    distorted: &LabImage,
    cfg: &PersimConfig,
) -> Result<MetricScore> {
    let mut single = cfg.clone();
    let first = *cfg
        .scales
        .first()
        .ok_or_else(|| PersimError::InvalidParameter("at least one scale is required".into()))?;
    single.scales = vec![ScaleParams { ratio: 1.0, ..first }];
    let maps = MultiResolutionMaps::compute(reference, distorted, &single)?;
    let value = pool_and_map(&maps.fused(&single)?, single.pooling_power)?;
    Ok(MetricScore::new(MetricId::PersimSr, value))
}
