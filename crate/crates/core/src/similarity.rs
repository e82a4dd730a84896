//! Pixel-wise similarity `(2xy + c1) / (x^2 + y^2 + c2)`.

use serde::{Deserialize, Serialize};

use crate::color_space::LabImage;
use crate::error::{PersimError, Result};
use crate::plane::ImagePlane;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Log,
    A,
    B,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityMap {
    pub values: ImagePlane,
    pub channel: Channel,
    /// Resolution ratio the map was computed at.
    pub ratio: f64,
}

impl SimilarityMap {
    pub fn new(values: ImagePlane, channel: Channel, ratio: f64) -> Self {
        SimilarityMap {
            values,
            channel,
            ratio,
        }
    }

    pub fn clamp_negative(mut self) -> Self {
        for v in self.values.as_mut_slice() {
            *v = v.max(0.0);
        }
        self
    }
}

/// Numerator/denominator stabilizers: (c1, c2) for LoG, (c3, c4) for a, (c5, c6) for b.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimilarityConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
}

impl Default for SimilarityConstants {
    fn default() -> Self {
        SimilarityConstants {
            c1: 0.001,
            c2: 0.001,
            c3: 0.001,
            c4: 0.001,
            c5: 0.001,
            c6: 0.001,
        }
    }
}

impl SimilarityConstants {
    pub fn validate(&self) -> Result<()> {
        let all = [self.c1, self.c2, self.c3, self.c4, self.c5, self.c6];
        if let Some((i, v)) = all
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(PersimError::InvalidParameter(format!(
                "similarity constant c{} must be positive, got {v}",
                i + 1
            )));
        }
        Ok(())
    }
}

pub fn similarity_map(p1: &ImagePlane, p2: &ImagePlane, c_num: f64, c_den: f64) -> Result<ImagePlane> {
    if !(c_num > 0.0 && c_den > 0.0) {
        return Err(PersimError::InvalidParameter(format!(
            "similarity constants must be positive, got {c_num} and {c_den}"
        )));
    }
    p1.zip_map(p2, "similarity map", |x, y| {
        (2.0 * x * y + c_num) / (x * x + y * y + c_den)
    })
}

/// LoG similarity between two feature planes.
pub fn log_similarity(
    log1: &ImagePlane,
    log2: &ImagePlane,
    consts: &SimilarityConstants,
    ratio: f64,
) -> Result<SimilarityMap> {
    let values = similarity_map(log1, log2, consts.c1, consts.c2)?;
    Ok(SimilarityMap::new(values, Channel::Log, ratio))
}

pub fn chroma_similarities(
    reference: &LabImage,
    distorted: &LabImage,
    consts: &SimilarityConstants,
) -> Result<(SimilarityMap, SimilarityMap)> {
    chroma_similarities_at(reference, distorted, consts, 1.0)
}

pub(crate) fn chroma_similarities_at(
    reference: &LabImage,
    distorted: &LabImage,
    consts: &SimilarityConstants,
    ratio: f64,
) -> Result<(SimilarityMap, SimilarityMap)> {
    let a = similarity_map(&reference.a, &distorted.a, consts.c3, consts.c4)?;
    let b = similarity_map(&reference.b, &distorted.b, consts.c5, consts.c6)?;
    Ok((
        SimilarityMap::new(a, Channel::A, ratio),
        SimilarityMap::new(b, Channel::B, ratio),
    ))
}
