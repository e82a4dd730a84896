use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{PersimError, Result};
use crate::log_features::ScaleParams;
use crate::resample::ResampleMethod;
use crate::similarity::SimilarityConstants;

/// Every tunable of the metric. Missing keys in a config file fall back to
/// [`PersimConfig::default`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PersimConfig {
    /// Ordered from full resolution down.
    pub scales: Vec<ScaleParams>,
    pub log_power: f64,
    pub chroma_power: f64,
    /// Exponent applied to the pooled mean.
    pub pooling_power: f64,
    pub constants: SimilarityConstants,
    pub resample: ResampleMethod,
    pub clamp_negative_similarity: bool,
    /// Use even window sizes as tabulated instead of rounding them up to odd.
    pub literal_even_kernels: bool,
}

impl Default for PersimConfig {
    fn default() -> Self {
        PersimConfig {
            scales: vec![
                ScaleParams::new(1.0, 10.0, 13),
                ScaleParams::new(0.6, 8.0, 4),
                ScaleParams::new(0.4, 7.0, 2),
            ],
            log_power: 4.0,
            chroma_power: 2.0,
            pooling_power: 25.0,
            constants: SimilarityConstants::default(),
            resample: ResampleMethod::Bicubic,
            clamp_negative_similarity: false,
            literal_even_kernels: false,
        }
    }
}

impl PersimConfig {
    /// Default parameters restricted to the full-resolution scale.
    pub fn single_resolution() -> Self {
        let mut cfg = PersimConfig::default();
        cfg.scales.truncate(1);
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        if self.scales.is_empty() {
            return Err(PersimError::InvalidParameter("at least one scale is required".into()));
        }
        let mut previous = f64::INFINITY;
        for s in &self.scales {
            if !(s.ratio > 0.0 && s.ratio <= 1.0) {
                return Err(PersimError::InvalidParameter(format!(
                    "scale ratio {} outside (0, 1]",
                    s.ratio
                )));
            }
            if s.ratio >= previous {
                return Err(PersimError::InvalidParameter(
                    "scale ratios must be strictly descending".into(),
                ));
            }
            previous = s.ratio;
            if !(s.sigma > 0.0 && s.sigma.is_finite()) {
                return Err(PersimError::InvalidParameter(format!(
                    "scale sigma must be positive, got {}",
                    s.sigma
                )));
            }
            if s.kernel_size == 0 {
                return Err(PersimError::InvalidParameter("kernel size must be at least 1".into()));
            }
        }
        for (name, p) in [("log_power", self.log_power), ("chroma_power", self.chroma_power)] {
            if !(p > 0.0 && p.is_finite()) {
                return Err(PersimError::InvalidParameter(format!("{name} must be positive, got {p}")));
            }
        }
        if !(self.pooling_power >= 1.0 && self.pooling_power.is_finite()) {
            return Err(PersimError::InvalidParameter(format!(
                "pooling_power must be at least 1, got {}",
                self.pooling_power
            )));
        }
        self.constants.validate()
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: PersimConfig = toml::from_str(text).map_err(|e| PersimError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PersimError::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config is always serializable")
    }

    /// SHA-256 over the canonical JSON form, hex encoded.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_string(self).expect("config is always serializable");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}
