//! Full-reference perceptual image quality in the CIELAB domain.
//!
//! Lightness is filtered with a Laplacian of Gaussian, chroma channels are
//! compared directly, and the per-pixel similarities are combined across
//! three resolutions before mean pooling. The [`harness`] module scores
//! whole IQA databases and reports PLCC, RMSE, SROCC and KCC against
//! subjective ratings.
//!
//! ```no_run
//! use persim::{color_space::rgb_to_lab, fusion::persim, harness::load_rgb, PersimConfig};
//!
//! let reference = rgb_to_lab(&load_rgb("ref.png".as_ref())?)?;
//! let distorted = rgb_to_lab(&load_rgb("dist.png".as_ref())?)?;
//! let score = persim(&reference, &distorted, &PersimConfig::default())?;
//! println!("{}", score.value);
//! # Ok::<(), persim::PersimError>(())
//! ```

pub mod baselines;
pub mod color_space;
mod config;
pub mod error;
pub mod fusion;
pub mod harness;
pub mod log_features;
pub mod plane;
pub mod resample;
pub mod similarity;
pub mod stats;

pub use color_space::{LabImage, RgbImage};
pub use config::PersimConfig;
pub use error::{PersimError, Result};
pub use fusion::{MetricId, MetricScore};
pub use plane::ImagePlane;
