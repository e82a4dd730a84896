use std::path::Path;

use crate::color_space::RgbImage;
use crate::error::{PersimError, Result};

/// Decodes PNG, BMP or JPEG into 8-bit RGB. Gray images are replicated
/// into three channels and alpha is dropped.
pub fn load_rgb(path: &Path) -> Result<RgbImage> {
    let bytes = std::fs::read(path).map_err(|e| PersimError::io(path, e))?;
    let decoded = image::load_from_memory(&bytes).map_err(|e| PersimError::Decode {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let rgb = decoded.to_rgb8();
    let (w, h) = rgb.dimensions();
    RgbImage::from_interleaved(h as usize, w as usize, rgb.as_raw())
}
