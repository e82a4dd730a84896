//! Separable resampling with half-pixel-centered coordinates and
//! clamp-to-edge addressing. No anti-alias pre-filter is applied.

use serde::{Deserialize, Serialize};

use crate::error::{PersimError, Result};
use crate::plane::ImagePlane;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResampleMethod {
    /// Keys cubic convolution, a = -0.5.
    #[default]
    Bicubic,
    Bilinear,
}

const KEYS_A: f64 = -0.5;

fn cubic(t: f64) -> f64 {
    let t = t.abs();
    if t <= 1.0 {
        ((KEYS_A + 2.0) * t - (KEYS_A + 3.0)) * t * t + 1.0
    } else if t < 2.0 {
        ((KEYS_A * t - 5.0 * KEYS_A) * t + 8.0 * KEYS_A) * t - 4.0 * KEYS_A
    } else {
        0.0
    }
}

/// One output sample's contributing source indices and weights.
struct Contrib {
    first: isize,
    weights: Vec<f64>,
}

fn contributions(src_len: usize, dst_len: usize, method: ResampleMethod) -> Vec<Contrib> {
    let scale = src_len as f64 / dst_len as f64;
    (0..dst_len)
        .map(|d| {
            let x = (d as f64 + 0.5) * scale - 0.5;
            let base = x.floor();
            let frac = x - base;
            match method {
                ResampleMethod::Bicubic => Contrib {
                    first: base as isize - 1,
                    weights: vec![cubic(frac + 1.0), cubic(frac), cubic(1.0 - frac), cubic(2.0 - frac)],
                },
                ResampleMethod::Bilinear => Contrib {
                    first: base as isize,
                    weights: vec![1.0 - frac, frac],
                },
            }
        })
        .collect()
}

fn clamp_index(i: isize, len: usize) -> usize {
    i.clamp(0, len as isize - 1) as usize
}

/// Resizes `plane` to `rows x cols`. Same-size requests return a copy.
pub fn resize(plane: &ImagePlane, rows: usize, cols: usize, method: ResampleMethod) -> Result<ImagePlane> {
    if plane.is_empty() {
        return Err(PersimError::Empty("resample input plane"));
    }
    if rows == 0 || cols == 0 {
        return Err(PersimError::InvalidParameter(format!(
            "resample target {rows}x{cols} is empty"
        )));
    }
    if plane.dims() == (rows, cols) {
        return Ok(plane.clone());
    }
    let (src_rows, src_cols) = plane.dims();

    let col_contrib = contributions(src_cols, cols, method);
    let mut horizontal = vec![0.0; src_rows * cols];
    for r in 0..src_rows {
        let row = plane.row(r);
        for (c, contrib) in col_contrib.iter().enumerate() {
            horizontal[r * cols + c] = contrib
                .weights
                .iter()
                .enumerate()
                .map(|(k, w)| w * row[clamp_index(contrib.first + k as isize, src_cols)])
                .sum();
        }
    }

    let row_contrib = contributions(src_rows, rows, method);
    let mut out = vec![0.0; rows * cols];
    for (r, contrib) in row_contrib.iter().enumerate() {
        for (k, w) in contrib.weights.iter().enumerate() {
            let sr = clamp_index(contrib.first + k as isize, src_rows);
            let src = &horizontal[sr * cols..(sr + 1) * cols];
            for (o, s) in out[r * cols..(r + 1) * cols].iter_mut().zip(src) {
                *o += w * s;
            }
        }
    }
    ImagePlane::new(rows, cols, out)
}

/// Size of a plane scaled by `ratio`: `round(ratio * len)`, at least 1.
pub fn scaled_len(len: usize, ratio: f64) -> usize {
    ((ratio * len as f64).round() as usize).max(1)
}
