//! Laplacian-of-Gaussian kernels and direct 2-D convolution.

use serde::{Deserialize, Serialize};

use crate::error::{PersimError, Result};
use crate::plane::ImagePlane;

/// Edge extension used when the kernel reaches past the plane border.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Clamp-to-edge.
    #[default]
    Replicate,
    Zero,
}

/// Square LoG kernel. `origin` is the tap index of offset zero; for odd
/// sizes it is the center, for even sizes the top-left of the central block.
#[derive(Clone, Debug, PartialEq)]
pub struct LogKernel {
    taps: Vec<f64>,
    size: usize,
    sigma: f64,
    origin: usize,
}

impl LogKernel {
    /// Arbitrary square kernel, mainly for tests and custom filters.
    pub fn from_taps(size: usize, taps: Vec<f64>) -> Result<Self> {
        if size == 0 || taps.len() != size * size {
            return Err(PersimError::InvalidParameter(format!(
                "kernel of size {size} needs {} taps, got {}",
                size * size,
                taps.len()
            )));
        }
        Ok(LogKernel {
            taps,
            size,
            sigma: f64::NAN,
            origin: (size - 1) / 2,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Offsets covered by the kernel along each axis, inclusive.
    pub fn offset_range(&self) -> (isize, isize) {
        let lo = -(self.origin as isize);
        (lo, lo + self.size as isize - 1)
    }

    /// Tap at integer offset `(m, n)` from the origin.
    pub fn tap(&self, m: isize, n: isize) -> f64 {
        let r = (m + self.origin as isize) as usize;
        let c = (n + self.origin as isize) as usize;
        self.taps[r * self.size + c]
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn sum(&self) -> f64 {
        self.taps.iter().sum()
    }
}

/// Closed-form LoG value at squared radius `r2`.
pub fn log_value(sigma: f64, m: f64, n: f64) -> f64 {
    let s2 = sigma * sigma;
    let r2 = m * m + n * n;
    (1.0 / (2.0 * std::f64::consts::PI * s2).sqrt()) * ((r2 - 2.0 * s2) / (s2 * s2))
        * (-r2 / (2.0 * s2)).exp()
}

pub fn make_log_kernel(sigma: f64, size: usize) -> Result<LogKernel> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(PersimError::InvalidParameter(format!(
            "LoG sigma must be positive, got {sigma}"
        )));
    }
    if size == 0 {
        return Err(PersimError::InvalidParameter(
            "LoG kernel size must be at least 1".into(),
        ));
    }
    let origin = (size - 1) / 2;
    let mut taps = Vec::with_capacity(size * size);
    for r in 0..size {
        for c in 0..size {
            let m = r as f64 - origin as f64;
            let n = c as f64 - origin as f64;
            taps.push(log_value(sigma, m, n));
        }
    }
    Ok(LogKernel {
        taps,
        size,
        sigma,
        origin,
    })
}

/// Same-size convolution: `out(m, n) = sum_{i,j} plane(m - i, n - j) * k(i, j)`.
pub fn convolve(plane: &ImagePlane, kernel: &LogKernel, boundary: Boundary) -> Result<ImagePlane> {
    if plane.is_empty() {
        return Err(PersimError::Empty("convolution input plane"));
    }
    let (rows, cols) = plane.dims();
    let (lo, hi) = kernel.offset_range();
    // out(m,n) reads plane rows m-hi ..= m-lo, so pad by hi before and -lo after.
    let pad_before = hi.max(0) as usize;
    let pad_after = (-lo).max(0) as usize;
    let prow = rows + pad_before + pad_after;
    let pcol = cols + pad_before + pad_after;
    let mut padded = vec![0.0; prow * pcol];
    for pr in 0..prow {
        let sr = pr as isize - pad_before as isize;
        for pc in 0..pcol {
            let sc = pc as isize - pad_before as isize;
            let inside = sr >= 0 && sc >= 0 && (sr as usize) < rows && (sc as usize) < cols;
            padded[pr * pcol + pc] = match (boundary, inside) {
                (_, true) => plane.get(sr as usize, sc as usize),
                (Boundary::Replicate, false) => plane.get_clamped(sr, sc),
                (Boundary::Zero, false) => 0.0,
            };
        }
    }

    // Flip once so the inner loop is a plain correlation over the padded buffer.
    let size = kernel.size();
    let mut flipped = vec![0.0; size * size];
    for (idx, &t) in kernel.taps().iter().enumerate() {
        let (r, c) = (idx / size, idx % size);
        flipped[(size - 1 - r) * size + (size - 1 - c)] = t;
    }

    let mut out = vec![0.0; rows * cols];
    for m in 0..rows {
        for n in 0..cols {
            let mut acc = 0.0;
            for kr in 0..size {
                let base = (m + kr) * pcol + n;
                let window = &padded[base..base + size];
                let weights = &flipped[kr * size..(kr + 1) * size];
                acc += window.iter().zip(weights).map(|(a, b)| a * b).sum::<f64>();
            }
            out[m * cols + n] = acc;
        }
    }
    ImagePlane::new(rows, cols, out)
}

/// Per-scale filter parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleParams {
    pub ratio: f64,
    pub sigma: f64,
    /// Window edge as tabulated; see [`ScaleParams::effective_kernel_size`].
    pub kernel_size: usize,
}

impl ScaleParams {
    pub const fn new(ratio: f64, sigma: f64, kernel_size: usize) -> Self {
        ScaleParams {
            ratio,
            sigma,
            kernel_size,
        }
    }

    /// Even sizes are rounded up to the next odd size unless `literal_even` is set.
    pub fn effective_kernel_size(&self, literal_even: bool) -> usize {
        if literal_even || self.kernel_size % 2 == 1 {
            self.kernel_size
        } else {
            self.kernel_size + 1
        }
    }

    pub fn kernel(&self, literal_even: bool) -> Result<LogKernel> {
        make_log_kernel(self.sigma, self.effective_kernel_size(literal_even))
    }
}

/// LoG response of a lightness plane with replicate boundary.
pub fn log_response(l: &ImagePlane, params: &ScaleParams) -> Result<ImagePlane> {
    log_response_with(l, params, false)
}

pub fn log_response_with(
    l: &ImagePlane,
    params: &ScaleParams,
    literal_even: bool,
) -> Result<ImagePlane> {
    let kernel = params.kernel(literal_even)?;
    convolve(l, &kernel, Boundary::Replicate)
}
