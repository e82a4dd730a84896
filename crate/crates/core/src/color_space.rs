//! sRGB to CIE 1976 L*a*b* conversion (D65 reference white).

use crate::error::{PersimError, Result};
use crate::plane::ImagePlane;

/// Linear sRGB to CIE XYZ, derived from the sRGB primaries and the D65
/// chromaticity (0.3127, 0.3290).
const SRGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.412_390_799_265_95, 0.357_584_339_383_87, 0.180_480_788_401_83],
    [0.212_639_005_871_51, 0.715_168_678_767_75, 0.072_192_315_360_73],
    [0.019_330_818_715_59, 0.119_194_779_794_62, 0.950_532_152_249_66],
];

const DELTA: f64 = 6.0 / 29.0;

/// Three 8-bit color planes with integer-valued samples in `[0, 255]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RgbImage {
    pub r: ImagePlane,
    pub g: ImagePlane,
    pub b: ImagePlane,
}

impl RgbImage {
    pub fn new(r: ImagePlane, g: ImagePlane, b: ImagePlane) -> Result<Self> {
        r.ensure_same_dims(&g, "rgb channels")?;
        r.ensure_same_dims(&b, "rgb channels")?;
        for plane in [&r, &g, &b] {
            if let Some(bad) = plane
                .as_slice()
                .iter()
                .find(|v| !(0.0..=255.0).contains(*v))
            {
                return Err(PersimError::InvalidParameter(format!(
                    "rgb sample {bad} outside [0, 255]"
                )));
            }
        }
        Ok(RgbImage { r, g, b })
    }

    /// Builds an image from interleaved 8-bit RGB bytes.
    pub fn from_interleaved(rows: usize, cols: usize, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != rows * cols * 3 {
            return Err(PersimError::InvalidParameter(format!(
                "expected {} interleaved bytes for {rows}x{cols}, got {}",
                rows * cols * 3,
                bytes.len()
            )));
        }
        let channel = |k: usize| {
            ImagePlane::new(
                rows,
                cols,
                bytes.iter().skip(k).step_by(3).map(|&v| v as f64).collect(),
            )
        };
        Ok(RgbImage {
            r: channel(0)?,
            g: channel(1)?,
            b: channel(2)?,
        })
    }

    /// Replicates a single gray plane into all three channels.
    pub fn from_gray(gray: ImagePlane) -> Result<Self> {
        RgbImage::new(gray.clone(), gray.clone(), gray)
    }

    pub fn filled(rows: usize, cols: usize, rgb: [u8; 3]) -> Self {
        RgbImage {
            r: ImagePlane::filled(rows, cols, rgb[0] as f64),
            g: ImagePlane::filled(rows, cols, rgb[1] as f64),
            b: ImagePlane::filled(rows, cols, rgb[2] as f64),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.r.dims()
    }

    pub fn channels(&self) -> [&ImagePlane; 3] {
        [&self.r, &self.g, &self.b]
    }
}

/// L in `[0, 100]`, a and b nominally in `[-128, 127]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LabImage {
    pub l: ImagePlane,
    pub a: ImagePlane,
    pub b: ImagePlane,
}

impl LabImage {
    pub fn new(l: ImagePlane, a: ImagePlane, b: ImagePlane) -> Result<Self> {
        l.ensure_same_dims(&a, "lab channels")?;
        l.ensure_same_dims(&b, "lab channels")?;
        Ok(LabImage { l, a, b })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.l.dims()
    }
}

/// Inverse sRGB transfer function for a normalized sample.
pub fn srgb_to_linear(v: f64) -> f64 {
    if v <= 0.040_45 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

fn lab_f(t: f64) -> f64 {
    if t > DELTA * DELTA * DELTA {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

fn reference_white() -> [f64; 3] {
    let row = |i: usize| SRGB_TO_XYZ[i].iter().sum::<f64>();
    [row(0), row(1), row(2)]
}

/// Converts one 8-bit sRGB triple to `(L, a, b)`.
pub fn srgb8_to_lab(rgb: [f64; 3]) -> [f64; 3] {
    let lin = rgb.map(|v| srgb_to_linear(v / 255.0));
    let white = reference_white();
    let mut xyz = [0.0; 3];
    for (i, out) in xyz.iter_mut().enumerate() {
        let m = &SRGB_TO_XYZ[i];
        *out = (m[0] * lin[0] + m[1] * lin[1] + m[2] * lin[2]) / white[i];
    }
    let [fx, fy, fz] = xyz.map(lab_f);
    // Linear segment written as kappa * Y to keep black exactly at L = 0.
    let l = if xyz[1] > DELTA * DELTA * DELTA {
        116.0 * fy - 16.0
    } else {
        xyz[1] * 116.0 / (3.0 * DELTA * DELTA)
    };
    [l.max(0.0), 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

pub fn rgb_to_lab(img: &RgbImage) -> Result<LabImage> {
    img.r.ensure_same_dims(&img.g, "rgb channels")?;
    img.r.ensure_same_dims(&img.b, "rgb channels")?;
    let (rows, cols) = img.dims();
    let n = rows * cols;
    let (mut l, mut a, mut b) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for ((&r, &g), &bl) in img
        .r
        .as_slice()
        .iter()
        .zip(img.g.as_slice())
        .zip(img.b.as_slice())
    {
        let [ll, aa, bb] = srgb8_to_lab([r, g, bl]);
        l.push(ll);
        a.push(aa);
        b.push(bb);
    }
    LabImage::new(
        ImagePlane::new(rows, cols, l)?,
        ImagePlane::new(rows, cols, a)?,
        ImagePlane::new(rows, cols, b)?,
    )
}
