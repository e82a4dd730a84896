#![allow(dead_code)]

pub mod oracle;

use std::path::{Path, PathBuf};

use persim::harness::load_rgb;
use persim::{ImagePlane, RgbImage};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

/// 132x200 photograph of a cat.
pub fn natural() -> RgbImage {
    load_rgb(&data_dir().join("chelsea.png")).expect("fixture decodes")
}

fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> [f64; 3]) -> RgbImage {
    let q = |v: f64| v.round().clamp(0.0, 255.0);
    RgbImage::new(
        ImagePlane::from_fn(rows, cols, |r, c| q(f(r, c)[0])),
        ImagePlane::from_fn(rows, cols, |r, c| q(f(r, c)[1])),
        ImagePlane::from_fn(rows, cols, |r, c| q(f(r, c)[2])),
    )
    .unwrap()
}

pub fn horizontal_gradient(rows: usize, cols: usize) -> RgbImage {
    from_fn(rows, cols, |_, c| {
        let t = c as f64 / (cols - 1) as f64 * 255.0;
        [t, 255.0 - t, 128.0]
    })
}

pub fn radial_gradient(rows: usize, cols: usize) -> RgbImage {
    from_fn(rows, cols, |r, c| {
        let dy = r as f64 - rows as f64 / 2.0;
        let dx = c as f64 - cols as f64 / 2.0;
        let d = (dx * dx + dy * dy).sqrt();
        [255.0 - d * 3.0, d * 2.0, 60.0 + d]
    })
}

pub fn gray_gradient(rows: usize, cols: usize) -> RgbImage {
    from_fn(rows, cols, |r, c| {
        let v = (r + c) as f64 / (rows + cols - 2) as f64 * 255.0;
        [v, v, v]
    })
}

/// Smooth color texture: sums of oriented sinusoids.
pub fn texture(rows: usize, cols: usize) -> RgbImage {
    from_fn(rows, cols, |r, c| {
        let (y, x) = (r as f64, c as f64);
        [
            128.0 + 60.0 * (x * 0.21).sin() + 40.0 * (y * 0.13 + x * 0.05).cos(),
            128.0 + 50.0 * (y * 0.17).sin() * (x * 0.07).cos() + 30.0 * ((x + y) * 0.3).sin(),
            110.0 + 70.0 * ((x - y) * 0.11).cos(),
        ]
    })
}

/// Blocky scene: colored rectangles and a disc over a gradient.
pub fn shapes(rows: usize, cols: usize) -> RgbImage {
    from_fn(rows, cols, |r, c| {
        let (y, x) = (r as f64 / rows as f64, c as f64 / cols as f64);
        let mut px = [40.0 + 150.0 * y, 60.0 + 100.0 * x, 90.0];
        if (0.1..0.45).contains(&x) && (0.15..0.6).contains(&y) {
            px = [220.0, 40.0, 50.0];
        }
        if ((x - 0.7).powi(2) + (y - 0.55).powi(2)).sqrt() < 0.2 {
            px = [30.0, 90.0, 210.0];
        }
        if (0.5..0.9).contains(&x) && (0.05..0.2).contains(&y) {
            px = [250.0, 230.0, 60.0];
        }
        px
    })
}

pub fn checkerboard(rows: usize, cols: usize, cell: usize) -> RgbImage {
    from_fn(rows, cols, |r, c| {
        if (r / cell + c / cell).is_multiple_of(2) {
            [230.0, 210.0, 20.0]
        } else {
            [20.0, 40.0, 120.0]
        }
    })
}

pub fn color_noise(rows: usize, cols: usize, seed: u64) -> RgbImage {
    let mut rng = StdRng::seed_from_u64(seed);
    let vals: Vec<[f64; 3]> = (0..rows * cols)
        .map(|_| [rng.gen_range(0.0..255.0), rng.gen_range(0.0..255.0), rng.gen_range(0.0..255.0)])
        .collect();
    from_fn(rows, cols, |r, c| vals[r * cols + c])
}

pub fn gray_noise(rows: usize, cols: usize, seed: u64) -> RgbImage {
    let mut rng = StdRng::seed_from_u64(seed);
    let vals: Vec<f64> = (0..rows * cols).map(|_| rng.gen_range(0.0..255.0)).collect();
    from_fn(rows, cols, |r, c| [vals[r * cols + c]; 3])
}

pub fn to_gray(img: &RgbImage) -> RgbImage {
    let (rows, cols) = img.dims();
    from_fn(rows, cols, |r, c| {
        let v = 0.299 * img.r.get(r, c) + 0.587 * img.g.get(r, c) + 0.114 * img.b.get(r, c);
        [v, v, v]
    })
}

pub fn constant(rows: usize, cols: usize, rgb: [u8; 3]) -> RgbImage {
    RgbImage::filled(rows, cols, rgb)
}

/// Additive Gaussian noise; one unit-variance field per seed, scaled by
/// `sigma`, then rounded and clipped to 8 bits.
pub fn add_noise(img: &RgbImage, sigma: f64, seed: u64) -> RgbImage {
    let (rows, cols) = img.dims();
    let mut rng = StdRng::seed_from_u64(seed);
    let field: Vec<f64> = (0..rows * cols * 3).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let ch = img.channels();
    from_fn(rows, cols, |r, c| {
        let i = (r * cols + c) * 3;
        [
            ch[0].get(r, c) + sigma * field[i],
            ch[1].get(r, c) + sigma * field[i + 1],
            ch[2].get(r, c) + sigma * field[i + 2],
        ]
    })
}

fn blur_plane(p: &ImagePlane, sigma: f64) -> ImagePlane {
    let radius = (3.0 * sigma).ceil() as isize;
    let weights: Vec<f64> = (-radius..=radius).map(|k| (-(k * k) as f64 / (2.0 * sigma * sigma)).exp()).collect();
    let total: f64 = weights.iter().sum();
    let (rows, cols) = p.dims();
    let h = ImagePlane::from_fn(rows, cols, |r, c| {
        (-radius..=radius).zip(&weights).map(|(k, w)| w * p.get_clamped(r as isize, c as isize + k)).sum::<f64>() / total
    });
    ImagePlane::from_fn(rows, cols, |r, c| {
        (-radius..=radius).zip(&weights).map(|(k, w)| w * h.get_clamped(r as isize + k, c as isize)).sum::<f64>() / total
    })
}

/// Separable Gaussian blur with standard deviation `sigma`, rounded to 8 bits.
pub fn blur(img: &RgbImage, sigma: f64) -> RgbImage {
    let [r, g, b] = img.channels().map(|p| blur_plane(p, sigma).map(|v| v.round().clamp(0.0, 255.0)));
    RgbImage::new(r, g, b).unwrap()
}

pub fn write_png(img: &RgbImage, path: &Path) {
    let (rows, cols) = img.dims();
    let mut buf = Vec::with_capacity(rows * cols * 3);
    for r in 0..rows {
        for c in 0..cols {
            for ch in img.channels() {
                buf.push(ch.get(r, c) as u8);
            }
        }
    }
    image::RgbImage::from_raw(cols as u32, rows as u32, buf).unwrap().save(path).unwrap();
}

pub const NOISE_LADDER: [f64; 4] = [5.0, 10.0, 20.0, 40.0];
pub const BLUR_LADDER: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

pub fn ladder_references() -> Vec<(&'static str, RgbImage)> {
    vec![("natural", natural()), ("texture", texture(96, 128)), ("shapes", shapes(96, 128))]
}

/// Writes a noise/blur ladder database and returns the manifest path.
/// Subjective scores decrease with distortion strength, so the ranking is forced.
pub fn write_ladder_database(dir: &Path, references: &[(&str, RgbImage)], gray: bool) -> PathBuf {
    let mut lines = vec!["ref,dist,score,distortion,category".to_string()];
    for (k, (name, img)) in references.iter().enumerate() {
        let img = if gray { to_gray(img) } else { img.clone() };
        let ref_name = format!("{name}.png");
        write_png(&img, &dir.join(&ref_name));
        for (level, sigma) in NOISE_LADDER.iter().enumerate() {
            let dist = format!("{name}_wn{level}.png");
            let d = add_noise(&img, *sigma, 1000 + k as u64);
            write_png(&if gray { to_gray(&d) } else { d }, &dir.join(&dist));
            lines.push(format!("{ref_name},{dist},{},noise,Wn", 90.0 - 20.0 * level as f64 - k as f64));
        }
        for (level, sigma) in BLUR_LADDER.iter().enumerate() {
            let dist = format!("{name}_blur{level}.png");
            write_png(&blur(&img, *sigma), &dir.join(&dist));
            lines.push(format!("{ref_name},{dist},{},blur,Gblur", 85.0 - 20.0 * level as f64 - k as f64));
        }
    }
    let path = dir.join("ladder.csv");
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    path
}
