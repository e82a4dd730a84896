//! Naive reference implementations, independent of the library code paths.

use persim::log_features::LogKernel;
use persim::ImagePlane;

/// Closed-form sample Pearson: (n Sxy - Sx Sy) / sqrt((n Sxx - Sx^2)(n Syy - Sy^2)).
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx) * (n * syy - sy * sy)).sqrt()
}

/// O(n^2) average ranks: 1 + #smaller + (#equal - 1) / 2.
pub fn ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|&a| {
            let smaller = v.iter().filter(|&&b| b < a).count() as f64;
            let equal = v.iter().filter(|&&b| b == a).count() as f64;
            1.0 + smaller + (equal - 1.0) / 2.0
        })
        .collect()
}

/// Pearson on O(n^2) ranks, computed in centered form.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (ranks(x), ranks(y));
    let n = rx.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let sxy: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mean) * (b - mean)).sum();
    let sxx: f64 = rx.iter().map(|a| (a - mean) * (a - mean)).sum();
    let syy: f64 = ry.iter().map(|b| (b - mean) * (b - mean)).sum();
    sxy / (sxx.sqrt() * syy.sqrt())
}

/// Tau-b by explicit pair enumeration.
pub fn kendall(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let (mut concordant, mut discordant, mut tie_x, mut tie_y) = (0i64, 0i64, 0i64, 0i64);
    let mut pairs = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            pairs += 1;
            let dx = x[i] - x[j];
            let dy = y[i] - y[j];
            if dx == 0.0 {
                tie_x += 1;
            }
            if dy == 0.0 {
                tie_y += 1;
            }
            if dx * dy > 0.0 {
                concordant += 1;
            } else if dx * dy < 0.0 {
                discordant += 1;
            }
        }
    }
    (concordant - discordant) as f64 / (((pairs - tie_x) as f64) * ((pairs - tie_y) as f64)).sqrt()
}

/// Quadruple loop with clamp-to-edge reads.
pub fn convolve(plane: &ImagePlane, kernel: &LogKernel) -> ImagePlane {
    let (lo, hi) = kernel.offset_range();
    ImagePlane::from_fn(plane.rows(), plane.cols(), |m, n| {
        let mut acc = 0.0;
        for i in lo..=hi {
            for j in lo..=hi {
                acc += plane.get_clamped(m as isize - i, n as isize - j) * kernel.tap(i, j);
            }
        }
        acc
    })
}

/// Closed form of the LoG tap, written out independently.
pub fn log_tap(sigma: f64, m: f64, n: f64) -> f64 {
    let norm = 1.0 / (2.0 * std::f64::consts::PI * sigma.powi(2)).sqrt();
    norm * (m.powi(2) + n.powi(2) - 2.0 * sigma.powi(2)) / sigma.powi(4)
        * (-(m.powi(2) + n.powi(2)) / (2.0 * sigma.powi(2))).exp()
}
