//! Five-parameter logistic regression fitted by damped least squares.

use nalgebra::{Matrix3, Matrix5, Vector3, Vector5};
use serde::{Deserialize, Serialize};

use super::correlation::pearson;
use super::PairedSamples;
use crate::error::{PersimError, Result};

/// Shape of the logistic term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogisticVariant {
    /// `b1 * (1/2 - 1/(1 + exp(b2 (x - b3)))) + b4 x + b5`
    #[default]
    Standard,
    /// `b1 * (1 - 1/(2 + exp(b2 (x - b3)))) + b4 x + b5`
    Literal,
}

impl LogisticVariant {
    pub fn eval(self, beta: &[f64; 5], x: f64) -> f64 {
        let e = (beta[1] * (x - beta[2])).exp();
        let shape = match self {
            LogisticVariant::Standard => 0.5 - 1.0 / (1.0 + e),
            LogisticVariant::Literal => 1.0 - 1.0 / (2.0 + e),
        };
        beta[0] * shape + beta[3] * x + beta[4]
    }

    /// Value and partial derivatives with respect to `beta`.
    fn eval_with_gradient(self, beta: &[f64; 5], x: f64) -> (f64, [f64; 5]) {
        let dx = x - beta[2];
        let e = (beta[1] * dx).exp();
        // shape(z) and d shape / dz, written to stay finite when e overflows
        let (shape, dshape) = match self {
            LogisticVariant::Standard => {
                let g = 1.0 / (1.0 + e);
                (0.5 - g, g * (1.0 - g))
            }
            LogisticVariant::Literal => {
                let h = 1.0 / (2.0 + e);
                (1.0 - h, h * (1.0 - 2.0 * h))
            }
        };
        let value = beta[0] * shape + beta[3] * x + beta[4];
        let dz = beta[0] * dshape;
        (value, [shape, dz * dx, -dz * beta[1], x, 1.0])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub variant: LogisticVariant,
    pub max_iterations: usize,
    /// Relative tolerance on cost reduction and step size.
    pub tolerance: f64,
    /// Bound on the scaled gradient for a fit to count as converged.
    pub gradient_tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            variant: LogisticVariant::Standard,
            max_iterations: 500,
            tolerance: 1e-10,
            gradient_tolerance: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogisticFit {
    pub beta: [f64; 5],
    pub variant: LogisticVariant,
    pub residual_rmse: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Largest cosine between a Jacobian column and the residual vector.
    pub scaled_gradient: f64,
}

impl LogisticFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.variant.eval(&self.beta, x)
    }

    pub fn apply(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.predict(x)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual_rmse: f64,
}

/// Ordinary least-squares line.
pub fn affine_fit(x: &[f64], y: &[f64]) -> Result<AffineFit> {
    if x.len() != y.len() || x.is_empty() {
        return Err(PersimError::InvalidParameter("affine fit needs equal, nonempty inputs".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx == 0.0 {
        return Err(PersimError::Degenerate("objective scores are constant".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = slope * a + intercept - b;
            r * r
        })
        .sum();
    Ok(AffineFit {
        slope,
        intercept,
        residual_rmse: (sse / n).sqrt(),
    })
}

struct Problem<'a> {
    x: &'a [f64],
    y: &'a [f64],
    variant: LogisticVariant,
}

impl Problem<'_> {
    fn cost(&self, beta: &[f64; 5]) -> f64 {
        self.x
            .iter()
            .zip(self.y)
            .map(|(&x, &y)| {
                let r = self.variant.eval(beta, x) - y;
                r * r
            })
            .sum::<f64>()
            * 0.5
    }

    /// Returns (J^T J, J^T r, 0.5 * |r|^2, |r|).
    fn normal_equations(&self, beta: &[f64; 5]) -> (Matrix5<f64>, Vector5<f64>, f64) {
        let mut jtj = Matrix5::zeros();
        let mut jtr = Vector5::zeros();
        let mut cost = 0.0;
        for (&x, &y) in self.x.iter().zip(self.y) {
            let (value, grad) = self.variant.eval_with_gradient(beta, x);
            let r = value - y;
            cost += 0.5 * r * r;
            let g = Vector5::from(grad);
            jtj += g * g.transpose();
            jtr += g * r;
        }
        (jtj, jtr, cost)
    }
}

fn scaled_gradient(jtj: &Matrix5<f64>, jtr: &Vector5<f64>, cost: f64) -> f64 {
    let rnorm = (2.0 * cost).sqrt();
    if rnorm == 0.0 {
        return 0.0;
    }
    (0..5)
        .filter(|&j| jtj[(j, j)] > 0.0)
        .map(|j| jtr[j].abs() / (jtj[(j, j)].sqrt() * rnorm))
        .fold(0.0, f64::max)
}

fn solve_damped(jtj: &Matrix5<f64>, jtr: &Vector5<f64>, lambda: f64) -> Option<Vector5<f64>> {
    let max_diag = (0..5).map(|j| jtj[(j, j)]).fold(0.0, f64::max);
    let floor = (max_diag * 1e-12).max(f64::MIN_POSITIVE);
    let mut a = *jtj;
    for j in 0..5 {
        a[(j, j)] += lambda * jtj[(j, j)].max(floor);
    }
    let rhs = -jtr;
    a.cholesky()
        .map(|c| c.solve(&rhs))
        .or_else(|| a.lu().solve(&rhs))
        .filter(|d| d.iter().all(|v| v.is_finite()))
}

fn levenberg_marquardt(problem: &Problem<'_>, start: [f64; 5], opts: &FitOptions) -> LogisticFit {
    let n = problem.x.len() as f64;
    let mut beta = start;
    let (mut jtj, mut jtr, mut cost) = problem.normal_equations(&beta);
    let mut lambda = 1e-3;
    let mut iterations = 0;
    let y_scale = problem.y.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);

    while iterations < opts.max_iterations {
        if scaled_gradient(&jtj, &jtr, cost) <= opts.gradient_tolerance * 1e-3
            || (2.0 * cost / n).sqrt() <= 1e-14 * y_scale
        {
            break;
        }
        iterations += 1;
        let mut accepted = false;
        let mut stalled = false;
        while lambda < 1e16 {
            let Some(delta) = solve_damped(&jtj, &jtr, lambda) else {
                lambda *= 10.0;
                continue;
            };
            let mut trial = beta;
            for (t, d) in trial.iter_mut().zip(delta.iter()) {
                *t += d;
            }
            let trial_cost = problem.cost(&trial);
            if trial_cost.is_finite() && trial_cost < cost {
                let step_norm = delta.norm();
                let beta_norm = Vector5::from(beta).norm();
                let reduction = (cost - trial_cost) / cost.max(f64::MIN_POSITIVE);
                beta = trial;
                (jtj, jtr, cost) = problem.normal_equations(&beta);
                lambda = (lambda / 10.0).max(1e-15);
                accepted = true;
                stalled = reduction <= opts.tolerance
                    || step_norm <= opts.tolerance * (beta_norm + opts.tolerance);
                break;
            }
            lambda *= 10.0;
        }
        if !accepted || stalled {
            break;
        }
    }

    let sg = scaled_gradient(&jtj, &jtr, cost);
    let residual_rmse = (2.0 * cost / n).sqrt();
    LogisticFit {
        beta,
        variant: problem.variant,
        residual_rmse,
        converged: sg <= opts.gradient_tolerance || residual_rmse <= 1e-12 * y_scale,
        iterations,
        scaled_gradient: sg,
    }
}

/// Linear-in-parameters step: with rate and center fixed, amplitude, slope
/// and offset come from a 3x3 least-squares solve. Returns the start and its cost.
fn linear_start(problem: &Problem<'_>, rate: f64, center: f64) -> Option<([f64; 5], f64)> {
    let mut ata = Matrix3::zeros();
    let mut aty = Vector3::zeros();
    for (&x, &y) in problem.x.iter().zip(problem.y) {
        let shape = problem.variant.eval(&[1.0, rate, center, 0.0, 0.0], x);
        let row = Vector3::new(shape, x, 1.0);
        ata += row * row.transpose();
        aty += row * y;
    }
    let c = ata.cholesky()?.solve(&aty);
    let beta = [c[0], rate, center, c[1], c[2]];
    let cost = problem.cost(&beta);
    cost.is_finite().then_some((beta, cost))
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Fits the monotonic logistic mapping from objective to subjective scores.
///
/// Starts from the affine least-squares line (logistic amplitude zero), from
/// logistic guesses of either slope sign, and from the best points of a
/// rate/center grid; the lowest cost wins, so the result is never worse than
/// the affine fit. A supplied `init` is tried
/// first. Non-convergence is reported through `converged`.
pub fn fit_logistic(
    samples: &PairedSamples,
    init: Option<[f64; 5]>,
    opts: &FitOptions,
) -> Result<LogisticFit> {
    let (x, y) = (samples.objective(), samples.subjective());
    if x.len() < 5 {
        return Err(PersimError::InvalidParameter(format!(
            "logistic fit needs at least 5 pairs, got {}",
            x.len()
        )));
    }
    let affine = affine_fit(x, y)?;
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let std_x = (x.iter().map(|v| (v - mean_x) * (v - mean_x)).sum::<f64>() / n).sqrt();
    let mean_y = y.iter().sum::<f64>() / n;
    let (ymin, ymax) = y
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let range_y = (ymax - ymin).max(f64::EPSILON);
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let center = quantile(&sorted, 0.5);
    let rate = 1.0 / std_x;

    let problem = Problem {
        x,
        y,
        variant: opts.variant,
    };
    let mut starts = Vec::new();
    starts.extend(init);
    starts.push([0.0, rate, center, affine.slope, affine.intercept]);
    for sign in [1.0, -1.0] {
        starts.push([range_y, sign * rate, center, 0.0, mean_y]);
        starts.push([range_y, sign * rate, center, affine.slope, affine.intercept]);
    }
    // Coarse grid over rate and center; the best few seed further runs.
    let mut grid = Vec::new();
    for factor in [0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 20.0] {
        for q in [0.1, 0.25, 0.5, 0.75, 0.9] {
            grid.extend(linear_start(&problem, factor * rate, quantile(&sorted, q)));
        }
    }
    grid.sort_by(|a, b| a.1.total_cmp(&b.1));
    starts.extend(grid.iter().take(3).map(|g| g.0));

    let mut best: Option<LogisticFit> = None;
    for start in starts {
        let fit = levenberg_marquardt(&problem, start, opts);
        if best
            .as_ref()
            .is_none_or(|b| fit.residual_rmse < b.residual_rmse)
        {
            best = Some(fit);
        }
    }
    Ok(best.expect("at least one start"))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressionStats {
    pub plcc: f64,
    pub rmse: f64,
    pub fit: LogisticFit,
}

/// PLCC and RMSE of the regression-mapped objective scores.
pub fn plcc_rmse_after_regression(samples: &PairedSamples, opts: &FitOptions) -> Result<RegressionStats> {
    let fit = fit_logistic(samples, None, opts)?;
    let mapped = fit.apply(samples.objective());
    let plcc = pearson(&mapped, samples.subjective())?;
    let rmse = (mapped
        .iter()
        .zip(samples.subjective())
        .map(|(m, s)| (m - s) * (m - s))
        .sum::<f64>()
        / mapped.len() as f64)
        .sqrt();
    Ok(RegressionStats { plcc, rmse, fit })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn gradient_matches_finite_differences() {
        for variant in [LogisticVariant::Standard, LogisticVariant::Literal] {
            let beta = [2.5, -3.0, 0.4, 0.7, -1.2];
            for &x in &[-1.0, 0.1, 0.4, 0.9, 3.0] {
                let (_, grad) = variant.eval_with_gradient(&beta, x);
                for k in 0..5 {
                    let h = 1e-6;
                    let (mut up, mut down) = (beta, beta);
                    up[k] += h;
                    down[k] -= h;
                    let fd = (variant.eval(&up, x) - variant.eval(&down, x)) / (2.0 * h);
                    assert!((fd - grad[k]).abs() < 1e-7, "{variant:?} k={k} x={x}");
                }
            }
        }
    }

    #[test]
    fn recovers_model_generated_data() {
        let x: Vec<f64> = (0..40).map(|i| -4.0 + 0.2 * i as f64).collect();
        let truth = [1.0, 0.5, 0.0, 0.1, 2.0];
        let y: Vec<f64> = x.iter().map(|&v| LogisticVariant::Standard.eval(&truth, v)).collect();
        let s = PairedSamples::new(x, y).unwrap();
        let fit = fit_logistic(&s, None, &FitOptions::default()).unwrap();
        assert!(fit.residual_rmse < 1e-6, "{fit:?}");
    }

    #[test]
    fn flat_logistic_reduces_to_least_squares() {
        // beta2 = 0 makes the logistic term constant, so the model is affine.
        let x = grid(30);
        let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| 3.0 * v + 1.0 + if i % 2 == 0 { 0.05 } else { -0.05 }).collect();
        let affine = affine_fit(&x, &y).unwrap();
        let s = PairedSamples::new(x.clone(), y.clone()).unwrap();
        let init = [0.0, 0.0, 0.5, affine.slope, affine.intercept];
        let problem = Problem { x: &x, y: &y, variant: LogisticVariant::Standard };
        let rmse = (2.0 * problem.cost(&init) / x.len() as f64).sqrt();
        assert!((rmse - affine.residual_rmse).abs() < 1e-12);
        let fit = fit_logistic(&s, Some(init), &FitOptions::default()).unwrap();
        assert!(fit.residual_rmse <= affine.residual_rmse + 1e-15);
    }

    #[test]
    fn linear_data_is_fitted_exactly() {
        let x = grid(25);
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v).collect();
        let s = PairedSamples::new(x.clone(), y.clone()).unwrap();
        let stats = plcc_rmse_after_regression(&s, &FitOptions::default()).unwrap();
        assert!(stats.fit.residual_rmse < 1e-8);
        assert!((stats.plcc - 1.0).abs() < 1e-9);
        assert!((stats.plcc - pearson(&x, &y).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn cubic_is_linearized() {
        let x = grid(50);
        let y: Vec<f64> = x.iter().map(|v| v * v * v).collect();
        let stats = plcc_rmse_after_regression(&PairedSamples::new(x, y).unwrap(), &FitOptions::default()).unwrap();
        assert!(stats.plcc > 0.999, "{stats:?}");
        assert!(stats.fit.residual_rmse < 1e-3);
    }

    #[test]
    fn literal_variant_fits_too() {
        let x = grid(50);
        let y: Vec<f64> = x.iter().map(|v| v * v * v).collect();
        let opts = FitOptions { variant: LogisticVariant::Literal, ..FitOptions::default() };
        let stats = plcc_rmse_after_regression(&PairedSamples::new(x, y).unwrap(), &opts).unwrap();
        assert_eq!(stats.fit.variant, LogisticVariant::Literal);
        assert!(stats.plcc > 0.999);
    }

    #[test]
    fn fit_errors() {
        let s = PairedSamples::new(vec![1.0, 2.0, 3.0, 4.0], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(matches!(fit_logistic(&s, None, &FitOptions::default()), Err(PersimError::InvalidParameter(_))));
        let s = PairedSamples::new(vec![1.0; 6], vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert!(matches!(fit_logistic(&s, None, &FitOptions::default()), Err(PersimError::Degenerate(_))));
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let x = grid(50);
        let y: Vec<f64> = x.iter().map(|v| (12.0 * v).sin() + v).collect();
        let opts = FitOptions { max_iterations: 1, ..FitOptions::default() };
        let fit = fit_logistic(&PairedSamples::new(x, y).unwrap(), None, &opts).unwrap();
        assert!(fit.iterations <= 1);
        assert!(!fit.converged || fit.scaled_gradient <= opts.gradient_tolerance);
    }
}
