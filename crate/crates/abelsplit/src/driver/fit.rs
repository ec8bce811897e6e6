//! Least-squares fits of c·√z/log z and a·√z/(log z)^b to counting data.

use serde::Serialize;

use crate::error::{invalid, Result};

/// Bracket for the exponent b.
pub const B_BRACKET: (f64, f64) = (0.5, 2.0);
pub const B_TOL: f64 = 1e-6;
pub const MIN_POINTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// c·√z/log z
    Constant,
    /// a·√z/(log z)^b
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub model: FitModel,
    /// c for [`FitModel::Constant`], a for [`FitModel::Power`].
    pub a: f64,
    /// 1 for [`FitModel::Constant`].
    pub b: f64,
    /// RMS of (model − π)/π over points with π > 0.
    pub residual: f64,
    pub points: usize,
}

impl FitResult {
    pub fn eval(&self, z: f64) -> f64 {
        self.a * shape(z, self.b)
    }
}

fn shape(z: f64, b: f64) -> f64 {
    z.sqrt() / z.ln().powf(b)
}

/// Best a for a fixed b, and the resulting sum of squares.
fn best_scale(pts: &[(f64, f64)], b: f64) -> (f64, f64) {
    let (mut num, mut den) = (0.0, 0.0);
    for &(z, y) in pts {
        let g = shape(z, b);
        num += y * g;
        den += g * g;
    }
    let a = num / den;
    let sse = pts.iter().map(|&(z, y)| (y - a * shape(z, b)).powi(2)).sum();
    (a, sse)
}

/// Fits `model` to (z, π(z)) samples, minimizing Σ (π − model(z))².
/// Only points with z ≥ 100 are used and at least ten are required.
pub fn fit_counting(samples: &[(f64, f64)], model: FitModel) -> Result<FitResult> {
    let pts: Vec<(f64, f64)> = samples.iter().copied().filter(|&(z, _)| z >= 100.0).collect();
    if pts.len() < MIN_POINTS {
        return invalid(format!("need at least {MIN_POINTS} samples with z ≥ 100, got {}", pts.len()));
    }
    if pts.iter().any(|&(_, y)| !y.is_finite()) {
        return invalid("non-finite sample");
    }
    if pts.iter().all(|&(_, y)| y == 0.0) {
        return invalid("all samples are zero");
    }
    let (a, b) = match model {
        FitModel::Constant => (best_scale(&pts, 1.0).0, 1.0),
        FitModel::Power => {
            let b = golden_min(|b| best_scale(&pts, b).1, B_BRACKET.0, B_BRACKET.1, B_TOL);
            (best_scale(&pts, b).0, b)
        }
    };
    let rel: Vec<f64> = pts.iter().filter(|&&(_, y)| y > 0.0).map(|&(z, y)| (a * shape(z, b) - y) / y).collect();
    let residual = (rel.iter().map(|r| r * r).sum::<f64>() / rel.len() as f64).sqrt();
    Ok(FitResult { model, a, b, residual, points: pts.len() })
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    (lo + hi) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::pisplit::log_grid;

    fn synth(a: f64, b: f64) -> Vec<(f64, f64)> {
        log_grid(1 << 30, 40).into_iter().map(|z| (z as f64, a * shape(z as f64, b))).collect()
    }

    #[test]
    fn recovers_constant() {
        let r = fit_counting(&synth(4.4651, 1.0), FitModel::Constant).unwrap();
        assert!((r.a - 4.4651).abs() < 1e-6);
        assert!(r.residual < 1e-9);
    }

    #[test]
    fn recovers_power() {
        for (a, b) in [(2.0, 1.02269), (0.7, 0.6), (9.0, 1.9)] {
            let r = fit_counting(&synth(a, b), FitModel::Power).unwrap();
            assert!((r.b - b).abs() < 1e-4 && (r.a - a).abs() < 1e-4 * a, "{r:?}");
        }
    }

    #[test]
    fn rejects_degenerate_input() {
        let zeros: Vec<(f64, f64)> = (0..20).map(|i| (100.0 * (i + 1) as f64, 0.0)).collect();
        assert!(fit_counting(&zeros, FitModel::Constant).is_err());
        let few: Vec<(f64, f64)> = (0..9).map(|i| (100.0 * (i + 1) as f64, 1.0)).collect();
        assert!(fit_counting(&few, FitModel::Power).is_err());
    }
}
