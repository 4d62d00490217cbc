//! Weighted Levenberg-Marquardt fit of `f(t) = A exp(-(t/τ)²) [+ b]`.

use nalgebra::{DMatrix, DVector};

use super::experiment::DecayCurve;
use crate::error::{Error, Result};

pub const FIT_TOL: f64 = 1e-10;
pub const FIT_MAX_ITERATIONS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FitOptions {
    /// Add a constant offset `b` to the model.
    pub offset: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub amplitude: f64,
    pub amplitude_stderr: f64,
    pub tau_s: f64,
    pub tau_stderr_s: f64,
    pub offset: Option<f64>,
    pub offset_stderr: Option<f64>,
    /// Unweighted root-mean-square residual.
    pub residual_rms: f64,
    pub iterations: usize,
}

impl FitResult {
    pub fn predict(&self, t: f64) -> f64 {
        self.amplitude * (-(t / self.tau_s).powi(2)).exp() + self.offset.unwrap_or(0.0)
    }
}

pub fn fit_gaussian_decay(curve: &DecayCurve) -> Result<FitResult> {
    fit_gaussian_decay_with(curve, FitOptions::default())
}

struct Problem<'a> {
    t: &'a [f64],
    y: &'a [f64],
    w: Vec<f64>,
    offset: bool,
}

impl Problem<'_> {
    fn n_params(&self) -> usize {
        if self.offset { 3 } else { 2 }
    }

    fn model(&self, p: &DVector<f64>, t: f64) -> f64 {
        let g = (-(t / p[1]).powi(2)).exp();
        p[0] * g + if self.offset { p[2] } else { 0.0 }
    }

    fn cost(&self, p: &DVector<f64>) -> f64 {
        self.t
            .iter()
            .zip(self.y)
            .zip(&self.w)
            .map(|((&t, &y), &w)| w * (y - self.model(p, t)).powi(2))
            .sum()
    }

    /// Normal matrix `JᵀWJ` and gradient `JᵀW r`.
    fn normal_equations(&self, p: &DVector<f64>) -> (DMatrix<f64>, DVector<f64>) {
        let k = self.n_params();
        let mut h = DMatrix::zeros(k, k);
        let mut g = DVector::zeros(k);
        for ((&t, &y), &w) in self.t.iter().zip(self.y).zip(&self.w) {
            let e = (-(t / p[1]).powi(2)).exp();
            let mut row = DVector::zeros(k);
            row[0] = e;
            row[1] = p[0] * e * 2.0 * t * t / p[1].powi(3);
            if self.offset {
                row[2] = 1.0;
            }
            let r = y - self.model(p, t);
            h += &row * row.transpose() * w;
            g += &row * (w * r);
        }
        (h, g)
    }
}

fn initial_guess(t: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = t
        .iter()
        .zip(y)
        .filter(|(_, &y)| y > 0.0)
        .map(|(&t, &y)| (t * t, y.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::FitFailed("fewer than two positive points for the initial guess".into()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let t_max = t.iter().cloned().fold(0.0, f64::max);
    let tau = if slope < 0.0 { (-1.0 / slope).sqrt() } else { 10.0 * t_max };
    Ok(((my - slope * mx).exp(), tau))
}

pub fn fit_gaussian_decay_with(curve: &DecayCurve, opts: FitOptions) -> Result<FitResult> {
    curve.validate()?;
    let t: Vec<f64> = curve.rows.iter().map(|r| r.t_s).collect();
    let y: Vec<f64> = curve.rows.iter().map(|r| r.fmin).collect();
    if t.len() < 4 {
        return Err(Error::Precondition(format!("need at least 4 points, got {}", t.len())));
    }
    let mut positive: Vec<f64> = t.iter().cloned().filter(|&t| t > 0.0).collect();
    positive.dedup();
    if positive.len() < 2 {
        return Err(Error::Precondition("need at least 2 distinct positive times".into()));
    }
    if y.iter().all(|&v| v == 0.0) {
        return Err(Error::FitFailed("all-zero curve".into()));
    }
    let weighted = curve.rows.iter().all(|r| r.stderr > 0.0);
    let w = if weighted {
        curve.rows.iter().map(|r| r.stderr.powi(-2)).collect()
    } else {
        vec![1.0; t.len()]
    };
    let prob = Problem {
        t: &t,
        y: &y,
        w,
        offset: opts.offset,
    };
    let k = prob.n_params();
    if t.len() <= k {
        return Err(Error::Precondition("not enough points for the offset model".into()));
    }

    let (a0, tau0) = initial_guess(&t, &y)?;
    let mut p = DVector::from_vec(if opts.offset { vec![a0, tau0, 0.0] } else { vec![a0, tau0] });
    let mut cost = prob.cost(&p);
    let mut lambda = 1e-3;
    let mut converged = None;

    'outer: for it in 1..=FIT_MAX_ITERATIONS {
        let (h, g) = prob.normal_equations(&p);
        loop {
            let mut damped = h.clone();
            for i in 0..k {
                damped[(i, i)] += lambda * h[(i, i)].max(1e-300);
            }
            let Some(step) = damped.lu().solve(&g) else {
                lambda *= 10.0;
                if lambda > 1e30 {
                    return Err(Error::FitFailed("singular normal equations".into()));
                }
                continue;
            };
            let rel = (0..k)
                .map(|i| step[i].abs() / p[i].abs().max(1e-12))
                .fold(0.0, f64::max);
            let trial = &p + &step;
            let trial_cost = if trial[1] > 0.0 { prob.cost(&trial) } else { f64::INFINITY };
            if trial_cost <= cost {
                p = trial;
                cost = trial_cost;
                lambda = (lambda / 10.0).max(1e-12);
                if rel < FIT_TOL {
                    converged = Some(it);
                    break 'outer;
                }
                break;
            }
            if rel < FIT_TOL {
                converged = Some(it);
                break 'outer;
            }
            lambda *= 10.0;
            if lambda > 1e30 {
                break 'outer;
            }
        }
    }
    let iterations = converged.ok_or(Error::NoConvergence {
        iterations: FIT_MAX_ITERATIONS,
        residual: cost,
    })?;

    let (h, _) = prob.normal_equations(&p);
    let mut cov = h
        .try_inverse()
        .ok_or_else(|| Error::FitFailed("singular covariance matrix".into()))?;
    if !weighted {
        cov *= cost / (t.len() - k) as f64;
    }
    let se = |i: usize| cov[(i, i)].max(0.0).sqrt();
    let residual_rms = (t
        .iter()
        .zip(&y)
        .map(|(&t, &y)| (y - prob.model(&p, t)).powi(2))
        .sum::<f64>()
        / t.len() as f64)
        .sqrt();
    Ok(FitResult {
        amplitude: p[0],
        amplitude_stderr: se(0),
        tau_s: p[1],
        tau_stderr_s: se(1),
        offset: opts.offset.then(|| p[2]),
        offset_stderr: opts.offset.then(|| se(2)),
        residual_rms,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::experiment::DecayRow;
    use crate::runner::scenario::DEFAULT_DELAYS_S;

    fn synthetic(a: f64, tau: f64, b: f64, stderr: f64) -> DecayCurve {
        DecayCurve::new(
            DEFAULT_DELAYS_S
                .iter()
                .map(|&t| DecayRow {
                    t_s: t,
                    fmin: a * (-(t / tau).powi(2)).exp() + b,
                    stderr,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn recovers_exact_model() {
        for stderr in [0.0, 0.01] {
            let f = fit_gaussian_decay(&synthetic(0.89, 34.0, 0.0, stderr)).unwrap();
            assert!((f.amplitude - 0.89).abs() < 1e-8, "{f:?}");
            assert!((f.tau_s - 34.0).abs() < 1e-8, "{f:?}");
            assert!(f.residual_rms < 1e-10);
        }
    }

    #[test]
    fn scale_equivariance() {
        let c = synthetic(0.89, 34.0, 0.0, 0.01);
        let a = fit_gaussian_decay(&c).unwrap();
        let b = fit_gaussian_decay(&c.scaled(0.5)).unwrap();
        assert!((a.tau_s - b.tau_s).abs() < 1e-8);
        assert!((b.amplitude - 0.5 * a.amplitude).abs() < 1e-8);
    }

    #[test]
    fn offset_model() {
        let c = synthetic(0.6, 12.0, 0.25, 0.0);
        let f = fit_gaussian_decay_with(&c, FitOptions { offset: true }).unwrap();
        assert!((f.tau_s - 12.0).abs() < 1e-7 && (f.offset.unwrap() - 0.25).abs() < 1e-7, "{f:?}");
    }

    #[test]
    fn rejects_bad_curves() {
        let short = DecayCurve::new(synthetic(0.9, 30.0, 0.0, 0.0).rows[..3].to_vec()).unwrap();
        assert!(matches!(fit_gaussian_decay(&short), Err(Error::Precondition(_))));
        assert!(matches!(fit_gaussian_decay(&synthetic(0.0, 30.0, 0.0, 0.0)), Err(Error::FitFailed(_))));
        let same_t = DecayCurve::new(vec![DecayRow { t_s: 2.0, fmin: 0.5, stderr: 0.0 }; 5]).unwrap();
        assert!(fit_gaussian_decay(&same_t).is_err());
    }
}
