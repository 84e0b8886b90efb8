//! Zeros of θ ↦ φ_f(r, θ) and their drift in r.

use rayon::prelude::*;
use serde::Serialize;

use super::model::HyperellipticModel;
use crate::error::{Error, Result};

fn bisect(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut ga = g(a);
    for _ in 0..200 {
        if b - a < 1e-13 {
            break;
        }
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm > 0.0) == (ga > 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Sign changes of `g` on [0, period), refined by bisection.
pub fn scan_zeros(g: impl Fn(f64) -> f64, period: f64, samples: usize) -> Vec<f64> {
    let h = period / samples as f64;
    let vals: Vec<f64> = (0..=samples).map(|k| g(k as f64 * h)).collect();
    let mut out = Vec::new();
    for k in 0..samples {
        let (a, b) = (vals[k], vals[k + 1]);
        if a == 0.0 {
            out.push(k as f64 * h);
        } else if b != 0.0 && (a > 0.0) != (b > 0.0) {
            out.push(bisect(&g, k as f64 * h, (k + 1) as f64 * h));
        }
    }
    out
}

/// The d + 2 zeros of φ_f(r, ·) in one period, sorted.
pub fn find_zeros(model: &HyperellipticModel, r: f64) -> Result<Vec<f64>> {
    if model.rank != 2 {
        return Err(Error::UnsupportedDegree(model.rank));
    }
    let expected = model.d + 2;
    let samples = (64 * expected).max(512);
    let zeros = scan_zeros(|t| model.normalized(r, t), model.zero_period(), samples);
    if zeros.len() != expected {
        return Err(Error::WrongZeroCount { r, expected, found: zeros.len() });
    }
    Ok(zeros)
}

/// ∂θ_i/∂r at a zero, from −φ_r/φ_θ with the leading term cancelled.
pub fn zero_velocity(model: &HyperellipticModel, r: f64, theta: f64) -> f64 {
    let (_, dt) = model.with_flip(false).grad(r, theta);
    let a = model.leading().powf(1.0 / model.rank as f64);
    -model.radial_excess(r, theta) * a / dt
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroTrack {
    pub index: usize,
    pub thetas: Vec<f64>,
    pub velocities: Vec<f64>,
    /// Fitted decay exponent p in |∂θ/∂r| ~ r^{−p}; None for stationary tracks.
    pub exponent: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DriftReport {
    pub radii: Vec<f64>,
    pub tracks: Vec<ZeroTrack>,
    pub bound: f64,
    pub min_exponent: Option<f64>,
    pub passed: bool,
}

fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Follow every zero over a geometric grid of radii and fit the decay of its drift.
pub fn track_zero_drift(model: &HyperellipticModel, r_lo: f64, r_hi: f64, steps: usize) -> Result<DriftReport> {
    let radii: Vec<f64> = (0..steps).map(|k| r_lo * (r_hi / r_lo).powf(k as f64 / (steps - 1) as f64)).collect();
    let zero_sets: Vec<Vec<f64>> = radii.par_iter().map(|&r| find_zeros(model, r)).collect::<Result<_>>()?;
    let period = model.zero_period();
    let n = zero_sets[0].len();
    let mut tracks = Vec::new();
    for i in 0..n {
        let mut thetas = vec![zero_sets[0][i]];
        for set in &zero_sets[1..] {
            let prev = *thetas.last().unwrap();
            let dist = |t: f64| {
                let d = (t - prev).rem_euclid(period);
                d.min(period - d)
            };
            let next = set.iter().copied().min_by(|a, b| dist(*a).total_cmp(&dist(*b))).unwrap();
            thetas.push(next);
        }
        let velocities: Vec<f64> =
            radii.iter().zip(&thetas).map(|(&r, &t)| zero_velocity(model, r, t)).collect();
        let moving: Vec<(f64, f64)> = radii
            .iter()
            .zip(&velocities)
            .filter(|(r, v)| v.abs() * **r > 1e-12)
            .map(|(r, v)| (r.ln(), v.abs().ln()))
            .collect();
        let exponent = if moving.len() >= radii.len() / 2 && moving.len() >= 2 {
            let (xs, ys): (Vec<f64>, Vec<f64>) = moving.into_iter().unzip();
            Some(-loglog_slope(&xs, &ys))
        } else {
            None
        };
        tracks.push(ZeroTrack { index: i, thetas, velocities, exponent });
    }
    let bound = (model.q + 1) as f64;
    let min_exponent = tracks.iter().filter_map(|t| t.exponent).min_by(f64::total_cmp);
    let passed = min_exponent.is_none_or(|e| e >= bound - 0.2);
    let report = DriftReport { radii, tracks, bound, min_exponent, passed };
    if !report.passed {
        return Err(Error::DriftBoundViolated { exponent: min_exponent.unwrap(), bound });
    }
    Ok(report)
}
