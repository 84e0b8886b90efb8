//! The angular reparametrization ρ(r, θ) that moves crossing angles onto
//! the zeros of the local model.
//!
//! For fixed r, ρ is the periodic monotone cubic Hermite interpolant
//! through θ_i ↦ b(r) θ_i^d(r) + (1 − b(r)) θ_i, with b the radial blend.

use serde::Serialize;

use super::model::HyperellipticModel;
use super::smooth::rho_blend;
use super::zeros::find_zeros;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct RhoMap {
    pub big_r: f64,
    pub eps: f64,
    /// Source angles in [0, period), sorted.
    pub sources: Vec<f64>,
    pub period: f64,
    /// Cyclic index shift pairing sources with target zeros.
    pub offset: usize,
    #[serde(skip)]
    model: HyperellipticModel,
}

/// ρ(r, ·) at one radius.
#[derive(Debug, Clone)]
pub struct RhoSlice {
    knots: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    period: f64,
    identity: bool,
}

fn pchip_slopes(x: &[f64], v: &[f64], period: f64) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = (0..n).map(|i| if i + 1 < n { x[i + 1] - x[i] } else { x[0] + period - x[i] }).collect();
    let del: Vec<f64> =
        (0..n).map(|i| (if i + 1 < n { v[i + 1] - v[i] } else { v[0] + period - v[i] }) / h[i]).collect();
    (0..n)
        .map(|i| {
            let p = (i + n - 1) % n;
            let (d0, d1) = (del[p], del[i]);
            if d0 * d1 <= 0.0 {
                0.0
            } else {
                let w1 = 2.0 * h[i] + h[p];
                let w2 = h[i] + 2.0 * h[p];
                (w1 + w2) / (w1 / d0 + w2 / d1)
            }
        })
        .collect()
}

impl RhoSlice {
    fn identity(period: f64) -> Self {
        RhoSlice { knots: vec![], values: vec![], slopes: vec![], period, identity: true }
    }

    fn locate(&self, theta: f64) -> (usize, f64, f64, f64) {
        let n = self.knots.len();
        let x0 = self.knots[0];
        let k = ((theta - x0) / self.period).floor();
        let u = theta - k * self.period;
        let i = self.knots.partition_point(|&x| x <= u).clamp(1, n) - 1;
        let x1 = if i + 1 < n { self.knots[i + 1] } else { x0 + self.period };
        (i, u, x1 - self.knots[i], k * self.period)
    }

    fn segment(&self, i: usize) -> (f64, f64, f64, f64) {
        let n = self.knots.len();
        let j = (i + 1) % n;
        let v1 = if i + 1 < n { self.values[j] } else { self.values[0] + self.period };
        (self.values[i], v1, self.slopes[i], self.slopes[j])
    }

    pub fn eval(&self, theta: f64) -> f64 {
        if self.identity {
            return theta;
        }
        let (i, u, h, shift) = self.locate(theta);
        let (v0, v1, m0, m1) = self.segment(i);
        let s = (u - self.knots[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * v0 + h10 * h * m0 + h01 * v1 + h11 * h * m1 + shift
    }

    /// ∂ρ/∂θ.
    pub fn deriv(&self, theta: f64) -> f64 {
        if self.identity {
            return 1.0;
        }
        let (i, u, h, _) = self.locate(theta);
        let (v0, v1, m0, m1) = self.segment(i);
        let s = (u - self.knots[i]) / h;
        let s2 = s * s;
        ((6.0 * s2 - 6.0 * s) * (v0 - v1)) / h + (3.0 * s2 - 4.0 * s + 1.0) * m0 + (3.0 * s2 - 2.0 * s) * m1
    }
}

impl RhoMap {
    pub fn model(&self) -> &HyperellipticModel {
        &self.model
    }

    fn targets(&self, r: f64) -> Result<Vec<f64>> {
        let t = find_zeros(&self.model, r)?;
        let n = t.len();
        let p = self.period;
        let lifted: Vec<f64> =
            (0..n).map(|i| t[(i + self.offset) % n] + p * ((i + self.offset) / n) as f64).collect();
        let shift = p * ((self.sources[0] - lifted[0]) / p).round();
        Ok(lifted.into_iter().map(|y| y + shift).collect())
    }

    pub fn slice(&self, r: f64) -> Result<RhoSlice> {
        let b = rho_blend(r, self.big_r, self.eps);
        if b == 0.0 {
            return Ok(RhoSlice::identity(self.period));
        }
        let y = self.targets(r)?;
        let values: Vec<f64> = self.sources.iter().zip(&y).map(|(x, y)| b * y + (1.0 - b) * x).collect();
        let slopes = pchip_slopes(&self.sources, &values, self.period);
        Ok(RhoSlice { knots: self.sources.clone(), values, slopes, period: self.period, identity: false })
    }

    pub fn eval(&self, r: f64, theta: f64) -> Result<f64> {
        Ok(self.slice(r)?.eval(theta))
    }

    /// Sampled ∂ρ/∂θ > 0 over a grid of radii and angles.
    pub fn check_monotone(&self, radii: &[f64], samples: usize) -> Result<f64> {
        let mut worst = f64::INFINITY;
        for &r in radii {
            let s = self.slice(r)?;
            for k in 0..samples {
                let t = self.period * k as f64 / samples as f64;
                let d = s.deriv(t);
                if !(d > 0.0) {
                    return Err(Error::MonotonicityFailure { r, theta: t });
                }
                worst = worst.min(d);
            }
        }
        Ok(worst)
    }

    /// max over samples of |∂ρ/∂r| r^{q+1} on [r_lo, r_hi].
    pub fn drift_constant(&self, r_lo: f64, r_hi: f64, steps: usize, samples: usize) -> Result<f64> {
        let p = (self.model.q + 1) as f64;
        let mut m = 0.0f64;
        for j in 0..steps {
            let r = r_lo * (r_hi / r_lo).powf(j as f64 / (steps - 1).max(1) as f64);
            let h = 1e-4 * r;
            let (a, b) = (self.slice(r - h)?, self.slice(r + h)?);
            for k in 0..samples {
                let t = self.period * k as f64 / samples as f64;
                m = m.max(((b.eval(t) - a.eval(t)) / (2.0 * h)).abs() * r.powf(p));
            }
        }
        Ok(m)
    }
}

/// Build ρ from the source angles (crossings of the tropical data) and the model's zeros.
pub fn build_rho(sources: &[f64], model: &HyperellipticModel, big_r: f64, eps: f64) -> Result<RhoMap> {
    let period = model.zero_period();
    let mut src: Vec<f64> = sources.iter().map(|s| s.rem_euclid(period)).collect();
    src.sort_by(f64::total_cmp);
    let outer_r = big_r + eps;
    let t = find_zeros(model, outer_r)?;
    if t.len() != src.len() {
        return Err(Error::WrongZeroCount { r: outer_r, expected: src.len(), found: t.len() });
    }
    let n = t.len();
    let circ = |a: f64, b: f64| {
        let d = (a - b).rem_euclid(period);
        d.min(period - d)
    };
    let offset = (0..n)
        .min_by(|&s1, &s2| {
            let cost = |s: usize| (0..n).map(|i| circ(src[i], t[(i + s) % n]).powi(2)).sum::<f64>();
            cost(s1).total_cmp(&cost(s2))
        })
        .unwrap();
    let rho = RhoMap { big_r, eps, sources: src, period, offset, model: model.clone() };
    let radii: Vec<f64> = (0..=8).map(|j| big_r + eps * j as f64 / 8.0).collect();
    rho.check_monotone(&radii, 2000)?;
    Ok(rho)
}
