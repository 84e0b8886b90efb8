//! Real polynomials in ξ and their complex roots.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients from the constant term upwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub coeffs: Vec<f64>,
}

/// A root together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub root: Complex64,
    pub multiplicity: usize,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// a · Π (ξ − ρ_j).
    pub fn from_roots(roots: &[f64], leading: f64) -> Self {
        let mut c = vec![leading];
        for &r in roots {
            let mut next = vec![0.0; c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                next[i] -= r * ci;
            }
            c = next;
        }
        Polynomial::new(c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_c(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::new(vec![0.0]);
        }
        Polynomial::new(self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect())
    }

    pub fn scaled(&self, s: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Polynomial {
        self.scaled(1.0 / self.leading())
    }

    /// Simultaneous root iteration (Aberth–Ehrlich).
    pub fn roots(&self) -> Vec<Complex64> {
        let n = self.degree();
        if n == 0 {
            return vec![];
        }
        let p = self.monic();
        let dp = p.derivative();
        let bound = 1.0 + p.coeffs[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(0.5 * bound, std::f64::consts::TAU * (k as f64 + 0.25) / n as f64 + 0.4))
            .collect();
        for _ in 0..500 {
            let mut moved = 0.0f64;
            for i in 0..n {
                let pv = p.eval_c(z[i]);
                if pv.norm() == 0.0 {
                    continue;
                }
                let ratio = pv / dp.eval_c(z[i]);
                let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
                let w = ratio / (1.0 - ratio * s);
                if w.is_finite() {
                    z[i] -= w;
                    moved = moved.max(w.norm() / (1.0 + z[i].norm()));
                }
            }
            if moved < 1e-15 {
                break;
            }
        }
        z
    }

    /// Roots grouped by proximity; cluster centres are polished on the
    /// appropriate derivative so repeated roots come out to full precision.
    pub fn root_clusters(&self) -> Vec<RootCluster> {
        let roots = self.roots();
        let scale = 1.0 + roots.iter().fold(0.0f64, |m, r| m.max(r.norm()));
        let tol = 1e-5 * scale;
        let mut used = vec![false; roots.len()];
        let mut out = Vec::new();
        for i in 0..roots.len() {
            if used[i] {
                continue;
            }
            let mut members = vec![roots[i]];
            used[i] = true;
            for j in i + 1..roots.len() {
                if !used[j] && (roots[j] - roots[i]).norm() < tol {
                    used[j] = true;
                    members.push(roots[j]);
                }
            }
            let m = members.len();
            let mut c = members.iter().sum::<Complex64>() / m as f64;
            let mut q = self.clone();
            for _ in 1..m {
                q = q.derivative();
            }
            let dq = q.derivative();
            for _ in 0..50 {
                let d = dq.eval_c(c);
                if d.norm() == 0.0 {
                    break;
                }
                let step = q.eval_c(c) / d;
                c -= step;
                if step.norm() < 1e-16 * (1.0 + c.norm()) {
                    break;
                }
            }
            if c.im.abs() < tol {
                c.im = 0.0;
            }
            out.push(RootCluster { root: c, multiplicity: m });
        }
        out.sort_by(|a, b| a.root.re.total_cmp(&b.root.re).then(a.root.im.total_cmp(&b.root.im)));
        out
    }

    /// Real coefficients, positive leading coefficient, roots of multiplicity at most 2.
    pub fn check_admissible(&self) -> Result<Vec<RootCluster>> {
        if self.degree() == 0 {
            return Err(Error::InadmissiblePolynomial("degree must be positive".into()));
        }
        if self.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InadmissiblePolynomial("non-finite coefficient".into()));
        }
        if self.leading() <= 0.0 {
            return Err(Error::InadmissiblePolynomial("leading coefficient must be positive".into()));
        }
        let clusters = self.root_clusters();
        if let Some(c) = clusters.iter().find(|c| c.multiplicity > 2) {
            return Err(Error::InadmissiblePolynomial(format!(
                "root {} has multiplicity {}",
                c.root, c.multiplicity
            )));
        }
        Ok(clusters)
    }
}
