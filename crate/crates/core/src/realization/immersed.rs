//! Immersed double points at the double roots of f.
//!
//! Near ξ₀ the two sheets are x = ±(ξ − ξ₀) g(ξ) with g² = f/(ξ − ξ₀)².
//! Their tangent planes in ℂ² (coordinates ξ_k + i x_k) are compared through
//! unitary frames A, B: the eigenvalues of W Wᵀ, W = A*B, are e^{2iθ_k}.

use num_complex::Complex64;
use serde::Serialize;

use super::model::HyperellipticModel;
use super::poly::Polynomial;

#[derive(Debug, Clone, Serialize)]
pub struct ImmersedPointReport {
    pub xi: [f64; 2],
    pub g0: [f64; 2],
    pub angles: [f64; 2],
    pub angle_sum: f64,
    pub degree: i32,
    pub degree_reverse: i32,
}

/// f / (ξ − ξ₀)², evaluated at ξ₀.
fn cofactor_at(f: &Polynomial, xi0: Complex64) -> Complex64 {
    let mut c: Vec<Complex64> = f.coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    for _ in 0..2 {
        let n = c.len() - 1;
        let mut q = vec![Complex64::new(0.0, 0.0); n];
        let mut acc = Complex64::new(0.0, 0.0);
        for i in (0..n).rev() {
            acc = acc * xi0 + c[i + 1];
            q[i] = acc;
        }
        c = q;
    }
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * xi0 + a)
}

/// Unitary frame of the real plane spanned by (w, c w), w ∈ {1, i}, with x₁ − i x₂ = c w.
fn frame(c: Complex64) -> [[Complex64; 2]; 2] {
    let col = |w: Complex64| {
        let z = c * w;
        let (x1, x2) = (z.re, -z.im);
        [Complex64::new(w.re, x1), Complex64::new(w.im, x2)]
    };
    let u = col(Complex64::new(1.0, 0.0));
    let v = col(Complex64::new(0.0, 1.0));
    let dot = |a: &[Complex64; 2], b: &[Complex64; 2]| (a[0].conj() * b[0] + a[1].conj() * b[1]).re;
    let nu = dot(&u, &u).sqrt();
    let u = [u[0] / nu, u[1] / nu];
    let p = dot(&u, &v);
    let v = [v[0] - u[0] * p, v[1] - u[1] * p];
    let nv = dot(&v, &v).sqrt();
    let v = [v[0] / nv, v[1] / nv];
    // rows are coordinates, columns basis vectors
    [[u[0], v[0]], [u[1], v[1]]]
}

/// Intersection angles from plane (w, c w) to plane (w, −c w), sorted.
pub fn intersection_angles(c: Complex64) -> [f64; 2] {
    let a = frame(c);
    let b = frame(-c);
    let mut w = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            w[i][j] = (0..2).map(|k| a[k][i].conj() * b[k][j]).sum();
        }
    }
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = (0..2).map(|k| w[i][k] * w[j][k]).sum();
        }
    }
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr - det * 4.0).sqrt();
    let mut out = [(tr + disc) / 2.0, (tr - disc) / 2.0].map(|e| {
        let a = e.arg().rem_euclid(std::f64::consts::TAU);
        let a = if a == 0.0 { std::f64::consts::TAU } else { a };
        a / 2.0
    });
    out.sort_by(f64::total_cmp);
    out
}

pub fn immersed_point(f: &Polynomial, xi0: Complex64, flip: bool) -> ImmersedPointReport {
    let mut g = cofactor_at(f, xi0).sqrt();
    if flip {
        g = -g;
    }
    let angles = intersection_angles(g);
    let sum = angles[0] + angles[1];
    let degree = (sum / std::f64::consts::PI).round() as i32;
    let reverse = intersection_angles(-g);
    let degree_reverse = ((reverse[0] + reverse[1]) / std::f64::consts::PI).round() as i32;
    ImmersedPointReport {
        xi: [xi0.re, xi0.im],
        g0: [g.re, g.im],
        angles,
        angle_sum: sum,
        degree,
        degree_reverse,
    }
}

/// One report per double root of the model's polynomial.
pub fn immersed_points(model: &HyperellipticModel) -> Vec<ImmersedPointReport> {
    model.double_roots.iter().map(|&z| immersed_point(&model.poly, z, model.branch_flip)).collect()
}
