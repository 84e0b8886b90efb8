#![allow(dead_code)]

use num_complex::Complex64;
use troplag_core::{build_fan, Fan, LatticeVector};

pub fn lv(x: i64, y: i64) -> LatticeVector {
    LatticeVector::new(x, y)
}

pub fn fan_of(rays: &[(i64, i64)]) -> Fan {
    build_fan(&rays.iter().map(|&(x, y)| lv(x, y)).collect::<Vec<_>>()).unwrap()
}

/// Smooth complete fans: every maximal cone is unimodular.
pub fn smooth_fans() -> Vec<Fan> {
    vec![
        fan_of(&[(1, 0), (0, 1), (-1, -1)]),
        fan_of(&[(1, 0), (0, 1), (-1, 0), (0, -1)]),
        fan_of(&[(1, 0), (0, 1), (-1, 1), (0, -1)]),
        fan_of(&[(1, 0), (0, 1), (-1, 2), (0, -1)]),
        fan_of(&[(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]),
        fan_of(&[(1, 0), (1, 1), (0, 1), (-1, -1)]),
        fan_of(&[(1, 0), (1, 1), (0, 1), (-1, 0), (0, -1)]),
    ]
}

/// Linear function on the cone spanned by rays a, b with values va, vb there,
/// solved in floating point.
fn slope(a: LatticeVector, b: LatticeVector, va: f64, vb: f64) -> [f64; 2] {
    let [ax, ay] = a.to_f64();
    let [bx, by] = b.to_f64();
    let det = ax * by - ay * bx;
    [(va * by - vb * ay) / det, (ax * vb - bx * va) / det]
}

/// Sampled zero count of the difference between a sheet and its deck
/// translate on the upstairs unit circle, for 2-fold data given by ray values.
/// Maximal data: positions p = 0..2n along the connected circle; the
/// translate of position p is p + n, and the difference is antisymmetric.
/// Split data: sheet 0 against sheet 1 over the base circle.
pub fn sampled_crossings(fan: &Fan, maximal: bool, values: &[i64], per_cone: usize) -> usize {
    let n = fan.n_rays();
    let rays = fan.rays();
    let value = |p: usize| values[p % values.len()] as f64;
    let mut ds = Vec::new();
    for c in 0..n {
        let (a, b) = (rays[c], rays[(c + 1) % n]);
        let (pa, pb) = (c, c + n);
        let next = |p: usize| if maximal { (p + 1) % (2 * n) } else if p < n { (p + 1) % n } else { n + (p + 1 - n) % n };
        let m0 = slope(a, b, value(pa), value(next(pa)));
        let m1 = slope(a, b, value(pb), value(next(pb)));
        let (t0, mut t1) = (a.angle(), b.angle());
        if t1 <= t0 {
            t1 += std::f64::consts::TAU;
        }
        for k in 0..per_cone {
            let t = t0 + (t1 - t0) * (k as f64 + 0.5) / per_cone as f64;
            let u = [t.cos(), t.sin()];
            ds.push((m0[0] - m1[0]) * u[0] + (m0[1] - m1[1]) * u[1]);
        }
    }
    let mut count = 0;
    for k in 0..ds.len() {
        let (x, y) = (ds[k], if k + 1 < ds.len() { ds[k + 1] } else { ds[0] });
        // the last sample wraps to the first; maximal data change sign there
        let y = if k + 1 == ds.len() && maximal { -y } else { y };
        if x.signum() != y.signum() {
            count += 1;
        }
    }
    count
}

/// Adaptive Simpson quadrature of a complex integrand on [a, b].
pub fn simpson(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Complex64 {
    fn rec(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, fa: Complex64, fm: Complex64, fb: Complex64, whole: Complex64, tol: f64, depth: u32) -> Complex64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.norm() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}
