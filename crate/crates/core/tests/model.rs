mod common;

use common::simpson;
use num_complex::Complex64;
use std::f64::consts::PI;
use troplag_core::realization::model::{series_coefficients, HyperellipticModel, Parity};
use troplag_core::realization::pipeline::default_polynomial;
use troplag_core::realization::poly::Polynomial;
use troplag_core::realization::zeros::{find_zeros, track_zero_drift};

fn shipped() -> Vec<Polynomial> {
    let mut out: Vec<Polynomial> = (1..=6).map(|d| default_polynomial(d, 1.0)).collect();
    out.push(Polynomial::new(vec![0.0, 1.0]));
    out.push(Polynomial::new(vec![0.0, 0.0, 1.0]));
    out.push(Polynomial::new(vec![0.0, -1.0, 0.0, 1.0]));
    out.push(Polynomial::new(vec![0.0, 4.0, 0.0, -5.0, 0.0, 1.0]));
    out.push(Polynomial::new(vec![0.0, 1.0, 1.0]));
    out.push(Polynomial::new(vec![0.0, 0.0, 1.0, -2.0, 1.0]));
    out.push(Polynomial::new(vec![2.0, -3.0, 0.5]));
    out
}

/// √f at ξ = l^q on the branch closest to the leading behaviour a^{1/2} l^{qd/2}.
fn sqrt_f(m: &HyperellipticModel, l: Complex64) -> Complex64 {
    let q = m.q as u32;
    let xi = l.powu(q);
    let s = m.poly.eval_c(xi).sqrt();
    let lead = m.prefactor() * l.powf(q as f64 * m.d as f64 / 2.0);
    if (s - lead).norm() <= (s + lead).norm() {
        s
    } else {
        -s
    }
}

/// Largest relative error of φ against quadrature of Re ∫ √f dξ along radial
/// segments from 2R₀ to 3R₀ and along the circle of radius 2R₀.
fn quadrature_error(m: &HyperellipticModel) -> f64 {
    let q = m.q as f64;
    let r1 = 2.0 * m.r0;
    let r2 = 3.0 * m.r0;
    let period = 2.0 * PI / q;
    let thetas: Vec<f64> = (0..24).map(|k| period * k as f64 / 24.0 + 0.013).collect();
    let scale = thetas.iter().map(|&t| m.phi(r1, t).abs()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for &t in &thetas {
        let radial = |rho: f64| {
            let l = Complex64::from_polar(rho, t);
            sqrt_f(m, l) * q * l.powu(m.q as u32) / rho
        };
        let want = simpson(&radial, r1, r2, 1e-12 * scale).re;
        let got = m.phi(r2, t) - m.phi(r1, t);
        worst = worst.max((got - want).abs() / scale);

        let angular = |th: f64| {
            let l = Complex64::from_polar(r1, th);
            sqrt_f(m, l) * Complex64::new(0.0, q) * l.powu(m.q as u32)
        };
        let want = simpson(&angular, thetas[0], t, 1e-12 * scale).re;
        let got = m.phi(r1, t) - m.phi(r1, thetas[0]);
        worst = worst.max((got - want).abs() / scale);
    }
    worst
}

#[test]
fn series_matches_quadrature() {
    for f in shipped() {
        let m = series_coefficients(&f, 40).unwrap();
        for flip in [false, true] {
            let m = m.with_flip(flip);
            let e = quadrature_error(&m);
            assert!(e < 1e-6, "{:?} flip {flip}: relative error {e:e}", f.coeffs);
        }
    }
}

#[test]
fn even_case_carries_log_term() {
    let m = series_coefficients(&Polynomial::new(vec![0.0, 1.0, 1.0]), 40).unwrap();
    assert_eq!(m.parity, Parity::Even);
    assert!(m.log_coeff.abs() > 1e-3);
    // √(ξ² + ξ) = ξ + 1/2 − 1/(8ξ) + …, so the residue is −1/8
    assert!((m.log_coeff + 0.125).abs() < 1e-12, "{}", m.log_coeff);
}

#[test]
fn zero_counts() {
    for f in shipped() {
        let m = series_coefficients(&f, 40).unwrap();
        for r in [50.0, 500.0] {
            let z = find_zeros(&m, r).unwrap();
            assert_eq!(z.len(), m.d + 2, "{:?} at r = {r}", f.coeffs);
        }
    }
}

#[test]
fn monomial_zeros() {
    for (coeffs, d) in [(vec![0.0, 1.0], 1usize), (vec![0.0, 0.0, 1.0], 2)] {
        let m = series_coefficients(&Polynomial::new(coeffs), 40).unwrap();
        // φ is a multiple of r^e cos(e θ), e = q(d/2 + 1): cos((d + 2)θ) upstairs for odd d
        let k = m.q as f64 * (d as f64 / 2.0 + 1.0);
        for r in [50.0, 500.0] {
            let z = find_zeros(&m, r).unwrap();
            assert_eq!(z.len(), d + 2);
            for (j, t) in z.iter().enumerate() {
                let want = (PI / 2.0 + PI * j as f64) / k;
                assert!((t - want).abs() < 1e-10, "d = {d}: {t} vs {want}");
            }
        }
    }
}

#[test]
fn drift_decay() {
    for f in shipped() {
        let m = series_coefficients(&f, 40).unwrap();
        let rep = track_zero_drift(&m, 20.0, 2000.0, 40).unwrap();
        let bound = if m.parity == Parity::Odd { 3.0 } else { 2.0 };
        if let Some(e) = rep.min_exponent {
            assert!(e >= bound - 0.2, "{:?}: exponent {e}", f.coeffs);
        }
        assert!(rep.passed);
    }
}
