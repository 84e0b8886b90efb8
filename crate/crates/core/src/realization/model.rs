//! The local model x^r = f_d(ξ) and the asymptotic series of its potential.
//!
//! With ξ = l^q (q = r for a connected cover, q = 1 for the split 2-fold
//! cover) the primitive of x dξ is
//! a^{1/r} (Σ c_i l^{e_i} + c_log ln l), e_i = q (d/r + 1 − i), c_i = q s_i / e_i,
//! where s_i are the coefficients of (monic(ξ)/ξ^d)^{1/r} in w = 1/ξ.
//! The potential is its real part in polar coordinates l = r e^{iθ}.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::{Polynomial, RootCluster};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    /// Connected cover, ξ = l^r.
    Odd,
    /// Two sheets over ξ = l (r = 2, d even).
    Even,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperellipticModel {
    pub rank: usize,
    pub d: usize,
    pub poly: Polynomial,
    pub clusters: Vec<RootCluster>,
    pub double_roots: Vec<Complex64>,
    pub parity: Parity,
    /// ξ = l^q.
    pub q: usize,
    /// c_0 … c_K, exponents e_i, excluding the logarithmic index.
    pub coeffs: Vec<f64>,
    pub exponents: Vec<f64>,
    pub log_coeff: f64,
    /// c_i by series index, 0 at the logarithmic index.
    pub horner: Vec<f64>,
    pub order: usize,
    /// Upstairs radius beyond which the series is used.
    pub r0: f64,
    /// Global sign of the potential (the involution x ↦ −x).
    pub branch_flip: bool,
}

/// Series of P(w)^α for P(0) = 1, to order `k`.
fn power_series(p: &[f64], alpha: f64, k: usize) -> Vec<f64> {
    let mut g = vec![0.0; k + 1];
    g[0] = 1.0;
    for n in 1..=k {
        let mut acc = 0.0;
        for j in 1..=n.min(p.len() - 1) {
            acc += ((alpha + 1.0) * j as f64 - n as f64) * p[j] * g[n - j];
        }
        g[n] = acc / n as f64;
    }
    g
}

/// Build the model for x^r = f(ξ) with series order `order`.
pub fn series_coefficients_rank(f: &Polynomial, rank: usize, order: usize) -> Result<HyperellipticModel> {
    let clusters = f.check_admissible()?;
    let d = f.degree();
    if rank < 2 {
        return Err(Error::UnsupportedDegree(rank));
    }
    if order < d + 2 {
        return Err(Error::InadmissiblePolynomial(format!("series order {order} below d + 2 = {}", d + 2)));
    }
    let (parity, q) = if rank == 2 && d % 2 == 0 {
        (Parity::Even, 1)
    } else {
        if crate::fan::gcd(rank as i64, d as i64) != 1 {
            return Err(Error::InadmissiblePolynomial(format!("gcd({rank}, {d}) must be 1")));
        }
        (Parity::Odd, rank)
    };
    let monic = f.monic();
    // P(w) = monic(ξ)/ξ^d with w = 1/ξ: reversed coefficients.
    let p: Vec<f64> = monic.coeffs.iter().rev().copied().collect();
    let s = power_series(&p, 1.0 / rank as f64, order);
    let qf = q as f64;
    let mut coeffs = Vec::new();
    let mut exponents = Vec::new();
    let mut log_coeff = 0.0;
    let mut horner = Vec::new();
    for (i, &si) in s.iter().enumerate() {
        let e = qf * (d as f64 / rank as f64 + 1.0 - i as f64);
        if e.abs() < 1e-12 {
            log_coeff = qf * si;
            horner.push(0.0);
        } else {
            horner.push(qf * si / e);
            coeffs.push(qf * si / e);
            exponents.push(e);
        }
    }
    let max_root = clusters.iter().fold(0.0f64, |m, c| m.max(c.root.norm()));
    let double_roots = clusters.iter().filter(|c| c.multiplicity == 2).map(|c| c.root).collect();
    Ok(HyperellipticModel {
        rank,
        d,
        poly: f.clone(),
        clusters,
        double_roots,
        parity,
        q,
        coeffs,
        exponents,
        log_coeff,
        horner,
        order,
        r0: 2.0 * (1.0 + max_root),
        branch_flip: false,
    })
}

/// The 2-fold model x² = f(ξ).
pub fn series_coefficients(f: &Polynomial, order: usize) -> Result<HyperellipticModel> {
    series_coefficients_rank(f, 2, order)
}

impl HyperellipticModel {
    pub fn leading(&self) -> f64 {
        self.poly.leading()
    }

    /// a_d^{1/r} times the branch sign.
    pub fn prefactor(&self) -> f64 {
        let s = self.leading().powf(1.0 / self.rank as f64);
        if self.branch_flip {
            -s
        } else {
            s
        }
    }

    /// Same roots, leading coefficient replaced by `a`.
    pub fn with_leading(&self, a: f64) -> HyperellipticModel {
        let mut m = self.clone();
        m.poly = self.poly.scaled(a / self.leading());
        m
    }

    pub fn with_flip(&self, flip: bool) -> HyperellipticModel {
        let mut m = self.clone();
        m.branch_flip = flip;
        m
    }

    /// Leading exponent e_0 = q (d/r + 1).
    pub fn e0(&self) -> f64 {
        self.exponents[0]
    }

    /// Horner evaluation of Σ h_i w^i for the series coefficients (zero at the log index).
    fn horner(&self, w: Complex64, weight: impl Fn(usize, f64) -> f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.horner.iter().enumerate().rev() {
            acc = acc * w + weight(i, *c);
        }
        acc
    }

    fn lw(&self, r: f64, theta: f64) -> (Complex64, Complex64) {
        let q = self.q as f64;
        (Complex64::from_polar(r.powf(self.e0()), self.e0() * theta), Complex64::from_polar(r.powf(-q), -q * theta))
    }

    /// Σ c_i r^{e_i − e_0} cos(e_i θ) + c_log ln r / r^{e_0}, without prefactor.
    pub fn normalized(&self, r: f64, theta: f64) -> f64 {
        let (_, w) = self.lw(r, theta);
        let rot = Complex64::from_polar(1.0, self.e0() * theta);
        (rot * self.horner(w, |_, c| c)).re + self.log_coeff * r.ln() * r.powf(-self.e0())
    }

    /// Series potential on the principal sheet, including prefactor and flip.
    pub fn phi(&self, r: f64, theta: f64) -> f64 {
        self.prefactor() * self.phi_unit(r, theta)
    }

    /// Series potential with unit prefactor.
    pub fn phi_unit(&self, r: f64, theta: f64) -> f64 {
        let (l0, w) = self.lw(r, theta);
        (l0 * self.horner(w, |_, c| c)).re + self.log_coeff * r.ln()
    }

    /// (∂_r φ, ∂_θ φ) on the principal sheet.
    pub fn grad(&self, r: f64, theta: f64) -> (f64, f64) {
        let (l0, w) = self.lw(r, theta);
        let e0 = self.e0();
        let q = self.q as f64;
        // l G'(l) = Σ c_i e_i l^{e_i}
        let lg = l0 * self.horner(w, |i, c| c * (e0 - q * i as f64));
        let s = self.prefactor();
        (s * (lg.re + self.log_coeff) / r, s * (-lg.im))
    }

    /// ∂_r φ − (e_0/r) φ, with the leading term cancelled exactly; unit prefactor.
    pub fn radial_excess(&self, r: f64, theta: f64) -> f64 {
        let (l0, w) = self.lw(r, theta);
        let q = self.q as f64;
        let v = l0 * self.horner(w, |i, c| -c * q * i as f64);
        (v.re + self.log_coeff * (1.0 - self.e0() * r.ln())) / r
    }

    /// Potential on a sheet: the split model carries ± on sheets 0 and 1.
    pub fn phi_sheet(&self, r: f64, theta: f64, sheet: usize) -> f64 {
        let v = self.phi(r, theta);
        match (self.parity, sheet) {
            (Parity::Even, 1) => -v,
            _ => v,
        }
    }

    /// Angular period of the zero set: π for the odd 2-fold model, 2π for the split one.
    pub fn zero_period(&self) -> f64 {
        match self.parity {
            Parity::Odd => std::f64::consts::TAU / self.rank as f64,
            Parity::Even => std::f64::consts::TAU,
        }
    }

    /// Tail constant C: radius beyond which the leading
    /// term dominates the tail, 2 C r^{−q} < c_0.
    pub fn tail_constant(&self) -> f64 {
        let q = self.q as f64;
        let r0 = self.r0;
        let e0 = self.e0();
        let mut c_val = 0.0;
        let mut c_ang = 0.0;
        for (i, (c, e)) in self.coeffs.iter().zip(&self.exponents).enumerate().skip(1) {
            let w = r0.powf(-q * (i as f64 - 1.0));
            c_val += c.abs() * w;
            c_ang += c.abs() * (e.abs() / e0) * w;
        }
        if self.log_coeff != 0.0 {
            let lt = self.log_coeff.abs() * r0.max(std::f64::consts::E).ln() * r0.powf(q - e0);
            c_val += lt;
        }
        c_val.max(c_ang)
    }

    pub fn zero_threshold(&self) -> f64 {
        let c0 = self.coeffs[0];
        (2.0 * self.tail_constant() / c0).powf(1.0 / self.q as f64)
    }

    /// Principal branch of x = f(ξ)^{1/2} at ξ = l^q along the ray through l,
    /// factored as a^{1/2} l^{qd/2} Π (1 − ρ_j/ξ)^{1/2}; valid for |ξ| > max|ρ_j|.
    pub fn sqrt_f_series_branch(&self, l: Complex64) -> Complex64 {
        let xi = l.powu(self.q as u32);
        let mut acc = Complex64::new(self.prefactor(), 0.0) * l.powf(self.q as f64 * self.d as f64 / 2.0);
        for c in &self.clusters {
            let fac = (Complex64::new(1.0, 0.0) - c.root / xi).sqrt();
            acc *= fac.powu(c.multiplicity as u32);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_series() {
        let m = series_coefficients(&Polynomial::new(vec![0.0, 1.0]), 10).unwrap();
        assert_eq!(m.parity, Parity::Odd);
        assert!((m.coeffs[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!(m.coeffs[1..].iter().all(|c| c.abs() < 1e-15));
        assert_eq!(m.exponents[0], 3.0);
        let m = series_coefficients(&Polynomial::from_roots(&[0.0, 1.0, -1.0], 1.0), 10).unwrap();
        assert!((m.coeffs[0] - 0.4).abs() < 1e-15 && m.exponents[0] == 5.0);
    }

    #[test]
    fn even_log_term() {
        // sqrt(ξ² + ξ) = ξ + 1/2 − 1/(8ξ) + …
        let m = series_coefficients(&Polynomial::new(vec![0.0, 1.0, 1.0]), 10).unwrap();
        assert_eq!(m.parity, Parity::Even);
        assert!((m.coeffs[0] - 0.5).abs() < 1e-15);
        assert!((m.coeffs[1] - 0.5).abs() < 1e-15);
        assert!((m.log_coeff + 0.125).abs() < 1e-15);
    }

    #[test]
    fn miller_recurrence_matches_square() {
        let p = [1.0, 0.3, -0.7, 0.2];
        let g = power_series(&p, 0.5, 12);
        let mut sq = [0.0; 4];
        for i in 0..4 {
            for j in 0..=i {
                sq[i] += g[j] * g[i - j];
            }
        }
        for i in 0..4 {
            assert!((sq[i] - p[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn rank_three_exponents() {
        let m = series_coefficients_rank(&Polynomial::new(vec![0.0, 0.0, 1.0]), 3, 10).unwrap();
        assert_eq!(m.q, 3);
        assert_eq!(m.exponents[0], 5.0);
        assert!((m.coeffs[0] - 3.0 / 5.0).abs() < 1e-15);
        assert!(series_coefficients_rank(&Polynomial::new(vec![0.0, 0.0, 0.0, 1.0]), 3, 10).is_err());
    }
}
