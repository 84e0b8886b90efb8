//! Complete fans in a rank-2 lattice, toric divisors and their characters.
//!
//! All combinatorics is exact. Rays are kept primitive and sorted
//! counterclockwise starting from the positive x-axis; maximal cone `i` is
//! spanned by rays `i` and `i + 1` (indices mod the number of rays), so ray
//! `i` is the common face of cones `i - 1` and `i`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer vector in N or in its dual M.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticeVector {
    pub x: i64,
    pub y: i64,
}

impl From<[i64; 2]> for LatticeVector {
    fn from(v: [i64; 2]) -> Self {
        LatticeVector { x: v[0], y: v[1] }
    }
}

impl From<LatticeVector> for [i64; 2] {
    fn from(v: LatticeVector) -> Self {
        [v.x, v.y]
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl std::ops::Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, o: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, o: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector::new(-self.x, -self.y)
    }
}

impl LatticeVector {
    pub const ZERO: LatticeVector = LatticeVector { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        LatticeVector { x, y }
    }

    /// Pairing between M and N.
    pub fn dot(self, o: LatticeVector) -> i64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: LatticeVector) -> i64 {
        self.x * o.y - self.y * o.x
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn is_primitive(self) -> bool {
        gcd(self.x.abs(), self.y.abs()) == 1
    }

    pub fn primitive(self) -> LatticeVector {
        let g = gcd(self.x.abs(), self.y.abs());
        if g <= 1 {
            self
        } else {
            LatticeVector::new(self.x / g, self.y / g)
        }
    }

    /// Rotation by +π/2.
    pub fn perp(self) -> LatticeVector {
        LatticeVector::new(-self.y, self.x)
    }

    pub fn scale(self, k: i64) -> LatticeVector {
        LatticeVector::new(self.x * k, self.y * k)
    }

    pub fn angle(self) -> f64 {
        let a = (self.y as f64).atan2(self.x as f64);
        if a < 0.0 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    }

    pub fn to_f64(self) -> [f64; 2] {
        [self.x as f64, self.y as f64]
    }

    fn half(self) -> u8 {
        if self.y > 0 || (self.y == 0 && self.x > 0) {
            0
        } else {
            1
        }
    }
}

pub fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

/// Counterclockwise order of directions in [0, 2π), exact.
pub fn angular_cmp(a: LatticeVector, b: LatticeVector) -> Ordering {
    a.half().cmp(&b.half()).then_with(|| 0.cmp(&a.cross(b)))
}

/// True when `v` lies in the closed cone spanned by `a` then `b` (counterclockwise, angle < π).
pub fn in_closed_cone(v: LatticeVector, a: LatticeVector, b: LatticeVector) -> bool {
    a.cross(v) >= 0 && v.cross(b) >= 0
}

/// True when `v` lies in the open cone spanned by `a` then `b`.
pub fn in_open_cone(v: LatticeVector, a: LatticeVector, b: LatticeVector) -> bool {
    a.cross(v) > 0 && v.cross(b) > 0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeId {
    Origin,
    Ray(usize),
    Maximal(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub id: ConeId,
    pub generators: Vec<LatticeVector>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    rays: Vec<LatticeVector>,
}

impl Fan {
    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> LatticeVector {
        self.rays[i % self.rays.len()]
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn n_maximal(&self) -> usize {
        self.rays.len()
    }

    /// Boundary rays of maximal cone `i`, counterclockwise.
    pub fn cone_rays(&self, i: usize) -> (LatticeVector, LatticeVector) {
        (self.ray(i), self.ray(i + 1))
    }

    pub fn maximal_cone(&self, i: usize) -> Result<Cone> {
        if i >= self.n_maximal() {
            return Err(Error::NonMaximalCone(i));
        }
        let (a, b) = self.cone_rays(i);
        Ok(Cone { id: ConeId::Maximal(i), generators: vec![a, b] })
    }

    /// Every cone: origin, rays, maximal cones.
    pub fn cones(&self) -> Vec<Cone> {
        let mut out = vec![Cone { id: ConeId::Origin, generators: vec![] }];
        out.extend(
            self.rays
                .iter()
                .enumerate()
                .map(|(i, &r)| Cone { id: ConeId::Ray(i), generators: vec![r] }),
        );
        out.extend((0..self.n_maximal()).map(|i| self.maximal_cone(i).unwrap()));
        out
    }

    /// Index of the maximal cone containing direction `v` (first match for boundary directions).
    pub fn cone_containing(&self, v: LatticeVector) -> usize {
        (0..self.n_maximal())
            .find(|&i| {
                let (a, b) = self.cone_rays(i);
                in_closed_cone(v, a, b)
            })
            .expect("complete fan covers every direction")
    }

    pub fn ray_index(&self, v: LatticeVector) -> Option<usize> {
        self.rays.iter().position(|&r| r == v)
    }

    /// Multiplicity of maximal cone `i` (1 for smooth cones).
    pub fn cone_index(&self, i: usize) -> i64 {
        let (a, b) = self.cone_rays(i);
        a.cross(b)
    }

    pub fn standard_p2() -> Fan {
        build_fan(&[
            LatticeVector::new(1, 0),
            LatticeVector::new(0, 1),
            LatticeVector::new(-1, -1),
        ])
        .unwrap()
    }

    pub fn is_standard_p2(&self) -> bool {
        *self == Fan::standard_p2()
    }
}

/// Sort, check primitivity and completeness, and form the maximal cones.
pub fn build_fan(rays: &[LatticeVector]) -> Result<Fan> {
    for r in rays {
        if r.is_zero() || !r.is_primitive() {
            return Err(Error::NonPrimitiveRay(r.x, r.y));
        }
    }
    if rays.len() < 3 {
        return Err(Error::NotComplete(format!("{} rays cannot span a complete fan", rays.len())));
    }
    let mut sorted = rays.to_vec();
    sorted.sort_by(|a, b| angular_cmp(*a, *b));
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::NotComplete(format!("ray {} repeated", w[0])));
        }
    }
    let n = sorted.len();
    for i in 0..n {
        let a = sorted[i];
        let b = sorted[(i + 1) % n];
        if a.cross(b) <= 0 {
            return Err(Error::NotComplete(format!("rays {a} and {b} span a sector of angle at least π")));
        }
    }
    Ok(Fan { rays: sorted })
}

/// D = Σ k_ρ D_ρ, indexed by ray.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ToricDivisor {
    pub coefficients: Vec<i64>,
}

impl ToricDivisor {
    pub fn zero(fan: &Fan) -> Self {
        ToricDivisor { coefficients: vec![0; fan.n_rays()] }
    }

    pub fn prime(fan: &Fan, ray: usize) -> Self {
        let mut d = Self::zero(fan);
        d.coefficients[ray] = 1;
        d
    }

    pub fn new(coefficients: Vec<i64>) -> Self {
        ToricDivisor { coefficients }
    }

    pub fn coeff(&self, ray: usize) -> i64 {
        self.coefficients.get(ray).copied().unwrap_or(0)
    }

    pub fn add(&self, o: &ToricDivisor) -> ToricDivisor {
        let n = self.coefficients.len().max(o.coefficients.len());
        ToricDivisor { coefficients: (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect() }
    }

    pub fn scale(&self, k: i64) -> ToricDivisor {
        ToricDivisor { coefficients: self.coefficients.iter().map(|c| c * k).collect() }
    }
}

/// Slope m_D(σ) of the support function of O(D) on maximal cone `sigma`,
/// normalised by ⟨m_D(σ), v_ρ⟩ = −k_ρ for both rays of σ.
pub fn divisor_character(fan: &Fan, d: &ToricDivisor, sigma: usize) -> Result<LatticeVector> {
    if sigma >= fan.n_maximal() {
        return Err(Error::NonMaximalCone(sigma));
    }
    let (a, b) = fan.cone_rays(sigma);
    let ka = -d.coeff(sigma);
    let kb = -d.coeff((sigma + 1) % fan.n_rays());
    let det = a.cross(b);
    // Cramer on [a; b] m = (ka, kb).
    let mx = ka * b.y - kb * a.y;
    let my = a.x * kb - b.x * ka;
    if mx % det != 0 || my % det != 0 {
        return Err(Error::NonIntegralCharacter(sigma));
    }
    Ok(LatticeVector::new(mx / det, my / det))
}

/// Affine span carried by a stratum: a point, a line with primitive direction, or the whole plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Span {
    Point,
    Line(LatticeVector),
    Plane,
}

/// (base + τ^⊥ [+ M]) × (−τ).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub cone: ConeId,
    pub base: LatticeVector,
    pub span: Span,
    /// True when every lattice translate of the span is included.
    pub lattice_translates: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicalLagrangian {
    pub strata: Vec<Stratum>,
}

pub(crate) fn orthogonal_span(fan: &Fan, cone: ConeId) -> Span {
    match cone {
        ConeId::Origin => Span::Plane,
        ConeId::Ray(i) => Span::Line(fan.ray(i).perp()),
        ConeId::Maximal(_) => Span::Point,
    }
}

/// Λ_Σ: one stratum family per cone.
pub fn conical_lagrangian(fan: &Fan) -> ConicalLagrangian {
    let strata = fan
        .cones()
        .into_iter()
        .map(|c| Stratum {
            cone: c.id,
            base: LatticeVector::ZERO,
            span: orthogonal_span(fan, c.id),
            lattice_translates: true,
        })
        .collect();
    ConicalLagrangian { strata }
}
