//! C^∞ cutoff profiles.

/// Smooth step: 0 for t ≤ 0, 1 for t ≥ 1, built from exp(−1/t).
pub fn smoothstep(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

/// Bump equal to 1 on |u| ≤ δ/2 and 0 on |u| ≥ δ.
pub fn bump(u: f64, delta: f64) -> f64 {
    smoothstep((delta - u.abs()) / (0.5 * delta))
}

/// χ: 0 on [0, R + ε], 1 on [R + 1, ∞).
pub fn chi(r: f64, big_r: f64, eps: f64) -> f64 {
    smoothstep((r - big_r - eps) / (1.0 - eps))
}

/// Blend for the ρ-map: 0 on [0, R], 1 on [R + ε, ∞).
pub fn rho_blend(r: f64, big_r: f64, eps: f64) -> f64 {
    smoothstep((r - big_r) / eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles() {
        assert_eq!(bump(0.0, 0.2), 1.0);
        assert_eq!(bump(0.1, 0.2), 1.0);
        assert_eq!(bump(0.2, 0.2), 0.0);
        assert!(bump(0.15, 0.2) > 0.0 && bump(0.15, 0.2) < 1.0);
        assert_eq!(chi(10.1, 10.0, 0.1), 0.0);
        assert_eq!(chi(11.0, 10.0, 0.1), 1.0);
        assert_eq!(rho_blend(10.0, 10.0, 0.1), 0.0);
        assert_eq!(rho_blend(10.1, 10.0, 0.1), 1.0);
        assert!((smoothstep(0.5) - 0.5).abs() < 1e-15);
    }
}
