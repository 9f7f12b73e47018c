//! The undelayed system `D^α x + c·D^{2α} x = a1·x`.
//!
//! With `s = λ^α` the characteristic equation becomes the quadratic
//! `s² + s/c − a1/c = 0`. A root `s` contributes a right half-plane `λ`
//! exactly when `|arg s| < απ/2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::charfn::{Complex, SystemParams};
use crate::error::{Error, Result};

/// Angular tolerance used to flag roots on the sector boundary.
pub const SECTOR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Tau0Verdict {
    Stable,
    Unstable,
    Marginal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NondelayedResult {
    pub verdict: Tau0Verdict,
    pub s_roots: [Complex; 2],
    /// Number of `s` roots with `|arg s| < απ/2`.
    pub rhp_count: u32,
    /// Algebraic decay rate of solutions, `t^{−γ}`, when stable.
    pub decay_exponent: Option<f64>,
}

/// Roots of `s² + s/c − a1/c`, ordered as `(−1 ± √(1 + 4·a1·c)) / (2c)`.
///
/// ```
/// use fdde::nondelayed::quadratic_roots;
/// let [s1, s2] = quadratic_roots(2.0, 1.0).unwrap();
/// assert!((s1.re - 1.0).abs() < 1e-15 && (s2.re + 2.0).abs() < 1e-15);
/// ```
pub fn quadratic_roots(a1: f64, c: f64) -> Result<[Complex; 2]> {
    if c == 0.0 || !c.is_finite() || !a1.is_finite() {
        return Err(Error::Domain(format!("quadratic undefined for a1 = {a1}, c = {c}")));
    }
    let disc = 1.0 + 4.0 * a1 * c;
    if disc >= 0.0 {
        let r = disc.sqrt();
        // (−1 + r)/(2c) rewritten as 2·a1/(1 + r) to avoid cancellation
        let s1 = 2.0 * a1 / (1.0 + r);
        let s2 = (-1.0 - r) / (2.0 * c);
        Ok([Complex::new(s1, 0.0), Complex::new(s2, 0.0)])
    } else {
        let q = (-disc).sqrt() / (2.0 * c);
        let re = -1.0 / (2.0 * c);
        Ok([Complex::new(re, q), Complex::new(re, -q)])
    }
}

/// Stability of the `τ = 0` system and its right half-plane root count.
///
/// ```
/// use fdde::{nondelayed::{classify_tau0, Tau0Verdict}, SystemParams};
/// let p = SystemParams::new(0.3, -6.0, 1.0, 1.0).unwrap();
/// assert_eq!(classify_tau0(&p).verdict, Tau0Verdict::Stable);
/// ```
pub fn classify_tau0(params: &SystemParams) -> NondelayedResult {
    let alpha = params.alpha();
    // c ≠ 0 and finite inputs are guaranteed by SystemParams
    let s_roots = quadratic_roots(params.a1(), params.c()).expect("validated parameters");
    let edge = alpha * PI / 2.0;
    let mut marginal = false;
    let mut rhp = 0;
    for s in &s_roots {
        if s.norm() == 0.0 {
            marginal = true;
            continue;
        }
        let ang = s.im.atan2(s.re).abs();
        if (ang - edge).abs() <= SECTOR_TOL {
            marginal = true;
        } else if ang < edge {
            rhp += 1;
        }
    }
    let verdict = if marginal {
        Tau0Verdict::Marginal
    } else if rhp == 0 {
        Tau0Verdict::Stable
    } else {
        Tau0Verdict::Unstable
    };
    let decay_exponent = (verdict == Tau0Verdict::Stable)
        .then_some(if alpha <= 0.5 { alpha } else { 2.0 * alpha - 1.0 });
    NondelayedResult { verdict, s_roots, rhp_count: rhp, decay_exponent }
}

/// `Γ1`: the discriminant curve `a1·c = −1/4`.
pub fn gamma1_boundary(c: f64) -> Result<f64> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::Domain("Γ1 requires c ≠ 0".into()));
    }
    Ok(-0.25 / c)
}

/// `Γ2`: `a1 = (−tan²(απ/2) − 1) / (4c)`, the `τ = 0` stability boundary for `c < 0`.
///
/// ```
/// let a1 = fdde::nondelayed::gamma2_boundary(-0.4, 0.3).unwrap();
/// assert!((a1 - 0.78726).abs() < 1e-5);
/// ```
pub fn gamma2_boundary(c: f64, alpha: f64) -> Result<f64> {
    if !(c < 0.0) {
        return Err(Error::Domain(format!("Γ2 is defined for c < 0, got c = {c}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha = {alpha} outside (0, 1)")));
    }
    let t = (alpha * PI / 2.0).tan();
    Ok((-t * t - 1.0) / (4.0 * c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64, a1: f64, c: f64) -> SystemParams {
        SystemParams::from_a1(alpha, a1, 0.0, c).unwrap()
    }

    #[test]
    fn root_order_matches_formula() {
        let [s1, s2] = quadratic_roots(0.0, 1.0).unwrap();
        assert_eq!(s1, Complex::new(0.0, 0.0));
        assert!((s2.re + 1.0).abs() < 1e-15);
        let [z1, z2] = quadratic_roots(-3.0, 1.0).unwrap();
        assert!(z1.im > 0.0 && z2.im < 0.0);
    }

    #[test]
    fn roots_satisfy_quadratic() {
        for &(a1, c) in &[(1e-12, 3.0), (-2.0, -0.7), (5.0, 0.1), (-0.3, 2.0)] {
            for s in quadratic_roots(a1, c).unwrap() {
                let r = c * s * s + s - a1;
                assert!(r.norm() < 1e-12 * (1.0 + a1.abs() + s.norm()), "{r}");
            }
        }
    }

    #[test]
    fn zero_a1_is_marginal() {
        assert_eq!(classify_tau0(&params(0.5, 0.0, -1.0)).verdict, Tau0Verdict::Marginal);
    }

    #[test]
    fn left_of_gamma2_is_unstable_with_two_roots() {
        let c = -0.4;
        let g2 = gamma2_boundary(c, 0.3).unwrap();
        let left = classify_tau0(&params(0.3, g2 - 0.05, c));
        let right = classify_tau0(&params(0.3, g2 + 0.05, c));
        assert_eq!(left.verdict, Tau0Verdict::Unstable);
        assert_eq!(left.rhp_count, 2);
        assert_eq!(right.verdict, Tau0Verdict::Stable);
    }

    #[test]
    fn positive_a1_gives_one_root() {
        let r = classify_tau0(&params(0.7, 1.0, 2.0));
        assert_eq!(r.verdict, Tau0Verdict::Unstable);
        assert_eq!(r.rhp_count, 1);
    }

    #[test]
    fn decay_exponent_switches_at_half() {
        assert_eq!(classify_tau0(&params(0.3, -1.0, 1.0)).decay_exponent, Some(0.3));
        let g = classify_tau0(&params(0.8, -1.0, 1.0)).decay_exponent.unwrap();
        assert!((g - 0.6).abs() < 1e-15);
    }

    #[test]
    fn gamma2_rejects_positive_c() {
        assert!(gamma2_boundary(0.3, 0.5).is_err());
    }
}
