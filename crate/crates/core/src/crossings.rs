//! Imaginary-axis crossings of the characteristic roots.
//!
//! A root `λ = iv` exists for some `τ` iff `|P(iv)| = 1`. Writing
//! `w = v^α`, that condition is the quartic
//!
//! ```text
//! c²w⁴ + 2c·cos(απ/2)·w³ + (1 − 2ac·cos απ)·w² − 2a·cos(απ/2)·w + (a² − b²) = 0
//! ```
//!
//! and each positive root `w` produces the delay ladder
//! `τ_n = (θ + 2πn) / v`, where `(cos θ, sin θ) = P(iv)`.

use std::f64::consts::{PI, TAU};

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::charfn::{Complex, SystemParams};
use crate::error::{Error, Result};

/// Tolerance on `C² + S² − 1` for a root to be accepted.
pub const CIRCLE_TOL: f64 = 1e-6;
/// A root with `|Im w| < IMAG_TOL·(1 + |w|)` is real.
pub const IMAG_TOL: f64 = 1e-8;
/// A real root with `w > POSITIVE_TOL` is positive.
pub const POSITIVE_TOL: f64 = 1e-10;
/// Relative size below which the transversality value counts as zero.
pub const DEGENERATE_TOL: f64 = 1e-9;

/// Direction in which a root pair crosses the imaginary axis as `τ` increases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Transversality {
    /// Left to right; adds two roots to the right half-plane.
    Destabilizing,
    /// Right to left.
    Stabilizing,
    /// Double root of the quartic; the crossing is tangential.
    Degenerate,
}

impl Transversality {
    /// Change of the right half-plane count at one crossing.
    pub fn count_step(self) -> i64 {
        match self {
            Transversality::Destabilizing => 2,
            Transversality::Stabilizing => -2,
            Transversality::Degenerate => 0,
        }
    }
}

/// The arithmetic progression of critical delays of one crossing frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayLadder {
    pub first: f64,
    pub period: f64,
}

impl DelayLadder {
    pub fn tau_n(&self, n: u64) -> f64 {
        self.first + self.period * n as f64
    }

    /// Entries `τ_n ≤ tau_max`.
    pub fn up_to(&self, tau_max: f64) -> Vec<f64> {
        (0..).map(|n| self.tau_n(n)).take_while(|&t| t <= tau_max).collect()
    }

    /// Number of entries `τ_n < tau`.
    pub fn count_below(&self, tau: f64) -> u64 {
        if tau <= self.first {
            return 0;
        }
        ((tau - self.first) / self.period).ceil() as u64
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        (0..).map(|n| self.tau_n(n))
    }
}

/// One positive quartic root together with everything derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingRoot {
    /// `v^α`.
    pub w: f64,
    /// Crossing frequency.
    pub v: f64,
    /// Crossing angle in `[0, 2π)`.
    pub theta: f64,
    pub transversality: Transversality,
    /// Raw value whose sign gives the transversality.
    pub transversality_value: f64,
    pub ladder: DelayLadder,
}

/// Coefficients of the crossing quartic, constant term first.
pub fn quartic_coefficients(params: &SystemParams) -> [f64; 5] {
    let (al, a, b, c) = (params.alpha(), params.a(), params.b(), params.c());
    let ch = (al * PI / 2.0).cos();
    let cf = (al * PI).cos();
    [a * a - b * b, -2.0 * a * ch, 1.0 - 2.0 * a * c * cf, 2.0 * c * ch, c * c]
}

fn horner(coef: &[f64; 5], z: Complex) -> (Complex, Complex) {
    let mut p = Complex::new(coef[4], 0.0);
    let mut dp = Complex::new(0.0, 0.0);
    for k in (0..4).rev() {
        dp = dp * z + p;
        p = p * z + coef[k];
    }
    (p, dp)
}

/// All four complex roots, from companion-matrix eigenvalues polished by Newton.
pub fn quartic_all_roots(params: &SystemParams) -> [Complex; 4] {
    let coef = quartic_coefficients(params);
    let lead = coef[4];
    // rescale w = k·u so the monic coefficients are of comparable size
    let k = (0..4)
        .map(|i| (coef[i] / lead).abs().powf(1.0 / (4 - i) as f64))
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let m: Vec<f64> = (0..4).map(|i| coef[i] / lead / k.powi((4 - i) as i32)).collect();
    #[rustfmt::skip]
    let comp = Matrix4::new(
        0.0, 0.0, 0.0, -m[0],
        1.0, 0.0, 0.0, -m[1],
        0.0, 1.0, 0.0, -m[2],
        0.0, 0.0, 1.0, -m[3],
    );
    let eig = comp.complex_eigenvalues();
    let mut out = [Complex::new(0.0, 0.0); 4];
    for (slot, e) in out.iter_mut().zip(eig.iter()) {
        *slot = polish(&coef, *e * k);
    }
    out
}

fn polish(coef: &[f64; 5], mut z: Complex) -> Complex {
    let (mut fz, _) = horner(coef, z);
    for _ in 0..12 {
        let (_, dp) = horner(coef, z);
        if dp.norm() == 0.0 {
            break;
        }
        let cand = z - fz / dp;
        let (fc, _) = horner(coef, cand);
        if !(fc.norm() < fz.norm()) {
            break;
        }
        z = cand;
        fz = fc;
        if fz.norm() == 0.0 {
            break;
        }
    }
    z
}

/// Positive real roots `w` of the crossing quartic, ascending and deduplicated.
///
/// ```
/// use fdde::{crossings::quartic_positive_roots, SystemParams};
/// let p = SystemParams::new(0.3, 1.7, 1.0, -0.4).unwrap();
/// let w = quartic_positive_roots(&p);
/// assert_eq!(w.len(), 2);
/// assert!((w[0] - 1.12581).abs() < 1e-5 && (w[1] - 2.12454).abs() < 1e-5);
/// ```
pub fn quartic_positive_roots(params: &SystemParams) -> Vec<f64> {
    let mut ws: Vec<f64> = quartic_all_roots(params)
        .iter()
        .filter(|z| z.im.abs() < IMAG_TOL * (1.0 + z.norm()) && z.re > POSITIVE_TOL)
        .map(|z| z.re)
        .collect();
    ws.sort_by(f64::total_cmp);
    ws.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * (1.0 + y.abs()));
    ws
}

/// Value of `P(iv)` at `w = v^α`, as `(C, S)`.
pub fn boundary_point(w: f64, params: &SystemParams) -> Result<(f64, f64)> {
    let (al, a, b, c) = (params.alpha(), params.a(), params.b(), params.c());
    if b == 0.0 {
        return Err(Error::DegenerateSystem);
    }
    let (h, f) = (al * PI / 2.0, al * PI);
    let cc = (w * h.cos() + c * w * w * f.cos() - a) / b;
    let ss = -(w * h.sin() + c * w * w * f.sin()) / b;
    Ok((cc, ss))
}

/// Crossing angle `θ ∈ [0, 2π)` with `cos θ = C`, `sin θ = S`.
pub fn crossing_angle(w: f64, params: &SystemParams) -> Result<f64> {
    let (cc, ss) = boundary_point(w, params)?;
    let residual = cc * cc + ss * ss - 1.0;
    if residual.abs() >= CIRCLE_TOL {
        return Err(Error::StaleRoot { w, residual });
    }
    let t = ss.atan2(cc);
    Ok(if t < 0.0 { (t + TAU) % TAU } else { t })
}

/// `w² + 2c²w⁴ − a·w·cos(απ/2) − 2ac·w²·cos απ + 3c·w³·cos(απ/2)`.
///
/// This equals `w·Q'(w)/2` for the crossing quartic `Q`, and its sign is
/// the sign of `Re dλ/dτ` at the crossing.
pub fn transversality_value(w: f64, params: &SystemParams) -> f64 {
    let (al, a, c) = (params.alpha(), params.a(), params.c());
    let ch = (al * PI / 2.0).cos();
    let cf = (al * PI).cos();
    w * w + 2.0 * c * c * w.powi(4) - a * w * ch - 2.0 * a * c * w * w * cf
        + 3.0 * c * w.powi(3) * ch
}

fn transversality_scale(w: f64, params: &SystemParams) -> f64 {
    let (a, c) = (params.a().abs(), params.c().abs());
    w * w + 2.0 * c * c * w.powi(4) + a * w + 2.0 * a * c * w * w + 3.0 * c * w.powi(3)
}

pub fn transversality_sign(w: f64, params: &SystemParams) -> Transversality {
    let t = transversality_value(w, params);
    if t.abs() <= DEGENERATE_TOL * transversality_scale(w, params) {
        Transversality::Degenerate
    } else if t > 0.0 {
        Transversality::Destabilizing
    } else {
        Transversality::Stabilizing
    }
}

/// Every crossing frequency with its angle, direction and delay ladder.
///
/// ```
/// use fdde::{crossings::{crossing_roots, Transversality}, SystemParams};
/// let p = SystemParams::new(0.3, 1.7, 1.0, -0.4).unwrap();
/// let r = crossing_roots(&p).unwrap();
/// assert_eq!(r[0].transversality, Transversality::Stabilizing);
/// assert!((r[1].ladder.first - 0.212729).abs() < 1e-6);
/// ```
pub fn crossing_roots(params: &SystemParams) -> Result<Vec<CrossingRoot>> {
    if params.b() == 0.0 {
        return Err(Error::DegenerateSystem);
    }
    quartic_positive_roots(params)
        .into_iter()
        .map(|w| {
            let v = w.powf(1.0 / params.alpha());
            let theta = crossing_angle(w, params)?;
            Ok(CrossingRoot {
                w,
                v,
                theta,
                transversality: transversality_sign(w, params),
                transversality_value: transversality_value(w, params),
                ladder: DelayLadder { first: theta / v, period: TAU / v },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfn::char_fn;

    fn p(al: f64, a: f64, b: f64, c: f64) -> SystemParams {
        SystemParams::new(al, a, b, c).unwrap()
    }

    #[test]
    fn coefficients_reproduce_modulus_condition() {
        let pr = p(0.45, 2.35, -1.0, -0.3);
        let coef = quartic_coefficients(&pr);
        for w in [0.3, 1.7, 4.2] {
            let (cc, ss) = boundary_point(w, &pr).unwrap();
            let q: f64 = (0..5).map(|k| coef[k] * w.powi(k as i32)).sum();
            // |P(iv)|² − 1 = Q(w)/b²
            assert!((cc * cc + ss * ss - 1.0 - q / (pr.b() * pr.b())).abs() < 1e-12);
        }
    }

    #[test]
    fn ladder_entries_are_roots() {
        let pr = p(0.8, -0.99, -1.0, 2.2);
        for r in crossing_roots(&pr).unwrap() {
            for tau in r.ladder.up_to(1500.0) {
                let f = char_fn(Complex::new(0.0, r.v), &pr, tau);
                assert!(f.norm() < 1e-9, "{f} at {tau}");
            }
        }
    }

    #[test]
    fn ladder_counts() {
        let l = DelayLadder { first: 1.0, period: 2.0 };
        assert_eq!(l.count_below(1.0), 0);
        assert_eq!(l.count_below(1.0 + 1e-12), 1);
        assert_eq!(l.count_below(3.5), 2);
        assert_eq!(l.up_to(5.0), vec![1.0, 3.0, 5.0]);
    }

    #[test]
    fn no_roots_when_b_vanishes() {
        assert_eq!(crossing_roots(&p(0.5, 1.0, 0.0, 1.0)), Err(Error::DegenerateSystem));
    }
}
