//! Independent checks on the classifier: right-half-plane root counts by the
//! argument principle, and single-root continuation in τ.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::charfn::{char_fn, char_fn_derivative, char_fn_tau_derivative, Complex, SystemParams};
use crate::error::{Error, Result};

/// Smallest `|F|` tolerated on the contour.
pub const CONTOUR_MIN_MODULUS: f64 = 1e-4;
/// Largest allowed distance of the winding number from an integer.
pub const WINDING_TOL: f64 = 1e-2;
/// Default indent radius around the branch point.
pub const DEFAULT_INDENT: f64 = 1e-6;

const MAX_PHASE_STEP: f64 = FRAC_PI_2 * 0.5;
const MAX_SUBDIVISIONS: usize = 4_000_000;

/// Boundary of `{Re λ > 0, indent < |λ| < radius}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub radius: f64,
    pub indent: f64,
    /// Initial samples per arc or segment, refined adaptively.
    pub samples: usize,
}

impl ContourSpec {
    /// A contour enclosing every right-half-plane root of `F(·, τ)`.
    ///
    /// The radius makes `|λ^α + cλ^{2α}| > |a| + |b|` on and beyond the arc;
    /// the indent is shrunk until `|F(λ) − F(0)| < |F(0)|/2` inside it.
    pub fn for_params(params: &SystemParams, tau: f64) -> Self {
        let (al, c) = (params.alpha(), params.c().abs());
        let k = params.a().abs() + params.b().abs();
        let from_guide = 2.0 * (1.0 + k / c.min(1.0)).powf(1.0 / al);
        let u = (1.0 + (1.0 + 4.0 * c * k).sqrt()) / (2.0 * c);
        let from_bound = 1.5 * u.powf(1.0 / al);
        let radius = from_guide.max(from_bound).max(2.0);

        let f0 = params.a1().abs();
        let bound = |e: f64| e.powf(al) + c * e.powf(2.0 * al) + params.b().abs() * tau * e * (e * tau).exp();
        let mut indent = DEFAULT_INDENT;
        if f0 > 0.0 {
            while bound(indent) >= 0.5 * f0 && indent > 1e-280 {
                indent *= 1e-3;
            }
        }
        ContourSpec { radius, indent, samples: 1000 }
    }

    fn validate(&self) -> Result<()> {
        if !(self.radius > self.indent && self.indent > 0.0 && self.radius.is_finite()) {
            return Err(Error::ContourFailure(format!(
                "need radius > indent > 0, got radius={} indent={}",
                self.radius, self.indent
            )));
        }
        if self.samples < 1000 {
            return Err(Error::ContourFailure(format!("need ≥ 1000 samples, got {}", self.samples)));
        }
        Ok(())
    }
}

/// Accumulated phase of `f` along a parametrised path, with adaptive refinement.
struct PhaseTrace {
    delta: f64,
    min_modulus: f64,
}

fn trace_phase<F: Fn(f64) -> Complex>(f: F, t0: f64, t1: f64, n: usize) -> Result<PhaseTrace> {
    let mut delta = 0.0;
    let mut min_modulus = f64::INFINITY;
    let mut budget = MAX_SUBDIVISIONS;
    let step = |u: Complex, v: Complex| (v / u).arg();
    for i in 0..n {
        let a = t0 + (t1 - t0) * i as f64 / n as f64;
        let b = t0 + (t1 - t0) * (i + 1) as f64 / n as f64;
        let mut stack = vec![(a, f(a), b, f(b))];
        while let Some((ta, fa, tb, fb)) = stack.pop() {
            min_modulus = min_modulus.min(fa.norm()).min(fb.norm());
            let tm = 0.5 * (ta + tb);
            let fm = f(tm);
            let (d1, d2, d) = (step(fa, fm), step(fm, fb), step(fa, fb));
            let fine = d1.abs() < MAX_PHASE_STEP && d2.abs() < MAX_PHASE_STEP && (d1 + d2 - d).abs() < 1e-9;
            if fine {
                min_modulus = min_modulus.min(fm.norm());
                delta += d1 + d2;
                continue;
            }
            if budget == 0 || tb - ta <= 1e-14 * (ta.abs() + tb.abs()).max(1e-300) {
                return Err(Error::ContourFailure(format!(
                    "phase could not be resolved near parameter {tm}"
                )));
            }
            budget -= 1;
            // right half first so the left half is popped (and summed) first
            stack.push((tm, fm, tb, fb));
            stack.push((ta, fa, tm, fm));
        }
    }
    Ok(PhaseTrace { delta, min_modulus })
}

/// Raw winding number along the contour, and the smallest `|F|` met on it.
///
/// Conjugate symmetry `F(λ̄) = F(λ)̄` means the lower half contributes the
/// same phase change as the upper half, so only the upper half is traced:
/// arc `R·e^{iθ}` for θ from 0 to π/2, the imaginary axis from `iR` down to `iε`,
/// and the indent `ε·e^{iθ}` from π/2 back to 0.
pub fn winding_number(params: &SystemParams, tau: f64, contour: &ContourSpec) -> Result<(f64, f64)> {
    contour.validate()?;
    let (r, e, n) = (contour.radius, contour.indent, contour.samples);
    let f = |l: Complex| char_fn(l, params, tau);

    let arc = trace_phase(|t| f(Complex::from_polar(r, t)), 0.0, FRAC_PI_2, n)?;
    // imaginary axis: uniform on [1, R], geometric on [ε, 1]
    let (hi, lo) = if r > 1.0 && e < 1.0 {
        let hi = trace_phase(|w| f(Complex::new(0.0, r + 1.0 - w)), 1.0, r, n.max((r * tau.max(1.0)) as usize))?;
        let lo = trace_phase(|s| f(Complex::new(0.0, (-s).exp())), 0.0, -e.ln(), n)?;
        (hi, lo)
    } else {
        let one = trace_phase(|w| f(Complex::new(0.0, r + e - w)), e, r, n)?;
        (one, PhaseTrace { delta: 0.0, min_modulus: f64::INFINITY })
    };
    let indent = trace_phase(|t| f(Complex::from_polar(e, FRAC_PI_2 - t)), 0.0, FRAC_PI_2, n)?;

    let delta = arc.delta + hi.delta + lo.delta + indent.delta;
    let min_modulus = arc.min_modulus.min(hi.min_modulus).min(lo.min_modulus).min(indent.min_modulus);
    Ok((2.0 * delta / (2.0 * PI), min_modulus))
}

fn integral_count(params: &SystemParams, tau: f64, contour: &ContourSpec) -> Result<u32> {
    let (w, min_modulus) = winding_number(params, tau, contour)?;
    if min_modulus < CONTOUR_MIN_MODULUS {
        return Err(Error::ContourFailure(format!(
            "|F| = {min_modulus:e} on the contour; a root lies on or near it"
        )));
    }
    let k = w.round();
    if (w - k).abs() > WINDING_TOL || k < 0.0 {
        return Err(Error::ContourFailure(format!("winding number {w} is not integral")));
    }
    Ok(k as u32)
}

/// Number of roots of `F(·, τ)` with `Re λ > 0`.
///
/// The count is repeated with doubled radius and samples; disagreement is an
/// error. Fails when `F(0) = 0`, since the branch point is then a root.
///
/// ```
/// use fdde::{oracle::{count_rhp_roots, ContourSpec}, SystemParams};
/// let p = SystemParams::new(0.3, 1.7, 1.0, -0.4).unwrap();
/// let n = |tau| count_rhp_roots(&p, tau, &ContourSpec::for_params(&p, tau)).unwrap();
/// assert_eq!(n(0.1), 0);
/// assert_eq!(n(0.3), 2);
/// ```
pub fn count_rhp_roots(params: &SystemParams, tau: f64, contour: &ContourSpec) -> Result<u32> {
    if params.a1() == 0.0 {
        return Err(Error::Domain("F(0) = 0: the branch point is a root".into()));
    }
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::Domain(format!("tau must be non-negative, got {tau}")));
    }
    let first = match integral_count(params, tau, contour) {
        Ok(k) => k,
        // near-miss on the arc only: nudge the radius and retry
        Err(Error::ContourFailure(_)) => {
            let nudged = ContourSpec { radius: contour.radius * 1.37, ..*contour };
            integral_count(params, tau, &nudged)?
        }
        Err(e) => return Err(e),
    };
    let check = ContourSpec { radius: 2.0 * contour.radius, samples: 2 * contour.samples, ..*contour };
    let second = integral_count(params, tau, &check)?;
    if first != second {
        return Err(Error::ContourFailure(format!(
            "count changed from {first} to {second} when the contour was doubled"
        )));
    }
    Ok(first)
}

/// `(τ, λ)` samples along a continued root.
pub type RootPath = Vec<(f64, Complex)>;

fn newton(params: &SystemParams, tau: f64, mut l: Complex) -> Option<Complex> {
    for _ in 0..40 {
        let f = char_fn(l, params, tau);
        let d = char_fn_derivative(l, params, tau);
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        let dl = f / d;
        l -= dl;
        if !l.is_finite() || l.norm() < 1e-12 {
            return None;
        }
        if dl.norm() <= 1e-13 * (1.0 + l.norm()) {
            return (char_fn(l, params, tau).norm() < 1e-8).then_some(l);
        }
    }
    None
}

/// Follow one root of `F(·, τ)` from `tau_from` to `tau_to` in `steps`
/// equal steps, with an Euler predictor and Newton corrector. Steps that
/// fail to converge are halved, down to `2⁻²⁰` of the nominal step.
///
/// ```
/// use fdde::{crossings::crossing_roots, oracle::newton_track_root, Complex, SystemParams};
/// let p = SystemParams::new(0.3, 1.7, 1.0, -0.4).unwrap();
/// let root = crossing_roots(&p).unwrap().into_iter().last().unwrap();
/// let t0 = root.ladder.first;
/// let path = newton_track_root(&p, Complex::new(0.0, root.v), t0, t0 + 0.05, 50).unwrap();
/// assert!(path.last().unwrap().1.re > 0.0);
/// ```
pub fn newton_track_root(
    params: &SystemParams,
    root_guess: Complex,
    tau_from: f64,
    tau_to: f64,
    steps: usize,
) -> Result<RootPath> {
    let r = char_fn(root_guess, params, tau_from).norm();
    if !(r < 1e-6) {
        return Err(Error::StaleRoot { w: root_guess.im, residual: r });
    }
    if steps == 0 {
        return Err(Error::InvalidSpec("steps must be positive".into()));
    }
    let nominal = (tau_to - tau_from) / steps as f64;
    let min_step = nominal.abs() * 2f64.powi(-20);
    let mut path = Vec::with_capacity(steps + 1);
    let mut l = root_guess;
    let mut tau = tau_from;
    path.push((tau, l));
    for k in 1..=steps {
        let target = tau_from + nominal * k as f64;
        let mut h = target - tau;
        while (target - tau).abs() > 1e-15 * target.abs().max(1.0) {
            let t_next = if (target - tau).abs() <= h.abs() { target } else { tau + h };
            let slope = -char_fn_tau_derivative(l, params, tau) / char_fn_derivative(l, params, tau);
            let guess = l + slope * (t_next - tau);
            match newton(params, t_next, guess) {
                Some(next) if (next - guess).norm() <= 0.5 * (1.0 + l.norm()) => {
                    l = next;
                    tau = t_next;
                    h = target - tau;
                }
                _ => {
                    h *= 0.5;
                    if h.abs() < min_step {
                        return Err(Error::TrackingLost { tau });
                    }
                }
            }
        }
        path.push((target, l));
    }
    Ok(path)
}
