//! Time-domain solution by a fractional Adams–Bashforth–Moulton scheme.
//!
//! The equation is integrated as the pair of order-α equations
//!
//! ```text
//! D^α y1 = y2
//! D^α y2 = (a·y1 + b·y1(t − τ) − y2) / c
//! ```
//!
//! with constant history `x(t) = x0` for `t ≤ 0` and `y2(0) = y20`. Both
//! predictor and corrector carry the full convolution history, so a run of
//! `N` steps costs `O(N²)`.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::charfn::SystemParams;
use crate::error::{Error, Result};

/// Magnitude beyond which a run is stopped and reported as growing.
pub const OVERFLOW_LIMIT: f64 = 1e150;
/// Fewest samples from which a verdict is drawn.
pub const MIN_VERDICT_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IvpSpec {
    pub params: SystemParams,
    pub tau: f64,
    /// Constant history `x(t)` for `t ≤ 0`.
    pub x0: f64,
    /// Initial value of `D^α x`.
    pub y20: f64,
    pub t_end: f64,
    pub step: f64,
}

impl IvpSpec {
    /// Spec with the default step for `tau`, `x0 = 1` and `y20 = 0`.
    ///
    /// ```
    /// use fdde::{integrator::IvpSpec, SystemParams};
    /// let p = SystemParams::new(0.4, -9.0, 4.0, 4.0).unwrap();
    /// let s = IvpSpec::new(p, 0.17, 50.0);
    /// assert!(s.step <= 0.01);
    /// assert!(((s.tau / s.step) - (s.tau / s.step).round()).abs() < 1e-9);
    /// ```
    pub fn new(params: SystemParams, tau: f64, t_end: f64) -> Self {
        IvpSpec { params, tau, x0: 1.0, y20: 0.0, t_end, step: default_step(tau) }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn with_initial(mut self, x0: f64, y20: f64) -> Self {
        self.x0 = x0;
        self.y20 = y20;
        self
    }

    /// Number of steps per delay, if the delay is an integral multiple of the step.
    pub fn delay_steps(&self) -> Result<usize> {
        if self.tau == 0.0 {
            return Ok(0);
        }
        let m = self.tau / self.step;
        let r = m.round();
        if r < 1.0 || (m - r).abs() > 1e-9 * m.max(1.0) {
            return Err(Error::InvalidSpec(format!(
                "tau / step = {m} must be a positive integer"
            )));
        }
        Ok(r as usize)
    }

    fn validate(&self) -> Result<usize> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidSpec(format!("step must be positive, got {}", self.step)));
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidSpec(format!("tau must be non-negative, got {}", self.tau)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidSpec(format!("t_end must be positive, got {}", self.t_end)));
        }
        if !(self.x0.is_finite() && self.y20.is_finite()) {
            return Err(Error::InvalidSpec("initial values must be finite".into()));
        }
        if self.t_end < 10.0 * self.tau {
            return Err(Error::InvalidSpec(format!(
                "t_end = {} is shorter than 10 tau = {}",
                self.t_end,
                10.0 * self.tau
            )));
        }
        self.delay_steps()
    }
}

/// `τ / max(64, ⌈τ / 0.01⌉)`, or `0.005` without delay.
pub fn default_step(tau: f64) -> f64 {
    if tau <= 0.0 {
        return 0.005;
    }
    let m = ((tau / 0.01).ceil() as usize).max(64);
    tau / m as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TimeVerdict {
    Decaying,
    Growing,
    Inconclusive,
}

impl std::fmt::Display for TimeVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TimeVerdict::Decaying => "DECAYING",
            TimeVerdict::Growing => "GROWING",
            TimeVerdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub x_values: Vec<f64>,
    pub verdict: TimeVerdict,
    pub growth_ratio: f64,
    /// Set when the run stopped early on overflow.
    pub overflowed: bool,
}

impl Trajectory {
    /// `t,x` rows followed by a `#` comment with the verdict.
    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(self.times.len() * 24 + 64);
        s += "t,x\n";
        for (t, x) in self.times.iter().zip(&self.x_values) {
            s += &format!("{},{}\n", crate::format::sig(*t, 9), crate::format::sig(*x, 9));
        }
        s += &format!("# verdict={} growth_ratio={}\n", self.verdict, crate::format::sig(self.growth_ratio, 9));
        s
    }
}

/// Integrate the delay equation on `[0, t_end]`.
///
/// ```
/// use fdde::{integrator::{integrate, IvpSpec, TimeVerdict}, SystemParams};
/// let p = SystemParams::new(0.3, -0.3, -10.0, 0.5).unwrap();
/// let run = integrate(&IvpSpec::new(p, 0.04, 10.0)).unwrap();
/// assert_eq!(run.verdict, TimeVerdict::Growing);
/// ```
pub fn integrate(spec: &IvpSpec) -> Result<Trajectory> {
    let m = spec.validate()?;
    let p = &spec.params;
    let (al, a, b, c) = (p.alpha(), p.a(), p.b(), p.c());
    let h = spec.step;
    let n_steps = (spec.t_end / h).round().max(1.0) as usize;

    let ha1 = h.powf(al) / gamma(al + 1.0);
    let ha2 = h.powf(al) / gamma(al + 2.0);
    // weights depend on n − j only
    let pw: Vec<f64> = (0..=n_steps + 1).map(|k| (k as f64).powf(al)).collect();
    let pw1: Vec<f64> = (0..=n_steps + 2).map(|k| (k as f64).powf(al + 1.0)).collect();
    let bw: Vec<f64> = (0..=n_steps).map(|k| pw[k + 1] - pw[k]).collect();
    let aw: Vec<f64> = (0..=n_steps).map(|k| pw1[k + 2] + pw1[k] - 2.0 * pw1[k + 1]).collect();

    let rhs = |y1: f64, y1d: f64, y2: f64| -> (f64, f64) { (y2, (a * y1 + b * y1d - y2) / c) };

    let mut y1 = Vec::with_capacity(n_steps + 1);
    let mut y2 = Vec::with_capacity(n_steps + 1);
    let mut f1 = Vec::with_capacity(n_steps + 1);
    let mut f2 = Vec::with_capacity(n_steps + 1);
    y1.push(spec.x0);
    y2.push(spec.y20);
    let (g1, g2) = rhs(spec.x0, spec.x0, spec.y20);
    f1.push(g1);
    f2.push(g2);

    let mut overflowed = false;
    for n in 0..n_steps {
        // predictor
        let (mut p1, mut p2) = (0.0, 0.0);
        for j in 0..=n {
            let w = bw[n - j];
            p1 += w * f1[j];
            p2 += w * f2[j];
        }
        let y1p = spec.x0 + ha1 * p1;
        let y2p = spec.y20 + ha1 * p2;

        // delayed value at t_{n+1}
        let y1d = if m == 0 {
            y1p
        } else if n + 1 > m {
            y1[n + 1 - m]
        } else {
            spec.x0
        };

        // corrector
        let nf = n as f64;
        let a0 = pw1[n] - (nf - al) * pw[n + 1];
        let (mut s1, mut s2) = (a0 * f1[0], a0 * f2[0]);
        for j in 1..=n {
            let w = aw[n - j];
            s1 += w * f1[j];
            s2 += w * f2[j];
        }
        let (q1, q2) = rhs(y1p, y1d, y2p);
        let v1 = spec.x0 + ha2 * (q1 + s1);
        let v2 = spec.y20 + ha2 * (q2 + s2);
        let y1d_c = if m == 0 { v1 } else { y1d };
        let (r1, r2) = rhs(v1, y1d_c, v2);
        y1.push(v1);
        y2.push(v2);
        f1.push(r1);
        f2.push(r2);
        if !(v1.abs() < OVERFLOW_LIMIT && v2.abs() < OVERFLOW_LIMIT) {
            overflowed = true;
            break;
        }
    }

    let times: Vec<f64> = (0..y1.len()).map(|k| k as f64 * h).collect();
    let (verdict, growth_ratio) = if overflowed {
        (TimeVerdict::Growing, f64::INFINITY)
    } else {
        verdict_from_trajectory(&y1, &times)
    };
    Ok(Trajectory { times, x_values: y1, verdict, growth_ratio, overflowed })
}

/// Ratio of the peak `|x|` over the last 20 % of the horizon to the peak over
/// the 20 % window starting at 40 %; below 0.5 is decaying, above 2 growing.
///
/// ```
/// use fdde::integrator::{verdict_from_trajectory, TimeVerdict};
/// let t: Vec<f64> = (0..200).map(|k| k as f64 * 0.1).collect();
/// let x: Vec<f64> = t.iter().map(|t| (0.5 * t).exp()).collect();
/// assert_eq!(verdict_from_trajectory(&x, &t).0, TimeVerdict::Growing);
/// ```
pub fn verdict_from_trajectory(x_values: &[f64], times: &[f64]) -> (TimeVerdict, f64) {
    let n = x_values.len().min(times.len());
    if n < MIN_VERDICT_SAMPLES {
        return (TimeVerdict::Inconclusive, f64::NAN);
    }
    let (t0, t1) = (times[0], times[n - 1]);
    let span = t1 - t0;
    let peak = |lo: f64, hi: f64| -> f64 {
        (0..n)
            .filter(|&k| times[k] >= lo && times[k] <= hi)
            .map(|k| x_values[k].abs())
            .fold(0.0, f64::max)
    };
    let late = peak(t0 + 0.8 * span, t1);
    let mid = peak(t0 + 0.4 * span, t0 + 0.6 * span);
    let ratio = if mid == 0.0 {
        if late == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        late / mid
    };
    let verdict = if ratio.is_nan() {
        TimeVerdict::Inconclusive
    } else if ratio < 0.5 {
        TimeVerdict::Decaying
    } else if ratio > 2.0 {
        TimeVerdict::Growing
    } else {
        TimeVerdict::Inconclusive
    };
    (verdict, ratio)
}

/// Log–log slope of the running envelope `max_{s ≥ t} |x(s)|` between 40 % and
/// 100 % of the horizon. Stable solutions of this equation decay
/// algebraically, so this is negative for them while the window ratio above
/// stays near `2^{−γ}`.
pub fn tail_exponent(x_values: &[f64], times: &[f64]) -> f64 {
    let n = x_values.len().min(times.len());
    if n < 10 {
        return f64::NAN;
    }
    let mut env = vec![0.0; n];
    let mut run = 0.0f64;
    for k in (0..n).rev() {
        run = run.max(x_values[k].abs());
        env[k] = run;
    }
    let t_end = times[n - 1];
    let pick = |frac: f64| -> (f64, f64) {
        let k = ((n - 1) as f64 * frac) as usize;
        (times[k].max(f64::MIN_POSITIVE), env[k])
    };
    let (ta, ea) = pick(0.4);
    let (tb, eb) = pick(0.9);
    if ea == 0.0 || eb == 0.0 || t_end <= 0.0 {
        return f64::NEG_INFINITY;
    }
    (eb / ea).ln() / (tb / ta).ln()
}

/// Outcome of a step-halving study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    /// Observed order from the finest three runs; `None` if errors were not monotone.
    pub order: Option<f64>,
    /// Order estimates from successive triples, coarse to fine.
    pub estimates: Vec<f64>,
    /// `x(t_end)` for each step size.
    pub endpoints: Vec<f64>,
}

/// Observed order from Richardson ratios on `x(t_end)` under repeated halving.
pub fn convergence_order(spec: &IvpSpec, halvings: usize) -> Result<ConvergenceStudy> {
    if halvings < 3 {
        return Err(Error::InvalidSpec("at least three halvings are needed".into()));
    }
    let mut endpoints = Vec::with_capacity(halvings + 1);
    for k in 0..=halvings {
        let s = spec.with_step(spec.step / 2f64.powi(k as i32));
        let run = integrate(&s)?;
        if run.overflowed {
            return Err(Error::InvalidSpec("solution overflowed during convergence study".into()));
        }
        endpoints.push(*run.x_values.last().expect("nonempty"));
    }
    let diffs: Vec<f64> = endpoints.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let monotone = diffs.windows(2).all(|d| d[1] < d[0]) && diffs.iter().all(|d| *d > 0.0);
    let estimates: Vec<f64> = diffs.windows(2).map(|d| (d[0] / d[1]).log2()).collect();
    let order = monotone.then(|| *estimates.last().expect("at least two estimates"));
    Ok(ConvergenceStudy { order, estimates, endpoints })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(al: f64, a: f64, b: f64, c: f64) -> SystemParams {
        SystemParams::new(al, a, b, c).unwrap()
    }

    #[test]
    fn default_step_divides_delay() {
        for tau in [0.04, 0.17, 1.3, 7.0, 182.0] {
            let h = default_step(tau);
            assert!(h <= 0.01 + 1e-15);
            let m = tau / h;
            assert!((m - m.round()).abs() < 1e-9, "{tau}");
            assert!(m.round() >= 64.0);
        }
        assert_eq!(default_step(0.0), 0.005);
    }

    #[test]
    fn non_integral_delay_rejected() {
        let s = IvpSpec::new(p(0.5, -1.0, 0.5, 1.0), 0.1, 5.0).with_step(0.03);
        assert!(matches!(integrate(&s), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn short_horizon_rejected() {
        let s = IvpSpec::new(p(0.5, -1.0, 0.5, 1.0), 1.0, 5.0);
        assert!(integrate(&s).is_err());
    }

    #[test]
    fn zero_is_fixed_point() {
        let s = IvpSpec::new(p(0.6, -2.0, 1.0, 0.7), 0.5, 10.0).with_initial(0.0, 0.0);
        let run = integrate(&s).unwrap();
        assert!(run.x_values.iter().all(|&x| x == 0.0));
        assert_eq!(run.verdict, TimeVerdict::Decaying);
    }

    #[test]
    fn scales_linearly() {
        let base = IvpSpec::new(p(0.45, 2.35, -1.0, -0.3), 0.2, 4.0);
        let one = integrate(&base).unwrap();
        let two = integrate(&base.with_initial(2.0, 0.0)).unwrap();
        for (u, v) in one.x_values.iter().zip(&two.x_values) {
            assert!((2.0 * u - v).abs() <= 1e-10 * v.abs().max(1e-300));
        }
    }

    #[test]
    fn verdict_edge_cases() {
        let t: Vec<f64> = (0..100).map(|k| k as f64).collect();
        let zero_tail: Vec<f64> = t.iter().map(|&t| if t < 50.0 { 1.0 } else { 0.0 }).collect();
        assert_eq!(verdict_from_trajectory(&zero_tail, &t), (TimeVerdict::Decaying, 0.0));
        let flat = vec![1.0; 100];
        assert_eq!(verdict_from_trajectory(&flat, &t).0, TimeVerdict::Inconclusive);
    }

    #[test]
    fn near_one_matches_damped_oscillator() {
        // α → 1: x' + c x'' = a x, x(0) = 1, x'(0) = 0
        let (a, c) = (-4.0, 1.0);
        let s = IvpSpec::new(p(0.999, a, 0.0, c), 0.0, 3.0).with_step(0.001);
        let run = integrate(&s).unwrap();
        // roots of c r² + r − a = 0
        let disc: f64 = 1.0 - 4.0 * c * (-a);
        let (re, im) = (-1.0 / (2.0 * c), (-disc).sqrt() / (2.0 * c));
        let exact = |t: f64| (re * t).exp() * ((im * t).cos() - re / im * (im * t).sin());
        let k = run.times.len() - 1;
        assert!((run.x_values[k] - exact(run.times[k])).abs() < 2e-2);
    }
}
