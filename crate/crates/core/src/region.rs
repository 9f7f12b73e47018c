//! Bifurcation curves, their intersection constants and labelled plane scans
//! in the `(a1, c)` plane at fixed `(b, α)`.
//!
//! * `Γ1`–`Γ4` have closed forms.
//! * `Γ5`–`Γ10` are double-root loci of the crossing quartic, where a pair of
//!   crossing frequencies is born or annihilated.
//! * `Γ11`–`Γ18` are label transitions of the classifier (`SSR ↔ SS` or
//!   `UNSTABLE_ALL ↔ IS`) located by bisection on `a1`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charfn::SystemParams;
use crate::classifier::{classify, BehaviorLabel};
use crate::crossings::{quartic_all_roots, quartic_positive_roots};
use crate::error::{Error, Result};
use crate::format::sig;
use crate::nondelayed::{gamma1_boundary, gamma2_boundary};

/// Half-open tolerance used when bisecting on `a1` or `c`.
pub const BISECT_TOL: f64 = 1e-11;
/// Offset used to confirm the labels on both sides of a behaviour curve.
pub const VERIFY_OFFSET: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveId(u8);

impl CurveId {
    pub fn new(n: u8) -> Result<Self> {
        if (1..=18).contains(&n) {
            Ok(CurveId(n))
        } else {
            Err(Error::Domain(format!("curves are numbered 1 to 18, got {n}")))
        }
    }

    pub fn number(self) -> u8 {
        self.0
    }

    pub fn method(self) -> CurveMethod {
        match self.0 {
            1..=4 => CurveMethod::ClosedForm,
            5..=10 => CurveMethod::DoubleRootLocus,
            _ => CurveMethod::ClassifierBisection,
        }
    }

    pub fn all() -> impl Iterator<Item = CurveId> {
        (1..=18).map(CurveId)
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gamma{}", self.0)
    }
}

impl FromStr for CurveId {
    type Err = Error;
    /// Accepts `gamma7`, `G7`, `Γ7` or `7`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        let digits = lower
            .strip_prefix("gamma")
            .or_else(|| lower.strip_prefix('g'))
            .or_else(|| t.strip_prefix('Γ'))
            .unwrap_or(&lower);
        let n: u8 = digits
            .parse()
            .map_err(|_| Error::Domain(format!("unrecognised curve `{s}`")))?;
        CurveId::new(n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CurveMethod {
    ClosedForm,
    DoubleRootLocus,
    ClassifierBisection,
}

/// Evenly spaced `c` samples, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CRange {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl CRange {
    pub fn single(c: f64) -> Self {
        CRange { min: c, max: c, n: 1 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.n <= 1 {
            return vec![self.min];
        }
        (0..self.n)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (self.n - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub a1: f64,
    pub c: f64,
    /// Whether the defining condition was re-checked successfully.
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveTrace {
    pub curve_id: CurveId,
    pub b: f64,
    pub alpha: f64,
    pub method: CurveMethod,
    /// Ordered by `c`.
    pub points: Vec<CurvePoint>,
    /// Requested `c` values at which the curve does not exist.
    pub absent: Vec<f64>,
}

impl CurveTrace {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("curve_id,a1,c\n");
        for p in &self.points {
            s += &format!("{},{},{}\n", self.curve_id, sig(p.a1, 9), sig(p.c, 9));
        }
        s
    }
}

/// `a1` search bracket for the numerical curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn default_for(b: f64) -> Self {
        Bracket { lo: -4.0 * b.abs() - 10.0, hi: 4.0 * b.abs() + 10.0 }
    }
}

// ---------------------------------------------------------------------------
// case table

#[derive(Clone, Copy)]
enum Sign {
    Pos,
    Neg,
    Any,
}

impl Sign {
    fn admits(self, x: f64) -> bool {
        match self {
            Sign::Pos => x > 0.0,
            Sign::Neg => x < 0.0,
            Sign::Any => x != 0.0,
        }
    }
}

#[derive(Clone, Copy)]
enum Order {
    Low,
    High,
    Any,
}

impl Order {
    fn admits(self, alpha: f64) -> bool {
        match self {
            Order::Low => alpha < 0.5,
            Order::High => alpha > 0.5,
            Order::Any => true,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    Left,
    Right,
}

/// `(b sign, order, c sign)` for which each numerical curve is defined.
fn case_of(id: CurveId) -> (Sign, Order, Sign) {
    use Order::{High, Low};
    use Sign::{Neg, Pos};
    match id.0 {
        5 | 11 => (Pos, Low, Neg),
        6 | 12 | 13 => (Neg, Low, Neg),
        7 | 14 => (Pos, High, Pos),
        8 | 15 => (Pos, High, Neg),
        9 => (Neg, High, Pos),
        // the same SSR/SS transition also bounds the b > 0 region
        16 => (Sign::Any, High, Pos),
        10 | 17 | 18 => (Neg, High, Neg),
        _ => (Sign::Any, Order::Any, Sign::Any),
    }
}

fn check_case(id: CurveId, b: f64, alpha: f64, c: f64) -> Result<()> {
    let (sb, so, sc) = case_of(id);
    if sb.admits(b) && so.admits(alpha) && sc.admits(c) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{id} is not defined at b = {b}, alpha = {alpha}, c = {c}")))
    }
}

fn tangency_side(id: CurveId) -> Side {
    match id.0 {
        7 | 9 => Side::Left,
        _ => Side::Right,
    }
}

/// Labels `(below, above)` in `a1` on either side of a behaviour curve.
fn behavior_pair(id: CurveId) -> (BehaviorLabel, BehaviorLabel) {
    use BehaviorLabel::*;
    match id.0 {
        13 | 18 => (UnstableAll, Is),
        14 | 16 => (Ss, Ssr),
        _ => (Ssr, Ss),
    }
}

// ---------------------------------------------------------------------------
// closed forms

fn closed_form_at(id: CurveId, b: f64, alpha: f64, c: f64) -> Result<f64> {
    match id.0 {
        1 => gamma1_boundary(c),
        2 => gamma2_boundary(c, alpha),
        3 | 4 => {
            let quadrant_ok = (c < 0.0 && alpha < 0.5) || (c > 0.0 && alpha > 0.5);
            if !quadrant_ok {
                return Err(Error::Domain(format!(
                    "{id} requires c < 0 with alpha < 1/2 or c > 0 with alpha > 1/2"
                )));
            }
            if id.0 == 4 && !(b > 0.0) {
                return Err(Error::Domain(format!("{id} requires b > 0")));
            }
            let ch = (alpha * PI / 2.0).cos();
            let g3 = -ch * ch / (alpha * PI).cos() / (4.0 * c);
            Ok(if id.0 == 4 { g3 + 2.0 * b } else { g3 })
        }
        _ => Err(Error::Domain(format!("{id} has no closed form"))),
    }
}

/// Exact evaluation of `Γ1`–`Γ4`.
///
/// ```
/// use fdde::region::{closed_form_curve, CRange, CurveId};
/// let t = closed_form_curve(CurveId::new(1).unwrap(), 1.0, 0.3, CRange::single(-0.5)).unwrap();
/// assert!((t.points[0].a1 - 0.5).abs() < 1e-15);
/// ```
pub fn closed_form_curve(id: CurveId, b: f64, alpha: f64, c_range: CRange) -> Result<CurveTrace> {
    if id.method() != CurveMethod::ClosedForm {
        return Err(Error::Domain(format!("{id} has no closed form")));
    }
    let points = c_range
        .values()
        .into_iter()
        .map(|c| closed_form_at(id, b, alpha, c).map(|a1| CurvePoint { a1, c, verified: true }))
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveTrace { curve_id: id, b, alpha, method: CurveMethod::ClosedForm, points, absent: vec![] })
}

// ---------------------------------------------------------------------------
// sampling helpers

/// Open sub-intervals of `[lo, hi]` split at `a1 = 0` and `a1 = 2b`, where a
/// quartic root passes through `w = 0` and the count changes by one.
fn split_bracket(br: Bracket, b: f64) -> Vec<(f64, f64)> {
    let mut cuts = vec![br.lo, br.hi];
    for x in [0.0, 2.0 * b] {
        if x > br.lo && x < br.hi {
            cuts.push(x);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Uniform samples plus geometric clusters towards both ends and any extra
/// focus points, all strictly inside `(lo, hi)`.
fn samples(lo: f64, hi: f64, uniform: usize, focus: &[f64]) -> Vec<f64> {
    let width = hi - lo;
    let mut xs = Vec::with_capacity(uniform + 200);
    for i in 1..uniform {
        xs.push(lo + width * i as f64 / uniform as f64);
    }
    let ladder = |span: f64| (0..=50).map(move |j| span * 10f64.powf(-(j as f64) / 5.0));
    for d in ladder(width / uniform as f64) {
        xs.push(lo + d);
        xs.push(hi - d);
    }
    for &f in focus {
        if f > lo && f < hi {
            xs.push(f);
            for d in ladder(width / uniform as f64 * 4.0) {
                xs.push(f - d);
                xs.push(f + d);
            }
        }
    }
    let eps = 1e-10 * (1.0 + lo.abs().max(hi.abs()));
    xs.retain(|&x| x > lo + eps && x < hi - eps);
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|x, y| (*x - *y).abs() < 1e-14 * (1.0 + y.abs()));
    xs
}

fn bisect<F: Fn(f64) -> bool>(mut lo: f64, mut hi: f64, left_is: F) -> (f64, f64) {
    // invariant: left_is(lo) && !left_is(hi)
    while hi - lo > BISECT_TOL * (1.0 + lo.abs().max(hi.abs())) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if left_is(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

fn params_at(alpha: f64, a1: f64, b: f64, c: f64) -> SystemParams {
    SystemParams::from_a1(alpha, a1, b, c).expect("validated curve inputs")
}

fn positive_count(alpha: f64, a1: f64, b: f64, c: f64) -> usize {
    quartic_positive_roots(&params_at(alpha, a1, b, c)).len()
}

/// A change of the positive quartic root count between two `a1` values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCountTransition {
    pub a1: f64,
    pub below: usize,
    pub above: usize,
}

/// Every `a1` at which the crossing quartic has a positive double root.
///
/// Writing the quartic as `(X(w) − a)² + Y(w)² − b²` with
/// `X = w·cos(απ/2) + c·w²·cos απ` and `Y = w·sin(απ/2) + c·w²·sin απ`,
/// a double root needs `a = X ± √(b² − Y²)` and `(X − a)·X' + Y·Y' = 0`,
/// a one-dimensional root find in `w`.
pub fn double_root_a1_values(b: f64, alpha: f64, c: f64) -> Vec<f64> {
    let (h, f) = (alpha * PI / 2.0, alpha * PI);
    let (ch, sh, cf, sf) = (h.cos(), h.sin(), f.cos(), f.sin());
    let bb = b * b;
    let x = |w: f64| w * ch + c * w * w * cf;
    let y = |w: f64| w * sh + c * w * w * sf;
    let dx = |w: f64| ch + 2.0 * c * w * cf;
    let dy = |w: f64| sh + 2.0 * c * w * sf;
    let gap = |w: f64| bb - y(w) * y(w);
    let cond = |w: f64, s: f64| y(w) * dy(w) - s * gap(w).max(0.0).sqrt() * dx(w);
    let w_max = (sh + (sh * sh + 4.0 * c.abs() * sf * b.abs()).sqrt()) / (2.0 * c.abs() * sf);
    let mut ws: Vec<f64> = (0..=4000).map(|i| w_max * 1e-12f64.powf(1.0 - i as f64 / 4000.0)).collect();
    ws.extend((1..4000).map(|i| w_max * i as f64 / 4000.0));
    ws.sort_by(f64::total_cmp);
    ws.dedup();
    let mut out = Vec::new();
    for s in [1.0, -1.0] {
        for k in 1..ws.len() {
            let (w0, w1) = (ws[k - 1], ws[k]);
            if gap(w0) < 0.0 || gap(w1) < 0.0 {
                continue;
            }
            let (f0, f1) = (cond(w0, s), cond(w1, s));
            if f0 == 0.0 || f0.signum() == f1.signum() {
                continue;
            }
            let (p, q) = bisect(w0, w1, |w| cond(w, s).signum() == f0.signum());
            let w = 0.5 * (p + q);
            out.push(x(w) + s * gap(w).max(0.0).sqrt() + b);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Every change of the positive root count along `a1` at fixed `c`,
/// excluding the unit steps at `a1 = 0` and `a1 = 2b`.
pub fn root_count_transitions(b: f64, alpha: f64, c: f64, br: Bracket) -> Vec<RootCountTransition> {
    let mut out: Vec<RootCountTransition> = Vec::new();
    for a1 in double_root_a1_values(b, alpha, c) {
        if !(a1 > br.lo && a1 < br.hi) {
            continue;
        }
        let d = 1e-7 * (1.0 + a1.abs());
        if a1.abs() < 2.0 * d || (a1 - 2.0 * b).abs() < 2.0 * d {
            continue;
        }
        let below = positive_count(alpha, a1 - d, b, c);
        let above = positive_count(alpha, a1 + d, b, c);
        if below != above && out.last().is_none_or(|t| (t.a1 - a1).abs() > 2.0 * d) {
            out.push(RootCountTransition { a1, below, above });
        }
    }
    out
}

fn has_near_double_root(alpha: f64, a1: f64, b: f64, c: f64) -> bool {
    let z = quartic_all_roots(&params_at(alpha, a1, b, c));
    let mut best = f64::INFINITY;
    for i in 0..4 {
        for j in i + 1..4 {
            if z[i].re > 0.0 && z[j].re > 0.0 {
                let rel = (z[i] - z[j]).norm() / (1.0 + z[i].norm());
                best = best.min(rel);
            }
        }
    }
    best < 1e-4
}

// ---------------------------------------------------------------------------
// tangency curves

fn tangency_at(id: CurveId, b: f64, alpha: f64, c: f64, br: Bracket) -> Result<f64> {
    check_case(id, b, alpha, c)?;
    let mut tr = root_count_transitions(b, alpha, c, br);
    if matches!(id.0, 7 | 9) {
        // the locus on the a > 0 side is a different curve
        tr.retain(|t| t.a1 < b);
    }
    let a1s = tr.iter().map(|t| t.a1);
    let pick = match tangency_side(id) {
        Side::Left => a1s.reduce(f64::min),
        Side::Right => a1s.reduce(f64::max),
    };
    pick.ok_or_else(|| Error::CurveAbsent { curve: id.to_string(), c })
}

/// Double-root loci `Γ5`–`Γ10`.
///
/// ```
/// use fdde::region::{tangency_curve, CRange, CurveId};
/// let id: CurveId = "gamma5".parse().unwrap();
/// let t = tangency_curve(id, 1.0, 0.3, CRange::single(-0.4)).unwrap();
/// assert!((t.points[0].a1 - 2.8219).abs() < 2e-3);
/// ```
pub fn tangency_curve(id: CurveId, b: f64, alpha: f64, c_range: CRange) -> Result<CurveTrace> {
    tangency_curve_in(id, b, alpha, c_range, Bracket::default_for(b))
}

pub fn tangency_curve_in(
    id: CurveId,
    b: f64,
    alpha: f64,
    c_range: CRange,
    br: Bracket,
) -> Result<CurveTrace> {
    if id.method() != CurveMethod::DoubleRootLocus {
        return Err(Error::Domain(format!("{id} is not a tangency curve")));
    }
    trace(id, b, alpha, c_range, |c| {
        let a1 = tangency_at(id, b, alpha, c, br)?;
        Ok(CurvePoint { a1, c, verified: has_near_double_root(alpha, a1, b, c) })
    })
}

fn trace<F>(id: CurveId, b: f64, alpha: f64, c_range: CRange, f: F) -> Result<CurveTrace>
where
    F: Fn(f64) -> Result<CurvePoint> + Sync,
{
    let cs = c_range.values();
    for &c in &cs {
        check_case(id, b, alpha, c)?;
    }
    let res: Vec<(f64, Result<CurvePoint>)> = cs.par_iter().map(|&c| (c, f(c))).collect();
    let mut points = Vec::new();
    let mut absent = Vec::new();
    for (c, r) in res {
        match r {
            Ok(p) => points.push(p),
            Err(Error::CurveAbsent { .. }) => absent.push(c),
            Err(e) => return Err(e),
        }
    }
    points.sort_by(|x, y| x.c.total_cmp(&y.c));
    Ok(CurveTrace { curve_id: id, b, alpha, method: id.method(), points, absent })
}

// ---------------------------------------------------------------------------
// behaviour curves

fn label_at(alpha: f64, a1: f64, b: f64, c: f64) -> BehaviorLabel {
    classify(&params_at(alpha, a1, b, c)).label
}

/// A change of classifier label between two `a1` values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelTransition {
    pub a1: f64,
    pub below: BehaviorLabel,
    pub above: BehaviorLabel,
    /// `true` when the positive quartic root count also changes there.
    pub on_tangency: bool,
}

/// Every label change along `a1` at fixed `c`, skipping `MARGINAL` samples.
pub fn label_transitions(b: f64, alpha: f64, c: f64, br: Bracket) -> Vec<LabelTransition> {
    let tangencies: Vec<f64> = root_count_transitions(b, alpha, c, br).iter().map(|t| t.a1).collect();
    let mut focus = tangencies.clone();
    if let Ok(g2) = gamma2_boundary(c, alpha) {
        // delay-dependent bands open up against the τ = 0 boundary
        focus.push(g2);
    }
    let full = Bracket::default_for(b);
    let mut out = Vec::new();
    for (lo, hi) in split_bracket(br, b) {
        let share = ((hi - lo) / (full.hi - full.lo)).min(1.0);
        let n = ((1500.0 * share) as usize).max(150);
        let xs = samples(lo, hi, n, &focus);
        let labels: Vec<BehaviorLabel> = xs.par_iter().map(|&a1| label_at(alpha, a1, b, c)).collect();
        let kept: Vec<(f64, BehaviorLabel)> = xs
            .iter()
            .copied()
            .zip(labels)
            .filter(|(_, l)| *l != BehaviorLabel::Marginal)
            .collect();
        for w in kept.windows(2) {
            let ((x0, l0), (x1, l1)) = (w[0], w[1]);
            if l0 == l1 {
                continue;
            }
            let (p, q) = bisect(x0, x1, |a1| {
                let l = label_at(alpha, a1, b, c);
                l == l0 || (l == BehaviorLabel::Marginal && label_at(alpha, a1 - 1e-9, b, c) == l0)
            });
            let a1 = 0.5 * (p + q);
            let on_tangency = positive_count(alpha, p, b, c) != positive_count(alpha, q, b, c)
                || tangencies.iter().any(|&t| (t - a1).abs() < 1e-7 * (1.0 + a1.abs()));
            out.push(LabelTransition { a1, below: l0, above: l1, on_tangency });
        }
    }
    out
}

fn behavior_at(id: CurveId, b: f64, alpha: f64, c: f64, br: Bracket) -> Result<CurvePoint> {
    check_case(id, b, alpha, c)?;
    let (p, q) = behavior_pair(id);
    let a1 = label_transitions(b, alpha, c, br)
        .into_iter()
        .filter(|t| t.below == p && t.above == q)
        .map(|t| t.a1)
        .reduce(f64::min)
        .ok_or_else(|| Error::CurveAbsent { curve: id.to_string(), c })?;
    let lo = label_at(alpha, a1 - VERIFY_OFFSET, b, c);
    let hi = label_at(alpha, a1 + VERIFY_OFFSET, b, c);
    let verified = lo == p && hi == q;
    Ok(CurvePoint { a1, c, verified })
}

/// Label-transition curves `Γ11`–`Γ18`.
///
/// ```no_run
/// use fdde::region::{behavior_boundary_curve, CRange, CurveId};
/// let t = behavior_boundary_curve(CurveId::new(11).unwrap(), 1.0, 0.3, CRange::single(-0.4)).unwrap();
/// assert!((t.points[0].a1 - 2.78762).abs() < 1e-3);
/// ```
pub fn behavior_boundary_curve(id: CurveId, b: f64, alpha: f64, c_range: CRange) -> Result<CurveTrace> {
    behavior_boundary_curve_in(id, b, alpha, c_range, Bracket::default_for(b))
}

pub fn behavior_boundary_curve_in(
    id: CurveId,
    b: f64,
    alpha: f64,
    c_range: CRange,
    br: Bracket,
) -> Result<CurveTrace> {
    if id.method() != CurveMethod::ClassifierBisection {
        return Err(Error::Domain(format!("{id} is not a behaviour curve")));
    }
    trace(id, b, alpha, c_range, |c| behavior_at(id, b, alpha, c, br))
}

/// Any curve, dispatched on its method.
pub fn curve(id: CurveId, b: f64, alpha: f64, c_range: CRange) -> Result<CurveTrace> {
    match id.method() {
        CurveMethod::ClosedForm => closed_form_curve(id, b, alpha, c_range),
        CurveMethod::DoubleRootLocus => tangency_curve(id, b, alpha, c_range),
        CurveMethod::ClassifierBisection => behavior_boundary_curve(id, b, alpha, c_range),
    }
}

/// [`curve`] with the numerical curves searched in `br`; closed forms ignore it.
pub fn curve_in(id: CurveId, b: f64, alpha: f64, c_range: CRange, br: Bracket) -> Result<CurveTrace> {
    match id.method() {
        CurveMethod::ClosedForm => closed_form_curve(id, b, alpha, c_range),
        CurveMethod::DoubleRootLocus => tangency_curve_in(id, b, alpha, c_range, br),
        CurveMethod::ClassifierBisection => behavior_boundary_curve_in(id, b, alpha, c_range, br),
    }
}

/// `a1` of one curve at one `c`, with an optional narrower bracket.
pub fn curve_point(id: CurveId, b: f64, alpha: f64, c: f64, br: Option<Bracket>) -> Result<f64> {
    let br = br.unwrap_or_else(|| Bracket::default_for(b));
    match id.method() {
        CurveMethod::ClosedForm => closed_form_at(id, b, alpha, c),
        CurveMethod::DoubleRootLocus => tangency_at(id, b, alpha, c, br),
        CurveMethod::ClassifierBisection => behavior_at(id, b, alpha, c, br).map(|p| p.a1),
    }
}

// ---------------------------------------------------------------------------
// intersection constants

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstantId {
    C0,
    C1,
    C2,
    C3,
    C5,
    C6,
    C7,
}

impl ConstantId {
    pub fn all() -> [ConstantId; 7] {
        use ConstantId::*;
        [C0, C1, C2, C3, C5, C6, C7]
    }
}

impl fmt::Display for ConstantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            ConstantId::C0 => 0,
            ConstantId::C1 => 1,
            ConstantId::C2 => 2,
            ConstantId::C3 => 3,
            ConstantId::C5 => 5,
            ConstantId::C6 => 6,
            ConstantId::C7 => 7,
        };
        write!(f, "c{n}")
    }
}

impl FromStr for ConstantId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ConstantId::all()
            .into_iter()
            .find(|k| k.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Domain(format!("unknown constant `{s}`; expected one of c0-c3, c5-c7")))
    }
}

#[derive(Clone, Copy, Debug)]
enum Target {
    Curve(u8),
    Line0,
    Line2b,
}

/// `(curve A, target B, c sign)` for each constant.
fn constant_def(id: ConstantId) -> (u8, Target, f64) {
    match id {
        ConstantId::C0 => (12, Target::Curve(2), -1.0),
        ConstantId::C1 => (14, Target::Line0, 1.0),
        ConstantId::C2 => (7, Target::Line0, 1.0),
        ConstantId::C3 => (15, Target::Curve(2), -1.0),
        ConstantId::C5 => (16, Target::Curve(9), 1.0),
        ConstantId::C6 => (17, Target::Curve(2), -1.0),
        ConstantId::C7 => (9, Target::Line2b, 1.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntersectionConstant {
    pub id: ConstantId,
    pub c: f64,
    /// `a1` at the meeting point.
    pub a1: f64,
    /// `|a1_A − a1_B|` at the closest evaluated point.
    pub residual: f64,
}

impl IntersectionConstant {
    pub fn to_csv_rows(&self) -> String {
        let mut s = format!("{},{}\n", self.id, sig(self.c, 9));
        if self.id == ConstantId::C5 {
            s += &format!("a5,{}\n", sig(self.a1, 9));
        }
        s
    }
}

/// Residual threshold for accepting an intersection.
pub const INTERSECTION_TOL: f64 = 1e-4;

/// Where two curves (or a curve and a line) meet, found by a scan over `c`
/// followed by bisection on the sign of `a1_A − a1_B` or on the existence of
/// curve `A`.
///
/// ```no_run
/// use fdde::region::{curve_intersection_constant, ConstantId};
/// let k = curve_intersection_constant(ConstantId::C2, 1.0, 0.8).unwrap();
/// assert!((k.c - 2.52097).abs() < 1e-3);
/// ```
pub fn curve_intersection_constant(id: ConstantId, b: f64, alpha: f64) -> Result<IntersectionConstant> {
    let (ca, target, csign) = constant_def(id);
    let curve_a = CurveId(ca);
    let (sb, so, _) = case_of(curve_a);
    if !(sb.admits(b) && so.admits(alpha)) {
        return Err(Error::Domain(format!("{id} is not defined at b = {b}, alpha = {alpha}")));
    }
    let eval = |c: f64, hint: Option<Bracket>| -> Option<(f64, f64)> {
        let a = curve_point(curve_a, b, alpha, c, hint).ok()?;
        let t = match target {
            Target::Curve(n) => CurveId(n),
            Target::Line0 => return Some((a, a)),
            Target::Line2b => return Some((a, a - 2.0 * b)),
        };
        let bt = curve_point(t, b, alpha, c, None).ok()?;
        Some((a, a - bt))
    };
    // geometric grid in |c|
    let n = 48;
    let cs: Vec<f64> = (0..n).map(|i| csign * 0.05 * (400f64).powf(i as f64 / (n - 1) as f64)).collect();
    let vals: Vec<Option<(f64, f64)>> = cs.par_iter().map(|&c| eval(c, None)).collect();
    let state = |v: &Option<(f64, f64)>| v.map(|(_, g)| g > 0.0);
    let mut best: Option<IntersectionConstant> = None;
    for i in 1..n {
        let (s0, s1) = (state(&vals[i - 1]), state(&vals[i]));
        if s0 == s1 {
            continue;
        }
        let (mut lo, mut hi) = (cs[i - 1], cs[i]);
        let (mut vlo, mut vhi) = (vals[i - 1], vals[i]);
        while (hi - lo).abs() > 1e-9 * (1.0 + lo.abs()) {
            let mid = 0.5 * (lo + hi);
            let hint = vlo.or(vhi).map(|(a, _)| Bracket { lo: a - 0.5 - 0.2 * a.abs(), hi: a + 0.5 + 0.2 * a.abs() });
            let mut vm = eval(mid, hint);
            if vm.is_none() && hint.is_some() {
                vm = eval(mid, None);
            }
            if state(&vm) == state(&vlo) {
                lo = mid;
                vlo = vm;
            } else {
                hi = mid;
                vhi = vm;
            }
        }
        let cands = [(lo, vlo), (hi, vhi)];
        let (c, (a1, g)) = cands
            .iter()
            .filter_map(|(c, v)| v.map(|v| (*c, v)))
            .min_by(|x, y| x.1 .1.abs().total_cmp(&y.1 .1.abs()))
            .expect("one side is present");
        let found = IntersectionConstant { id, c, a1, residual: g.abs() };
        if found.residual < INTERSECTION_TOL && best.is_none_or(|b| found.residual < b.residual) {
            best = Some(found);
        }
    }
    best.ok_or_else(|| Error::NotFound {
        what: id.to_string(),
        detail: format!(
            "no meeting of {curve_a} with {target:?} for c in ±[0.05, 20] at b = {b}, alpha = {alpha}"
        ),
    })
}

// ---------------------------------------------------------------------------
// plane scans

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub a1_min: f64,
    pub a1_max: f64,
    pub c_min: f64,
    pub c_max: f64,
    pub n_a1: usize,
    pub n_c: usize,
}

impl ScanGrid {
    /// Cell centres along `a1`, then `c`.
    pub fn centres(&self) -> (Vec<f64>, Vec<f64>) {
        let centre = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
            (0..n).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64).collect()
        };
        (centre(self.a1_min, self.a1_max, self.n_a1), centre(self.c_min, self.c_max, self.n_c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanCell {
    pub a1: f64,
    pub c: f64,
    pub label: BehaviorLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionScan {
    pub b: f64,
    pub alpha: f64,
    pub grid: ScanGrid,
    /// Row-major in `c`, then `a1`.
    pub cells: Vec<ScanCell>,
    /// Cells between `Γ1` and `Γ2` (c < 0, α < 1/2) that have some stable delay.
    pub anomalies: Vec<ScanCell>,
}

impl RegionScan {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("a1,c,label\n");
        for cell in &self.cells {
            s += &format!("{},{},{}\n", sig(cell.a1, 9), sig(cell.c, 9), cell.label);
        }
        s
    }
}

fn in_conjectured_region(alpha: f64, a1: f64, c: f64) -> bool {
    if !(c < 0.0 && alpha < 0.5) {
        return false;
    }
    match (gamma1_boundary(c), gamma2_boundary(c, alpha)) {
        (Ok(g1), Ok(g2)) => a1 > g1 && a1 < g2,
        _ => false,
    }
}

/// Classify every cell centre of `grid`. Cells on `c = 0` are labelled `MARGINAL`.
pub fn scan_plane(b: f64, alpha: f64, grid: ScanGrid) -> Result<RegionScan> {
    if grid.n_a1 < 2 || grid.n_c < 2 {
        return Err(Error::Domain("scan resolution must be at least 2 x 2".into()));
    }
    SystemParams::new(alpha, 0.0, b, 1.0)?;
    let (a1s, cs) = grid.centres();
    let cells: Vec<ScanCell> = (0..a1s.len() * cs.len())
        .into_par_iter()
        .map(|k| {
            let (a1, c) = (a1s[k % a1s.len()], cs[k / a1s.len()]);
            let label = SystemParams::from_a1(alpha, a1, b, c)
                .map(|p| classify(&p).label)
                .unwrap_or(BehaviorLabel::Marginal);
            ScanCell { a1, c, label }
        })
        .collect();
    let anomalies = cells
        .iter()
        .filter(|x| in_conjectured_region(alpha, x.a1, x.c))
        .filter(|x| !matches!(x.label, BehaviorLabel::UnstableAll | BehaviorLabel::Marginal))
        .copied()
        .collect();
    Ok(RegionScan { b, alpha, grid, cells, anomalies })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_id_parsing() {
        for s in ["gamma9", "G9", "Γ9", "9", " g9 "] {
            assert_eq!(s.parse::<CurveId>().unwrap().number(), 9);
        }
        assert!("gamma19".parse::<CurveId>().is_err());
        assert!("c4".parse::<ConstantId>().is_err());
        assert_eq!("C5".parse::<ConstantId>().unwrap(), ConstantId::C5);
    }

    #[test]
    fn gamma3_small_alpha_limit() {
        let a1 = closed_form_at(CurveId(3), -1.0, 1e-6, -1.0).unwrap();
        assert!((a1 - 0.25).abs() < 1e-9);
    }

    #[test]
    fn undefined_quadrants() {
        assert!(closed_form_at(CurveId(2), 1.0, 0.3, 0.5).is_err());
        assert!(closed_form_at(CurveId(3), 1.0, 0.3, 0.5).is_err());
        assert!(closed_form_at(CurveId(4), -1.0, 0.3, -0.5).is_err());
        assert!(tangency_curve(CurveId(5), -1.0, 0.3, CRange::single(-0.4)).is_err());
    }

    #[test]
    fn split_points() {
        let s = split_bracket(Bracket { lo: -14.0, hi: 14.0 }, -1.0);
        assert_eq!(s, vec![(-14.0, -2.0), (-2.0, 0.0), (0.0, 14.0)]);
    }

    #[test]
    fn samples_stay_inside() {
        let xs = samples(0.0, 1.0, 50, &[0.5]);
        assert!(xs.iter().all(|&x| x > 0.0 && x < 1.0));
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        assert!(xs.iter().any(|&x| x < 1e-9));
    }

    #[test]
    fn tangency_has_double_root() {
        let a1 = tangency_at(CurveId(10), -1.0, 0.8, -0.9, Bracket::default_for(-1.0)).unwrap();
        assert!((a1 - 4.695).abs() < 2e-3);
        assert!(has_near_double_root(0.8, a1, -1.0, -0.9));
    }

    #[test]
    fn scan_is_complete_and_ordered() {
        let g = ScanGrid { a1_min: -6.0, a1_max: 4.0, c_min: -1.0, c_max: 3.0, n_a1: 5, n_c: 4 };
        let s = scan_plane(1.0, 0.3, g).unwrap();
        assert_eq!(s.cells.len(), 20);
        assert!(s.cells.windows(2).all(|w| w[0].c < w[1].c || (w[0].c == w[1].c && w[0].a1 < w[1].a1)));
    }
}
