//! Delay-dependent stability: fast-path theorems and the signed crossing count.
//!
//! The count of right half-plane roots starts at its `τ = 0` value and moves
//! by ±2 at every ladder entry, according to the crossing direction. The
//! system is stable exactly where the count is zero.
//!
//! The sweep stops once the count exceeds twice the number of crossing
//! frequencies. The crossing directions alternate along the sorted roots of
//! the quartic and the largest root is always destabilizing, so the mean
//! drift of the count is strictly positive and a count above that level can
//! never return to zero.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::charfn::SystemParams;
use crate::crossings::{crossing_roots, CrossingRoot, Transversality};
use crate::error::{Error, Result};
use crate::nondelayed::{classify_tau0, Tau0Verdict};

/// Two opposite crossings closer than this are treated as simultaneous.
pub const COINCIDENCE_TOL: f64 = 1e-8;
/// Point queries closer than this to a switch are reported as marginal.
pub const SWITCH_TOL: f64 = 1e-8;
/// Upper bound on processed ladder events per classification.
pub const MAX_EVENTS: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BehaviorLabel {
    StableAll,
    UnstableAll,
    /// Single stable region `[0, τ*)`.
    Ssr,
    /// Stability switches: stable at `τ = 0` and stable again later.
    Ss,
    /// Instability switches: unstable at `τ = 0`, stable later.
    Is,
    Marginal,
}

impl BehaviorLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            BehaviorLabel::StableAll => "STABLE_ALL",
            BehaviorLabel::UnstableAll => "UNSTABLE_ALL",
            BehaviorLabel::Ssr => "SSR",
            BehaviorLabel::Ss => "SS",
            BehaviorLabel::Is => "IS",
            BehaviorLabel::Marginal => "MARGINAL",
        }
    }
}

impl std::fmt::Display for BehaviorLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for BehaviorLabel {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        use BehaviorLabel::*;
        [StableAll, UnstableAll, Ssr, Ss, Is, Marginal]
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown label `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    S,
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PointStability {
    S,
    U,
    Marginal,
}

/// `[lo, hi)` with `hi = None` meaning unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayInterval {
    pub lo: f64,
    pub hi: Option<f64>,
    pub verdict: Verdict,
}

impl DelayInterval {
    pub fn contains(&self, tau: f64) -> bool {
        tau >= self.lo && self.hi.is_none_or(|h| tau < h)
    }
}

/// Sufficient conditions that settle the behaviour without a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// `c > 0, α ≤ 1/2, a < −|b|`: no crossings.
    NoCrossingPositiveCLowOrder,
    /// `c < 0, α < 1/2, |b| < a + cos²(απ/2)·sec(απ)/(4c)`: no crossings.
    NoCrossingNegativeCLowOrder,
    /// `c < 0, α > 1/2, a < −|b|`: no crossings.
    NoCrossingNegativeCHighOrder,
    /// `c > 0, α > 1/2, |b| < a + cos²(απ/2)·sec(απ)/(4c)`: no crossings.
    NoCrossingPositiveCHighOrder,
    /// `c > 0, b < 0, −a/b > 1`: a positive real root for every `τ`.
    RealRootPositiveCNegativeB,
    /// `c > 0, b > 0, −a/b < 1`.
    RealRootPositiveCPositiveB,
    /// `c < 0, b < 0, −a/b < 1`.
    RealRootNegativeCNegativeB,
    /// `c < 0, b < 0, −b < a < −1/(4c)`.
    RealRootNegativeCBandedA,
    /// `c < 0, b > 0, a < −1/(4c) − b`.
    RealRootNegativeCPositiveB,
    /// Minimum of `P` on the real axis lies inside the unit disc.
    LocalMinWindow,
    /// Maximum of `P` on the real axis lies inside the unit disc.
    LocalMaxWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WindowKind {
    /// Unstable for `0 ≤ τ < τ*`.
    UnstableBelow,
    /// Unstable for `τ > τ*`.
    UnstableAbove,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FastPathOutcome {
    StableAll,
    UnstableAll,
    Window { kind: WindowKind, tau_star: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FastPathVerdict {
    pub theorem: Theorem,
    pub outcome: FastPathOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    FastPath(Theorem),
    CrossingCount,
}

/// Why a point was classified as marginal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginalReason {
    /// `a1 = 0`: `λ = 0` is a root for every delay.
    ZeroA1,
    /// A `τ = 0` root sits on the stability sector boundary.
    Tau0Boundary,
    /// Double root of the crossing quartic.
    DegenerateCrossing,
    /// Opposite crossings at the same delay.
    CoincidentCrossings,
    /// The running count went negative.
    InconsistentCount,
    /// A quartic root failed the unit-circle check.
    StaleRoot,
    /// The event budget ran out before the pattern was settled.
    Unresolved,
    /// Zero net drift of the count; only reachable at a double root.
    NoDrift,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelayBehavior {
    pub label: BehaviorLabel,
    /// Partition of `[0, ∞)`; empty when the label is `MARGINAL`.
    pub intervals: Vec<DelayInterval>,
    pub switch_count: usize,
    pub provenance: Provenance,
    pub marginal_reason: Option<MarginalReason>,
    /// Right half-plane count at `τ = 0`.
    pub tau0_rhp_count: u32,
    pub crossings: Vec<CrossingRoot>,
    /// `true` when the event budget cut the sweep short; the pattern after
    /// the last listed switch is then unknown.
    pub truncated: bool,
}

impl DelayBehavior {
    fn marginal(reason: MarginalReason, provenance: Provenance) -> Self {
        DelayBehavior {
            label: BehaviorLabel::Marginal,
            intervals: Vec::new(),
            switch_count: 0,
            provenance,
            marginal_reason: Some(reason),
            tau0_rhp_count: 0,
            crossings: Vec::new(),
            truncated: false,
        }
    }

    fn constant(label: BehaviorLabel, provenance: Provenance, n0: u32) -> Self {
        let verdict = if label == BehaviorLabel::StableAll { Verdict::S } else { Verdict::U };
        DelayBehavior {
            label,
            intervals: vec![DelayInterval { lo: 0.0, hi: None, verdict }],
            switch_count: 0,
            provenance,
            marginal_reason: None,
            tau0_rhp_count: n0,
            crossings: Vec::new(),
            truncated: false,
        }
    }

    /// Delays at which the verdict changes.
    pub fn switch_points(&self) -> Vec<f64> {
        self.intervals.iter().filter_map(|i| i.hi).collect()
    }

    pub fn stable_intervals(&self) -> impl Iterator<Item = &DelayInterval> {
        self.intervals.iter().filter(|i| i.verdict == Verdict::S)
    }
}

fn sec_term(params: &SystemParams) -> f64 {
    let al = params.alpha();
    let ch = (al * PI / 2.0).cos();
    ch * ch / (al * PI).cos() / (4.0 * params.c())
}

/// The first sufficient condition that applies, if any.
///
/// ```
/// use fdde::{classifier::{fast_path, FastPathOutcome, Theorem}, SystemParams};
/// let p = SystemParams::new(0.4, -9.0, 4.0, 4.0).unwrap();
/// let v = fast_path(&p).unwrap();
/// assert_eq!(v.theorem, Theorem::NoCrossingPositiveCLowOrder);
/// assert_eq!(v.outcome, FastPathOutcome::StableAll);
/// ```
pub fn fast_path(params: &SystemParams) -> Option<FastPathVerdict> {
    use Theorem::*;
    let (al, a, b, c) = (params.alpha(), params.a(), params.b(), params.c());
    let tau0 = classify_tau0(params).verdict;
    let inherit = match tau0 {
        Tau0Verdict::Stable => Some(FastPathOutcome::StableAll),
        Tau0Verdict::Unstable => Some(FastPathOutcome::UnstableAll),
        Tau0Verdict::Marginal => None,
    };
    let independent = [
        (NoCrossingPositiveCLowOrder, c > 0.0 && al <= 0.5 && a < -b.abs()),
        (NoCrossingNegativeCLowOrder, c < 0.0 && al < 0.5 && b.abs() < a + sec_term(params)),
        (NoCrossingNegativeCHighOrder, c < 0.0 && al > 0.5 && a < -b.abs()),
        (NoCrossingPositiveCHighOrder, c > 0.0 && al > 0.5 && b.abs() < a + sec_term(params)),
    ];
    if let Some(outcome) = inherit {
        if let Some(&(theorem, _)) = independent.iter().find(|(_, hit)| *hit) {
            return Some(FastPathVerdict { theorem, outcome });
        }
    }
    if params.a1() != 0.0 && b != 0.0 {
        let q = -a / b;
        let real_root = [
            (RealRootPositiveCNegativeB, c > 0.0 && b < 0.0 && q > 1.0),
            (RealRootPositiveCPositiveB, c > 0.0 && b > 0.0 && q < 1.0),
            (RealRootNegativeCNegativeB, c < 0.0 && b < 0.0 && q < 1.0),
            (RealRootNegativeCBandedA, c < 0.0 && b < 0.0 && -b < a && a < -0.25 / c),
            (RealRootNegativeCPositiveB, c < 0.0 && b > 0.0 && a < -0.25 / c - b),
        ];
        if let Some(&(theorem, _)) = real_root.iter().find(|(_, hit)| *hit) {
            return Some(FastPathVerdict { theorem, outcome: FastPathOutcome::UnstableAll });
        }
    }
    match real_root_window(params) {
        Ok(Some((kind, tau_star))) => Some(FastPathVerdict {
            theorem: match kind {
                WindowKind::UnstableBelow => LocalMinWindow,
                WindowKind::UnstableAbove => LocalMaxWindow,
            },
            outcome: FastPathOutcome::Window { kind, tau_star },
        }),
        _ => None,
    }
}

/// Delay window forced by a real extremum of `P` inside the unit disc.
///
/// The local-minimum case is accepted on the closed end `a1 = −1/(4c)`,
/// where the window is empty (`τ* = 0`).
pub fn real_root_window(params: &SystemParams) -> Result<Option<(WindowKind, f64)>> {
    let (al, a, b, c) = (params.alpha(), params.a(), params.b(), params.c());
    let a1 = params.a1();
    let edge = -0.25 / c;
    let kind = if c < 0.0 && b < 0.0 && 0.0 < a1 && a1 <= edge && edge < a {
        WindowKind::UnstableBelow
    } else if c < 0.0 && b > 0.0 && a > -b && edge - b < a && a < edge {
        WindowKind::UnstableAbove
    } else {
        return Ok(None);
    };
    let ratio = (-1.0 - 4.0 * a * c) / (4.0 * b * c);
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::InconsistentWindow(format!(
            "extremum of P is {ratio}, expected a value in (0, 1]"
        )));
    }
    let lambda_star = (-0.5 / c).powf(1.0 / al);
    Ok(Some((kind, -ratio.ln() / lambda_star)))
}

#[derive(PartialEq)]
struct Event {
    tau: f64,
    root: usize,
    n: u64,
}

impl Eq for Event {}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; reverse for earliest-first
        other.tau.total_cmp(&self.tau).then(other.root.cmp(&self.root))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn label_from(intervals: &[DelayInterval]) -> BehaviorLabel {
    let n_s = intervals.iter().filter(|i| i.verdict == Verdict::S).count();
    match (intervals[0].verdict, n_s, intervals.len()) {
        (Verdict::S, _, 1) => BehaviorLabel::StableAll,
        (_, 0, _) => BehaviorLabel::UnstableAll,
        (Verdict::S, 1, _) => BehaviorLabel::Ssr,
        (Verdict::S, _, _) => BehaviorLabel::Ss,
        (Verdict::U, _, _) => BehaviorLabel::Is,
    }
}

/// Full delay behaviour. Fast-path theorems are tried first.
///
/// ```
/// use fdde::{classify, BehaviorLabel, SystemParams};
/// let p = SystemParams::new(0.3, 1.7, 1.0, -0.4).unwrap();
/// let b = classify(&p);
/// assert_eq!(b.label, BehaviorLabel::Ssr);
/// assert!((b.intervals[0].hi.unwrap() - 0.212729).abs() < 1e-6);
/// ```
pub fn classify(params: &SystemParams) -> DelayBehavior {
    if params.a1() == 0.0 {
        return DelayBehavior::marginal(MarginalReason::ZeroA1, Provenance::CrossingCount);
    }
    if let Some(fp) = fast_path(params) {
        let n0 = classify_tau0(params).rhp_count;
        let prov = Provenance::FastPath(fp.theorem);
        match fp.outcome {
            FastPathOutcome::StableAll => {
                return DelayBehavior::constant(BehaviorLabel::StableAll, prov, n0)
            }
            FastPathOutcome::UnstableAll => {
                return DelayBehavior::constant(BehaviorLabel::UnstableAll, prov, n0)
            }
            FastPathOutcome::Window { .. } => {}
        }
    }
    classify_by_crossings(params)
}

/// Full delay behaviour from the signed crossing count alone.
pub fn classify_by_crossings(params: &SystemParams) -> DelayBehavior {
    let prov = Provenance::CrossingCount;
    if params.a1() == 0.0 {
        return DelayBehavior::marginal(MarginalReason::ZeroA1, prov);
    }
    let nd = classify_tau0(params);
    if nd.verdict == Tau0Verdict::Marginal {
        return DelayBehavior::marginal(MarginalReason::Tau0Boundary, prov);
    }
    let n0 = nd.rhp_count;
    let const_label =
        if n0 == 0 { BehaviorLabel::StableAll } else { BehaviorLabel::UnstableAll };
    if params.b() == 0.0 {
        return DelayBehavior::constant(const_label, prov, n0);
    }
    let roots = match crossing_roots(params) {
        Ok(r) => r,
        Err(_) => return DelayBehavior::marginal(MarginalReason::StaleRoot, prov),
    };
    if roots.iter().any(|r| r.transversality == Transversality::Degenerate) {
        let mut out = DelayBehavior::marginal(MarginalReason::DegenerateCrossing, prov);
        out.crossings = roots;
        return out;
    }
    if roots.is_empty() {
        return DelayBehavior::constant(const_label, prov, n0);
    }
    let drift: f64 = roots.iter().map(|r| r.transversality.count_step() as f64 * r.v).sum();
    if !(drift > 0.0) {
        let mut out = DelayBehavior::marginal(MarginalReason::NoDrift, prov);
        out.crossings = roots;
        return out;
    }
    let mut out = sweep(&roots, n0);
    out.tau0_rhp_count = n0;
    out.crossings = roots;
    out
}

fn sweep(roots: &[CrossingRoot], n0: u32) -> DelayBehavior {
    let prov = Provenance::CrossingCount;
    let cap = 2 * roots.len() as i64;
    let mut heap: BinaryHeap<Event> = roots
        .iter()
        .enumerate()
        .map(|(i, r)| Event { tau: r.ladder.first, root: i, n: 0 })
        .collect();
    let mut count = n0 as i64;
    let verdict_of = |n: i64| if n == 0 { Verdict::S } else { Verdict::U };
    let mut current = verdict_of(count);
    let mut lo = 0.0;
    let mut intervals = Vec::new();
    let mut prev: Option<(f64, i64, i64)> = None; // (tau, step, count before)
    let mut processed = 0usize;
    let mut truncated = false;
    while let Some(ev) = heap.pop() {
        let step = roots[ev.root].transversality.count_step();
        if let Some((pt, ps, before)) = prev {
            if ps != step && (ev.tau - pt).abs() < COINCIDENCE_TOL && before.min(count) <= 2 {
                return DelayBehavior::marginal(MarginalReason::CoincidentCrossings, prov);
            }
        }
        prev = Some((ev.tau, step, count));
        count += step;
        if count < 0 {
            return DelayBehavior::marginal(MarginalReason::InconsistentCount, prov);
        }
        let v = verdict_of(count);
        if v != current {
            intervals.push(DelayInterval { lo, hi: Some(ev.tau), verdict: current });
            lo = ev.tau;
            current = v;
        }
        processed += 1;
        if count > cap {
            // the look-ahead still has to rule out a coincident partner
            if let Some(next) = heap.peek() {
                let ns = roots[next.root].transversality.count_step();
                if ns != step && (next.tau - ev.tau).abs() < COINCIDENCE_TOL && count - step <= 2 {
                    return DelayBehavior::marginal(MarginalReason::CoincidentCrossings, prov);
                }
            }
            break;
        }
        if processed >= MAX_EVENTS {
            truncated = true;
            break;
        }
        let r = &roots[ev.root];
        heap.push(Event { tau: r.ladder.tau_n(ev.n + 1), root: ev.root, n: ev.n + 1 });
    }
    intervals.push(DelayInterval { lo, hi: None, verdict: Verdict::U });
    if current == Verdict::S {
        // only reachable on truncation: the listed S interval is left open
        intervals.last_mut().expect("nonempty").verdict = Verdict::S;
    }
    let mut label = label_from(&intervals);
    let mut reason = None;
    if truncated {
        let n_s = intervals.iter().filter(|i| i.verdict == Verdict::S).count();
        let settled = match intervals[0].verdict {
            Verdict::S => n_s >= 2,
            Verdict::U => n_s >= 1,
        };
        if !settled {
            label = BehaviorLabel::Marginal;
            reason = Some(MarginalReason::Unresolved);
        }
    }
    DelayBehavior {
        label,
        switch_count: intervals.len() - 1,
        intervals: if label == BehaviorLabel::Marginal { Vec::new() } else { intervals },
        provenance: prov,
        marginal_reason: reason,
        tau0_rhp_count: n0,
        crossings: Vec::new(),
        truncated,
    }
}

/// Right half-plane root count at a single delay, from the ladders in closed form.
///
/// `None` when the count is not well defined (marginal cases).
pub fn rhp_count_at(params: &SystemParams, tau: f64) -> Option<i64> {
    if params.a1() == 0.0 || tau < 0.0 {
        return None;
    }
    let nd = classify_tau0(params);
    if nd.verdict == Tau0Verdict::Marginal {
        return None;
    }
    let mut n = nd.rhp_count as i64;
    if params.b() == 0.0 {
        return Some(n);
    }
    let roots = crossing_roots(params).ok()?;
    for r in &roots {
        if r.transversality == Transversality::Degenerate {
            return None;
        }
        n += r.transversality.count_step() * r.ladder.count_below(tau) as i64;
    }
    (n >= 0).then_some(n)
}

/// Stability at one delay.
///
/// ```
/// use fdde::{classifier::{stability_at, PointStability}, SystemParams};
/// let p = SystemParams::new(0.3, 1.8, 1.0, -0.4).unwrap();
/// assert_eq!(stability_at(&p, 0.4), PointStability::U);
/// assert_eq!(stability_at(&p, 1.0), PointStability::S);
/// ```
pub fn stability_at(params: &SystemParams, tau: f64) -> PointStability {
    let lo = if tau >= SWITCH_TOL { rhp_count_at(params, tau - SWITCH_TOL) } else { rhp_count_at(params, 0.0) };
    let hi = rhp_count_at(params, tau + SWITCH_TOL);
    match (lo, hi) {
        (Some(l), Some(h)) if (l == 0) == (h == 0) => {
            if h == 0 {
                PointStability::S
            } else {
                PointStability::U
            }
        }
        _ => PointStability::Marginal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(al: f64, a: f64, b: f64, c: f64) -> SystemParams {
        SystemParams::new(al, a, b, c).unwrap()
    }

    #[test]
    fn label_parsing_roundtrips() {
        for l in ["SSR", "ss", "Is", "STABLE_ALL", "UNSTABLE_ALL", "MARGINAL"] {
            let parsed: BehaviorLabel = l.parse().unwrap();
            assert!(parsed.as_str().eq_ignore_ascii_case(l));
        }
    }

    #[test]
    fn zero_width_window_at_closed_end() {
        // a1 = −1/(4c) exactly
        let c = -1.0;
        let b = -1.0;
        let pr = SystemParams::from_a1(0.5, 0.25, b, c).unwrap();
        let (kind, t) = real_root_window(&pr).unwrap().unwrap();
        assert_eq!(kind, WindowKind::UnstableBelow);
        assert!(t.abs() < 1e-12);
    }

    #[test]
    fn window_filter_rejects() {
        assert_eq!(real_root_window(&p(0.5, 0.3, -1.0, -1.0)).unwrap(), None);
    }

    #[test]
    fn switch_demonstration() {
        let pr = p(0.3, 1.8, 1.0, -0.4);
        assert_eq!(stability_at(&pr, 0.3), PointStability::S);
        let b = classify(&pr);
        let sw = b.switch_points();
        for (got, want) in sw.iter().zip([0.343884, 0.874706, 1.10378]) {
            assert!((got - want).abs() < 1e-5, "{got} vs {want}");
        }
        assert_eq!(stability_at(&pr, sw[0]), PointStability::Marginal);
    }

    #[test]
    fn three_frequency_case() {
        let b = classify(&p(0.8, -0.98, -1.0, 2.2));
        assert_eq!(b.label, BehaviorLabel::Ss);
        assert_eq!(b.crossings.len(), 3);
    }

    #[test]
    fn zero_a1_is_marginal() {
        let b = classify(&p(0.5, 1.0, -1.0, 2.0));
        assert_eq!(b.label, BehaviorLabel::Marginal);
        assert_eq!(b.marginal_reason, Some(MarginalReason::ZeroA1));
    }
}
