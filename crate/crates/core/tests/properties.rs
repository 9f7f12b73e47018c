use std::f64::consts::PI;

use proptest::prelude::*;

use fdde::classifier::{classify_by_crossings, fast_path, rhp_count_at, FastPathOutcome, WindowKind};
use fdde::crossings::{boundary_point, crossing_roots, quartic_all_roots, quartic_coefficients, Transversality};
use fdde::nondelayed::{classify_tau0, gamma1_boundary, gamma2_boundary, Tau0Verdict};
use fdde::oracle::{count_rhp_roots, ContourSpec};
use fdde::{char_fn, classify, p_of_lambda, principal_power, stability_at, BehaviorLabel, Complex, PointStability, SystemParams, Verdict};

const ALPHAS: [f64; 4] = [0.3, 0.45, 0.7, 0.9];

fn nonzero_c() -> impl Strategy<Value = f64> {
    (0.2f64..5.0, any::<bool>()).prop_map(|(m, neg)| if neg { -m } else { m })
}

fn params() -> impl Strategy<Value = SystemParams> {
    (prop::sample::select(ALPHAS.to_vec()), -5.0f64..5.0, -5.0f64..5.0, nonzero_c())
        .prop_map(|(al, a, b, c)| SystemParams::new(al, a, b, c).unwrap())
}

fn any_order_params() -> impl Strategy<Value = SystemParams> {
    (0.05f64..0.95, -5.0f64..5.0, -5.0f64..5.0, nonzero_c())
        .prop_map(|(al, a, b, c)| SystemParams::new(al, a, b, c).unwrap())
}

fn rhp_oracle(p: &SystemParams, tau: f64) -> Option<u32> {
    count_rhp_roots(p, tau, &ContourSpec::for_params(p, tau)).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn principal_power_scales_argument(r in 1e-3f64..1e3, th in -PI + 1e-9..PI, p in 0.01f64..1.99) {
        let z = Complex::from_polar(r, th);
        let w = principal_power(z, p).unwrap();
        let target = p * z.arg();
        let wrapped = target - 2.0 * PI * ((target + PI) / (2.0 * PI)).floor();
        let diff = (w.arg() - wrapped).abs();
        prop_assert!(diff.min(2.0 * PI - diff) < 1e-12 * (1.0 + p * PI));
        if target.abs() < PI - 1e-9 {
            prop_assert!((w.arg() - target).abs() < 1e-12 * (1.0 + p * PI));
        }
        prop_assert!((w.norm() / r.powf(p) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn char_fn_is_conjugate_symmetric(p in any_order_params(), re in -3.0f64..3.0, im in 0.01f64..10.0, tau in 0.0f64..5.0) {
        let l = Complex::new(re, im);
        let f = char_fn(l, &p, tau);
        let g = char_fn(l.conj(), &p, tau);
        prop_assert!((f.conj() - g).norm() <= 1e-12 * (1.0 + f.norm()));
    }

    #[test]
    fn char_fn_factors_through_p(p in any_order_params(), re in -3.0f64..3.0, im in 0.01f64..10.0, tau in 0.0f64..5.0) {
        prop_assume!(p.b().abs() > 1e-3);
        let l = Complex::new(re, im);
        let f = char_fn(l, &p, tau);
        let via_p = p.b() * (p_of_lambda(l, &p).unwrap() - (-l * tau).exp());
        prop_assert!((f - via_p).norm() <= 1e-12 * (1.0 + f.norm() + (p.b() * (-l * tau).exp()).norm()));
    }

    #[test]
    fn positive_c_negative_a1_is_stable_at_zero_delay(al in 0.01f64..0.99, a1 in -10.0f64..-1e-6, c in 1e-3f64..10.0) {
        let p = SystemParams::from_a1(al, a1, 0.0, c).unwrap();
        prop_assert_eq!(classify_tau0(&p).verdict, Tau0Verdict::Stable);
    }

    #[test]
    fn gamma2_increases_with_order_towards_gamma1(c in -10.0f64..-1e-3, al in 0.01f64..0.98) {
        let g = gamma2_boundary(c, al).unwrap();
        let g_next = gamma2_boundary(c, al + 0.01).unwrap();
        // a1 = (−tan²(απ/2) − 1)/(4c) grows with α for c < 0
        prop_assert!(g_next > g);
        let g1 = gamma1_boundary(c).unwrap();
        let near_zero = gamma2_boundary(c, 1e-6).unwrap();
        prop_assert!((near_zero - g1).abs() <= 1e-10 * g1.abs());
    }

    #[test]
    fn ladder_entries_are_crossings(p in params()) {
        prop_assume!(p.b() != 0.0);
        for r in crossing_roots(&p).unwrap() {
            prop_assert!(r.v > 0.0 && r.ladder.period > 0.0 && r.ladder.first >= 0.0);
            prop_assert!((r.ladder.period - 2.0 * PI / r.v).abs() < 1e-12 * r.ladder.period);
            let (x, y) = boundary_point(r.w, &p).unwrap();
            prop_assert!((x * x + y * y - 1.0).abs() < 1e-6);
            prop_assert!((r.theta.cos() - x).abs() < 1e-8 && (r.theta.sin() - y).abs() < 1e-8);
            for n in 0..5 {
                let tau = r.ladder.tau_n(n);
                prop_assert!(r.ladder.tau_n(n + 1) > tau);
                let f = char_fn(Complex::new(0.0, r.v), &p, tau);
                prop_assert!(f.norm() < 1e-6, "|F| = {} at tau_{} = {}", f.norm(), n, tau);
            }
        }
    }

    #[test]
    fn zero_delay_count_matches_oracle(p in params()) {
        let nd = classify_tau0(&p);
        prop_assume!(nd.verdict != Tau0Verdict::Marginal && p.a1().abs() > 1e-3);
        if let Some(n) = rhp_oracle(&p, 0.0) {
            prop_assert_eq!(n, nd.rhp_count);
            prop_assert_eq!(n == 0, nd.verdict == Tau0Verdict::Stable);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn first_interval_matches_zero_delay(p in params()) {
        let beh = classify(&p);
        prop_assume!(beh.label != BehaviorLabel::Marginal);
        let nd = classify_tau0(&p).verdict;
        let expect = if nd == Tau0Verdict::Stable { Verdict::S } else { Verdict::U };
        prop_assert_eq!(beh.intervals[0].verdict, expect);
    }

    #[test]
    fn intervals_partition_and_alternate(p in params()) {
        let beh = classify(&p);
        prop_assume!(beh.label != BehaviorLabel::Marginal);
        let iv = &beh.intervals;
        prop_assert_eq!(iv[0].lo, 0.0);
        prop_assert!(iv.last().unwrap().hi.is_none());
        for w in iv.windows(2) {
            prop_assert_eq!(w[0].hi, Some(w[1].lo));
            prop_assert!(w[1].lo > w[0].lo);
            prop_assert_ne!(w[0].verdict, w[1].verdict);
        }
        let n_stable = beh.stable_intervals().count();
        let last = iv.last().unwrap().verdict;
        if beh.label != BehaviorLabel::StableAll {
            prop_assert_eq!(last, Verdict::U);
        }
        if !beh.crossings.is_empty() && !beh.truncated {
            prop_assert_eq!(last, Verdict::U);
        }
        match beh.label {
            BehaviorLabel::StableAll => prop_assert!(iv.len() == 1 && iv[0].verdict == Verdict::S),
            BehaviorLabel::UnstableAll => prop_assert!(iv.len() == 1 && iv[0].verdict == Verdict::U),
            BehaviorLabel::Ssr => prop_assert!(iv.len() == 2 && iv[0].verdict == Verdict::S),
            BehaviorLabel::Ss => prop_assert!(n_stable >= 2 && iv[0].verdict == Verdict::S),
            BehaviorLabel::Is => prop_assert!(n_stable >= 1 && iv[0].verdict == Verdict::U),
            BehaviorLabel::Marginal => unreachable!(),
        }
        prop_assert_eq!(beh.switch_count, iv.len() - 1);
    }

    #[test]
    fn fast_path_agrees_with_sweep(p in params()) {
        let Some(fp) = fast_path(&p) else { return Ok(()) };
        let sweep = classify_by_crossings(&p);
        prop_assume!(sweep.label != BehaviorLabel::Marginal);
        match fp.outcome {
            FastPathOutcome::StableAll => prop_assert_eq!(sweep.label, BehaviorLabel::StableAll),
            FastPathOutcome::UnstableAll => prop_assert_eq!(sweep.label, BehaviorLabel::UnstableAll),
            FastPathOutcome::Window { kind, tau_star } => {
                // a real root sits in the right half-plane throughout the window
                prop_assert!(tau_star >= 0.0);
                let probes: Vec<f64> = match kind {
                    WindowKind::UnstableBelow => (0..8).map(|i| tau_star * i as f64 / 8.0).collect(),
                    WindowKind::UnstableAbove => (1..8).map(|i| tau_star * (1.0 + i as f64)).collect(),
                };
                for t in probes {
                    if let Some(n) = rhp_count_at(&p, t) {
                        prop_assert!(n > 0, "window {:?} tau* = {}: zero count at {}", kind, tau_star, t);
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn stability_matches_oracle(p in params(), tau in 0.0f64..5.0) {
        let s = stability_at(&p, tau);
        prop_assume!(s != PointStability::Marginal);
        if let Some(n) = rhp_oracle(&p, tau) {
            prop_assert_eq!(n == 0, s == PointStability::S, "oracle {} roots", n);
        }
    }

    #[test]
    fn oracle_count_is_constant_between_events(p in params()) {
        prop_assume!(p.b().abs() > 0.1 && p.a1().abs() > 1e-3);
        let roots = crossing_roots(&p).unwrap();
        prop_assume!(roots.iter().all(|r| r.transversality != Transversality::Degenerate));
        let mut events: Vec<f64> = roots.iter().flat_map(|r| r.ladder.up_to(5.0)).collect();
        events.push(0.0);
        events.push(5.0);
        events.sort_by(f64::total_cmp);
        events.dedup_by(|x, y| (*x - *y).abs() < 1e-6);
        for w in events.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let Some(expected) = rhp_count_at(&p, mid) else { continue };
            if let Some(n) = rhp_oracle(&p, mid) {
                prop_assert_eq!(n as i64, expected, "tau = {}", mid);
            }
        }
    }

    #[test]
    fn winding_is_stable_under_refinement(p in params(), tau in 0.0f64..5.0) {
        prop_assume!(p.a1().abs() > 1e-3);
        let base = ContourSpec::for_params(&p, tau);
        let Ok(n) = count_rhp_roots(&p, tau, &base) else { return Ok(()) };
        let finer = ContourSpec { samples: 2 * base.samples, ..base };
        let wider = ContourSpec { radius: 2.0 * base.radius, ..base };
        prop_assert_eq!(count_rhp_roots(&p, tau, &finer).unwrap(), n);
        prop_assert_eq!(count_rhp_roots(&p, tau, &wider).unwrap(), n);
    }
}

#[test]
fn double_roots_coalesce_on_the_tangency_locus() {
    use fdde::region::{curve, CRange, CurveId};
    for (id, b, alpha, c) in [(5, 1.0, 0.3, -0.4), (6, -1.0, 0.45, -0.3), (8, 1.0, 0.8, -0.4), (10, -1.0, 0.8, -0.9)] {
        let trace = curve(CurveId::new(id).unwrap(), b, alpha, CRange::single(c)).unwrap();
        let a1 = trace.points[0].a1;
        let p = SystemParams::from_a1(alpha, a1, b, c).unwrap();
        let mut near_real: Vec<Complex> =
            quartic_all_roots(&p).into_iter().filter(|z| z.re > 0.0 && z.im.abs() < 1e-3).collect();
        near_real.sort_by(|x, y| x.re.total_cmp(&y.re));
        let pair = near_real
            .windows(2)
            .map(|w| (w[0] - w[1]).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(pair < 1e-4, "gamma{id}: closest pair {pair}, roots {near_real:?}");
        let w = near_real.iter().map(|z| z.re).sum::<f64>() / near_real.len() as f64;
        let (x, y) = boundary_point(w, &p).unwrap();
        assert!((x * x + y * y - 1.0).abs() < 1e-4, "gamma{id}: off the unit circle");
        assert_eq!(quartic_coefficients(&p).len(), 5);
    }
}

#[test]
fn two_root_examples_stabilise_at_the_smaller_root() {
    for (al, a, b, c) in [(0.3, 1.7, 1.0, -0.4), (0.3, 1.8, 1.0, -0.4), (0.45, 2.35, -1.0, -0.3), (0.8, 1.8, -1.0, -3.0)] {
        let p = SystemParams::new(al, a, b, c).unwrap();
        let roots = crossing_roots(&p).unwrap();
        assert_eq!(roots.len(), 2, "{p:?}");
        assert_eq!(roots[0].transversality, Transversality::Stabilizing);
        assert_eq!(roots[1].transversality, Transversality::Destabilizing);
        assert!(roots[0].w < roots[1].w);
    }
}
