use fdde::region::{curve, curve_intersection_constant, scan_plane, CRange, ConstantId, CurveId, ScanGrid, VERIFY_OFFSET};
use fdde::{classify, BehaviorLabel, SystemParams};

fn trace(id: u8, b: f64, alpha: f64, c_min: f64, c_max: f64, n: usize) -> Vec<(f64, f64)> {
    let t = curve(CurveId::new(id).unwrap(), b, alpha, CRange { min: c_min, max: c_max, n }).unwrap();
    assert!(t.points.windows(2).all(|w| w[0].c < w[1].c), "gamma{id} not ordered by c");
    t.points.iter().map(|p| (p.c, p.a1)).collect()
}

fn label(alpha: f64, a1: f64, b: f64, c: f64) -> BehaviorLabel {
    classify(&SystemParams::from_a1(alpha, a1, b, c).unwrap()).label
}

#[test]
fn behaviour_curves_separate_two_labels() {
    for (id, b, alpha, c) in [
        (11, 1.0, 0.3, -0.4),
        (12, -1.0, 0.45, -0.3),
        (13, -1.0, 0.45, -0.3),
        (16, 1.0, 0.8, 4.0),
        (16, -1.0, 0.8, 9.0),
        (18, -1.0, 0.8, -0.9),
    ] {
        let t = curve(CurveId::new(id).unwrap(), b, alpha, CRange::single(c)).unwrap();
        let p = t.points[0];
        assert!(p.verified, "gamma{id} at c={c}");
        let below = label(alpha, p.a1 - VERIFY_OFFSET, b, c);
        let above = label(alpha, p.a1 + VERIFY_OFFSET, b, c);
        assert_ne!(below, above, "gamma{id} at c={c}");
        assert!(below != BehaviorLabel::Marginal && above != BehaviorLabel::Marginal);
    }
}

#[test]
fn every_traced_point_is_verified() {
    for (id, b, alpha, lo, hi) in [
        (5, 1.0, 0.3, -1.0, -0.2),
        (6, -1.0, 0.45, -1.0, -0.2),
        (11, 1.0, 0.3, -1.0, -0.2),
        (13, -1.0, 0.45, -0.6, -0.1),
    ] {
        let t = curve(CurveId::new(id).unwrap(), b, alpha, CRange { min: lo, max: hi, n: 5 }).unwrap();
        assert!(!t.points.is_empty(), "gamma{id}");
        assert!(t.points.iter().all(|p| p.verified), "gamma{id}: {:?}", t.points);
    }
}

#[test]
fn gamma3_lies_right_of_gamma2() {
    let g2 = trace(2, 1.0, 0.3, -2.0, -0.1, 12);
    let g3 = trace(3, 1.0, 0.3, -2.0, -0.1, 12);
    for ((c, a2), (_, a3)) in g2.iter().zip(&g3) {
        assert!(a3 > a2, "c={c}: gamma3 {a3} vs gamma2 {a2}");
    }
}

#[test]
fn gamma5_lies_left_of_gamma4() {
    let g4 = trace(4, 1.0, 0.3, -1.0, -0.2, 9);
    let g5 = trace(5, 1.0, 0.3, -1.0, -0.2, 9);
    for (c, a5) in &g5 {
        let (_, a4) = g4.iter().find(|(c4, _)| (c4 - c).abs() < 1e-12).unwrap();
        assert!(a5 < a4, "c={c}: gamma5 {a5} vs gamma4 {a4}");
    }
}

#[test]
fn gamma3_lies_right_of_gamma6() {
    let g3 = trace(3, -1.0, 0.45, -1.0, -0.2, 9);
    let g6 = trace(6, -1.0, 0.45, -1.0, -0.2, 9);
    for (c, a6) in &g6 {
        let (_, a3) = g3.iter().find(|(c3, _)| (c3 - c).abs() < 1e-12).unwrap();
        assert!(a3 > a6, "c={c}: gamma3 {a3} vs gamma6 {a6}");
    }
}

#[test]
fn constants_have_small_residuals() {
    for (id, b, alpha) in [(ConstantId::C0, -1.0, 0.45), (ConstantId::C7, -1.0, 0.8)] {
        let k = curve_intersection_constant(id, b, alpha).unwrap();
        assert!(k.residual < 1e-4, "{id}: residual {}", k.residual);
    }
}

#[test]
fn scan_is_complete_and_matches_the_classifier() {
    let grid = ScanGrid { a1_min: -1.0, a1_max: 3.0, c_min: -1.0, c_max: 1.0, n_a1: 5, n_c: 4 };
    let scan = scan_plane(-1.0, 0.45, grid).unwrap();
    assert_eq!(scan.cells.len(), 20);
    for cell in &scan.cells {
        assert_eq!(cell.label, label(0.45, cell.a1, -1.0, cell.c));
    }
    assert_eq!(scan, scan_plane(-1.0, 0.45, grid).unwrap());
}
