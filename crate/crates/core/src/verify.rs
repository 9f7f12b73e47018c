//! Replays published numbers and the solver's self-checks as a report of
//! pass/fail items, grouped into numbered criteria.
//!
//! Expected values are kept as the strings they were printed as, so the
//! tolerance can follow the number of significant figures: values printed to
//! three figures or fewer get `10⁻³` relative, longer ones the caller's
//! tolerance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charfn::{char_fn, Complex, SystemParams};
use crate::classifier::{classify, stability_at, BehaviorLabel, DelayBehavior, PointStability, Verdict};
use crate::crossings::{boundary_point, crossing_roots, CrossingRoot, Transversality};
use crate::error::{Error, Result};
use crate::format::sig;
use crate::integrator::{convergence_order, default_step, integrate, IvpSpec, TimeVerdict};
use crate::oracle::{count_rhp_roots, newton_track_root, ContourSpec};
use crate::region::{curve_intersection_constant, curve_point, ConstantId, CurveId};

/// Default relative tolerance for values printed to six figures.
pub const DEFAULT_TOLERANCE: f64 = 2e-4;
/// Relative tolerance for values printed to three figures or fewer.
pub const SHORT_FIGURE_TOLERANCE: f64 = 1e-3;
/// Relative tolerance on curve values.
pub const CURVE_TOLERANCE: f64 = 5e-4;
/// Relative tolerance on intersection constants.
pub const CONSTANT_TOLERANCE: f64 = 1e-3;
/// Bound on `|F(iv, τₙ)|` and on `|C² + S² − 1|` at every ladder entry.
pub const CERTIFICATE_TOL: f64 = 1e-6;
/// Number of random points in the oracle comparison.
pub const ORACLE_SAMPLES: usize = 200;
/// Seed for the oracle comparison.
pub const ORACLE_SEED: u64 = 0x5eed_f0de;

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "quartic roots"),
    (2, "delay ladders"),
    (3, "behaviour labels"),
    (4, "curve values"),
    (5, "intersection constants"),
    (6, "integrator verdicts"),
    (7, "oracle equivalence"),
    (8, "crossing certificate"),
    (9, "transversality certificate"),
    (10, "integrator self-convergence"),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyItem {
    pub criterion: u8,
    pub name: String,
    pub expected: String,
    pub measured: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub tolerance: f64,
    pub items: Vec<VerifyItem>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    /// `(criterion, passed items, total items)` for each criterion present.
    pub fn summary(&self) -> Vec<(u8, usize, usize)> {
        CRITERIA
            .iter()
            .filter_map(|&(k, _)| {
                let of: Vec<_> = self.items.iter().filter(|i| i.criterion == k).collect();
                (!of.is_empty()).then(|| (k, of.iter().filter(|i| i.pass).count(), of.len()))
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("criterion,name,expected,measured,pass\n");
        for i in &self.items {
            s += &format!(
                "{},{},{},{},{}\n",
                i.criterion,
                csv_field(&i.name),
                csv_field(&i.expected),
                csv_field(&i.measured),
                if i.pass { "PASS" } else { "FAIL" }
            );
        }
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Significant figures in a printed decimal number.
///
/// ```
/// use fdde::verify::significant_figures;
/// assert_eq!(significant_figures("0.0726"), 3);
/// assert_eq!(significant_figures("-182.001"), 6);
/// assert_eq!(significant_figures("42.536"), 5);
/// ```
pub fn significant_figures(printed: &str) -> usize {
    let digits: String = printed.chars().filter(|c| c.is_ascii_digit()).collect();
    digits.trim_start_matches('0').len().max(1)
}

fn tolerance_for(printed: &str, base: f64) -> f64 {
    if significant_figures(printed) <= 3 {
        base.max(SHORT_FIGURE_TOLERANCE)
    } else {
        base
    }
}

fn num(printed: &str) -> f64 {
    printed.parse().expect("table literal")
}

fn rel_err(measured: f64, expected: f64) -> f64 {
    (measured - expected).abs() / expected.abs()
}

fn close(measured: f64, printed: &str, base: f64) -> bool {
    rel_err(measured, num(printed)) <= tolerance_for(printed, base)
}

fn join(xs: impl IntoIterator<Item = f64>) -> String {
    xs.into_iter().map(|x| sig(x, 9)).collect::<Vec<_>>().join(" ")
}

fn params(al: f64, a: f64, b: f64, c: f64) -> SystemParams {
    SystemParams::new(al, a, b, c).expect("table parameters are admissible")
}

/// A published example: parameters, the printed crossing values `v^α`,
/// and for each of them the printed leading entries of the delay ladder.
pub struct PublishedCase {
    pub name: &'static str,
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub roots: &'static [(&'static str, &'static [&'static str])],
}

impl PublishedCase {
    pub fn params(&self) -> SystemParams {
        params(self.alpha, self.a, self.b, self.c)
    }
}

pub const PUBLISHED_CASES: &[PublishedCase] = &[
    PublishedCase {
        name: "b>0 low order, a=1.7",
        alpha: 0.3, a: 1.7, b: 1.0, c: -0.4,
        roots: &[("1.12581", &["2.18454", "6.41737", "10.6502"]), ("2.12454", &["0.212729", "0.722411", "1.23209"])],
    },
    PublishedCase {
        name: "b>0 low order, a=1.8",
        alpha: 0.3, a: 1.8, b: 1.0, c: -0.4,
        roots: &[
            ("1.46349", &["0.874706", "2.64025", "4.40578", "6.17132"]),
            ("1.88464", &["0.343884", "1.10378", "1.86368"]),
        ],
    },
    PublishedCase {
        name: "b<0 low order, c>0",
        alpha: 0.3, a: -0.3, b: -10.0, c: 0.5,
        roots: &[("3.59088", &["0.0336727"])],
    },
    PublishedCase {
        name: "b<0 low order, a=2.35",
        alpha: 0.45, a: 2.35, b: -1.0, c: -0.3,
        roots: &[("2.03726", &["0.0192191", "1.31166", "2.60411"]), ("3.1629", &["0.397771", "0.884042", "1.37031"])],
    },
    PublishedCase {
        name: "b<0 low order, a=2.48",
        alpha: 0.45, a: 2.48, b: -1.0, c: -0.3,
        roots: &[("2.26432", &["1.01403", "2.03598", "3.05793"]), ("3.08213", &["0.450092", "0.965138", "1.48018"])],
    },
    PublishedCase {
        name: "b<0 low order, a=2.6",
        alpha: 0.45, a: 2.6, b: -1.0, c: -0.3,
        roots: &[("2.56269", &["0.740921", "1.51711", "2.2933"]), ("2.91154", &["0.522197", "1.10671", "1.69123"])],
    },
    PublishedCase {
        name: "b>0 high order, c=4, a=-1.06",
        alpha: 0.8, a: -1.06, b: 1.0, c: 4.0,
        roots: &[
            ("0.28028999", &["28.5127", "59.3212", "90.1297", "120.938"]),
            ("0.385268362", &["18.0739", "38.7741", "59.4744", "80.1746"]),
        ],
    },
    PublishedCase {
        name: "b>0 high order, c=4, a=-1.02",
        alpha: 0.8, a: -1.02, b: 1.0, c: 4.0,
        roots: &[
            ("0.18462087812", &["49.7825", "101.702", "153.621", "205.54", "257.46"]),
            ("0.420968", &["15.7097", "34.2394", "52.7691", "71.2988"]),
        ],
    },
    PublishedCase {
        name: "b>0 high order, c=-0.4",
        alpha: 0.8, a: 6.0, b: 1.0, c: -0.4,
        roots: &[("3.52068", &["0.744534", "2.04739", "3.35024"]), ("4.19432", &["0.0246074", "1.07138", "2.11816"])],
    },
    PublishedCase {
        name: "b<0 high order, c=9, a=-1.2166",
        alpha: 0.8, a: -1.2166, b: -1.0, c: 9.0,
        roots: &[
            ("0.28027", &["11.7248", "42.536", "73.3473", "104.159"]),
            ("0.286791", &["11.2217", "41.1597", "71.0978", "101.036"]),
        ],
    },
    PublishedCase {
        name: "b<0 high order, c=9, a=-1.07",
        alpha: 0.8, a: -1.07, b: -1.0, c: 9.0,
        roots: &[
            ("0.13912", &["34.1872", "108.138", "182.089", "256.04"]),
            ("0.342681", &["7.23693", "31.2013", "55.1657", "79.1301"]),
        ],
    },
    PublishedCase {
        name: "b<0 high order, c=2.2, a=-0.99",
        alpha: 0.8, a: -0.99, b: -1.0, c: 2.2,
        roots: &[("0.0384923", &["182.001", "550.522", "919.044", "1287.56"])],
    },
    PublishedCase {
        name: "b<0 high order, c=2.2, a=-0.98",
        alpha: 0.8, a: -0.98, b: -1.0, c: 2.2,
        roots: &[
            ("0.114518", &["45.264", "139.581", "233.898", "328.215"]),
            ("0.208169", &["20.5158", "65.2005", "109.885", "154.57"]),
            ("0.357206", &["9.46047", "32.2131", "54.9656", "77.7182"]),
        ],
    },
    PublishedCase {
        name: "b<0 high order, c=1",
        alpha: 0.8, a: -0.9, b: -1.0, c: 1.0,
        roots: &[("0.364932", &["9.52706", "31.6791", "53.8312"])],
    },
    PublishedCase {
        name: "b<0 high order, c=-0.9, a=1.03",
        alpha: 0.8, a: 1.03, b: -1.0, c: -0.9,
        roots: &[("0.0889235", &["1.65726", "131.05", "260.442"]), ("1.45654", &["1.79705", "5.72373", "9.65041"])],
    },
    PublishedCase {
        name: "b<0 high order, c=-0.9, a=4.1",
        alpha: 0.8, a: 4.1, b: -1.0, c: -0.9,
        roots: &[("1.86275", &["2.85785", "5.74513", "8.6324"]), ("2.36524", &["1.34019", "3.48227", "5.62435"])],
    },
    PublishedCase {
        name: "b<0 high order, c=-3, a=1.8",
        alpha: 0.8, a: 1.8, b: -1.0, c: -3.0,
        roots: &[
            ("0.514075", &["0.0526283", "14.487", "28.9213", "43.3556"]),
            ("0.955756", &["4.14761", "10.7965", "17.4453", "24.0941"]),
        ],
    },
    PublishedCase {
        name: "b<0 high order, c=-3, a=2",
        alpha: 0.8, a: 2.0, b: -1.0, c: -3.0,
        roots: &[
            ("0.581679", &["12.2832", "24.652", "37.0207", "49.3894"]),
            ("0.981791", &["4.10744", "10.5366", "16.9658", "23.395"]),
        ],
    },
    PublishedCase {
        name: "b<0 high order, c=-3, a=2.8",
        alpha: 0.8, a: 2.8, b: -1.0, c: -3.0,
        roots: &[
            ("0.820205", &["7.51375", "15.5634", "23.613", "31.6627"]),
            ("1.05854", &["4.15684", "10.0087", "15.8607", "21.7126"]),
        ],
    },
];

/// `(α, a, b, c, τ, stable)` rows with a published time-domain verdict.
pub const PUBLISHED_TRAJECTORIES: &[(f64, f64, f64, f64, f64, bool)] = &[
    (0.3, 0.45, 1.0, 4.0, 1.1, false),
    (0.4, -9.0, 4.0, 4.0, 0.17, true),
    (0.49, -8.6, 1.1, -4.0, 0.17, false),
    (0.35, -1.0, 1.3, -0.8, 1.7, false),
    (0.3, 3.8, 1.2, -4.0, 1.0, true),
    (0.45, 4.5, -3.0, 9.0, 0.3, false),
    (0.29, -8.0, -3.5, 10.0, 0.8, true),
    (0.38, -1.1, -3.5, -1.0, 1.0, false),
    (0.38, 0.3, -0.1, -0.2, 0.3, false),
    (0.38, 7.0, -0.1, -2.0, 0.3, true),
    (0.8, 1.06, 8.0, 4.0, 0.09, false),
    (0.75, -8.0, 3.5, 4.0, 0.6, true),
    (0.93, -8.0, 5.0, -9.0, 0.9, false),
    (0.96, -4.9, 5.0, -2.0, 0.9, false),
    (0.96, 200.0, 5.0, -2.0, 2.3, true),
    (0.85, 4.0, -3.3, 19.0, 3.5, false),
    (0.85, -7.0, -3.3, 19.0, 1.8, true),
    (0.79, -7.0, -3.3, -5.0, 1.3, false),
    (0.7, 3.002, -3.0, -1.0, 1.3, false),
    (0.7, 10.0, -3.0, -2.0, 1.7, true),
];

/// Published delay-switch demonstrations, same layout as [`PUBLISHED_TRAJECTORIES`].
pub const PUBLISHED_SWITCHES: &[(f64, f64, f64, f64, f64, bool)] = &[
    (0.3, 1.8, 1.0, -0.4, 0.3, true),
    (0.3, 1.8, 1.0, -0.4, 0.4, false),
    (0.3, 1.8, 1.0, -0.4, 1.0, true),
    (0.3, -0.3, -10.0, 0.5, 0.02, true),
    (0.3, -0.3, -10.0, 0.5, 0.04, false),
];

/// Most steps in a published trajectory run.
pub const TRAJECTORY_MAX_STEPS: f64 = 1e5;

/// Horizon used for published trajectory rows with the default step:
/// `max(100, 10τ)`, shortened to [`TRAJECTORY_MAX_STEPS`] steps but never
/// below `10τ`.
pub fn trajectory_horizon(tau: f64) -> f64 {
    let cap = TRAJECTORY_MAX_STEPS * default_step(tau);
    (10.0 * tau).max(100.0).min(cap.max(10.0 * tau))
}

fn nearest(roots: &[CrossingRoot], w: f64) -> Option<&CrossingRoot> {
    roots.iter().min_by(|x, y| (x.w - w).abs().total_cmp(&(y.w - w).abs()))
}

/// Criterion 1: every printed crossing value, and no others.
pub fn quartic_roots(tolerance: f64) -> Vec<VerifyItem> {
    PUBLISHED_CASES
        .iter()
        .map(|case| {
            let roots = crossing_roots(&case.params()).unwrap_or_default();
            let measured: Vec<f64> = roots.iter().map(|r| r.w).collect();
            let pass = measured.len() == case.roots.len()
                && case.roots.iter().all(|(w, _)| nearest(&roots, num(w)).is_some_and(|r| close(r.w, w, tolerance)));
            VerifyItem {
                criterion: 1,
                name: case.name.to_string(),
                expected: case.roots.iter().map(|(w, _)| *w).collect::<Vec<_>>().join(" "),
                measured: join(measured),
                pass,
            }
        })
        .collect()
}

/// Criterion 2: printed ladder entries, one item per crossing value.
pub fn delay_ladders(tolerance: f64) -> Vec<VerifyItem> {
    let mut items = Vec::new();
    for case in PUBLISHED_CASES {
        let roots = crossing_roots(&case.params()).unwrap_or_default();
        for (w, ladder) in case.roots {
            let root = nearest(&roots, num(w));
            let measured: Vec<f64> = match root {
                Some(r) => (0..ladder.len() as u64).map(|n| r.ladder.tau_n(n)).collect(),
                None => Vec::new(),
            };
            let pass = measured.len() == ladder.len()
                && measured.iter().zip(ladder.iter()).all(|(m, e)| close(*m, e, tolerance));
            items.push(VerifyItem {
                criterion: 2,
                name: format!("{} w={w}", case.name),
                expected: ladder.join(" "),
                measured: join(measured),
                pass,
            });
        }
    }
    items
}

/// Expected partition of `[0, ∞)` by printed switch points.
struct LabelCase {
    name: &'static str,
    p: (f64, f64, f64, f64),
    label: BehaviorLabel,
    /// `(lo, hi, verdict)` intervals to find, `None` meaning unbounded.
    intervals: &'static [(&'static str, Option<&'static str>, Verdict)],
    /// Leading critical delays of the merged ladders.
    events: &'static [&'static str],
}

const LABEL_CASES: &[LabelCase] = &[
    LabelCase {
        name: "SSR a=1.7",
        p: (0.3, 1.7, 1.0, -0.4),
        label: BehaviorLabel::Ssr,
        intervals: &[("0", Some("0.212729"), Verdict::S), ("0.212729", None, Verdict::U)],
        events: &[],
    },
    LabelCase {
        name: "SS a=1.8",
        p: (0.3, 1.8, 1.0, -0.4),
        label: BehaviorLabel::Ss,
        intervals: &[
            ("0", Some("0.343884"), Verdict::S),
            ("0.343884", Some("0.874706"), Verdict::U),
            ("0.874706", Some("1.10378"), Verdict::S),
        ],
        events: &["0.343884", "0.874706", "1.10378", "1.86368"],
    },
    LabelCase {
        name: "IS a=2.35",
        p: (0.45, 2.35, -1.0, -0.3),
        label: BehaviorLabel::Is,
        intervals: &[
            ("0", Some("0.0192191"), Verdict::U),
            ("0.0192191", Some("0.397771"), Verdict::S),
            ("0.397771", None, Verdict::U),
        ],
        events: &[],
    },
    LabelCase {
        name: "IS a=1.8 c=-3",
        p: (0.8, 1.8, -1.0, -3.0),
        label: BehaviorLabel::Is,
        intervals: &[("0.0526283", Some("4.14761"), Verdict::S)],
        events: &[],
    },
    LabelCase {
        name: "SSR a=-0.99 c=2.2",
        p: (0.8, -0.99, -1.0, 2.2),
        label: BehaviorLabel::Ssr,
        intervals: &[("0", Some("182.001"), Verdict::S)],
        events: &[],
    },
];

fn end_matches(measured: f64, printed: &str, tolerance: f64) -> bool {
    if num(printed) == 0.0 {
        measured == 0.0
    } else {
        close(measured, printed, tolerance)
    }
}

fn describe(b: &DelayBehavior) -> String {
    let mut s = b.label.to_string();
    for i in &b.intervals {
        let hi = i.hi.map_or("inf".to_string(), |h| sig(h, 9));
        s += &format!(" [{},{}){:?}", sig(i.lo, 9), hi, i.verdict);
    }
    s
}

/// Criterion 3: labels and printed stability intervals.
pub fn behavior_labels(tolerance: f64) -> Vec<VerifyItem> {
    LABEL_CASES
        .iter()
        .map(|lc| {
            let (al, a, b, c) = lc.p;
            let beh = classify(&params(al, a, b, c));
            let intervals_ok = lc.intervals.iter().all(|(lo, hi, v)| {
                beh.intervals.iter().any(|i| {
                    i.verdict == *v
                        && end_matches(i.lo, lo, tolerance)
                        && match (hi, i.hi) {
                            (None, None) => true,
                            (Some(e), Some(m)) => end_matches(m, e, tolerance),
                            _ => false,
                        }
                })
            });
            let mut events: Vec<f64> = beh
                .crossings
                .iter()
                .flat_map(|r| r.ladder.iter().take(lc.events.len()).collect::<Vec<_>>())
                .collect();
            events.sort_by(f64::total_cmp);
            events.truncate(lc.events.len());
            let events_ok = events.len() == lc.events.len()
                && events.iter().zip(lc.events).all(|(m, e)| close(*m, e, tolerance));
            let mut expected = lc.label.to_string();
            for (lo, hi, v) in lc.intervals {
                expected += &format!(" [{lo},{}){v:?}", hi.unwrap_or("inf"));
            }
            let mut measured = describe(&beh);
            if !lc.events.is_empty() {
                expected += &format!(" events {}", lc.events.join(" "));
                measured += &format!(" events {}", join(events.iter().copied()));
            }
            VerifyItem {
                criterion: 3,
                name: lc.name.to_string(),
                expected,
                measured,
                pass: beh.label == lc.label && intervals_ok && events_ok,
            }
        })
        .collect()
}

/// `(curve, b, α, c, printed a1)`.
pub const PUBLISHED_CURVE_VALUES: &[(u8, f64, f64, f64, &str)] = &[
    (2, 1.0, 0.3, -0.4, "0.78726"),
    (11, 1.0, 0.3, -0.4, "2.78762"),
    (5, 1.0, 0.3, -0.4, "2.8219"),
    (13, -1.0, 0.45, -0.3, "0.674322"),
    (2, -1.0, 0.45, -0.3, "1.44121"),
    (12, -1.0, 0.45, -0.3, "1.50111"),
    (6, -1.0, 0.45, -0.3, "1.62678"),
    (7, 1.0, 0.8, 4.0, "-0.0726"),
    (16, 1.0, 0.8, 4.0, "-0.0418347"),
    (2, 1.0, 0.8, -0.4, "6.54508"),
    (8, 1.0, 0.8, -0.4, "10.5099"),
    (9, -1.0, 0.8, 9.0, "-2.2168"),
    (16, -1.0, 0.8, 9.0, "-2.08023"),
    (9, -1.0, 0.8, 2.2, "-1.9788"),
    (16, -1.0, 0.8, 2.2, "-1.98325"),
    (18, -1.0, 0.8, -0.9, "0.0220747"),
    (2, -1.0, 0.8, -0.9, "2.90893"),
    (10, -1.0, 0.8, -0.9, "4.695"),
    (18, -1.0, 0.8, -3.0, "0.00178628"),
    (2, -1.0, 0.8, -3.0, "0.872678"),
    (17, -1.0, 0.8, -3.0, "1.24228"),
    (10, -1.0, 0.8, -3.0, "2.34685"),
];

/// Criterion 4: curve values at fixed `c`.
pub fn curve_values() -> Vec<VerifyItem> {
    PUBLISHED_CURVE_VALUES
        .par_iter()
        .map(|&(n, b, al, c, printed)| {
            let id = CurveId::new(n).expect("valid curve number");
            let got = curve_point(id, b, al, c, None);
            let (measured, pass) = match got {
                Ok(v) => (sig(v, 9), close(v, printed, CURVE_TOLERANCE)),
                Err(e) => (format!("error: {e}"), false),
            };
            VerifyItem {
                criterion: 4,
                name: format!("{id} b={b} alpha={al} c={c}"),
                expected: printed.to_string(),
                measured,
                pass,
            }
        })
        .collect()
}

/// `(constant, b, α, printed c, printed a1 if published)`.
pub const PUBLISHED_CONSTANTS: &[(ConstantId, f64, f64, &str, Option<&str>)] = &[
    (ConstantId::C0, -1.0, 0.45, "-0.195086", None),
    (ConstantId::C1, 1.0, 0.8, "2.75575", None),
    (ConstantId::C2, 1.0, 0.8, "2.52097", None),
    (ConstantId::C3, 1.0, 0.8, "-0.751566", None),
    (ConstantId::C5, -1.0, 0.8, "2.00571", Some("-1.97444")),
    (ConstantId::C6, -1.0, 0.8, "-1.5598", None),
    (ConstantId::C7, -1.0, 0.8, "2.52097", None),
];

/// Criterion 5: intersection constants.
pub fn intersection_constants() -> Vec<VerifyItem> {
    PUBLISHED_CONSTANTS
        .par_iter()
        .map(|&(id, b, al, c_printed, a_printed)| {
            let (measured, pass) = match curve_intersection_constant(id, b, al) {
                Ok(k) => {
                    let mut pass = close(k.c, c_printed, CONSTANT_TOLERANCE);
                    let mut m = format!("c={}", sig(k.c, 9));
                    if let Some(a) = a_printed {
                        pass &= close(k.a1, a, CONSTANT_TOLERANCE);
                        m += &format!(" a1={}", sig(k.a1, 9));
                    }
                    (m, pass)
                }
                Err(e) => (format!("error: {e}"), false),
            };
            let expected = match a_printed {
                Some(a) => format!("c={c_printed} a1={a}"),
                None => format!("c={c_printed}"),
            };
            VerifyItem { criterion: 5, name: format!("{id} b={b} alpha={al}"), expected, measured, pass }
        })
        .collect()
}

/// Criterion 6: time-domain verdicts with the default step and
/// [`trajectory_horizon`]; `INCONCLUSIVE` fails.
pub fn integrator_verdicts() -> Vec<VerifyItem> {
    PUBLISHED_TRAJECTORIES
        .iter()
        .chain(PUBLISHED_SWITCHES)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&(al, a, b, c, tau, stable)| {
            let spec = IvpSpec::new(params(al, a, b, c), tau, trajectory_horizon(tau));
            let want = if stable { TimeVerdict::Decaying } else { TimeVerdict::Growing };
            let (measured, pass) = match integrate(&spec) {
                Ok(run) => (format!("{} ratio={}", run.verdict, sig(run.growth_ratio, 4)), run.verdict == want),
                Err(e) => (format!("error: {e}"), false),
            };
            VerifyItem {
                criterion: 6,
                name: format!("alpha={al} a={a} b={b} c={c} tau={tau}"),
                expected: want.to_string(),
                measured,
                pass,
            }
        })
        .collect()
}

/// A random admissible point for the oracle comparison.
pub fn random_point(rng: &mut impl Rng) -> (SystemParams, f64) {
    const ORDERS: [f64; 4] = [0.3, 0.45, 0.7, 0.9];
    loop {
        let al = ORDERS[rng.gen_range(0..ORDERS.len())];
        let a = rng.gen_range(-5.0..=5.0);
        let b = rng.gen_range(-5.0..=5.0);
        let c = rng.gen_range(0.2..=5.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let tau = rng.gen_range(0.0..=5.0);
        if let Ok(p) = SystemParams::new(al, a, b, c) {
            return (p, tau);
        }
    }
}

/// One classifier-versus-oracle comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleComparison {
    Agree,
    Disagree { classifier: PointStability, count: u32 },
    /// Classifier reports `MARGINAL`.
    Marginal,
    /// The contour met a root; the point lies on a crossing.
    OnContour(String),
}

pub fn compare_with_oracle(p: &SystemParams, tau: f64) -> OracleComparison {
    let verdict = stability_at(p, tau);
    if verdict == PointStability::Marginal {
        return OracleComparison::Marginal;
    }
    match count_rhp_roots(p, tau, &ContourSpec::for_params(p, tau)) {
        Ok(count) if (count == 0) == (verdict == PointStability::S) => OracleComparison::Agree,
        Ok(count) => OracleComparison::Disagree { classifier: verdict, count },
        Err(e) => OracleComparison::OnContour(e.to_string()),
    }
}

/// Criterion 7: classifier verdict against the contour count on random points.
pub fn oracle_equivalence(samples: usize, seed: u64) -> Vec<VerifyItem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<_> = (0..samples).map(|_| random_point(&mut rng)).collect();
    let results: Vec<_> = points.par_iter().map(|(p, tau)| compare_with_oracle(p, *tau)).collect();
    let mut agree = 0;
    let mut unstable = 0;
    let mut excluded = Vec::new();
    let mut items = Vec::new();
    for ((p, tau), r) in points.iter().zip(&results) {
        match r {
            OracleComparison::Agree => {
                agree += 1;
                if stability_at(p, *tau) == PointStability::U {
                    unstable += 1;
                }
            }
            OracleComparison::Marginal => excluded.push(format!("marginal {} tau={}", point_name(p), sig(*tau, 6))),
            OracleComparison::OnContour(e) => excluded.push(format!("{} tau={}: {e}", point_name(p), sig(*tau, 6))),
            OracleComparison::Disagree { classifier, count } => items.push(VerifyItem {
                criterion: 7,
                name: format!("{} tau={}", point_name(p), sig(*tau, 9)),
                expected: format!("classifier {classifier:?}"),
                measured: format!("{count} roots in right half-plane"),
                pass: false,
            }),
        }
    }
    let compared = samples - excluded.len();
    items.insert(
        0,
        VerifyItem {
            criterion: 7,
            name: format!("{samples} random points, seed {seed:#x}, {} excluded", excluded.len()),
            expected: format!("{compared}/{compared} agree"),
            measured: format!("{agree}/{compared} agree ({unstable} unstable)"),
            pass: agree == compared,
        },
    );
    for ex in excluded {
        items.push(VerifyItem { criterion: 7, name: "excluded".into(), expected: String::new(), measured: ex, pass: true });
    }
    items
}

fn point_name(p: &SystemParams) -> String {
    format!("alpha={} a={} b={} c={}", sig(p.alpha(), 6), sig(p.a(), 6), sig(p.b(), 6), sig(p.c(), 6))
}

/// Worst `|F(iv, τₙ)|` and `|C² + S² − 1|` over the first `entries` of every ladder.
pub fn ladder_certificate(p: &SystemParams, entries: u64) -> Result<(f64, f64, usize)> {
    let mut worst = (0.0f64, 0.0f64, 0usize);
    for r in crossing_roots(p)? {
        let (cs, sn) = boundary_point(r.w, p)?;
        worst.1 = worst.1.max((cs * cs + sn * sn - 1.0).abs());
        for n in 0..entries {
            let tau = r.ladder.tau_n(n);
            worst.0 = worst.0.max(char_fn(Complex::new(0.0, r.v), p, tau).norm());
            worst.2 += 1;
        }
    }
    Ok(worst)
}

/// Criterion 8: certificates for the published ladders and the random points.
pub fn crossing_certificate(samples: usize, seed: u64) -> Vec<VerifyItem> {
    let mut items: Vec<VerifyItem> = PUBLISHED_CASES
        .iter()
        .map(|case| certificate_item(case.name.to_string(), &case.params()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = (0.0f64, 0.0f64, 0usize);
    let mut failures = 0;
    for _ in 0..samples {
        let (p, _) = random_point(&mut rng);
        match ladder_certificate(&p, 8) {
            Ok(w) => {
                worst = (worst.0.max(w.0), worst.1.max(w.1), worst.2 + w.2);
            }
            Err(_) => failures += 1,
        }
    }
    items.push(VerifyItem {
        criterion: 8,
        name: format!("{samples} random points, {} entries", worst.2),
        expected: format!("|F| < {CERTIFICATE_TOL:e}, |C²+S²−1| < {CERTIFICATE_TOL:e}"),
        measured: format!("|F| ≤ {:.2e}, |C²+S²−1| ≤ {:.2e}, {failures} unresolved", worst.0, worst.1),
        pass: worst.0 < CERTIFICATE_TOL && worst.1 < CERTIFICATE_TOL && failures == 0,
    });
    items
}

fn certificate_item(name: String, p: &SystemParams) -> VerifyItem {
    let (measured, pass) = match ladder_certificate(p, 8) {
        Ok((f, circ, n)) => (
            format!("|F| ≤ {f:.2e}, |C²+S²−1| ≤ {circ:.2e} over {n} entries"),
            f < CERTIFICATE_TOL && circ < CERTIFICATE_TOL,
        ),
        Err(e) => (format!("error: {e}"), false),
    };
    VerifyItem {
        criterion: 8,
        name,
        expected: format!("< {CERTIFICATE_TOL:e}"),
        measured,
        pass,
    }
}

/// Sign of `d(Re λ)/dτ` at the first crossing of `root`, by continuation
/// over `τ₀ ± 10⁻³·τ₀`.
pub fn tracked_direction(p: &SystemParams, root: &CrossingRoot) -> Result<Transversality> {
    let t = root.ladder.first;
    let dt = 1e-3 * t.max(1e-3);
    let start = Complex::new(0.0, root.v);
    let fwd = newton_track_root(p, start, t, t + dt, 20)?;
    let back = newton_track_root(p, start, t, (t - dt).max(0.0), 20)?;
    let slope = fwd.last().expect("path").1.re - back.last().expect("path").1.re;
    Ok(if slope > 0.0 {
        Transversality::Destabilizing
    } else if slope < 0.0 {
        Transversality::Stabilizing
    } else {
        Transversality::Degenerate
    })
}

/// Criterion 9: continuation agrees with the transversality sign at the
/// first crossing of every root of each published case.
pub fn transversality_certificate() -> Vec<VerifyItem> {
    PUBLISHED_CASES
        .iter()
        .map(|case| {
            let p = case.params();
            let roots = crossing_roots(&p).unwrap_or_default();
            let expected: Vec<String> = roots.iter().map(|r| format!("{:?}", r.transversality)).collect();
            let tracked: Vec<Result<Transversality>> = roots.iter().map(|r| tracked_direction(&p, r)).collect();
            let measured: Vec<String> = tracked
                .iter()
                .map(|t| match t {
                    Ok(t) => format!("{t:?}"),
                    Err(e) => format!("error: {e}"),
                })
                .collect();
            let pass = !roots.is_empty()
                && roots.iter().zip(&tracked).all(|(r, t)| t.as_ref().is_ok_and(|t| *t == r.transversality));
            VerifyItem {
                criterion: 9,
                name: case.name.to_string(),
                expected: expected.join(" "),
                measured: measured.join(" "),
                pass,
            }
        })
        .collect()
}

/// Parameters of the self-convergence run: no delay term, smooth in time
/// away from the origin.
pub fn convergence_case() -> IvpSpec {
    IvpSpec::new(params(0.7, -1.0, 0.0, 1.0), 0.0, 1.0).with_step(0.01)
}

/// Criterion 10: observed order under three halvings.
pub fn self_convergence() -> Vec<VerifyItem> {
    let spec = convergence_case();
    let al = spec.params.alpha();
    let need = 1.0 + al - 0.3;
    let (measured, pass) = match convergence_order(&spec, 3) {
        Ok(study) => match study.order {
            Some(o) => (format!("order {} (estimates {})", sig(o, 4), join(study.estimates.iter().copied())), o >= need),
            None => (format!("inconclusive (estimates {})", join(study.estimates.iter().copied())), false),
        },
        Err(e) => (format!("error: {e}"), false),
    };
    vec![VerifyItem {
        criterion: 10,
        name: format!("alpha={al} b=0 step={} halvings=3", spec.step),
        expected: format!("order ≥ {}", sig(need, 4)),
        measured,
        pass,
    }]
}

/// Items of one criterion.
pub fn verify_criterion(criterion: u8, tolerance: f64) -> Result<Vec<VerifyItem>> {
    check_tolerance(tolerance)?;
    Ok(match criterion {
        1 => quartic_roots(tolerance),
        2 => delay_ladders(tolerance),
        3 => behavior_labels(tolerance),
        4 => curve_values(),
        5 => intersection_constants(),
        6 => integrator_verdicts(),
        7 => oracle_equivalence(ORACLE_SAMPLES, ORACLE_SEED),
        8 => crossing_certificate(ORACLE_SAMPLES, ORACLE_SEED),
        9 => transversality_certificate(),
        10 => self_convergence(),
        k => return Err(Error::InvalidSpec(format!("no criterion {k}; expected 1-10"))),
    })
}

fn check_tolerance(tolerance: f64) -> Result<()> {
    if !(tolerance > 0.0 && tolerance <= 1e-2) {
        return Err(Error::InvalidParams { field: "tolerance", reason: format!("must lie in (0, 1e-2], got {tolerance}") });
    }
    Ok(())
}

/// Every criterion, in order.
pub fn verify_tables(tolerance: f64) -> Result<VerifyReport> {
    check_tolerance(tolerance)?;
    let mut items = Vec::new();
    for (k, _) in CRITERIA {
        items.extend(verify_criterion(k, tolerance)?);
    }
    Ok(VerifyReport { tolerance, items })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figures_counting() {
        assert_eq!(significant_figures("0.00178628"), 6);
        assert_eq!(significant_figures("4.695"), 4);
        assert_eq!(significant_figures("0"), 1);
        assert_eq!(tolerance_for("-0.0726", 2e-4), 1e-3);
        assert_eq!(tolerance_for("2.8219", 2e-4), 2e-4);
    }

    #[test]
    fn tolerance_guard() {
        assert!(verify_tables(0.0).is_err());
        assert!(verify_tables(0.02).is_err());
        assert!(verify_criterion(11, 1e-3).is_err());
    }

    #[test]
    fn quartic_items_pass() {
        for item in quartic_roots(DEFAULT_TOLERANCE) {
            assert!(item.pass, "{item:?}");
        }
    }

    #[test]
    fn csv_quotes_commas() {
        let r = VerifyReport {
            tolerance: 1e-3,
            items: vec![VerifyItem { criterion: 1, name: "a,b".into(), expected: "1".into(), measured: "1".into(), pass: true }],
        };
        assert!(r.to_csv().contains("\"a,b\""));
        assert_eq!(r.summary(), vec![(1, 1, 1)]);
    }
}
