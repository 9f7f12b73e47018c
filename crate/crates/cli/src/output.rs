//! Serialisable result structures; every JSON document is an [`Envelope`].

use serde::{Deserialize, Serialize};

use fdde::classifier::{BehaviorLabel, MarginalReason, PointStability, Provenance, Verdict};
use fdde::crossings::{CrossingRoot, Transversality};
use fdde::format::sig;
use fdde::integrator::TimeVerdict;
use fdde::region::{CurveTrace, IntersectionConstant, RegionScan};
use fdde::verify::VerifyReport;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub alpha: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
}

impl Header {
    pub fn new(command: &str, alpha: Option<f64>, a: Option<f64>, b: Option<f64>, c: Option<f64>) -> Self {
        Header { tool: "fdde".into(), version: VERSION.into(), command: command.into(), alpha, a, b, c }
    }

    /// `# fdde <version> <command> alpha=… a=… b=… c=…`, omitting unset values.
    pub fn csv_comment(&self) -> String {
        let mut s = format!("# {} {} {}", self.tool, self.version, self.command);
        for (k, v) in [("alpha", self.alpha), ("a", self.a), ("b", self.b), ("c", self.c)] {
            if let Some(v) = v {
                s += &format!(" {k}={}", sig(v, 9));
            }
        }
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub header: Header,
    #[serde(flatten)]
    pub body: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingOut {
    pub w: f64,
    pub v: f64,
    pub theta: f64,
    pub transversality: Transversality,
    pub transversality_value: f64,
    pub first: f64,
    pub period: f64,
    pub ladder: Vec<f64>,
}

impl CrossingOut {
    /// With the ladder cut at `tau_max`, or its first four entries.
    pub fn new(r: &CrossingRoot, tau_max: Option<f64>) -> Self {
        let ladder = match tau_max {
            Some(t) => r.ladder.up_to(t),
            None => (0..4).map(|n| r.ladder.tau_n(n)).collect(),
        };
        CrossingOut {
            w: r.w,
            v: r.v,
            theta: r.theta,
            transversality: r.transversality,
            transversality_value: r.transversality_value,
            first: r.ladder.first,
            period: r.ladder.period,
            ladder,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointOut {
    pub tau: f64,
    pub stability: PointStability,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyBody {
    pub label: BehaviorLabel,
    /// `[lo, hi, verdict]`, `hi = null` when unbounded.
    pub intervals: Vec<(f64, Option<f64>, Verdict)>,
    pub switch_count: usize,
    pub provenance: Provenance,
    pub marginal_reason: Option<MarginalReason>,
    pub tau0_rhp_count: u32,
    pub truncated: bool,
    pub crossings: Vec<CrossingOut>,
    pub point: Option<PointOut>,
}

impl ClassifyBody {
    pub fn to_csv(&self) -> String {
        let mut s = format!("# label={}\nlo,hi,verdict\n", self.label);
        for (lo, hi, v) in &self.intervals {
            let hi = hi.map_or("inf".to_string(), |h| sig(h, 9));
            s += &format!("{},{hi},{v:?}\n", sig(*lo, 9));
        }
        if let Some(p) = &self.point {
            s += &format!("# tau={} stability={:?}\n", sig(p.tau, 9), p.stability);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingsBody {
    /// Quartic coefficients, constant term first.
    pub quartic: [f64; 5],
    pub crossings: Vec<CrossingOut>,
}

impl CrossingsBody {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("w,v,theta,transversality,n,tau\n");
        for r in &self.crossings {
            for (n, t) in r.ladder.iter().enumerate() {
                s += &format!(
                    "{},{},{},{:?},{n},{}\n",
                    sig(r.w, 9),
                    sig(r.v, 9),
                    sig(r.theta, 9),
                    r.transversality,
                    sig(*t, 9)
                );
            }
        }
        s
    }
}

pub type CurveBody = CurveTrace;
pub type ConstantBody = IntersectionConstant;
pub type ScanBody = RegionScan;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateBody {
    pub tau: f64,
    pub t_end: f64,
    pub step: f64,
    pub x0: f64,
    pub verdict: TimeVerdict,
    /// `null` after an overflow.
    pub growth_ratio: Option<f64>,
    pub overflowed: bool,
    pub times: Vec<f64>,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyBody {
    /// `(criterion, passed, total)`.
    pub summary: Vec<(u8, usize, usize)>,
    pub passed: bool,
    #[serde(flatten)]
    pub report: VerifyReport,
}
