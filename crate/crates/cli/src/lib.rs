//! Argument handling and dispatch for the `fdde` binary.
//!
//! Exit codes: 0 on success, 1 when a computation fails or `verify` finds a
//! failing item, 2 on invalid input.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use serde::Serialize;

use fdde::classifier::{classify, stability_at};
use fdde::crossings::{crossing_roots, quartic_coefficients};
use fdde::integrator::{default_step, integrate, IvpSpec};
use fdde::region::{curve_in, curve_intersection_constant, scan_plane, Bracket, CRange, ConstantId, CurveId, ScanGrid};
use fdde::verify::{verify_tables, DEFAULT_TOLERANCE};
use fdde::{Error, SystemParams};

use config::{load_config, usage, Cli, CommandKind, Format, RunConfig, UsageError};
use output::*;

/// Default number of `c` samples for `curve` and per-axis cells for `scan`.
pub const DEFAULT_RES: usize = 41;

enum Failure {
    Usage(UsageError),
    /// Input accepted, but the library rejected it as out of domain.
    Domain(String),
    Runtime(String),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams { field, reason } => Failure::Usage(usage(field, reason)),
            Error::Domain(m) | Error::InvalidSpec(m) => Failure::Domain(m),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

/// What a command produced: JSON text, CSV text, and whether it succeeded.
struct Rendered {
    json: String,
    csv: String,
    ok: bool,
}

fn render<T: Serialize>(header: Header, body: T, csv: String) -> Rendered {
    let csv = header.csv_comment() + &csv;
    let json = serde_json::to_string_pretty(&Envelope { header, body }).expect("serialisable output");
    Rendered { json: json + "\n", csv, ok: true }
}

fn params(cfg: &RunConfig) -> Result<SystemParams, Failure> {
    let f = &cfg.flags;
    Ok(SystemParams::new(f.need("alpha")?, f.need("a")?, f.need("b")?, f.need("c")?)?)
}

fn header_of(cfg: &RunConfig) -> Header {
    let f = &cfg.flags;
    Header::new(cfg.command.name(), f.alpha, f.a, f.b, f.c)
}

fn non_negative(key: &'static str, v: Option<f64>) -> Result<Option<f64>, Failure> {
    match v {
        Some(x) if x < 0.0 => Err(usage(key, format!("must be non-negative, got {x}")).into()),
        other => Ok(other),
    }
}

fn run_classify(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let p = params(cfg)?;
    if p.b() == 0.0 {
        return Err(usage("b", "must be nonzero for delay analysis").into());
    }
    let tau = non_negative("tau", cfg.flags.tau)?;
    let beh = classify(&p);
    let body = ClassifyBody {
        label: beh.label,
        intervals: beh.intervals.iter().map(|i| (i.lo, i.hi, i.verdict)).collect(),
        switch_count: beh.switch_count,
        provenance: beh.provenance,
        marginal_reason: beh.marginal_reason,
        tau0_rhp_count: beh.tau0_rhp_count,
        truncated: beh.truncated,
        crossings: beh.crossings.iter().map(|r| CrossingOut::new(r, None)).collect(),
        point: tau.map(|t| PointOut { tau: t, stability: stability_at(&p, t) }),
    };
    let csv = body.to_csv();
    Ok(render(header_of(cfg), body, csv))
}

fn run_crossings(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let p = params(cfg)?;
    if p.b() == 0.0 {
        return Err(usage("b", "must be nonzero for delay analysis").into());
    }
    let tau = non_negative("tau", cfg.flags.tau)?;
    let body = CrossingsBody {
        quartic: quartic_coefficients(&p),
        crossings: crossing_roots(&p)?.iter().map(|r| CrossingOut::new(r, tau)).collect(),
    };
    let csv = body.to_csv();
    Ok(render(header_of(cfg), body, csv))
}

fn c_range(cfg: &RunConfig) -> Result<CRange, Failure> {
    let f = &cfg.flags;
    match (f.c, f.c_min, f.c_max) {
        (Some(c), None, None) => {
            if f.res.is_some() {
                return Err(usage("res", "does not apply to a single --c").into());
            }
            Ok(CRange::single(c))
        }
        (Some(_), _, _) => Err(usage("c", "give either --c or --c-min/--c-max, not both").into()),
        (None, Some(lo), Some(hi)) => {
            if lo > hi {
                return Err(usage("c-min", format!("{lo} exceeds --c-max {hi}")).into());
            }
            let n = f.res.unwrap_or(DEFAULT_RES);
            if n == 0 {
                return Err(usage("res", "must be positive").into());
            }
            Ok(CRange { min: lo, max: hi, n })
        }
        (None, None, _) => Err(usage("c-min", "is required (or give --c)").into()),
        (None, Some(_), None) => Err(usage("c-max", "is required with --c-min").into()),
    }
}

fn bracket(cfg: &RunConfig, b: f64) -> Result<Bracket, Failure> {
    match (cfg.flags.a1_min, cfg.flags.a1_max) {
        (None, None) => Ok(Bracket::default_for(b)),
        (Some(lo), Some(hi)) if lo < hi => Ok(Bracket { lo, hi }),
        (Some(lo), Some(hi)) => Err(usage("a1-min", format!("{lo} must be below --a1-max {hi}")).into()),
        (Some(_), None) => Err(usage("a1-max", "is required with --a1-min").into()),
        (None, Some(_)) => Err(usage("a1-min", "is required with --a1-max").into()),
    }
}

fn alpha_b(cfg: &RunConfig) -> Result<(f64, f64), Failure> {
    let f = &cfg.flags;
    let (alpha, b) = (f.need("alpha")?, f.need("b")?);
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(usage("alpha", format!("must lie in (0, 1), got {alpha}")).into());
    }
    Ok((alpha, b))
}

fn run_curve(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let (alpha, b) = alpha_b(cfg)?;
    let name = cfg.flags.curve.as_deref().ok_or_else(|| usage("curve", "is required"))?;
    let id: CurveId = name.parse().map_err(|e: Error| usage("curve", e.to_string()))?;
    let range = c_range(cfg)?;
    let br = bracket(cfg, b)?;
    let trace = curve_in(id, b, alpha, range, br)?;
    let csv = trace.to_csv();
    let header = Header::new("curve", Some(alpha), None, Some(b), cfg.flags.c);
    Ok(render(header, trace, csv))
}

fn run_constants(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let (alpha, b) = alpha_b(cfg)?;
    let name = cfg.flags.id.as_deref().ok_or_else(|| usage("id", "is required"))?;
    let id: ConstantId = name.parse().map_err(|e: Error| usage("id", e.to_string()))?;
    let k = curve_intersection_constant(id, b, alpha)?;
    let csv = String::from("id,value\n") + &k.to_csv_rows();
    Ok(render(Header::new("constants", Some(alpha), None, Some(b), None), k, csv))
}

fn run_scan(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let (alpha, b) = alpha_b(cfg)?;
    let f = &cfg.flags;
    let (a1_min, a1_max) = (f.need("a1-min")?, f.need("a1-max")?);
    let (c_min, c_max) = (f.need("c-min")?, f.need("c-max")?);
    if a1_min >= a1_max {
        return Err(usage("a1-min", format!("{a1_min} must be below --a1-max {a1_max}")).into());
    }
    if c_min >= c_max {
        return Err(usage("c-min", format!("{c_min} must be below --c-max {c_max}")).into());
    }
    let n = f.res.unwrap_or(DEFAULT_RES);
    if n < 2 {
        return Err(usage("res", "must be at least 2").into());
    }
    let grid = ScanGrid { a1_min, a1_max, c_min, c_max, n_a1: n, n_c: n };
    let scan = scan_plane(b, alpha, grid)?;
    let csv = scan.to_csv();
    Ok(render(Header::new("scan", Some(alpha), None, Some(b), None), scan, csv))
}

fn run_simulate(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let p = params(cfg)?;
    let f = &cfg.flags;
    let tau = non_negative("tau", f.tau)?.unwrap_or(0.0);
    let t_end = f.t_end.unwrap_or_else(|| (10.0 * tau).max(50.0));
    if t_end <= 0.0 {
        return Err(usage("t-end", format!("must be positive, got {t_end}")).into());
    }
    if t_end < 10.0 * tau {
        return Err(usage("t-end", format!("must be at least 10 tau = {}", 10.0 * tau)).into());
    }
    let step = f.step.unwrap_or_else(|| default_step(tau));
    if step <= 0.0 {
        return Err(usage("step", format!("must be positive, got {step}")).into());
    }
    let spec = IvpSpec::new(p, tau, t_end).with_step(step).with_initial(f.x0.unwrap_or(1.0), 0.0);
    spec.delay_steps().map_err(|e| usage("step", e.to_string()))?;
    let run = integrate(&spec)?;
    let csv = run.to_csv();
    let body = SimulateBody {
        tau,
        t_end,
        step,
        x0: spec.x0,
        verdict: run.verdict,
        growth_ratio: run.growth_ratio.is_finite().then_some(run.growth_ratio),
        overflowed: run.overflowed,
        times: run.times,
        x: run.x_values,
    };
    Ok(render(header_of(cfg), body, csv))
}

fn run_verify(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let tolerance = cfg.flags.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    if !(tolerance > 0.0 && tolerance <= 1e-2) {
        return Err(usage("tolerance", format!("must lie in (0, 1e-2], got {tolerance}")).into());
    }
    let report = verify_tables(tolerance)?;
    let csv = report.to_csv();
    let body = VerifyBody { summary: report.summary(), passed: report.passed(), report };
    let ok = body.passed;
    let mut r = render(Header::new("verify", None, None, None, None), body, csv);
    r.ok = ok;
    Ok(r)
}

fn dispatch(cfg: &RunConfig) -> Result<Rendered, Failure> {
    match cfg.command {
        CommandKind::Classify => run_classify(cfg),
        CommandKind::Crossings => run_crossings(cfg),
        CommandKind::Curve => run_curve(cfg),
        CommandKind::Constants => run_constants(cfg),
        CommandKind::Scan => run_scan(cfg),
        CommandKind::Simulate => run_simulate(cfg),
        CommandKind::Verify => run_verify(cfg),
    }
}

/// Parse `argv`, run the command, write its output, and return the exit code.
pub fn parse_and_dispatch<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (command, flags) = cli.command.split();
    let resolved = flags
        .config
        .as_deref()
        .map(load_config)
        .transpose()
        .and_then(|config| RunConfig::resolve(command, flags.clone(), config));
    let cfg = match resolved {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let rendered = match dispatch(&cfg) {
        Ok(r) => r,
        Err(Failure::Usage(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
        Err(Failure::Domain(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            return 2;
        }
        Err(Failure::Runtime(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            return 1;
        }
    };
    let text = match cfg.format() {
        Format::Json => rendered.json,
        Format::Csv => rendered.csv,
    };
    let written = match &cfg.flags.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(m) = written {
        let _ = writeln!(stderr, "error: --out: {m}");
        return 1;
    }
    if rendered.ok {
        0
    } else {
        1
    }
}
