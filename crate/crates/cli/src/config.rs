//! Command-line flags, the optional JSON config file, and their validation.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "fdde", version, about = "Stability analysis of the two-term fractional delay equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Behaviour label and stability intervals in τ for one parameter set.
    Classify(Flags),
    /// Crossing frequencies, directions and delay ladders.
    Crossings(Flags),
    /// Trace one boundary curve a1(c) over a range of c.
    Curve(Flags),
    /// One intersection constant, such as c0.
    Constants(Flags),
    /// Classify every cell of an (a1, c) grid.
    Scan(Flags),
    /// Integrate the equation in time and report a growth verdict.
    Simulate(Flags),
    /// Replay the published tables and the self-checks.
    Verify(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Classify,
    Crossings,
    Curve,
    Constants,
    Scan,
    Simulate,
    Verify,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Classify => "classify",
            CommandKind::Crossings => "crossings",
            CommandKind::Curve => "curve",
            CommandKind::Constants => "constants",
            CommandKind::Scan => "scan",
            CommandKind::Simulate => "simulate",
            CommandKind::Verify => "verify",
        }
    }

    /// Keys each command reads, in flag spelling.
    fn keys(self) -> &'static [&'static str] {
        match self {
            CommandKind::Classify => &["alpha", "a", "b", "c", "tau"],
            CommandKind::Crossings => &["alpha", "a", "b", "c", "tau"],
            CommandKind::Curve => &["alpha", "b", "c", "c-min", "c-max", "res", "curve", "a1-min", "a1-max"],
            CommandKind::Constants => &["alpha", "b", "id"],
            CommandKind::Scan => &["alpha", "b", "a1-min", "a1-max", "c-min", "c-max", "res"],
            CommandKind::Simulate => &["alpha", "a", "b", "c", "tau", "t-end", "step", "x0"],
            CommandKind::Verify => &["tolerance"],
        }
    }
}

impl Command {
    pub fn split(self) -> (CommandKind, Flags) {
        match self {
            Command::Classify(f) => (CommandKind::Classify, f),
            Command::Crossings(f) => (CommandKind::Crossings, f),
            Command::Curve(f) => (CommandKind::Curve, f),
            Command::Constants(f) => (CommandKind::Constants, f),
            Command::Scan(f) => (CommandKind::Scan, f),
            Command::Simulate(f) => (CommandKind::Simulate, f),
            Command::Verify(f) => (CommandKind::Verify, f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Every flag; a command rejects flags it does not read.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Flags {
    /// Fractional order, in (0, 1).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Coefficient of the undelayed term.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Coefficient of the delayed term.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Coefficient of the order-2α term (nonzero).
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Delay: a point to evaluate, the ladder cut-off, or the simulated delay.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    #[arg(long = "a1-min", allow_hyphen_values = true)]
    pub a1_min: Option<f64>,
    #[arg(long = "a1-max", allow_hyphen_values = true)]
    pub a1_max: Option<f64>,
    #[arg(long = "c-min", allow_hyphen_values = true)]
    pub c_min: Option<f64>,
    #[arg(long = "c-max", allow_hyphen_values = true)]
    pub c_max: Option<f64>,
    /// Number of samples along c (curve) or per axis (scan).
    #[arg(long)]
    pub res: Option<usize>,
    /// Curve name: gamma1 … gamma18.
    #[arg(long)]
    pub curve: Option<String>,
    /// Constant name: c0, c1, c2, c3, c5, c6 or c7.
    #[arg(long)]
    pub id: Option<String>,
    #[arg(long = "t-end", allow_hyphen_values = true)]
    pub t_end: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub step: Option<f64>,
    /// Constant history value.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    /// Relative tolerance for `verify`, in (0, 1e-2].
    #[arg(long, allow_hyphen_values = true)]
    pub tolerance: Option<f64>,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

/// A validation failure, reported with exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError {
    pub flag: String,
    pub reason: String,
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "--{}: {}", self.flag, self.reason)
    }
}

pub fn usage(flag: &str, reason: impl Into<String>) -> UsageError {
    UsageError { flag: flag.to_string(), reason: reason.into() }
}

impl Flags {
    /// `(key, is set)` for every flag that carries a command parameter.
    fn presence(&self) -> [(&'static str, bool); 16] {
        [
            ("alpha", self.alpha.is_some()),
            ("a", self.a.is_some()),
            ("b", self.b.is_some()),
            ("c", self.c.is_some()),
            ("tau", self.tau.is_some()),
            ("a1-min", self.a1_min.is_some()),
            ("a1-max", self.a1_max.is_some()),
            ("c-min", self.c_min.is_some()),
            ("c-max", self.c_max.is_some()),
            ("res", self.res.is_some()),
            ("curve", self.curve.is_some()),
            ("id", self.id.is_some()),
            ("t-end", self.t_end.is_some()),
            ("step", self.step.is_some()),
            ("x0", self.x0.is_some()),
            ("tolerance", self.tolerance.is_some()),
        ]
    }

    fn numbers(&self) -> [(&'static str, Option<f64>); 13] {
        [
            ("alpha", self.alpha),
            ("a", self.a),
            ("b", self.b),
            ("c", self.c),
            ("tau", self.tau),
            ("a1-min", self.a1_min),
            ("a1-max", self.a1_max),
            ("c-min", self.c_min),
            ("c-max", self.c_max),
            ("t-end", self.t_end),
            ("step", self.step),
            ("x0", self.x0),
            ("tolerance", self.tolerance),
        ]
    }

    /// Fill unset fields from `base`.
    pub fn or(self, base: Flags) -> Flags {
        Flags {
            alpha: self.alpha.or(base.alpha),
            a: self.a.or(base.a),
            b: self.b.or(base.b),
            c: self.c.or(base.c),
            tau: self.tau.or(base.tau),
            a1_min: self.a1_min.or(base.a1_min),
            a1_max: self.a1_max.or(base.a1_max),
            c_min: self.c_min.or(base.c_min),
            c_max: self.c_max.or(base.c_max),
            res: self.res.or(base.res),
            curve: self.curve.or(base.curve),
            id: self.id.or(base.id),
            t_end: self.t_end.or(base.t_end),
            step: self.step.or(base.step),
            x0: self.x0.or(base.x0),
            tolerance: self.tolerance.or(base.tolerance),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            config: self.config,
        }
    }

    /// Keep only the keys `command` reads.
    fn restrict(mut self, command: CommandKind) -> Flags {
        let keep = command.keys();
        let k = |key: &str| keep.contains(&key);
        if !k("alpha") { self.alpha = None; }
        if !k("a") { self.a = None; }
        if !k("b") { self.b = None; }
        if !k("c") { self.c = None; }
        if !k("tau") { self.tau = None; }
        if !k("a1-min") { self.a1_min = None; }
        if !k("a1-max") { self.a1_max = None; }
        if !k("c-min") { self.c_min = None; }
        if !k("c-max") { self.c_max = None; }
        if !k("res") { self.res = None; }
        if !k("curve") { self.curve = None; }
        if !k("id") { self.id = None; }
        if !k("t-end") { self.t_end = None; }
        if !k("step") { self.step = None; }
        if !k("x0") { self.x0 = None; }
        if !k("tolerance") { self.tolerance = None; }
        self
    }

    pub fn need(&self, key: &'static str) -> Result<f64, UsageError> {
        self.numbers()
            .into_iter()
            .find(|(k, _)| *k == key)
            .and_then(|(_, v)| v)
            .ok_or_else(|| usage(key, "is required"))
    }
}

/// A fully resolved invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(flatten)]
    pub flags: Flags,
}

impl RunConfig {
    /// Merge flags over `config` (if any), reject flags the command does
    /// not read, and check that every number is finite.
    pub fn resolve(command: CommandKind, flags: Flags, config: Option<Flags>) -> Result<Self, UsageError> {
        for (key, set) in flags.presence() {
            if set && !command.keys().contains(&key) {
                return Err(usage(key, format!("is not used by `{}`", command.name())));
            }
        }
        let merged = match config {
            Some(base) => flags.or(base.restrict(command)),
            None => flags,
        };
        for (key, v) in merged.numbers() {
            if let Some(x) = v {
                if !x.is_finite() {
                    return Err(usage(key, format!("must be finite, got {x}")));
                }
            }
        }
        Ok(RunConfig { command, flags: merged })
    }

    pub fn format(&self) -> Format {
        self.flags.format.unwrap_or_default()
    }
}

/// Read a JSON config file.
pub fn load_config(path: &std::path::Path) -> Result<Flags, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage("config", format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage("config", format!("{}: {e}", path.display())))
}
