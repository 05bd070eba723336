//! Run configuration: argument parsing, defaults, validation and re-emission.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use xilap::verify::{catalog, linear_grid, log_grid, ScanTarget, MIN_SAMPLES};
use xilap::C64;

use crate::error::CliError;
use crate::registry;

pub const SIEVE_ENV: &str = "XILAP_SIEVE_BOUND";
pub const PRECISION_ENV: &str = "XILAP_PRECISION";
pub const DEFAULT_SIEVE_BOUND: usize = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_METRIC_SAMPLES: usize = 10_000;
pub const DEFAULT_GROWTH_TOL: f64 = 0.1;

/// Real number; accepts `pi`, `-pi`, `2pi` and `2*pi` besides plain decimals.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let v = if let Some(head) = t.strip_suffix("pi") {
        let head = head.strip_suffix('*').unwrap_or(head);
        match head {
            "" | "+" => PI,
            "-" => -PI,
            h => h.parse::<f64>().map_err(|e| format!("bad number '{s}': {e}"))? * PI,
        }
    } else {
        t.parse::<f64>().map_err(|e| format!("bad number '{s}': {e}"))?
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("non-finite number '{s}'"))
    }
}

/// Complex parameter, written `1.3+0.2i` or as a real.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cnum {
    pub re: f64,
    pub im: f64,
}

impl Cnum {
    pub fn real(re: f64) -> Self {
        Cnum { re, im: 0.0 }
    }

    pub fn c64(self) -> C64 {
        C64::new(self.re, self.im)
    }

    /// The real part, or an error naming `what` when the imaginary part is nonzero.
    pub fn real_only(self, what: &str) -> Result<f64, CliError> {
        if self.im == 0.0 {
            Ok(self.re)
        } else {
            Err(CliError::Config(format!("{what} must be real, got {self}")))
        }
    }
}

impl FromStr for Cnum {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Ok(re) = parse_real(s) {
            return Ok(Cnum::real(re));
        }
        let z = C64::from_str(s.trim()).map_err(|_| format!("bad complex number '{s}'"))?;
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(format!("non-finite number '{s}'"));
        }
        Ok(Cnum { re: z.re, im: z.im })
    }
}

impl fmt::Display for Cnum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0.0 && self.im.is_sign_positive() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}{:+}i", self.re, self.im)
        }
    }
}

/// Comma-separated list of complex points.
#[derive(Debug, Clone, PartialEq)]
pub struct PointList(pub Vec<Cnum>);

impl FromStr for PointList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let pts = s.split(',').map(Cnum::from_str).collect::<Result<Vec<_>, _>>()?;
        if pts.is_empty() {
            return Err(String::from("empty point list"));
        }
        Ok(PointList(pts))
    }
}

/// `start:stop:count`, prefixed with `log:` for geometric spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn new(start: f64, stop: f64, count: usize, log: bool) -> Result<Self, String> {
        if count < 2 {
            return Err(format!("grid count must be at least 2, got {count}"));
        }
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(format!("grid needs finite start < stop, got {start}:{stop}"));
        }
        if log && !(start > 0.0) {
            return Err(String::from("log grid needs a positive start"));
        }
        Ok(GridSpec { start, stop, count, log })
    }

    pub fn points(&self) -> Vec<f64> {
        let g = if self.log {
            log_grid(self.start, self.stop, self.count)
        } else {
            linear_grid(self.start, self.stop, self.count)
        };
        g.expect("grid validated at construction")
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (log, body) = match s.trim().strip_prefix("log:") {
            Some(b) => (true, b),
            None => (false, s.trim()),
        };
        let parts: Vec<&str> = body.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid '{s}' is not start:stop:count"));
        }
        let count = parts[2].trim().parse::<usize>().map_err(|e| format!("bad grid count '{}': {e}", parts[2]))?;
        GridSpec::new(parse_real(parts[0])?, parse_real(parts[1])?, count, log)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = if self.log { "log:" } else { "" };
        write!(f, "{prefix}{}:{}:{}", self.start, self.stop, self.count)
    }
}

impl From<GridSpec> for String {
    fn from(g: GridSpec) -> String {
        g.to_string()
    }
}

impl TryFrom<String> for GridSpec {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

/// `all` or a comma-separated list of catalog ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Suite {
    All,
    Ids(Vec<String>),
}

impl Suite {
    pub fn ids(&self) -> Vec<&'static str> {
        match self {
            Suite::All => catalog().iter().map(|e| e.id).collect(),
            Suite::Ids(ids) => ids
                .iter()
                .map(|id| catalog().iter().find(|e| e.id == id).map(|e| e.id).expect("validated id"))
                .collect(),
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(Suite::All);
        }
        let mut ids = Vec::new();
        for part in s.split(',') {
            let id = part.trim().to_ascii_uppercase();
            if !catalog().iter().any(|e| e.id == id) {
                return Err(format!("unknown identity '{}'", part.trim()));
            }
            ids.push(id);
        }
        Ok(Suite::Ids(ids))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Suite::All => f.write_str("all"),
            Suite::Ids(ids) => f.write_str(&ids.join(",")),
        }
    }
}

impl From<Suite> for String {
    fn from(s: Suite) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for Suite {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

/// `default` or a positive tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance(pub Option<f64>);

impl FromStr for Tolerance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim() == "default" {
            return Ok(Tolerance(None));
        }
        let t = parse_real(s)?;
        if t > 0.0 {
            Ok(Tolerance(Some(t)))
        } else {
            Err(format!("tolerance must be positive, got {s}"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Eval,
    Verify,
    Scan,
    Metric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ScanKind {
    Positivity,
    Monotone,
    Growth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Standard,
    Extended,
}

impl FromStr for Tier {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Tier as ValueEnum>::from_str(s.trim(), true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

fn name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

/// Named parameter bindings.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize, Args)]
pub struct Params {
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<Cnum>,
    #[arg(long)]
    pub w: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<i32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<Cnum>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<Cnum>,
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<Cnum>,
    #[arg(long, value_parser = parse_real, allow_negative_numbers = true)]
    pub x: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides XILAP_PRECISION.
    #[arg(long, value_enum)]
    pub precision: Option<Tier>,
    /// Overrides XILAP_SIEVE_BOUND.
    #[arg(long)]
    pub sieve_bound: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub output: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Parser)]
#[command(name = "xilap", version, about = "Evaluate, verify and scan the xi-function transform densities")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Evaluate a registered function on a grid or at listed points.
    Eval {
        #[arg(long = "fn")]
        function: String,
        #[command(flatten)]
        params: Params,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<GridSpec>,
        #[arg(long, allow_hyphen_values = true)]
        points: Option<PointList>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run catalog identities and write a report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[command(flatten)]
        params: Params,
        /// Pin the main variable of every selected identity.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<Cnum>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        tol: Option<Tolerance>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Positivity, monotonicity or growth-order scan of a real function.
    Scan {
        #[arg(long, value_enum)]
        kind: ScanKind,
        #[arg(long = "fn")]
        function: String,
        #[command(flatten)]
        params: Params,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<GridSpec>,
        /// Expected growth exponent.
        #[arg(long, allow_hyphen_values = true)]
        expect: Option<f64>,
        #[arg(long)]
        tol: Option<Tolerance>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sample the metric axioms of t ↦ |1 − n(x)/n(x+it)|^{1/2}.
    Metric {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

/// Fully resolved run configuration, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub function: Option<String>,
    pub kind: Option<ScanKind>,
    pub params: Params,
    pub grid: Option<GridSpec>,
    pub points: Option<Vec<Cnum>>,
    pub suite: Option<Suite>,
    pub point: Option<Cnum>,
    pub samples: Option<usize>,
    pub tolerance: Option<f64>,
    pub expect: Option<f64>,
    pub precision: Tier,
    pub sieve_bound: usize,
    pub seed: u64,
    pub jobs: usize,
    pub output: Option<String>,
    pub format: Format,
}

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    /// Parse `args` (program name first), reading environment overrides through `env`.
    pub fn parse_from<I, S>(args: I, env: impl Fn(&str) -> Option<String>) -> Result<Self, CliError>
    where
        I: IntoIterator<Item = S>,
        S: Into<std::ffi::OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args).map_err(CliError::Usage)?;
        RunConfig::from_cli(cli, env)
    }

    pub fn from_cli(cli: Cli, env: impl Fn(&str) -> Option<String>) -> Result<Self, CliError> {
        let blank = |command, params, common: CommonArgs| -> Result<RunConfig, CliError> {
            let precision = match common.precision {
                Some(p) => p,
                None => match env(PRECISION_ENV) {
                    Some(s) => s.parse().map_err(|e| config(format!("{PRECISION_ENV}: {e}")))?,
                    None => Tier::Standard,
                },
            };
            let sieve_bound = match common.sieve_bound {
                Some(n) => n,
                None => match env(SIEVE_ENV) {
                    Some(s) => s.trim().parse().map_err(|e| config(format!("{SIEVE_ENV}: {e}")))?,
                    None => DEFAULT_SIEVE_BOUND,
                },
            };
            Ok(RunConfig {
                command,
                function: None,
                kind: None,
                params,
                grid: None,
                points: None,
                suite: None,
                point: None,
                samples: None,
                tolerance: None,
                expect: None,
                precision,
                sieve_bound,
                seed: common.seed.unwrap_or(DEFAULT_SEED),
                jobs: common.jobs,
                output: common.output,
                format: common.format.unwrap_or(if command == Command::Eval { Format::Csv } else { Format::Json }),
            })
        };
        let cfg = match cli.cmd {
            Cmd::Eval { function, params, grid, points, common } => {
                let mut c = blank(Command::Eval, params, common)?;
                c.function = Some(function);
                c.grid = grid;
                c.points = points.map(|p| p.0);
                c
            }
            Cmd::Verify { suite, params, point, samples, tol, common } => {
                let mut c = blank(Command::Verify, params, common)?;
                c.suite = Some(suite);
                c.point = point;
                c.samples = samples;
                c.tolerance = tol.and_then(|t| t.0);
                c
            }
            Cmd::Scan { kind, function, params, grid, expect, tol, common } => {
                let mut c = blank(Command::Scan, params, common)?;
                c.kind = Some(kind);
                c.function = Some(function);
                c.grid = Some(match grid {
                    Some(g) => g,
                    None => default_scan_grid(kind),
                });
                c.expect = expect;
                c.tolerance = tol.and_then(|t| t.0);
                c
            }
            Cmd::Metric { params, samples, common } => {
                let mut c = blank(Command::Metric, params, common)?;
                c.params.beta = Some(params.beta.unwrap_or(Cnum::real(0.25)));
                c.samples = Some(samples.unwrap_or(DEFAULT_METRIC_SAMPLES));
                c
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.jobs == 0 {
            return Err(config("--jobs must be at least 1"));
        }
        if self.sieve_bound < 2 {
            return Err(config("sieve bound must be at least 2"));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(config("tolerance must be positive"));
            }
        }
        if let Some(g) = self.grid {
            GridSpec::new(g.start, g.stop, g.count, g.log).map_err(config)?;
        }
        match self.command {
            Command::Eval => {
                let f = self.function.as_deref().unwrap_or("");
                if registry::lookup(f).is_none() {
                    return Err(config(format!("unknown function '{f}'")));
                }
                match (&self.grid, &self.points) {
                    (Some(_), Some(_)) => return Err(config("give either --grid or --points, not both")),
                    (None, None) => return Err(config("eval needs --grid or --points")),
                    _ => {}
                }
            }
            Command::Verify => {
                if self.format != Format::Json {
                    return Err(config("verify writes JSON only"));
                }
                if let Some(n) = self.samples {
                    if n < MIN_SAMPLES {
                        return Err(config(format!("--samples must be at least {MIN_SAMPLES}")));
                    }
                }
                if let Some(b) = self.params.beta {
                    b.real_only("--beta")?;
                }
            }
            Command::Scan => {
                let beta = self.params.beta.map_or(Ok(0.25), |b| b.real_only("--beta"))?;
                let f = self.function.as_deref().unwrap_or("");
                ScanTarget::parse(f, beta, self.params.w.unwrap_or(0), self.params.k.unwrap_or(0))
                    .map_err(|_| config(format!("unknown scan target '{f}'")))?;
                if self.kind == Some(ScanKind::Growth) && !self.grid.is_some_and(|g| g.log) {
                    return Err(config("growth fits need a log: grid"));
                }
            }
            Command::Metric => {
                if self.format != Format::Json {
                    return Err(config("metric writes JSON only"));
                }
                let x = self.params.x.ok_or_else(|| config("metric needs --x"))?;
                if x.abs() <= 4.0 || x % 4.0 == 0.0 {
                    return Err(config(format!("x = {x} is excluded: need |x| > 4 and x not a multiple of 4")));
                }
                let beta = self.params.beta.map_or(Ok(0.25), |b| b.real_only("--beta"))?;
                if !(beta >= 0.0) {
                    return Err(config("metric needs beta ≥ 0"));
                }
                if self.samples == Some(0) {
                    return Err(config("--samples must be positive"));
                }
            }
        }
        Ok(())
    }

    /// Command line that parses back to this configuration.
    pub fn to_args(&self) -> Vec<String> {
        let mut a = vec![String::from("xilap"), name(&self.command)];
        let mut push = |flag: &str, v: String| {
            a.push(format!("--{flag}"));
            a.push(v);
        };
        if let Some(k) = self.kind {
            push("kind", name(&k));
        }
        if let Some(f) = &self.function {
            push("fn", f.clone());
        }
        if let Some(s) = &self.suite {
            push("suite", s.to_string());
        }
        let p = &self.params;
        let cs = [("beta", p.beta), ("alpha", p.alpha), ("p", p.p), ("u", p.u)];
        for (flag, v) in cs {
            if let Some(v) = v {
                push(flag, v.to_string());
            }
        }
        if let Some(w) = p.w {
            push("w", w.to_string());
        }
        if let Some(k) = p.k {
            push("k", k.to_string());
        }
        if let Some(m) = p.m {
            push("m", m.to_string());
        }
        if let Some(x) = p.x {
            push("x", x.to_string());
        }
        if let Some(g) = self.grid {
            push("grid", g.to_string());
        }
        if let Some(pts) = &self.points {
            push("points", pts.iter().map(Cnum::to_string).collect::<Vec<_>>().join(","));
        }
        if let Some(pt) = self.point {
            push("point", pt.to_string());
        }
        if let Some(n) = self.samples {
            push("samples", n.to_string());
        }
        if let Some(t) = self.tolerance {
            push("tol", t.to_string());
        }
        if let Some(e) = self.expect {
            push("expect", e.to_string());
        }
        push("precision", name(&self.precision));
        push("sieve-bound", self.sieve_bound.to_string());
        push("seed", self.seed.to_string());
        push("jobs", self.jobs.to_string());
        if let Some(o) = &self.output {
            push("output", o.clone());
        }
        push("format", name(&self.format));
        a
    }

    pub fn ctx(&self) -> xilap::Ctx {
        let precision = match self.precision {
            Tier::Standard => xilap::Precision::Standard,
            Tier::Extended => xilap::Precision::Extended,
        };
        xilap::Ctx { precision, sieve_bound: self.sieve_bound, ..Default::default() }
    }
}

pub fn default_scan_grid(kind: ScanKind) -> GridSpec {
    match kind {
        ScanKind::Positivity => GridSpec { start: 1e-3, stop: 50.0, count: 2000, log: true },
        ScanKind::Monotone => GridSpec { start: 0.0, stop: PI, count: 1000, log: false },
        ScanKind::Growth => GridSpec { start: 1e-3, stop: 1e-2, count: 100, log: true },
    }
}
