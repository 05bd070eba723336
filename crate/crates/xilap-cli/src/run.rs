//! Command execution.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Instant;

use xilap::verify::{
    catalog, fit_growth, metric_check, run_identity, scan_positivity, CatalogEntry, IdentityCheck, Overrides,
    ScanTarget,
};
use xilap::{Error, Result, C64};

use crate::config::{Cnum, Command, Format, RunConfig, ScanKind, DEFAULT_GROWTH_TOL};
use crate::error::CliError;
use crate::registry::{self, Bindings};
use crate::report::{csv, CheckRecord, EvalOutput, Report, Row, ScanRecord, VERSION};

/// Rendered output and the exit code for a completed run (0 or 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub exit: i32,
}

pub fn execute(cfg: &RunConfig) -> std::result::Result<Outcome, CliError> {
    let start = Instant::now();
    match cfg.command {
        Command::Eval => cmd_eval(cfg, start),
        Command::Verify => cmd_verify(cfg, start),
        Command::Scan => cmd_scan(cfg, start),
        Command::Metric => cmd_metric(cfg, start),
    }
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// `f` over `items` on up to `jobs` threads, results in input order.
fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<R>>> = items.iter().map(|_| Mutex::new(None)).collect();
    thread::scope(|s| {
        for _ in 0..jobs.clamp(1, items.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                *slots[i].lock().unwrap() = Some(r);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().unwrap().expect("every slot filled")).collect()
}

fn cmd_eval(cfg: &RunConfig, start: Instant) -> std::result::Result<Outcome, CliError> {
    let name = cfg.function.as_deref().unwrap_or_default();
    let entry = registry::lookup(name).ok_or_else(|| CliError::Config(format!("unknown function '{name}'")))?;
    let inputs: Vec<C64> = match (&cfg.grid, &cfg.points) {
        (Some(g), _) => g.points().into_iter().map(|x| C64::new(x, 0.0)).collect(),
        (None, Some(p)) => p.iter().map(|c| c.c64()).collect(),
        (None, None) => return Err(CliError::Config(String::from("eval needs --grid or --points"))),
    };
    let ctx = cfg.ctx();
    let b = Bindings::new(&cfg.params);
    let results = par_map(&inputs, cfg.jobs, |&z| registry::evaluate(entry, &ctx, z, &b));
    let mut rows = Vec::with_capacity(inputs.len());
    for (z, r) in inputs.iter().zip(results) {
        match r {
            Ok((v, err)) => rows.push(Row::new(*z, v, err)),
            Err(e) => {
                let z = Cnum { re: z.re, im: z.im };
                return Err(CliError::Eval(format!("{name} at {z}: {e}")));
            }
        }
    }
    let body = match cfg.format {
        Format::Csv => csv(&rows),
        Format::Json => {
            let out = EvalOutput { version: String::from(VERSION), config: cfg.clone(), rows, wall_ms: elapsed_ms(start) };
            let mut s = serde_json::to_string_pretty(&out).expect("rows serialize");
            s.push('\n');
            s
        }
    };
    Ok(Outcome { body, exit: 0 })
}

fn overrides(cfg: &RunConfig) -> std::result::Result<Overrides, CliError> {
    Ok(Overrides {
        seed: Some(cfg.seed),
        samples: cfg.samples,
        beta: cfg.params.beta.map(|b| b.real_only("--beta")).transpose()?,
        w: cfg.params.w,
        point: cfg.point.map(Cnum::c64),
        param: cfg.params.p.map(Cnum::c64),
        tolerance: cfg.tolerance,
    })
}

/// Run the selected identities on up to `jobs` threads; records come back in suite order.
pub fn run_suite(ids: &[&'static str], ov: &Overrides, jobs: usize) -> Vec<(&'static CatalogEntry, Result<IdentityCheck>)> {
    let entries: Vec<&'static CatalogEntry> =
        ids.iter().map(|id| catalog().iter().find(|e| e.id == *id).expect("validated id")).collect();
    let results = par_map(&entries, jobs, |e| run_identity(e.id, ov));
    entries.into_iter().zip(results).collect()
}

fn cmd_verify(cfg: &RunConfig, start: Instant) -> std::result::Result<Outcome, CliError> {
    let ov = overrides(cfg)?;
    let pinned = ov.beta.is_some() || ov.w.is_some() || ov.point.is_some() || ov.param.is_some();
    let ids = cfg.suite.as_ref().map(|s| s.ids()).unwrap_or_default();
    let mut report = Report::new(cfg);
    for (entry, res) in run_suite(&ids, &ov, cfg.jobs) {
        match res {
            Ok(check) => report.checks.push(CheckRecord::from_check(&check)),
            Err(e @ (Error::Domain | Error::Strip)) if pinned => {
                return Err(CliError::Config(format!("{}: overrides outside the identity's domain: {e}", entry.id)));
            }
            Err(e) => report.checks.push(CheckRecord::from_error(entry, e)),
        }
    }
    report.wall_ms = elapsed_ms(start);
    let exit = if report.pass() { 0 } else { 1 };
    Ok(Outcome { body: report.to_json(), exit })
}

fn cmd_scan(cfg: &RunConfig, start: Instant) -> std::result::Result<Outcome, CliError> {
    let kind = cfg.kind.ok_or_else(|| CliError::Config(String::from("scan needs --kind")))?;
    let grid = cfg.grid.ok_or_else(|| CliError::Config(String::from("scan needs --grid")))?;
    let beta = cfg.params.beta.map_or(Ok(0.25), |b| b.real_only("--beta"))?;
    let name = cfg.function.as_deref().unwrap_or_default();
    let target = ScanTarget::parse(name, beta, cfg.params.w.unwrap_or(0), cfg.params.k.unwrap_or(0))
        .map_err(|_| CliError::Config(format!("unknown scan target '{name}'")))?;
    let ev = target.evaluator().map_err(|e| CliError::Config(format!("{}: {e}", target.name())))?;
    let last = Mutex::new(f64::NAN);
    let tracked = |x: f64| {
        *last.lock().unwrap() = x;
        ev(x)
    };
    let label = target.name();
    let res = match kind {
        ScanKind::Growth => fit_growth(&label, grid.start, grid.stop, grid.count, tracked),
        _ => scan_positivity(&label, grid.points(), tracked),
    }
    .map_err(|e| CliError::Eval(format!("{label} at {}: {e}", last.lock().unwrap())))?;
    let body = match cfg.format {
        Format::Csv => {
            let rows: Vec<Row> =
                res.grid.iter().zip(&res.values).map(|(&x, &v)| Row::new(C64::new(x, 0.0), C64::new(v, 0.0), 0.0)).collect();
            csv(&rows)
        }
        Format::Json => String::new(),
    };
    let rec = ScanRecord::new(kind, &res, cfg.expect, cfg.tolerance.unwrap_or(DEFAULT_GROWTH_TOL));
    let exit = if rec.pass { 0 } else { 1 };
    if cfg.format == Format::Csv {
        return Ok(Outcome { body, exit });
    }
    let mut report = Report::new(cfg);
    report.scans.push(rec);
    report.wall_ms = elapsed_ms(start);
    Ok(Outcome { body: report.to_json(), exit })
}

fn cmd_metric(cfg: &RunConfig, start: Instant) -> std::result::Result<Outcome, CliError> {
    let x = cfg.params.x.ok_or_else(|| CliError::Config(String::from("metric needs --x")))?;
    let beta = cfg.params.beta.map_or(Ok(0.25), |b| b.real_only("--beta"))?;
    let triples = cfg.samples.unwrap_or(crate::config::DEFAULT_METRIC_SAMPLES);
    let rep = match metric_check(x, beta, triples, cfg.seed) {
        Ok(r) => r,
        Err(Error::Domain) => return Err(CliError::Config(format!("metric undefined at x = {x}, beta = {beta}"))),
        Err(e) => return Err(CliError::Eval(format!("metric at x = {x}: {e}"))),
    };
    let entry = catalog().iter().find(|e| e.id == "ID-23").expect("metric identity in catalog");
    let mut report = Report::new(cfg);
    report.checks.push(CheckRecord::from_metric(entry, &rep));
    report.wall_ms = elapsed_ms(start);
    let exit = if report.pass() { 0 } else { 1 };
    Ok(Outcome { body: report.to_json(), exit })
}
