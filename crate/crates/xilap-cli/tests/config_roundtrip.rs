use proptest::option;
use proptest::prelude::*;
use xilap_cli::config::{Cnum, Command, Format, GridSpec, Params, RunConfig, ScanKind, Suite, Tier};
use xilap_cli::registry::registry;

fn no_env(_: &str) -> Option<String> {
    None
}

fn real() -> impl Strategy<Value = f64> {
    prop_oneof![-1e3f64..1e3, -1e-3f64..1e-3, any::<f64>().prop_filter("finite", |x| x.is_finite())]
}

fn cnum() -> impl Strategy<Value = Cnum> {
    prop_oneof![real().prop_map(Cnum::real), (real(), real()).prop_map(|(re, im)| Cnum { re, im })]
}

fn grid() -> impl Strategy<Value = GridSpec> {
    (real(), 1e-6f64..1e3, 2usize..5000, any::<bool>()).prop_filter_map("valid grid", |(a, span, n, log)| {
        let start = if log { a.abs().max(1e-9) } else { a };
        GridSpec::new(start, start + span.max(start.abs() * 1e-6), n, log).ok()
    })
}

fn params() -> impl Strategy<Value = Params> {
    (
        option::of(cnum()),
        option::of(0u32..6),
        option::of(-5i32..6),
        option::of(0u32..6),
        option::of(cnum()),
        option::of(cnum()),
        option::of(cnum()),
        option::of(real()),
    )
        .prop_map(|(beta, w, k, m, alpha, p, u, x)| Params { beta, w, k, m, alpha, p, u, x })
}

fn common() -> impl Strategy<Value = (Tier, usize, u64, usize, Option<String>)> {
    (
        prop_oneof![Just(Tier::Standard), Just(Tier::Extended)],
        2usize..10_000_000,
        any::<u64>(),
        1usize..16,
        option::of("[a-z][a-z0-9_]{0,8}\\.(json|csv)"),
    )
}

fn blank(command: Command, params: Params, c: (Tier, usize, u64, usize, Option<String>), format: Format) -> RunConfig {
    RunConfig {
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
        precision: c.0,
        sieve_bound: c.1,
        seed: c.2,
        jobs: c.3,
        output: c.4,
        format,
    }
}

fn eval_config() -> impl Strategy<Value = RunConfig> {
    let names: Vec<&'static str> = registry().iter().map(|e| e.name).collect();
    (
        proptest::sample::select(names),
        params(),
        prop_oneof![grid().prop_map(Ok), prop::collection::vec(cnum(), 1..6).prop_map(Err)],
        common(),
        any::<bool>(),
    )
        .prop_map(|(f, p, src, c, csv)| {
            let mut cfg = blank(Command::Eval, p, c, if csv { Format::Csv } else { Format::Json });
            cfg.function = Some(f.to_string());
            match src {
                Ok(g) => cfg.grid = Some(g),
                Err(pts) => cfg.points = Some(pts),
            }
            cfg
        })
}

fn verify_config() -> impl Strategy<Value = RunConfig> {
    let ids = prop::collection::vec(1u32..=25, 1..6).prop_map(|v| Suite::Ids(v.iter().map(|i| format!("ID-{i:02}")).collect()));
    (
        prop_oneof![Just(Suite::All), ids],
        params(),
        real(),
        option::of(cnum()),
        option::of(25usize..500),
        option::of(1e-15f64..1.0),
        common(),
    )
        .prop_map(|(suite, mut p, b, point, samples, tol, c)| {
            p.beta = p.beta.map(|_| Cnum::real(b));
            let mut cfg = blank(Command::Verify, p, c, Format::Json);
            cfg.suite = Some(suite);
            cfg.point = point;
            cfg.samples = samples;
            cfg.tolerance = tol;
            cfg
        })
}

fn scan_config() -> impl Strategy<Value = RunConfig> {
    let names = ["P4w", "P0", "T0ir", "H", "lk", "l0", "r2probe", "decreasing"];
    (
        prop_oneof![Just(ScanKind::Positivity), Just(ScanKind::Monotone), Just(ScanKind::Growth)],
        proptest::sample::select(names.to_vec()),
        params(),
        real(),
        grid(),
        option::of(real()),
        option::of(1e-6f64..1.0),
        common(),
        any::<bool>(),
    )
        .prop_map(|(kind, f, mut p, b, mut g, expect, tol, c, csv)| {
            p.beta = p.beta.map(|_| Cnum::real(b));
            if kind == ScanKind::Growth && !g.log {
                g = GridSpec::new(1e-3, 1.0, g.count, true).unwrap();
            }
            let mut cfg = blank(Command::Scan, p, c, if csv { Format::Csv } else { Format::Json });
            cfg.kind = Some(kind);
            cfg.function = Some(f.to_string());
            cfg.grid = Some(g);
            cfg.expect = expect;
            cfg.tolerance = tol;
            cfg
        })
}

fn metric_config() -> impl Strategy<Value = RunConfig> {
    (params(), 4.01f64..1e3, any::<bool>(), 0.0f64..5.0, 1usize..100_000, common())
        .prop_filter("x off multiples of four", |(_, x, ..)| x % 4.0 != 0.0)
        .prop_map(|(mut p, x, neg, beta, samples, c)| {
            p.x = Some(if neg { -x } else { x });
            p.beta = Some(Cnum::real(beta));
            let mut cfg = blank(Command::Metric, p, c, Format::Json);
            cfg.samples = Some(samples);
            cfg
        })
}

fn any_config() -> impl Strategy<Value = RunConfig> {
    prop_oneof![eval_config(), verify_config(), scan_config(), metric_config()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn args_round_trip(cfg in any_config()) {
        prop_assume!(cfg.validate().is_ok());
        let args = cfg.to_args();
        let back = RunConfig::parse_from(&args, no_env).map_err(|e| TestCaseError::fail(format!("{args:?}: {e}")))?;
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn json_round_trip(cfg in any_config()) {
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, cfg);
    }
}

#[test]
fn defaults_are_filled_and_echoed() {
    let cfg = RunConfig::parse_from(["xilap", "scan", "--kind", "monotone", "--fn", "P0"], no_env).unwrap();
    assert_eq!(cfg.grid.unwrap().to_string(), "0:3.141592653589793:1000");
    assert_eq!((cfg.seed, cfg.jobs, cfg.format), (42, 1, Format::Json));
    assert_eq!(RunConfig::parse_from(cfg.to_args(), no_env).unwrap(), cfg);
    let m = RunConfig::parse_from(["xilap", "metric", "--x", "-5"], no_env).unwrap();
    assert_eq!((m.params.beta, m.samples), (Some(Cnum::real(0.25)), Some(10_000)));
}
