use std::io::Write;
use std::process::ExitCode;

use xilap_cli::{execute, CliError, RunConfig};

fn fail(e: CliError) -> ExitCode {
    match &e {
        CliError::Usage(u) => {
            let _ = u.print();
        }
        other => eprintln!("xilap: {other}"),
    }
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cfg = match RunConfig::parse_from(std::env::args_os(), |k| std::env::var(k).ok()) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let out = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    let written = match &cfg.output {
        Some(path) => std::fs::write(path, &out.body),
        None => std::io::stdout().lock().write_all(out.body.as_bytes()),
    };
    if let Err(e) = written {
        return fail(CliError::Config(format!("cannot write output: {e}")));
    }
    ExitCode::from(out.exit as u8)
}
