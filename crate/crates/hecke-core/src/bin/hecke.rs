//! Command-line entry point: one verification task per run, JSON report
//! on stdout (or --out FILE), human-readable summary on stderr.

use std::process::ExitCode;

use hecke_core::cli;
use hecke_core::report::Check;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let rc = match cli::parse_args(&args) {
        Ok(rc) => rc,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let (json, code) = cli::execute(&rc);
    match &rc.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, format!("{json}\n")) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{json}"),
    }
    // summary to stderr
    if let Ok(report) = serde_json::from_str::<serde_json::Value>(&json) {
        if let Some(checks) = report.get("checks").and_then(|c| c.as_array()) {
            let parsed: Vec<Check> = checks
                .iter()
                .filter_map(|c| serde_json::from_value(c.clone()).ok())
                .collect();
            let passed = parsed.iter().filter(|c| c.passed()).count();
            eprintln!("{} checks, {} passed", parsed.len(), passed);
            for c in parsed.iter().filter(|c| !c.passed()) {
                eprintln!("FAIL {}: {}", c.name, c.detail);
            }
        } else if let Some(err) = report.get("error") {
            eprintln!("error: {err}");
        }
    }
    ExitCode::from(code as u8)
}
