//! Command line front end: expression parsing, command dispatch and
//! deterministic reports.

pub mod commands;
pub mod fixtures;
pub mod parse;
pub mod report;

use std::io::Write;

use clap::Parser;

pub use commands::{Cli, Command};
pub use parse::{parse_expression, parse_expression_in, ParseError};
pub use report::{emit, Format, Outcome, Report, EXIT_ERROR, EXIT_OK, EXIT_UNSUPPORTED, EXIT_USAGE};

/// Run the command line `argv` (program name first), writing the report to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let args: Vec<String> = argv.iter().skip(1).cloned().collect();
    let outcome = commands::dispatch(&cli, args);
    if outcome.code != EXIT_OK {
        if let Some(m) = outcome.report.result.get("message").and_then(|m| m.as_str()) {
            let _ = writeln!(err, "error: {m}");
        }
    }
    let _ = out.write_all(emit(&outcome.report, cli.format).as_bytes());
    outcome.code
}

/// Run and capture standard output as a string.
pub fn run_captured(argv: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("regulous").chain(argv.iter().copied()).map(String::from).collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).expect("utf-8"), String::from_utf8(err).expect("utf-8"))
}
