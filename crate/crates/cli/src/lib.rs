//! The `enrifact` command line: load a document, run one analysis, emit a
//! report.
//!
//! Exit codes: 0 when the command ran and its verdict holds (or it only
//! produces output), 1 when the verdict is false, 2 when the input does not
//! validate, 3 on usage errors.

mod args;
mod classes;
mod commands;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::{Cli, Command, Format};
pub use classes::{split_ids, PREDICATES};
pub use output::{without_timing, write_atomic, Report};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

/// Environment variable capping the worker threads.
pub const THREADS_VAR: &str = "ENRIFACT_THREADS";

fn thread_count() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("{THREADS_VAR} must be a positive integer, got `{s}`")),
        },
    }
}

/// Runs one invocation. `argv` includes the program name. The report goes
/// to `out` unless `--out` names a file.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_HOLDS
                }
                _ => {
                    eprint!("{}", e.render());
                    EXIT_USAGE
                }
            }
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let threads = match thread_count() {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let start = Instant::now();
    let outcome = match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| commands::execute(&cli.command)),
            Err(e) => {
                eprintln!("error: cannot start worker threads: {e}");
                return EXIT_USAGE;
            }
        },
        None => commands::execute(&cli.command),
    };
    let elapsed = start.elapsed();
    let (text, code) = match outcome {
        Ok(o) => {
            if let Some(doc) = o.document {
                (doc + "\n", EXIT_HOLDS)
            } else {
                let code = match o.holds {
                    Some(false) => EXIT_FALSE,
                    _ => EXIT_HOLDS,
                };
                let report = Report {
                    command: cli.command.name(),
                    argv: echo,
                    inputs: o.inputs,
                    result: o.result,
                    holds: o.holds,
                    error: None,
                    elapsed,
                };
                (report.render(cli.format), code)
            }
        }
        Err(f) => {
            let report = Report {
                command: cli.command.name(),
                argv: echo,
                inputs: Vec::new(),
                result: serde_json::Value::Null,
                holds: None,
                error: Some(f.to_value()),
                elapsed,
            };
            (report.render(cli.format), f.exit_code())
        }
    };
    let written = match &cli.out {
        Some(path) => write_atomic(path, &text),
        None => out.write_all(text.as_bytes()).and_then(|_| out.flush()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return EXIT_INVALID;
    }
    code
}
