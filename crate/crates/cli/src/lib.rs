//! Session files, command dispatch and JSON reports for `deltagroup`.

pub mod interp;
pub mod report;
pub mod session;

use std::time::Instant;

use deltagroup::{FieldError, GaugeError, GroebnerError, OreError, SeriesError};
use thiserror::Error;

pub use interp::{Interpreter, Options, Value};
pub use report::{Payload, Report};
pub use session::Session;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Ore(#[from] OreError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Gauge(#[from] GaugeError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn field_code(e: &FieldError) -> i32 {
    match e {
        FieldError::DivisionByZero => 2,
        _ => 1,
    }
}

fn ore_code(e: &OreError) -> i32 {
    match e {
        OreError::SpecMismatch | OreError::ZeroOperator => 2,
        OreError::Field(f) => field_code(f),
        _ => 1,
    }
}

fn groebner_code(e: &GroebnerError) -> i32 {
    match e {
        GroebnerError::ResourceExceeded { .. } => 3,
        GroebnerError::Ore(o) => ore_code(o),
        _ => 2,
    }
}

fn gauge_code(e: &GaugeError) -> i32 {
    match e {
        GaugeError::Groebner(g) => groebner_code(g),
        _ => 2,
    }
}

impl CliError {
    /// 0 ok, 1 parse or spec error, 2 invalid input, 3 budget exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax { .. } | CliError::Io { .. } => 1,
            CliError::Field(e) => field_code(e),
            CliError::Ore(e) => ore_code(e),
            CliError::Groebner(e) => groebner_code(e),
            CliError::Gauge(e) => gauge_code(e),
            CliError::Series(e) => match e {
                SeriesError::Gauge(g) => gauge_code(g),
                SeriesError::Groebner(g) => groebner_code(g),
                SeriesError::Ore(o) => ore_code(o),
                _ => 2,
            },
            CliError::Invalid(_) => 2,
        }
    }
}

/// Reports of a session run; `exit_code` is that of the first failure.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub reports: Vec<Report>,
    pub exit_code: i32,
}

fn timed(command: String, f: impl FnOnce() -> Result<Payload, CliError>) -> (Report, i32) {
    let start = Instant::now();
    let (result, code) = match f() {
        Ok(p) => (p, 0),
        Err(e) => {
            let code = e.exit_code();
            (
                Payload::Error {
                    code,
                    message: e.to_string(),
                },
                code,
            )
        }
    };
    let report = Report {
        command,
        result,
        timing_us: start.elapsed().as_micros() as u64,
        engine_version: deltagroup::VERSION.to_string(),
    };
    (report, code)
}

/// Runs the definitions and commands of `session`, then `extra` commands,
/// stopping at the first error.
pub fn run_session(
    session: &Session,
    extra: &[String],
    opts: &Options,
) -> Result<Outcome, CliError> {
    let mut it = Interpreter::new(&session.field_text, session.order.as_deref(), opts)?;
    let mut reports = Vec::new();
    let defs = session
        .defs
        .iter()
        .map(|l| (format!("def {}", l.text), Some(l.number)));
    let run = session.run.iter().map(|l| (l.text.clone(), Some(l.number)));
    let evals = extra.iter().map(|c| (c.clone(), None));
    for (cmd, number) in defs.chain(run).chain(evals) {
        let (mut report, code) = timed(cmd.clone(), || it.run(&cmd));
        if code != 0 {
            if let (Some(n), Payload::Error { message, .. }) = (number, &mut report.result) {
                *message = format!("line {n}: {message}");
            }
            reports.push(report);
            return Ok(Outcome {
                reports,
                exit_code: code,
            });
        }
        reports.push(report);
    }
    Ok(Outcome {
        reports,
        exit_code: 0,
    })
}

/// JSON array of reports, two-space indented, with a trailing newline.
pub fn to_json(reports: &[Report]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

/// Plain-text rendering of reports.
pub fn to_text(reports: &[Report]) -> String {
    let mut s = String::new();
    for r in reports {
        s.push_str("> ");
        s.push_str(&r.command);
        s.push('\n');
        s.push_str(&r.result.to_string());
        s.push('\n');
    }
    s
}
