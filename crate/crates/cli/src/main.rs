use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use deltagroup_cli::{run_session, to_json, to_text, CliError, Options, Session};

/// Exact computations with linear partial differential operators.
#[derive(Parser, Debug)]
#[command(name = "deltagroup", version)]
struct Args {
    /// Session file with [field], [defs] and [run] sections.
    #[arg(long)]
    session: PathBuf,
    /// Term order precedence such as "dx>dy"; overrides the session.
    #[arg(long)]
    order: Option<String>,
    /// Print reports as JSON.
    #[arg(long)]
    json: bool,
    /// Maximum number of S-pairs per Buchberger run.
    #[arg(long)]
    pair_budget: Option<usize>,
    /// Extra command to run after the session (repeatable).
    #[arg(long)]
    eval: Vec<String>,
}

fn load(args: &Args) -> Result<Session, CliError> {
    let text = std::fs::read_to_string(&args.session).map_err(|source| CliError::Io {
        path: args.session.display().to_string(),
        source,
    })?;
    Session::parse(&text)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = Options {
        order: args.order.clone(),
        pair_budget: args.pair_budget,
    };
    let outcome = load(&args).and_then(|s| run_session(&s, &args.eval, &opts));
    match outcome {
        Ok(out) => {
            if args.json {
                print!("{}", to_json(&out.reports));
            } else {
                print!("{}", to_text(&out.reports));
            }
            if let Some(deltagroup_cli::Payload::Error { message, .. }) =
                out.reports.last().map(|r| &r.result)
            {
                eprintln!("error: {message}");
            }
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
