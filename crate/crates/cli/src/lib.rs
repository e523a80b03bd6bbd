//! Batch front end: one job per invocation, one JSON report on stdout.
//!
//! Exit codes: 0 when every check passes, 1 on check failures, 2 on invalid
//! input, 3 when a resource cap is hit.

pub mod args;
mod jobs;
mod report;
mod resolve;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value};

pub use args::{Builtin, Cli, Command, JobArgs};
pub use report::{Status, TOOL, VERSION};

/// What one invocation produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, stdout: text, stderr: String::new() };
            }
            let output = json!({ "error": text.trim_end() });
            let stdout = report::render(&Value::Null, Status::InvalidInput, &output);
            return Outcome { code: 2, stdout, stderr: text };
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let input = serde_json::to_value(cli).expect("arguments are serializable");
    let (status, output, stderr) = match jobs::run_job(&cli.command, &cli.job) {
        Ok(done) => {
            let status = if done.pass { Status::Pass } else { Status::Fail };
            let note = if done.pass { String::new() } else { format!("{}: checks failed\n", cli.command.name()) };
            (status, done.output, note)
        }
        Err(e) => {
            let status = if e.is_resource_cap() { Status::ResourceCap } else { Status::InvalidInput };
            (status, json!({ "error": e.to_string() }), format!("{}: {e}\n", cli.command.name()))
        }
    };
    Outcome { code: status.exit_code(), stdout: report::render(&input, status, &output), stderr }
}
