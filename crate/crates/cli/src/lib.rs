//! `mixstate` command-line interface.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns
//! the exit code together with everything destined for stdout and stderr, so
//! the binary and the tests share one code path.

use std::ffi::OsString;
use std::fmt;

use clap::error::ErrorKind;
use clap::Parser;

mod args;
mod commands;
pub mod output;
pub mod state_file;

pub use args::Cli;
pub use output::Format;

/// Environment variable naming the directory for relative `--output` paths.
pub const OUT_DIR_ENV: &str = "MIXSTATE_OUT_DIR";

/// Exit code for malformed arguments.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for domain, resource, invariant and file errors.
pub const EXIT_FAILURE: i32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failure(_) => EXIT_FAILURE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

impl From<mixstate::Error> for CliError {
    fn from(e: mixstate::Error) -> Self {
        match e {
            mixstate::Error::Argument(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match execute(&cli) {
        Ok(report) => Outcome {
            code: 0,
            stdout: report.render(cli.format),
            stderr: String::new(),
        },
        Err(e) => {
            let mut stderr = format!("error: {e}\n");
            if e.code() == EXIT_USAGE {
                stderr.push_str("\nFor more information, try '--help'.\n");
            }
            Outcome {
                code: e.code(),
                stdout: String::new(),
                stderr,
            }
        }
    }
}

fn execute(cli: &Cli) -> Result<output::Report, CliError> {
    let previous_cap = mixstate::max_qubits();
    if let Some(cap) = cli.cap {
        if cap == 0 {
            return Err(CliError::Usage("--cap must be at least 1".into()));
        }
        mixstate::set_max_qubits(cap);
    }
    let result = match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Failure(format!("cannot start thread pool: {e}")))
            .and_then(|pool| pool.install(|| commands::dispatch(&cli.command))),
        None => commands::dispatch(&cli.command),
    };
    if cli.cap.is_some() {
        mixstate::set_max_qubits(previous_cap);
    }
    result
}
