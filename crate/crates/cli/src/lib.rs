//! Command-line front end: parsing, execution and output.

pub mod exec;
pub mod output;
pub mod plan;

pub use exec::{execute, Rendered, RunError, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};
pub use plan::{parse_invocation, ParseOutcome, RunPlan};

use std::io::Write;

/// Parse, run and write output; returns the process exit code.
pub fn run<S: AsRef<str>>(argv: &[S]) -> i32 {
    let plan = match parse_invocation(argv) {
        ParseOutcome::Plan(p) => p,
        ParseOutcome::Info(text) => {
            print!("{text}");
            return EXIT_OK;
        }
        ParseOutcome::Usage(e) => {
            eprintln!("{e}");
            return EXIT_USAGE;
        }
    };
    let rendered = match execute(&plan) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &plan.output.path {
        Some(p) => output::write_atomic(p, &rendered.content),
        None => std::io::stdout().lock().write_all(rendered.content.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    if let Some(note) = rendered.note {
        eprintln!("{note}");
    }
    rendered.code
}
