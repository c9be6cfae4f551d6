//! Command implementations for the `ghzswap` binary.
//!
//! Every command writes its primary output either to `--out` or to the
//! supplied writer and reports an [`Outcome`]; the binary maps that onto the
//! exit-code contract (0 pass, 1 violation, 2 usage error).

pub mod args;
pub mod commands;
pub mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use args::{Cli, Command};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Violation,
}

impl Outcome {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Violation
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Violation => 1,
        }
    }
}

pub const USAGE_EXIT: u8 = 2;

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Decompose(a) => commands::decompose::run(a, stdout),
        Command::VerifyQm(a) => commands::verify::run(a, stdout),
        Command::Simulate(a) => commands::simulate::run(a, stdout),
        Command::Refute(a) => commands::refute::run(a, stdout),
        Command::Compile(a) => commands::constraints::compile(a, stdout),
        Command::Solve(a) => commands::constraints::solve(a, stdout),
    }
}

/// Runs `body` against `path` when given, otherwise against `fallback`.
pub(crate) fn with_output<T>(
    path: Option<&Path>,
    fallback: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> anyhow::Result<T>,
) -> anyhow::Result<T> {
    match path {
        Some(p) => {
            let file = File::create(p)
                .map_err(|e| anyhow::anyhow!("cannot create {}: {e}", p.display()))?;
            let mut w = BufWriter::new(file);
            let out = body(&mut w)?;
            w.flush()?;
            Ok(out)
        }
        None => body(fallback),
    }
}

pub(crate) fn write_json<T: serde::Serialize>(w: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)
}
