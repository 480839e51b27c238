//! `trmod`: totally reflexive modules over graded local algebras with
//! cube-zero maximal ideal.

mod commands;
mod report;

use std::ffi::OsString;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use report::{Failure, Inputs, RunReport};

/// Rings are given as a JSON file path or as `S:<p>`, the algebra
/// `F_p[x,y,z]/(x², y², z², yz)`.
#[derive(Debug, Parser)]
#[command(name = "trmod", version, about)]
pub struct Cli {
    /// Print a JSON run report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Accept Gorenstein rings without a warning.
    #[arg(long, global = true)]
    pub allow_gorenstein: bool,
    /// Scalar-candidate budget for each exhaustive search.
    #[arg(long, global = true, default_value_t = trmod_core::modmat::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Worker threads for classification and enumeration.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Ring for the subcommand, in place of its first positional argument.
    #[arg(long, global = true, value_name = "RING")]
    pub ring: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ring-level checks.
    #[command(subcommand)]
    Ring(RingCommand),
    /// List the exact zero divisors up to units, with partners.
    Ezd { ring: String },
    /// Decide whether coker M is totally reflexive.
    Tr {
        ring: String,
        matrix: String,
        /// Maximum number of differentials to compute.
        #[arg(long, default_value_t = trmod_core::totref::DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Ext¹(coker N, coker M) with a basis of classes.
    Ext { ring: String, n: String, m: String },
    /// Middle term of the extension of S/(u) by S/(v) with lift alpha.
    Pushout {
        ring: String,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        alpha: String,
    },
    /// Find an upper triangular form and its filtration by leading blocks.
    Filtrate { ring: String, matrix: String },
    /// Isomorphism classes of upper triangular presentations.
    Classify {
        ring: String,
        /// Matrix size; only 2 is supported.
        #[arg(long, default_value_t = 2)]
        size: usize,
    },
    /// The b×b family with s, t on the diagonal and u, v above it.
    Mb {
        ring: String,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Decide whether two presentation matrices are equivalent.
    Equiv {
        ring: String,
        m1: String,
        m2: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum RingCommand {
    /// Hilbert series, socle and the necessary conditions.
    Check { ring: String },
}

const SUBCOMMANDS: &[&str] = &[
    "ring", "ezd", "tr", "ext", "pushout", "filtrate", "classify", "mb", "equiv",
];

/// Moves `--ring X` into the ring position of the subcommand.
fn normalize_args(mut args: Vec<OsString>) -> Vec<OsString> {
    let Some(at) = args.iter().position(|a| a == "--ring") else {
        if let Some(at) = args
            .iter()
            .position(|a| a.to_str().is_some_and(|s| s.starts_with("--ring=")))
        {
            let value = args.remove(at);
            let value = value.to_str().unwrap()["--ring=".len()..].to_string();
            return insert_ring(args, value.into());
        }
        return args;
    };
    if at + 1 >= args.len() {
        return args;
    }
    let value = args.remove(at + 1);
    args.remove(at);
    insert_ring(args, value)
}

fn insert_ring(mut args: Vec<OsString>, value: OsString) -> Vec<OsString> {
    let Some(sub) = args
        .iter()
        .skip(1)
        .position(|a| a.to_str().is_some_and(|s| SUBCOMMANDS.contains(&s)))
        .map(|i| i + 1)
    else {
        args.push("--ring".into());
        args.push(value);
        return args;
    };
    let pos = if args[sub] == "ring" {
        sub + 2
    } else {
        sub + 1
    };
    args.insert(pos.min(args.len()), value);
    args
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Ring(RingCommand::Check { .. }) => "ring check",
        Command::Ezd { .. } => "ezd",
        Command::Tr { .. } => "tr",
        Command::Ext { .. } => "ext",
        Command::Pushout { .. } => "pushout",
        Command::Filtrate { .. } => "filtrate",
        Command::Classify { .. } => "classify",
        Command::Mb { .. } => "mb",
        Command::Equiv { .. } => "equiv",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(normalize_args(std::env::args_os().collect()));
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(report::INPUT_ERROR);
        }
    }
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let mut warnings = Vec::new();
    let run = commands::run(&cli, &mut inputs, &mut warnings);
    let elapsed_ms = start.elapsed().as_millis();
    if !cli.json {
        for w in &warnings {
            eprintln!("warning: {w}");
        }
    }
    match run {
        Ok(outcome) => {
            if cli.json {
                let report = RunReport {
                    command: command_name(&cli.command).into(),
                    status: outcome.status.into(),
                    exit_code: outcome.exit,
                    inputs,
                    warnings,
                    result: outcome.result,
                    elapsed_ms,
                    tool_version: env!("CARGO_PKG_VERSION").into(),
                };
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializable")
                );
            } else {
                print!("{}", outcome.human);
            }
            ExitCode::from(outcome.exit)
        }
        Err(Failure { exit, message }) => {
            if cli.json {
                let report = RunReport {
                    command: command_name(&cli.command).into(),
                    status: "error".into(),
                    exit_code: exit,
                    inputs,
                    warnings,
                    result: serde_json::json!({ "error": message }),
                    elapsed_ms,
                    tool_version: env!("CARGO_PKG_VERSION").into(),
                };
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializable")
                );
            } else {
                eprintln!("error: {message}");
            }
            ExitCode::from(exit)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<OsString> {
        s.split_whitespace().map(OsString::from).collect()
    }

    #[test]
    fn ring_flag_moves_into_position() {
        assert_eq!(
            normalize_args(args("trmod --json tr --ring S:2 m.json")),
            args("trmod --json tr S:2 m.json")
        );
        assert_eq!(
            normalize_args(args("trmod --ring=S:3 ring check")),
            args("trmod ring check S:3")
        );
        assert_eq!(normalize_args(args("trmod ezd S:2")), args("trmod ezd S:2"));
    }
}
