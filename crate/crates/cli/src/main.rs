//! `shadowctl`: command-line access to graph presentations, the path enumeration, the
//! metric, chains and the shadowing analysis.
//!
//! Exit codes: 0 for Yes, Valid or Witness; 1 for No, Invalid or Failure; 2 for Unknown
//! or a bounded search without a witness; 64 for usage and input errors.

mod commands;
mod input;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "shadowctl",
    version,
    about = "Shadowing analysis for edge shifts of finitely presented graphs"
)]
pub struct Cli {
    /// Print machine-readable JSON; verdicts come out in certificate form.
    #[arg(long, global = true)]
    pub json: bool,
    /// JSON file with `max_path_len`, `max_family_reps` and `max_threshold_exp`.
    #[arg(long, global = true, value_name = "FILE")]
    pub bounds: Option<PathBuf>,
    /// Accept presentations whose no-sink check is inconclusive.
    #[arg(long, global = true)]
    pub allow_undecided_sinks: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Graphs are given as a file in the presentation format or as a builtin name.
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a presentation and summarise it.
    Parse { graph: String },
    /// Print the canonical form of a presentation.
    Print { graph: String },
    /// Check that no vertex is a sink.
    Validate { graph: String },
    /// List entries of the path enumeration with their ranks.
    Enumerate {
        graph: String,
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Rank of the first entry listed.
        #[arg(long, default_value = "1", value_parser = input::positive)]
        start: shadow_core::Rank,
    },
    /// Rank of a vertex or finite path literal.
    Rank { graph: String, path: String },
    /// Enumeration entry at a rank.
    Entry {
        graph: String,
        #[arg(value_parser = input::positive)]
        rank: shadow_core::Rank,
    },
    /// Rank of the last entry that uses only e_1..e_k.
    Nk {
        graph: String,
        #[arg(long)]
        k: u64,
    },
    /// Edges of F_t, the edges met by the first t entries.
    Fset {
        graph: String,
        #[arg(long, value_parser = input::positive)]
        t: shadow_core::Threshold,
    },
    /// Distance between two paths, finite or infinite.
    Distance { graph: String, x: String, y: String },
    /// Check that a chain literal (or file) is a chain at 2^-delta.
    ChainValidate {
        graph: String,
        chain: String,
        #[arg(long, value_parser = input::positive)]
        delta_exp: shadow_core::Threshold,
    },
    /// Build the chain of a path family.
    ChainBuild {
        #[command(subcommand)]
        kind: BuildKind,
    },
    /// Bounded search for a point shadowing a finite chain.
    ShadowSearch {
        graph: String,
        chain: String,
        #[arg(long, value_parser = input::positive)]
        delta_exp: shadow_core::Threshold,
        #[arg(long, value_parser = input::positive)]
        eps_exp: shadow_core::Threshold,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        reps: Option<usize>,
    },
    /// Check one instance of the finite path condition.
    Fpc {
        graph: String,
        #[arg(long, value_parser = input::positive)]
        eps_exp: shadow_core::Threshold,
        #[arg(long, value_parser = input::positive)]
        delta_exp: shadow_core::Threshold,
        /// Family literal `e3.e1; e2.e4` or a file holding one.
        #[arg(long)]
        family: String,
    },
    /// Check one instance of the first infinite path condition.
    Ipc1 {
        graph: String,
        #[arg(long, value_parser = input::positive)]
        eps_exp: shadow_core::Threshold,
        #[arg(long, value_parser = input::positive)]
        delta_exp: shadow_core::Threshold,
        /// Periodic family literal `e1.e2 | period: e6.e4` or a file holding one.
        #[arg(long)]
        family: String,
    },
    /// Check one instance of the second infinite path condition.
    Ipc2 {
        graph: String,
        #[arg(long, value_parser = input::positive)]
        eps_exp: shadow_core::Threshold,
        #[arg(long, value_parser = input::positive)]
        delta_exp: shadow_core::Threshold,
        /// Family literal or file; may be empty.
        #[arg(long, default_value = "")]
        family: String,
        /// The infinite tail path.
        #[arg(long)]
        gamma: String,
    },
    /// Run one graph classifier.
    Classify {
        #[command(subcommand)]
        which: Classifier,
    },
    /// Decide finite shadowing and shadowing.
    Decide { graph: String },
    /// Decide every builtin and compare with the known verdicts.
    Examples {
        #[arg(long)]
        only: Option<String>,
    },
    /// Re-check a certificate written by `--json`.
    Verify {
        certfile: PathBuf,
        /// Graph to check against when the file does not embed one.
        #[arg(long)]
        graph: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum BuildKind {
    /// Chain of a finite family.
    Family {
        graph: String,
        #[arg(long)]
        family: String,
        #[arg(long, value_parser = input::positive)]
        delta_exp: shadow_core::Threshold,
    },
    /// Chain of a family followed by the orbit of an infinite path.
    FamilyTail {
        graph: String,
        #[arg(long)]
        family: String,
        #[arg(long)]
        gamma: String,
        #[arg(long, value_parser = input::positive)]
        delta_exp: shadow_core::Threshold,
    },
}

#[derive(Subcommand, Debug)]
pub enum Classifier {
    Wandering { graph: String },
    Ecifs { graph: String },
    Attractor { graph: String },
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Yes = 0,
    No = 1,
    Unknown = 2,
    Usage = 64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(Status::Usage as u8),
            };
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("JSON values serialize")
                );
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.status as u8)
        }
        Err(e) => {
            eprintln!("shadowctl: {e}");
            ExitCode::from(Status::Usage as u8)
        }
    }
}
