//! `gradedlie`: dependence queries, presentation builds, eigenspace
//! decompositions and lemma campaigns.
//!
//! Exit codes: 0 success, 1 counterexample or hypothesis violation,
//! 2 invalid input, 3 budget exceeded.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gradedlie_core::harness::LemmaId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "gradedlie",
    version,
    about = "Exact checks on (Z/nZ)-graded Lie algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// (-1)-dependence of a sequence, its dependency set D and D~.
    Deps {
        #[arg(long)]
        n: u64,
        /// Comma-separated residues.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        seq: Vec<i64>,
        #[arg(long, value_enum, default_value = "table")]
        output: Output,
    },
    /// Component dimensions of a presentation file.
    Build {
        file: PathBuf,
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long)]
        budget_seconds: Option<f64>,
        /// Free dimensions from the Witt formula only.
        #[arg(long)]
        dry_run: bool,
        #[arg(long, value_enum, default_value = "json")]
        output: Output,
    },
    /// Eigenspace grading and hypothesis report for an algebra file.
    Decompose {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        output: Output,
    },
    /// Run a campaign file, or a single check described by flags.
    Verify {
        file: Option<PathBuf>,
        #[arg(long, value_parser = parse_lemma, conflicts_with = "file")]
        lemma: Option<LemmaId>,
        #[arg(long)]
        n: Option<u64>,
        /// Index tuple; generator degrees for lemma3 and proposition.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        seq: Option<Vec<i64>>,
        /// Extra generator degrees for span_form and component_bound.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        generators: Option<Vec<i64>>,
        #[arg(long, allow_hyphen_values = true)]
        target: Option<i64>,
        #[arg(long)]
        multiplicity: Option<u32>,
        #[arg(long)]
        control: bool,
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long)]
        budget_seconds: Option<f64>,
        /// Validate hypotheses and estimate dimensions without row reduction.
        #[arg(long)]
        dry_run: bool,
        #[arg(long, value_enum, default_value = "json")]
        output: Output,
    },
    /// The explicit constants of the derived-length bound.
    Constants {
        #[arg(long, default_value_t = 3)]
        f1: u64,
        #[arg(long, value_enum, default_value = "json")]
        output: Output,
    },
}

fn parse_lemma(s: &str) -> Result<LemmaId, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| format!("unknown lemma `{s}`; expected one of lemma1, lemma2, lemma3, span_form, component_bound, proposition"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                commands::EXIT_INVALID
            } else {
                0
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Deps { n, seq, output } => commands::deps(n, &seq, output),
        Command::Build {
            file,
            cutoff,
            budget_seconds,
            dry_run,
            output,
        } => commands::build(&file, cutoff, budget_seconds, dry_run, output),
        Command::Decompose { file, output } => commands::decompose(&file, output),
        Command::Verify {
            file,
            lemma,
            n,
            seq,
            generators,
            target,
            multiplicity,
            control,
            cutoff,
            budget_seconds,
            dry_run,
            output,
        } => {
            let flags = commands::VerifyFlags {
                lemma,
                n,
                seq,
                generators,
                target,
                multiplicity,
                control,
                cutoff,
                budget_seconds,
            };
            commands::verify(file.as_deref(), flags, dry_run, output)
        }
        Command::Constants { f1, output } => commands::constants(f1, output),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
