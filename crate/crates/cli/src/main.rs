//! `koszul`: Koszulity, Ext groups, interval relations and toric collections
//! from JSON/TOML input files.
//!
//! Exit status 0 means a verdict was computed (true or false), 2 an input
//! error, 3 a violated internal invariant.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "koszul", version, about = "Koszulity of finite graded categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the category axioms.
    Validate(Common),
    /// Dimensions of Ext between two simple modules.
    Ext {
        #[command(flatten)]
        common: Common,
        /// Object of the first simple, `Ext(S_from, S_to)`.
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Internal degree; all degrees when omitted.
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Decide Koszulity from factorization spaces.
    Koszul(Common),
    /// Three-way quadraticity status.
    Quadratic(Common),
    /// Local Cohen–Macaulayness of a poset.
    Cm(Common),
    /// Check an interval relation against the axioms.
    RsVerify(Common),
    /// Quotient category of an interval relation.
    RsQuotient(Common),
    /// Almost discrete and discrete fibration checks for a functor.
    Fibration(Common),
    /// Koszulity and dual-collection strongness of a line-bundle collection.
    Toric(Common),
    /// Write the bundled fixtures and their manifest to a directory.
    EmitFixtures { dir: PathBuf },
}

#[derive(Args, Clone)]
pub struct Common {
    pub input: PathBuf,
    /// Field characteristic; 0 for the rationals.
    #[arg(long = "char", default_value_t = 0)]
    pub characteristic: u64,
    /// Only consider morphisms up to this length.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_length: Option<u32>,
    #[arg(long, value_enum, default_value_t = Output::Json)]
    pub output: Output,
    #[arg(long, default_value_t = 10)]
    pub witness_limit: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Table,
}

pub enum Failure {
    Input(String),
    /// The report is still printed before exiting.
    Internal(String, Option<serde_json::Value>),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, result) = match std::panic::catch_unwind(|| dispatch(&cli.command)) {
        Ok(r) => r,
        Err(_) => return ExitCode::from(3),
    };
    let output = common.map_or(Output::Json, |c| c.output);
    match result {
        Ok(v) => {
            println!("{}", report::render(&v, output));
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg, v)) => {
            if let Some(v) = v {
                println!("{}", report::render(&v, output));
            }
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(cmd: &Command) -> (Option<Common>, Result<serde_json::Value, Failure>) {
    use report::*;
    let c = |c: &Common| Some(c.clone());
    match cmd {
        Command::Validate(o) => (c(o), validate(o)),
        Command::Ext {
            common,
            from,
            to,
            degree,
        } => (c(common), ext(common, from, to, *degree)),
        Command::Koszul(o) => (c(o), koszul(o)),
        Command::Quadratic(o) => (c(o), quadratic(o)),
        Command::Cm(o) => (c(o), cm(o)),
        Command::RsVerify(o) => (c(o), rs_verify(o)),
        Command::RsQuotient(o) => (c(o), rs_quotient(o)),
        Command::Fibration(o) => (c(o), fibration(o)),
        Command::Toric(o) => (c(o), toric(o)),
        Command::EmitFixtures { dir } => (None, emit(dir)),
    }
}
