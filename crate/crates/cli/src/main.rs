//! `condsplit`: inference, splittings and postulate checks on `.cl` files.
//!
//! Exit codes: 0 accept/ok, 1 reject/violation, 2 unknown, 3 input error.

mod commands;
mod infer;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_UNKNOWN: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "condsplit", version, about = "Conditional belief bases: inference, syntax splittings, postulates")]
struct Cli {
    /// Largest accepted signature; overrides CONDSPLIT_MAX_ATOMS.
    #[arg(long, global = true)]
    max_atoms: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Knowledge-base files.
    Kb {
        #[command(subcommand)]
        command: KbCommand,
    },
    /// Decide a query `(B | A)` with one inference operator.
    Infer(InferArgs),
    /// Enumerate and classify conditional syntax splittings.
    Splittings(SplittingsArgs),
    /// c-representations: constraint tables, minimal core, solutions.
    Crep {
        #[command(subcommand)]
        command: CrepCommand,
    },
    /// Splitting postulates.
    Postulates {
        #[command(subcommand)]
        command: PostulatesCommand,
    },
    /// Markdown dossier of one knowledge base.
    Report(ReportArgs),
}

#[derive(Args)]
pub struct KbArg {
    /// Knowledge-base file.
    #[arg(long)]
    pub kb: PathBuf,
}

#[derive(Subcommand)]
enum KbCommand {
    /// Parse, check consistency and print the canonical form.
    Validate {
        #[command(flatten)]
        kb: KbArg,
        #[arg(long)]
        json: bool,
    },
    /// Print the canonical file text.
    Fmt {
        #[command(flatten)]
        kb: KbArg,
    },
}

#[derive(Args)]
pub struct InferArgs {
    #[command(flatten)]
    pub kb: KbArg,
    /// systemz, lex, systemw, zw, ccore, cinf, crep:mc or crep:first.
    #[arg(long)]
    pub op: String,
    /// The query, written `(B | A)`.
    #[arg(long)]
    pub query: String,
    /// Impact bound for `cinf`; defaults to the completeness threshold.
    #[arg(long)]
    pub bound: Option<u64>,
    /// Print ranks or dominating worlds.
    #[arg(long, short)]
    pub verbose: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Class {
    Safe,
    Gensafe,
    Genuine,
    Simple,
}

#[derive(Args)]
pub struct SplittingsArgs {
    #[command(flatten)]
    pub kb: KbArg,
    /// Keep only splittings of this class.
    #[arg(long, value_enum)]
    pub only: Option<Class>,
    /// Further classes a splitting must have; repeatable.
    #[arg(long, value_enum)]
    pub require: Vec<Class>,
    /// List both orientations of each splitting.
    #[arg(long)]
    pub no_dedup: bool,
    /// JSON lines on stdout; the census goes to stderr.
    #[arg(long)]
    pub json: bool,
}

#[derive(Subcommand)]
enum CrepCommand {
    /// `(V, F)` and reduced `(V^, F^)` per conditional, and the CR+ constraints.
    Dump {
        #[command(flatten)]
        kb: KbArg,
        #[arg(long)]
        json: bool,
    },
    /// The minimal core vector and its OCF.
    Core {
        #[command(flatten)]
        kb: KbArg,
        #[arg(long)]
        json: bool,
    },
    /// Every solution with impacts up to the bound, in lexicographic order.
    Solutions {
        #[command(flatten)]
        kb: KbArg,
        #[arg(long, default_value_t = 2)]
        bound: u64,
        /// Stop after this many solutions.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum PostulatesCommand {
    /// Exhaustively check one postulate; exit 1 on a violation.
    Check(PostulateArgs),
}

#[derive(Args)]
pub struct PostulateArgs {
    #[command(flatten)]
    pub kb: KbArg,
    #[arg(long)]
    pub op: String,
    /// crelg, cindg, csynsplitg or ditv.
    #[arg(long)]
    pub postulate: String,
    /// safe or gensafe; ignored by ditv.
    #[arg(long, default_value = "gensafe")]
    pub scope: String,
    /// Witnesses kept per splitting.
    #[arg(long, default_value_t = 5)]
    pub max_witnesses: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub kb: KbArg,
    /// Operators whose postulates are checked; defaults to all but cinf.
    #[arg(long, value_delimiter = ',')]
    pub ops: Vec<String>,
}

/// An error that ends the command with exit code 3.
#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> InputError {
        InputError(e.to_string())
    }
}

pub type Outcome = Result<u8, InputError>;

fn run(cli: Cli) -> Outcome {
    let cap = cli.max_atoms.unwrap_or_else(condsplit::logic::max_atoms);
    match cli.command {
        Command::Kb { command: KbCommand::Validate { kb, json } } => commands::validate(&kb, cap, json),
        Command::Kb { command: KbCommand::Fmt { kb } } => commands::fmt(&kb, cap),
        Command::Infer(args) => infer::run(&args, cap),
        Command::Splittings(args) => commands::splittings(&args, cap),
        Command::Crep { command } => match command {
            CrepCommand::Dump { kb, json } => commands::crep_dump(&kb, cap, json),
            CrepCommand::Core { kb, json } => commands::crep_core(&kb, cap, json),
            CrepCommand::Solutions { kb, bound, limit, json } => commands::crep_solutions(&kb, cap, bound, limit, json),
        },
        Command::Postulates { command: PostulatesCommand::Check(args) } => commands::postulates(&args, cap),
        Command::Report(args) => report::run(&args, cap),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
