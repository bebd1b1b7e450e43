//! Command line front end. Parses arguments, hands a [`CheckParams`] to the
//! chosen command, and prints the report it returns.
//!
//! Exit codes: 0 the subject was checked and every axiom holds, 1 the
//! subject was checked and some axiom fails, 2 the run never got that far
//! (unreadable document, dangling reference, exhausted budget). Reports go
//! to stdout and are byte-stable across runs and thread counts; the only
//! timing line goes to stderr.

mod commands;
mod docs;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use distlax::core2::{CheckError, CheckParams, DEFAULT_BUDGET};

use crate::report::Report;

#[derive(Parser)]
#[command(
    name = "distlax",
    version,
    about = "Check finite strict 2-categories, lax functors, and distributive laws"
)]
struct Cli {
    /// Instance budget shared by all checks in the run.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    /// Worker threads. The report bytes do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Emit the report as JSON instead of the summary table.
    #[arg(long, global = true)]
    json: bool,

    /// Random seed; only corrupt consults it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the axioms of any document, or of a generated category.
    Validate { doc: String },
    /// Check the lax functor constraints on a functor document.
    CheckFunctor { doc: String },
    /// Check the distributive law axioms on a law document.
    CheckLaw {
        doc: String,
        /// First check every interchanger entry has a vertical inverse,
        /// then skip the two axioms that follow from the others.
        #[arg(long)]
        assume_invertible: bool,
    },
    /// Collate a law into a lax functor on the product of its sources.
    Collate {
        doc: String,
        /// Document name for the collated functor.
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Curry a law into a functor valued in oplax-morphism cells.
    Curry {
        doc: String,
        /// Base name for the written document family.
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Read the law back off a curried (nested) functor.
    Uncurry {
        doc: String,
        /// Base name for the written document family.
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Check that uncurrying after currying reproduces the collation.
    CheckTriangle { doc: String },
    /// Recover a law from a functor on a product category.
    ExtractLaw {
        doc: String,
        /// Use the pseudofunctor extraction instead of decomposability.
        #[arg(long)]
        pseudo: bool,
        /// Base name for the written document family.
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Round-trip a law, morphism, or 2-morphism through currying.
    CheckRoundtrip { doc: String },
    /// Search a one-object category for braidings inducing a self-law.
    CheckBraiding { doc: String },
    /// List the monads of a category.
    EnumerateMonads { doc: String },
    /// Enumerate every interchanger table completing a law frame.
    EnumerateLaws { doc: String },
    /// Check collation is functorial over a family of laws.
    CheckK { docs: Vec<String> },
    /// Corrupt one table entry of a document, for detector tests.
    Corrupt {
        doc: String,
        /// Document name for the corrupted copy.
        #[arg(short, long)]
        out: String,
    },
}

fn run(cmd: &Cmd, params: &CheckParams, seed: u64) -> Result<Report, CheckError> {
    match cmd {
        Cmd::Validate { doc } => commands::validate(doc, params),
        Cmd::CheckFunctor { doc } => commands::check_functor(doc, params),
        Cmd::CheckLaw {
            doc,
            assume_invertible,
        } => commands::check_law(doc, *assume_invertible, params),
        Cmd::Collate { doc, out } => commands::collate_cmd(doc, out.as_deref(), params),
        Cmd::Curry { doc, out } => commands::curry_cmd(doc, out.as_deref(), params),
        Cmd::Uncurry { doc, out } => commands::uncurry_cmd(doc, out.as_deref(), params),
        Cmd::CheckTriangle { doc } => commands::check_triangle_cmd(doc, params),
        Cmd::ExtractLaw { doc, pseudo, out } => {
            commands::extract_law_cmd(doc, *pseudo, out.as_deref(), params)
        }
        Cmd::CheckRoundtrip { doc } => commands::check_roundtrip_cmd(doc, params),
        Cmd::CheckBraiding { doc } => commands::check_braiding_cmd(doc, params),
        Cmd::EnumerateMonads { doc } => commands::enumerate_monads_cmd(doc, params),
        Cmd::EnumerateLaws { doc } => commands::enumerate_laws_cmd(doc, params),
        Cmd::CheckK { docs } => commands::check_k_cmd(docs, params),
        Cmd::Corrupt { doc, out } => commands::corrupt_cmd(doc, out, seed, params),
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    let cli = Cli::parse();
    let params = CheckParams {
        budget: cli.budget,
        threads: cli.threads.max(1),
    };
    let code = match run(&cli.cmd, &params, cli.seed) {
        Ok(report) => {
            if cli.json {
                print!("{}", report.render_json());
            } else {
                print!("{}", report.render_text());
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    };
    eprintln!("elapsed-ms: {}", started.elapsed().as_millis());
    code
}
