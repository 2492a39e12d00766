//! `lapdual` command line: reads graph and matrix JSON, prints JSON results.
//!
//! Exit codes: 0 success or affirmative, 1 negative decision, 2 unknown
//! (budget ran out), 64 usage error, 65 malformed input.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use commands::{CliError, Output};

#[derive(Parser, Debug)]
#[command(name = "lapdual", version, about = "Laplacians, dual Laplacians, congruence and planarity certificates")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Elementary search steps allowed per decision.
    #[arg(long, global = true, env = "LAPDUAL_BUDGET", default_value_t = lapdual::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Seed for randomized restarts.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximal forest as 0-based edge indices, e.g. `e0,e1,e3`, or `auto`.
    #[arg(long, global = true, default_value = "auto")]
    pub forest: String,
    /// One 0-based vertex per component, e.g. `v2`, or `auto`.
    #[arg(long, global = true, default_value = "auto")]
    pub v0: String,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Unreduced Laplacian L(G).
    Laplacian { graph: PathBuf },
    /// Reduced Laplacian L_V0(G).
    ReducedLaplacian { graph: PathBuf },
    /// Incidence matrix N(G) and its reduction N_V0(G); edges run as listed.
    Incidence { graph: PathBuf },
    /// Cut block C(M) for the chosen forest.
    CutBlock { graph: PathBuf },
    /// Fundamental circuit matrix F(M) and the superbase matrix.
    FlowMatrix { graph: PathBuf },
    /// Reduced and unreduced dual Laplacian for the chosen forest.
    DualLaplacian { graph: PathBuf },
    /// Smith normal form of an integer matrix.
    Snf { matrix: PathBuf },
    /// Decide integer congruence of two symmetric matrices.
    CheckCongruence { a: PathBuf, b: PathBuf },
    /// Decide 2-isomorphism, reporting all four equivalent conditions.
    #[command(name = "check-2iso")]
    Check2iso { g1: PathBuf, g2: PathBuf },
    /// Check one numbered Laplacian or dual Laplacian property on a graph.
    VerifyProperty { tag: String, graph: PathBuf },
    /// Planarity with a dual certificate or a Kuratowski minor.
    Planarity { graph: PathBuf },
    /// Build and certify an abstract dual.
    FindDual { graph: PathBuf },
    /// Check that an edge map sends maximal forests to complements of maximal forests.
    VerifyDual {
        g1: PathBuf,
        g2: PathBuf,
        /// Edge map as comma-separated 0-based indices; identity by default.
        #[arg(long)]
        beta: Option<String>,
    },
    /// Render a graph, or its abstract dual, as DOT text.
    EmitDot {
        graph: PathBuf,
        /// Render the abstract dual instead.
        #[arg(long)]
        dual: bool,
    },
}

fn emit(opts: &GlobalOpts, text: &str) -> Result<(), CliError> {
    match &opts.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            say(text);
            Ok(())
        }
    }
}

/// Prints a line, ignoring a closed pipe.
fn say(text: &str) {
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn error_json(e: &CliError) -> String {
    let v = json!({ "error": { "kind": e.kind, "message": e.message, "exit_code": e.code } });
    serde_json::to_string(&v).expect("error serializes")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let err = CliError::usage(e.render().to_string().trim().to_string());
            say(&error_json(&err));
            return ExitCode::from(err.code);
        }
    };
    let result = commands::run(&cli.command, &cli.opts).and_then(|out| {
        let text = match &out {
            Output::Json(v, _) => serde_json::to_string(v).expect("output serializes"),
            Output::Text(t, _) => t.clone(),
        };
        emit(&cli.opts, &text)?;
        Ok(out.code())
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            say(&error_json(&err));
            ExitCode::from(err.code)
        }
    }
}
