//! `klein`: arithmetic in K, D∞, G and Z × D∞, equation solving, solution
//! transfer from G to K, and the checks around them.

mod commands;
mod corpus;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use klein_core::groups::GroupId;
use klein_core::selfcheck::Profile;

use crate::commands::SolveArgs;
use crate::report::CliError;

#[derive(Parser)]
#[command(
    name = "klein",
    version,
    about = "Exact computations in the Klein bottle group and its overgroup G"
)]
struct Cli {
    /// Carrier group for element arguments: K, D, G or ZD
    #[arg(long, global = true, default_value = "G")]
    group: GroupId,

    /// Emit the JSON report instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Product of two elements
    Mul { lhs: String, rhs: String },
    /// Inverse of an element
    Inv { element: String },
    /// Integer power of an element
    Pow {
        element: String,
        #[arg(allow_negative_numbers = true)]
        exponent: i64,
    },
    /// Evaluate a word on assigned values (one --assign per variable, in order)
    Eval {
        #[arg(long)]
        word: String,
        #[arg(long)]
        assign: Vec<String>,
    },
    /// Brute-force search for a solution of w = target in a ball
    Solve {
        #[arg(long)]
        word: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        vars: Option<usize>,
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        lmax: i64,
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        kmax: i64,
    },
    /// Solve w = target in D∞ by the closed-form cases, falling back to search
    DihedralSolve {
        #[arg(long)]
        word: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        vars: Option<usize>,
        #[arg(long, default_value_t = 4, allow_negative_numbers = true)]
        kmax: i64,
    },
    /// Transfer a solution over G with value in K to a solution over K
    Transfer {
        #[arg(long)]
        word: String,
        #[arg(long)]
        assign: Vec<String>,
    },
    /// Nielsen normal form x1^m u of a word
    Nielsen {
        #[arg(long)]
        word: String,
        #[arg(long)]
        vars: Option<usize>,
    },
    /// The embedding Φ: G -> Z × D∞ and the maps f, deg
    Phi { element: String },
    /// The retraction of the index-two subgroup onto K
    Retract { element: String },
    /// Exhaustive transfer check over all short words and a G-ball
    Probe {
        #[arg(long, default_value_t = 4)]
        maxlen: usize,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        lmax: i64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        kmax: i64,
        /// Bounds of the K-ball used by the brute-force oracle
        #[arg(long, default_value_t = 4, allow_negative_numbers = true)]
        k_lmax: i64,
        #[arg(long, default_value_t = 8, allow_negative_numbers = true)]
        k_kmax: i64,
    },
    /// Machine-checked argument that K is not a retract of G
    CertifyNoRetraction,
    /// Solve every equation of a JSON-lines corpus
    RunCorpus {
        path: PathBuf,
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        lmax: i64,
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        kmax: i64,
    },
    /// Run every invariant suite
    Selfcheck {
        #[arg(long, default_value = "quick")]
        profile: Profile,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Mul { .. } => "mul",
            Command::Inv { .. } => "inv",
            Command::Pow { .. } => "pow",
            Command::Eval { .. } => "eval",
            Command::Solve { .. } => "solve",
            Command::DihedralSolve { .. } => "dihedral-solve",
            Command::Transfer { .. } => "transfer",
            Command::Nielsen { .. } => "nielsen",
            Command::Phi { .. } => "phi",
            Command::Retract { .. } => "retract",
            Command::Probe { .. } => "probe",
            Command::CertifyNoRetraction => "certify-no-retraction",
            Command::RunCorpus { .. } => "run-corpus",
            Command::Selfcheck { .. } => "selfcheck",
        }
    }
}

fn dispatch(cli: &Cli) -> commands::Outcome {
    let g = cli.group;
    match &cli.command {
        Command::Mul { lhs, rhs } => commands::mul(g, lhs, rhs),
        Command::Inv { element } => commands::inv(g, element),
        Command::Pow { element, exponent } => commands::pow(g, element, *exponent),
        Command::Eval { word, assign } => commands::eval(g, word, assign),
        Command::Solve {
            word,
            target,
            vars,
            lmax,
            kmax,
        } => commands::solve(&SolveArgs {
            group: g,
            word,
            target,
            vars: *vars,
            lmax: *lmax,
            kmax: *kmax,
        }),
        Command::DihedralSolve {
            word,
            target,
            vars,
            kmax,
        } => commands::dihedral(word, target, *vars, *kmax),
        Command::Transfer { word, assign } => commands::transfer(word, assign),
        Command::Nielsen { word, vars } => commands::nielsen(word, *vars),
        Command::Phi { element } => commands::phi_cmd(element),
        Command::Retract { element } => commands::retract(element),
        Command::Probe {
            maxlen,
            lmax,
            kmax,
            k_lmax,
            k_kmax,
        } => commands::probe(*maxlen, (*lmax, *kmax), (*k_lmax, *k_kmax)),
        Command::CertifyNoRetraction => commands::certify(),
        Command::RunCorpus { path, lmax, kmax } => corpus::run(path, *lmax, *kmax),
        Command::Selfcheck { profile } => commands::selfcheck(*profile),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    match dispatch(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.json));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => fail(name, &e, cli.json),
    }
}

fn fail(command: &str, e: &CliError, json: bool) -> ExitCode {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&e.to_json(command)).expect("error serializes")
        );
    }
    eprintln!("error[{}]: {e}", e.kind());
    ExitCode::from(e.exit_code() as u8)
}
