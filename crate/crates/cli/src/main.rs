//! `lubin`: command-line front end for Lubin-Tate groups and commuting
//! families of p-adic power series.
//!
//! Exit status: 0 when every check passes, 1 when a check fails with a
//! witness, 2 for precision, truncation and usage problems.

mod commands;
mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "lubin", version, about = "Lubin-Tate formal groups and commuting p-adic dynamical systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Ring descriptor: a JSON file or inline JSON
    /// ({"p":3,"unram_poly":[0,1],"eis_poly":[-3,1],"N":24})
    #[arg(long)]
    pub ring: Option<String>,
    /// Truncation degree D; longer input series are truncated
    #[arg(long, default_value_t = 64)]
    pub degree: usize,
    /// Working precision N in π-adic digits; overrides the ring's N
    /// (default 24 when neither is given)
    #[arg(long)]
    pub precision: Option<u32>,
    /// Comma-separated sample values of O_K, e.g. "pi,2,-1,1+pi^2"
    #[arg(long)]
    pub samples: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a Lubin-Tate series and build its formal group law
    LtConstruct {
        /// Series literal or file
        #[arg(long)]
        f: String,
        /// Include the group law literal in text output
        #[arg(long)]
        print_series: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Endomorphisms [α] of the Lubin-Tate group of f (homomorphisms to g if given)
    Endo {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: Option<String>,
        /// Comma-separated values α
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        print_series: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Logarithm of a family, cross-checked against the iterates of F_π
    Log {
        /// Family descriptor: a JSON file or inline JSON
        #[arg(long)]
        family: String,
        #[arg(long)]
        print_series: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Commutation and fullness checks
    FamilyCheck {
        #[arg(long)]
        family: String,
        #[command(flatten)]
        common: Common,
    },
    /// Newton polygon counts of the sets Λ_n
    LambdaStats {
        #[arg(long)]
        family: String,
        /// Comma-separated n; default every n ≤ 3 with q^n ≤ D
        #[arg(long)]
        n: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Fixed-point profile of F_α
    Profile {
        #[arg(long)]
        family: String,
        /// Comma-separated units α; default 1+pi, 1+pi^2, 1+pi^3 where q^n ≤ D
        #[arg(long)]
        alpha: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Rebuild the formal group of a family from its logarithm
    RecoverGroup {
        #[arg(long)]
        family: String,
        #[arg(long)]
        print_series: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Search μ with F_μ ≡ T^q mod π
    MuSearch {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 4)]
        max_digits: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let code = commands::run(cli.command, argv);
    ExitCode::from(code)
}
