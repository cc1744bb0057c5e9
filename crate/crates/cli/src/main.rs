//! `symdyn`: run the library's checks on a model described in a config file.
//!
//! Exit status: 0 when the task completes with PASS (or has no verdict), 1 on a
//! FAIL or INCONCLUSIVE verdict, 2 on any operational error.

mod report;
mod tasks;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use symdyn::Verdict;

use report::Format;

const CSV_HELP: &str = "CSV columns per task:
  enumerate          n,count
  entropy            n,count,log_count,point_estimate,running_fekete
  pressure           n,log_upper,log_lower
  spec-check         v,u,w (the glue table of the certificate)
  decompose          n,words,prefix,good,suffix,obstructions
  verify-uniqueness  m,spec,min_density
  mme                word,measure,reference,deviation
  gibbs              n,K_lower,K_upper,running_K
  periodic           n,per_n,oracle
  beta-code          k,digit,certain
  entropy-gap        k,images,distinct,length (production) | J,realized,predicted (surgery)

Run keys accepted in the config file, overriding the flags: depth, tau_max, window,
m_list, format, output, max_depth. The node budget is read from SYMDYN_MAX_NODES.";

#[derive(Debug, Parser)]
#[command(name = "symdyn", version, about = "Finite-depth checks for shift spaces", after_help = CSV_HELP)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub task: Task,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Model config file (`kind = ...`, optional `potential.*` and run keys).
    #[arg(long, short = 'm', alias = "config", global = true)]
    pub model: Option<PathBuf>,

    /// Enumeration or pair depth.
    #[arg(long, global = true)]
    pub depth: Option<usize>,

    #[arg(long, global = true)]
    pub tau_max: Option<usize>,

    /// Length window `a:b` for growth estimates.
    #[arg(long, global = true)]
    pub window: Option<String>,

    /// Comma-separated list of M for G^M.
    #[arg(long, global = true)]
    pub m_list: Option<String>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,

    /// Hard cap on enumeration depth.
    #[arg(long, global = true)]
    pub max_depth: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Task {
    /// Count admissible words of each length.
    Enumerate,
    /// Entropy estimate from word counts.
    Entropy,
    /// Pressure of the config potential.
    Pressure {
        /// Use the transfer recursion instead of enumeration (locally constant φ only).
        #[arg(long)]
        transfer: bool,
    },
    /// Specification certificate or counterexample for the language.
    SpecCheck {
        #[arg(long, default_value = "at-most")]
        variant: String,
        /// Check this many random pairs instead of all.
        #[arg(long)]
        sample_pairs: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build a decomposition and tabulate its pieces.
    Decompose {
        #[command(flatten)]
        rule: RuleArgs,
        /// Words to split, comma separated.
        #[arg(long)]
        split: Option<String>,
    },
    /// Check specification of G^M and the entropy gap of the obstructions.
    VerifyUniqueness {
        #[command(flatten)]
        rule: RuleArgs,
    },
    /// Empirical measure of maximal entropy against a reference.
    Mme {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        d: usize,
        /// Longest cylinder compared.
        #[arg(long, default_value_t = 3)]
        len: usize,
        /// Deviation above which the task FAILs.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Gibbs bounds for a measure.
    Gibbs {
        /// parry | weighted | empirical | periodic
        #[arg(long, default_value = "parry")]
        measure: String,
        /// Growth constant tested; defaults to the model's entropy or pressure.
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[arg(long)]
        declared_k: Option<f64>,
    },
    /// Periodic point counts and periodic measures.
    Periodic {
        #[arg(long)]
        n_max: usize,
        /// Compare the periodic measure of this period with the Parry measure.
        #[arg(long)]
        period: Option<usize>,
        #[arg(long, default_value_t = 3)]
        cyl_depth: usize,
    },
    /// β-expansion digits, the expansion of 1 and cylinder intervals.
    BetaCode {
        /// `p/q`, a decimal, or `golden`.
        #[arg(long)]
        beta: String,
        /// Point to code, `p/q` or decimal.
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value_t = 20)]
        digits: usize,
        /// Word whose interval I(w) is printed.
        #[arg(long)]
        word: Option<String>,
    },
    /// Entropy production from specification, or the surgery count against a subshift.
    EntropyGap {
        #[arg(long, default_value = "production")]
        mode: String,
        #[arg(long)]
        w1: Option<String>,
        #[arg(long)]
        w2: Option<String>,
        #[arg(long, default_value_t = 8)]
        k_max: usize,
        /// Config of the subshift Y (surgery mode).
        #[arg(long)]
        subshift: Option<PathBuf>,
        #[arg(long)]
        w: Option<String>,
        #[arg(long, default_value_t = 0)]
        tau: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        big_n: Option<usize>,
        /// Number of pieces αN.
        #[arg(long, default_value_t = 2)]
        pieces: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RuleArgs {
    /// beta | trivial | threshold
    #[arg(long, default_value = "beta")]
    pub rule: String,
    /// Threshold r for the threshold rule.
    #[arg(long)]
    pub r: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match tasks::run(cli) {
        Ok((report, format, output)) => {
            if let Err(e) = report.emit(format, output.as_deref()) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            match report.verdict {
                Some(Verdict::Fail) | Some(Verdict::Inconclusive) => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
