//! `abelim`: command-line workbench over the `abelim` library.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 parse or configuration
//! error, 3 only undetermined outcomes.

mod commands;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use report::{render_text, InputDigest, Report};

#[derive(Parser)]
#[command(name = "abelim", version, about = "Exact homology of finitely generated abelian groups and their towers")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug, Default)]
pub struct Global {
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Window size for tower commands and suites.
    #[arg(long, global = true, value_name = "N")]
    pub window: Option<usize>,
    /// Prime set for the truncated construction.
    #[arg(long, global = true, value_delimiter = ',', value_name = "P,...")]
    pub primes: Option<Vec<u64>>,
    /// Truncation M of the construction.
    #[arg(long, global = true, value_name = "M")]
    pub truncation: Option<usize>,
    /// Seed for randomized suites; falls back to $ABELIM_SEED.
    #[arg(long, global = true, value_name = "S")]
    pub seed: Option<u64>,
    /// Generator cap for the bar oracle.
    #[arg(long, global = true, value_name = "G")]
    pub budget: Option<u128>,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand)]
pub enum Command {
    /// Smith normal form of an integer matrix given as JSON rows.
    Snf { matrix: String },
    /// Canonical form of a group expression such as "Z^2 + Z/4".
    Canon { expr: String },
    /// A functor applied to a group, e.g. `functor "tensor(Z/2)" "Z/4"`.
    Functor { functor: String, expr: String },
    /// Integral homology in degree n, or degrees 0..=n with --all.
    #[command(alias = "homology")]
    Hom {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        all: bool,
        expr: String,
    },
    #[command(subcommand)]
    Oracle(OracleCommand),
    #[command(subcommand)]
    Tower(TowerCommand),
    #[command(subcommand)]
    Paper(PaperCommand),
    #[command(subcommand)]
    Cotorsion(CotorsionCommand),
    #[command(subcommand)]
    Suite(SuiteCommand),
}

#[derive(Subcommand)]
pub enum OracleCommand {
    /// Homology of a finite group from the normalized bar complex.
    Bar {
        #[arg(long, visible_alias = "degree")]
        n: u32,
        #[arg(required_unless_present = "group")]
        expr: Option<String>,
        /// The group, as an alternative to the positional expression.
        #[arg(long, conflicts_with = "expr")]
        group: Option<String>,
    },
}

#[derive(Subcommand)]
pub enum TowerCommand {
    /// Surjectivity, image chains, Mittag-Leffler verdict and lim¹ certificate.
    Check {
        #[arg(long)]
        spec: std::path::PathBuf,
    },
    /// The comparison map F(lim) → lim F and its exact-sequence ledger.
    Compare {
        #[arg(long)]
        spec: std::path::PathBuf,
        #[arg(long, default_value = "homology(2)")]
        functor: String,
    },
    /// Injectivity of Tor(B, lim) → lim Tor(B, Aᵢ).
    Statement2 {
        #[arg(long)]
        spec: std::path::PathBuf,
        #[arg(long)]
        b: String,
    },
    /// Injectivity of B ⊗ lim → lim (B ⊗ Aᵢ) for torsion-free data.
    Statement4 {
        #[arg(long)]
        spec: std::path::PathBuf,
        #[arg(long)]
        b: String,
    },
    /// Injectivity of Hₙ(lim) → lim Hₙ(Aᵢ) for torsion-free towers.
    Theorem2 {
        #[arg(long)]
        spec: std::path::PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Surjectivity of F on the projections of the partial products of the stages.
    ProductRetract {
        #[arg(long)]
        functor: String,
        #[arg(required = true)]
        stages: Vec<String>,
    },
}

#[derive(Subcommand)]
pub enum PaperCommand {
    /// The H₂ comparison kernel of the construction: finitary window checks, or
    /// the symbolic verdict with --symbolic.
    Theorem1 {
        #[arg(long)]
        symbolic: bool,
    },
    /// Cokernels of the H₂ and H₃ comparison maps: on a tower file, or
    /// symbolically for a generic surjective tower.
    Theorem3 {
        #[arg(long)]
        spec: Option<std::path::PathBuf>,
    },
}

#[derive(Subcommand)]
pub enum CotorsionCommand {
    /// Judges a term such as "coker_cmp(homology(2), T)".
    Judge {
        term: String,
        /// Registers a tower from a spec file: NAME=FILE.
        #[arg(long = "tower", value_name = "NAME=FILE")]
        towers: Vec<String>,
        /// Declares facts about a tower: NAME=fact,... with facts surjective,
        /// eventually_constant, torsion_bounded, lim1_tor_nonzero, bounded:N.
        #[arg(long = "assume", value_name = "NAME=FACTS")]
        assumptions: Vec<String>,
        /// Rules to switch off, e.g. R2,RW1.
        #[arg(long, value_delimiter = ',')]
        disable: Vec<String>,
    },
}

#[derive(Subcommand)]
pub enum SuiteCommand {
    /// Runs the acceptance criteria (all, or those given by --criterion).
    Run {
        #[arg(long = "criterion", value_name = "K")]
        criteria: Vec<u8>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command: Vec<String> = std::env::args().skip(1).collect();
    let mut digest = InputDigest::default();
    for a in &command {
        digest.add(a.as_bytes());
    }
    let start = Instant::now();
    let outcome = commands::run(&cli.command, &cli.global, &mut digest);
    let elapsed = start.elapsed();
    let (results, status) = match outcome {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e.message);
            (json!({"error": {"kind": e.kind, "message": e.message}}), e.status)
        }
    };
    let report = Report {
        command,
        digest: digest.finish(),
        status,
        results,
        elapsed_ms: cli.global.timing.then(|| elapsed.as_millis()),
    };
    let v = report.to_json();
    if cli.global.json {
        println!("{}", serde_json::to_string_pretty(&v).expect("JSON values print"));
    } else {
        print!("{}", render_text(&v));
    }
    ExitCode::from(status as u8)
}
