use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "vqss", version, about = "Qudit-based threshold secret sharing: sessions, attacks and sweeps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one honest session and write its transcript as JSON.
    Run(RunArgs),
    /// Run an attack experiment and write its statistics as JSON.
    Attack(AttackArgs),
    /// Run attack experiments over a grid of (d, t) and write CSV.
    Sweep(SweepArgs),
    /// Exhaustively check the d + 1 bases and the shift law for one d.
    MubVerify(MubVerifyArgs),
}

#[derive(Debug, Args)]
pub struct SchemeArgs {
    /// Odd prime dimension.
    #[arg(long)]
    pub d: u64,
    /// Threshold.
    #[arg(long)]
    pub t: usize,
    /// Number of participants [default: t]
    #[arg(long)]
    pub n: Option<usize>,
    /// Public points x_1..x_n, comma separated [default: 1..n]
    #[arg(long, value_delimiter = ',')]
    pub points: Option<Vec<u64>>,
    /// Recovery set, comma separated participant indices [default: 1..t]
    #[arg(long, value_delimiter = ',')]
    pub recovery: Option<Vec<usize>>,
    /// Secret in F_d [default: uniform from the seeded generator]
    #[arg(long)]
    pub secret: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, env = "QSS_SEED")]
    pub seed: Option<u64>,
    /// Include every intermediate state vector in the transcript.
    #[arg(long)]
    pub dump_states: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    /// dishonest-participant (alias dishonest), intercept-resend, entangle-measure or collusion.
    #[arg(long = "type")]
    pub kind: String,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, env = "QSS_SEED")]
    pub seed: Option<u64>,
    /// Channel hop in 0..t, cheater index, or the honest participant for collusion
    /// [default: hop 0, the first recovery member, the last recovery member]
    #[arg(long)]
    pub position: Option<usize>,
    /// Largest polynomial space the collusion enumeration may visit.
    #[arg(long, default_value_t = vqss_core::adversary::DEFAULT_ENUMERATION_CAP)]
    pub cap: u128,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub d: Vec<u64>,
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub t: Vec<usize>,
    #[arg(long = "attack", value_delimiter = ',', num_args = 0.., default_value = "intercept-resend")]
    pub attacks: Vec<String>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, env = "QSS_SEED")]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = vqss_core::adversary::DEFAULT_ENUMERATION_CAP)]
    pub cap: u128,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MubVerifyArgs {
    #[arg(long)]
    pub d: u64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}
