use clap::{Args, Parser, Subcommand, ValueEnum};
use skewcodes::{DistanceMode, EvalRule, SearchStrategy};

#[derive(Debug, Parser)]
#[command(
    name = "skewcodes",
    version,
    about = "Twisted skew Reed-Solomon codes: construction and certification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build one TLRS code and report its Gram matrix, LCD verdicts and distance.
    TlrsBuild(TlrsBuild),
    /// Every (ℓ, k, h, η) over a tower, one record per tuple.
    TlrsSweep(TlrsSweep),
    /// Build one additive code over F_{q²} and report its ACD and MDS verdicts.
    AcdBuild(AcdBuild),
    /// Find an evaluation set giving an ACD MDS code with γ = α.
    AcdSearch(AcdSearch),
    /// Random additive codes, one record per sample.
    AcdSweep(AcdSweep),
    /// Reproduce the worked examples; exits 1 on any mismatch.
    VerifyPaperExamples(Verify),
}

#[derive(Debug, Clone, Args)]
pub struct TowerArgs {
    /// Characteristic.
    #[arg(long)]
    pub p: u32,
    /// Degree of F_q over F_p.
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Degree of L over F_q.
    #[arg(long, default_value_t = 2)]
    pub r: u32,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Exhaustive distance enumeration; `auto` skips it above the guard.
    #[arg(long, value_enum)]
    pub distance: Option<DistanceArg>,
    /// Skip the brute-force hull oracle.
    #[arg(long)]
    pub no_oracle: bool,
}

#[derive(Debug, Clone, Args)]
pub struct TlrsBuild {
    #[command(flatten)]
    pub tower: TowerArgs,
    /// Order of the subgroup Λ ⊆ F_q^*.
    #[arg(long)]
    pub ell: Option<usize>,
    /// Explicit evaluation set, e.g. `1,4`.
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub h: usize,
    /// Twist coefficient in L, e.g. `2+1u`.
    #[arg(long)]
    pub eta: String,
    #[arg(long, value_enum, default_value_t = RuleArg::NormPreimage)]
    pub rule: RuleArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TlrsSweep {
    #[command(flatten)]
    pub tower: TowerArgs,
    /// Restrict to one subgroup order; default is every ℓ | q−1 within `--max-ambient`.
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub h: Option<usize>,
    /// Largest ambient dimension ℓr² swept.
    #[arg(long, default_value_t = 16)]
    pub max_ambient: usize,
    #[arg(long, value_enum, default_value_t = RuleArg::NormPreimage)]
    pub rule: RuleArg,
    /// Worker threads; default uses every core.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AcdBuild {
    #[command(flatten)]
    pub tower: TowerArgs,
    #[arg(long)]
    pub k: usize,
    /// Evaluation points in F_q, e.g. `2,3`.
    #[arg(long)]
    pub lambda: String,
    /// Element of F_{q²}; defaults to the skew unit α.
    #[arg(long)]
    pub gamma: Option<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AcdSearch {
    #[command(flatten)]
    pub tower: TowerArgs,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub ell: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    pub strategy: StrategyArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AcdSweep {
    #[command(flatten)]
    pub tower: TowerArgs,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub k_max: usize,
    #[arg(long, default_value_t = 8)]
    pub ell_max: usize,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct Verify {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistanceArg {
    Auto,
    Always,
    Never,
}

impl From<DistanceArg> for DistanceMode {
    fn from(d: DistanceArg) -> DistanceMode {
        match d {
            DistanceArg::Auto => DistanceMode::IfWithinLimit,
            DistanceArg::Always => DistanceMode::Required,
            DistanceArg::Never => DistanceMode::Skip,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    NormPreimage,
    PowerOfLambda,
}

impl From<RuleArg> for EvalRule {
    fn from(r: RuleArg) -> EvalRule {
        match r {
            RuleArg::NormPreimage => EvalRule::NormPreimage,
            RuleArg::PowerOfLambda => EvalRule::PowerOfLambda,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Geometric,
    Exhaustive,
    Auto,
}

impl From<StrategyArg> for SearchStrategy {
    fn from(s: StrategyArg) -> SearchStrategy {
        match s {
            StrategyArg::Geometric => SearchStrategy::Geometric,
            StrategyArg::Exhaustive => SearchStrategy::Exhaustive,
            StrategyArg::Auto => SearchStrategy::Auto,
        }
    }
}
