use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "xsect", version, about = "Exact experiments on intersecting families of k-sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a size bound exhaustively at desk scale.
    #[command(subcommand)]
    Verify(Verify),
    /// Shift a family to a fixed point.
    Shift(ShiftArgs),
    /// One exchange step on a shifted nontrivial intersecting family.
    Exchange(ExchangeArgs),
    /// Lexicographic ranks and initial segments.
    #[command(subcommand)]
    Lex(Lex),
    /// Diversity and Δ + Cγ searches.
    #[command(subcommand)]
    Search(Search),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Wall-clock budget, e.g. "30s" or "5m".
    #[arg(long, default_value = "60s", value_parser = parse_budget)]
    pub budget: Duration,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_budget(s: &str) -> Result<Duration, String> {
    let d = humantime::parse_duration(s).map_err(|e| e.to_string())?;
    if d.is_zero() {
        return Err("budget must be positive".into());
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    #[value(alias = "shifted-exhaustive", alias = "exhaustive-shifted")]
    Shifted,
    #[value(alias = "full-exhaustive", alias = "exhaustive-full")]
    Full,
    #[value(alias = "randomized")]
    Random,
}

impl From<Mode> for xsect_core::SearchMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Shifted => xsect_core::SearchMode::ExhaustiveShifted,
            Mode::Full => xsect_core::SearchMode::ExhaustiveFull,
            Mode::Random => xsect_core::SearchMode::Randomized,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// |F| <= C(n-1, k-1) for intersecting F, n >= 2k.
    Ekr {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "shifted")]
        mode: Mode,
        #[command(flatten)]
        common: Common,
    },
    /// The nontrivial bound C(n-1, k-1) - C(n-k-1, k-1) + 1, n > 2k.
    Hm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "shifted")]
        mode: Mode,
        #[command(flatten)]
        common: Common,
    },
    /// |F| + |G| <= C(n, b) + C(n-j, a-j) - C(n-j, b) for cross-intersecting pairs.
    Thm4 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        j: usize,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        point: u8,
        #[command(flatten)]
        common: Common,
    },
    /// The real-alpha cross-intersecting bound (a <= b, or a > b with alpha >= a-b+1).
    Thm5 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        /// Exact rational such as "5/2" or "2.5".
        #[arg(long)]
        alpha: String,
        #[command(flatten)]
        common: Common,
    },
    /// The bound on |F| under a diversity floor, 3 <= u <= k.
    Thm6 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Exact rational such as "3" or "7/2".
        #[arg(long)]
        u: String,
        #[arg(long, value_enum, default_value = "shifted")]
        mode: Mode,
        /// Random non-shifted probes.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// The diversity drop of one shift is at most C(n-3, k-2).
    Lemma2 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
pub struct ShiftArgs {
    /// Family JSON: {"n":..,"k":..,"sets":[[..],..]}.
    #[arg(long)]
    pub input: PathBuf,
    /// Avoid shifts that would make the family trivially intersecting.
    #[arg(long)]
    pub preserve_nontrivial: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExchangeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Lex {
    /// 1-based lex rank of a k-set.
    Rank {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Comma-separated elements, e.g. "1,3,5".
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        set: Vec<usize>,
    },
    /// The k-set of a given 1-based lex rank.
    Unrank {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        rank: u64,
    },
    /// The first m k-sets in lex order.
    Segment {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct SearchCommon {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "shifted")]
    pub mode: Mode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Families drawn in random mode.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum Search {
    /// Maximum diversity with a witness, against C(n-3, k-2) and the F_i.
    Diversity {
        #[command(flatten)]
        search: SearchCommon,
        /// Directory for the witness family JSON.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// max(Δ + Cγ) for each C on a grid.
    Problem1 {
        #[command(flatten)]
        search: SearchCommon,
        /// Comma-separated exact values, e.g. "1,3/2,2,3".
        #[arg(long, value_delimiter = ',', default_value = "1,3/2,2,3")]
        c_grid: Vec<String>,
    },
}
