use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "enrifact", version, about = "Check orthogonality and factorization systems on finite enriched categories")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the report to PATH (atomically) instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate a document.
    Validate { file: PathBuf },

    /// Mono/epi/iso/section/retraction flags of every morphism.
    Classify {
        file: PathBuf,
        /// Also report the V-flags.
        #[arg(long)]
        enriched: bool,
    },

    /// Decide whether E is orthogonal to M.
    Orth {
        file: PathBuf,
        #[arg(value_name = "E_ID")]
        e: String,
        #[arg(value_name = "M_ID")]
        m: String,
        #[arg(long)]
        enriched: bool,
    },

    /// The prefactorization system generated by a set of morphisms.
    Closure {
        file: PathBuf,
        /// Comma-separated morphism IDs or a class name.
        #[arg(long, value_name = "IDS", allow_hyphen_values = true)]
        seed: String,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long)]
        enriched: bool,
    },

    /// Factor a morphism through the intersection of the members of M it
    /// factors through.
    Factorize {
        file: PathBuf,
        #[arg(value_name = "G_ID")]
        g: String,
        /// Comma-separated IDs or one of monos, v-monos, strong-monos,
        /// injections.
        #[arg(long, value_name = "SPEC", allow_hyphen_values = true)]
        right_class: String,
    },

    /// Certify (E, M) as a factorization system.
    CheckSystem {
        file: PathBuf,
        #[arg(long, value_name = "IDS", allow_hyphen_values = true)]
        left: String,
        #[arg(long, value_name = "IDS", allow_hyphen_values = true)]
        right: String,
        #[arg(long)]
        enriched: bool,
    },

    /// Attempt the two canonical systems (Epi, StrongMono) and
    /// (StrongEpi, Mono).
    Canonical { file: PathBuf },

    /// Run the invariant suite.
    Laws {
        file: PathBuf,
        /// Restrict to these law IDs.
        #[arg(long, value_name = "IDS", value_delimiter = ',')]
        law: Vec<String>,
        /// Seed for the sampled laws.
        #[arg(long, value_name = "N")]
        rng_seed: Option<u64>,
    },

    /// Finite well-completeness.
    Fwc { file: PathBuf },

    /// Expand a generator directive into a concrete canonical document.
    Expand { file: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Classify { .. } => "classify",
            Command::Orth { .. } => "orth",
            Command::Closure { .. } => "closure",
            Command::Factorize { .. } => "factorize",
            Command::CheckSystem { .. } => "check-system",
            Command::Canonical { .. } => "canonical",
            Command::Laws { .. } => "laws",
            Command::Fwc { .. } => "fwc",
            Command::Expand { .. } => "expand",
        }
    }

    pub fn file(&self) -> &PathBuf {
        match self {
            Command::Validate { file }
            | Command::Classify { file, .. }
            | Command::Orth { file, .. }
            | Command::Closure { file, .. }
            | Command::Factorize { file, .. }
            | Command::CheckSystem { file, .. }
            | Command::Canonical { file }
            | Command::Laws { file, .. }
            | Command::Fwc { file }
            | Command::Expand { file } => file,
        }
    }
}
