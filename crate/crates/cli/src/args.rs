use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::cache::CACHE_ENV;

#[derive(Parser, Debug)]
#[command(name = "delannoy", version, about = "Exact computations in the Delannoy category uRep(Aut(R, <))")]
pub struct Cli {
    /// Output mode. JSON is the stable contract; tables are for reading.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Worker threads for `verify`. Results do not depend on it.
    #[arg(long, default_value_t = 1, global = true)]
    pub threads: usize,

    /// Registry cache file.
    #[arg(long, env = CACHE_ENV, global = true)]
    pub cache: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteKind {
    /// Every check up to `--max-n`.
    All,
    /// Every check, with each scale clamped to 2.
    Fast,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// dim Hom(C(R^n), C(R^m)).
    Homdim {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Multiplicities of the simple summands of an object.
    #[command(group = clap::ArgGroup::new("what").required(true).args(["object", "label"]))]
    Decompose {
        /// `C(R^n)`, `C(R)`, `1` or a product such as `C(R^1⊠R^2)`.
        #[arg(long)]
        object: Option<String>,
        /// A simple object named by a word over {a, b}.
        #[arg(long)]
        label: Option<String>,
    },
    /// Restriction of L_w to the stabilizer of a point, against the cut and deletion rule.
    Restrict {
        #[arg(long)]
        label: String,
    },
    /// Decomposition of L_left ⊗ L_right.
    Tensor {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// E-idempotents of C(R^n) and their equivalence relations.
    Eidem {
        #[arg(long)]
        n: usize,
    },
    /// Étale subalgebras of C(R^n).
    Subalgebras {
        #[arg(long)]
        n: usize,
    },
    /// Étale test on a built-in algebra: `schwartz:N` or `subetale`.
    EtaleCheck {
        #[arg(long)]
        builtin: String,
    },
    /// Ideals of the restriction of C(R^n) generated by its top summands.
    Resideals {
        #[arg(long)]
        n: usize,
    },
    /// Build the simple-object registry up to a length and store it in the cache.
    Registry {
        #[arg(long)]
        build: usize,
    },
    /// Run the acceptance suite.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteKind::All)]
        suite: SuiteKind,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
}
