use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "rinv", version, about = "Verify symmetries, reductions, solutions and conservation laws of the Riemann-invariant system")]
pub struct Cli {
    /// Output file; defaults to stdout, or `$RINV_OUT_DIR/<command>.<ext>`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for every sampled point.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Add wall-clock timings per suite to the summary line.
    #[arg(long, global = true)]
    pub timings: bool,
    /// Run on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum AlgebraArg {
    Classical,
    Susy,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structure tables against the tabulated brackets.
    Tables {
        #[arg(long, value_enum, default_value = "both")]
        algebra: AlgebraArg,
        #[arg(long, default_value = "paper")]
        reference: String,
    },
    /// Invariance of both systems under their generators, and the superfield expansion.
    Symmetries,
    /// Symmetry reductions and the Euler double wave.
    Reduce {
        /// A single ansatz label such as `L3` or `SL14`.
        #[arg(long)]
        label: Option<String>,
    },
    /// Invariant solutions.
    Solutions {
        #[arg(long)]
        id: Option<String>,
        /// symbolic, numeric or modulo-ode.
        #[arg(long)]
        tier: Option<String>,
    },
    /// On-shell divergence of the density/flux pairs.
    Conservation {
        #[arg(long, default_value_t = 10)]
        kmax: usize,
        /// corrected or paper.
        #[arg(long, default_value = "corrected")]
        convention: String,
    },
    /// Immersion integral along a path and its path independence.
    Weierstrass {
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value = "as4")]
        solution: String,
        /// JSON file `{"vertices": [[x, t], ...]}`.
        #[arg(long)]
        path: Option<PathBuf>,
        /// Value of a free constant, `NAME=VALUE`; others are zero.
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
    },
    /// General integral: inversion, grids and the catastrophe locus.
    Hydro {
        #[command(subcommand)]
        command: HydroCommand,
    },
    /// Every suite.
    All,
    /// Dump the embedded catalogs (json or markdown).
    Catalog {
        #[arg(default_value = "json")]
        format: String,
    },
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// quadratic, cubic or quartic.
    #[arg(long, default_value = "quadratic")]
    pub preset: String,
    /// Polynomial coefficients `c0,c1,...` or `a0,...;b0,...`.
    #[arg(long)]
    pub coeffs: Option<String>,
    /// Profile expressions in `s`, `F1` or `F1;F2`.
    #[arg(long)]
    pub expr: Option<String>,
    /// Newton tolerance on the step norm.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Catastrophe threshold on |det|.
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum HydroCommand {
    /// Solve for (R, S) at one point.
    Invert {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// `R,S`.
        #[arg(long, allow_hyphen_values = true)]
        guess: String,
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// CSV over a rectangular grid.
    Grid {
        /// `min:max:n` in x.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        /// `min:max:n` in t.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// `R,S` at the first node.
        #[arg(long, allow_hyphen_values = true)]
        guess: Option<String>,
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// Zero set of the Jacobian determinant.
    Locus {
        /// `min:max` in R.
        #[arg(long, allow_hyphen_values = true, default_value = "-2:2")]
        r: String,
        /// `min:max` in S.
        #[arg(long, allow_hyphen_values = true, default_value = "-2:2")]
        s: String,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[command(flatten)]
        profile: ProfileArgs,
    },
}
