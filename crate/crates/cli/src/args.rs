use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Verify linearizability and parallelizability of planar 3-webs.
///
/// Exit codes: 0 pass, 1 verdict fail, 2 usage/config/parse error,
/// 3 numerical failure.
#[derive(Debug, Parser)]
#[command(name = "threeweb", version, about, long_about = None)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Args)]
pub struct GlobalArgs {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, num_args = 2, value_names = ["NX", "NY"])]
    pub grid: Option<Vec<usize>>,
    #[arg(
        long = "box",
        global = true,
        num_args = 4,
        value_names = ["XMIN", "XMAX", "YMIN", "YMAX"],
        allow_negative_numbers = true
    )]
    pub rect: Option<Vec<f64>>,
    /// Half-width, in |g|, of the band removed around the excluded locus.
    #[arg(long, global = true, value_name = "DELTA")]
    pub margin: Option<f64>,
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_linearity: Option<f64>,
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_curvature: Option<f64>,
    /// Seeds per foliation, placed along the box diagonal.
    #[arg(long, global = true, value_name = "N")]
    pub seeds: Option<usize>,
    #[arg(long, global = true, value_enum, conflicts_with_all = ["web"])]
    pub builtin: Option<Builtin>,
    /// Three first integrals.
    #[arg(long, global = true, num_args = 3, value_names = ["U1", "U2", "U3"], allow_hyphen_values = true)]
    pub web: Option<Vec<String>>,
    /// Remove the band |g| < margin around the zero set of this expression.
    #[arg(long, global = true, value_name = "EXPR", allow_hyphen_values = true)]
    pub exclude: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Paper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MapKind {
    Identity,
    Dufour,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse an expression, print its canonical form and optionally its 3-jet.
    Parse {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
        at: Option<Vec<f64>>,
    },
    /// Curvature grid and general position; the verdict is reported, not enforced.
    Analyze,
    /// Trace leaves and optionally push them through a map.
    Trace {
        /// Foliation index 1..=3; all three when omitted.
        #[arg(long)]
        foliation: Option<usize>,
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
        seed: Option<Vec<f64>>,
        #[arg(long, default_value_t = 8.0)]
        max_arc: f64,
        #[arg(long, value_enum)]
        map: Option<MapKind>,
    },
    /// Thomsen hexagon defects around a center.
    Hexagon {
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true, default_values_t = [0.0, 0.0])]
        center: Vec<f64>,
        #[arg(long, num_args = 1.., default_values_t = [0.2, 0.1, 0.05, 0.025])]
        radii: Vec<f64>,
    },
    /// Linearize the web with `(f, y)` and check the image foliations.
    VerifyTheorem {
        #[arg(long, value_enum, default_value_t = MapKind::Dufour)]
        map: MapKind,
    },
    /// Check a candidate map: local invertibility and straightness of images.
    VerifyMap {
        #[arg(long, value_enum, conflicts_with = "phi")]
        map: Option<MapKind>,
        /// Explicit map components.
        #[arg(long, num_args = 2, value_names = ["E1", "E2"], allow_hyphen_values = true)]
        phi: Option<Vec<String>>,
    },
    /// The family f = a(x)·x + b(x)·y.
    Family {
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
    },
}
