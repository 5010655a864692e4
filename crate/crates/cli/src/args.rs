use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "linkproj", version, about = "Linking numbers by quadrature, hyperplane reduction and crossing counts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Linking numbers of object pairs of one scene.
    Lk(LkArgs),
    /// Runs every applicable method on every pair and checks declared values.
    Verify(VerifyArgs),
    /// Fixed-node values over a doubling node schedule.
    Convergence(ConvergenceArgs),
    /// Tabulates the one-dimensional Γ-function integral identity.
    Gamma(GammaArgs),
    /// Prints a builtin or seeded random scene as a JSON document.
    Scene(SceneArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Gauss,
    Degree,
    Reduce,
    Crossings,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntegralMethod {
    Gauss,
    Degree,
    Reduce,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Refinement stops once successive values differ by less than this.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Node cap per dimension (default 4096 for 2-D integrals, 128 above).
    #[arg(long)]
    pub max_nodes: Option<usize>,
    /// Parameter grid for slicing surfaces.
    #[arg(long, default_value_t = linkproj::reduction::DEFAULT_GRID)]
    pub grid: usize,
    /// Seed for projection-direction retries.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Line-delimited JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct LkArgs {
    /// Scene file, or `builtin:<name>[:<params>]`.
    pub scene: String,
    /// Two object names, e.g. `g1,g2`. Default: every pair.
    #[arg(long)]
    pub pair: Option<String>,
    #[arg(long, value_enum, default_value_t = Method::All)]
    pub method: Method,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Scene file, `builtin:<name>`, or a manifest `{"scenes": [...]}`.
    pub target: String,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    pub scene: String,
    /// Two object names. Default: the first two objects.
    #[arg(long)]
    pub pair: Option<String>,
    #[arg(long, value_enum, default_value_t = IntegralMethod::Gauss)]
    pub method: IntegralMethod,
    /// Doubling range `16..1024` or an explicit list `16,32,64`.
    #[arg(long, default_value = "16..1024")]
    pub schedule: String,
    /// Error level whose first attainment is summarized.
    #[arg(long, default_value_t = 1e-8)]
    pub target: f64,
    /// Also write the table as CSV to this file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = linkproj::reduction::DEFAULT_GRID)]
    pub grid: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GammaArgs {
    /// Range `1..6` (inclusive) or list `1,2,5`.
    #[arg(long, default_value = "1..6", allow_hyphen_values = true)]
    pub p: String,
    /// Comma-separated positive values.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub a: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SceneArgs {
    /// Builtin family name, or `random_planar`.
    pub name: String,
    /// Comma-separated family parameters, e.g. `2,4` for `torus_link_r3`.
    #[arg(long)]
    pub params: Option<String>,
    /// Seed for `random_planar`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
