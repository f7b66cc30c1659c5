use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "thurston", version, about = "Reproducible Thurston-metric and convex-body experiments")]
pub struct Cli {
    /// Output file; standard output when omitted.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stretch flow trajectory on an annulus or on the punctured torus.
    Stretch(StretchArgs),
    /// Flow backwards and watch lengths and twist degenerate.
    Backtime(BacktimeArgs),
    /// Truncated Thurston distance d(x, y).
    Distance(DistanceArgs),
    /// Truncated Thurston norm of a tangent vector.
    Norm(NormArgs),
    /// Recover a curve length from stretch-vector differences along Dehn twists.
    ExtractLength(ExtractArgs),
    /// Twist width of a crowned annulus, or its decay along slender sequences.
    TwistWidth(TwistWidthArgs),
    /// Exact convex-body calculus.
    #[command(subcommand)]
    Convex(ConvexCommand),
    /// Exact hull of rationalized slope covectors.
    DualSphere(DualSphereArgs),
    /// Sampled unit sphere of the Thurston norm and its flat edges.
    PrimalSphere(PrimalSphereArgs),
}

#[derive(Debug, Args)]
pub struct StretchArgs {
    /// Annulus metric, e.g. `l=1,tau=0`.
    #[arg(long, conflicts_with = "surface")]
    pub annulus: Option<String>,
    /// Surface point: `markov333`, `fricke:a,b,c`, `chart:l,tau` or a JSON file.
    #[arg(long)]
    pub surface: Option<String>,
    #[arg(long, default_value = "parallel")]
    pub pattern: String,
    /// Final time; accepts `ln2`, `-ln3`, `0.5`.
    #[arg(long, allow_hyphen_values = true)]
    pub t: String,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    #[arg(long, default_value_t = 7)]
    pub depth: usize,
    /// Allowed deviation of the max-ratio certificate from |t|.
    #[arg(long, default_value_t = 5e-3)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct BacktimeArgs {
    #[arg(long, default_value = "markov333")]
    pub surface: String,
    #[arg(long, default_value = "opposite+")]
    pub pattern: String,
    #[arg(long, default_value_t = 25.0)]
    pub smax: f64,
    #[arg(long, default_value_t = 250)]
    pub steps: usize,
    #[arg(long, default_value = "1/0,1/1,2/1")]
    pub probes: String,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    #[arg(long, default_value_t = 7)]
    pub depth: usize,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[arg(long)]
    pub x: String,
    /// Tangent vector `d_ell,d_tau` in the chart.
    #[arg(long, allow_hyphen_values = true)]
    pub v: String,
    #[arg(long, default_value_t = 7)]
    pub depth: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub fd_step: f64,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long, default_value = "markov333")]
    pub x: String,
    #[arg(long, default_value = "0/1")]
    pub gamma: String,
    #[arg(long, default_value = "1/0")]
    pub alpha0: String,
    #[arg(long, default_value_t = 25)]
    pub m_max: i64,
    #[arg(long, default_value_t = 5)]
    pub depth: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub fd_step: f64,
}

#[derive(Debug, Args)]
pub struct TwistWidthArgs {
    /// Core length; a single value is reported.
    #[arg(long)]
    pub l_alpha: Option<f64>,
    /// Left pants boundary lengths `l_beta,l_gamma`.
    #[arg(long)]
    pub left: Option<String>,
    /// Right pants boundary lengths; defaults to the left ones.
    #[arg(long)]
    pub right: Option<String>,
    /// Decay table along slender sequences: `I`, `II`, `III`, `IV` or `all`.
    #[arg(long, conflicts_with = "l_alpha")]
    pub regime: Option<String>,
    #[arg(long, default_value_t = 5.0)]
    pub from: f64,
    #[arg(long, default_value_t = 40.0)]
    pub to: f64,
    #[arg(long, default_value_t = 35)]
    pub steps: usize,
}

#[derive(Debug, Subcommand)]
pub enum ConvexCommand {
    /// Face lattice with dimensions, adherence data and codimensions as JSON.
    Analyze(ConvexInput),
    /// Vertices of the polar dual as CSV.
    Dual(ConvexInput),
    /// Linear-invariance claims under seeded random maps.
    Invariance(InvarianceArgs),
}

#[derive(Debug, Args)]
pub struct ConvexInput {
    /// Abstract poset JSON file.
    #[arg(long, conflicts_with_all = ["points", "fixture"])]
    pub poset: Option<String>,
    /// Polytope points JSON file (`{"points": [["1","-1/2"], ...]}`).
    #[arg(long, conflicts_with = "fixture")]
    pub points: Option<String>,
    /// Bundled poset: `stadium` or `square`.
    #[arg(long)]
    pub fixture: Option<String>,
    /// Optional boundary points `x1,x2;y1,y2` to classify.
    #[arg(long)]
    pub query: Option<String>,
}

#[derive(Debug, Args)]
pub struct InvarianceArgs {
    /// Polytope points JSON file; random 3-polytopes when omitted.
    #[arg(long)]
    pub points: Option<String>,
    #[arg(long, default_value_t = 50)]
    pub maps: usize,
    #[arg(long, default_value_t = 1)]
    pub polytopes: usize,
}

#[derive(Debug, Args)]
pub struct DualSphereArgs {
    #[arg(long, default_value = "markov333")]
    pub x: String,
    #[arg(long, default_value_t = 5)]
    pub depth: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub fd_step: f64,
    /// Rationalization grid: samples are rounded to multiples of `1/denominator`.
    #[arg(long, default_value_t = thurston_core::convex::DEFAULT_DENOMINATOR)]
    pub denominator: i64,
}

#[derive(Debug, Args)]
pub struct PrimalSphereArgs {
    #[arg(long, default_value = "markov333")]
    pub x: String,
    #[arg(long, default_value_t = 3600)]
    pub directions: usize,
    #[arg(long, default_value_t = 5)]
    pub depth: usize,
    /// Slopes up to this Farey level are tested for flat edges.
    #[arg(long, default_value_t = 1)]
    pub edge_depth: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub fd_step: f64,
    /// Omit the per-direction samples from the report.
    #[arg(long)]
    pub summary_only: bool,
}
