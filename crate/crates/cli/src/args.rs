use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use homlab_core::graph::family::FamilySpec;
use homlab_core::{Graph, LabError};

/// A family spec together with the text it was parsed from, which is echoed
/// in the `inputs` column of reports.
#[derive(Clone, Debug)]
pub struct Spec {
    pub text: String,
    pub family: FamilySpec,
}

impl Spec {
    pub fn build(&self) -> homlab_core::Result<Graph> {
        self.family.build()
    }
}

impl FromStr for Spec {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, LabError> {
        Ok(Spec {
            text: s.to_string(),
            family: s.parse()?,
        })
    }
}

/// Exact homomorphism counts, branching random walks, strong tree
/// decompositions and the density audits.
///
/// Graphs are given as `name:params`: cycle:n, path:n, complete:k,
/// biclique:s,t, star:k, empty:n, gnp:n,p,seed or file:path.
#[derive(Debug, Parser)]
#[command(name = "homlab", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Seed for every randomized subcommand.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Largest homomorphism set (or ψ vertex set, or term count) that may
    /// be enumerated.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_hom: usize,

    /// Largest graph handled by exhaustive searches (decomposition search,
    /// local density).
    #[arg(long, global = true, default_value_t = 20)]
    pub max_n: usize,

    /// Number of draws for sampling subcommands.
    #[arg(long, global = true)]
    pub samples: Option<usize>,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Add wall-clock time to every record (output is then no longer
    /// reproducible byte for byte).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One JSON object per line.
    Json,
    Csv,
    /// `key=value` pairs, one record per line.
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a graph, optionally transformed, and print it.
    Construct(ConstructArgs),
    /// Count homomorphisms from H to G.
    Count(CountArgs),
    /// Compare |Hom(H,G)| with n^v (2e/n²)^e.
    CheckSidorenko(PairArgs),
    /// Search for a strong tree decomposition of H.
    Decompose(DecomposeArgs),
    /// Check a decomposition file against H.
    ValidateDecomp(ValidateArgs),
    /// Branching random walks.
    #[command(subcommand)]
    Brw(BrwCommand),
    /// Entropy chains.
    #[command(subcommand)]
    Entropy(EntropyCommand),
    /// Local density, minimum-degree extraction and codegree bounds.
    #[command(subcommand)]
    Density(DensityCommand),
    /// Counting identities and inequalities built on codegrees and ψ graphs.
    #[command(subcommand)]
    Audit(AuditCommand),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long = "G", value_name = "SPEC")]
    pub g: Spec,

    #[command(flatten)]
    pub op: ConstructOp,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct ConstructOp {
    /// Subdivide every edge once.
    #[arg(long)]
    pub subdivide: bool,
    /// Replace every edge by a copy of K_{2,t}.
    #[arg(long, value_name = "T")]
    pub replace: Option<usize>,
    /// Cartesian product with another graph.
    #[arg(long, value_name = "SPEC")]
    pub cartesian: Option<Spec>,
    /// ψ_K(G) for the given K.
    #[arg(long, value_name = "SPEC")]
    pub psi: Option<Spec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountMethod {
    /// Backtracking, or the tree / cycle formulas when they apply.
    Auto,
    Backtrack,
    Tree,
    Trace,
    Elimination,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, value_enum, default_value_t = CountMethod::Auto)]
    pub method: CountMethod,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long = "H", value_name = "SPEC")]
    pub h: Spec,
    #[arg(long = "G", value_name = "SPEC")]
    pub g: Spec,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long = "H", value_name = "SPEC")]
    pub h: Spec,
    /// Search nodes before giving up.
    #[arg(long, default_value_t = 2_000_000)]
    pub max_nodes: u64,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long = "H", value_name = "SPEC")]
    pub h: Spec,
    /// JSON file {"bags": [[...]], "tree_edges": [[a,b],...]}.
    #[arg(long, value_name = "FILE")]
    pub decomp: PathBuf,
    /// Also check the strong conditions.
    #[arg(long)]
    pub strong: bool,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    /// The tree T.
    #[arg(long = "T", value_name = "SPEC")]
    pub t: Spec,
    #[arg(long = "G", value_name = "SPEC")]
    pub g: Spec,
    /// Start from a partial embedding, e.g. "0=1,3=2".
    #[arg(long, value_name = "MAP")]
    pub anchor: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum BrwCommand {
    /// Draw homomorphisms from the walk.
    Sample(WalkArgs),
    /// The exact law, one row per homomorphism.
    Dist(DistArgs),
    /// Normalization, edge marginals and a chi-square test of the sampler.
    Audit(AuditWalkArgs),
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Use the composite embedding of a strongly decomposable T with this
    /// decomposition file.
    #[arg(long, value_name = "FILE", conflicts_with = "anchor")]
    pub decomp: Option<PathBuf>,
    /// Root bag for --decomp.
    #[arg(long, default_value_t = 0, requires = "decomp")]
    pub root: usize,
    /// Visit child bags in descending order (with --decomp).
    #[arg(long, requires = "decomp")]
    pub reverse: bool,
}

#[derive(Debug, Args)]
pub struct AuditWalkArgs {
    #[arg(long = "T", value_name = "SPEC")]
    pub t: Spec,
    #[arg(long = "G", value_name = "SPEC")]
    pub g: Spec,
}

#[derive(Debug, Subcommand)]
pub enum EntropyCommand {
    /// H(w_T) against log(n^v p^e) for a tree.
    Tree(AuditWalkArgs),
    /// The chain for a strong decomposition.
    Chain(ChainArgs),
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    #[arg(long = "H", value_name = "SPEC")]
    pub h: Spec,
    #[arg(long, value_name = "FILE")]
    pub decomp: PathBuf,
    #[arg(long = "G", value_name = "SPEC")]
    pub g: Spec,
}

#[derive(Debug, Subcommand)]
pub enum DensityCommand {
    /// Whether every U with |U| ≥ ρn has density at least d.
    Local(LocalArgs),
    /// Peel low-degree vertices until the minimum degree is d/4.
    Mindeg(GraphArgs),
    /// Codegree sum over U against δ²/(4n)·C(|U|,2).
    Codegree(CodegreeArgs),
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(long = "G", value_name = "SPEC")]
    pub g: Spec,
}

#[derive(Debug, Args)]
pub struct LocalArgs {
    #[arg(long = "G", value_name = "SPEC")]
    pub g: Spec,
    #[arg(long, value_name = "RATIONAL")]
    pub rho: String,
    #[arg(long, value_name = "RATIONAL")]
    pub d: String,
    /// Test random subsets instead of all of them (uses --samples and
    /// --seed); the verdict is then probabilistic.
    #[arg(long)]
    pub sampled: bool,
}

#[derive(Debug, Args)]
pub struct CodegreeArgs {
    #[arg(long = "G", value_name = "SPEC")]
    pub g: Spec,
    /// Comma-separated vertex list; all of V(G) by default.
    #[arg(long = "U", value_name = "LIST", value_delimiter = ',')]
    pub u: Option<Vec<usize>>,
}

#[derive(Debug, Subcommand)]
pub enum AuditCommand {
    /// Σ_x ∏ d(x_i,x_j) against Hom(subdivision of H, G).
    Subdivision(PairArgs),
    /// K_{2,t}-replacement identity and the convexity step.
    Replacement(ReplacementArgs),
    /// The triangle Hölder inequality with exponents r, s, t.
    Holder(HolderArgs),
    /// The chain of counts for H □ C_{2k}.
    Cartesian(CartesianArgs),
}

#[derive(Debug, Args)]
pub struct ReplacementArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, default_value_t = 2)]
    pub t: u32,
}

#[derive(Debug, Args)]
pub struct HolderArgs {
    #[arg(long = "G", value_name = "SPEC")]
    pub g: Spec,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    #[arg(long, default_value_t = 1)]
    pub t: u32,
}

#[derive(Debug, Args)]
pub struct CartesianArgs {
    #[arg(long = "H", value_name = "SPEC")]
    pub h: Spec,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long = "G", value_name = "SPEC")]
    pub g: Spec,
}
