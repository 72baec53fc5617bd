use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "homtrop", author, version, about = "Exact homomorphism-number profiles and their tropicalizations")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count homomorphisms from a pattern into a graph.
    Hom(HomArgs),
    /// Path homomorphism counts hom(P_0..P_k; G).
    Pathvec(PathvecArgs),
    /// Decide a pure binomial inequality, with a certificate or a violating graph.
    Check(CheckArgs),
    /// Homomorphism domination exponent via the polymatroid LP and/or the path closed form.
    Hde(HdeArgs),
    /// Print (and optionally verify) the tropical cone of a profile family.
    Trop(TropArgs),
    /// Weights, limit ray and realized counts of a blow-up spec.
    Blowup(BlowupArgs),
    /// Split a point of the projected path cone into R-family parts.
    Decompose(DecomposeArgs),
    /// Build graphs whose log path counts approach a ray.
    Realize(RealizeArgs),
    /// Check cone rows (or one inequality) on every small graph and on seeded random graphs.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
pub struct HomArgs {
    /// Pattern term such as C4, P3, S2 or K3.
    #[arg(required_unless_present = "pattern_graph")]
    pub pattern: Option<String>,
    /// Pattern graph file instead of a term.
    #[arg(long, conflicts_with = "pattern")]
    pub pattern_graph: Option<PathBuf>,
    /// Target graph file.
    #[arg(long)]
    pub graph: PathBuf,
}

#[derive(Args, Debug)]
pub struct PathvecArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Largest path length (edges).
    #[arg(long, default_value_t = 7)]
    pub max_len: usize,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Inequality such as "P0*P2 >= P1^2".
    pub inequality: String,
    /// Profile family selector (e.g. even-cycles:5); path inequalities use the path cone.
    #[arg(long)]
    pub family: Option<String>,
    /// Largest vertex count for exhaustive witness enumeration (at most 7).
    #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u64).range(1..=7))]
    pub max_vertices: u64,
    /// Skip the witness search for invalid path inequalities.
    #[arg(long)]
    pub no_witness: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum HdeMethod {
    Lp,
    Closed,
    Both,
}

#[derive(Args, Debug)]
pub struct HdeArgs {
    /// Source as a product of terms, e.g. P0^2*P5^3.
    #[arg(long)]
    pub source: String,
    /// Target term, e.g. P4.
    #[arg(long, required_unless_present = "graph", conflicts_with = "graph")]
    pub target: Option<String>,
    /// Target graph file.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = HdeMethod::Lp)]
    pub method: HdeMethod,
    /// Largest target vertex count for the LP.
    #[arg(long, default_value_t = 8)]
    pub max_vertices: usize,
}

#[derive(Args, Debug)]
pub struct TropArgs {
    /// Family selector: even-cycles:m, odd-cycles:m, stars:m, cliques:m, simplicial:m, matroid:m.
    #[arg(long)]
    pub family: String,
    /// Check the stated rays against the half-space description.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Args, Debug)]
pub struct BlowupArgs {
    /// Spec such as "b=34 s=30 d=4,3,3,0,1,3,4".
    #[arg(long)]
    pub spec: String,
    /// Ray parameter n: coordinates r_0..r_{2n+1}.
    #[arg(long)]
    pub n: Option<usize>,
    /// Also build the blow-up at scale m and compare exact path counts.
    #[arg(long)]
    pub m: Option<u64>,
    /// Vertex budget for the built graph.
    #[arg(long, default_value_t = 20_000)]
    pub budget: usize,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    /// Comma-separated rationals r_0,...,r_{2n+1}.
    #[arg(long, allow_hyphen_values = true)]
    pub ray: String,
}

#[derive(Args, Debug)]
pub struct RealizeArgs {
    /// Comma-separated rationals r_0,...,r_{2n+1} of a path-cone point.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "family", conflicts_with = "family")]
    pub ray: Option<String>,
    /// Profile family selector; realizes one of its stated rays in closed form.
    #[arg(long, requires = "index")]
    pub family: Option<String>,
    /// Index into the family's stated rays.
    #[arg(long)]
    pub index: Option<usize>,
    /// Scale parameter (m for path rays, n for family realizers).
    #[arg(long, default_value_t = 4)]
    pub m: u64,
    /// Vertex budget for path-ray graphs.
    #[arg(long, default_value_t = 20_000)]
    pub budget: usize,
    /// Print the realized graph in the graph file format.
    #[arg(long)]
    pub emit_graph: bool,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Cone parameter n: rows of C(n) over counts P_0..P_{4n+3}.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Sweep one inequality instead of the cone rows.
    #[arg(long)]
    pub ineq: Option<String>,
    /// Enumerate all graphs up to this many vertices (at most 7).
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(0..=7))]
    pub max_vertices: u64,
    /// Number of additional seeded random graphs.
    #[arg(long, default_value_t = 0)]
    pub random: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=256))]
    pub jobs: u64,
}
