use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ordo_core::ArcFamilyKind;

/// Degree-bounded vertex orderings of digraphs.
///
/// Every command prints one JSON document (schema "ordo/1") on stdout.
/// Exit status: 0 feasible or valid, 1 infeasible or invalid, 2 usage,
/// parse or validation error.
#[derive(Parser, Debug)]
#[command(name = "ordo", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve a bounded-ordering problem.
    Solve {
        #[arg(value_enum)]
        problem: Problem,
        #[command(flatten)]
        input: ProblemInput,
    },
    /// Find an order whose left-going arcs form a member of an arc family.
    OrderFamily {
        #[arg(value_enum)]
        family: FamilyProblem,
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        flags: FamilyFlags,
    },
    /// Split the arcs into a family member and an acyclic rest.
    Partition {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = parse_kind)]
        kind: ArcFamilyKind,
    },
    /// Exhaustive ground truth, limited by caps (env ORDO_ORACLE_CAP, e.g. "9" or "n=9,m=24").
    Oracle {
        #[command(subcommand)]
        query: OracleQuery,
    },
    /// Build a hardness gadget and write PREFIX.dg, PREFIX.bounds.json, PREFIX.tags.json.
    Reduce {
        #[arg(value_enum)]
        gadget: Gadget,
        /// Source graph (.dg) or formula (DIMACS CNF).
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        /// Split parallel arcs so the gadget is simple.
        #[arg(long)]
        simple: bool,
        /// Window size for dist-lift.
        #[arg(long)]
        d: Option<usize>,
        /// Half the source vertex count for dist-lift.
        #[arg(long)]
        l: Option<usize>,
    },
    /// Rank aggregation over judges' complete rankings (CSV, one judge per line).
    Rank {
        #[arg(value_enum)]
        task: RankTask,
        #[arg(long)]
        rankings: PathBuf,
        /// Uniform disappointment cap.
        #[arg(long)]
        cap: Option<String>,
        /// Per-candidate caps: JSON map from candidate name to value.
        #[arg(long)]
        caps: Option<PathBuf>,
        /// Disappointment weights: JSON square matrix replacing judge counts.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Whether seed vertices activate a threshold network one vertex at a time.
    Activate {
        #[arg(long)]
        graph: PathBuf,
        /// JSON {"tau": {"v": t, ...}, "seed": [...]}.
        #[arg(long)]
        thresholds: PathBuf,
    },
    /// Re-check a report, or a claimed order, partition or witness, from scratch.
    Verify(VerifyArgs),
    /// Random digraph by independent arc sampling with a ChaCha8 stream.
    Gen(GenArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    Upper,
    Lower,
    Minmax,
    Mixed,
    OutUpperInLower,
    OutLowerInUpper,
    Exact,
    DDistance,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Self::Upper => "upper",
            Self::Lower => "lower",
            Self::Minmax => "minmax",
            Self::Mixed => "mixed",
            Self::OutUpperInLower => "out-upper-in-lower",
            Self::OutLowerInUpper => "out-lower-in-upper",
            Self::Exact => "exact",
            Self::DDistance => "d-distance",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct ProblemInput {
    #[arg(long)]
    pub graph: PathBuf,
    /// Bounds JSON: maps f, g, f_rho, g_rho, m_delta, m_rho, w_default from vertex id to value.
    #[arg(long)]
    pub bounds: Option<PathBuf>,
    /// d-distance: number of end positions enumerated; the window is n - k.
    #[arg(long)]
    pub k: Option<usize>,
    /// d-distance: largest accepted k.
    #[arg(long, default_value_t = ordo_core::bounded::D_DISTANCE_DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyProblem {
    /// Left arcs an in-branching; --roots forces roots.
    InBranching,
    /// Left arcs |S| disjoint dipaths from --S to --T.
    StDipaths,
    /// Left arcs a Hamiltonian dipath, from --s to --t if given.
    HamDipath,
    /// Left arcs exactly --k disjoint dipaths, each with at least one arc.
    Dipaths,
    /// Left arcs an in-arborescence and right arcs an out-arborescence at --root (or any root).
    InArbOutArb,
}

#[derive(Args, Debug, Clone, Default)]
pub struct FamilyFlags {
    #[arg(long, value_delimiter = ',')]
    pub roots: Vec<usize>,
    #[arg(long = "S", value_delimiter = ',')]
    pub sources: Vec<usize>,
    #[arg(long = "T", value_delimiter = ',')]
    pub sinks: Vec<usize>,
    #[arg(long = "s")]
    pub start: Option<usize>,
    #[arg(long = "t")]
    pub end: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub root: Option<usize>,
    /// dipaths: largest accepted --k.
    #[arg(long, default_value_t = ordo_core::family::DIPATH_DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(Subcommand, Debug)]
pub enum OracleQuery {
    /// Print the active caps.
    Caps,
    /// Lexicographically first order for a bounded-ordering problem.
    Solve {
        #[arg(value_enum)]
        problem: Problem,
        #[command(flatten)]
        input: ProblemInput,
        /// Read signed weights from the graph and search prefix sets (bounds problems only).
        #[arg(long)]
        signed: bool,
    },
    /// Some partition into a family member and an acyclic rest.
    Partition {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = parse_kind)]
        kind: ArcFamilyKind,
    },
    /// Minimum in-branching meeting every directed cycle.
    InbranchingCover {
        #[arg(long)]
        graph: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gadget {
    Is,
    IsNegw,
    #[value(name = "3xsat3")]
    Xsat3,
    NaeMatching,
    NaePerfect,
    SplitArcs,
    MatchToDipaths,
    HampathSplit,
    #[value(name = "1dist")]
    OneDist,
    DistLift,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankTask {
    Penalty,
    Minmax,
    Disappointment,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// A JSON report produced by another command.
    #[arg(long, conflicts_with_all = ["order", "partition", "witness"])]
    pub report: Option<PathBuf>,
    /// Claimed order, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub order: Option<Vec<usize>>,
    /// Claimed partition as JSON {"kind", "family_arcs", "acyclic_arcs"}.
    #[arg(long)]
    pub partition: Option<PathBuf>,
    /// Claimed infeasibility witness as JSON {"type": ..., ...}.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// Problem the order or witness refers to.
    #[arg(long, value_enum)]
    pub problem: Option<Problem>,
    /// Arc family the order or witness refers to.
    #[arg(long, value_parser = parse_kind)]
    pub kind: Option<ArcFamilyKind>,
    #[arg(long)]
    pub bounds: Option<PathBuf>,
    /// d-distance: the k the report was solved with.
    #[arg(long)]
    pub window_k: Option<usize>,
    /// Arc-family problem the order or witness refers to.
    #[arg(long, value_enum)]
    pub family: Option<FamilyProblem>,
    #[command(flatten)]
    pub flags: FamilyFlags,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundsFor {
    Upper,
    Lower,
    Mixed,
    OutUpperInLower,
    OutLowerInUpper,
    Exact,
    DDistance,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub n: usize,
    /// Probability of each ordered pair becoming an arc.
    #[arg(long, default_value_t = 0.3)]
    pub p: f64,
    /// Draw 0..=M parallel arcs per ordered pair instead of sampling with --p.
    #[arg(long)]
    pub max_mult: Option<usize>,
    /// Write the digraph here; without it the raw .dg text goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also draw a random bounds file for this problem.
    #[arg(long, value_enum, requires = "bounds_out")]
    pub bounds_for: Option<BoundsFor>,
    #[arg(long)]
    pub bounds_out: Option<PathBuf>,
}

pub fn family_name(family: FamilyProblem) -> String {
    value_name(family)
}

pub fn gadget_name(gadget: Gadget) -> String {
    value_name(gadget)
}

fn value_name(v: impl ValueEnum) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_owned()
}

fn parse_kind(s: &str) -> Result<ArcFamilyKind, String> {
    s.parse()
}
