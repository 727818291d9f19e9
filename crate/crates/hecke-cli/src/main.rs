use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hecke::{CartanType, DemazureKind, GaussOrientation, Weight};
use hecke_cli::{
    parse_weight, run_cs, run_demazure, run_metaplectic, run_rmatrix, run_verify, run_wreath, DemazureArgs,
    InstanceKind, MetaplecticArgs, ModuleKind, Output, RCheck, RMatrixArgs, VerifyArgs,
};

/// Environment variable that fixes the size of the worker pool.
const THREADS_VAR: &str = "HECKE_THREADS";

#[derive(Parser)]
#[command(name = "hecke", version, about = "Exact verification of affine Hecke algebra representation schemas")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Quadratic, braid and Bernstein checks on a schema instance.
    Verify(VerifyCmd),
    /// Casselman-Shalika formula for a dominant weight.
    Cs(CsCmd),
    /// Relations of Demazure-type operators; optionally apply a word to a polynomial.
    Demazure(DemazureCmd),
    /// Yang-Baxter, Hecke, triangularity and tensor-schema checks.
    Rmatrix(RMatrixCmd),
    /// Whittaker values on a metaplectic cover of GL(r).
    Metaplectic(MetaplecticCmd),
    /// Wreath module checks and the zero limit of the tensor schema.
    Wreath(WreathCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum Instance {
    Generic,
    Whittaker,
    Spherical,
    Metaplectic,
    Rmatrix,
}

#[derive(Clone, Copy, ValueEnum)]
enum Orientation {
    Standard,
    Conjugate,
}

impl From<Orientation> for GaussOrientation {
    fn from(o: Orientation) -> Self {
        match o {
            Orientation::Standard => GaussOrientation::Standard,
            Orientation::Conjugate => GaussOrientation::Conjugate,
        }
    }
}

#[derive(Args)]
struct CoverOpts {
    /// Degree of the cover (tensor dimension for the rmatrix instance).
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// Bilinear form: `dot` or a JSON integer matrix.
    #[arg(long = "B", default_value = "dot")]
    form: String,
    /// Which Gauss sum index the scattering data uses.
    #[arg(long, value_enum, default_value_t = Orientation::Standard)]
    orientation: Orientation,
}

#[derive(Args)]
struct VerifyCmd {
    /// Cartan type: A1..A4, B2, C2, G2 (GL2..GL5 also accepted).
    #[arg(long = "type", value_parser = parse_type)]
    cartan_type: CartanType,
    #[arg(long, value_enum)]
    instance: Instance,
    /// Weight for a Bernstein check, e.g. `(1,0,0)`; repeatable. Defaults to a lattice basis.
    #[arg(long, value_parser = parse_weight_arg)]
    bernstein: Vec<Weight>,
    /// Use the Gauss-twisted R-matrix for the rmatrix instance.
    #[arg(long)]
    gauss: bool,
    #[command(flatten)]
    cover: CoverOpts,
}

#[derive(Args)]
struct CsCmd {
    #[arg(long = "type", value_parser = parse_type)]
    cartan_type: CartanType,
    /// Dominant weight, e.g. `(2,1,0)`.
    #[arg(long, value_parser = parse_weight_arg)]
    weight: Weight,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Whittaker,
    Unconjugated,
    Lusztig,
}

#[derive(Args)]
struct DemazureCmd {
    #[arg(long = "type", value_parser = parse_type)]
    cartan_type: CartanType,
    #[arg(long, value_enum, default_value_t = Kind::Whittaker)]
    kind: Kind,
    /// Coordinate bound for the monomial basis.
    #[arg(long, default_value_t = 2)]
    bound: i64,
    /// Polynomial in z1, z2, ... and u to act on.
    #[arg(long)]
    poly: Option<String>,
    /// Reduced word of simple reflections (1-based), e.g. `1,2,1`; applied right to left.
    #[arg(long, value_delimiter = ',', requires = "poly")]
    word: Vec<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RCheckArg {
    Ybe,
    Pybe,
    Hecke,
    Triangularity,
    Schema,
}

#[derive(Args)]
struct RMatrixCmd {
    #[arg(value_enum)]
    check: RCheckArg,
    #[arg(long)]
    n: usize,
    /// Twist by Gauss-sum symbols.
    #[arg(long, conflicts_with = "twisted")]
    gauss: bool,
    /// Twist by free symbols gamma_ij.
    #[arg(long)]
    twisted: bool,
    #[arg(long, value_enum, default_value_t = Orientation::Standard)]
    orientation: Orientation,
    /// Number of tensor factors for the schema check.
    #[arg(long, default_value_t = 2)]
    r: usize,
}

#[derive(Args)]
struct MetaplecticCmd {
    /// Rank of GL(r).
    #[arg(long)]
    r: usize,
    /// Dominant weight.
    #[arg(long, value_parser = parse_weight_arg)]
    weight: Option<Weight>,
    /// Scale one scattering coefficient by 2 to exercise the failure path.
    #[arg(long)]
    inject_mismatch: bool,
    #[command(flatten)]
    cover: CoverOpts,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModuleArg {
    Jimbo,
    Trivial,
}

#[derive(Args)]
struct WreathCmd {
    /// Number of tensor factors; the group is S_r.
    #[arg(long)]
    r: usize,
    /// Dimension of each tensor factor.
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, value_enum, default_value_t = ModuleArg::Jimbo)]
    module: ModuleArg,
}

fn parse_type(s: &str) -> Result<CartanType, String> {
    s.parse().map_err(|e: hecke::Error| e.to_string())
}

fn parse_weight_arg(s: &str) -> Result<Weight, String> {
    parse_weight(s).map_err(|e| e.to_string())
}

fn run(command: Command) -> hecke::Result<Output> {
    match command {
        Command::Verify(c) => run_verify(&VerifyArgs {
            cartan_type: c.cartan_type,
            instance: match c.instance {
                Instance::Generic => InstanceKind::Generic,
                Instance::Whittaker => InstanceKind::Whittaker,
                Instance::Spherical => InstanceKind::Spherical,
                Instance::Metaplectic => InstanceKind::Metaplectic,
                Instance::Rmatrix => InstanceKind::RMatrix,
            },
            bernstein: c.bernstein,
            n: c.cover.n,
            form: c.cover.form,
            orientation: c.cover.orientation.into(),
            gauss: c.gauss,
        }),
        Command::Cs(c) => run_cs(c.cartan_type, &c.weight),
        Command::Demazure(c) => run_demazure(&DemazureArgs {
            cartan_type: c.cartan_type,
            kind: match c.kind {
                Kind::Whittaker => DemazureKind::Whittaker,
                Kind::Unconjugated => DemazureKind::WhittakerUnconjugated,
                Kind::Lusztig => DemazureKind::Lusztig,
            },
            bound: c.bound,
            poly: c.poly,
            word: c.word,
        }),
        Command::Rmatrix(c) => run_rmatrix(&RMatrixArgs {
            n: c.n,
            check: match c.check {
                RCheckArg::Ybe => RCheck::Ybe,
                RCheckArg::Pybe => RCheck::Pybe,
                RCheckArg::Hecke => RCheck::Hecke,
                RCheckArg::Triangularity => RCheck::Triangularity,
                RCheckArg::Schema => RCheck::Schema,
            },
            gauss: c.gauss,
            twisted: c.twisted,
            orientation: c.orientation.into(),
            r: c.r,
        }),
        Command::Metaplectic(c) => run_metaplectic(&MetaplecticArgs {
            r: c.r,
            n: c.cover.n,
            weight: c.weight.unwrap_or_else(|| vec![0; c.r]),
            form: c.cover.form,
            orientation: c.cover.orientation.into(),
            inject_mismatch: c.inject_mismatch,
        }),
        Command::Wreath(c) => run_wreath(
            c.r,
            c.n,
            match c.module {
                ModuleArg::Jimbo => ModuleKind::Jimbo,
                ModuleArg::Trivial => ModuleKind::Trivial,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(s) = std::env::var(THREADS_VAR) {
        match s.parse::<usize>() {
            Ok(k) if k > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
                    eprintln!("hecke: cannot configure {k} threads: {e}");
                    return ExitCode::from(2);
                }
            }
            _ => {
                eprintln!("hecke: {THREADS_VAR} must be a positive integer, got `{s}`");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli.command) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.to_text()),
                Format::Json => println!("{}", out.to_json()),
            }
            if out.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("hecke: {e}");
            ExitCode::from(2)
        }
    }
}
