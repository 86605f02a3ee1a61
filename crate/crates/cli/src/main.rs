//! `multinet`: generate, verify, classify, subdivide and export discrete
//! multi-nets.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage, I/O or module
//! error.

mod check;
mod gen;
mod input;
mod seeds;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use multinet::io::{export_obj, to_json_string, Mesh, Meta, NetData, NetDocument};
use multinet::subdivision::{subdivide_circular, subdivide_q, SeedArcs, SeedPolicy};
use multinet::Exec;

#[derive(Parser)]
#[command(name = "multinet", version, about = "Discrete multi-nets: generation, checks and subdivision")]
struct Cli {
    /// Run the rectangle sweeps and patch filling on the rayon pool.
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded sample net as JSON.
    Gen(gen::GenArgs),
    /// Check a net; exit 1 and list the violations if it fails.
    Verify {
        #[arg(value_enum)]
        check: check::Check,
        #[command(flatten)]
        io: InOut,
        /// Maximum number of violations listed.
        #[arg(long, default_value_t = 20)]
        max_report: usize,
    },
    /// Print the class of a net and the signatures behind it.
    Classify {
        #[arg(value_enum)]
        kind: check::ClassifyKind,
        #[command(flatten)]
        io: InOut,
    },
    /// Refine a net by structure-preserving subdivision.
    Subdivide(SubdivideArgs),
    /// Write a point net as a mesh.
    Export {
        #[arg(long, value_enum, default_value = "obj")]
        format: Format,
        #[command(flatten)]
        io: InOut,
    },
}

#[derive(Args)]
struct InOut {
    /// Input net file; standard input if omitted or `-`.
    input: Option<PathBuf>,
    /// Output file; standard output if omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Obj,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Q,
    Circular,
}

#[derive(Args)]
struct SubdivideArgs {
    #[arg(long, value_enum)]
    scheme: Scheme,
    /// Segments per edge in both directions.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Segments per edge along the first index (overrides --n).
    #[arg(long)]
    nu: Option<usize>,
    /// Segments per edge along the second index (overrides --n).
    #[arg(long)]
    nv: Option<usize>,
    #[arg(long, default_value_t = 1)]
    rounds: usize,
    /// JSON file with seed polylines (q) or seed arcs (circular).
    #[arg(long)]
    seeds: Option<PathBuf>,
    #[command(flatten)]
    io: InOut,
}

/// Failure that ends the run with exit code 2.
#[derive(Debug)]
pub struct Fatal(pub String);

impl From<multinet::Error> for Fatal {
    fn from(e: multinet::Error) -> Self {
        Fatal(e.to_string())
    }
}

impl From<std::io::Error> for Fatal {
    fn from(e: std::io::Error) -> Self {
        Fatal(format!("i/o: {e}"))
    }
}

pub type Outcome<T> = Result<T, Fatal>;

/// Writes to `--out` or standard output.
pub fn emit(out: &Option<PathBuf>, text: &str) -> Outcome<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Fatal(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn subdivide(args: &SubdivideArgs, exec: Exec) -> Outcome<()> {
    let (n_u, n_v) = (args.nu.unwrap_or(args.n), args.nv.unwrap_or(args.n));
    let doc = input::load(&args.io.input)?;
    let (net, generator) = match args.scheme {
        Scheme::Q => {
            let net = input::points(&doc.net)?;
            let policy = match &args.seeds {
                Some(path) => seeds::polylines(path, net.at(0, 0).dim())?,
                None => SeedPolicy::Uniform,
            };
            let fine = subdivide_q(&net, n_u, n_v, args.rounds, &policy, exec)?;
            (NetData::Points(fine), "subdivide-q")
        }
        Scheme::Circular => {
            let net = input::euclid(&doc.net)?;
            let arcs = match &args.seeds {
                Some(path) => seeds::arcs(path)?,
                None => SeedArcs::spline(&net)?,
            };
            let out = subdivide_circular(&net, n_u, n_v, args.rounds, &arcs, exec)?;
            eprintln!(
                "joint angle {:.3e} rad, orthogonality defect {:.3e}, closure error {:.3e}",
                out.max_joint_angle, out.max_orthogonality_defect, out.max_closure_error
            );
            (NetData::Euclid(out.net), "subdivide-circular")
        }
    };
    let meta = Meta {
        seed: doc.meta.and_then(|m| m.seed),
        generator: Some(generator.into()),
        classification: None,
    };
    emit(&args.io.out, &to_json_string(&NetDocument::with_meta(net, meta))?)
}

fn export(io: &InOut) -> Outcome<()> {
    let doc = input::load(&io.input)?;
    let mesh: Mesh = match &doc.net {
        NetData::Points(n) => n.into(),
        NetData::Euclid(n) => n.into(),
        other => return Err(Fatal(format!("cannot export a {} as a mesh", other.kind()))),
    };
    let mut buf = Vec::new();
    export_obj(mesh, &mut buf)?;
    emit(&io.out, &String::from_utf8(buf).map_err(|e| Fatal(e.to_string()))?)
}

fn run(cli: Cli) -> Outcome<bool> {
    let exec = if cli.parallel { Exec::Parallel } else { Exec::Sequential };
    match cli.command {
        Command::Gen(args) => gen::run(&args).map(|_| true),
        Command::Verify { check, io, max_report } => check::verify(check, &io.input, &io.out, max_report, exec),
        Command::Classify { kind, io } => check::classify(kind, &io.input, &io.out).map(|_| true),
        Command::Subdivide(args) => subdivide(&args, exec).map(|_| true),
        Command::Export { format: Format::Obj, io } => export(&io).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
