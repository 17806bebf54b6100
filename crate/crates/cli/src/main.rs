use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "olat", version, about = "Finite lattices, ortholattices and polynomial interpolation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Clone budget (members per closure).
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Largest lattice a construction may build.
    #[arg(long, global = true)]
    pub size_cap: Option<usize>,
    /// Seed for `--fn random`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Run every kernel on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Lattice,
    Ortho,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Product,
    Hsum,
    Glued,
    DualCopy,
    Ortho,
    Power,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the lattice (and orthocomplement) axioms of a document.
    Validate { input: String },
    /// Certificate table for an embedding document.
    Relate { embedding: PathBuf },
    /// Build a lattice: product/hsum of two lattices, glued union of two
    /// embeddings, dual-copy/ortho of one embedding, or a power witness.
    Construct {
        kind: Kind,
        inputs: Vec<String>,
        /// Power witness: elements of `S`, comma separated.
        #[arg(long)]
        subset: Option<String>,
        /// Power witness arity.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Also write the result as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Unary polynomial functions with shortest witnesses.
    Closure {
        input: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Ortho)]
        mode: ModeArg,
    },
    /// Shortest polynomial agreeing with a table.
    Interpolate {
        input: String,
        /// `x:y,...`, `(a,b):c,...` or `random`.
        #[arg(long = "fn")]
        function: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Ortho)]
        mode: ModeArg,
    },
    /// Realize a unary function on an ortholattice as a polynomial of an
    /// extension.
    ExtendPipeline {
        #[arg(long)]
        l0: String,
        #[arg(long = "fn")]
        function: String,
    },
    /// Reduce an n-ary table to a unary one over a power witness.
    NaryReduce {
        input: String,
        #[arg(long = "fn")]
        function: String,
        /// Use the orthocomplement of the input.
        #[arg(long)]
        ortho: bool,
    },
    /// List the built-in lattices, or print one.
    Zoo {
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        export_dot: bool,
        /// Draw orthocomplement pairs in DOT output.
        #[arg(long)]
        perp: bool,
    },
    /// Hasse diagram of a document as DOT.
    ExportDot {
        input: String,
        #[arg(long)]
        perp: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { commands::USAGE } else { commands::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(fail) => {
            eprintln!("error: {}", fail.message);
            ExitCode::from(fail.code)
        }
    }
}
