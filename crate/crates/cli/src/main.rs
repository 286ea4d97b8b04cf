use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gkm_core::automorphism::{aut_star, enumerate_aut};
use gkm_core::cohomology::{betti_numbers, equivariant_basis, Lattice};
use gkm_core::hessenberg::{build_gkm_graph_with_limit, GRAPH_GUARD};
use gkm_core::unipotent::sweep;
use gkm_core::verify::{run_criterion, Bounds};
use gkm_core::{GkmError, GkmGraph, HessenbergFunction};
use serde_json::{json, Value};

/// Largest `n` for cohomology and automorphism computations without `--unsafe-large`.
const SWEEP_GUARD: usize = 5;

#[derive(Parser)]
#[command(name = "gkm", version, about = "GKM graphs of regular semisimple Hessenberg varieties")]
struct Cli {
    /// Lift the size guards (n <= 6 for graphs, n <= 5 for sweeps).
    #[arg(long, global = true)]
    unsafe_large: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Graph(GraphCmd),
    #[command(subcommand)]
    Aut(AutCmd),
    /// Print whether the staircase of h is symmetric under the anti-diagonal flip.
    StarCondition {
        #[arg(long)]
        h: HessenbergFunction,
    },
    #[command(subcommand)]
    Cohomology(CohomologyCmd),
    #[command(subcommand)]
    Unipotent(UnipotentCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Build the GKM graph of Hess(S, h).
    Build {
        #[arg(long)]
        h: HessenbergFunction,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check the GKM axioms on a graph stored as JSON.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum AutCmd {
    /// List every automorphism of the graph.
    Enumerate {
        #[arg(long)]
        h: HessenbergFunction,
        #[arg(long)]
        count_only: bool,
    },
    /// Automorphisms acting trivially on H^{2k} for all k up to the given polynomial degree.
    Star {
        #[arg(long)]
        h: HessenbergFunction,
        #[arg(long)]
        max_degree: u32,
    },
}

#[derive(Subcommand)]
enum CohomologyCmd {
    /// Ordinary Betti numbers (b_0, b_2, ..., b_2d).
    Betti {
        #[arg(long)]
        h: HessenbergFunction,
    },
    /// A basis of the equivariant cohomology in the given (cohomological) degree.
    Equivariant {
        #[arg(long)]
        h: HessenbergFunction,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = LatticeArg::T)]
        lattice: LatticeArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeArg {
    T,
    That,
}

#[derive(Subcommand)]
enum UnipotentCmd {
    /// One certificate per h != (n, ..., n) and ordered pair (i, j).
    Sweep {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Run every acceptance criterion with sizes capped at n.
    All {
        #[arg(long)]
        n: usize,
    },
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<GkmError> for Failure {
    fn from(e: GkmError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(t) = std::env::var("GKM_THREADS") {
        match t.parse::<usize>() {
            Ok(k) if k > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
            _ => {
                eprintln!("error: GKM_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn guard(n: usize, limit: usize, unsafe_large: bool) -> Result<(), Failure> {
    if n > limit && !unsafe_large {
        return Err(GkmError::SizeGuard { n, limit }.into());
    }
    Ok(())
}

fn graph(h: &HessenbergFunction, limit: usize, unsafe_large: bool) -> Result<GkmGraph, Failure> {
    guard(h.n(), limit, unsafe_large)?;
    Ok(build_gkm_graph_with_limit(h, h.n().max(limit))?)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json serializes"));
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let unsafe_large = cli.unsafe_large;
    match &cli.command {
        Command::Graph(GraphCmd::Build { h, out, format }) => {
            let g = graph(h, GRAPH_GUARD, unsafe_large)?;
            let text = match format {
                Format::Json => g.to_json() + "\n",
                Format::Dot => g.to_dot(),
            };
            match out {
                Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
        }
        Command::Graph(GraphCmd::Validate { input }) => {
            let text = fs::read_to_string(input).map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
            let g = GkmGraph::from_json(&text)?;
            let report = g.validate();
            print_json(&serde_json::to_value(&report).expect("report serializes"));
            if !report.all_passed() {
                return Err(Failure::Verification);
            }
        }
        Command::Aut(AutCmd::Enumerate { h, count_only }) => {
            let g = graph(h, SWEEP_GUARD, unsafe_large)?;
            eprintln!("enumerating automorphisms of Γ_({h})");
            let auts = enumerate_aut(&g)?;
            if *count_only {
                println!("{}", auts.len());
            } else {
                print_json(&Value::Array(auts.iter().map(|a| a.to_json_value(&g)).collect()));
            }
        }
        Command::Aut(AutCmd::Star { h, max_degree }) => {
            let g = graph(h, SWEEP_GUARD, unsafe_large)?;
            let auts = enumerate_aut(&g)?;
            eprintln!("{} automorphisms; computing their action up to degree {}", auts.len(), 2 * max_degree);
            let star = aut_star(&g, &auts, *max_degree)?;
            print_json(&Value::Array(star.iter().map(|a| a.to_json_value(&g)).collect()));
        }
        Command::StarCondition { h } => println!("{}", h.star_condition()),
        Command::Cohomology(CohomologyCmd::Betti { h }) => {
            let g = graph(h, SWEEP_GUARD, unsafe_large)?;
            let b = betti_numbers(&g)?;
            println!("{}", serde_json::to_string(&b).expect("json serializes"));
        }
        Command::Cohomology(CohomologyCmd::Equivariant { h, degree, lattice }) => {
            let g = graph(h, SWEEP_GUARD, unsafe_large)?;
            let (lattice, name) = match lattice {
                LatticeArg::T => (Lattice::T, "t"),
                LatticeArg::That => (Lattice::THat, "that"),
            };
            let basis = equivariant_basis(&g, lattice, *degree)?;
            let classes: Vec<BTreeMap<String, String>> = basis.iter().map(|xi| xi.table(&g).into_iter().collect()).collect();
            print_json(&json!({
                "h": h.values(),
                "lattice": name,
                "degree": degree,
                "dimension": basis.len(),
                "basis": classes,
            }));
        }
        Command::Unipotent(UnipotentCmd::Sweep { n }) => {
            guard(*n, SWEEP_GUARD, unsafe_large)?;
            if *n < 2 {
                return Err(Failure::Usage("n must be at least 2".into()));
            }
            let certs = sweep(*n)?;
            let missing = certs.iter().filter(|c| c.witness.is_none()).count();
            print_json(&serde_json::to_value(&certs).expect("certificates serialize"));
            eprintln!("{} certificates, {missing} without a witness", certs.len());
            if missing > 0 {
                return Err(Failure::Verification);
            }
        }
        Command::Verify(VerifyCmd::All { n }) => {
            guard(*n, SWEEP_GUARD, unsafe_large)?;
            let bounds = Bounds::capped(*n);
            let mut ok = true;
            for id in 1..=9 {
                let start = std::time::Instant::now();
                let report = run_criterion(id, &bounds).expect("criterion exists");
                eprintln!("criterion {id} took {:.1?}", start.elapsed());
                println!("{report}");
                ok &= report.passed();
            }
            if !ok {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}
