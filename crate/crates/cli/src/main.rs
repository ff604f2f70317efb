use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use torsion4::commands::{self, EmbeddingSource, MoveKind, Theorem};
use torsion4::formats::{read_json, to_json, write_json, EmbeddingFile, TriangulationFile};
use torsion4::fuzz::{self, Trace};
use torsion4::lens::lens_space;
use torsion4::{configure_threads, sci, CliError, EXIT_FAILED, EXIT_NO_INVARIANT, EXIT_OK};
use torsion4_core::euclid4::random_embedding;

#[derive(Parser)]
#[command(
    name = "torsion4",
    version,
    about = "Geometric torsion of 3-manifold pseudotriangulations embedded in R^4"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a triangulation file; exit 0 iff it is a valid closed pseudotriangulation.
    Validate {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Build the complex for an embedding and compute |I|.
    Invariant {
        path: PathBuf,
        #[arg(long, conflicts_with = "embedding")]
        seed: Option<u64>,
        #[arg(long)]
        embedding: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        /// Add wall-clock time to the report (makes it non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Apply one move: `2-3 <face>`, `3-2 <edge>`, `1-4 <tet>`, `4-1 <vertex>` or `0-2 <face>`.
    Move {
        path: PathBuf,
        #[arg(value_name = "MOVE")]
        kind: String,
        index: usize,
        #[arg(long)]
        out: PathBuf,
        /// Label of the vertex created by 1-4 or 0-2.
        #[arg(long)]
        label: Option<String>,
    },
    /// Random move sequence; passes iff |I| stays within the tolerance.
    Fuzz {
        path: PathBuf,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Write the move trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Replay a trace instead of drawing moves.
        #[arg(long, conflicts_with_all = ["steps", "seed"])]
        replay: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Check an identity on every applicable cell: complex, 2-3, 0-2, e5 or e7.
    Verify {
        path: PathBuf,
        theorem: String,
        /// First embedding seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of embeddings (seeds seed, seed+1, ...).
        #[arg(long, default_value_t = 1)]
        embeddings: u64,
        #[arg(long)]
        json: bool,
    },
    /// Write the barycentrically subdivided lens space L(p, q).
    Lens {
        p: usize,
        q: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a random general-position embedding.
    Embed {
        path: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Export the five maps with labelled bases as JSON.
    Complex {
        path: PathBuf,
        #[arg(long, conflicts_with = "embedding")]
        seed: Option<u64>,
        #[arg(long)]
        embedding: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Validate { path, json } => {
            let v = commands::validate_file(&path)?;
            if json {
                println!("{}", to_json(&v));
            } else if v.valid {
                let [n0, n1, n2, n3] = v.counts.unwrap_or_default();
                println!("valid: N0={n0} N1={n1} N2={n2} N3={n3}");
            } else {
                println!("invalid:");
                for x in &v.violations {
                    println!("  {x}");
                }
            }
            Ok(if v.valid { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Invariant {
            path,
            seed,
            embedding,
            json,
            timing,
        } => {
            let pt = commands::load(&path)?;
            let source = EmbeddingSource::from_args(seed, embedding.as_deref())?;
            let r = commands::run_invariant(&pt, &source, timing)?;
            if json {
                println!("{}", to_json(&r));
            } else {
                let [n0, n1, n2, n3] = r.counts;
                println!(
                    "complex     N0={n0} N1={n1} N2={n2} N3={n3}, embedding seed {:?}",
                    r.embedding_seed
                );
                println!("dims        {:?}", r.dims);
                println!(
                    "norms       {}",
                    r.composition_norms
                        .iter()
                        .map(|x| sci(*x))
                        .collect::<Vec<_>>()
                        .join(" ")
                );
                println!("ranks       {:?} (acyclic: {})", r.ranks, r.acyclic);
                match (r.abs_tau, r.abs_i) {
                    (Some(t), Some(i)) => {
                        println!("|tau|       {}", sci(t));
                        println!("|I|         {}", sci(i));
                    }
                    _ => println!("no invariant: {}", r.error.as_deref().unwrap_or("unknown")),
                }
                if let Some(t) = r.timing {
                    println!("time        {t:.3} s");
                }
            }
            Ok(if r.abs_i.is_some() { EXIT_OK } else { EXIT_NO_INVARIANT })
        }
        Command::Move {
            path,
            kind,
            index,
            out,
            label,
        } => {
            let pt = commands::load(&path)?;
            let kind: MoveKind = kind.parse()?;
            let next = commands::apply_move(&pt, kind, index, label)?;
            commands::write_triangulation(&out, &next)?;
            let [n0, n1, n2, n3] = next.counts();
            println!("{kind} {index}: N0={n0} N1={n1} N2={n2} N3={n3} -> {}", out.display());
            Ok(EXIT_OK)
        }
        Command::Fuzz {
            path,
            steps,
            seed,
            tol,
            trace,
            replay,
            json,
        } => {
            let pt = commands::load(&path)?;
            let report = match replay {
                Some(p) => fuzz::replay(&pt, &read_json::<Trace>(&p)?, tol)?,
                None => fuzz::fuzz(&pt, steps, seed, tol)?,
            };
            if let Some(p) = trace {
                write_json(&p, &report.trace)?;
            }
            if json {
                println!("{}", to_json(&report));
            } else {
                for s in &report.steps {
                    let m = s
                        .applied
                        .as_ref()
                        .map(|m| format!("{} {}", m.kind, m.index))
                        .unwrap_or_else(|| "start".into());
                    let v = s
                        .abs_i
                        .map(sci)
                        .unwrap_or_else(|| format!("none ({})", s.error.as_deref().unwrap_or("")));
                    println!("{:>4} {:<8} N3={:<3} |I| = {v}", s.step, m, s.counts[3]);
                }
                println!(
                    "max relative deviation {} (tolerance {}): {}",
                    sci(report.max_rel_deviation),
                    sci(tol),
                    if report.pass { "PASS" } else { "FAIL" }
                );
                if report.invariant_failures > 0 {
                    println!("steps without an invariant: {}", report.invariant_failures);
                }
            }
            Ok(if report.pass { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Verify {
            path,
            theorem,
            seed,
            embeddings,
            json,
        } => {
            let pt = commands::load(&path)?;
            let theorem: Theorem = theorem.parse()?;
            let seeds: Vec<u64> = (seed..seed + embeddings.max(1)).collect();
            let table = commands::verify(&pt, theorem, &seeds);
            if json {
                println!("{}", to_json(&table));
            } else {
                println!(
                    "{:<8} {:>5} {:<24} {:>24} {:>24} {:>24} {:>8}  verdict",
                    "cell", "seed", "quantity", "computed", "expected", "error", "tol"
                );
                for r in &table.rows {
                    let verdict = match (r.diagnostic, r.pass) {
                        (true, _) => "info",
                        (false, true) => "pass",
                        (false, false) => "FAIL",
                    };
                    println!(
                        "{:<8} {:>5} {:<24} {:>24} {:>24} {:>24} {:>8.0e}  {verdict}",
                        r.cell,
                        r.embedding_seed,
                        r.quantity,
                        sci(r.computed),
                        sci(r.expected),
                        sci(r.error),
                        r.tolerance
                    );
                }
                if !table.skipped.is_empty() {
                    println!("not applicable: {}", table.skipped.join(", "));
                }
                for f in &table.failures {
                    println!("error: {f}");
                }
                println!("{}", if table.pass { "PASS" } else { "FAIL" });
            }
            Ok(if table.pass { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Lens { p, q, out } => {
            let raw = lens_space(p, q).map_err(|e| CliError::Input(e.to_string()))?;
            write_json(&out, &TriangulationFile::from_raw(&raw))?;
            println!("L({p},{q}): {} tetrahedra -> {}", raw.tetrahedra.len(), out.display());
            Ok(EXIT_OK)
        }
        Command::Embed { path, seed, out } => {
            let pt = commands::load(&path)?;
            let emb = random_embedding(&pt, seed).map_err(|e| CliError::Input(format!("cannot embed: {e}")))?;
            write_json(&out, &EmbeddingFile::from_embedding(&pt, &emb, Some(seed)))?;
            println!("embedding (seed {seed}) -> {}", out.display());
            Ok(EXIT_OK)
        }
        Command::Complex {
            path,
            seed,
            embedding,
            out,
        } => {
            let pt = commands::load(&path)?;
            let source = EmbeddingSource::from_args(seed, embedding.as_deref())?;
            let file = commands::export_complex(&pt, &source)?;
            match out {
                Some(p) => write_json(&p, &file)?,
                None => println!("{}", to_json(&file)),
            }
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = configure_threads().and_then(|()| run(cli.command)).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
