use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use sc_core::io::{read_certificate, read_complex, read_embedding, write_certificate, write_complex, write_embedding, write_path};
use sc_core::{
    iterated_subdivision, ordered_product, sc_upper_bound, verify_certificate, ApproxPolicy, Complex, Embedding,
    Example, Outcome, Planner, SearchConfig, DEFAULT_SIZE_BUDGET,
};

/// Certified upper bounds on simplicial complexity and the motion planners
/// they carry.
#[derive(Parser)]
#[command(name = "sc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize a complex (a document path or an example name).
    Info { complex: String },
    /// Ordered product of two complexes.
    Product {
        a: String,
        b: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterated barycentric subdivision.
    Subdivide {
        complex: String,
        #[arg(long, default_value_t = 1)]
        b: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a cover certificate bounding SC^b_c.
    Bound {
        complex: String,
        #[arg(long, default_value_t = 1)]
        b: usize,
        #[arg(long, default_value_t = 16)]
        cmax: usize,
        #[arg(long, default_value_t = 2)]
        pieces: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Chain searches the run may spend.
        #[arg(long, default_value_t = 2_000)]
        budget: usize,
        /// Subdivide further, up to this level, when level b fails.
        #[arg(long)]
        max_b: Option<usize>,
        #[arg(long, default_value = "max")]
        policy: ApproxPolicy,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate from scratch.
    Verify { certificate: PathBuf },
    /// Plan a path from x to y with a certificate's local rules.
    Plan {
        certificate: PathBuf,
        /// Embedding of the base complex; defaults to the built-in one when
        /// the base is a known example.
        #[arg(long)]
        embedding: Option<PathBuf>,
        /// Start point, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// End point, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a built-in example complex: circle, simplex<n>, interval, torus.
    Example {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write its embedding here.
        #[arg(long)]
        embedding_out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn load_complex(arg: &str) -> Result<Arc<Complex>> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        return Ok(Arc::new(read_complex(&text).with_context(|| format!("parsing {arg}"))?));
    }
    match arg.parse::<Example>() {
        Ok(e) => Ok(e.complex()),
        Err(_) => bail!("{arg} is neither a readable file nor a known example"),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_point(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad coordinate {t:?}")))
        .collect()
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Info { complex } => {
            let k = load_complex(&complex)?;
            let f = k.f_vector();
            println!("vertices: {}", k.num_vertices());
            println!("maximal simplices: {}", k.maximal_simplices().len());
            println!("dimension: {}", k.dim());
            println!(
                "f-vector: ({})",
                f.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", ")
            );
            println!("euler characteristic: {}", k.euler_characteristic());
        }
        Command::Product { a, b, out } => {
            let p = ordered_product(&load_complex(&a)?, &load_complex(&b)?);
            emit(&write_complex(&p.complex), out.as_deref())?;
        }
        Command::Subdivide { complex, b, out } => {
            let k = load_complex(&complex)?;
            let levels = iterated_subdivision(&k, b, DEFAULT_SIZE_BUDGET)?;
            let top = levels.last().map_or(k, |s| s.complex.clone());
            emit(&write_complex(&top), out.as_deref())?;
        }
        Command::Bound {
            complex,
            b,
            cmax,
            pieces,
            seed,
            budget,
            max_b,
            policy,
            out,
        } => {
            let k = load_complex(&complex)?;
            let cfg = SearchConfig {
                b,
                c_max: cmax,
                max_pieces: pieces,
                seed,
                budget,
                max_b: max_b.unwrap_or(b).max(b),
                policy,
                ..SearchConfig::default()
            };
            let report = sc_upper_bound(&k, &cfg)?;
            println!("levels searched: {:?}", report.stats.levels_tried);
            println!("chain searches: {}", report.stats.evaluations);
            match &report.outcome {
                Outcome::Certified(cert) => {
                    let text = write_certificate(cert);
                    // what goes out is what gets checked
                    let reread = read_certificate(&text).context("re-reading the certificate")?;
                    if let Err(d) = verify_certificate(&reread) {
                        bail!("written certificate failed verification: {d}");
                    }
                    if let Some(p) = &out {
                        std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
                        let back = std::fs::read_to_string(p)?;
                        if back != text {
                            bail!("certificate on disk differs from what was written");
                        }
                        if let Err(d) = verify_certificate(&read_certificate(&back)?) {
                            bail!("certificate on disk failed verification: {d}");
                        }
                    }
                    println!("bound: {}", cert.bound());
                    println!("b: {}", cert.b);
                    println!("c: {}", cert.c);
                    println!("chain lengths: {:?}", report.stats.chain_lengths);
                    println!("piece sizes: {:?}", report.stats.piece_sizes);
                    println!("certificate: verified");
                }
                Outcome::BudgetExhausted => {
                    println!("bound: none (no cover found within budget)");
                    return Ok(ExitCode::from(2));
                }
                Outcome::GuardrailAbort { level, projected } => {
                    println!("bound: none (level {level} would have {projected} top simplices)");
                    return Ok(ExitCode::from(2));
                }
            }
        }
        Command::Verify { certificate } => {
            let text = std::fs::read_to_string(&certificate)
                .with_context(|| format!("reading {}", certificate.display()))?;
            let cert = read_certificate(&text)?;
            match verify_certificate(&cert) {
                Ok(()) => println!(
                    "ok: SC^{}_{} <= {} ({} pieces)",
                    cert.b,
                    cert.c,
                    cert.bound(),
                    cert.pieces.len()
                ),
                Err(d) => {
                    println!("rejected: {d}");
                    return Ok(ExitCode::FAILURE);
                }
            }
        }
        Command::Plan {
            certificate,
            embedding,
            x,
            y,
            samples,
            out,
        } => {
            let text = std::fs::read_to_string(&certificate)
                .with_context(|| format!("reading {}", certificate.display()))?;
            let cert = read_certificate(&text)?;
            if let Err(d) = verify_certificate(&cert) {
                bail!("certificate rejected: {d}");
            }
            let emb: Embedding = match embedding {
                Some(p) => read_embedding(&std::fs::read_to_string(&p)?, &cert.base)?,
                None => Example::NAMED
                    .into_iter()
                    .chain((1..=3).map(Example::Simplex))
                    .find(|e| *e.complex() == *cert.base)
                    .map(Example::embedding)
                    .context("no --embedding given and the base is not a built-in example")?,
            };
            let planner = Planner::new(&cert, &emb)?;
            let path = planner.plan(&parse_point(&x)?, &parse_point(&y)?)?;
            let rows: Vec<(f64, Vec<f64>)> = if samples >= 2 {
                path.samples(samples)
            } else {
                path.times.iter().copied().zip(path.breakpoints.iter().cloned()).collect()
            };
            emit(&write_path(&rows), out.as_deref())?;
        }
        Command::Example {
            name,
            out,
            embedding_out,
        } => {
            let e: Example = name.parse()?;
            let k = e.complex();
            emit(&write_complex(&k), out.as_deref())?;
            if let Some(p) = embedding_out {
                std::fs::write(&p, write_embedding(&e.embedding(), &k))
                    .with_context(|| format!("writing {}", p.display()))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
