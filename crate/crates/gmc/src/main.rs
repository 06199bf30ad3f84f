use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use gmc::{commands, spec, suites, CliError, Group, RunConfig, Suite, Table};

/// Generalized matrix coefficients on the circle and the Heisenberg group.
#[derive(Debug, Parser)]
#[command(name = "gmc", version)]
struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the CSV table here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Heisenberg truncation N.
    #[arg(long, global = true)]
    truncation: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Partial sums Σ_{|n|≤m} a_n f̂(-n) of a torus Fourier series.
    TorusSeries {
        /// Torus sequence `a`, e.g. `comb`, `poly:2`, `unit:3`, `json:<path>`.
        #[arg(long)]
        coeffs: String,
        /// Band-limited test function, e.g. `band:4:fejer`.
        #[arg(long)]
        f: String,
        /// Largest partial-sum index m.
        #[arg(long)]
        m_max: u64,
    },
    /// Fourier–Wigner transform ⟨π(p,q,0)φ, ψ⟩ on a grid.
    Wigner {
        /// Hermite vector φ, e.g. `e:0`, `delta`, `poly-growth:1`.
        #[arg(long)]
        phi: String,
        /// Hermite vector ψ; must be rapid-decay unless `--mollify` is given.
        #[arg(long)]
        psi: String,
        /// `lo:hi:count` for both axes, or `<p-axis>,<q-axis>`.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// `n` or `mollifier:n=<k>:radius=<ρ>`; smooths distribution arguments.
        #[arg(long)]
        mollify: Option<String>,
    },
    /// Convergence table of ⟨π(f)π(J_n)η, ζ⟩ → ⟨π(f)η, ζ⟩.
    Mollify {
        /// Model to run on (default from the config, else torus).
        #[arg(long, value_enum)]
        group: Option<Group>,
        /// Distribution vector η that gets mollified.
        #[arg(long)]
        eta: String,
        /// Fixed vector ζ.
        #[arg(long)]
        zeta: String,
        /// Test function: `band:…` on the torus, `bump3:…` on the Heisenberg group.
        #[arg(long)]
        f: String,
        /// Comma-separated list of n.
        #[arg(long, default_value = "2,4,8,16")]
        n: String,
        /// Profile radius ρ of J_1.
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Run a property suite and report per-property pass/fail.
    Verify {
        /// uea, torus-covariance, heisenberg-covariance, mollifier, smoothing or structure.
        suite: String,
        /// Seed for the randomized cases (default from the config, else 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Replace every numeric tolerance of the suite.
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn emit(table: &Table, path: Option<&PathBuf>) -> Result<(), CliError> {
    match path {
        Some(p) => table.write(BufWriter::new(File::create(p)?)),
        None => table.write(io::stdout().lock()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if cli.output.is_some() {
        cfg.output = cli.output.clone();
    }
    if cli.truncation.is_some() {
        cfg.truncation = cli.truncation;
    }
    cfg.validate()?;
    let schrodinger = cfg.schrodinger();
    let out = cfg.output.as_ref();
    match cli.command {
        Command::TorusSeries { coeffs, f, m_max } => emit(&commands::torus_series(&coeffs, &f, m_max)?, out)?,
        Command::Wigner { phi, psi, grid, mollify } => {
            emit(&commands::wigner(&phi, &psi, &grid, mollify.as_deref(), &schrodinger)?, out)?
        }
        Command::Mollify {
            group,
            eta,
            zeta,
            f,
            n,
            radius,
        } => {
            if let Some(r) = radius {
                if !(r > 0.0 && r.is_finite()) {
                    return Err(CliError::Parse {
                        token: r.to_string(),
                        message: "radius must be positive".into(),
                    });
                }
            }
            let ns = spec::n_list(&n)?;
            let group = group.unwrap_or(cfg.group);
            emit(&commands::mollify_table(group, &eta, &zeta, &f, &ns, radius, &schrodinger)?, out)?
        }
        Command::Verify { suite, seed, tol } => {
            let suite = Suite::parse(&suite)?;
            if let Some(t) = tol {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(CliError::Parse {
                        token: t.to_string(),
                        message: "tolerance must be positive".into(),
                    });
                }
            }
            let ctx = suites::Context {
                seed: seed.unwrap_or(cfg.seed),
                tolerances: cfg.tolerances(),
                schrodinger,
                tol_override: tol,
            };
            let start = Instant::now();
            let checks = suites::run(suite, &ctx)?;
            let mut stdout = io::stdout().lock();
            for c in &checks {
                writeln!(stdout, "{c}")?;
            }
            let failed = checks.iter().filter(|c| !c.passed()).count();
            writeln!(
                stdout,
                "{}: {} of {} properties passed in {:.2}s (seed {})",
                suite.name(),
                checks.len() - failed,
                checks.len(),
                start.elapsed().as_secs_f64(),
                ctx.seed
            )?;
            if failed > 0 {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("gmc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
