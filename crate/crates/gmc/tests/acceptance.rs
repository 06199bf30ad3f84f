use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use gmc::suites::{self, Check};
use gmc::{CliError, Context};

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn(&Context) -> Result<Vec<Check>, CliError>,
}

fn gmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmc")).args(args).output().expect("spawn gmc")
}

/// The verify summary line carries a wall-clock time, so only check lines are compared.
fn checks_only(o: &Output) -> Vec<u8> {
    let text = String::from_utf8_lossy(&o.stdout);
    text.lines()
        .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
        .flat_map(|l| l.bytes().chain(Some(b'\n')))
        .collect()
}

fn cli_determinism(_ctx: &Context) -> Result<Vec<Check>, CliError> {
    let tables: [&[&str]; 3] = [
        &["torus-series", "--coeffs", "poly:2", "--f", "band:8:lorentz", "--m-max", "12"],
        &["wigner", "--phi", "e:1", "--psi", "delta", "--grid", "-1:1:5", "--mollify", "16"],
        &["mollify", "--group", "heisenberg", "--eta", "delta", "--zeta", "e:0", "--f", "bump3:center=(0,0,0):radius=0.5"],
    ];
    let mut differing = 0;
    let mut failed_runs = 0;
    for args in tables {
        let (a, b) = (gmc(args), gmc(args));
        failed_runs += usize::from(a.status.code() != Some(0)) + usize::from(b.status.code() != Some(0));
        differing += usize::from(a.stdout != b.stdout || a.stdout.is_empty());
    }
    let verify = ["verify", "heisenberg-covariance", "--seed", "11"];
    let (a, b) = (gmc(&verify), gmc(&verify));
    failed_runs += usize::from(a.status.code() != Some(0));
    differing += usize::from(checks_only(&a) != checks_only(&b));

    let forced = gmc(&["verify", "torus-covariance", "--tol", "1e-20"]);
    let bad_input = gmc(&["torus-series", "--coeffs", "bogus", "--f", "band:1:fejer", "--m-max", "2"]);
    let codes_ok = forced.status.code() == Some(1) && bad_input.status.code() == Some(2);
    Ok(vec![
        check_holds("repeated runs produce byte-identical output", differing as f64, differing == 0 && failed_runs == 0),
        check_holds("forced failure exits 1, bad input exits 2", 0.0, codes_ok),
    ])
}

fn check_holds(name: &str, residual: f64, ok: bool) -> Check {
    Check {
        name: name.into(),
        residual,
        bound: suites::Bound::Holds(ok),
    }
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, title: "enveloping algebra exactness", budget: Duration::from_secs(1), run: suites::uea },
        Criterion { id: 2, title: "torus covariance", budget: Duration::from_secs(5), run: suites::torus_covariance },
        Criterion { id: 3, title: "torus Fourier series", budget: Duration::from_secs(1), run: suites::torus_series },
        Criterion { id: 4, title: "factorization", budget: Duration::from_secs(1), run: suites::factorization },
        Criterion { id: 5, title: "heisenberg representation health", budget: Duration::from_secs(60), run: suites::heisenberg_health },
        Criterion { id: 6, title: "heisenberg smoothing", budget: Duration::from_secs(120), run: suites::heisenberg_smoothing },
        Criterion { id: 7, title: "mollifiers", budget: Duration::from_secs(120), run: suites::mollifier },
        Criterion { id: 8, title: "structure witnesses", budget: Duration::from_secs(60), run: suites::structure },
        Criterion { id: 9, title: "CLI determinism and exit codes", budget: Duration::from_secs(10), run: cli_determinism },
    ];
    let ctx = Context::default();
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)(&ctx);
        let elapsed = start.elapsed();
        let in_time = elapsed < c.budget;
        let (ok, detail) = match &result {
            Ok(checks) => {
                let failed: Vec<&Check> = checks.iter().filter(|ch| !ch.passed()).collect();
                let detail = match failed.first() {
                    Some(ch) => format!("{} of {} checks failed, first: {ch}", failed.len(), checks.len()),
                    None => format!("{} checks", checks.len()),
                };
                (failed.is_empty(), detail)
            }
            Err(e) => (false, format!("error: {e}")),
        };
        let verdict = if ok && in_time { "PASS" } else { "FAIL" };
        println!(
            "{verdict} criterion {}: {} [{detail}; {:.2}s of {}s]",
            c.id,
            c.title,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
        if verdict == "FAIL" {
            if let Ok(checks) = &result {
                for ch in checks.iter().filter(|ch| !ch.passed()) {
                    println!("    {ch}");
                }
            }
            failures += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
