mod config;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use weilrep::character::all_characters;
use weilrep::group::index_certificate;
use weilrep::weil::{classical_gauss_suite, gauss_sum, standard_q};
use weilrep::report::Report;
use weilrep::{find_character, Bruhat, Columns, Error, WeilConfig};

use config::{odd_prime, parse_matrix, run_config, RingArgs, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Parser)]
#[command(name = "weilrep", version, about = "Exact Weil representations over finite rings with involution")]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classical Gauss sums for an odd prime, or G_T = Σ β(b*Tb) over a ring.
    Gauss {
        #[command(flatten)]
        ring: RingArgs,
        /// Q, I, or explicit rows "a,b;c,d" of ring element indices (repeatable).
        #[arg(long = "T")]
        t: Vec<String>,
    },
    /// Dump W(g) for one Bruhat generator.
    Weil {
        #[command(flatten)]
        ring: RingArgs,
        /// omega, h or u.
        #[arg(long, default_value = "omega")]
        gen: String,
        /// Parameter of h or u as "a,b;c,d".
        #[arg(long)]
        param: Option<String>,
    },
    /// Run verification suites.
    Verify {
        #[command(flatten)]
        ring: RingArgs,
        /// Comma-separated suite names.
        #[arg(long, value_delimiter = ',', required = true)]
        suite: Vec<String>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Index of the Bruhat subgroup in the full isometry group.
    Index {
        #[command(flatten)]
        ring: RingArgs,
    },
}

#[derive(Serialize)]
struct SuiteOutput {
    suite: String,
    pass: bool,
    checks: Report,
}

fn emit(out: &Option<PathBuf>, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize") + "\n";
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn gauss(ring: &RingArgs, ts: &[String], out: &Option<PathBuf>) -> Result<bool, CliError> {
    if ring.ring.is_none() {
        let p = ring.p.ok_or_else(|| CliError::Usage("give --p or --ring".into()))?;
        let p = odd_prime(p)?;
        let (rows, report) = classical_gauss_suite(p)?;
        emit(out, &json!({ "p": p, "rows": rows, "checks": report }))?;
        return Ok(report.all_pass());
    }
    let cfg = run_config(ring)?;
    let r = cfg.ring()?;
    let cols = Columns::new(r.clone(), cfg.m)?;
    // Gauss sums need only a primitive character, so fall back to one when
    // no character satisfies the ε-axiom.
    let (beta, admissible) = match find_character(&r, cfg.sign()) {
        Ok(b) => (b, true),
        Err(Error::CharacterNotFound) => {
            let b = all_characters(&r).into_iter().find(|b| b.check_primitive().is_primitive());
            (b.ok_or(Error::CharacterNotFound)?, false)
        }
        Err(e) => return Err(e.into()),
    };
    let a = weilrep::MatrixRing::new(r, cfg.m);
    let mut rows = Vec::new();
    for t in ts {
        let mat = match t.as_str() {
            "Q" if cfg.m % 2 == 0 => standard_q(&a, cfg.m / 2),
            "Q" => return Err(CliError::Usage("Q needs even m".into())),
            "I" => a.one(),
            s => parse_matrix(s, cfg.m)?,
        };
        let g = gauss_sum(&cols, &beta, &mat);
        let z = weilrep::embed_complex(&g)?;
        rows.push(json!({ "T": t, "value": g, "re": z.re, "im": z.im }));
    }
    emit(
        out,
        &json!({
            "config": cfg,
            "character": { "weights": beta.weights(), "admissible": admissible },
            "sums": rows,
        }),
    )?;
    Ok(true)
}

fn weil_dump(ring: &RingArgs, gen: &str, param: &Option<String>, out: &Option<PathBuf>) -> Result<bool, CliError> {
    let cfg = run_config(ring)?;
    let w = WeilConfig::from_ring(&cfg.ring, cfg.m, cfg.sign())?;
    let need = || {
        let p = param.as_deref().ok_or_else(|| CliError::Usage(format!("{gen} needs --param")))?;
        parse_matrix(p, cfg.m)
    };
    let g = match gen {
        "omega" => Bruhat::Omega,
        "h" => Bruhat::H(need()?),
        "u" => Bruhat::U(need()?),
        _ => return Err(CliError::Usage(format!("unknown generator {gen:?}"))),
    };
    let op = w.weil_bruhat(&g)?;
    emit(out, &json!({ "config": cfg, "generator": g, "f": w.f(), "operator": op }))?;
    Ok(true)
}

fn verify(cfg: &RunConfig, names: &[String], seed: u64, out: &Option<PathBuf>) -> Result<bool, CliError> {
    let mut results = Vec::new();
    for name in names {
        let start = std::time::Instant::now();
        let checks = suites::run(cfg, name, seed)?;
        eprintln!(
            "{} {name} ({:.2}s)",
            if checks.all_pass() { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        for c in checks.failed() {
            eprintln!("  {}: {}", c.name, c.detail.as_deref().unwrap_or(""));
        }
        results.push(SuiteOutput { suite: name.clone(), pass: checks.all_pass(), checks });
    }
    let pass = results.iter().all(|r| r.pass);
    emit(out, &json!({ "config": cfg, "seed": seed, "pass": pass, "suites": results }))?;
    Ok(pass)
}

fn index(ring: &RingArgs, out: &Option<PathBuf>) -> Result<bool, CliError> {
    let cfg = run_config(ring)?;
    let cert = index_certificate(&cfg.space()?)?;
    emit(out, &cert)?;
    Ok(cert.checks.all_pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gauss { ring, t } => gauss(ring, t, &cli.out),
        Command::Weil { ring, gen, param } => weil_dump(ring, gen, param, &cli.out),
        Command::Verify { ring, suite, seed } => run_config(ring).and_then(|c| verify(&c, suite, *seed, &cli.out)),
        Command::Index { ring } => index(ring, &cli.out),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
