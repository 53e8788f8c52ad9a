use std::sync::Arc;

use serde::Serialize;
use weilrep::ring::is_prime;
use weilrep::{build_ring, Family, FiniteRing, HermitianSpace, Mat, RingConfig, Sign};

use crate::CliError;

/// Ring, rank and sign shared by every subcommand.
#[derive(clap::Args, Clone, Debug)]
pub struct RingArgs {
    /// Shorthand (F3, F9, Z9, M2F3) or family name (prime_field, ramified_even, ...).
    #[arg(long)]
    pub ring: Option<String>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub s: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// +1 (hermitian) or -1 (skew hermitian).
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    pub eps: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub ring: RingConfig,
    pub m: usize,
    pub eps: i64,
}

fn prime_power(n: u32) -> Option<(u32, u32)> {
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut k = 0;
    let mut x = n;
    while x % p == 0 {
        x /= p;
        k += 1;
    }
    (x == 1).then_some((p, k))
}

fn family_by_name(name: &str) -> Option<Family> {
    use Family::*;
    [
        PrimeField,
        QuadraticFrobenius,
        IntegersModPk,
        GaloisRingFrobenius,
        RamifiedEven,
        SkewPolyQuotient,
        Matrix2Adjugate,
    ]
    .into_iter()
    .find(|f| f.name() == name)
}

pub fn parse_ring(args: &RingArgs) -> Result<RingConfig, CliError> {
    let bad = |s: &str| CliError::Usage(format!("unknown ring {s:?}"));
    let mut cfg = match args.ring.as_deref() {
        None => {
            let p = args.p.ok_or_else(|| CliError::Usage("give --ring or --p".into()))?;
            RingConfig::new(Family::PrimeField, p)
        }
        Some(r) => {
            if let Some(f) = family_by_name(r) {
                let p = args.p.ok_or_else(|| CliError::Usage(format!("{r} needs --p")))?;
                RingConfig::new(f, p)
            } else if let Some(q) = r.strip_prefix("M2F") {
                RingConfig::new(Family::Matrix2Adjugate, q.parse().map_err(|_| bad(r))?)
            } else if let Some(q) = r.strip_prefix('F') {
                let (p, k) = prime_power(q.parse().map_err(|_| bad(r))?).ok_or_else(|| bad(r))?;
                match k {
                    1 => RingConfig::new(Family::PrimeField, p),
                    2 => RingConfig::new(Family::QuadraticFrobenius, p),
                    _ => return Err(bad(r)),
                }
            } else if let Some(n) = r.strip_prefix('Z') {
                let (p, k) = prime_power(n.parse().map_err(|_| bad(r))?).ok_or_else(|| bad(r))?;
                RingConfig::new(Family::IntegersModPk, p).with_k(k)
            } else {
                return Err(bad(r));
            }
        }
    };
    if args.k.is_some() {
        cfg.k = args.k;
    }
    if args.s.is_some() {
        cfg.s = args.s;
    }
    Ok(cfg)
}

pub fn parse_eps(s: &str) -> Result<Sign, CliError> {
    match s {
        "+1" | "1" | "+" | "plus" => Ok(Sign::Plus),
        "-1" | "-" | "minus" => Ok(Sign::Minus),
        _ => Err(CliError::Usage(format!("--eps must be +1 or -1, got {s:?}"))),
    }
}

pub fn run_config(args: &RingArgs) -> Result<RunConfig, CliError> {
    Ok(RunConfig { ring: parse_ring(args)?, m: args.m, eps: parse_eps(&args.eps)?.value() })
}

pub fn odd_prime(p: u32) -> Result<u32, CliError> {
    if p > 2 && is_prime(p) {
        Ok(p)
    } else {
        Err(CliError::Usage(format!("{p} is not an odd prime")))
    }
}

impl RunConfig {
    pub fn sign(&self) -> Sign {
        Sign::from_value(self.eps).expect("validated")
    }

    pub fn ring(&self) -> Result<Arc<FiniteRing>, CliError> {
        Ok(Arc::new(build_ring(&self.ring)?))
    }

    pub fn space(&self) -> Result<HermitianSpace, CliError> {
        Ok(HermitianSpace::new(self.ring()?, self.m, self.sign()))
    }
}

/// `"a,b;c,d"` as rows of ring elements (by index).
pub fn parse_matrix(s: &str, n: usize) -> Result<Mat, CliError> {
    let rows: Vec<Vec<u32>> = s
        .split(';')
        .map(|r| r.split(',').map(|x| x.trim().parse::<u32>()).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("bad matrix {s:?}")))?;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Usage(format!("matrix {s:?} is not {n}x{n}")));
    }
    Ok(Mat::from_rows(&rows))
}
