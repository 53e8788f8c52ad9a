use weilrep::data::{canonical_data, check_r_relations, compare_R_W, lemma_checks, verify_axioms};
use weilrep::group::{
    bruhat_generators, generator_operators, homomorphism_check, notlocal_counterexample, weil_closure_check,
    GeneratorPolicy,
};
use weilrep::heisenberg::{self, character_norm, h_mul, u_act};
use weilrep::hermitian::{check_relations, RelationParams};
use weilrep::report::{Check, Report};
use weilrep::weil::WeilImage;
use weilrep::{Family, Mat, WeilConfig};

use crate::config::RunConfig;
use crate::CliError;

pub const SUITES: &[&str] = &[
    "relations",
    "intertwining",
    "mu-theorems",
    "normalization",
    "data-axioms",
    "compare",
    "schrodinger",
    "homomorphism",
    "notlocal",
];

/// Closure elements kept for the homomorphism and well-definedness suites.
const BALL: usize = 2000;

pub fn run(cfg: &RunConfig, suite: &str, seed: u64) -> Result<Report, CliError> {
    if suite == "notlocal" {
        if cfg.ring.family != Family::Matrix2Adjugate {
            return Err(CliError::Usage("notlocal runs on M2F<p>".into()));
        }
        return Ok(notlocal_counterexample(cfg.ring.p)?);
    }
    let w = WeilConfig::from_ring(&cfg.ring, cfg.m, cfg.sign())?;
    let mut report = Report::new();
    match suite {
        "relations" => {
            let params = RelationParams::enumerate(w.space(), seed)?;
            report = check_relations(w.space(), &WeilImage(&w), &params);
        }
        "intertwining" => {
            for g in bruhat_generators(w.space(), GeneratorPolicy::Auto)? {
                let wg = generator_operators(&w, std::slice::from_ref(&g))?.remove(0);
                let mut c = w.verify_intertwining(&g.mat, &wg, seed);
                c.name = format!("intertwining {}", g.label.short());
                report.push(c);
            }
        }
        "mu-theorems" => report = w.theorem_suite_mu(seed)?,
        "normalization" => report = w.normalization_suite()?,
        "data-axioms" => {
            let data = canonical_data(&w)?;
            report = verify_axioms(&data, seed);
            report.extend(lemma_checks(&data, seed));
        }
        "compare" => {
            let data = canonical_data(&w)?;
            report.push(compare_R_W(&w, &data, seed)?);
            report.extend(check_r_relations(&w, &data, seed)?);
        }
        "schrodinger" => report = schrodinger(&w)?,
        "homomorphism" => {
            let gens = bruhat_generators(w.space(), GeneratorPolicy::Auto)?;
            let (ball, check, _) = weil_closure_check(&w, gens, BALL, true)?;
            report.push(check);
            let els: Vec<Mat> = ball.elements().collect();
            let samples = if ball.truncated() || els.len() > 100 { Some((1000, seed)) } else { None };
            report.push(homomorphism_check(&w, &els, samples)?);
        }
        _ => return Err(CliError::Usage(format!("unknown suite {suite:?}; expected one of {SUITES:?}"))),
    }
    Ok(report)
}

/// Multiplicativity of `S`, `Σ|χ|² = |H|`, `χ(1)`, and invariance of `χ` under
/// the Bruhat generators; exhaustive over `H`.
fn schrodinger(w: &WeilConfig) -> Result<Report, CliError> {
    let sp = w.space();
    let s = w.schrodinger();
    let hs = heisenberg::elements(sp)?;
    if hs.len() > 1000 {
        return Err(CliError::Usage(format!("|H| = {} is too large for the schrodinger suite", hs.len())));
    }
    let mut report = Report::new();
    let mut mult = Check::exhaustive("S multiplicative");
    for x in &hs {
        for y in &hs {
            mult.record(s.operator(&h_mul(sp, x, y)).same(&s.operator(x).mul(&s.operator(y))));
        }
    }
    report.push(mult);
    let (norm, order) = character_norm(&s)?;
    let want = weilrep::CycQ::from_i64(w.order(), order as i64);
    report.push(Check::fact("character norm", norm == want).with_detail(format!("|H| = {order}")));
    let one = s.chi(&weilrep::HeisenbergElement::central(sp, 0));
    let deg = weilrep::CycQ::from_i64(w.order(), w.dim() as i64);
    report.push(Check::fact("degree", one == deg).with_detail(format!("deg = {}", w.dim())));
    let mut inv = Check::exhaustive("character invariance");
    for g in bruhat_generators(sp, GeneratorPolicy::Auto)? {
        for h in &hs {
            inv.record(s.chi(&u_act(sp, &g.mat, h)) == s.chi(h));
        }
    }
    report.push(inv);
    Ok(report)
}
