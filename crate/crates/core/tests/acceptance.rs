//! Acceptance run: one verdict line per criterion, plus supplementary lines
//! on substitute configurations. Criteria whose target configuration admits
//! no admissible character are run as stated, print FAIL, and must fail for
//! exactly that reason.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weilrep::character::all_characters;
use weilrep::data::{canonical_data, check_r_relations, compare_R_W, lemma_checks, verify_axioms};
use weilrep::group::{
    bruhat_generators, closure, count_isometries, enumerate_isometries, generator_operators, homomorphism_check,
    index_certificate, notlocal_counterexample, reflection_t, weil_closure_check, GeneratorPolicy, CLOSURE_LIMIT,
};
use weilrep::heisenberg::{self, character_norm, h_mul, u_act, HeisenbergElement};
use weilrep::hermitian::{check_relations, BruhatImage, RelationParams};
use weilrep::report::{Check, Report};
use weilrep::weil::{check_lt_decomposition, gauss_sum, mu, standard_q, WeilImage};
use weilrep::*;

const SEED: u64 = 7;

/// The configuration B = F3 (trivial involution), m = 2, ε = +1.
const O4_REASON: &str = "B = F3 with trivial involution and eps = +1 admits no admissible character";

struct Part {
    name: String,
    pass: bool,
    detail: String,
    unattainable: bool,
}

impl Part {
    fn from_check(prefix: &str, c: &Check) -> Part {
        let mut detail = format!("{} cases, {:?}", c.cases, c.mode);
        if let Some(d) = &c.detail {
            detail += &format!(", {d}");
        }
        Part { name: format!("{prefix}{}", c.name), pass: c.pass, detail, unattainable: false }
    }

    fn fact(name: &str, pass: bool, detail: impl Into<String>) -> Part {
        Part { name: name.into(), pass, detail: detail.into(), unattainable: false }
    }

    fn error(name: &str, e: &Error) -> Part {
        Part { name: name.into(), pass: false, detail: e.to_string(), unattainable: false }
    }

    fn unattainable(mut self) -> Part {
        self.unattainable = true;
        self
    }
}

fn parts(prefix: &str, r: &Report) -> Vec<Part> {
    r.checks.iter().map(|c| Part::from_check(prefix, c)).collect()
}

struct Outcome {
    line_ok: bool,
    expected: bool,
}

fn run(id: &str, title: &str, budget: Duration, f: impl FnOnce() -> Vec<Part>) -> Outcome {
    let start = Instant::now();
    let ps = f();
    let elapsed = start.elapsed();
    let in_budget = elapsed <= budget;
    let pass = in_budget && ps.iter().all(|p| p.pass);
    let expected = in_budget && ps.iter().all(|p| p.pass != p.unattainable);
    println!(
        "{} criterion {id:<4} {title} ({:.2}s, budget {}s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    for p in &ps {
        if !p.pass || p.unattainable {
            let tag = if p.unattainable { "unattainable" } else { "failed" };
            println!("       {tag}: {}: {}", p.name, p.detail);
        }
    }
    if !in_budget {
        println!("       failed: over budget");
    }
    Outcome { line_ok: pass, expected }
}

fn ring(family: Family, p: u32, k: Option<u32>, s: Option<u32>) -> RingConfig {
    let mut c = RingConfig::new(family, p);
    c.k = k;
    c.s = s;
    c
}

fn f3() -> RingConfig {
    RingConfig::new(Family::PrimeField, 3)
}

fn f9() -> RingConfig {
    RingConfig::new(Family::QuadraticFrobenius, 3)
}

/// Substitute for the O4 configuration: F3[π]/(π²), π* = -π, m = 2, ε = +1.
fn ramified() -> WeilConfig {
    WeilConfig::from_ring(&ring(Family::RamifiedEven, 3, Some(1), None), 2, Sign::Plus).unwrap()
}

fn weil(c: &RingConfig, m: usize, eps: Sign) -> WeilConfig {
    WeilConfig::from_ring(c, m, eps).unwrap()
}

fn space(c: &RingConfig, m: usize, eps: Sign) -> HermitianSpace {
    HermitianSpace::new(Arc::new(build_ring(c).unwrap()), m, eps)
}

/// Runs `f` on the O4 Weil configuration; its construction error becomes an
/// unattainable part.
fn on_o4(name: &str, f: impl FnOnce(&WeilConfig) -> Vec<Part>) -> Vec<Part> {
    match WeilConfig::from_ring(&f3(), 2, Sign::Plus) {
        Ok(cfg) => f(&cfg),
        Err(e) => {
            let mut p = Part::error(name, &e);
            p.detail = format!("{}; {O4_REASON}", p.detail);
            vec![p.unattainable()]
        }
    }
}

fn bruhat_list(cfg: &WeilConfig) -> Vec<Bruhat> {
    let sp = cfg.space();
    let mut gs = vec![Bruhat::Omega];
    gs.extend(sp.units().unwrap().into_iter().map(Bruhat::H));
    gs.extend(sp.epsilon_symmetric().unwrap().into_iter().map(Bruhat::U));
    gs
}

fn intertwining_all(prefix: &str, cfg: &WeilConfig, gens: &[Bruhat]) -> Vec<Part> {
    let mut total = Check::exhaustive(format!("{prefix}intertwining"));
    let mut mode = None;
    for g in gens {
        let gm = cfg.space().bruhat(g).unwrap();
        let c = cfg.verify_intertwining(&gm, &cfg.weil_bruhat(g).unwrap(), SEED);
        mode = Some(c.mode);
        total.cases += c.cases;
        if !c.pass {
            total.fail(format!("{g:?}: {}", c.detail.unwrap_or_default()));
        }
    }
    total.mode = mode.unwrap();
    let detail = format!("{} generators", gens.len());
    vec![Part::from_check("", &total.with_detail_if_pass(detail))]
}

fn relations(prefix: &str, cfg: &WeilConfig) -> Vec<Part> {
    let params = RelationParams::enumerate(cfg.space(), SEED).unwrap();
    parts(prefix, &check_relations(cfg.space(), &WeilImage(cfg), &params))
}

fn criterion_1() -> Vec<Part> {
    let mut out = Vec::new();
    for p in [3, 5, 7, 13, 17] {
        let (_, r) = weil::classical_gauss_suite(p).unwrap();
        out.extend(parts("", &r));
    }
    out
}

fn criterion_2() -> Vec<Part> {
    let mut out = Vec::new();
    for m in [1, 2] {
        let r = weil(&f3(), m, Sign::Minus).theorem_suite_mu(SEED).unwrap();
        out.extend(parts(&format!("m={m} "), &r).into_iter().filter(|p| !p.name.ends_with("mu55")));
    }
    out
}

fn criterion_3() -> Vec<Part> {
    let mut out = on_o4("admissible character", |_| Vec::new());
    // The stated sum, with each nontrivial character of F3.
    let sp = space(&f3(), 2, Sign::Plus);
    let a = sp.matrix_ring();
    let cols = Columns::new(sp.ring_arc().clone(), 2).unwrap();
    let tr = Transversal::new(&cols, TransversalRule::Lexicographic);
    let skew: Vec<Mat> = a.units().unwrap().into_iter().filter(|t| a.star(t) == a.neg(t)).collect();
    for beta in all_characters(sp.ring_arc()).into_iter().filter(|b| !b.is_trivial()) {
        let mut c = Check::exhaustive(format!("sum = 3 mu(T), weights {:?}", beta.weights()));
        for t in &skew {
            let g = gauss_sum(&cols, &beta, t);
            let want = Cyc::from_i64(beta.order(), 3 * mu(&cols, &tr, t).unwrap());
            c.record_with(g == want, || format!("T = {:?}: sum = {g:?}", t.to_rows()));
        }
        out.push(Part::from_check("", &c).unattainable());
    }
    out
}

fn supplementary_3() -> Vec<Part> {
    let r = ramified().theorem_suite_mu(SEED).unwrap();
    parts("", &r)
}

fn criterion_4() -> Vec<Part> {
    let mut out = Vec::new();
    let r3 = Arc::new(build_ring(&f3()).unwrap());
    let cols = Columns::new(r3.clone(), 2).unwrap();
    let tr = Transversal::new(&cols, TransversalRule::Lexicographic);
    let a = MatrixRing::new(r3, 2);
    let mut c = Check::exhaustive("mu55 GL(2,F3)");
    for t in a.units().unwrap() {
        c.record(mu(&cols, &tr, &t).unwrap() == mu(&cols, &tr, &a.star(&t)).unwrap());
    }
    out.push(Part::from_check("", &c));
    let r9 = Arc::new(build_ring(&ring(Family::IntegersModPk, 3, Some(2), None)).unwrap());
    let cols = Columns::new(r9.clone(), 2).unwrap();
    let tr = Transversal::new(&cols, TransversalRule::Lexicographic);
    let a = MatrixRing::new(r9, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut c = Check::sampled("mu55 GL(2,Z/9)", SEED);
    for _ in 0..1000 {
        let t = a.random_unit(&mut rng);
        c.record(mu(&cols, &tr, &t).unwrap() == mu(&cols, &tr, &a.star(&t)).unwrap());
    }
    out.push(Part::from_check("", &c));
    out
}

fn criterion_5() -> Vec<Part> {
    [(f3(), 2), (f9(), 1)]
        .into_iter()
        .map(|(rc, m)| {
            let r = Arc::new(build_ring(&rc).unwrap());
            let cols = Columns::new(r.clone(), m).unwrap();
            let lex = Transversal::new(&cols, TransversalRule::Lexicographic);
            let rev = Transversal::new(&cols, TransversalRule::ReverseLexicographic);
            let a = MatrixRing::new(r, m);
            let mut c = Check::exhaustive(format!("{} m={m}", rc.family));
            for t in a.units().unwrap() {
                c.record(mu(&cols, &lex, &t).unwrap() == mu(&cols, &rev, &t).unwrap());
            }
            let distinct = (0..cols.dim()).any(|v| lex.contains(v) != rev.contains(v));
            c.record_with(distinct, || "rules pick the same transversal".into());
            Part::from_check("", &c)
        })
        .collect()
}

fn criterion_6() -> Vec<Part> {
    let cfg = weil(&f3(), 1, Sign::Minus);
    let sp = cfg.space();
    let s = cfg.schrodinger();
    let hs = heisenberg::elements(sp).unwrap();
    let mut out = Vec::new();
    let mut mult = Check::exhaustive("S multiplicative");
    for x in &hs {
        for y in &hs {
            mult.record(s.operator(&h_mul(sp, x, y)).same(&s.operator(x).mul(&s.operator(y))));
        }
    }
    out.push(Part::from_check("", &mult));
    let (norm, order) = character_norm(&s).unwrap();
    let want = CycQ::from_scalar(cfg.order(), BigRational::from_integer(27.into()));
    out.push(Part::fact("sum |chi|^2 = 27", norm == want && order == 27, format!("{norm:?} over |H| = {order}")));
    let deg = s.chi(&HeisenbergElement::central(sp, 0));
    let three = CycQ::from_scalar(cfg.order(), BigRational::from_integer(3.into()));
    out.push(Part::fact("deg chi = 3", deg == three, format!("chi(1) = {deg:?}")));
    let mut inv = Check::exhaustive("chi invariant under Bruhat generators");
    for g in bruhat_list(&cfg) {
        let gm = sp.bruhat(&g).unwrap();
        for h in &hs {
            inv.record_with(s.chi(&u_act(sp, &gm, h)) == s.chi(h), || format!("{g:?}, {h:?}"));
        }
    }
    out.push(Part::from_check("", &inv));
    out
}

fn criterion_7() -> Vec<Part> {
    let mut out = Vec::new();
    for (label, cfg) in [("F3 m=1 ", weil(&f3(), 1, Sign::Minus)), ("F9 m=1 ", weil(&f9(), 1, Sign::Minus))] {
        out.extend(intertwining_all(label, &cfg, &bruhat_list(&cfg)));
    }
    out.extend(on_o4("F3 m=2 eps=+1 intertwining", |cfg| intertwining_all("F3 m=2 ", cfg, &bruhat_list(cfg))));
    out
}

fn supplementary_7() -> Vec<Part> {
    let cfg = ramified();
    let mut gens = vec![Bruhat::Omega];
    for g in bruhat_generators(cfg.space(), GeneratorPolicy::Reduced).unwrap() {
        if let Some(w) = g.bruhat_word(cfg.space()) {
            if w.len() == 1 && w[0] != Bruhat::Omega {
                gens.push(w[0].clone());
            }
        }
    }
    intertwining_all("", &cfg, &gens)
}

fn criterion_8() -> Vec<Part> {
    let mut out = relations("F3 m=1 ", &weil(&f3(), 1, Sign::Minus));
    out.extend(relations("F9 m=1 ", &weil(&f9(), 1, Sign::Minus)));
    out.extend(on_o4("F3 m=2 eps=+1 relations", |cfg| relations("F3 m=2 ", cfg)));
    out
}

fn criterion_9() -> Vec<Part> {
    let cfg = weil(&f3(), 1, Sign::Minus);
    let els: Vec<Mat> = closure(cfg.space(), &[]).unwrap().elements().collect();
    let mut out = vec![Part::from_check("Sp2(F3) ", &homomorphism_check(&cfg, &els, None).unwrap())];
    out.extend(on_o4("O4(F3) homomorphism", |cfg| {
        let sp = cfg.space();
        let ssl: Vec<Mat> = closure(sp, &[]).unwrap().elements().collect();
        let full: Vec<Mat> = closure(sp, &[reflection_t(sp)]).unwrap().elements().collect();
        vec![
            Part::from_check("SSL ", &homomorphism_check(cfg, &ssl, None).unwrap()),
            Part::from_check("SL ", &homomorphism_check(cfg, &full, None).unwrap()),
        ]
    }));
    out
}

fn supplementary_9() -> Vec<Part> {
    let cfg = ramified();
    let sp = cfg.space();
    let gens = bruhat_generators(sp, GeneratorPolicy::Reduced).unwrap();
    let ball = weilrep::group::closure_with(sp, gens, 200, true, |_| {}).unwrap();
    let t = reflection_t(sp);
    let mut els: Vec<Mat> = ball.elements().collect();
    let coset: Vec<Mat> = els.iter().map(|x| sp.mul(&t, x)).collect();
    els.extend(coset);
    vec![Part::from_check("SSL ball and T-coset ", &homomorphism_check(&cfg, &els, Some((200, SEED))).unwrap())]
}

fn criterion_10() -> Vec<Part> {
    let cfg = weil(&f3(), 1, Sign::Minus);
    let gens = bruhat_generators(cfg.space(), GeneratorPolicy::Full).unwrap();
    let (_, c, _) = weil_closure_check(&cfg, gens, CLOSURE_LIMIT, false).unwrap();
    let mut out = vec![Part::from_check("Sp2(F3) ", &c)];
    out.extend(on_o4("O4(F3) bfs well-definedness", |cfg| {
        let gens = bruhat_generators(cfg.space(), GeneratorPolicy::Full).unwrap();
        let (_, c, _) = weil_closure_check(cfg, gens, CLOSURE_LIMIT, false).unwrap();
        vec![Part::from_check("O4(F3) ", &c)]
    }));
    out
}

fn supplementary_10() -> Vec<Part> {
    let cfg = ramified();
    let gens = bruhat_generators(cfg.space(), GeneratorPolicy::Reduced).unwrap();
    let (c, check, _) = weil_closure_check(&cfg, gens, 2000, true).unwrap();
    let mut p = Part::from_check("ball ", &check);
    p.detail += &format!(", truncated = {}", c.truncated());
    vec![p]
}

/// 2x2 matrices over F3 of determinant 1, by brute force.
fn oracle_sl2_f3() -> u64 {
    let mut n = 0;
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    n += u64::from((a * d + 3 * 3 - b * c) % 3 == 1);
                }
            }
        }
    }
    n
}

/// `|U(2)|` over F9 = F3[i] for the form `[[0, 1], [1, 0]]`, by brute force
/// over all 2x2 matrices with independent arithmetic.
fn oracle_gu2_f9() -> u64 {
    type F9 = (i64, i64);
    let mul = |x: F9, y: F9| ((x.0 * y.0 - x.1 * y.1).rem_euclid(3), (x.0 * y.1 + x.1 * y.0).rem_euclid(3));
    let add = |x: F9, y: F9| ((x.0 + y.0) % 3, (x.1 + y.1) % 3);
    let conj = |x: F9| (x.0, (3 - x.1) % 3);
    let all: Vec<F9> = (0..9).map(|i| (i % 3, i / 3)).collect();
    let mut n = 0;
    for &a in &all {
        for &b in &all {
            for &c in &all {
                for &d in &all {
                    // X*JX with X = [[a, b], [c, d]]: entries conj(x_i) x_j swapped across rows.
                    let e11 = add(mul(conj(a), c), mul(conj(c), a));
                    let e12 = add(mul(conj(a), d), mul(conj(c), b));
                    let e22 = add(mul(conj(b), d), mul(conj(d), b));
                    n += u64::from(e11 == (0, 0) && e12 == (1, 0) && e22 == (0, 0));
                }
            }
        }
    }
    n
}

/// `2 q^{m(m-1)} (q^m - 1) ∏_{i<m} (q^{2i} - 1)` for the split orthogonal group.
fn oracle_o_split(q: u64, m: u32) -> u64 {
    let mut n = 2 * q.pow(m * (m - 1)) * (q.pow(m) - 1);
    for i in 1..m {
        n *= q.pow(2 * i) - 1;
    }
    n
}

fn criterion_11() -> Vec<Part> {
    let mut out = Vec::new();
    let cases = [
        ("Sp2(F3)", space(&f3(), 1, Sign::Minus), oracle_sl2_f3(), 1, 24),
        ("GU2(F9)", space(&f9(), 1, Sign::Plus), oracle_gu2_f9(), 1, 96),
        ("O4(F3)", space(&f3(), 2, Sign::Plus), oracle_o_split(3, 2), 2, 576),
    ];
    for (name, sp, oracle, index, ssl) in cases {
        let cert = index_certificate(&sp).unwrap();
        out.extend(parts(&format!("{name} "), &cert.checks));
        let enumerated = enumerate_isometries(&sp).unwrap().len() as u64;
        out.push(Part::fact(
            &format!("{name} orders"),
            cert.ssl_order == ssl && cert.sl_order == oracle && enumerated == oracle && cert.index == index,
            format!("|SSL| = {}, |SL| = {}, oracle = {oracle}, index = {}", cert.ssl_order, cert.sl_order, cert.index),
        ));
        if index == 2 {
            let ok = cert.t_in_ssl == Some(false)
                && cert.extended_order == Some(oracle)
                && cert.t_normalizes == Some(true);
            out.push(Part::fact(&format!("{name} T"), ok, format!("{:?}", (cert.t_in_ssl, cert.extended_order))));
        }
    }
    out
}

fn supplementary_11() -> Vec<Part> {
    let sp = space(&ring(Family::IntegersModPk, 3, Some(2), None), 2, Sign::Plus);
    let cert = index_certificate(&sp).unwrap();
    let residue = count_isometries(&space(&f3(), 2, Sign::Plus)).unwrap();
    let mut out = parts("Z/9 m=2 ", &cert.checks);
    out.push(Part::fact(
        "Z/9 m=2 index 2",
        cert.index == 2 && cert.t_in_ssl == Some(false) && cert.sl_order % residue == 0,
        format!("|SSL| = {}, |SL| = {}", cert.ssl_order, cert.sl_order),
    ));
    out
}

fn criterion_12() -> Vec<Part> {
    parts("", &notlocal_counterexample(3).unwrap())
}

fn data_parts(prefix: &str, cfg: &WeilConfig) -> Vec<Part> {
    let data = canonical_data(cfg).unwrap();
    let mut out = parts(prefix, &verify_axioms(&data, SEED));
    out.extend(parts(prefix, &lemma_checks(&data, SEED)));
    out.push(Part::from_check(prefix, &compare_R_W(cfg, &data, SEED).unwrap()));
    out.extend(parts(&format!("{prefix}R "), &check_r_relations(cfg, &data, SEED).unwrap()));
    out
}

fn criterion_13() -> Vec<Part> {
    let cfg = weil(&f3(), 1, Sign::Minus);
    let mut out = data_parts("F3 m=1 ", &cfg);
    let one = CycQ::one(3);
    let ghat = &one + &CycQ::root(3, 1).scale(&BigRational::from_integer(2.into()));
    let want = -ghat.inv().unwrap();
    out.push(Part::fact("F3 m=1 f = -(1+2z)^-1", *cfg.f() == want, format!("{:?}", cfg.f())));
    out.extend(on_o4("F3 m=2 eps=+1 canonical data", |cfg| data_parts("F3 m=2 ", cfg)));
    out
}

fn supplementary_13() -> Vec<Part> {
    let cfg = ramified();
    let mut out = data_parts("", &cfg);
    let ninth = CycQ::from_scalar(3, BigRational::new(1.into(), 9.into()));
    out.push(Part::fact("f = 1/|B|^n", *cfg.f() == ninth, format!("{:?}", cfg.f())));
    out.extend(parts("", &cfg.normalization_suite().unwrap()));
    let a = cfg.space().matrix_ring();
    let q = standard_q(a, 1);
    out.push(Part::from_check("", &check_lt_decomposition(&cfg, &q).unwrap()));
    out
}

fn criterion_14() -> Vec<Part> {
    let cfg = weil(&ring(Family::SkewPolyQuotient, 3, None, Some(3)), 1, Sign::Minus);
    let sp = cfg.space();
    let params = RelationParams::sampled(sp, 1000, SEED).unwrap();
    let mut out = parts("", &check_relations(sp, &WeilImage(&cfg), &params));
    out.push(Part::fact("dim X = 729", cfg.dim() == 729, format!("{}", cfg.dim())));
    let gens = bruhat_generators(sp, GeneratorPolicy::Reduced).unwrap();
    let ops = generator_operators(&cfg, &gens).unwrap();
    let hs = cfg.schrodinger().generators();
    let mut c = Check::exhaustive("intertwining on generators of H");
    for (g, w) in gens.iter().zip(&ops) {
        let one = cfg.intertwining_on(&g.mat, w, &hs, Check::exhaustive("g"));
        c.cases += one.cases;
        if !one.pass {
            c.fail(g.label.short());
        }
    }
    let detail = format!("{} group generators x {} generators of H", gens.len(), hs.len());
    out.push(Part::from_check("", &c.with_detail_if_pass(detail)));
    out
}

/// `W` with one entry of `W(ω)` perturbed.
struct Mutated<'a>(WeilImage<'a>);

impl BruhatImage for Mutated<'_> {
    type Value = Operator;
    fn omega(&self) -> Operator {
        self.0.omega().perturbed(0, 0)
    }
    fn h(&self, t: &Mat) -> Operator {
        self.0.h(t)
    }
    fn u(&self, r: &Mat) -> Operator {
        self.0.u(r)
    }
    fn mul(&self, x: &Operator, y: &Operator) -> Operator {
        x.mul(y)
    }
    fn same(&self, x: &Operator, y: &Operator) -> bool {
        x.same(y)
    }
}

fn criterion_15() -> Vec<Part> {
    let cfg = weil(&f3(), 1, Sign::Minus);
    let data = canonical_data(&cfg).unwrap();
    let mut out = Vec::new();
    let bad_f = data.clone().with_f(&data.f().clone() * &CycQ::root(3, 1));
    let ax = verify_axioms(&bad_f, SEED);
    let failed: Vec<String> = ax.failed().map(|c| c.name.clone()).collect();
    out.push(Part::fact("perturbed f fails cez", failed.contains(&"cez".to_string()), failed.join(", ")));
    let w = cfg.w_omega().perturbed(0, 0);
    let c = cfg.verify_intertwining(&cfg.space().omega(), &w, SEED);
    out.push(Part::fact("perturbed W(omega) fails intertwining", !c.pass, format!("{} failures", c.failures)));
    let params = RelationParams::enumerate(cfg.space(), SEED).unwrap();
    let r = check_relations(cfg.space(), &Mutated(WeilImage(&cfg)), &params);
    let failed: Vec<String> = r.failed().map(|c| c.name.clone()).collect();
    out.push(Part::fact("perturbed W(omega) fails relations", !r.all_pass(), failed.join(", ")));
    let triv = canonical_data(&cfg).unwrap().trivialize_alpha();
    let c = compare_R_W(&cfg, &triv, SEED).unwrap();
    out.push(Part::fact("trivialized alpha fails compare", !c.pass, c.detail.unwrap_or_default()));
    let mut ax = verify_axioms(&triv, SEED);
    ax.checks.retain(|c| c.name == "chi1" || c.name == "c");
    out.push(Part::fact("trivialized alpha fails axioms", !ax.all_pass(), String::new()));
    out
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let outcomes = [
        run("1", "classical Gauss sums", s(1), criterion_1),
        run("2", "mu82 and mu9 over F3, eps = -1", s(5), criterion_2),
        run("3", "mu2 over F3, m = 2, eps = +1", s(1), criterion_3),
        run("3+", "supplementary: mu89 on F3[pi]/(pi^2), m = 2", s(5), supplementary_3),
        run("4", "mu(T) = mu(T*)", s(5), criterion_4),
        run("5", "mu independent of the transversal", s(5), criterion_5),
        run("6", "Schrodinger certificates", s(5), criterion_6),
        run("7", "intertwining on all of H", s(60), criterion_7),
        run("7+", "supplementary: intertwining on F3[pi]/(pi^2), m = 2", s(120), supplementary_7),
        run("8", "relations R1-R6 for W", s(60), criterion_8),
        run("9", "W(g1 g2) = W(g1) W(g2)", s(600), criterion_9),
        run("9+", "supplementary: homomorphism on F3[pi]/(pi^2), m = 2", s(300), supplementary_9),
        run("10", "BFS well-definedness", s(60), criterion_10),
        run("10+", "supplementary: BFS ball on F3[pi]/(pi^2), m = 2", s(300), supplementary_10),
        run("11", "index certificates", s(120), criterion_11),
        run("11+", "supplementary: index 2 over Z/9, m = 2", s(120), supplementary_11),
        run("12", "non-local counterexample", s(1), criterion_12),
        run("13", "data axioms and R = W", s(30), criterion_13),
        run("13+", "supplementary: data axioms on F3[pi]/(pi^2), m = 2", s(60), supplementary_13),
        run("14", "stretch config F9[t; Frob]/(t^3)", s(600), criterion_14),
        run("15", "mutation sensitivity", s(30), criterion_15),
    ];
    let passed = outcomes.iter().filter(|o| o.line_ok).count();
    println!("{passed}/{} lines pass", outcomes.len());
    if outcomes.iter().all(|o| o.expected) {
        println!("every failure is an unattainable part");
        ExitCode::SUCCESS
    } else {
        println!("unexpected verdicts");
        ExitCode::FAILURE
    }
}
