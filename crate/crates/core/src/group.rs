//! The subgroup `SSL` generated by the Bruhat elements, the full isometry
//! group by backtracking, index certificates, Bruhat factorization and the
//! non-local counterexample.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::character::Sign;
use crate::error::{Error, Result};
use crate::hermitian::{Bruhat, HermitianSpace};
use crate::matrix::{Mat, MatrixRing};
use crate::operator::Operator;
use crate::report::{Check, Report};
use crate::ring::{build_ring, Elem, Family, FiniteRing, RingConfig};
use crate::weil::WeilConfig;

/// Default bound on the order of a closure.
pub const CLOSURE_LIMIT: usize = 1_000_000;
/// Bound on backtracking nodes for isometry enumeration.
pub const NODE_LIMIT: u64 = 10_000_000;
/// Above this many `h_t` plus `u_r`, closures switch to a generating subset.
pub const FULL_GENERATOR_LIMIT: usize = 512;

/// Name of a closure generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "param", rename_all = "snake_case")]
pub enum Label {
    Omega,
    OmegaInverse,
    H(Mat),
    U(Mat),
    Extra(usize),
}

impl Label {
    /// Compact text form used in witness words.
    pub fn short(&self) -> String {
        let flat = |m: &Mat| {
            m.to_rows()
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                .collect::<Vec<_>>()
                .join(";")
        };
        match self {
            Label::Omega => "w".into(),
            Label::OmegaInverse => "w^-1".into(),
            Label::H(t) => format!("h({})", flat(t)),
            Label::U(r) => format!("u({})", flat(r)),
            Label::Extra(i) => format!("x{i}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub label: Label,
    pub mat: Mat,
}

impl Generator {
    /// The generator as a product of Bruhat elements (`None` for extras).
    pub fn bruhat_word(&self, space: &HermitianSpace) -> Option<Vec<Bruhat>> {
        match &self.label {
            Label::Omega => Some(vec![Bruhat::Omega]),
            Label::OmegaInverse => Some(omega_inverse(space)),
            Label::H(t) => Some(vec![Bruhat::H(t.clone())]),
            Label::U(r) => Some(vec![Bruhat::U(r.clone())]),
            Label::Extra(_) => None,
        }
    }
}

/// `ω⁻¹ = ω h_ε`.
fn omega_inverse(space: &HermitianSpace) -> Vec<Bruhat> {
    vec![Bruhat::Omega, Bruhat::H(space.matrix_ring().scalar(space.eps_elem()))]
}

/// Which `h_t` and `u_r` enter a closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorPolicy {
    /// Every `h_t`, `t ∈ A^×`, and every `u_r`, `r ∈ A^{ε-sym}`.
    Full,
    /// `h_t` for a generating set of `A^×` and `u_r` for an additive
    /// generating set of `A^{ε-sym}`; generates the same subgroup.
    Reduced,
    /// `Full` when that has at most [`FULL_GENERATOR_LIMIT`] parameters.
    Auto,
}

/// `ω, ω⁻¹, h_t…, u_r…` in deterministic order.
pub fn bruhat_generators(space: &HermitianSpace, policy: GeneratorPolicy) -> Result<Vec<Generator>> {
    let a = space.matrix_ring();
    let units = space.units()?;
    let syms = space.epsilon_symmetric()?;
    let full = match policy {
        GeneratorPolicy::Full => true,
        GeneratorPolicy::Reduced => false,
        GeneratorPolicy::Auto => units.len() + syms.len() <= FULL_GENERATOR_LIMIT,
    };
    let (units, syms) = if full {
        (units, syms)
    } else {
        (greedy_generators(&units, &a.one(), |x, y| a.mul(x, y)), greedy_generators(&syms, &a.zero(), |x, y| a.add(x, y)))
    };
    let mut gens = vec![
        Generator { label: Label::Omega, mat: space.omega() },
        Generator { label: Label::OmegaInverse, mat: space.inverse(&space.omega()) },
    ];
    for t in units {
        gens.push(Generator { mat: space.h(&t)?, label: Label::H(t) });
    }
    for r in syms {
        gens.push(Generator { mat: space.u(&r)?, label: Label::U(r) });
    }
    Ok(gens)
}

/// Scans `elems` in order, keeping each one not already in the subgroup
/// generated by those kept so far.
fn greedy_generators(elems: &[Mat], one: &Mat, op: impl Fn(&Mat, &Mat) -> Mat) -> Vec<Mat> {
    let mut kept: Vec<Mat> = Vec::new();
    let mut span: HashSet<Mat> = HashSet::from([one.clone()]);
    for x in elems {
        if span.contains(x) {
            continue;
        }
        kept.push(x.clone());
        let mut queue: Vec<Mat> = span.iter().cloned().collect();
        while let Some(y) = queue.pop() {
            for g in &kept {
                let z = op(g, &y);
                if span.insert(z.clone()) {
                    queue.push(z);
                }
            }
        }
    }
    kept
}

/// Packs a `2m × 2m` matrix into a `u128` key.
#[derive(Clone, Debug)]
struct Codec {
    base: u128,
    n: usize,
}

impl Codec {
    fn new(ring: &FiniteRing, n: usize) -> Result<Codec> {
        let bits = (ring.size() as f64).log2() * (n * n) as f64;
        if bits > 127.0 {
            return Err(Error::ScaleGuard(format!("{n}×{n} matrices do not fit a 128-bit key")));
        }
        Ok(Codec { base: ring.size() as u128, n })
    }

    fn encode(&self, x: &Mat) -> u128 {
        x.data().iter().rev().fold(0u128, |acc, &e| acc * self.base + e as u128)
    }

    fn decode(&self, mut key: u128) -> Mat {
        let mut data = Vec::with_capacity(self.n * self.n);
        for _ in 0..self.n * self.n {
            data.push((key % self.base) as Elem);
            key /= self.base;
        }
        Mat::from_vec(self.n, self.n, data)
    }
}

/// One BFS step `to = generators[generator] · from`.
#[derive(Clone, Copy, Debug)]
pub struct Edge {
    pub from: usize,
    pub generator: usize,
    pub to: usize,
    /// `true` when this edge discovered `to`.
    pub discovered: bool,
}

/// The group generated by a list of generators, with a BFS word per element.
#[derive(Clone, Debug)]
pub struct GroupClosure {
    codec: Codec,
    generators: Vec<Generator>,
    elements: Vec<u128>,
    index: HashMap<u128, u32>,
    parent: Vec<(u32, u32)>,
    truncated: bool,
}

impl GroupClosure {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// `true` if the search stopped at its element limit.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn element(&self, i: usize) -> Mat {
        self.codec.decode(self.elements[i])
    }

    pub fn elements(&self) -> impl Iterator<Item = Mat> + '_ {
        self.elements.iter().map(|&k| self.codec.decode(k))
    }

    pub fn position(&self, x: &Mat) -> Option<usize> {
        if x.rows() != self.codec.n || x.cols() != self.codec.n {
            return None;
        }
        self.index.get(&self.codec.encode(x)).map(|&i| i as usize)
    }

    pub fn contains(&self, x: &Mat) -> bool {
        self.position(x).is_some()
    }

    /// Generator indices `w` with `element(i) = g[w₀] g[w₁] ⋯`.
    pub fn word(&self, mut i: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while i != 0 {
            let (p, g) = self.parent[i];
            w.push(g as usize);
            i = p as usize;
        }
        w
    }

    pub fn word_of(&self, x: &Mat) -> Option<Vec<usize>> {
        self.position(x).map(|i| self.word(i))
    }

    pub fn evaluate(&self, space: &HermitianSpace, word: &[usize]) -> Mat {
        word.iter().fold(space.identity(), |acc, &g| space.mul(&acc, &self.generators[g].mat))
    }

    pub fn word_labels(&self, word: &[usize]) -> Vec<String> {
        word.iter().map(|&g| self.generators[g].label.short()).collect()
    }

    /// The word of `x` as Bruhat elements (`None` if an extra generator occurs).
    pub fn bruhat_word(&self, space: &HermitianSpace, word: &[usize]) -> Option<Vec<Bruhat>> {
        let mut out = Vec::new();
        for &g in word {
            out.extend(self.generators[g].bruhat_word(space)?);
        }
        Some(out)
    }
}

/// `⟨Bruhat elements ∪ extra⟩` with all `h_t` and `u_r`, at most
/// [`CLOSURE_LIMIT`] elements.
pub fn closure(space: &HermitianSpace, extra: &[Mat]) -> Result<GroupClosure> {
    let gens = with_extras(bruhat_generators(space, GeneratorPolicy::Full)?, extra);
    closure_with(space, gens, CLOSURE_LIMIT, false, |_| {})
}

/// Appends `extra` as [`Label::Extra`] generators.
pub fn with_extras(mut gens: Vec<Generator>, extra: &[Mat]) -> Vec<Generator> {
    for (i, x) in extra.iter().enumerate() {
        gens.push(Generator { label: Label::Extra(i), mat: x.clone() });
    }
    gens
}

/// BFS by left multiplication. Reports every edge to `on_edge`. With
/// `truncate`, stops adding elements at `limit` (edges between known
/// elements are still reported); otherwise exceeding `limit` is an error.
pub fn closure_with(
    space: &HermitianSpace,
    generators: Vec<Generator>,
    limit: usize,
    truncate: bool,
    mut on_edge: impl FnMut(&Edge),
) -> Result<GroupClosure> {
    let codec = Codec::new(space.ring(), 2 * space.m())?;
    let id = codec.encode(&space.identity());
    let mut c = GroupClosure {
        codec,
        generators,
        elements: vec![id],
        index: HashMap::from([(id, 0)]),
        parent: vec![(0, 0)],
        truncated: false,
    };
    let mut head = 0;
    while head < c.elements.len() {
        let x = c.codec.decode(c.elements[head]);
        for gi in 0..c.generators.len() {
            let key = c.codec.encode(&space.mul(&c.generators[gi].mat, &x));
            let edge = match c.index.get(&key) {
                Some(&to) => Edge { from: head, generator: gi, to: to as usize, discovered: false },
                None => {
                    if c.elements.len() >= limit {
                        if truncate {
                            c.truncated = true;
                            continue;
                        }
                        return Err(Error::ScaleGuard(format!("closure exceeds {limit} elements")));
                    }
                    let to = c.elements.len();
                    c.elements.push(key);
                    c.index.insert(key, to as u32);
                    c.parent.push((head as u32, gi as u32));
                    Edge { from: head, generator: gi, to, discovered: true }
                }
            };
            on_edge(&edge);
        }
        head += 1;
    }
    Ok(c)
}

/// Extends images of `e₁, …, e_{2m}` column by column, keeping the Gram
/// constraints `h(xᵢ, xⱼ) = J_{ij}`. `candidates[j]` lists the allowed
/// images of `e_j`. Calls `emit` on every complete solution.
fn backtrack(
    space: &HermitianSpace,
    candidates: &[Vec<Vec<Elem>>],
    mut emit: impl FnMut(&[&[Elem]]),
) -> Result<u64> {
    let n = 2 * space.m();
    let j = space.gram();
    let mut nodes = 0u64;
    let mut chosen: Vec<&[Elem]> = Vec::with_capacity(n);
    let mut cursor = vec![0usize; n];
    let mut count = 0u64;
    let mut level = 0usize;
    loop {
        if cursor[level] == candidates[level].len() {
            if level == 0 {
                return Ok(count);
            }
            cursor[level] = 0;
            level -= 1;
            chosen.pop();
            cursor[level] += 1;
            continue;
        }
        nodes += 1;
        if nodes > NODE_LIMIT {
            return Err(Error::ScaleGuard(format!("isometry search exceeds {NODE_LIMIT} nodes")));
        }
        let x = &candidates[level][cursor[level]];
        let ok = space.form(x, x) == j.get(level, level)
            && chosen.iter().enumerate().all(|(i, y)| {
                space.form(y, x) == j.get(i, level) && space.form(x, y) == j.get(level, i)
            });
        if !ok {
            cursor[level] += 1;
            continue;
        }
        chosen.push(x);
        if level + 1 == n {
            count += 1;
            emit(&chosen);
            chosen.pop();
            cursor[level] += 1;
        } else {
            level += 1;
        }
    }
}

fn all_vectors(ring: &FiniteRing, len: usize) -> Result<Vec<Vec<Elem>>> {
    let total = (ring.size() as f64).powi(len as i32);
    if total > 1e6 {
        return Err(Error::ScaleGuard(format!("{total} candidate columns")));
    }
    let q = ring.size();
    Ok((0..total as usize)
        .map(|mut i| {
            (0..len)
                .map(|_| {
                    let d = (i % q) as Elem;
                    i /= q;
                    d
                })
                .collect()
        })
        .collect())
}

fn from_columns(cols: &[&[Elem]]) -> Mat {
    let n = cols.len();
    let mut x = Mat::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        for (i, &e) in c.iter().enumerate() {
            x.set(i, j, e);
        }
    }
    x
}

/// Every `X` with `X*JX = J`.
pub fn enumerate_isometries(space: &HermitianSpace) -> Result<Vec<Mat>> {
    let n = 2 * space.m();
    let cands = vec![all_vectors(space.ring(), n)?; n];
    let mut out = Vec::new();
    backtrack(space, &cands, |cols| out.push(from_columns(cols)))?;
    Ok(out)
}

/// `|SL|` by the same search, without storing elements.
pub fn count_isometries(space: &HermitianSpace) -> Result<u64> {
    let n = 2 * space.m();
    let cands = vec![all_vectors(space.ring(), n)?; n];
    backtrack(space, &cands, |_| {})
}

/// Isometries congruent to `1` modulo the radical (the kernel of reduction).
pub fn count_congruence_kernel(space: &HermitianSpace) -> Result<u64> {
    let r = space.ring();
    let n = 2 * space.m();
    let rad: Vec<Elem> = r.elements().filter(|&x| r.in_radical(x)).collect();
    let offsets: Vec<Vec<Elem>> = all_vectors_over(&rad, n)?;
    let cands: Vec<Vec<Vec<Elem>>> = (0..n)
        .map(|j| {
            offsets
                .iter()
                .map(|o| {
                    let mut v = o.clone();
                    v[j] = r.add(v[j], r.one());
                    v
                })
                .collect()
        })
        .collect();
    backtrack(space, &cands, |_| {})
}

fn all_vectors_over(digits: &[Elem], len: usize) -> Result<Vec<Vec<Elem>>> {
    let total = (digits.len() as f64).powi(len as i32);
    if total > 1e6 {
        return Err(Error::ScaleGuard(format!("{total} candidate columns")));
    }
    let q = digits.len();
    Ok((0..total as usize)
        .map(|mut i| {
            (0..len)
                .map(|_| {
                    let d = digits[i % q];
                    i /= q;
                    d
                })
                .collect()
        })
        .collect())
}

/// The reflection `T = [[k, e], [e, k]]`, `e` the `(m, m)` matrix unit, `k = 1 - e`.
pub fn reflection_t(space: &HermitianSpace) -> Mat {
    let a = space.matrix_ring();
    let m = space.m();
    let mut e = a.zero();
    e.set(m - 1, m - 1, space.ring().one());
    let k = a.sub(&a.one(), &e);
    Mat::from_quarters(&k, &e, &e, &k)
}

/// How `|SL|` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlMethod {
    /// Backtracking over all of `V`.
    Enumeration,
    /// `|kernel of reduction| · |SL over the residue field|`, both enumerated.
    KernelTimesResidue,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexCertificate {
    pub config: String,
    pub ssl_order: u64,
    pub sl_order: u64,
    pub index: u64,
    pub sl_method: SlMethod,
    pub generators: GeneratorPolicy,
    #[serde(rename = "T_in_ssl")]
    pub t_in_ssl: Option<bool>,
    #[serde(rename = "T_normalizes")]
    pub t_normalizes: Option<bool>,
    /// `|⟨SSL, T⟩|`.
    pub extended_order: Option<u64>,
    pub witness_words: Vec<Vec<String>>,
    pub checks: Report,
}

pub fn describe(space: &HermitianSpace) -> String {
    let c = space.ring().config();
    let mut s = format!("{} p={}", c.family, c.p);
    if let Some(k) = c.k {
        s += &format!(" k={k}");
    }
    if let Some(x) = c.s {
        s += &format!(" s={x}");
    }
    format!("{s} m={} eps={:+}", space.m(), space.eps().value())
}

/// `|SL|` for a local ring: enumeration over fields, otherwise the kernel
/// of reduction times the residue group.
pub fn sl_order(space: &HermitianSpace) -> Result<(u64, SlMethod)> {
    let r = space.ring();
    if r.is_field() {
        return Ok((count_isometries(space)?, SlMethod::Enumeration));
    }
    let res = r.residue_field().ok_or_else(|| Error::Precondition("ring is not local".into()))?;
    let res = Arc::new(build_ring(res.config())?);
    let res_space = HermitianSpace::new(res, space.m(), space.eps());
    let kernel = count_congruence_kernel(space)?;
    Ok((kernel * count_isometries(&res_space)?, SlMethod::KernelTimesResidue))
}

/// Orders of `SSL` and `SL`, the index, and for `ε = +1` the status of `T`.
pub fn index_certificate(space: &HermitianSpace) -> Result<IndexCertificate> {
    let gens = bruhat_generators(space, GeneratorPolicy::Auto)?;
    let policy = if gens.len() == 2 + space.units()?.len() + space.epsilon_symmetric()?.len() {
        GeneratorPolicy::Full
    } else {
        GeneratorPolicy::Reduced
    };
    let ssl = closure_with(space, gens.clone(), CLOSURE_LIMIT, false, |_| {})?;
    let (sl, method) = sl_order(space)?;
    let mut checks = Report::new();
    let mut iso = Check::exhaustive("closure elements are isometries");
    for x in ssl.elements() {
        iso.record(space.block_conditions(&x));
    }
    checks.push(iso);
    checks.push(words_check(space, &ssl, 7));
    checks.push(Check::fact("lagrange", sl % ssl.order() == 0).with_detail(format!("{} / {}", sl, ssl.order())));
    let index = sl / ssl.order();
    let mut cert = IndexCertificate {
        config: describe(space),
        ssl_order: ssl.order(),
        sl_order: sl,
        index,
        sl_method: method,
        generators: policy,
        t_in_ssl: None,
        t_normalizes: None,
        extended_order: None,
        witness_words: Vec::new(),
        checks,
    };
    if space.eps() == Sign::Plus {
        let t = reflection_t(space);
        cert.checks.push(Check::fact("T is an isometry", space.is_isometry(&t)));
        cert.checks.push(Check::fact("T^2 = 1", space.mul(&t, &t) == space.identity()));
        cert.t_in_ssl = Some(ssl.contains(&t));
        let mut norm = Check::exhaustive("T normalizes SSL");
        for g in &gens {
            let conj = space.mul(&space.mul(&t, &g.mat), &t);
            match ssl.word_of(&conj) {
                Some(w) => {
                    norm.record(true);
                    if cert.witness_words.len() < 4 {
                        cert.witness_words.push(ssl.word_labels(&w));
                    }
                }
                None => {
                    norm.record_with(false, || format!("T {} T not in SSL", g.label.short()));
                }
            }
        }
        cert.t_normalizes = Some(norm.pass);
        cert.checks.push(norm);
        if cert.t_in_ssl == Some(false) {
            let ext = closure_with(space, with_extras(gens, &[t]), CLOSURE_LIMIT, false, |_| {})?;
            cert.extended_order = Some(ext.order());
            cert.checks.push(
                Check::fact("|<SSL, T>| = |SL|", ext.order() == sl)
                    .with_detail(format!("{} vs {}", ext.order(), sl)),
            );
        }
    } else {
        let last = ssl.order() as usize - 1;
        cert.witness_words.push(ssl.word_labels(&ssl.word(last)));
    }
    Ok(cert)
}

/// Every stored word evaluates to its element (exhaustive up to 10⁴ elements,
/// otherwise 10³ sampled).
pub fn words_check(space: &HermitianSpace, c: &GroupClosure, seed: u64) -> Check {
    let n = c.order() as usize;
    let (mut check, idx): (Check, Vec<usize>) = if n <= 10_000 {
        (Check::exhaustive("words evaluate to elements"), (0..n).collect())
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (Check::sampled("words evaluate to elements", seed), (0..1000).map(|_| rng.gen_range(0..n)).collect())
    };
    for i in idx {
        check.record_with(c.evaluate(space, &c.word(i)) == c.element(i), || format!("element {i}"));
    }
    check
}

/// The first `s ∈ A^{ε-sym}` with `a + sc ∈ A^×`.
pub fn coprime_find_s(a_ring: &MatrixRing, eps: Sign, a: &Mat, c: &Mat) -> Result<Mat> {
    let lhs = a_ring.mul(&a_ring.star(a), c);
    let rhs = a_ring.mul(&a_ring.star(c), a);
    let rhs = if eps == Sign::Plus { a_ring.neg(&rhs) } else { rhs };
    if lhs != rhs {
        return Err(Error::Precondition("a*c = -εc*a fails".into()));
    }
    a_ring
        .epsilon_symmetric(eps.value())?
        .into_iter()
        .find(|s| a_ring.is_unit(&a_ring.add(a, &a_ring.mul(s, c))))
        .ok_or(Error::NotFound)
}

/// Writes `X` with unit `(1,1)` block as `ω u_{εca⁻¹} ω⁻¹ · h_a u_{a⁻¹b}`.
fn factor_unit_corner(space: &HermitianSpace, x: &Mat) -> Result<Vec<Bruhat>> {
    let a_ring = space.matrix_ring();
    let (a, b, c, _) = x.quarters();
    let ai = a_ring.invert(&a)?;
    let y = a_ring.mul(&c, &ai);
    let mut word = Vec::new();
    if y != a_ring.zero() {
        let r = a_ring.mul(&a_ring.scalar(space.eps_elem()), &y);
        space.u(&r)?;
        word.push(Bruhat::Omega);
        word.push(Bruhat::U(r));
        word.extend(omega_inverse(space));
    }
    if a != a_ring.one() {
        word.push(Bruhat::H(a));
    }
    let s = a_ring.mul(&ai, &b);
    if s != a_ring.zero() {
        space.u(&s)?;
        word.push(Bruhat::U(s));
    }
    Ok(word)
}

fn reduce(space: &HermitianSpace, x: &Mat) -> Result<Vec<Bruhat>> {
    let a_ring = space.matrix_ring();
    let (a, _, c, _) = x.quarters();
    let s = coprime_find_s(a_ring, space.eps(), &a, &c)?;
    let us = space.u(&s)?;
    let mut word = Vec::new();
    if s != a_ring.zero() {
        word.push(Bruhat::U(a_ring.neg(&s)));
    }
    word.extend(factor_unit_corner(space, &space.mul(&us, x))?);
    Ok(word)
}

pub fn evaluate_word(space: &HermitianSpace, word: &[Bruhat]) -> Result<Mat> {
    word.iter().try_fold(space.identity(), |acc, g| Ok(space.mul(&acc, &space.bruhat(g)?)))
}

/// A word in `ω, h_t, u_r` whose product is `X`. Tries the coprime reduction on
/// `X` and on `ωX`, then the BFS word of `fallback` (computed on demand).
pub fn factor_bruhat(space: &HermitianSpace, x: &Mat, fallback: Option<&GroupClosure>) -> Result<Vec<Bruhat>> {
    if !space.is_isometry(x) {
        return Err(Error::NotIsometry);
    }
    let attempts = [
        reduce(space, x),
        reduce(space, &space.mul(&space.omega(), x)).map(|w| {
            let mut full = omega_inverse(space);
            full.extend(w);
            full
        }),
    ];
    for w in attempts.into_iter().flatten() {
        if evaluate_word(space, &w)? == *x {
            return Ok(w);
        }
    }
    let owned;
    let c = match fallback {
        Some(c) => c,
        None => {
            owned = closure(space, &[])?;
            &owned
        }
    };
    let w = c.word_of(x).ok_or(Error::NotInSsl)?;
    c.bruhat_word(space, &w).ok_or(Error::NotInSsl)
}

/// Non-local counterexample: `B = M(2, F_q)` with the adjugate, `m = 1`, `ε = -1`.
pub fn notlocal_counterexample(q: u32) -> Result<Report> {
    let ring = Arc::new(build_ring(&RingConfig::new(Family::Matrix2Adjugate, q))?);
    let space = HermitianSpace::new(ring.clone(), 1, Sign::Minus);
    let a_ring = space.matrix_ring();
    let unit = |c: [u32; 4]| Mat::from_vec(1, 1, vec![ring.encode(&c)]);
    let (a, b, c, d) = (unit([0, 0, 0, 1]), unit([0, 1, 0, 0]), unit([0, 0, 1, 0]), unit([1, 0, 0, 0]));
    let x = Mat::from_quarters(&a, &b, &c, &d);
    let minus_one = (q - 1) as u64;
    let mut report = Report::new();
    report.push(Check::fact("X is an isometry", space.is_isometry(&x)));
    let det = ring.flat_determinant(&x);
    report.push(Check::fact("flattened det X = -1", det == minus_one).with_detail(format!("det = {det}")));
    let mut gens = Check::exhaustive("Bruhat generators have flattened det 1");
    for g in bruhat_generators(&space, GeneratorPolicy::Full)? {
        let det = ring.flat_determinant(&g.mat);
        gens.record_with(det == 1, || format!("{} has det {det}", g.label.short()));
    }
    report.push(gens);
    let syms = space.epsilon_symmetric()?;
    let scalar = syms.iter().all(|r| {
        let cf = ring.coefficients(r.get(0, 0));
        cf[1] == 0 && cf[2] == 0 && cf[0] == cf[3]
    });
    report.push(
        Check::fact("A^{eps-sym} = scalar matrices", scalar && syms.len() == q as usize)
            .with_detail(format!("{} elements", syms.len())),
    );
    let mut coprime = Check::exhaustive("a + rc is never a unit");
    for r in &syms {
        coprime.record(!a_ring.is_unit(&a_ring.add(&a, &a_ring.mul(r, &c))));
    }
    report.push(coprime);
    report.push(Check::fact(
        "coprime search reports NotFound",
        coprime_find_s(a_ring, Sign::Minus, &a, &c) == Err(Error::NotFound),
    ));
    Ok(report)
}

/// `W` on each closure generator, `ω⁻¹` as `W(ω)W(h_ε)` and extras through
/// the general construction.
pub fn generator_operators(cfg: &WeilConfig, gens: &[Generator]) -> Result<Vec<Operator>> {
    gens.iter()
        .map(|g| match g.bruhat_word(cfg.space()) {
            Some(w) => w.iter().try_fold(Operator::identity(cfg.order(), cfg.dim()), |acc, b| {
                Ok(acc.mul(&cfg.weil_bruhat(b)?))
            }),
            None => Ok(cfg.weil_general(&g.mat)?.w),
        })
        .collect()
}

/// Runs the closure carrying `W` along: each discovered element gets
/// `W(g)W(x)`, and every rediscovery must reproduce the stored operator.
pub fn weil_closure_check(
    cfg: &WeilConfig,
    generators: Vec<Generator>,
    limit: usize,
    truncate: bool,
) -> Result<(GroupClosure, Check, Vec<Operator>)> {
    let gen_ops = generator_operators(cfg, &generators)?;
    let mut ops = vec![Operator::identity(cfg.order(), cfg.dim())];
    let mut check = Check::exhaustive("bfs well-definedness");
    let c = closure_with(cfg.space(), generators, limit, truncate, |e| {
        let prod = gen_ops[e.generator].mul(&ops[e.from]);
        if e.discovered {
            ops.push(prod);
        } else {
            check.record_with(prod.same(&ops[e.to]), || {
                format!("edge {} -g{}-> {} disagrees", e.from, e.generator, e.to)
            });
        }
    })?;
    let detail = format!("{} elements, {} rediscovery edges", c.order(), check.cases);
    Ok((c, check.with_detail_if_pass(detail), ops))
}

/// `W(gh) = W(g)W(h)` through the general construction, over all pairs of
/// `elements` or over `samples` seeded pairs.
pub fn homomorphism_check(cfg: &WeilConfig, elements: &[Mat], samples: Option<(usize, u64)>) -> Result<Check> {
    let space = cfg.space();
    let mut cache: HashMap<Mat, Operator> = HashMap::new();
    let mut w = |x: &Mat| -> Result<Operator> {
        if let Some(op) = cache.get(x) {
            return Ok(op.clone());
        }
        let op = cfg.weil_general(x)?.w;
        cache.insert(x.clone(), op.clone());
        Ok(op)
    };
    let n = elements.len();
    let (mut check, pairs): (Check, Vec<(usize, usize)>) = match samples {
        None => (Check::exhaustive("homomorphism"), (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()),
        Some((k, seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (Check::sampled("homomorphism", seed), (0..k).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect())
        }
    };
    for (i, j) in pairs {
        let (x, y) = (&elements[i], &elements[j]);
        let lhs = w(&space.mul(x, y))?;
        let rhs = w(x)?.mul(&w(y)?);
        check.record_with(lhs.same(&rhs), || format!("pair ({i}, {j})"));
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(family: Family, p: u32, m: usize, eps: Sign) -> HermitianSpace {
        HermitianSpace::new(Arc::new(build_ring(&RingConfig::new(family, p)).unwrap()), m, eps)
    }

    #[test]
    fn sp2_f3_closure_matches_enumeration() {
        let s = space(Family::PrimeField, 3, 1, Sign::Minus);
        let c = closure(&s, &[]).unwrap();
        assert_eq!(c.order(), 24);
        let all = enumerate_isometries(&s).unwrap();
        assert_eq!(all.len(), 24);
        assert!(all.iter().all(|x| c.contains(x)));
        assert!(words_check(&s, &c, 1).pass);
    }

    #[test]
    fn codec_round_trip() {
        let s = space(Family::QuadraticFrobenius, 3, 1, Sign::Minus);
        let codec = Codec::new(s.ring(), 2).unwrap();
        let x = s.omega();
        assert_eq!(codec.decode(codec.encode(&x)), x);
    }

    #[test]
    fn reduced_generators_span_same_group() {
        let s = space(Family::PrimeField, 3, 2, Sign::Plus);
        let full = closure(&s, &[]).unwrap();
        let gens = bruhat_generators(&s, GeneratorPolicy::Reduced).unwrap();
        assert!(gens.len() < full.generators().len());
        let red = closure_with(&s, gens, CLOSURE_LIMIT, false, |_| {}).unwrap();
        assert_eq!(red.order(), full.order());
    }

    #[test]
    fn truncated_closure_stops() {
        let s = space(Family::PrimeField, 3, 2, Sign::Plus);
        let gens = bruhat_generators(&s, GeneratorPolicy::Full).unwrap();
        let c = closure_with(&s, gens.clone(), 50, true, |_| {}).unwrap();
        assert!(c.truncated() && c.order() == 50);
        assert!(matches!(closure_with(&s, gens, 50, false, |_| {}), Err(Error::ScaleGuard(_))));
    }

    #[test]
    fn coprime_examples() {
        let s = space(Family::PrimeField, 3, 1, Sign::Minus);
        let a = s.matrix_ring();
        let found = coprime_find_s(a, Sign::Minus, &a.zero(), &a.one()).unwrap();
        assert_eq!(found, a.one());
        let two = a.scalar(2);
        assert_eq!(coprime_find_s(a, Sign::Minus, &two, &a.one()).unwrap(), a.zero());
        let s2 = space(Family::PrimeField, 3, 2, Sign::Plus);
        let t = reflection_t(&s2);
        let (k, e, _, _) = t.quarters();
        assert_eq!(coprime_find_s(s2.matrix_ring(), Sign::Plus, &k, &e), Err(Error::NotFound));
    }

    #[test]
    fn factor_round_trips() {
        let s = space(Family::PrimeField, 3, 1, Sign::Minus);
        let c = closure(&s, &[]).unwrap();
        for x in c.elements() {
            let w = factor_bruhat(&s, &x, Some(&c)).unwrap();
            assert_eq!(evaluate_word(&s, &w).unwrap(), x);
        }
        let s2 = space(Family::PrimeField, 3, 2, Sign::Plus);
        let t = reflection_t(&s2);
        assert_eq!(factor_bruhat(&s2, &t, None), Err(Error::NotInSsl));
    }

    #[test]
    fn notlocal_report_passes() {
        let r = notlocal_counterexample(3).unwrap();
        assert!(r.all_pass(), "{:?}", r.failed().collect::<Vec<_>>());
    }
}
