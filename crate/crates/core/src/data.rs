//! Abstract data `(P, χ, γ, α, f)`, its axioms, and the operators `R` it
//! defines on the Bruhat elements.

use std::collections::HashMap;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::character::Sign;
use crate::cyclotomic::{RootCode, Roots};
use crate::error::{Error, Result};
use crate::hermitian::{check_relations, Bruhat, BruhatImage, Columns, RelationParams};
use crate::matrix::{Mat, MatrixRing};
use crate::operator::Operator;
use crate::report::{Check, Report};
use crate::weil::WeilConfig;
use crate::CycQ;

/// Quantified domains up to this many tuples are checked exhaustively.
pub const EXHAUSTIVE_TUPLES: usize = 10_000;
/// Samples drawn above [`EXHAUSTIVE_TUPLES`].
pub const SAMPLES: usize = 1000;
const TABLE_LIMIT: usize = 100_000;

/// `(P, χ, γ, α, f)` with `P = B^m`. `χ`, `γ`, `α` are tables of signed
/// root codes.
#[derive(Clone, Debug)]
pub struct AbstractData {
    cols: Columns,
    a: MatrixRing,
    eps: Sign,
    roots: Roots,
    chi: Vec<RootCode>,
    syms: Vec<Mat>,
    sym_index: HashMap<Mat, usize>,
    gamma: Vec<RootCode>,
    units: Vec<Mat>,
    unit_index: HashMap<Mat, usize>,
    alpha: Vec<RootCode>,
    f: CycQ,
}

/// `χ(a,b) = β(2a*b)`, `γ(S,a) = β(-εa*Sa)`, `α = μ` and `f` from the Weil
/// configuration.
pub fn canonical_data(cfg: &WeilConfig) -> Result<AbstractData> {
    let space = cfg.space();
    let a = space.matrix_ring().clone();
    let cols = cfg.columns().clone();
    let beta = cfg.beta();
    let r = cfg.ring();
    let roots = cfg.roots();
    let d = cols.dim();
    let eps = space.eps();
    let two = r.from_int(2);
    let mut chi = vec![0; d * d];
    for x in 0..d {
        for y in 0..d {
            chi[x * d + y] = beta.code(r.mul(two, cols.dot(x, y)));
        }
    }
    let syms = space.epsilon_symmetric()?;
    let units = space.units()?;
    if syms.len() * d > TABLE_LIMIT * 10 || units.len() > TABLE_LIMIT {
        return Err(Error::ScaleGuard("abstract data tables too large".into()));
    }
    let mut gamma = Vec::with_capacity(syms.len() * d);
    for s in &syms {
        gamma.extend((0..d).map(|x| beta.code(eps.negate().apply(r, cols.quad(s, x, x)))));
    }
    let alpha = units.iter().map(|t| Ok(roots.sign(cfg.mu(t)? < 0))).collect::<Result<Vec<_>>>()?;
    Ok(AbstractData {
        sym_index: syms.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect(),
        unit_index: units.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect(),
        cols,
        a,
        eps,
        roots,
        chi,
        syms,
        gamma,
        units,
        alpha,
        f: cfg.f().clone(),
    })
}

impl AbstractData {
    pub fn dim(&self) -> usize {
        self.cols.dim()
    }

    pub fn roots(&self) -> Roots {
        self.roots
    }

    pub fn order(&self) -> u32 {
        self.roots.order()
    }

    pub fn f(&self) -> &CycQ {
        &self.f
    }

    pub fn chi(&self, x: usize, y: usize) -> RootCode {
        self.chi[x * self.dim() + y]
    }

    pub fn gamma(&self, b: &Mat, x: usize) -> RootCode {
        self.gamma[self.sym_index[b] * self.dim() + x]
    }

    pub fn alpha(&self, t: &Mat) -> RootCode {
        self.alpha[self.unit_index[t]]
    }

    pub fn epsilon_symmetric(&self) -> &[Mat] {
        &self.syms
    }

    pub fn units(&self) -> &[Mat] {
        &self.units
    }

    pub fn with_f(mut self, f: CycQ) -> AbstractData {
        self.f = f;
        self
    }

    /// Replaces `α` by the trivial character.
    pub fn trivialize_alpha(mut self) -> AbstractData {
        self.alpha.iter_mut().for_each(|c| *c = 0);
        self
    }

    fn sym_units(&self) -> Vec<&Mat> {
        self.syms.iter().filter(|t| self.a.is_unit(t)).collect()
    }

    fn eps_scalar(&self) -> Mat {
        self.a.scalar(self.cols.ring().from_int(self.eps.value()))
    }

    fn cyc(&self, c: RootCode) -> CycQ {
        self.roots.to_cyc::<BigRational>(c)
    }

    /// `Σ_y` of the codes produced by `term`.
    fn sum(&self, term: impl Fn(usize) -> RootCode) -> CycQ {
        let mut acc = vec![0i64; self.order() as usize];
        for y in 0..self.dim() {
            self.roots.accumulate(&mut acc, term(y), 1);
        }
        CycQ::from_counts(self.order(), &acc)
    }
}

/// All index tuples of the given domain sizes, or [`SAMPLES`] seeded draws
/// when there are more than [`EXHAUSTIVE_TUPLES`].
fn tuples(name: &str, sizes: &[usize], seed: u64) -> (Check, Vec<Vec<usize>>) {
    let total = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s));
    match total {
        Some(n) if n <= EXHAUSTIVE_TUPLES => {
            let all = (0..n)
                .map(|mut i| {
                    sizes
                        .iter()
                        .map(|&s| {
                            let d = i % s;
                            i /= s;
                            d
                        })
                        .collect()
                })
                .collect();
            (Check::exhaustive(name), all)
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let all = (0..SAMPLES).map(|_| sizes.iter().map(|&s| rng.gen_range(0..s)).collect()).collect();
            (Check::sampled(name, seed), all)
        }
    }
}

/// The eight axioms, each reported separately.
pub fn verify_axioms(data: &AbstractData, seed: u64) -> Report {
    let d = data.dim();
    let cols = &data.cols;
    let a = &data.a;
    let ro = data.roots;
    let su = data.sym_units();
    let ns = data.syms.len();
    let mut report = Report::new();

    let (mut c, ts) = tuples("chi1", &[data.units.len(), d, d], seed);
    for v in ts {
        let t = &data.units[v[0]];
        let (x, y) = (v[1], v[2]);
        let ts = a.star(t);
        let lhs = ro.mul(data.alpha(&a.mul(&ts, t)), data.chi(cols.apply(t, x), y));
        let rhs = data.chi(x, cols.apply(&ts, y));
        c.record_with(lhs == rhs, || format!("t = {:?}, x = {x}, y = {y}", t.to_rows()));
    }
    report.push(c);

    let (mut c, ts) = tuples("chi2", &[d, d], seed);
    for v in ts {
        let (x, y) = (v[0], v[1]);
        let rhs = ro.pow(data.chi(x, y), -data.eps.value());
        c.record_with(data.chi(y, x) == rhs, || format!("x = {x}, y = {y}"));
    }
    report.push(c);

    let mut c = Check::exhaustive("chi3");
    for y in 1..d {
        c.record_with((0..d).any(|x| data.chi(x, y) != 0), || format!("y = {y} is in the radical"));
    }
    report.push(c);

    let (mut c, ts) = tuples("gamma1", &[ns, ns, d], seed);
    for v in ts {
        let (b, b2, x) = (&data.syms[v[0]], &data.syms[v[1]], v[2]);
        let lhs = data.gamma(&a.add(b, b2), x);
        c.record_with(lhs == ro.mul(data.gamma(b, x), data.gamma(b2, x)), || format!("{v:?}"));
    }
    report.push(c);

    let (mut c, ts) = tuples("gamma2", &[ns, data.units.len(), d], seed);
    for v in ts {
        let (b, t, x) = (&data.syms[v[0]], &data.units[v[1]], v[2]);
        let conj = a.mul(&a.mul(&a.star(t), b), t);
        c.record_with(data.gamma(b, cols.apply(t, x)) == data.gamma(&conj, x), || format!("{v:?}"));
    }
    report.push(c);

    let (mut c, ts) = tuples("gamma3", &[su.len(), d, d], seed);
    for v in ts {
        let (t, x, z) = (su[v[0]], v[1], v[2]);
        let rhs = ro.mul(ro.mul(data.gamma(t, x), data.gamma(t, z)), data.chi(cols.apply(t, z), x));
        c.record_with(data.gamma(t, cols.add(x, z)) == rhs, || format!("{v:?}"));
    }
    report.push(c);

    let eps = data.eps_scalar();
    let lhs = data.f.pow(2).scale(&BigRational::from_integer(d.into()));
    let rhs = data.cyc(data.alpha(&eps));
    report.push(Check::fact("cez", lhs == rhs));

    let (mut c, ts) = tuples("c", &[su.len(), d], seed);
    let me = a.neg(&eps);
    for v in ts {
        let (t, x) = (su[v[0]], v[1]);
        let ti = a.invert(t).expect("unit");
        let s = data.sum(|y| ro.mul(data.chi(x, y), data.gamma(&ti, y)));
        let lhs = &(&data.f * &data.cyc(data.gamma(&a.mul(&me, t), x))) * &s;
        c.record_with(lhs == data.cyc(data.alpha(&a.neg(t))), || format!("{v:?}"));
    }
    report.push(c);
    report
}

/// The identities of Lemma `formi`, Corollary `coro` and Lemma `gae`.
pub fn lemma_checks(data: &AbstractData, seed: u64) -> Report {
    let a = &data.a;
    let ro = data.roots;
    let su = data.sym_units();
    let mut report = Report::new();

    let mut c = Check::exhaustive("formi");
    for t in &su {
        let ti = a.invert(t).expect("unit");
        let ts = a.star(t);
        c.record_with(data.sum(|y| data.gamma(&ts, y)) == data.sum(|y| data.gamma(&ti, y)), || {
            format!("t = {:?}", t.to_rows())
        });
    }
    report.push(c);

    let mut c = Check::exhaustive("coro");
    let me = a.neg(&data.eps_scalar());
    for t in &su {
        c.record_with(data.alpha(&a.mul(t, t)) == data.alpha(&me), || format!("t = {:?}", t.to_rows()));
    }
    report.push(c);

    let (mut c, ts) = tuples("gae", &[data.syms.len(), data.dim()], seed);
    for v in ts {
        let (t, x) = (&data.syms[v[0]], v[1]);
        let g = data.gamma(t, x);
        let ok = data.gamma(t, data.cols.neg(x)) == g && ro.inv(g) == data.gamma(&a.neg(t), x);
        c.record_with(ok, || format!("{v:?}"));
    }
    report.push(c);
    report
}

/// `R(h_t) e_x = α(t) e_{(t*)⁻¹x}`, `R(u_b) e_x = γ(b,x) e_x`,
/// `R(ω) e_x = f Σ_y χ(x,y) e_y`.
#[allow(non_snake_case)]
pub fn R_on_bruhat(data: &AbstractData, g: &Bruhat) -> Result<Operator> {
    let n = data.order();
    let d = data.dim();
    match g {
        Bruhat::Omega => Ok(Operator::from_codes(n, d, |y, x| Some(data.chi(x, y))).scaled(&data.f)),
        Bruhat::H(t) => {
            let tsi = data.a.invert(&data.a.star(t))?;
            Ok(Operator::monomial(n, data.cols.permutation(&tsi), vec![data.alpha(t); d]))
        }
        Bruhat::U(b) => {
            if !data.sym_index.contains_key(b) {
                return Err(Error::NotEpsilonSymmetric(format!("{:?}", b.to_rows())));
            }
            Ok(Operator::diagonal(n, (0..d).map(|x| data.gamma(b, x)).collect()))
        }
    }
}

/// `R` as a [`BruhatImage`], for the relation suite.
pub struct DataImage<'a>(pub &'a AbstractData);

impl BruhatImage for DataImage<'_> {
    type Value = Operator;
    fn omega(&self) -> Operator {
        R_on_bruhat(self.0, &Bruhat::Omega).expect("omega")
    }
    fn h(&self, t: &Mat) -> Operator {
        R_on_bruhat(self.0, &Bruhat::H(t.clone())).expect("unit parameter")
    }
    fn u(&self, r: &Mat) -> Operator {
        R_on_bruhat(self.0, &Bruhat::U(r.clone())).expect("epsilon-symmetric parameter")
    }
    fn mul(&self, x: &Operator, y: &Operator) -> Operator {
        x.mul(y)
    }
    fn same(&self, x: &Operator, y: &Operator) -> bool {
        x.same(y)
    }
}

/// (R1)–(R6) for `R`.
pub fn check_r_relations(cfg: &WeilConfig, data: &AbstractData, seed: u64) -> Result<Report> {
    let params = RelationParams::enumerate(cfg.space(), seed)?;
    Ok(check_relations(cfg.space(), &DataImage(data), &params))
}

/// Entrywise `R(g) = W(g)` on `ω`, every `h_t` and every `u_r` (10³ seeded
/// draws of each kind when there are more than 10⁴ parameters).
#[allow(non_snake_case)]
pub fn compare_R_W(cfg: &WeilConfig, data: &AbstractData, seed: u64) -> Result<Check> {
    let (units, syms) = (&data.units, &data.syms);
    let mut gens = vec![Bruhat::Omega];
    let mut check = if units.len() + syms.len() <= EXHAUSTIVE_TUPLES {
        gens.extend(units.iter().cloned().map(Bruhat::H));
        gens.extend(syms.iter().cloned().map(Bruhat::U));
        Check::exhaustive("compare R W")
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..SAMPLES {
            gens.push(Bruhat::H(units[rng.gen_range(0..units.len())].clone()));
            gens.push(Bruhat::U(syms[rng.gen_range(0..syms.len())].clone()));
        }
        Check::sampled("compare R W", seed)
    };
    for g in &gens {
        let r = R_on_bruhat(data, g)?;
        let w = cfg.weil_bruhat(g)?;
        check.record_with(r.same(&w), || format!("{g:?}"));
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Family, RingConfig};

    fn sp2() -> WeilConfig {
        WeilConfig::from_ring(&RingConfig::new(Family::PrimeField, 3), 1, Sign::Minus).unwrap()
    }

    #[test]
    fn canonical_sp2_passes() {
        let cfg = sp2();
        let data = canonical_data(&cfg).unwrap();
        let ax = verify_axioms(&data, 1);
        assert_eq!(ax.checks.len(), 8);
        assert!(ax.all_pass(), "{:?}", ax.failed().collect::<Vec<_>>());
        assert!(lemma_checks(&data, 1).all_pass());
        assert!(compare_R_W(&cfg, &data, 1).unwrap().pass);
        assert!(check_r_relations(&cfg, &data, 1).unwrap().all_pass());
    }

    #[test]
    fn r_on_u1_is_diag() {
        let cfg = sp2();
        let data = canonical_data(&cfg).unwrap();
        let one = cfg.space().matrix_ring().one();
        let u = R_on_bruhat(&data, &Bruhat::U(one.clone())).unwrap();
        let ro = data.roots();
        let want = Operator::diagonal(3, vec![0, ro.zeta(1), ro.zeta(1)]);
        assert!(u.same(&want));
        assert!(R_on_bruhat(&data, &Bruhat::H(one)).unwrap().same(&Operator::identity(3, 3)));
    }

    #[test]
    fn mutations_are_caught() {
        let cfg = sp2();
        let data = canonical_data(&cfg).unwrap();
        let zeta = CycQ::root(3, 1);
        let bad = data.clone().with_f(&data.f().clone() * &zeta);
        let ax = verify_axioms(&bad, 1);
        let failed: Vec<&str> = ax.failed().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["cez", "c"]);
        let triv = data.trivialize_alpha();
        assert!(!compare_R_W(&cfg, &triv, 1).unwrap().pass);
    }
}
