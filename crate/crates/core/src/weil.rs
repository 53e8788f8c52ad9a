//! The sign character `μ`, generalized Gauss sums and the Weil operators:
//! closed formulas on Bruhat elements, the projective operators `P(g_T)`,
//! and the fixed-vector construction of `W(g)` for arbitrary isometries.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::character::{AdditiveCharacter, Sign};
use crate::cyclotomic::{embed_complex, RootCode, Roots};
use crate::error::{Error, Result};
use crate::heisenberg::{self, u_act, HeisenbergElement, Schrodinger};
use crate::hermitian::{Bruhat, BruhatImage, Columns, HermitianSpace};
use crate::linalg::determinant;
use crate::matrix::Mat;
use crate::operator::Operator;
use crate::report::{Check, Report};
use crate::ring::{build_ring, Family, FiniteRing, RingConfig};
use crate::{Cyc, CycQ};

/// How the transversal `I ⊂ B^m ∖ {0}` picks one of `{v, -v}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransversalRule {
    /// `v ∈ I` iff `v` precedes `-v` in index order.
    Lexicographic,
    /// `v ∈ I` iff `v` follows `-v`.
    ReverseLexicographic,
}

#[derive(Clone, Debug)]
pub struct Transversal {
    rule: TransversalRule,
    member: Vec<bool>,
    neg: Vec<u32>,
}

impl Transversal {
    pub fn new(cols: &Columns, rule: TransversalRule) -> Transversal {
        let neg: Vec<u32> = (0..cols.dim()).map(|v| cols.neg(v) as u32).collect();
        let member = (0..cols.dim())
            .map(|v| {
                let nv = neg[v] as usize;
                match rule {
                    TransversalRule::Lexicographic => v < nv,
                    TransversalRule::ReverseLexicographic => v > nv,
                }
            })
            .collect();
        Transversal { rule, member, neg }
    }

    pub fn rule(&self) -> TransversalRule {
        self.rule
    }

    pub fn contains(&self, v: usize) -> bool {
        self.member[v]
    }

    pub fn neg(&self, v: usize) -> usize {
        self.neg[v] as usize
    }

    /// Elements of `I` in index order.
    pub fn elements(&self) -> Vec<usize> {
        (0..self.member.len()).filter(|&v| self.member[v]).collect()
    }

    pub fn len(&self) -> usize {
        self.member.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `μ(T) = (-1)^{|I_T|}` with `I_T = {v ∈ I : Tv ∈ -I}`.
pub fn mu(cols: &Columns, tr: &Transversal, t: &Mat) -> Result<i64> {
    if !cols.ring().mat_is_unit(t) {
        return Err(Error::NotUnit);
    }
    Ok(mu_unchecked(cols, tr, t))
}

fn mu_unchecked(cols: &Columns, tr: &Transversal, t: &Mat) -> i64 {
    let flips = tr
        .elements()
        .into_iter()
        .filter(|&v| {
            let tv = cols.apply(t, v);
            tv != 0 && !tr.contains(tv)
        })
        .count();
    if flips % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `G_T = Σ_{b ∈ B^m} β(b* T b)`.
pub fn gauss_sum(cols: &Columns, beta: &AdditiveCharacter, t: &Mat) -> Cyc {
    let mut counts = vec![0i64; beta.order() as usize];
    for b in 0..cols.dim() {
        counts[beta.exponent(cols.quad(t, b, b)) as usize] += 1;
    }
    Cyc::from_counts(beta.order(), &counts)
}

/// `Ĝ(β) = Σ_{b ∈ B} β(b* b)`.
pub fn ghat(beta: &AdditiveCharacter) -> Cyc {
    let r = beta.ring();
    let mut counts = vec![0i64; beta.order() as usize];
    for b in r.elements() {
        counts[beta.exponent(r.mul(r.star(b), b)) as usize] += 1;
    }
    Cyc::from_counts(beta.order(), &counts)
}

/// One row of the classical Gauss-sum table.
#[derive(Clone, Debug, Serialize)]
pub struct GaussRow {
    pub p: u32,
    pub t: u32,
    pub legendre: i64,
    pub nu: u32,
    pub value: Cyc,
    pub re: f64,
    pub im: f64,
}

/// Classical sums `G_t = Σ_{b∈F_p} ζ_p^{t b²}` with the checks
/// `G_t = (t/p) G_1 = (-1)^{ν(t)} G_1`, `G_t² = (-1)^{(p-1)/2} p` and the
/// value of `G_1` in `C`.
pub fn classical_gauss_suite(p: u32) -> Result<(Vec<GaussRow>, Report)> {
    if p > 50 {
        return Err(Error::InvalidConfig(format!("classical suite takes p ≤ 50, got {p}")));
    }
    let ring = build_ring(&RingConfig::new(Family::PrimeField, p))?;
    let pp = p as u64;
    let g = |t: u64| {
        let mut counts = vec![0i64; p as usize];
        for b in 0..pp {
            counts[(t * b * b % pp) as usize] += 1;
        }
        Cyc::from_counts(p, &counts)
    };
    let g1 = g(1);
    let half = (pp - 1) / 2;
    let mut rows = Vec::new();
    let mut gaus2 = Check::exhaustive(format!("gaus2 p={p}"));
    let mut gaus3 = Check::exhaustive(format!("gaus3 p={p}"));
    let mut parity = Check::exhaustive(format!("nu parity p={p}"));
    let sign = if half % 2 == 0 { 1 } else { -1 };
    for t in 1..pp {
        let e = ring.pow(t as u32, half) as u64;
        let legendre = if e == 1 { 1 } else { -1 };
        let nu = (1..=half).filter(|&j| (1..=half).any(|k| (t * j + k) % pp == 0)).count() as u32;
        let gt = g(t);
        parity.record_with((if nu % 2 == 0 { 1 } else { -1 }) == legendre, || format!("t = {t}"));
        gaus2.record_with(gt == g1.scale(&legendre), || format!("t = {t}"));
        gaus3.record_with(&gt * &gt == Cyc::from_i64(p, sign * p as i64), || format!("t = {t}"));
        let z = embed_complex(&gt)?;
        rows.push(GaussRow { p, t: t as u32, legendre, nu, value: gt, re: z.re, im: z.im });
    }
    let z = embed_complex(&g1)?;
    let root = (p as f64).sqrt();
    let (re, im) = if p % 4 == 1 { (root, 0.0) } else { (0.0, root) };
    let gaus1 = Check::fact(format!("gaus1 p={p}"), (z.re - re).abs() < 1e-9 && (z.im - im).abs() < 1e-9)
        .with_detail(format!("G_1 = {:.12} + {:.12}i", z.re, z.im));
    let mut report = Report::new();
    report.push(gaus1);
    report.push(gaus2);
    report.push(gaus3);
    report.push(parity);
    Ok((rows, report))
}

/// A space with an admissible character, ready for Weil operators.
#[derive(Clone, Debug)]
pub struct WeilConfig {
    space: HermitianSpace,
    beta: AdditiveCharacter,
    cols: Columns,
    transversal: Transversal,
    f: CycQ,
}

impl WeilConfig {
    /// Checks primitivity and `β(b + εb*) = 1` for `β` and the parity condition on `m`.
    pub fn new(space: HermitianSpace, beta: AdditiveCharacter) -> Result<WeilConfig> {
        if space.eps() == Sign::Plus && space.m() % 2 == 1 {
            return Err(Error::OddHermitianRank(space.m()));
        }
        if beta.check_epsilon(space.eps()).is_err() || !beta.check_primitive().is_primitive() {
            return Err(Error::CharacterNotFound);
        }
        Self::new_unchecked(space, beta)
    }

    /// Skips the admissibility checks on `β`; only for demonstrating what
    /// breaks without them.
    pub fn new_unchecked(space: HermitianSpace, beta: AdditiveCharacter) -> Result<WeilConfig> {
        let cols = Columns::new(space.ring_arc().clone(), space.m())?;
        let transversal = Transversal::new(&cols, TransversalRule::Lexicographic);
        let order = beta.order();
        let size = cols.dim() as i64;
        let f = match space.eps() {
            Sign::Minus => {
                let g = CycQ::from_integer_cyc(&ghat(&beta)).inv().ok_or(Error::NotUnit)?.pow(space.m() as u32);
                if ((size - 1) / 2) % 2 == 0 {
                    g
                } else {
                    -g
                }
            }
            Sign::Plus => {
                let q = BigInt::from(space.ring().size()).pow(space.m() as u32 / 2);
                CycQ::from_scalar(order, BigRational::new(BigInt::from(1), q))
            }
        };
        Ok(WeilConfig { space, beta, cols, transversal, f })
    }

    /// Builds the space and the character from a ring config.
    pub fn from_ring(config: &RingConfig, m: usize, eps: Sign) -> Result<WeilConfig> {
        let ring = std::sync::Arc::new(build_ring(config)?);
        let beta = crate::character::find_character(&ring, eps)?;
        WeilConfig::new(HermitianSpace::new(ring, m, eps), beta)
    }

    pub fn space(&self) -> &HermitianSpace {
        &self.space
    }

    pub fn ring(&self) -> &FiniteRing {
        self.space.ring()
    }

    pub fn beta(&self) -> &AdditiveCharacter {
        &self.beta
    }

    pub fn columns(&self) -> &Columns {
        &self.cols
    }

    pub fn transversal(&self) -> &Transversal {
        &self.transversal
    }

    pub fn with_transversal(mut self, rule: TransversalRule) -> WeilConfig {
        self.transversal = Transversal::new(&self.cols, rule);
        self
    }

    pub fn dim(&self) -> usize {
        self.cols.dim()
    }

    pub fn order(&self) -> u32 {
        self.beta.order()
    }

    pub fn roots(&self) -> Roots {
        self.beta.roots()
    }

    /// The normalization `f` of `W(ω)`.
    pub fn f(&self) -> &CycQ {
        &self.f
    }

    pub fn with_f(mut self, f: CycQ) -> WeilConfig {
        self.f = f;
        self
    }

    pub fn schrodinger(&self) -> Schrodinger<'_> {
        Schrodinger::new(&self.space, &self.beta).expect("columns already built")
    }

    pub fn mu(&self, t: &Mat) -> Result<i64> {
        if !self.space.matrix_ring().is_unit(t) {
            return Err(Error::NotUnit);
        }
        Ok(mu_unchecked(&self.cols, &self.transversal, t))
    }

    pub fn gauss_sum(&self, t: &Mat) -> Cyc {
        gauss_sum(&self.cols, &self.beta, t)
    }

    fn sign_code(&self, s: i64) -> RootCode {
        self.roots().sign(s < 0)
    }

    /// `W(h_T) e_a = μ(T) e_{(T*)⁻¹ a}`.
    pub fn w_h(&self, t: &Mat) -> Result<Operator> {
        let a = self.space.matrix_ring();
        let tsi = a.invert(&a.star(t))?;
        let code = self.sign_code(self.mu(t)?);
        Ok(Operator::monomial(self.order(), self.cols.permutation(&tsi), vec![code; self.dim()]))
    }

    /// `W(u_S) e_a = β(-ε a* S a) e_a`.
    pub fn w_u(&self, s: &Mat) -> Result<Operator> {
        if !self.space.matrix_ring().is_epsilon_symmetric(s, self.space.eps().value()) {
            return Err(Error::NotEpsilonSymmetric(format!("{:?}", s.to_rows())));
        }
        let r = self.ring();
        let eps = self.space.eps().negate();
        let codes = (0..self.dim()).map(|a| self.beta.code(eps.apply(r, self.cols.quad(s, a, a)))).collect();
        Ok(Operator::diagonal(self.order(), codes))
    }

    /// `W(ω) e_a = f Σ_b β(2 a* b) e_b`.
    pub fn w_omega(&self) -> Operator {
        self.fourier(1).scaled(&self.f)
    }

    /// The operator `e_a ↦ Σ_b β(2 s a* b) e_b` for `s = ±1`.
    fn fourier(&self, s: i64) -> Operator {
        let r = self.ring();
        let two = r.from_int(2 * s);
        Operator::from_codes(self.order(), self.dim(), |b, a| Some(self.beta.code(r.mul(two, self.cols.dot(a, b)))))
    }

    pub fn weil_bruhat(&self, g: &Bruhat) -> Result<Operator> {
        match g {
            Bruhat::Omega => Ok(self.w_omega()),
            Bruhat::H(t) => self.w_h(t),
            Bruhat::U(s) => self.w_u(s),
        }
    }

    /// `g_T = [[1, 0], [T, 1]]`.
    pub fn g_t(&self, t: &Mat) -> Mat {
        let a = self.space.matrix_ring();
        Mat::from_quarters(&a.one(), &a.zero(), t, &a.one())
    }

    /// `ℓ_T = [[0, -T⁻¹], [T, 0]]`.
    pub fn l_t(&self, t: &Mat) -> Result<Mat> {
        let a = self.space.matrix_ring();
        Ok(Mat::from_quarters(&a.zero(), &a.neg(&a.invert(t)?), t, &a.zero()))
    }

    fn check_skew_unit(&self, t: &Mat) -> Result<Mat> {
        let a = self.space.matrix_ring();
        if !a.is_epsilon_symmetric(t, self.space.eps().value()) {
            return Err(Error::NotEpsilonSymmetric(format!("{:?}", t.to_rows())));
        }
        a.invert(t)
    }

    /// `P(g_T)` with entries `β((w-v)*(-εT⁻¹)(w-v))` and `c(g_T) = (Σ_b β(b*(-εT⁻¹)b))⁻¹`.
    pub fn projective_gt(&self, t: &Mat) -> Result<(Operator, CycQ)> {
        let a = self.space.matrix_ring();
        let ti = self.check_skew_unit(t)?;
        let k = match self.space.eps() {
            Sign::Plus => a.neg(&ti),
            Sign::Minus => ti,
        };
        let codes: Vec<RootCode> = (0..self.dim()).map(|x| self.beta.code(self.cols.quad(&k, x, x))).collect();
        let p = Operator::from_codes(self.order(), self.dim(), |w, v| Some(codes[self.cols.sub(w, v)]));
        let sum = CycQ::from_integer_cyc(&gauss_sum(&self.cols, &self.beta, &k));
        let c = sum.inv().expect("the sum defining c(g_T) is nonzero");
        Ok((p, c))
    }

    /// `W(ℓ_T) e_v = c(g_T) Σ_w β(-2 h(k_{T⁻¹} v, w)) e_w`.
    pub fn w_l(&self, t: &Mat) -> Result<Operator> {
        let a = self.space.matrix_ring();
        let ti = self.check_skew_unit(t)?;
        let (_, c) = self.projective_gt(t)?;
        let r = self.ring();
        let tis = a.star(&ti);
        let m2 = r.from_int(-2);
        // h(k_{T⁻¹}(0, a), (0, b)) = (T⁻¹ a)* b = a* (T⁻¹)* b
        let op = Operator::from_codes(self.order(), self.dim(), |b, v| {
            Some(self.beta.code(r.mul(m2, self.cols.quad(&tis, v, b))))
        });
        Ok(op.scaled(&c))
    }

    /// The fixed-vector construction of `W(g)` for any isometry `g`.
    pub fn weil_general(&self, g: &Mat) -> Result<GeneralWeil> {
        if !self.space.is_isometry(g) {
            return Err(Error::NotIsometry);
        }
        let s = self.schrodinger();
        let m = self.space.m();
        let d = self.dim();
        let roots = self.roots();
        let zero = vec![0; m];
        let mut ops = Vec::new();
        for u in self.cols.generators() {
            let v = self.space.join(self.cols.coords(u), &zero);
            ops.push(s.operator(&HeisenbergElement::new(0, self.space.apply(g, &v))));
        }
        let x0 = common_fixed_vector(&ops, d, roots)?;
        // P(g) e_v = S(0, gv) x0 for v ∈ N.
        let mut table: Vec<Option<RootCode>> = vec![None; d * d];
        for a in 0..d {
            let v = self.space.join(&zero, self.cols.coords(a));
            let op = s.operator(&HeisenbergElement::new(0, self.space.apply(g, &v)));
            let (perm, codes) = op.monomial_parts().expect("Schrödinger operators are monomial");
            for z in 0..d {
                if let Some(c) = x0[z] {
                    table[perm[z] as usize * d + a] = Some(roots.mul(c, codes[z]));
                }
            }
        }
        let p = Operator::from_codes(self.order(), d, |i, j| table[i * d + j]);
        let entry = |i: usize, j: usize| match table[i * d + j] {
            Some(c) => roots.to_cyc::<BigRational>(c),
            None => CycQ::zero(self.order()),
        };
        let tr = &self.transversal;
        let mut plus_basis = vec![0usize];
        plus_basis.extend(tr.elements());
        let minus_basis = tr.elements();
        let plus: Vec<Vec<CycQ>> = plus_basis
            .iter()
            .map(|&w| {
                plus_basis
                    .iter()
                    .map(|&v| if v == 0 { entry(w, 0) } else { &entry(w, v) + &entry(w, tr.neg(v)) })
                    .collect()
            })
            .collect();
        let minus: Vec<Vec<CycQ>> = minus_basis
            .iter()
            .map(|&w| minus_basis.iter().map(|&v| &entry(w, v) - &entry(w, tr.neg(v))).collect())
            .collect();
        let one = CycQ::one(self.order());
        let det_plus = determinant(plus, one.clone());
        let det_minus = determinant(minus, one);
        let c = det_minus
            .checked_div(&det_plus)
            .map_err(|_| Error::BrokenConfig("P(g) is singular on X+".into()))?;
        let w = p.clone().scaled(&c);
        Ok(GeneralWeil { p, c, w })
    }

    /// `W(g) S(h) = S(ᵍh) W(g)` over all of `H` when `|H| ≤ 10⁴`, otherwise over
    /// generators of `H` and 10³ random elements.
    pub fn verify_intertwining(&self, g: &Mat, wg: &Operator, seed: u64) -> Check {
        match heisenberg::elements(&self.space) {
            Ok(all) if all.len() <= 10_000 => self.intertwining_on(g, wg, &all, Check::exhaustive("intertwining")),
            _ => {
                let mut hs = self.schrodinger().generators();
                hs.extend(random_heisenberg(&self.space, 1000, seed));
                self.intertwining_on(g, wg, &hs, Check::sampled("intertwining", seed))
            }
        }
    }

    /// `W(g) S(h) = S(ᵍh) W(g)` for each `h` in `hs`, recorded into `c`.
    pub fn intertwining_on(&self, g: &Mat, wg: &Operator, hs: &[HeisenbergElement], mut c: Check) -> Check {
        let s = self.schrodinger();
        for h in hs {
            let lhs = wg.mul(&s.operator(h));
            let rhs = s.operator(&u_act(&self.space, g, h)).mul(wg);
            c.record_with(lhs.same(&rhs), || format!("h = {h:?}"));
        }
        c
    }

    /// Theorems on `Σβ(b*Tb)` and `μ(T) = μ(T*)`.
    pub fn theorem_suite_mu(&self, seed: u64) -> Result<Report> {
        let a = self.space.matrix_ring();
        let mut report = Report::new();
        let size = self.dim() as i64;
        let (units, sampled) = match a.units() {
            Ok(u) if u.len() <= 10_000 => (u, false),
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                ((0..1000).map(|_| a.random_unit(&mut rng)).collect(), true)
            }
        };
        let mk = |name: &str| if sampled { Check::sampled(name, seed) } else { Check::exhaustive(name) };
        let order = self.order();
        match self.space.eps() {
            Sign::Minus => {
                let g1 = self.gauss_sum(&a.one());
                let sign = if ((size - 1) / 2) % 2 == 0 { 1 } else { -1 };
                let mut c82 = mk("mu82");
                let mut c9 = mk("mu9");
                for t in units.iter().filter(|t| a.star(t) == **t) {
                    let gt = self.gauss_sum(t);
                    let gti = self.gauss_sum(&a.invert(t)?);
                    let mu = self.mu(t)?;
                    c82.record_with(gt == gti && gt == g1.scale(&mu), || format!("T = {:?}", t.to_rows()));
                    c9.record_with(&gt * &gt == Cyc::from_i64(order, sign * size), || format!("T = {:?}", t.to_rows()));
                }
                report.push(c82);
                report.push(c9);
            }
            Sign::Plus => {
                let n = self.space.m() / 2;
                let bn = (self.ring().size() as i64).pow(n as u32);
                let mut c89 = mk("mu89");
                for t in units.iter().filter(|t| a.star(t) == a.neg(t)) {
                    let gt = self.gauss_sum(t);
                    let mu = self.mu(t)?;
                    let mu2 = self.mu(&a.neg(&a.invert(t)?))?;
                    let ok = mu == mu2 && gt == Cyc::from_i64(order, mu * bn);
                    c89.record_with(ok, || format!("T = {:?}: G_T = {gt:?}, μ(T) = {mu}, |B|^n = {bn}", t.to_rows()));
                }
                report.push(c89);
                let q = standard_q(a, n);
                let mu_q = self.mu(&a.neg(&q))?;
                report.push(Check::fact("mu(-Q) = 1", mu_q == 1).with_detail(format!("mu(-Q) = {mu_q}")));
                let mu_m1 = self.mu(&a.neg(&a.one()))?;
                report.push(Check::fact("mu(-1) = 1", mu_m1 == 1).with_detail(format!("mu(-1) = {mu_m1}")));
            }
        }
        let mut c55 = mk("mu55");
        for t in &units {
            c55.record_with(self.mu(t)? == self.mu(&a.star(t))?, || format!("T = {:?}", t.to_rows()));
        }
        report.push(c55);
        Ok(report)
    }

    /// `s = [[0, ε], [1, 0]]`.
    pub fn s_element(&self) -> Mat {
        let a = self.space.matrix_ring();
        Mat::from_quarters(&a.zero(), &a.scalar(self.space.eps_elem()), &a.one(), &a.zero())
    }

    /// `c(z)²` for `z = ω` from the general construction, and `P(s)`, `P(ω)`
    /// against their closed formulas up to scalars.
    pub fn normalization_suite(&self) -> Result<Report> {
        let mut report = Report::new();
        let size = self.dim() as i64;
        let order = self.order();
        let expected = match self.space.eps() {
            Sign::Minus if ((size - 1) / 2) % 2 == 1 => -1,
            _ => 1,
        };
        let expected = CycQ::from_scalar(order, BigRational::new(BigInt::from(expected), BigInt::from(size)));
        let gw = self.weil_general(&self.space.omega())?;
        report.push(Check::fact("c(z)^2", &gw.c * &gw.c == expected).with_detail(format!("c = {:?}", gw.c)));
        let ps = self.weil_general(&self.s_element())?.p;
        let formula_s = self.fourier(self.space.eps().value());
        report.push(Check::fact("pu4", proportional(&ps, &formula_s)));
        report.push(Check::fact("tu4", proportional(&gw.p, &self.fourier(1))));
        Ok(report)
    }
}

/// `Q = [[0, -1_n], [1_n, 0]]`.
pub fn standard_q(a: &crate::matrix::MatrixRing, n: usize) -> Mat {
    let r = a.base();
    let mut q = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        q.set(i, n + i, r.neg(r.one()));
        q.set(n + i, i, r.one());
    }
    q
}

/// `x = λ y` for some nonzero scalar `λ`, read off the first nonzero entry of `y`.
pub fn proportional(x: &Operator, y: &Operator) -> bool {
    let d = y.dim();
    for i in 0..d {
        for j in 0..d {
            let yij = y.entry(i, j);
            if !yij.is_zero() {
                let lambda = x.entry(i, j).checked_div(&yij).expect("nonzero");
                return !lambda.is_zero() && x.same(&y.clone().scaled(&lambda));
            }
        }
    }
    false
}

/// Output of the general construction.
#[derive(Clone, Debug)]
pub struct GeneralWeil {
    pub p: Operator,
    pub c: CycQ,
    pub w: Operator,
}

/// The common fixed vector of commuting monomial operators, as root codes
/// (`None` for zero entries), scaled so its first nonzero entry is `1`.
pub fn common_fixed_vector(ops: &[Operator], d: usize, roots: Roots) -> Result<Vec<Option<RootCode>>> {
    let parts: Vec<(&[u32], &[RootCode])> =
        ops.iter().map(|o| o.monomial_parts().expect("monomial operator")).collect();
    let mut code: Vec<Option<RootCode>> = vec![None; d];
    let mut good = Vec::new();
    for start in 0..d {
        if code[start].is_some() {
            continue;
        }
        code[start] = Some(0);
        let mut members = vec![start];
        let mut stack = vec![start];
        let mut consistent = true;
        while let Some(j) = stack.pop() {
            let cj = code[j].unwrap();
            for (perm, codes) in &parts {
                let i = perm[j] as usize;
                let want = roots.mul(codes[j], cj);
                match code[i] {
                    None => {
                        code[i] = Some(want);
                        members.push(i);
                        stack.push(i);
                    }
                    Some(c) if c != want => consistent = false,
                    Some(_) => {}
                }
            }
        }
        if consistent {
            good.push(members);
        }
    }
    if good.len() != 1 {
        return Err(Error::BrokenConfig(format!("common fixed space has dimension {}", good.len())));
    }
    let mut out = vec![None; d];
    for &i in &good[0] {
        out[i] = code[i];
    }
    Ok(out)
}

pub fn random_heisenberg(space: &HermitianSpace, count: usize, seed: u64) -> Vec<HeisenbergElement> {
    use rand::Rng;
    let r = space.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = r.size() as u32;
    (0..count)
        .map(|_| HeisenbergElement::new(rng.gen_range(0..q), (0..2 * space.m()).map(|_| rng.gen_range(0..q)).collect()))
        .collect()
}

/// The closed-form Weil operators as an image of the Bruhat elements.
pub struct WeilImage<'a>(pub &'a WeilConfig);

impl BruhatImage for WeilImage<'_> {
    type Value = Operator;
    fn omega(&self) -> Operator {
        self.0.w_omega()
    }
    fn h(&self, t: &Mat) -> Operator {
        self.0.w_h(t).expect("unit parameter")
    }
    fn u(&self, r: &Mat) -> Operator {
        self.0.w_u(r).expect("epsilon-symmetric parameter")
    }
    fn mul(&self, x: &Operator, y: &Operator) -> Operator {
        x.mul(y)
    }
    fn same(&self, x: &Operator, y: &Operator) -> bool {
        x.same(y)
    }
}

/// `W(ℓ_T)` from its formula against `W(k_{-T⁻¹}) W(g_T) W(k_{-T⁻¹})`, and the matrix identity
/// `k_{-T⁻¹} g_T k_{-T⁻¹} = ℓ_T`.
pub fn check_lt_decomposition(cfg: &WeilConfig, t: &Mat) -> Result<Check> {
    let sp = cfg.space();
    let a = sp.matrix_ring();
    let mti = a.neg(&a.invert(t)?);
    let k = sp.u(&mti)?;
    let lhs = sp.mul(&sp.mul(&k, &cfg.g_t(t)), &k);
    let mut c = Check::exhaustive("ga3");
    c.record_with(lhs == cfg.l_t(t)?, || "matrix identity".into());
    let (p, cg) = cfg.projective_gt(t)?;
    let wk = cfg.w_u(&mti)?;
    let prod = wk.mul(&p.scaled(&cg)).mul(&wk);
    c.record_with(prod.same(&cfg.w_l(t)?), || "operator identity".into());
    Ok(c)
}
