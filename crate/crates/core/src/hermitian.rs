//! The free `ε`-hermitian space `V = M ⊕ N` of rank `2m`, its isometries and
//! the Bruhat elements `ω`, `h_t`, `u_r`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::character::Sign;
use crate::error::{Error, Result};
use crate::matrix::{Mat, MatrixRing};
use crate::report::{Check, Report};
use crate::ring::{Elem, FiniteRing};

/// A Bruhat generator, described by its parameter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "param", rename_all = "snake_case")]
pub enum Bruhat {
    Omega,
    H(Mat),
    U(Mat),
}

/// `V = B^{2m}` (columns) with Gram matrix `J = [[0, 1], [ε, 0]]`.
#[derive(Clone, Debug)]
pub struct HermitianSpace {
    a: MatrixRing,
    eps: Sign,
}

impl HermitianSpace {
    pub fn new(ring: Arc<FiniteRing>, m: usize, eps: Sign) -> HermitianSpace {
        HermitianSpace { a: MatrixRing::new(ring, m), eps }
    }

    pub fn ring(&self) -> &FiniteRing {
        self.a.base()
    }

    pub fn ring_arc(&self) -> &Arc<FiniteRing> {
        self.a.base_arc()
    }

    pub fn matrix_ring(&self) -> &MatrixRing {
        &self.a
    }

    pub fn m(&self) -> usize {
        self.a.m()
    }

    pub fn eps(&self) -> Sign {
        self.eps
    }

    /// `ε` as an element of `B`.
    pub fn eps_elem(&self) -> Elem {
        self.ring().from_int(self.eps.value())
    }

    pub fn gram(&self) -> Mat {
        let r = self.ring();
        let m = self.m();
        Mat::from_quarters(&self.a.zero(), &self.a.one(), &r.mat_scalar(m, self.eps_elem()), &self.a.zero())
    }

    /// `h(u, v) = u* J v`.
    pub fn form(&self, u: &[Elem], v: &[Elem]) -> Elem {
        let r = self.ring();
        let m = self.m();
        let mn = r.dot_star(&u[..m], &v[m..]);
        let nm = r.dot_star(&u[m..], &v[..m]);
        r.add(mn, self.eps.apply(r, nm))
    }

    pub fn identity(&self) -> Mat {
        self.ring().mat_identity(2 * self.m())
    }

    pub fn mul(&self, x: &Mat, y: &Mat) -> Mat {
        self.ring().mat_mul(x, y)
    }

    /// Inverse of an isometry: `X⁻¹ = ε J X* J`.
    pub fn inverse(&self, x: &Mat) -> Mat {
        let r = self.ring();
        let j = self.gram();
        let y = r.mat_mul(&r.mat_mul(&j, &r.mat_star(x)), &j);
        match self.eps {
            Sign::Plus => y,
            Sign::Minus => r.mat_neg(&y),
        }
    }

    pub fn apply(&self, x: &Mat, v: &[Elem]) -> Vec<Elem> {
        self.ring().mat_apply(x, v)
    }

    fn eps_times(&self, a: &Mat) -> Mat {
        match self.eps {
            Sign::Plus => a.clone(),
            Sign::Minus => self.a.neg(a),
        }
    }

    /// The block conditions `a*c = -εc*a`, `b*d = -εd*b`, `d*a + εb*c = 1`.
    pub fn block_conditions(&self, x: &Mat) -> bool {
        let (a, b, c, d) = x.quarters();
        let s = |y: &Mat| self.a.star(y);
        let ac = self.a.mul(&s(&a), &c);
        let ca = self.eps_times(&self.a.mul(&s(&c), &a));
        let bd = self.a.mul(&s(&b), &d);
        let db = self.eps_times(&self.a.mul(&s(&d), &b));
        let da = self.a.mul(&s(&d), &a);
        let bc = self.eps_times(&self.a.mul(&s(&b), &c));
        self.a.add(&ac, &ca) == self.a.zero()
            && self.a.add(&bd, &db) == self.a.zero()
            && self.a.add(&da, &bc) == self.a.one()
    }

    /// `X* J X = J`, cross-checked against the block conditions.
    pub fn is_isometry(&self, x: &Mat) -> bool {
        let m2 = 2 * self.m();
        if x.rows() != m2 || x.cols() != m2 {
            return false;
        }
        let r = self.ring();
        let j = self.gram();
        let direct = r.mat_mul(&r.mat_mul(&r.mat_star(x), &j), x) == j;
        assert_eq!(direct, self.block_conditions(x), "isometry tests disagree");
        direct
    }

    pub fn omega(&self) -> Mat {
        let m = self.m();
        Mat::from_quarters(
            &self.a.zero(),
            &self.a.one(),
            &self.ring().mat_scalar(m, self.eps_elem()),
            &self.a.zero(),
        )
    }

    /// `h_t = diag(t, (t*)⁻¹)`.
    pub fn h(&self, t: &Mat) -> Result<Mat> {
        let inv = self.a.invert(&self.a.star(t))?;
        Ok(Mat::from_quarters(t, &self.a.zero(), &self.a.zero(), &inv))
    }

    /// `u_r = [[1, r], [0, 1]]`.
    pub fn u(&self, r: &Mat) -> Result<Mat> {
        if !self.a.is_epsilon_symmetric(r, self.eps.value()) {
            return Err(Error::NotEpsilonSymmetric(format!("{:?}", r.to_rows())));
        }
        Ok(Mat::from_quarters(&self.a.one(), r, &self.a.zero(), &self.a.one()))
    }

    pub fn bruhat(&self, g: &Bruhat) -> Result<Mat> {
        match g {
            Bruhat::Omega => Ok(self.omega()),
            Bruhat::H(t) => self.h(t),
            Bruhat::U(r) => self.u(r),
        }
    }

    pub fn units(&self) -> Result<Vec<Mat>> {
        self.a.units()
    }

    pub fn epsilon_symmetric(&self) -> Result<Vec<Mat>> {
        self.a.epsilon_symmetric(self.eps.value())
    }

    /// `A^{ε-sym} ∩ A^×`.
    pub fn symmetric_units(&self) -> Result<Vec<Mat>> {
        Ok(self.epsilon_symmetric()?.into_iter().filter(|t| self.a.is_unit(t)).collect())
    }

    /// The element of `V` with coordinates `(x, y) ∈ M ⊕ N`.
    pub fn join(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        let mut v = x.to_vec();
        v.extend_from_slice(y);
        v
    }
}

/// The column module `B^m`, indexed by `Σ a_i |B|^i`.
#[derive(Clone, Debug)]
pub struct Columns {
    ring: Arc<FiniteRing>,
    m: usize,
    dim: usize,
    coords: Vec<Elem>,
}

/// Largest column module the crate will index.
pub const COLUMN_LIMIT: usize = 1 << 20;

impl Columns {
    pub fn new(ring: Arc<FiniteRing>, m: usize) -> Result<Columns> {
        let dim = ring
            .size()
            .checked_pow(m as u32)
            .filter(|&d| d <= COLUMN_LIMIT)
            .ok_or_else(|| Error::ScaleGuard(format!("|B|^{m} too large")))?;
        let q = ring.size();
        let mut coords = Vec::with_capacity(dim * m);
        for idx in 0..dim {
            let mut rest = idx;
            for _ in 0..m {
                coords.push((rest % q) as Elem);
                rest /= q;
            }
        }
        Ok(Columns { ring, m, dim, coords })
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `|B|^m`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> &[Elem] {
        &self.coords[idx * self.m..(idx + 1) * self.m]
    }

    pub fn index(&self, v: &[Elem]) -> usize {
        let q = self.ring.size();
        v.iter().rev().fold(0, |acc, &x| acc * q + x as usize)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let r = &self.ring;
        let q = r.size();
        let (ca, cb) = (self.coords(a), self.coords(b));
        (0..self.m).rev().fold(0, |acc, i| acc * q + r.add(ca[i], cb[i]) as usize)
    }

    pub fn neg(&self, a: usize) -> usize {
        let r = &self.ring;
        let q = r.size();
        let ca = self.coords(a);
        (0..self.m).rev().fold(0, |acc, i| acc * q + r.neg(ca[i]) as usize)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `a* b`.
    pub fn dot(&self, a: usize, b: usize) -> Elem {
        self.ring.dot_star(self.coords(a), self.coords(b))
    }

    /// `a* T b`.
    pub fn quad(&self, t: &Mat, a: usize, b: usize) -> Elem {
        let tb = self.ring.mat_apply(t, self.coords(b));
        self.ring.dot_star(self.coords(a), &tb)
    }

    /// Index of `T a`.
    pub fn apply(&self, t: &Mat, a: usize) -> usize {
        self.index(&self.ring.mat_apply(t, self.coords(a)))
    }

    /// The permutation `a ↦ T a` of indices.
    pub fn permutation(&self, t: &Mat) -> Vec<u32> {
        (0..self.dim).map(|a| self.apply(t, a) as u32).collect()
    }

    /// Additive generators: `x e_i` for each slot generator `x` of `B`.
    pub fn generators(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for g in self.ring.additive_generators() {
                let mut v = vec![0; self.m];
                v[i] = g;
                out.push(self.index(&v));
            }
        }
        out
    }
}

/// Anything the Bruhat elements can be evaluated in: the group itself, or
/// an operator-valued map such as `W` or `R`.
pub trait BruhatImage {
    type Value;
    fn omega(&self) -> Self::Value;
    fn h(&self, t: &Mat) -> Self::Value;
    fn u(&self, r: &Mat) -> Self::Value;
    fn mul(&self, x: &Self::Value, y: &Self::Value) -> Self::Value;
    fn same(&self, x: &Self::Value, y: &Self::Value) -> bool;

    fn product(&self, xs: &[&Self::Value]) -> Self::Value
    where
        Self::Value: Clone,
    {
        let mut acc = xs[0].clone();
        for x in &xs[1..] {
            acc = self.mul(&acc, x);
        }
        acc
    }
}

/// The Bruhat elements as matrices.
pub struct MatrixImage<'a>(pub &'a HermitianSpace);

impl BruhatImage for MatrixImage<'_> {
    type Value = Mat;
    fn omega(&self) -> Mat {
        self.0.omega()
    }
    fn h(&self, t: &Mat) -> Mat {
        self.0.h(t).expect("unit parameter")
    }
    fn u(&self, r: &Mat) -> Mat {
        self.0.u(r).expect("epsilon-symmetric parameter")
    }
    fn mul(&self, x: &Mat, y: &Mat) -> Mat {
        self.0.mul(x, y)
    }
    fn same(&self, x: &Mat, y: &Mat) -> bool {
        x == y
    }
}

/// Parameter sets for the relation suite.
#[derive(Clone, Debug)]
pub struct RelationParams {
    pub units: Vec<Mat>,
    pub syms: Vec<Mat>,
    pub sym_units: Vec<Mat>,
    /// `None` for exhaustive checking, otherwise `(samples, seed)`.
    pub sampling: Option<(usize, u64)>,
}

/// Exhaustive checking is used when a relation has at most this many cases.
pub const EXHAUSTIVE_LIMIT: usize = 10_000;

impl RelationParams {
    /// Enumerated parameter sets; relations with too many cases fall back to sampling.
    pub fn enumerate(space: &HermitianSpace, seed: u64) -> Result<RelationParams> {
        let units = space.units()?;
        let syms = space.epsilon_symmetric()?;
        let a = space.matrix_ring();
        let sym_units = syms.iter().filter(|t| a.is_unit(t)).cloned().collect();
        let big = units.len() * units.len() > EXHAUSTIVE_LIMIT
            || syms.len() * syms.len() > EXHAUSTIVE_LIMIT
            || units.len() * syms.len() > EXHAUSTIVE_LIMIT;
        Ok(RelationParams { units, syms, sym_units, sampling: big.then_some((1000, seed)) })
    }

    /// Random parameters only, for spaces whose unit groups are too large to list.
    pub fn sampled(space: &HermitianSpace, samples: usize, seed: u64) -> Result<RelationParams> {
        let a = space.matrix_ring();
        let eps = space.eps().value();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let units: Vec<Mat> = (0..samples).map(|_| a.random_unit(&mut rng)).collect();
        let syms: Vec<Mat> =
            (0..samples).map(|_| a.random_epsilon_symmetric(eps, &mut rng)).collect();
        let sym_units = match space.symmetric_units() {
            Ok(all) => all,
            Err(_) => syms.iter().filter(|t| a.is_unit(t)).cloned().collect(),
        };
        Ok(RelationParams { units, syms, sym_units, sampling: Some((samples, seed)) })
    }
}

fn pairs<'a>(
    xs: &'a [Mat],
    ys: &'a [Mat],
    sampling: Option<(usize, u64)>,
    salt: u64,
) -> Vec<(&'a Mat, &'a Mat)> {
    use rand::Rng;
    match sampling {
        None => xs.iter().flat_map(|x| ys.iter().map(move |y| (x, y))).collect(),
        Some((n, seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt);
            (0..n)
                .map(|_| (&xs[rng.gen_range(0..xs.len())], &ys[rng.gen_range(0..ys.len())]))
                .collect()
        }
    }
}

fn check_for(name: &str, sampling: Option<(usize, u64)>) -> Check {
    match sampling {
        None => Check::exhaustive(name),
        Some((_, seed)) => Check::sampled(name, seed),
    }
}

/// Checks the relations `(R1)`–`(R6)` in the image `img`.
pub fn check_relations<I: BruhatImage>(
    space: &HermitianSpace,
    img: &I,
    params: &RelationParams,
) -> Report
where
    I::Value: Clone,
{
    let a = space.matrix_ring();
    let r = space.ring();
    let s = params.sampling;
    let mut report = Report::new();

    let mut c = check_for("R1", s);
    for (x, y) in pairs(&params.units, &params.units, s, 1) {
        let ok = img.same(&img.mul(&img.h(x), &img.h(y)), &img.h(&a.mul(x, y)));
        c.record_with(ok, || format!("s = {:?}, t = {:?}", x.to_rows(), y.to_rows()));
    }
    report.push(c);

    let mut c = check_for("R2", s);
    for (x, y) in pairs(&params.syms, &params.syms, s, 2) {
        let ok = img.same(&img.mul(&img.u(x), &img.u(y)), &img.u(&a.add(x, y)));
        c.record_with(ok, || format!("q = {:?}, r = {:?}", x.to_rows(), y.to_rows()));
    }
    report.push(c);

    let mut c = Check::exhaustive("R3");
    let w = img.omega();
    let h_eps = img.h(&a.scalar(space.eps_elem()));
    c.record(img.same(&img.mul(&w, &w), &h_eps));
    report.push(c);

    let mut c = check_for("R4", s);
    for (t, x) in pairs(&params.units, &params.syms, s, 4) {
        let lhs = img.mul(&img.h(t), &img.u(x));
        let trt = a.mul(&a.mul(t, x), &a.star(t));
        let rhs = img.mul(&img.u(&trt), &img.h(t));
        c.record_with(img.same(&lhs, &rhs), || format!("t = {:?}, r = {:?}", t.to_rows(), x.to_rows()));
    }
    report.push(c);

    let mut c = check_for("R5", s);
    let units: Vec<(&Mat, &Mat)> = match s {
        None => params.units.iter().map(|t| (t, t)).collect(),
        Some(_) => pairs(&params.units, &params.units, s, 5),
    };
    for (t, _) in units {
        let lhs = img.mul(&w, &img.h(t));
        let tsi = a.invert(&a.star(t)).expect("unit");
        let rhs = img.mul(&img.h(&tsi), &w);
        c.record_with(img.same(&lhs, &rhs), || format!("t = {:?}", t.to_rows()));
    }
    report.push(c);

    let mut c = match s {
        Some((n, seed)) if params.sym_units.len() > n => Check::sampled("R6", seed),
        _ => Check::exhaustive("R6"),
    };
    let sym_units: Vec<&Mat> = match s {
        Some((n, seed)) if params.sym_units.len() > n => {
            use rand::Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 6);
            (0..n).map(|_| &params.sym_units[rng.gen_range(0..params.sym_units.len())]).collect()
        }
        _ => params.sym_units.iter().collect(),
    };
    for t in sym_units {
        let ti = a.invert(t).expect("unit");
        // -ε t⁻¹
        let q = match space.eps() {
            Sign::Plus => a.neg(&ti),
            Sign::Minus => ti.clone(),
        };
        let ut = img.u(t);
        let lhs = img.product(&[&ut, &w, &img.u(&q), &w, &ut]);
        let rhs = img.mul(&w, &img.h(&a.neg(&ti)));
        c.record_with(img.same(&lhs, &rhs), || format!("t = {:?}", t.to_rows()));
    }
    report.push(c);
    let _ = r;
    report
}
