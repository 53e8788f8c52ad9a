//! Dense linear algebra over an arbitrary field.
//!
//! Field elements carry their own context (a modulus, a cyclotomic order),
//! so zero and one are produced from an existing element.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclotomic::Cyclotomic;

pub trait Field: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn neg(&self) -> Self {
        self.zero_like().sub(self)
    }
}

/// Integers modulo a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Fp {
        Fp { v: v.rem_euclid(p as i64) as u64, p }
    }
}

impl Field for Fp {
    fn zero_like(&self) -> Self {
        Fp { v: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Fp { v: 1, p: self.p }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn add(&self, o: &Self) -> Self {
        Fp { v: (self.v + o.v) % self.p, p: self.p }
    }
    fn sub(&self, o: &Self) -> Self {
        Fp { v: (self.v + self.p - o.v) % self.p, p: self.p }
    }
    fn mul(&self, o: &Self) -> Self {
        Fp { v: self.v * o.v % self.p, p: self.p }
    }
    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        let (mut base, mut e, mut acc) = (self.v, self.p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        Some(Fp { v: acc, p: self.p })
    }
}

impl Field for Cyclotomic<BigRational> {
    fn zero_like(&self) -> Self {
        Cyclotomic::zero(self.order())
    }
    fn one_like(&self) -> Self {
        Cyclotomic::one(self.order())
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Option<Self> {
        Cyclotomic::inv(self)
    }
}

/// Plain rationals, mostly for tests.
impl Field for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(BigRational::one() / self)
        }
    }
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Reduces `rows` to reduced row echelon form in place and returns the pivot columns.
pub fn row_reduce<F: Field>(rows: &mut [Vec<F>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][col].inv().expect("nonzero field element");
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = x.sub(&f.mul(y));
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(rows: &[Vec<F>]) -> usize {
    row_reduce(&mut rows.to_vec()).len()
}

/// Determinant by elimination; `one` supplies the field context for the empty matrix.
pub fn determinant<F: Field>(mut rows: Vec<Vec<F>>, one: F) -> F {
    let n = rows.len();
    let mut det = one;
    for col in 0..n {
        let Some(pr) = (col..n).find(|&i| !rows[i][col].is_zero()) else {
            return det.zero_like();
        };
        if pr != col {
            rows.swap(pr, col);
            det = det.neg();
        }
        let pivot = rows[col][col].clone();
        det = det.mul(&pivot);
        let inv = pivot.inv().expect("nonzero field element");
        for i in col + 1..n {
            if rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].mul(&inv);
            for j in col..n {
                let t = f.mul(&rows[col][j]);
                rows[i][j] = rows[i][j].sub(&t);
            }
        }
    }
    det
}

/// Basis of `{x : A x = 0}`; `zero` supplies the field context.
pub fn null_space<F: Field>(rows: &[Vec<F>], ncols: usize, zero: &F) -> Vec<Vec<F>> {
    let mut reduced = rows.to_vec();
    let pivots = row_reduce(&mut reduced);
    let one = zero.one_like();
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![zero.clone(); ncols];
            v[fc] = one.clone();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = reduced[r][fc].neg();
            }
            v
        })
        .collect()
}
