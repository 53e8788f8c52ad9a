//! Matrices over a [`FiniteRing`] and the matrix ring `A = M(m, B)`.

use std::sync::Arc;

use rand::Rng;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, Fp};
use crate::ring::{Elem, Family, FieldElem, FiniteRing};

/// A dense matrix of ring elements, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Elem>) -> Mat {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Mat::from_vec(r, c, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Elem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// The `size × size` sub-block with top-left corner `(i0, j0)`.
    pub fn block(&self, i0: usize, j0: usize, size: usize) -> Mat {
        let mut out = Mat::zeros(size, size);
        for i in 0..size {
            for j in 0..size {
                out.set(i, j, self.get(i0 + i, j0 + j));
            }
        }
        out
    }

    /// Splits a `2m × 2m` matrix into its `m × m` blocks `(a, b, c, d)`.
    pub fn quarters(&self) -> (Mat, Mat, Mat, Mat) {
        assert!(self.is_square() && self.rows % 2 == 0);
        let m = self.rows / 2;
        (self.block(0, 0, m), self.block(0, m, m), self.block(m, 0, m), self.block(m, m, m))
    }

    pub fn from_quarters(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
        let m = a.rows;
        let mut out = Mat::zeros(2 * m, 2 * m);
        for i in 0..m {
            for j in 0..m {
                out.set(i, j, a.get(i, j));
                out.set(i, j + m, b.get(i, j));
                out.set(i + m, j, c.get(i, j));
                out.set(i + m, j + m, d.get(i, j));
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

/// Matrix arithmetic over the ring.
impl FiniteRing {
    pub fn mat_identity(&self, n: usize) -> Mat {
        self.mat_scalar(n, self.one())
    }

    pub fn mat_scalar(&self, n: usize, x: Elem) -> Mat {
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            out.set(i, i, x);
        }
        out
    }

    pub fn mat_add(&self, a: &Mat, b: &Mat) -> Mat {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        let data = a.data.iter().zip(&b.data).map(|(&x, &y)| self.add(x, y)).collect();
        Mat { rows: a.rows, cols: a.cols, data }
    }

    pub fn mat_neg(&self, a: &Mat) -> Mat {
        Mat { rows: a.rows, cols: a.cols, data: a.data.iter().map(|&x| self.neg(x)).collect() }
    }

    pub fn mat_sub(&self, a: &Mat, b: &Mat) -> Mat {
        self.mat_add(a, &self.mat_neg(b))
    }

    pub fn mat_mul(&self, a: &Mat, b: &Mat) -> Mat {
        assert_eq!(a.cols, b.rows, "matrix shapes do not compose");
        let mut out = Mat::zeros(a.rows, b.cols);
        for i in 0..a.rows {
            for k in 0..a.cols {
                let x = a.get(i, k);
                if x == 0 {
                    continue;
                }
                for j in 0..b.cols {
                    let y = b.get(k, j);
                    if y != 0 {
                        let cur = out.get(i, j);
                        out.set(i, j, self.add(cur, self.mul(x, y)));
                    }
                }
            }
        }
        out
    }

    /// Left scalar multiple `x · a`.
    pub fn mat_lscale(&self, x: Elem, a: &Mat) -> Mat {
        Mat { rows: a.rows, cols: a.cols, data: a.data.iter().map(|&y| self.mul(x, y)).collect() }
    }

    /// Conjugate transpose: `(x*)_{ij} = (x_{ji})*`.
    pub fn mat_star(&self, a: &Mat) -> Mat {
        let mut out = Mat::zeros(a.cols, a.rows);
        for i in 0..a.rows {
            for j in 0..a.cols {
                out.set(j, i, self.star(a.get(i, j)));
            }
        }
        out
    }

    pub fn mat_apply(&self, a: &Mat, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(a.cols, v.len());
        (0..a.rows)
            .map(|i| {
                let mut acc = 0;
                for (j, &x) in v.iter().enumerate() {
                    if x != 0 {
                        acc = self.add(acc, self.mul(a.get(i, j), x));
                    }
                }
                acc
            })
            .collect()
    }

    /// `a* b` for column vectors.
    pub fn dot_star(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| {
            if x == 0 || y == 0 {
                acc
            } else {
                self.add(acc, self.mul(self.star(x), y))
            }
        })
    }

    /// Flattens a matrix over `M(2, F_p)` to one over `F_p` of twice the size.
    pub fn flatten(&self, a: &Mat) -> Vec<Vec<Fp>> {
        assert_eq!(self.family(), Family::Matrix2Adjugate);
        let p = self.p() as u64;
        let mut out = vec![vec![Fp::new(0, p); 2 * a.cols]; 2 * a.rows];
        for i in 0..a.rows {
            for j in 0..a.cols {
                let c = self.coefficients(a.get(i, j));
                for r in 0..2 {
                    for s in 0..2 {
                        out[2 * i + r][2 * j + s] = Fp::new(c[2 * r + s] as i64, p);
                    }
                }
            }
        }
        out
    }

    fn unflatten(&self, rows: &[Vec<Fp>]) -> Mat {
        let n = rows.len() / 2;
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let c = [
                    rows[2 * i][2 * j].v as u32,
                    rows[2 * i][2 * j + 1].v as u32,
                    rows[2 * i + 1][2 * j].v as u32,
                    rows[2 * i + 1][2 * j + 1].v as u32,
                ];
                out.set(i, j, self.encode(&c));
            }
        }
        out
    }

    /// Determinant of the flattened matrix over `F_p` (adjugate family only).
    pub fn flat_determinant(&self, a: &Mat) -> u64 {
        let flat = self.flatten(a);
        let one = Fp::new(1, self.p() as u64);
        linalg::determinant(flat, one).v
    }

    pub fn mat_is_unit(&self, a: &Mat) -> bool {
        assert!(a.is_square());
        if self.family() == Family::Matrix2Adjugate {
            return self.flat_determinant(a) != 0;
        }
        let res = self.residue_field().expect("local ring");
        let rows: Vec<Vec<FieldElem>> = a
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|&x| FieldElem { ring: res, x: self.residue(x) }).collect())
            .collect();
        linalg::rank(&rows) == a.rows
    }

    /// Two-sided inverse of a square matrix.
    ///
    /// Over local rings this is Gauss-Jordan elimination with unit pivots
    /// (all row operations act on the left, so noncommutative bases are fine).
    pub fn mat_invert(&self, a: &Mat) -> Result<Mat> {
        assert!(a.is_square());
        let n = a.rows;
        if self.family() == Family::Matrix2Adjugate {
            let flat = self.flatten(a);
            let p = self.p() as u64;
            let mut aug: Vec<Vec<Fp>> = flat
                .into_iter()
                .enumerate()
                .map(|(i, mut row)| {
                    row.extend((0..2 * n).map(|j| Fp::new((i == j) as i64, p)));
                    row
                })
                .collect();
            let pivots = linalg::row_reduce(&mut aug);
            if pivots.len() < 2 * n || pivots[2 * n - 1] >= 2 * n {
                return Err(Error::NotUnit);
            }
            let inv: Vec<Vec<Fp>> = aug.iter().map(|r| r[2 * n..].to_vec()).collect();
            return Ok(self.unflatten(&inv));
        }
        let mut left = a.clone();
        let mut right = self.mat_identity(n);
        for col in 0..n {
            let pr = (col..n).find(|&i| self.is_unit(left.get(i, col))).ok_or(Error::NotUnit)?;
            if pr != col {
                for j in 0..n {
                    let (x, y) = (left.get(pr, j), left.get(col, j));
                    left.set(pr, j, y);
                    left.set(col, j, x);
                    let (x, y) = (right.get(pr, j), right.get(col, j));
                    right.set(pr, j, y);
                    right.set(col, j, x);
                }
            }
            let inv = self.invert(left.get(col, col))?;
            for j in 0..n {
                left.set(col, j, self.mul(inv, left.get(col, j)));
                right.set(col, j, self.mul(inv, right.get(col, j)));
            }
            for i in 0..n {
                let f = left.get(i, col);
                if i == col || f == 0 {
                    continue;
                }
                for j in 0..n {
                    let l = self.sub(left.get(i, j), self.mul(f, left.get(col, j)));
                    left.set(i, j, l);
                    let r = self.sub(right.get(i, j), self.mul(f, right.get(col, j)));
                    right.set(i, j, r);
                }
            }
        }
        Ok(right)
    }
}

/// The matrix ring `A = M(m, B)` with the conjugate-transpose involution.
#[derive(Clone, Debug)]
pub struct MatrixRing {
    base: Arc<FiniteRing>,
    m: usize,
}

/// Largest matrix ring the enumerators will walk.
pub const ENUMERATION_LIMIT: u64 = 50_000_000;

impl MatrixRing {
    pub fn new(base: Arc<FiniteRing>, m: usize) -> MatrixRing {
        assert!(m >= 1, "matrix rings need m >= 1");
        MatrixRing { base, m }
    }

    pub fn base(&self) -> &FiniteRing {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<FiniteRing> {
        &self.base
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `|A| = |B|^{m²}`, if it fits in a `u64`.
    pub fn size(&self) -> Option<u64> {
        (self.base.size() as u64).checked_pow((self.m * self.m) as u32)
    }

    pub fn zero(&self) -> Mat {
        Mat::zeros(self.m, self.m)
    }

    pub fn one(&self) -> Mat {
        self.base.mat_identity(self.m)
    }

    pub fn scalar(&self, x: Elem) -> Mat {
        self.base.mat_scalar(self.m, x)
    }

    pub fn add(&self, a: &Mat, b: &Mat) -> Mat {
        self.base.mat_add(a, b)
    }

    pub fn sub(&self, a: &Mat, b: &Mat) -> Mat {
        self.base.mat_sub(a, b)
    }

    pub fn neg(&self, a: &Mat) -> Mat {
        self.base.mat_neg(a)
    }

    pub fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        self.base.mat_mul(a, b)
    }

    pub fn star(&self, a: &Mat) -> Mat {
        self.base.mat_star(a)
    }

    pub fn is_unit(&self, a: &Mat) -> bool {
        self.base.mat_is_unit(a)
    }

    pub fn invert(&self, a: &Mat) -> Result<Mat> {
        self.base.mat_invert(a)
    }

    /// The `index`-th element in mixed-radix order (entry `(0,0)` least significant).
    pub fn element(&self, mut index: u64) -> Mat {
        let q = self.base.size() as u64;
        let mut data = Vec::with_capacity(self.m * self.m);
        for _ in 0..self.m * self.m {
            data.push((index % q) as Elem);
            index /= q;
        }
        Mat::from_vec(self.m, self.m, data)
    }

    pub fn index_of(&self, a: &Mat) -> u64 {
        let q = self.base.size() as u64;
        a.data.iter().rev().fold(0, |acc, &x| acc * q + x as u64)
    }

    fn checked_size(&self) -> Result<u64> {
        self.size()
            .filter(|&n| n <= ENUMERATION_LIMIT)
            .ok_or_else(|| Error::ScaleGuard(format!("|M({}, B)| too large to enumerate", self.m)))
    }

    pub fn elements(&self) -> Result<impl Iterator<Item = Mat> + '_> {
        let n = self.checked_size()?;
        Ok((0..n).map(move |i| self.element(i)))
    }

    /// All units of `A`, in element order.
    pub fn units(&self) -> Result<Vec<Mat>> {
        Ok(self.elements()?.filter(|a| self.is_unit(a)).collect())
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> Mat {
        let q = self.base.size() as Elem;
        let data = (0..self.m * self.m).map(|_| rng.gen_range(0..q)).collect();
        Mat::from_vec(self.m, self.m, data)
    }

    pub fn random_unit<R: Rng>(&self, rng: &mut R) -> Mat {
        loop {
            let a = self.random(rng);
            if self.is_unit(&a) {
                return a;
            }
        }
    }

    pub fn is_epsilon_symmetric(&self, r: &Mat, eps: i64) -> bool {
        let s = self.star(r);
        let s = if eps == 1 { s } else { self.neg(&s) };
        self.add(r, &s) == self.zero()
    }

    /// `A^{ε-sym} = {r : r + ε r* = 0}`, in a deterministic order.
    ///
    /// Built directly: diagonal entries range over `{x : x + εx* = 0}`, the
    /// strict upper triangle is free and determines the lower one.
    pub fn epsilon_symmetric(&self, eps: i64) -> Result<Vec<Mat>> {
        let b = &self.base;
        let diag: Vec<Elem> = b
            .elements()
            .filter(|&x| {
                let s = b.star(x);
                b.add(x, if eps == 1 { s } else { b.neg(s) }) == 0
            })
            .collect();
        let m = self.m;
        let upper: Vec<(usize, usize)> =
            (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
        let count = (diag.len() as u64)
            .checked_pow(m as u32)
            .and_then(|n| n.checked_mul((b.size() as u64).checked_pow(upper.len() as u32)?))
            .filter(|&n| n <= ENUMERATION_LIMIT)
            .ok_or_else(|| Error::ScaleGuard("epsilon-symmetric set too large".into()))?;
        let mut out = Vec::with_capacity(count as usize);
        for mut idx in 0..count {
            let mut r = self.zero();
            for i in 0..m {
                r.set(i, i, diag[(idx % diag.len() as u64) as usize]);
                idx /= diag.len() as u64;
            }
            for &(i, j) in &upper {
                let x = (idx % b.size() as u64) as Elem;
                idx /= b.size() as u64;
                r.set(i, j, x);
                // r_ji = -ε r_ij*
                let s = b.star(x);
                r.set(j, i, if eps == 1 { b.neg(s) } else { s });
            }
            debug_assert!(self.is_epsilon_symmetric(&r, eps));
            out.push(r);
        }
        Ok(out)
    }

    /// A uniformly random element of `A^{ε-sym}`.
    pub fn random_epsilon_symmetric<R: Rng>(&self, eps: i64, rng: &mut R) -> Mat {
        // r ↦ (r - ε r*)/2 projects A onto A^{ε-sym} with uniform fibres.
        let b = &self.base;
        let half = b.invert(b.from_int(2)).expect("2 is a unit");
        let r = self.random(rng);
        let s = self.star(&r);
        let s = if eps == 1 { self.neg(&s) } else { s };
        b.mat_lscale(half, &self.add(&r, &s))
    }
}
