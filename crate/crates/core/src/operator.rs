//! Exact square operators on `X = C[B^m]` with cyclotomic entries.
//!
//! An operator is a scalar in `Q(ζ)` times an integral body. The body is
//! either monomial (one signed root of unity per column) or dense (every
//! entry a reduced vector over `Z[ζ]`). Products keep monomial factors
//! sparse and pull integer content out of dense results into the scalar.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cyclotomic::{phi, reduce_in_place, RootCode, Roots};
use crate::CycQ;

#[derive(Clone, Debug, PartialEq)]
enum Body {
    /// Column `j` is `±ζ^e e_{perm[j]}` with the sign and exponent in `codes[j]`.
    Monomial { perm: Vec<u32>, codes: Vec<RootCode> },
    /// Row-major; entry `(i, j)` occupies `data[(i·dim + j)·φ ..][..φ]`.
    Dense { data: Vec<i64> },
}

#[derive(Clone, Debug)]
pub struct Operator {
    order: u32,
    dim: usize,
    scale: CycQ,
    body: Body,
}

/// A reduced element of `Z[ζ]` as `i128` coefficients, for scaled comparisons.
fn integral_coeffs(x: &CycQ) -> (Vec<i128>, i128) {
    let (num, den) = x.to_integral();
    let coeffs = num
        .coeffs()
        .iter()
        .map(|c| c.to_i128().expect("scale numerator fits in i128"))
        .collect();
    (coeffs, den.to_i128().expect("scale denominator fits in i128"))
}

impl Operator {
    pub fn monomial(order: u32, perm: Vec<u32>, codes: Vec<RootCode>) -> Operator {
        assert_eq!(perm.len(), codes.len());
        let dim = perm.len();
        Operator { order, dim, scale: CycQ::one(order), body: Body::Monomial { perm, codes } }
    }

    pub fn identity(order: u32, dim: usize) -> Operator {
        Operator::monomial(order, (0..dim as u32).collect(), vec![0; dim])
    }

    pub fn diagonal(order: u32, codes: Vec<RootCode>) -> Operator {
        Operator::monomial(order, (0..codes.len() as u32).collect(), codes)
    }

    /// Dense operator with entry `(i, j)` given by `f(i, j)` as a signed root or zero.
    pub fn from_codes(order: u32, dim: usize, f: impl Fn(usize, usize) -> Option<RootCode>) -> Operator {
        let ph = phi(order);
        let roots = Roots::new(order);
        let mut data = vec![0i64; dim * dim * ph];
        let mut full = vec![0i64; order as usize];
        for i in 0..dim {
            for j in 0..dim {
                if let Some(c) = f(i, j) {
                    full.iter_mut().for_each(|x| *x = 0);
                    roots.accumulate(&mut full, c, 1);
                    reduce_in_place(order, &mut full);
                    data[(i * dim + j) * ph..][..ph].copy_from_slice(&full[..ph]);
                }
            }
        }
        Operator { order, dim, scale: CycQ::one(order), body: Body::Dense { data } }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scale(&self) -> &CycQ {
        &self.scale
    }

    pub fn is_monomial(&self) -> bool {
        matches!(self.body, Body::Monomial { .. })
    }

    /// For monomial operators, the permutation and root codes of the body.
    pub fn monomial_parts(&self) -> Option<(&[u32], &[RootCode])> {
        match &self.body {
            Body::Monomial { perm, codes } => Some((perm, codes)),
            Body::Dense { .. } => None,
        }
    }

    pub fn scaled(mut self, s: &CycQ) -> Operator {
        self.scale = &self.scale * s;
        self
    }

    fn phi(&self) -> usize {
        phi(self.order)
    }

    fn dense_data(&self) -> Vec<i64> {
        match &self.body {
            Body::Dense { data } => data.clone(),
            Body::Monomial { perm, codes } => {
                let ph = self.phi();
                let d = self.dim;
                let roots = Roots::new(self.order);
                let mut data = vec![0i64; d * d * ph];
                let mut full = vec![0i64; self.order as usize];
                for (j, (&i, &c)) in perm.iter().zip(codes).enumerate() {
                    full.iter_mut().for_each(|x| *x = 0);
                    roots.accumulate(&mut full, c, 1);
                    reduce_in_place(self.order, &mut full);
                    data[(i as usize * d + j) * ph..][..ph].copy_from_slice(&full[..ph]);
                }
                data
            }
        }
    }

    /// The same operator with a dense body.
    pub fn to_dense(&self) -> Operator {
        Operator {
            order: self.order,
            dim: self.dim,
            scale: self.scale.clone(),
            body: Body::Dense { data: self.dense_data() },
        }
    }

    /// Entry `(i, j)` of the body, reduced.
    fn body_entry(&self, i: usize, j: usize) -> Vec<i64> {
        let ph = self.phi();
        match &self.body {
            Body::Dense { data } => data[(i * self.dim + j) * ph..][..ph].to_vec(),
            Body::Monomial { perm, codes } => {
                let mut full = vec![0i64; self.order as usize];
                if perm[j] as usize == i {
                    Roots::new(self.order).accumulate(&mut full, codes[j], 1);
                    reduce_in_place(self.order, &mut full);
                }
                full.truncate(ph);
                full
            }
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> CycQ {
        let c = crate::Cyc::from_reduced(self.order, self.body_entry(i, j)).expect("valid order");
        &CycQ::from_integer_cyc(&c) * &self.scale
    }

    pub fn trace(&self) -> CycQ {
        let ph = self.phi();
        let mut acc = vec![0i64; ph];
        for i in 0..self.dim {
            for (a, b) in acc.iter_mut().zip(self.body_entry(i, i)) {
                *a += b;
            }
        }
        let c = crate::Cyc::from_reduced(self.order, acc).expect("valid order");
        &CycQ::from_integer_cyc(&c) * &self.scale
    }

    pub fn mul(&self, other: &Operator) -> Operator {
        assert_eq!(self.order, other.order, "operator order mismatch");
        assert_eq!(self.dim, other.dim, "operator dimension mismatch");
        let scale = &self.scale * &other.scale;
        let roots = Roots::new(self.order);
        let d = self.dim;
        let body = match (&self.body, &other.body) {
            (Body::Monomial { perm: pa, codes: ca }, Body::Monomial { perm: pb, codes: cb }) => {
                let perm = pb.iter().map(|&k| pa[k as usize]).collect();
                let codes = pb.iter().zip(cb).map(|(&k, &c)| roots.mul(c, ca[k as usize])).collect();
                Body::Monomial { perm, codes }
            }
            (Body::Dense { data }, Body::Monomial { perm, codes }) => {
                let ph = self.phi();
                let mut out = vec![0i64; d * d * ph];
                let table = self.rotation_table();
                for i in 0..d {
                    for j in 0..d {
                        let k = perm[j] as usize;
                        let src = &data[(i * d + k) * ph..][..ph];
                        let dst = &mut out[(i * d + j) * ph..][..ph];
                        Self::rotate_into(&table, ph, src, codes[j], dst);
                    }
                }
                Body::Dense { data: out }
            }
            (Body::Monomial { perm, codes }, Body::Dense { data }) => {
                let ph = self.phi();
                let mut out = vec![0i64; d * d * ph];
                let table = self.rotation_table();
                for k in 0..d {
                    let i = perm[k] as usize;
                    for j in 0..d {
                        let src = &data[(k * d + j) * ph..][..ph];
                        let dst = &mut out[(i * d + j) * ph..][..ph];
                        Self::rotate_into(&table, ph, src, codes[k], dst);
                    }
                }
                Body::Dense { data: out }
            }
            (Body::Dense { data: a }, Body::Dense { data: b }) => Body::Dense { data: self.dense_product(a, b) },
        };
        let dense_both = matches!((&self.body, &other.body), (Body::Dense { .. }, Body::Dense { .. }));
        let mut out = Operator { order: self.order, dim: d, scale, body };
        // Multiplying by a monomial operator cannot change the integer content.
        if dense_both {
            out.extract_content();
        }
        out
    }

    /// For every root code `c`, the `φ×φ` integer matrix of `x ↦ c·x` on reduced
    /// coefficients; entry `(c, i, j)` is the coefficient of `ζ^i` in `c·ζ^j`.
    fn rotation_table(&self) -> Vec<i64> {
        let ph = self.phi();
        let n = self.order as usize;
        let roots = Roots::new(self.order);
        let mut table = vec![0i64; 2 * n * ph * ph];
        let mut full = vec![0i64; n];
        for c in 0..2 * n as u32 {
            for j in 0..ph {
                full.iter_mut().for_each(|x| *x = 0);
                roots.accumulate(&mut full, roots.mul(c, roots.zeta(j as u32)), 1);
                reduce_in_place(self.order, &mut full);
                for i in 0..ph {
                    table[(c as usize * ph + i) * ph + j] = full[i];
                }
            }
        }
        table
    }

    #[inline]
    fn rotate_into(table: &[i64], ph: usize, src: &[i64], code: RootCode, dst: &mut [i64]) {
        let rot = &table[code as usize * ph * ph..][..ph * ph];
        for i in 0..ph {
            dst[i] = (0..ph).map(|j| rot[i * ph + j] * src[j]).sum();
        }
    }

    fn dense_product(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let d = self.dim;
        let ph = self.phi();
        let n = self.order as usize;
        let max_a = a.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as u128;
        let max_b = b.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as u128;
        // Worst case of one unreduced coefficient, and after reduction.
        let bound = max_a * max_b * (d as u128) * (ph as u128) * (n as u128);
        assert!(bound < (i64::MAX as u128) / 2, "operator coefficients would overflow");
        // One integer matrix per power of ζ; products of planes land in plane
        // (s + t) mod n. Doubles are exact below 2^53.
        let planes = |x: &[i64]| -> Vec<Vec<f64>> {
            (0..ph).map(|s| (0..d * d).map(|idx| x[idx * ph + s] as f64).collect()).collect()
        };
        let out_planes: Vec<Vec<i64>> = if bound < 1 << 52 {
            let (pa, pb) = (planes(a), planes(b));
            let mut pc = vec![vec![0f64; d * d]; n];
            for (s, x) in pa.iter().enumerate() {
                if x.iter().all(|&v| v == 0.0) {
                    continue;
                }
                for (t, y) in pb.iter().enumerate() {
                    if y.iter().all(|&v| v == 0.0) {
                        continue;
                    }
                    matmul_acc(x, y, &mut pc[(s + t) % n], d);
                }
            }
            pc.into_iter().map(|p| p.into_iter().map(|v| v as i64).collect()).collect()
        } else {
            let split = |x: &[i64]| -> Vec<Vec<i64>> {
                (0..ph).map(|s| (0..d * d).map(|idx| x[idx * ph + s]).collect()).collect()
            };
            let (pa, pb) = (split(a), split(b));
            let mut pc = vec![vec![0i64; d * d]; n];
            for (s, x) in pa.iter().enumerate() {
                for (t, y) in pb.iter().enumerate() {
                    matmul_acc(x, y, &mut pc[(s + t) % n], d);
                }
            }
            pc
        };
        let mut out = vec![0i64; d * d * ph];
        let mut full = vec![0i64; n];
        for idx in 0..d * d {
            for (u, plane) in out_planes.iter().enumerate() {
                full[u] = plane[idx];
            }
            reduce_in_place(self.order, &mut full);
            out[idx * ph..][..ph].copy_from_slice(&full[..ph]);
        }
        out
    }

    /// Moves the gcd of all dense coefficients into the scalar.
    fn extract_content(&mut self) {
        if let Body::Dense { data } = &mut self.body {
            let mut g = 0i64;
            for &x in data.iter() {
                g = g.gcd(&x);
                if g == 1 {
                    return;
                }
            }
            if g > 1 {
                data.iter_mut().for_each(|x| *x /= g);
                self.scale = self.scale.scale(&num_rational::BigRational::from_integer(BigInt::from(g)));
            }
        }
    }

    /// Exact equality of the operators `scale · body`.
    pub fn same(&self, other: &Operator) -> bool {
        if self.order != other.order || self.dim != other.dim {
            return false;
        }
        if self.scale == other.scale && !self.scale.is_zero() {
            return match (&self.body, &other.body) {
                (Body::Dense { data: a }, Body::Dense { data: b }) => a == b,
                (Body::Monomial { .. }, Body::Monomial { .. }) => self.body == other.body,
                _ => self.dense_data() == other.dense_data(),
            };
        }
        let (sa, da) = integral_coeffs(&self.scale);
        let (sb, db) = integral_coeffs(&other.scale);
        // self == other  iff  db·sa·self.body == da·sb·other.body
        let lhs: Vec<i128> = sa.iter().map(|x| x * db).collect();
        let rhs: Vec<i128> = sb.iter().map(|x| x * da).collect();
        let n = self.order as usize;
        let ph = self.phi();
        let times = |k: &[i128], e: &[i64]| -> Vec<i128> {
            let mut full = vec![0i128; n];
            for (s, &x) in k.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (t, &y) in e.iter().enumerate() {
                    full[(s + t) % n] += x * y as i128;
                }
            }
            reduce_i128(self.order, &mut full);
            full.truncate(ph);
            full
        };
        match (&self.body, &other.body) {
            (Body::Monomial { perm: pa, .. }, Body::Monomial { perm: pb, .. }) => {
                pa == pb
                    && (0..self.dim).all(|j| {
                        let i = pa[j] as usize;
                        times(&lhs, &self.body_entry(i, j)) == times(&rhs, &other.body_entry(i, j))
                    })
            }
            _ => {
                let a = self.dense_data();
                let b = other.dense_data();
                a.chunks(ph).zip(b.chunks(ph)).all(|(x, y)| times(&lhs, x) == times(&rhs, y))
            }
        }
    }

    /// A copy with entry `(i, j)` of the body increased by one.
    pub fn perturbed(&self, i: usize, j: usize) -> Operator {
        let mut data = self.dense_data();
        data[(i * self.dim + j) * self.phi()] += 1;
        Operator { order: self.order, dim: self.dim, scale: self.scale.clone(), body: Body::Dense { data } }
    }

    pub fn rows(&self) -> Vec<Vec<CycQ>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.entry(i, j)).collect()).collect()
    }
}

/// `c += a · b` for row-major `d×d` matrices.
fn matmul_acc<T>(a: &[T], b: &[T], c: &mut [T], d: usize)
where
    T: Copy + PartialEq + Default + std::ops::Mul<Output = T> + std::ops::AddAssign,
{
    let zero = T::default();
    for i in 0..d {
        let crow = &mut c[i * d..(i + 1) * d];
        for k in 0..d {
            let x = a[i * d + k];
            if x == zero {
                continue;
            }
            for (cj, &bj) in crow.iter_mut().zip(&b[k * d..(k + 1) * d]) {
                *cj += x * bj;
            }
        }
    }
}

fn reduce_i128(order: u32, full: &mut [i128]) {
    let (p, _) = crate::cyclotomic::odd_prime_power(order).expect("valid order");
    let n = order as usize;
    let block = n / p as usize;
    let ph = n - block;
    for e in (ph..n).rev() {
        let c = std::mem::take(&mut full[e]);
        if c == 0 {
            continue;
        }
        let r = e - ph;
        for j in 0..p as usize - 1 {
            full[j * block + r] -= c;
        }
    }
}

impl PartialEq for Operator {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Serialize for Operator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Operator", 2)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("entries", &self.rows())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Naive product of explicit entry tables.
    fn naive(a: &Operator, b: &Operator) -> Vec<Vec<CycQ>> {
        let (ra, rb) = (a.rows(), b.rows());
        let d = a.dim();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).fold(CycQ::zero(a.order()), |acc, k| &acc + &(&ra[i][k] * &rb[k][j])))
                    .collect()
            })
            .collect()
    }

    fn random_op(rng: &mut ChaCha8Rng, order: u32, d: usize, dense: bool) -> Operator {
        let modulus = 2 * order;
        let op = if dense {
            let codes: Vec<Option<u32>> =
                (0..d * d).map(|_| rng.gen_bool(0.7).then(|| rng.gen_range(0..modulus))).collect();
            Operator::from_codes(order, d, |i, j| codes[i * d + j])
        } else {
            let mut perm: Vec<u32> = (0..d as u32).collect();
            for i in (1..d).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            Operator::monomial(order, perm, (0..d).map(|_| rng.gen_range(0..modulus)).collect())
        };
        let s = CycQ::root(order, rng.gen_range(0..order as i64))
            .scale(&BigRational::new(BigInt::from(rng.gen_range(1..5)), BigInt::from(rng.gen_range(1..5))));
        op.scaled(&s)
    }

    #[test]
    fn products_match_naive_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for order in [3, 9, 5] {
            for (da, db) in [(true, true), (true, false), (false, true), (false, false)] {
                let a = random_op(&mut rng, order, 4, da);
                let b = random_op(&mut rng, order, 4, db);
                let ab = a.mul(&b);
                assert_eq!(ab.rows(), naive(&a, &b));
            }
        }
    }

    #[test]
    fn equality_ignores_representation() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = random_op(&mut rng, 9, 5, false);
        assert!(a.same(&a.to_dense()));
        let two = CycQ::from_i64(9, 2);
        let half = CycQ::from_i64(9, 2).inv().unwrap();
        let b = a.clone().scaled(&two).mul(&Operator::identity(9, 5).scaled(&half));
        assert!(a.same(&b));
        assert!(!a.same(&a.perturbed(0, 0)));
        assert!(!a.same(&a.clone().scaled(&CycQ::root(9, 1))));
    }

    #[test]
    fn trace_and_identity() {
        let id = Operator::identity(3, 3);
        assert_eq!(id.trace(), CycQ::from_i64(3, 3));
        let z = Operator::diagonal(3, vec![0, 2, 4]);
        // 1 + ζ + ζ² = 0
        assert!(z.trace().is_zero());
        assert_eq!(z.mul(&z).mul(&z), Operator::identity(3, 3));
    }

    #[test]
    fn content_moves_into_scale() {
        let d = 3;
        // all-ones matrix squared is 3 times itself
        let j = Operator::from_codes(3, d, |_, _| Some(0));
        let jj = j.mul(&j);
        assert_eq!(jj, j.clone().scaled(&CycQ::from_i64(3, 3)));
        assert_eq!(jj.scale(), &CycQ::from_i64(3, 3));
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(Operator::identity(3, 2)).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["entries"][0][0]["order"], 3);
    }
}
