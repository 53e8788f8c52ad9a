//! Exact arithmetic in `Z[ζ_n]` and `Q(ζ_n)` for odd prime powers `n = p^k`.
//!
//! Values are stored in the reduced power basis `ζ^0, …, ζ^{φ(n)-1}`, which
//! makes equality a plain coefficient comparison. Reduction uses
//! `Φ_n(x) = Σ_{j<p} x^{j·n/p}`, so
//! `ζ^{(p-1)n/p + r} = -Σ_{j<p-1} ζ^{j·n/p + r}` for `r < n/p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Coefficient ring for [`Cyclotomic`]: integers, big integers or rationals.
pub trait Coeff: Clone + Num + Neg<Output = Self> + fmt::Debug {}
impl<T> Coeff for T where T: Clone + Num + Neg<Output = T> + fmt::Debug {}

/// Returns `(p, k)` with `n = p^k` when `n` is a power of an odd prime.
pub fn odd_prime_power(n: u32) -> Option<(u32, u32)> {
    if n < 3 || n % 2 == 0 {
        return None;
    }
    let mut p = 3;
    while p * p <= n && n % p != 0 {
        p += 2;
    }
    let p = if n % p == 0 { p } else { n };
    let (mut rest, mut k) = (n, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Layout {
    n: usize,
    p: usize,
    block: usize,
    phi: usize,
}

impl Layout {
    fn of(order: u32) -> Layout {
        let (p, _) = odd_prime_power(order).expect("order validated at construction");
        let n = order as usize;
        let block = n / p as usize;
        Layout { n, p: p as usize, block, phi: n - block }
    }

    fn reduce<T: Coeff>(&self, mut full: Vec<T>) -> Vec<T> {
        debug_assert_eq!(full.len(), self.n);
        for e in (self.phi..self.n).rev() {
            let c = std::mem::replace(&mut full[e], T::zero());
            if c.is_zero() {
                continue;
            }
            let r = e - self.phi;
            for j in 0..self.p - 1 {
                let slot = &mut full[j * self.block + r];
                *slot = slot.clone() - c.clone();
            }
        }
        full.truncate(self.phi);
        full
    }
}

/// Reduces an unreduced length-`n` integer vector in place; the reduced
/// coefficients end up in the first `φ(n)` slots and the rest are zeroed.
pub fn reduce_in_place(order: u32, full: &mut [i64]) {
    let l = Layout::of(order);
    debug_assert_eq!(full.len(), l.n);
    for e in (l.phi..l.n).rev() {
        let c = std::mem::take(&mut full[e]);
        if c == 0 {
            continue;
        }
        let r = e - l.phi;
        for j in 0..l.p - 1 {
            full[j * l.block + r] -= c;
        }
    }
}

/// An element of `Z[ζ_n]` (or `Q(ζ_n)` with rational coefficients).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic<T> {
    order: u32,
    coeffs: Vec<T>,
}

pub fn check_order(order: u32) -> Result<()> {
    odd_prime_power(order).map(|_| ()).ok_or(Error::BadOrder(order))
}

/// Euler's totient of an odd prime power.
pub fn phi(order: u32) -> usize {
    Layout::of(order).phi
}

impl<T: Coeff> Cyclotomic<T> {
    pub fn zero(order: u32) -> Self {
        let l = Layout::of(order);
        Cyclotomic { order, coeffs: vec![T::zero(); l.phi] }
    }

    pub fn one(order: u32) -> Self {
        Self::from_scalar(order, T::one())
    }

    pub fn from_scalar(order: u32, c: T) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = c;
        z
    }

    /// `ζ^e`.
    pub fn root(order: u32, e: i64) -> Self {
        let l = Layout::of(order);
        let mut full = vec![T::zero(); l.n];
        full[e.rem_euclid(l.n as i64) as usize] = T::one();
        Cyclotomic { order, coeffs: l.reduce(full) }
    }

    /// Builds `Σ_e c_e ζ^e` from an unreduced coefficient vector of length `n`.
    pub fn from_full(order: u32, full: Vec<T>) -> Self {
        let l = Layout::of(order);
        assert_eq!(full.len(), l.n, "unreduced vector must have length n");
        Cyclotomic { order, coeffs: l.reduce(full) }
    }

    /// Builds an element from already reduced coefficients.
    pub fn from_reduced(order: u32, coeffs: Vec<T>) -> Result<Self> {
        check_order(order)?;
        if coeffs.len() != phi(order) {
            return Err(Error::InvalidConfig(format!(
                "expected {} reduced coefficients, got {}",
                phi(order),
                coeffs.len()
            )));
        }
        Ok(Cyclotomic { order, coeffs })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The constant coefficient, if the value is a plain scalar.
    pub fn as_scalar(&self) -> Option<&T> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    fn same_order(&self, other: &Self) -> Result<()> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.order, other.order))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(Cyclotomic { order: self.order, coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let l = Layout::of(self.order);
        let mut full = vec![T::zero(); l.n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let slot = &mut full[(i + j) % l.n];
                *slot = slot.clone() + a.clone() * b.clone();
            }
        }
        Ok(Cyclotomic { order: self.order, coeffs: l.reduce(full) })
    }

    fn neg_ref(&self) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    /// Image under `ζ ↦ ζ^j` for `j` coprime to the order.
    pub fn galois(&self, j: u32) -> Self {
        let l = Layout::of(self.order);
        assert!(j as usize % l.p != 0, "galois exponent must be a unit mod n");
        let mut full = vec![T::zero(); l.n];
        for (i, c) in self.coeffs.iter().enumerate() {
            let slot = &mut full[(i * j as usize) % l.n];
            *slot = slot.clone() + c.clone();
        }
        Cyclotomic { order: self.order, coeffs: l.reduce(full) }
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(self.order - 1)
    }

    /// `ζ^e · self`.
    pub fn mul_root(&self, e: i64) -> Self {
        let l = Layout::of(self.order);
        let shift = e.rem_euclid(l.n as i64) as usize;
        let mut full = vec![T::zero(); l.n];
        for (i, c) in self.coeffs.iter().enumerate() {
            full[(i + shift) % l.n] = c.clone();
        }
        Cyclotomic { order: self.order, coeffs: l.reduce(full) }
    }

    pub fn scale(&self, s: &T) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Cyclotomic<U> {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Floating-point image under `ζ ↦ e^{2πi/n}`.
    pub fn embed<F: Float + FromPrimitive>(&self) -> Complex<F>
    where
        T: ToPrimitive,
    {
        let n = F::from_u32(self.order).unwrap();
        let tau = F::from_f64(std::f64::consts::TAU).unwrap();
        let mut acc = Complex::new(F::zero(), F::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            let c = F::from_f64(c.to_f64().expect("coefficient fits in f64")).unwrap();
            let angle = tau * F::from_usize(i).unwrap() / n;
            acc = acc + Complex::new(angle.cos(), angle.sin()) * c;
        }
        acc
    }
}

/// `embed_complex` with order validation, for callers holding an arbitrary order.
pub fn embed_complex<T: Coeff + ToPrimitive>(x: &Cyclotomic<T>) -> Result<Complex<f64>> {
    check_order(x.order)?;
    Ok(x.embed())
}

impl<T: Coeff + FromPrimitive> Cyclotomic<T> {
    /// `Σ_e counts[e] ζ^e` for an exponent histogram of length `n`.
    pub fn from_counts(order: u32, counts: &[i64]) -> Self {
        let full = counts.iter().map(|&c| T::from_i64(c).unwrap()).collect();
        Self::from_full(order, full)
    }

    pub fn from_i64(order: u32, c: i64) -> Self {
        Self::from_scalar(order, T::from_i64(c).unwrap())
    }
}

impl<I> Cyclotomic<Ratio<I>>
where
    I: Integer + Clone + Signed + fmt::Debug,
{
    /// Field norm down to `Q`: the product of all Galois conjugates.
    pub fn norm(&self) -> Ratio<I> {
        let (p, _) = odd_prime_power(self.order).unwrap();
        let mut acc = Self::one(self.order);
        for j in 1..self.order {
            if j % p != 0 {
                acc = &acc * &self.galois(j);
            }
        }
        acc.as_scalar().cloned().expect("norm is rational")
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (p, _) = odd_prime_power(self.order).unwrap();
        let mut others = Self::one(self.order);
        for j in 2..self.order {
            if j % p != 0 {
                others = &others * &self.galois(j);
            }
        }
        let norm = (&others * self).as_scalar().cloned().expect("norm is rational");
        Some(others.scale(&(Ratio::one() / norm)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let inv = other.inv().ok_or(Error::NotUnit)?;
        Ok(self * &inv)
    }
}

impl Cyclotomic<BigRational> {
    /// Splits `x = num / den` with `num ∈ Z[ζ]` and `den > 0` the least common denominator.
    pub fn to_integral(&self) -> (Cyclotomic<BigInt>, BigInt) {
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self.map(|c| (c * BigRational::from_integer(den.clone())).to_integer());
        (num, den)
    }

    pub fn from_integer_cyc(x: &Cyclotomic<i64>) -> Self {
        x.map(|&c| BigRational::from_integer(BigInt::from(c)))
    }
}

impl Cyclotomic<BigInt> {
    /// Narrows to machine integers; `None` when a coefficient does not fit.
    pub fn to_i64(&self) -> Option<Cyclotomic<i64>> {
        let coeffs = self.coeffs.iter().map(|c| c.to_i64()).collect::<Option<Vec<_>>>()?;
        Some(Cyclotomic { order: self.order, coeffs })
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<T: Coeff> $trait<&Cyclotomic<T>> for &Cyclotomic<T> {
            type Output = Cyclotomic<T>;
            fn $method(self, rhs: &Cyclotomic<T>) -> Cyclotomic<T> {
                self.$checked(rhs).expect("cyclotomic orders must agree")
            }
        }
        impl<T: Coeff> $trait for Cyclotomic<T> {
            type Output = Cyclotomic<T>;
            fn $method(self, rhs: Cyclotomic<T>) -> Cyclotomic<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl<T: Coeff> Neg for Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Cyclotomic<T> {
        self.neg_ref()
    }
}

impl<T: Coeff> Neg for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Cyclotomic<T> {
        self.neg_ref()
    }
}

impl<T: Coeff + fmt::Display> fmt::Display for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})·ζ{}", self.order)?,
                _ => write!(f, "({c})·ζ{}^{i}", self.order)?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<T: Coeff> fmt::Debug for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc{}{:?}", self.order, self.coeffs)
    }
}

/// JSON rendering of a single coefficient. Integers become numbers;
/// non-integral rationals become `"num/den"` strings.
pub trait JsonCoeff {
    fn to_json(&self) -> serde_json::Value;
}

impl JsonCoeff for i64 {
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(*self)
    }
}

impl JsonCoeff for BigInt {
    fn to_json(&self) -> serde_json::Value {
        match self.to_i64() {
            Some(v) => serde_json::Value::from(v),
            None => serde_json::Value::from(self.to_string()),
        }
    }
}

impl<I: Clone + Integer + fmt::Display + ToPrimitive> JsonCoeff for Ratio<I> {
    fn to_json(&self) -> serde_json::Value {
        if self.is_integer() {
            if let Some(v) = self.numer().to_i64() {
                return serde_json::Value::from(v);
            }
        }
        serde_json::Value::from(self.to_string())
    }
}

impl<T: JsonCoeff> Serialize for Cyclotomic<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<_> = self.coeffs.iter().map(JsonCoeff::to_json).collect();
        let mut s = serializer.serialize_struct("Cyclotomic", 2)?;
        s.serialize_field("order", &self.order)?;
        s.serialize_field("coeffs", &coeffs)?;
        s.end()
    }
}

/// Signed roots of unity `±ζ_n^e`, encoded as exponents of `ζ_{2n}`.
///
/// `n` is odd, so `-1 = ζ_{2n}^n` and `ζ_n = ζ_{2n}^2`; every value of a
/// character, of `μ`, and of the products of the two is such a code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Roots {
    n: u32,
}

pub type RootCode = u32;

impl Roots {
    pub fn new(n: u32) -> Roots {
        Roots { n }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        2 * self.n
    }

    pub fn one(&self) -> RootCode {
        0
    }

    pub fn minus_one(&self) -> RootCode {
        self.n
    }

    /// `ζ_n^e`.
    pub fn zeta(&self, e: u32) -> RootCode {
        (2 * (e % self.n)) % (2 * self.n)
    }

    pub fn sign(&self, negative: bool) -> RootCode {
        if negative {
            self.n
        } else {
            0
        }
    }

    pub fn mul(&self, a: RootCode, b: RootCode) -> RootCode {
        (a + b) % (2 * self.n)
    }

    pub fn inv(&self, a: RootCode) -> RootCode {
        (2 * self.n - a % (2 * self.n)) % (2 * self.n)
    }

    pub fn pow(&self, a: RootCode, e: i64) -> RootCode {
        let m = 2 * self.n as i64;
        ((a as i64 * e.rem_euclid(m)) % m) as u32
    }

    /// `(negative, e)` with value `(-1)^negative · ζ_n^e`.
    pub fn split(&self, c: RootCode) -> (bool, u32) {
        if c % 2 == 0 {
            (false, (c / 2) % self.n)
        } else {
            (true, (((c + self.n) % (2 * self.n)) / 2) % self.n)
        }
    }

    pub fn to_cyc<T: Coeff>(&self, c: RootCode) -> Cyclotomic<T> {
        let (neg, e) = self.split(c);
        let z = Cyclotomic::root(self.n, e as i64);
        if neg {
            -z
        } else {
            z
        }
    }

    /// Adds `±1` times `ζ^e` into an unreduced length-`n` accumulator.
    #[inline]
    pub fn accumulate(&self, acc: &mut [i64], c: RootCode, weight: i64) {
        let (neg, e) = self.split(c);
        acc[e as usize] += if neg { -weight } else { weight };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Cyclotomic<i64>;

    #[test]
    fn orders() {
        assert_eq!(odd_prime_power(3), Some((3, 1)));
        assert_eq!(odd_prime_power(9), Some((3, 2)));
        assert_eq!(odd_prime_power(125), Some((5, 3)));
        assert_eq!(odd_prime_power(13), Some((13, 1)));
        assert_eq!(odd_prime_power(4), None);
        assert_eq!(odd_prime_power(15), None);
        assert_eq!(odd_prime_power(1), None);
    }

    #[test]
    fn one_plus_zeta_plus_zeta_squared_vanishes() {
        let x = C::one(3) + C::root(3, 1);
        assert!((x + C::root(3, 2)).is_zero());
    }

    #[test]
    fn conjugate_of_zeta9() {
        assert_eq!(C::root(9, 1).conj(), C::root(9, 8));
    }

    #[test]
    fn square_of_one_plus_two_zeta3() {
        let g = C::one(3) + C::root(3, 1).scale(&2);
        assert_eq!(&g * &g, C::from_i64(3, -3));
    }

    #[test]
    fn embedding_of_gauss_sum_over_f3() {
        let g = C::one(3) + C::root(3, 1).scale(&2);
        let z = embed_complex(&g).unwrap();
        assert!(z.re.abs() < 1e-9);
        assert!((z.im - 3f64.sqrt()).abs() < 1e-9);
        assert_eq!(embed_complex(&C::zero(3)).unwrap(), Complex::new(0.0, 0.0));
    }

    #[test]
    fn even_order_rejected() {
        assert_eq!(check_order(4), Err(Error::BadOrder(4)));
        assert!(C::from_reduced(4, vec![0, 1]).is_err());
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = C::one(3);
        let b = C::one(9);
        assert_eq!(a.checked_add(&b), Err(Error::OrderMismatch(3, 9)));
    }

    #[test]
    fn rational_inverse() {
        let g = Cyclotomic::<BigRational>::from_integer_cyc(&(C::one(9) + C::root(9, 4).scale(&3)));
        let inv = g.inv().unwrap();
        assert!((&g * &inv).is_one());
        assert!(Cyclotomic::<BigRational>::zero(9).inv().is_none());
    }

    #[test]
    fn signed_roots_round_trip() {
        let r = Roots::new(9);
        for neg in [false, true] {
            for e in 0..9 {
                let c = if neg { r.mul(r.minus_one(), r.zeta(e)) } else { r.zeta(e) };
                assert_eq!(r.split(c), (neg, e));
                let expect = if neg { -C::root(9, e as i64) } else { C::root(9, e as i64) };
                assert_eq!(r.to_cyc::<i64>(c), expect);
            }
        }
        assert_eq!(r.mul(r.minus_one(), r.minus_one()), r.one());
    }
}
