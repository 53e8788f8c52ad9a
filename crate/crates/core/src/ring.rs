//! Finite rings with involution.
//!
//! Every ring is a free module over a residue ring `Z/q` (`q = p` or `p^k`)
//! with a handful of coefficient slots; elements are the mixed-radix indices
//! of their coefficient vectors, so `0` is always the zero element.
//! Small rings carry precomputed operation tables.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Elem = u32;

/// Rings up to this size get full addition/multiplication tables.
pub const TABLE_LIMIT: usize = 2048;
/// Largest ring the crate will construct.
pub const SIZE_LIMIT: usize = 1 << 24;

const MAX_SLOTS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `F_p`, identity involution.
    PrimeField,
    /// `F_{p^2}` with `a ↦ a^p`.
    QuadraticFrobenius,
    /// `Z/p^k`, identity involution.
    IntegersModPk,
    /// `GR(p^k, 2) = (Z/p^k)[θ]/(θ² - r)`, `θ* = -θ`.
    GaloisRingFrobenius,
    /// `(Z/p^k)[π]/(π² - p)`, `π* = -π`.
    RamifiedEven,
    /// `F_{p^2}[t; Frobenius]/(t^s)` with `t* = -t`.
    SkewPolyQuotient,
    /// `M(2, F_p)` with the adjugate involution.
    Matrix2Adjugate,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::PrimeField => "prime_field",
            Family::QuadraticFrobenius => "quadratic_frobenius",
            Family::IntegersModPk => "integers_mod_pk",
            Family::GaloisRingFrobenius => "galois_ring_frobenius",
            Family::RamifiedEven => "ramified_even",
            Family::SkewPolyQuotient => "skew_poly_quotient",
            Family::Matrix2Adjugate => "matrix2_adjugate",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ring configuration as read from JSON: `{"family", "p", "k"?, "s"?, "m"?}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingConfig {
    pub family: Family,
    pub p: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
}

impl RingConfig {
    pub fn new(family: Family, p: u32) -> RingConfig {
        RingConfig { family, p, k: None, s: None, m: None }
    }

    pub fn with_k(mut self, k: u32) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_s(mut self, s: u32) -> Self {
        self.s = Some(s);
        self
    }

    pub fn with_m(mut self, m: u32) -> Self {
        self.m = Some(m);
        self
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn smallest_nonresidue(p: u32) -> u32 {
    (2..p)
        .find(|&r| (1..p).all(|x| (x as u64 * x as u64) % p as u64 != r as u64))
        .expect("odd primes have nonresidues")
}

type Coeffs = [u32; MAX_SLOTS];

struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    star: Vec<u16>,
    inv: Vec<u32>,
}

/// A finite ring with involution, built from a [`RingConfig`].
pub struct FiniteRing {
    config: RingConfig,
    p: u32,
    k: u32,
    /// Modulus of every coefficient slot.
    q: u32,
    slots: usize,
    size: usize,
    exponent: u32,
    nonresidue: u32,
    s: usize,
    residue: Option<Box<FiniteRing>>,
    unit_count: u64,
    tables: Option<Tables>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("family", &self.config.family)
            .field("p", &self.p)
            .field("k", &self.k)
            .field("s", &self.s)
            .field("size", &self.size)
            .finish()
    }
}

/// `build_ring`: validates the configuration and constructs the ring.
pub fn build_ring(config: &RingConfig) -> Result<FiniteRing> {
    FiniteRing::new(config)
}

impl FiniteRing {
    pub fn new(config: &RingConfig) -> Result<FiniteRing> {
        let p = config.p;
        if p % 2 == 0 || !is_prime(p) {
            return Err(Error::InvalidConfig(format!("p = {p} must be an odd prime")));
        }
        let family = config.family;
        let k = config.k.unwrap_or(1);
        if k == 0 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        let takes_k = matches!(
            family,
            Family::IntegersModPk | Family::GaloisRingFrobenius | Family::RamifiedEven
        );
        if !takes_k && k != 1 {
            return Err(Error::InvalidConfig(format!("family {family} takes no k")));
        }
        let s = match (family, config.s) {
            (Family::SkewPolyQuotient, Some(s)) if s >= 2 => s as usize,
            (Family::SkewPolyQuotient, _) => {
                return Err(Error::InvalidConfig("skew_poly_quotient needs s >= 2".into()))
            }
            (_, None) => 0,
            (_, Some(_)) => {
                return Err(Error::InvalidConfig(format!("family {family} takes no s")))
            }
        };
        let q = p
            .checked_pow(k)
            .filter(|&q| q < (1 << 16))
            .ok_or_else(|| Error::InvalidConfig("p^k too large".into()))?;
        let slots = match family {
            Family::PrimeField | Family::IntegersModPk => 1,
            Family::QuadraticFrobenius | Family::GaloisRingFrobenius | Family::RamifiedEven => 2,
            Family::SkewPolyQuotient => 2 * s,
            Family::Matrix2Adjugate => 4,
        };
        if slots > MAX_SLOTS {
            return Err(Error::InvalidConfig("too many coefficient slots".into()));
        }
        let size = (q as u64).checked_pow(slots as u32).filter(|&n| n <= SIZE_LIMIT as u64);
        let size = size.ok_or_else(|| Error::InvalidConfig("ring too large".into()))? as usize;
        let nonresidue = smallest_nonresidue(p);
        let residue = match family {
            Family::PrimeField | Family::QuadraticFrobenius | Family::Matrix2Adjugate => None,
            Family::IntegersModPk | Family::RamifiedEven => {
                Some(Box::new(FiniteRing::new(&RingConfig::new(Family::PrimeField, p))?))
            }
            Family::GaloisRingFrobenius | Family::SkewPolyQuotient => Some(Box::new(
                FiniteRing::new(&RingConfig::new(Family::QuadraticFrobenius, p))?,
            )),
        };
        let unit_count = match family {
            Family::Matrix2Adjugate => {
                let p = p as u64;
                (p * p - 1) * (p * p - p)
            }
            _ => {
                let res = residue.as_ref().map_or(size, |r| r.size) as u64;
                size as u64 - size as u64 / res
            }
        };
        let exponent = match family {
            Family::IntegersModPk | Family::GaloisRingFrobenius | Family::RamifiedEven => q,
            _ => p,
        };
        let mut ring = FiniteRing {
            config: config.clone(),
            p,
            k,
            q,
            slots,
            size,
            exponent,
            nonresidue,
            s,
            residue,
            unit_count,
            tables: None,
        };
        if size <= TABLE_LIMIT {
            ring.tables = Some(ring.build_tables());
        }
        Ok(ring)
    }

    fn build_tables(&self) -> Tables {
        let n = self.size;
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        let mut neg = vec![0u16; n];
        let mut star = vec![0u16; n];
        let decoded: Vec<Coeffs> = (0..n as Elem).map(|x| self.decode(x)).collect();
        for x in 0..n {
            neg[x] = self.encode(&self.cneg(&decoded[x])) as u16;
            star[x] = self.encode(&self.cstar(&decoded[x])) as u16;
            for y in 0..n {
                add[x * n + y] = self.encode(&self.cadd(&decoded[x], &decoded[y])) as u16;
                mul[x * n + y] = self.encode(&self.cmul(&decoded[x], &decoded[y])) as u16;
            }
        }
        let one = self.one() as usize;
        let mut inv = vec![u32::MAX; n];
        for x in 0..n {
            if inv[x] != u32::MAX {
                continue;
            }
            for y in 0..n {
                if mul[x * n + y] as usize == one && mul[y * n + x] as usize == one {
                    inv[x] = y as u32;
                    inv[y] = x as u32;
                    break;
                }
            }
        }
        Tables { add, mul, neg, star, inv }
    }

    pub fn config(&self) -> &RingConfig {
        &self.config
    }

    pub fn family(&self) -> Family {
        self.config.family
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Exponent `n = p^k` of the additive group.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Number of coefficient slots and the modulus of each.
    pub fn slot_layout(&self) -> (usize, u32) {
        (self.slots, self.q)
    }

    pub fn is_local(&self) -> bool {
        self.config.family != Family::Matrix2Adjugate
    }

    pub fn is_field(&self) -> bool {
        matches!(self.config.family, Family::PrimeField | Family::QuadraticFrobenius)
    }

    pub fn unit_count(&self) -> u64 {
        self.unit_count
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size as Elem
    }

    /// The residue field `B / J(B)` of a local ring (the ring itself for fields).
    pub fn residue_field(&self) -> Option<&FiniteRing> {
        match (&self.residue, self.is_field()) {
            (Some(r), _) => Some(r),
            (None, true) => Some(self),
            (None, false) => None,
        }
    }

    /// Reduction modulo the radical, as an element of [`Self::residue_field`].
    pub fn residue(&self, x: Elem) -> Elem {
        let c = self.decode(x);
        let q = self.p;
        match self.config.family {
            Family::PrimeField | Family::QuadraticFrobenius => x,
            Family::IntegersModPk | Family::RamifiedEven => c[0] % q,
            Family::GaloisRingFrobenius => c[0] % q + q * (c[1] % q),
            Family::SkewPolyQuotient => c[0] + q * c[1],
            Family::Matrix2Adjugate => panic!("matrix2_adjugate is not local"),
        }
    }

    /// Membership in the Jacobson radical (local families only).
    pub fn in_radical(&self, x: Elem) -> bool {
        self.residue(x) == 0
    }

    pub fn decode(&self, x: Elem) -> Coeffs {
        let mut c = [0u32; MAX_SLOTS];
        let mut rest = x;
        for slot in c.iter_mut().take(self.slots) {
            *slot = rest % self.q;
            rest /= self.q;
        }
        c
    }

    pub fn coefficients(&self, x: Elem) -> Vec<u32> {
        self.decode(x)[..self.slots].to_vec()
    }

    pub fn encode(&self, c: &[u32]) -> Elem {
        let mut x = 0;
        for i in (0..self.slots).rev() {
            x = x * self.q + c[i] % self.q;
        }
        x
    }

    fn cadd(&self, a: &Coeffs, b: &Coeffs) -> Coeffs {
        let mut c = [0u32; MAX_SLOTS];
        for i in 0..self.slots {
            c[i] = (a[i] + b[i]) % self.q;
        }
        c
    }

    fn cneg(&self, a: &Coeffs) -> Coeffs {
        let mut c = [0u32; MAX_SLOTS];
        for i in 0..self.slots {
            c[i] = (self.q - a[i]) % self.q;
        }
        c
    }

    fn quad_mul(&self, a: (u32, u32), b: (u32, u32), sq: u64) -> (u32, u32) {
        let q = self.q as u64;
        let (a0, a1, b0, b1) = (a.0 as u64, a.1 as u64, b.0 as u64, b.1 as u64);
        (((a0 * b0 + sq * (a1 * b1 % q)) % q) as u32, ((a0 * b1 + a1 * b0) % q) as u32)
    }

    fn cmul(&self, a: &Coeffs, b: &Coeffs) -> Coeffs {
        let q = self.q as u64;
        let mut c = [0u32; MAX_SLOTS];
        match self.config.family {
            Family::PrimeField | Family::IntegersModPk => {
                c[0] = (a[0] as u64 * b[0] as u64 % q) as u32;
            }
            Family::QuadraticFrobenius | Family::GaloisRingFrobenius => {
                let (x, y) = self.quad_mul((a[0], a[1]), (b[0], b[1]), self.nonresidue as u64);
                c[0] = x;
                c[1] = y;
            }
            Family::RamifiedEven => {
                let (x, y) = self.quad_mul((a[0], a[1]), (b[0], b[1]), self.p as u64);
                c[0] = x;
                c[1] = y;
            }
            Family::SkewPolyQuotient => {
                // (a_i t^i)(b_j t^j) = a_i φ^i(b_j) t^{i+j}
                let r = self.nonresidue as u64;
                for i in 0..self.s {
                    let ai = (a[2 * i], a[2 * i + 1]);
                    if ai == (0, 0) {
                        continue;
                    }
                    for j in 0..self.s - i {
                        let mut bj = (b[2 * j], b[2 * j + 1]);
                        if i % 2 == 1 {
                            bj.1 = (self.q - bj.1) % self.q;
                        }
                        let (x, y) = self.quad_mul(ai, bj, r);
                        let t = i + j;
                        c[2 * t] = ((c[2 * t] + x) as u64 % q) as u32;
                        c[2 * t + 1] = ((c[2 * t + 1] + y) as u64 % q) as u32;
                    }
                }
            }
            Family::Matrix2Adjugate => {
                let m = |x: u32, y: u32| x as u64 * y as u64;
                c[0] = ((m(a[0], b[0]) + m(a[1], b[2])) % q) as u32;
                c[1] = ((m(a[0], b[1]) + m(a[1], b[3])) % q) as u32;
                c[2] = ((m(a[2], b[0]) + m(a[3], b[2])) % q) as u32;
                c[3] = ((m(a[2], b[1]) + m(a[3], b[3])) % q) as u32;
            }
        }
        c
    }

    fn cstar(&self, a: &Coeffs) -> Coeffs {
        let q = self.q;
        let neg = |x: u32| (q - x) % q;
        let mut c = *a;
        match self.config.family {
            Family::PrimeField | Family::IntegersModPk => {}
            Family::QuadraticFrobenius | Family::GaloisRingFrobenius | Family::RamifiedEven => {
                c[1] = neg(a[1]);
            }
            Family::SkewPolyQuotient => {
                for i in 0..self.s {
                    if i % 2 == 0 {
                        c[2 * i + 1] = neg(a[2 * i + 1]);
                    } else {
                        c[2 * i] = neg(a[2 * i]);
                        c[2 * i + 1] = neg(a[2 * i + 1]);
                    }
                }
            }
            Family::Matrix2Adjugate => {
                c[0] = a[3];
                c[1] = neg(a[1]);
                c[2] = neg(a[2]);
                c[3] = a[0];
            }
        }
        c
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    /// Image of an integer under `Z → B`.
    pub fn from_int(&self, v: i64) -> Elem {
        let c = v.rem_euclid(self.q as i64) as u32;
        let mut coeffs = [0u32; MAX_SLOTS];
        coeffs[0] = c;
        if self.config.family == Family::Matrix2Adjugate {
            coeffs[3] = c;
        }
        self.encode(&coeffs)
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.add[x as usize * self.size + y as usize] as Elem,
            None => self.encode(&self.cadd(&self.decode(x), &self.decode(y))),
        }
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.neg[x as usize] as Elem,
            None => self.encode(&self.cneg(&self.decode(x))),
        }
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.mul[x as usize * self.size + y as usize] as Elem,
            None => self.encode(&self.cmul(&self.decode(x), &self.decode(y))),
        }
    }

    /// The involution `x ↦ x*`.
    #[inline]
    pub fn star(&self, x: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.star[x as usize] as Elem,
            None => self.encode(&self.cstar(&self.decode(x))),
        }
    }

    pub fn pow(&self, x: Elem, mut e: u64) -> Elem {
        let mut base = x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Family-dispatched unit test: reduction mod the radical for local
    /// rings, the determinant for `M(2, F_p)`.
    pub fn is_unit(&self, x: Elem) -> bool {
        match self.config.family {
            Family::Matrix2Adjugate => {
                let c = self.decode(x);
                let p = self.p as u64;
                let det = (c[0] as u64 * c[3] as u64 + p * p - c[1] as u64 * c[2] as u64 % p) % p;
                det != 0
            }
            _ => self.residue(x) != 0,
        }
    }

    pub fn invert(&self, x: Elem) -> Result<Elem> {
        if let Some(t) = &self.tables {
            return match t.inv[x as usize] {
                u32::MAX => Err(Error::NotUnit),
                y => Ok(y),
            };
        }
        if !self.is_unit(x) {
            return Err(Error::NotUnit);
        }
        Ok(self.pow(x, self.unit_count - 1))
    }

    /// A minimal additive generating set: the coefficient basis vectors.
    pub fn additive_generators(&self) -> Vec<Elem> {
        (0..self.slots)
            .map(|i| {
                let mut c = [0u32; MAX_SLOTS];
                c[i] = 1;
                self.encode(&c)
            })
            .collect()
    }

    /// Additive order of each coefficient slot generator.
    pub fn slot_modulus(&self) -> u32 {
        self.q
    }
}

/// Field wrapper so residue-field arithmetic can feed the generic linear algebra.
#[derive(Clone, Copy)]
pub struct FieldElem<'a> {
    pub ring: &'a FiniteRing,
    pub x: Elem,
}

impl PartialEq for FieldElem<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x
    }
}

impl crate::linalg::Field for FieldElem<'_> {
    fn zero_like(&self) -> Self {
        FieldElem { ring: self.ring, x: 0 }
    }
    fn one_like(&self) -> Self {
        FieldElem { ring: self.ring, x: self.ring.one() }
    }
    fn is_zero(&self) -> bool {
        self.x == 0
    }
    fn add(&self, o: &Self) -> Self {
        FieldElem { ring: self.ring, x: self.ring.add(self.x, o.x) }
    }
    fn sub(&self, o: &Self) -> Self {
        FieldElem { ring: self.ring, x: self.ring.sub(self.x, o.x) }
    }
    fn mul(&self, o: &Self) -> Self {
        FieldElem { ring: self.ring, x: self.ring.mul(self.x, o.x) }
    }
    fn inv(&self) -> Option<Self> {
        self.ring.invert(self.x).ok().map(|x| FieldElem { ring: self.ring, x })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn all_configs() -> Vec<RingConfig> {
        vec![
            RingConfig::new(Family::PrimeField, 3),
            RingConfig::new(Family::PrimeField, 5),
            RingConfig::new(Family::QuadraticFrobenius, 3),
            RingConfig::new(Family::QuadraticFrobenius, 5),
            RingConfig::new(Family::IntegersModPk, 3).with_k(2),
            RingConfig::new(Family::IntegersModPk, 5).with_k(2),
            RingConfig::new(Family::GaloisRingFrobenius, 3).with_k(2),
            RingConfig::new(Family::RamifiedEven, 3),
            RingConfig::new(Family::RamifiedEven, 3).with_k(2),
            RingConfig::new(Family::SkewPolyQuotient, 3).with_s(2),
            RingConfig::new(Family::SkewPolyQuotient, 3).with_s(3),
            RingConfig::new(Family::Matrix2Adjugate, 3),
        ]
    }

    fn triples(ring: &FiniteRing, rng: &mut ChaCha8Rng) -> Vec<(Elem, Elem, Elem)> {
        let n = ring.size() as Elem;
        if ring.size() <= 100 {
            let mut v = Vec::new();
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        v.push((x, y, z));
                    }
                }
            }
            v
        } else {
            (0..10_000).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))).collect()
        }
    }

    #[test]
    fn ring_axioms_and_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for cfg in all_configs() {
            let r = build_ring(&cfg).unwrap();
            let one = r.one();
            assert!(r.is_unit(r.from_int(2)), "{cfg:?}: 2 must be a unit");
            assert_eq!(r.star(one), one);
            for (x, y, z) in triples(&r, &mut rng) {
                assert_eq!(r.mul(r.mul(x, y), z), r.mul(x, r.mul(y, z)), "{cfg:?}");
                assert_eq!(r.mul(x, r.add(y, z)), r.add(r.mul(x, y), r.mul(x, z)), "{cfg:?}");
                assert_eq!(r.mul(r.add(x, y), z), r.add(r.mul(x, z), r.mul(y, z)), "{cfg:?}");
                assert_eq!(r.add(r.add(x, y), z), r.add(x, r.add(y, z)));
                assert_eq!(r.star(r.mul(x, y)), r.mul(r.star(y), r.star(x)), "{cfg:?}");
                assert_eq!(r.star(r.add(x, y)), r.add(r.star(x), r.star(y)));
            }
            for x in r.elements() {
                assert_eq!(r.mul(one, x), x);
                assert_eq!(r.mul(x, one), x);
                assert_eq!(r.star(r.star(x)), x);
                assert_eq!(r.add(x, r.neg(x)), 0);
            }
        }
    }

    #[test]
    fn unit_detection_matches_brute_force() {
        for cfg in all_configs() {
            let r = build_ring(&cfg).unwrap();
            if r.size() > 100 {
                continue;
            }
            let one = r.one();
            for x in r.elements() {
                let brute = r.elements().any(|y| r.mul(x, y) == one && r.mul(y, x) == one);
                assert_eq!(r.is_unit(x), brute, "{cfg:?} x = {x}");
                if brute {
                    let y = r.invert(x).unwrap();
                    assert_eq!(r.mul(x, y), one);
                } else {
                    assert_eq!(r.invert(x), Err(Error::NotUnit));
                }
            }
        }
    }

    #[test]
    fn radical_is_the_nonunit_ideal() {
        for cfg in all_configs() {
            let r = build_ring(&cfg).unwrap();
            if !r.is_local() || r.size() > 100 {
                continue;
            }
            let rad: Vec<Elem> = r.elements().filter(|&x| r.in_radical(x)).collect();
            for x in r.elements() {
                assert_eq!(r.in_radical(x), !r.is_unit(x));
            }
            for &a in &rad {
                for &b in &rad {
                    assert!(r.in_radical(r.add(a, b)));
                }
                for y in r.elements() {
                    assert!(r.in_radical(r.mul(a, y)));
                    assert!(r.in_radical(r.mul(y, a)));
                }
            }
        }
    }

    #[test]
    fn lazy_arithmetic_matches_tables() {
        // F_9[t]/(t^3) has 729 elements: compare table lookups against coefficient arithmetic.
        let r = build_ring(&RingConfig::new(Family::SkewPolyQuotient, 3).with_s(3)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let (x, y) = (rng.gen_range(0..729), rng.gen_range(0..729));
            let direct = r.encode(&r.cmul(&r.decode(x), &r.decode(y)));
            assert_eq!(r.mul(x, y), direct);
        }
    }

    #[test]
    fn prime_field_has_identity_involution() {
        let r = build_ring(&RingConfig::new(Family::PrimeField, 3)).unwrap();
        assert_eq!(r.size(), 3);
        assert!(r.elements().all(|x| r.star(x) == x));
        let units: Vec<_> = r.elements().filter(|&x| r.is_unit(x)).collect();
        assert_eq!(units, vec![1, 2]);
    }

    #[test]
    fn adjugate_involution_of_matrix_unit() {
        let r = build_ring(&RingConfig::new(Family::Matrix2Adjugate, 3)).unwrap();
        let x = r.encode(&[0, 1, 0, 0]);
        assert_eq!(r.coefficients(r.star(x)), vec![0, 2, 0, 0]);
    }

    #[test]
    fn skew_relation_holds() {
        let r = build_ring(&RingConfig::new(Family::SkewPolyQuotient, 3).with_s(2)).unwrap();
        assert_eq!(r.size(), 81);
        let t = r.encode(&[0, 0, 1, 0]);
        assert_eq!(r.star(t), r.neg(t));
        for a0 in 0..3 {
            for a1 in 0..3 {
                let a = r.encode(&[a0, a1, 0, 0]);
                assert_eq!(r.mul(t, a), r.mul(r.pow(a, 3), t));
            }
        }
    }

    #[test]
    fn unit_counts() {
        let z9 = build_ring(&RingConfig::new(Family::IntegersModPk, 3).with_k(2)).unwrap();
        assert_eq!(z9.elements().filter(|&x| z9.is_unit(x)).count(), 6);
        let skew = build_ring(&RingConfig::new(Family::SkewPolyQuotient, 3).with_s(3)).unwrap();
        let units = skew.elements().filter(|&x| skew.is_unit(x)).count();
        assert_eq!(units, 648);
        let one = skew.one();
        for x in skew.elements().filter(|&x| skew.is_unit(x)).step_by(37) {
            let y = skew.invert(x).unwrap();
            assert_eq!(skew.mul(x, y), one);
            assert_eq!(skew.mul(y, x), one);
        }
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(build_ring(&RingConfig::new(Family::PrimeField, 4)).is_err());
        assert!(build_ring(&RingConfig::new(Family::PrimeField, 2)).is_err());
        assert!(build_ring(&RingConfig::new(Family::SkewPolyQuotient, 3)).is_err());
        assert!(build_ring(&RingConfig::new(Family::SkewPolyQuotient, 3).with_s(1)).is_err());
        assert!(build_ring(&RingConfig::new(Family::PrimeField, 3).with_k(2)).is_err());
        assert!(build_ring(&RingConfig::new(Family::PrimeField, 3).with_s(2)).is_err());
    }

    #[test]
    fn config_json_round_trip() {
        let cfg: RingConfig =
            serde_json::from_str(r#"{"family":"skew_poly_quotient","p":3,"s":3}"#).unwrap();
        assert_eq!(cfg, RingConfig::new(Family::SkewPolyQuotient, 3).with_s(3));
    }
}
