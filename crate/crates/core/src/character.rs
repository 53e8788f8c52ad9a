//! Additive characters `β : B⁺ → μ_n` stored as exponent maps.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclotomic::{Cyclotomic, RootCode, Roots};
use crate::error::{Error, Result};
use crate::ring::{Elem, Family, FiniteRing};

/// The sign `ε` of the form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// `ε · x`.
    pub fn apply(self, ring: &FiniteRing, x: Elem) -> Elem {
        match self {
            Sign::Plus => x,
            Sign::Minus => ring.neg(x),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sign> {
        match s.trim() {
            "+1" | "1" | "+" | "plus" => Ok(Sign::Plus),
            "-1" | "-" | "minus" => Ok(Sign::Minus),
            other => Err(Error::InvalidConfig(format!("sign must be +1 or -1, got {other:?}"))),
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Sign, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_value(v).ok_or_else(|| serde::de::Error::custom("sign must be 1 or -1"))
    }
}

/// An additive character `β(x) = ζ_n^{Σ w_i x_i}`, where `x_i` are the
/// coefficient-slot values of `x` and `n` is the additive exponent of `B`.
#[derive(Clone)]
pub struct AdditiveCharacter {
    ring: Arc<FiniteRing>,
    order: u32,
    weights: Vec<u32>,
    table: Vec<u32>,
}

impl fmt::Debug for AdditiveCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AdditiveCharacter")
            .field("order", &self.order)
            .field("weights", &self.weights)
            .finish()
    }
}

/// Outcome of [`AdditiveCharacter::check_primitive`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Primitivity {
    /// `witnesses[b]` is some `c` with `β(bc) ≠ 1` (unused at `b = 0`).
    Primitive { witnesses: Vec<Elem> },
    /// A nonzero `b` with `β(bB) = 1`.
    Counterexample { b: Elem },
}

impl Primitivity {
    pub fn is_primitive(&self) -> bool {
        matches!(self, Primitivity::Primitive { .. })
    }
}

impl AdditiveCharacter {
    /// Builds the character with the given slot weights (reduced mod `n`).
    pub fn from_weights(ring: Arc<FiniteRing>, weights: &[u32]) -> Result<AdditiveCharacter> {
        let (slots, _) = ring.slot_layout();
        if weights.len() != slots {
            return Err(Error::InvalidConfig(format!(
                "character needs {slots} weights, got {}",
                weights.len()
            )));
        }
        let n = ring.exponent();
        let weights: Vec<u32> = weights.iter().map(|w| w % n).collect();
        let table = ring
            .elements()
            .map(|x| {
                let c = ring.coefficients(x);
                (c.iter().zip(&weights).map(|(&a, &w)| a as u64 * w as u64).sum::<u64>()
                    % n as u64) as u32
            })
            .collect();
        Ok(AdditiveCharacter { ring, order: n, weights, table })
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn ring_arc(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    /// The cyclotomic order `n` of the values.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn roots(&self) -> Roots {
        Roots::new(self.order)
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// `e` with `β(x) = ζ_n^e`.
    #[inline]
    pub fn exponent(&self, x: Elem) -> u32 {
        self.table[x as usize]
    }

    /// `β(x)` as a signed-root code.
    #[inline]
    pub fn code(&self, x: Elem) -> RootCode {
        2 * self.table[x as usize]
    }

    pub fn value(&self, x: Elem) -> Cyclotomic<i64> {
        Cyclotomic::root(self.order, self.exponent(x) as i64)
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|&e| e == 0)
    }

    /// Primitivity: no nonzero right ideal lies in the kernel.
    pub fn check_primitive(&self) -> Primitivity {
        let r = &self.ring;
        let mut witnesses = vec![0; r.size()];
        for b in r.elements().skip(1) {
            match r.elements().find(|&c| self.exponent(r.mul(b, c)) != 0) {
                Some(c) => witnesses[b as usize] = c,
                None => return Primitivity::Counterexample { b },
            }
        }
        Primitivity::Primitive { witnesses }
    }

    /// `β(b + εb*) = 1` for every `b`; returns the first failing `b` otherwise.
    pub fn check_epsilon(&self, eps: Sign) -> std::result::Result<(), Elem> {
        let r = &self.ring;
        match r.elements().find(|&b| self.exponent(r.add(b, eps.apply(r, r.star(b)))) != 0) {
            Some(b) => Err(b),
            None => Ok(()),
        }
    }
}

/// The slot weights of the closed-form character for each family, together
/// with the sign it is designed for.
fn recipe(ring: &FiniteRing) -> (Vec<u32>, Sign) {
    let (slots, _) = ring.slot_layout();
    let mut w = vec![0u32; slots];
    let sign = match ring.family() {
        // β = λ ∘ d with d the projection onto the fixed ring.
        Family::PrimeField | Family::IntegersModPk => {
            w[0] = 1;
            Sign::Minus
        }
        Family::QuadraticFrobenius | Family::GaloisRingFrobenius => {
            w[0] = 1;
            Sign::Minus
        }
        // d(r + sπ) = s.
        Family::RamifiedEven => {
            w[1] = 1;
            Sign::Plus
        }
        // β(Σ a_i t^i) = λ(a_{s-1} + a_{s-1}*), which is λ of twice the F_p part.
        Family::SkewPolyQuotient => {
            w[slots - 2] = 2;
            if (slots / 2) % 2 == 1 {
                Sign::Minus
            } else {
                Sign::Plus
            }
        }
        // β = λ ∘ trace.
        Family::Matrix2Adjugate => {
            w[0] = 1;
            w[3] = 1;
            Sign::Minus
        }
    };
    (w, sign)
}

/// All `|B|` additive characters, in weight-vector order (slot 0 least significant).
pub fn all_characters(ring: &Arc<FiniteRing>) -> Vec<AdditiveCharacter> {
    let (slots, q) = ring.slot_layout();
    (0..ring.size())
        .map(|mut idx| {
            let w: Vec<u32> = (0..slots)
                .map(|_| {
                    let x = (idx % q as usize) as u32;
                    idx /= q as usize;
                    x
                })
                .collect();
            AdditiveCharacter::from_weights(ring.clone(), &w).expect("weights fit the ring")
        })
        .collect()
}

/// A character satisfying primitivity and `ε`-compatibility.
///
/// Uses the family's closed-form recipe when it fits `ε`, and otherwise
/// scans all characters in weight order.
pub fn find_character(ring: &Arc<FiniteRing>, eps: Sign) -> Result<AdditiveCharacter> {
    let (w, sign) = recipe(ring);
    if sign == eps {
        let beta = AdditiveCharacter::from_weights(ring.clone(), &w)?;
        if beta.check_epsilon(eps).is_ok() && beta.check_primitive().is_primitive() {
            return Ok(beta);
        }
    }
    all_characters(ring)
        .into_iter()
        .skip(1)
        .find(|beta| beta.check_epsilon(eps).is_ok() && beta.check_primitive().is_primitive())
        .ok_or(Error::CharacterNotFound)
}
