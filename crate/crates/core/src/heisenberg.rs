//! The Heisenberg group `H = B × V`, the unitary action on it and the
//! Schrödinger representation on `X` with basis `(e_z)_{z∈N}`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::character::AdditiveCharacter;
use crate::error::{Error, Result};
use crate::hermitian::{Columns, HermitianSpace};
use crate::matrix::Mat;
use crate::operator::Operator;
use crate::report::Check;
use crate::ring::Elem;
use crate::CycQ;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HeisenbergElement {
    pub b: Elem,
    pub u: Vec<Elem>,
}

impl HeisenbergElement {
    pub fn new(b: Elem, u: Vec<Elem>) -> HeisenbergElement {
        HeisenbergElement { b, u }
    }

    pub fn central(space: &HermitianSpace, b: Elem) -> HeisenbergElement {
        HeisenbergElement { b, u: vec![0; 2 * space.m()] }
    }
}

/// `(b, u)(c, v) = (b + c + h(u, v), u + v)`.
pub fn h_mul(space: &HermitianSpace, x: &HeisenbergElement, y: &HeisenbergElement) -> HeisenbergElement {
    let r = space.ring();
    let b = r.add(r.add(x.b, y.b), space.form(&x.u, &y.u));
    let u = x.u.iter().zip(&y.u).map(|(&a, &c)| r.add(a, c)).collect();
    HeisenbergElement { b, u }
}

/// `(b, u)⁻¹ = (-b + h(u, u), -u)`.
pub fn h_inv(space: &HermitianSpace, x: &HeisenbergElement) -> HeisenbergElement {
    let r = space.ring();
    let b = r.add(r.neg(x.b), space.form(&x.u, &x.u));
    HeisenbergElement { b, u: x.u.iter().map(|&a| r.neg(a)).collect() }
}

/// `ᵍ(b, u) = (b, gu)`.
pub fn u_act(space: &HermitianSpace, g: &Mat, x: &HeisenbergElement) -> HeisenbergElement {
    HeisenbergElement { b: x.b, u: space.apply(g, &x.u) }
}

/// All elements of `H`, in index order of `(b, u)`.
pub fn elements(space: &HermitianSpace) -> Result<Vec<HeisenbergElement>> {
    let vcols = Columns::new(space.ring_arc().clone(), 2 * space.m())?;
    let q = space.ring().size();
    let total = vcols.dim().checked_mul(q).filter(|&t| t <= 1 << 22);
    total.ok_or_else(|| Error::ScaleGuard("Heisenberg group too large to list".into()))?;
    let mut out = Vec::with_capacity(vcols.dim() * q);
    for u in 0..vcols.dim() {
        for b in 0..q as Elem {
            out.push(HeisenbergElement { b, u: vcols.coords(u).to_vec() });
        }
    }
    Ok(out)
}

/// The Schrödinger representation for a fixed space and character.
#[derive(Clone, Debug)]
pub struct Schrodinger<'a> {
    space: &'a HermitianSpace,
    beta: &'a AdditiveCharacter,
    cols: Columns,
}

impl<'a> Schrodinger<'a> {
    pub fn new(space: &'a HermitianSpace, beta: &'a AdditiveCharacter) -> Result<Schrodinger<'a>> {
        let cols = Columns::new(space.ring_arc().clone(), space.m())?;
        Ok(Schrodinger { space, beta, cols })
    }

    pub fn space(&self) -> &HermitianSpace {
        self.space
    }

    pub fn beta(&self) -> &AdditiveCharacter {
        self.beta
    }

    pub fn columns(&self) -> &Columns {
        &self.cols
    }

    pub fn dim(&self) -> usize {
        self.cols.dim()
    }

    /// `S(b, x + y)` with `x ∈ M`, `y ∈ N`, factored as
    /// `S(b - h(x, y), 0) S(x, 0) S(0, y)`, so that
    /// `e_z ↦ β(b + x*y + 2x*z) e_{z+y}`.
    pub fn operator(&self, h: &HeisenbergElement) -> Operator {
        let r = self.space.ring();
        let m = self.space.m();
        let (x, y) = h.u.split_at(m);
        let yi = self.cols.index(y);
        let base = r.add(h.b, r.dot_star(x, y));
        let xi = self.cols.index(x);
        let d = self.dim();
        let mut perm = Vec::with_capacity(d);
        let mut codes = Vec::with_capacity(d);
        for z in 0..d {
            perm.push(self.cols.add(z, yi) as u32);
            let xz = self.cols.dot(xi, z);
            codes.push(self.beta.code(r.add(base, r.add(xz, xz))));
        }
        Operator::monomial(self.beta.order(), perm, codes)
    }

    /// `χ_β(b, u) = tr S(b, u)`.
    pub fn chi(&self, h: &HeisenbergElement) -> CycQ {
        self.operator(h).trace()
    }

    pub fn degree(&self) -> usize {
        self.dim()
    }

    /// Generators of `H`: the central `(g, 0)` and `(0, g e_i)` for additive generators.
    pub fn generators(&self) -> Vec<HeisenbergElement> {
        let r = self.space.ring();
        let n = 2 * self.space.m();
        let mut out: Vec<HeisenbergElement> =
            r.additive_generators().into_iter().map(|g| HeisenbergElement::central(self.space, g)).collect();
        for i in 0..n {
            for g in r.additive_generators() {
                let mut u = vec![0; n];
                u[i] = g;
                out.push(HeisenbergElement { b: 0, u });
            }
        }
        out
    }
}

/// Irreducibility certificate: `Σ_{x∈H} |χ_β(x)|²` against `|H|`.
pub fn character_norm(s: &Schrodinger<'_>) -> Result<(CycQ, usize)> {
    let all = elements(s.space())?;
    let order = s.beta().order();
    let mut acc = CycQ::zero(order);
    for x in &all {
        let c = s.chi(x);
        if !c.is_zero() {
            acc = &acc + &(&c * &c.conj());
        }
    }
    Ok((acc, all.len()))
}

/// Computes `N^⊥` and `N^†` for the submodule generated by `gens` and checks
/// `N^⊥ = N^†` and `|V| = |N| |N^⊥|`.
pub fn perp_check(space: &HermitianSpace, beta: &AdditiveCharacter, gens: &[Vec<Elem>]) -> Result<Check> {
    let r = space.ring();
    let vcols = Columns::new(space.ring_arc().clone(), 2 * space.m())?;
    if vcols.dim() > 10_000 {
        return Err(Error::ScaleGuard("|V| above 10^4".into()));
    }
    // Submodule generated under addition and right scalar multiplication.
    let mut sub: BTreeSet<usize> = BTreeSet::from([0]);
    let mut frontier = vec![0usize];
    let mut seeds = Vec::new();
    for g in gens {
        for b in r.elements() {
            let gb: Vec<Elem> = g.iter().map(|&x| r.mul(x, b)).collect();
            seeds.push(vcols.index(&gb));
        }
    }
    while let Some(v) = frontier.pop() {
        for &s in &seeds {
            let w = vcols.add(v, s);
            if sub.insert(w) {
                frontier.push(w);
            }
        }
    }
    let mut perp = Vec::new();
    let mut dagger = Vec::new();
    for u in 0..vcols.dim() {
        let uc = vcols.coords(u);
        let mut in_perp = true;
        let mut in_dagger = true;
        for &v in &sub {
            let h = space.form(uc, vcols.coords(v));
            in_perp &= h == 0;
            in_dagger &= beta.exponent(r.add(h, h)) == 0;
        }
        if in_perp {
            perp.push(u);
        }
        if in_dagger {
            dagger.push(u);
        }
    }
    let mut c = Check::exhaustive("perp");
    c.record_with(perp == dagger, || format!("|N^perp| = {}, |N^dagger| = {}", perp.len(), dagger.len()));
    c.record_with(sub.len() * perp.len() == vcols.dim(), || {
        format!("|N| = {}, |N^perp| = {}, |V| = {}", sub.len(), perp.len(), vcols.dim())
    });
    Ok(c.with_detail_if_pass(format!("|N| = {}, |N^perp| = {}", sub.len(), perp.len())))
}
