//! Finite fields `GF(p^m)` with a canonical modulus per `(p, m)`.
//!
//! The canonical modulus is the monic irreducible of degree `m` whose
//! coefficient vector, read from `t^{m-1}` down to `t^0`, is
//! lexicographically least (equivalently, minimal `sum c_i p^i`).

use super::poly::UniPoly;
use super::rational::is_prime;
use super::ring::{Field, Ring};
use crate::{Error, Result};
use num_bigint::BigUint;
use rand::Rng;
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq)]
pub struct GfField {
    p: u64,
    m: usize,
    /// Monic, constant term first, length `m + 1`.
    modulus: Vec<u64>,
}

pub type Gf = Arc<GfField>;

impl fmt::Debug for GfField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.m)
    }
}

impl GfField {
    /// The prime field `GF(p)`.
    pub fn prime(p: u64) -> Result<Gf> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::NotPrime(p));
        }
        Ok(Arc::new(GfField {
            p,
            m: 1,
            modulus: vec![0, 1],
        }))
    }

    /// `GF(p^m)` with the canonical modulus.
    pub fn new(p: u64, m: usize) -> Result<Gf> {
        let fp = Self::prime(p)?;
        if m == 0 {
            return Err(Error::Precondition("extension degree must be positive".into()));
        }
        if m == 1 {
            return Ok(fp);
        }
        let modulus = canonical_modulus(&fp, m);
        Ok(Arc::new(GfField { p, m, modulus }))
    }

    /// Extension with an explicit monic modulus (constant term first).
    /// Irreducibility is checked.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Gf> {
        let fp = Self::prime(p)?;
        let m = modulus.len() - 1;
        if modulus[m] != 1 || m == 0 {
            return Err(Error::Precondition("modulus must be monic of positive degree".into()));
        }
        let poly = UniPoly::new(modulus.iter().map(|&c| fp.elem(c)).collect(), fp.clone());
        if !is_irreducible(&poly) {
            return Err(Error::Precondition("modulus is reducible".into()));
        }
        Ok(Arc::new(GfField { p, m, modulus }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.m as u32)
    }

    /// Element of the prime subfield.
    pub fn elem(self: &Arc<Self>, c: u64) -> GfElem {
        let mut rep = vec![0; self.m];
        rep[0] = c % self.p;
        GfElem {
            field: self.clone(),
            rep,
        }
    }

    pub fn elem_i64(self: &Arc<Self>, c: i64) -> GfElem {
        self.elem(c.rem_euclid(self.p as i64) as u64)
    }

    pub fn from_rep(self: &Arc<Self>, rep: &[u64]) -> GfElem {
        let mut r: Vec<u64> = rep.iter().map(|&c| c % self.p).collect();
        r.resize(self.m.max(r.len()), 0);
        GfElem::reduce_raw(self, r)
    }

    /// The class of `t` (a primitive-ish generator of the power basis).
    pub fn gen(self: &Arc<Self>) -> GfElem {
        if self.m == 1 {
            // t is 0 modulo the degree-one modulus t
            return self.elem(0);
        }
        let mut rep = vec![0; self.m];
        rep[1] = 1;
        GfElem {
            field: self.clone(),
            rep,
        }
    }

    /// Element with base-`p` digits of `index` as representative.
    pub fn from_index(self: &Arc<Self>, mut index: u64) -> GfElem {
        let mut rep = vec![0; self.m];
        for r in rep.iter_mut() {
            *r = index % self.p;
            index /= self.p;
        }
        GfElem {
            field: self.clone(),
            rep,
        }
    }

    /// All elements in canonical (index) order. Only for small fields.
    pub fn elements(self: &Arc<Self>) -> Vec<GfElem> {
        let q: u64 = self.p.pow(self.m as u32);
        (0..q).map(|i| self.from_index(i)).collect()
    }

    pub fn random<R: Rng>(self: &Arc<Self>, rng: &mut R) -> GfElem {
        let rep = (0..self.m).map(|_| rng.gen_range(0..self.p)).collect();
        GfElem {
            field: self.clone(),
            rep,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GfElem {
    field: Gf,
    rep: Vec<u64>,
}

impl std::hash::Hash for GfField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.modulus.hash(state);
    }
}

impl fmt::Debug for GfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.m == 1 {
            return write!(f, "{}", self.rep[0]);
        }
        write!(f, "[")?;
        for (i, c) in self.rep.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl PartialOrd for GfElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GfElem {
    /// Lexicographic on representatives, highest coefficient first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.rep.iter().rev().cmp(other.rep.iter().rev())
    }
}

impl GfElem {
    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn rep(&self) -> &[u64] {
        &self.rep
    }

    pub fn index(&self) -> u64 {
        self.rep
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.field.p + c)
    }

    /// Value in the prime field, if the element lies there.
    pub fn as_prime(&self) -> Option<u64> {
        self.rep[1..].iter().all(|&c| c == 0).then_some(self.rep[0])
    }

    /// Representative in `(-p/2, p/2]`, for prime-field elements.
    pub fn as_prime_symmetric(&self) -> Option<i64> {
        let v = self.as_prime()? as i64;
        let p = self.field.p as i64;
        Some(if 2 * v > p { v - p } else { v })
    }

    fn reduce_raw(field: &Gf, mut r: Vec<u64>) -> GfElem {
        let p = field.p as u128;
        let m = field.m;
        // subtract multiples of the monic modulus from the top down
        for i in (m..r.len()).rev() {
            let c = r[i] as u128;
            if c == 0 {
                continue;
            }
            for j in 0..m {
                let sub = (c * field.modulus[j] as u128) % p;
                r[i - m + j] = ((r[i - m + j] as u128 + p - sub) % p) as u64;
            }
            r[i] = 0;
        }
        r.truncate(m);
        r.resize(m, 0);
        GfElem {
            field: field.clone(),
            rep: r,
        }
    }

    pub fn frobenius(&self) -> GfElem {
        Ring::pow(self, self.field.p)
    }

    pub fn pow_big(&self, e: &BigUint) -> GfElem {
        let mut acc = GfElem::one(&self.field);
        for i in (0..e.bits()).rev() {
            acc = acc.times(&acc);
            if e.bit(i) {
                acc = acc.times(self);
            }
        }
        acc
    }
}

impl Ring for GfElem {
    type Ctx = Gf;

    fn ctx(&self) -> Gf {
        self.field.clone()
    }
    fn zero(ctx: &Gf) -> Self {
        ctx.elem(0)
    }
    fn one(ctx: &Gf) -> Self {
        ctx.elem(1)
    }
    fn is_zero(&self) -> bool {
        self.rep.iter().all(|&c| c == 0)
    }
    fn plus(&self, rhs: &Self) -> Self {
        let p = self.field.p;
        GfElem {
            field: self.field.clone(),
            rep: self
                .rep
                .iter()
                .zip(&rhs.rep)
                .map(|(a, b)| (a + b) % p)
                .collect(),
        }
    }
    fn minus(&self, rhs: &Self) -> Self {
        let p = self.field.p;
        GfElem {
            field: self.field.clone(),
            rep: self
                .rep
                .iter()
                .zip(&rhs.rep)
                .map(|(a, b)| (a + p - b) % p)
                .collect(),
        }
    }
    fn times(&self, rhs: &Self) -> Self {
        let p = self.field.p as u128;
        let m = self.field.m;
        let mut r = vec![0u64; 2 * m - 1];
        for (i, &a) in self.rep.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.rep.iter().enumerate() {
                r[i + j] = ((r[i + j] as u128 + a as u128 * b as u128) % p) as u64;
            }
        }
        GfElem::reduce_raw(&self.field, r)
    }
    fn negate(&self) -> Self {
        let p = self.field.p;
        GfElem {
            field: self.field.clone(),
            rep: self.rep.iter().map(|&a| (p - a) % p).collect(),
        }
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        self.divide(rhs)
    }
    fn from_i64(ctx: &Gf, n: i64) -> Self {
        ctx.elem_i64(n)
    }
}

impl Field for GfElem {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let e = self.field.order() - BigUint::from(2u32);
        Some(self.pow_big(&e))
    }
}

/// `a + a^p + ... + a^{p^{m-1}}`, returned as an element of `GF(p)`.
pub fn gf_trace(a: &GfElem) -> GfElem {
    let mut acc = a.clone();
    let mut cur = a.clone();
    for _ in 1..a.field.m {
        cur = cur.frobenius();
        acc = acc.plus(&cur);
    }
    let v = acc
        .as_prime()
        .expect("trace lands in the prime field");
    GfField::prime(a.field.p).unwrap().elem(v)
}

/// Ben-Or irreducibility test over a prime field.
pub fn is_irreducible(f: &UniPoly<GfElem>) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let fp = f.coeff_ctx().clone();
    let q = fp.order();
    let f = f.monic();
    let x = UniPoly::var(&fp);
    let mut h = x.clone();
    for _ in 0..n / 2 {
        h = h.pow_mod(&q, &f);
        let g = f.gcd(&(&h - &x));
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

fn canonical_modulus(fp: &Gf, m: usize) -> Vec<u64> {
    let p = fp.p;
    let count = p.pow(m as u32);
    for idx in 0..count {
        let mut coeffs = Vec::with_capacity(m + 1);
        let mut k = idx;
        for _ in 0..m {
            coeffs.push(k % p);
            k /= p;
        }
        if coeffs[0] == 0 {
            continue;
        }
        coeffs.push(1);
        let poly = UniPoly::new(coeffs.iter().map(|&c| fp.elem(c)).collect(), fp.clone());
        if is_irreducible(&poly) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Exhaustive check that `f` over GF(p) has no factor; used only by tests
/// as an independent route.
#[cfg(test)]
pub(crate) fn is_irreducible_bruteforce(f: &UniPoly<GfElem>) -> bool {
    let n = f.degree().unwrap();
    let fp = f.coeff_ctx().clone();
    for d in 1..=n / 2 {
        let count = fp.p.pow(d as u32);
        for idx in 0..count {
            let mut coeffs: Vec<GfElem> = Vec::new();
            let mut k = idx;
            for _ in 0..d {
                coeffs.push(fp.elem(k % fp.p));
                k /= fp.p;
            }
            coeffs.push(fp.elem(1));
            let g = UniPoly::new(coeffs, fp.clone());
            if f.rem(&g).is_zero() {
                return false;
            }
        }
    }
    true
}
