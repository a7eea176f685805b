//! Dense univariate polynomials over any [`Ring`].
//!
//! Bivariate polynomials are `UniPoly<UniPoly<R>>`: the outer variable is
//! `y`, the inner one `x`.

use super::rational::Rational;
use super::ring::{Field, Ring};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq)]
pub struct UniPoly<R: Ring> {
    coeffs: Vec<R>,
    ctx: R::Ctx,
}

impl<R: Ring> UniPoly<R> {
    pub fn new(mut coeffs: Vec<R>, ctx: R::Ctx) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs, ctx }
    }

    /// Builds from coefficients, taking the context from the first one.
    /// Panics on an empty vector; use [`UniPoly::zero_in`] for that.
    pub fn from_coeffs(coeffs: Vec<R>) -> Self {
        let ctx = coeffs
            .first()
            .expect("from_coeffs needs at least one coefficient")
            .ctx();
        Self::new(coeffs, ctx)
    }

    pub fn zero_in(ctx: &R::Ctx) -> Self {
        UniPoly {
            coeffs: Vec::new(),
            ctx: ctx.clone(),
        }
    }

    pub fn one_in(ctx: &R::Ctx) -> Self {
        Self::constant(R::one(ctx))
    }

    pub fn constant(c: R) -> Self {
        let ctx = c.ctx();
        Self::new(vec![c], ctx)
    }

    /// The polynomial `t`.
    pub fn var(ctx: &R::Ctx) -> Self {
        Self::monomial(R::one(ctx), 1)
    }

    pub fn monomial(c: R, k: usize) -> Self {
        let ctx = c.ctx();
        let mut v = vec![R::zero(&ctx); k];
        v.push(c);
        Self::new(v, ctx)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff_ctx(&self) -> &R::Ctx {
        &self.ctx
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| R::zero(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.times(&R::from_i64(&self.ctx, i as i64)))
            .collect();
        Self::new(v, self.ctx.clone())
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(
            self.coeffs.iter().map(|a| a.times(c)).collect(),
            self.ctx.clone(),
        )
    }

    pub fn map<S: Ring>(&self, ctx: &S::Ctx, f: impl Fn(&R) -> S) -> UniPoly<S> {
        UniPoly::new(self.coeffs.iter().map(f).collect(), ctx.clone())
    }

    /// `self(g)` by Horner's rule.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero_in(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![R::zero(&self.ctx); k];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v, self.ctx.clone())
    }

    /// Long division with exact leading-coefficient quotients. Returns `None`
    /// when some step is not exactly divisible.
    pub fn div_rem_exact(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        let lc = d.lead()?.clone();
        let mut r = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return Some((Self::zero_in(&self.ctx), self.clone()));
        }
        let mut q = vec![R::zero(&self.ctx); n - dd];
        for i in (dd..n).rev() {
            if r[i].is_zero() {
                continue;
            }
            let c = r[i].div_exact(&lc)?;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = r[i - dd + j].minus(&c.times(dc));
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        Some((Self::new(q, self.ctx.clone()), Self::new(r, self.ctx.clone())))
    }

    /// Pseudo-remainder `lc(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("pseudo_rem by zero");
        let lc = d.lead().unwrap().clone();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.lead().unwrap().clone();
            r = &r.scale(&lc) - &d.scale(&c).shift_up(rd - dd);
        }
        r
    }
}

impl<R: Field> UniPoly<R> {
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let lc_inv = d.lead().expect("division by zero polynomial").inv().unwrap();
        let dd = d.degree().unwrap();
        let n = self.coeffs.len();
        if n <= dd {
            return (Self::zero_in(&self.ctx), self.clone());
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![R::zero(&self.ctx); n - dd];
        for i in (dd..n).rev() {
            if r[i].is_zero() {
                continue;
            }
            let c = r[i].times(&lc_inv);
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = r[i - dd + j].minus(&c.times(dc));
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (Self::new(q, self.ctx.clone()), Self::new(r, self.ctx.clone()))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().unwrap()),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let ctx = self.ctx.clone();
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one_in(&ctx), Self::zero_in(&ctx));
        let (mut t0, mut t1) = (Self::zero_in(&ctx), Self::one_in(&ctx));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lead().cloned() {
            Some(lc) => {
                let li = lc.inv().unwrap();
                (r0.scale(&li), s0.scale(&li), t0.scale(&li))
            }
            None => (r0, s0, t0),
        }
    }

    /// `base^e mod m`.
    pub fn pow_mod(&self, e: &num_bigint::BigUint, m: &Self) -> Self {
        let mut acc = Self::one_in(&self.ctx).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = (&acc * &acc).rem(m);
            if e.bit(i) {
                acc = (&acc * &base).rem(m);
            }
        }
        acc
    }
}

impl<R: Ring> Ring for UniPoly<R> {
    type Ctx = R::Ctx;

    fn ctx(&self) -> R::Ctx {
        self.ctx.clone()
    }
    fn zero(ctx: &R::Ctx) -> Self {
        Self::zero_in(ctx)
    }
    fn one(ctx: &R::Ctx) -> Self {
        Self::one_in(ctx)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        let (q, r) = self.div_rem_exact(rhs)?;
        r.is_zero().then_some(q)
    }
}

impl<'a, R: Ring> Add<&'a UniPoly<R>> for &'a UniPoly<R> {
    type Output = UniPoly<R>;
    fn add(self, rhs: &UniPoly<R>) -> UniPoly<R> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a.plus(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        UniPoly::new(v, self.ctx.clone())
    }
}

impl<'a, R: Ring> Sub<&'a UniPoly<R>> for &'a UniPoly<R> {
    type Output = UniPoly<R>;
    fn sub(self, rhs: &UniPoly<R>) -> UniPoly<R> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a.minus(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.negate(),
                (None, None) => unreachable!(),
            })
            .collect();
        UniPoly::new(v, self.ctx.clone())
    }
}

impl<'a, R: Ring> Mul<&'a UniPoly<R>> for &'a UniPoly<R> {
    type Output = UniPoly<R>;
    fn mul(self, rhs: &UniPoly<R>) -> UniPoly<R> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero_in(&self.ctx);
        }
        let mut v = vec![R::zero(&self.ctx); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].plus(&a.times(b));
            }
        }
        UniPoly::new(v, self.ctx.clone())
    }
}

impl<R: Ring> Neg for &UniPoly<R> {
    type Output = UniPoly<R>;
    fn neg(self) -> UniPoly<R> {
        UniPoly::new(
            self.coeffs.iter().map(|c| c.negate()).collect(),
            self.ctx.clone(),
        )
    }
}

impl<R: Ring> fmt::Debug for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c:?})")?,
                1 => write!(f, "({c:?})*t")?,
                _ => write!(f, "({c:?})*t^{i}")?,
            }
        }
        Ok(())
    }
}

pub type QPoly = UniPoly<Rational>;

impl<R: super::ring::QAlgebra> super::ring::QAlgebra for UniPoly<R> {
    fn from_q(ctx: &R::Ctx, q: &Rational) -> Self {
        UniPoly::new(vec![R::from_q(ctx, q)], ctx.clone())
    }
}
pub type BiPoly = UniPoly<UniPoly<Rational>>;

/// Polynomial over Q from small integer coefficients, constant term first.
pub fn qpoly(coeffs: &[i64]) -> QPoly {
    UniPoly::new(
        coeffs.iter().map(|&c| Rational::from_i64(&(), c)).collect(),
        (),
    )
}

pub fn qpoly_rat(coeffs: Vec<Rational>) -> QPoly {
    UniPoly::new(coeffs, ())
}

impl QPoly {
    /// Clears denominators and the integer content: the primitive integer
    /// polynomial with positive leading coefficient proportional to `self`.
    pub fn primitive_integer(&self) -> Vec<num_bigint::BigInt> {
        use num_integer::Integer;
        use num_traits::{Signed, Zero};
        let lcm = self
            .coeffs()
            .iter()
            .fold(num_bigint::BigInt::from(1), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<num_bigint::BigInt> = self
            .coeffs()
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints
            .iter()
            .fold(num_bigint::BigInt::zero(), |acc, c| acc.gcd(c));
        if !g.is_zero() {
            for c in ints.iter_mut() {
                *c = &*c / &g;
            }
        }
        if ints.last().is_some_and(|c| c.is_negative()) {
            for c in ints.iter_mut() {
                *c = -&*c;
            }
        }
        ints
    }

    /// Distinct rational roots, ascending, by the rational root test on the
    /// primitive integer multiple.
    pub fn rational_roots(&self) -> Vec<Rational> {
        use super::rational::factor_integer;
        use num_bigint::{BigInt, BigUint};
        use num_traits::{Signed, Zero};
        fn divisors(n: &BigInt) -> Vec<BigInt> {
            let mut out = vec![BigInt::from(1)];
            for (p, e) in factor_integer(&n.abs().to_biguint().unwrap()) {
                let mut next = Vec::new();
                for d in &out {
                    let mut pk = BigUint::from(1u32);
                    for _ in 0..=e {
                        next.push(d * BigInt::from(pk.clone()));
                        pk *= &p;
                    }
                }
                out = next;
            }
            out
        }
        if self.degree().is_none_or(|d| d == 0) {
            return vec![];
        }
        let mut ints = self.primitive_integer();
        let mut roots = Vec::new();
        if ints[0].is_zero() {
            roots.push(<Rational as Zero>::zero());
            let k = ints.iter().position(|c| !c.is_zero()).unwrap();
            ints.drain(..k);
        }
        if ints.len() > 1 {
            let f = QPoly::from_coeffs(ints.iter().cloned().map(Rational::from_integer).collect());
            let lead = divisors(ints.last().unwrap());
            for a in divisors(&ints[0]) {
                for b in &lead {
                    for s in [1, -1] {
                        let q = Rational::new(&a * s, b.clone());
                        if !roots.contains(&q) && Zero::is_zero(&f.eval(&q)) {
                            roots.push(q);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

/// Bivariate helpers. `x` is the inner variable, `y` the outer one.
pub mod bivariate {
    use super::*;

    pub fn x() -> BiPoly {
        BiPoly::constant(qpoly(&[0, 1]))
    }

    pub fn y() -> BiPoly {
        BiPoly::var(&())
    }

    pub fn constant(c: Rational) -> BiPoly {
        BiPoly::constant(QPoly::constant(c))
    }

    pub fn eval<R: Ring>(p: &BiPoly, x: &R, y: &R, embed: impl Fn(&Rational) -> R) -> R {
        let ctx = x.ctx();
        let mut acc = R::zero(&ctx);
        for c in p.coeffs().iter().rev() {
            let mut inner = R::zero(&ctx);
            for a in c.coeffs().iter().rev() {
                inner = inner.times(x).plus(&embed(a));
            }
            acc = acc.times(y).plus(&inner);
        }
        acc
    }

    pub fn d_dy(p: &BiPoly) -> BiPoly {
        p.derivative()
    }

    pub fn d_dx(p: &BiPoly) -> BiPoly {
        BiPoly::new(p.coeffs().iter().map(|c| c.derivative()).collect(), ())
    }

    pub fn total_degree(p: &BiPoly) -> Option<usize> {
        p.coeffs()
            .iter()
            .enumerate()
            .filter_map(|(j, c)| c.degree().map(|d| d + j))
            .max()
    }

    fn content(p: &BiPoly) -> QPoly {
        p.coeffs()
            .iter()
            .fold(QPoly::zero_in(&()), |acc, c| acc.gcd(c))
    }

    fn primitive(p: &BiPoly) -> BiPoly {
        let c = content(p);
        if c.is_zero() {
            return p.clone();
        }
        BiPoly::new(
            p.coeffs().iter().map(|a| a.div_rem(&c).0).collect(),
            (),
        )
    }

    /// Gcd in `Q[x][y]`, normalized to be monic in its leading coefficient
    /// (as a polynomial in `x`) of the leading `y`-term.
    pub fn gcd(a: &BiPoly, b: &BiPoly) -> BiPoly {
        if a.is_zero() {
            return normalize(b);
        }
        if b.is_zero() {
            return normalize(a);
        }
        let cont = content(a).gcd(&content(b));
        let mut u = primitive(a);
        let mut v = primitive(b);
        if u.degree() < v.degree() {
            std::mem::swap(&mut u, &mut v);
        }
        while !v.is_zero() {
            let r = u.pseudo_rem(&v);
            u = v;
            v = if r.is_zero() { r } else { primitive(&r) };
        }
        let g = primitive(&u).scale(&cont);
        normalize(&g)
    }

    fn normalize(p: &BiPoly) -> BiPoly {
        match p.lead().and_then(|c| c.lead().cloned()) {
            Some(lc) => {
                let inv = QPoly::constant(lc.inv().unwrap());
                p.scale(&inv)
            }
            None => p.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::rational::{int, rat};

    #[test]
    fn rational_root_examples() {
        let f = &(&qpoly(&[0, -1, 0, 1]) * &qpoly(&[-1, 2])) * &qpoly(&[2, 0, 1]);
        assert_eq!(f.rational_roots(), vec![int(-1), int(0), rat(1, 2), int(1)]);
        assert!(qpoly(&[-2, 0, 1]).rational_roots().is_empty());
    }

    #[test]
    fn arithmetic_and_gcd() {
        let a = qpoly(&[-1, 0, 1]);
        let b = qpoly(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, qpoly(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&qpoly(&[-1, 1])), qpoly(&[-1, 1]));
        assert_eq!(qpoly(&[1, 0, 1]).gcd(&qpoly(&[-1, 1])), qpoly(&[1]));
    }

    #[test]
    fn ext_gcd_identity() {
        let a = qpoly(&[3, 0, 2, 1]);
        let b = qpoly(&[1, -1, 0, 0, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn compose_and_derivative() {
        let p = qpoly(&[0, 0, 1]);
        let g = qpoly(&[1, 1]);
        assert_eq!(p.compose(&g), qpoly(&[1, 2, 1]));
        assert_eq!(qpoly(&[5, 3, 2]).derivative(), qpoly(&[3, 4]));
    }

    #[test]
    fn bivariate_gcd_finds_common_factor() {
        use bivariate::{x, y};
        // (x + y)(x - 2y) and (x + y)(y + 1)
        let f = &x() + &y();
        let a = &f * &(&x() - &y().scale(&QPoly::constant(Rational::from_i64(&(), 2))));
        let b = &f * &(&y() + &bivariate::constant(Rational::from_i64(&(), 1)));
        let g = bivariate::gcd(&a, &b);
        assert_eq!(g, f);
        let one = bivariate::gcd(&x(), &y());
        assert_eq!(bivariate::total_degree(&one), Some(0));
    }
}
