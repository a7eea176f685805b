//! Minimal algebraic traits shared by the polynomial, matrix and
//! finite-field code.
//!
//! Elements of some rings (finite fields) need a context to build
//! constants, so every ring names a `Ctx` type that travels with values.

use std::fmt::Debug;

pub trait Ring: Clone + PartialEq + Debug {
    type Ctx: Clone + PartialEq + Debug;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;

    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;

    /// Exact quotient `self / rhs`, or `None` when `rhs` does not divide `self`.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }

    fn from_i64(ctx: &Self::Ctx, n: i64) -> Self {
        let mut acc = Self::zero(ctx);
        let mut base = Self::one(ctx);
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.plus(&base);
            }
            base = base.plus(&base);
            k >>= 1;
        }
        if n < 0 {
            acc.negate()
        } else {
            acc
        }
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.ctx());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }
}

pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;

    fn divide(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.times(&r))
    }
}

/// Rings containing `Q`, so rational coefficients can be embedded.
pub trait QAlgebra: Ring {
    fn from_q(ctx: &Self::Ctx, q: &super::rational::Rational) -> Self;
}
