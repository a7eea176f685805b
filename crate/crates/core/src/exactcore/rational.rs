//! Rational numbers backed by `num_rational::BigRational`.

use super::ring::{Field, Ring};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Reduced fraction with positive denominator.
pub type Rational = BigRational;

impl Ring for BigRational {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: &()) -> Self {
        <BigRational as Zero>::zero()
    }
    fn one(_: &()) -> Self {
        <BigRational as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
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
        if Zero::is_zero(rhs) {
            None
        } else {
            Some(self / rhs)
        }
    }
    fn from_i64(_: &(), n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl super::ring::QAlgebra for BigRational {
    fn from_q(_: &(), q: &Rational) -> Self {
        q.clone()
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn from_bigint(n: BigInt) -> Rational {
    BigRational::from_integer(n)
}

/// Multiplicity of the prime `p` in a nonzero integer.
pub fn int_val(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// The exponent `n` with `q = p^n * k / l`, `p` dividing neither `k` nor `l`.
pub fn rat_val(q: &Rational, p: u64) -> Result<i64> {
    if Zero::is_zero(q) {
        return Err(Error::ValuationOfZero);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(int_val(q.numer(), p) as i64 - int_val(q.denom(), p) as i64)
}

/// `|q|_p = p^{-v_p(q)}` as an exact rational.
pub fn padic_abs(q: &Rational, p: u64) -> Result<Rational> {
    if Zero::is_zero(q) {
        return Ok(<Rational as Zero>::zero());
    }
    let v = rat_val(q, p)?;
    Ok(rat_pow(&int(p as i64), -v))
}

pub fn rat_pow(q: &Rational, e: i64) -> Rational {
    if e >= 0 {
        Ring::pow(q, e as u64)
    } else {
        Ring::pow(&q.recip(), e.unsigned_abs())
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factors of a positive integer by trial division, ascending, with
/// multiplicity. Intended for the small and smooth numbers that show up in
/// norms and denominators here.
pub fn factor_integer(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out = Vec::new();
    let mut n = n.clone();
    if n.is_zero() {
        return out;
    }
    let mut d = BigUint::from(2u32);
    while &d * &d <= n {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1u32;
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rat_sqrt_exact(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().to_biguint()?;
    let d = q.denom().to_biguint()?;
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &sn * &sn == n && &sd * &sd == d {
        Some(BigRational::new(BigInt::from(sn), BigInt::from(sd)))
    } else {
        None
    }
}

/// Serialized form used in reports: `"num/den"`, or `"num"` for integers.
pub fn rat_to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(rat_val(&rat(2, 3), 3).unwrap(), -1);
        assert_eq!(rat_val(&int(63), 3).unwrap(), 2);
        assert_eq!(rat_val(&int((1 << 18) - 1), 3).unwrap(), 3);
        assert!(matches!(rat_val(&int(0), 3), Err(Error::ValuationOfZero)));
    }

    #[test]
    fn factor_262143() {
        let f = factor_integer(&BigUint::from(262143u32));
        let f: Vec<(u32, u32)> = f
            .into_iter()
            .map(|(p, e)| (p.try_into().unwrap(), e))
            .collect();
        assert_eq!(f, vec![(3, 3), (7, 1), (19, 1), (73, 1)]);
    }

    #[test]
    fn parse_and_print() {
        let q = parse_rational("-6/4").unwrap();
        assert_eq!(rat_to_string(&q), "-3/2");
        assert_eq!(rat_to_string(&parse_rational("7").unwrap()), "7");
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn exact_sqrt() {
        assert_eq!(rat_sqrt_exact(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rat_sqrt_exact(&int(54)), None);
    }
}
