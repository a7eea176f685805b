//! Certified real intervals and complex boxes with dyadic rational
//! endpoints, rounded outward to a working precision in bits.

use crate::exactcore::rational::Rational;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Rounding direction for dyadic truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
    Nearest,
}

fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

/// Round `q` to a dyadic number with about `prec` significant bits.
pub fn round_dyadic(q: &Rational, prec: u32, dir: Round) -> Rational {
    if q.is_zero() {
        return q.clone();
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    // |q| lies in [2^(nb-db-1), 2^(nb-db+1))
    let shift = prec as i64 - (nb - db);
    let (num, den) = if shift >= 0 {
        (q.numer() << shift as u64, q.denom().clone())
    } else {
        (q.numer().clone(), q.denom() << (-shift) as u64)
    };
    let (fl, rem) = num.div_mod_floor(&den);
    let m = match dir {
        Round::Down => fl,
        Round::Up => {
            if rem.is_zero() {
                fl
            } else {
                fl + 1
            }
        }
        Round::Nearest => {
            if (&rem << 1u32) >= den {
                fl + 1
            } else {
                fl
            }
        }
    };
    if shift >= 0 {
        Rational::new(m, pow2(shift as u64))
    } else {
        Rational::from_integer(m * pow2((-shift) as u64))
    }
}

/// Round `q` to an integer multiple of `2^exp`.
pub fn round_to_exp(q: &Rational, exp: i64, dir: Round) -> Rational {
    let (num, den) = if exp <= 0 {
        (q.numer() << (-exp) as u64, q.denom().clone())
    } else {
        (q.numer().clone(), q.denom() << exp as u64)
    };
    let (fl, rem) = num.div_mod_floor(&den);
    let m = match dir {
        Round::Down => fl,
        Round::Up if rem.is_zero() => fl,
        Round::Up => fl + 1,
        Round::Nearest if (&rem << 1u32) >= den => fl + 1,
        Round::Nearest => fl,
    };
    if exp <= 0 {
        Rational::new(m, pow2((-exp) as u64))
    } else {
        Rational::from_integer(m * pow2(exp as u64))
    }
}

/// Binary exponent `e` with `2^(e-1) <= |q| < 2^(e+1)`, roughly.
pub fn exponent(q: &Rational) -> i64 {
    q.numer().bits() as i64 - q.denom().bits() as i64
}

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, PartialEq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
    pub prec: u32,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            decimal_string(&self.lo, 12, Round::Down),
            decimal_string(&self.hi, 12, Round::Up)
        )
    }
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        Interval {
            lo: round_dyadic(&lo, prec, Round::Down),
            hi: round_dyadic(&hi, prec, Round::Up),
            prec,
        }
    }

    /// Tightest dyadic enclosure of an exact rational.
    pub fn point(q: &Rational, prec: u32) -> Self {
        Self::new(q.clone(), q.clone(), prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::point(&Rational::from_integer(n.into()), prec)
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.mid())
    }

    fn p(&self, other: &Interval) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::new(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi, self.p(other))
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo - &other.hi, &self.hi - &other.lo, self.p(other))
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi, self.p(other))
    }

    pub fn scale(&self, q: &Rational) -> Interval {
        self.mul(&Interval::point(q, self.prec))
    }

    pub fn sqr(&self) -> Interval {
        let a = self.lo.abs();
        let b = self.hi.abs();
        let hi = if a > b { &a * &a } else { &b * &b };
        let lo = if self.contains_zero() {
            Rational::zero()
        } else {
            let m = a.min(b);
            &m * &m
        };
        Interval::new(lo, hi, self.prec)
    }

    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        Some(Interval::new(
            self.hi.recip(),
            self.lo.recip(),
            self.prec,
        ))
    }

    pub fn div(&self, other: &Interval) -> Option<Interval> {
        Some(self.mul(&other.recip()?))
    }

    pub fn pow(&self, e: u32) -> Interval {
        let mut acc = Interval::from_i64(1, self.prec);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        if e.is_multiple_of(2) && e > 0 {
            // even powers are nonnegative
            let lo = if acc.lo.is_negative() {
                Rational::zero()
            } else {
                acc.lo.clone()
            };
            acc = Interval::new(lo, acc.hi, acc.prec);
        }
        acc
    }

    pub fn abs(&self) -> Interval {
        if self.contains_zero() {
            Interval::new(Rational::zero(), self.lo.abs().max(self.hi.abs()), self.prec)
        } else if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval::new(
            self.lo.clone().max(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
            self.p(other),
        )
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().min(other.hi.clone()),
            self.p(other),
        )
    }

    /// Hull of two intervals.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
            self.p(other),
        )
    }

    /// Enclosure of `sqrt` over the nonnegative part of the interval;
    /// `None` if the interval is entirely negative.
    pub fn sqrt(&self) -> Option<Interval> {
        if self.is_negative() {
            return None;
        }
        let lo = if self.lo.is_positive() {
            sqrt_bound(&self.lo, self.prec, Round::Down)
        } else {
            Rational::zero()
        };
        let hi = sqrt_bound(&self.hi, self.prec, Round::Up);
        Some(Interval::new(lo, hi, self.prec))
    }

    /// Enclosure of the natural logarithm; requires a positive interval.
    pub fn ln(&self) -> Option<Interval> {
        if !self.is_positive() {
            return None;
        }
        let lo = ln_rational(&self.lo, self.prec).lo;
        let hi = ln_rational(&self.hi, self.prec).hi;
        Some(Interval::new(lo, hi, self.prec))
    }
}

/// Directed dyadic bound for `sqrt(q)`, `q >= 0`.
pub fn sqrt_bound(q: &Rational, prec: u32, dir: Round) -> Rational {
    if q.is_zero() {
        return Rational::zero();
    }
    // sqrt(n/d) = sqrt(n d) / d; scale by 4^s for prec bits
    let n = q.numer();
    let d = q.denom();
    let nd: BigInt = n * d;
    let s = (prec as i64 + 2 - (nd.bits() as i64) / 2).max(0) as u64;
    let scaled = &nd << (2 * s);
    let r = scaled.sqrt();
    let r = if dir == Round::Up && &r * &r != scaled {
        r + 1
    } else {
        r
    };
    let out = Rational::new(r, d * pow2(s));
    round_dyadic(&out, prec, dir)
}

/// `sum_{j<N} u^(2j+1)/(2j+1)` with a certified tail, `0 <= u <= 1/3`.
fn atanh_series(u: &Rational, prec: u32) -> Interval {
    let wp = prec + 16;
    let ui = Interval::point(u, wp);
    let u2 = ui.sqr();
    let mut term = ui.clone();
    let mut sum = Interval::zero(wp);
    let mut j: i64 = 0;
    let eps = Rational::new(BigInt::one(), pow2(prec as u64 + 8));
    loop {
        let t = term
            .div(&Interval::from_i64(2 * j + 1, wp))
            .expect("odd denominator");
        sum = sum.add(&t);
        term = term.mul(&u2);
        j += 1;
        // tail <= u^(2j+1) / ((2j+1)(1 - u^2))
        if term.hi <= eps {
            let one_minus = Interval::from_i64(1, wp).sub(&u2);
            let tail = term
                .div(&Interval::from_i64(2 * j + 1, wp))
                .and_then(|t| t.div(&one_minus))
                .expect("u^2 < 1");
            return Interval::new(sum.lo.clone(), &sum.hi + &tail.hi, wp);
        }
    }
}

/// Certified `ln 2`.
pub fn ln2(prec: u32) -> Interval {
    atanh_series(&Rational::new(1.into(), 3.into()), prec).scale(&Rational::from_integer(2.into()))
}

/// Certified `ln q` for a positive rational.
pub fn ln_rational(q: &Rational, prec: u32) -> Interval {
    assert!(q.is_positive(), "logarithm of a nonpositive number");
    if q.is_one() {
        return Interval::zero(prec);
    }
    // q = 2^k r with r in [1, 2)
    let mut k = q.numer().bits() as i64 - q.denom().bits() as i64;
    let mut r = if k >= 0 {
        q / Rational::from_integer(pow2(k as u64))
    } else {
        q * Rational::from_integer(pow2((-k) as u64))
    };
    let two = Rational::from_integer(2.into());
    while r >= two {
        r /= &two;
        k += 1;
    }
    while r < Rational::one() {
        r *= &two;
        k -= 1;
    }
    let u = (&r - Rational::one()) / (&r + Rational::one());
    let lr = atanh_series(&u, prec).scale(&two);
    let l2 = ln2(prec).scale(&Rational::from_integer(k.into()));
    let s = lr.add(&l2);
    Interval::new(s.lo, s.hi, prec)
}

/// Rounded decimal rendering with `digits` fractional digits.
pub fn decimal_string(q: &Rational, digits: u32, dir: Round) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = q * Rational::from_integer(scale.clone());
    let v = match dir {
        Round::Down => scaled.floor().to_integer(),
        Round::Up => scaled.ceil().to_integer(),
        Round::Nearest => scaled.round().to_integer(),
    };
    let neg = v.sign() == Sign::Minus;
    let a = v.abs();
    let (ip, fp) = a.div_rem(&scale);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&ip.to_string());
    if digits > 0 {
        s.push('.');
        s.push_str(&format!("{:0>width$}", fp.to_string(), width = digits as usize));
    }
    s
}

pub fn rat_to_f64(q: &Rational) -> f64 {
    round_dyadic(q, 60, Round::Nearest).to_f64().unwrap_or(f64::NAN)
}

pub fn f64_to_rat(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

/// Axis-aligned complex box.
#[derive(Clone, PartialEq)]
pub struct CBox {
    pub re: Interval,
    pub im: Interval,
}

impl fmt::Debug for CBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + i{:?}", self.re, self.im)
    }
}

impl CBox {
    pub fn new(re: Interval, im: Interval) -> Self {
        CBox { re, im }
    }

    pub fn real(re: Interval) -> Self {
        let p = re.prec;
        CBox {
            re,
            im: Interval::zero(p),
        }
    }

    pub fn point(re: &Rational, im: &Rational, prec: u32) -> Self {
        CBox {
            re: Interval::point(re, prec),
            im: Interval::point(im, prec),
        }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Self::point(q, &Rational::zero(), prec)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec.max(self.im.prec)
    }

    pub fn add(&self, o: &CBox) -> CBox {
        CBox::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &CBox) -> CBox {
        CBox::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> CBox {
        CBox::new(self.re.neg(), self.im.neg())
    }

    pub fn mul(&self, o: &CBox) -> CBox {
        CBox::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    pub fn scale(&self, q: &Rational) -> CBox {
        CBox::new(self.re.scale(q), self.im.scale(q))
    }

    pub fn conj(&self) -> CBox {
        CBox::new(self.re.clone(), self.im.neg())
    }

    pub fn abs_sq(&self) -> Interval {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn abs(&self) -> Interval {
        self.abs_sq().sqrt().expect("nonnegative")
    }

    pub fn recip(&self) -> Option<CBox> {
        let n = self.abs_sq();
        let inv = n.recip()?;
        Some(CBox::new(self.re.mul(&inv), self.im.neg().mul(&inv)))
    }

    pub fn div(&self, o: &CBox) -> Option<CBox> {
        Some(self.mul(&o.recip()?))
    }

    pub fn pow(&self, e: u32) -> CBox {
        let p = self.prec();
        let mut acc = CBox::from_rational(&Rational::one(), p);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn mid(&self) -> (Rational, Rational) {
        (self.re.mid(), self.im.mid())
    }

    /// Half of the larger side length.
    pub fn radius(&self) -> Rational {
        let two = Rational::from_integer(2.into());
        self.re.width().max(self.im.width()) / two
    }

    pub fn overlaps(&self, o: &CBox) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    /// Enclosure of the square root of every point of the box that lies
    /// on the branch nearest `anchor`, i.e. the root `s` with
    /// `Re(s * conj(anchor)) > 0`. Returns `None` when the box is too wide
    /// relative to its distance from zero to separate the two branches.
    pub fn sqrt_near(&self, anchor: (f64, f64)) -> Option<CBox> {
        let prec = self.prec();
        let (cr, ci) = self.mid();
        let mut s = approx_csqrt(&cr, &ci, prec + 8);
        let dot = rat_to_f64(&s.0) * anchor.0 + rat_to_f64(&s.1) * anchor.1;
        if dot < 0.0 {
            s = (-s.0, -s.1);
        }
        // |sigma - s| <= (|c' - s^2| ) / |s| for the root sigma on the s side
        let sb = CBox::point(&s.0, &s.1, prec + 8);
        let diff = self.sub(&sb.mul(&sb));
        let r = diff.abs().hi;
        let abs_s = sb.abs().lo;
        if !abs_s.is_positive() {
            return None;
        }
        let rad = round_dyadic(&(r / &abs_s), prec, Round::Up);
        // the branch is determined only if the disk stays on one side
        if rad >= abs_s {
            return None;
        }
        let out = CBox::new(
            Interval::new(&s.0 - &rad, &s.0 + &rad, prec),
            Interval::new(&s.1 - &rad, &s.1 + &rad, prec),
        );
        Some(out)
    }

    /// Principal square root: `Re > 0`, or `Im > 0` on the negative axis.
    pub fn sqrt_principal(&self) -> Option<CBox> {
        let (cr, ci) = self.mid();
        let s = approx_csqrt(&cr, &ci, 64);
        self.sqrt_near((rat_to_f64(&s.0), rat_to_f64(&s.1)))
    }
}

/// Dyadic approximation of the principal square root of `a + bi`.
pub fn approx_csqrt(a: &Rational, b: &Rational, prec: u32) -> (Rational, Rational) {
    if a.is_zero() && b.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    let two = Rational::from_integer(2.into());
    let m = sqrt_bound(&(a * a + b * b), prec + 8, Round::Nearest);
    // Re = sqrt((m + a)/2), Im = sign(b) sqrt((m - a)/2)
    let re_sq = (&m + a) / &two;
    let im_sq = (&m - a) / &two;
    if a >= &Rational::zero() {
        let re = sqrt_bound(&re_sq.max(Rational::zero()), prec + 8, Round::Nearest);
        if re.is_zero() {
            return (re, sqrt_bound(&im_sq.max(Rational::zero()), prec, Round::Nearest));
        }
        let im = b / (&two * &re);
        (
            round_dyadic(&re, prec, Round::Nearest),
            round_dyadic(&im, prec, Round::Nearest),
        )
    } else {
        let mut im = sqrt_bound(&im_sq.max(Rational::zero()), prec + 8, Round::Nearest);
        if b.is_negative() {
            im = -im;
        }
        let re = b / (&two * &im);
        (
            round_dyadic(&re, prec, Round::Nearest),
            round_dyadic(&im, prec, Round::Nearest),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn log3_enclosure() {
        let l = ln_rational(&int(3), 96);
        assert!(l.contains(&f64_to_rat(3f64.ln())) || (l.to_f64() - 3f64.ln()).abs() < 1e-15);
        assert!(l.width() < rat(1, 1_000_000_000_000));
        let l2 = ln2(96);
        assert!((l2.to_f64() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn log_of_small_numbers() {
        let l = ln_rational(&rat(1, 7), 80);
        assert!((l.to_f64() + 7f64.ln()).abs() < 1e-14);
        assert!(l.lo < l.hi);
    }

    #[test]
    fn sqrt_three() {
        let s = Interval::from_i64(3, 128).sqrt().unwrap();
        let sq = s.sqr();
        assert!(sq.contains(&int(3)));
        assert!(s.width() < rat(1, 1 << 40));
    }

    #[test]
    fn complex_sqrt_of_negative() {
        let c = CBox::from_rational(&int(-4), 96);
        let s = c.sqrt_principal().unwrap();
        assert!(s.im.contains(&int(2)));
        assert!(s.re.contains(&int(0)));
        let s2 = c.sqrt_near((0.0, -1.0)).unwrap();
        assert!(s2.im.contains(&int(-2)));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&rat(2, 3), 4, Round::Down), "0.6666");
        assert_eq!(decimal_string(&rat(2, 3), 4, Round::Up), "0.6667");
        assert_eq!(decimal_string(&rat(-1, 2), 2, Round::Nearest), "-0.50");
    }

    proptest! {
        #[test]
        fn log_matches_f64(n in 1i64..100000, d in 1i64..100000) {
            let q = rat(n, d);
            let l = ln_rational(&q, 80);
            let f = (n as f64 / d as f64).ln();
            prop_assert!(l.lo <= f64_to_rat(f + 1e-12) && f64_to_rat(f - 1e-12) <= l.hi);
            prop_assert!(l.width() < rat(1, 1_000_000_000_000));
        }

        #[test]
        fn product_encloses(a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000) {
            let x = Interval::new(rat(a, 7), rat(a, 7) + rat(1, 3), 40);
            let y = Interval::point(&rat(b, 11), 40);
            let z = x.mul(&y).add(&Interval::from_i64(c, 40));
            prop_assert!(z.contains(&(rat(a, 7) * rat(b, 11) + int(c))));
        }

        #[test]
        fn csqrt_squares_back(a in -50i64..50, b in -50i64..50) {
            prop_assume!(a != 0 || b != 0);
            let c = CBox::point(&int(a), &int(b), 100);
            let s = c.sqrt_principal().unwrap();
            let back = s.mul(&s);
            prop_assert!(back.re.contains(&int(a)) && back.im.contains(&int(b)));
        }
    }
}
