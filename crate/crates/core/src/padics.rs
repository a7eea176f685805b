//! Fixed-precision arithmetic in unramified extensions of `Z_p` and
//! Newton lifting of simple roots of two-variable systems.

use crate::exactcore::gf::{Gf, GfElem, GfField};
use crate::exactcore::poly::{bivariate, BiPoly};
use crate::exactcore::rational::{int_val, rat_val, Rational};
use crate::exactcore::ring::{Field, Ring};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::sync::Arc;

/// Parameters shared by a family of `UnramPadic` values.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicRing {
    pub residue: Gf,
    pub k: u32,
    modulus_pk: BigInt,
}

impl fmt::Debug for PadicRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Z_{}[t]/({:?}) mod {}^{}",
            self.p(),
            self.residue.modulus(),
            self.p(),
            self.k
        )
    }
}

impl PadicRing {
    /// The unramified extension of degree `m` (canonical modulus),
    /// truncated at `p^k`.
    pub fn new(p: u64, m: usize, k: u32) -> Result<Arc<PadicRing>> {
        Ok(Self::over(GfField::new(p, m)?, k))
    }

    pub fn over(residue: Gf, k: u32) -> Arc<PadicRing> {
        assert!(k >= 1, "precision must be positive");
        let modulus_pk = BigInt::from(residue.p()).pow(k);
        Arc::new(PadicRing {
            residue,
            k,
            modulus_pk,
        })
    }

    pub fn p(&self) -> u64 {
        self.residue.p()
    }

    pub fn degree(&self) -> usize {
        self.residue.degree()
    }

    pub fn pk(&self) -> &BigInt {
        &self.modulus_pk
    }

    pub fn with_precision(&self, k: u32) -> Arc<PadicRing> {
        Self::over(self.residue.clone(), k)
    }

    pub fn from_int(self: &Arc<Self>, n: &BigInt) -> UnramPadic {
        let mut rep = vec![BigInt::zero(); self.degree()];
        rep[0] = n.mod_floor(&self.modulus_pk);
        UnramPadic {
            ring: self.clone(),
            rep,
        }
    }

    /// Image of a `p`-integral rational.
    pub fn from_rational(self: &Arc<Self>, q: &Rational) -> Result<UnramPadic> {
        let d = q.denom().mod_floor(&self.modulus_pk);
        let p = BigInt::from(self.p());
        if d.is_multiple_of(&p) {
            return Err(Error::Precondition(format!(
                "{q} is not {}-integral",
                self.p()
            )));
        }
        let dinv = mod_inverse(&d, &self.modulus_pk).expect("unit");
        Ok(self.from_int(&(q.numer() * dinv)))
    }

    /// Teichmüller-free lift: digits of the residue representative.
    pub fn lift(self: &Arc<Self>, a: &GfElem) -> UnramPadic {
        assert_eq!(a.field(), &self.residue, "residue field mismatch");
        UnramPadic {
            ring: self.clone(),
            rep: a.rep().iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn gen(self: &Arc<Self>) -> UnramPadic {
        self.lift(&self.residue.gen())
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Element of `Z_p[t]/(M(t))` modulo `p^k`, where `M` is the canonical
/// modulus of the residue field.
#[derive(Clone, PartialEq, Eq)]
pub struct UnramPadic {
    ring: Arc<PadicRing>,
    rep: Vec<BigInt>,
}

impl fmt::Debug for UnramPadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rep.len() == 1 {
            return write!(f, "{} (mod {}^{})", self.rep[0], self.ring.p(), self.ring.k);
        }
        write!(f, "{:?} (mod {}^{})", self.rep, self.ring.p(), self.ring.k)
    }
}

impl UnramPadic {
    pub fn ring(&self) -> &Arc<PadicRing> {
        &self.ring
    }

    pub fn rep(&self) -> &[BigInt] {
        &self.rep
    }

    pub fn precision(&self) -> u32 {
        self.ring.k
    }

    pub fn reduce(&self) -> GfElem {
        let p = BigInt::from(self.ring.p());
        let digits: Vec<u64> = self
            .rep
            .iter()
            .map(|c| c.mod_floor(&p).to_u64().unwrap())
            .collect();
        self.ring.residue.from_rep(&digits)
    }

    /// Truncate to a lower precision (or re-embed at a higher one, padding
    /// with zero digits).
    pub fn to_precision(&self, k: u32) -> UnramPadic {
        let ring = self.ring.with_precision(k);
        let rep = self.rep.iter().map(|c| c.mod_floor(ring.pk())).collect();
        UnramPadic { ring, rep }
    }

    fn from_raw(ring: &Arc<PadicRing>, mut r: Vec<BigInt>) -> UnramPadic {
        let m = ring.degree();
        let modulus = ring.residue.modulus();
        for i in (m..r.len()).rev() {
            let c = std::mem::take(&mut r[i]);
            if c.is_zero() {
                continue;
            }
            for j in 0..m {
                let sub = &c * BigInt::from(modulus[j]);
                r[i - m + j] -= sub;
            }
        }
        r.truncate(m);
        r.resize(m, BigInt::zero());
        for c in r.iter_mut() {
            *c = c.mod_floor(ring.pk());
        }
        UnramPadic {
            ring: ring.clone(),
            rep: r,
        }
    }

    /// `p`-adic valuation, `0 <= e < k`.
    pub fn val(&self) -> Result<u32> {
        unram_val(self)
    }

    pub fn is_unit(&self) -> bool {
        !self.reduce().is_zero()
    }
}

/// Largest `e` with `a ≡ 0 mod p^e`.
pub fn unram_val(a: &UnramPadic) -> Result<u32> {
    let nonzero: Vec<&BigInt> = a.rep.iter().filter(|c| !c.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::BelowPrecision);
    }
    Ok(nonzero
        .into_iter()
        .map(|c| int_val(c, a.ring.p()) as u32)
        .min()
        .unwrap())
}

impl Ring for UnramPadic {
    type Ctx = Arc<PadicRing>;

    fn ctx(&self) -> Arc<PadicRing> {
        self.ring.clone()
    }
    fn zero(ctx: &Arc<PadicRing>) -> Self {
        ctx.from_int(&BigInt::zero())
    }
    fn one(ctx: &Arc<PadicRing>) -> Self {
        ctx.from_int(&BigInt::one())
    }
    fn is_zero(&self) -> bool {
        self.rep.iter().all(Zero::is_zero)
    }
    fn plus(&self, rhs: &Self) -> Self {
        UnramPadic {
            ring: self.ring.clone(),
            rep: self
                .rep
                .iter()
                .zip(&rhs.rep)
                .map(|(a, b)| (a + b).mod_floor(self.ring.pk()))
                .collect(),
        }
    }
    fn minus(&self, rhs: &Self) -> Self {
        UnramPadic {
            ring: self.ring.clone(),
            rep: self
                .rep
                .iter()
                .zip(&rhs.rep)
                .map(|(a, b)| (a - b).mod_floor(self.ring.pk()))
                .collect(),
        }
    }
    fn times(&self, rhs: &Self) -> Self {
        let m = self.ring.degree();
        let mut r = vec![BigInt::zero(); 2 * m - 1];
        for (i, a) in self.rep.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.rep.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        UnramPadic::from_raw(&self.ring, r)
    }
    fn negate(&self) -> Self {
        UnramPadic {
            ring: self.ring.clone(),
            rep: self
                .rep
                .iter()
                .map(|a| (-a).mod_floor(self.ring.pk()))
                .collect(),
        }
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        self.divide(rhs)
    }
    fn from_i64(ctx: &Arc<PadicRing>, n: i64) -> Self {
        ctx.from_int(&BigInt::from(n))
    }
}

impl Field for UnramPadic {
    /// Inverse of a unit; `None` for non-units.
    fn inv(&self) -> Option<Self> {
        let r0 = self.reduce().inv()?;
        let mut x = self.ring.lift(&r0);
        let two = UnramPadic::from_i64(&self.ring, 2);
        // Newton: x <- x (2 - a x), doubling correct digits
        let mut correct = 1u32;
        while correct < self.ring.k {
            x = x.times(&two.minus(&self.times(&x)));
            correct *= 2;
        }
        Some(x)
    }
}

/// A pair of coordinates over a common truncated ring.
#[derive(Clone, Debug, PartialEq)]
pub struct PadicPoint2 {
    pub x: UnramPadic,
    pub y: UnramPadic,
}

impl PadicPoint2 {
    pub fn reduce(&self) -> (GfElem, GfElem) {
        (self.x.reduce(), self.y.reduce())
    }

    pub fn precision(&self) -> u32 {
        self.x.precision()
    }
}

/// A square system `F(x, y) = G(x, y) = 0` that can be evaluated, with its
/// Jacobian, over truncated `p`-adic rings.
pub trait PolySystem {
    /// `(F, G)` and the Jacobian `[[F_x, F_y], [G_x, G_y]]` at a point.
    fn eval_with_jacobian(
        &self,
        x: &UnramPadic,
        y: &UnramPadic,
    ) -> ((UnramPadic, UnramPadic), [[UnramPadic; 2]; 2]);
}

/// Explicit pair of bivariate polynomials with `p`-integral coefficients.
#[derive(Clone, Debug)]
pub struct BiSystem {
    pub f: BiPoly,
    pub g: BiPoly,
    fx: BiPoly,
    fy: BiPoly,
    gx: BiPoly,
    gy: BiPoly,
}

impl BiSystem {
    pub fn new(f: BiPoly, g: BiPoly) -> Self {
        BiSystem {
            fx: bivariate::d_dx(&f),
            fy: bivariate::d_dy(&f),
            gx: bivariate::d_dx(&g),
            gy: bivariate::d_dy(&g),
            f,
            g,
        }
    }
}

impl PolySystem for BiSystem {
    fn eval_with_jacobian(
        &self,
        x: &UnramPadic,
        y: &UnramPadic,
    ) -> ((UnramPadic, UnramPadic), [[UnramPadic; 2]; 2]) {
        let ring = x.ring().clone();
        let emb = |q: &Rational| {
            ring.from_rational(q)
                .expect("system coefficients must be p-integral")
        };
        let e = |p: &BiPoly| bivariate::eval(p, x, y, emb);
        (
            (e(&self.f), e(&self.g)),
            [[e(&self.fx), e(&self.fy)], [e(&self.gx), e(&self.gy)]],
        )
    }
}

/// Lift a simple root of `system` mod `p` to precision `p^target_k`.
pub fn newton_lift<S: PolySystem>(
    system: &S,
    seed: (&GfElem, &GfElem),
    target_k: u32,
) -> Result<PadicPoint2> {
    let residue = seed.0.field().clone();
    let describe = || format!("({:?}, {:?})", seed.0, seed.1);
    let r1 = PadicRing::over(residue.clone(), 1);
    let (vals, jac) = system.eval_with_jacobian(&r1.lift(seed.0), &r1.lift(seed.1));
    if !vals.0.is_zero() || !vals.1.is_zero() {
        return Err(Error::Precondition(format!(
            "seed {} is not a root mod p",
            describe()
        )));
    }
    let det = jac[0][0].times(&jac[1][1]).minus(&jac[0][1].times(&jac[1][0]));
    if det.is_zero() {
        return Err(Error::NotEtale(describe()));
    }
    let mut k = 1u32;
    let mut x = r1.lift(seed.0);
    let mut y = r1.lift(seed.1);
    while k < target_k {
        k = (2 * k).min(target_k);
        let ring = PadicRing::over(residue.clone(), k);
        x = x.to_precision(k);
        y = y.to_precision(k);
        let ((f, g), j) = system.eval_with_jacobian(&x, &y);
        let det = j[0][0].times(&j[1][1]).minus(&j[0][1].times(&j[1][0]));
        let dinv = det
            .inv()
            .ok_or_else(|| Error::Internal("Jacobian lost invertibility".into()))?;
        // [dx, dy] = J^{-1} [f, g]
        let dx = j[1][1].times(&f).minus(&j[0][1].times(&g)).times(&dinv);
        let dy = j[0][0].times(&g).minus(&j[1][0].times(&f)).times(&dinv);
        x = x.minus(&dx);
        y = y.minus(&dy);
        debug_assert_eq!(x.ring().k, ring.k);
    }
    let ((f, g), _) = system.eval_with_jacobian(&x, &y);
    if !f.is_zero() || !g.is_zero() {
        return Err(Error::Internal(format!(
            "Newton iteration did not converge from {}",
            describe()
        )));
    }
    Ok(PadicPoint2 { x, y })
}

/// `v_3(2^(2*3^r) - 1)` by direct factorization; asserts it equals `r + 1`.
pub fn lte_check(r: u32) -> Result<u32> {
    if r > 6 {
        return Err(Error::Precondition("r must be at most 6".into()));
    }
    let n = 2 * 3u32.pow(r);
    let value = (BigInt::one() << n) - 1;
    let v = int_val(&value, 3) as u32;
    if v != r + 1 {
        return Err(Error::Internal(format!(
            "v_3(2^{n} - 1) = {v}, expected {}",
            r + 1
        )));
    }
    Ok(v)
}

/// Valuations of the roots of `f` at `p` from its Newton polygon, as
/// `(valuation, multiplicity)` pairs in increasing order of valuation.
/// Holds for every extension of `v_p` to a splitting field.
pub fn root_valuations(f: &crate::exactcore::poly::QPoly, p: u64) -> Result<Vec<(Rational, usize)>> {
    let pts: Vec<(i64, Rational)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !Zero::is_zero(*c))
        .map(|(i, c)| Ok((i as i64, Rational::from_integer(rat_val(c, p)?.into()))))
        .collect::<Result<_>>()?;
    if pts.len() < 2 {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    // zero roots carry infinite valuation and are skipped
    let mut i = 0;
    while i + 1 < pts.len() {
        // steepest descent from pts[i]: lowest slope, farthest point on ties
        let mut best = i + 1;
        let mut best_slope = slope(&pts[i], &pts[i + 1]);
        for j in i + 2..pts.len() {
            let s = slope(&pts[i], &pts[j]);
            if s <= best_slope {
                best = j;
                best_slope = s;
            }
        }
        out.push((-best_slope, (pts[best].0 - pts[i].0) as usize));
        i = best;
    }
    out.reverse();
    Ok(out)
}

fn slope(a: &(i64, Rational), b: &(i64, Rational)) -> Rational {
    (&b.1 - &a.1) / Rational::from_integer((b.0 - a.0).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn newton_polygon() {
        use crate::exactcore::poly::{qpoly, qpoly_rat};
        // (t - 3)(t - 1/9) roots of valuation 1 and -2
        let f = qpoly_rat(vec![rat(1, 3), rat(-28, 9), int(1)]);
        assert_eq!(root_valuations(&f, 3).unwrap(), vec![(int(-2), 1), (int(1), 1)]);
        // t^4 - 3: single slope
        assert_eq!(root_valuations(&qpoly(&[-3, 0, 0, 0, 1]), 3).unwrap(), vec![(rat(1, 4), 4)]);
        // t (t - 2): zero root skipped
        assert_eq!(root_valuations(&qpoly(&[0, -2, 1]), 2).unwrap(), vec![(int(1), 1)]);
    }

    #[test]
    fn valuations() {
        let z3 = PadicRing::new(3, 1, 5).unwrap();
        assert_eq!(unram_val(&z3.from_int(&BigInt::from(9))).unwrap(), 2);
        assert_eq!(unram_val(&z3.from_int(&BigInt::from(7))).unwrap(), 0);
        assert!(matches!(
            unram_val(&z3.from_int(&BigInt::from(243))),
            Err(Error::BelowPrecision)
        ));
    }

    #[test]
    fn lte_values() {
        for r in 0..=6 {
            assert_eq!(lte_check(r).unwrap(), r + 1);
        }
        assert!(lte_check(7).is_err());
    }

    #[test]
    fn inverse_in_extension() {
        let o = PadicRing::new(3, 3, 10).unwrap();
        let t = o.gen();
        let a = t.plus(&UnramPadic::from_i64(&o, 4));
        let b = a.inv().unwrap();
        assert!(a.times(&b).is_one());
        assert_eq!(o.from_rational(&rat(1, 2)).unwrap().times(&UnramPadic::from_i64(&o, 2)), UnramPadic::one(&o));
        assert!(o.from_rational(&rat(1, 3)).is_err());
    }

    #[test]
    fn sqrt_of_seven_mod_powers_of_three() {
        // x^2 - 7 = 0, y - 1 = 0 with seed x = 1
        let x = bivariate::x();
        let y = bivariate::y();
        let f = &(&x * &x) - &bivariate::constant(int(7));
        let g = &y - &bivariate::constant(int(1));
        let sys = BiSystem::new(f, g.clone());
        let f3 = GfField::prime(3).unwrap();
        let pt = newton_lift(&sys, (&f3.elem(1), &f3.elem(1)), 12).unwrap();
        let sq = pt.x.times(&pt.x);
        assert_eq!(sq, UnramPadic::from_i64(pt.x.ring(), 7));
        assert_eq!(pt.reduce(), (f3.elem(1), f3.elem(1)));
        // lifting to 6 then 12 agrees with a direct lift to 12
        let p6 = newton_lift(&sys, (&f3.elem(1), &f3.elem(1)), 6).unwrap();
        assert_eq!(pt.x.to_precision(6), p6.x);
        // x^2 - 9 has a double root mod 3
        let bad = BiSystem::new(&(&x * &x) - &bivariate::constant(int(9)), g.clone());
        assert!(matches!(
            newton_lift(&bad, (&f3.elem(0), &f3.elem(1)), 4),
            Err(Error::NotEtale(_))
        ));
    }

    proptest! {
        #[test]
        fn valuation_is_additive(a in 1i64..100000, b in 1i64..100000) {
            let o = PadicRing::new(3, 1, 30).unwrap();
            let x = UnramPadic::from_i64(&o, a);
            let y = UnramPadic::from_i64(&o, b);
            let v = unram_val(&x).unwrap() + unram_val(&y).unwrap();
            prop_assume!(v < 30);
            prop_assert_eq!(unram_val(&x.times(&y)).unwrap(), v);
        }
    }
}
