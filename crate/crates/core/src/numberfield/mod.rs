//! Number fields `Q[t]/(m(t))`, element arithmetic, minimal polynomials,
//! archimedean and unramified finite places, and Weil heights.

pub mod height;
pub mod roots;

use crate::exactcore::factor::{factor_mod_p, poly_key, reduce_rational, roots_gf, GfPoly};
use crate::exactcore::gf::{GfElem, GfField};
use crate::exactcore::matrix::MatQ;
use crate::exactcore::poly::{bivariate, QPoly, UniPoly};
use crate::exactcore::rational::{int, int_val, is_prime, Rational};
use crate::exactcore::resultant::resultant;
use crate::exactcore::ring::{Field, Ring};
use crate::interval::CBox;
use crate::padics::{newton_lift, unram_val, BiSystem, PadicPoint2, PadicRing, UnramPadic};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use roots::{isolate_roots, RootDisk};
use std::fmt;
use std::sync::Arc;

pub use height::{mahler_height, weil_height, weil_height_rational, HeightInterval};

/// `Q[t]/(m(t))` for a monic irreducible `m` with rational coefficients.
#[derive(Clone, PartialEq)]
pub struct NumberField {
    min_poly: QPoly,
}

pub type Nf = Arc<NumberField>;

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[t]/({:?})", self.min_poly)
    }
}

impl NumberField {
    /// Build from a monic polynomial; squarefreeness is checked and
    /// irreducibility is the caller's claim (see [`NumberField::irreducibility_witness`]).
    pub fn new(min_poly: QPoly) -> Result<Nf> {
        let deg = min_poly
            .degree()
            .ok_or_else(|| Error::Precondition("zero polynomial".into()))?;
        if deg == 0 {
            return Err(Error::Precondition("defining polynomial must have positive degree".into()));
        }
        if !One::is_one(min_poly.lead().unwrap()) {
            return Err(Error::Precondition("defining polynomial must be monic".into()));
        }
        if min_poly.gcd(&min_poly.derivative()).degree() != Some(0) {
            return Err(Error::Precondition("defining polynomial is not squarefree".into()));
        }
        Ok(Arc::new(NumberField { min_poly }))
    }

    pub fn rationals() -> Nf {
        Self::new(QPoly::from_coeffs(vec![Rational::from_integer(0.into()), int(1)]))
            .expect("t is monic")
    }

    pub fn min_poly(&self) -> &QPoly {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.min_poly.degree().unwrap()
    }

    /// Primitive integer multiple of the defining polynomial, positive
    /// leading coefficient.
    pub fn integral_poly(&self) -> QPoly {
        let c = self.min_poly.primitive_integer();
        QPoly::from_coeffs(c.into_iter().map(Rational::from_integer).collect())
    }

    /// A small prime modulo which the defining polynomial is irreducible,
    /// which proves irreducibility over `Q`; `None` if none is found below
    /// `bound`.
    pub fn irreducibility_witness(&self, bound: u64) -> Option<u64> {
        if self.degree() == 1 {
            return Some(2);
        }
        let f = self.integral_poly();
        (2..bound).filter(|&p| is_prime(p)).find(|&p| match factor_mod_p(&f, p) {
            Ok(fac) => fac.factors.len() == 1 && fac.factors[0].1 == 1,
            Err(_) => false,
        })
    }

    pub fn elem(self: &Arc<Self>, coords: Vec<Rational>) -> NFElem {
        NFElem::from_poly(self, &QPoly::new(coords, ()))
    }

    pub fn from_rational(self: &Arc<Self>, q: &Rational) -> NFElem {
        self.elem(vec![q.clone()])
    }

    pub fn gen(self: &Arc<Self>) -> NFElem {
        NFElem::from_poly(self, &QPoly::var(&()))
    }
}

/// Element of a number field in the power basis.
#[derive(Clone, PartialEq)]
pub struct NFElem {
    field: Nf,
    coords: Vec<Rational>,
}

impl fmt::Debug for NFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_poly())
    }
}

impl NFElem {
    pub fn from_poly(field: &Nf, p: &QPoly) -> NFElem {
        let r = p.rem(&field.min_poly);
        let n = field.degree();
        let coords = (0..n).map(|i| r.coeff(i)).collect();
        NFElem {
            field: field.clone(),
            coords,
        }
    }

    pub fn field(&self) -> &Nf {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn as_poly(&self) -> QPoly {
        QPoly::from_coeffs(self.coords.clone())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.coords[1..]
            .iter()
            .all(Ring::is_zero)
            .then(|| self.coords[0].clone())
    }

    /// Value at a complex root box of the defining polynomial.
    pub fn eval_box(&self, root: &CBox) -> CBox {
        let prec = root.prec();
        let mut acc = CBox::from_rational(&Rational::from_integer(0.into()), prec);
        for c in self.coords.iter().rev() {
            acc = acc.mul(root).add(&CBox::from_rational(c, prec));
        }
        acc
    }
}

impl Ring for NFElem {
    type Ctx = Nf;

    fn ctx(&self) -> Nf {
        self.field.clone()
    }
    fn zero(ctx: &Nf) -> Self {
        ctx.elem(vec![])
    }
    fn one(ctx: &Nf) -> Self {
        ctx.elem(vec![int(1)])
    }
    fn is_zero(&self) -> bool {
        self.coords.iter().all(Ring::is_zero)
    }
    fn plus(&self, rhs: &Self) -> Self {
        NFElem {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
    fn minus(&self, rhs: &Self) -> Self {
        NFElem {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
    fn times(&self, rhs: &Self) -> Self {
        NFElem::from_poly(&self.field, &(&self.as_poly() * &rhs.as_poly()))
    }
    fn negate(&self) -> Self {
        NFElem {
            field: self.field.clone(),
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        self.divide(rhs)
    }
    fn from_i64(ctx: &Nf, n: i64) -> Self {
        ctx.from_rational(&Rational::from_integer(n.into()))
    }
}

impl crate::exactcore::ring::QAlgebra for NFElem {
    fn from_q(ctx: &Nf, q: &Rational) -> Self {
        ctx.from_rational(q)
    }
}

impl Field for NFElem {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (g, s, _) = self.as_poly().ext_gcd(&self.field.min_poly);
        // g is a nonzero constant when the defining polynomial is irreducible
        if g.degree() != Some(0) {
            return None;
        }
        let s = s.scale(&g.coeff(0).recip());
        Some(NFElem::from_poly(&self.field, &s))
    }
}

/// Monic minimal polynomial over `Q` of an element of any finite
/// `Q`-algebra, found as the first linear dependence among its powers.
pub fn minpoly_by_powers<E: Ring>(x: &E, coords: impl Fn(&E) -> Vec<Rational>) -> QPoly {
    let one = E::one(&x.ctx());
    let mut powers: Vec<Vec<Rational>> = vec![coords(&one)];
    let mut cur = one;
    loop {
        cur = cur.times(x);
        let target = coords(&cur);
        let k = powers.len();
        let dim = target.len();
        // columns: powers 0..k, augmented with the target
        let mut rows = Vec::with_capacity(dim);
        for r in 0..dim {
            let mut row: Vec<Rational> = powers.iter().map(|p| p[r].clone()).collect();
            row.push(target[r].clone());
            rows.push(row);
        }
        let m = MatQ::from_rows(rows, ()).expect("rectangular");
        let (red, piv) = m.rref();
        if !piv.contains(&k) {
            // target = sum c_i x^i; minpoly t^k - sum c_i t^i
            let mut coeffs = vec![Rational::from_integer(0.into()); k + 1];
            for (row, &col) in piv.iter().enumerate() {
                coeffs[col] = -red.get(row, k).clone();
            }
            coeffs[k] = int(1);
            return QPoly::from_coeffs(coeffs);
        }
        powers.push(target);
    }
}

/// Minimal polynomial of a number-field element.
pub fn nf_minpoly(x: &NFElem) -> QPoly {
    minpoly_by_powers(x, |e| e.coords.clone())
}

/// Characteristic polynomial `Res_t(m(t), T - x(t))`, an independent route
/// to the minimal polynomial (it equals `minpoly^(n/d)`).
pub fn charpoly_via_resultant(x: &NFElem) -> QPoly {
    // polynomials in t whose coefficients live in Q[T]
    let lift_const = |q: &Rational| QPoly::constant(q.clone());
    let m: UniPoly<QPoly> = UniPoly::new(
        x.field.min_poly.coeffs().iter().map(lift_const).collect(),
        (),
    );
    let tt = QPoly::var(&());
    let mut coeffs: Vec<QPoly> = x.coords.iter().map(|c| -&lift_const(c)).collect();
    coeffs[0] = &coeffs[0] + &tt;
    let g = UniPoly::new(coeffs, ());
    let r = resultant(&m, &g).expect("nonzero inputs");
    r.monic()
}

/// Certified archimedean place: a root of the defining polynomial isolated
/// in a disk, flagged real or complex (one place per conjugate pair).
#[derive(Clone, Debug, PartialEq)]
pub struct ArchPlace {
    pub root: RootDisk,
}

impl ArchPlace {
    pub fn local_degree(&self) -> usize {
        if self.root.real {
            1
        } else {
            2
        }
    }
}

/// Finite place over an unramified prime `p`: an irreducible factor of the
/// defining polynomial mod `p`, a root of it in the canonical residue field
/// `GF(p^f)`, and the reduction map.
#[derive(Clone, Debug, PartialEq)]
pub struct FinitePlace {
    pub p: u64,
    pub residue_degree: usize,
    pub factor: GfPoly,
    pub root_mod_p: GfElem,
    /// Leading coefficient of the integral defining polynomial (a `p`-unit).
    integral_poly: QPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Place {
    Archimedean(ArchPlace),
    Finite(FinitePlace),
}

impl Place {
    pub fn local_degree(&self) -> usize {
        match self {
            Place::Archimedean(a) => a.local_degree(),
            Place::Finite(f) => f.residue_degree,
        }
    }
}

/// One place per real root and per conjugate pair of complex roots, each
/// disk of radius at most `eps`.
pub fn embeddings(k: &NumberField, eps: &Rational) -> Result<Vec<ArchPlace>> {
    if !eps.is_positive() {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    let disks = isolate_roots(&k.min_poly, eps)?;
    Ok(disks
        .into_iter()
        .filter(|d| d.real || d.center.im.is_positive())
        .map(|root| ArchPlace { root })
        .collect())
}

/// Finite places over `p`, one per irreducible factor mod `p`.
pub fn split_unramified(k: &NumberField, p: u64) -> Result<Vec<FinitePlace>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let f = k.integral_poly();
    let fac = factor_mod_p(&f, p).map_err(|e| match e {
        Error::BadReduction(p) => Error::Ramified(p),
        other => other,
    })?;
    if !fac.is_squarefree() {
        return Err(Error::Ramified(p));
    }
    let mut out = Vec::new();
    for (g, _) in fac.factors {
        let deg = g.degree().unwrap();
        let residue = GfField::new(p, deg)?;
        let lifted = GfPoly::new(
            g.coeffs()
                .iter()
                .map(|c| residue.elem(c.as_prime().unwrap()))
                .collect(),
            residue.clone(),
        );
        let root = roots_gf(&lifted)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Internal("irreducible factor has no root in its residue field".into()))?;
        out.push(FinitePlace {
            p,
            residue_degree: deg,
            factor: g,
            root_mod_p: root,
            integral_poly: f.clone(),
        });
    }
    out.sort_by_key(|a| poly_key(&a.factor));
    Ok(out)
}

impl FinitePlace {
    /// Root of the defining polynomial in the unramified extension, lifted
    /// to precision `p^k`.
    pub fn lifted_root(&self, k: u32) -> Result<UnramPadic> {
        let x = bivariate::x();
        let y = bivariate::y();
        let fx = self
            .integral_poly
            .coeffs()
            .iter()
            .enumerate()
            .fold(bivariate::constant(Rational::from_integer(0.into())), |acc, (i, c)| {
                let mut term = bivariate::constant(c.clone());
                for _ in 0..i {
                    term = &term * &x;
                }
                &acc + &term
            });
        let sys = BiSystem::new(fx, y);
        let zero = self.root_mod_p.field().elem(0);
        let PadicPoint2 { x, .. } = newton_lift(&sys, (&self.root_mod_p, &zero), k)?;
        Ok(x)
    }

    /// Reduction of a `p`-integral element in the power basis.
    pub fn reduce(&self, a: &NFElem) -> Result<GfElem> {
        let fp = GfField::prime(self.p)?;
        let mut acc = self.root_mod_p.field().elem(0);
        for c in a.coords.iter().rev() {
            let c = reduce_rational(c, &fp)
                .ok_or_else(|| Error::Precondition("element is not p-integral in the power basis".into()))?;
            acc = acc
                .times(&self.root_mod_p)
                .plus(&self.root_mod_p.field().elem(c.as_prime().unwrap()));
        }
        Ok(acc)
    }

    /// Normalized valuation `v(a)` with `v(p) = 1`.
    pub fn valuation(&self, a: &NFElem) -> Result<i64> {
        if a.is_zero() {
            return Err(Error::ValuationOfZero);
        }
        // a = p^(-s) * (integral combination)
        let s = a
            .coords
            .iter()
            .filter(|c| !Ring::is_zero(*c))
            .map(|c| int_val(c.denom(), self.p) as i64 - int_val_or_inf(c.numer(), self.p))
            .max()
            .unwrap_or(0)
            .max(0);
        let scale = Rational::from_integer(BigInt::from(self.p).pow(s as u32));
        let scaled: Vec<Rational> = a.coords.iter().map(|c| c * &scale).collect();
        let mut k = 16u32;
        while k <= 64 {
            let root = self.lifted_root(k)?;
            let ring = root.ring().clone();
            let mut acc = UnramPadic::zero(&ring);
            for c in scaled.iter().rev() {
                acc = acc.times(&root).plus(&ring.from_rational(c)?);
            }
            match unram_val(&acc) {
                Ok(v) => return Ok(v as i64 - s),
                Err(Error::BelowPrecision) => k *= 2,
                Err(e) => return Err(e),
            }
        }
        Err(Error::BelowPrecision)
    }

    pub fn padic_ring(&self, k: u32) -> Arc<PadicRing> {
        PadicRing::over(self.root_mod_p.field().clone(), k)
    }
}

fn int_val_or_inf(n: &BigInt, p: u64) -> i64 {
    if num_traits::Zero::is_zero(n) {
        i64::MAX / 4
    } else {
        int_val(n, p) as i64
    }
}

/// Norm `N_{K/Q}(a)` via the resultant with the defining polynomial.
pub fn norm(a: &NFElem) -> Rational {
    let m = &a.field.min_poly;
    // Res(m, a) = prod a(theta_i) for monic m
    resultant(m, &a.as_poly()).expect("nonzero defining polynomial")
}

/// Primes dividing the numerator or denominator of a nonzero rational.
pub fn primes_of(q: &Rational) -> Vec<u64> {
    use crate::exactcore::rational::factor_integer;
    use num_traits::ToPrimitive;
    let mut out: Vec<u64> = Vec::new();
    for part in [q.numer().abs(), q.denom().abs()] {
        for (pr, _) in factor_integer(&part.to_biguint().unwrap()) {
            out.push(pr.to_u64().expect("prime fits in u64"));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Primes at which some element of `coords` may fail to be a unit.
pub fn candidate_primes(coords: &[NFElem]) -> Vec<u64> {
    let mut out = Vec::new();
    for a in coords {
        if a.is_zero() {
            continue;
        }
        out.extend(primes_of(&norm(a)));
        for c in &a.coords {
            if !Ring::is_zero(c) {
                out.extend(primes_of(&Rational::from_integer(c.denom().clone())));
            }
        }
    }
    if let Some(k) = coords.first().map(|a| a.field.clone()) {
        let f = k.integral_poly();
        out.extend(primes_of(f.lead().unwrap()));
    }
    out.sort_unstable();
    out.dedup();
    out.retain(|&p| p > 1);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::poly::{qpoly, qpoly_rat};
    use crate::exactcore::rational::{int, rat};
    use crate::interval::rat_to_f64;

    fn q_sqrt3() -> Nf {
        NumberField::new(qpoly(&[-3, 0, 1])).unwrap()
    }

    #[test]
    fn minpoly_examples() {
        let k = q_sqrt3();
        assert_eq!(nf_minpoly(&k.from_rational(&rat(5, 7))), qpoly_rat(vec![rat(-5, 7), int(1)]));
        let x0 = k.elem(vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(nf_minpoly(&x0), qpoly_rat(vec![rat(-1, 2), int(-1), int(1)]));
        assert_eq!(nf_minpoly(&k.gen()), qpoly(&[-3, 0, 1]));
        assert_eq!(charpoly_via_resultant(&x0), nf_minpoly(&x0));
        let m = nf_minpoly(&x0);
        let val = m.coeffs().iter().rev().fold(k.from_rational(&int(0)), |acc, c| {
            acc.times(&x0).plus(&k.from_rational(c))
        });
        assert!(val.is_zero());
    }

    #[test]
    fn charpoly_is_power_of_minpoly() {
        // Q(2^(1/4)) contains sqrt 2 = t^2 with minpoly t^2 - 2
        let k = NumberField::new(qpoly(&[-2, 0, 0, 0, 1])).unwrap();
        let s = k.gen().times(&k.gen());
        let mp = nf_minpoly(&s);
        assert_eq!(mp, qpoly(&[-2, 0, 1]));
        assert_eq!(charpoly_via_resultant(&s), &mp * &mp);
        assert_eq!(k.irreducibility_witness(50), Some(5));
    }

    #[test]
    fn embedding_examples() {
        let q = NumberField::rationals();
        let e = embeddings(&q, &rat(1, 1000)).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e[0].root.real);
        let e = embeddings(&q_sqrt3(), &rat(1, 1 << 30)).unwrap();
        let c: Vec<f64> = e.iter().map(|p| rat_to_f64(&p.root.center.re)).collect();
        assert!((c[0] + 1.7320508).abs() < 1e-7 && (c[1] - 1.7320508).abs() < 1e-7);
        let k = NumberField::new(qpoly_rat(vec![rat(-1, 2), int(-1), int(1)])).unwrap();
        let e = embeddings(&k, &rat(1, 1 << 30)).unwrap();
        let c: Vec<f64> = e.iter().map(|p| rat_to_f64(&p.root.center.re)).collect();
        assert!((c[0] + 0.3660254).abs() < 1e-7 && (c[1] - 1.3660254).abs() < 1e-7);
        let gauss = NumberField::new(qpoly(&[1, 0, 1])).unwrap();
        let e = embeddings(&gauss, &rat(1, 1 << 20)).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].local_degree(), 2);
    }

    #[test]
    fn splitting_examples() {
        let q = NumberField::rationals();
        let s = split_unramified(&q, 7).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].residue_degree, 1);
        let gauss = NumberField::new(qpoly(&[1, 0, 1])).unwrap();
        let s = split_unramified(&gauss, 3).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].residue_degree, 2);
        let s5 = split_unramified(&gauss, 5).unwrap();
        assert_eq!(s5.iter().map(|p| p.residue_degree).sum::<usize>(), 2);
        let k = NumberField::new(qpoly_rat(vec![rat(-1, 2), int(-1), int(1)])).unwrap();
        assert!(matches!(split_unramified(&k, 3), Err(Error::Ramified(3))));
        assert!(matches!(split_unramified(&gauss, 2), Err(Error::Ramified(2))));
    }

    #[test]
    fn finite_valuations() {
        let gauss = NumberField::new(qpoly(&[1, 0, 1])).unwrap();
        // 5 = (2 + i)(2 - i); v(2 + i) is 1 at exactly one place above 5
        let a = gauss.elem(vec![int(2), int(1)]);
        let places = split_unramified(&gauss, 5).unwrap();
        let vals: Vec<i64> = places.iter().map(|p| p.valuation(&a).unwrap()).collect();
        let mut sorted = vals.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1]);
        let b = gauss.elem(vec![rat(3, 25), int(0)]);
        assert!(places.iter().all(|p| p.valuation(&b).unwrap() == -2));
        let three = split_unramified(&gauss, 3).unwrap();
        assert_eq!(three[0].valuation(&gauss.elem(vec![int(9), int(18)])).unwrap(), 2);
    }
}
