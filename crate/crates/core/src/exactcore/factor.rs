//! Factorization of polynomials over finite fields: squarefree
//! decomposition, distinct-degree splitting, then Cantor–Zassenhaus
//! equal-degree splitting.

use super::gf::{Gf, GfElem, GfField};
use super::poly::{QPoly, UniPoly};
use super::rational::{is_prime, Rational};
use super::ring::{Field, Ring};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type GfPoly = UniPoly<GfElem>;

#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub unit: GfElem,
    /// Monic irreducible factors with multiplicity, in canonical order.
    pub factors: Vec<(GfPoly, usize)>,
}

impl Factorization {
    pub fn product(&self) -> GfPoly {
        let mut acc = GfPoly::constant(self.unit.clone());
        for (f, e) in &self.factors {
            for _ in 0..*e {
                acc = &acc * f;
            }
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }
}

/// Reduction of a rational into `GF(p)`; the denominator must be prime to `p`.
pub fn reduce_rational(q: &Rational, fp: &Gf) -> Option<GfElem> {
    let p = BigInt::from(fp.p());
    let d = q.denom().mod_floor(&p);
    if d.is_zero() {
        return None;
    }
    let n = q.numer().mod_floor(&p).to_u64()?;
    let d = fp.elem(d.to_u64()?);
    Some(fp.elem(n).times(&d.inv()?))
}

/// `f mod p` as a polynomial over `GF(p)`.
pub fn reduce_mod_p(f: &QPoly, p: u64) -> Result<GfPoly> {
    let fp = GfField::prime(p)?;
    let lead = f
        .lead()
        .ok_or_else(|| Error::Precondition("zero polynomial".into()))?;
    let coeffs: Option<Vec<GfElem>> = f.coeffs().iter().map(|c| reduce_rational(c, &fp)).collect();
    let coeffs = coeffs.ok_or(Error::BadReduction(p))?;
    match reduce_rational(lead, &fp) {
        Some(l) if !l.is_zero() => {}
        _ => return Err(Error::BadReduction(p)),
    }
    Ok(GfPoly::new(coeffs, fp))
}

/// Factor `f mod p` into monic irreducibles.
pub fn factor_mod_p(f: &QPoly, p: u64) -> Result<Factorization> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let fbar = reduce_mod_p(f, p)?;
    Ok(factor_gf(&fbar))
}

/// Factor a nonzero polynomial over any `GF(q)`.
pub fn factor_gf(f: &GfPoly) -> Factorization {
    let unit = f.lead().cloned().expect("nonzero polynomial");
    let mut factors = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (sq, mult) in squarefree_decomposition(&f.monic()) {
        for (g, d) in distinct_degree(&sq) {
            for h in equal_degree(&g, d, &mut rng) {
                factors.push((h, mult));
            }
        }
    }
    factors.sort_by(|a, b| poly_key(&a.0).cmp(&poly_key(&b.0)).then(a.1.cmp(&b.1)));
    Factorization { unit, factors }
}

/// Canonical ordering key: degree, then coefficients from the top.
pub fn poly_key(f: &GfPoly) -> (usize, Vec<u64>) {
    (
        f.degree().unwrap_or(0),
        f.coeffs().iter().rev().map(GfElem::index).collect(),
    )
}

fn field_order(f: &Gf) -> BigUint {
    f.order()
}

/// `x^(q^k) mod f` style power of the variable.
fn frobenius_power(h: &GfPoly, q: &BigUint, f: &GfPoly) -> GfPoly {
    h.pow_mod(q, f)
}

/// Squarefree decomposition of a monic polynomial in characteristic `p`.
pub fn squarefree_decomposition(f: &GfPoly) -> Vec<(GfPoly, usize)> {
    let field = f.coeff_ctx().clone();
    let p = field.p() as usize;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let fd = f.derivative();
    let mut c = f.gcd(&fd);
    let mut w = f.div_rem(&c).0;
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(&c);
        let fac = w.div_rem(&y).0;
        if fac.degree().unwrap_or(0) > 0 {
            out.push((fac.monic(), i));
        }
        w = y;
        c = c.div_rem(&w).0;
        i += 1;
    }
    if c.degree().unwrap_or(0) > 0 {
        // c is a p-th power: take the p-th root coefficientwise
        let root = pth_root(&c);
        for (g, e) in squarefree_decomposition(&root.monic()) {
            out.push((g, e * p));
        }
    }
    merge_multiplicities(out)
}

fn merge_multiplicities(mut v: Vec<(GfPoly, usize)>) -> Vec<(GfPoly, usize)> {
    v.sort_by(|a, b| a.1.cmp(&b.1).then(poly_key(&a.0).cmp(&poly_key(&b.0))));
    v
}

fn pth_root(c: &GfPoly) -> GfPoly {
    let field = c.coeff_ctx().clone();
    let p = field.p() as usize;
    // a^(1/p) = a^(p^(m-1)) in GF(p^m)
    let e = BigUint::from(field.p()).pow(field.degree() as u32 - 1);
    let deg = c.degree().unwrap();
    let coeffs: Vec<GfElem> = (0..=deg / p)
        .map(|i| c.coeff(i * p).pow_big(&e))
        .collect();
    GfPoly::new(coeffs, field)
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// pairs `(g, d)` where `g` is the product of all degree-`d` factors.
pub fn distinct_degree(f: &GfPoly) -> Vec<(GfPoly, usize)> {
    let field = f.coeff_ctx().clone();
    let q = field_order(&field);
    let x = GfPoly::var(&field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 0;
    while let Some(n) = rest.degree() {
        if n < 2 * (d + 1) {
            if n > 0 {
                out.push((rest.monic(), n));
            }
            break;
        }
        d += 1;
        h = frobenius_power(&h, &q, &rest);
        let g = rest.gcd(&(&h - &x));
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    out
}

/// Split a monic squarefree product of degree-`d` irreducibles.
pub fn equal_degree(f: &GfPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<GfPoly> {
    let field = f.coeff_ctx().clone();
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return vec![];
    }
    if n == d {
        return vec![f.monic()];
    }
    let q = field_order(&field);
    loop {
        let a = random_poly(&field, n, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if field.p() == 2 {
            // absolute trace a + a^2 + ... + a^(2^(k d - 1))
            let steps = field.degree() * d;
            let mut t = a.clone();
            let mut acc = a.clone();
            let two = BigUint::from(2u32);
            for _ in 1..steps {
                t = t.pow_mod(&two, f);
                acc = &acc + &t;
            }
            acc
        } else {
            let e = (q.pow(d as u32) - BigUint::from(1u32)) / BigUint::from(2u32);
            &a.pow_mod(&e, f) - &GfPoly::one_in(&field)
        };
        let g = f.gcd(&b);
        let k = g.degree().unwrap_or(0);
        if k > 0 && k < n {
            let mut left = equal_degree(&g, d, rng);
            left.extend(equal_degree(&f.div_rem(&g).0, d, rng));
            return left;
        }
    }
}

fn random_poly(field: &Gf, n: usize, rng: &mut ChaCha8Rng) -> GfPoly {
    GfPoly::new((0..n).map(|_| field.random(rng)).collect(), field.clone())
}

/// All roots in `GF(q)` of a nonzero polynomial over `GF(q)`, sorted.
pub fn roots_gf(f: &GfPoly) -> Vec<GfElem> {
    let field = f.coeff_ctx().clone();
    let q = field_order(&field);
    let x = GfPoly::var(&field);
    let fm = f.monic();
    if fm.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    let xq = x.pow_mod(&q, &fm);
    let g = fm.gcd(&(&xq - &x));
    let mut rng = ChaCha8Rng::seed_from_u64(0x7007);
    let mut roots: Vec<GfElem> = equal_degree(&g, 1, &mut rng)
        .into_iter()
        .map(|l| l.coeff(0).negate())
        .collect();
    roots.sort();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::gf::is_irreducible;
    use crate::exactcore::poly::qpoly;
    use crate::exactcore::rational::rat;
    use proptest::prelude::*;

    fn shape(f: &Factorization) -> Vec<(Vec<u64>, usize)> {
        f.factors
            .iter()
            .map(|(g, e)| (g.coeffs().iter().map(|c| c.index()).collect(), *e))
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(shape(&factor_mod_p(&qpoly(&[1, 0, 1]), 3).unwrap()), vec![(vec![1, 0, 1], 1)]);
        // t - 1 = t + 2 and t + 1, ordered by coefficients
        assert_eq!(
            shape(&factor_mod_p(&qpoly(&[-1, 0, 1]), 3).unwrap()),
            vec![(vec![1, 1], 1), (vec![2, 1], 1)]
        );
        assert_eq!(shape(&factor_mod_p(&qpoly(&[-3, 0, 1]), 3).unwrap()), vec![(vec![0, 1], 2)]);
    }

    #[test]
    fn bad_reduction() {
        let f = QPoly::from_coeffs(vec![rat(1, 1), rat(0, 1), rat(3, 1)]);
        assert!(matches!(factor_mod_p(&f, 3), Err(Error::BadReduction(3))));
        let g = QPoly::from_coeffs(vec![rat(1, 3), rat(1, 1)]);
        assert!(matches!(factor_mod_p(&g, 3), Err(Error::BadReduction(3))));
    }

    #[test]
    fn characteristic_two_and_pth_powers() {
        // (t^2 + t + 1)^2 (t + 1)^3 over GF(2)
        let a = qpoly(&[1, 1, 1]);
        let b = qpoly(&[1, 1]);
        let f = &(&(&a * &a) * &(&b * &b)) * &b;
        let fac = factor_mod_p(&f, 2).unwrap();
        assert_eq!(shape(&fac), vec![(vec![1, 1], 3), (vec![1, 1, 1], 2)]);
        // t^9 - t over GF(3) splits into t, t+1, t+2 and three quadratics
        let mut c = vec![0i64; 10];
        c[9] = 1;
        c[1] = -1;
        let fac = factor_mod_p(&qpoly(&c), 3).unwrap();
        assert_eq!(fac.factors.len(), 6);
        assert_eq!(fac.product(), reduce_mod_p(&qpoly(&c), 3).unwrap());
    }

    #[test]
    fn roots_in_extension() {
        let f9 = GfField::new(3, 2).unwrap();
        // t^2 + 1 has the two roots +-g in GF(9) with modulus t^2 + 1
        let f = GfPoly::new(vec![f9.elem(1), f9.elem(0), f9.elem(1)], f9.clone());
        let r = roots_gf(&f);
        assert_eq!(r.len(), 2);
        for z in &r {
            assert!(f.eval(z).is_zero());
        }
    }

    fn small_poly() -> impl Strategy<Value = QPoly> {
        proptest::collection::vec(-4i64..=4, 2..=9).prop_map(|mut c| {
            *c.last_mut().unwrap() = 1;
            qpoly(&c)
        })
    }

    proptest! {
        #[test]
        fn product_recovers_input(f in small_poly(), pi in 0usize..4) {
            let p = [2u64, 3, 5, 7][pi];
            let fac = factor_mod_p(&f, p).unwrap();
            prop_assert_eq!(fac.product(), reduce_mod_p(&f, p).unwrap());
            for (g, _) in &fac.factors {
                prop_assert!(is_irreducible(g));
            }
        }
    }
}
