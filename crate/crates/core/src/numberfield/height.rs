//! Absolute logarithmic Weil heights as certified intervals.

use super::{candidate_primes, embeddings, split_unramified, NFElem};
use crate::exactcore::poly::QPoly;
use crate::exactcore::rational::{int, Rational};
use crate::exactcore::ring::Ring;
use crate::interval::{ln_rational, Interval};
use crate::numberfield::roots::isolate_roots;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type HeightInterval = Interval;

/// Default target width of reported heights.
pub fn default_tolerance() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10u64).pow(9))
}

/// `h(x_0 : ... : x_n)` for rational coordinates: clear denominators,
/// remove the content, take `log max |a_i|`.
pub fn weil_height_rational(coords: &[Rational], prec: u32) -> Result<Interval> {
    if coords.iter().all(Zero::is_zero) {
        return Err(Error::Precondition("all coordinates are zero".into()));
    }
    let l = coords
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coords
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
    let m = ints.iter().map(|a| a.abs()).max().unwrap();
    Ok(ln_rational(&Rational::new(m, g), prec))
}

/// `h(x) = (1/[K:Q]) sum_v n_v log max_i |x_i|_v` for a nonzero vector over
/// a number field. Finite places are taken over the primes where some
/// coordinate can fail to be a unit; each such prime must be unramified in
/// the sense of [`split_unramified`].
pub fn weil_height(coords: &[NFElem]) -> Result<Interval> {
    weil_height_with(coords, &default_tolerance())
}

pub fn weil_height_with(coords: &[NFElem], tol: &Rational) -> Result<Interval> {
    if coords.is_empty() || coords.iter().all(Ring::is_zero) {
        return Err(Error::Precondition("all coordinates are zero".into()));
    }
    if let Some(rats) = coords.iter().map(NFElem::as_rational).collect::<Option<Vec<_>>>() {
        return weil_height_rational(&rats, 96);
    }
    let finite = finite_part(coords)?;
    let n = coords[0].field().degree() as i64;
    let mut prec = 96u32;
    while prec <= 8192 {
        if let Some(arch) = archimedean_part(coords, prec)? {
            let total = arch
                .add(&Interval::point(&finite.0, prec))
                .add(&ln_combination(&finite.1, prec));
            let h = total.scale(&Rational::new(1.into(), n.into()));
            if &h.width() <= tol {
                return Ok(h);
            }
        }
        prec *= 2;
    }
    Err(Error::Undecidable("height interval did not reach the target width".into()))
}

/// `sum_v n_v log max_i |sigma_v(x_i)|` over archimedean places, or `None`
/// if the precision is too low to bound the maxima away from zero.
pub fn archimedean_part(coords: &[NFElem], prec: u32) -> Result<Option<Interval>> {
    let k = coords[0].field().clone();
    let eps = Rational::new(BigInt::one(), BigInt::one() << (prec as u64 - 8));
    let places = embeddings(&k, &eps)?;
    let mut sum = Interval::zero(prec);
    for v in &places {
        let root = v.root.to_box(prec);
        let mut best: Option<Interval> = None;
        for x in coords {
            let a = x.eval_box(&root).abs();
            best = Some(match best {
                None => a,
                Some(b) => b.max(&a),
            });
        }
        let Some(lm) = best.unwrap().ln() else {
            return Ok(None);
        };
        sum = sum.add(&lm.scale(&Rational::from_integer((v.local_degree() as i64).into())));
    }
    Ok(Some(sum))
}

/// Finite contribution as `(0, [(p, e_p)])`, meaning `sum_p e_p log p`.
fn finite_part(coords: &[NFElem]) -> Result<(Rational, Vec<(u64, i64)>)> {
    let k = coords[0].field().clone();
    let mut terms = Vec::new();
    for p in candidate_primes(coords) {
        let places = split_unramified(&k, p)?;
        let mut e = 0i64;
        for v in &places {
            let mut min_val: Option<i64> = None;
            for x in coords.iter().filter(|x| !x.is_zero()) {
                let val = v.valuation(x)?;
                min_val = Some(min_val.map_or(val, |m: i64| m.min(val)));
            }
            // log max |x_i|_v = -min v(x_i) log p
            e -= v.residue_degree as i64 * min_val.unwrap();
        }
        if e != 0 {
            terms.push((p, e));
        }
    }
    Ok((int(0), terms))
}

fn ln_combination(terms: &[(u64, i64)], prec: u32) -> Interval {
    terms.iter().fold(Interval::zero(prec), |acc, (p, e)| {
        acc.add(
            &ln_rational(&Rational::from_integer((*p).into()), prec)
                .scale(&Rational::from_integer((*e).into())),
        )
    })
}

/// Height of an algebraic number from its minimal polynomial over `Q`:
/// `(log |c| + sum log max(1, |alpha_i|)) / deg`, `c` the leading
/// coefficient of the primitive integral multiple.
pub fn mahler_height(min_poly: &QPoly) -> Result<Interval> {
    let n = min_poly
        .degree()
        .ok_or_else(|| Error::Precondition("zero polynomial".into()))?;
    if n == 0 {
        return Err(Error::Precondition("constant polynomial".into()));
    }
    let ints = min_poly.primitive_integer();
    let lead = ints.last().unwrap().abs();
    let f = QPoly::from_coeffs(ints.into_iter().map(Rational::from_integer).collect());
    let tol = default_tolerance();
    let mut prec = 96u32;
    while prec <= 8192 {
        let eps = Rational::new(BigInt::one(), BigInt::one() << (prec as u64 - 8));
        let disks = isolate_roots(&f, &eps)?;
        let mut sum = ln_rational(&Rational::from_integer(lead.clone()), prec);
        for d in &disks {
            let a = d.to_box(prec).abs();
            let one = int(1);
            let term = if a.hi <= one {
                Interval::zero(prec)
            } else if a.lo >= one {
                a.ln().expect("positive")
            } else {
                Interval::new(int(0), a.ln().map_or(one.clone(), |l| l.hi), prec)
            };
            sum = sum.add(&term);
        }
        let h = sum.scale(&Rational::new(1.into(), (n as i64).into()));
        if h.width() <= tol {
            return Ok(h);
        }
        prec *= 2;
    }
    Err(Error::Undecidable("Mahler measure interval too wide".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::poly::{qpoly, qpoly_rat};
    use crate::exactcore::rational::{int, rat};
    use crate::numberfield::{embeddings, split_unramified, NumberField};
    use proptest::prelude::*;

    #[test]
    fn rational_examples() {
        let h = weil_height_rational(&[int(1), int(0), int(1), rat(2, 3)], 96).unwrap();
        assert!(h.contains(&crate::interval::f64_to_rat(3f64.ln())) || (h.to_f64() - 3f64.ln()).abs() < 1e-15);
        let h = weil_height_rational(&[int(1), int(1), int(1)], 96).unwrap();
        assert!(h.contains(&int(0)));
    }

    #[test]
    fn archimedean_example() {
        let k = NumberField::new(qpoly(&[-3, 0, 1])).unwrap();
        let x0 = k.elem(vec![rat(1, 2), rat(1, 2)]);
        let one = k.from_rational(&int(1));
        let arch = archimedean_part(&[one, x0.clone(), x0], 128).unwrap().unwrap();
        let h = arch.scale(&rat(1, 2));
        let expect = 0.5 * ((1.0 + 3f64.sqrt()) / 2.0).ln();
        assert!((h.to_f64() - expect).abs() < 1e-12);
        assert!((h.to_f64() - 0.1560).abs() < 1e-4);
    }

    #[test]
    fn weil_height_matches_mahler_for_quadratic() {
        // h(1 : u) for the unit u = 2 + sqrt 3 equals h(u) from its minimal polynomial
        let k = NumberField::new(qpoly(&[-3, 0, 1])).unwrap();
        let u = k.elem(vec![int(2), int(1)]);
        let w = weil_height(&[k.from_rational(&int(1)), u]).unwrap();
        let m = mahler_height(&qpoly(&[1, -4, 1])).unwrap();
        assert!(w.overlaps(&m));
        assert!(w.width() <= default_tolerance());
        assert!((w.to_f64() - 0.5 * (2.0 + 3f64.sqrt()).ln()).abs() < 1e-12);
        // (1 + sqrt 3)/2 has a denominator at the ramified prime 2
        let x0 = k.elem(vec![rat(1, 2), rat(1, 2)]);
        assert!(matches!(
            weil_height(&[k.from_rational(&int(1)), x0]),
            Err(Error::Ramified(2))
        ));
        let m = mahler_height(&qpoly_rat(vec![rat(-1, 2), int(-1), int(1)])).unwrap();
        assert!((m.to_f64() - 0.5 * (2.0 * ((1.0 + 3f64.sqrt()) / 2.0)).ln()).abs() < 1e-12);
    }

    #[test]
    fn scaling_invariance() {
        let k = NumberField::new(qpoly(&[1, 0, 1])).unwrap();
        let a = k.elem(vec![int(3), int(-2)]);
        let b = k.elem(vec![rat(1, 5), int(2)]);
        let s = k.elem(vec![int(2), int(7)]);
        let h1 = weil_height(&[a.clone(), b.clone()]).unwrap();
        let h2 = weil_height(&[a.times(&s), b.times(&s)]).unwrap();
        assert!(h1.overlaps(&h2));
    }

    fn product_formula_sum(x: &NFElem) -> Interval {
        let k = x.field().clone();
        let n = k.degree() as i64;
        let prec = 128;
        let eps = Rational::new(BigInt::one(), BigInt::one() << 120u32);
        let mut sum = Interval::zero(prec);
        for v in embeddings(&k, &eps).unwrap() {
            let a = x.eval_box(&v.root.to_box(prec)).abs().ln().unwrap();
            sum = sum.add(&a.scale(&Rational::from_integer((v.local_degree() as i64).into())));
        }
        for p in candidate_primes(std::slice::from_ref(x)) {
            for v in split_unramified(&k, p).unwrap() {
                let e = -(v.residue_degree as i64) * v.valuation(x).unwrap();
                sum = sum.add(&ln_rational(&Rational::from_integer(p.into()), prec).scale(&Rational::from_integer(e.into())));
            }
        }
        sum.scale(&Rational::new(1.into(), n.into()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn product_formula_gaussian(a in -30i64..30, b in -30i64..30, d in 1i64..20) {
            prop_assume!(a != 0 || b != 0);
            // skip elements divisible by the ramified prime 2
            let k = NumberField::new(qpoly(&[1, 0, 1])).unwrap();
            let x = k.elem(vec![rat(a, d), rat(b, d)]);
            let primes = candidate_primes(std::slice::from_ref(&x));
            prop_assume!(!primes.contains(&2));
            prop_assert!(product_formula_sum(&x).contains(&int(0)));
        }

        #[test]
        fn product_formula_rational(a in -500i64..500, d in 1i64..500) {
            prop_assume!(a != 0);
            let q = NumberField::rationals();
            let x = q.from_rational(&rat(a, d));
            prop_assert!(product_formula_sum(&x).contains(&int(0)));
        }

        #[test]
        fn integer_height_is_log_max(a in -1000i64..1000, b in -1000i64..1000, c in 1i64..1000) {
            let g = num_integer::gcd(num_integer::gcd(a, b), c);
            let h = weil_height_rational(&[int(a / g), int(b / g), int(c / g)], 96).unwrap();
            let m = (a / g).abs().max((b / g).abs()).max(c / g);
            prop_assert!(h.overlaps(&ln_rational(&int(m), 96)));
        }
    }
}
