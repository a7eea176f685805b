//! Resultants via the Sylvester matrix and a fraction-free determinant.

use super::matrix::Matrix;
use super::poly::UniPoly;
use super::ring::Ring;
use crate::{Error, Result};

/// Sylvester matrix of `f` (degree m) and `g` (degree n), size `m + n`.
pub fn sylvester<R: Ring>(f: &UniPoly<R>, g: &UniPoly<R>) -> Option<Matrix<R>> {
    let m = f.degree()?;
    let n = g.degree()?;
    let size = m + n;
    if size == 0 {
        return None;
    }
    let ctx = f.coeff_ctx().clone();
    let mut s = Matrix::zeros(size, size, &ctx);
    for i in 0..n {
        for (k, c) in f.coeffs().iter().rev().enumerate() {
            s.set(i, i + k, c.clone());
        }
    }
    for i in 0..m {
        for (k, c) in g.coeffs().iter().rev().enumerate() {
            s.set(n + i, i + k, c.clone());
        }
    }
    Some(s)
}

/// `Res(f, g)`: zero exactly when `f` and `g` share a root, for nonzero
/// inputs.
pub fn resultant<R: Ring>(f: &UniPoly<R>, g: &UniPoly<R>) -> Result<R> {
    let ctx = f.coeff_ctx().clone();
    match (f.degree(), g.degree()) {
        (None, None) => Err(Error::UndefinedResultant),
        (None, _) | (_, None) => Ok(R::zero(&ctx)),
        (Some(0), Some(n)) => Ok(f.coeff(0).pow(n as u64)),
        (Some(m), Some(0)) => Ok(g.coeff(0).pow(m as u64)),
        _ => sylvester(f, g)
            .expect("positive total degree")
            .det(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::poly::{qpoly, qpoly_rat, QPoly};
    use crate::exactcore::rational::{int, rat, Rational};
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(resultant(&qpoly(&[-1, 1]), &qpoly(&[1, 1])).unwrap(), int(2));
        assert_eq!(resultant(&qpoly(&[0, 1]), &qpoly(&[0, 1])).unwrap(), int(0));
        let a = qpoly_rat(vec![rat(-1, 2), int(-1), int(1)]);
        let b = qpoly(&[-3, 0, 4]);
        assert!(!resultant(&a, &b).unwrap().is_zero());
        assert!(matches!(
            resultant(&QPoly::zero_in(&()), &QPoly::zero_in(&())),
            Err(Error::UndefinedResultant)
        ));
    }

    #[test]
    fn matches_root_product() {
        // Res(f, g) = lc(f)^deg g * prod g(roots of f)
        let f = &qpoly(&[-1, 1]) * &qpoly(&[-2, 1]);
        let g = qpoly(&[5, 0, 1]);
        assert_eq!(resultant(&f, &g).unwrap(), int(6 * 9));
    }

    fn small_poly() -> impl Strategy<Value = QPoly> {
        proptest::collection::vec(-3i64..=3, 1..=4).prop_map(|c| qpoly(&c))
    }

    proptest! {
        #[test]
        fn vanishes_iff_common_factor(a in small_poly(), b in small_poly(), c in small_poly()) {
            // products of degree up to 6 with a planted optional common factor
            let f = &a * &c;
            let g = &b * &c;
            prop_assume!(!f.is_zero() && !g.is_zero());
            let r: Rational = resultant(&f, &g).unwrap();
            let common = f.gcd(&g).degree().unwrap() > 0;
            prop_assert_eq!(r.is_zero(), common);
            let r2 = resultant(&a, &b);
            if let Ok(r2) = r2 {
                if !a.is_zero() && !b.is_zero() {
                    prop_assert_eq!(r2.is_zero(), a.gcd(&b).degree().unwrap() > 0);
                }
            }
        }
    }
}
