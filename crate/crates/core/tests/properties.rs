//! Structural invariants checked on random inputs.

use heightlab::cohyp;
use heightlab::exactcore::gf::GfField;
use heightlab::exactcore::rational::{int, Rational};
use heightlab::henon3::{f_iter, f_step, g_period, g_step, phi};
use heightlab::p2map::{compose_reduce, make_fdp, HPoly, PointP2, RationalMapP2};
use num_traits::Zero;
use proptest::prelude::*;

fn q() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn linear(m: [[i64; 3]; 3]) -> RationalMapP2 {
    let comps = m.map(|row| {
        (0..3).fold(HPoly::zero(1), |acc, i| acc.add(&HPoly::var(i).scale(&int(row[i]))))
    });
    RationalMapP2::new(comps).unwrap()
}

fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn mat() -> impl Strategy<Value = [[i64; 3]; 3]> {
    prop::array::uniform3(prop::array::uniform3(-2i64..=2)).prop_filter("singular", |m| det3(m) != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn f_fibres_over_g(x in q(), y in q(), z in q()) {
        let img = f_step(&[x.clone(), y.clone(), z]);
        prop_assert_eq!((img[0].clone(), img[1].clone()), g_step(&(x, y)));
    }

    #[test]
    fn phi_is_a_periodic_section(p in prop::sample::select(vec![5u64, 7, 11, 13]), i in 0u64..169, j in 0u64..169) {
        let k = GfField::prime(p).unwrap();
        let pt = (k.elem(i % p), k.elem(j % p));
        let n = g_period(&pt, 400).unwrap();
        // phi divides by 2^n - 1
        prop_assume!(n < 60 && !((1u64 << n) - 1).is_multiple_of(p));
        let s = phi(&pt, n).unwrap();
        prop_assert_eq!((s[0].clone(), s[1].clone()), pt);
        prop_assert_eq!(f_iter(&s, n), s);
    }

    #[test]
    fn lyapunov_hyperbolicity_is_permutation_invariant(
        d in prop::collection::vec(1i64..6, 1..5),
        perm in any::<prop::sample::Index>(),
    ) {
        let a: Vec<Rational> = d.iter().map(|&v| int(v)).collect();
        let mut b = a.clone();
        let k = perm.index(b.len());
        b.rotate_left(k);
        let ha = cohyp::lyapunov(&a).unwrap().classification == cohyp::Classification::NotHyperbolic;
        let hb = cohyp::lyapunov(&b).unwrap().classification == cohyp::Classification::NotHyperbolic;
        prop_assert_eq!(ha, hb);
        // the product of the exponents recovers the last degree
        let prod = cohyp::lyapunov(&a).unwrap().mu.iter().fold(int(1), |acc, m| acc * m);
        prop_assert_eq!(&prod, a.last().unwrap());
    }

    #[test]
    fn constant_orbit_squeeze(a in 2i64..6, bn in 0i64..4, c in -10i64..=0, h in q()) {
        // a constant height sequence satisfies the inequality iff it lies below the bound
        let (alpha, beta, c) = (int(a), Rational::new(bn.into(), 4.into()), int(c));
        let b = cohyp::per_bound(&alpha, &beta, &c).unwrap();
        let r = cohyp::recineq(&[h.clone(), h.clone(), h.clone()], &alpha, &beta, &c).unwrap();
        prop_assert_eq!(r.pass, h <= b.bound);
    }

    #[test]
    fn family_bound_is_affine(k in 0i64..5, big_c in -5i64..5, h in q()) {
        let (alpha, beta) = (int(2), Rational::new(1.into(), 2.into()));
        let f = cohyp::family_bound(&alpha, &beta, &int(k), &int(big_c), &h).unwrap();
        prop_assert_eq!(&f.bound, &(&f.coef_h * &h + &f.coef_const));
    }

    #[test]
    fn eps_m_is_valid_and_minimal(p in 11i64..40, qn in 0i64..9) {
        let (mu_p, mu_q) = (Rational::new(p.into(), 10.into()), Rational::new(qn.into(), 10.into()));
        if let Ok(r) = cohyp::eps_m_search(&mu_p, &mu_q) {
            prop_assert!(cohyp::params_valid(&mu_p, &mu_q, &r.eps, r.m));
            prop_assert!(r.m == 1 || !cohyp::params_valid(&mu_p, &mu_q, &r.eps, r.m - 1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn composition_is_associative(l1 in mat(), l2 in mat(), x in q(), y in q()) {
        let f = make_fdp(3, 2).unwrap();
        let (a, b) = (linear(l1), linear(l2));
        let left = compose_reduce(&a, &compose_reduce(&f, &b).unwrap()).unwrap();
        let right = compose_reduce(&compose_reduce(&a, &f).unwrap(), &b).unwrap();
        prop_assert_eq!(left.degree(), 3);
        prop_assert_eq!(right.degree(), 3);
        let pt = PointP2::rat(x, y, int(1));
        let (u, v) = (left.eval(&pt), right.eval(&pt));
        prop_assert_eq!(&u, &v);
        if let Some(u) = u {
            prop_assert!(!u.0.iter().all(Zero::is_zero));
        }
    }
}
