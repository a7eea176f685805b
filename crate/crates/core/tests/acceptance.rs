//! The twelve acceptance criteria, one PASS/FAIL line each.

use heightlab::backorbit::{self, standard_chain, DEFAULT_EXACT_CAP};
use heightlab::cohyp;
use heightlab::exactcore::rational::{int, rat, Rational};
use heightlab::henon3::{self, f_period, f_step, g_iter, g_period, phi};
use heightlab::interval::{ln_rational, rat_to_f64, Interval};
use heightlab::numberfield::height::weil_height_rational;
use heightlab::p2map::{self, make_fdp, PointP2};
use heightlab::padics::lte_check;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

/// Width bound for interval enclosures.
const INTERVAL_TOL: f64 = 1e-9;
/// Interval precision in bits.
const PREC: u32 = 96;
/// Seed for every sampled check.
const SEED: u64 = 20240601;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn width(i: &Interval) -> f64 {
    rat_to_f64(&(&i.hi - &i.lo))
}

fn pt(a: Rational, b: Rational, c: Rational) -> PointP2<Rational> {
    PointP2::rat(a, b, c)
}

fn per2_exactness() -> Outcome {
    let pts = ok(henon3::per2_solve())?;
    let expected: BTreeSet<(Rational, Rational)> =
        (-1..=1).flat_map(|a| (-1..=1).map(move |b| (int(a), int(b)))).collect();
    let got: BTreeSet<_> = pts.iter().cloned().collect();
    ensure!(pts.len() == 9 && got == expected, "points {pts:?}");
    ensure!(pts.iter().all(|p| p.0.is_integer() && p.1.is_integer()), "non-integral point");
    let reductions: BTreeSet<_> = pts.iter().map(|p| henon3::reduce_mod3(p).unwrap()).collect();
    ensure!(reductions.len() == 9, "{} distinct reductions", reductions.len());
    // brute force over a box: exactly these integer points have g^2 = id
    let brute: BTreeSet<_> = (-4..=4)
        .flat_map(|a| (-4..=4).map(move |b| (int(a), int(b))))
        .filter(|p| &g_iter(p, 2) == p)
        .collect();
    ensure!(brute == expected, "brute force found {brute:?}");
    Ok("9 integral points, 9 reductions".into())
}

fn phi_and_periods() -> Outcome {
    for p in ok(henon3::per2_solve())? {
        let q = ok(phi(&p, 2))?;
        let img = f_step(&q);
        let gp = g_period(&p, 8).ok_or("no g period")?;
        let fp = f_period(&q, 8).ok_or("no f period")?;
        ensure!(gp == fp, "periods differ at {p:?}: g {gp}, f {fp}");
        ensure!(f_step(&img) == q, "f^2(phi(P)) != phi(P) at {p:?}");
    }
    let q = ok(phi(&(int(0), int(1)), 2))?;
    ensure!(q == [int(0), int(1), rat(2, 3)], "phi((0,1),2) = {q:?}");
    Ok("phi((0,1),2) = (0,1,2/3)".into())
}

fn height_r0() -> Outcome {
    let h = ok(weil_height_rational(&[int(1), int(0), int(1), rat(2, 3)], PREC))?;
    let ln3 = ln_rational(&int(3), PREC);
    ensure!(h.overlaps(&ln3), "h = {h:?}, log 3 = {ln3:?}");
    ensure!(width(&h) < INTERVAL_TOL, "width {}", width(&h));
    ensure!((h.to_f64() - 3f64.ln()).abs() < INTERVAL_TOL, "h = {}", h.to_f64());
    let bound = ln3.scale(&rat(2, 3));
    ensure!(bound.certainly_lt(&h), "lower endpoint below (2/3) log 3");
    Ok(format!("h = {h:?}"))
}

fn jacobian_table() -> Outcome {
    // l = 1..8: J^l and J^l - I over F_3
    let powers = [
        [[0, 1], [1, 1]],
        [[1, 1], [1, 2]],
        [[1, 2], [2, 0]],
        [[2, 0], [0, 2]],
        [[0, 2], [2, 2]],
        [[2, 2], [2, 1]],
        [[2, 1], [1, 0]],
        [[1, 0], [0, 1]],
    ];
    let minus_id = [
        [[2, 1], [1, 0]],
        [[0, 1], [1, 1]],
        [[0, 2], [2, 2]],
        [[1, 0], [0, 1]],
        [[2, 2], [2, 1]],
        [[1, 2], [2, 0]],
        [[1, 1], [1, 2]],
        [[0, 0], [0, 0]],
    ];
    let rows = ok(henon3::jacobian_table(8))?;
    ensure!(rows.len() == 8, "{} rows", rows.len());
    for (i, r) in rows.iter().enumerate() {
        ensure!(r.power == powers[i], "l = {}: power {:?}", r.l, r.power);
        ensure!(r.a == minus_id[i], "l = {}: A {:?}", r.l, r.a);
        let det = (r.a[0][0] * r.a[1][1] + 3 * 3 - r.a[0][1] * r.a[1][0]) % 3;
        ensure!(r.invertible == (det != 0), "l = {}: invertibility", r.l);
    }
    ensure!(ok(henon3::jacobian_order())? == Some(8), "order is not 8");
    Ok("8 rows match, order 8".into())
}

fn census() -> Outcome {
    let c = ok(henon3::per_gf_enumerate(3))?;
    ensure!(c.points.len() == 729, "{} points", c.points.len());
    ensure!(c.period == 6 && c.fixed_count == 729, "{} fixed by g^6", c.fixed_count);
    let t = ok(henon3::trace_check(3, None))?;
    ensure!(t.zero_trace == 243, "zero trace {}", t.zero_trace);
    ensure!(t.formula_failures == 0, "{} formula failures", t.formula_failures);
    let (size, zeros) = t.cells[t.selected];
    ensure!(3 * zeros <= size, "selected cell {zeros}/{size}");
    ensure!(t.cells.iter().map(|c| c.0).sum::<usize>() == 729, "partition does not cover");
    Ok(format!("729 points, 243 zero-trace, cell {} with {zeros}/{size}", t.selected))
}

fn lift_r1() -> Outcome {
    let k = 8;
    let l = ok(henon3::lift_period6(k))?;
    ensure!(henon3::trace_diff(&l.seed) != 0, "seed has zero trace");
    ensure!(l.point.precision() == k, "precision {}", l.point.precision());
    ensure!(l.residual_zero, "g^6(P) != P mod 3^{k}");
    ensure!(l.v_zeta == 0, "v(zeta) = {}", l.v_zeta);
    ensure!(l.v_z0 == -2, "v(z0) = {}", l.v_z0);
    ensure!(matches!(l.v_plane, Some(v) if v < k as i64), "plane valuation {:?}", l.v_plane);
    Ok(format!("lift mod 3^{k}, v(x+2y-3z) = {:?}", l.v_plane.unwrap()))
}

fn lte() -> Outcome {
    for r in 0..=6u32 {
        let v = ok(lte_check(r))?;
        // oracle: repeated division
        let mut n: BigInt = (BigInt::one() << (2 * 3u32.pow(r))) - 1;
        let three = BigInt::from(3);
        let mut w = 0;
        while (&n % &three).is_zero() {
            n /= &three;
            w += 1;
        }
        ensure!(v == r + 1 && w == r + 1, "r = {r}: {v}, oracle {w}");
    }
    Ok("r = 0..6".into())
}

fn p2_map() -> Outcome {
    for (d, p, expected) in [(4, 2, vec![4, 16, 64]), (3, 5, vec![3, 9, 27])] {
        let f = ok(make_fdp(d, p))?;
        let (degs, certs) = ok(p2map::degree_sequence(&f, 3, SEED))?;
        ensure!(degs == expected, "f_{{{d},{p}}}: {degs:?}");
        // a constant gcd mod a prime proves coprimality outright
        ensure!(certs.iter().all(|c| c.certified), "coprimality not certified");
    }
    let f = ok(make_fdp(4, 2))?;
    let indet: BTreeSet<String> = ok(p2map::indeterminacy_points(&f))?.iter().map(|q| format!("{q:?}")).collect();
    let want: BTreeSet<String> = [pt(int(0), int(1), int(0)), pt(int(0), int(0), int(1))]
        .iter()
        .map(|q| format!("{q:?}"))
        .collect();
    ensure!(indet == want, "I_f = {indet:?}");
    let special = pt(rat(-1, 2), int(0), int(1));
    let e100 = pt(int(1), int(0), int(0));
    let contracted = ok(p2map::contracted_images(&f, SEED))?;
    let curves: BTreeSet<&str> = contracted.iter().map(|c| c.curve.as_str()).collect();
    ensure!(curves == BTreeSet::from(["V(x)", "V(y)", "V(z)"]), "curves {curves:?}");
    for c in &contracted {
        let want = if c.curve == "V(x)" { &special } else { &e100 };
        ensure!(c.contracted && &c.image == want, "{} -> {:?}", c.curve, c.image);
    }
    ensure!(f.eval(&special).as_ref() == Some(&e100), "f(-1/2:0:1) != (1:0:0)");
    ensure!(f.eval(&e100).as_ref() == Some(&e100), "f(1:0:0) != (1:0:0)");
    let samples = p2map::sample_u(4, 2, 20, SEED);
    ensure!(samples.len() == 20, "{} samples", samples.len());
    for (a, b) in &samples {
        let pre = ok(p2map::preimages(&f, a, b))?;
        ensure!(pre.avoids_indeterminacy() && pre.maps_to(&f, a, b), "sample ({a}, {b})");
        // oracle: direct evaluation at (x' : y' : 1) with y'^2 = y_sq
        let lhs = &pre.y_sq * (a + rat(1, 2));
        ensure!(lhs == b.pow(4), "preimage radicand at ({a}, {b})");
    }
    Ok("degrees, I_f, contracted table, 20 samples".into())
}

fn backward_orbit() -> Outcome {
    let c = ok(standard_chain(12, DEFAULT_EXACT_CAP))?;
    ensure!(c.len() == 13, "{} nodes", c.len());
    let prefix = backorbit::prefix_check(&c);
    ensure!(prefix.pass, "prefix {}", prefix.actual);
    let ident = ok(backorbit::identity_cert(&c))?;
    ensure!(ident.pass, "identity {}", ident.actual);
    let (lhs, rhs) = backorbit::anchor_inequality(PREC);
    ensure!(width(&lhs) < INTERVAL_TOL && width(&rhs) < INTERVAL_TOL, "anchor widths");
    ensure!(rhs.certainly_lt(&lhs), "anchor {lhs:?} vs {rhs:?}");
    let x0 = (1.0 + 3f64.sqrt()) / 2.0;
    ensure!((lhs.to_f64() - (2.0 / 3f64.sqrt()).sqrt() * x0 * x0).abs() < INTERVAL_TOL, "anchor oracle");
    let growth = ok(backorbit::arch_growth_cert(&c, None, 3))?;
    ensure!(growth.pass, "growth {}", growth.actual);
    ensure!(growth.actual["steps"].as_array().map(Vec::len) == Some(9), "growth covers n = 3..11");
    // oracle: f64 moduli from the enclosures
    for n in 3..12 {
        let (a, b) = (c.nodes[n].y.enclosure.abs().to_f64(), c.nodes[n + 1].y.enclosure.abs().to_f64());
        ensure!(b >= a.powf(1.5), "n = {n}: {b} < {a}^1.5");
    }
    let v2 = backorbit::v2_invariant(&c);
    ensure!(v2.pass && c.nodes.iter().all(|n| n.v2 == (rat(-1, 2), rat(-1, 2))), "v2 {}", v2.actual);
    let hb = ok(backorbit::height_growth_cert(&c, 3, 5))?;
    for m in [4, 5] {
        let h = hb.iter().find(|h| h.m == m).ok_or(format!("no height at m = {m}"))?;
        let exact = h.exact.as_ref().ok_or(format!("no exact height at m = {m}"))?;
        ensure!(h.pass && h.bound.certainly_le(exact), "m = {m}: {exact:?} vs {:?}", h.bound);
        ensure!(width(exact) < INTERVAL_TOL, "m = {m}: width {}", width(exact));
    }
    Ok(format!("anchor {:.7} >= {:.7}, 12 steps", lhs.to_f64(), rhs.to_f64()))
}

fn valuation_growth() -> Outcome {
    ensure!(ok(backorbit::v3_matrix_check(20))?, "v3 recursion disagrees with matrix powers");
    // oracle: iterate (v_n, v_{n+1}) -> (v_{n+1}, 2 v_{n+1} - v_n / 2) by hand
    let rec = ok(backorbit::v3_recursion(20))?;
    let mut cur = rec[0].clone();
    for r in &rec[1..] {
        cur = (cur.1.clone(), int(2) * &cur.1 - &cur.0 / int(2));
        ensure!(&cur == r, "recursion {cur:?} vs {r:?}");
    }
    let rows = ok(backorbit::val_matrix_2adic(8))?;
    ensure!(rows.len() == 8, "{} rows", rows.len());
    for r in &rows {
        let m = r.m as i64;
        ensure!(r.diag == (-m, -m), "m = {m}: diag {:?}", r.diag);
        ensure!(r.v2_vx == -m - 2, "m = {m}: v2 {}", r.v2_vx);
        ensure!(r.degree_lower_bound >= 1 << m && r.pass, "m = {m}: degree bound");
    }
    Ok("N = 20, m = 1..8".into())
}

fn bound_arithmetic() -> Outcome {
    let b = ok(cohyp::per_bound(&int(2), &rat(1, 2), &int(-3)))?;
    ensure!(b.bound == int(6), "per_bound = {}", b.bound);
    let f = ok(cohyp::family_bound(&int(2), &rat(1, 2), &int(1), &int(0), &int(5)))?;
    ensure!(f.coef_h == int(2) && f.coef_const == int(0), "family ({}, {})", f.coef_h, f.coef_const);
    for (p, q) in [(int(4), rat(1, 2)), (int(2), int(0)), (rat(3, 2), rat(2, 3))] {
        let e = ok(cohyp::eps_m_search(&p, &q))?;
        ensure!(cohyp::params_valid(&p, &q, &e.eps, e.m), "eps_m ({p}, {q})");
        // oracle: direct powers
        let a1 = &e.eps * &e.eps * &p;
        let b1 = &q / (&e.eps * &e.eps);
        ensure!(e.alpha == a1.pow(e.m as i32) && e.beta == b1.pow(e.m as i32), "alpha, beta");
        ensure!(&e.alpha + &e.beta <= (&e.eps * &p).pow(e.m as i32), "recursion condition");
    }
    // h_i = 2^i solves h'' - 3h' + 2h = 0 exactly
    let doubling: Vec<Rational> = (0..8).map(|i| int(1 << i)).collect();
    ensure!(ok(cohyp::recineq(&doubling, &int(2), &int(1), &int(0)))?.pass, "doubling orbit rejected");
    let bad = [int(0), int(4), int(5), int(6)];
    ensure!(!ok(cohyp::recineq(&bad, &int(2), &rat(1, 2), &int(0)))?.pass, "counterexample accepted");
    Ok("per_bound 6, family (2, 0)".into())
}

fn density() -> Outcome {
    let c = ok(standard_chain(12, DEFAULT_EXACT_CAP))?;
    let ev = ok(backorbit::curve_evidence(&c, 12, 3))?;
    ensure!(ev.pass && ev.rank == 10 && ev.monomials == 10, "rank {}", ev.rank);
    let pts = ok(henon3::per12_f_points())?;
    let rows: Vec<Vec<Rational>> = pts.iter().map(|p| p.to_vec()).collect();
    let dim = ok(henon3::span_dim(&rows))?;
    ensure!(dim == 2, "span dimension {dim}");
    ensure!(pts.iter().all(|p| &p[0] + int(2) * &p[1] == int(3) * &p[2]), "point off x + 2y = 3z");
    Ok("curve rank 10, span dim 2".into())
}

fn main() {
    let criteria: [(&str, f64, fn() -> Outcome); 12] = [
        ("per2 exactness", 1.0, per2_exactness),
        ("phi and periods", 1.0, phi_and_periods),
        ("height lower bound r=0", 1.0, height_r0),
        ("jacobian table", 1.0, jacobian_table),
        ("finite-field census", 5.0, census),
        ("3-adic lift r=1", 5.0, lift_r1),
        ("lifting the exponent", 1.0, lte),
        ("P2 map", 30.0, p2_map),
        ("backward orbit", 60.0, backward_orbit),
        ("valuation growth", 1.0, valuation_growth),
        ("bound arithmetic", 1.0, bound_arithmetic),
        ("density evidence", 5.0, density),
    ];
    let mut failed = Vec::new();
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let (tag, msg) = match &out {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        println!("{tag} {:>2} {name}: {msg} ({secs:.2}s, budget {budget}s)", i + 1);
        if out.is_err() {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
