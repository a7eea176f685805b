//! Lyapunov exponents from dynamical degrees, the parameter choice for the
//! recursive height inequality, and the resulting height bounds.

use crate::cert::{rat_json, Certificate, Provenance};
use crate::exactcore::rational::{int, Rational};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::json;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Maximum of `d_1..d_k` attained only at index `p`.
    Hyperbolic(usize),
    NotHyperbolic,
}

impl Classification {
    pub fn describe(&self) -> String {
        match self {
            Classification::Hyperbolic(p) => format!("{p}-cohomologically hyperbolic"),
            Classification::NotHyperbolic => "not cohomologically hyperbolic".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lyapunov {
    /// `mu_i = d_i / d_(i-1)` for `1 <= i <= k`, with `d_0 = 1`;
    /// `mu_(k+1) = 0` is implicit.
    pub mu: Vec<Rational>,
    pub classification: Classification,
}

pub fn lyapunov(d: &[Rational]) -> Result<Lyapunov> {
    if d.is_empty() {
        return Err(Error::Precondition("no dynamical degrees".into()));
    }
    if d.iter().any(|x| !x.is_positive()) {
        return Err(Error::Precondition("dynamical degrees must be positive".into()));
    }
    let mut prev = Rational::one();
    let mut mu = Vec::with_capacity(d.len());
    for x in d {
        mu.push(x / &prev);
        prev = x.clone();
    }
    let max = d.iter().max().unwrap();
    let at: Vec<usize> = (0..d.len()).filter(|&i| &d[i] == max).collect();
    let classification = if at.len() == 1 {
        Classification::Hyperbolic(at[0] + 1)
    } else {
        Classification::NotHyperbolic
    };
    Ok(Lyapunov { mu, classification })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecursionParams {
    pub mu_p: Rational,
    pub mu_q: Rational,
    pub eps: Rational,
    pub m: u32,
    /// `(eps^2 mu_p)^m`.
    pub alpha: Rational,
    /// `(eps^-2 mu_(p+1))^m`.
    pub beta: Rational,
}

pub const EPS_GRID: std::ops::RangeInclusive<u32> = 2..=20;
pub const M_CAP: u32 = 256;

fn powq(q: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= q;
    }
    acc
}

/// Both conditions of the parameter choice, in exact arithmetic.
pub fn params_valid(mu_p: &Rational, mu_q: &Rational, eps: &Rational, m: u32) -> bool {
    if m == 0 || !eps.is_positive() || eps >= &Rational::one() {
        return false;
    }
    let a1 = eps * eps * mu_p;
    let b1 = mu_q / (eps * eps);
    let one = Rational::one();
    a1 > one && one > b1 && powq(&a1, m) + powq(&b1, m) <= powq(&(eps * mu_p), m)
}

/// First `eps = 1 - 2^-j` on the grid admitting some `m <= M_CAP`, with
/// the least such `m`.
pub fn eps_m_search(mu_p: &Rational, mu_q: &Rational) -> Result<RecursionParams> {
    let one = Rational::one();
    if !(mu_p > &one && &one > mu_q && !mu_q.is_negative()) {
        return Err(Error::Precondition("need mu_p > 1 > mu_(p+1) >= 0".into()));
    }
    for j in EPS_GRID {
        let eps = &one - Rational::new(BigInt::one(), BigInt::one() << j);
        let a1 = &eps * &eps * mu_p;
        let b1 = mu_q / (&eps * &eps);
        if !(a1 > one && one > b1) {
            continue;
        }
        let c1 = &eps * mu_p;
        let (mut a, mut b, mut c) = (a1.clone(), b1.clone(), c1.clone());
        for m in 1..=M_CAP {
            if &a + &b <= c {
                return Ok(RecursionParams {
                    mu_p: mu_p.clone(),
                    mu_q: mu_q.clone(),
                    eps,
                    m,
                    alpha: a,
                    beta: b,
                });
            }
            a *= &a1;
            b *= &b1;
            c *= &c1;
        }
    }
    Err(Error::Precondition(format!(
        "no parameters on the grid eps = 1 - 2^-j, j in {}..={}, m <= {M_CAP}",
        EPS_GRID.start(),
        EPS_GRID.end()
    )))
}

fn check_alpha_beta(alpha: &Rational, beta: &Rational) -> Result<()> {
    let one = Rational::one();
    if !(alpha > &one && &one > beta && !beta.is_negative()) {
        return Err(Error::Precondition("need alpha > 1 > beta >= 0".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerBound {
    pub c1: Rational,
    pub c2: Rational,
    pub bound: Rational,
}

/// `c1 = c/(1-alpha)`, `c2 = c/(1-beta)`, `bound = (c1-c2)/(alpha-beta)`.
pub fn per_bound(alpha: &Rational, beta: &Rational, c: &Rational) -> Result<PerBound> {
    check_alpha_beta(alpha, beta)?;
    let one = Rational::one();
    let c1 = c / (&one - alpha);
    let c2 = c / (&one - beta);
    let bound = (&c1 - &c2) / (alpha - beta);
    Ok(PerBound { c1, c2, bound })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyBound {
    /// The bound is `coef_h * h + coef_const`.
    pub coef_h: Rational,
    pub coef_const: Rational,
    pub bound: Rational,
}

/// `per_bound` with `c = -k h + C`, returned with its affine coefficients.
pub fn family_bound(alpha: &Rational, beta: &Rational, k: &Rational, big_c: &Rational, h: &Rational) -> Result<FamilyBound> {
    check_alpha_beta(alpha, beta)?;
    if k.is_negative() {
        return Err(Error::Precondition("k must be nonnegative".into()));
    }
    let unit = per_bound(alpha, beta, &Rational::one())?.bound;
    let coef_h = -k * &unit;
    let coef_const = big_c * &unit;
    let bound = per_bound(alpha, beta, &(big_c - k * h))?.bound;
    Ok(FamilyBound { coef_h, coef_const, bound })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecIneq {
    pub triples: usize,
    pub min_slack: Rational,
    pub pass: bool,
}

/// `h_(i+2) + alpha beta h_i - (alpha + beta) h_(i+1) >= c` on consecutive
/// samples of one orbit taken every `m` steps.
pub fn recineq(heights: &[Rational], alpha: &Rational, beta: &Rational, c: &Rational) -> Result<RecIneq> {
    if heights.len() < 3 {
        return Err(Error::Precondition("need at least 3 samples".into()));
    }
    let ab = alpha * beta;
    let s = alpha + beta;
    let min_slack = heights
        .windows(3)
        .map(|w| &w[2] + &ab * &w[0] - &s * &w[1] - c)
        .min()
        .unwrap();
    Ok(RecIneq { triples: heights.len() - 2, pass: !min_slack.is_negative(), min_slack })
}

pub fn recineq_check(
    name: &str,
    heights: &[Rational],
    alpha: &Rational,
    beta: &Rational,
    c: &Rational,
    m: u32,
) -> Result<Certificate> {
    let r = recineq(heights, alpha, beta, c)?;
    Ok(Certificate::new(
        name,
        json!({"min_slack": ">= 0"}),
        json!({"min_slack": rat_json(&r.min_slack), "triples": r.triples, "m": m}),
        Provenance::Derived,
        r.pass,
    ))
}

pub fn lyapunov_cert(name: &str, d: &[Rational], expected: &Classification) -> Result<Certificate> {
    let l = lyapunov(d)?;
    Ok(Certificate::new(
        name,
        json!(expected.describe()),
        json!({"classification": l.classification.describe(), "mu": l.mu.iter().map(rat_json).collect::<Vec<_>>()}),
        Provenance::Claim,
        &l.classification == expected,
    ))
}

pub fn eps_m_cert(name: &str, mu_p: &Rational, mu_q: &Rational) -> Result<Certificate> {
    let p = eps_m_search(mu_p, mu_q)?;
    let ok = params_valid(&p.mu_p, &p.mu_q, &p.eps, p.m);
    Ok(Certificate::new(
        name,
        json!("eps^2 mu_p > 1 > eps^-2 mu_q and alpha + beta <= (eps mu_p)^m"),
        json!({"eps": rat_json(&p.eps), "m": p.m, "alpha": rat_json(&p.alpha), "beta": rat_json(&p.beta)}),
        Provenance::Derived,
        ok,
    ))
}

/// The certificates of the fixed examples.
pub fn verify() -> Result<Vec<Certificate>> {
    let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
    let mut out = vec![
        lyapunov_cert("cohyp.lyapunov.d4_2", &[int(4), int(2)], &Classification::Hyperbolic(1))?,
        lyapunov_cert("cohyp.lyapunov.d3_3", &[int(3), int(3)], &Classification::NotHyperbolic)?,
        lyapunov_cert("cohyp.lyapunov.d2_4", &[int(2), int(4)], &Classification::Hyperbolic(2))?,
        eps_m_cert("cohyp.eps_m.4_half", &int(4), &q(1, 2))?,
        eps_m_cert("cohyp.eps_m.2_0", &int(2), &int(0))?,
    ];
    let b = per_bound(&int(2), &q(1, 2), &int(-3))?;
    out.push(Certificate::equal(
        "cohyp.per_bound",
        json!({"c1": "3", "c2": "-6", "bound": "6"}),
        json!({"c1": rat_json(&b.c1), "c2": rat_json(&b.c2), "bound": rat_json(&b.bound)}),
        Provenance::Derived,
    ));
    let f = family_bound(&int(2), &q(1, 2), &int(1), &int(0), &int(1))?;
    out.push(Certificate::equal(
        "cohyp.family_bound",
        json!({"C1": "2", "C2": "0"}),
        json!({"C1": rat_json(&f.coef_h), "C2": rat_json(&f.coef_const)}),
        Provenance::Derived,
    ));
    // squaring map on P^1 from 2, heights in units of log 2
    let doubling: Vec<Rational> = (0..8).map(|i| Rational::from_integer(BigInt::one() << i)).collect();
    out.push(recineq_check("cohyp.recineq.doubling", &doubling, &int(2), &Rational::zero(), &Rational::zero(), 1)?);
    let constant = vec![int(5); 3];
    out.push(recineq_check("cohyp.recineq.constant", &constant, &int(2), &q(1, 2), &int(-3), 1)?);
    let fail = recineq_check("cohyp.recineq.counterexample", &constant, &int(2), &q(1, 2), &int(-2), 1)?;
    // designed to fail: the certificate passes when the check rejects
    out.push(Certificate::new(
        "cohyp.recineq.counterexample",
        json!({"rejected": true}),
        json!({"rejected": !fail.pass, "min_slack": fail.actual["min_slack"].clone()}),
        Provenance::Derived,
        !fail.pass,
    ));
    Ok(out)
}
