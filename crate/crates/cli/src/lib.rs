//! Report builders behind the `heightlab` command.

use heightlab::backorbit;
use heightlab::cert::{rat_json, Certificate, Provenance, Report, Table};
use heightlab::cohyp;
use heightlab::exactcore::rational::{int, parse_rational, rat_to_string, Rational};
use heightlab::henon3;
use heightlab::p2map::{self, PointP2};
use heightlab::padics::lte_check;
use heightlab::Result;
use serde_json::json;

pub const DEFAULT_SEED: u64 = 20240601;

fn pt(p: &PointP2<Rational>) -> String {
    let s: Vec<String> = p.0.iter().map(rat_to_string).collect();
    format!("({})", s.join(":"))
}

fn pt_of(a: i64, b: i64, c: i64) -> PointP2<Rational> {
    PointP2::rat(int(a), int(b), int(c))
}

pub fn per_a3(r: u32, prec: u32) -> Result<Report> {
    let mut rep = Report::new("per-a3")
        .param("r", json!(r))
        .param("prec", json!(prec));
    rep.extend(henon3::theorem21_verify(r, prec)?);
    if r == 0 {
        let pts = henon3::per2_solve()?;
        let mut reds: Vec<(u64, u64)> = pts.iter().map(henon3::reduce_mod3).collect::<Result<_>>()?;
        reds.sort();
        reds.dedup();
        rep.push(Certificate::equal(
            "per2.points",
            json!({"count": 9, "distinct_mod3": 9}),
            json!({"count": pts.len(), "distinct_mod3": reds.len()}),
            Provenance::Derived,
        ));
        let mut ok = true;
        for p in &pts {
            let q = henon3::phi(p, 2)?;
            let fq = henon3::f_step(&q);
            ok &= henon3::f_period(&q, 2) == henon3::g_period(p, 2) && henon3::phi(&henon3::g_step(p), 2)? == fq;
        }
        rep.push(Certificate::equal("per2.phi_periods", json!(true), json!(ok), Provenance::Claim));
    } else {
        for k in 0..=6 {
            let v = lte_check(k)?;
            rep.push(Certificate::equal(format!("lte.r{k}"), json!(k + 1), json!(v), Provenance::Claim));
        }
    }
    Ok(rep)
}

pub fn trace_scan(m: usize) -> Result<Report> {
    let mut rep = Report::new("trace-scan").param("m", json!(m));
    let census = henon3::per_gf_enumerate(m)?;
    let field_size = 3usize.pow(m as u32);
    rep.push(Certificate::equal(
        "census.points",
        json!({"points": field_size * field_size, "fixed_by_g_power": field_size * field_size, "power": census.period}),
        json!({"points": census.points.len(), "fixed_by_g_power": census.fixed_count, "power": census.period}),
        Provenance::Derived,
    ));
    let lm = henon3::linear_model_check(m)?;
    rep.push(Certificate::equal("census.linear_model", json!(true), json!(lm.pass()), Provenance::Claim));
    rep.push(Certificate::equal(
        "census.trace_identity",
        json!(true),
        json!(henon3::trace_poly_identity(m)?),
        Provenance::Claim,
    ));
    let tr = henon3::trace_check(m, None)?;
    rep.push(Certificate::equal(
        "trace.zero_count",
        json!(field_size * field_size / 3),
        json!(tr.zero_trace),
        Provenance::Derived,
    ));
    rep.push(Certificate::equal("trace.formula_failures", json!(0), json!(tr.formula_failures), Provenance::Claim));
    let (size, zeros) = tr.cells[tr.selected];
    rep.push(Certificate::new(
        "trace.selected_cell",
        json!("zero-trace fraction <= 1/3"),
        json!({"cell": tr.selected, "size": size, "zero_trace": zeros}),
        Provenance::Substitution,
        3 * zeros <= size,
    ));
    rep.table = Some(Table {
        header: vec!["cell".into(), "size".into(), "zero_trace".into()],
        rows: tr
            .cells
            .iter()
            .enumerate()
            .map(|(i, (s, z))| vec![i.to_string(), s.to_string(), z.to_string()])
            .collect(),
    });
    Ok(rep)
}

fn mat_str(a: &[[u64; 2]; 2]) -> String {
    format!("[[{} {}] [{} {}]]", a[0][0], a[0][1], a[1][0], a[1][1])
}

pub fn jacobian_table(l_max: usize) -> Result<Report> {
    let mut rep = Report::new("jacobian-table").param("lmax", json!(l_max));
    let rows = henon3::jacobian_table(l_max)?;
    let bad: Vec<usize> = rows.iter().filter(|r| r.invertible == (r.l % 8 == 0)).map(|r| r.l).collect();
    rep.push(Certificate::new(
        "jacobian.invertible_iff_8_ndiv_l",
        json!([]),
        json!(bad),
        Provenance::Claim,
        bad.is_empty(),
    ));
    rep.push(Certificate::equal("jacobian.order", json!(8), json!(henon3::jacobian_order()?), Provenance::Claim));
    rep.table = Some(Table {
        header: vec!["l".into(), "power".into(), "a".into(), "invertible".into()],
        rows: rows
            .iter()
            .map(|r| vec![r.l.to_string(), mat_str(&r.power), mat_str(&r.a), r.invertible.to_string()])
            .collect(),
    });
    Ok(rep)
}

fn family(d: u32, p: u64) -> Result<p2map::RationalMapP2> {
    p2map::make_fdp(d, p)
}

pub fn p2_degseq(d: u32, p: u64, n: usize, seed: u64) -> Result<Report> {
    let mut rep = Report::new("p2 degseq")
        .param("d", json!(d))
        .param("p", json!(p))
        .param("n", json!(n))
        .param("seed", json!(seed));
    let (degs, certs) = p2map::degree_sequence(&family(d, p)?, n, seed)?;
    let expected: Vec<u64> = (1..=n as u32).map(|k| (d as u64).pow(k)).collect();
    rep.push(Certificate::equal("p2.degree_sequence", json!(expected), json!(degs), Provenance::Claim));
    let all = certs.iter().all(|c| c.certified);
    rep.push(
        Certificate::new(
            "p2.coprime",
            json!(true),
            json!(certs.iter().map(|c| json!({"lines": c.lines, "prime": c.prime, "fallback_degree": c.fallback_degree})).collect::<Vec<_>>()),
            Provenance::Derived,
            all,
        )
        .with_note("constant gcd of a full-degree line restriction mod prime proves coprimality"),
    );
    rep.table = Some(Table {
        header: vec!["n".into(), "degree".into()],
        rows: degs.iter().enumerate().map(|(i, g)| vec![(i + 1).to_string(), g.to_string()]).collect(),
    });
    Ok(rep)
}

pub fn p2_indet(d: u32, p: u64) -> Result<Report> {
    let mut rep = Report::new("p2 indet").param("d", json!(d)).param("p", json!(p));
    let f = family(d, p)?;
    let mut pts: Vec<String> = p2map::indeterminacy_points(&f)?.iter().map(pt).collect();
    pts.sort();
    rep.push(Certificate::equal("p2.indeterminacy", json!(["(0:0:1)", "(0:1:0)"]), json!(pts), Provenance::Claim));
    rep.push(Certificate::equal(
        "p2.defined_at_111",
        json!(true),
        json!(f.eval(&pt_of(1, 1, 1)).is_some()),
        Provenance::Derived,
    ));
    Ok(rep)
}

pub fn p2_contracted(d: u32, p: u64, seed: u64) -> Result<Report> {
    let mut rep = Report::new("p2 contracted")
        .param("d", json!(d))
        .param("p", json!(p))
        .param("seed", json!(seed));
    let f = family(d, p)?;
    let c = p2map::fdp_constant(d, p);
    let special = PointP2::rat(-c, int(0), int(1));
    let list = p2map::contracted_images(&f, seed)?;
    for e in &list {
        let expected = match (e.curve.as_str(), d) {
            ("V(x)", _) => json!({"image": pt(&special), "contracted": true}),
            ("V(z)", 3) => json!({"contracted": false}),
            _ => json!({"image": "(1:0:0)", "contracted": true}),
        };
        let actual = if expected.get("image").is_some() {
            json!({"image": pt(&e.image), "contracted": e.contracted})
        } else {
            json!({"contracted": e.contracted})
        };
        rep.push(Certificate::equal(format!("p2.contracted.{}", e.curve), expected, actual, Provenance::Claim));
    }
    let img = f.eval(&special).map(|q| pt(&q));
    rep.push(Certificate::equal("p2.forward.special", json!("(1:0:0)"), json!(img), Provenance::Claim));
    let img = f.eval(&pt_of(1, 0, 0)).map(|q| pt(&q));
    rep.push(Certificate::equal("p2.forward.100", json!("(1:0:0)"), json!(img), Provenance::Claim));
    Ok(rep)
}

pub fn p2_preimages(d: u32, p: u64, samples: usize, seed: u64) -> Result<Report> {
    let mut rep = Report::new("p2 preimages")
        .param("d", json!(d))
        .param("p", json!(p))
        .param("samples", json!(samples))
        .param("seed", json!(seed));
    let f = family(d, p)?;
    let mut rows = Vec::new();
    let mut ok = true;
    for (a, b) in p2map::sample_u(d, p, samples, seed) {
        let pre = p2map::preimages(&f, &a, &b)?;
        let good = pre.maps_to(&f, &a, &b) && pre.avoids_indeterminacy();
        ok &= good;
        rows.push(vec![rat_to_string(&a), rat_to_string(&b), rat_to_string(&pre.x), rat_to_string(&pre.y_sq), "2".into(), good.to_string()]);
    }
    rep.push(Certificate::new(
        "p2.preimages",
        json!({"samples": samples, "preimages_each": 2}),
        json!({"samples": rows.len(), "all_verified": ok}),
        Provenance::Sampled,
        ok && rows.len() == samples,
    ));
    rep.table = Some(Table {
        header: ["a", "b", "x", "y_sq", "count", "verified"].map(String::from).to_vec(),
        rows,
    });
    Ok(rep)
}

pub fn backorbit_report(steps: usize, degmax: usize) -> Result<Report> {
    let mut rep = Report::new("backorbit").param("steps", json!(steps)).param("degmax", json!(degmax));
    rep.extend(backorbit::verify(steps, degmax)?);
    Ok(rep)
}

pub fn parse_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(|t| parse_rational(t.trim())).collect()
}

pub fn cohyp_lyapunov(degrees: &[Rational]) -> Result<Report> {
    let l = cohyp::lyapunov(degrees)?;
    let mut rep = Report::new("cohyp lyapunov").param("degrees", json!(degrees.iter().map(rat_json).collect::<Vec<_>>()));
    rep.push(Certificate::new(
        "cohyp.lyapunov",
        json!("mu_i = d_i / d_(i-1)"),
        json!({"mu": l.mu.iter().map(rat_json).collect::<Vec<_>>(), "classification": l.classification.describe()}),
        Provenance::Derived,
        true,
    ));
    if let cohyp::Classification::Hyperbolic(p) = l.classification {
        if p <= l.mu.len() {
            let mu_q = l.mu.get(p).cloned().unwrap_or_else(|| int(0));
            if l.mu[p - 1] > int(1) && mu_q < int(1) {
                rep.push(cohyp::eps_m_cert("cohyp.eps_m", &l.mu[p - 1], &mu_q)?);
            }
        }
    }
    Ok(rep)
}

pub fn cohyp_bound(alpha: &Rational, beta: &Rational, c: &Rational) -> Result<Report> {
    let b = cohyp::per_bound(alpha, beta, c)?;
    let mut rep = Report::new("cohyp bound")
        .param("alpha", rat_json(alpha))
        .param("beta", rat_json(beta))
        .param("c", rat_json(c));
    // the bound is the largest h admitting both h_f <= beta h + c1 and h_f >= alpha h + c2
    let squeeze = alpha * &b.bound + &b.c2 == beta * &b.bound + &b.c1;
    rep.push(Certificate::new(
        "cohyp.per_bound",
        json!("(c1 - c2)/(alpha - beta)"),
        json!({"c1": rat_json(&b.c1), "c2": rat_json(&b.c2), "bound": rat_json(&b.bound)}),
        Provenance::Derived,
        squeeze,
    ));
    Ok(rep)
}

pub fn cohyp_family(alpha: &Rational, beta: &Rational, k: &Rational, big_c: &Rational, h: &Rational) -> Result<Report> {
    let f = cohyp::family_bound(alpha, beta, k, big_c, h)?;
    let mut rep = Report::new("cohyp family")
        .param("alpha", rat_json(alpha))
        .param("beta", rat_json(beta))
        .param("k", rat_json(k))
        .param("C", rat_json(big_c))
        .param("h", rat_json(h));
    let affine = &f.coef_h * h + &f.coef_const == f.bound;
    rep.push(Certificate::new(
        "cohyp.family_bound",
        json!("C1 h + C2"),
        json!({"C1": rat_json(&f.coef_h), "C2": rat_json(&f.coef_const), "bound": rat_json(&f.bound)}),
        Provenance::Derived,
        affine,
    ));
    Ok(rep)
}

pub fn cohyp_recineq(heights: &[Rational], alpha: &Rational, beta: &Rational, c: &Rational, m: u32) -> Result<Report> {
    let mut rep = Report::new("cohyp recineq")
        .param("heights", json!(heights.iter().map(rat_json).collect::<Vec<_>>()))
        .param("alpha", rat_json(alpha))
        .param("beta", rat_json(beta))
        .param("c", rat_json(c))
        .param("m", json!(m));
    rep.push(cohyp::recineq_check("cohyp.recineq", heights, alpha, beta, c, m)?);
    Ok(rep)
}

/// Every report with default parameters, merged.
pub fn all(seed: u64) -> Result<Report> {
    let mut rep = Report::new("all").param("seed", json!(seed));
    let parts = [
        per_a3(0, 8)?,
        per_a3(1, 8)?,
        trace_scan(1)?,
        trace_scan(3)?,
        jacobian_table(8)?,
        p2_degseq(4, 2, 3, seed)?,
        p2_degseq(3, 5, 3, seed)?,
        p2_indet(4, 2)?,
        p2_contracted(4, 2, seed)?,
        p2_preimages(4, 2, 20, seed)?,
        backorbit_report(12, 3)?,
    ];
    for part in parts {
        let prefix = part.command.replace(' ', "_");
        let tag = part
            .params
            .iter()
            .filter(|(k, _)| k.as_str() != "seed")
            .map(|(k, v)| format!("{k}={}", v.as_str().map_or(v.to_string(), String::from)))
            .collect::<Vec<_>>()
            .join(",");
        for mut c in part.certificates {
            c.name = format!("{prefix}[{tag}].{}", c.name);
            rep.push(c);
        }
    }
    rep.extend(cohyp::verify()?);
    Ok(rep)
}
