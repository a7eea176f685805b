//! Rational self-maps of the projective plane given by three homogeneous
//! polynomials, with the family
//! `f_{d,p} = (x^d - p^(3-d) y^2 z^(d-2) : x y^2 z^(d-3) : y^2 z^(d-2))`.

use crate::exactcore::factor::reduce_rational;
use crate::exactcore::gf::{GfElem, GfField};
use crate::exactcore::poly::{bivariate, BiPoly, QPoly, UniPoly};
use crate::exactcore::rational::{int, is_prime, rat_pow, rat_sqrt_exact, Rational};
use crate::exactcore::ring::{Field, QAlgebra, Ring};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;

pub type Exps = [u32; 3];

/// Sparse homogeneous polynomial in `x, y, z` over `Q`.
#[derive(Clone, PartialEq, Eq)]
pub struct HPoly {
    degree: u32,
    terms: BTreeMap<Exps, Rational>,
}

impl fmt::Debug for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: String = ["x", "y", "z"]
                    .iter()
                    .zip(e)
                    .filter(|(_, &k)| k > 0)
                    .map(|(v, &k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
                    .collect::<Vec<_>>()
                    .join("*");
                if mono.is_empty() {
                    format!("{c}")
                } else {
                    format!("({c})*{mono}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl HPoly {
    pub fn zero(degree: u32) -> Self {
        HPoly {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(c: Rational, e: Exps) -> Self {
        let mut p = HPoly::zero(e.iter().sum());
        p.add_term(e, c);
        p
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        HPoly::monomial(int(1), e)
    }

    fn add_term(&mut self, e: Exps, c: Rational) {
        if c == int(0) {
            return;
        }
        let v = self.terms.entry(e).or_insert_with(|| int(0));
        *v += c;
        if *v == int(0) {
            self.terms.remove(&e);
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Exps, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn add(&self, o: &HPoly) -> HPoly {
        assert!(self.is_zero() || o.is_zero() || self.degree == o.degree);
        let mut r = HPoly::zero(if self.is_zero() { o.degree } else { self.degree });
        for (e, c) in self.terms.iter().chain(&o.terms) {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn scale(&self, c: &Rational) -> HPoly {
        let mut r = HPoly::zero(self.degree);
        for (e, a) in &self.terms {
            r.add_term(*e, a * c);
        }
        r
    }

    pub fn sub(&self, o: &HPoly) -> HPoly {
        self.add(&o.scale(&int(-1)))
    }

    pub fn mul(&self, o: &HPoly) -> HPoly {
        let mut r = HPoly::zero(self.degree + o.degree);
        for (e, a) in &self.terms {
            for (f, b) in &o.terms {
                r.add_term([e[0] + f[0], e[1] + f[1], e[2] + f[2]], a * b);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> HPoly {
        let mut acc = HPoly::monomial(int(1), [0, 0, 0]);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `self(g_0, g_1, g_2)` for homogeneous `g_i` of a common degree.
    pub fn compose(&self, g: &[HPoly; 3]) -> HPoly {
        let dg = g.iter().find(|p| !p.is_zero()).map_or(0, |p| p.degree);
        let mut powers: [Vec<HPoly>; 3] = Default::default();
        for i in 0..3 {
            let top = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
            let mut v = vec![HPoly::monomial(int(1), [0, 0, 0])];
            for k in 1..=top as usize {
                let next = v[k - 1].mul(&g[i]);
                v.push(next);
            }
            powers[i] = v;
        }
        let mut r = HPoly::zero(self.degree * dg);
        for (e, c) in &self.terms {
            let t = powers[0][e[0] as usize]
                .mul(&powers[1][e[1] as usize])
                .mul(&powers[2][e[2] as usize]);
            for (f, b) in t.terms {
                r.add_term(f, c * b);
            }
        }
        r
    }

    /// Exponent-wise minimum over all terms.
    pub fn monomial_content(&self) -> Exps {
        let mut m = [u32::MAX; 3];
        for e in self.terms.keys() {
            for i in 0..3 {
                m[i] = m[i].min(e[i]);
            }
        }
        if self.is_zero() {
            [0; 3]
        } else {
            m
        }
    }

    pub fn div_monomial(&self, m: Exps) -> HPoly {
        let mut r = HPoly::zero(self.degree - m.iter().sum::<u32>());
        for (e, c) in &self.terms {
            r.add_term([e[0] - m[0], e[1] - m[1], e[2] - m[2]], c.clone());
        }
        r
    }

    pub fn eval<K: QAlgebra>(&self, p: &[K; 3]) -> K {
        let ctx = p[0].ctx();
        let mut acc = K::zero(&ctx);
        for (e, c) in &self.terms {
            let t = p[0].pow(e[0] as u64).times(&p[1].pow(e[1] as u64)).times(&p[2].pow(e[2] as u64));
            acc = acc.plus(&K::from_q(&ctx, c).times(&t));
        }
        acc
    }

    /// Evaluation when only `y^2` is known: every `y`-exponent must be even.
    pub fn eval_y_squared<K: QAlgebra>(&self, x: &K, y_sq: &K, z: &K) -> Option<K> {
        let ctx = x.ctx();
        let mut acc = K::zero(&ctx);
        for (e, c) in &self.terms {
            if e[1] % 2 == 1 {
                return None;
            }
            let t = x.pow(e[0] as u64).times(&y_sq.pow((e[1] / 2) as u64)).times(&z.pow(e[2] as u64));
            acc = acc.plus(&K::from_q(&ctx, c).times(&t));
        }
        Some(acc)
    }

    /// `self(x, y, 1)` as a bivariate polynomial.
    pub fn dehomogenize(&self) -> BiPoly {
        let (x, y) = (bivariate::x(), bivariate::y());
        let mut acc = BiPoly::zero_in(&());
        for (e, c) in &self.terms {
            let t = &x.pow(e[0] as u64) * &y.pow(e[1] as u64);
            acc = &acc + &t.scale(&QPoly::constant(c.clone()));
        }
        acc
    }

    /// Homogenization of a bivariate polynomial to total degree `degree`.
    pub fn homogenize(p: &BiPoly, degree: u32) -> Result<HPoly> {
        let mut r = HPoly::zero(degree);
        for (j, cx) in p.coeffs().iter().enumerate() {
            for (i, c) in cx.coeffs().iter().enumerate() {
                if c == &int(0) {
                    continue;
                }
                let s = (i + j) as u32;
                if s > degree {
                    return Err(Error::Dimension(format!("term of degree {s} exceeds {degree}")));
                }
                r.add_term([i as u32, j as u32, degree - s], c.clone());
            }
        }
        Ok(r)
    }
}

/// Three homogeneous polynomials of equal degree.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMapP2 {
    pub comps: [HPoly; 3],
    /// `(d, p)` when built by [`make_fdp`].
    pub family: Option<(u32, u64)>,
}

impl RationalMapP2 {
    pub fn new(comps: [HPoly; 3]) -> Result<Self> {
        if comps.iter().all(HPoly::is_zero) {
            return Err(Error::Precondition("all components are zero".into()));
        }
        let degs: Vec<u32> = comps.iter().filter(|c| !c.is_zero()).map(|c| c.degree).collect();
        if degs.iter().any(|&d| d != degs[0]) {
            return Err(Error::Dimension(format!("component degrees differ: {degs:?}")));
        }
        Ok(RationalMapP2 { comps, family: None })
    }

    pub fn identity() -> Self {
        RationalMapP2::new([HPoly::var(0), HPoly::var(1), HPoly::var(2)]).unwrap()
    }

    pub fn degree(&self) -> u32 {
        self.comps.iter().find(|c| !c.is_zero()).unwrap().degree
    }

    /// Image of a point, or `None` at an indeterminacy point.
    pub fn eval<K: QAlgebra + Field>(&self, p: &PointP2<K>) -> Option<PointP2<K>> {
        let v = [self.comps[0].eval(&p.0), self.comps[1].eval(&p.0), self.comps[2].eval(&p.0)];
        PointP2::new(v).ok()
    }
}

/// A point of the projective plane, scaled so its first nonzero coordinate
/// is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct PointP2<K>(pub [K; 3]);

impl<K: Field> PointP2<K> {
    pub fn new(c: [K; 3]) -> Result<Self> {
        let Some(lead) = c.iter().find(|a| !a.is_zero()) else {
            return Err(Error::Precondition("all coordinates are zero".into()));
        };
        let inv = lead.inv().unwrap();
        Ok(PointP2([c[0].times(&inv), c[1].times(&inv), c[2].times(&inv)]))
    }
}

impl PointP2<Rational> {
    pub fn rat(a: Rational, b: Rational, c: Rational) -> Self {
        PointP2::new([a, b, c]).unwrap()
    }
}

/// The map `f_{d,p}` of degree `d`.
pub fn make_fdp(d: u32, p: u64) -> Result<RationalMapP2> {
    if d < 3 {
        return Err(Error::Precondition(format!("d must be at least 3, got {d}")));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let c = fdp_constant(d, p);
    let f = HPoly::monomial(int(1), [d, 0, 0]).sub(&HPoly::monomial(c, [0, 2, d - 2]));
    let g = HPoly::monomial(int(1), [1, 2, d - 3]);
    let h = HPoly::monomial(int(1), [0, 2, d - 2]);
    let mut m = RationalMapP2::new([f, g, h])?;
    m.family = Some((d, p));
    Ok(m)
}

/// `p^(-(d-3))`.
pub fn fdp_constant(d: u32, p: u64) -> Rational {
    rat_pow(&int(p as i64), -(d as i64 - 3))
}

/// How coprimality of a composite was established.
#[derive(Clone, Debug, PartialEq)]
pub struct CoprimeCert {
    /// Monomial factor removed exactly.
    pub monomial: Exps,
    /// Random lines tried; the last one had constant gcd mod `prime`.
    pub lines: usize,
    pub prime: u64,
    /// Degree of a non-monomial common factor removed by exact gcd.
    pub fallback_degree: u32,
    pub certified: bool,
}

const LINE_PRIME: u64 = 2_147_483_647;
const LINE_TRIES: usize = 8;

/// Restriction of the components to the line `A + tB`, reduced mod `q`,
/// or `None` if some coefficient is not `q`-integral.
fn restrict_mod(comps: &[HPoly; 3], a: &[Rational; 3], b: &[Rational; 3], fq: &crate::exactcore::gf::Gf) -> Option<Vec<UniPoly<GfElem>>> {
    let line = |i: usize| QPoly::from_coeffs(vec![a[i].clone(), b[i].clone()]);
    let pt = [line(0), line(1), line(2)];
    comps
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| {
            let r = c.eval(&pt);
            let cs: Option<Vec<GfElem>> = r.coeffs().iter().map(|q| reduce_rational(q, fq)).collect();
            cs.map(|v| UniPoly::new(v, fq.clone()))
        })
        .collect()
}

/// Try to certify that the components have no common factor by restricting
/// them to random lines: a constant gcd mod `q` on a line where some
/// restriction keeps full degree mod `q` excludes every common factor.
fn line_certify(comps: &[HPoly; 3], deg: u32, rng: &mut ChaCha8Rng) -> Result<(bool, usize)> {
    let fq = GfField::prime(LINE_PRIME)?;
    for attempt in 1..=LINE_TRIES {
        let mut pick = || -> [Rational; 3] { [0, 1, 2].map(|_| int(rng.gen_range(-(1 << 15)..=(1 << 15)))) };
        let (a, b) = (pick(), pick());
        let Some(rs) = restrict_mod(comps, &a, &b, &fq) else { continue };
        if !rs.iter().any(|r| r.degree() == Some(deg as usize)) {
            continue;
        }
        let g = rs.iter().skip(1).fold(rs[0].clone(), |acc, r| acc.gcd(r));
        if g.degree() == Some(0) {
            return Ok((true, attempt));
        }
    }
    Ok((false, LINE_TRIES))
}

/// Remove the common factor of three homogeneous polynomials: monomial part
/// exactly, then a line certificate, falling back to an exact bivariate gcd.
pub fn reduce_common_factor(comps: [HPoly; 3], seed: u64) -> Result<([HPoly; 3], CoprimeCert)> {
    if comps.iter().all(HPoly::is_zero) {
        return Err(Error::Precondition("all components vanish after substitution".into()));
    }
    let mut m = [u32::MAX; 3];
    for c in comps.iter().filter(|c| !c.is_zero()) {
        let e = c.monomial_content();
        for i in 0..3 {
            m[i] = m[i].min(e[i]);
        }
    }
    let mut comps = comps.map(|c| if c.is_zero() { HPoly::zero(c.degree - m.iter().sum::<u32>()) } else { c.div_monomial(m) });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let deg = comps.iter().find(|c| !c.is_zero()).unwrap().degree;
    let (ok, lines) = line_certify(&comps, deg, &mut rng)?;
    let mut cert = CoprimeCert {
        monomial: m,
        lines,
        prime: LINE_PRIME,
        fallback_degree: 0,
        certified: ok,
    };
    if ok {
        return Ok((comps, cert));
    }
    // exact fallback on the chart z = 1 (z-power content is already gone)
    let bis: Vec<BiPoly> = comps.iter().map(HPoly::dehomogenize).collect();
    let g = bis
        .iter()
        .filter(|p| !p.is_zero())
        .fold(BiPoly::zero_in(&()), |acc, p| bivariate::gcd(&acc, p));
    let e = bivariate::total_degree(&g).unwrap_or(0) as u32;
    if e > 0 {
        let nd = deg - e;
        let mut out = Vec::new();
        for (c, b) in comps.iter().zip(&bis) {
            if c.is_zero() {
                out.push(HPoly::zero(nd));
                continue;
            }
            let (q, r) = b
                .div_rem_exact(&g)
                .ok_or_else(|| Error::Internal("gcd does not divide component".into()))?;
            if !r.is_zero() {
                return Err(Error::Internal("gcd does not divide component".into()));
            }
            out.push(HPoly::homogenize(&q, nd)?);
        }
        comps = [out[0].clone(), out[1].clone(), out[2].clone()];
    }
    let (ok, more) = line_certify(&comps, deg - e, &mut rng)?;
    cert.lines += more;
    cert.fallback_degree = e;
    cert.certified = ok || e > 0;
    Ok((comps, cert))
}

/// `F ∘ G` with the common factor removed.
pub fn compose_reduce(f: &RationalMapP2, g: &RationalMapP2) -> Result<RationalMapP2> {
    compose_reduce_seeded(f, g, 0).map(|(m, _)| m)
}

pub fn compose_reduce_seeded(f: &RationalMapP2, g: &RationalMapP2, seed: u64) -> Result<(RationalMapP2, CoprimeCert)> {
    let comps = [f.comps[0].compose(&g.comps), f.comps[1].compose(&g.comps), f.comps[2].compose(&g.comps)];
    let (comps, cert) = reduce_common_factor(comps, seed)?;
    Ok((RationalMapP2::new(comps)?, cert))
}

/// Degrees of `F, F^2, ..., F^N` after reduction, with the certificates of
/// each composite.
pub fn degree_sequence(f: &RationalMapP2, n: usize, seed: u64) -> Result<(Vec<u32>, Vec<CoprimeCert>)> {
    if n > 3 {
        return Err(Error::DegreeCap(format!("degree sequences are capped at N = 3, got {n}")));
    }
    let mut degs = Vec::new();
    let mut certs = Vec::new();
    if n == 0 {
        return Ok((degs, certs));
    }
    let (mut it, c) = {
        let (comps, c) = reduce_common_factor(f.comps.clone(), seed)?;
        (RationalMapP2::new(comps)?, c)
    };
    degs.push(it.degree());
    certs.push(c);
    for k in 2..=n {
        let (next, c) = compose_reduce_seeded(f, &it, seed.wrapping_add(k as u64))?;
        it = next;
        degs.push(it.degree());
        certs.push(c);
    }
    Ok((degs, certs))
}

/// Binary form `sum c_i u^i w^(k-i)` given by its coefficients.
fn binary_common_zeros(forms: &[Vec<Rational>]) -> Result<Vec<(Rational, Rational)>> {
    let nonzero: Vec<&Vec<Rational>> = forms.iter().filter(|f| f.iter().any(|c| c != &int(0))).collect();
    if nonzero.is_empty() {
        return Err(Error::Undecidable("a whole coordinate line is indeterminate".into()));
    }
    let mut out = Vec::new();
    // (u : w) = (1 : 0) is a zero iff the u^k coefficient vanishes
    if nonzero.iter().all(|f| f.last() == Some(&int(0))) {
        out.push((int(1), int(0)));
    }
    let g = nonzero
        .iter()
        .map(|f| QPoly::from_coeffs((*f).clone()))
        .fold(QPoly::zero_in(&()), |acc, p| acc.gcd(&p));
    let roots = g.rational_roots();
    if g.degree().unwrap_or(0) > 0 {
        let sf = g.gcd(&g.derivative());
        let distinct = g.degree().unwrap() - sf.degree().unwrap_or(0);
        if distinct != roots.len() {
            return Err(Error::Undecidable("common zeros are not all rational".into()));
        }
    }
    for r in roots {
        out.push((r, int(1)));
    }
    Ok(out)
}

/// Common zeros of the components. Requires a monomial component, so that
/// every common zero lies on a coordinate line.
pub fn indeterminacy_points(f: &RationalMapP2) -> Result<Vec<PointP2<Rational>>> {
    let Some(mono) = f.comps.iter().find(|c| c.is_monomial()) else {
        return Err(Error::Precondition("no monomial component".into()));
    };
    let e = *mono.terms().keys().next().unwrap();
    let mut pts: Vec<PointP2<Rational>> = Vec::new();
    for v in (0..3).filter(|&v| e[v] > 0) {
        let (u, w) = match v {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let k = f.degree() as usize;
        let forms: Vec<Vec<Rational>> = f
            .comps
            .iter()
            .map(|c| {
                let mut cs = vec![int(0); k + 1];
                for (ex, a) in c.terms() {
                    if ex[v] == 0 {
                        cs[ex[u] as usize] += a;
                    }
                }
                cs
            })
            .collect();
        for (a, b) in binary_common_zeros(&forms)? {
            let mut c = [int(0), int(0), int(0)];
            c[u] = a;
            c[w] = b;
            let p = PointP2::new(c)?;
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
    }
    pts.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(pts)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Contracted {
    pub curve: String,
    pub image: PointP2<Rational>,
    /// `false` when the sampled images are not a single point.
    pub contracted: bool,
    pub samples: usize,
}

/// Images of the coordinate lines, each checked on 5 sampled points away
/// from the indeterminacy locus. For `d = 3`, `V(z)` maps into itself and is
/// reported with `contracted = false`.
pub fn contracted_images(f: &RationalMapP2, seed: u64) -> Result<Vec<Contracted>> {
    let Some((d, _)) = f.family else {
        return Err(Error::Precondition("map is not from the f_{d,p} family".into()));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (name, v) in [("V(x)", 0usize), ("V(y)", 1), ("V(z)", 2)] {
        let mut images = Vec::new();
        for _ in 0..5 {
            let s = loop {
                let s: i64 = rng.gen_range(-1000..=1000);
                if s != 0 {
                    break s;
                }
            };
            let t: i64 = rng.gen_range(1..=1000);
            // a point on the line with both remaining coordinates nonzero
            let mut c = [int(s), int(t), int(1)];
            c[v] = int(0);
            let p = PointP2::new(c)?;
            let img = f
                .eval(&p)
                .ok_or_else(|| Error::Internal(format!("sample {:?} is indeterminate", p.0)))?;
            images.push(img);
        }
        let contracted = images.iter().all(|q| q == &images[0]);
        if d == 3 && v == 2 && contracted {
            return Err(Error::Internal("V(z) unexpectedly contracted for d = 3".into()));
        }
        out.push(Contracted {
            curve: name.into(),
            image: images[0].clone(),
            contracted,
            samples: images.len(),
        });
    }
    Ok(out)
}

/// The two preimages of `Q = (a : b : 1)` in `U = {(x + p^(3-d) z) y z != 0}`:
/// `x' = b` and `y'^2 = b^d / (a + p^(3-d))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Preimages<K> {
    pub x: K,
    pub y_sq: K,
}

impl<K: QAlgebra + Field> Preimages<K> {
    /// Whether `y` is one of the two preimage `y`-coordinates.
    pub fn contains_y(&self, y: &K) -> bool {
        y.times(y) == self.y_sq
    }

    /// Exact forward check `f(x' : ±y' : 1) = (a : b : 1)`, valid for both
    /// signs because the family only involves `y^2`.
    pub fn maps_to(&self, f: &RationalMapP2, a: &K, b: &K) -> bool {
        let one = K::one(&a.ctx());
        let v: Option<Vec<K>> = f.comps.iter().map(|c| c.eval_y_squared(&self.x, &self.y_sq, &one)).collect();
        let Some(v) = v else { return false };
        !v[2].is_zero() && v[0] == a.times(&v[2]) && v[1] == b.times(&v[2])
    }

    /// The two preimages are distinct and neither is `(0:1:0)` or `(0:0:1)`.
    pub fn avoids_indeterminacy(&self) -> bool {
        !self.y_sq.is_zero() && !self.x.is_zero()
    }
}

pub fn preimages<K: QAlgebra + Field>(f: &RationalMapP2, a: &K, b: &K) -> Result<Preimages<K>> {
    let Some((d, p)) = f.family else {
        return Err(Error::Precondition("map is not from the f_{d,p} family".into()));
    };
    let ctx = a.ctx();
    let shifted = a.plus(&K::from_q(&ctx, &fdp_constant(d, p)));
    if b.is_zero() {
        return Err(Error::Precondition("Q is not in U: y = 0".into()));
    }
    if shifted.is_zero() {
        return Err(Error::Precondition("Q is not in U: x + p^(3-d) z = 0".into()));
    }
    let y_sq = b.pow(d as u64).divide(&shifted).unwrap();
    Ok(Preimages { x: b.clone(), y_sq })
}

/// Rational `y'` when the radicand is a rational square.
pub fn rational_sqrt(p: &Preimages<Rational>) -> Option<Rational> {
    rat_sqrt_exact(&p.y_sq)
}

/// Seeded rational sample points of `U` for `f_{d,p}`.
pub fn sample_u(d: u32, p: u64, count: usize, seed: u64) -> Vec<(Rational, Rational)> {
    let c = fdp_constant(d, p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let a = Rational::new(rng.gen_range(-50..=50).into(), rng.gen_range(1..=9).into());
        let b = Rational::new(rng.gen_range(-50..=50).into(), rng.gen_range(1..=9).into());
        if b != int(0) && &a + &c != int(0) {
            out.push((a, b));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::poly::qpoly;
    use crate::exactcore::rational::rat;
    use crate::numberfield::NumberField;

    fn pt(a: i64, b: i64, c: i64) -> PointP2<Rational> {
        PointP2::rat(int(a), int(b), int(c))
    }

    #[test]
    fn family_examples() {
        let f = make_fdp(4, 2).unwrap();
        let want_f = HPoly::monomial(int(1), [4, 0, 0]).sub(&HPoly::monomial(rat(1, 2), [0, 2, 2]));
        assert_eq!(f.comps[0], want_f);
        assert_eq!(f.comps[1], HPoly::monomial(int(1), [1, 2, 1]));
        assert_eq!(f.comps[2], HPoly::monomial(int(1), [0, 2, 2]));
        let g = make_fdp(3, 5).unwrap();
        assert_eq!(g.comps[0], HPoly::monomial(int(1), [3, 0, 0]).sub(&HPoly::monomial(int(1), [0, 2, 1])));
        assert_eq!(g.degree(), 3);
        assert!(make_fdp(2, 2).is_err());
        assert!(make_fdp(4, 4).is_err());
    }

    #[test]
    fn composition() {
        let f = make_fdp(4, 2).unwrap();
        let id = RationalMapP2::identity();
        assert_eq!(compose_reduce(&f, &id).unwrap().comps, f.comps);
        assert_eq!(compose_reduce(&id, &f).unwrap().comps, f.comps);
        let (ff, c) = compose_reduce_seeded(&f, &f, 1).unwrap();
        assert_eq!(ff.degree(), 16);
        assert!(c.certified && c.fallback_degree == 0);
        let x2 = HPoly::var(0).pow(2);
        let deg = RationalMapP2::new([x2.clone(), HPoly::var(0).mul(&HPoly::var(1)), HPoly::var(0).mul(&HPoly::var(2))]).unwrap();
        assert_eq!(compose_reduce(&deg, &f).unwrap().degree(), 4);
        assert_eq!(compose_reduce(&f, &deg).unwrap().degree(), 4);
    }

    #[test]
    fn non_monomial_common_factor_is_removed() {
        let l = HPoly::var(0).add(&HPoly::var(1));
        let m = RationalMapP2::new([HPoly::var(0).mul(&l), HPoly::var(1).mul(&l), HPoly::var(2).mul(&l)]).unwrap();
        let (r, c) = compose_reduce_seeded(&m, &RationalMapP2::identity(), 3).unwrap();
        assert_eq!(r.degree(), 1);
        assert_eq!(c.fallback_degree, 1);
        assert!(c.certified);
    }

    #[test]
    fn degree_sequences() {
        assert_eq!(degree_sequence(&make_fdp(4, 2).unwrap(), 3, 0).unwrap().0, vec![4, 16, 64]);
        assert_eq!(degree_sequence(&make_fdp(3, 5).unwrap(), 3, 0).unwrap().0, vec![3, 9, 27]);
        assert_eq!(degree_sequence(&RationalMapP2::identity(), 3, 0).unwrap().0, vec![1, 1, 1]);
        assert!(degree_sequence(&RationalMapP2::identity(), 4, 0).is_err());
    }

    #[test]
    fn indeterminacy() {
        for (d, p) in [(4, 2), (5, 3), (3, 5)] {
            let f = make_fdp(d, p).unwrap();
            assert_eq!(indeterminacy_points(&f).unwrap(), vec![pt(0, 0, 1), pt(0, 1, 0)]);
        }
        let f = make_fdp(4, 2).unwrap();
        assert!(f.eval(&pt(1, 1, 1)).is_some());
    }

    #[test]
    fn contracted_curves() {
        let f = make_fdp(4, 2).unwrap();
        let c = contracted_images(&f, 7).unwrap();
        assert_eq!(c[0].image, PointP2::rat(rat(-1, 2), int(0), int(1)));
        assert_eq!(c[1].image, pt(1, 0, 0));
        assert_eq!(c[2].image, pt(1, 0, 0));
        assert!(c.iter().all(|c| c.contracted));
        assert_eq!(f.eval(&PointP2::rat(rat(-1, 2), int(0), int(1))), Some(pt(1, 0, 0)));
        assert_eq!(f.eval(&pt(1, 0, 0)), Some(pt(1, 0, 0)));
        let g = make_fdp(3, 5).unwrap();
        let c = contracted_images(&g, 7).unwrap();
        assert!(!c[2].contracted);
        assert_eq!(c[0].image, PointP2::rat(int(-1), int(0), int(1)));
    }

    #[test]
    fn preimage_examples() {
        let f = make_fdp(4, 2).unwrap();
        let pre = preimages(&f, &int(1), &int(3)).unwrap();
        assert_eq!(pre.y_sq, int(54));
        assert!(pre.maps_to(&f, &int(1), &int(3)));
        assert!(rational_sqrt(&pre).is_none());
        // the fixed point over Q(sqrt 3)
        let k = NumberField::new(qpoly(&[-3, 0, 1])).unwrap();
        let x0 = k.elem(vec![rat(1, 2), rat(1, 2)]);
        let pre = preimages(&f, &x0, &x0).unwrap();
        assert_eq!(pre.x, x0);
        assert!(pre.contains_y(&x0) && pre.contains_y(&x0.negate()));
        assert!(pre.maps_to(&f, &x0, &x0));
        assert!(preimages(&f, &rat(-1, 2), &int(1)).is_err());
        assert!(preimages(&f, &int(1), &int(0)).is_err());
        for (a, b) in sample_u(4, 2, 20, 11) {
            let pre = preimages(&f, &a, &b).unwrap();
            assert!(pre.maps_to(&f, &a, &b) && pre.avoids_indeterminacy());
        }
    }
}
