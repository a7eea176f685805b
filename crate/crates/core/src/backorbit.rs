//! Backward orbit of the fixed point of `f_{4,2}`:
//! `(x, y) -> (x^4/y^2 - 1/2, x)` on the chart `z = 1`.
//!
//! Coordinates live in a tower of square roots `Q(sqrt 3)(u_2)(u_3)...`,
//! `u_k^2 = delta_k`. Levels up to a cap are kept exactly; every node also
//! carries a certified enclosure under one fixed embedding.

use crate::cert::{interval_json, rat_json, Certificate, Provenance};
use crate::exactcore::matrix::{mat_pow, MatQ};
use crate::exactcore::poly::{bivariate, BiPoly, QPoly};
use crate::exactcore::rational::{int, rat, rat_sqrt_exact, rat_val, Rational};
use crate::exactcore::ring::{Field, QAlgebra, Ring};
use crate::interval::{rat_to_f64, CBox, Interval};
use crate::numberfield::height::mahler_height;
use crate::numberfield::minpoly_by_powers;
use crate::p2map::make_fdp;
use crate::padics::root_valuations;
use crate::{Error, Result};
use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use std::fmt;
use std::sync::Arc;

pub const START_PREC: u32 = 128;
pub const PREC_CAP: u32 = 8192;
/// Highest orbit index whose coordinates are kept exactly by default.
pub const DEFAULT_EXACT_CAP: usize = 7;

// ---------------------------------------------------------------------------
// Tower arithmetic

/// Defining data of the tower: `deltas[k-1] = u_k^2` as a level `k-1` vector.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerCtx {
    deltas: Vec<Vec<Rational>>,
}

impl TowerCtx {
    /// `Q(sqrt 3)`.
    pub fn base() -> Arc<TowerCtx> {
        Arc::new(TowerCtx { deltas: vec![vec![int(3)]] })
    }

    pub fn levels(&self) -> usize {
        self.deltas.len()
    }

    pub fn delta(&self, k: usize) -> &[Rational] {
        &self.deltas[k - 1]
    }

    fn extend(self: &Arc<Self>, delta: &TowerElem) -> Arc<TowerCtx> {
        let k = self.levels();
        let mut deltas = self.deltas.clone();
        deltas.push(delta.lifted(k));
        Arc::new(TowerCtx { deltas })
    }
}

#[derive(Clone, Debug)]
pub struct TowerRef {
    pub tower: Arc<TowerCtx>,
    pub level: usize,
}

impl PartialEq for TowerRef {
    fn eq(&self, o: &Self) -> bool {
        self.level == o.level
            && (Arc::ptr_eq(&self.tower, &o.tower)
                || self.tower.deltas[..self.level] == o.tower.deltas[..self.level])
    }
}

/// Element `sum_m c_m prod_{k in m} u_k` indexed by bitmask; the length
/// `2^level` fixes the level.
#[derive(Clone)]
pub struct TowerElem {
    tower: Arc<TowerCtx>,
    c: Vec<Rational>,
}

impl fmt::Debug for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.c.iter().map(|q| q.to_string()).collect();
        write!(f, "T{}[{}]", self.level(), s.join(", "))
    }
}

impl PartialEq for TowerElem {
    fn eq(&self, o: &Self) -> bool {
        let n = self.c.len().max(o.c.len());
        (0..n).all(|i| {
            let a = self.c.get(i);
            let b = o.c.get(i);
            match (a, b) {
                (Some(a), Some(b)) => a == b,
                (Some(a), None) | (None, Some(a)) => Zero::is_zero(a),
                (None, None) => true,
            }
        })
    }
}

fn is_zero_slice(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

fn add_slices(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn mul_rec(a: &[Rational], b: &[Rational], deltas: &[Vec<Rational>]) -> Vec<Rational> {
    let n = a.len();
    if n == 1 {
        return vec![&a[0] * &b[0]];
    }
    let h = n / 2;
    let k = n.trailing_zeros() as usize;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let zero = || vec![<Rational as Zero>::zero(); h];
    let (za1, zb1) = (is_zero_slice(a1), is_zero_slice(b1));
    let (r0, r1) = if za1 && zb1 {
        (mul_rec(a0, b0, deltas), zero())
    } else if za1 {
        (mul_rec(a0, b0, deltas), mul_rec(a0, b1, deltas))
    } else if zb1 {
        (mul_rec(a0, b0, deltas), mul_rec(a1, b0, deltas))
    } else {
        let p0 = mul_rec(a0, b0, deltas);
        let p1 = mul_rec(a1, b1, deltas);
        let p2 = mul_rec(&add_slices(a0, a1), &add_slices(b0, b1), deltas);
        let r1: Vec<Rational> = (0..h).map(|i| &p2[i] - &p0[i] - &p1[i]).collect();
        let d = mul_rec(&p1, &deltas[k - 1], deltas);
        (add_slices(&p0, &d), r1)
    };
    let mut out = r0;
    out.extend(r1);
    out
}

fn inv_rec(a: &[Rational], deltas: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = a.len();
    if n == 1 {
        return if Zero::is_zero(&a[0]) { None } else { Some(vec![a[0].recip()]) };
    }
    let h = n / 2;
    let k = n.trailing_zeros() as usize;
    let (a0, a1) = a.split_at(h);
    if is_zero_slice(a1) {
        let mut r = inv_rec(a0, deltas)?;
        r.resize(n, <Rational as Zero>::zero());
        return Some(r);
    }
    // (a0 + a1 u)^{-1} = (a0 - a1 u) / (a0^2 - delta a1^2)
    let a1sq = mul_rec(a1, a1, deltas);
    let norm: Vec<Rational> = mul_rec(a0, a0, deltas)
        .iter()
        .zip(mul_rec(&a1sq, &deltas[k - 1], deltas))
        .map(|(x, y)| x - y)
        .collect();
    let ni = inv_rec(&norm, deltas)?;
    let mut out = mul_rec(a0, &ni, deltas);
    out.extend(mul_rec(a1, &ni, deltas).into_iter().map(|q| -q));
    Some(out)
}

impl TowerElem {
    pub fn from_rational(tower: &Arc<TowerCtx>, level: usize, q: &Rational) -> Self {
        let mut c = vec![<Rational as Zero>::zero(); 1 << level];
        c[0] = q.clone();
        TowerElem { tower: tower.clone(), c }
    }

    /// The generator `u_k`, at level `k`.
    pub fn gen(tower: &Arc<TowerCtx>, k: usize) -> Self {
        let mut c = vec![<Rational as Zero>::zero(); 1 << k];
        c[1 << (k - 1)] = int(1);
        TowerElem { tower: tower.clone(), c }
    }

    pub fn level(&self) -> usize {
        self.c.len().trailing_zeros() as usize
    }

    pub fn coords(&self) -> &[Rational] {
        &self.c
    }

    pub fn tower(&self) -> &Arc<TowerCtx> {
        &self.tower
    }

    fn lifted(&self, level: usize) -> Vec<Rational> {
        let mut c = self.c.clone();
        c.resize(1 << level, <Rational as Zero>::zero());
        c
    }

    fn align(&self, o: &Self) -> (Arc<TowerCtx>, Vec<Rational>, Vec<Rational>) {
        let level = self.level().max(o.level());
        let tower = if self.tower.levels() >= o.tower.levels() {
            self.tower.clone()
        } else {
            o.tower.clone()
        };
        (tower, self.lifted(level), o.lifted(level))
    }

    /// Same element over a (possibly longer) tower.
    pub fn in_tower(&self, tower: &Arc<TowerCtx>) -> Self {
        TowerElem { tower: tower.clone(), c: self.c.clone() }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if is_zero_slice(&self.c[1..]) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// Value under the embedding fixed by `gens[k-1] ∋ u_k`.
    pub fn eval_box(&self, gens: &[CBox]) -> CBox {
        fn rec(c: &[Rational], gens: &[CBox], prec: u32) -> CBox {
            if c.len() == 1 {
                return CBox::from_rational(&c[0], prec);
            }
            let h = c.len() / 2;
            let k = c.len().trailing_zeros() as usize;
            let lo = rec(&c[..h], gens, prec);
            if is_zero_slice(&c[h..]) {
                return lo;
            }
            lo.add(&rec(&c[h..], gens, prec).mul(&gens[k - 1]))
        }
        rec(&self.c, gens, gens[0].prec())
    }
}

impl Ring for TowerElem {
    type Ctx = TowerRef;

    fn ctx(&self) -> TowerRef {
        TowerRef { tower: self.tower.clone(), level: self.level() }
    }

    fn zero(ctx: &TowerRef) -> Self {
        TowerElem { tower: ctx.tower.clone(), c: vec![<Rational as Zero>::zero(); 1 << ctx.level] }
    }

    fn one(ctx: &TowerRef) -> Self {
        TowerElem::from_rational(&ctx.tower, ctx.level, &int(1))
    }

    fn is_zero(&self) -> bool {
        is_zero_slice(&self.c)
    }

    fn plus(&self, rhs: &Self) -> Self {
        let (tower, a, b) = self.align(rhs);
        TowerElem { tower, c: add_slices(&a, &b) }
    }

    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negate())
    }

    fn times(&self, rhs: &Self) -> Self {
        let (tower, a, b) = self.align(rhs);
        let c = mul_rec(&a, &b, &tower.deltas);
        TowerElem { tower, c }
    }

    fn negate(&self) -> Self {
        TowerElem { tower: self.tower.clone(), c: self.c.iter().map(|q| -q).collect() }
    }

    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.times(&r))
    }
}

impl QAlgebra for TowerElem {
    fn from_q(ctx: &TowerRef, q: &Rational) -> Self {
        TowerElem::from_rational(&ctx.tower, ctx.level, q)
    }
}

impl Field for TowerElem {
    /// `None` for zero, and for zero divisors of a non-minimal tower.
    fn inv(&self) -> Option<Self> {
        inv_rec(&self.c, &self.tower.deltas).map(|c| TowerElem { tower: self.tower.clone(), c })
    }
}

fn sqrt3_box(prec: u32) -> CBox {
    CBox::real(Interval::from_i64(3, prec).sqrt().expect("positive"))
}

// ---------------------------------------------------------------------------
// Fixed point

#[derive(Clone, Debug, PartialEq)]
pub enum FixedPoint {
    /// `x0` exactly in `Q(sqrt 3)` with its real enclosure.
    Exact { x0: TowerElem, enclosure: CBox },
    /// Only the defining polynomial `t^(d-2) - t - p^(-(d-3))`.
    DefiningPolynomial(QPoly),
}

pub fn fixed_point_poly(d: u32, p: u64) -> QPoly {
    let mut c = vec![<Rational as Zero>::zero(); d as usize - 1];
    c[0] = -crate::p2map::fdp_constant(d, p);
    c[1] = int(-1);
    c[d as usize - 2] += int(1);
    QPoly::new(c, ())
}

/// `x0 = (1 + sqrt 3)/2` for `(4, 2)`; the defining polynomial otherwise.
pub fn fixed_point(d: u32, p: u64) -> Result<FixedPoint> {
    if d < 4 {
        return Err(Error::Precondition(format!("d must be at least 4, got {d}")));
    }
    if (d, p) != (4, 2) {
        return Ok(FixedPoint::DefiningPolynomial(fixed_point_poly(d, p)));
    }
    let tower = TowerCtx::base();
    let x0 = TowerElem { tower, c: vec![rat(1, 2), rat(1, 2)] };
    let enclosure = x0.eval_box(&[sqrt3_box(START_PREC)]);
    Ok(FixedPoint::Exact { x0, enclosure })
}

/// `f(x0, x0) = (x0, x0)` exactly, through the map's homogeneous components.
pub fn fixed_point_check(x0: &TowerElem) -> bool {
    let one = TowerElem::one(&x0.ctx());
    step_identity_exact(x0, &x0.times(x0), x0, x0, &one)
}

// ---------------------------------------------------------------------------
// Backward chain

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn apply_box(self, b: CBox) -> CBox {
        match self {
            Sign::Plus => b,
            Sign::Minus => b.neg(),
        }
    }

    fn apply(self, e: TowerElem) -> TowerElem {
        match self {
            Sign::Plus => e,
            Sign::Minus => e.negate(),
        }
    }
}

/// How `y_n` was obtained as a square root of the step radicand.
#[derive(Clone, Debug, PartialEq)]
pub enum Root {
    /// The fixed point itself.
    Start,
    /// A known square root already in the tower.
    InTower(TowerElem),
    /// A new tower generator `u_level` (exact) or, past the exact cap, the
    /// square root nearest `anchor` of the enclosed radicand.
    NewLevel { level: usize, anchor: (f64, f64) },
}

/// How `f(P_n) = P_{n-1}` was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepProof {
    Start,
    /// Direct evaluation of the map in the exact tower.
    ExactInTower,
    /// The generic identity `f(b, h) = (a, b)` on `h^2 (a + 1/2) = b^4`,
    /// with `b != 0` and `a + 1/2 != 0` certified by enclosures.
    GenericIdentity,
}

#[derive(Clone, Debug)]
pub struct Coord {
    pub exact: Option<TowerElem>,
    pub enclosure: CBox,
}

#[derive(Clone, Debug)]
pub struct BackwardNode {
    pub n: usize,
    pub x: Coord,
    pub y: Coord,
    /// Tower level containing the node; the tower degree is `2^level`.
    pub level: usize,
    /// Tracked `(v_2(x_n), v_2(y_n))`.
    pub v2: (Rational, Rational),
    /// Tracked `(v(x_n), v(y_n))` at a place over 3, from `n = 4` on.
    pub v3: Option<(Rational, Rational)>,
    pub sign: Sign,
    pub root: Root,
    pub proof: StepProof,
}

#[derive(Clone, Debug)]
pub struct Chain {
    pub nodes: Vec<BackwardNode>,
    pub tower: Arc<TowerCtx>,
    /// Enclosures of the exact generators `u_k`.
    pub gens: Vec<CBox>,
    pub prec: u32,
    pub exact_cap: usize,
}

fn half() -> Rational {
    rat(1, 2)
}

/// `v_2(x + 1/2)` from `v_2(x)` by the ultrametric rule.
fn v2_shift(v: &Rational) -> Result<Rational> {
    let h = int(-1);
    if v == &h {
        return Err(Error::Undecidable("ultrametric tie in v_2(x + 1/2)".into()));
    }
    Ok(v.clone().min(h))
}

/// `f(x1, y1) = (x0, y0)` on the chart `z = 1`, given `y1^2 = y1_sq`.
fn step_identity_exact(x1: &TowerElem, y1_sq: &TowerElem, x0: &TowerElem, y0: &TowerElem, z: &TowerElem) -> bool {
    let f = make_fdp(4, 2).expect("valid family");
    let comp = |i: usize| f.comps[i].eval_y_squared(x1, y1_sq, z).expect("even in y");
    let (cx, cy, cz) = (comp(0), comp(1), comp(2));
    !cz.is_zero() && cx == x0.times(&cz) && cy == y0.times(&cz)
}

/// The generic identity behind every backward step, over `Q[a, b]`: with
/// `s = a + 1/2`, the point `(s b : s h : s)` where `(s h)^2 = s b^4` maps
/// to `(a : b : 1)` times `s^3 b^4`.
pub fn generic_step_identity() -> bool {
    let f = make_fdp(4, 2).expect("valid family");
    let a = bivariate::x();
    let b = bivariate::y();
    let s = &a + &bivariate::constant(half());
    let px = &s * &b;
    let py_sq = &s * &b.pow(4);
    let comp = |i: usize| -> BiPoly { f.comps[i].eval_y_squared(&px, &py_sq, &s).expect("even in y") };
    let (cx, cy, cz) = (comp(0), comp(1), comp(2));
    let scale = &s.pow(3) * &b.pow(4);
    cz == scale && (&cx - &(&a * &cz)).is_zero() && (&cy - &(&b * &cz)).is_zero()
}

fn radicand_box(x: &CBox, y: &CBox) -> Option<CBox> {
    let prec = x.prec();
    let s = x.add(&CBox::from_rational(&half(), prec));
    if s.contains_zero() {
        return None;
    }
    y.pow(4).div(&s)
}

impl Chain {
    /// The one-point chain `P_0 = (x0, x0)`.
    pub fn start(exact_cap: usize) -> Result<Chain> {
        let FixedPoint::Exact { x0, .. } = fixed_point(4, 2)? else {
            unreachable!()
        };
        let tower = x0.tower().clone();
        let node = BackwardNode {
            n: 0,
            x: Coord { exact: Some(x0.clone()), enclosure: CBox::from_rational(&int(0), START_PREC) },
            y: Coord { exact: Some(x0), enclosure: CBox::from_rational(&int(0), START_PREC) },
            level: 1,
            v2: (rat(-1, 2), rat(-1, 2)),
            v3: None,
            sign: Sign::Plus,
            root: Root::Start,
            proof: StepProof::Start,
        };
        let mut c = Chain { nodes: vec![node], tower, gens: vec![], prec: START_PREC, exact_cap };
        c.enclose(START_PREC).ok_or_else(|| Error::Internal("fixed point enclosure".into()))?;
        Ok(c)
    }

    pub fn last(&self) -> &BackwardNode {
        self.nodes.last().expect("nonempty")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Recompute every enclosure at `prec` following the recorded branches.
    /// `None` if some branch cannot be separated at this precision.
    fn enclose(&mut self, prec: u32) -> Option<()> {
        let mut gens = vec![sqrt3_box(prec)];
        let mut boxes: Vec<(CBox, CBox)> = Vec::with_capacity(self.nodes.len());
        for i in 0..self.nodes.len() {
            let node = &self.nodes[i];
            let (bx, by) = match &node.root {
                Root::Start => {
                    let b = node.x.exact.as_ref().expect("exact start").eval_box(&gens);
                    (b.clone(), b)
                }
                Root::InTower(r) => {
                    let (_, py) = &boxes[i - 1];
                    (py.clone(), node.sign.apply_box(r.eval_box(&gens)))
                }
                Root::NewLevel { level, anchor } => {
                    let (px, py) = &boxes[i - 1];
                    let u = radicand_box(px, py)?.sqrt_near(*anchor)?;
                    if node.y.exact.is_some() && gens.len() < *level {
                        gens.push(u.clone());
                    }
                    (py.clone(), node.sign.apply_box(u))
                }
            };
            boxes.push((bx, by));
        }
        for (node, (bx, by)) in self.nodes.iter_mut().zip(boxes) {
            node.x.enclosure = bx;
            node.y.enclosure = by;
        }
        self.gens = gens;
        self.prec = prec;
        Some(())
    }

    /// Same chain with enclosures at `prec` (or `None` if undecided there).
    pub fn at_precision(&self, prec: u32) -> Option<Chain> {
        let mut c = self.clone();
        c.enclose(prec)?;
        Some(c)
    }

    /// Doubling precision until `f` decides, up to the cap.
    pub fn decide<T>(&self, what: &str, f: impl Fn(&Chain) -> Option<T>) -> Result<T> {
        let mut prec = self.prec;
        while prec <= PREC_CAP {
            if let Some(c) = self.at_precision(prec) {
                if let Some(t) = f(&c) {
                    return Ok(t);
                }
            }
            prec *= 2;
        }
        Err(Error::Undecidable(what.into()))
    }

    fn next_v(&self) -> Result<((Rational, Rational), Option<(Rational, Rational)>)> {
        let node = self.last();
        let (vx, vy) = &node.v2;
        let vy_new = (int(4) * vy - v2_shift(vx)?) / int(2);
        let v2 = (vy.clone(), vy_new);
        let n = node.n + 1;
        let v3 = match (&node.v3, n) {
            (_, 4) => Some((rat(-1, 4), rat(-1, 2))),
            (Some((vx, vy)), _) => {
                if !vx.is_negative() {
                    return Err(Error::Internal("v_3 recursion guard v(x_n) < 0 failed".into()));
                }
                Some((vy.clone(), int(2) * vy - vx / int(2)))
            }
            (None, _) => None,
        };
        Ok((v2, v3))
    }

    /// Append `P_{n+1}` with `y_{n+1} = sign * root`, `root` a square root of
    /// `y^4/(x + 1/2)` already in the tower; verified exactly.
    pub fn step_with_root(&mut self, sign: Sign, root: TowerElem) -> Result<&BackwardNode> {
        let node = self.last().clone();
        let (Some(x), Some(y)) = (&node.x.exact, &node.y.exact) else {
            return Err(Error::Precondition("in-tower root needs exact coordinates".into()));
        };
        let shifted = x.plus(&TowerElem::from_q(&x.ctx(), &half()));
        if y.is_zero() || shifted.is_zero() {
            return Err(Error::LeftFiniteLocus(format!("at n = {}", node.n)));
        }
        if root.times(&root).times(&shifted) != y.pow(4) {
            return Err(Error::Precondition("given element is not a square root of the radicand".into()));
        }
        let y_new = sign.apply(root.clone());
        let one = TowerElem::one(&y.ctx());
        if !step_identity_exact(y, &y_new.times(&y_new), x, y, &one) {
            return Err(Error::Internal("backward identity failed".into()));
        }
        let (v2, v3) = self.next_v()?;
        let mut next = BackwardNode {
            n: node.n + 1,
            x: Coord { exact: Some(y.clone()), enclosure: node.y.enclosure.clone() },
            y: Coord { exact: Some(y_new), enclosure: node.y.enclosure.clone() },
            level: node.level.max(root.level()),
            v2,
            v3,
            sign,
            root: Root::InTower(root),
            proof: StepProof::ExactInTower,
        };
        next.level = next.level.max(node.level);
        self.nodes.push(next);
        self.refresh()?;
        Ok(self.last())
    }

    /// Append `P_{n+1}` with `y_{n+1} = sign * sqrt(y^4/(x + 1/2))`, the root
    /// taken on the principal branch: a new tower level, or a rational
    /// square root when the radicand is a rational square.
    pub fn step(&mut self, sign: Sign) -> Result<&BackwardNode> {
        let node = self.last().clone();
        let n = node.n + 1;
        let exact = n <= self.exact_cap && node.x.exact.is_some();
        let (v2, v3) = self.next_v()?;
        let level = node.level + 1;
        let (y_exact, proof, level) = if exact {
            let x = node.x.exact.as_ref().unwrap();
            let y = node.y.exact.as_ref().unwrap();
            let shifted = x.plus(&TowerElem::from_q(&x.ctx(), &half()));
            if y.is_zero() || shifted.is_zero() {
                return Err(Error::LeftFiniteLocus(format!("at n = {}", node.n)));
            }
            let inv = shifted
                .inv()
                .ok_or_else(|| Error::Internal("x + 1/2 is a zero divisor in the tower".into()))?;
            let delta = y.pow(4).times(&inv);
            if let Some(r) = delta.as_rational().and_then(|q| rat_sqrt_exact(&q)) {
                let r = TowerElem::from_rational(&self.tower, node.level, &r);
                return self.step_with_root(sign, r);
            }
            self.tower = self.tower.extend(&delta);
            let u = TowerElem::gen(&self.tower, level);
            let y_new = sign.apply(u);
            let one = TowerElem::one(&y_new.ctx());
            let ok = step_identity_exact(
                &y.in_tower(&self.tower),
                &y_new.times(&y_new),
                &x.in_tower(&self.tower),
                &y.in_tower(&self.tower),
                &one,
            );
            if !ok {
                return Err(Error::Internal("backward identity failed".into()));
            }
            (Some(y_new), StepProof::ExactInTower, level)
        } else {
            (None, StepProof::GenericIdentity, level)
        };
        // principal branch of the radicand, refined until separated
        let anchor = self.decide("branch separation", |c| {
            let last = c.last();
            let r = radicand_box(&last.x.enclosure, &last.y.enclosure)?;
            if !exact && (last.y.enclosure.contains_zero() || r.contains_zero()) {
                return None;
            }
            let s = r.sqrt_principal()?;
            let (re, im) = s.mid();
            Some((rat_to_f64(&re), rat_to_f64(&im)))
        })?;
        self.nodes.push(BackwardNode {
            n,
            x: Coord { exact: node.y.exact.clone(), enclosure: node.y.enclosure.clone() },
            y: Coord { exact: y_exact, enclosure: node.y.enclosure.clone() },
            level,
            v2,
            v3,
            sign,
            root: Root::NewLevel { level, anchor },
            proof,
        });
        self.refresh()?;
        Ok(self.last())
    }

    fn refresh(&mut self) -> Result<()> {
        let mut prec = self.prec;
        while prec <= PREC_CAP {
            if self.enclose(prec).is_some() {
                return Ok(());
            }
            prec *= 2;
        }
        Err(Error::Undecidable("enclosure of the chain".into()))
    }
}

/// The chain `(x0,x0) <- (x0,-x0) <- (-x0,x0) <- (x0, y3)` followed by
/// principal branches, up to `P_steps`.
pub fn standard_chain(steps: usize, exact_cap: usize) -> Result<Chain> {
    let mut c = Chain::start(exact_cap)?;
    let x0 = c.last().x.exact.clone().unwrap();
    if steps >= 1 {
        c.step_with_root(Sign::Minus, x0.clone())?;
    }
    if steps >= 2 {
        c.step_with_root(Sign::Plus, x0)?;
    }
    while c.len() <= steps {
        c.step(Sign::Plus)?;
    }
    Ok(c)
}

/// Exact comparison of the first four nodes with the stated prefix.
pub fn prefix_check(c: &Chain) -> Certificate {
    let mut ok = c.len() >= 4;
    if ok {
        let x0 = c.nodes[0].x.exact.clone().unwrap();
        let e = |i: usize| (c.nodes[i].x.exact.clone().unwrap(), c.nodes[i].y.exact.clone().unwrap());
        let neg = x0.negate();
        let (x1, y1) = e(1);
        let (x2, y2) = e(2);
        let (x3, y3) = e(3);
        let half = TowerElem::from_q(&x0.ctx(), &half());
        // y3^2 (1/2 - x0) = x0^4
        ok = x1 == x0
            && y1 == neg
            && x2 == neg
            && y2 == x0
            && x3 == x0
            && y3.times(&y3).times(&half.minus(&x0)) == x0.pow(4)
            && c.nodes[3].level == 2;
    }
    Certificate::new(
        "backorbit.prefix",
        json!(["(x0,x0)", "(x0,-x0)", "(-x0,x0)", "(x0,sqrt(x0^4/(1/2-x0)))"]),
        json!(ok),
        Provenance::Claim,
        ok,
    )
}

/// `f(P_{n+1}) = P_n` for every step of the chain, exactly in the tower or
/// through the generic identity plus certified nonvanishing.
pub fn identity_cert(c: &Chain) -> Result<Certificate> {
    let generic = generic_step_identity();
    let mut exact = 0;
    let mut generic_steps = 0;
    let mut ok = generic;
    for i in 1..c.len() {
        match c.nodes[i].proof {
            StepProof::ExactInTower => {
                let (p, q) = (&c.nodes[i - 1], &c.nodes[i]);
                let (x, y) = (p.x.exact.clone().unwrap(), p.y.exact.clone().unwrap());
                let yn = q.y.exact.clone().unwrap();
                let t = yn.tower().clone();
                let one = TowerElem::one(&yn.ctx());
                ok &= step_identity_exact(&y.in_tower(&t), &yn.times(&yn), &x.in_tower(&t), &y.in_tower(&t), &one);
                exact += 1;
            }
            StepProof::GenericIdentity => {
                let nonzero = c.decide("nonvanishing of b and a + 1/2", |c| {
                    let p = &c.nodes[i - 1];
                    let s = p.x.enclosure.add(&CBox::from_rational(&half(), c.prec));
                    let ok = !p.y.enclosure.contains_zero() && !s.contains_zero();
                    ok.then_some(())
                });
                ok &= nonzero.is_ok();
                generic_steps += 1;
            }
            StepProof::Start => ok = false,
        }
    }
    Ok(Certificate::new(
        "backorbit.identity",
        json!({"steps": c.len() - 1}),
        json!({"steps": c.len() - 1, "exact": exact, "generic": generic_steps, "generic_identity": generic}),
        Provenance::Claim,
        ok,
    ))
}

// ---------------------------------------------------------------------------
// Archimedean growth

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tri {
    Yes,
    No,
    Unknown,
}

fn compare_le(a: &Interval, b: &Interval) -> Tri {
    if a.certainly_le(b) {
        Tri::Yes
    } else if b.certainly_lt(a) {
        Tri::No
    } else {
        Tri::Unknown
    }
}

/// `sqrt(2/sqrt 3) x0^2` and `x0 + 1/2`.
pub fn anchor_inequality(prec: u32) -> (Interval, Interval) {
    let s3 = Interval::from_i64(3, prec).sqrt().unwrap();
    let x0 = s3.add(&Interval::from_i64(1, prec)).scale(&half());
    let lhs = Interval::from_i64(2, prec).div(&s3).unwrap().sqrt().unwrap().mul(&x0.sqr());
    let rhs = x0.add(&Interval::point(&half(), prec));
    (lhs, rhs)
}

fn x0_interval(prec: u32) -> Interval {
    let s3 = Interval::from_i64(3, prec).sqrt().unwrap();
    s3.add(&Interval::from_i64(1, prec)).scale(&half())
}

/// Growth certificate from `n_anchor`: the hypothesis
/// `|y_n| >= (1 + 1/(2t)) |x_n|`, `|x_n| >= t` at every node, and
/// `|y_{n+1}|^2 >= |y_n|^3` at every step. `t = None` means `t = x0`.
pub fn arch_growth_cert(c: &Chain, t: Option<&Interval>, n_anchor: usize) -> Result<Certificate> {
    let name = "backorbit.arch_growth";
    if c.len() <= n_anchor + 1 {
        return Ok(Certificate::new(name, json!("vacuous"), json!("vacuous"), Provenance::Claim, true)
            .with_note("chain too short"));
    }
    if let Some(t) = t {
        let below = c.decide("threshold precondition", |c| {
            match compare_le(&x0_interval(c.prec), &t.with_prec(c.prec)) {
                Tri::Unknown => None,
                r => Some(r == Tri::Yes),
            }
        })?;
        if !below {
            return Err(Error::Precondition("t must be at least (1 + sqrt 3)/2 for d = 4".into()));
        }
    }
    // |x_n| = t exactly when t = x0 and x_n = ±x0 in the tower
    let x0 = c.nodes[0].x.exact.clone();
    let at_threshold: Vec<bool> = c
        .nodes
        .iter()
        .map(|n| match (t, &x0, &n.x.exact) {
            (None, Some(x0), Some(x)) => x == x0 || *x == x0.negate(),
            _ => false,
        })
        .collect();
    let steps: Vec<(Tri, Tri, Value)> = c.decide("archimedean growth", |c| {
        let tt = t.map_or_else(|| x0_interval(c.prec), |t| t.with_prec(c.prec));
        let factor = Interval::from_i64(1, c.prec).add(&tt.scale(&int(2)).recip()?);
        let mut out = Vec::new();
        for n in n_anchor..c.len() - 1 {
            let (ax, ay) = (c.nodes[n].x.enclosure.abs(), c.nodes[n].y.enclosure.abs());
            let ay1 = c.nodes[n + 1].y.enclosure.abs();
            let h1 = if at_threshold[n] { Tri::Yes } else { compare_le(&tt, &ax) };
            let h2 = compare_le(&factor.mul(&ax), &ay);
            let hyp = match (h1, h2) {
                (Tri::Yes, Tri::Yes) => Tri::Yes,
                (Tri::No, _) | (_, Tri::No) => Tri::No,
                _ => Tri::Unknown,
            };
            let (lhs, rhs) = (ay.pow(3), ay1.sqr());
            let grow = compare_le(&lhs, &rhs);
            if hyp == Tri::Unknown || grow == Tri::Unknown {
                return None;
            }
            out.push((
                hyp,
                grow,
                json!({"n": n, "abs_y": interval_json(&ay), "abs_y_next": interval_json(&ay1)}),
            ));
        }
        Some(out)
    })?;
    let anchor = c.decide("anchor inequality", |c| {
        let (l, r) = anchor_inequality(c.prec);
        match compare_le(&r, &l) {
            Tri::Unknown => None,
            v => Some((v == Tri::Yes, l, r)),
        }
    })?;
    let pass = anchor.0 && steps.iter().all(|(h, g, _)| *h == Tri::Yes && *g == Tri::Yes);
    let rows: Vec<Value> = steps.into_iter().map(|s| s.2).collect();
    Ok(Certificate::new(
        name,
        json!({"anchor": "sqrt(2/sqrt 3) x0^2 >= x0 + 1/2", "growth": "|y_(n+1)| >= |y_n|^(3/2)", "from": n_anchor}),
        json!({"anchor_lhs": interval_json(&anchor.1), "anchor_rhs": interval_json(&anchor.2), "steps": rows}),
        Provenance::Claim,
        pass,
    ))
}

// ---------------------------------------------------------------------------
// Valuations

/// Tracked `v_2 = -1/2` for both coordinates at every node.
pub fn v2_invariant(c: &Chain) -> Certificate {
    let target = rat(-1, 2);
    let bad: Vec<usize> = c
        .nodes
        .iter()
        .filter(|n| n.v2.0 != target || n.v2.1 != target)
        .map(|n| n.n)
        .collect();
    Certificate::new(
        "backorbit.v2_invariant",
        rat_json(&target),
        json!({"nodes": c.len(), "violations": bad}),
        Provenance::Claim,
        bad.is_empty(),
    )
}

/// `v_2(x0) = -1/2` from the minimal polynomial, as an independent check of
/// the starting value.
pub fn v2_start_check() -> Result<bool> {
    Ok(root_valuations(&fixed_point_poly(4, 2), 2)? == vec![(rat(-1, 2), 2)])
}

pub fn valuation_matrix() -> MatQ {
    MatQ::from_rows(vec![vec![int(0), int(1)], vec![rat(-1, 2), int(2)]], ()).expect("2x2")
}

/// `(v(x_n), v(y_n))` for `4 <= n <= big_n` by the linear recursion.
pub fn v3_recursion(big_n: usize) -> Result<Vec<(Rational, Rational)>> {
    if big_n < 4 {
        return Err(Error::Precondition("N must be at least 4".into()));
    }
    let mut out = vec![(rat(-1, 4), rat(-1, 2))];
    for _ in 5..=big_n {
        let (vx, vy) = out.last().unwrap().clone();
        if !vx.is_negative() {
            return Err(Error::Internal("guard v(x_n) < 0 failed".into()));
        }
        let next = (vy.clone(), int(2) * &vy - vx / int(2));
        if !next.0.is_negative() {
            return Err(Error::Internal("guard v(x_(n+1)) < 0 failed".into()));
        }
        out.push(next);
    }
    Ok(out)
}

/// The recursion against `M^(n-4) (-1/4, -1/2)^T`, entrywise.
pub fn v3_matrix_check(big_n: usize) -> Result<bool> {
    let rec = v3_recursion(big_n)?;
    let m = valuation_matrix();
    let v0 = vec![rat(-1, 4), rat(-1, 2)];
    for (i, (vx, vy)) in rec.iter().enumerate() {
        let w = mat_pow(&m, i as u64)?.mul_vec(&v0)?;
        if &w[0] != vx || &w[1] != vy {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `v(y_3) = -1/4` and `v(y_4) = -1/2` at every place over 3, read off the
/// Newton polygons of the exact minimal polynomials (a single slope makes
/// the value independent of the place and of the branches).
pub fn v3_start_check(c: &Chain) -> Result<Certificate> {
    let minpoly = |n: usize| -> Result<QPoly> {
        let y = c
            .nodes
            .get(n)
            .and_then(|node| node.y.exact.clone())
            .ok_or_else(|| Error::Precondition(format!("y_{n} not exact")))?;
        Ok(minpoly_by_powers(&y, |e| e.coords().to_vec()))
    };
    let s3 = root_valuations(&minpoly(3)?, 3)?;
    let s4 = root_valuations(&minpoly(4)?, 3)?;
    let single = |s: &[(Rational, usize)], v: Rational| s.len() == 1 && s[0].0 == v;
    let pass = single(&s3, rat(-1, 4)) && single(&s4, rat(-1, 2));
    let show = |s: &[(Rational, usize)]| s.iter().map(|(v, m)| json!([rat_json(v), m])).collect::<Vec<_>>();
    Ok(Certificate::new(
        "backorbit.v3_start",
        json!({"v_y3": "-1/4", "v_y4": "-1/2"}),
        json!({"y3_slopes": show(&s3), "y4_slopes": show(&s4)}),
        Provenance::Derived,
        pass,
    ))
}

fn v2_of(q: &Rational) -> Option<i64> {
    if Zero::is_zero(q) {
        None
    } else {
        rat_val(q, 2).ok()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValMatrixRow {
    pub m: usize,
    pub diag: (i64, i64),
    pub off: (Option<i64>, Option<i64>),
    pub v2_vx: i64,
    /// `[K_{2m+4} : Q]` is at least the ramification index `2^(m+2)`.
    pub degree_lower_bound: u64,
    pub pass: bool,
}

/// `M^(2m)` has diagonal 2-adic valuation `-m` with strictly larger
/// off-diagonal ones, and `v_2(v(x_(2m+4))) = -m-2`.
pub fn val_matrix_2adic(m_max: usize) -> Result<Vec<ValMatrixRow>> {
    if m_max > 12 {
        return Err(Error::Precondition("m_max must be at most 12".into()));
    }
    let m2 = mat_pow(&valuation_matrix(), 2)?;
    let rec = v3_recursion(2 * m_max + 4)?;
    let mut rows = Vec::new();
    let mut p = MatQ::identity(2, &());
    for m in 1..=m_max {
        p = p.mul(&m2)?;
        let mi = -(m as i64);
        let diag = (v2_of(p.get(0, 0)), v2_of(p.get(1, 1)));
        let off = (v2_of(p.get(0, 1)), v2_of(p.get(1, 0)));
        let vx = v2_of(&rec[2 * m].0);
        let off_ok = [off.0, off.1].iter().all(|v| v.is_none_or(|v| v > mi));
        let pass = diag == (Some(mi), Some(mi)) && off_ok && vx == Some(mi - 2);
        rows.push(ValMatrixRow {
            m,
            diag: (diag.0.unwrap_or(i64::MAX), diag.1.unwrap_or(i64::MAX)),
            off,
            v2_vx: vx.unwrap_or(i64::MAX),
            degree_lower_bound: 1 << (m + 2),
            pass,
        });
    }
    Ok(rows)
}

pub fn val_matrix_cert(m_max: usize) -> Result<Vec<Certificate>> {
    let rows = val_matrix_2adic(m_max)?;
    let mut out = Vec::new();
    for r in rows {
        let m = r.m as i64;
        out.push(Certificate::new(
            format!("backorbit.val_matrix.m{:02}", r.m),
            json!({"v2_diag": [-m, -m], "v2_off": format!("> {}", -m), "v2_v_x": -m - 2}),
            json!({"v2_diag": [r.diag.0, r.diag.1], "v2_off": [r.off.0, r.off.1], "v2_v_x": r.v2_vx}),
            Provenance::Claim,
            r.pass,
        ));
        let n = 2 * r.m + 4;
        // tower degree upper bound 2^(n-1) must dominate the lower bound
        let ok = r.degree_lower_bound >= 1 << r.m && r.degree_lower_bound <= 1u64 << (n - 1);
        out.push(Certificate::new(
            format!("backorbit.degree_growth.m{:02}", r.m),
            json!(format!(">= {}", 1u64 << r.m)),
            json!(r.degree_lower_bound),
            Provenance::Claim,
            ok,
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Heights

#[derive(Clone, Debug)]
pub struct HeightBound {
    pub m: usize,
    /// `(1/4) (3/2)^(m-3) log|y_3|`.
    pub bound: Interval,
    /// `h(y_m)` from the exact minimal polynomial, when computed.
    pub exact: Option<Interval>,
    pub min_poly_degree: Option<usize>,
    pub pass: bool,
}

/// Lower bounds `h(P_m) >= (1/4) (3/2)^(m-3) log|y_3|` for `m >= 3`, and for
/// `m <= exact_max` the exact height of `y_m` checked against them.
pub fn height_growth_cert(c: &Chain, n_anchor: usize, exact_max: usize) -> Result<Vec<HeightBound>> {
    if n_anchor != 3 {
        return Err(Error::Precondition("the anchor is n = 3".into()));
    }
    let anchor = arch_growth_cert(&c.clone_prefix(n_anchor + 2), None, n_anchor)?;
    if !anchor.pass {
        return Err(Error::Precondition("anchor condition unverified".into()));
    }
    let prec = c.prec;
    let log_y3 = c
        .decide("log |y_3|", |c| c.nodes.get(3)?.y.enclosure.abs().ln())?
        .with_prec(prec);
    let mut out = Vec::new();
    for m in n_anchor..c.len() {
        let factor = rat_pow_q(&rat(3, 2), m - n_anchor) * rat(1, 4);
        let bound = log_y3.scale(&factor);
        let (exact, deg) = match (&c.nodes[m].y.exact, m <= exact_max) {
            (Some(y), true) => {
                let mp = minpoly_by_powers(y, |e| e.coords().to_vec());
                let d = mp.degree();
                (Some(mahler_height(&mp)?), d)
            }
            _ => (None, None),
        };
        let pass = exact.as_ref().is_none_or(|h| bound.certainly_le(h));
        out.push(HeightBound { m, bound, exact, min_poly_degree: deg, pass });
    }
    Ok(out)
}

fn rat_pow_q(q: &Rational, e: usize) -> Rational {
    (0..e).fold(int(1), |acc, _| acc * q)
}

pub fn height_certs(bounds: &[HeightBound]) -> Vec<Certificate> {
    bounds
        .iter()
        .map(|b| {
            let mut actual = json!({"bound": interval_json(&b.bound)});
            if let Some(h) = &b.exact {
                actual["height_y"] = interval_json(h);
                actual["min_poly_degree"] = json!(b.min_poly_degree);
            }
            Certificate::new(
                format!("backorbit.height.m{:02}", b.m),
                json!(format!("h(P_{}) >= (1/4)(3/2)^{} log|y_3|", b.m, b.m - 3)),
                actual,
                if b.exact.is_some() { Provenance::Derived } else { Provenance::Claim },
                b.pass,
            )
        })
        .collect()
}

impl Chain {
    fn clone_prefix(&self, len: usize) -> Chain {
        let mut c = self.clone();
        c.nodes.truncate(len.min(self.len()));
        c
    }
}

// ---------------------------------------------------------------------------
// Curve evidence

/// Certified lower bound on the rank of a complex interval matrix by
/// elimination with pivots whose enclosures exclude zero.
pub fn interval_rank_lower_bound(mut rows: Vec<Vec<CBox>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let mut best: Option<(usize, Rational)> = None;
        for (r, row) in rows.iter().enumerate().skip(rank) {
            let lo = row[col].abs().lo;
            if lo.is_positive() && best.as_ref().is_none_or(|(_, b)| &lo > b) {
                best = Some((r, lo));
            }
        }
        let Some((p, _)) = best else { continue };
        rows.swap(rank, p);
        let piv = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            let Some(f) = rows[r][col].div(&piv) else { return rank };
            for j in col..ncols {
                let t = f.mul(&rows[rank][j]);
                rows[r][j] = rows[r][j].sub(&t);
            }
        }
        rank += 1;
    }
    rank
}

/// Exponents `(i, j)` of `x^i y^j`, `i + j <= degmax`.
pub fn monomials(degmax: usize) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for d in 0..=degmax as u32 {
        for i in (0..=d).rev() {
            out.push((i, d - i));
        }
    }
    out
}

fn evaluation_rows(points: &[(CBox, CBox)], degmax: usize) -> Vec<Vec<CBox>> {
    let mons = monomials(degmax);
    points
        .iter()
        .map(|(x, y)| mons.iter().map(|&(i, j)| x.pow(i).mul(&y.pow(j))).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveEvidence {
    pub points: usize,
    pub monomials: usize,
    pub rank: usize,
    pub pass: bool,
}

/// No curve of degree `<= degmax` through the first `count` chain points:
/// the monomial evaluation matrix has certified full column rank.
pub fn curve_evidence(c: &Chain, count: usize, degmax: usize) -> Result<CurveEvidence> {
    let k = monomials(degmax).len();
    if count < k || c.len() < count {
        return Err(Error::Precondition(format!("need at least {k} points")));
    }
    let res = c.decide("evaluation matrix rank", |c| {
        let pts: Vec<(CBox, CBox)> = c.nodes[..count]
            .iter()
            .map(|n| (n.x.enclosure.clone(), n.y.enclosure.clone()))
            .collect();
        let r = interval_rank_lower_bound(evaluation_rows(&pts, degmax));
        (r == k).then_some(r)
    });
    let rank = match res {
        Ok(r) => r,
        Err(_) => {
            let c = c.at_precision(PREC_CAP).ok_or_else(|| Error::Undecidable("rank".into()))?;
            let pts: Vec<(CBox, CBox)> = c.nodes[..count]
                .iter()
                .map(|n| (n.x.enclosure.clone(), n.y.enclosure.clone()))
                .collect();
            interval_rank_lower_bound(evaluation_rows(&pts, degmax))
        }
    };
    Ok(CurveEvidence { points: count, monomials: k, rank, pass: rank == k })
}

/// Exact rank version for rational points.
pub fn curve_evidence_rational(points: &[(Rational, Rational)], degmax: usize) -> Result<CurveEvidence> {
    let mons = monomials(degmax);
    let rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|(x, y)| mons.iter().map(|&(i, j)| Ring::pow(x, i as u64).times(&Ring::pow(y, j as u64))).collect())
        .collect();
    let rank = MatQ::from_rows(rows, ())?.rank();
    Ok(CurveEvidence { points: points.len(), monomials: mons.len(), rank, pass: rank == mons.len() })
}

pub fn curve_cert(e: &CurveEvidence, degmax: usize) -> Certificate {
    Certificate::new(
        format!("backorbit.curve_evidence.deg{degmax}"),
        json!({"rank": e.monomials}),
        json!({"rank": e.rank, "points": e.points}),
        Provenance::Derived,
        e.pass,
    )
}

/// Every backward-orbit certificate for a chain of `steps` steps.
pub fn verify(steps: usize, degmax: usize) -> Result<Vec<Certificate>> {
    let c = standard_chain(steps, DEFAULT_EXACT_CAP)?;
    let mut out = vec![prefix_check(&c), identity_cert(&c)?, v2_invariant(&c)];
    let FixedPoint::Exact { x0, .. } = fixed_point(4, 2)? else { unreachable!() };
    out.push(Certificate::equal(
        "backorbit.fixed_point",
        json!(true),
        json!(fixed_point_check(&x0)),
        Provenance::Claim,
    ));
    out.push(Certificate::equal("backorbit.v2_start", json!(true), json!(v2_start_check()?), Provenance::Derived));
    if c.len() > 4 {
        out.push(v3_start_check(&c)?);
    }
    out.push(arch_growth_cert(&c, None, 3)?);
    let big_n = steps.max(20);
    out.push(Certificate::equal(
        "backorbit.v3_matrix",
        json!(true),
        json!(v3_matrix_check(big_n)?),
        Provenance::Claim,
    ));
    out.extend(val_matrix_cert(8)?);
    if c.len() > 3 {
        out.extend(height_certs(&height_growth_cert(&c, 3, 5)?));
    }
    let k = monomials(degmax).len();
    if c.len() >= k {
        let count = c.len().min(12).max(k);
        out.push(curve_cert(&curve_evidence(&c, count, degmax)?, degmax));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tower_arithmetic() {
        let t = TowerCtx::base();
        let s = TowerElem::gen(&t, 1);
        let three = TowerElem::from_rational(&t, 1, &int(3));
        assert_eq!(s.times(&s), three);
        let a = s.plus(&TowerElem::from_rational(&t, 1, &int(2)));
        assert_eq!(a.times(&a.inv().unwrap()), TowerElem::one(&a.ctx()));
        // second level u^2 = 1 + sqrt 3
        let d = s.plus(&TowerElem::one(&s.ctx()));
        let t2 = t.extend(&d);
        let u = TowerElem::gen(&t2, 2);
        assert_eq!(u.times(&u), d.in_tower(&t2));
        let b = u.plus(&s.in_tower(&t2));
        assert_eq!(b.times(&b.inv().unwrap()), TowerElem::one(&b.ctx()));
        // minimal polynomial of u is t^4 - 2t^2 - 2
        let mp = minpoly_by_powers(&u, |e| e.coords().to_vec());
        assert_eq!(mp, crate::exactcore::poly::qpoly(&[-2, 0, -2, 0, 1]));
    }

    #[test]
    fn fixed_points() {
        let FixedPoint::Exact { x0, enclosure } = fixed_point(4, 2).unwrap() else { panic!() };
        assert!(fixed_point_check(&x0));
        assert!((enclosure.re.to_f64() - 1.3660254).abs() < 1e-7);
        let FixedPoint::DefiningPolynomial(p) = fixed_point(5, 2).unwrap() else { panic!() };
        assert_eq!(p, QPoly::new(vec![rat(-1, 4), int(-1), int(0), int(1)], ()));
        assert!(v2_start_check().unwrap());
        assert!(generic_step_identity());
    }

    #[test]
    fn prefix_and_y3() {
        let c = standard_chain(4, DEFAULT_EXACT_CAP).unwrap();
        assert!(prefix_check(&c).pass);
        let y3 = c.nodes[3].y.enclosure.abs();
        assert!((y3.to_f64() - 2.0052).abs() < 1e-4);
        // principal branch of a negative radicand is on the positive imaginary axis
        assert!(c.nodes[3].y.enclosure.im.is_positive());
        assert!(identity_cert(&c).unwrap().pass);
        assert!(v3_start_check(&c).unwrap().pass);
    }

    #[test]
    fn left_finite_locus() {
        let t = TowerCtx::base();
        let mut c = Chain::start(5).unwrap();
        // force y = 0 through a bogus root
        let zero = TowerElem::zero(&TowerRef { tower: t, level: 1 });
        assert!(c.step_with_root(Sign::Plus, zero).is_err());
    }

    #[test]
    fn valuations() {
        let r = v3_recursion(5).unwrap();
        assert_eq!(r[1], (rat(-1, 2), rat(-7, 8)));
        assert!(v3_matrix_check(20).unwrap());
        let m2 = mat_pow(&valuation_matrix(), 2).unwrap();
        assert_eq!(m2.get(0, 0), &rat(-1, 2));
        assert_eq!(m2.get(1, 1), &rat(7, 2));
        let rows = val_matrix_2adic(3).unwrap();
        assert!(rows.iter().all(|r| r.pass));
        assert_eq!(rows[2].v2_vx, -5);
        assert!(v3_recursion(3).is_err());
    }

    #[test]
    fn curve_rank_examples() {
        let pts = vec![(int(0), int(0)), (int(1), int(1)), (int(2), int(2))];
        let e = curve_evidence_rational(&pts, 1).unwrap();
        assert_eq!((e.rank, e.pass), (2, false));
        let boxed: Vec<(CBox, CBox)> = pts
            .iter()
            .map(|(x, y)| (CBox::from_rational(x, 128), CBox::from_rational(y, 128)))
            .collect();
        assert_eq!(interval_rank_lower_bound(evaluation_rows(&boxed, 1)), 2);
        let c = standard_chain(4, 5).unwrap();
        let e = curve_evidence(&c, 4, 1).unwrap();
        assert_eq!(e.rank, 3);
    }
}
