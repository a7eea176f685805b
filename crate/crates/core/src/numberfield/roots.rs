//! Certified isolation of all complex roots of a squarefree rational
//! polynomial: Aberth iteration in dyadic arithmetic, then Weierstrass
//! inclusion disks `D(z_i, n |W_i|)`, which must be pairwise disjoint.

use crate::exactcore::poly::QPoly;
use crate::exactcore::rational::Rational;
use crate::interval::{exponent, f64_to_rat, rat_to_f64, round_dyadic, round_to_exp, CBox, Interval, Round};
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};

/// Complex dyadic approximation with rounding at `prec` bits.
#[derive(Clone, Debug, PartialEq)]
pub struct Cx {
    pub re: Rational,
    pub im: Rational,
}

impl Cx {
    pub fn new(re: Rational, im: Rational) -> Self {
        Cx { re, im }
    }

    fn zero() -> Self {
        Cx::new(Rational::zero(), Rational::zero())
    }

    /// Round both parts to a common absolute grid set by the larger part.
    fn round(self, prec: u32) -> Self {
        let e = match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => return self,
            (false, true) => exponent(&self.re),
            (true, false) => exponent(&self.im),
            (false, false) => exponent(&self.re).max(exponent(&self.im)),
        };
        let g = e - prec as i64;
        Cx {
            re: round_to_exp(&self.re, g, Round::Nearest),
            im: round_to_exp(&self.im, g, Round::Nearest),
        }
    }

    fn add(&self, o: &Cx) -> Cx {
        Cx::new(&self.re + &o.re, &self.im + &o.im)
    }

    fn sub(&self, o: &Cx) -> Cx {
        Cx::new(&self.re - &o.re, &self.im - &o.im)
    }

    fn mul(&self, o: &Cx, prec: u32) -> Cx {
        Cx::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
        .round(prec)
    }

    fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn div(&self, o: &Cx, prec: u32) -> Option<Cx> {
        let n = o.norm_sq();
        if n.is_zero() {
            return None;
        }
        let n = round_dyadic(&n, prec + 4, Round::Nearest);
        Some(
            Cx::new(
                (&self.re * &o.re + &self.im * &o.im) / &n,
                (&self.im * &o.re - &self.re * &o.im) / &n,
            )
            .round(prec),
        )
    }

    pub fn to_box(&self, prec: u32) -> CBox {
        CBox::point(&self.re, &self.im, prec)
    }

    pub fn approx(&self) -> (f64, f64) {
        (rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

/// A certified root: the disk of `radius` around `center` contains exactly
/// one root, which is real iff `real`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootDisk {
    pub center: Cx,
    pub radius: Rational,
    pub real: bool,
}

impl RootDisk {
    /// Axis-aligned box containing the disk (degenerate in the imaginary
    /// direction for real roots).
    pub fn to_box(&self, prec: u32) -> CBox {
        let re = Interval::new(
            &self.center.re - &self.radius,
            &self.center.re + &self.radius,
            prec,
        );
        let im = if self.real {
            Interval::zero(prec)
        } else {
            Interval::new(
                &self.center.im - &self.radius,
                &self.center.im + &self.radius,
                prec,
            )
        };
        CBox::new(re, im)
    }
}

fn horner(f: &QPoly, z: &Cx, prec: u32) -> Cx {
    let mut acc = Cx::zero();
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(z, prec).add(&Cx::new(c.clone(), Rational::zero()));
    }
    acc.round(prec)
}

fn horner_box(f: &QPoly, z: &CBox) -> CBox {
    let prec = z.prec();
    let mut acc = CBox::from_rational(&Rational::zero(), prec);
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(z).add(&CBox::from_rational(c, prec));
    }
    acc
}

fn initial_guesses(f: &QPoly, prec: u32) -> Vec<Cx> {
    let n = f.degree().unwrap();
    let lead = f.lead().unwrap().abs();
    // Fujiwara-style radius: 2 max |a_i / a_n|^(1/(n-i))
    let mut r = 0f64;
    for (i, c) in f.coeffs().iter().enumerate().take(n) {
        if c.is_zero() {
            continue;
        }
        let q = c.abs() / &lead;
        let lg = (q.numer().bits() as f64 - q.denom().bits() as f64) * std::f64::consts::LN_2;
        r = r.max((lg / (n - i) as f64).exp());
    }
    let r = (2.0 * r).max(1e-3);
    (0..n)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Cx::new(f64_to_rat(r * a.cos()), f64_to_rat(r * a.sin())).round(prec)
        })
        .collect()
}

fn aberth(f: &QPoly, mut z: Vec<Cx>, prec: u32, max_iter: usize) -> Vec<Cx> {
    let df = f.derivative();
    let n = z.len();
    let tol = Rational::new(1.into(), num_bigint::BigInt::one() << (prec as u64 - 4));
    let tol_sq = &tol * &tol;
    let mut best: Option<Rational> = None;
    let mut stalled = 0;
    for _ in 0..max_iter {
        let mut max_step = Rational::zero();
        for i in 0..n {
            let fz = horner(f, &z[i], prec);
            let dz = horner(&df, &z[i], prec);
            let Some(w) = fz.div(&dz, prec) else { continue };
            let mut s = Cx::zero();
            for j in 0..n {
                if j != i {
                    if let Some(t) = Cx::new(Rational::one(), Rational::zero()).div(&z[i].sub(&z[j]), prec) {
                        s = s.add(&t);
                    }
                }
            }
            let denom = Cx::new(Rational::one(), Rational::zero()).sub(&w.mul(&s, prec));
            let step = w.div(&denom, prec).unwrap_or(w);
            let ns = step.norm_sq();
            if ns > max_step {
                max_step = ns;
            }
            z[i] = z[i].sub(&step).round(prec);
        }
        if max_step < tol_sq {
            break;
        }
        // stop once rounding noise dominates the corrections
        match &best {
            Some(b) if &max_step >= b => {
                stalled += 1;
                if stalled >= 4 {
                    break;
                }
            }
            _ => {
                best = Some(max_step);
                stalled = 0;
            }
        }
    }
    z
}

fn weierstrass_radii(f: &QPoly, z: &[Cx], prec: u32) -> Option<Vec<Rational>> {
    let n = z.len();
    let lead = f.lead().unwrap();
    let boxes: Vec<CBox> = z.iter().map(|c| c.to_box(prec)).collect();
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let mut den = CBox::from_rational(lead, prec);
        for j in 0..n {
            if j != i {
                den = den.mul(&boxes[i].sub(&boxes[j]));
            }
        }
        let w = horner_box(f, &boxes[i]).div(&den)?;
        let r = w.abs().hi * Rational::from_integer((n as i64).into());
        radii.push(round_dyadic(&r, 32, Round::Up));
    }
    Some(radii)
}

fn disks_disjoint(a: &Cx, ra: &Rational, b: &Cx, rb: &Rational) -> bool {
    let s = ra + rb;
    a.sub(b).norm_sq() > &s * &s
}

fn try_certify(f: &QPoly, z: &[Cx], prec: u32, eps: &Rational) -> Option<Vec<RootDisk>> {
    let radii = weierstrass_radii(f, z, prec)?;
    let n = z.len();
    if radii.iter().any(|r| r > eps) {
        return None;
    }
    for i in 0..n {
        for j in i + 1..n {
            if !disks_disjoint(&z[i], &radii[i], &z[j], &radii[j]) {
                return None;
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let meets_axis = z[i].im.abs() <= radii[i];
        let conj = Cx::new(z[i].re.clone(), -z[i].im.clone());
        let conj_isolated =
            (0..n).all(|j| j == i || disks_disjoint(&conj, &radii[i], &z[j], &radii[j]));
        let real = if !meets_axis {
            false
        } else if conj_isolated {
            true
        } else {
            return None;
        };
        let center = if real {
            Cx::new(z[i].re.clone(), Rational::zero())
        } else {
            z[i].clone()
        };
        out.push(RootDisk {
            center,
            radius: radii[i].clone(),
            real,
        });
    }
    Some(out)
}

/// Isolate all roots of a squarefree polynomial to disks of radius at most
/// `eps`, in a canonical order: real roots ascending, then complex roots by
/// real part, then imaginary part.
pub fn isolate_roots(f: &QPoly, eps: &Rational) -> Result<Vec<RootDisk>> {
    let n = f
        .degree()
        .ok_or_else(|| Error::Precondition("zero polynomial".into()))?;
    if n == 0 {
        return Ok(vec![]);
    }
    if f.gcd(&f.derivative()).degree() != Some(0) {
        return Err(Error::Precondition("polynomial is not squarefree".into()));
    }
    if n == 1 {
        let r = -f.coeff(0) / f.coeff(1);
        return Ok(vec![RootDisk {
            center: Cx::new(r, Rational::zero()),
            radius: Rational::zero(),
            real: true,
        }]);
    }
    let mut prec = 64u32;
    let mut z = initial_guesses(f, prec);
    let mut iters = 500;
    while prec <= 1 << 14 {
        z = aberth(f, z, prec, iters);
        if let Some(mut disks) = try_certify(f, &z, prec, eps) {
            disks.sort_by(|a, b| {
                (!a.real)
                    .cmp(&!b.real)
                    .then(a.center.re.cmp(&b.center.re))
                    .then(a.center.im.cmp(&b.center.im))
            });
            return Ok(disks);
        }
        prec *= 2;
        iters = 60;
    }
    Err(Error::Undecidable("root isolation".into()))
}
