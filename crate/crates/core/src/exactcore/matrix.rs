//! Dense matrices over a ring, row-major.

use super::rational::Rational;
use super::ring::{Field, Ring};
use crate::{Error, Result};
use std::fmt;

#[derive(Clone, PartialEq)]
pub struct Matrix<R: Ring> {
    rows: usize,
    cols: usize,
    entries: Vec<R>,
    ctx: R::Ctx,
}

pub type MatQ = Matrix<Rational>;

impl<R: Ring> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl<R: Ring> Matrix<R> {
    pub fn new(rows: usize, cols: usize, entries: Vec<R>, ctx: R::Ctx) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
            ctx,
        })
    }

    pub fn from_rows(rows: Vec<Vec<R>>, ctx: R::Ctx) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect(), ctx)
    }

    pub fn zeros(rows: usize, cols: usize, ctx: &R::Ctx) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![R::zero(ctx); rows * cols],
            ctx: ctx.clone(),
        }
    }

    pub fn identity(n: usize, ctx: &R::Ctx) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        for i in 0..n {
            m.set(i, i, R::one(ctx));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &R::Ctx {
        &self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Ring::is_zero)
    }

    pub fn map<S: Ring>(&self, ctx: &S::Ctx, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
            ctx: ctx.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("matrix sum".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.plus(b))
                .collect(),
            ctx: self.ctx.clone(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&R::from_i64(&self.ctx, -1)))
    }

    pub fn scale(&self, c: &R) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a.times(c)).collect(),
            ctx: self.ctx.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols, &self.ctx);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = R::zero(&self.ctx);
                for k in 0..self.cols {
                    acc = acc.plus(&self.get(i, k).times(other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[R]) -> Result<Vec<R>> {
        if v.len() != self.cols {
            return Err(Error::Dimension("matrix-vector product".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(R::zero(&self.ctx), |acc, (a, b)| acc.plus(&a.times(b)))
            })
            .collect())
    }

    pub fn pow(&self, mut k: u64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let mut acc = Self::identity(self.rows, &self.ctx);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Determinant by fraction-free (Bareiss) elimination; works over any
    /// integral domain whose `div_exact` is exact on the quotients that
    /// arise.
    pub fn det(&self) -> Result<R> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut a: Vec<Vec<R>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign_neg = false;
        let mut prev = R::one(&self.ctx);
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(piv) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Ok(R::zero(&self.ctx));
                };
                a.swap(k, piv);
                sign_neg = !sign_neg;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i][j].times(&a[k][k]).minus(&a[i][k].times(&a[k][j]));
                    a[i][j] = num
                        .div_exact(&prev)
                        .ok_or_else(|| Error::Internal("inexact Bareiss quotient".into()))?;
                }
                a[i][k] = R::zero(&self.ctx);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if sign_neg { d.negate() } else { d })
    }
}

impl<R: Field> Matrix<R> {
    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                let tmp = m.get(r, j).clone();
                m.set(r, j, m.get(p, j).clone());
                m.set(p, j, tmp);
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in 0..m.cols {
                let v = m.get(r, j).times(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j).minus(&f.times(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n, &self.ctx);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, R::one(&self.ctx));
        }
        let (red, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut out = Self::zeros(n, n, &self.ctx);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, red.get(i, n + j).clone());
            }
        }
        Some(out)
    }
}

/// Exact `M^k`; `k = 0` gives the identity.
pub fn mat_pow<R: Ring>(m: &Matrix<R>, k: u64) -> Result<Matrix<R>> {
    m.pow(k)
}

/// Multiplicative order of an invertible square matrix, searched up to `cap`.
pub fn mat_order<R: Ring>(m: &Matrix<R>, cap: u64) -> Result<Option<u64>> {
    let id = Matrix::identity(m.rows, &m.ctx);
    let mut acc = m.clone();
    for k in 1..=cap {
        if acc == id {
            return Ok(Some(k));
        }
        acc = acc.mul(m)?;
    }
    Ok(None)
}
