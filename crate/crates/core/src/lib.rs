//! Exact and certified computations for heights of periodic points and
//! backward orbits of a few explicit polynomial and rational maps.
//!
//! The crate is organized bottom-up: [`exactcore`] supplies rationals,
//! polynomials, matrices and finite fields; [`interval`] supplies certified
//! real and complex enclosures; [`numberfield`] and [`padics`] build places
//! and local lifts on top; the dynamics modules [`henon3`], [`p2map`],
//! [`backorbit`] and [`cohyp`] produce [`cert::Certificate`]s.

pub mod backorbit;
pub mod cert;
pub mod cohyp;
pub mod exactcore;
pub mod henon3;
pub mod interval;
pub mod numberfield;
pub mod p2map;
pub mod padics;

pub use exactcore::rational::Rational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("valuation of zero")]
    ValuationOfZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("undefined resultant")]
    UndefinedResultant,
    #[error("bad reduction at {0}: leading coefficient is not a unit")]
    BadReduction(u64),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("ramified or non-maximal order at {0}; unsupported")]
    Ramified(u64),
    #[error("valuation below precision")]
    BelowPrecision,
    #[error("not étale at seed {0}")]
    NotEtale(String),
    #[error("degree cap exceeded: {0}")]
    DegreeCap(String),
    #[error("left the finite locus U: {0}")]
    LeftFiniteLocus(String),
    #[error("undecidable at precision cap: {0}")]
    Undecidable(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
