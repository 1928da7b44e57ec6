// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised while building fields, curves, bundles, codes and decoders.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("field extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the supported budget of 2^20 elements")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("no irreducible polynomial of degree {m} over GF({p}) was found")]
    NoIrreducible { p: u32, m: u32 },
    #[error("invalid field element: {0}")]
    InvalidElement(String),
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("Hermitian parameter q0 = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("point is not on the curve: {0}")]
    PointNotOnCurve(String),
    #[error("point at infinity is not allowed here: {0}")]
    InfinityNotAllowed(String),
    #[error("cannot evaluate the zero function: {0}")]
    ZeroFunction(String),
    #[error("bundle lives on a different curve than the evaluation points")]
    CurveMismatch,
    #[error("bundle must have at least one summand")]
    EmptyBundle,
    #[error("bundle not weakly stable: summand degrees {0:?} differ")]
    NotWeaklyStable(Vec<i64>),
    #[error("duplicate point: {0}")]
    DuplicatePoint(String),
    #[error("evaluation point {0} lies in the support of a summand divisor")]
    SupportCollision(String),
    #[error("slope {mu} must be smaller than the code length {n}")]
    SlopeTooLarge { mu: String, n: usize },
    #[error("generator matrix has rank {rank}, expected {expected}")]
    NotInjective { rank: usize, expected: usize },
    #[error("code too large for exhaustive enumeration: q^h = {q}^{h} exceeds 2^16")]
    CodeTooLarge { q: u32, h: usize },
    #[error("decoder requires n > mu + t + g, got n = {n}, mu = {mu}, t = {t}, g = {g}")]
    DecoderInfeasible { n: usize, mu: String, t: usize, g: usize },
    #[error("too many erasures: {erased} of {n} positions erased, need n - erased > mu + t + g = {bound}")]
    TooManyErasures { erased: usize, n: usize, bound: String },
    #[error("invalid error pattern: {0}")]
    InvalidPattern(String),
    #[error("invalid channel parameter: {0}")]
    InvalidChannel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
