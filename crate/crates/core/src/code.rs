// SPDX-License-Identifier: Apache-2.0

//! The evaluation code of a weakly stable direct-sum bundle.
//!
//! A message is a coefficient vector over the section basis (length h over
//! F_q) and its codeword is the section evaluated at the n evaluation points,
//! one r-vector per point. The code is F_q-linear but in general not
//! F_Q-linear, so the dimension k = h / r is kept as an exact rational.

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::bundle::{Bundle, SectionBasis};
use crate::curve::{Curve, Point};
use crate::error::{Error, Result};
use crate::field::{GaloisField, Gf, Symbol};
use crate::linalg::Matrix;

pub type Codeword = Vec<Symbol>;

/// Upper limit on q^h for exhaustive codeword enumeration.
pub const BRUTEFORCE_LIMIT: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub n: usize,
    pub r: usize,
    pub q: u32,
    #[serde(rename = "Q")]
    pub big_q: Option<u128>,
    pub genus: usize,
    pub h: usize,
    pub mu: String,
    pub k: String,
    pub d_designed: i64,
    pub t_star: i64,
    pub singleton_defect_bound: usize,
    pub guaranteed_radius: i64,
}

#[derive(Clone, Debug)]
pub struct AgCode {
    curve: Curve,
    points: Vec<Point>,
    bundle: Bundle,
    basis: SectionBasis,
    blocks: Vec<Matrix>,
    generator: Matrix,
}

/// `floor(a / b)` for a rational and a positive integer divisor.
fn floor_div(x: Ratio<i64>, b: i64) -> i64 {
    x.numer().div_floor(&(x.denom() * b))
}

impl AgCode {
    pub fn new(curve: &Curve, points: Vec<Point>, bundle: Bundle) -> Result<Self> {
        if bundle.curve() != curve {
            return Err(Error::CurveMismatch);
        }
        let support = bundle.support_points();
        for (k, p) in points.iter().enumerate() {
            curve.check_affine(p)?;
            if points[..k].contains(p) {
                return Err(Error::DuplicatePoint(p.to_string()));
            }
            if support.contains(p) {
                return Err(Error::SupportCollision(p.to_string()));
            }
        }
        if !bundle.is_weakly_stable() {
            return Err(Error::NotWeaklyStable(bundle.summand_degrees()));
        }
        let n = points.len();
        if bundle.slope() >= Ratio::from_integer(n as i64) {
            return Err(Error::SlopeTooLarge {
                mu: bundle.slope().to_string(),
                n,
            });
        }
        let basis = bundle.h0_basis()?;
        let blocks = points
            .iter()
            .map(|p| basis.point_block(p))
            .collect::<Result<Vec<_>>>()?;
        let generator = stack_rows(&blocks, basis.len());
        let rank = generator.rank(curve.field());
        if rank != basis.len() {
            return Err(Error::NotInjective {
                rank,
                expected: basis.len(),
            });
        }
        Ok(AgCode {
            curve: curve.clone(),
            points,
            bundle,
            basis,
            blocks,
            generator,
        })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn field(&self) -> &GaloisField {
        self.curve.field()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn bundle(&self) -> &Bundle {
        &self.bundle
    }

    pub fn basis(&self) -> &SectionBasis {
        &self.basis
    }

    /// The r×h evaluation block at each evaluation point.
    pub fn point_blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    /// (n·r)×h generator; rows r·i..r·(i+1) belong to point i.
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn r(&self) -> usize {
        self.bundle.rank()
    }

    pub fn h(&self) -> usize {
        self.basis.len()
    }

    pub fn genus(&self) -> usize {
        self.curve.genus()
    }

    pub fn slope(&self) -> Ratio<i64> {
        self.bundle.slope()
    }

    pub fn dimension(&self) -> Ratio<i64> {
        Ratio::new(self.h() as i64, self.r() as i64)
    }

    pub fn designed_distance(&self) -> i64 {
        self.n() as i64 - self.slope().floor().to_integer()
    }

    /// floor((n - mu) / 2).
    pub fn t_star(&self) -> i64 {
        floor_div(Ratio::from_integer(self.n() as i64) - self.slope(), 2)
    }

    /// floor((n - mu - g) / 2), the radius the decoder guarantees.
    pub fn guaranteed_radius(&self) -> i64 {
        let excess = Ratio::from_integer(self.n() as i64 - self.genus() as i64) - self.slope();
        floor_div(excess, 2)
    }

    pub fn params(&self) -> CodeParams {
        let q = self.field().order();
        CodeParams {
            n: self.n(),
            r: self.r(),
            q,
            big_q: (q as u128).checked_pow(self.r() as u32),
            genus: self.genus(),
            h: self.h(),
            mu: self.slope().to_string(),
            k: self.dimension().to_string(),
            d_designed: self.designed_distance(),
            t_star: self.t_star(),
            singleton_defect_bound: self.genus(),
            guaranteed_radius: self.guaranteed_radius(),
        }
    }

    pub fn encode(&self, message: &[Gf]) -> Result<Codeword> {
        if message.len() != self.h() {
            return Err(Error::DimensionMismatch(format!(
                "message of length {} for a code with h = {}",
                message.len(),
                self.h()
            )));
        }
        let flat = self.generator.mul_vec(self.field(), message)?;
        Ok(flat.chunks(self.r()).map(<[Gf]>::to_vec).collect())
    }

    pub fn random_message<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Vec<Gf> {
        (0..self.h()).map(|_| self.field().random(rng)).collect()
    }

    /// Minimum symbol weight over all nonzero codewords, by enumeration.
    pub fn min_weight_bruteforce(&self) -> Result<usize> {
        let q = self.field().order();
        let too_large = Error::CodeTooLarge { q, h: self.h() };
        let total = (q as u64)
            .checked_pow(self.h() as u32)
            .filter(|&t| t <= BRUTEFORCE_LIMIT)
            .ok_or(too_large)?;
        let mut best = usize::MAX;
        let mut message = vec![Gf::ZERO; self.h()];
        for _ in 1..total {
            increment(&mut message, q);
            let word = self.encode(&message)?;
            let weight = word
                .iter()
                .filter(|s| s.iter().any(|x| !x.is_zero()))
                .count();
            best = best.min(weight);
        }
        Ok(best)
    }
}

/// Odometer step over F_q^h in packed-index order.
fn increment(v: &mut [Gf], q: u32) {
    for x in v.iter_mut() {
        if x.index() + 1 < q {
            *x = Gf(x.index() + 1);
            return;
        }
        *x = Gf::ZERO;
    }
}

fn stack_rows(blocks: &[Matrix], cols: usize) -> Matrix {
    let rows: Vec<Vec<Gf>> = blocks
        .iter()
        .flat_map(|b| (0..b.rows()).map(move |i| b.row(i).to_vec()))
        .collect();
    if rows.is_empty() {
        return Matrix::zeros(0, cols);
    }
    Matrix::from_rows(&rows).expect("blocks share the basis width")
}

/// Number of positions where two words differ, skipping masked positions.
pub fn symbol_distance(a: &[Symbol], b: &[Symbol], skip: Option<&[bool]>) -> usize {
    a.iter()
        .zip(b)
        .enumerate()
        .filter(|(i, (x, y))| x != y && !skip.is_some_and(|s| s[*i]))
        .count()
}
