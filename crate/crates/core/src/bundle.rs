// SPDX-License-Identifier: Apache-2.0

//! Divisors of the form `m·P∞ - (P_1 + ... + P_s)` and direct sums of the
//! corresponding line bundles.
//!
//! A direct sum of line bundles is weakly stable exactly when every summand
//! has the same degree. The flag is recorded rather than enforced here; code
//! construction is what refuses unstable bundles.

use num_rational::Ratio;

use crate::curve::{Curve, Function, Point};
use crate::error::{Error, Result};
use crate::field::{Gf, Symbol};
use crate::linalg::Matrix;

/// `m_inf·P∞` minus a set of distinct affine points, each with coefficient one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    pub m_inf: u32,
    pub minus: Vec<Point>,
}

impl Divisor {
    pub fn one_point(m_inf: u32) -> Self {
        Divisor {
            m_inf,
            minus: Vec::new(),
        }
    }

    pub fn new(m_inf: u32, minus: Vec<Point>) -> Self {
        Divisor { m_inf, minus }
    }

    pub fn degree(&self) -> i64 {
        self.m_inf as i64 - self.minus.len() as i64
    }

    fn validate(&self, curve: &Curve) -> Result<()> {
        for (k, p) in self.minus.iter().enumerate() {
            curve.check_affine(p)?;
            if self.minus[..k].contains(p) {
                return Err(Error::DuplicatePoint(p.to_string()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle {
    curve: Curve,
    summands: Vec<Divisor>,
}

impl Bundle {
    pub fn new(curve: &Curve, summands: Vec<Divisor>) -> Result<Self> {
        if summands.is_empty() {
            return Err(Error::EmptyBundle);
        }
        for d in &summands {
            d.validate(curve)?;
        }
        Ok(Bundle {
            curve: curve.clone(),
            summands,
        })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn summands(&self) -> &[Divisor] {
        &self.summands
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    pub fn summand_degrees(&self) -> Vec<i64> {
        self.summands.iter().map(Divisor::degree).collect()
    }

    pub fn degree(&self) -> i64 {
        self.summand_degrees().iter().sum()
    }

    pub fn slope(&self) -> Ratio<i64> {
        Ratio::new(self.degree(), self.rank() as i64)
    }

    pub fn is_weakly_stable(&self) -> bool {
        let degrees = self.summand_degrees();
        degrees.windows(2).all(|w| w[0] == w[1])
    }

    /// Every point removed by some summand.
    pub fn support_points(&self) -> Vec<Point> {
        let mut out: Vec<Point> = Vec::new();
        for p in self.summands.iter().flat_map(|d| &d.minus) {
            if !out.contains(p) {
                out.push(*p);
            }
        }
        out
    }

    /// Tensor product with O(twist·P∞).
    pub fn twist(&self, twist: u32) -> Bundle {
        Bundle {
            curve: self.curve.clone(),
            summands: self
                .summands
                .iter()
                .map(|d| Divisor::new(d.m_inf + twist, d.minus.clone()))
                .collect(),
        }
    }

    /// Basis of the global sections, component by component.
    pub fn h0_basis(&self) -> Result<SectionBasis> {
        let mut entries = Vec::new();
        for (component, d) in self.summands.iter().enumerate() {
            for function in self.curve.rr_basis_vanishing(d.m_inf, &d.minus)? {
                entries.push(SectionEntry {
                    component,
                    function,
                });
            }
        }
        Ok(SectionBasis {
            curve: self.curve.clone(),
            rank: self.rank(),
            entries,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionEntry {
    pub component: usize,
    pub function: Function,
}

/// Ordered basis of H^0 of a direct sum, each entry living in one summand.
#[derive(Clone, Debug)]
pub struct SectionBasis {
    curve: Curve,
    rank: usize,
    entries: Vec<SectionEntry>,
}

impl SectionBasis {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entries(&self) -> &[SectionEntry] {
        &self.entries
    }

    /// The r×h matrix whose column j is the value of basis entry j at `point`.
    pub fn point_block(&self, point: &Point) -> Result<Matrix> {
        let mut block = Matrix::zeros(self.rank, self.entries.len());
        for (j, e) in self.entries.iter().enumerate() {
            block[(e.component, j)] = self.curve.evaluate(&e.function, point)?;
        }
        Ok(block)
    }

    /// Value at `point` of the section with the given basis coefficients.
    pub fn evaluate(&self, coeffs: &[Gf], point: &Point) -> Result<Symbol> {
        if coeffs.len() != self.entries.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a section basis of size {}",
                coeffs.len(),
                self.entries.len()
            )));
        }
        let f = self.curve.field();
        let mut out = vec![Gf::ZERO; self.rank];
        for (e, &c) in self.entries.iter().zip(coeffs) {
            let v = self.curve.evaluate(&e.function, point)?;
            out[e.component] = f.add(out[e.component], f.mul(c, v));
        }
        Ok(out)
    }
}
