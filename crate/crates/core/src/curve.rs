// SPDX-License-Identifier: Apache-2.0

//! Explicit curves with a single point at infinity: the projective line and
//! the Hermitian curve `y^q0 + y = x^(q0+1)` over GF(q0^2).
//!
//! Functions in L(N·P∞) are coefficient vectors over the monomial basis of
//! that space, ordered by pole order at infinity. For the line the basis is
//! `1, x, ..., x^N`; for the Hermitian curve it is `x^i y^j` with `j < q0`
//! and `i·q0 + j·(q0+1) <= N`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{GaloisField, Gf};
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveKind {
    ProjectiveLine,
    Hermitian { q0: u32 },
}

/// A rational point. Points of the projective line carry no `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Affine { x: Gf, y: Option<Gf> },
    Infinity,
}

impl Point {
    pub fn line(x: Gf) -> Self {
        Point::Affine { x, y: None }
    }

    pub fn plane(x: Gf, y: Gf) -> Self {
        Point::Affine { x, y: Some(y) }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, Point::Affine { .. })
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Affine { x, y: None } => write!(f, "({x})"),
            Point::Affine { x, y: Some(y) } => write!(f, "({x}, {y})"),
            Point::Infinity => write!(f, "inf"),
        }
    }
}

/// `x^x_exp · y^y_exp`, with its pole order at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub x_exp: u32,
    pub y_exp: u32,
    pub pole_order: u32,
}

/// An element of L(cap·P∞), as coefficients over the monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Function {
    pub cap: u32,
    pub coeffs: Vec<Gf>,
}

impl Function {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

#[derive(Clone, Debug)]
pub struct Curve {
    kind: CurveKind,
    field: Arc<GaloisField>,
    genus: usize,
}

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && *self.field == *other.field
    }
}

impl Eq for Curve {}

impl Curve {
    pub fn projective_line(field: Arc<GaloisField>) -> Self {
        Curve {
            kind: CurveKind::ProjectiveLine,
            field,
            genus: 0,
        }
    }

    /// Hermitian curve over GF(q0^2); `q0` must be a prime power.
    pub fn hermitian(q0: u64) -> Result<Self> {
        let (p, k) = prime_power(q0).ok_or(Error::NotPrimePower(q0))?;
        let field = GaloisField::new(p, 2 * k)?;
        Ok(Curve {
            kind: CurveKind::Hermitian { q0: q0 as u32 },
            field: Arc::new(field),
            genus: (q0 * (q0 - 1) / 2) as usize,
        })
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<GaloisField> {
        Arc::clone(&self.field)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Affine rational points in field-enumeration order (x, then y).
    pub fn affine_points(&self) -> Vec<Point> {
        let f = &*self.field;
        match self.kind {
            CurveKind::ProjectiveLine => f.elements().map(Point::line).collect(),
            CurveKind::Hermitian { .. } => f
                .elements()
                .flat_map(|x| f.elements().map(move |y| Point::plane(x, y)))
                .filter(|p| self.contains(p))
                .collect(),
        }
    }

    /// All rational points, with the point at infinity last.
    pub fn points(&self) -> Vec<Point> {
        let mut pts = self.affine_points();
        pts.push(Point::Infinity);
        pts
    }

    pub fn contains(&self, point: &Point) -> bool {
        match (self.kind, point) {
            (_, Point::Infinity) => true,
            (CurveKind::ProjectiveLine, Point::Affine { x, y: None }) => {
                x.index() < self.field.order()
            }
            (CurveKind::Hermitian { q0 }, Point::Affine { x, y: Some(y) }) => {
                let f = &*self.field;
                if x.index() >= f.order() || y.index() >= f.order() {
                    return false;
                }
                let lhs = f.add(f.pow(*y, q0 as u64), *y);
                lhs == f.pow(*x, q0 as u64 + 1)
            }
            _ => false,
        }
    }

    pub(crate) fn check_affine(&self, point: &Point) -> Result<()> {
        if !point.is_affine() {
            return Err(Error::InfinityNotAllowed(point.to_string()));
        }
        if !self.contains(point) {
            return Err(Error::PointNotOnCurve(point.to_string()));
        }
        Ok(())
    }

    /// Monomial basis of L(cap·P∞), sorted by pole order.
    pub fn monomials(&self, cap: u32) -> Vec<Monomial> {
        match self.kind {
            CurveKind::ProjectiveLine => (0..=cap)
                .map(|i| Monomial {
                    x_exp: i,
                    y_exp: 0,
                    pole_order: i,
                })
                .collect(),
            CurveKind::Hermitian { q0 } => {
                let mut out = Vec::new();
                for j in 0..q0 {
                    let base = j * (q0 + 1);
                    if base > cap {
                        break;
                    }
                    for i in 0..=(cap - base) / q0 {
                        out.push(Monomial {
                            x_exp: i,
                            y_exp: j,
                            pole_order: i * q0 + base,
                        });
                    }
                }
                out.sort_by_key(|m| (m.pole_order, m.y_exp));
                out
            }
        }
    }

    /// Dimension of L(m·P∞).
    pub fn rr_dimension(&self, m: u32) -> usize {
        self.monomials(m).len()
    }

    /// Values of every basis monomial of L(cap·P∞) at an affine point.
    pub fn monomial_values(&self, cap: u32, point: &Point) -> Result<Vec<Gf>> {
        self.check_affine(point)?;
        let Point::Affine { x, y } = *point else {
            unreachable!()
        };
        let f = &*self.field;
        let y = y.unwrap_or(Gf::ZERO);
        Ok(self
            .monomials(cap)
            .iter()
            .map(|m| f.mul(f.pow(x, m.x_exp as u64), f.pow(y, m.y_exp as u64)))
            .collect())
    }

    /// Basis of L(m·P∞): the unit coefficient vectors.
    pub fn rr_basis(&self, m: u32) -> Vec<Function> {
        let dim = self.rr_dimension(m);
        (0..dim)
            .map(|k| {
                let mut coeffs = vec![Gf::ZERO; dim];
                coeffs[k] = Gf::ONE;
                Function { cap: m, coeffs }
            })
            .collect()
    }

    /// Basis of the functions in L(m·P∞) vanishing at every point of
    /// `vanish`, computed as the kernel of the evaluation matrix.
    pub fn rr_basis_vanishing(&self, m: u32, vanish: &[Point]) -> Result<Vec<Function>> {
        for (k, p) in vanish.iter().enumerate() {
            self.check_affine(p)?;
            if vanish[..k].contains(p) {
                return Err(Error::DuplicatePoint(p.to_string()));
            }
        }
        if vanish.is_empty() {
            return Ok(self.rr_basis(m));
        }
        let rows = vanish
            .iter()
            .map(|p| self.monomial_values(m, p))
            .collect::<Result<Vec<_>>>()?;
        let eval = Matrix::from_rows(&rows)?;
        Ok(eval
            .kernel_basis(&self.field)
            .into_iter()
            .map(|coeffs| Function { cap: m, coeffs })
            .collect())
    }

    pub fn evaluate(&self, func: &Function, point: &Point) -> Result<Gf> {
        let values = self.monomial_values(func.cap, point)?;
        if values.len() != func.coeffs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a basis of size {}",
                func.coeffs.len(),
                values.len()
            )));
        }
        Ok(self.field.dot(&func.coeffs, &values))
    }

    /// Number of affine rational points where a nonzero function vanishes.
    pub fn vanishing_count(&self, func: &Function) -> Result<usize> {
        if func.is_zero() {
            return Err(Error::ZeroFunction("vanishing count".into()));
        }
        let mut count = 0;
        for p in self.affine_points() {
            if self.evaluate(func, &p)?.is_zero() {
                count += 1;
            }
        }
        Ok(count)
    }
}

/// `n = p^k` with `p` prime, if such a decomposition exists.
fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let (mut rest, mut k) = (n, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}
