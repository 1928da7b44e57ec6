// SPDX-License-Identifier: Apache-2.0

//! Two-step decoding with an auxiliary line bundle L = O((t+g)·P∞).
//!
//! Step one looks for a nonzero pair (v, w) of sections of E⊗L and L with
//! `v(P_i) = y_i · w(P_i)` at every unerased evaluation point. Step two looks
//! for a section f of E with `v(P_i) = f(P_i) · w(P_i)`. A candidate is only
//! returned after re-encoding it and checking that it lies within distance t
//! of the received word, so a decoder run never reports a codeword it cannot
//! justify.
//!
//! Any error pattern of weight ε is corrected when `ε <= t` and
//! `ε + t <= n' - mu - g`, with n' the number of unerased positions.

use num_rational::Ratio;
use serde::Serialize;

use crate::code::{symbol_distance, AgCode, Codeword};
use crate::error::{Error, Result};
use crate::field::{GaloisField, Gf, Symbol};
use crate::linalg::Matrix;

/// Default number of step-one kernel vectors tried before giving up.
pub const DEFAULT_KERNEL_SEARCH: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecoderConfig {
    t: usize,
    aux_degree: u32,
    kernel_search: usize,
}

impl DecoderConfig {
    /// Decoder targeting `t` errors; requires `n > mu + t + g`.
    pub fn new(code: &AgCode, t: usize) -> Result<Self> {
        let g = code.genus();
        if !exceeds_bound(code, code.n(), t) {
            return Err(Error::DecoderInfeasible {
                n: code.n(),
                mu: code.slope().to_string(),
                t,
                g,
            });
        }
        Ok(DecoderConfig {
            t,
            aux_degree: (t + g) as u32,
            kernel_search: DEFAULT_KERNEL_SEARCH,
        })
    }

    /// `t = floor((n - mu - g) / 2)`, the largest t with `2t <= n - mu - g`.
    pub fn auto(code: &AgCode) -> Result<Self> {
        Self::new(code, code.guaranteed_radius().max(0) as usize)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Degree of the auxiliary line bundle, t + g.
    pub fn aux_degree(&self) -> u32 {
        self.aux_degree
    }

    /// Caps how many step-one kernel vectors are tried. With a limit of 1
    /// only the first kernel basis vector is used.
    pub fn with_kernel_search(mut self, limit: usize) -> Self {
        self.kernel_search = limit.max(1);
        self
    }

    pub fn kernel_search(&self) -> usize {
        self.kernel_search
    }
}

/// `active > mu + t + g`, compared exactly.
fn exceeds_bound(code: &AgCode, active: usize, t: usize) -> bool {
    let rhs = code.slope() + Ratio::from_integer((t + code.genus()) as i64);
    Ratio::from_integer(active as i64) > rhs
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReceivedWord {
    pub symbols: Vec<Symbol>,
    pub erased: Vec<bool>,
}

impl ReceivedWord {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        let erased = vec![false; symbols.len()];
        ReceivedWord { symbols, erased }
    }

    pub fn with_erasures(symbols: Vec<Symbol>, erased: Vec<bool>) -> Self {
        ReceivedWord { symbols, erased }
    }

    pub fn erased_count(&self) -> usize {
        self.erased.iter().filter(|&&e| e).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Stage {
    S1,
    S2,
    Verify,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeResult {
    Decoded { message: Vec<Gf>, codeword: Codeword },
    Failure(Stage),
}

impl DecodeResult {
    pub fn message(&self) -> Option<&[Gf]> {
        match self {
            DecodeResult::Decoded { message, .. } => Some(message),
            DecodeResult::Failure(_) => None,
        }
    }
}

/// The matrices of one decoding problem, restricted to unerased positions.
#[derive(Clone, Debug)]
pub struct DecodingSystem {
    rank: usize,
    h: usize,
    v_blocks: Vec<Matrix>,
    w_rows: Vec<Vec<Gf>>,
    f_blocks: Vec<Matrix>,
    symbols: Vec<Symbol>,
}

impl DecodingSystem {
    /// Number of positions taking part.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// (n·r)×a: sections of E⊗L evaluated at each point.
    pub fn v(&self) -> Matrix {
        stack(&self.v_blocks)
    }

    /// n×b: sections of L evaluated at each point.
    pub fn w(&self) -> Matrix {
        Matrix::from_rows(&self.w_rows).expect("rows share the basis width")
    }

    /// (n·r)×n block diagonal of received symbols as columns.
    pub fn y(&self) -> Matrix {
        let cols: Vec<Matrix> = self
            .symbols
            .iter()
            .map(|s| Matrix::from_columns(self.rank, std::slice::from_ref(s)).expect("symbol of length r"))
            .collect();
        Matrix::block_diag(&cols)
    }

    /// (n·r)×(n·h) block diagonal of the r×h evaluation blocks of H^0(E).
    pub fn f(&self) -> Matrix {
        Matrix::block_diag(&self.f_blocks)
    }

    pub fn a(&self) -> usize {
        self.v_blocks.first().map_or(0, Matrix::cols)
    }

    pub fn b(&self) -> usize {
        self.w_rows.first().map_or(0, Vec::len)
    }
}

fn stack(blocks: &[Matrix]) -> Matrix {
    let rows: Vec<Vec<Gf>> = blocks
        .iter()
        .flat_map(|b| (0..b.rows()).map(move |i| b.row(i).to_vec()))
        .collect();
    let cols = blocks.first().map_or(0, Matrix::cols);
    if rows.is_empty() {
        return Matrix::zeros(0, cols);
    }
    Matrix::from_rows(&rows).expect("blocks share a width")
}

/// Kernel basis of `[V | -Y·W]`.
pub fn step1_kernel(field: &GaloisField, v: &Matrix, y: &Matrix, w: &Matrix) -> Result<Vec<Vec<Gf>>> {
    let yw = y.matmul(field, w)?;
    let system = v.hstack(&yw.neg(field))?;
    Ok(system.kernel_basis(field))
}

/// Step one: first kernel vector of `[V | -Y·W]`, split into (v, w).
pub fn step1(
    field: &GaloisField,
    v: &Matrix,
    y: &Matrix,
    w: &Matrix,
) -> Result<Option<(Vec<Gf>, Vec<Gf>)>> {
    Ok(step1_kernel(field, v, y, w)?.into_iter().next().map(|mut k| {
        let w_part = k.split_off(v.cols());
        (k, w_part)
    }))
}

/// Nonzero kernel elements up to scaling, at most `limit` of them: the basis
/// vectors in order, then combinations whose first nonzero coefficient is
/// one, in odometer order of the coefficient vector.
fn kernel_candidates(field: &GaloisField, basis: &[Vec<Gf>], limit: usize) -> Vec<Vec<Gf>> {
    let mut out: Vec<Vec<Gf>> = basis.iter().take(limit).cloned().collect();
    let dim = basis.len();
    if dim < 2 || out.len() >= limit {
        return out;
    }
    let q = field.order();
    let len = basis[0].len();
    let mut coeffs = vec![Gf::ZERO; dim];
    'outer: while out.len() < limit {
        // odometer step; stop once every vector has been visited
        let mut k = 0;
        loop {
            if k == dim {
                break 'outer;
            }
            if coeffs[k].index() + 1 < q {
                coeffs[k] = Gf(coeffs[k].index() + 1);
                break;
            }
            coeffs[k] = Gf::ZERO;
            k += 1;
        }
        let nonzero: Vec<usize> = (0..dim).filter(|&i| !coeffs[i].is_zero()).collect();
        if nonzero.len() < 2 || coeffs[nonzero[0]] != Gf::ONE {
            continue;
        }
        let mut v = vec![Gf::ZERO; len];
        for &i in &nonzero {
            for (x, &b) in v.iter_mut().zip(&basis[i]) {
                *x = field.add(*x, field.mul(coeffs[i], b));
            }
        }
        out.push(v);
    }
    out
}

/// Step two: solve `v(P_i) = w(P_i) · sum_j lambda_j f_j(P_i)` for lambda.
///
/// Row block i of the system is `w(P_i) · FP_i`, which is the product
/// `F · Lambda · W · w` rearranged with lambda as the unknown.
pub fn step2(
    field: &GaloisField,
    system: &DecodingSystem,
    v_coeffs: &[Gf],
    w_coeffs: &[Gf],
) -> Result<Option<Vec<Gf>>> {
    let rhs = system.v().mul_vec(field, v_coeffs)?;
    let w_values = system.w().mul_vec(field, w_coeffs)?;
    let mut lhs = Matrix::zeros(system.len() * system.rank, system.h);
    for (i, (block, &wi)) in system.f_blocks.iter().zip(&w_values).enumerate() {
        for rho in 0..system.rank {
            for j in 0..system.h {
                lhs[(i * system.rank + rho, j)] = field.mul(wi, block[(rho, j)]);
            }
        }
    }
    lhs.solve_any(field, &rhs)
}

/// A code together with a decoder configuration and the evaluations it needs.
#[derive(Clone, Debug)]
pub struct Decoder<'a> {
    code: &'a AgCode,
    config: DecoderConfig,
    v_blocks: Vec<Matrix>,
    w_rows: Vec<Vec<Gf>>,
}

impl<'a> Decoder<'a> {
    pub fn new(code: &'a AgCode, config: DecoderConfig) -> Result<Self> {
        let twisted = code.bundle().twist(config.aux_degree).h0_basis()?;
        let v_blocks = code
            .points()
            .iter()
            .map(|p| twisted.point_block(p))
            .collect::<Result<Vec<_>>>()?;
        let curve = code.curve();
        let w_rows = code
            .points()
            .iter()
            .map(|p| curve.monomial_values(config.aux_degree, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Decoder {
            code,
            config,
            v_blocks,
            w_rows,
        })
    }

    pub fn code(&self) -> &AgCode {
        self.code
    }

    pub fn config(&self) -> DecoderConfig {
        self.config
    }

    fn check_length(&self, received: &ReceivedWord) -> Result<()> {
        let n = self.code.n();
        if received.symbols.len() != n || received.erased.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "received word of length {} with {} erasure flags for n = {n}",
                received.symbols.len(),
                received.erased.len()
            )));
        }
        if let Some(s) = received.symbols.iter().find(|s| s.len() != self.code.r()) {
            return Err(Error::DimensionMismatch(format!(
                "symbol of length {} for rank {}",
                s.len(),
                self.code.r()
            )));
        }
        let q = self.code.field().order();
        if received.symbols.iter().flatten().any(|x| x.index() >= q) {
            return Err(Error::InvalidElement("received symbol outside the field".into()));
        }
        Ok(())
    }

    /// Matrices V, W, Y and F over the unerased positions of `received`.
    pub fn build_system(&self, received: &ReceivedWord) -> Result<DecodingSystem> {
        self.check_length(received)?;
        let active: Vec<usize> = (0..self.code.n()).filter(|&i| !received.erased[i]).collect();
        Ok(DecodingSystem {
            rank: self.code.r(),
            h: self.code.h(),
            v_blocks: active.iter().map(|&i| self.v_blocks[i].clone()).collect(),
            w_rows: active.iter().map(|&i| self.w_rows[i].clone()).collect(),
            f_blocks: active
                .iter()
                .map(|&i| self.code.point_blocks()[i].clone())
                .collect(),
            symbols: active.iter().map(|&i| received.symbols[i].clone()).collect(),
        })
    }

    /// Decodes a received word, treating flagged positions as erasures.
    pub fn decode(&self, received: &ReceivedWord) -> Result<DecodeResult> {
        self.check_length(received)?;
        let active = self.code.n() - received.erased_count();
        if !exceeds_bound(self.code, active, self.config.t) {
            let bound = self.code.slope()
                + Ratio::from_integer((self.config.t + self.code.genus()) as i64);
            return Err(Error::TooManyErasures {
                erased: received.erased_count(),
                n: self.code.n(),
                bound: bound.to_string(),
            });
        }
        let field = self.code.field();
        let system = self.build_system(received)?;
        let (vm, ym, wm) = (system.v(), system.y(), system.w());
        let kernel = step1_kernel(field, &vm, &ym, &wm)?;
        if kernel.is_empty() {
            return Ok(DecodeResult::Failure(Stage::S1));
        }
        let mut first_failure = None;
        for candidate in kernel_candidates(field, &kernel, self.config.kernel_search) {
            let (v, w) = candidate.split_at(vm.cols());
            let stage = match step2(field, &system, v, w)? {
                None => Stage::S2,
                Some(message) => {
                    let codeword = self.code.encode(&message)?;
                    let distance =
                        symbol_distance(&codeword, &received.symbols, Some(&received.erased));
                    if distance <= self.config.t {
                        return Ok(DecodeResult::Decoded { message, codeword });
                    }
                    Stage::Verify
                }
            };
            first_failure.get_or_insert(stage);
        }
        Ok(DecodeResult::Failure(first_failure.expect("at least one candidate")))
    }

    pub fn decode_with_erasures(&self, symbols: Vec<Symbol>, erased: Vec<bool>) -> Result<DecodeResult> {
        self.decode(&ReceivedWord::with_erasures(symbols, erased))
    }
}
