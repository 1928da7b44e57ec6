// SPDX-License-Identifier: Apache-2.0

//! Algebraic-geometric codes from direct sums of line bundles on the
//! projective line and on Hermitian curves.
//!
//! The pieces, bottom up:
//!
//! * [`field`]: GF(p^m) arithmetic.
//! * [`linalg`]: echelon forms, kernels and linear solves over a field.
//! * [`curve`]: rational points and Riemann–Roch spaces L(m·P∞), optionally
//!   with vanishing conditions at affine points.
//! * [`bundle`]: divisors, direct-sum bundles, slopes and section bases.
//! * [`code`]: the evaluation code, its parameters and encoder.
//! * [`decoder`]: the two-step decoder, with erasures.
//! * [`channel`]: the Q-ary symmetric channel with per-trial seeding.
//! * [`config`] and [`experiment`]: JSON configs, radius checks and
//!   Monte-Carlo sweeps behind the command-line tool.

pub mod bundle;
pub mod channel;
pub mod code;
pub mod config;
pub mod curve;
pub mod decoder;
pub mod error;
pub mod experiment;
pub mod field;
pub mod linalg;

pub use bundle::{Bundle, Divisor, SectionBasis};
pub use channel::{inject_errors, transmit, ChannelSpec};
pub use code::{AgCode, CodeParams, Codeword};
pub use curve::{Curve, CurveKind, Function, Point};
pub use decoder::{DecodeResult, Decoder, DecoderConfig, ReceivedWord, Stage};
pub use error::{Error, Result};
pub use field::{GaloisField, Gf, Symbol};
pub use linalg::Matrix;
