// SPDX-License-Identifier: Apache-2.0

//! Q-ary symmetric channel and deterministic error injection.
//!
//! Every trial draws from its own ChaCha20 stream: the key comes from
//! `ChaCha20Rng::seed_from_u64(master_seed)` and the stream id is
//! `2·trial` for channel noise and `2·trial + 1` for the transmitted message.
//! Trials can therefore run in any order, on any number of threads, and
//! still see the same randomness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::code::Codeword;
use crate::decoder::{ReceivedWord, Stage};
use crate::error::{Error, Result};
use crate::field::{GaloisField, Gf, Symbol};

/// Name recorded in reports for the randomness source.
pub const RNG_ALGORITHM: &str =
    "ChaCha20 (rand_chacha 0.3); key = seed_from_u64(master_seed); stream = 2*trial (channel), 2*trial+1 (message)";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelSpec {
    p_err: f64,
    master_seed: u64,
}

impl ChannelSpec {
    pub fn new(p_err: f64, master_seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_err) {
            return Err(Error::InvalidChannel(format!(
                "symbol error probability {p_err} outside [0, 1]"
            )));
        }
        Ok(ChannelSpec { p_err, master_seed })
    }

    pub fn p_err(&self) -> f64 {
        self.p_err
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }
}

fn stream_rng(master_seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

pub fn channel_rng(master_seed: u64, trial: u64) -> ChaCha20Rng {
    stream_rng(master_seed, trial.wrapping_mul(2))
}

pub fn message_rng(master_seed: u64, trial: u64) -> ChaCha20Rng {
    stream_rng(master_seed, trial.wrapping_mul(2).wrapping_add(1))
}

/// Uniform symbol of F_Q different from `avoid`.
pub fn random_other_symbol<R: Rng + ?Sized>(field: &GaloisField, avoid: &[Gf], rng: &mut R) -> Symbol {
    loop {
        let s: Symbol = avoid.iter().map(|_| field.random(rng)).collect();
        if s != avoid {
            return s;
        }
    }
}

/// Sends a codeword through the Q-ary symmetric channel for one trial.
pub fn transmit(field: &GaloisField, word: &Codeword, spec: &ChannelSpec, trial: u64) -> ReceivedWord {
    let mut rng = channel_rng(spec.master_seed, trial);
    let symbols = word
        .iter()
        .map(|s| {
            if rng.gen_bool(spec.p_err) {
                random_other_symbol(field, s, &mut rng)
            } else {
                s.clone()
            }
        })
        .collect();
    ReceivedWord::new(symbols)
}

/// Replaces the symbols at `positions` with `values`.
pub fn inject_errors(word: &Codeword, positions: &[usize], values: &[Symbol]) -> Result<ReceivedWord> {
    if positions.len() != values.len() {
        return Err(Error::InvalidPattern(format!(
            "{} positions but {} values",
            positions.len(),
            values.len()
        )));
    }
    let mut symbols = word.clone();
    for (k, (&pos, value)) in positions.iter().zip(values).enumerate() {
        if positions[..k].contains(&pos) {
            return Err(Error::InvalidPattern(format!("position {pos} repeated")));
        }
        let original = word
            .get(pos)
            .ok_or_else(|| Error::InvalidPattern(format!("position {pos} out of range")))?;
        if value.len() != original.len() {
            return Err(Error::InvalidPattern(format!("value at {pos} has the wrong length")));
        }
        if value == original {
            return Err(Error::InvalidPattern(format!(
                "value at {pos} equals the transmitted symbol"
            )));
        }
        symbols[pos] = value.clone();
    }
    Ok(ReceivedWord::new(symbols))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialOutcome {
    DecodedCorrect,
    /// Decoded to a codeword other than the one sent.
    DecodedWrong,
    Failure(Stage),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub errors: usize,
    pub erased: usize,
    pub outcome: TrialOutcome,
    /// The decoder returned a codeword farther than t from the received word.
    pub unsound: bool,
}
