// SPDX-License-Identifier: Apache-2.0

//! Exhaustive radius checks, channel sweeps and distance reports.

use itertools::Itertools;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{self, ChannelSpec, TrialOutcome, TrialRecord, RNG_ALGORITHM};
use crate::code::{symbol_distance, AgCode, CodeParams, Codeword};
use crate::decoder::{DecodeResult, Decoder, DecoderConfig, ReceivedWord, Stage};
use crate::error::{Error, Result};
use crate::field::{GaloisField, Gf, Symbol};

/// Largest number of error patterns (positions × values) per ε.
pub const PATTERN_LIMIT: u128 = 10_000_000;

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub trials: u64,
    pub correct: u64,
    pub wrong: u64,
    pub unsound: u64,
    pub failure_s1: u64,
    pub failure_s2: u64,
    pub failure_verify: u64,
}

impl Tally {
    pub fn failure(&self) -> u64 {
        self.failure_s1 + self.failure_s2 + self.failure_verify
    }

    fn record(&mut self, rec: &TrialRecord) {
        self.trials += 1;
        match rec.outcome {
            TrialOutcome::DecodedCorrect => self.correct += 1,
            TrialOutcome::DecodedWrong => self.wrong += 1,
            TrialOutcome::Failure(Stage::S1) => self.failure_s1 += 1,
            TrialOutcome::Failure(Stage::S2) => self.failure_s2 += 1,
            TrialOutcome::Failure(Stage::Verify) => self.failure_verify += 1,
        }
        self.unsound += rec.unsound as u64;
    }

    fn merge(mut self, o: Tally) -> Tally {
        self.trials += o.trials;
        self.correct += o.correct;
        self.wrong += o.wrong;
        self.unsound += o.unsound;
        self.failure_s1 += o.failure_s1;
        self.failure_s2 += o.failure_s2;
        self.failure_verify += o.failure_verify;
        self
    }
}

/// Decodes one received word and compares the result with what was sent.
pub fn run_trial(
    decoder: &Decoder<'_>,
    trial: u64,
    sent: &Codeword,
    received: &ReceivedWord,
) -> Result<TrialRecord> {
    let t = decoder.config().t();
    let errors = symbol_distance(sent, &received.symbols, Some(&received.erased));
    let (outcome, unsound) = match decoder.decode(received)? {
        DecodeResult::Decoded { codeword, .. } => {
            let far = symbol_distance(&codeword, &received.symbols, Some(&received.erased)) > t;
            let outcome = if &codeword == sent {
                TrialOutcome::DecodedCorrect
            } else {
                TrialOutcome::DecodedWrong
            };
            (outcome, far)
        }
        DecodeResult::Failure(stage) => (TrialOutcome::Failure(stage), false),
    };
    Ok(TrialRecord {
        trial,
        errors,
        erased: received.erased_count(),
        outcome,
        unsound,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadiusRow {
    pub epsilon: usize,
    /// Inside the proven regime: ε ≤ t and ε + t ≤ n − μ − g.
    pub guaranteed: bool,
    pub patterns: u64,
    #[serde(flatten)]
    pub tally: Tally,
}

impl RadiusRow {
    /// Guaranteed rows must decode everything; all rows must be sound.
    pub fn holds(&self) -> bool {
        self.tally.unsound == 0 && (!self.guaranteed || self.tally.correct == self.tally.trials)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RadiusSettings {
    pub messages: usize,
    pub value_samples: Option<usize>,
    pub seed: u64,
}

fn nonzero_symbols(field: &GaloisField, r: usize) -> Vec<Symbol> {
    let q = field.order() as u64;
    let total = q.pow(r as u32);
    (1..total)
        .map(|mut idx| {
            (0..r)
                .map(|_| {
                    let digit = (idx % q) as u32;
                    idx /= q;
                    Gf(digit)
                })
                .collect()
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Pattern count C(n, ε) · min(Q − 1, samples)^ε, checked against the limit.
pub fn pattern_count(code: &AgCode, epsilon: usize, value_samples: Option<usize>) -> Result<u128> {
    let big_q = code.params().big_q.unwrap_or(u128::MAX);
    let per_pos = match value_samples {
        Some(s) => (s as u128).min(big_q - 1),
        None => big_q - 1,
    };
    let count = per_pos
        .checked_pow(epsilon as u32)
        .and_then(|v| v.checked_mul(binomial(code.n(), epsilon)))
        .filter(|&c| c <= PATTERN_LIMIT);
    count.ok_or_else(|| {
        Error::InvalidPattern(format!(
            "epsilon = {epsilon} needs more than {PATTERN_LIMIT} error patterns; \
             set value_samples to sample error values"
        ))
    })
}

fn sample_rng(seed: u64, set_index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    rng.set_stream(set_index);
    rng
}

/// Runs every error pattern of weight ε against a fixed set of messages.
pub fn radius_check(
    code: &AgCode,
    config: DecoderConfig,
    epsilons: &[usize],
    settings: RadiusSettings,
) -> Result<Vec<RadiusRow>> {
    let decoder = Decoder::new(code, config)?;
    let field = code.field();
    let t = config.t();
    let margin = code.n() as i64 - code.genus() as i64;
    let messages: Vec<Codeword> = (0..settings.messages as u64)
        .map(|j| code.encode(&code.random_message(&mut channel::message_rng(settings.seed, j))))
        .collect::<Result<_>>()?;
    let offsets = nonzero_symbols(field, code.r());

    epsilons
        .iter()
        .map(|&eps| {
            if eps > code.n() {
                return Err(Error::InvalidPattern(format!(
                    "epsilon = {eps} exceeds the length n = {}",
                    code.n()
                )));
            }
            let patterns = pattern_count(code, eps, settings.value_samples)? as u64;
            let sets: Vec<Vec<usize>> = (0..code.n()).combinations(eps).collect();
            let tally = sets
                .par_iter()
                .enumerate()
                .map(|(set_index, positions)| {
                    let choices: Vec<Vec<Symbol>> = match settings.value_samples {
                        Some(s) if s < offsets.len() => {
                            let mut rng = sample_rng(settings.seed, set_index as u64);
                            positions
                                .iter()
                                .map(|_| offsets.choose_multiple(&mut rng, s).cloned().collect())
                                .collect()
                        }
                        _ => vec![offsets.clone(); eps],
                    };
                    let mut tally = Tally::default();
                    let value_sets: Vec<Vec<Symbol>> = if eps == 0 {
                        vec![Vec::new()]
                    } else {
                        choices.into_iter().multi_cartesian_product().collect()
                    };
                    for values in value_sets {
                        for (j, sent) in messages.iter().enumerate() {
                            let corrupted: Vec<Symbol> = positions
                                .iter()
                                .zip(&values)
                                .map(|(&i, off)| field.add_symbols(&sent[i], off))
                                .collect();
                            let received = channel::inject_errors(sent, positions, &corrupted)?;
                            tally.record(&run_trial(&decoder, j as u64, sent, &received)?);
                        }
                    }
                    Ok(tally)
                })
                .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
            Ok(RadiusRow {
                epsilon: eps,
                guaranteed: eps <= t
                    && code.slope() + Ratio::from_integer((eps + t) as i64) <= Ratio::from_integer(margin),
                patterns,
                tally,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationRow {
    pub p_err: f64,
    #[serde(flatten)]
    pub tally: Tally,
    /// Total symbol errors the channel introduced over all trials.
    pub errors_injected: u64,
}

/// Monte-Carlo sweep over the Q-ary symmetric channel. Trial `i` of setting
/// `s` uses global trial index `s · trials + i`, so results do not depend on
/// the thread count.
pub fn simulate(
    code: &AgCode,
    config: DecoderConfig,
    p_errs: &[f64],
    trials: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<Vec<SimulationRow>> {
    let decoder = Decoder::new(code, config)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidChannel(format!("cannot start worker threads: {e}")))?;
    p_errs
        .iter()
        .enumerate()
        .map(|(s, &p)| {
            let spec = ChannelSpec::new(p, seed)?;
            let base = (s * trials) as u64;
            let records: Vec<TrialRecord> = pool.install(|| {
                (0..trials as u64)
                    .into_par_iter()
                    .map(|i| {
                        let trial = base + i;
                        let message = code.random_message(&mut channel::message_rng(seed, trial));
                        let sent = code.encode(&message)?;
                        let received = channel::transmit(code.field(), &sent, &spec, trial);
                        run_trial(&decoder, trial, &sent, &received)
                    })
                    .collect::<Result<_>>()
            })?;
            let mut tally = Tally::default();
            let mut errors_injected = 0;
            for rec in &records {
                tally.record(rec);
                errors_injected += rec.errors as u64;
            }
            Ok(SimulationRow {
                p_err: p,
                tally,
                errors_injected,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceReport {
    pub n: usize,
    pub h: usize,
    pub q: u32,
    pub min_weight: usize,
    pub designed_bound: i64,
    pub holds: bool,
}

pub fn min_distance(code: &AgCode) -> Result<DistanceReport> {
    let min_weight = code.min_weight_bruteforce()?;
    let designed_bound = code.designed_distance();
    Ok(DistanceReport {
        n: code.n(),
        h: code.h(),
        q: code.field().order(),
        min_weight,
        designed_bound,
        holds: min_weight as i64 >= designed_bound,
    })
}

/// Header shared by every JSON report.
#[derive(Clone, Debug, Serialize)]
pub struct ReportHeader {
    pub tool: &'static str,
    pub version: &'static str,
    pub rng: &'static str,
    pub seed: u64,
    pub params: CodeParams,
    pub decoder_t: usize,
    pub aux_degree: u32,
    pub kernel_search: usize,
}

impl ReportHeader {
    pub fn new(code: &AgCode, config: DecoderConfig, seed: u64) -> Self {
        ReportHeader {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            rng: RNG_ALGORITHM,
            seed,
            params: code.params(),
            decoder_t: config.t(),
            aux_degree: config.aux_degree(),
            kernel_search: config.kernel_search(),
        }
    }
}

pub fn radius_csv(rows: &[RadiusRow]) -> String {
    let mut out = String::from(
        "epsilon,guaranteed,patterns,trials,correct,wrong,unsound,failure_s1,failure_s2,failure_verify\n",
    );
    for r in rows {
        let t = &r.tally;
        out += &format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.epsilon, r.guaranteed, r.patterns, t.trials, t.correct, t.wrong, t.unsound,
            t.failure_s1, t.failure_s2, t.failure_verify
        );
    }
    out
}

pub fn simulation_csv(rows: &[SimulationRow]) -> String {
    let mut out = String::from("p_err,trials,correct,wrong,failure,errors_injected\n");
    for r in rows {
        let t = &r.tally;
        out += &format!(
            "{},{},{},{},{},{}\n",
            r.p_err,
            t.trials,
            t.correct,
            t.wrong,
            t.failure(),
            r.errors_injected
        );
    }
    out
}
