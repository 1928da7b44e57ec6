// SPDX-License-Identifier: Apache-2.0

//! JSON documents read and written by the command-line tool.
//!
//! Field elements are little-endian coefficient lists (`[c_0, c_1, ...]`);
//! a bare integer is accepted on input as the packed index. Points are lists
//! of coordinates (`[x]` on the line, `[x, y]` on a Hermitian curve) or the
//! string `"inf"`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::bundle::{Bundle, Divisor};
use crate::code::{AgCode, Codeword};
use crate::curve::{Curve, CurveKind, Point};
use crate::decoder::{DecodeResult, DecoderConfig, ReceivedWord, Stage};
use crate::field::{GaloisField, Gf, Symbol};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Code(#[from] crate::error::Error),
}

pub type ConfigResult<T> = std::result::Result<T, ConfigError>;

fn invalid<T>(msg: impl Into<String>) -> ConfigResult<T> {
    Err(ConfigError::Invalid(msg.into()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "backend", deny_unknown_fields)]
pub enum CurveConfig {
    #[serde(rename = "p1")]
    ProjectiveLine { p: u64, m: u32 },
    #[serde(rename = "hermitian")]
    Hermitian { q0: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRepr {
    Coeffs(Vec<u32>),
    Index(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRepr {
    Named(String),
    Coords(Vec<ElementRepr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorConfig {
    pub m_inf: u32,
    #[serde(default)]
    pub minus_points: Vec<PointRepr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointsConfig {
    Named(String),
    List(Vec<PointRepr>),
}

impl Default for PointsConfig {
    fn default() -> Self {
        PointsConfig::Named("all-affine".into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TSetting {
    Fixed(usize),
    Named(String),
}

impl Default for TSetting {
    fn default() -> Self {
        TSetting::Named("auto".into())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoderSection {
    #[serde(default)]
    pub t: TSetting,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_search: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_err: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

/// One experiment: a code, a decoder and what to run against them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub v: u32,
    pub curve: CurveConfig,
    pub bundle: Vec<DivisorConfig>,
    #[serde(default)]
    pub points: PointsConfig,
    #[serde(default)]
    pub decoder: DecoderSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    /// Messages per error pattern (radius check) or trials per setting (simulation).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Sampled error values per position; exhaustive when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> ConfigResult<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        if cfg.v != SCHEMA_VERSION {
            return invalid(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                cfg.v
            ));
        }
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> ConfigResult<Self> {
        Self::from_json(&read(path)?)
    }

    pub fn build_curve(&self) -> ConfigResult<Curve> {
        Ok(match self.curve {
            CurveConfig::ProjectiveLine { p, m } => {
                Curve::projective_line(std::sync::Arc::new(GaloisField::new(p, m)?))
            }
            CurveConfig::Hermitian { q0 } => Curve::hermitian(q0)?,
        })
    }

    pub fn build_code(&self) -> ConfigResult<AgCode> {
        let curve = self.build_curve()?;
        let divisors = self
            .bundle
            .iter()
            .map(|d| {
                let minus = d
                    .minus_points
                    .iter()
                    .map(|p| parse_point(&curve, p))
                    .collect::<ConfigResult<Vec<_>>>()?;
                Ok(Divisor::new(d.m_inf, minus))
            })
            .collect::<ConfigResult<Vec<_>>>()?;
        let bundle = Bundle::new(&curve, divisors)?;
        let points = match &self.points {
            PointsConfig::Named(name) if name == "all-affine" => {
                let support = bundle.support_points();
                curve
                    .affine_points()
                    .into_iter()
                    .filter(|p| !support.contains(p))
                    .collect()
            }
            PointsConfig::Named(other) => {
                return invalid(format!(
                    "points must be \"all-affine\" or a list, got \"{other}\""
                ))
            }
            PointsConfig::List(list) => list
                .iter()
                .map(|p| parse_point(&curve, p))
                .collect::<ConfigResult<Vec<_>>>()?,
        };
        Ok(AgCode::new(&curve, points, bundle)?)
    }

    pub fn decoder_config(&self, code: &AgCode) -> ConfigResult<DecoderConfig> {
        let cfg = match &self.decoder.t {
            TSetting::Fixed(t) => DecoderConfig::new(code, *t)?,
            TSetting::Named(s) if s == "auto" => DecoderConfig::auto(code)?,
            TSetting::Named(s) => return invalid(format!("decoder t must be an integer or \"auto\", got \"{s}\"")),
        };
        Ok(match self.decoder.kernel_search {
            Some(limit) => cfg.with_kernel_search(limit),
            None => cfg,
        })
    }
}

pub fn read(path: &Path) -> ConfigResult<String> {
    std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_element(field: &GaloisField, e: &ElementRepr) -> ConfigResult<Gf> {
    Ok(match e {
        ElementRepr::Coeffs(c) => field.from_coeffs(c)?,
        ElementRepr::Index(i) => field.from_index(*i)?,
    })
}

pub fn element_json(field: &GaloisField, e: Gf) -> Value {
    Value::from(field.coeffs(e))
}

pub fn parse_point(curve: &Curve, p: &PointRepr) -> ConfigResult<Point> {
    let f = curve.field();
    let point = match (curve.kind(), p) {
        (_, PointRepr::Named(s)) if s == "inf" => Point::Infinity,
        (_, PointRepr::Named(s)) => return invalid(format!("unknown point name \"{s}\"")),
        (CurveKind::ProjectiveLine, PointRepr::Coords(c)) if c.len() == 1 => {
            Point::line(parse_element(f, &c[0])?)
        }
        (CurveKind::Hermitian { .. }, PointRepr::Coords(c)) if c.len() == 2 => {
            Point::plane(parse_element(f, &c[0])?, parse_element(f, &c[1])?)
        }
        (_, PointRepr::Coords(c)) => {
            return invalid(format!("point with {} coordinates does not fit the curve", c.len()))
        }
    };
    if !curve.contains(&point) {
        return Err(crate::error::Error::PointNotOnCurve(point.to_string()).into());
    }
    Ok(point)
}

pub fn point_json(curve: &Curve, p: &Point) -> Value {
    let f = curve.field();
    match p {
        Point::Infinity => Value::from("inf"),
        Point::Affine { x, y: None } => Value::from(vec![element_json(f, *x)]),
        Point::Affine { x, y: Some(y) } => Value::from(vec![element_json(f, *x), element_json(f, *y)]),
    }
}

fn symbol_json(field: &GaloisField, s: &[Gf]) -> Value {
    Value::from(s.iter().map(|&x| element_json(field, x)).collect::<Vec<_>>())
}

pub fn word_json(field: &GaloisField, w: &[Symbol]) -> Value {
    Value::from(w.iter().map(|s| symbol_json(field, s)).collect::<Vec<_>>())
}

pub fn message_json(field: &GaloisField, m: &[Gf]) -> Value {
    symbol_json(field, m)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MessageFile {
    pub message: Vec<ElementRepr>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceivedFile {
    pub received: Vec<Vec<ElementRepr>>,
    #[serde(default)]
    pub erasures: Option<Vec<bool>>,
}

impl MessageFile {
    pub fn parse(&self, code: &AgCode) -> ConfigResult<Vec<Gf>> {
        if self.message.len() != code.h() {
            return invalid(format!(
                "message has {} entries, the code needs h = {}",
                self.message.len(),
                code.h()
            ));
        }
        self.message.iter().map(|e| parse_element(code.field(), e)).collect()
    }
}

impl ReceivedFile {
    pub fn parse(&self, code: &AgCode) -> ConfigResult<ReceivedWord> {
        if self.received.len() != code.n() {
            return invalid(format!(
                "received word has {} symbols, the code has n = {}",
                self.received.len(),
                code.n()
            ));
        }
        let symbols = self
            .received
            .iter()
            .map(|s| {
                if s.len() != code.r() {
                    return invalid(format!("symbol of length {}, expected r = {}", s.len(), code.r()));
                }
                s.iter().map(|e| parse_element(code.field(), e)).collect()
            })
            .collect::<ConfigResult<Vec<Symbol>>>()?;
        let erased = match &self.erasures {
            Some(e) if e.len() != code.n() => {
                return invalid(format!("{} erasure flags for n = {}", e.len(), code.n()))
            }
            Some(e) => e.clone(),
            None => vec![false; code.n()],
        };
        Ok(ReceivedWord::with_erasures(symbols, erased))
    }
}

pub fn codeword_document(field: &GaloisField, word: &Codeword) -> Value {
    serde_json::json!({ "codeword": word_json(field, word) })
}

pub fn decode_document(field: &GaloisField, result: &DecodeResult) -> Value {
    match result {
        DecodeResult::Decoded { message, codeword } => serde_json::json!({
            "status": "decoded",
            "message": message_json(field, message),
            "codeword": word_json(field, codeword),
        }),
        DecodeResult::Failure(stage) => serde_json::json!({
            "status": "failure",
            "stage": match stage {
                Stage::S1 => "S1",
                Stage::S2 => "S2",
                Stage::Verify => "Verify",
            },
        }),
    }
}
