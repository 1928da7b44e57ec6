// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Every criterion runs, prints one PASS/FAIL line, and the
//! binary exits nonzero if any criterion failed.

use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::Instant;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use bundle_codes::channel::{transmit, ChannelSpec};
use bundle_codes::code::symbol_distance;
use bundle_codes::experiment::{radius_check, RadiusRow, RadiusSettings};
use bundle_codes::{
    inject_errors, AgCode, Bundle, Curve, DecodeResult, Decoder, DecoderConfig, Divisor, GaloisField,
    Point, ReceivedWord, Symbol,
};

// Pinned tolerances.
const CHANNEL_SYMBOLS: usize = 10_000;
const CHANNEL_SIGMAS: f64 = 3.0;
const CHI_SQUARE_ALPHA: f64 = 0.001;
const SOUNDNESS_TRIALS: usize = 10_000;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn line(p: u64, m: u32) -> Curve {
    Curve::projective_line(Arc::new(GaloisField::new(p, m).unwrap()))
}

fn one_point_code(curve: &Curve, degrees: &[u32]) -> AgCode {
    let bundle = Bundle::new(curve, degrees.iter().map(|&m| Divisor::one_point(m)).collect()).unwrap();
    AgCode::new(curve, curve.affine_points(), bundle).unwrap()
}

fn herm_point(curve: &Curve, x: u32, y: u32) -> Point {
    let f = curve.field();
    Point::plane(f.from_index(x).unwrap(), f.from_index(y).unwrap())
}

/// Hermitian q0 = 2 with summands 4P∞ − (0,0) and 4P∞ − (0,1).
fn distinct_code() -> AgCode {
    let curve = Curve::hermitian(2).unwrap();
    let (a, b) = (herm_point(&curve, 0, 0), herm_point(&curve, 0, 1));
    let bundle = Bundle::new(
        &curve,
        vec![Divisor::new(4, vec![a]), Divisor::new(4, vec![b])],
    )
    .unwrap();
    let points = curve.affine_points().into_iter().filter(|p| *p != a && *p != b).collect();
    AgCode::new(&curve, points, bundle).unwrap()
}

fn rows_summary(rows: &[RadiusRow]) -> String {
    rows.iter()
        .map(|r| {
            format!(
                "eps={} trials={} correct={} wrong={} unsound={} failure={}",
                r.epsilon,
                r.tally.trials,
                r.tally.correct,
                r.tally.wrong,
                r.tally.unsound,
                r.tally.failure()
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn all_correct(rows: &[RadiusRow]) -> bool {
    rows.iter().all(|r| r.tally.correct == r.tally.trials)
}

fn verdict(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_1() -> Check {
    let code = one_point_code(&line(7, 1), &[3]);
    let cfg = DecoderConfig::new(&code, 2).map_err(|e| e.to_string())?;
    let settings = RadiusSettings { messages: 20, value_samples: None, seed: 1 };
    let rows = radius_check(&code, cfg, &[1, 2], settings).map_err(|e| e.to_string())?;
    let patterns: u64 = rows.iter().map(|r| r.patterns).sum();
    let detail = format!("{patterns} patterns x 20 messages; {}", rows_summary(&rows));
    verdict(patterns == 798 && all_correct(&rows), detail)
}

fn criterion_2() -> Check {
    let code = one_point_code(&Curve::hermitian(2).unwrap(), &[3, 3]);
    let cfg = DecoderConfig::new(&code, 2).map_err(|e| e.to_string())?;
    let settings = RadiusSettings { messages: 10, value_samples: None, seed: 2 };
    let rows = radius_check(&code, cfg, &[1, 2], settings).map_err(|e| e.to_string())?;
    let patterns: u64 = rows.iter().map(|r| r.patterns).sum();
    let detail = format!("{patterns} patterns x 10 messages; {}", rows_summary(&rows));
    verdict(patterns == 6420 && code.n() == 8 && all_correct(&rows), detail)
}

fn criterion_3() -> Check {
    let code = distinct_code();
    let cfg = DecoderConfig::auto(&code).map_err(|e| e.to_string())?;
    let t = cfg.t();
    let settings = RadiusSettings { messages: 10, value_samples: None, seed: 3 };
    let inside: Vec<usize> = (0..=t).collect();
    let rows = radius_check(&code, cfg, &inside, settings).map_err(|e| e.to_string())?;
    let beyond = radius_check(&code, cfg, &[t + 1], settings).map_err(|e| e.to_string())?;
    let detail = format!(
        "n={} t={t}; {}; {}",
        code.n(),
        rows_summary(&rows),
        rows_summary(&beyond)
    );
    let ok = code.n() == 6 && t >= 1 && all_correct(&rows) && beyond[0].tally.unsound == 0;
    verdict(ok, detail)
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for curve in [line(7, 1), Curve::hermitian(2).unwrap(), Curve::hermitian(3).unwrap()] {
        let g = curve.genus() as i64;
        let affine = curve.affine_points();
        for r in 1..=3usize {
            for m in (2 * g - 1).max(0)..=20 {
                let m = m as u32;
                let copies = vec![Divisor::one_point(m); r];
                // Same degree, different line bundles: (m + i)P∞ − (i points).
                let shifted = (0..r)
                    .map(|i| Divisor::new(m + i as u32, affine[..i].to_vec()))
                    .collect();
                for summands in [copies, shifted] {
                    let bundle = Bundle::new(&curve, summands).map_err(|e| e.to_string())?;
                    let h = bundle.h0_basis().map_err(|e| e.to_string())?.len() as i64;
                    let expected = bundle.degree() + r as i64 * (1 - g);
                    checked += 1;
                    if h != expected {
                        mismatches.push(format!("g={g} r={r} m={m}: {h} != {expected}"));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let detail = format!("{checked} bundles, {} mismatches, {elapsed:.2}s {mismatches:?}", mismatches.len());
    verdict(mismatches.is_empty() && elapsed < 1.0, detail)
}

/// Codes small enough for enumeration (q^h ≤ 2^16), with summand degrees > 2g − 2.
fn instance_matrix() -> Vec<(String, AgCode)> {
    let mut out = Vec::new();
    let p1_7 = line(7, 1);
    for m in 0..=4 {
        out.push((format!("P1/GF(7) {m}P"), one_point_code(&p1_7, &[m])));
    }
    out.push(("P1/GF(8) 2P".into(), one_point_code(&line(2, 3), &[2])));
    out.push(("P1/GF(5) 1P+1P".into(), one_point_code(&line(5, 1), &[1, 1])));
    let p1_5 = line(5, 1);
    let a = p1_5.affine_points()[0];
    let mixed = Bundle::new(&p1_5, vec![Divisor::one_point(1), Divisor::new(2, vec![a])]).unwrap();
    let pts = p1_5.affine_points().into_iter().filter(|p| *p != a).collect();
    out.push(("P1/GF(5) 1P+(2P-a)".into(), AgCode::new(&p1_5, pts, mixed).unwrap()));
    let herm = Curve::hermitian(2).unwrap();
    for m in 1..=7 {
        out.push((format!("H2 {m}P"), one_point_code(&herm, &[m])));
    }
    out.push(("H2 3P+3P".into(), one_point_code(&herm, &[3, 3])));
    out.push(("H2 (4P-a)+(4P-b)".into(), distinct_code()));
    out
}

fn criterion_5() -> Check {
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, code) in instance_matrix() {
        let w = code.min_weight_bruteforce().map_err(|e| format!("{name}: {e}"))? as i64;
        let bound = code.designed_distance();
        let good = w >= bound && (code.genus() > 0 || w == bound);
        ok &= good;
        lines.push(format!("{name}: d={w} bound={bound}{}", if good { "" } else { " !" }));
    }
    verdict(ok, lines.join("; "))
}

fn criterion_6() -> Check {
    let mut instances = instance_matrix();
    let h3 = Curve::hermitian(3).unwrap();
    instances.push(("H3 10P+10P+10P".into(), one_point_code(&h3, &[10, 10, 10])));
    instances.push(("P1/GF(16) 5P+5P".into(), one_point_code(&line(2, 4), &[5, 5])));
    let mut ok = true;
    let mut lines = Vec::new();
    for (name, code) in &instances {
        let rank = code.generator().rank(code.field());
        let k = code.slope() + Ratio::from_integer(1 - code.genus() as i64);
        let good = rank == code.h() && code.dimension() == k && Ratio::from_integer(code.h() as i64) == k * code.r() as i64;
        ok &= good;
        if !good {
            lines.push(format!("{name}: rank={rank} h={} k={}", code.h(), code.dimension()));
        }
    }
    verdict(ok, format!("{} instances {}", instances.len(), lines.join("; ")))
}

fn criterion_7() -> Check {
    let curve = line(7, 1);
    let f = curve.field();
    let points: Vec<Point> = (0..3).map(|i| Point::line(f.from_index(i).unwrap())).collect();
    let bundle = Bundle::new(&curve, vec![Divisor::one_point(0)]).unwrap();
    let code = AgCode::new(&curve, points, bundle).map_err(|e| e.to_string())?;
    let t = code.guaranteed_radius() as usize;
    let decoder = Decoder::new(&code, DecoderConfig::new(&code, t).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let codewords: Vec<Vec<Symbol>> = f
        .elements()
        .map(|c| code.encode(&[c]).unwrap())
        .collect();
    let mut disagreements = 0;
    let mut inside = 0;
    for idx in 0..343u32 {
        let word: Vec<Symbol> = [idx % 7, idx / 7 % 7, idx / 49]
            .iter()
            .map(|&v| vec![f.from_index(v).unwrap()])
            .collect();
        let near: Vec<&Vec<Symbol>> = codewords
            .iter()
            .filter(|c| symbol_distance(c, &word, None) <= t)
            .collect();
        let expected = (near.len() == 1).then(|| near[0].clone());
        inside += expected.is_some() as usize;
        let got = match decoder.decode(&ReceivedWord::new(word)).map_err(|e| e.to_string())? {
            DecodeResult::Decoded { codeword, .. } => Some(codeword),
            DecodeResult::Failure(_) => None,
        };
        disagreements += (got != expected) as usize;
    }
    verdict(
        disagreements == 0 && inside == 7 * 19,
        format!("t={t}; {inside} of 343 words inside the radius; {disagreements} disagreements"),
    )
}

fn criterion_8() -> Check {
    let code = one_point_code(&Curve::hermitian(2).unwrap(), &[3, 3]);
    let cfg = DecoderConfig::new(&code, 2).map_err(|e| e.to_string())?;
    let decoder = Decoder::new(&code, cfg).map_err(|e| e.to_string())?;
    let f = code.field();
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let mut lines = Vec::new();
    let mut ok = true;
    for eps in [cfg.t() + 1, cfg.t() + 2] {
        let (mut unsound, mut wrong, mut failures) = (0, 0, 0);
        for _ in 0..SOUNDNESS_TRIALS {
            let sent = code.encode(&code.random_message(&mut rng)).unwrap();
            let positions = rand::seq::index::sample(&mut rng, code.n(), eps).into_vec();
            let values: Vec<Symbol> = positions
                .iter()
                .map(|&i| bundle_codes::channel::random_other_symbol(f, &sent[i], &mut rng))
                .collect();
            let received = inject_errors(&sent, &positions, &values).unwrap();
            match decoder.decode(&received).map_err(|e| e.to_string())? {
                DecodeResult::Decoded { codeword, .. } => {
                    if symbol_distance(&codeword, &received.symbols, None) > cfg.t() {
                        unsound += 1;
                    }
                    wrong += (codeword != sent) as usize;
                }
                DecodeResult::Failure(_) => failures += 1,
            }
        }
        ok &= unsound == 0;
        lines.push(format!("eps={eps}: unsound={unsound} miscorrected={wrong} failures={failures}"));
    }
    verdict(ok, lines.join("; "))
}

fn criterion_9() -> Check {
    let field = GaloisField::new(2, 2).unwrap();
    let r = 2;
    let p = 0.3;
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let word: Vec<Symbol> = (0..CHANNEL_SYMBOLS)
        .map(|_| (0..r).map(|_| field.random(&mut rng)).collect())
        .collect();
    let received = transmit(&field, &word, &ChannelSpec::new(p, 9).unwrap(), 0);
    let q = field.order() as usize;
    let big_q = q * q;
    // Substitutions are counted by their offset from the sent symbol, which
    // is uniform over the Q − 1 nonzero offsets exactly when the new symbol is
    // uniform over the Q − 1 other values.
    let mut counts = vec![0u64; big_q];
    let mut substituted = 0u64;
    for (s, t) in word.iter().zip(&received.symbols) {
        if s != t {
            substituted += 1;
            let off = field.add_symbols(t, &s.iter().map(|&x| field.neg(x)).collect::<Vec<_>>());
            counts[off[0].index() as usize + q * off[1].index() as usize] += 1;
        }
    }
    let n = CHANNEL_SYMBOLS as f64;
    let sigma = (n * p * (1.0 - p)).sqrt();
    let rate_ok = (substituted as f64 - n * p).abs() <= CHANNEL_SIGMAS * sigma;
    let expected = substituted as f64 / (big_q - 1) as f64;
    let chi2: f64 = counts[1..].iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let p_value = 1.0 - ChiSquared::new((big_q - 2) as f64).unwrap().cdf(chi2);
    verdict(
        rate_ok && counts[0] == 0 && p_value > CHI_SQUARE_ALPHA,
        format!(
            "{substituted} substitutions (expected {:.0} +/- {:.1}); chi2={chi2:.2} p={p_value:.4}",
            n * p,
            CHANNEL_SIGMAS * sigma
        ),
    )
}

fn criterion_10() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = dir.path().join("sim.json");
    std::fs::write(
        &config,
        r#"{"v": 1, "curve": {"backend": "hermitian", "q0": 2},
            "bundle": [{"m_inf": 3}, {"m_inf": 3}], "decoder": {"t": "auto"},
            "sweep": {"p_err": [0.0, 0.1, 0.25, 0.4]}, "trials": 300, "seed": 10}"#,
    )
    .map_err(|e| e.to_string())?;
    let mut reports = Vec::new();
    for format in ["csv", "json"] {
        for threads in ["1", "3", "8"] {
            let out = dir.path().join(format!("{format}-{threads}.out"));
            let status = Command::new(env!("CARGO_BIN_EXE_bundle-codes"))
                .args(["simulate", "--config"])
                .arg(&config)
                .args(["--format", format, "--threads", threads, "--out"])
                .arg(&out)
                .status()
                .map_err(|e| e.to_string())?;
            if !status.success() {
                return Err(format!("simulate exited with {status}"));
            }
            reports.push((format, std::fs::read(&out).map_err(|e| e.to_string())?));
        }
    }
    let identical = reports.chunks(3).all(|c| c.iter().all(|(_, b)| *b == c[0].1));
    verdict(
        identical && !reports[0].1.is_empty(),
        format!("csv and json reports at 1, 3 and 8 threads {}", if identical { "identical" } else { "differ" }),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("guaranteed radius, genus 0, [7,4] t=2", criterion_1),
        ("guaranteed radius, Hermitian interleaved t=2", criterion_2),
        ("distinct line bundles, radius and soundness", criterion_3),
        ("h0 dimension e + r(1-g)", criterion_4),
        ("minimum distance >= n - floor(mu)", criterion_5),
        ("injectivity and k = mu + 1 - g", criterion_6),
        ("nearest-codeword oracle on [3,1]", criterion_7),
        ("soundness at t+1 and t+2", criterion_8),
        ("channel substitution rate and uniformity", criterion_9),
        ("simulation reports independent of threads", criterion_10),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| Err(format!("panicked: {:?}", e.downcast_ref::<String>())));
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag} [{secs:.1}s] {name}: {detail}", i + 1);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
