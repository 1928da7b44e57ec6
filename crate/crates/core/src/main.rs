// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use bundle_codes::config::{
    self, codeword_document, decode_document, ConfigError, ConfigResult, ExperimentConfig, Format,
    MessageFile, ReceivedFile,
};
use bundle_codes::decoder::Decoder;
use bundle_codes::experiment::{self, RadiusRow, RadiusSettings, ReportHeader, SimulationRow};

/// Build, exercise and verify codes from direct sums of line bundles.
#[derive(Debug, Parser)]
#[command(name = "bundle-codes", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Experiment config (JSON, schema version 1).
    #[arg(long)]
    config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Master seed, overriding the config.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the code parameters.
    MakeCode(Common),
    /// Encode a message file.
    Encode {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: PathBuf,
    },
    /// Decode a received-word file.
    Decode {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: PathBuf,
    },
    /// Enumerate error patterns up to the configured weights.
    RadiusCheck(Common),
    /// Monte-Carlo sweep over the symmetric channel.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Worker threads; the report does not depend on this.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Brute-force minimum distance against the designed bound.
    MinDistance(Common),
}

enum Outcome {
    Ok,
    Violated(String),
}

struct Job<'a> {
    cfg: ExperimentConfig,
    common: &'a Common,
}

impl Job<'_> {
    fn load(common: &Common) -> ConfigResult<Job<'_>> {
        Ok(Job {
            cfg: ExperimentConfig::from_path(&common.config)?,
            common,
        })
    }

    fn seed(&self) -> u64 {
        self.common.seed.or(self.cfg.seed).unwrap_or(0)
    }

    fn format(&self) -> Format {
        self.common
            .format
            .or(self.cfg.output.as_ref().and_then(|o| o.format))
            .unwrap_or(Format::Json)
    }

    fn emit(&self, text: &str) -> ConfigResult<()> {
        let path = self
            .common
            .out
            .clone()
            .or_else(|| self.cfg.output.as_ref().and_then(|o| o.path.as_ref().map(PathBuf::from)));
        write_output(path.as_deref(), text)
    }

    fn emit_json<T: Serialize>(&self, value: &T) -> ConfigResult<()> {
        self.emit(&(serde_json::to_string_pretty(value)? + "\n"))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> ConfigResult<()> {
    let io = |source, p: &Path| ConfigError::Io {
        path: p.display().to_string(),
        source,
    };
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io(e, p)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| io(e, Path::new("<stdout>"))),
    }
}

#[derive(Serialize)]
struct Report<'a, R: Serialize> {
    #[serde(flatten)]
    header: ReportHeader,
    rows: &'a [R],
    config: &'a ExperimentConfig,
}

fn radius_check(job: &Job) -> ConfigResult<Outcome> {
    let code = job.cfg.build_code()?;
    let dec = job.cfg.decoder_config(&code)?;
    let epsilons = match job.cfg.sweep.as_ref().and_then(|s| s.epsilons.clone()) {
        Some(e) => e,
        None => (0..=dec.t()).collect(),
    };
    let settings = RadiusSettings {
        messages: job.cfg.trials.unwrap_or(1),
        value_samples: job.cfg.value_samples,
        seed: job.seed(),
    };
    let rows = experiment::radius_check(&code, dec, &epsilons, settings)?;
    match job.format() {
        Format::Csv => job.emit(&experiment::radius_csv(&rows))?,
        Format::Json => job.emit_json(&Report::<RadiusRow> {
            header: ReportHeader::new(&code, dec, job.seed()),
            rows: &rows,
            config: &job.cfg,
        })?,
    }
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| !r.holds())
        .map(|r| r.epsilon.to_string())
        .collect();
    Ok(if bad.is_empty() {
        Outcome::Ok
    } else {
        Outcome::Violated(format!(
            "decoding guarantee violated at epsilon = {}",
            bad.join(", ")
        ))
    })
}

fn simulate(job: &Job, threads: Option<usize>) -> ConfigResult<Outcome> {
    let code = job.cfg.build_code()?;
    let dec = job.cfg.decoder_config(&code)?;
    let p_errs = job
        .cfg
        .sweep
        .as_ref()
        .and_then(|s| s.p_err.clone())
        .ok_or_else(|| ConfigError::Invalid("simulate needs sweep.p_err".into()))?;
    if threads == Some(0) {
        return Err(ConfigError::Invalid("--threads must be at least 1".into()));
    }
    let trials = job.cfg.trials.unwrap_or(1000);
    let rows = experiment::simulate(&code, dec, &p_errs, trials, job.seed(), threads)?;
    match job.format() {
        Format::Csv => job.emit(&experiment::simulation_csv(&rows))?,
        Format::Json => job.emit_json(&Report::<SimulationRow> {
            header: ReportHeader::new(&code, dec, job.seed()),
            rows: &rows,
            config: &job.cfg,
        })?,
    }
    let unsound: u64 = rows.iter().map(|r| r.tally.unsound).sum();
    Ok(if unsound == 0 {
        Outcome::Ok
    } else {
        Outcome::Violated(format!("{unsound} decoded words farther than t from the received word"))
    })
}

fn min_distance(job: &Job) -> ConfigResult<Outcome> {
    let code = job.cfg.build_code()?;
    let report = experiment::min_distance(&code)?;
    match job.format() {
        Format::Csv => job.emit(&format!(
            "n,h,q,min_weight,designed_bound\n{},{},{},{},{}\n",
            report.n, report.h, report.q, report.min_weight, report.designed_bound
        ))?,
        Format::Json => job.emit_json(&report)?,
    }
    Ok(if report.holds {
        Outcome::Ok
    } else {
        Outcome::Violated(format!(
            "minimum weight {} below the designed distance {}",
            report.min_weight, report.designed_bound
        ))
    })
}

fn run(cli: Cli) -> ConfigResult<Outcome> {
    match &cli.command {
        Command::MakeCode(common) => {
            let job = Job::load(common)?;
            let code = job.cfg.build_code()?;
            job.emit_json(&code.params())?;
        }
        Command::Encode { common, input } => {
            let job = Job::load(common)?;
            let code = job.cfg.build_code()?;
            let file: MessageFile = serde_json::from_str(&config::read(input)?)?;
            let word = code.encode(&file.parse(&code)?)?;
            job.emit_json(&codeword_document(code.field(), &word))?;
        }
        Command::Decode { common, input } => {
            let job = Job::load(common)?;
            let code = job.cfg.build_code()?;
            let dec = job.cfg.decoder_config(&code)?;
            let file: ReceivedFile = serde_json::from_str(&config::read(input)?)?;
            let result = Decoder::new(&code, dec)?.decode(&file.parse(&code)?)?;
            let doc: Value = decode_document(code.field(), &result);
            job.emit_json(&doc)?;
        }
        Command::RadiusCheck(common) => return radius_check(&Job::load(common)?),
        Command::Simulate { common, threads } => return simulate(&Job::load(common)?, *threads),
        Command::MinDistance(common) => return min_distance(&Job::load(common)?),
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violated(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
