//! Verification campaigns over seeded parameter points, and their reports.

pub mod config;
pub mod report;
pub mod suites;

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use qagt_core::dvir::gaiotto::NormPrefactor;
use qagt_core::sampling::Sampler;

use config::{CampaignConfig, ConfigError, Format, Suite};
use report::{Record, Report};

/// Attempts per (suite, point) before a non-generic draw becomes an error.
pub const MAX_ATTEMPTS: u64 = 8;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{suite} at point {index}: {source}")]
    Check {
        suite: Suite,
        index: usize,
        source: qagt_core::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),
}

/// Seed for point `index`, attempt `attempt`; the same for every suite, so
/// suites share their points unless one of them had to resample.
pub fn point_seed(seed: u64, index: usize, attempt: u64) -> u64 {
    let mut z = seed
        .wrapping_add((index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(attempt.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn with_retries<T>(
    config: &CampaignConfig,
    suite: Suite,
    index: usize,
    mut f: impl FnMut(&mut Sampler) -> qagt_core::Result<T>,
) -> Result<T, RunError> {
    let mut last = None;
    for attempt in 0..MAX_ATTEMPTS {
        let mut sampler = Sampler::new(point_seed(config.rng_seed, index, attempt));
        match f(&mut sampler) {
            Ok(v) => return Ok(v),
            Err(e) if e.is_non_generic() => {
                log::warn!("{suite} point {index} attempt {attempt}: {e}; resampling");
                last = Some(e);
            }
            Err(e) => return Err(RunError::Check { suite, index, source: e }),
        }
    }
    Err(RunError::Check {
        suite,
        index,
        source: last.unwrap_or_else(|| qagt_core::Error::Internal("no attempts made".into())),
    })
}

fn stamp(mut records: Vec<Record>, start: Instant, timings: bool) -> Vec<Record> {
    if timings {
        let ms = start.elapsed().as_millis() as u64;
        for r in &mut records {
            r.runtime_ms = Some(ms);
        }
    }
    records
}

struct SuiteOutput {
    records: Vec<Record>,
    normalization: Option<String>,
}

fn run_suite(config: &CampaignConfig, suite: Suite) -> Result<SuiteOutput, RunError> {
    let level = config.max_level;
    let indices: Vec<usize> = (0..config.num_param_points).collect();
    let per_point = |f: fn(usize, usize, &mut Sampler) -> qagt_core::Result<Vec<Record>>| {
        indices
            .par_iter()
            .map(|&i| {
                let start = Instant::now();
                let records = with_retries(config, suite, i, |s| f(i, level, s))?;
                Ok(stamp(records, start, config.timings))
            })
            .collect::<Result<Vec<_>, RunError>>()
            .map(|v| v.into_iter().flatten().collect::<Vec<_>>())
    };
    let mut normalization = None;
    let records = match suite {
        Suite::Recursion => per_point(suites::recursion)?,
        Suite::Duality => per_point(suites::duality)?,
        Suite::Poles => per_point(suites::poles)?,
        Suite::Residues => per_point(suites::residues)?,
        Suite::Integral => per_point(suites::integral)?,
        Suite::Gaiotto => per_point(suites::gaiotto)?,
        Suite::Kac => {
            let results = indices
                .par_iter()
                .map(|&i| {
                    let start = Instant::now();
                    let (records, constants) = with_retries(config, suite, i, |s| suites::kac(i, level, s))?;
                    Ok((stamp(records, start, config.timings), (i, constants)))
                })
                .collect::<Result<Vec<_>, RunError>>()?;
            let constants: Vec<_> = results.iter().map(|(_, c)| c.clone()).collect();
            let mut records: Vec<Record> = results.into_iter().flat_map(|(r, _)| r).collect();
            records.extend(suites::kac_constant_diagnostics(&constants));
            records
        }
        Suite::Agt => {
            let (prefactor, record) = with_retries(config, suite, 0, |s| suites::agt_normalization(level.max(1), s))?;
            normalization = Some(prefactor.map(|p| p.label()).unwrap_or("undetermined").to_string());
            let frozen = prefactor.unwrap_or(NormPrefactor::One);
            let mut records = indices
                .par_iter()
                .map(|&i| {
                    let start = Instant::now();
                    let records = with_retries(config, suite, i, |s| suites::agt(i, level, frozen, s))?;
                    Ok(stamp(records, start, config.timings))
                })
                .collect::<Result<Vec<_>, RunError>>()?
                .into_iter()
                .flatten()
                .collect::<Vec<_>>();
            records.push(record);
            records
        }
    };
    Ok(SuiteOutput { records, normalization })
}

/// Runs every selected suite; suites and points execute concurrently.
pub fn run(config: &CampaignConfig) -> Result<Report, RunError> {
    let outputs = config
        .suites
        .par_iter()
        .map(|&suite| run_suite(config, suite))
        .collect::<Result<Vec<_>, RunError>>()?;
    let normalization = outputs.iter().find_map(|o| o.normalization.clone());
    let records = outputs.into_iter().flat_map(|o| o.records).collect();
    Ok(Report::new(config, records, normalization))
}

pub fn emit(report: &Report, format: Format, path: &Path) -> Result<(), RunError> {
    let file = BufWriter::new(File::create(path)?);
    match format {
        Format::Json => report::write_json(report, file)?,
        Format::Csv => report::write_csv(report, file)?,
    }
    Ok(())
}

pub fn load(path: &Path) -> Result<Report, RunError> {
    let file = File::open(path)?;
    Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
}

/// Caps the worker pool from `QAGT_THREADS` when it is set.
pub fn configure_threads() -> Result<(), ConfigError> {
    let Ok(raw) = std::env::var("QAGT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ConfigError(format!("QAGT_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| ConfigError(format!("thread pool: {e}")))
}
