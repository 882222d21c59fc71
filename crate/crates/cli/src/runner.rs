//! Parallel experiment driver and its output formats.
//!
//! Records are produced in index-ordered chunks on a rayon pool and
//! streamed to the sink, so memory stays bounded by the chunk size plus the
//! compact sample kept for pairwise statistics. Output does not depend on
//! the number of workers.

use std::io::{self, Read, Write};

use rayon::prelude::*;
use serde::Serialize;

use cenmcc_core::comparison::{self, BootstrapCi, PairCounts};
use cenmcc_core::experiment::{
    self, ExperimentConfig, ExperimentRecord, ExperimentSummary, PairPlan, SummaryAccumulator,
};
use cenmcc_core::{rng, ConfigError};

/// Header of the records CSV.
pub const RECORD_HEADER: &str = "index,n,acc,mcc,cen,k_cen,tmcc,ratio";

const CHUNK: u64 = 1 << 14;
const PAIR_ROWS_PER_TASK: usize = 64;

/// Failure of a run.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    /// Invalid configuration.
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    /// Writing records failed.
    #[error("writing records: {0}")]
    Io(#[from] io::Error),
}

/// Output selector for [`emit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    /// Header plus one line per record.
    Csv,
    /// Single JSON document with the summary and the echoed configuration.
    JsonSummary,
}

/// Summary document written next to the records.
#[derive(Debug, Serialize)]
pub struct SummaryDocument<'a> {
    /// Aggregates.
    #[serde(flatten)]
    pub summary: &'a ExperimentSummary,
    /// Random generator identifier.
    pub rng: &'static str,
    /// Configuration that reproduces the run.
    pub config: &'a ExperimentConfig,
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes one CSV line for `r`. Floats use the shortest representation
/// that parses back to the same value.
pub fn write_record<W: Write>(sink: &mut W, r: &ExperimentRecord) -> io::Result<()> {
    writeln!(
        sink,
        "{},{},{},{},{},{},{},{}",
        r.index,
        r.n,
        r.acc,
        r.mcc,
        r.cen,
        r.k_cen,
        r.tmcc,
        opt(r.ratio)
    )
}

/// Serializes records or a summary to `sink`.
pub fn emit<W: Write>(
    records: &[ExperimentRecord],
    summary: &ExperimentSummary,
    config: &ExperimentConfig,
    mut sink: W,
    format: EmitFormat,
) -> io::Result<()> {
    match format {
        EmitFormat::Csv => {
            writeln!(sink, "{RECORD_HEADER}")?;
            for r in records {
                write_record(&mut sink, r)?;
            }
        }
        EmitFormat::JsonSummary => {
            let doc = SummaryDocument { summary, rng: rng::ALGORITHM, config };
            serde_json::to_writer_pretty(&mut sink, &doc).map_err(io::Error::other)?;
            writeln!(sink)?;
        }
    }
    Ok(())
}

/// Loads records written by [`write_record`] / [`emit`].
pub fn read_records<R: Read>(source: R) -> Result<Vec<ExperimentRecord>, csv::Error> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(source)
        .deserialize()
        .collect()
}

/// Generates, streams and summarizes a run on `pool`.
///
/// When `records` is given, the CSV (header included) is written to it.
pub fn run<W: Write>(
    cfg: &ExperimentConfig,
    mut records: Option<&mut W>,
    pool: &rayon::ThreadPool,
) -> Result<ExperimentSummary, RunError> {
    cfg.validate()?;
    if let Some(sink) = records.as_deref_mut() {
        writeln!(sink, "{RECORD_HEADER}")?;
    }
    let mut acc = SummaryAccumulator::new(cfg.seed);
    let mut start = 0;
    let mut chunk = Vec::with_capacity(CHUNK as usize);
    while start < cfg.n_matrices {
        let end = (start + CHUNK).min(cfg.n_matrices);
        pool.install(|| {
            (start as usize..end as usize)
                .into_par_iter()
                .map(|i| experiment::record_for_index(cfg, i as u64))
                .collect_into_vec(&mut chunk)
        });
        for r in &chunk {
            if let Some(sink) = records.as_deref_mut() {
                write_record(sink, r)?;
            }
            acc.push(r);
        }
        start = end;
    }
    if let Some(sink) = records {
        sink.flush()?;
    }
    Ok(summarize(&acc, cfg, pool))
}

/// Parallel counterpart of [`experiment::summarize`], with identical output.
pub fn summarize(acc: &SummaryAccumulator, cfg: &ExperimentConfig, pool: &rayon::ThreadPool) -> ExperimentSummary {
    pool.install(|| {
        let (f, g) = acc.pair_sample();
        let tol = cfg.tie_tolerance;
        let pairs = match PairPlan::for_len(f.len(), cfg.pair_budget) {
            PairPlan::None => None,
            PairPlan::Exhaustive => Some(parallel_pair_counts(f, g, tol)),
            plan @ PairPlan::Sampled { .. } => {
                let blocks: Vec<_> = plan.blocks().collect();
                Some(
                    blocks
                        .into_par_iter()
                        .map(|(b, k)| comparison::sampled_pair_counts(f, g, tol, cfg.seed, b, k))
                        .reduce(PairCounts::default, |a, b| a + b),
                )
            }
        };
        let ci = experiment::ratio_base(acc).and_then(|(ratios, base)| {
            let t_stats: Vec<f64> = (0..cfg.bootstrap_resamples as u64)
                .into_par_iter()
                .map(|b| comparison::studentized_replicate(&ratios, base, cfg.seed, b))
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .collect();
            BootstrapCi::from_replicates(base, t_stats, cfg.bootstrap_level).ok()
        });
        acc.finish(pairs, ci, tol)
    })
}

/// All-pairs counts split over row ranges; must run inside a pool.
pub fn parallel_pair_counts(f: &[f64], g: &[f64], tol: f64) -> PairCounts {
    let len = f.len();
    (0..len.div_ceil(PAIR_ROWS_PER_TASK))
        .into_par_iter()
        .map(|t| {
            let rows = t * PAIR_ROWS_PER_TASK..((t + 1) * PAIR_ROWS_PER_TASK).min(len);
            comparison::pair_counts_for_rows(f, g, tol, rows)
        })
        .reduce(PairCounts::default, |a, b| a + b)
}

/// Rebuilds the summary from previously written records.
pub fn summarize_records(
    records: &[ExperimentRecord],
    cfg: &ExperimentConfig,
    pool: &rayon::ThreadPool,
) -> ExperimentSummary {
    let mut acc = SummaryAccumulator::new(cfg.seed);
    for r in records {
        acc.push(r);
    }
    summarize(&acc, cfg, pool)
}

/// Builds a pool with `jobs` workers (`None` lets rayon decide).
pub fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, rayon::ThreadPoolBuildError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        b = b.num_threads(j);
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: u64) -> ExperimentConfig {
        ExperimentConfig { n_matrices: n, bootstrap_resamples: 200, seed: 3, ..Default::default() }
    }

    #[test]
    fn csv_has_header_and_one_line_per_record() {
        let c = cfg(3);
        let records: Vec<_> = (0..3).map(|i| experiment::record_for_index(&c, i)).collect();
        let summary = experiment::summarize(
            &{
                let mut a = SummaryAccumulator::new(c.seed);
                records.iter().for_each(|r| a.push(r));
                a
            },
            &c,
        );
        let mut out = Vec::new();
        emit(&records, &summary, &c, &mut out, EmitFormat::Csv).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert_eq!(text.lines().next(), Some(RECORD_HEADER));
        assert_eq!(read_records(text.as_bytes()).unwrap(), records);
    }

    #[test]
    fn parallel_summary_matches_sequential() {
        let c = ExperimentConfig { pair_budget: 5000, ..cfg(400) };
        let pool = thread_pool(Some(3)).unwrap();
        let mut acc = SummaryAccumulator::new(c.seed);
        for i in 0..c.n_matrices {
            acc.push(&experiment::record_for_index(&c, i));
        }
        assert_eq!(summarize(&acc, &c, &pool), experiment::summarize(&acc, &c));
        let c = cfg(300);
        let mut acc = SummaryAccumulator::new(c.seed);
        for i in 0..c.n_matrices {
            acc.push(&experiment::record_for_index(&c, i));
        }
        assert_eq!(summarize(&acc, &c, &pool), experiment::summarize(&acc, &c));
    }

    #[test]
    fn summary_document_echoes_config() {
        let c = cfg(50);
        let pool = thread_pool(Some(2)).unwrap();
        let s = run::<Vec<u8>>(&c, None, &pool).unwrap();
        let mut out = Vec::new();
        emit(&[], &s, &c, &mut out, EmitFormat::JsonSummary).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(v["seed"], 3);
        assert_eq!(v["n_matrices"], 50);
        let back: ExperimentConfig = serde_json::from_value(v["config"].clone()).unwrap();
        assert_eq!(back, c);
        for key in ["pearson_r", "consistency", "discriminancy", "mean_ratio", "ci_lo", "ci_hi", "rng"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn invalid_config_is_rejected() {
        let c = ExperimentConfig { dim_min: 1, ..cfg(5) };
        let pool = thread_pool(Some(1)).unwrap();
        assert!(matches!(run::<Vec<u8>>(&c, None, &pool), Err(RunError::Config(_))));
    }
}
