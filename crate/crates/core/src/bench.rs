//! Build/query benchmarks over a list of `k` values and index kinds.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::Instant;

use crate::coretime::all_edge_core_times;
use crate::ctmsf::build_ctmsf_from_table;
use crate::ecb::build_from_table;
use crate::error::{Error, Result};
use crate::graph::{measure_kmax, TemporalGraph};
use crate::query::{batch_query_with_stats, ComponentIndex};
use crate::verify::{random_queries, verify, VerifyMode};

/// A `k` given directly or as a percentage of `k_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KSpec {
    Absolute(u32),
    Percent(f64),
}

impl KSpec {
    /// Percentages round to the nearest integer, at least 1.
    pub fn resolve(self, k_max: u32) -> u32 {
        match self {
            KSpec::Absolute(k) => k,
            KSpec::Percent(p) => ((p / 100.0 * f64::from(k_max)).round() as u32).max(1),
        }
    }
}

impl FromStr for KSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if let Some(p) = s.strip_suffix('%') {
            let p: f64 = p.trim().parse().map_err(|_| format!("bad percentage {s:?}"))?;
            if !(p > 0.0 && p <= 100.0) {
                return Err(format!("percentage {s:?} outside (0, 100]"));
            }
            Ok(KSpec::Percent(p))
        } else {
            match s.parse::<u32>() {
                Ok(k) if k >= 1 => Ok(KSpec::Absolute(k)),
                _ => Err(format!("bad k {s:?}")),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexKind {
    Pecb,
    Ctmsf,
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexKind::Pecb => "pecb",
            IndexKind::Ctmsf => "ctmsf",
        })
    }
}

impl FromStr for IndexKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "pecb" => Ok(IndexKind::Pecb),
            "ctmsf" => Ok(IndexKind::Ctmsf),
            other => Err(format!("unknown index kind {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub dataset: String,
    pub ks: Vec<KSpec>,
    pub queries: usize,
    pub seed: u64,
    pub kinds: Vec<IndexKind>,
    /// Oracle checks per row; 0 skips verification.
    pub verify_samples: usize,
    pub workers: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            dataset: "graph".into(),
            ks: [50.0, 60.0, 70.0, 80.0, 90.0].into_iter().map(KSpec::Percent).collect(),
            queries: 1000,
            seed: 1,
            kinds: vec![IndexKind::Pecb, IndexKind::Ctmsf],
            verify_samples: 200,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub dataset: String,
    pub k: u32,
    pub kind: IndexKind,
    /// Core times plus index construction.
    pub build_seconds: f64,
    pub index_bytes: usize,
    pub avg_query_us: f64,
    pub median_query_us: f64,
    pub queries: usize,
    pub verified: u64,
    pub pass_rate: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchReport {
    pub k_max: u32,
    pub rows: Vec<BenchRow>,
}

pub const CSV_HEADER: &str = "dataset,k,kind,build_seconds,index_bytes,avg_query_us,median_query_us,queries,verified,pass_rate";

impl BenchReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{:.6},{},{:.3},{:.3},{},{},{:.4}",
                r.dataset,
                r.k,
                r.kind,
                r.build_seconds,
                r.index_bytes,
                r.avg_query_us,
                r.median_query_us,
                r.queries,
                r.verified,
                r.pass_rate
            )?;
        }
        Ok(())
    }
}

fn time_queries(idx: &dyn ComponentIndex, cfg: &BenchConfig) -> Result<(f64, f64)> {
    let qs = random_queries(idx.n(), idx.t_max(), cfg.queries, cfg.seed);
    let results = batch_query_with_stats(idx, &qs, cfg.workers)?;
    let mut micros: Vec<f64> = results.iter().map(|(_, s)| s.elapsed.as_secs_f64() * 1e6).collect();
    if micros.is_empty() {
        return Ok((0.0, 0.0));
    }
    micros.sort_by(f64::total_cmp);
    let avg = micros.iter().sum::<f64>() / micros.len() as f64;
    let mid = micros.len() / 2;
    let median = if micros.len().is_multiple_of(2) {
        (micros[mid - 1] + micros[mid]) / 2.0
    } else {
        micros[mid]
    };
    Ok((avg, median))
}

pub fn run_bench(g: &TemporalGraph, cfg: &BenchConfig) -> Result<BenchReport> {
    if g.m() == 0 {
        return Err(Error::EmptyInput);
    }
    let k_max = measure_kmax(g);
    let mut ks: Vec<u32> = cfg.ks.iter().map(|s| s.resolve(k_max)).collect();
    ks.dedup();
    let mut rows = Vec::new();
    for k in ks {
        let started = Instant::now();
        let table = all_edge_core_times(g, k)?;
        let table_seconds = started.elapsed().as_secs_f64();
        for &kind in &cfg.kinds {
            let started = Instant::now();
            let index: Box<dyn ComponentIndex> = match kind {
                IndexKind::Pecb => Box::new(build_from_table(g, &table)?.0),
                IndexKind::Ctmsf => Box::new(build_ctmsf_from_table(g, &table)?),
            };
            let build_seconds = table_seconds + started.elapsed().as_secs_f64();
            let index_bytes = index.serialized_len();
            let (avg_query_us, median_query_us) = time_queries(index.as_ref(), cfg)?;
            let (verified, pass_rate) = if cfg.verify_samples == 0 {
                (0, 1.0)
            } else {
                let mode = VerifyMode::Sampled {
                    samples: cfg.verify_samples,
                    seed: cfg.seed ^ 0x5eed,
                };
                let report = verify(g, k, &[(&kind.to_string(), index.as_ref())], mode);
                let pass = 1.0 - report.mismatch_count as f64 / report.checks.max(1) as f64;
                (report.checks, pass)
            };
            rows.push(BenchRow {
                dataset: cfg.dataset.clone(),
                k,
                kind,
                build_seconds,
                index_bytes,
                avg_query_us,
                median_query_us,
                queries: cfg.queries,
                verified,
                pass_rate,
            });
        }
    }
    Ok(BenchReport { k_max, rows })
}
