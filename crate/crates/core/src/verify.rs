//! Oracle-equivalence sweeps used by the CLI and the test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::graph::{TemporalGraph, TimeWindow, Timestamp};
use crate::oracle::{tccs_oracle, window_components, ComponentResult};
use crate::query::{ComponentIndex, Query};

/// Exhaustive sweeps above this many checks fall back to sampling.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;
pub const DEFAULT_SAMPLES: usize = 100_000;
const KEPT_MISMATCHES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

impl VerifyMode {
    /// Exhaustive when the sweep is small enough.
    pub fn auto(g: &TemporalGraph, seed: u64) -> Self {
        if exhaustive_checks(g) <= EXHAUSTIVE_LIMIT {
            VerifyMode::Exhaustive
        } else {
            VerifyMode::Sampled {
                samples: DEFAULT_SAMPLES,
                seed,
            }
        }
    }
}

/// Number of `(vertex, window)` pairs.
pub fn exhaustive_checks(g: &TemporalGraph) -> u64 {
    let t = u64::from(g.t_max());
    u64::from(g.n()) * t * (t + 1) / 2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub query: Query,
    /// Name of the index that disagreed.
    pub index: String,
    pub expected: ComponentResult,
    pub got: ComponentResult,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: u64,
    pub mismatch_count: u64,
    /// The first few mismatches, in sweep order.
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatch_count == 0
    }

    fn absorb(&mut self, other: VerifyReport) {
        self.checks += other.checks;
        self.mismatch_count += other.mismatch_count;
        let room = KEPT_MISMATCHES.saturating_sub(self.mismatches.len());
        self.mismatches.extend(other.mismatches.into_iter().take(room));
    }

    fn check(&mut self, query: Query, expected: &ComponentResult, name: &str, got: Result<ComponentResult>) {
        self.checks += 1;
        let got = match got {
            Ok(r) if &r == expected => return,
            Ok(r) => r,
            Err(_) => ComponentResult::empty(),
        };
        self.mismatch_count += 1;
        if self.mismatches.len() < KEPT_MISMATCHES {
            self.mismatches.push(Mismatch {
                query,
                index: name.to_owned(),
                expected: expected.clone(),
                got,
            });
        }
    }
}

/// Uniform vertex and a window uniform over ordered pairs `ts <= te`.
pub fn random_query<R: Rng>(rng: &mut R, n: u32, t_max: Timestamp) -> Query {
    let u = rng.gen_range(0..n);
    loop {
        let a = rng.gen_range(1..=t_max);
        let b = rng.gen_range(1..=t_max);
        if a <= b {
            return Query::new(u, a, b);
        }
    }
}

pub fn random_queries(n: u32, t_max: Timestamp, count: usize, seed: u64) -> Vec<Query> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_query(&mut rng, n, t_max)).collect()
}

/// Compares every named index against the oracle. Each check counts once
/// per index.
pub fn verify(g: &TemporalGraph, k: u32, indexes: &[(&str, &dyn ComponentIndex)], mode: VerifyMode) -> VerifyReport {
    match mode {
        VerifyMode::Exhaustive => {
            let windows: Vec<TimeWindow> = (1..=g.t_max())
                .flat_map(|ts| (ts..=g.t_max()).map(move |te| TimeWindow { ts, te }))
                .collect();
            windows
                .par_iter()
                .map(|&w| {
                    let mut report = VerifyReport::default();
                    let (comps, owner) = window_components(g, k, w);
                    let empty = ComponentResult::empty();
                    for u in 0..g.n() {
                        let expected = owner[u as usize].map_or(&empty, |i| &comps[i]);
                        let q = Query::new(u, w.ts, w.te);
                        for (name, idx) in indexes {
                            report.check(q, expected, name, idx.query(q));
                        }
                    }
                    report
                })
                .collect::<Vec<_>>()
                .into_iter()
                .fold(VerifyReport::default(), |mut acc, r| {
                    acc.absorb(r);
                    acc
                })
        }
        VerifyMode::Sampled { samples, seed } => {
            let queries = random_queries(g.n(), g.t_max(), samples, seed);
            queries
                .par_iter()
                .map(|&q| {
                    let mut report = VerifyReport::default();
                    let expected = tccs_oracle(g, k, q.u, TimeWindow { ts: q.ts, te: q.te }).expect("query in range");
                    for (name, idx) in indexes {
                        report.check(q, &expected, name, idx.query(q));
                    }
                    report
                })
                .collect::<Vec<_>>()
                .into_iter()
                .fold(VerifyReport::default(), |mut acc, r| {
                    acc.absorb(r);
                    acc
                })
        }
    }
}
