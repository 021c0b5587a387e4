//! Seeded synthetic temporal graphs.

use std::io::{self, Write};

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Pareto;

use crate::graph::{TemporalGraph, Timestamp};

/// `(u, v, t)` triples with `u != v` uniform over `0..n` and `t` uniform over
/// `1..=t_max`.
pub fn uniform_edges(n: u32, m: usize, t_max: Timestamp, seed: u64) -> Vec<(u32, u32, u32)> {
    assert!(n >= 2 && t_max >= 1, "need two vertices and one timestamp");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m)
        .map(|_| {
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            (u, v, rng.gen_range(1..=t_max))
        })
        .collect()
}

pub fn uniform_graph(n: u32, m: usize, t_max: Timestamp, seed: u64) -> TemporalGraph {
    TemporalGraph::from_edges(n, &uniform_edges(n, m, t_max, seed)).expect("generated edges are valid")
}

/// Shape of a message network: a few heavy senders, users who keep writing
/// to the same contacts, raw epoch-second timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageNetworkConfig {
    pub users: u32,
    pub messages: usize,
    pub days: u32,
    pub start_epoch: u64,
    /// Tail index of the activity distribution; smaller means heavier.
    pub activity_shape: f64,
    /// Chance that a message goes to an earlier contact of the sender.
    pub repeat_contact: f64,
}

impl Default for MessageNetworkConfig {
    /// Roughly the size of the UC Irvine student message network.
    fn default() -> Self {
        MessageNetworkConfig {
            users: 1899,
            messages: 59_835,
            days: 193,
            start_epoch: 1_082_040_961,
            activity_shape: 1.2,
            repeat_contact: 0.6,
        }
    }
}

/// Messages in time order as `(sender, receiver, epoch seconds)`.
pub fn message_network(cfg: &MessageNetworkConfig, seed: u64) -> Vec<(u32, u32, u64)> {
    assert!(cfg.users >= 2 && cfg.days >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pareto = Pareto::new(1.0, cfg.activity_shape).expect("positive shape");
    let activity: Vec<f64> = (0..cfg.users).map(|_| pareto.sample(&mut rng).min(1e4)).collect();
    let pick = WeightedIndex::new(&activity).expect("positive weights");
    let span = u64::from(cfg.days) * 86_400;
    let mut times: Vec<u64> = (0..cfg.messages).map(|_| rng.gen_range(0..span)).collect();
    times.sort_unstable();

    let mut contacts: Vec<Vec<u32>> = vec![Vec::new(); cfg.users as usize];
    let mut out = Vec::with_capacity(cfg.messages);
    for dt in times {
        let u = pick.sample(&mut rng) as u32;
        let known = &contacts[u as usize];
        let v = if !known.is_empty() && rng.gen_bool(cfg.repeat_contact) {
            known[rng.gen_range(0..known.len())]
        } else {
            loop {
                let v = pick.sample(&mut rng) as u32;
                if v != u {
                    break v;
                }
            }
        };
        if !contacts[u as usize].contains(&v) {
            contacts[u as usize].push(v);
            contacts[v as usize].push(u);
        }
        out.push((u, v, cfg.start_epoch + dt));
    }
    out
}

pub fn write_edge_list<W: Write, T: std::fmt::Display>(edges: &[(u32, u32, T)], mut out: W) -> io::Result<()> {
    for (u, v, t) in edges {
        writeln!(out, "{u} {v} {t}")?;
    }
    out.flush()
}
