//! Command-line front end. Exit codes: 0 ok, 1 usage, 2 data error, 3
//! verification failure.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::bench::{run_bench, BenchConfig, IndexKind, KSpec};
use crate::coretime::all_edge_core_times;
use crate::ctmsf::{build_ctmsf_from_table, CtmsfIndex};
use crate::ecb::{build_from_table, PecbIndex};
use crate::error::{Error, Result};
use crate::gen::{message_network, uniform_edges, write_edge_list, MessageNetworkConfig};
use crate::graph::{load_edge_list, TemporalGraph, Timestamp, VertexId};
use crate::oracle::tccs_oracle;
use crate::query::{batch_query_with_stats, ComponentIndex, Query};
use crate::verify::{verify, VerifyMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "pecb", version, about = "Temporal k-core component search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Edge list with one `u v t` triple per line.
    #[arg(long)]
    input: PathBuf,
    /// Bucket epoch-second timestamps into days, then renumber them 1..=t_max.
    #[arg(long)]
    days: bool,
    /// Renumber the distinct timestamps 1..=t_max.
    #[arg(long, conflicts_with = "days")]
    normalize: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an index file.
    Build {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value = "pecb")]
        index_kind: IndexKind,
    },
    /// Answer one query from an index file.
    Query {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        start: Timestamp,
        #[arg(long)]
        end: Timestamp,
    },
    /// Answer a CSV of `u,ts,te` queries.
    Batch {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        queries: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Answer one query straight from the definitions.
    Oracle {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        start: Timestamp,
        #[arg(long)]
        end: Timestamp,
    },
    /// Dump every edge's core-time history as CSV.
    Coretimes {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare both index kinds against the oracle.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        k: u32,
        /// Check every (vertex, window) pair regardless of size.
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        /// Check this many random queries.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Time builds and queries; writes a CSV report.
    Bench {
        #[command(flatten)]
        graph: GraphArgs,
        /// Comma-separated k values or percentages of k_max.
        #[arg(long, value_delimiter = ',', default_value = "50%,60%,70%,80%,90%")]
        k: Vec<KSpec>,
        #[arg(long, default_value_t = 1000)]
        queries: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "pecb,ctmsf")]
        kinds: Vec<IndexKind>,
        #[arg(long, default_value_t = 200)]
        verify_samples: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Dataset name for the report; defaults to the input file stem.
        #[arg(long)]
        dataset: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a random temporal graph.
    Gen {
        #[arg(long)]
        vertices: u32,
        #[arg(long)]
        edges: usize,
        /// Largest timestamp, or the number of days for `--model messages`.
        #[arg(long)]
        tmax: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// `uniform` or `messages` (heavy-tailed senders, epoch seconds).
        #[arg(long, default_value = "uniform")]
        model: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print index metrics.
    Stats {
        #[arg(long)]
        index: PathBuf,
    },
}

enum LoadedIndex {
    Pecb(PecbIndex),
    Ctmsf(CtmsfIndex),
}

impl LoadedIndex {
    fn open(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        if bytes.starts_with(b"PECBIDX\0") {
            PecbIndex::from_bytes(&bytes).map(LoadedIndex::Pecb)
        } else if bytes.starts_with(b"CTMSFIDX") {
            CtmsfIndex::from_bytes(&bytes).map(LoadedIndex::Ctmsf)
        } else {
            Err(Error::Format(format!("{} is not an index file", path.display())))
        }
    }

    fn as_dyn(&self) -> &dyn ComponentIndex {
        match self {
            LoadedIndex::Pecb(x) => x,
            LoadedIndex::Ctmsf(x) => x,
        }
    }
}

fn load_graph(args: &GraphArgs) -> Result<TemporalGraph> {
    let file = File::open(&args.input)?;
    let (g, _) = load_edge_list(BufReader::new(file))?;
    Ok(if args.days {
        g.aggregate_days().0
    } else if args.normalize {
        g.normalize_timestamps().0
    } else {
        g
    })
}

fn vertex_of(labels: &[String], label: &str) -> Result<VertexId> {
    labels
        .iter()
        .position(|l| l == label)
        .map(|i| i as VertexId)
        .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
}

fn join_labels(labels: &[String], vertices: &[VertexId]) -> String {
    let names: Vec<&str> = vertices.iter().map(|&u| labels[u as usize].as_str()).collect();
    names.join(" ")
}

fn sink<'a>(path: &Option<PathBuf>, out: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(out),
    })
}

fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn parse_batch(path: &Path, labels: &[String]) -> Result<Vec<Query>> {
    let by_label: HashMap<&str, VertexId> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i as VertexId)).collect();
    let mut queries = Vec::new();
    for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if queries.is_empty() && fields.first() == Some(&"u") {
            continue;
        }
        let bad = |message: String| Error::Parse { line: i + 1, message };
        if fields.len() != 3 {
            return Err(bad(format!("expected u,ts,te, got {} fields", fields.len())));
        }
        let u = *by_label
            .get(fields[0])
            .ok_or_else(|| bad(format!("unknown vertex {:?}", fields[0])))?;
        let ts = fields[1].parse().map_err(|_| bad(format!("bad start {:?}", fields[1])))?;
        let te = fields[2].parse().map_err(|_| bad(format!("bad end {:?}", fields[2])))?;
        queries.push(Query::new(u, ts, te));
    }
    Ok(queries)
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Build {
            graph,
            k,
            output,
            index_kind,
        } => {
            let g = load_graph(&graph)?;
            let started = Instant::now();
            let table = all_edge_core_times(&g, k)?;
            let core_seconds = started.elapsed().as_secs_f64();
            let bytes = match index_kind {
                IndexKind::Pecb => {
                    let (idx, report) = build_from_table(&g, &table)?;
                    idx.save(&output)?;
                    writeln!(
                        out,
                        "versions {} inserted {} skipped {} retired {} entries {}",
                        report.versions, report.inserted, report.skipped, report.retired, report.entry_writes
                    )?;
                    idx.serialized_len()
                }
                IndexKind::Ctmsf => {
                    let idx = build_ctmsf_from_table(&g, &table)?;
                    idx.save(&output)?;
                    idx.serialized_len()
                }
            };
            writeln!(
                out,
                "{index_kind} index: n {} m {} t_max {} k {k}; core times {core_seconds:.3}s, total {:.3}s, {bytes} bytes",
                g.n(),
                g.m(),
                g.t_max(),
                started.elapsed().as_secs_f64()
            )?;
        }
        Command::Query { index, vertex, start, end } => {
            let idx = LoadedIndex::open(&index)?;
            let idx = idx.as_dyn();
            let u = vertex_of(idx.labels(), &vertex)?;
            let r = idx.query(Query::new(u, start, end))?;
            writeln!(out, "{}", join_labels(idx.labels(), &r.vertices))?;
        }
        Command::Batch {
            index,
            queries,
            output,
            workers,
        } => {
            let idx = LoadedIndex::open(&index)?;
            let idx = idx.as_dyn();
            let qs = parse_batch(&queries, idx.labels())?;
            let results = batch_query_with_stats(idx, &qs, workers)?;
            let mut w = sink(&output, out)?;
            writeln!(w, "u,ts,te,size,vertices,micros")?;
            for (q, (r, stats)) in qs.iter().zip(&results) {
                writeln!(
                    w,
                    "{},{},{},{},{},{:.3}",
                    idx.labels()[q.u as usize],
                    q.ts,
                    q.te,
                    r.len(),
                    join_labels(idx.labels(), &r.vertices),
                    stats.elapsed.as_secs_f64() * 1e6
                )?;
            }
            w.flush()?;
        }
        Command::Oracle {
            graph,
            k,
            vertex,
            start,
            end,
        } => {
            let g = load_graph(&graph)?;
            let u = g.vertex_by_label(&vertex)?;
            let r = tccs_oracle(&g, k, u, g.window(start, end)?)?;
            writeln!(out, "{}", join_labels(g.labels(), &r.vertices))?;
        }
        Command::Coretimes { graph, k, output } => {
            let g = load_graph(&graph)?;
            let table = all_edge_core_times(&g, k)?;
            let mut w = sink(&output, out)?;
            table.write_csv(&g, &mut w)?;
            w.flush()?;
        }
        Command::Verify {
            graph,
            k,
            exhaustive,
            samples,
            seed,
            workers,
        } => {
            let g = load_graph(&graph)?;
            let table = all_edge_core_times(&g, k)?;
            let (pecb, _) = build_from_table(&g, &table)?;
            let ctmsf = build_ctmsf_from_table(&g, &table)?;
            let mode = match (exhaustive, samples) {
                (true, _) => VerifyMode::Exhaustive,
                (false, Some(samples)) => VerifyMode::Sampled { samples, seed },
                (false, None) => VerifyMode::auto(&g, seed),
            };
            let report = with_workers(workers, || verify(&g, k, &[("pecb", &pecb), ("ctmsf", &ctmsf)], mode))?;
            for m in &report.mismatches {
                writeln!(
                    out,
                    "mismatch {} at {} [{}, {}]: expected {{{}}} got {{{}}}",
                    m.index,
                    g.label(m.query.u),
                    m.query.ts,
                    m.query.te,
                    join_labels(g.labels(), &m.expected.vertices),
                    join_labels(g.labels(), &m.got.vertices)
                )?;
            }
            let verdict = if report.passed() { "pass" } else { "FAIL" };
            writeln!(
                out,
                "{verdict}: {} checks, {} mismatches ({mode:?})",
                report.checks, report.mismatch_count
            )?;
            if !report.passed() {
                return Ok(EXIT_VERIFY);
            }
        }
        Command::Bench {
            graph,
            k,
            queries,
            seed,
            kinds,
            verify_samples,
            workers,
            dataset,
            output,
        } => {
            let g = load_graph(&graph)?;
            let dataset = dataset.unwrap_or_else(|| {
                graph
                    .input
                    .file_stem()
                    .map_or_else(|| "graph".to_owned(), |s| s.to_string_lossy().into_owned())
            });
            let cfg = BenchConfig {
                dataset,
                ks: k,
                queries,
                seed,
                kinds,
                verify_samples,
                workers,
            };
            let report = run_bench(&g, &cfg)?;
            let mut w = sink(&output, out)?;
            report.write_csv(&mut w)?;
            w.flush()?;
        }
        Command::Gen {
            vertices,
            edges,
            tmax,
            seed,
            model,
            output,
        } => {
            if vertices < 2 || tmax < 1 {
                return Err(Error::Format("gen needs at least 2 vertices and tmax >= 1".into()));
            }
            let mut w = sink(&output, out)?;
            match model.as_str() {
                "uniform" => write_edge_list(&uniform_edges(vertices, edges, tmax, seed), &mut w)?,
                "messages" => {
                    let cfg = MessageNetworkConfig {
                        users: vertices,
                        messages: edges,
                        days: tmax,
                        ..MessageNetworkConfig::default()
                    };
                    write_edge_list(&message_network(&cfg, seed), &mut w)?;
                }
                other => return Err(Error::Format(format!("unknown model {other:?}"))),
            }
        }
        Command::Stats { index } => match LoadedIndex::open(&index)? {
            LoadedIndex::Pecb(idx) => {
                let s = idx.stats();
                writeln!(out, "kind pecb")?;
                writeln!(out, "k {}", idx.k())?;
                writeln!(out, "n {} m {} t_max {}", idx.n(), idx.m(), idx.t_max())?;
                writeln!(out, "nodes {}", s.node_count)?;
                writeln!(out, "nodes_with_entries {}", s.nodes_with_entries)?;
                writeln!(out, "entries {}", s.total_entries)?;
                writeln!(out, "avg_entries_per_node {:.4}", s.avg_entries_per_node)?;
                writeln!(out, "entry_point_records {}", s.entry_point_records)?;
                writeln!(out, "bytes {}", s.serialized_bytes)?;
                writeln!(out, "ts,inserted,retired,skipped,live,depth")?;
                for t in &s.per_ts {
                    writeln!(out, "{},{},{},{},{},{}", t.ts, t.inserted, t.retired, t.skipped, t.live, t.depth)?;
                }
            }
            LoadedIndex::Ctmsf(idx) => {
                let s = idx.stats();
                writeln!(out, "kind ctmsf")?;
                writeln!(out, "k {}", idx.k())?;
                writeln!(out, "n {} m {} t_max {}", idx.n(), idx.m(), ComponentIndex::t_max(&idx))?;
                writeln!(out, "version_records {}", s.version_records)?;
                writeln!(out, "pooled_edges {}", s.pooled_edges)?;
                writeln!(out, "bytes {}", s.serialized_bytes)?;
            }
        },
    }
    Ok(EXIT_OK)
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DATA
        }
    }
}

/// Entry point for the binary.
pub fn main_with_std() -> i32 {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut err = io::stderr();
    let code = run(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    code
}
