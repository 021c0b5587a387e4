//! C ABI over the `pecb` index. Graphs, indexes and query results are opaque
//! heap handles released by their `_free` function. Every fallible call
//! returns a [`PecbStatus`]; on failure [`pecb_last_error`] describes it.
//!
//! Pointer contract for every function: handles must come from this library
//! and be live, strings NUL-terminated, arrays as long as their stated
//! length and output pointers writable. Null handles are reported as
//! `NullArgument` by fallible calls and read as zero by accessors.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::BufReader;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use pecb::{ComponentIndex, ComponentResult, Error, PecbIndex as Index, Query, TemporalGraph};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PecbStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    Parse = 3,
    Io = 4,
    Format = 5,
    Internal = 6,
    Panic = 7,
}

/// Bucket epoch-second timestamps into days before renumbering.
pub const PECB_LOAD_DAYS: u32 = 1;
/// Renumber the distinct timestamps to 1..=t_max.
pub const PECB_LOAD_NORMALIZE: u32 = 2;

/// A temporal graph.
pub struct PecbGraph(TemporalGraph);

/// A built or loaded component index.
pub struct PecbIndex(Index);

/// Vertices of one query answer, sorted ascending.
pub struct PecbComponent(ComponentResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(PecbStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } | Error::EmptyInput => PecbStatus::Parse,
            Error::Io(_) => PecbStatus::Io,
            Error::Format(_) => PecbStatus::Format,
            Error::Invariant(_) => PecbStatus::Internal,
            _ => PecbStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(PecbStatus::NullArgument, format!("{what} is null"))
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PecbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PecbStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PecbStatus::Panic
        }
    }
}

unsafe fn path_arg(p: *const c_char) -> Result<PathBuf, Failure> {
    if p.is_null() {
        return Err(null("path"));
    }
    let s = CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(PecbStatus::InvalidArgument, "path is not UTF-8".into()))?;
    Ok(PathBuf::from(s))
}

unsafe fn out_arg<'a, T>(out: *mut *mut T) -> Result<&'a mut *mut T, Failure> {
    let out = out.as_mut().ok_or_else(|| null("output pointer"))?;
    *out = ptr::null_mut();
    Ok(out)
}

fn boxed<T>(x: T) -> *mut T {
    Box::into_raw(Box::new(x))
}

/// Message for the last failed call on this thread, or null after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn pecb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pecb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Reads a `u v t` edge list. `flags` combines `PECB_LOAD_*` bits.
#[no_mangle]
pub unsafe extern "C" fn pecb_graph_load(path: *const c_char, flags: u32, out: *mut *mut PecbGraph) -> PecbStatus {
    guard(|| {
        let out = out_arg(out)?;
        let path = path_arg(path)?;
        let file = File::open(&path).map_err(Error::from)?;
        let (g, _) = pecb::load_edge_list(BufReader::new(file))?;
        let g = if flags & PECB_LOAD_DAYS != 0 {
            g.aggregate_days().0
        } else if flags & PECB_LOAD_NORMALIZE != 0 {
            g.normalize_timestamps().0
        } else {
            g
        };
        *out = boxed(PecbGraph(g));
        Ok(())
    })
}

/// Builds a graph on vertices `0..n` from `m` parallel arrays of endpoints
/// and timestamps. Labels are the decimal ids.
#[no_mangle]
pub unsafe extern "C" fn pecb_graph_from_edges(
    n: u32,
    us: *const u32,
    vs: *const u32,
    ts: *const u32,
    m: usize,
    out: *mut *mut PecbGraph,
) -> PecbStatus {
    guard(|| {
        let out = out_arg(out)?;
        if m > 0 && (us.is_null() || vs.is_null() || ts.is_null()) {
            return Err(null("edge array"));
        }
        let triples: Vec<(u32, u32, u32)> = if m == 0 {
            Vec::new()
        } else {
            let (us, vs, ts) = (
                std::slice::from_raw_parts(us, m),
                std::slice::from_raw_parts(vs, m),
                std::slice::from_raw_parts(ts, m),
            );
            (0..m).map(|i| (us[i], vs[i], ts[i])).collect()
        };
        *out = boxed(PecbGraph(TemporalGraph::from_edges(n, &triples)?));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pecb_graph_free(graph: *mut PecbGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

#[no_mangle]
pub unsafe extern "C" fn pecb_graph_vertex_count(graph: *const PecbGraph) -> u32 {
    graph.as_ref().map_or(0, |g| g.0.n())
}

#[no_mangle]
pub unsafe extern "C" fn pecb_graph_edge_count(graph: *const PecbGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.m())
}

#[no_mangle]
pub unsafe extern "C" fn pecb_graph_t_max(graph: *const PecbGraph) -> u32 {
    graph.as_ref().map_or(0, |g| g.0.t_max())
}

/// Builds the index for cohesion `k`.
#[no_mangle]
pub unsafe extern "C" fn pecb_index_build(graph: *const PecbGraph, k: u32, out: *mut *mut PecbIndex) -> PecbStatus {
    guard(|| {
        let out = out_arg(out)?;
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        let (idx, _) = pecb::build(&g.0, k)?;
        *out = boxed(PecbIndex(idx));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pecb_index_load(path: *const c_char, out: *mut *mut PecbIndex) -> PecbStatus {
    guard(|| {
        let out = out_arg(out)?;
        let path = path_arg(path)?;
        *out = boxed(PecbIndex(Index::load(path)?));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pecb_index_save(index: *const PecbIndex, path: *const c_char) -> PecbStatus {
    guard(|| {
        let idx = index.as_ref().ok_or_else(|| null("index"))?;
        idx.0.save(path_arg(path)?)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pecb_index_free(index: *mut PecbIndex) {
    if !index.is_null() {
        drop(Box::from_raw(index));
    }
}

#[no_mangle]
pub unsafe extern "C" fn pecb_index_vertex_count(index: *const PecbIndex) -> u32 {
    index.as_ref().map_or(0, |i| i.0.n())
}

#[no_mangle]
pub unsafe extern "C" fn pecb_index_t_max(index: *const PecbIndex) -> u32 {
    index.as_ref().map_or(0, |i| i.0.t_max())
}

#[no_mangle]
pub unsafe extern "C" fn pecb_index_k(index: *const PecbIndex) -> u32 {
    index.as_ref().map_or(0, |i| i.0.k())
}

#[no_mangle]
pub unsafe extern "C" fn pecb_index_node_count(index: *const PecbIndex) -> usize {
    index.as_ref().map_or(0, |i| i.0.node_count())
}

/// Dense id of the vertex named `label` in the input file.
#[no_mangle]
pub unsafe extern "C" fn pecb_index_vertex_id(index: *const PecbIndex, label: *const c_char, out: *mut u32) -> PecbStatus {
    guard(|| {
        let idx = index.as_ref().ok_or_else(|| null("index"))?;
        let out = out.as_mut().ok_or_else(|| null("output pointer"))?;
        if label.is_null() {
            return Err(null("label"));
        }
        let label = CStr::from_ptr(label).to_string_lossy();
        let pos = idx.0.labels().iter().position(|l| *l == label);
        *out = pos.ok_or_else(|| Failure::from(Error::UnknownLabel(label.into_owned())))? as u32;
        Ok(())
    })
}

/// Label of vertex `u` copied into `buf` with a trailing NUL, truncated to
/// `len` bytes. Returns the untruncated byte length, or 0 on a bad id.
#[no_mangle]
pub unsafe extern "C" fn pecb_index_vertex_label(index: *const PecbIndex, u: u32, buf: *mut c_char, len: usize) -> usize {
    let Some(label) = index.as_ref().and_then(|i| i.0.labels().get(u as usize)) else {
        return 0;
    };
    if !buf.is_null() && len > 0 {
        let n = label.len().min(len - 1);
        ptr::copy_nonoverlapping(label.as_ptr().cast(), buf, n);
        *buf.add(n) = 0;
    }
    label.len()
}

/// The component of vertex `u` in the k-core of window `[ts, te]`; empty
/// when `u` is outside the core.
#[no_mangle]
pub unsafe extern "C" fn pecb_index_query(index: *const PecbIndex, u: u32, ts: u32, te: u32, out: *mut *mut PecbComponent) -> PecbStatus {
    guard(|| {
        let out = out_arg(out)?;
        let idx = index.as_ref().ok_or_else(|| null("index"))?;
        *out = boxed(PecbComponent(idx.0.query(Query::new(u, ts, te))?));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pecb_component_len(comp: *const PecbComponent) -> usize {
    comp.as_ref().map_or(0, |c| c.0.len())
}

/// Pointer to `pecb_component_len` vertex ids, owned by `comp`.
#[no_mangle]
pub unsafe extern "C" fn pecb_component_vertices(comp: *const PecbComponent) -> *const u32 {
    comp.as_ref().map_or(ptr::null(), |c| c.0.vertices.as_ptr())
}

#[no_mangle]
pub unsafe extern "C" fn pecb_component_free(comp: *mut PecbComponent) {
    if !comp.is_null() {
        drop(Box::from_raw(comp));
    }
}
