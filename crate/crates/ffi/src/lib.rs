//! C ABI for katflow.
//!
//! Graphs and packings are opaque heap handles released with their `*_free`
//! functions. Every fallible call returns a `KatflowStatus`; on failure the message is
//! available from `katflow_last_error` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use katflow::disks::{inversive_distance, Disk, Packing};
use katflow::error::Error;
use katflow::graph::Graph;
use katflow::io::{contact_violations, parse_graph, PackingDocument};
use katflow::solver::{solve_planar, SolveOptions};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KatflowStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NotPlanar = 3,
    SolverFailure = 4,
    VerificationFailed = 5,
    Panic = 6,
}

/// Opaque labeled graph.
pub struct KatflowGraph(Graph);

/// Opaque disk packing.
pub struct KatflowPacking(Packing);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> KatflowStatus {
    match e {
        Error::NotPlanar(_) => KatflowStatus::NotPlanar,
        Error::Verification(_) => KatflowStatus::VerificationFailed,
        e if e.is_input_error() => KatflowStatus::InvalidInput,
        _ => KatflowStatus::SolverFailure,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (KatflowStatus, String)>) -> KatflowStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KatflowStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            KatflowStatus::Panic
        }
    }
}

fn fail(e: Error) -> (KatflowStatus, String) {
    (status_of(&e), e.to_string())
}

/// Errors raised while reading caller-supplied disks are input errors.
fn bad_input(e: Error) -> (KatflowStatus, String) {
    (KatflowStatus::InvalidInput, e.to_string())
}

fn null(what: &str) -> (KatflowStatus, String) {
    (KatflowStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (KatflowStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (KatflowStatus::InvalidInput, format!("{what} is not valid UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no interior NUL").into_raw()
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn katflow_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a graph on `n` vertices from `edge_count` pairs stored flat in `edges`.
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values (it may be null when
/// `edge_count` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn katflow_graph_new(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut KatflowGraph,
) -> KatflowStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if edges.is_null() && edge_count > 0 {
            return Err(null("edges"));
        }
        let flat: &[usize] = if edge_count == 0 { &[] } else { std::slice::from_raw_parts(edges, 2 * edge_count) };
        let g = Graph::new(n, flat.chunks_exact(2).map(|c| (c[0], c[1]))).map_err(fail)?;
        *out = Box::into_raw(Box::new(KatflowGraph(g)));
        Ok(())
    })
}

/// Parses `{"n": .., "edges": [[i, j], ..]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn katflow_graph_from_json(json: *const c_char, out: *mut *mut KatflowGraph) -> KatflowStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g = parse_graph(read_str(json, "json")?).map_err(fail)?;
        *out = Box::into_raw(Box::new(KatflowGraph(g)));
        Ok(())
    })
}

/// # Safety
/// `graph` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn katflow_graph_free(graph: *mut KatflowGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn katflow_graph_vertex_count(graph: *const KatflowGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.n)
}

/// Solves for a packing whose contact graph is `graph`. `use_seed` selects whether
/// `seed` randomizes the flip path.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn katflow_solve(
    graph: *const KatflowGraph,
    use_seed: bool,
    seed: u64,
    out: *mut *mut KatflowPacking,
) -> KatflowStatus {
    guard(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let opts = SolveOptions { seed: use_seed.then_some(seed), ..SolveOptions::default() };
        let (p, _) = solve_planar(&g.0, &opts).map_err(fail)?;
        *out = Box::into_raw(Box::new(KatflowPacking(p)));
        Ok(())
    })
}

/// Builds a packing from `count` disks stored flat as `x, y, r` triples.
///
/// # Safety
/// `xyr` must point to `3 * count` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn katflow_packing_new(
    xyr: *const f64,
    count: usize,
    out: *mut *mut KatflowPacking,
) -> KatflowStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if xyr.is_null() && count > 0 {
            return Err(null("xyr"));
        }
        let flat: &[f64] = if count == 0 { &[] } else { std::slice::from_raw_parts(xyr, 3 * count) };
        let disks = flat.chunks_exact(3).map(|c| Disk::new(c[0], c[1], c[2])).collect::<Result<Vec<_>, _>>();
        let p = Packing::new(disks.map_err(bad_input)?, katflow::disks::DEFAULT_CONTACT_TOL).map_err(bad_input)?;
        *out = Box::into_raw(Box::new(KatflowPacking(p)));
        Ok(())
    })
}

/// # Safety
/// `packing` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn katflow_packing_free(packing: *mut KatflowPacking) {
    if !packing.is_null() {
        drop(Box::from_raw(packing));
    }
}

/// Number of disks, or 0 for a null handle.
///
/// # Safety
/// `packing` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn katflow_packing_len(packing: *const KatflowPacking) -> usize {
    packing.as_ref().map_or(0, |p| p.0.len())
}

/// Center and radius of disk `index`.
///
/// # Safety
/// `packing` must be a live handle; the output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn katflow_packing_disk(
    packing: *const KatflowPacking,
    index: usize,
    x: *mut f64,
    y: *mut f64,
    r: *mut f64,
) -> KatflowStatus {
    guard(|| {
        let p = packing.as_ref().ok_or_else(|| null("packing"))?;
        if x.is_null() || y.is_null() || r.is_null() {
            return Err(null("output"));
        }
        if index >= p.0.len() {
            return Err((KatflowStatus::InvalidInput, format!("disk {index} out of range")));
        }
        let d = p.0.disk(index);
        (*x, *y, *r) = (d.center.x, d.center.y, d.radius);
        Ok(())
    })
}

/// Serializes the packing as a JSON document; contacts use `contact_tol`. Release the
/// string with `katflow_string_free`.
///
/// # Safety
/// `packing` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn katflow_packing_to_json(
    packing: *const KatflowPacking,
    contact_tol: f64,
    out: *mut *mut c_char,
) -> KatflowStatus {
    guard(|| {
        let p = packing.as_ref().ok_or_else(|| null("packing"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        if contact_tol.is_nan() || contact_tol < 0.0 {
            return Err((KatflowStatus::InvalidInput, format!("contact_tol must be nonnegative, got {contact_tol}")));
        }
        *out = into_c_string(PackingDocument::new(&p.0, contact_tol).to_json());
        Ok(())
    })
}

/// Parses a packing JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn katflow_packing_from_json(
    json: *const c_char,
    out: *mut *mut KatflowPacking,
) -> KatflowStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let doc = PackingDocument::from_json(read_str(json, "json")?).map_err(bad_input)?;
        let p = doc.to_packing().map_err(bad_input)?;
        *out = Box::into_raw(Box::new(KatflowPacking(p)));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn katflow_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Checks that the contact graph of `packing` is exactly `graph` at tolerance `tol`.
/// Returns `VERIFICATION_FAILED` and the number of offending pairs otherwise.
///
/// # Safety
/// Both handles must be live; `violations` may be null.
#[no_mangle]
pub unsafe extern "C" fn katflow_verify(
    packing: *const KatflowPacking,
    graph: *const KatflowGraph,
    tol: f64,
    violations: *mut usize,
) -> KatflowStatus {
    guard(|| {
        let p = packing.as_ref().ok_or_else(|| null("packing"))?;
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        let bad = contact_violations(p.0.disks(), &g.0, tol).map_err(fail)?;
        if !violations.is_null() {
            *violations = bad.len();
        }
        match bad.first() {
            None => Ok(()),
            Some(v) => Err((
                KatflowStatus::VerificationFailed,
                format!("{} violated pairs, first {} with invdist {}", bad.len(), v.edge, v.invdist),
            )),
        }
    })
}

/// Inversive distance between two disks.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn katflow_inversive_distance(
    x1: f64,
    y1: f64,
    r1: f64,
    x2: f64,
    y2: f64,
    r2: f64,
    out: *mut f64,
) -> KatflowStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let a = Disk::new(x1, y1, r1).map_err(fail)?;
        let b = Disk::new(x2, y2, r2).map_err(fail)?;
        *out = inversive_distance(&a, &b).map_err(fail)?;
        Ok(())
    })
}
