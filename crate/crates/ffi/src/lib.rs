//! C ABI over `scramble-core`.
//!
//! Conventions:
//! - every function returns a [`ScrambleStatus`]; results go through out
//!   pointers, which are written only on success;
//! - graphs are opaque [`ScrambleGraph`] handles released with
//!   [`scramble_graph_free`];
//! - after a non-`Ok` status, [`scramble_last_error`] returns a message for
//!   the calling thread;
//! - panics are caught at the boundary and reported as `Panic`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use scramble_core::chain::{occupancy_curve, ChainParams, RngPolicy, Schedule, ScheduleKind};
use scramble_core::estimators::{self, Observable, SaturationCurve};
use scramble_core::graphs::{self, Cut, Graph};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScrambleStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    GraphError = 3,
    SimulationError = 4,
    EstimateError = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Gate schedules accepted by [`scramble_occupancy_curve`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScrambleSchedule {
    PoissonRateOne = 0,
    UniformRandomEdge = 1,
    RoundRobin = 2,
    RandomPermutationSweeps = 3,
}

/// Opaque graph handle.
pub struct ScrambleGraph {
    inner: Graph,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

type Failure = (ScrambleStatus, String);

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ScrambleStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            ScrambleStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_last_error(&message);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            ScrambleStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    (ScrambleStatus::NullPointer, format!("{what} is null"))
}

fn graph_err(e: impl std::fmt::Display) -> Failure {
    (ScrambleStatus::GraphError, e.to_string())
}

fn estimate_err(e: impl std::fmt::Display) -> Failure {
    (ScrambleStatus::EstimateError, e.to_string())
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn graph_ref<'a>(g: *const ScrambleGraph) -> Result<&'a Graph, Failure> {
    g.as_ref().map(|g| &g.inner).ok_or_else(|| null("graph"))
}

unsafe fn input_slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn output_slice<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts_mut(p, len))
}

unsafe fn emit_graph(built: Result<Graph, graphs::GraphError>, out: *mut *mut ScrambleGraph) -> Result<(), Failure> {
    let slot = out_ref(out, "out")?;
    let g = built.map_err(graph_err)?;
    *slot = Box::into_raw(Box::new(ScrambleGraph { inner: g }));
    Ok(())
}

/// Message for the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn scramble_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn scramble_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn scramble_graph_binary_tree(depth: u32, out: *mut *mut ScrambleGraph) -> ScrambleStatus {
    guard(|| emit_graph(graphs::build_binary_tree(depth), out))
}

/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn scramble_graph_zary_tree(
    z: usize,
    depth: u32,
    out: *mut *mut ScrambleGraph,
) -> ScrambleStatus {
    guard(|| emit_graph(graphs::build_zary_tree(z, depth), out))
}

/// # Safety
/// `dims` must point to `num_dims` side lengths; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scramble_graph_lattice(
    dims: *const usize,
    num_dims: usize,
    out: *mut *mut ScrambleGraph,
) -> ScrambleStatus {
    guard(|| {
        let dims = input_slice(dims, num_dims, "dims")?;
        emit_graph(graphs::build_lattice(dims), out)
    })
}

/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn scramble_graph_dumbbell(m: usize, out: *mut *mut ScrambleGraph) -> ScrambleStatus {
    guard(|| emit_graph(graphs::build_dumbbell(m), out))
}

/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn scramble_graph_complete(n: usize, out: *mut *mut ScrambleGraph) -> ScrambleStatus {
    guard(|| emit_graph(graphs::build_complete(n), out))
}

/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn scramble_graph_star(n: usize, out: *mut *mut ScrambleGraph) -> ScrambleStatus {
    guard(|| emit_graph(graphs::build_star(n), out))
}

/// Parses the edge-list text format. Disconnected graphs are rejected.
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scramble_graph_from_edge_list(
    text: *const c_char,
    out: *mut *mut ScrambleGraph,
) -> ScrambleStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (ScrambleStatus::InvalidArgument, format!("text is not UTF-8: {e}")))?;
        emit_graph(Graph::from_edge_list(text, false), out)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `g` must come from a builder in this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn scramble_graph_free(g: *mut ScrambleGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scramble_graph_num_vertices(g: *const ScrambleGraph, out: *mut usize) -> ScrambleStatus {
    guard(|| {
        let n = graph_ref(g)?.num_vertices();
        *out_ref(out, "out")? = n;
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scramble_graph_num_edges(g: *const ScrambleGraph, out: *mut usize) -> ScrambleStatus {
    guard(|| {
        let n = graph_ref(g)?.num_edges();
        *out_ref(out, "out")? = n;
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scramble_graph_diameter(g: *const ScrambleGraph, out: *mut usize) -> ScrambleStatus {
    guard(|| {
        let d = graph_ref(g)?.diameter();
        *out_ref(out, "out")? = d;
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scramble_graph_distance(
    g: *const ScrambleGraph,
    x: usize,
    y: usize,
    out: *mut usize,
) -> ScrambleStatus {
    guard(|| {
        let g = graph_ref(g)?;
        if x >= g.num_vertices() || y >= g.num_vertices() {
            return Err((
                ScrambleStatus::InvalidArgument,
                format!("vertex out of range ({x}, {y})"),
            ));
        }
        *out_ref(out, "out")? = g.distance(x, y);
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle; `x_out` and `y_out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scramble_graph_farthest_pair(
    g: *const ScrambleGraph,
    x_out: *mut usize,
    y_out: *mut usize,
) -> ScrambleStatus {
    guard(|| {
        let (x, y) = graph_ref(g)?.farthest_pair();
        let xo = out_ref(x_out, "x_out")?;
        let yo = out_ref(y_out, "y_out")?;
        *xo = x;
        *yo = y;
        Ok(())
    })
}

/// Writes the edge list into `buf` (NUL-terminated). `needed` receives the
/// required size including the terminator; if `capacity` is smaller the
/// status is `BufferTooSmall` and `buf` is untouched.
///
/// # Safety
/// `g` must be live; `buf` must hold `capacity` bytes; `needed` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scramble_graph_to_edge_list(
    g: *const ScrambleGraph,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> ScrambleStatus {
    guard(|| {
        let text = graph_ref(g)?.to_edge_list();
        let total = text.len() + 1;
        *out_ref(needed, "needed")? = total;
        if capacity < total {
            return Err((
                ScrambleStatus::BufferTooSmall,
                format!("need {total} bytes, got {capacity}"),
            ));
        }
        let dst = output_slice(buf.cast::<u8>(), capacity, "buf")?;
        dst[..text.len()].copy_from_slice(text.as_bytes());
        dst[text.len()] = 0;
        Ok(())
    })
}

unsafe fn cut_from(g: &Graph, side_a: *const usize, len: usize) -> Result<Cut, Failure> {
    let side = input_slice(side_a, len, "side_a")?;
    Cut::new(g.num_vertices(), side.iter().copied()).map_err(graph_err)
}

/// Number of edges between `side_a` and its complement.
///
/// # Safety
/// `g` must be live; `side_a` must hold `len` vertex ids; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scramble_cut_size(
    g: *const ScrambleGraph,
    side_a: *const usize,
    len: usize,
    out: *mut usize,
) -> ScrambleStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let cut = cut_from(g, side_a, len)?;
        *out_ref(out, "out")? = g.cut_size(&cut).map_err(graph_err)?;
        Ok(())
    })
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scramble_equilibrium_occupancy(
    local_dim: u32,
    num_vertices: usize,
    out: *mut f64,
) -> ScrambleStatus {
    guard(|| {
        let v = estimators::equilibrium_occupancy(local_dim, num_vertices).map_err(estimate_err)?;
        *out_ref(out, "out")? = v;
        Ok(())
    })
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scramble_otoc_from_occupancy(p: f64, local_dim: u32, out: *mut f64) -> ScrambleStatus {
    guard(|| {
        let v = estimators::otoc_from_occupancy(p, local_dim).map_err(estimate_err)?;
        *out_ref(out, "out")? = v;
        Ok(())
    })
}

/// # Safety
/// `g` must be live; `side_a` must hold `len` vertex ids; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scramble_tau_ent_lower_bound(
    g: *const ScrambleGraph,
    side_a: *const usize,
    len: usize,
    local_dim: u32,
    fraction: f64,
    out: *mut f64,
) -> ScrambleStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let cut = cut_from(g, side_a, len)?;
        let v = estimators::tau_ent_lower_bound(g, &cut, local_dim, fraction).map_err(estimate_err)?;
        *out_ref(out, "out")? = v;
        Ok(())
    })
}

/// # Safety
/// `value_out` and `capped_out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scramble_decoding_fidelity_bound(
    otoc_value: f64,
    d_a: u32,
    value_out: *mut f64,
    capped_out: *mut bool,
) -> ScrambleStatus {
    guard(|| {
        let b = estimators::decoding_fidelity_bound(otoc_value, d_a).map_err(estimate_err)?;
        let v = out_ref(value_out, "value_out")?;
        let c = out_ref(capped_out, "capped_out")?;
        *v = b.value;
        *c = b.capped;
        Ok(())
    })
}

/// Monte Carlo `P(label(target) = N)` at each of `num_times` sorted sample
/// times, written to `estimates` and `std_errors` (each `num_times` long).
/// `schedule` is a [`ScrambleSchedule`] value. Results depend only on
/// `seed`, not on thread count.
///
/// # Safety
/// `g` must be live; `times`, `estimates` and `std_errors` must each hold
/// `num_times` doubles.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn scramble_occupancy_curve(
    g: *const ScrambleGraph,
    local_dim: u32,
    start: usize,
    target: usize,
    schedule: u32,
    horizon: f64,
    times: *const f64,
    num_times: usize,
    num_traj: u64,
    seed: u64,
    estimates: *mut f64,
    std_errors: *mut f64,
) -> ScrambleStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let times = input_slice(times, num_times, "times")?;
        let est = output_slice(estimates, num_times, "estimates")?;
        let se = output_slice(std_errors, num_times, "std_errors")?;
        let kind = match schedule {
            0 => ScheduleKind::PoissonRateOne,
            1 => ScheduleKind::UniformRandomEdge,
            2 => ScheduleKind::RoundRobin,
            3 => ScheduleKind::RandomPermutationSweeps,
            other => return Err((ScrambleStatus::InvalidArgument, format!("unknown schedule {other}"))),
        };
        let sim = |e: scramble_core::chain::ChainError| (ScrambleStatus::SimulationError, e.to_string());
        let params = ChainParams::new(local_dim).map_err(sim)?;
        let sched = Schedule::new(kind, horizon).map_err(sim)?;
        let curve = occupancy_curve(
            g,
            &params,
            start,
            target,
            &sched,
            times,
            num_traj,
            &RngPolicy::new(seed),
        )
        .map_err(sim)?;
        est.copy_from_slice(&curve.estimates);
        se.copy_from_slice(&curve.std_errors);
        Ok(())
    })
}

/// Conservative crossing time of a sampled curve (see the estimators
/// module). `censored_out` is set when the curve never crosses, in which
/// case `tau_out` is the last sample time.
///
/// # Safety
/// The three input arrays must hold `len` doubles; outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn scramble_tau_from_curve(
    times: *const f64,
    estimates: *const f64,
    std_errors: *const f64,
    len: usize,
    threshold: f64,
    tau_out: *mut f64,
    censored_out: *mut bool,
) -> ScrambleStatus {
    guard(|| {
        let curve = SaturationCurve {
            observable: Observable::Otoc,
            sample_times: input_slice(times, len, "times")?.to_vec(),
            estimates: input_slice(estimates, len, "estimates")?.to_vec(),
            std_errors: input_slice(std_errors, len, "std_errors")?.to_vec(),
            num_traj: 0,
        };
        let r = estimators::tau_from_curve(&curve, threshold).map_err(estimate_err)?;
        let t = out_ref(tau_out, "tau_out")?;
        let c = out_ref(censored_out, "censored_out")?;
        *t = r.tau;
        *c = r.censored;
        Ok(())
    })
}

/// Null-safe helper so callers can reset their handle slot.
///
/// # Safety
/// `slot` must be null or a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn scramble_graph_release(slot: *mut *mut ScrambleGraph) {
    if let Some(s) = slot.as_mut() {
        scramble_graph_free(*s);
        *s = ptr::null_mut();
    }
}
