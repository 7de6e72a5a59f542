//! C ABI over the hypersimplify library.
//!
//! Hypergraphs and results are opaque heap handles released with their
//! `*_free` function. Every fallible call returns an [`HsStatus`]; on
//! failure, [`hs_last_error_message`] describes it until the next call on
//! the same thread. Panics never cross the boundary.
//!
//! Buffers follow the two-call convention: pass a null buffer (or a short
//! one) to learn the required length through `needed`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hypersimplify::io::{self, Format, ResultDocument};
use hypersimplify::simplify::{self, SimplificationParams, SimplificationResult};
use hypersimplify::{Error, Hypergraph, Side, SingletonMode, WeightScheme};

/// Opaque hypergraph handle.
pub struct HsHypergraph(Hypergraph);

/// Opaque simplification result handle.
pub struct HsResult(SimplificationResult);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    ValidationError = 4,
    BarNotActive = 5,
    UnknownId = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

pub const HS_FORMAT_JSON: u32 = 0;
pub const HS_FORMAT_CSV: u32 = 1;

pub const HS_SIDE_HYPEREDGE: u32 = 0;
pub const HS_SIDE_VERTEX: u32 = 1;

pub const HS_WEIGHT_JACCARD: u32 = 0;
pub const HS_WEIGHT_OVERLAP: u32 = 1;

pub const HS_SINGLETONS_GREYOUT: u32 = 0;
pub const HS_SINGLETONS_FILTER: u32 = 1;

/// Pipeline parameters. Enumerations are plain integers taking the
/// `HS_SIDE_*`, `HS_WEIGHT_*` and `HS_SINGLETONS_*` values.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HsParams {
    pub side: u32,
    pub s: usize,
    pub weight: u32,
    pub epsilon: f64,
    pub collapse_vertices: bool,
    pub collapse_edges: bool,
    pub singletons: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(e: &Error) -> HsStatus {
    match e {
        Error::Parameter(_) => HsStatus::InvalidArgument,
        Error::Parse { .. } | Error::Json(_) => HsStatus::ParseError,
        Error::Validation(_) => HsStatus::ValidationError,
        Error::BarNotActive(_) | Error::BarNotExpanded(_) => HsStatus::BarNotActive,
        Error::UnknownId { .. } => HsStatus::UnknownId,
        Error::Io(_) => HsStatus::Internal,
    }
}

/// Runs `f`, recording any error or panic.
fn guard(f: impl FnOnce() -> Result<(), HsStatus>) -> HsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            HsStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            HsStatus::Internal
        }
    }
}

fn fail(e: Error) -> HsStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null(what: &str) -> HsStatus {
    set_error(format!("{what} is null"));
    HsStatus::NullPointer
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, HsStatus> {
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), HsStatus> {
    if out.is_null() {
        return Err(null(what));
    }
    unsafe { out.write(value) };
    Ok(())
}

/// Copies `items` into `buf` when it fits and always reports the length.
unsafe fn fill<T: Copy>(items: &[T], buf: *mut T, capacity: usize, needed: *mut usize) -> Result<(), HsStatus> {
    unsafe { write_out(needed, items.len(), "needed")? };
    if buf.is_null() || capacity < items.len() {
        if items.is_empty() {
            return Ok(());
        }
        set_error(format!("buffer holds {capacity}, need {}", items.len()));
        return Err(HsStatus::BufferTooSmall);
    }
    unsafe { ptr::copy_nonoverlapping(items.as_ptr(), buf, items.len()) };
    Ok(())
}

/// Message describing why the previous call on this thread failed, or
/// null if it succeeded. Valid until the next call from the same thread.
#[no_mangle]
pub extern "C" fn hs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Defaults: hyperedge side, s = 1, Jaccard, epsilon 0, no collapse, grey out.
#[no_mangle]
pub extern "C" fn hs_params_default() -> HsParams {
    HsParams {
        side: HS_SIDE_HYPEREDGE,
        s: 1,
        weight: HS_WEIGHT_JACCARD,
        epsilon: 0.0,
        collapse_vertices: false,
        collapse_edges: false,
        singletons: HS_SINGLETONS_GREYOUT,
    }
}

fn convert(p: &HsParams) -> Result<SimplificationParams, HsStatus> {
    let bad = |what: &str, v: u32| {
        set_error(format!("unknown {what} value {v}"));
        HsStatus::InvalidArgument
    };
    let side = match p.side {
        HS_SIDE_HYPEREDGE => Side::Hyperedge,
        HS_SIDE_VERTEX => Side::Vertex,
        v => return Err(bad("side", v)),
    };
    let weight = match p.weight {
        HS_WEIGHT_JACCARD => WeightScheme::Jaccard,
        HS_WEIGHT_OVERLAP => WeightScheme::Overlap,
        v => return Err(bad("weight", v)),
    };
    let singletons = match p.singletons {
        HS_SINGLETONS_GREYOUT => SingletonMode::GreyOut,
        HS_SINGLETONS_FILTER => SingletonMode::Filter,
        v => return Err(bad("singletons", v)),
    };
    Ok(SimplificationParams::new(side)
        .with_s(p.s)
        .with_weight(weight)
        .with_epsilon(p.epsilon)
        .with_collapse(p.collapse_vertices, p.collapse_edges)
        .with_singletons(singletons))
}

/// Parses `len` bytes of JSON (`HS_FORMAT_JSON`) or incidence CSV
/// (`HS_FORMAT_CSV`) into a new hypergraph.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_hypergraph_parse(
    data: *const u8,
    len: usize,
    format: u32,
    out: *mut *mut HsHypergraph,
) -> HsStatus {
    guard(|| {
        if data.is_null() && len > 0 {
            return Err(null("data"));
        }
        let bytes = if len == 0 { &[][..] } else { unsafe { std::slice::from_raw_parts(data, len) } };
        let format = match format {
            HS_FORMAT_JSON => Format::Json,
            HS_FORMAT_CSV => Format::Csv,
            v => {
                set_error(format!("unknown format value {v}"));
                return Err(HsStatus::InvalidArgument);
            }
        };
        if out.is_null() {
            return Err(null("out"));
        }
        let h = io::parse_hypergraph(bytes, format).map_err(fail)?;
        unsafe { write_out(out, Box::into_raw(Box::new(HsHypergraph(h))), "out") }
    })
}

/// # Safety
/// `h` must be null or a handle from [`hs_hypergraph_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hs_hypergraph_free(h: *mut HsHypergraph) {
    if !h.is_null() {
        drop(unsafe { Box::from_raw(h) });
    }
}

/// # Safety
/// `h` must be a live handle; both counts must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_hypergraph_counts(
    h: *const HsHypergraph,
    vertices: *mut usize,
    hyperedges: *mut usize,
) -> HsStatus {
    guard(|| {
        let h = unsafe { as_ref(h, "hypergraph")? };
        unsafe {
            write_out(vertices, h.0.vertex_count(), "vertices")?;
            write_out(hyperedges, h.0.edge_count(), "hyperedges")
        }
    })
}

/// Runs the pipeline on `h`.
///
/// # Safety
/// `h` and `params` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_simplify(
    h: *const HsHypergraph,
    params: *const HsParams,
    out: *mut *mut HsResult,
) -> HsStatus {
    guard(|| {
        let h = unsafe { as_ref(h, "hypergraph")? };
        let p = convert(unsafe { as_ref(params, "params")? })?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = simplify::simplify(&h.0, &p).map_err(fail)?;
        unsafe { write_out(out, Box::into_raw(Box::new(HsResult(r))), "out") }
    })
}

/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn hs_result_free(r: *mut HsResult) {
    if !r.is_null() {
        drop(unsafe { Box::from_raw(r) });
    }
}

/// Bar lengths in bar-id order; essential bars read as `INFINITY`.
///
/// # Safety
/// `r` must be live; `buf` must hold `capacity` doubles or be null.
#[no_mangle]
pub unsafe extern "C" fn hs_result_bar_lengths(
    r: *const HsResult,
    buf: *mut f64,
    capacity: usize,
    needed: *mut usize,
) -> HsStatus {
    guard(|| {
        let r = unsafe { as_ref(r, "result")? };
        let lengths: Vec<f64> = r.0.barcode.bars.iter().map(|b| b.length.unwrap_or(f64::INFINITY)).collect();
        unsafe { fill(&lengths, buf, capacity, needed) }
    })
}

/// Number of simplified elements.
///
/// # Safety
/// `r` must be live; `count` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_result_class_count(r: *const HsResult, count: *mut usize) -> HsStatus {
    guard(|| {
        let r = unsafe { as_ref(r, "result")? };
        unsafe { write_out(count, r.0.class_count(), "count") }
    })
}

/// Original ids merged into simplified element `class_id`.
///
/// # Safety
/// `r` must be live; `buf` must hold `capacity` values or be null.
#[no_mangle]
pub unsafe extern "C" fn hs_result_class_members(
    r: *const HsResult,
    class_id: usize,
    buf: *mut usize,
    capacity: usize,
    needed: *mut usize,
) -> HsStatus {
    guard(|| {
        let r = unsafe { as_ref(r, "result")? };
        let members = r.0.class_members(class_id).map_err(fail)?;
        unsafe { fill(members, buf, capacity, needed) }
    })
}

/// New result re-cut at `epsilon`, keeping expanded bars.
///
/// # Safety
/// `r` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_result_with_epsilon(r: *const HsResult, epsilon: f64, out: *mut *mut HsResult) -> HsStatus {
    guard(|| {
        let r = unsafe { as_ref(r, "result")? };
        if out.is_null() {
            return Err(null("out"));
        }
        let next = r.0.with_epsilon(epsilon).map_err(fail)?;
        unsafe { write_out(out, Box::into_raw(Box::new(HsResult(next))), "out") }
    })
}

/// New result with the merge behind `bar_id` undone.
///
/// # Safety
/// `r` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_result_expand_bar(r: *const HsResult, bar_id: usize, out: *mut *mut HsResult) -> HsStatus {
    guard(|| {
        let r = unsafe { as_ref(r, "result")? };
        if out.is_null() {
            return Err(null("out"));
        }
        let next = simplify::expand_bar(&r.0, bar_id).map_err(fail)?;
        unsafe { write_out(out, Box::into_raw(Box::new(HsResult(next))), "out") }
    })
}

/// The result document as a NUL-terminated JSON string; release it with
/// [`hs_string_free`].
///
/// # Safety
/// `r` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_result_to_json(r: *const HsResult, out: *mut *mut c_char) -> HsStatus {
    guard(|| {
        let r = unsafe { as_ref(r, "result")? };
        if out.is_null() {
            return Err(null("out"));
        }
        let bytes = io::serialize_result(&ResultDocument::new(r.0.clone())).map_err(fail)?;
        let text = CString::new(bytes).map_err(|_| {
            set_error("document contains a NUL byte");
            HsStatus::Internal
        })?;
        unsafe { write_out(out, text.into_raw(), "out") }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
