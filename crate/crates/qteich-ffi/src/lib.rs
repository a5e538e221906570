//! C ABI for the `qteich` library.
//!
//! The exported surface follows the usual conventions for C bindings:
//!
//! * **Opaque handles.** [`QteichTriangulation`] and [`QteichRep`] are
//!   heap-allocated objects behind raw pointers.  Every handle returned by a
//!   constructor must be released with the matching `*_free` function;
//!   handles are not thread-safe to mutate concurrently (all functions here
//!   only read them, so sharing a handle between threads for reads is fine).
//! * **Integer status codes.** Every fallible function returns a
//!   [`QteichStatus`].  `Ok` is zero; everything else is an error and leaves
//!   a human-readable message in thread-local storage, retrievable with
//!   [`qteich_last_error`].
//! * **Out-parameters.** Results are written through caller-provided
//!   pointers.  Complex numbers are passed as interleaved `double` pairs
//!   `[re, im]`; a buffer for `k` complex numbers holds `2 * k` doubles.
//!   Matrices are row-major.
//! * **Zero-based indices.** Edges and faces are indexed from 0 in this API,
//!   matching the underlying library.  (The JSON artifacts and the CLI index
//!   from 1; the JSON readers and writers here do the conversion.)
//!
//! Panics never unwind across the boundary: they are caught and reported as
//! [`QteichStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use qteich::intertwine;
use qteich::qalgebra::QParams;
use qteich::rep::LocalRep;
use qteich::surface::Triangulation;
use qteich::{fixtures, holonomy, json, transport, Error};

/// Status code returned by every fallible function of this ABI.
///
/// Values 1..=18 mirror the error kinds of the underlying library; values
/// from 100 up are produced by the binding layer itself.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QteichStatus {
    /// Success.
    Ok = 0,
    /// Malformed combinatorial data (bad face table, edge used three times, ...).
    Surface = 1,
    /// The requested edge cannot be flipped (boundary or self-folded).
    NotFlippable = 2,
    /// Invalid root-of-unity parameters (N < 2, even c, or gcd(c, N) > 1).
    Params = 3,
    /// Weight-system failure: wrong arity or a zero weight.
    Weights = 4,
    /// A flip was requested at a weight too close to the singular value -1.
    SingularWeight = 5,
    /// Representation-level failure (load/weight mismatch, off-scalar power, ...).
    Rep = 6,
    /// The two representations of an intertwiner solve are not isomorphic.
    NotIsomorphic = 7,
    /// The intertwining system failed the rank-one null-space gate.
    NullSpaceGate = 8,
    /// A phase that must be an N-th root of unity failed to snap to one.
    PhaseSnap = 9,
    /// The per-face phase equations of a same-triangulation solve are insoluble.
    InconsistentLoads = 10,
    /// The weights are not fixed by the requested path + relabeling.
    NotFixedPoint = 11,
    /// Degenerate development (coincident ideal vertices).
    Degenerate = 12,
    /// A matrix that must be inverted is numerically singular.
    SingularMatrix = 13,
    /// The peripheral element is too close to +/- identity for an eigenline.
    AmbiguousEigenline = 14,
    /// Requested operator dimension exceeds the configured cap.
    DimCap = 15,
    /// I/O failure.
    Io = 16,
    /// Malformed JSON.
    Json = 17,
    /// Malformed inline input (unknown fixture name, bad literal, ...).
    Parse = 18,
    /// A required pointer argument was null.
    NullArgument = 100,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 101,
    /// A caller-provided buffer has the wrong length for the result.
    BufferLength = 102,
    /// An internal panic was caught at the boundary.
    Panic = 103,
}

/// Triangulated punctured surface (opaque).
pub struct QteichTriangulation {
    inner: Triangulation,
}

/// Local representation of the edge algebra at a root of unity (opaque).
pub struct QteichRep {
    inner: LocalRep,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(e: &Error) -> QteichStatus {
    match e {
        Error::Surface(_) => QteichStatus::Surface,
        Error::NotFlippable { .. } => QteichStatus::NotFlippable,
        Error::Params(_) => QteichStatus::Params,
        Error::Weights(_) => QteichStatus::Weights,
        Error::SingularWeight { .. } => QteichStatus::SingularWeight,
        Error::Rep(_) => QteichStatus::Rep,
        Error::NotIsomorphic(_) => QteichStatus::NotIsomorphic,
        Error::NullSpaceGate { .. } => QteichStatus::NullSpaceGate,
        Error::PhaseSnap { .. } => QteichStatus::PhaseSnap,
        Error::InconsistentLoads(_) => QteichStatus::InconsistentLoads,
        Error::NotFixedPoint(_) => QteichStatus::NotFixedPoint,
        Error::Degenerate(_) => QteichStatus::Degenerate,
        Error::SingularMatrix { .. } => QteichStatus::SingularMatrix,
        Error::AmbiguousEigenline(_) => QteichStatus::AmbiguousEigenline,
        Error::DimCap { .. } => QteichStatus::DimCap,
        Error::Io(_) => QteichStatus::Io,
        Error::Json(_) => QteichStatus::Json,
        Error::Parse(_) => QteichStatus::Parse,
    }
}

fn fail(e: &Error) -> QteichStatus {
    set_last_error(&e.to_string());
    status_of(e)
}

fn fail_with(status: QteichStatus, msg: &str) -> QteichStatus {
    set_last_error(msg);
    status
}

/// Run `f`, catching panics so they never unwind into C.
fn guarded(f: impl FnOnce() -> QteichStatus) -> QteichStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail_with(QteichStatus::Panic, &format!("internal panic: {msg}"))
        }
    }
}

/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, QteichStatus> {
    if ptr.is_null() {
        return Err(fail_with(QteichStatus::NullArgument, "string argument is null"));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail_with(QteichStatus::InvalidUtf8, "string argument is not valid UTF-8"))
}

/// # Safety
/// `ptr` must be null or valid for reads of `2 * len` doubles.
unsafe fn read_complexes(ptr: *const f64, len: usize) -> Result<Vec<Complex64>, QteichStatus> {
    if ptr.is_null() {
        return Err(fail_with(QteichStatus::NullArgument, "weight buffer is null"));
    }
    let raw = std::slice::from_raw_parts(ptr, 2 * len);
    Ok(raw.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect())
}

/// # Safety
/// `ptr` must be null or valid for writes of `2 * zs.len()` doubles.
unsafe fn write_complexes(ptr: *mut f64, zs: &[Complex64]) -> Result<(), QteichStatus> {
    if ptr.is_null() {
        return Err(fail_with(QteichStatus::NullArgument, "output buffer is null"));
    }
    let raw = std::slice::from_raw_parts_mut(ptr, 2 * zs.len());
    for (pair, z) in raw.chunks_exact_mut(2).zip(zs) {
        pair[0] = z.re;
        pair[1] = z.im;
    }
    Ok(())
}

/// Copy a string into `buf` (capacity `cap` bytes, NUL always written when
/// `cap > 0`) and return the size the full string needs, including the NUL.
unsafe fn copy_string(s: &str, buf: *mut c_char, cap: usize) -> usize {
    let bytes = s.as_bytes();
    if !buf.is_null() && cap > 0 {
        let n = bytes.len().min(cap - 1);
        std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
        *buf.add(n) = 0;
    }
    bytes.len() + 1
}

unsafe fn triangulation_ref<'a>(
    t: *const QteichTriangulation,
) -> Result<&'a Triangulation, QteichStatus> {
    if t.is_null() {
        return Err(fail_with(QteichStatus::NullArgument, "triangulation handle is null"));
    }
    Ok(&(*t).inner)
}

unsafe fn rep_ref<'a>(r: *const QteichRep) -> Result<&'a LocalRep, QteichStatus> {
    if r.is_null() {
        return Err(fail_with(QteichStatus::NullArgument, "representation handle is null"));
    }
    Ok(&(*r).inner)
}

fn box_out<T>(out: *mut *mut T, value: T) -> QteichStatus {
    if out.is_null() {
        return fail_with(QteichStatus::NullArgument, "output handle pointer is null");
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    clear_last_error();
    QteichStatus::Ok
}

// ---------------------------------------------------------------------------
// Library metadata and error reporting
// ---------------------------------------------------------------------------

/// Version of the underlying library, as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qteich_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Short static name for a status code (e.g. `"ok"`, `"params"`).
#[no_mangle]
pub extern "C" fn qteich_status_name(status: QteichStatus) -> *const c_char {
    let name: &'static str = match status {
        QteichStatus::Ok => "ok\0",
        QteichStatus::Surface => "surface\0",
        QteichStatus::NotFlippable => "not-flippable\0",
        QteichStatus::Params => "params\0",
        QteichStatus::Weights => "weights\0",
        QteichStatus::SingularWeight => "singular-weight\0",
        QteichStatus::Rep => "rep\0",
        QteichStatus::NotIsomorphic => "not-isomorphic\0",
        QteichStatus::NullSpaceGate => "null-space-gate\0",
        QteichStatus::PhaseSnap => "phase-snap\0",
        QteichStatus::InconsistentLoads => "inconsistent-loads\0",
        QteichStatus::NotFixedPoint => "not-fixed-point\0",
        QteichStatus::Degenerate => "degenerate\0",
        QteichStatus::SingularMatrix => "singular-matrix\0",
        QteichStatus::AmbiguousEigenline => "ambiguous-eigenline\0",
        QteichStatus::DimCap => "dim-cap\0",
        QteichStatus::Io => "io\0",
        QteichStatus::Json => "json\0",
        QteichStatus::Parse => "parse\0",
        QteichStatus::NullArgument => "null-argument\0",
        QteichStatus::InvalidUtf8 => "invalid-utf8\0",
        QteichStatus::BufferLength => "buffer-length\0",
        QteichStatus::Panic => "panic\0",
    };
    name.as_ptr().cast()
}

/// Copy the message of the most recent error on this thread into `buf`
/// (capacity `cap`; the copy is NUL-terminated and truncated to fit).
///
/// Returns the full size the message needs, including the NUL terminator,
/// or 0 if no error has occurred since the last successful call.  Call with
/// `buf == NULL` (or `cap == 0`) to query the size first.
///
/// # Safety
/// `buf` must be null or valid for writes of `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn qteich_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        None => {
            if !buf.is_null() && cap > 0 {
                *buf = 0;
            }
            0
        }
        Some(msg) => copy_string(&msg.to_string_lossy(), buf, cap),
    })
}

// ---------------------------------------------------------------------------
// Triangulations
// ---------------------------------------------------------------------------

/// Build one of the built-in example surfaces by name: `"triangle"`,
/// `"square"`, `"pentagon"`, `"hexagon"`, `"torus"`, `"sphere4"`, or
/// `"monogon"`.
///
/// On success writes a fresh handle to `*out`; release it with
/// [`qteich_triangulation_free`].
///
/// # Safety
/// `name` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qteich_triangulation_fixture(
    name: *const c_char,
    out: *mut *mut QteichTriangulation,
) -> QteichStatus {
    guarded(|| {
        let name = match read_str(name) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match fixtures::by_name(name) {
            Ok(t) => box_out(out, QteichTriangulation { inner: t }),
            Err(e) => fail(&e),
        }
    })
}

/// Parse a triangulation from a JSON document (either the gluing-pair form
/// `{"faces": m, "gluing": [[[j, s], [j2, s2]], ...]}` or an explicit
/// 1-based face table `{"faces": [[e1, e2, e3], ...]}`).
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qteich_triangulation_from_json(
    json: *const c_char,
    out: *mut *mut QteichTriangulation,
) -> QteichStatus {
    guarded(|| {
        let text = match read_str(json) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let value: serde_json::Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => return fail(&Error::Json(e)),
        };
        match json::triangulation_from_value(&value) {
            Ok(t) => box_out(out, QteichTriangulation { inner: t }),
            Err(e) => fail(&e),
        }
    })
}

/// Serialize a triangulation to its JSON document (gluing-pair form) and
/// copy it into `buf` (capacity `cap`, NUL-terminated, truncated to fit).
///
/// Returns the full size the document needs including the NUL terminator,
/// or 0 if `t` is null.  Call with `buf == NULL` to query the size.
///
/// # Safety
/// `t` must be a live handle; `buf` null or valid for `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn qteich_triangulation_to_json(
    t: *const QteichTriangulation,
    buf: *mut c_char,
    cap: usize,
) -> usize {
    if t.is_null() {
        return 0;
    }
    let doc = json::triangulation_to_value(&(*t).inner).to_string();
    copy_string(&doc, buf, cap)
}

/// Release a triangulation handle.  Passing null is a no-op.
///
/// # Safety
/// `t` must be null or a handle returned by this library, released once.
#[no_mangle]
pub unsafe extern "C" fn qteich_triangulation_free(t: *mut QteichTriangulation) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of triangular faces, or 0 if `t` is null.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qteich_triangulation_faces(t: *const QteichTriangulation) -> usize {
    if t.is_null() {
        0
    } else {
        (*t).inner.m()
    }
}

/// Number of edges, or 0 if `t` is null.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qteich_triangulation_edges(t: *const QteichTriangulation) -> usize {
    if t.is_null() {
        0
    } else {
        (*t).inner.n_edges()
    }
}

/// Write the skew-symmetric exponent matrix of the edge algebra into `out`
/// as a row-major `edges x edges` block of 64-bit integers.  `len` must be
/// exactly `edges * edges`.
///
/// # Safety
/// `t` must be a live handle and `out` valid for writes of `len` integers.
#[no_mangle]
pub unsafe extern "C" fn qteich_sigma(
    t: *const QteichTriangulation,
    out: *mut i64,
    len: usize,
) -> QteichStatus {
    guarded(|| {
        let t = match triangulation_ref(t) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let n = t.n_edges();
        if out.is_null() {
            return fail_with(QteichStatus::NullArgument, "output buffer is null");
        }
        if len != n * n {
            return fail_with(
                QteichStatus::BufferLength,
                &format!("sigma needs a buffer of {} entries, got {len}", n * n),
            );
        }
        let sigma = t.sigma_matrix();
        let raw = std::slice::from_raw_parts_mut(out, len);
        for (i, row) in sigma.iter().enumerate() {
            raw[i * n..(i + 1) * n].copy_from_slice(row);
        }
        clear_last_error();
        QteichStatus::Ok
    })
}

/// Flip the diagonal `edge` (0-based) and write the new triangulation to
/// `*out`.  Release the new handle with [`qteich_triangulation_free`].
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qteich_flip(
    t: *const QteichTriangulation,
    edge: usize,
    out: *mut *mut QteichTriangulation,
) -> QteichStatus {
    guarded(|| {
        let t = match triangulation_ref(t) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match t.flip(edge) {
            Ok(flipped) => box_out(out, QteichTriangulation { inner: flipped }),
            Err(e) => fail(&e),
        }
    })
}

/// Transport a weight system through the flip of `edge` (0-based): reads
/// `n_weights` complex weights (interleaved `[re, im]`, one per edge) and
/// writes the same number of transported weights for the flipped
/// triangulation to `out`.
///
/// # Safety
/// `weights` must hold `2 * n_weights` doubles and `out` must have room for
/// the same number.
#[no_mangle]
pub unsafe extern "C" fn qteich_flip_weights(
    t: *const QteichTriangulation,
    weights: *const f64,
    n_weights: usize,
    edge: usize,
    out: *mut f64,
) -> QteichStatus {
    guarded(|| {
        let t = match triangulation_ref(t) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let x = match read_complexes(weights, n_weights) {
            Ok(x) => x,
            Err(status) => return status,
        };
        match transport::flip_weights(t, &x, edge) {
            Ok(y) => match write_complexes(out, &y) {
                Ok(()) => {
                    clear_last_error();
                    QteichStatus::Ok
                }
                Err(status) => status,
            },
            Err(e) => fail(&e),
        }
    })
}

// ---------------------------------------------------------------------------
// Representations
// ---------------------------------------------------------------------------

/// Build the canonical local representation of the edge algebra at
/// `q = -exp(i pi c / N)` from one nonzero complex weight per edge.
///
/// The total load is fixed to `omega^load_root` times the principal N-th
/// root of the product of the weights, where `omega = q^2`.  `dim_cap`
/// bounds the total operator dimension `N^faces` (use e.g. 4096).
///
/// # Safety
/// `t` must be a live handle, `weights` must hold `2 * n_weights` doubles,
/// and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qteich_rep_build(
    t: *const QteichTriangulation,
    n: usize,
    c: i64,
    weights: *const f64,
    n_weights: usize,
    load_root: i64,
    dim_cap: usize,
    out: *mut *mut QteichRep,
) -> QteichStatus {
    guarded(|| {
        let t = match triangulation_ref(t) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let x = match read_complexes(weights, n_weights) {
            Ok(x) => x,
            Err(status) => return status,
        };
        let params = match QParams::new(n, c) {
            Ok(p) => p,
            Err(e) => return fail(&e),
        };
        let product: Complex64 = x.iter().product();
        let h = params.principal_nth_root(product) * params.omega_pow(load_root);
        match LocalRep::from_edge_weights(t, &params, &x, h, dim_cap) {
            Ok(rep) => box_out(out, QteichRep { inner: rep }),
            Err(e) => fail(&e),
        }
    })
}

/// Release a representation handle.  Passing null is a no-op.
///
/// # Safety
/// `r` must be null or a handle returned by this library, released once.
#[no_mangle]
pub unsafe extern "C" fn qteich_rep_free(r: *mut QteichRep) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Total operator dimension (`N^faces`), or 0 if `r` is null.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qteich_rep_dim(r: *const QteichRep) -> usize {
    if r.is_null() {
        0
    } else {
        (*r).inner.dim()
    }
}

/// Classify a representation: the N-th power of each edge generator must be
/// scalar to relative tolerance `tol`; the scalars (one complex weight per
/// edge) are written to `out_x` and the total load to `out_h`.
///
/// `x_len` is the number of complex entries `out_x` can hold and must equal
/// the edge count.
///
/// # Safety
/// `r` must be a live handle, `out_x` valid for `2 * x_len` doubles, and
/// `out_h` valid for 2 doubles.
#[no_mangle]
pub unsafe extern "C" fn qteich_rep_classify(
    r: *const QteichRep,
    tol: f64,
    out_x: *mut f64,
    x_len: usize,
    out_h: *mut f64,
) -> QteichStatus {
    guarded(|| {
        let rep = match rep_ref(r) {
            Ok(rep) => rep,
            Err(status) => return status,
        };
        let edges = rep.triangulation().n_edges();
        if x_len != edges {
            return fail_with(
                QteichStatus::BufferLength,
                &format!("classification needs room for {edges} weights, got {x_len}"),
            );
        }
        if out_h.is_null() {
            return fail_with(QteichStatus::NullArgument, "load output pointer is null");
        }
        match rep.classify(tol) {
            Ok(class) => match write_complexes(out_x, &class.x) {
                Ok(()) => {
                    *out_h = class.h.re;
                    *out_h.add(1) = class.h.im;
                    clear_last_error();
                    QteichStatus::Ok
                }
                Err(status) => status,
            },
            Err(e) => fail(&e),
        }
    })
}

/// Solve the elementary intertwiner for the flip at `edge` (0-based): writes
/// the `dim x dim` operator row-major (interleaved complex) to `out_matrix`
/// and the worst relative residual of the five transported generator
/// relations to `out_residual`.
///
/// `matrix_len` is the number of complex entries `out_matrix` can hold and
/// must equal `dim * dim`.
///
/// # Safety
/// `r` must be a live handle, `out_matrix` valid for `2 * matrix_len`
/// doubles, and `out_residual` valid for one double.
#[no_mangle]
pub unsafe extern "C" fn qteich_rep_flip_intertwiner(
    r: *const QteichRep,
    edge: usize,
    out_matrix: *mut f64,
    matrix_len: usize,
    out_residual: *mut f64,
) -> QteichStatus {
    guarded(|| {
        let rep = match rep_ref(r) {
            Ok(rep) => rep,
            Err(status) => return status,
        };
        let dim = rep.dim();
        if matrix_len != dim * dim {
            return fail_with(
                QteichStatus::BufferLength,
                &format!("intertwiner needs room for {} entries, got {matrix_len}", dim * dim),
            );
        }
        if out_residual.is_null() {
            return fail_with(QteichStatus::NullArgument, "residual output pointer is null");
        }
        match intertwine::flip_step(rep, edge) {
            Ok(step) => {
                let m = &step.matrix;
                let flat: Vec<Complex64> =
                    (0..dim).flat_map(|i| (0..dim).map(move |j| m[(i, j)])).collect();
                match write_complexes(out_matrix, &flat) {
                    Ok(()) => {
                        *out_residual = step.residual;
                        clear_last_error();
                        QteichStatus::Ok
                    }
                    Err(status) => status,
                }
            }
            Err(e) => fail(&e),
        }
    })
}

// ---------------------------------------------------------------------------
// Holonomy
// ---------------------------------------------------------------------------

/// Develop the pleated surface for positive-real-capable weights and
/// recompute every interior edge weight as a cross-ratio of the developed
/// quad; writes the largest relative drift to `out_max_residual`.
///
/// # Safety
/// `t` must be a live handle, `weights` must hold `2 * n_weights` doubles,
/// and `out_max_residual` must be valid for one double.
#[no_mangle]
pub unsafe extern "C" fn qteich_holonomy_roundtrip(
    t: *const QteichTriangulation,
    weights: *const f64,
    n_weights: usize,
    out_max_residual: *mut f64,
) -> QteichStatus {
    guarded(|| {
        let t = match triangulation_ref(t) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let x = match read_complexes(weights, n_weights) {
            Ok(x) => x,
            Err(status) => return status,
        };
        if out_max_residual.is_null() {
            return fail_with(QteichStatus::NullArgument, "residual output pointer is null");
        }
        match holonomy::roundtrip_weights(t, &x) {
            Ok(report) => {
                *out_max_residual = report.max_residual;
                clear_last_error();
                QteichStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Check the signed total-load identity `(-1)^p a_1^{-1} ... a_p^{-1} =
/// x_1 ... x_n` over a closed surface, with the default lift signs.
///
/// Writes the signed eigenvalue product as `out_load[0..2]` (interleaved
/// complex), the relative residual of the identity to `out_residual`, and
/// the residual of the lift-free squared identity to `out_squared_residual`.
///
/// # Safety
/// `t` must be a live handle, `weights` must hold `2 * n_weights` doubles,
/// `out_load` must be valid for 2 doubles, and the two residual pointers
/// for one double each.
#[no_mangle]
pub unsafe extern "C" fn qteich_total_load(
    t: *const QteichTriangulation,
    weights: *const f64,
    n_weights: usize,
    out_load: *mut f64,
    out_residual: *mut f64,
    out_squared_residual: *mut f64,
) -> QteichStatus {
    guarded(|| {
        let t = match triangulation_ref(t) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let x = match read_complexes(weights, n_weights) {
            Ok(x) => x,
            Err(status) => return status,
        };
        if out_load.is_null() || out_residual.is_null() || out_squared_residual.is_null() {
            return fail_with(QteichStatus::NullArgument, "output pointer is null");
        }
        match holonomy::total_load_check(t, &x, None) {
            Ok(report) => {
                *out_load = report.product.re;
                *out_load.add(1) = report.product.im;
                *out_residual = report.residual;
                *out_squared_residual = report.squared_residual;
                clear_last_error();
                QteichStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

// ---------------------------------------------------------------------------
// Mapping-class invariants
// ---------------------------------------------------------------------------

/// Compute the projective invariants of the intertwiner assigned to a
/// mapping class, given as a flip path (0-based edges) followed by an edge
/// relabeling (`relabel[old] = new`, a permutation of `0..edges`) that fixes
/// the weight system.
///
/// Writes the scale-free trace modulus to `out_scale_free_trace` and the
/// trace phase reduced to the sector `[0, 2 pi / dim)` to
/// `out_phase_sector`.
///
/// # Safety
/// `t` must be a live handle; `weights`, `path`, and `relabel` must hold
/// `2 * n_weights` doubles, `path_len` and `relabel_len` entries; the two
/// output pointers must each be valid for one double.  `path` may be null
/// only when `path_len == 0`.
#[no_mangle]
pub unsafe extern "C" fn qteich_mapping_class_invariant(
    t: *const QteichTriangulation,
    n: usize,
    c: i64,
    weights: *const f64,
    n_weights: usize,
    path: *const usize,
    path_len: usize,
    relabel: *const usize,
    relabel_len: usize,
    load_root: i64,
    dim_cap: usize,
    out_scale_free_trace: *mut f64,
    out_phase_sector: *mut f64,
) -> QteichStatus {
    guarded(|| {
        let t = match triangulation_ref(t) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let x = match read_complexes(weights, n_weights) {
            Ok(x) => x,
            Err(status) => return status,
        };
        let params = match QParams::new(n, c) {
            Ok(p) => p,
            Err(e) => return fail(&e),
        };
        if (path.is_null() && path_len > 0) || relabel.is_null() {
            return fail_with(QteichStatus::NullArgument, "path or relabel buffer is null");
        }
        if out_scale_free_trace.is_null() || out_phase_sector.is_null() {
            return fail_with(QteichStatus::NullArgument, "output pointer is null");
        }
        let path = if path_len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(path, path_len)
        };
        let relabel = std::slice::from_raw_parts(relabel, relabel_len);
        match intertwine::mapping_class_invariant(t, &params, &x, path, relabel, load_root, dim_cap)
        {
            Ok(report) => {
                *out_scale_free_trace = report.scale_free_trace;
                *out_phase_sector = report.phase_sector;
                clear_last_error();
                QteichStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}
