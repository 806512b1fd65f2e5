//! C ABI over `pathgrid-core`.
//!
//! Every function returns a [`PgStatus`]; results go through out-pointers.
//! On failure the message is kept per thread and can be read with
//! [`pg_last_error_message`]. Objects are opaque handles released with the
//! matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::BufWriter;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pathgrid::constructions::{alpha_formula, ConstructionKind, ConstructionSpec};
use pathgrid::search::{self, FSearchOptions, SearchBudget, ValueKind};
use pathgrid::signed::{self, Parity, SignedMatrix};
use pathgrid::spectral::{self, Tolerances};
use pathgrid::{Error, PathPower, VertexSet};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    SizeCap = 3,
    Numeric = 4,
    BudgetExhausted = 5,
    Io = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgConstruction {
    Vk = 0,
    VkComplement = 1,
    Xk = 2,
    XkComplement = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgParity {
    Odd3 = 0,
    Even = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgValueKind {
    Exact = 0,
    Lower = 1,
    UpperUnproven = 2,
}

/// Outcome of [`pg_f_brute`]. `has_value` is 0 when the budget ran out
/// before any subset was scored.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PgFResult {
    pub has_value: u8,
    pub value: u64,
    pub kind: PgValueKind,
    pub alpha: u64,
    pub subsets_examined: u64,
}

pub struct PgGraph(PathPower);
pub struct PgVertexSet(VertexSet);
pub struct PgMatrix(SignedMatrix);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PgStatus {
    match e {
        Error::SizeCap { .. } => PgStatus::SizeCap,
        Error::BudgetExhausted(_) => PgStatus::BudgetExhausted,
        Error::Asymmetric { .. } | Error::NoConvergence { .. } | Error::Bracketing(_) => PgStatus::Numeric,
        Error::Io(_) | Error::Parse(_) => PgStatus::Io,
        _ => PgStatus::InvalidParameter,
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (PgStatus, String)>) -> PgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PgStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PgStatus::Panic
        }
    }
}

trait IntoFfi<T> {
    fn ffi(self) -> Result<T, (PgStatus, String)>;
}

impl<T> IntoFfi<T> for pathgrid::Result<T> {
    fn ffi(self) -> Result<T, (PgStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null(what: &str) -> (PgStatus, String) {
    (PgStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` must be null or valid for reads of `T`.
unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (PgStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `p` must be null or valid for writes of `T`.
unsafe fn put<T>(p: *mut T, v: T, what: &str) -> Result<(), (PgStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

fn to_u64(v: u128, what: &str) -> Result<u64, (PgStatus, String)> {
    u64::try_from(v).map_err(|_| (PgStatus::InvalidParameter, format!("{what} does not fit in 64 bits")))
}

fn value_kind(k: ValueKind) -> PgValueKind {
    match k {
        ValueKind::Exact => PgValueKind::Exact,
        ValueKind::Lower => PgValueKind::Lower,
        ValueKind::UpperUnproven => PgValueKind::UpperUnproven,
    }
}

fn parity(p: PgParity) -> Parity {
    match p {
        PgParity::Odd3 => Parity::Odd3,
        PgParity::Even => Parity::Even,
    }
}

/// Message for the last failed call on this thread, or null after a
/// successful one. Valid until the next call into this library.
#[no_mangle]
pub extern "C" fn pg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// NUL-terminated library version; static storage.
#[no_mangle]
pub extern "C" fn pg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ---------------------------------------------------------------------------
// Graphs and vertex sets

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_graph_new(m: u32, k: u32, size_cap: u64, out: *mut *mut PgGraph) -> PgStatus {
    guard(|| {
        let g = PathPower::with_cap(m, k, size_cap).ffi()?;
        put(out, Box::into_raw(Box::new(PgGraph(g))), "out")
    })
}

/// # Safety
/// `g` must be null or a handle from [`pg_graph_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pg_graph_free(g: *mut PgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_graph_n_vertices(g: *const PgGraph, out: *mut u64) -> PgStatus {
    guard(|| put(out, deref(g, "graph")?.0.n_vertices() as u64, "out"))
}

/// # Safety
/// `g` must be a live graph handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_graph_n_edges(g: *const PgGraph, out: *mut u64) -> PgStatus {
    guard(|| put(out, deref(g, "graph")?.0.n_edges() as u64, "out"))
}

/// Builds one of the named vertex-set constructions.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_construct(
    kind: PgConstruction,
    m: u32,
    k: u32,
    size_cap: u64,
    out: *mut *mut PgVertexSet,
) -> PgStatus {
    guard(|| {
        let kind = match kind {
            PgConstruction::Vk => ConstructionKind::Vk,
            PgConstruction::VkComplement => ConstructionKind::VkComplement,
            PgConstruction::Xk => ConstructionKind::Xk,
            PgConstruction::XkComplement => ConstructionKind::XkComplement,
        };
        let s = ConstructionSpec::new(m, k, kind).and_then(|c| c.build(size_cap)).ffi()?;
        put(out, Box::into_raw(Box::new(PgVertexSet(s))), "out")
    })
}

/// Vertex set from `len` ranks of the graph `g`.
///
/// # Safety
/// `g` must be a live graph handle, `ranks` valid for `len` reads (or null
/// with `len == 0`) and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_set_from_ranks(
    g: *const PgGraph,
    ranks: *const u64,
    len: usize,
    out: *mut *mut PgVertexSet,
) -> PgStatus {
    guard(|| {
        let g = deref(g, "graph")?;
        let ranks: &[u64] = if len == 0 {
            &[]
        } else if ranks.is_null() {
            return Err(null("ranks"));
        } else {
            std::slice::from_raw_parts(ranks, len)
        };
        let s = VertexSet::from_ranks(&g.0, ranks.iter().map(|&r| r as usize)).ffi()?;
        put(out, Box::into_raw(Box::new(PgVertexSet(s))), "out")
    })
}

/// # Safety
/// `s` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pg_set_free(s: *mut PgVertexSet) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live set handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_set_len(s: *const PgVertexSet, out: *mut u64) -> PgStatus {
    guard(|| put(out, deref(s, "set")?.0.len() as u64, "out"))
}

/// Copies the ranks in ascending order into `buf`. `*written` receives the
/// set size; if `cap` is smaller nothing is copied and the status is
/// `BufferTooSmall`.
///
/// # Safety
/// `s` must be a live set handle, `buf` valid for `cap` writes and
/// `written` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_set_ranks(
    s: *const PgVertexSet,
    buf: *mut u64,
    cap: usize,
    written: *mut usize,
) -> PgStatus {
    guard(|| {
        let s = &deref(s, "set")?.0;
        put(written, s.len(), "written")?;
        if cap < s.len() {
            return Err((PgStatus::BufferTooSmall, format!("need {} slots, got {cap}", s.len())));
        }
        if s.is_empty() {
            return Ok(());
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        for (i, r) in s.iter().enumerate() {
            buf.add(i).write(r as u64);
        }
        Ok(())
    })
}

/// Maximum degree of the induced subgraph.
///
/// # Safety
/// `s` must be a live set handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_set_max_degree(s: *const PgVertexSet, out: *mut u64) -> PgStatus {
    guard(|| {
        let d = deref(s, "set")?.0.induced_max_degree().ffi()?;
        put(out, d as u64, "out")
    })
}

// ---------------------------------------------------------------------------
// Signed matrices

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_matrix_build(
    parity_: PgParity,
    n: u32,
    k: u32,
    size_cap: u64,
    out: *mut *mut PgMatrix,
) -> PgStatus {
    guard(|| {
        let a = signed::build(parity(parity_), n, k, size_cap).ffi()?;
        put(out, Box::into_raw(Box::new(PgMatrix(a))), "out")
    })
}

/// # Safety
/// `a` must be null or a handle from [`pg_matrix_build`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pg_matrix_free(a: *mut PgMatrix) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// # Safety
/// `a` must be a live matrix handle; `dim` and `nnz` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_matrix_shape(a: *const PgMatrix, dim: *mut u64, nnz: *mut u64) -> PgStatus {
    guard(|| {
        let a = &deref(a, "matrix")?.0;
        put(dim, a.dim() as u64, "dim")?;
        put(nnz, a.nnz() as u64, "nnz")
    })
}

/// Entry `(i, j)`, 0-based, in `{-1, 0, 1}`.
///
/// # Safety
/// `a` must be a live matrix handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_matrix_entry(a: *const PgMatrix, i: u64, j: u64, out: *mut i8) -> PgStatus {
    guard(|| {
        let a = &deref(a, "matrix")?.0;
        let dim = a.dim() as u64;
        if i >= dim || j >= dim {
            return Err((PgStatus::InvalidParameter, format!("({i}, {j}) outside a {dim}x{dim} matrix")));
        }
        put(out, a.entry(i as usize, j as usize), "out")
    })
}

/// Writes MatrixMarket text to `path`.
///
/// # Safety
/// `a` must be a live matrix handle and `path` a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn pg_matrix_write_mtx(a: *const PgMatrix, path: *const c_char) -> PgStatus {
    guard(|| {
        let a = &deref(a, "matrix")?.0;
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|e| (PgStatus::InvalidParameter, format!("path is not UTF-8: {e}")))?;
        let f = File::create(path).map_err(|e| (PgStatus::Io, format!("{path}: {e}")))?;
        a.write_matrix_market(BufWriter::new(f)).ffi()
    })
}

// ---------------------------------------------------------------------------
// Numbers

/// Closed-form independence number `ceil(m^k / 2)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_alpha(m: u32, k: u32, out: *mut u64) -> PgStatus {
    guard(|| {
        if m < 2 || k < 1 {
            return Err((PgStatus::InvalidParameter, format!("need m >= 2 and k >= 1, got m={m} k={k}")));
        }
        let a = (m as u128)
            .checked_pow(k)
            .map(|_| alpha_formula(m, k))
            .ok_or((PgStatus::InvalidParameter, "m^k overflows".to_string()))?;
        put(out, to_u64(a, "alpha")?, "out")
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_beta(n: u32, tol: f64, out: *mut f64) -> PgStatus {
    guard(|| put(out, spectral::beta(n, tol).ffi()?, "out"))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_lower_bound_even(n: u32, k: u32, out: *mut u64) -> PgStatus {
    guard(|| put(out, search::lower_bound_even(n, k).ffi()?, "out"))
}

/// Closed-form value (odd `m`) or lower bound (even `m`).
///
/// # Safety
/// `value` and `kind` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_f_theorem(m: u32, k: u32, value: *mut u64, kind: *mut PgValueKind) -> PgStatus {
    guard(|| {
        let t = search::f_value_theorem(m, k).ffi()?;
        put(value, t.value, "value")?;
        put(kind, value_kind(t.kind), "kind")
    })
}

/// Exhaustive search for the minimum induced maximum degree over subsets of
/// size `alpha + s`. Zero for `max_subsets`, `max_seconds` or `workers`
/// selects the default.
///
/// # Safety
/// `g` must be a live graph handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_f_brute(
    g: *const PgGraph,
    s: u64,
    max_subsets: u64,
    max_seconds: f64,
    workers: u32,
    out: *mut PgFResult,
) -> PgStatus {
    guard(|| {
        let g = deref(g, "graph")?;
        let mut budget = SearchBudget::default();
        if max_subsets > 0 {
            budget.max_subsets = max_subsets;
        }
        if max_seconds > 0.0 {
            budget.max_seconds = max_seconds;
        }
        if workers > 0 {
            budget.workers = workers as usize;
        }
        let r = search::brute_force_f(&g.0, s as usize, &budget, &FSearchOptions::default()).ffi()?;
        put(
            out,
            PgFResult {
                has_value: r.value.is_some() as u8,
                value: r.value.unwrap_or(0) as u64,
                kind: value_kind(r.kind),
                alpha: r.alpha as u64,
                subsets_examined: r.subsets_examined,
            },
            "out",
        )
    })
}

/// Smallest positive eigenvalue of the even signed matrix `A_k` on
/// `P_(2n)^k`, from a dense solve.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_min_positive_eig_even(n: u32, k: u32, out: *mut f64) -> PgStatus {
    guard(|| {
        let v = spectral::min_positive_eig_even(n, k, &Tolerances::default()).ffi()?;
        put(out, v, "out")
    })
}

/// Runs every verification check; `*passed` is 1 when all pass.
///
/// # Safety
/// `passed` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_verify_all(max_size: u64, tol: f64, seed: u64, passed: *mut u8) -> PgStatus {
    guard(|| {
        let r = pathgrid::report::run_verify_all(max_size, tol, seed);
        put(passed, r.passed as u8, "passed")
    })
}
