//! C ABI for `graphsig`.
//!
//! Graphs, spectra and kernels are opaque heap handles created by `gs_*`
//! constructors and released with the matching `*_free`. Every fallible
//! call returns a [`GsStatus`]; on failure a message for the calling thread
//! is available from [`gs_last_error`]. Signals are caller-owned `double`
//! arrays of length `n`, and all indices are 0-based.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use graphsig::denoise::{tikhonov_denoise, TikhonovMode};
use graphsig::operators::{filter_chebyshev, filter_exact, translate};
use graphsig::spectral::lambda_max_bound;
use graphsig::{Error, Graph, LaplacianVariant, SpectralKernel, Spectrum};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    Disconnected = 3,
    Unsupported = 4,
    Domain = 5,
    Numeric = 6,
    Panic = 7,
}

/// Laplacian used by a spectrum.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsVariant {
    Combinatorial = 0,
    Normalized = 1,
}

/// Opaque weighted undirected graph.
pub struct GsGraph(Graph);

/// Opaque Laplacian eigendecomposition.
pub struct GsSpectrum(Spectrum);

/// Opaque spectral kernel.
pub struct GsKernel(SpectralKernel);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GsStatus {
    match e {
        Error::Disconnected { .. } => GsStatus::Disconnected,
        Error::UnsupportedVariant(_) => GsStatus::Unsupported,
        Error::Domain { .. } => GsStatus::Domain,
        Error::Numeric(_) => GsStatus::Numeric,
        _ => GsStatus::InvalidArgument,
    }
}

struct Failure(GsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(GsStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> GsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => GsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            GsStatus::Panic
        }
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn input<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], Failure> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, n))
}

unsafe fn output<'a>(p: *mut f64, n: usize) -> Result<&'a mut [f64], Failure> {
    if n == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null("output buffer"));
    }
    Ok(slice::from_raw_parts_mut(p, n))
}

fn copy_out(src: &[f64], dst: &mut [f64]) -> Result<(), Failure> {
    if src.len() != dst.len() {
        return Err(Error::LengthMismatch {
            expected: src.len(),
            actual: dst.len(),
        }
        .into());
    }
    dst.copy_from_slice(src);
    Ok(())
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message describing the most recent failure on this thread, or NULL.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a graph on `n` vertices from `m` undirected edges
/// `(src[k], dst[k], weight[k])`.
///
/// # Safety
/// `src`, `dst` and `weight` must each point to `m` readable elements (or
/// may be NULL when `m == 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_from_edges(
    n: usize,
    src: *const usize,
    dst: *const usize,
    weight: *const f64,
    m: usize,
    out: *mut *mut GsGraph,
) -> GsStatus {
    guard(|| {
        let (src, dst) = if m == 0 {
            (&[][..], &[][..])
        } else if src.is_null() || dst.is_null() {
            return Err(null("edge endpoints"));
        } else {
            (slice::from_raw_parts(src, m), slice::from_raw_parts(dst, m))
        };
        let weight = input(weight, m, "weights")?;
        let edges = (0..m).map(|k| (src[k], dst[k], weight[k]));
        store(out, GsGraph(Graph::from_edges(n, edges)?))
    })
}

/// # Safety
/// `g` must be NULL or a handle from [`gs_graph_from_edges`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_free(g: *mut GsGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, or 0 for a NULL handle.
///
/// # Safety
/// `g` must be NULL or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_num_vertices(g: *const GsGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.num_vertices())
}

/// # Safety
/// `g` must be NULL or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_num_edges(g: *const GsGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.num_edges())
}

/// Upper bound on the largest combinatorial Laplacian eigenvalue.
///
/// # Safety
/// `g` must be a live graph handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gs_lambda_max_bound(g: *const GsGraph, out: *mut f64) -> GsStatus {
    guard(|| {
        let g = handle(g, "graph")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = lambda_max_bound(&g.0);
        Ok(())
    })
}

/// Full eigendecomposition of the Laplacian selected by `variant`, one of
/// the [`GsVariant`] values. Fails with `GS_STATUS_DISCONNECTED` on
/// disconnected graphs.
///
/// # Safety
/// `g` must be a live graph handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gs_spectrum_compute(
    g: *const GsGraph,
    variant: u32,
    out: *mut *mut GsSpectrum,
) -> GsStatus {
    guard(|| {
        let g = handle(g, "graph")?;
        let variant = match variant {
            v if v == GsVariant::Combinatorial as u32 => LaplacianVariant::Combinatorial,
            v if v == GsVariant::Normalized as u32 => LaplacianVariant::Normalized,
            v => return Err(Error::Parameter(format!("unknown Laplacian variant {v}")).into()),
        };
        store(out, GsSpectrum(Spectrum::compute(&g.0, variant)?))
    })
}

/// # Safety
/// `s` must be NULL or a live spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn gs_spectrum_free(s: *mut GsSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of eigenpairs, or 0 for a NULL handle.
///
/// # Safety
/// `s` must be NULL or a live spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn gs_spectrum_len(s: *const GsSpectrum) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

/// Copies the ascending eigenvalues into `out[0..n]`.
///
/// # Safety
/// `s` must be a live spectrum handle and `out` must hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn gs_spectrum_eigenvalues(s: *const GsSpectrum, out: *mut f64, n: usize) -> GsStatus {
    guard(|| copy_out(handle(s, "spectrum")?.0.eigenvalues(), output(out, n)?))
}

/// Copies eigenvector `l` into `out[0..n]`.
///
/// # Safety
/// `s` must be a live spectrum handle and `out` must hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn gs_spectrum_eigenvector(
    s: *const GsSpectrum,
    l: usize,
    out: *mut f64,
    n: usize,
) -> GsStatus {
    guard(|| {
        let s = &handle(s, "spectrum")?.0;
        if l >= s.len() {
            return Err(Error::IndexOutOfRange { index: l, limit: s.len() }.into());
        }
        copy_out(s.eigenvector(l), output(out, n)?)
    })
}

unsafe fn transform(
    s: *const GsSpectrum,
    f: *const f64,
    out: *mut f64,
    n: usize,
    op: impl FnOnce(&Spectrum, &[f64]) -> graphsig::Result<Vec<f64>>,
) -> GsStatus {
    guard(|| {
        let s = &handle(s, "spectrum")?.0;
        let f = input(f, n, "signal")?;
        let r = op(s, f)?;
        copy_out(&r, output(out, n)?)
    })
}

/// Graph Fourier transform of `f[0..n]` into `out[0..n]`.
///
/// # Safety
/// `s` must be a live spectrum handle; `f` and `out` must hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn gs_gft(s: *const GsSpectrum, f: *const f64, out: *mut f64, n: usize) -> GsStatus {
    transform(s, f, out, n, |s, f| s.gft(f))
}

/// Inverse graph Fourier transform.
///
/// # Safety
/// Same as [`gs_gft`].
#[no_mangle]
pub unsafe extern "C" fn gs_igft(s: *const GsSpectrum, fhat: *const f64, out: *mut f64, n: usize) -> GsStatus {
    transform(s, fhat, out, n, |s, f| s.igft(f))
}

unsafe fn make_kernel(out: *mut *mut GsKernel, k: graphsig::Result<SpectralKernel>) -> GsStatus {
    guard(|| store(out, GsKernel(k?)))
}

/// Heat kernel `exp(-tau * lambda)`, `tau >= 0`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_kernel_heat(tau: f64, out: *mut *mut GsKernel) -> GsStatus {
    let k = if tau >= 0.0 {
        Ok(SpectralKernel::Heat { tau })
    } else {
        Err(Error::Parameter(format!("tau must be nonnegative, got {tau}")))
    };
    make_kernel(out, k)
}

/// Tikhonov kernel `1 / (1 + gamma * lambda)`, `gamma > 0`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_kernel_tikhonov(gamma: f64, out: *mut *mut GsKernel) -> GsStatus {
    let k = if gamma > 0.0 {
        Ok(SpectralKernel::Tikhonov { gamma })
    } else {
        Err(Error::Parameter(format!("gamma must be positive, got {gamma}")))
    };
    make_kernel(out, k)
}

/// Polynomial kernel `sum_k coeffs[k] * lambda^k`.
///
/// # Safety
/// `coeffs` must hold `len` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_kernel_polynomial(coeffs: *const f64, len: usize, out: *mut *mut GsKernel) -> GsStatus {
    guard(|| {
        if len == 0 {
            return Err(Error::Parameter("polynomial needs at least one coefficient".into()).into());
        }
        let c = input(coeffs, len, "coefficients")?;
        store(out, GsKernel(SpectralKernel::Polynomial(c.to_vec())))
    })
}

/// # Safety
/// `k` must be NULL or a live kernel handle.
#[no_mangle]
pub unsafe extern "C" fn gs_kernel_free(k: *mut GsKernel) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// Exact spectral filtering `U k(Lambda) U^T f`.
///
/// # Safety
/// Handles must be live; `f` and `out` must hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn gs_filter_exact(
    s: *const GsSpectrum,
    k: *const GsKernel,
    f: *const f64,
    out: *mut f64,
    n: usize,
) -> GsStatus {
    guard(|| {
        let k = &handle(k, "kernel")?.0;
        let s = &handle(s, "spectrum")?.0;
        let r = filter_exact(s, k, input(f, n, "signal")?)?;
        copy_out(&r, output(out, n)?)
    })
}

/// Chebyshev approximation of order `order` of the combinatorial-Laplacian
/// filter; needs no eigendecomposition.
///
/// # Safety
/// Handles must be live; `f` and `out` must hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn gs_filter_chebyshev(
    g: *const GsGraph,
    k: *const GsKernel,
    order: usize,
    f: *const f64,
    out: *mut f64,
    n: usize,
) -> GsStatus {
    guard(|| {
        let g = &handle(g, "graph")?.0;
        let k = &handle(k, "kernel")?.0;
        let r = filter_chebyshev(g, k, order, input(f, n, "signal")?)?;
        copy_out(&r, output(out, n)?)
    })
}

/// Kernel translated to `vertex`: `sqrt(N) * k(L) delta_vertex`.
///
/// # Safety
/// Handles must be live; `out` must hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn gs_translate(
    s: *const GsSpectrum,
    k: *const GsKernel,
    vertex: usize,
    out: *mut f64,
    n: usize,
) -> GsStatus {
    guard(|| {
        let s = &handle(s, "spectrum")?.0;
        let k = &handle(k, "kernel")?.0;
        copy_out(&translate(s, k, vertex)?, output(out, n)?)
    })
}

/// Tikhonov denoising: solves `(I + gamma L) x = y` by conjugate gradients.
///
/// # Safety
/// `g` must be live; `y` and `out` must hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn gs_tikhonov_denoise(
    g: *const GsGraph,
    y: *const f64,
    gamma: f64,
    out: *mut f64,
    n: usize,
) -> GsStatus {
    guard(|| {
        let g = &handle(g, "graph")?.0;
        let r = tikhonov_denoise(g, input(y, n, "signal")?, gamma, TikhonovMode::ConjugateGradient)?;
        copy_out(&r, output(out, n)?)
    })
}
