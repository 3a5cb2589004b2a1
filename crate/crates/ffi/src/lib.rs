//! C ABI for `schmidt-lens`.
//!
//! Conventions:
//!
//! - Every function returns an [`SlStatus`]; results go through out-pointers.
//! - Channels are opaque [`SlChannel`] handles, released with
//!   [`sl_channel_free`].
//! - Complex matrices are row-major arrays of interleaved `(re, im)` doubles,
//!   so an `n × n` matrix occupies `2 n²` doubles.
//! - After a non-`SL_OK` status, [`sl_last_error_message`] describes the
//!   failure on the calling thread.
//!
//! Panics never cross the boundary; they are reported as `SL_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use schmidt_lens::analysis::{snac_min_eig, witness_threshold, SimplexPoint};
use schmidt_lens::channels::{ChannelFamily, QuantumChannel};
use schmidt_lens::schmidt::{
    certify_sn_above, dephasing_sn_threshold, eb_threshold, isotropic_sn_threshold, sn_upper_bound_via_kraus, witness,
    witness_value, Verdict,
};
use schmidt_lens::states::{DensityMatrix, SystemDims};
use schmidt_lens::{ComplexMatrix, Error, C64};

/// Status codes returned by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    Numerical = 4,
    Parse = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlFamily {
    Depolarizing = 0,
    Dephasing = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlVerdict {
    CertifiedAbove = 0,
    ConsistentWithAtMost = 1,
    Inconclusive = 2,
}

impl From<Verdict> for SlVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::CertifiedAbove => SlVerdict::CertifiedAbove,
            Verdict::ConsistentWithAtMost => SlVerdict::ConsistentWithAtMost,
            Verdict::Inconclusive => SlVerdict::Inconclusive,
        }
    }
}

/// Opaque channel handle.
pub struct SlChannel {
    inner: QuantumChannel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> SlStatus {
    match e {
        Error::DimensionMismatch(_)
        | Error::NotSquare { .. }
        | Error::NonSquareChannel { .. }
        | Error::NotBipartite => SlStatus::DimensionMismatch,
        Error::ChannelFormat(_) => SlStatus::Parse,
        Error::InvalidDimension(_)
        | Error::InvalidRank { .. }
        | Error::ParamOutOfRange { .. }
        | Error::UnknownFamily(_)
        | Error::UnknownSuite(_)
        | Error::InvalidSimplexPoint(_)
        | Error::EmptyKraus
        | Error::NonFinite
        | Error::NotNormalized(_)
        | Error::NotTracePreserving(_) => SlStatus::InvalidArgument,
        _ => SlStatus::Numerical,
    }
}

/// Failure carried out of a guarded body.
struct Fail(SlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(SlStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording the error message and converting panics.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SlStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SlStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_error(format!("panic: {msg}"));
            SlStatus::Panic
        }
    }
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn channel_ref<'a>(ch: *const SlChannel) -> Result<&'a QuantumChannel, Fail> {
    ch.as_ref().map(|c| &c.inner).ok_or_else(|| null("channel"))
}

unsafe fn emit_channel(ch: QuantumChannel, out: *mut *mut SlChannel) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(SlChannel { inner: ch })));
    Ok(())
}

/// Reads an `n × n` interleaved complex matrix.
unsafe fn read_matrix(data: *const f64, n: usize) -> Result<ComplexMatrix, Fail> {
    if data.is_null() {
        return Err(null("matrix data"));
    }
    let raw = std::slice::from_raw_parts(data, 2 * n * n);
    let entries = raw.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect();
    Ok(ComplexMatrix::from_vec(n, n, entries)?)
}

unsafe fn read_state(d: usize, rho: *const f64) -> Result<DensityMatrix, Fail> {
    let m = read_matrix(rho, d * d)?;
    Ok(DensityMatrix::new(m, SystemDims::Bipartite(d, d))?)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn sl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Depolarizing channel `ρ ↦ p ρ + (1 − p) I/d`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn sl_channel_depolarizing(d: usize, p: f64, out: *mut *mut SlChannel) -> SlStatus {
    guard(|| emit_channel(QuantumChannel::depolarizing(d, p)?, out))
}

/// Dephasing channel `ρ ↦ v ρ + (1 − v) diag(ρ)`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn sl_channel_dephasing(d: usize, v: f64, out: *mut *mut SlChannel) -> SlStatus {
    guard(|| emit_channel(QuantumChannel::dephasing(d, v)?, out))
}

/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn sl_channel_identity(d: usize, out: *mut *mut SlChannel) -> SlStatus {
    guard(|| {
        if d == 0 {
            return Err(Fail(SlStatus::InvalidArgument, "dimension must be positive".into()));
        }
        emit_channel(QuantumChannel::identity(d), out)
    })
}

/// Parses the JSON Kraus format `{d_in, d_out, kraus}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_channel_from_json(json: *const c_char, out: *mut *mut SlChannel) -> SlStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Fail(SlStatus::Parse, format!("channel JSON is not UTF-8: {e}")))?;
        emit_channel(QuantumChannel::from_json(text)?, out)
    })
}

/// Releases a handle; NULL is ignored.
///
/// # Safety
/// `ch` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sl_channel_free(ch: *mut SlChannel) {
    if !ch.is_null() {
        drop(Box::from_raw(ch));
    }
}

/// # Safety
/// `ch` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_channel_dims(ch: *const SlChannel, d_in: *mut usize, d_out: *mut usize) -> SlStatus {
    guard(|| {
        let c = channel_ref(ch)?;
        write_out(d_in, c.d_in(), "d_in")?;
        write_out(d_out, c.d_out(), "d_out")
    })
}

/// # Safety
/// `ch` must be a live handle; `n` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_channel_num_kraus(ch: *const SlChannel, n: *mut usize) -> SlStatus {
    guard(|| write_out(n, channel_ref(ch)?.kraus().len(), "n"))
}

/// Writes the normalized Choi matrix (`d² × d²`, interleaved) into `buf`.
/// `required` receives the number of doubles needed; pass `buf = NULL` to
/// query it.
///
/// # Safety
/// `buf` must hold `len` doubles when non-NULL; `required` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn sl_channel_choi(
    ch: *const SlChannel,
    buf: *mut f64,
    len: usize,
    required: *mut usize,
) -> SlStatus {
    guard(|| {
        let choi = channel_ref(ch)?.choi()?;
        let m = choi.matrix();
        let need = 2 * m.rows() * m.cols();
        if !required.is_null() {
            required.write(need);
        }
        if buf.is_null() {
            return if required.is_null() { Err(null("buf")) } else { Ok(()) };
        }
        if len < need {
            return Err(Fail(
                SlStatus::BufferTooSmall,
                format!("buffer holds {len} doubles, {need} needed"),
            ));
        }
        let dst = std::slice::from_raw_parts_mut(buf, need);
        for (pair, z) in dst.chunks_exact_mut(2).zip(m.as_slice()) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}

/// `Tr(W_r C)` for the channel's Choi state `C`.
///
/// # Safety
/// `ch` must be a live handle; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_choi_witness_value(ch: *const SlChannel, r: usize, value: *mut f64) -> SlStatus {
    guard(|| {
        let c = channel_ref(ch)?;
        let w = witness(c.d_in(), r)?;
        let v = witness_value(&w, &c.choi()?.as_state())?;
        write_out(value, v, "value")
    })
}

/// `Tr(W_r ρ)` for a `d ⊗ d` state given as a `d² × d²` interleaved matrix.
///
/// # Safety
/// `rho` must hold `2 d⁴` doubles; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_witness_value(d: usize, r: usize, rho: *const f64, value: *mut f64) -> SlStatus {
    guard(|| {
        let state = read_state(d, rho)?;
        write_out(value, witness_value(&witness(d, r)?, &state)?, "value")
    })
}

/// One-sided test for Schmidt number above `r` (witness and `Λ_{1/r}`).
///
/// # Safety
/// `rho` must hold `2 d⁴` doubles; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_certify_sn_above(
    d: usize,
    rho: *const f64,
    r: usize,
    tol: f64,
    verdict: *mut SlVerdict,
    evidence: *mut f64,
) -> SlStatus {
    guard(|| {
        let state = read_state(d, rho)?;
        let cert = certify_sn_above(&state, r, tol)?;
        write_out(verdict, cert.verdict.into(), "verdict")?;
        write_out(evidence, cert.evidence_value, "evidence")
    })
}

/// `(r d − 1)/(d² − 1)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_isotropic_sn_threshold(d: usize, r: usize, out: *mut f64) -> SlStatus {
    guard(|| write_out(out, isotropic_sn_threshold(d, r)?, "out"))
}

/// `(r − 1)/(d − 1)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_dephasing_sn_threshold(d: usize, r: usize, out: *mut f64) -> SlStatus {
    guard(|| write_out(out, dephasing_sn_threshold(d, r)?, "out"))
}

/// `1/(d + 1)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_eb_threshold(d: usize, out: *mut f64) -> SlStatus {
    guard(|| write_out(out, eb_threshold(d)?, "out"))
}

/// Bisected witness crossing of a named family on `[0, 1]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_witness_threshold(
    family: SlFamily,
    d: usize,
    r: usize,
    tol: f64,
    out: *mut f64,
) -> SlStatus {
    guard(|| {
        let fam = match family {
            SlFamily::Depolarizing => ChannelFamily::Depolarizing,
            SlFamily::Dephasing => ChannelFamily::Dephasing,
        };
        write_out(out, witness_threshold(&fam, d, r, tol)?, "out")
    })
}

/// Minimum eigenvalue of `(id ⊗ Λ_k)((Φ ⊗ Φ)(|ψ_q⟩⟨ψ_q|))` with
/// `|ψ_q⟩ = Σ_j √q_j |jj⟩`.
///
/// # Safety
/// `ch` must be a live handle, `q` must hold `q_len` doubles and `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_snac_min_eig(
    ch: *const SlChannel,
    q: *const f64,
    q_len: usize,
    k: f64,
    out: *mut f64,
) -> SlStatus {
    guard(|| {
        let c = channel_ref(ch)?;
        if q.is_null() {
            return Err(null("q"));
        }
        let point = SimplexPoint::new(std::slice::from_raw_parts(q, q_len).to_vec())?;
        write_out(out, snac_min_eig(c, &point, k)?, "out")
    })
}

/// Largest canonical Kraus rank: an upper bound on the Schmidt number of the
/// Choi state.
///
/// # Safety
/// `ch` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_sn_upper_bound(ch: *const SlChannel, out: *mut usize) -> SlStatus {
    guard(|| write_out(out, sn_upper_bound_via_kraus(channel_ref(ch)?)?, "out"))
}
