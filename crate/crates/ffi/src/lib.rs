//! C ABI for `coded-gray`.
//!
//! Schemes are opaque handles created with [`cg_scheme_new`] and released with
//! [`cg_scheme_free`]. Words cross the boundary packed MSB first, `ceil(N / 8)`
//! bytes for an `N`-bit word. Every fallible call returns a [`CgStatus`].

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use coded_gray::channel::BscChannel;
use coded_gray::{build_scheme, BitWord, CodeParams, Error, RobustGrayScheme, SchemeKind};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    LengthMismatch = 4,
    BufferTooSmall = 5,
    ConstructionFailed = 6,
    Panic = 7,
}

/// Scheme selector for `cg_scheme_new`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgSchemeKind {
    Lp4 = 0,
    Fw = 1,
    CodedGray = 2,
}

/// Opaque scheme handle.
pub struct CgScheme {
    inner: Box<dyn RobustGrayScheme>,
}

impl From<&Error> for CgStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::OutOfRange { .. } => CgStatus::OutOfRange,
            Error::LengthMismatch { .. } => CgStatus::LengthMismatch,
            Error::InvalidParameter(_) | Error::Parse(_) => CgStatus::InvalidArgument,
            Error::Construction(_) => CgStatus::ConstructionFailed,
        }
    }
}

fn guard(f: impl FnOnce() -> Result<(), CgStatus>) -> CgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CgStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => CgStatus::Panic,
    }
}

fn kind_from_raw(kind: u32) -> Result<SchemeKind, CgStatus> {
    match kind {
        0 => Ok(SchemeKind::Lp4),
        1 => Ok(SchemeKind::Fw),
        2 => Ok(SchemeKind::CodedGray),
        _ => Err(CgStatus::InvalidArgument),
    }
}

unsafe fn scheme_ref<'a>(s: *const CgScheme) -> Result<&'a dyn RobustGrayScheme, CgStatus> {
    s.as_ref()
        .map(|s| s.inner.as_ref())
        .ok_or(CgStatus::NullPointer)
}

unsafe fn bytes_in<'a>(buf: *const u8, len: usize) -> Result<&'a [u8], CgStatus> {
    if buf.is_null() {
        return Err(CgStatus::NullPointer);
    }
    Ok(slice::from_raw_parts(buf, len))
}

unsafe fn write_word(word: &BitWord, buf: *mut u8, buf_len: usize) -> Result<(), CgStatus> {
    if buf.is_null() {
        return Err(CgStatus::NullPointer);
    }
    let bytes = word.to_bytes();
    if buf_len < bytes.len() {
        return Err(CgStatus::BufferTooSmall);
    }
    ptr::copy_nonoverlapping(bytes.as_ptr(), buf, bytes.len());
    Ok(())
}

/// Bytes needed to hold a packed word of `bits` bits.
#[no_mangle]
pub extern "C" fn cg_word_bytes(bits: usize) -> usize {
    bits.div_ceil(8)
}

/// Static description of a status code. Never returns NULL.
#[no_mangle]
pub extern "C" fn cg_status_str(status: CgStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        CgStatus::Ok => b"ok\0",
        CgStatus::NullPointer => b"null pointer\0",
        CgStatus::InvalidArgument => b"invalid argument\0",
        CgStatus::OutOfRange => b"value out of range\0",
        CgStatus::LengthMismatch => b"word length mismatch\0",
        CgStatus::BufferTooSmall => b"buffer too small\0",
        CgStatus::ConstructionFailed => b"code construction failed\0",
        CgStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Builds a scheme over an `[nb, kb]` inner code with `s` staircase block-rows.
/// `kind` is a `CgSchemeKind` value. On success `*out` owns a new handle.
///
/// # Safety
/// `out` must be NULL or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_scheme_new(
    kind: u32,
    kb: usize,
    nb: usize,
    s: usize,
    inner_seed: u64,
    out: *mut *mut CgScheme,
) -> CgStatus {
    guard(|| {
        if out.is_null() {
            return Err(CgStatus::NullPointer);
        }
        *out = ptr::null_mut();
        let kind = kind_from_raw(kind)?;
        let code = CodeParams::new(kb, nb, s)
            .with_seed(inner_seed)
            .staircase()
            .map_err(|e| CgStatus::from(&e))?;
        let inner = build_scheme(kind, code).map_err(|e| CgStatus::from(&e))?;
        *out = Box::into_raw(Box::new(CgScheme { inner }));
        Ok(())
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `scheme` must be NULL or a handle from `cg_scheme_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cg_scheme_free(scheme: *mut CgScheme) {
    if !scheme.is_null() {
        drop(Box::from_raw(scheme));
    }
}

/// Word length N in bits.
///
/// # Safety
/// `scheme` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cg_scheme_word_len(scheme: *const CgScheme, out: *mut usize) -> CgStatus {
    guard(|| {
        let s = scheme_ref(scheme)?;
        let out = out.as_mut().ok_or(CgStatus::NullPointer)?;
        *out = s.word_len();
        Ok(())
    })
}

/// Number of encodable integers m; valid inputs are `1..=m`.
///
/// # Safety
/// `scheme` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cg_scheme_size(scheme: *const CgScheme, out: *mut u64) -> CgStatus {
    guard(|| {
        let s = scheme_ref(scheme)?;
        let out = out.as_mut().ok_or(CgStatus::NullPointer)?;
        *out = s.size();
        Ok(())
    })
}

/// Distance M between consecutive milestones.
///
/// # Safety
/// `scheme` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cg_scheme_step(scheme: *const CgScheme, out: *mut u64) -> CgStatus {
    guard(|| {
        let s = scheme_ref(scheme)?;
        let out = out.as_mut().ok_or(CgStatus::NullPointer)?;
        *out = s.step();
        Ok(())
    })
}

/// Encodes `x` into `buf`, which must hold at least `cg_word_bytes(N)` bytes.
///
/// # Safety
/// `scheme` must be a live handle; `buf` must be valid for `buf_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn cg_scheme_encode(
    scheme: *const CgScheme,
    x: u64,
    buf: *mut u8,
    buf_len: usize,
) -> CgStatus {
    guard(|| {
        let s = scheme_ref(scheme)?;
        let word = s.encode(x).map_err(|e| CgStatus::from(&e))?;
        write_word(&word, buf, buf_len)
    })
}

/// Decodes a packed, possibly noisy word into `*out_x`.
///
/// # Safety
/// `scheme` must be a live handle; `buf` must be valid for `buf_len` bytes;
/// `out_x` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cg_scheme_decode(
    scheme: *const CgScheme,
    buf: *const u8,
    buf_len: usize,
    out_x: *mut u64,
) -> CgStatus {
    guard(|| {
        let s = scheme_ref(scheme)?;
        let bytes = bytes_in(buf, buf_len)?;
        let out_x = out_x.as_mut().ok_or(CgStatus::NullPointer)?;
        let word = BitWord::from_bytes(bytes, s.word_len()).ok_or(CgStatus::LengthMismatch)?;
        *out_x = s.decode(&word).map_err(|e| CgStatus::from(&e))?;
        Ok(())
    })
}

/// Passes a packed `bits`-bit word through a binary symmetric channel with
/// crossover `p`. The noise is a pure function of `(seed, index)`. `input`
/// and `output` may alias.
///
/// # Safety
/// `input` must be valid for `cg_word_bytes(bits)` bytes and `output` for
/// `out_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn cg_bsc_transmit(
    p: f64,
    seed: u64,
    index: u64,
    input: *const u8,
    bits: usize,
    output: *mut u8,
    out_len: usize,
) -> CgStatus {
    guard(|| {
        let channel = BscChannel::new(p, seed).map_err(|e| CgStatus::from(&e))?;
        let word = BitWord::from_bytes(bytes_in(input, bits.div_ceil(8))?, bits)
            .ok_or(CgStatus::LengthMismatch)?;
        write_word(&channel.transmit(&word, index), output, out_len)
    })
}
