//! C ABI for `bouquet`.
//!
//! Every fallible function returns a [`BouquetStatus`] and writes its
//! result through an out-pointer. On failure the message is available from
//! [`bouquet_last_error`] on the same thread. Models and addresses are
//! opaque handles released with their `_free` function; strings returned by
//! the library are released with [`bouquet_string_free`].
//!
//! Tracts are passed as integer indices: `k` for the exponential family and
//! `2k` (lower) or `2k + 1` (upper) for the sine family.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use bouquet::address::{embed_ordinate, lex_compare_ext, parse_address, AddressPoint};
use bouquet::brush::{brush_to_json, build_brush};
use bouquet::rays::{endpoint_estimate, trace_point};
use bouquet::{ComplexPoint, Error, ExternalAddress, LogModel, TractId};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BouquetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Panic = 3,
    Overflow = 10,
    OutOfH = 11,
    NoConvergence = 12,
    ModelMismatch = 13,
    NotInTract = 14,
    InfeasibleModel = 15,
    Parse = 16,
    EqualInputs = 17,
    UnsupportedAlphabet = 18,
    BadSpec = 19,
    NotInJulia = 20,
    LeftH = 21,
    Empty = 22,
    NoEndpointFound = 23,
    BadPhi = 24,
    AddressMismatch = 25,
    EmptyInput = 26,
    NotOnHair = 27,
    InvalidArgument = 28,
}

impl From<&Error> for BouquetStatus {
    fn from(e: &Error) -> BouquetStatus {
        match e {
            Error::Overflow(_) => BouquetStatus::Overflow,
            Error::OutOfH { .. } => BouquetStatus::OutOfH,
            Error::NoConvergence { .. } => BouquetStatus::NoConvergence,
            Error::ModelMismatch(_) => BouquetStatus::ModelMismatch,
            Error::NotInTract => BouquetStatus::NotInTract,
            Error::InfeasibleModel(_) => BouquetStatus::InfeasibleModel,
            Error::Parse(_) => BouquetStatus::Parse,
            Error::EqualInputs => BouquetStatus::EqualInputs,
            Error::UnsupportedAlphabet(_) => BouquetStatus::UnsupportedAlphabet,
            Error::BadSpec(_) => BouquetStatus::BadSpec,
            Error::NotInJulia { .. } => BouquetStatus::NotInJulia,
            Error::LeftH { .. } => BouquetStatus::LeftH,
            Error::Empty(_) => BouquetStatus::Empty,
            Error::NoEndpointFound(_) => BouquetStatus::NoEndpointFound,
            Error::BadPhi(_) => BouquetStatus::BadPhi,
            Error::AddressMismatch(_) => BouquetStatus::AddressMismatch,
            Error::EmptyInput => BouquetStatus::EmptyInput,
            Error::NotOnHair(_) => BouquetStatus::NotOnHair,
            Error::InvalidArgument(_) => BouquetStatus::InvalidArgument,
        }
    }
}

/// A complex number, `re + i·im`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BouquetComplex {
    pub re: f64,
    pub im: f64,
}

impl From<ComplexPoint> for BouquetComplex {
    fn from(z: ComplexPoint) -> BouquetComplex {
        BouquetComplex { re: z.re, im: z.im }
    }
}

impl From<BouquetComplex> for ComplexPoint {
    fn from(z: BouquetComplex) -> ComplexPoint {
        ComplexPoint::new(z.re, z.im)
    }
}

/// Opaque logarithmic model.
pub struct BouquetModel(LogModel);

/// Opaque external address.
pub struct BouquetAddress(ExternalAddress);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Fail(BouquetStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(BouquetStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(BouquetStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, records any failure and converts panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> BouquetStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            BouquetStatus::Ok
        }
        Ok(Err(Fail(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            BouquetStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(BouquetStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn tract(model: &LogModel, index: i64) -> Result<TractId, Fail> {
    TractId::from_index(&model.alphabet(), index)
        .ok_or_else(|| Fail(BouquetStatus::UnsupportedAlphabet, "model has no integer tract indices".into()))
}

fn new_model(out: *mut *mut BouquetModel, make: impl FnOnce() -> Result<LogModel, Error>) -> BouquetStatus {
    guard(|| {
        let m = make()?;
        unsafe { write(out, Box::into_raw(Box::new(BouquetModel(m))), "out") }
    })
}

/// Message of the last failed call on this thread; empty after a
/// successful call. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn bouquet_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// The exponential family `λe^w` with tract radius `r_f`, rejected unless
/// it is of disjoint type.
#[no_mangle]
pub extern "C" fn bouquet_model_exp(lambda: BouquetComplex, r_f: f64, out: *mut *mut BouquetModel) -> BouquetStatus {
    new_model(out, || LogModel::exp(lambda.into(), r_f))
}

/// The sine family `λ sin w` with tract radius `r_f`.
#[no_mangle]
pub extern "C" fn bouquet_model_sine(lambda: f64, r_f: f64, out: *mut *mut BouquetModel) -> BouquetStatus {
    new_model(out, || LogModel::sine(lambda, r_f))
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must come from a `bouquet_model_*` constructor and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn bouquet_model_free(model: *mut BouquetModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Whether the model's tract closures avoid the half-plane boundary.
///
/// # Safety
/// `model` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn bouquet_model_is_disjoint(model: *const BouquetModel, out: *mut bool) -> BouquetStatus {
    guard(|| write(out, deref(model, "model")?.0.validate_disjoint_type(), "out"))
}

/// The logarithmic transform `F(z)`.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bouquet_model_eval(
    model: *const BouquetModel,
    z: BouquetComplex,
    out: *mut BouquetComplex,
) -> BouquetStatus {
    guard(|| {
        let w = deref(model, "model")?.0.eval(z.into())?;
        write(out, w.into(), "out")
    })
}

/// The branch of `F^{-1}` onto the tract with index `tract_index`.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bouquet_model_inverse(
    model: *const BouquetModel,
    tract_index: i64,
    w: BouquetComplex,
    out: *mut BouquetComplex,
) -> BouquetStatus {
    guard(|| {
        let m = &deref(model, "model")?.0;
        let z = m.inverse_branch(&tract(m, tract_index)?, w.into())?;
        write(out, z.into(), "out")
    })
}

/// Index of the tract containing `z`. `*in_tract` is false, and `*index`
/// untouched, when `z` lies in no tract.
///
/// # Safety
/// `model` must be a live handle; `in_tract` and `index` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bouquet_model_classify(
    model: *const BouquetModel,
    z: BouquetComplex,
    in_tract: *mut bool,
    index: *mut i64,
) -> BouquetStatus {
    guard(|| {
        let found = deref(model, "model")?.0.classify(z.into())?;
        match found {
            Some(id) => {
                let i = id
                    .to_index()
                    .ok_or_else(|| Fail(BouquetStatus::UnsupportedAlphabet, "tract has no index".into()))?;
                write(index, i, "index")?;
                write(in_tract, true, "in_tract")
            }
            None => write(in_tract, false, "in_tract"),
        }
    })
}

/// Parses an address such as `"1 -1;0"` (preperiod, `;`, period).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bouquet_address_parse(text_: *const c_char, out: *mut *mut BouquetAddress) -> BouquetStatus {
    guard(|| {
        let a = parse_address(text(text_, "text")?)?;
        write(out, Box::into_raw(Box::new(BouquetAddress(a))), "out")
    })
}

/// Releases an address. Null is ignored.
///
/// # Safety
/// `address` must come from [`bouquet_address_parse`] and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn bouquet_address_free(address: *mut BouquetAddress) {
    if !address.is_null() {
        drop(Box::from_raw(address));
    }
}

/// Canonical text of an address, to be released with
/// [`bouquet_string_free`].
///
/// # Safety
/// `address` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bouquet_address_to_string(
    address: *const BouquetAddress,
    out: *mut *mut c_char,
) -> BouquetStatus {
    guard(|| {
        let s = deref(address, "address")?.0.to_string();
        write(out, CString::new(s).unwrap_or_default().into_raw(), "out")
    })
}

/// Lexicographic comparison: `*out` is -1, 0 or 1.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bouquet_address_compare(
    a: *const BouquetAddress,
    b: *const BouquetAddress,
    out: *mut i32,
) -> BouquetStatus {
    guard(|| {
        let ord = lex_compare_ext(&deref(a, "a")?.0, &deref(b, "b")?.0)?;
        write(out, ord as i32, "out")
    })
}

/// Order-preserving ordinate of the address in `(0, 1)`.
///
/// # Safety
/// `address` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bouquet_address_ordinate(address: *const BouquetAddress, out: *mut f64) -> BouquetStatus {
    guard(|| {
        let a = deref(address, "address")?.0.clone();
        write(out, embed_ordinate(&AddressPoint::Ext(a))?, "out")
    })
}

/// The point of potential `t` on the hair with the given address.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bouquet_trace(
    model: *const BouquetModel,
    address: *const BouquetAddress,
    t: f64,
    out: *mut BouquetComplex,
) -> BouquetStatus {
    guard(|| {
        let p = trace_point(&deref(model, "model")?.0, &deref(address, "address")?.0, t)?;
        write(out, p.z.into(), "out")
    })
}

/// Traces `len` potentials from `ts` into `out`, which must hold `len`
/// values. Stops at the first failing potential.
///
/// # Safety
/// Handles must be live; `ts` and `out` must point to `len` elements.
#[no_mangle]
pub unsafe extern "C" fn bouquet_trace_many(
    model: *const BouquetModel,
    address: *const BouquetAddress,
    ts: *const f64,
    len: usize,
    out: *mut BouquetComplex,
) -> BouquetStatus {
    guard(|| {
        let m = &deref(model, "model")?.0;
        let a = &deref(address, "address")?.0;
        let ts = slice(ts, len, "ts")?;
        if len > 0 && out.is_null() {
            return Err(null("out"));
        }
        for (i, &t) in ts.iter().enumerate() {
            out.add(i).write(trace_point(m, a, t)?.z.into());
        }
        Ok(())
    })
}

/// Endpoint of a hair: its potential `*t` and position `*z`.
///
/// # Safety
/// Handles must be live; `t` and `z` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bouquet_endpoint(
    model: *const BouquetModel,
    address: *const BouquetAddress,
    t: *mut f64,
    z: *mut BouquetComplex,
) -> BouquetStatus {
    guard(|| {
        let e = endpoint_estimate(&deref(model, "model")?.0, &deref(address, "address")?.0)?;
        write(t, e.t, "t")?;
        write(z, e.z.into(), "z")
    })
}

/// Builds the brush of `n_addresses` hairs sampled on `t_grid` and returns
/// it as JSON, to be released with [`bouquet_string_free`].
///
/// # Safety
/// Handles must be live; arrays must hold the stated number of elements.
#[no_mangle]
pub unsafe extern "C" fn bouquet_brush_json(
    model: *const BouquetModel,
    addresses: *const *const BouquetAddress,
    n_addresses: usize,
    t_grid: *const f64,
    n_t: usize,
    out: *mut *mut c_char,
) -> BouquetStatus {
    guard(|| {
        let m = &deref(model, "model")?.0;
        let handles = slice(addresses, n_addresses, "addresses")?;
        let family =
            handles.iter().map(|&a| deref(a, "address").map(|a| a.0.clone())).collect::<Result<Vec<_>, _>>()?;
        let brush = build_brush(m, &family, slice(t_grid, n_t, "t_grid")?, "ffi")?;
        let json = brush_to_json(&brush);
        write(out, CString::new(json).unwrap_or_default().into_raw(), "out")
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bouquet_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statuses_cover_errors() {
        assert_eq!(BouquetStatus::from(&Error::EmptyInput), BouquetStatus::EmptyInput);
        assert_eq!(BouquetStatus::from(&Error::Parse("x".into())) as i32, 16);
    }

    #[test]
    fn sine_tract_indices() {
        let m = LogModel::sine(0.25, 2.0).unwrap();
        let Ok(TractId::Sine { k, .. }) = tract(&m, -3) else { panic!() };
        assert_eq!(k, -2);
    }

    #[test]
    fn last_error_is_cleared_on_success() {
        set_last_error("old");
        assert_eq!(guard(|| Ok(())), BouquetStatus::Ok);
        let msg = unsafe { CStr::from_ptr(bouquet_last_error()) };
        assert!(msg.to_bytes().is_empty());
    }
}
