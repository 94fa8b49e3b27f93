//! C ABI over `qnn-core`.
//!
//! Every fallible function returns a [`QnnStatus`]; on failure the message is
//! available from [`qnn_last_error_message`] on the same thread until the next
//! failing call. Results are written through out-pointers.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use qnn_core::bench::metrics::roc_auc;
use qnn_core::model::{build, ArchitectureSpec};
use qnn_core::spectrum::omega;
use qnn_core::{AnsatzMode, Circuit, Error, Family};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QnnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Capacity = 3,
    Architecture = 4,
    Contract = 5,
    Degenerate = 6,
    Unsupported = 7,
    Internal = 8,
}

/// Opaque compiled circuit.
pub struct QnnCircuit {
    inner: Circuit,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QnnStatus {
    match e {
        Error::Capacity(_) => QnnStatus::Capacity,
        Error::Architecture(_) => QnnStatus::Architecture,
        Error::Contract(_) | Error::Aliasing(_) => QnnStatus::Contract,
        Error::Degenerate(_) => QnnStatus::Degenerate,
        Error::Unsupported(_) => QnnStatus::Unsupported,
        Error::Config(_) => QnnStatus::InvalidArgument,
        _ => QnnStatus::Internal,
    }
}

enum Failure {
    Null(&'static str),
    Invalid(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QnnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QnnStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            QnnStatus::NullPointer
        }
        Ok(Err(Failure::Invalid(msg))) => {
            set_error(msg);
            QnnStatus::InvalidArgument
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            QnnStatus::Internal
        }
    }
}

unsafe fn c_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn in_slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn circuit_ref<'a>(c: *const QnnCircuit) -> Result<&'a Circuit, Failure> {
    c.as_ref().map(|c| &c.inner).ok_or(Failure::Null("circuit"))
}

/// Builds a circuit. `family` is one of hamming, binary, exponential,
/// ternary, turnpike, golomb; `ansatz` one of univariate, sequential,
/// parallel. On success `*out` owns a handle to release with
/// [`qnn_circuit_free`].
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qnn_circuit_create(
    family: *const c_char,
    qubits: usize,
    layers: usize,
    features: usize,
    ansatz: *const c_char,
    out: *mut *mut QnnCircuit,
) -> QnnStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let family: Family = c_str(family, "family")?.parse()?;
        let ansatz: AnsatzMode = c_str(ansatz, "ansatz")?.parse()?;
        let spec = ArchitectureSpec::multivariate(family, qubits, layers, features, ansatz);
        let inner = build(&spec)?;
        *out = Box::into_raw(Box::new(QnnCircuit { inner }));
        Ok(())
    })
}

/// Releases a handle from [`qnn_circuit_create`]. Null is a no-op.
///
/// # Safety
/// `circuit` must be null or a live handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn qnn_circuit_free(circuit: *mut QnnCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// # Safety
/// `circuit` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qnn_circuit_param_count(circuit: *const QnnCircuit, out: *mut usize) -> QnnStatus {
    guard(|| {
        *out_ref(out, "out")? = circuit_ref(circuit)?.parameter_slot_count();
        Ok(())
    })
}

/// # Safety
/// `circuit` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qnn_circuit_feature_count(circuit: *const QnnCircuit, out: *mut usize) -> QnnStatus {
    guard(|| {
        *out_ref(out, "out")? = circuit_ref(circuit)?.data_slot_count();
        Ok(())
    })
}

/// # Safety
/// `circuit` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qnn_circuit_qubit_count(circuit: *const QnnCircuit, out: *mut usize) -> QnnStatus {
    guard(|| {
        *out_ref(out, "out")? = circuit_ref(circuit)?.qubit_count();
        Ok(())
    })
}

/// ⟨Z⟩ on qubit 0 for the given parameters and features.
///
/// # Safety
/// Array pointers must hold at least the stated number of doubles.
#[no_mangle]
pub unsafe extern "C" fn qnn_circuit_evaluate(
    circuit: *const QnnCircuit,
    params: *const f64,
    n_params: usize,
    features: *const f64,
    n_features: usize,
    out: *mut f64,
) -> QnnStatus {
    guard(|| {
        let c = circuit_ref(circuit)?;
        let p = in_slice(params, n_params, "params")?;
        let x = in_slice(features, n_features, "features")?;
        *out_ref(out, "out")? = c.expectation(p, x)?;
        Ok(())
    })
}

/// Value and gradient with respect to the parameters; `grad_out` must hold
/// `n_params` doubles.
///
/// # Safety
/// Array pointers must hold at least the stated number of doubles.
#[no_mangle]
pub unsafe extern "C" fn qnn_circuit_gradient(
    circuit: *const QnnCircuit,
    params: *const f64,
    n_params: usize,
    features: *const f64,
    n_features: usize,
    value_out: *mut f64,
    grad_out: *mut f64,
) -> QnnStatus {
    guard(|| {
        let c = circuit_ref(circuit)?;
        let p = in_slice(params, n_params, "params")?;
        let x = in_slice(features, n_features, "features")?;
        let value_out = out_ref(value_out, "value_out")?;
        if grad_out.is_null() && n_params > 0 {
            return Err(Failure::Null("grad_out"));
        }
        let (value, grad) = c.gradient(p, x)?;
        *value_out = value;
        if !grad.is_empty() {
            slice::from_raw_parts_mut(grad_out, grad.len()).copy_from_slice(&grad);
        }
        Ok(())
    })
}

/// Number of positive frequencies of a univariate (R, L) model.
///
/// # Safety
/// `family` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qnn_spectrum_positive_size(
    family: *const c_char,
    qubits: usize,
    layers: usize,
    out: *mut usize,
) -> QnnStatus {
    guard(|| {
        let family: Family = c_str(family, "family")?.parse()?;
        let out = out_ref(out, "out")?;
        *out = omega(family, qubits, layers)?.positive_size();
        Ok(())
    })
}

/// Tie-corrected rank ROC-AUC. Labels are 0 or 1, scores in [0, 1].
///
/// # Safety
/// `labels` and `scores` must hold `n` elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qnn_roc_auc(labels: *const u8, scores: *const f64, n: usize, out: *mut f64) -> QnnStatus {
    guard(|| {
        let l = in_slice(labels, n, "labels")?;
        let s = in_slice(scores, n, "scores")?;
        *out_ref(out, "out")? = roc_auc(l, s)?;
        Ok(())
    })
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qnn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qnn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
