//! C ABI for the dicke-phase library.
//!
//! Every function returns a [`DpStatus`]; results are written through out
//! pointers. On failure the message is available from
//! [`dp_last_error_message`] on the same thread until the next call.
//! Handles returned through `*mut *mut` out pointers are owned by the caller
//! and released with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dicke_phase::landscape::{find_local_maxima, global_maximizer, LandscapePoint, MaximaReport};
use dicke_phase::model::{effective_field_g, landscape_i, omega, quasiparticle_energy, ModelParams, Parameter};
use dicke_phase::oracle::{chain_log_z_exact, chain_log_z_product_formula, full_ed, ChainSpec, SpinBosonSpec};
use dicke_phase::phase::{
    classify_transition, order_parameter, sweep, SweepRecord, SweepResult, SweepSpec, TransitionOrder, TransitionRecord,
};
use dicke_phase::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numerical = 3,
    CutoffUnconverged = 4,
    MemoryBudget = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpParameter {
    Lambda = 0,
    SpinCoupling = 1,
    Epsilon = 2,
    Beta = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpOrder {
    First = 1,
    Second = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpParams {
    pub lambda: f64,
    pub spin_coupling: f64,
    pub epsilon: f64,
    pub beta: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpPoint {
    pub x: f64,
    pub omega: f64,
    pub is_global: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpSweepRecord {
    pub value: f64,
    pub x_star: f64,
    pub omega_star: f64,
    pub theta: f64,
    pub tie: bool,
    /// -1 when the step was not fully scanned.
    pub n_maxima: i64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpTransition {
    pub critical_value: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub order: DpOrder,
    pub jump: f64,
    pub coexistence_width: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpOracleReport {
    pub log_z_exact: f64,
    pub log_z_predicted: f64,
    pub photons_exact: f64,
    pub photons_predicted: f64,
    pub cutoff_relative_change: f64,
    pub x_star: f64,
}

/// Validated model parameters.
pub struct DpModel {
    params: ModelParams,
}

/// Local maxima of one landscape, highest first.
pub struct DpMaxima {
    report: MaximaReport,
}

/// A completed sweep and its classified transitions.
pub struct DpSweep {
    result: SweepResult,
    transitions: Vec<TransitionRecord>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> DpStatus {
    match err {
        Error::Invalid { .. } | Error::ZeroCoupling => DpStatus::InvalidArgument,
        Error::QuadratureNotConverged { .. } | Error::Eigensolver(_) => DpStatus::Numerical,
        Error::CutoffUnconverged { .. } => DpStatus::CutoffUnconverged,
        Error::MemoryBudget { .. } => DpStatus::MemoryBudget,
        Error::SweepStep { source, .. } => status_of(source),
    }
}

enum Failure {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

/// Run `body` with panics contained and errors recorded.
fn guard<F>(body: F) -> DpStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => DpStatus::Ok,
        Ok(Err(Failure::Null(name))) => {
            set_error(format!("null pointer: {name}"));
            DpStatus::NullPointer
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            DpStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(name))
}

unsafe fn write<T>(out: *mut T, value: T, name: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(name));
    }
    out.write(value);
    Ok(())
}

fn parameter(p: DpParameter) -> Parameter {
    match p {
        DpParameter::Lambda => Parameter::Lambda,
        DpParameter::SpinCoupling => Parameter::SpinCoupling,
        DpParameter::Epsilon => Parameter::Epsilon,
        DpParameter::Beta => Parameter::Beta,
    }
}

fn point(p: LandscapePoint) -> DpPoint {
    DpPoint {
        x: p.x,
        omega: p.omega,
        is_global: p.is_global,
    }
}

fn sweep_record(r: &SweepRecord) -> DpSweepRecord {
    DpSweepRecord {
        value: r.value,
        x_star: r.x_star,
        omega_star: r.omega_star,
        theta: r.theta,
        tie: r.tie,
        n_maxima: r.n_maxima.map_or(-1, |n| n as i64),
    }
}

fn transition(t: &TransitionRecord) -> DpTransition {
    DpTransition {
        critical_value: t.critical_value,
        bracket_lo: t.bracket.0,
        bracket_hi: t.bracket.1,
        order: match t.order {
            TransitionOrder::First => DpOrder::First,
            TransitionOrder::Second => DpOrder::Second,
        },
        jump: t.jump,
        coexistence_width: t.coexistence_width,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dp_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains NUL"),
    };
    VERSION.as_ptr()
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call on this thread.
#[no_mangle]
pub extern "C" fn dp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp_model_new(params: DpParams, out: *mut *mut DpModel) -> DpStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let params = ModelParams::new(params.lambda, params.spin_coupling, params.epsilon, params.beta)?;
        write(out, Box::into_raw(Box::new(DpModel { params })), "out")
    })
}

/// # Safety
/// `model` must come from `dp_model_new` and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn dp_model_free(model: *mut DpModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp_model_params(model: *const DpModel, out: *mut DpParams) -> DpStatus {
    guard(|| {
        let p = borrow(model, "model")?.params;
        write(
            out,
            DpParams {
                lambda: p.lambda,
                spin_coupling: p.spin_coupling,
                epsilon: p.epsilon,
                beta: p.beta,
            },
            "out",
        )
    })
}

/// Ω(x).
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp_model_omega(model: *const DpModel, x: f64, out: *mut f64) -> DpStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        write(out, omega(&m.params, x)?, "out")
    })
}

/// I(x), the k-averaged log cosh of the quasiparticle energies.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp_model_landscape_i(model: *const DpModel, x: f64, out: *mut f64) -> DpStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        write(out, landscape_i(&m.params, x)?, "out")
    })
}

/// g(x); fails with `InvalidArgument` at zero spin coupling.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp_model_effective_field_g(model: *const DpModel, x: f64, out: *mut f64) -> DpStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        write(out, effective_field_g(&m.params, x)?, "out")
    })
}

/// ξ_k(x); fails with `InvalidArgument` at zero spin coupling.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp_model_quasiparticle_energy(
    model: *const DpModel,
    x: f64,
    k: f64,
    out: *mut f64,
) -> DpStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        write(out, quasiparticle_energy(&m.params, x, k)?, "out")
    })
}

/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp_model_global_maximizer(model: *const DpModel, out: *mut DpPoint) -> DpStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        write(out, point(global_maximizer(&m.params)?), "out")
    })
}

/// Θ = x*² + 1/(2β).
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp_model_order_parameter(model: *const DpModel, out: *mut f64) -> DpStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        write(out, order_parameter(&m.params)?, "out")
    })
}

/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp_model_find_maxima(model: *const DpModel, out: *mut *mut DpMaxima) -> DpStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let report = find_local_maxima(&m.params)?;
        write(out, Box::into_raw(Box::new(DpMaxima { report })), "out")
    })
}

/// # Safety
/// `maxima` must be a live handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn dp_maxima_len(maxima: *const DpMaxima) -> usize {
    maxima.as_ref().map_or(0, |m| m.report.count())
}

/// Ω(top) − Ω(second), +inf with a single maximum.
///
/// # Safety
/// `maxima` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp_maxima_coexistence_gap(maxima: *const DpMaxima, out: *mut f64) -> DpStatus {
    guard(|| write(out, borrow(maxima, "maxima")?.report.coexistence_gap, "out"))
}

/// # Safety
/// `maxima` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp_maxima_get(maxima: *const DpMaxima, index: usize, out: *mut DpPoint) -> DpStatus {
    guard(|| {
        let m = borrow(maxima, "maxima")?;
        let p = m
            .report
            .maxima
            .get(index)
            .ok_or_else(|| Failure::Core(out_of_range(index, m.report.count())))?;
        write(out, point(*p), "out")
    })
}

/// # Safety
/// `maxima` must come from `dp_model_find_maxima`. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn dp_maxima_free(maxima: *mut DpMaxima) {
    if !maxima.is_null() {
        drop(Box::from_raw(maxima));
    }
}

fn out_of_range(index: usize, len: usize) -> Error {
    Error::Invalid {
        field: "index",
        reason: format!("{index} out of range for length {len}"),
    }
}

/// Sweep one parameter of `model` and classify the transitions found.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp_sweep_run(
    model: *const DpModel,
    swept: DpParameter,
    start: f64,
    stop: f64,
    steps: usize,
    out: *mut *mut DpSweep,
) -> DpStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let spec = SweepSpec::new(parameter(swept), start, stop, steps, m.params);
        let result = sweep(&spec)?;
        let transitions = classify_transition(&result)?;
        write(out, Box::into_raw(Box::new(DpSweep { result, transitions })), "out")
    })
}

/// # Safety
/// `sweep` must be a live handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn dp_sweep_len(sweep: *const DpSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.result.records.len())
}

/// # Safety
/// `sweep` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp_sweep_get(sweep: *const DpSweep, index: usize, out: *mut DpSweepRecord) -> DpStatus {
    guard(|| {
        let s = borrow(sweep, "sweep")?;
        let r = s
            .result
            .records
            .get(index)
            .ok_or_else(|| Failure::Core(out_of_range(index, s.result.records.len())))?;
        write(out, sweep_record(r), "out")
    })
}

/// # Safety
/// `sweep` must be a live handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn dp_sweep_transition_count(sweep: *const DpSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.transitions.len())
}

/// # Safety
/// `sweep` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp_sweep_transition_get(
    sweep: *const DpSweep,
    index: usize,
    out: *mut DpTransition,
) -> DpStatus {
    guard(|| {
        let s = borrow(sweep, "sweep")?;
        let t = s
            .transitions
            .get(index)
            .ok_or_else(|| Failure::Core(out_of_range(index, s.transitions.len())))?;
        write(out, transition(t), "out")
    })
}

/// # Safety
/// `sweep` must come from `dp_sweep_run`. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn dp_sweep_free(sweep: *mut DpSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}

/// Exact `(1/N) log Z` of the spin chain at field amplitude `x`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp_chain_log_z_exact(model: *const DpModel, x: f64, sites: usize, out: *mut f64) -> DpStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        write(out, chain_log_z_exact(&m.params, x, &ChainSpec::new(sites)?)?, "out")
    })
}

/// Free-fermion product formula for the same quantity.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp_chain_log_z_product(
    model: *const DpModel,
    x: f64,
    sites: usize,
    out: *mut f64,
) -> DpStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        write(
            out,
            chain_log_z_product_formula(&m.params, x, &ChainSpec::new(sites)?)?,
            "out",
        )
    })
}

/// Exact diagonalization of the full spin-boson model.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dp_full_ed(
    model: *const DpModel,
    sites: usize,
    cutoff: usize,
    out: *mut DpOracleReport,
) -> DpStatus {
    guard(|| {
        let m = borrow(model, "model")?;
        let r = full_ed(&m.params, &SpinBosonSpec::new(sites, cutoff)?)?;
        write(
            out,
            DpOracleReport {
                log_z_exact: r.log_z_per_site.exact,
                log_z_predicted: r.log_z_per_site.predicted,
                photons_exact: r.photons_per_site.exact,
                photons_predicted: r.photons_per_site.predicted,
                cutoff_relative_change: r.cutoff_relative_change,
                x_star: r.x_star,
            },
            "out",
        )
    })
}
