//! C ABI over the `loqc-qec` simulator.
//!
//! Configurations and sweep results cross the boundary as opaque handles
//! that the caller frees with the matching `*_free` function. Every entry
//! point returns an [`LqStatus`]; on failure a description is available
//! from [`lq_last_error`] on the same thread until the next failing call.
//! Panics are caught at the boundary and reported as `LQ_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use loqc_qec::elements::WiringConfig;
use loqc_qec::experiment::{
    fit_malus, hom_scan, run_analytic, run_sweep, visibility, CurveSummary, ExperimentConfig,
    MalusFit, SweepResult,
};
use loqc_qec::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LqStatus {
    Ok = 0,
    NullPointer = 1,
    Validation = 2,
    Configuration = 3,
    Structural = 4,
    Usage = 5,
    Fit = 6,
    Undefined = 7,
    OutOfRange = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LqWiring {
    /// Fibers A→C and B→D.
    AcBd = 0,
    /// Fibers A→D and B→C.
    AdBc = 1,
}

/// Opaque experiment configuration.
pub struct LqConfig {
    inner: ExperimentConfig,
}

/// Opaque result of one sweep.
pub struct LqSweep {
    inner: SweepResult,
}

/// One analyzer angle. Counts are valid only when `has_counts` is set.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LqRow {
    pub theta_deg: f64,
    pub p_d1_d2: f64,
    pub p_d1_d3: f64,
    pub has_counts: bool,
    pub counts_d1_d2: u64,
    pub counts_d1_d3: u64,
}

/// Fit parameters. `visibility` is NaN when the offset is not positive.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LqFit {
    pub offset: f64,
    pub amplitude: f64,
    pub phase_deg: f64,
    pub visibility: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LqCurveSummary {
    pub fit: LqFit,
    pub fidelity_45: f64,
    pub fidelity_fit: f64,
    /// Fit of the sampled counts; NaN fields when the sweep was analytic.
    pub counts_fit: LqFit,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LqSummary {
    pub seed: u64,
    pub success_probability: f64,
    pub discarded_probability: f64,
    pub fidelity_45: f64,
    pub herald_d2: f64,
    pub herald_d3: f64,
    pub d1_d2: LqCurveSummary,
    pub d1_d3: LqCurveSummary,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: LqStatus, msg: impl Into<String>) -> LqStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> LqStatus {
    let status = match &e {
        Error::Validation(_) => LqStatus::Validation,
        Error::Configuration(_) => LqStatus::Configuration,
        Error::Structural(_) => LqStatus::Structural,
        Error::Usage(_) => LqStatus::Usage,
        Error::Fit(_) => LqStatus::Fit,
        Error::Undefined(_) => LqStatus::Undefined,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> LqStatus) -> LqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(LqStatus::Panic, format!("panic: {msg}"))
        }
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $( if $p.is_null() {
            return fail(LqStatus::NullPointer, concat!("`", stringify!($p), "` is null"));
        } )+
    };
}

unsafe fn slice<'a>(p: *const f64, len: usize) -> &'a [f64] {
    if len == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(p, len)
    }
}

fn lq_fit(fit: &MalusFit) -> LqFit {
    LqFit {
        offset: fit.offset,
        amplitude: fit.amplitude,
        phase_deg: fit.phase_deg,
        visibility: visibility(fit).unwrap_or(f64::NAN),
    }
}

fn nan_fit() -> LqFit {
    LqFit {
        offset: f64::NAN,
        amplitude: f64::NAN,
        phase_deg: f64::NAN,
        visibility: f64::NAN,
    }
}

fn curve(c: &CurveSummary) -> LqCurveSummary {
    LqCurveSummary {
        fit: lq_fit(&c.fit),
        fidelity_45: c.fidelity_45,
        fidelity_fit: c.fidelity_fit,
        counts_fit: c.counts_fit.as_ref().map(lq_fit).unwrap_or_else(nan_fit),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failing call on this thread, or null if none.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn lq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// New configuration with defaults: qubit HWP at 22.5° (input |0⟩), full
/// indistinguishability, no imperfection, Pockels cell on, 19 analyzer
/// angles from −90° to 90°, 20 pairs/s for 60 s, seed 0.
#[no_mangle]
pub extern "C" fn lq_config_new() -> *mut LqConfig {
    Box::into_raw(Box::new(LqConfig {
        inner: ExperimentConfig::default(),
    }))
}

/// # Safety
/// `cfg` must be null or a handle from [`lq_config_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lq_config_free(cfg: *mut LqConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

unsafe fn set(cfg: *mut LqConfig, f: impl FnOnce(&mut ExperimentConfig)) -> LqStatus {
    non_null!(cfg);
    f(&mut (*cfg).inner);
    LqStatus::Ok
}

/// HWP1 fast-axis angle in degrees; the qubit is linear at twice this.
///
/// # Safety
/// `cfg` must be a live handle from [`lq_config_new`].
#[no_mangle]
pub unsafe extern "C" fn lq_config_set_qubit_hwp_angle(cfg: *mut LqConfig, value: f64) -> LqStatus {
    set(cfg, |c| c.qubit_hwp_angle = value)
}

/// Two-photon indistinguishability in [0, 1].
///
/// # Safety
/// `cfg` must be a live handle from [`lq_config_new`].
#[no_mangle]
pub unsafe extern "C" fn lq_config_set_overlap(cfg: *mut LqConfig, value: f64) -> LqStatus {
    set(cfg, |c| c.overlap_v = value)
}

/// Flat-background admixture ε in [0, 1].
///
/// # Safety
/// `cfg` must be a live handle from [`lq_config_new`].
#[no_mangle]
pub unsafe extern "C" fn lq_config_set_imperfection(cfg: *mut LqConfig, value: f64) -> LqStatus {
    set(cfg, |c| c.imperfection_eps = value)
}

/// # Safety
/// `cfg` must be a live handle from [`lq_config_new`].
#[no_mangle]
pub unsafe extern "C" fn lq_config_set_pc_enabled(cfg: *mut LqConfig, value: bool) -> LqStatus {
    set(cfg, |c| c.pc_enabled = value)
}

/// Photon pairs per second.
///
/// # Safety
/// `cfg` must be a live handle from [`lq_config_new`].
#[no_mangle]
pub unsafe extern "C" fn lq_config_set_pair_rate(cfg: *mut LqConfig, value: f64) -> LqStatus {
    set(cfg, |c| c.pair_rate = value)
}

/// Counting time per analyzer angle, seconds.
///
/// # Safety
/// `cfg` must be a live handle from [`lq_config_new`].
#[no_mangle]
pub unsafe extern "C" fn lq_config_set_duration(cfg: *mut LqConfig, value: f64) -> LqStatus {
    set(cfg, |c| c.duration = value)
}

/// # Safety
/// `cfg` must be a live handle from [`lq_config_new`].
#[no_mangle]
pub unsafe extern "C" fn lq_config_set_seed(cfg: *mut LqConfig, value: u64) -> LqStatus {
    set(cfg, |c| c.seed = value)
}

/// # Safety
/// `cfg` must be a live handle from [`lq_config_new`].
#[no_mangle]
pub unsafe extern "C" fn lq_config_set_wiring(cfg: *mut LqConfig, value: LqWiring) -> LqStatus {
    set(cfg, |c| {
        c.wiring = match value {
            LqWiring::AcBd => WiringConfig::AcBd,
            LqWiring::AdBc => WiringConfig::AdBc,
        }
    })
}

/// Replaces the analyzer angles, in degrees.
///
/// # Safety
/// `cfg` must be a live handle; `thetas` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn lq_config_set_thetas(
    cfg: *mut LqConfig,
    thetas: *const f64,
    len: usize,
) -> LqStatus {
    non_null!(thetas);
    let thetas = slice(thetas, len).to_vec();
    set(cfg, |c| c.thetas = thetas)
}

/// Checks the configuration without running it.
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lq_config_validate(cfg: *const LqConfig) -> LqStatus {
    non_null!(cfg);
    guard(|| match (*cfg).inner.validate() {
        Ok(()) => LqStatus::Ok,
        Err(e) => from_error(e),
    })
}

unsafe fn run(
    cfg: *const LqConfig,
    out: *mut *mut LqSweep,
    f: fn(&ExperimentConfig) -> loqc_qec::Result<SweepResult>,
) -> LqStatus {
    non_null!(cfg, out);
    *out = ptr::null_mut();
    guard(|| match f(&(*cfg).inner) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(LqSweep { inner }));
            LqStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// Exact probabilities only. On success `*out` receives a new handle.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lq_run_analytic(cfg: *const LqConfig, out: *mut *mut LqSweep) -> LqStatus {
    run(cfg, out, run_analytic)
}

/// Probabilities plus seeded Poisson counts.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lq_run_sweep(cfg: *const LqConfig, out: *mut *mut LqSweep) -> LqStatus {
    run(cfg, out, run_sweep)
}

/// # Safety
/// `sweep` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lq_sweep_free(sweep: *mut LqSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}

/// Number of analyzer angles, or 0 for a null handle.
///
/// # Safety
/// `sweep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lq_sweep_len(sweep: *const LqSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.inner.rows.len())
}

/// # Safety
/// `sweep` must be a live handle and `row` writable.
#[no_mangle]
pub unsafe extern "C" fn lq_sweep_row(
    sweep: *const LqSweep,
    index: usize,
    row: *mut LqRow,
) -> LqStatus {
    non_null!(sweep, row);
    let rows = &(*sweep).inner.rows;
    let Some(r) = rows.get(index) else {
        return fail(
            LqStatus::OutOfRange,
            format!("row {index} out of range for {} rows", rows.len()),
        );
    };
    *row = LqRow {
        theta_deg: r.theta_deg,
        p_d1_d2: r.p_d1_d2,
        p_d1_d3: r.p_d1_d3,
        has_counts: r.counts_d1_d2.is_some(),
        counts_d1_d2: r.counts_d1_d2.unwrap_or(0),
        counts_d1_d3: r.counts_d1_d3.unwrap_or(0),
    };
    LqStatus::Ok
}

/// # Safety
/// `sweep` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lq_sweep_summary(sweep: *const LqSweep, out: *mut LqSummary) -> LqStatus {
    non_null!(sweep, out);
    let r = &(*sweep).inner;
    *out = LqSummary {
        seed: r.seed,
        success_probability: r.success_probability,
        discarded_probability: r.discarded_probability,
        fidelity_45: r.fidelity_45,
        herald_d2: r.herald_d2,
        herald_d3: r.herald_d3,
        d1_d2: curve(&r.d1_d2),
        d1_d3: curve(&r.d1_d3),
    };
    LqStatus::Ok
}

/// Coincidence probability behind a 50/50 beam splitter for each delay.
/// Writes `len` values to `p_coincidence`.
///
/// # Safety
/// `delays_s` must point to `len` doubles and `p_coincidence` to room for
/// `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn lq_hom_scan(
    delays_s: *const f64,
    len: usize,
    sigma_s: f64,
    p_coincidence: *mut f64,
) -> LqStatus {
    non_null!(delays_s, p_coincidence);
    guard(|| match hom_scan(slice(delays_s, len), sigma_s) {
        Ok(points) => {
            for (i, p) in points.iter().enumerate() {
                *p_coincidence.add(i) = p.p_coincidence;
            }
            LqStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// Least-squares fit of `values` to `offset + amplitude·cos 2(θ − phase)`.
///
/// # Safety
/// `thetas` and `values` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lq_fit_malus(
    thetas: *const f64,
    values: *const f64,
    len: usize,
    out: *mut LqFit,
) -> LqStatus {
    non_null!(thetas, values, out);
    guard(|| match fit_malus(slice(thetas, len), slice(values, len)) {
        Ok(fit) => {
            *out = lq_fit(&fit);
            LqStatus::Ok
        }
        Err(e) => from_error(e),
    })
}
