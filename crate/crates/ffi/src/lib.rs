//! C ABI for `cavmix`.
//!
//! Every fallible function returns a [`CavmixStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and read
//! back with [`cavmix_last_error`]. Handles are opaque and must be released with
//! their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cavmix::bogoliubov::{compose, first_order_map, FirstOrderBogoliubovMap, StaticCoefficients};
use cavmix::experiment::{self, ExperimentPlan, Motion, PlanReport};
use cavmix::gaussian;
use cavmix::profiles::AccelerationProfile;
use cavmix::spectrum::{Axis, Cavity1D};
use cavmix::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CavmixStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The acceleration profile reaches `|h| >= 2`.
    Rigidity = 3,
    /// Quadrature or eigen-solve failure.
    Numerical = 4,
    /// A Rust panic was caught at the boundary.
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CavmixComplex {
    pub re: f64,
    pub im: f64,
}

/// Static coefficients of a (1+1)-dimensional cavity.
pub struct CavmixCoefficients(StaticCoefficients);

/// First-order Bogoliubov map over an acceleration interval.
pub struct CavmixMap(FirstOrderBogoliubovMap);

/// Planner output in SI units. `rpm` and `centripetal_acceleration` are NaN
/// for linear motion.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CavmixPlanReport {
    pub omega_c_per_second: f64,
    pub omega_c_per_meter: f64,
    pub oscillation_frequency_hz: f64,
    pub growth_rate_per_second: f64,
    pub time_to_unity_seconds: f64,
    pub peak_h: f64,
    pub rigid: bool,
    pub paraxial_ratio: f64,
    pub beta_factor: f64,
    pub beta_scale: f64,
    pub beta_product: f64,
    pub rpm: f64,
    pub centripetal_acceleration: f64,
}

impl From<&PlanReport> for CavmixPlanReport {
    fn from(r: &PlanReport) -> Self {
        Self {
            omega_c_per_second: r.omega_c_per_second,
            omega_c_per_meter: r.omega_c_per_meter,
            oscillation_frequency_hz: r.oscillation_frequency_hz,
            growth_rate_per_second: r.growth_rate_per_second,
            time_to_unity_seconds: r.time_to_unity_seconds,
            peak_h: r.peak_h,
            rigid: r.rigid,
            paraxial_ratio: r.paraxial_ratio,
            beta_factor: r.beta_bound.factor,
            beta_scale: r.beta_bound.scale,
            beta_product: r.beta_bound.product,
            rpm: r.rpm.unwrap_or(f64::NAN),
            centripetal_acceleration: r.centripetal_acceleration.unwrap_or(f64::NAN),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(CavmixStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Rigidity(_) => CavmixStatus::Rigidity,
            e if e.is_numerical() => CavmixStatus::Numerical,
            _ => CavmixStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(CavmixStatus::NullPointer, format!("{name} is null"))
}

/// Run `f` behind a panic guard, recording any failure.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CavmixStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CavmixStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {message}"));
            CavmixStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, name: &str, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

/// Message of the last failure on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn cavmix_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cavmix_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frequency of mode `n` of a cavity of `length` and `mass`.
///
/// # Safety
/// `out` must be null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cavmix_omega(length: f64, mass: f64, n: u32, out: *mut f64) -> CavmixStatus {
    guard(|| {
        let cavity = Cavity1D::new(length, mass, n.max(2))?;
        write(out, "out", cavity.omega(n)?)
    })
}

/// # Safety
/// `out` must be null or valid for a write. The handle written there is owned
/// by the caller.
#[no_mangle]
pub unsafe extern "C" fn cavmix_coefficients_new(
    length: f64,
    mass: f64,
    n_max: u32,
    out: *mut *mut CavmixCoefficients,
) -> CavmixStatus {
    guard(|| {
        let c = StaticCoefficients::new(Cavity1D::new(length, mass, n_max)?);
        write(out, "out", Box::into_raw(Box::new(CavmixCoefficients(c))))
    })
}

/// # Safety
/// `handle` must be null or come from [`cavmix_coefficients_new`] and not be
/// freed twice.
#[no_mangle]
pub unsafe extern "C" fn cavmix_coefficients_free(handle: *mut CavmixCoefficients) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Static mixing coefficient `alpha_hat_mn` (1-based modes).
///
/// # Safety
/// `coeffs` must be null or a live handle; `out` null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cavmix_alpha_hat(
    coeffs: *const CavmixCoefficients,
    m: u32,
    n: u32,
    out: *mut f64,
) -> CavmixStatus {
    guard(|| write(out, "out", deref(coeffs, "coeffs")?.0.alpha_hat(m, n)?))
}

/// Static creation coefficient `beta_hat_mn` (1-based modes).
///
/// # Safety
/// As [`cavmix_alpha_hat`].
#[no_mangle]
pub unsafe extern "C" fn cavmix_beta_hat(
    coeffs: *const CavmixCoefficients,
    m: u32,
    n: u32,
    out: *mut f64,
) -> CavmixStatus {
    guard(|| write(out, "out", deref(coeffs, "coeffs")?.0.beta_hat(m, n)?))
}

/// First-order map for `h(tau) = h0 cos(omega_c (tau - tau0) + phase)` on
/// `[tau0, tauf]`.
///
/// # Safety
/// `coeffs` must be null or a live handle; `out` null or valid for a write.
/// The map written there is owned by the caller.
#[no_mangle]
pub unsafe extern "C" fn cavmix_map_sinusoidal(
    coeffs: *const CavmixCoefficients,
    h0: f64,
    omega_c: f64,
    phase: f64,
    tau0: f64,
    tauf: f64,
    out: *mut *mut CavmixMap,
) -> CavmixStatus {
    guard(|| {
        let c = deref(coeffs, "coeffs")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let profile = AccelerationProfile::sinusoidal(h0, omega_c, phase, tau0, tauf)?;
        let map = first_order_map(&c.0, &profile)?;
        write(out, "out", Box::into_raw(Box::new(CavmixMap(map))))
    })
}

/// Map of `first` followed by `second`; the intervals must be contiguous.
///
/// # Safety
/// Both maps must be null or live handles; `out` null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cavmix_map_compose(
    first: *const CavmixMap,
    second: *const CavmixMap,
    out: *mut *mut CavmixMap,
) -> CavmixStatus {
    guard(|| {
        let map = compose(&deref(first, "first")?.0, &deref(second, "second")?.0)?;
        write(out, "out", Box::into_raw(Box::new(CavmixMap(map))))
    })
}

/// # Safety
/// `map` must be null or come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cavmix_map_free(map: *mut CavmixMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// `A_hat_mn` of the map (1-based modes).
///
/// # Safety
/// `map` must be null or a live handle; `out` null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cavmix_map_a_hat(
    map: *const CavmixMap,
    m: u32,
    n: u32,
    out: *mut CavmixComplex,
) -> CavmixStatus {
    guard(|| {
        let a = deref(map, "map")?.0.a_hat(m, n)?;
        write(out, "out", CavmixComplex { re: a.re, im: a.im })
    })
}

/// `B_hat_mn` of the map (1-based modes).
///
/// # Safety
/// As [`cavmix_map_a_hat`].
#[no_mangle]
pub unsafe extern "C" fn cavmix_map_b_hat(
    map: *const CavmixMap,
    m: u32,
    n: u32,
    out: *mut CavmixComplex,
) -> CavmixStatus {
    guard(|| {
        let b = deref(map, "map")?.0.b_hat(m, n)?;
        write(out, "out", CavmixComplex { re: b.re, im: b.im })
    })
}

/// Negativity between modes `m` and `n`, both squeezed by `s` before the map.
/// `full` is the symplectic pipeline, `first_order` the formula
/// `|Im A_mn| sinh s`. Either out-pointer may be null.
///
/// # Safety
/// `map` must be null or a live handle; non-null out-pointers valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cavmix_negativity(
    map: *const CavmixMap,
    m: u32,
    n: u32,
    s: f64,
    full: *mut f64,
    first_order: *mut f64,
) -> CavmixStatus {
    guard(|| {
        let map = &deref(map, "map")?.0;
        let pipeline = gaussian::pipeline_negativity(map, (m, n), s, false)?;
        let formula = gaussian::first_order_negativity(map, (m, n), s)?;
        if !full.is_null() {
            full.write(pipeline.negativity);
        }
        if !first_order.is_null() {
            first_order.write(formula);
        }
        Ok(())
    })
}

fn axis_from(code: u32) -> Result<Axis, Failure> {
    match code {
        0 => Ok(Axis::X),
        1 => Ok(Axis::Y),
        _ => Err(Failure(CavmixStatus::InvalidArgument, format!("axis must be 0 (x) or 1 (y), got {code}"))),
    }
}

/// Plan for a box `lx` x `ly` x `lz` (metres) holding light of `wavelength`,
/// shaken with amplitude `d` along `axis` (0 = x, 1 = y), driving modes
/// `m`, `m_prime` of that axis.
///
/// # Safety
/// `out` must be null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cavmix_plan_linear(
    wavelength: f64,
    lx: f64,
    ly: f64,
    lz: f64,
    axis: u32,
    d: f64,
    m: u32,
    m_prime: u32,
    out: *mut CavmixPlanReport,
) -> CavmixStatus {
    guard(|| {
        let motion = Motion::Linear { axis: axis_from(axis)?, amplitude: d };
        let report = experiment::plan(&ExperimentPlan::new(wavelength, lx, ly, lz, motion, (m, m_prime)))?;
        write(out, "out", CavmixPlanReport::from(&report))
    })
}

/// As [`cavmix_plan_linear`] for circular motion of radii `dx`, `dy`.
///
/// # Safety
/// `out` must be null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cavmix_plan_circular(
    wavelength: f64,
    lx: f64,
    ly: f64,
    lz: f64,
    dx: f64,
    dy: f64,
    m: u32,
    m_prime: u32,
    out: *mut CavmixPlanReport,
) -> CavmixStatus {
    guard(|| {
        let motion = Motion::Circular { dx, dy };
        let report = experiment::circular_report(&ExperimentPlan::new(wavelength, lx, ly, lz, motion, (m, m_prime)))?;
        write(out, "out", CavmixPlanReport::from(&report))
    })
}
