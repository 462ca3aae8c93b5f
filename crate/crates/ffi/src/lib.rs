//! C ABI over the toolkit core. Every call reports a `TkStatus`; computed
//! values come back through out-pointers, and barriers cross the boundary
//! as opaque handles released with `tk_barrier_free`. On any non-Ok status
//! the failing thread's message is readable via `tk_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use tunnelkit::barriers::BarrierProfile;
use tunnelkit::error::Error;
use tunnelkit::exact1d::{self, Direction};
use tunnelkit::{esfi, jwkb, well};

/// Result code of every ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TkStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// The inputs were rejected before any numerics ran.
    InvalidInput = 2,
    /// The solver or quadrature gave up without reaching its tolerance.
    NoConvergence = 3,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 4,
    /// Internal fault; the library state is still sound.
    Panic = 5,
}

/// Scattering orientation for the exact solver.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TkDirection {
    LeftToRight = 0,
    RightToLeft = 1,
}

/// Barrier extent and peak, mirroring the core geometry report.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TkGeometry {
    pub z1_nm: f64,
    pub z2_nm: f64,
    pub z_peak_nm: f64,
    pub m_peak_ev: f64,
    pub vanished: bool,
}

/// Semiclassical decay exponent and how it was obtained.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TkGamow {
    pub exponent: f64,
    pub vanished: bool,
    /// Quadrature panel count; 0 on the closed-form path.
    pub n_intervals: usize,
}

/// Exact transmission/reflection pair for one energy and orientation.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TkScattering {
    pub d: f64,
    pub r: f64,
    pub ln_d: f64,
    pub n_slices: usize,
}

/// Opaque barrier handle.
pub struct TkBarrier(BarrierProfile);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let clean = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = clean);
}

fn status_of(err: &Error) -> TkStatus {
    if err.is_convergence_failure() {
        TkStatus::NoConvergence
    } else {
        TkStatus::InvalidInput
    }
}

fn fail(err: Error) -> TkStatus {
    let status = status_of(&err);
    set_error(&err.to_string());
    status
}

/// Runs a fallible body, translating panics into a status instead of
/// unwinding across the C boundary.
fn guarded<F: FnOnce() -> TkStatus>(body: F) -> TkStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|_| {
        set_error("internal panic");
        TkStatus::Panic
    })
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tk_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn tk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

unsafe fn emit_barrier(
    built: Result<BarrierProfile, Error>,
    out: *mut *mut TkBarrier,
) -> TkStatus {
    if out.is_null() {
        set_error("out pointer is null");
        return TkStatus::NullArgument;
    }
    match built {
        Ok(profile) => {
            *out = Box::into_raw(Box::new(TkBarrier(profile)));
            TkStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Rectangular barrier of the given height (eV) and width (nm).
#[no_mangle]
pub unsafe extern "C" fn tk_barrier_rectangular(
    height_ev: f64,
    width_nm: f64,
    out: *mut *mut TkBarrier,
) -> TkStatus {
    guarded(|| emit_barrier(BarrierProfile::rectangular(height_ev, width_nm), out))
}

/// Linear ramp of the given height (eV) and width (nm).
#[no_mangle]
pub unsafe extern "C" fn tk_barrier_straight_line(
    height_ev: f64,
    width_nm: f64,
    out: *mut *mut TkBarrier,
) -> TkStatus {
    guarded(|| emit_barrier(BarrierProfile::straight_line(height_ev, width_nm), out))
}

/// Exactly triangular emission barrier: work function phi (eV) under a
/// surface field (V/nm), no image rounding.
#[no_mangle]
pub unsafe extern "C" fn tk_barrier_triangular(
    phi_ev: f64,
    field_v_per_nm: f64,
    out: *mut *mut TkBarrier,
) -> TkStatus {
    guarded(|| emit_barrier(BarrierProfile::triangular(phi_ev, field_v_per_nm), out))
}

/// Image-rounded emission barrier with the standard image coefficient.
#[no_mangle]
pub unsafe extern "C" fn tk_barrier_schottky_nordheim(
    phi_ev: f64,
    field_v_per_nm: f64,
    out: *mut *mut TkBarrier,
) -> TkStatus {
    guarded(|| emit_barrier(BarrierProfile::schottky_nordheim(phi_ev, field_v_per_nm), out))
}

/// Axial barrier seen by an electron leaving a hydrogen-like atom of the
/// given ionization energy (eV) and effective charge number in a field.
#[no_mangle]
pub unsafe extern "C" fn tk_barrier_hydrogenic_axial(
    ionization_ev: f64,
    z_charge: f64,
    field_v_per_nm: f64,
    out: *mut *mut TkBarrier,
) -> TkStatus {
    guarded(|| {
        emit_barrier(
            BarrierProfile::hydrogenic_axial(ionization_ev, z_charge, field_v_per_nm),
            out,
        )
    })
}

/// Releases a barrier handle. Null is accepted and ignored.
#[no_mangle]
pub unsafe extern "C" fn tk_barrier_free(barrier: *mut TkBarrier) {
    if !barrier.is_null() {
        drop(Box::from_raw(barrier));
    }
}

/// Zeros, peak position, and peak height of the barrier.
#[no_mangle]
pub unsafe extern "C" fn tk_barrier_geometry(
    barrier: *const TkBarrier,
    out: *mut TkGeometry,
) -> TkStatus {
    guarded(|| {
        if barrier.is_null() || out.is_null() {
            set_error("barrier or out pointer is null");
            return TkStatus::NullArgument;
        }
        match (*barrier).0.geometry() {
            Ok(g) => {
                *out = TkGeometry {
                    z1_nm: g.z1,
                    z2_nm: g.z2,
                    z_peak_nm: g.z_peak,
                    m_peak_ev: g.m_peak,
                    vanished: g.vanished,
                };
                TkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Decay exponent G at an energy offset (eV) above the reference level.
#[no_mangle]
pub unsafe extern "C" fn tk_gamow_exponent(
    barrier: *const TkBarrier,
    energy_offset_ev: f64,
    out: *mut TkGamow,
) -> TkStatus {
    guarded(|| {
        if barrier.is_null() || out.is_null() {
            set_error("barrier or out pointer is null");
            return TkStatus::NullArgument;
        }
        match jwkb::gamow_exponent(&(*barrier).0, energy_offset_ev) {
            Ok(g) => {
                *out = TkGamow {
                    exponent: g.exponent,
                    vanished: g.vanished,
                    n_intervals: g.n_intervals,
                };
                TkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Semiclassical transmission probability exp(-G).
#[no_mangle]
pub unsafe extern "C" fn tk_transmission_jwkb(
    barrier: *const TkBarrier,
    energy_offset_ev: f64,
    out: *mut f64,
) -> TkStatus {
    guarded(|| {
        if barrier.is_null() || out.is_null() {
            set_error("barrier or out pointer is null");
            return TkStatus::NullArgument;
        }
        match jwkb::transmission(&(*barrier).0, energy_offset_ev) {
            Ok(t) => {
                *out = t.d;
                TkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Exact transfer-matrix scattering at a positive energy (eV).
#[no_mangle]
pub unsafe extern "C" fn tk_solve_exact(
    barrier: *const TkBarrier,
    energy_ev: f64,
    direction: TkDirection,
    out: *mut TkScattering,
) -> TkStatus {
    guarded(|| {
        if barrier.is_null() || out.is_null() {
            set_error("barrier or out pointer is null");
            return TkStatus::NullArgument;
        }
        let dir = match direction {
            TkDirection::LeftToRight => Direction::LeftToRight,
            TkDirection::RightToLeft => Direction::RightToLeft,
        };
        match exact1d::solve_scattering_directed(&(*barrier).0, energy_ev, dir) {
            Ok(s) => {
                *out = TkScattering {
                    d: s.d,
                    r: s.r,
                    ln_d: s.ln_d,
                    n_slices: s.n_slices,
                };
                TkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Bound-state energy (eV) of level n in a hard-walled well of the given
/// length (nm).
#[no_mangle]
pub unsafe extern "C" fn tk_well_energy(
    length_nm: f64,
    n: u32,
    out: *mut f64,
) -> TkStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out pointer is null");
            return TkStatus::NullArgument;
        }
        match well::energy_level(length_nm, n) {
            Ok(level) => {
                *out = level.energy;
                TkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

unsafe fn parse_species(name: *const c_char) -> Result<esfi::GasSpecies, TkStatus> {
    if name.is_null() {
        set_error("species name is null");
        return Err(TkStatus::NullArgument);
    }
    let text = match CStr::from_ptr(name).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("species name is not valid UTF-8");
            return Err(TkStatus::InvalidUtf8);
        }
    };
    esfi::GasSpecies::by_name(text).map_err(fail)
}

/// Field-ionization decay exponent for a named imaging gas ("H", "He",
/// "Ne", "Ar") at the given surface field (V/nm).
#[no_mangle]
pub unsafe extern "C" fn tk_esfi_exponent(
    species: *const c_char,
    field_v_per_nm: f64,
    out: *mut f64,
) -> TkStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out pointer is null");
            return TkStatus::NullArgument;
        }
        let gas = match parse_species(species) {
            Ok(g) => g,
            Err(status) => return status,
        };
        let profile = match gas.barrier(field_v_per_nm) {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        match esfi::esfi_rate_exponent(&gas, &profile) {
            Ok(g) => {
                *out = g.exponent;
                TkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Field window (V/nm) inside which the named gas ionizes at a usable
/// rate for the given attempt frequency (Hz).
#[no_mangle]
pub unsafe extern "C" fn tk_esfi_usable_band(
    species: *const c_char,
    attempt_frequency_hz: f64,
    out_low: *mut f64,
    out_high: *mut f64,
) -> TkStatus {
    guarded(|| {
        if out_low.is_null() || out_high.is_null() {
            set_error("out pointer is null");
            return TkStatus::NullArgument;
        }
        let gas = match parse_species(species) {
            Ok(g) => g,
            Err(status) => return status,
        };
        match esfi::usable_field_band(&gas, attempt_frequency_hz) {
            Ok((lo, hi)) => {
                *out_low = lo;
                *out_high = hi;
                TkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
