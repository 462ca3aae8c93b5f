//! First-order semiclassical (JWKB) tunnelling exponents and transmission.
//!
//! For a barrier M(z) crossed at energy offset eps, the decay exponent is
//!
//! ```text
//!   G = g_e * integral of sqrt(M(z) - eps) between the zeros of M - eps
//! ```
//!
//! with g_e = sqrt(8 m_e)/hbar expressed in the working units, and the
//! transmission estimate is D = exp(-G). The estimate ignores the
//! pre-exponential correction, so it is least trustworthy for thin or
//! nearly vanished barriers; the exact piecewise-constant solver exists as
//! an independent cross-check for exactly that regime.
//!
//! The exponent depends only on the integral of sqrt(M - eps), which reads
//! the same from either side of the barrier, so no direction parameter
//! exists here. Direction becomes meaningful only for the exact solver's
//! amplitude bookkeeping, and its transmission magnitudes must agree both
//! ways; see the scattering module.

use crate::barriers::BarrierProfile;
use crate::constants::{GAMOW_PREFACTOR, TRIANGULAR_EXPONENT_B};
use crate::error::{Error, Result};
use crate::numerics::integrate_adaptive;

const QUADRATURE_REL_TOL: f64 = 1e-8;

/// How a Gamow exponent was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GamowMethod {
    ClosedForm,
    Quadrature,
}

impl GamowMethod {
    pub fn name(&self) -> &'static str {
        match self {
            GamowMethod::ClosedForm => "closed_form",
            GamowMethod::Quadrature => "quadrature",
        }
    }
}

/// Tunnelling exponent for one barrier at one energy offset.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct GamowResult {
    /// Decay exponent G; 0 when the barrier is vanished at this offset.
    pub exponent: f64,
    /// True when no positive barrier region exists at this offset.
    pub vanished: bool,
    pub method: GamowMethod,
    /// Adaptive subintervals used; 0 for closed-form evaluation.
    pub n_intervals: usize,
}

/// JWKB transmission estimate: D = exp(-G).
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct TransmissionResult {
    pub d: f64,
    pub gamow: GamowResult,
}

/// Closed-form exponent for the triangular barrier: b phi^{3/2} / F.
pub fn triangular_gamow_closed_form(phi: f64, field: f64) -> Result<f64> {
    if !(phi > 0.0) {
        return Err(Error::domain(format!("phi must be positive, got {phi}")));
    }
    if !(field > 0.0) {
        return Err(Error::domain(format!(
            "no outer zero at field {field}; the exponent diverges"
        )));
    }
    Ok(TRIANGULAR_EXPONENT_B * phi.powf(1.5) / field)
}

/// Closed-form exponent for the linear-ramp barrier of height H and base
/// width w: (2/3) g_e sqrt(H) w.
pub fn sle_gamow_closed_form(height: f64, width: f64) -> Result<f64> {
    if !(height > 0.0) || !(width > 0.0) {
        return Err(Error::domain(format!(
            "ramp height and width must be positive, got H={height}, w={width}"
        )));
    }
    Ok(TRIANGULAR_EXPONENT_B * height.sqrt() * width)
}

/// Compute the exponent, using the closed form where one exists
/// (triangular, rectangular, linear ramp) and sin^2-substituted adaptive
/// quadrature otherwise.
pub fn gamow_exponent(profile: &BarrierProfile, energy_offset: f64) -> Result<GamowResult> {
    let shifted = profile.shifted(energy_offset)?;
    match shifted {
        BarrierProfile::Triangular { phi, field } => closed(triangular_gamow_closed_form(phi, field)?),
        BarrierProfile::SchottkyNordheim {
            phi,
            field,
            image_coefficient,
        } if image_coefficient == 0.0 => closed(triangular_gamow_closed_form(phi, field)?),
        BarrierProfile::Rectangular { height, width } => {
            Ok(GamowResult {
                exponent: GAMOW_PREFACTOR * height.sqrt() * width,
                vanished: false,
                method: GamowMethod::ClosedForm,
                n_intervals: 0,
            })
        }
        BarrierProfile::StraightLineEquivalent { height, width } => {
            closed(sle_gamow_closed_form(height, width)?)
        }
        other => quadrature_exponent(&other),
    }
}

fn closed(exponent: f64) -> Result<GamowResult> {
    Ok(GamowResult {
        exponent,
        vanished: false,
        method: GamowMethod::ClosedForm,
        n_intervals: 0,
    })
}

/// Force the quadrature path regardless of kind. Used to cross-check the
/// integrator against the closed forms.
pub fn gamow_exponent_quadrature(
    profile: &BarrierProfile,
    energy_offset: f64,
) -> Result<GamowResult> {
    let shifted = profile.shifted(energy_offset)?;
    quadrature_exponent(&shifted)
}

fn quadrature_exponent(shifted: &BarrierProfile) -> Result<GamowResult> {
    let geo = shifted.geometry()?;
    if geo.vanished {
        return Ok(GamowResult {
            exponent: 0.0,
            vanished: true,
            method: GamowMethod::Quadrature,
            n_intervals: 0,
        });
    }
    let (z1, z2) = (geo.z1, geo.z2);
    if z2 <= z1 {
        // zero-thickness barrier (degenerate rectangle)
        return Ok(GamowResult {
            exponent: 0.0,
            vanished: false,
            method: GamowMethod::Quadrature,
            n_intervals: 0,
        });
    }
    // Validate the endpoints once; every quadrature node lies inside [z1, z2]
    // so the closure below cannot hit a domain error.
    shifted.motive_energy(z1)?;
    shifted.motive_energy(z2)?;
    let width = z2 - z1;
    // z = z1 + (z2 - z1) sin^2(t) absorbs the sqrt zeros at both ends:
    // the transformed integrand behaves like t^2 near t = 0 (and mirrored
    // at t = pi/2), so the Gauss rule sees a smooth function.
    let f = |t: f64| {
        let s = t.sin();
        let z = z1 + width * s * s;
        let m = shifted.motive_energy(z).unwrap_or(0.0).max(0.0);
        m.sqrt() * width * (2.0 * t).sin()
    };
    let q = integrate_adaptive(&f, 0.0, std::f64::consts::FRAC_PI_2, QUADRATURE_REL_TOL)?;
    Ok(GamowResult {
        exponent: GAMOW_PREFACTOR * q.value,
        vanished: false,
        method: GamowMethod::Quadrature,
        n_intervals: q.n_intervals,
    })
}

/// Transmission estimate D = exp(-G) at the given energy offset. A barrier
/// vanished at that offset transmits fully (D = 1) in this approximation.
pub fn transmission(profile: &BarrierProfile, energy_offset: f64) -> Result<TransmissionResult> {
    let gamow = gamow_exponent(profile, energy_offset)?;
    let d = if gamow.vanished {
        1.0
    } else {
        (-gamow.exponent).exp()
    };
    Ok(TransmissionResult { d, gamow })
}
