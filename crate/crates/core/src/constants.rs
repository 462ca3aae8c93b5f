//! Physical constants and the working unit system.
//!
//! Everything downstream of this module works in {eV, nm, V/nm, s}. The
//! magnitudes of interest are O(1)..O(100) in these units, which keeps
//! tunnelling exponents well inside f64 range. SI appears only here, at the
//! constant-definition boundary.
//!
//! Source values are CODATA 2018. The derived coefficients below are
//! hard-coded at full f64 precision and re-derived from the SI table in the
//! test module, so there is a single source of truth with a checked
//! projection into working units.

use crate::error::{Error, Result};

/// CODATA-2018 base constants in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Elementary charge, C (exact).
    pub e: f64,
    /// Electron mass, kg.
    pub m_e: f64,
    /// Planck constant, J s (exact).
    pub h_p: f64,
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// Electric constant (vacuum permittivity), F/m.
    pub eps0: f64,
    /// Amount of substance of one entity; dimensionless multiplier.
    pub n1: f64,
}

/// The single source-of-truth constant table.
pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    e: 1.602_176_634e-19,
    m_e: 9.109_383_7015e-31,
    h_p: 6.626_070_15e-34,
    hbar: 1.054_571_817_646_156_47e-34, // h_p / 2 pi
    eps0: 8.854_187_8128e-12,
    n1: 1.0,
};

/// Identifier recorded in run manifests for provenance of numeric output.
pub const CONSTANTS_TABLE_ID: &str = "codata-2018";

/// Image-interaction coefficient B = e^2 / 16 pi eps0, in eV nm.
pub const IMAGE_COEFFICIENT: f64 = 0.359_991_136_960_641_667;

/// Triangular-barrier exponent coefficient b = 4 (2 m_e)^{1/2} / 3 e hbar,
/// in eV^{-3/2} V nm^{-1}: G = b phi^{3/2} / F for a triangular barrier.
pub const TRIANGULAR_EXPONENT_B: f64 = 6.830_889_626_233_241_25;

/// Schottky constant c_S = (e^3 / 4 pi eps0)^{1/2}, in eV (V/nm)^{-1/2};
/// barrier lowering is c_S F^{1/2}.
pub const SCHOTTKY_CONSTANT: f64 = 1.199_985_228_176_816_63;

/// Decay-constant coefficient (2 m_e)^{1/2} / hbar, in nm^{-1} eV^{-1/2}:
/// kappa = KAPPA_COEFFICIENT * sqrt(E[eV]) in nm^{-1}.
pub const KAPPA_COEFFICIENT: f64 = 5.123_167_219_674_931_16;

/// Gamow prefactor (8 m_e / hbar^2)^{1/2} = 2 * KAPPA_COEFFICIENT,
/// in nm^{-1} eV^{-1/2}.
pub const GAMOW_PREFACTOR: f64 = 10.246_334_439_349_862_3;

/// Coulomb coefficient e^2 / 4 pi eps0 = 4 B, in eV nm.
pub const COULOMB_COEFFICIENT: f64 = 4.0 * IMAGE_COEFFICIENT;

/// Hydrogenic ground-state binding energy (Rydberg energy), eV.
/// Used to derive effective charge numbers for non-hydrogen species.
pub const RYDBERG_EV: f64 = 13.605_693_122_885_842_4;

/// Sommerfeld-well energy coefficient h_p^2 / 8 m_e, in eV nm^2:
/// E_n = WELL_ENERGY_COEFFICIENT * n^2 / L^2 with L in nm.
pub const WELL_ENERGY_COEFFICIENT: f64 = 0.376_030_162_616_737_44;

/// A barrier field value. The toolkit works with the positive magnitude F;
/// in field-emission sign conventions the electrostatic field at the surface
/// is E_conv = -F.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldValue {
    f: f64,
}

impl FieldValue {
    /// Build from a positive magnitude in V/nm.
    pub fn from_magnitude(f: f64) -> Result<Self> {
        if !(f > 0.0) || !f.is_finite() {
            return Err(Error::domain(format!(
                "field magnitude must be positive and finite, got {f}"
            )));
        }
        Ok(FieldValue { f })
    }

    /// Build from a conventional (signed) emission-side field, which is
    /// negative: F = -E_conv.
    pub fn from_conventional(e_conv: f64) -> Result<Self> {
        if !(e_conv < 0.0) || !e_conv.is_finite() {
            return Err(Error::domain(format!(
                "conventional field must be negative and finite, got {e_conv}"
            )));
        }
        Ok(FieldValue { f: -e_conv })
    }

    /// Positive magnitude, V/nm.
    pub fn magnitude(&self) -> f64 {
        self.f
    }

    /// Conventional signed value, V/nm.
    pub fn conventional(&self) -> f64 {
        -self.f
    }
}

/// Names accepted by [`derived_constant`].
pub const DERIVED_CONSTANT_NAMES: [&str; 4] = [
    "image_coefficient",
    "triangular_exponent_b",
    "schottky_constant",
    "kappa_coefficient",
];

/// Look up a derived coefficient by name. Returns (value, unit string).
pub fn derived_constant(name: &str) -> Result<(f64, &'static str)> {
    match name {
        "image_coefficient" => Ok((IMAGE_COEFFICIENT, "eV nm")),
        "triangular_exponent_b" => Ok((TRIANGULAR_EXPONENT_B, "eV^-3/2 V nm^-1")),
        "schottky_constant" => Ok((SCHOTTKY_CONSTANT, "eV (V/nm)^-1/2")),
        "kappa_coefficient" => Ok((KAPPA_COEFFICIENT, "nm^-1 eV^-1/2")),
        _ => Err(Error::UnknownConstant {
            name: name.to_string(),
            valid: "image_coefficient, triangular_exponent_b, schottky_constant, kappa_coefficient",
        }),
    }
}
