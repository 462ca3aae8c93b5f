//! Field ionization of gas atoms above a charged surface: critical
//! distances, ionization rate exponents, usable-field estimates, and the
//! site-contrast comparison between the tunnelling and orbital-overlap
//! brightness formulations.
//!
//! Rate exponents delegate to [`crate::jwkb`] on [`crate::barriers`]
//! profiles; this module adds no tunnelling physics of its own.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::barriers::{BarrierProfile, ImagePlacement};
use crate::constants::{KAPPA_COEFFICIENT, RYDBERG_EV, TRIANGULAR_EXPONENT_B};
use crate::error::{Error, Result};
use crate::jwkb::{self, GamowResult};

/// Default attempt frequency for turning rate exponents into rates (Hz).
pub const DEFAULT_ATTEMPT_FREQUENCY_HZ: f64 = 1.0e16;

/// Rate window bounding the practically observable ionization regime (Hz).
/// Below the floor nothing ionizes on experimental timescales; above the
/// ceiling every atom ionizes before reaching the critical surface.
pub const USABLE_RATE_FLOOR_HZ: f64 = 1.0e4;
pub const USABLE_RATE_CEILING_HZ: f64 = 1.0e10;

/// Default resolution threshold for the interior/midpoint contrast ratio.
pub const DEFAULT_RESOLUTION_THRESHOLD: f64 = 2.0;

/// A neutral gas atom characterized by its ionization energy (eV) and the
/// effective nuclear charge seen by the outgoing electron.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GasSpecies {
    pub name: String,
    /// First ionization energy (eV).
    pub ionization_energy: f64,
    /// Effective charge of the ion core, in units of e.
    pub z_effective: f64,
}

/// Effective charge reproducing the observed ionization energy with a
/// hydrogen-like ground state.
fn z_from_ionization(ionization_ev: f64) -> f64 {
    (ionization_ev / RYDBERG_EV).sqrt()
}

impl GasSpecies {
    pub fn custom(name: &str, ionization_energy: f64, z_effective: f64) -> Result<Self> {
        if !(ionization_energy > 0.0) {
            return Err(Error::domain(format!(
                "ionization_energy must be positive, got {ionization_energy}"
            )));
        }
        if !(z_effective > 0.0) {
            return Err(Error::domain(format!(
                "z_effective must be positive, got {z_effective}"
            )));
        }
        Ok(GasSpecies {
            name: name.to_string(),
            ionization_energy,
            z_effective,
        })
    }

    /// Hydrogen: the one species where the hydrogenic model is exact, so
    /// the effective charge is exactly 1 rather than fitted.
    pub fn hydrogen() -> Self {
        GasSpecies {
            name: "H".to_string(),
            ionization_energy: 13.606,
            z_effective: 1.0,
        }
    }

    pub fn helium() -> Self {
        let i = 24.587;
        GasSpecies {
            name: "He".to_string(),
            ionization_energy: i,
            z_effective: z_from_ionization(i),
        }
    }

    pub fn neon() -> Self {
        let i = 21.5645;
        GasSpecies {
            name: "Ne".to_string(),
            ionization_energy: i,
            z_effective: z_from_ionization(i),
        }
    }

    pub fn argon() -> Self {
        let i = 15.7596;
        GasSpecies {
            name: "Ar".to_string(),
            ionization_energy: i,
            z_effective: z_from_ionization(i),
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "h" | "hydrogen" => Ok(Self::hydrogen()),
            "he" | "helium" => Ok(Self::helium()),
            "ne" | "neon" => Ok(Self::neon()),
            "ar" | "argon" => Ok(Self::argon()),
            other => Err(Error::domain(format!(
                "unknown species '{other}' (built in: H, He, Ne, Ar)"
            ))),
        }
    }

    /// Free-space axial barrier for this species in the given field.
    pub fn barrier(&self, field: f64) -> Result<BarrierProfile> {
        BarrierProfile::hydrogenic_axial(self.ionization_energy, self.z_effective, field)
    }

    /// Decay constant of the bound orbital tail (1/nm).
    pub fn orbital_kappa(&self) -> f64 {
        KAPPA_COEFFICIENT * self.ionization_energy.sqrt()
    }
}

/// Distance from the surface at which the atom's level crosses the Fermi
/// level: closer in, there is no empty state to tunnel into.
/// Requires the ionization energy to exceed the work function.
pub fn critical_distance(species: &GasSpecies, phi: f64, field: f64) -> Result<f64> {
    if !(phi > 0.0) {
        return Err(Error::domain(format!("phi must be positive, got {phi}")));
    }
    if !(field > 0.0) {
        return Err(Error::domain(format!(
            "field must be positive, got {field}"
        )));
    }
    let excess = species.ionization_energy - phi;
    if excess <= 0.0 {
        return Err(Error::domain(format!(
            "no critical surface: ionization energy {} eV does not exceed the work function {} eV",
            species.ionization_energy, phi
        )));
    }
    Ok(excess / field)
}

/// Gamow exponent for ionization of `species` through `profile`.
/// The profile must be a hydrogenic axial barrier built for this species;
/// the result is exactly what the barrier/exponent pipeline returns.
/// A field-suppressed barrier gives exponent 0 with the vanished flag set.
pub fn esfi_rate_exponent(species: &GasSpecies, profile: &BarrierProfile) -> Result<GamowResult> {
    match *profile {
        BarrierProfile::HydrogenicAxial {
            ionization,
            z_charge,
            ..
        } => {
            if ionization != species.ionization_energy || z_charge != species.z_effective {
                return Err(Error::domain(format!(
                    "profile (I = {ionization} eV, Z = {z_charge}) does not describe species {} \
                     (I = {} eV, Z = {})",
                    species.name, species.ionization_energy, species.z_effective
                )));
            }
        }
        _ => {
            return Err(Error::domain(format!(
                "esfi_rate_exponent needs a hydrogenic_axial profile, got {}",
                profile.kind_name()
            )));
        }
    }
    jwkb::gamow_exponent(profile, 0.0)
}

/// Ionization rate (Hz) as attempt frequency times the tunnelling factor.
pub fn ionization_rate_hz(
    species: &GasSpecies,
    field: f64,
    attempt_frequency_hz: f64,
) -> Result<f64> {
    if !(attempt_frequency_hz > 0.0) {
        return Err(Error::domain(format!(
            "attempt frequency must be positive, got {attempt_frequency_hz}"
        )));
    }
    let g = esfi_rate_exponent(species, &species.barrier(field)?)?;
    Ok(attempt_frequency_hz * (-g.exponent).exp())
}

/// Field window in which the ionization rate lies inside
/// [`USABLE_RATE_FLOOR_HZ`, `USABLE_RATE_CEILING_HZ`] for the given attempt
/// frequency. Returned as (low field, high field) in V/nm.
pub fn usable_field_band(species: &GasSpecies, attempt_frequency_hz: f64) -> Result<(f64, f64)> {
    if !(attempt_frequency_hz > USABLE_RATE_CEILING_HZ) {
        return Err(Error::domain(format!(
            "attempt frequency {attempt_frequency_hz} Hz must exceed the rate ceiling {USABLE_RATE_CEILING_HZ} Hz"
        )));
    }
    // rate = nu exp(-G); the band edges are fixed targets on G.
    let g_at_floor = (attempt_frequency_hz / USABLE_RATE_FLOOR_HZ).ln();
    let g_at_ceiling = (attempt_frequency_hz / USABLE_RATE_CEILING_HZ).ln();
    let f_low = solve_field_for_exponent(species, g_at_floor)?;
    let f_high = solve_field_for_exponent(species, g_at_ceiling)?;
    Ok((f_low, f_high))
}

/// Field at which the free-space exponent equals `target`. The exponent
/// decreases monotonically in the field, from the deep-tunnelling regime to
/// zero at barrier suppression.
fn solve_field_for_exponent(species: &GasSpecies, target: f64) -> Result<f64> {
    if !(target > 0.0) {
        return Err(Error::domain(format!(
            "exponent target must be positive, got {target}"
        )));
    }
    let f_vanish = species.barrier(1.0)?.vanishing_field()?;
    let g_at = |f: f64| -> Result<f64> {
        Ok(esfi_rate_exponent(species, &species.barrier(f)?)?.exponent)
    };
    let mut lo = 1e-3 * f_vanish;
    // Push the bracket down until the exponent clears the target.
    while g_at(lo)? < target {
        lo *= 0.5;
        if lo < 1e-12 * f_vanish {
            return Err(Error::domain(format!(
                "exponent target {target} unreachable below suppression"
            )));
        }
    }
    let hi = (1.0 - 1e-9) * f_vanish;
    if g_at(hi)? > target {
        return Err(Error::domain(format!(
            "exponent target {target} unreachable: exponent exceeds it all the way to suppression"
        )));
    }
    let mut a = lo;
    let mut b = hi;
    // Bisection on a monotone function; 1e-10 relative is far below the
    // band-edge convention's own significance.
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if g_at(mid)? > target {
            a = mid;
        } else {
            b = mid;
        }
        if (b - a) <= 1e-10 * b {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

/// Ionization exponents for the same atom with the image interaction
/// ignored, anchored at the tunnelling electron's mean position, and
/// anchored opposite the nucleus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlacementSensitivity {
    pub d_critical: f64,
    pub g_none: f64,
    pub g_centroid: f64,
    pub g_nucleus_opposite: f64,
}

impl PlacementSensitivity {
    /// Largest pairwise spread between the three exponents.
    pub fn spread(&self) -> f64 {
        let hi = self.g_none.max(self.g_centroid).max(self.g_nucleus_opposite);
        let lo = self.g_none.min(self.g_centroid).min(self.g_nucleus_opposite);
        hi - lo
    }
}

/// How much the rate exponent moves when the image-charge anchor point is
/// varied between the defensible choices. Only meaningful in the
/// near-surface regime, so `surface_distance` must lie within
/// [d_critical, 3 d_critical] for the given field.
pub fn image_placement_sensitivity(
    species: &GasSpecies,
    phi: f64,
    field: f64,
    surface_distance: f64,
) -> Result<PlacementSensitivity> {
    let d_crit = critical_distance(species, phi, field)?;
    if !(surface_distance >= d_crit && surface_distance <= 3.0 * d_crit) {
        return Err(Error::domain(format!(
            "surface_distance {surface_distance} nm outside the near-surface window \
             [{d_crit}, {}] nm",
            3.0 * d_crit
        )));
    }
    let i = species.ionization_energy;
    let z = species.z_effective;
    let g_for = |placement: ImagePlacement| -> Result<f64> {
        let profile = BarrierProfile::hydrogenic_axial_near_surface(
            i,
            z,
            field,
            placement,
            surface_distance,
        )?;
        Ok(jwkb::gamow_exponent(&profile, 0.0)?.exponent)
    };
    Ok(PlacementSensitivity {
        d_critical: d_crit,
        g_none: g_for(ImagePlacement::None)?,
        g_centroid: g_for(ImagePlacement::ElectronCentroid)?,
        g_nucleus_opposite: g_for(ImagePlacement::NucleusOpposite)?,
    })
}

/// Surface site classes on a faceted emitter tip, ordered from most to
/// least protruding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiteKind {
    Corner,
    Edge,
    Interior,
    Midpoint,
}

impl SiteKind {
    pub fn name(&self) -> &'static str {
        match self {
            SiteKind::Corner => "corner",
            SiteKind::Edge => "edge",
            SiteKind::Interior => "interior",
            SiteKind::Midpoint => "midpoint",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "corner" => Ok(SiteKind::Corner),
            "edge" => Ok(SiteKind::Edge),
            "interior" => Ok(SiteKind::Interior),
            "midpoint" => Ok(SiteKind::Midpoint),
            other => Err(Error::domain(format!(
                "unknown site kind '{other}' (corner, edge, interior, midpoint)"
            ))),
        }
    }

    /// Expected brightness relative to interior sites in field-ion images:
    /// protruding sites show bright, midpoints do not resolve.
    fn expected_contrast(&self) -> std::cmp::Ordering {
        match self {
            SiteKind::Corner | SiteKind::Edge => std::cmp::Ordering::Greater,
            SiteKind::Interior => std::cmp::Ordering::Equal,
            SiteKind::Midpoint => std::cmp::Ordering::Less,
        }
    }
}

/// One imaging site: the local field over it, the critical distance at
/// which ionization happens, and the effective barrier height seen there.
/// All values are absolute, not multipliers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteModel {
    pub site_kind: SiteKind,
    /// Local field over the site (V/nm).
    pub f_local: f64,
    /// Ionization distance above the site (nm).
    pub d_critical: f64,
    /// Effective barrier height for the tunnelling formulation (eV).
    pub h_eff: f64,
    /// Relative empty-state density weighting the overlap formulation.
    pub rho_rel: f64,
}

impl SiteModel {
    pub fn new(site_kind: SiteKind, f_local: f64, d_critical: f64, h_eff: f64) -> Result<Self> {
        Self::with_density(site_kind, f_local, d_critical, h_eff, 1.0)
    }

    pub fn with_density(
        site_kind: SiteKind,
        f_local: f64,
        d_critical: f64,
        h_eff: f64,
        rho_rel: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("f_local", f_local),
            ("d_critical", d_critical),
            ("h_eff", h_eff),
            ("rho_rel", rho_rel),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(SiteModel {
            site_kind,
            f_local,
            d_critical,
            h_eff,
            rho_rel,
        })
    }

    /// Ramp exponent over this site: barrier of height h_eff falling to
    /// zero over h_eff / (e F_local).
    pub fn ramp_exponent(&self) -> f64 {
        TRIANGULAR_EXPONENT_B * self.h_eff.powf(1.5) / self.f_local
    }
}

/// Field and critical-distance multipliers for the built-in facet model.
/// Protruding sites concentrate field and push the critical surface out;
/// midpoints between atoms see slightly less field at the same distance.
const DEFAULT_FACET: [(SiteKind, f64, f64); 4] = [
    (SiteKind::Corner, 1.10, 1.05),
    (SiteKind::Edge, 1.05, 1.02),
    (SiteKind::Interior, 1.00, 1.00),
    (SiteKind::Midpoint, 0.95, 1.00),
];

/// Facet-level inputs shared by every site: imaging species, emitter work
/// function (eV), and the mean field over the facet (V/nm).
pub fn default_facet(species: &GasSpecies, phi: f64, f0: f64) -> Result<Vec<SiteModel>> {
    build_facet(species, phi, f0, &DEFAULT_FACET.map(|(k, f, d)| (k, f, d, 1.0)))
}

/// Assemble absolute site models from per-site multipliers on the facet
/// base values. d multipliers act on the base-field critical distance, so
/// a protruding site is both higher-field and further out.
pub fn build_facet(
    species: &GasSpecies,
    phi: f64,
    f0: f64,
    sites: &[(SiteKind, f64, f64, f64)],
) -> Result<Vec<SiteModel>> {
    if sites.is_empty() {
        return Err(Error::domain("facet has no sites".to_string()));
    }
    let d0 = critical_distance(species, phi, f0)?;
    let h_eff = species.ionization_energy - phi;
    let mut out = Vec::with_capacity(sites.len());
    for &(kind, f_mult, d_mult, rho) in sites {
        if !(f_mult > 0.0) || !(d_mult > 0.0) {
            return Err(Error::domain(format!(
                "multipliers for {} must be positive, got F x {f_mult}, d x {d_mult}",
                kind.name()
            )));
        }
        out.push(SiteModel::with_density(
            kind,
            f0 * f_mult,
            d0 * d_mult,
            h_eff,
            rho,
        )?);
    }
    Ok(out)
}

/// Per-site contrast under the two brightness formulations, normalized to
/// the interior reference site. The agreement flags record whether each
/// formulation's contrast points the way field-ion images actually look
/// (protruding sites bright, midpoints unresolved).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtrResult {
    pub site_kind: SiteKind,
    pub f_local: f64,
    pub d_critical: f64,
    /// Ramp exponent entering the tunnelling formulation.
    pub g_ramp: f64,
    /// Tunnelling-formulation brightness relative to interior.
    pub etr_tunnelling: f64,
    /// Orbital-overlap-formulation brightness relative to interior.
    pub etr_overlap: f64,
    pub tunnelling_agrees_with_image: bool,
    pub overlap_agrees_with_image: bool,
}

/// Contrast tolerance: a ratio this close to 1 counts as "no contrast".
const CONTRAST_EPS: f64 = 1e-9;

fn contrast_direction(ratio: f64) -> std::cmp::Ordering {
    if ratio > 1.0 + CONTRAST_EPS {
        std::cmp::Ordering::Greater
    } else if ratio < 1.0 - CONTRAST_EPS {
        std::cmp::Ordering::Less
    } else {
        std::cmp::Ordering::Equal
    }
}

/// Evaluate both brightness formulations across a facet.
///
/// Tunnelling: brightness follows exp(-G) with the ramp exponent from the
/// local field. Overlap: brightness follows the squared orbital tail at
/// the critical distance, exp(-2 kappa d), weighted by rho_rel.
/// Both are expressed relative to the first interior site.
pub fn facet_contrast(facet: &[SiteModel], species: &GasSpecies) -> Result<Vec<EtrResult>> {
    if facet.is_empty() {
        return Err(Error::domain("facet has no sites".to_string()));
    }
    let reference = facet
        .iter()
        .find(|s| s.site_kind == SiteKind::Interior)
        .ok_or_else(|| {
            Error::domain("facet needs at least one interior site as reference".to_string())
        })?;
    let kappa = species.orbital_kappa();
    let g_ref = reference.ramp_exponent();
    let mut out = Vec::with_capacity(facet.len());
    for site in facet {
        let g = site.ramp_exponent();
        // Ratios formed in exponent space so nearby sites keep full
        // relative precision.
        let etr_tunnelling = (g_ref - g).exp();
        let etr_overlap =
            (-2.0 * kappa * (site.d_critical - reference.d_critical)).exp() * site.rho_rel
                / reference.rho_rel;
        let expected = site.site_kind.expected_contrast();
        out.push(EtrResult {
            site_kind: site.site_kind,
            f_local: site.f_local,
            d_critical: site.d_critical,
            g_ramp: g,
            etr_tunnelling,
            etr_overlap,
            tunnelling_agrees_with_image: contrast_direction(etr_tunnelling) == expected,
            overlap_agrees_with_image: contrast_direction(etr_overlap) == expected,
        });
    }
    Ok(out)
}

/// Whether a formulation reproduces the observed image across the whole
/// facet, and the one-line verdicts the comparison table prints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetVerdict {
    pub tunnelling_agrees: bool,
    pub overlap_agrees: bool,
    /// Interior-to-midpoint brightness ratio under the tunnelling
    /// formulation, when the facet has a midpoint site.
    pub resolution_ratio: Option<f64>,
    pub resolution_threshold: f64,
    /// Atoms resolve when the interior/midpoint ratio clears the threshold.
    pub resolves_atoms: Option<bool>,
}

impl FacetVerdict {
    pub fn tunnelling_line(&self) -> String {
        let mut line = if self.tunnelling_agrees {
            "tunnelling formulation: matches the observed site contrast".to_string()
        } else {
            "tunnelling formulation: does not match the observed site contrast".to_string()
        };
        if let (Some(ratio), Some(resolves)) = (self.resolution_ratio, self.resolves_atoms) {
            line.push_str(&format!(
                "; interior/midpoint ratio {ratio:.3} {} the resolution threshold {:.1}",
                if resolves { "clears" } else { "misses" },
                self.resolution_threshold
            ));
        }
        line
    }

    pub fn overlap_line(&self) -> String {
        if self.overlap_agrees {
            "overlap formulation: matches the observed site contrast".to_string()
        } else {
            "overlap formulation: does not match the observed site contrast".to_string()
        }
    }
}

/// Aggregate per-site agreement into facet-level verdicts, using `tau` as
/// the interior/midpoint resolution threshold.
pub fn facet_verdict(results: &[EtrResult], tau: f64) -> Result<FacetVerdict> {
    if results.is_empty() {
        return Err(Error::domain("no contrast rows to judge".to_string()));
    }
    if !(tau > 1.0) {
        return Err(Error::domain(format!(
            "resolution threshold must exceed 1, got {tau}"
        )));
    }
    let midpoint = results
        .iter()
        .find(|r| r.site_kind == SiteKind::Midpoint);
    let resolution_ratio = midpoint.map(|m| 1.0 / m.etr_tunnelling);
    Ok(FacetVerdict {
        tunnelling_agrees: results.iter().all(|r| r.tunnelling_agrees_with_image),
        overlap_agrees: results.iter().all(|r| r.overlap_agrees_with_image),
        resolution_ratio,
        resolution_threshold: tau,
        resolves_atoms: resolution_ratio.map(|r| r > tau),
    })
}

/// Flat key-value view of a species, for run manifests.
pub fn species_record(species: &GasSpecies) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    map.insert("species".to_string(), species.name.clone());
    map.insert(
        "ionization_energy".to_string(),
        format!("{:?}", species.ionization_energy),
    );
    map.insert(
        "z_effective".to_string(),
        format!("{:?}", species.z_effective),
    );
    map
}
