//! One-dimensional motive-energy profiles M(z) and their geometry.
//!
//! The motive energy is the difference between the electron's potential
//! energy along the tunnelling axis and its total energy normal to the
//! surface; the barrier is the region where M(z) > 0. Five families are
//! provided:
//!
//! * `SchottkyNordheim` - field-emission barrier phi - F z - B/z, a
//!   triangular ramp rounded by the classical image interaction.
//! * `Triangular` - the same without the image term: phi - F z.
//! * `Rectangular` - V0 on [0, width), 0 outside.
//! * `StraightLineEquivalent` - linear ramp H (1 - z/width) on [0, width],
//!   used as a fit-by-eye stand-in for curved profiles in rate comparisons.
//! * `HydrogenicAxial` - field-ionization barrier I - Z C/z - F z along the
//!   axis from a hydrogenic atom toward a conductor, with an optional image
//!   interaction whose placement is configurable (the placement question has
//!   no settled answer; both conventions are provided and reported, never
//!   adjudicated).
//!
//! Working units throughout: eV, nm, V/nm. The numeric value of e*F*z in eV
//! equals F*z when F is in V/nm and z in nm, so the charge never appears
//! explicitly below.

use crate::constants::{COULOMB_COEFFICIENT, IMAGE_COEFFICIENT};
use crate::error::{Error, Result};
use crate::numerics::{bisect, golden_max};

/// Where the image interaction of the tunnelling electron is anchored for
/// near-surface hydrogenic barriers.
///
/// `ElectronCentroid` is the standard self-image: -B/d_e with d_e the
/// instantaneous electron distance from the surface. `NucleusOpposite` keeps
/// the image charge fixed at the mirror point of the nucleus, giving
/// -B/(2 d_n - z) with d_n the nucleus-surface distance; this is one
/// defensible reading of an unsettled modelling question and is labelled as
/// such wherever it is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ImagePlacement {
    None,
    ElectronCentroid,
    NucleusOpposite,
}

impl ImagePlacement {
    pub fn name(&self) -> &'static str {
        match self {
            ImagePlacement::None => "none",
            ImagePlacement::ElectronCentroid => "electron_centroid",
            ImagePlacement::NucleusOpposite => "nucleus_opposite",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(ImagePlacement::None),
            "electron_centroid" | "centroid" => Ok(ImagePlacement::ElectronCentroid),
            "nucleus_opposite" => Ok(ImagePlacement::NucleusOpposite),
            _ => Err(Error::domain(format!(
                "unknown image placement `{s}`; expected none, electron_centroid or nucleus_opposite"
            ))),
        }
    }
}

/// A 1D barrier profile. Construct through the checked constructors; fields
/// are validated there and treated as immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub enum BarrierProfile {
    SchottkyNordheim {
        /// Zero-field barrier height (local work function), eV.
        phi: f64,
        /// Field magnitude, V/nm.
        field: f64,
        /// Image-interaction coefficient, eV nm. 0 disables the image term.
        image_coefficient: f64,
    },
    Triangular {
        phi: f64,
        field: f64,
    },
    Rectangular {
        height: f64,
        /// Barrier thickness, nm. 0 is allowed as the degenerate no-barrier case.
        width: f64,
    },
    StraightLineEquivalent {
        height: f64,
        width: f64,
    },
    HydrogenicAxial {
        /// Ionization energy of the topmost electron, eV.
        ionization: f64,
        /// Charge number seen by that electron. Effective (non-integer)
        /// values are allowed so non-hydrogen species can reuse the
        /// hydrogenic form.
        z_charge: f64,
        field: f64,
        placement: ImagePlacement,
        /// Nucleus-to-surface distance, nm; required when placement != None.
        surface_distance: Option<f64>,
    },
}

/// Zeros and peak of a barrier profile.
///
/// When `vanished` is true no positive barrier region exists; `z1`, `z2`
/// both hold the location of the (non-positive) stationary point and
/// `m_peak` its motive value. For `Rectangular` the "zeros" are the support
/// edges: the profile steps down to zero there rather than crossing it
/// smoothly.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BarrierGeometry {
    pub z1: f64,
    pub z2: f64,
    pub z_peak: f64,
    pub m_peak: f64,
    pub vanished: bool,
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::domain(format!(
            "{name} must be positive and finite, got {v}"
        )));
    }
    Ok(())
}

fn check_non_negative(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::domain(format!(
            "{name} must be non-negative and finite, got {v}"
        )));
    }
    Ok(())
}

impl BarrierProfile {
    /// Image-rounded field-emission barrier with the physical image
    /// coefficient.
    pub fn schottky_nordheim(phi: f64, field: f64) -> Result<Self> {
        Self::schottky_nordheim_with_image(phi, field, IMAGE_COEFFICIENT)
    }

    /// Image-rounded barrier with an explicit image coefficient (eV nm).
    /// Coefficient 0 reproduces the triangular barrier bit-for-bit.
    pub fn schottky_nordheim_with_image(
        phi: f64,
        field: f64,
        image_coefficient: f64,
    ) -> Result<Self> {
        check_positive("phi", phi)?;
        check_non_negative("field", field)?;
        check_non_negative("image_coefficient", image_coefficient)?;
        Ok(BarrierProfile::SchottkyNordheim {
            phi,
            field,
            image_coefficient,
        })
    }

    pub fn triangular(phi: f64, field: f64) -> Result<Self> {
        check_positive("phi", phi)?;
        check_non_negative("field", field)?;
        Ok(BarrierProfile::Triangular { phi, field })
    }

    pub fn rectangular(height: f64, width: f64) -> Result<Self> {
        check_positive("height", height)?;
        check_non_negative("width", width)?;
        Ok(BarrierProfile::Rectangular { height, width })
    }

    pub fn straight_line(height: f64, width: f64) -> Result<Self> {
        check_positive("height", height)?;
        check_positive("width", width)?;
        Ok(BarrierProfile::StraightLineEquivalent { height, width })
    }

    /// Free-space hydrogenic axial barrier (no surface, no image term).
    pub fn hydrogenic_axial(ionization: f64, z_charge: f64, field: f64) -> Result<Self> {
        check_positive("ionization", ionization)?;
        check_positive("z_charge", z_charge)?;
        check_non_negative("field", field)?;
        Ok(BarrierProfile::HydrogenicAxial {
            ionization,
            z_charge,
            field,
            placement: ImagePlacement::None,
            surface_distance: None,
        })
    }

    /// Hydrogenic axial barrier near a conductor surface with an image
    /// interaction anchored per `placement`.
    pub fn hydrogenic_axial_near_surface(
        ionization: f64,
        z_charge: f64,
        field: f64,
        placement: ImagePlacement,
        surface_distance: f64,
    ) -> Result<Self> {
        check_positive("ionization", ionization)?;
        check_positive("z_charge", z_charge)?;
        check_non_negative("field", field)?;
        if placement == ImagePlacement::None {
            return Self::hydrogenic_axial(ionization, z_charge, field);
        }
        check_positive("surface_distance", surface_distance)?;
        Ok(BarrierProfile::HydrogenicAxial {
            ionization,
            z_charge,
            field,
            placement,
            surface_distance: Some(surface_distance),
        })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            BarrierProfile::SchottkyNordheim { .. } => "schottky_nordheim",
            BarrierProfile::Triangular { .. } => "triangular",
            BarrierProfile::Rectangular { .. } => "rectangular",
            BarrierProfile::StraightLineEquivalent { .. } => "straight_line_equivalent",
            BarrierProfile::HydrogenicAxial { .. } => "hydrogenic_axial",
        }
    }

    /// Zero-field height parameter: phi, V0, H, or I depending on the kind.
    pub fn height_param(&self) -> f64 {
        match *self {
            BarrierProfile::SchottkyNordheim { phi, .. } => phi,
            BarrierProfile::Triangular { phi, .. } => phi,
            BarrierProfile::Rectangular { height, .. } => height,
            BarrierProfile::StraightLineEquivalent { height, .. } => height,
            BarrierProfile::HydrogenicAxial { ionization, .. } => ionization,
        }
    }

    pub fn field(&self) -> Option<f64> {
        match *self {
            BarrierProfile::SchottkyNordheim { field, .. }
            | BarrierProfile::Triangular { field, .. }
            | BarrierProfile::HydrogenicAxial { field, .. } => Some(field),
            _ => None,
        }
    }

    /// Upper end of the coordinate domain on which M(z) is defined
    /// (exclusive); infinite for profiles without an image-term singularity
    /// on the far side.
    fn domain_end(&self) -> f64 {
        match *self {
            BarrierProfile::HydrogenicAxial {
                placement,
                surface_distance,
                ..
            } => match placement {
                ImagePlacement::None => f64::INFINITY,
                ImagePlacement::ElectronCentroid => surface_distance.unwrap(),
                ImagePlacement::NucleusOpposite => 2.0 * surface_distance.unwrap(),
            },
            _ => f64::INFINITY,
        }
    }

    /// Motive energy M(z) in eV at position z in nm.
    pub fn motive_energy(&self, z: f64) -> Result<f64> {
        if !z.is_finite() {
            return Err(Error::domain(format!("z must be finite, got {z}")));
        }
        match *self {
            BarrierProfile::SchottkyNordheim {
                phi,
                field,
                image_coefficient,
            } => {
                if image_coefficient == 0.0 {
                    // Bit-identical to the triangular barrier by construction.
                    return BarrierProfile::Triangular { phi, field }.motive_energy(z);
                }
                if z <= 0.0 {
                    return Err(Error::domain(format!(
                        "image term is singular at z = 0; got z = {z}"
                    )));
                }
                Ok(phi - field * z - image_coefficient / z)
            }
            BarrierProfile::Triangular { phi, field } => {
                if z < 0.0 {
                    return Err(Error::domain(format!("z must be >= 0, got {z}")));
                }
                Ok(phi - field * z)
            }
            BarrierProfile::Rectangular { height, width } => {
                if z < 0.0 {
                    return Err(Error::domain(format!("z must be >= 0, got {z}")));
                }
                Ok(if z < width { height } else { 0.0 })
            }
            BarrierProfile::StraightLineEquivalent { height, width } => {
                if z < 0.0 {
                    return Err(Error::domain(format!("z must be >= 0, got {z}")));
                }
                Ok(if z <= width {
                    height * (1.0 - z / width)
                } else {
                    0.0
                })
            }
            BarrierProfile::HydrogenicAxial {
                ionization,
                z_charge,
                field,
                placement,
                surface_distance,
            } => {
                if z <= 0.0 {
                    return Err(Error::domain(format!(
                        "Coulomb term is singular at z = 0; got z = {z}"
                    )));
                }
                let mut m = ionization - z_charge * COULOMB_COEFFICIENT / z - field * z;
                match placement {
                    ImagePlacement::None => {}
                    ImagePlacement::ElectronCentroid => {
                        let d_n = surface_distance.unwrap();
                        if z >= d_n {
                            return Err(Error::domain(format!(
                                "z = {z} nm is at or beyond the conductor surface (d = {d_n} nm)"
                            )));
                        }
                        m -= IMAGE_COEFFICIENT / (d_n - z);
                    }
                    ImagePlacement::NucleusOpposite => {
                        let d_n = surface_distance.unwrap();
                        if z >= 2.0 * d_n {
                            return Err(Error::domain(format!(
                                "z = {z} nm reaches the mirror nucleus position (2d = {} nm)",
                                2.0 * d_n
                            )));
                        }
                        m -= IMAGE_COEFFICIENT / (2.0 * d_n - z);
                    }
                }
                Ok(m)
            }
        }
    }

    /// Locate the barrier zeros and peak.
    pub fn geometry(&self) -> Result<BarrierGeometry> {
        match *self {
            BarrierProfile::SchottkyNordheim {
                phi,
                field,
                image_coefficient,
            } => {
                if image_coefficient == 0.0 {
                    return BarrierProfile::Triangular { phi, field }.geometry();
                }
                if field == 0.0 {
                    return Err(Error::domain(
                        "no outer zero: at zero field the image-rounded barrier never closes"
                            .to_string(),
                    ));
                }
                // Roots of F z^2 - phi z + beta = 0.
                let disc = phi * phi - 4.0 * field * image_coefficient;
                let z_peak = (image_coefficient / field).sqrt();
                let m_peak = phi - 2.0 * (image_coefficient * field).sqrt();
                if disc < 0.0 {
                    return Ok(BarrierGeometry {
                        z1: z_peak,
                        z2: z_peak,
                        z_peak,
                        m_peak,
                        vanished: true,
                    });
                }
                let s = disc.sqrt();
                Ok(BarrierGeometry {
                    z1: (phi - s) / (2.0 * field),
                    z2: (phi + s) / (2.0 * field),
                    z_peak,
                    m_peak,
                    vanished: false,
                })
            }
            BarrierProfile::Triangular { phi, field } => {
                if field == 0.0 {
                    return Err(Error::domain(
                        "no outer zero: a field-free triangular profile is a constant".to_string(),
                    ));
                }
                Ok(BarrierGeometry {
                    z1: 0.0,
                    z2: phi / field,
                    z_peak: 0.0,
                    m_peak: phi,
                    vanished: false,
                })
            }
            BarrierProfile::Rectangular { height, width } => Ok(BarrierGeometry {
                z1: 0.0,
                z2: width,
                z_peak: 0.5 * width,
                m_peak: height,
                vanished: false,
            }),
            BarrierProfile::StraightLineEquivalent { height, width } => Ok(BarrierGeometry {
                z1: 0.0,
                z2: width,
                z_peak: 0.0,
                m_peak: height,
                vanished: false,
            }),
            BarrierProfile::HydrogenicAxial {
                ionization,
                z_charge,
                field,
                placement,
                ..
            } => {
                if field == 0.0 {
                    return Err(Error::domain(
                        "no outer zero: at zero field the Coulomb profile tends to the ionization energy".to_string(),
                    ));
                }
                let zc = z_charge * COULOMB_COEFFICIENT;
                // Image-free closed form: roots of F z^2 - I z + Z C = 0.
                let disc = ionization * ionization - 4.0 * field * zc;
                let z_peak_free = (zc / field).sqrt();
                if placement == ImagePlacement::None {
                    let m_peak = ionization - 2.0 * (zc * field).sqrt();
                    if disc < 0.0 {
                        return Ok(BarrierGeometry {
                            z1: z_peak_free,
                            z2: z_peak_free,
                            z_peak: z_peak_free,
                            m_peak,
                            vanished: true,
                        });
                    }
                    let s = disc.sqrt();
                    return Ok(BarrierGeometry {
                        z1: (ionization - s) / (2.0 * field),
                        z2: (ionization + s) / (2.0 * field),
                        z_peak: z_peak_free,
                        m_peak,
                        vanished: false,
                    });
                }
                // Image term present: it only lowers M, so a vanished
                // image-free barrier stays vanished.
                let domain_end = self.domain_end();
                let m = |z: f64| self.motive_energy(z).unwrap_or(f64::NEG_INFINITY);
                let peak_hi = z_peak_free.min(domain_end * (1.0 - 1e-9));
                let peak_lo = peak_hi * 1e-6;
                // M is concave on (0, domain_end), so golden-section on any
                // bracket containing the stationary point is safe.
                let (z_peak, m_peak) = golden_max(&m, peak_lo, peak_hi, 1e-12);
                if disc < 0.0 || m_peak <= 0.0 {
                    return Ok(BarrierGeometry {
                        z1: z_peak,
                        z2: z_peak,
                        z_peak,
                        m_peak,
                        vanished: true,
                    });
                }
                // Inner zero: walk toward the Coulomb core until M < 0.
                let mut a = z_peak;
                while m(a) > 0.0 {
                    a *= 0.5;
                    if a < 1e-300 {
                        return Err(Error::domain(
                            "failed to bracket the inner barrier zero".to_string(),
                        ));
                    }
                }
                let z1 = bisect(&m, a, z_peak, 1e-13, 1e-12)?;
                // Outer zero: walk toward the far singularity (or outward in
                // free space) until M < 0.
                let mut b = z_peak;
                if domain_end.is_finite() {
                    let mut gap = domain_end - z_peak;
                    loop {
                        gap *= 0.5;
                        b = domain_end - gap;
                        if m(b) < 0.0 {
                            break;
                        }
                        if gap < 1e-300 {
                            return Err(Error::domain(
                                "failed to bracket the outer barrier zero".to_string(),
                            ));
                        }
                    }
                } else {
                    while m(b) > 0.0 {
                        b *= 2.0;
                    }
                }
                let z2 = bisect(&m, z_peak, b, 1e-13, 1e-12)?;
                Ok(BarrierGeometry {
                    z1,
                    z2,
                    z_peak,
                    m_peak,
                    vanished: false,
                })
            }
        }
    }

    /// Peak lowering of an image-rounded barrier relative to its zero-field
    /// height: phi - M_peak = c_S sqrt(F) for the physical image coefficient.
    pub fn schottky_reduction(&self) -> Result<f64> {
        match *self {
            BarrierProfile::SchottkyNordheim {
                phi: _,
                field,
                image_coefficient,
            } => {
                check_non_negative("field", field)?;
                Ok(2.0 * (image_coefficient * field).sqrt())
            }
            _ => Err(Error::domain(format!(
                "schottky_reduction applies to the image-rounded barrier, not {}",
                self.kind_name()
            ))),
        }
    }

    /// Field at which the barrier peak reaches zero, for kinds that vanish
    /// at finite field (closed form; image-free for the hydrogenic kind).
    pub fn vanishing_field(&self) -> Result<f64> {
        match *self {
            BarrierProfile::SchottkyNordheim {
                phi,
                image_coefficient,
                ..
            } => {
                if image_coefficient == 0.0 {
                    return Err(Error::domain(
                        "a triangular barrier never vanishes at finite field".to_string(),
                    ));
                }
                Ok(phi * phi / (4.0 * image_coefficient))
            }
            BarrierProfile::HydrogenicAxial {
                ionization,
                z_charge,
                placement,
                ..
            } => {
                if placement != ImagePlacement::None {
                    return self.vanishing_field_numeric();
                }
                Ok(ionization * ionization / (4.0 * z_charge * COULOMB_COEFFICIENT))
            }
            _ => Err(Error::domain(format!(
                "{} barriers do not vanish at finite field",
                self.kind_name()
            ))),
        }
    }

    /// Bisection on the peak motive as a function of field. Used for
    /// hydrogenic barriers with an image term, where no closed form exists.
    fn vanishing_field_numeric(&self) -> Result<f64> {
        let with_field = |f: f64| -> BarrierProfile {
            let mut p = self.clone();
            if let BarrierProfile::HydrogenicAxial { field, .. } = &mut p {
                *field = f;
            }
            p
        };
        let peak = |f: f64| -> f64 {
            with_field(f)
                .geometry()
                .map(|g| g.m_peak)
                .unwrap_or(f64::NAN)
        };
        // The image term lowers the peak, so the threshold sits at or below
        // the image-free closed form.
        let f_free = match *self {
            BarrierProfile::HydrogenicAxial {
                ionization,
                z_charge,
                ..
            } => ionization * ionization / (4.0 * z_charge * COULOMB_COEFFICIENT),
            _ => unreachable!(),
        };
        bisect(&peak, 1e-9, f_free * 1.000001, 1e-9, 1e-9)
    }

    /// Linear ramp fitted to this barrier: height = peak motive, width =
    /// distance between the zeros. The fit-by-eye stand-in used when a
    /// closed-form rate comparison is wanted for a curved profile.
    pub fn straight_line_equivalent_fit(&self) -> Result<BarrierProfile> {
        let geo = self.geometry()?;
        if geo.vanished {
            return Err(Error::domain(
                "cannot fit a ramp to a vanished barrier".to_string(),
            ));
        }
        BarrierProfile::straight_line(geo.m_peak, geo.z2 - geo.z1)
    }

    /// The profile seen by an electron displaced `offset` eV above the
    /// reference level: same family, zero-field height reduced by the
    /// offset. For bounded-support kinds the support shrinks accordingly and
    /// negative offsets are rejected (the outside level would sit above the
    /// electron, leaving no outer zero).
    pub fn shifted(&self, offset: f64) -> Result<BarrierProfile> {
        if offset == 0.0 {
            return Ok(self.clone());
        }
        if !offset.is_finite() {
            return Err(Error::domain(format!("offset must be finite, got {offset}")));
        }
        let h = self.height_param();
        if offset >= h {
            return Err(Error::domain(format!(
                "energy offset {offset} eV is at or above the zero-field barrier height {h} eV"
            )));
        }
        match *self {
            BarrierProfile::SchottkyNordheim {
                phi,
                field,
                image_coefficient,
            } => Ok(BarrierProfile::SchottkyNordheim {
                phi: phi - offset,
                field,
                image_coefficient,
            }),
            BarrierProfile::Triangular { phi, field } => Ok(BarrierProfile::Triangular {
                phi: phi - offset,
                field,
            }),
            BarrierProfile::Rectangular { height, width } => {
                if offset < 0.0 {
                    return Err(Error::domain(
                        "no outer zero: a negative offset raises the whole axis above the outside level".to_string(),
                    ));
                }
                Ok(BarrierProfile::Rectangular {
                    height: height - offset,
                    width,
                })
            }
            BarrierProfile::StraightLineEquivalent { height, width } => {
                if offset < 0.0 {
                    return Err(Error::domain(
                        "no outer zero: a negative offset raises the whole axis above the outside level".to_string(),
                    ));
                }
                Ok(BarrierProfile::StraightLineEquivalent {
                    height: height - offset,
                    width: width * (1.0 - offset / height),
                })
            }
            BarrierProfile::HydrogenicAxial {
                ionization,
                z_charge,
                field,
                placement,
                surface_distance,
            } => Ok(BarrierProfile::HydrogenicAxial {
                ionization: ionization - offset,
                z_charge,
                field,
                placement,
                surface_distance,
            }),
        }
    }

    /// Serialize to the flat key-value record used by config files and the
    /// CLI. Floats are written in shortest round-trip form.
    pub fn to_flat_record(&self) -> Vec<(&'static str, String)> {
        let mut kv: Vec<(&'static str, String)> = vec![("kind", self.kind_name().to_string())];
        match *self {
            BarrierProfile::SchottkyNordheim {
                phi,
                field,
                image_coefficient,
            } => {
                kv.push(("height_param", format!("{phi:?}")));
                kv.push(("F", format!("{field:?}")));
                kv.push(("image_coefficient", format!("{image_coefficient:?}")));
            }
            BarrierProfile::Triangular { phi, field } => {
                kv.push(("height_param", format!("{phi:?}")));
                kv.push(("F", format!("{field:?}")));
            }
            BarrierProfile::Rectangular { height, width }
            | BarrierProfile::StraightLineEquivalent { height, width } => {
                kv.push(("height_param", format!("{height:?}")));
                kv.push(("width", format!("{width:?}")));
            }
            BarrierProfile::HydrogenicAxial {
                ionization,
                z_charge,
                field,
                placement,
                surface_distance,
            } => {
                kv.push(("height_param", format!("{ionization:?}")));
                kv.push(("F", format!("{field:?}")));
                kv.push(("Z", format!("{z_charge:?}")));
                kv.push(("image_placement", placement.name().to_string()));
                if let Some(d) = surface_distance {
                    kv.push(("surface_distance", format!("{d:?}")));
                }
            }
        }
        kv
    }

    /// Rebuild a profile from flat key-value pairs (order-insensitive).
    /// Unknown or duplicate keys are rejected.
    pub fn from_flat_record(pairs: &[(String, String)]) -> Result<Self> {
        use std::collections::BTreeMap;
        let mut map: BTreeMap<&str, &str> = BTreeMap::new();
        for (k, v) in pairs {
            if map.insert(k.as_str(), v.as_str()).is_some() {
                return Err(Error::domain(format!("duplicate key `{k}` in barrier record")));
            }
        }
        fn parse_f64(key: &str, v: &str) -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::domain(format!("key `{key}`: expected a number, got `{v}`")))
        }
        fn require<'a>(
            map: &mut BTreeMap<&str, &'a str>,
            kind: &str,
            key: &'static str,
        ) -> Result<&'a str> {
            map.remove(key).ok_or_else(|| {
                Error::domain(format!("barrier record is missing `{key}` for kind `{kind}`"))
            })
        }
        let kind = map
            .remove("kind")
            .ok_or_else(|| Error::domain("barrier record is missing `kind`".to_string()))?;
        let profile = match kind {
            "schottky_nordheim" | "sn" => {
                let phi = parse_f64("height_param", require(&mut map, kind, "height_param")?)?;
                let field = parse_f64("F", require(&mut map, kind, "F")?)?;
                let beta = match map.remove("image_coefficient") {
                    Some(v) => parse_f64("image_coefficient", v)?,
                    None => IMAGE_COEFFICIENT,
                };
                BarrierProfile::schottky_nordheim_with_image(phi, field, beta)?
            }
            "triangular" => {
                let phi = parse_f64("height_param", require(&mut map, kind, "height_param")?)?;
                let field = parse_f64("F", require(&mut map, kind, "F")?)?;
                BarrierProfile::triangular(phi, field)?
            }
            "rectangular" | "rect" => {
                let h = parse_f64("height_param", require(&mut map, kind, "height_param")?)?;
                let w = parse_f64("width", require(&mut map, kind, "width")?)?;
                BarrierProfile::rectangular(h, w)?
            }
            "straight_line_equivalent" | "sle" => {
                let h = parse_f64("height_param", require(&mut map, kind, "height_param")?)?;
                let w = parse_f64("width", require(&mut map, kind, "width")?)?;
                BarrierProfile::straight_line(h, w)?
            }
            "hydrogenic_axial" | "hydrogenic" => {
                let i = parse_f64("height_param", require(&mut map, kind, "height_param")?)?;
                let field = parse_f64("F", require(&mut map, kind, "F")?)?;
                let z = match map.remove("Z") {
                    Some(v) => parse_f64("Z", v)?,
                    None => 1.0,
                };
                let placement = match map.remove("image_placement") {
                    Some(v) => ImagePlacement::from_name(v)?,
                    None => ImagePlacement::None,
                };
                match placement {
                    ImagePlacement::None => BarrierProfile::hydrogenic_axial(i, z, field)?,
                    _ => {
                        let d = parse_f64(
                            "surface_distance",
                            require(&mut map, kind, "surface_distance")?,
                        )?;
                        BarrierProfile::hydrogenic_axial_near_surface(i, z, field, placement, d)?
                    }
                }
            }
            other => {
                return Err(Error::domain(format!(
                    "unknown barrier kind `{other}`; expected schottky_nordheim, triangular, \
                     rectangular, straight_line_equivalent or hydrogenic_axial"
                )))
            }
        };
        if let Some((k, _)) = map.into_iter().next() {
            return Err(Error::domain(format!(
                "unknown key `{k}` in barrier record for kind `{}`",
                profile.kind_name()
            )));
        }
        Ok(profile)
    }
}
