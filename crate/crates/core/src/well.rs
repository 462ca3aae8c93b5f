//! Bound states of the hard-wall well: the particle-in-a-box levels used
//! to anchor the energy scale of everything else.
//!
//! A well of length L (nm) confines an electron to standing waves with
//! node spacing L/n, giving wavenumber k_n = n pi / L and energy
//! E_n = W n^2 / L^2 with W the well energy coefficient in eV nm^2.

use crate::constants::{CODATA_2018, WELL_ENERGY_COEFFICIENT};
use crate::error::{Error, Result};

/// Amplitude convention for the standing-wave samples.
///
/// `Conventional` scales so the probability density integrates to one over
/// the well. `Entity` carries the entity count n1 as an explicit factor on
/// top of that; for one electron n1 is exactly 1, and the multiplication
/// is kept explicit so the two conventions remain distinguishable in code
/// rather than silently conflated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Conventional,
    Entity,
}

impl Normalization {
    pub fn name(&self) -> &'static str {
        match self {
            Normalization::Conventional => "conventional",
            Normalization::Entity => "entity",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "conventional" => Ok(Normalization::Conventional),
            "entity" => Ok(Normalization::Entity),
            _ => Err(Error::domain(format!(
                "unknown normalization `{s}`; expected conventional or entity"
            ))),
        }
    }
}

/// One bound level of the hard-wall well.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct WellLevel {
    pub n: u32,
    /// Well length, nm.
    pub length: f64,
    /// Level energy above the well bottom, eV.
    pub energy: f64,
    /// Standing-wave wavenumber n pi / L, 1/nm.
    pub wavenumber: f64,
}

fn check_inputs(length: f64, n: u32) -> Result<()> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::domain(format!(
            "well length must be positive and finite, got {length}"
        )));
    }
    if n == 0 {
        return Err(Error::domain(
            "quantum number n starts at 1; n = 0 is the empty well".to_string(),
        ));
    }
    Ok(())
}

pub fn energy_level(length: f64, n: u32) -> Result<WellLevel> {
    check_inputs(length, n)?;
    let nf = n as f64;
    Ok(WellLevel {
        n,
        length,
        // Grouped so E_n is exactly n^2 times E_1 in floating point.
        energy: WELL_ENERGY_COEFFICIENT / (length * length) * (nf * nf),
        wavenumber: nf * std::f64::consts::PI / length,
    })
}

/// Evaluate the standing wave on caller-supplied positions (nm). Outside
/// the walls the hard-wall state is identically zero.
pub fn wavefunction_samples(
    length: f64,
    n: u32,
    normalization: Normalization,
    grid: &[f64],
) -> Result<Vec<f64>> {
    check_inputs(length, n)?;
    let k = n as f64 * std::f64::consts::PI / length;
    let amplitude = (2.0 / length).sqrt();
    let amplitude = match normalization {
        Normalization::Conventional => amplitude,
        Normalization::Entity => CODATA_2018.n1 * amplitude,
    };
    let mut out = Vec::with_capacity(grid.len());
    for &z in grid {
        if !z.is_finite() {
            return Err(Error::domain(format!("grid position must be finite, got {z}")));
        }
        out.push(if (0.0..=length).contains(&z) {
            amplitude * (k * z).sin()
        } else {
            0.0
        });
    }
    Ok(out)
}

/// Uniform closed grid over [0, L] with `n_points` samples (endpoints
/// included).
pub fn uniform_grid(length: f64, n_points: usize) -> Result<Vec<f64>> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::domain(format!(
            "well length must be positive and finite, got {length}"
        )));
    }
    if n_points < 2 {
        return Err(Error::domain("grid needs at least 2 points".to_string()));
    }
    let h = length / (n_points - 1) as f64;
    Ok((0..n_points).map(|i| i as f64 * h).collect())
}

/// Trapezoid integral of the squared wave over the well on a uniform grid.
///
/// For sin^2 on a uniform grid the trapezoid rule is exact up to roundoff
/// as long as the grid does not alias the cos(2kz) component, i.e. as long
/// as 2n is not a multiple of (n_points - 1); callers probing high n
/// should raise the resolution accordingly.
pub fn norm_integral(
    length: f64,
    n: u32,
    normalization: Normalization,
    n_points: usize,
) -> Result<f64> {
    let grid = uniform_grid(length, n_points)?;
    let psi = wavefunction_samples(length, n, normalization, &grid)?;
    let h = length / (n_points - 1) as f64;
    let mut acc = 0.0;
    for (i, p) in psi.iter().enumerate() {
        let w = if i == 0 || i == n_points - 1 { 0.5 } else { 1.0 };
        acc += w * p * p;
    }
    Ok(acc * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn ground_level_of_ten_nm_well() {
        let lvl = energy_level(10.0, 1).unwrap();
        assert!((lvl.energy - 3.7603016261673744e-3).abs() < 1e-15, "{}", lvl.energy);
        // two significant figures: 3.8 meV
        let mev = lvl.energy * 1e3;
        assert!((mev - 3.8).abs() < 0.05);
        assert!((lvl.wavenumber - std::f64::consts::PI / 10.0).abs() < 1e-16);
    }

    #[test]
    fn energies_scale_as_n_squared() {
        let e1 = energy_level(2.5, 1).unwrap().energy;
        let e2 = energy_level(2.5, 2).unwrap().energy;
        let e3 = energy_level(2.5, 3).unwrap().energy;
        assert_eq!(e2, 4.0 * e1);
        assert_eq!(e3, 9.0 * e1);
    }

    #[test]
    fn wave_vanishes_at_walls_and_outside() {
        let l = 3.0;
        let psi = wavefunction_samples(l, 2, Normalization::Conventional, &[0.0, l, -0.5, 4.0])
            .unwrap();
        assert_eq!(psi[0], 0.0);
        assert!(psi[1].abs() < 1e-15);
        assert_eq!(psi[2], 0.0);
        assert_eq!(psi[3], 0.0);
    }

    #[test]
    fn ground_state_peaks_at_center() {
        let l = 2.0;
        let psi = wavefunction_samples(l, 1, Normalization::Conventional, &[l / 2.0]).unwrap();
        assert!((psi[0] - (2.0 / l).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn second_level_changes_sign_across_node() {
        let l = 2.0;
        let psi =
            wavefunction_samples(l, 2, Normalization::Conventional, &[l / 4.0, 3.0 * l / 4.0])
                .unwrap();
        assert!(psi[0] > 0.0 && psi[1] < 0.0);
        assert!((psi[0] + psi[1]).abs() < 1e-15);
    }

    #[test]
    fn trapezoid_norm_is_exact_for_both_conventions() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let l = rng.gen_range(0.5..50.0);
            let n = rng.gen_range(1..=20u32);
            for norm in [Normalization::Conventional, Normalization::Entity] {
                let i = norm_integral(l, n, norm, 2049).unwrap();
                assert!((i - 1.0).abs() < 1e-12, "L={l} n={n} {norm:?}: {i}");
            }
        }
    }

    #[test]
    fn entity_equals_conventional_times_unit_count() {
        let grid = uniform_grid(4.0, 257).unwrap();
        let a = wavefunction_samples(4.0, 3, Normalization::Conventional, &grid).unwrap();
        let b = wavefunction_samples(4.0, 3, Normalization::Entity, &grid).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert!(*y == x * CODATA_2018.n1);
        }
    }

    #[test]
    fn input_validation() {
        assert!(energy_level(0.0, 1).is_err());
        assert!(energy_level(-1.0, 1).is_err());
        assert!(energy_level(1.0, 0).is_err());
        assert!(uniform_grid(1.0, 1).is_err());
        assert!(wavefunction_samples(1.0, 1, Normalization::Entity, &[f64::NAN]).is_err());
    }
}
