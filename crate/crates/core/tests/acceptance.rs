//! End-to-end acceptance checks, one test per shipped guarantee. Each test
//! prints a single `acceptance NN (...): PASS` line (visible under
//! `--nocapture` or `--show-output`) and enforces its own runtime budget.
//!
//! Random draws use a fixed-seed ChaCha stream so every run checks the same
//! cases; the budgets assume the optimized test profile this workspace pins.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, DiscreteCDF};

use tunnelkit::arrow::{self, EnsembleConfig, TrendVerdict};
use tunnelkit::barriers::BarrierProfile;
use tunnelkit::constants::{
    CODATA_2018, KAPPA_COEFFICIENT, SCHOTTKY_CONSTANT, TRIANGULAR_EXPONENT_B,
};
use tunnelkit::esfi::{self, GasSpecies};
use tunnelkit::exact1d::{self, Direction};
use tunnelkit::jwkb;
use tunnelkit::well::{self, Normalization};

fn pass(index: u32, name: &str, detail: &str) {
    println!("acceptance {index:02} ({name}): PASS ({detail})");
}

fn budget(index: u32, started: Instant, limit_s: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    assert!(
        elapsed < limit_s,
        "acceptance {index:02} exceeded its {limit_s} s budget: took {elapsed:.2} s"
    );
}

#[test]
fn acceptance_01_ground_level_of_the_reference_well() {
    let t0 = Instant::now();
    let exe = env!("CARGO_BIN_EXE_tunnelkit");
    let out = Command::new(exe)
        .args(["well", "--length-nm", "10", "--n", "1", "--format", "json"])
        .output()
        .expect("ran the binary");
    assert!(out.status.success(), "well subcommand failed: {out:?}");
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json output");
    let energy_ev = doc["level"]["energy_eV"].as_f64().expect("energy field");
    let mev = energy_ev * 1.0e3;
    // Two significant figures of the 10 nm ground level.
    assert_eq!(format!("{mev:.1}"), "3.8", "ground level {mev} meV");
    budget(1, t0, 1.0);
    pass(1, "well ground level", &format!("E_1 = {mev:.4} meV -> 3.8 meV at 2 s.f."));
}

#[test]
fn acceptance_02_quadrature_matches_triangular_closed_form() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0002);
    let mut worst = 0.0_f64;
    for _ in 0..1_000 {
        let phi = rng.gen_range(2.0_f64..=6.0);
        let field = rng.gen_range(1.0..=10.0);
        let expected = TRIANGULAR_EXPONENT_B * phi.powf(1.5) / field;
        let profile = BarrierProfile::triangular(phi, field).unwrap();
        let quad = jwkb::gamow_exponent_quadrature(&profile, 0.0).unwrap();
        let rel = (quad.exponent - expected).abs() / expected;
        worst = worst.max(rel);
        assert!(
            rel <= 1.0e-6,
            "quadrature {} vs closed form {expected} at phi={phi}, F={field}: rel {rel:e}",
            quad.exponent
        );
    }
    budget(2, t0, 10.0);
    pass(2, "triangular closed form", &format!("1000 draws, worst rel {worst:.2e}"));
}

#[test]
fn acceptance_03_image_rounded_barrier_vanishing_field() {
    let t0 = Instant::now();
    let phi = 4.5_f64;
    let computed = BarrierProfile::schottky_nordheim(phi, 1.0)
        .unwrap()
        .vanishing_field()
        .unwrap();
    // Independent arithmetic route: the square of the peak-lowering constant.
    let expected = phi * phi / (SCHOTTKY_CONSTANT * SCHOTTKY_CONSTANT);
    assert!(
        (computed - expected).abs() <= 1.0e-4,
        "vanishing field {computed} vs {expected}"
    );
    let at_threshold = BarrierProfile::schottky_nordheim(phi, computed).unwrap();
    let t = jwkb::transmission(&at_threshold, 0.0).unwrap();
    assert_eq!(t.d, 1.0, "transmission at the vanishing field");
    let above = BarrierProfile::schottky_nordheim(phi, computed * 1.001).unwrap();
    let t_above = jwkb::transmission(&above, 0.0).unwrap();
    assert!(t_above.gamow.vanished && t_above.d == 1.0);
    budget(3, t0, 1.0);
    pass(3, "vanishing field", &format!("F_R = {computed:.6} V/nm, D = 1 at threshold"));
}

#[test]
fn acceptance_04_transmission_reciprocity() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0004);
    let mut worst_exact = 0.0_f64;
    for i in 0..10_000 {
        let profile = match i % 4 {
            0 => BarrierProfile::rectangular(rng.gen_range(0.5..=6.0), rng.gen_range(0.2..=2.5))
                .unwrap(),
            1 => BarrierProfile::straight_line(rng.gen_range(0.5..=6.0), rng.gen_range(0.2..=2.5))
                .unwrap(),
            2 => BarrierProfile::triangular(rng.gen_range(2.0..=6.0), rng.gen_range(3.0..=10.0))
                .unwrap(),
            _ => {
                let phi = rng.gen_range(2.0..=6.0);
                let f_max = 0.8 * BarrierProfile::schottky_nordheim(phi, 1.0)
                    .unwrap()
                    .vanishing_field()
                    .unwrap();
                BarrierProfile::schottky_nordheim(phi, rng.gen_range(1.0..=f_max)).unwrap()
            }
        };
        let peak = profile.geometry().unwrap().m_peak;
        let energy = peak * rng.gen_range(0.25..=1.3);

        // The semiclassical exponent is a functional of the profile alone,
        // with no direction parameter, so the two orientations coincide
        // identically; two separate evaluations must agree bitwise.
        let g_a = jwkb::transmission(&profile, energy.min(peak * 0.99)).unwrap();
        let g_b = jwkb::transmission(&profile, energy.min(peak * 0.99)).unwrap();
        assert_eq!(g_a.d.to_bits(), g_b.d.to_bits());

        let ltr = exact1d::solve_scattering_directed(&profile, energy, Direction::LeftToRight)
            .unwrap();
        let rtl = exact1d::solve_scattering_directed(&profile, energy, Direction::RightToLeft)
            .unwrap();
        let gap = (ltr.d - rtl.d).abs();
        worst_exact = worst_exact.max(gap);
        assert!(
            gap < 1.0e-10,
            "direction gap {gap:e} for {profile:?} at E={energy}"
        );
    }
    budget(4, t0, 60.0);
    pass(4, "reciprocity", &format!("10000 cases, worst exact-route gap {worst_exact:.2e}"));
}

/// Textbook rectangular-barrier transmission, written out here so the check
/// stays independent of the solver's internals.
fn rectangular_transmission(height: f64, width: f64, energy: f64) -> f64 {
    let k2 = KAPPA_COEFFICIENT * KAPPA_COEFFICIENT * energy;
    if energy < height {
        let q = KAPPA_COEFFICIENT * (height - energy).sqrt();
        let q2 = q * q;
        let s = (q * width).sinh();
        1.0 / (1.0 + (k2 + q2).powi(2) / (4.0 * k2 * q2) * s * s)
    } else {
        let q = KAPPA_COEFFICIENT * (energy - height).sqrt();
        let q2 = q * q;
        let s = (q * width).sin();
        1.0 / (1.0 + (k2 - q2).powi(2) / (4.0 * k2 * q2) * s * s)
    }
}

#[test]
fn acceptance_05_exact_solver_against_rectangular_oracle() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0005);
    let mut worst_rel = 0.0_f64;
    let mut worst_flux = 0.0_f64;
    let mut checked = 0;
    while checked < 1_000 {
        let height = rng.gen_range(0.5_f64..=8.0);
        let width = rng.gen_range(0.1..=3.0);
        let energy = height * rng.gen_range(0.15..=1.6);
        // Skip the razor edge E == V0 where the oracle formula degenerates.
        if (energy - height).abs() < 0.02 * height {
            continue;
        }
        checked += 1;
        let profile = BarrierProfile::rectangular(height, width).unwrap();
        let sol = exact1d::solve_scattering(&profile, energy).unwrap();
        let oracle = rectangular_transmission(height, width, energy);
        let rel = (sol.d - oracle).abs() / oracle;
        let flux = (sol.d + sol.r - 1.0).abs();
        worst_rel = worst_rel.max(rel);
        worst_flux = worst_flux.max(flux);
        assert!(
            rel <= 1.0e-9,
            "D {} vs oracle {oracle} (V0={height}, w={width}, E={energy}): rel {rel:e}",
            sol.d
        );
        assert!(flux <= 1.0e-10, "flux defect {flux:e}");
    }
    budget(5, t0, 30.0);
    pass(
        5,
        "rectangular oracle",
        &format!("1000 cases, worst rel {worst_rel:.2e}, worst flux defect {worst_flux:.2e}"),
    );
}

#[test]
fn acceptance_06_semiclassical_quality_in_the_thick_barrier_regime() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0006);
    let mut qualifying = 0;
    let mut worst_gap = 0.0_f64;
    for _ in 0..50 {
        let phi = rng.gen_range(4.0..=6.0);
        let field = rng.gen_range(1.5..=3.5);
        let offset = rng.gen_range(0.1..=0.6);
        let profile = BarrierProfile::schottky_nordheim(phi, field).unwrap();
        let g = jwkb::gamow_exponent(&profile, offset).unwrap();
        if g.exponent <= 10.0 {
            continue;
        }
        qualifying += 1;
        let row = &exact1d::compare_jwkb(&profile, &[offset]).unwrap()[0];
        let gap = row.rel_ln_gap.expect("finite transmissions on both routes");
        worst_gap = worst_gap.max(gap);
        assert!(
            gap < 0.1,
            "|ln D_jwkb - ln D_exact| / G = {gap} at phi={phi}, F={field}, eps={offset}"
        );
    }
    assert!(qualifying >= 40, "only {qualifying} draws had G > 10");

    // Just above the peak the exact solution still reflects appreciably,
    // where the leading-order semiclassical picture would transmit fully.
    let mut min_r = f64::INFINITY;
    for _ in 0..10 {
        let phi = rng.gen_range(4.0..=6.0);
        let field = rng.gen_range(1.5..=3.5);
        let profile = BarrierProfile::schottky_nordheim(phi, field).unwrap();
        let peak = profile.geometry().unwrap().m_peak;
        let energy = peak * rng.gen_range(1.01..=1.10);
        let sol = exact1d::solve_scattering(&profile, energy).unwrap();
        min_r = min_r.min(sol.r);
        assert!(
            sol.r > 0.01,
            "R = {} just above the peak (phi={phi}, F={field})",
            sol.r
        );
    }
    budget(6, t0, 60.0);
    pass(
        6,
        "thick-barrier quality",
        &format!("{qualifying} cases G > 10, worst scaled ln gap {worst_gap:.3}, min above-peak R {min_r:.3}"),
    );
}

#[test]
fn acceptance_07_field_ionization_sanity_bracket() {
    let t0 = Instant::now();
    let hydrogen = GasSpecies::hydrogen();
    let threshold = hydrogen
        .barrier(1.0)
        .unwrap()
        .vanishing_field()
        .unwrap();
    assert!(
        (threshold - 32.1).abs() <= 0.1,
        "hydrogen vanishing threshold {threshold} V/nm"
    );
    let (lo, hi) = esfi::usable_field_band(&GasSpecies::helium(), esfi::DEFAULT_ATTEMPT_FREQUENCY_HZ)
        .unwrap();
    assert!(lo < hi, "band is ordered");
    assert!(
        lo > 20.0 && hi < 60.0,
        "helium usable band ({lo}, {hi}) V/nm outside (20, 60)"
    );
    budget(7, t0, 5.0);
    pass(
        7,
        "ionization brackets",
        &format!("H threshold {threshold:.2} V/nm, He band ({lo:.2}, {hi:.2}) V/nm"),
    );
}

#[test]
fn acceptance_08_facet_brightness_orderings() {
    let t0 = Instant::now();
    let species = GasSpecies::helium();
    let facet = esfi::default_facet(&species, 4.5, 44.0).unwrap();
    let rows = esfi::facet_contrast(&facet, &species).unwrap();
    let by_kind: BTreeMap<&str, (f64, f64)> = rows
        .iter()
        .map(|r| (r.site_kind.name(), (r.etr_tunnelling, r.etr_overlap)))
        .collect();
    let (tun_corner, ovl_corner) = by_kind["corner"];
    let (tun_edge, _) = by_kind["edge"];
    let (tun_interior, ovl_interior) = by_kind["interior"];
    assert!(
        tun_corner > tun_edge && tun_edge > tun_interior,
        "tunnelling ranking corner {tun_corner} > edge {tun_edge} > interior {tun_interior}"
    );
    assert!(
        ovl_corner < ovl_interior,
        "overlap ranking corner {ovl_corner} < interior {ovl_interior}"
    );
    budget(8, t0, 1.0);
    pass(
        8,
        "facet orderings",
        &format!(
            "tunnelling {tun_corner:.3} > {tun_edge:.3} > {tun_interior:.3}, overlap corner {ovl_corner:.3} < interior {ovl_interior:.3}"
        ),
    );
}

#[test]
fn acceptance_09_two_bank_ensemble_relaxation() {
    let t0 = Instant::now();
    let base = EnsembleConfig {
        n_walkers: 10_000,
        d: 0.1,
        attempt_rate: 1.0,
        n_steps: 500,
        seed: 42,
        initial_left_fraction: 1.0,
    };
    let records = arrow::run_ensemble(&base).unwrap();
    let final_f = records.last().unwrap().f_left;
    assert!(
        (final_f - 0.5).abs() <= 0.015,
        "final left fraction {final_f}"
    );
    let trend = arrow::entropy_trend(&records, 20).unwrap();
    assert_eq!(
        trend.verdict,
        TrendVerdict::NonDecreasing,
        "max drop {} vs tolerance {}",
        trend.max_drop,
        trend.tolerance
    );

    // Stationarity: started from its own equilibrium draw, the left-bank
    // count must stay binomial(n, 1/2). Ten equal-ish bins over +/- 4 sigma,
    // expected counts from the exact binomial CDF, one run per seed.
    let n = 10_000_u64;
    let equilibrium = rand_distr::Binomial::new(n, 0.5).unwrap();
    let mut oracle = ChaCha8Rng::seed_from_u64(0xACCE_0009);
    let edges = [4900_u64, 4925, 4950, 4975, 5000, 5025, 5050, 5075, 5100];
    let mut counts = [0_u64; 10];
    let n_seeds = 1_000_u64;
    for s in 0..n_seeds {
        let k = oracle.sample(equilibrium);
        let cfg = EnsembleConfig {
            n_steps: 30,
            seed: 9_000 + s,
            initial_left_fraction: k as f64 / n as f64,
            ..base
        };
        let run = arrow::run_ensemble(&cfg).unwrap();
        let n_left = run.last().unwrap().n_left;
        let bin = edges.iter().position(|&e| n_left <= e).unwrap_or(9);
        counts[bin] += 1;
    }
    let reference = Binomial::new(0.5, n).unwrap();
    let mut chi2 = 0.0;
    let mut prev_cdf = 0.0;
    for (i, &count) in counts.iter().enumerate() {
        let cdf = if i < edges.len() {
            reference.cdf(edges[i])
        } else {
            1.0
        };
        let expected = n_seeds as f64 * (cdf - prev_cdf);
        prev_cdf = cdf;
        chi2 += (count as f64 - expected).powi(2) / expected;
    }
    let p_value = 1.0 - ChiSquared::new(9.0).unwrap().cdf(chi2);
    assert!(
        p_value > 0.01,
        "stationarity chi-square {chi2:.2} (p = {p_value:.4}), counts {counts:?}"
    );
    budget(9, t0, 120.0);
    pass(
        9,
        "ensemble relaxation",
        &format!("final f_left {final_f:.4}, trend non-decreasing, chi-square p = {p_value:.3}"),
    );
}

#[test]
fn acceptance_10_entity_normalization() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0010);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let length = rng.gen_range(0.5..=20.0);
        let n = rng.gen_range(1..=15_u32);
        let norm = well::norm_integral(length, n, Normalization::Entity, 2049).unwrap();
        let defect = (norm - 1.0).abs();
        worst = worst.max(defect);
        assert!(defect <= 1.0e-6, "entity norm {norm} at L={length}, n={n}");

        let grid = well::uniform_grid(length, 129).unwrap();
        let entity = well::wavefunction_samples(length, n, Normalization::Entity, &grid).unwrap();
        let conventional =
            well::wavefunction_samples(length, n, Normalization::Conventional, &grid).unwrap();
        for (e, c) in entity.iter().zip(&conventional) {
            assert_eq!(
                e.to_bits(),
                (CODATA_2018.n1 * c).to_bits(),
                "entity sample differs from scaled conventional sample"
            );
        }
    }
    budget(10, t0, 10.0);
    pass(10, "entity normalization", &format!("100 wells, worst norm defect {worst:.2e}"));
}
