//! Command-line front-end. Every subcommand emits a manifest-carrying CSV
//! or JSON document; identical argv (seed included) reproduces the data
//! payload byte for byte, timestamp excepted.
//!
//! Exit codes: 0 success, 2 usage or domain error (one-line diagnostic on
//! stderr), 3 numerical non-convergence.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::arrow::{self, EnsembleConfig};
use crate::barriers::BarrierProfile;
use crate::config;
use crate::error::{Error, Result};
use crate::esfi::{self, GasSpecies};
use crate::exact1d::{self, Direction};
use crate::jwkb;
use crate::output::{write_destination, Cell, Document, RunManifest};
use crate::well;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "tunnelkit",
    version,
    about = "Tunnelling-barrier numerics: barrier shapes, semiclassical and exact transmission, \
             bound states, surface field ionization, and a walker-ensemble irreversibility demo",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,

    /// Output destination: a file path, or `-` for stdout.
    #[arg(long, global = true, default_value = "-")]
    out: String,

    /// Significant digits for CSV floats (JSON always keeps full
    /// round-trip precision).
    #[arg(long, global = true, default_value_t = 9)]
    digits: usize,

    /// Print a gnuplot recipe for the emitted CSV on stderr.
    #[arg(long, global = true)]
    gnuplot_hint: bool,

    /// Worker threads for parameter sweeps; output order is deterministic
    /// regardless.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

/// Barrier-shape flags shared by the profile-driven subcommands. Exactly
/// one of --phi/--height/--ionization names the zero-field height.
#[derive(Debug, Args)]
struct ProfileArgs {
    /// Barrier kind: sn, triangular, rectangular, sle, hydrogenic_axial.
    #[arg(long)]
    kind: String,

    /// Work function (eV), for sn and triangular barriers.
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,

    /// Barrier height (eV), for rectangular and sle barriers.
    #[arg(long, allow_negative_numbers = true)]
    height: Option<f64>,

    /// Ionization energy (eV), for hydrogenic_axial barriers.
    #[arg(long, allow_negative_numbers = true)]
    ionization: Option<f64>,

    /// Applied field (V/nm).
    #[arg(long, allow_negative_numbers = true)]
    field: Option<f64>,

    /// Barrier width (nm), for rectangular and sle barriers.
    #[arg(long, allow_negative_numbers = true)]
    width: Option<f64>,

    /// Image-term strength (eV nm); 0 turns sn into triangular.
    #[arg(long, allow_negative_numbers = true)]
    image_coefficient: Option<f64>,

    /// Ion-core charge for hydrogenic_axial barriers.
    #[arg(long, allow_negative_numbers = true)]
    z_charge: Option<f64>,

    /// Image anchor: none, electron_centroid, nucleus_opposite.
    #[arg(long)]
    placement: Option<String>,

    /// Nucleus-to-surface distance (nm) for anchored placements.
    #[arg(long, allow_negative_numbers = true)]
    surface_distance: Option<f64>,
}

impl ProfileArgs {
    fn to_profile(&self) -> Result<BarrierProfile> {
        let mut pairs: Vec<(String, String)> =
            vec![("kind".to_string(), self.kind.trim().to_string())];
        let mut heights = Vec::new();
        if let Some(v) = self.phi {
            heights.push(("--phi", v));
        }
        if let Some(v) = self.height {
            heights.push(("--height", v));
        }
        if let Some(v) = self.ionization {
            heights.push(("--ionization", v));
        }
        if heights.len() > 1 {
            return Err(Error::domain(format!(
                "give exactly one of --phi, --height, --ionization (got {})",
                heights.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
            )));
        }
        if let Some((_, v)) = heights.first() {
            pairs.push(("height_param".to_string(), format!("{v:?}")));
        }
        let mut push = |key: &str, v: Option<f64>| {
            if let Some(v) = v {
                pairs.push((key.to_string(), format!("{v:?}")));
            }
        };
        push("F", self.field);
        push("width", self.width);
        push("image_coefficient", self.image_coefficient);
        push("Z", self.z_charge);
        push("surface_distance", self.surface_distance);
        if let Some(p) = &self.placement {
            pairs.push(("image_placement".to_string(), p.trim().to_string()));
        }
        BarrierProfile::from_flat_record(&pairs)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a barrier's motive energy across its tunnelling region.
    Barrier {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Grid points across [z1, z2].
        #[arg(long, default_value_t = 201)]
        points: usize,
    },

    /// Semiclassical transmission for one barrier at one energy offset.
    Transmit {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Electron energy relative to the reference level (eV).
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        energy_offset: f64,
    },

    /// Exact piecewise-constant scattering solve at one energy.
    Oracle {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Incoming energy above the outside level (eV), > 0.
        #[arg(long, allow_negative_numbers = true)]
        energy: f64,
        /// Incidence side: ltr or rtl.
        #[arg(long, default_value = "ltr")]
        direction: String,
    },

    /// Sweep energies, comparing semiclassical and exact transmission.
    Compare {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Lowest energy offset (eV), > 0.
        #[arg(long, allow_negative_numbers = true)]
        emin: f64,
        /// Highest energy offset (eV).
        #[arg(long, allow_negative_numbers = true)]
        emax: f64,
        /// Number of sweep points.
        #[arg(long, default_value_t = 25)]
        steps: usize,
    },

    /// Particle-in-a-box level and wavefunction samples.
    Well {
        /// Well length (nm).
        #[arg(long, allow_negative_numbers = true)]
        length_nm: f64,
        /// Quantum number, n >= 1.
        #[arg(long)]
        n: u32,
        /// Sample points across the well.
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// entity or conventional.
        #[arg(long, default_value = "entity")]
        normalization: String,
    },

    /// Field-ionization numbers for a gas species over a surface.
    Esfi {
        /// Gas species: H, He, Ne, Ar.
        #[arg(long)]
        species: String,
        /// Applied field (V/nm).
        #[arg(long, allow_negative_numbers = true)]
        field: f64,
        /// Emitter work function (eV); enables the critical distance.
        #[arg(long, allow_negative_numbers = true)]
        phi: Option<f64>,
        /// Nucleus-to-surface distance (nm); with --phi, adds the
        /// image-anchor sensitivity columns.
        #[arg(long, allow_negative_numbers = true)]
        surface_distance: Option<f64>,
        /// Attempt frequency (Hz) for rate and usable-band estimates.
        #[arg(long, default_value_t = esfi::DEFAULT_ATTEMPT_FREQUENCY_HZ)]
        attempt_frequency: f64,
    },

    /// Site-contrast table for a faceted emitter under two brightness
    /// formulations.
    Fim {
        /// Gas species: H, He, Ne, Ar (or use --config).
        #[arg(long)]
        species: Option<String>,
        /// Emitter work function (eV).
        #[arg(long, allow_negative_numbers = true)]
        phi: Option<f64>,
        /// Mean facet field (V/nm).
        #[arg(long, allow_negative_numbers = true)]
        f0: Option<f64>,
        /// Interior/midpoint resolution threshold.
        #[arg(long, allow_negative_numbers = true)]
        tau: Option<f64>,
        /// Facet model file (flat key = value format).
        #[arg(long)]
        config: Option<PathBuf>,
    },

    /// Walker-ensemble irreversibility run.
    Arrow {
        /// Ensemble file (flat key = value format); flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        n_walkers: Option<u64>,
        /// Crossing probability per attempt, in [0, 1].
        #[arg(long, allow_negative_numbers = true)]
        d: Option<f64>,
        /// Attempts per step per walker, in (0, 1].
        #[arg(long, allow_negative_numbers = true)]
        attempt_rate: Option<f64>,
        #[arg(long)]
        n_steps: Option<u32>,
        /// RNG seed; falls back to TUNNELKIT_SEED, then 42.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, allow_negative_numbers = true)]
        initial_left_fraction: Option<f64>,
        /// Window (records) for the entropy-trend verdict; defaults to 20
        /// or the whole trajectory, whichever is shorter.
        #[arg(long)]
        trend_window: Option<usize>,
        /// Run the macro-reversal experiment with this many trials.
        #[arg(long)]
        reversal_trials: Option<u64>,
        /// Ordered-macrostate tolerance for the reversal experiment.
        #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
        reversal_epsilon: f64,
    },
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    eprint!("{e}");
                    2
                }
                _ => {
                    let line = e
                        .to_string()
                        .lines()
                        .find(|l| !l.trim().is_empty())
                        .unwrap_or("invalid usage")
                        .to_string();
                    eprintln!("{line}");
                    2
                }
            };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("tunnelkit: {e}");
            if e.is_convergence_failure() {
                3
            } else {
                2
            }
        }
    }
}

fn execute(cli: &Cli) -> Result<()> {
    let (doc, extra, hint) = match &cli.command {
        Command::Barrier { profile, points } => cmd_barrier(profile, *points)?,
        Command::Transmit {
            profile,
            energy_offset,
        } => cmd_transmit(profile, *energy_offset)?,
        Command::Oracle {
            profile,
            energy,
            direction,
        } => cmd_oracle(profile, *energy, direction)?,
        Command::Compare {
            profile,
            emin,
            emax,
            steps,
        } => cmd_compare(profile, *emin, *emax, *steps, cli.jobs)?,
        Command::Well {
            length_nm,
            n,
            points,
            normalization,
        } => cmd_well(*length_nm, *n, *points, normalization)?,
        Command::Esfi {
            species,
            field,
            phi,
            surface_distance,
            attempt_frequency,
        } => cmd_esfi(species, *field, *phi, *surface_distance, *attempt_frequency)?,
        Command::Fim {
            species,
            phi,
            f0,
            tau,
            config,
        } => cmd_fim(species.as_deref(), *phi, *f0, *tau, config.as_deref())?,
        Command::Arrow {
            config,
            n_walkers,
            d,
            attempt_rate,
            n_steps,
            seed,
            initial_left_fraction,
            trend_window,
            reversal_trials,
            reversal_epsilon,
        } => cmd_arrow(ArrowArgs {
            config: config.as_deref(),
            n_walkers: *n_walkers,
            d: *d,
            attempt_rate: *attempt_rate,
            n_steps: *n_steps,
            seed: *seed,
            initial_left_fraction: *initial_left_fraction,
            trend_window: *trend_window,
            reversal_trials: *reversal_trials,
            reversal_epsilon: *reversal_epsilon,
        })?,
    };
    let content = match cli.format {
        OutFormat::Csv => doc.to_csv(cli.digits)?,
        OutFormat::Json => doc.to_json(extra)?,
    };
    write_destination(&cli.out, &content)?;
    if cli.gnuplot_hint {
        let path = if cli.out == "-" { "OUT.csv" } else { &cli.out };
        eprintln!("{}", hint.replace("{path}", path));
    }
    Ok(())
}

type Rendered = (Document, Map<String, Value>, String);

fn profile_parameters(profile: &BarrierProfile) -> BTreeMap<String, String> {
    profile
        .to_flat_record()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn geometry_json(geo: &crate::barriers::BarrierGeometry) -> Value {
    json!({
        "z1_nm": geo.z1,
        "z2_nm": geo.z2,
        "z_peak_nm": geo.z_peak,
        "m_peak_ev": geo.m_peak,
        "vanished": geo.vanished,
    })
}

fn cmd_barrier(args: &ProfileArgs, points: usize) -> Result<Rendered> {
    if points < 2 {
        return Err(Error::domain(format!(
            "--points must be at least 2, got {points}"
        )));
    }
    let profile = args.to_profile()?;
    let geo = profile.geometry()?;
    let mut params = profile_parameters(&profile);
    params.insert("points".to_string(), points.to_string());
    let manifest = RunManifest::new("barrier", params, None);
    let mut doc = Document::new(manifest, &["z_nm", "motive_ev"]);
    doc.comments.push(format!(
        "geometry: z1 = {:?} nm, z2 = {:?} nm, z_peak = {:?} nm, m_peak = {:?} eV, vanished = {}",
        geo.z1, geo.z2, geo.z_peak, geo.m_peak, geo.vanished
    ));
    if geo.vanished {
        doc.comments
            .push("barrier vanished at this field; no tunnelling region to sample".to_string());
    } else {
        for z in linspace(geo.z1, geo.z2, points) {
            doc.push_row(vec![z.into(), profile.motive_energy(z)?.into()]);
        }
    }
    let mut extra = Map::new();
    extra.insert("geometry".to_string(), geometry_json(&geo));
    let hint = "gnuplot recipe:\n  set datafile separator ','\n  plot '{path}' using 1:2 \
                with lines title 'M(z) [eV]'"
        .to_string();
    Ok((doc, extra, hint))
}

fn cmd_transmit(args: &ProfileArgs, energy_offset: f64) -> Result<Rendered> {
    let profile = args.to_profile()?;
    let result = jwkb::transmission(&profile, energy_offset)?;
    let mut params = profile_parameters(&profile);
    params.insert("energy_offset".to_string(), format!("{energy_offset:?}"));
    let manifest = RunManifest::new("transmit", params, None);
    let mut doc = Document::new(
        manifest,
        &[
            "kind",
            "energy_offset_ev",
            "gamow_exponent",
            "d_jwkb",
            "vanished",
            "method",
            "n_intervals",
        ],
    );
    doc.push_row(vec![
        profile.kind_name().into(),
        energy_offset.into(),
        result.gamow.exponent.into(),
        result.d.into(),
        result.gamow.vanished.into(),
        result.gamow.method.name().into(),
        result.gamow.n_intervals.into(),
    ]);
    let mut extra = Map::new();
    extra.insert(
        "transmission".to_string(),
        serde_json::to_value(&result)
            .map_err(|e| Error::domain(format!("serialization failed: {e}")))?,
    );
    let hint = "gnuplot recipe (single row; sweep with `compare` for a plot):\n  \
                set datafile separator ','"
        .to_string();
    Ok((doc, extra, hint))
}

fn parse_direction(s: &str) -> Result<Direction> {
    match s.trim().to_ascii_lowercase().as_str() {
        "ltr" | "left_to_right" | "left-to-right" => Ok(Direction::LeftToRight),
        "rtl" | "right_to_left" | "right-to-left" => Ok(Direction::RightToLeft),
        other => Err(Error::domain(format!(
            "unknown direction `{other}` (ltr or rtl)"
        ))),
    }
}

fn cmd_oracle(args: &ProfileArgs, energy: f64, direction: &str) -> Result<Rendered> {
    let profile = args.to_profile()?;
    let dir = parse_direction(direction)?;
    let sol = exact1d::solve_scattering_directed(&profile, energy, dir)?;
    let mut params = profile_parameters(&profile);
    params.insert("energy".to_string(), format!("{energy:?}"));
    params.insert("direction".to_string(), dir.name().to_string());
    let manifest = RunManifest::new("oracle", params, None);
    let mut doc = Document::new(
        manifest,
        &[
            "energy_ev",
            "d_exact",
            "r_exact",
            "ln_d_exact",
            "n_slices",
            "direction",
        ],
    );
    doc.push_row(vec![
        sol.energy.into(),
        sol.d.into(),
        sol.r.into(),
        sol.ln_d.into(),
        sol.n_slices.into(),
        dir.name().into(),
    ]);
    let mut extra = Map::new();
    extra.insert(
        "solution".to_string(),
        serde_json::to_value(&sol)
            .map_err(|e| Error::domain(format!("serialization failed: {e}")))?,
    );
    let hint = "gnuplot recipe (single row; sweep with `compare` for a plot):\n  \
                set datafile separator ','"
        .to_string();
    Ok((doc, extra, hint))
}

fn cmd_compare(
    args: &ProfileArgs,
    emin: f64,
    emax: f64,
    steps: usize,
    jobs: Option<usize>,
) -> Result<Rendered> {
    if steps < 1 {
        return Err(Error::domain("--steps must be at least 1".to_string()));
    }
    if !(emin > 0.0) {
        return Err(Error::domain(format!(
            "--emin must be positive so the leads propagate, got {emin}"
        )));
    }
    if emax < emin {
        return Err(Error::domain(format!(
            "--emax ({emax}) must not be below --emin ({emin})"
        )));
    }
    let profile = args.to_profile()?;
    let energies = linspace(emin, emax, steps);
    let rows = match jobs {
        Some(n) if n > 1 => {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::domain(format!("cannot start {n} workers: {e}")))?;
            // Indexed collect keeps output order independent of scheduling.
            pool.install(|| {
                energies
                    .par_iter()
                    .map(|e| Ok(exact1d::compare_jwkb(&profile, &[*e])?.remove(0)))
                    .collect::<Result<Vec<_>>>()
            })?
        }
        _ => exact1d::compare_jwkb(&profile, &energies)?,
    };
    let mut params = profile_parameters(&profile);
    params.insert("emin".to_string(), format!("{emin:?}"));
    params.insert("emax".to_string(), format!("{emax:?}"));
    params.insert("steps".to_string(), steps.to_string());
    let manifest = RunManifest::new("compare", params, None);
    let mut doc = Document::new(
        manifest,
        &[
            "energy_offset_ev",
            "gamow_exponent",
            "jwkb_vanished",
            "d_jwkb",
            "d_exact",
            "ln_d_jwkb",
            "ln_d_exact",
            "rel_ln_gap",
        ],
    );
    for r in &rows {
        doc.push_row(vec![
            r.energy_offset.into(),
            r.gamow_exponent.into(),
            r.jwkb_vanished.into(),
            r.d_jwkb.into(),
            r.d_exact.into(),
            r.ln_d_jwkb.into(),
            r.ln_d_exact.into(),
            r.rel_ln_gap.into(),
        ]);
    }
    let extra = Map::new();
    let hint = "gnuplot recipe:\n  set datafile separator ','\n  plot '{path}' using 1:6 \
                with lines title 'ln D (semiclassical)', '{path}' using 1:7 with lines \
                title 'ln D (exact)'"
        .to_string();
    Ok((doc, extra, hint))
}

fn cmd_well(length_nm: f64, n: u32, points: usize, normalization: &str) -> Result<Rendered> {
    let norm = well::Normalization::from_name(normalization)?;
    let level = well::energy_level(length_nm, n)?;
    let grid = well::uniform_grid(length_nm, points)?;
    let samples = well::wavefunction_samples(length_nm, n, norm, &grid)?;
    let mut params = BTreeMap::new();
    params.insert("length_nm".to_string(), format!("{length_nm:?}"));
    params.insert("n".to_string(), n.to_string());
    params.insert("points".to_string(), points.to_string());
    params.insert("normalization".to_string(), norm.name().to_string());
    let manifest = RunManifest::new("well", params, None);
    let mut doc = Document::new(manifest, &["z_nm", "amplitude", "squared_modulus", "unit"]);
    doc.comments.push(format!("energy_eV = {:?}", level.energy));
    doc.comments
        .push(format!("wavenumber_per_nm = {:?}", level.wavenumber));
    for (z, amp) in grid.iter().zip(&samples) {
        doc.push_row(vec![
            (*z).into(),
            (*amp).into(),
            (amp * amp).into(),
            norm.name().into(),
        ]);
    }
    let mut extra = Map::new();
    extra.insert(
        "level".to_string(),
        json!({
            "n": level.n,
            "length_nm": level.length,
            "energy_eV": level.energy,
            "wavenumber_per_nm": level.wavenumber,
        }),
    );
    let hint = "gnuplot recipe:\n  set datafile separator ','\n  plot '{path}' using 1:3 \
                with lines title 'squared modulus'"
        .to_string();
    Ok((doc, extra, hint))
}

fn cmd_esfi(
    species_name: &str,
    field: f64,
    phi: Option<f64>,
    surface_distance: Option<f64>,
    attempt_frequency: f64,
) -> Result<Rendered> {
    let species = GasSpecies::by_name(species_name)?;
    if surface_distance.is_some() && phi.is_none() {
        return Err(Error::domain(
            "--surface-distance needs --phi to locate the critical surface".to_string(),
        ));
    }
    let profile = species.barrier(field)?;
    let gamow = esfi::esfi_rate_exponent(&species, &profile)?;
    let rate = esfi::ionization_rate_hz(&species, field, attempt_frequency)?;
    let f_vanish = profile.vanishing_field()?;

    let mut params = esfi::species_record(&species);
    params.insert("field".to_string(), format!("{field:?}"));
    params.insert(
        "attempt_frequency".to_string(),
        format!("{attempt_frequency:?}"),
    );
    if let Some(p) = phi {
        params.insert("phi".to_string(), format!("{p:?}"));
    }
    if let Some(d) = surface_distance {
        params.insert("surface_distance".to_string(), format!("{d:?}"));
    }
    let manifest = RunManifest::new("esfi", params, None);

    let mut columns = vec![
        "species",
        "ionization_energy_ev",
        "z_effective",
        "field_v_per_nm",
        "gamow_exponent",
        "vanished",
        "rate_hz",
        "vanishing_field_v_per_nm",
    ];
    let mut row: Vec<Cell> = vec![
        species.name.clone().into(),
        species.ionization_energy.into(),
        species.z_effective.into(),
        field.into(),
        gamow.exponent.into(),
        gamow.vanished.into(),
        rate.into(),
        f_vanish.into(),
    ];
    let mut extra = Map::new();

    if attempt_frequency > esfi::USABLE_RATE_CEILING_HZ {
        let (f_low, f_high) = esfi::usable_field_band(&species, attempt_frequency)?;
        columns.push("usable_band_low_v_per_nm");
        columns.push("usable_band_high_v_per_nm");
        row.push(f_low.into());
        row.push(f_high.into());
        extra.insert(
            "usable_band".to_string(),
            json!({
                "low_v_per_nm": f_low,
                "high_v_per_nm": f_high,
                "rate_floor_hz": esfi::USABLE_RATE_FLOOR_HZ,
                "rate_ceiling_hz": esfi::USABLE_RATE_CEILING_HZ,
            }),
        );
    }
    if let Some(p) = phi {
        let d_crit = esfi::critical_distance(&species, p, field)?;
        columns.push("critical_distance_nm");
        row.push(d_crit.into());
        if let Some(d) = surface_distance {
            let s = esfi::image_placement_sensitivity(&species, p, field, d)?;
            columns.push("g_none");
            columns.push("g_centroid");
            columns.push("g_nucleus_opposite");
            row.push(s.g_none.into());
            row.push(s.g_centroid.into());
            row.push(s.g_nucleus_opposite.into());
            extra.insert(
                "placement_sensitivity".to_string(),
                serde_json::to_value(&s)
                    .map_err(|e| Error::domain(format!("serialization failed: {e}")))?,
            );
        }
    }

    let mut doc = Document::new(manifest, &columns);
    doc.push_row(row);
    let hint = "gnuplot recipe (single row; sweep fields externally):\n  \
                set datafile separator ','"
        .to_string();
    Ok((doc, extra, hint))
}

fn cmd_fim(
    species_name: Option<&str>,
    phi: Option<f64>,
    f0: Option<f64>,
    tau: Option<f64>,
    config_path: Option<&std::path::Path>,
) -> Result<Rendered> {
    let (species, phi, f0, file_tau, sites) = match config_path {
        Some(path) => {
            if species_name.is_some() || phi.is_some() || f0.is_some() {
                return Err(Error::domain(
                    "--config replaces --species/--phi/--f0; give one or the other".to_string(),
                ));
            }
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::domain(format!("cannot read `{}`: {e}", path.display())))?;
            let cfg = config::parse_facet_config(&text)?;
            (cfg.species, cfg.phi, cfg.f0, Some(cfg.tau), Some(cfg.sites))
        }
        None => {
            let name = species_name.ok_or_else(|| {
                Error::domain("give --species, --phi and --f0, or a --config file".to_string())
            })?;
            let phi = phi.ok_or_else(|| Error::domain("missing --phi".to_string()))?;
            let f0 = f0.ok_or_else(|| Error::domain("missing --f0".to_string()))?;
            (GasSpecies::by_name(name)?, phi, f0, None, None)
        }
    };
    // Explicit --tau wins over a config-file tau.
    let tau = tau
        .or(file_tau)
        .unwrap_or(esfi::DEFAULT_RESOLUTION_THRESHOLD);
    let facet = match &sites {
        Some(sites) => esfi::build_facet(&species, phi, f0, sites)?,
        None => esfi::default_facet(&species, phi, f0)?,
    };
    let rows = esfi::facet_contrast(&facet, &species)?;
    let verdict = esfi::facet_verdict(&rows, tau)?;

    let mut params = esfi::species_record(&species);
    params.insert("phi".to_string(), format!("{phi:?}"));
    params.insert("f0".to_string(), format!("{f0:?}"));
    params.insert("tau".to_string(), format!("{tau:?}"));
    for (i, s) in facet.iter().enumerate() {
        params.insert(
            format!("site_{i}"),
            format!(
                "{} F={:?} d={:?} h={:?} rho={:?}",
                s.site_kind.name(),
                s.f_local,
                s.d_critical,
                s.h_eff,
                s.rho_rel
            ),
        );
    }
    let manifest = RunManifest::new("fim", params, None);
    let mut doc = Document::new(
        manifest,
        &[
            "site_kind",
            "f_local_v_per_nm",
            "d_critical_nm",
            "h_eff_ev",
            "rho_rel",
            "g_ramp",
            "etr_tunnelling",
            "etr_overlap",
            "tunnelling_agrees_with_image",
            "overlap_agrees_with_image",
        ],
    );
    for (site, r) in facet.iter().zip(&rows) {
        doc.push_row(vec![
            r.site_kind.name().into(),
            r.f_local.into(),
            r.d_critical.into(),
            site.h_eff.into(),
            site.rho_rel.into(),
            r.g_ramp.into(),
            r.etr_tunnelling.into(),
            r.etr_overlap.into(),
            r.tunnelling_agrees_with_image.into(),
            r.overlap_agrees_with_image.into(),
        ]);
    }
    let t_line = verdict.tunnelling_line();
    let o_line = verdict.overlap_line();
    eprintln!("{t_line}");
    eprintln!("{o_line}");
    doc.comments.push(format!("verdict: {t_line}"));
    doc.comments.push(format!("verdict: {o_line}"));
    let mut extra = Map::new();
    extra.insert(
        "verdicts".to_string(),
        json!({
            "tunnelling": t_line,
            "overlap": o_line,
            "tunnelling_agrees": verdict.tunnelling_agrees,
            "overlap_agrees": verdict.overlap_agrees,
            "resolution_ratio": verdict.resolution_ratio,
            "resolution_threshold": verdict.resolution_threshold,
            "resolves_atoms": verdict.resolves_atoms,
        }),
    );
    let hint = "gnuplot recipe:\n  set datafile separator ','\n  plot '{path}' using 7:xtic(1) \
                with boxes title 'tunnelling contrast'"
        .to_string();
    Ok((doc, extra, hint))
}

struct ArrowArgs<'a> {
    config: Option<&'a std::path::Path>,
    n_walkers: Option<u64>,
    d: Option<f64>,
    attempt_rate: Option<f64>,
    n_steps: Option<u32>,
    seed: Option<u64>,
    initial_left_fraction: Option<f64>,
    trend_window: Option<usize>,
    reversal_trials: Option<u64>,
    reversal_epsilon: f64,
}

fn env_seed() -> Result<Option<u64>> {
    match std::env::var("TUNNELKIT_SEED") {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| Error::domain(format!("TUNNELKIT_SEED must be an unsigned integer, got `{s}`"))),
        Err(_) => Ok(None),
    }
}

fn cmd_arrow(args: ArrowArgs) -> Result<Rendered> {
    let defaults = EnsembleConfig {
        n_walkers: 10_000,
        d: 0.1,
        attempt_rate: 1.0,
        n_steps: 500,
        seed: 42,
        initial_left_fraction: 1.0,
    };
    let mut file_seed = None;
    let mut cfg = match args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::domain(format!("cannot read `{}`: {e}", path.display())))?;
            let file = config::parse_ensemble_config(&text)?;
            file_seed = file.seed;
            file.apply_to(defaults)
        }
        None => defaults,
    };
    // Flags override the file; the seed falls back to the environment.
    if let Some(v) = args.n_walkers {
        cfg.n_walkers = v;
    }
    if let Some(v) = args.d {
        cfg.d = v;
    }
    if let Some(v) = args.attempt_rate {
        cfg.attempt_rate = v;
    }
    if let Some(v) = args.n_steps {
        cfg.n_steps = v;
    }
    if let Some(v) = args.initial_left_fraction {
        cfg.initial_left_fraction = v;
    }
    // Seed priority: --seed flag, config file, TUNNELKIT_SEED, default.
    if let Some(v) = args.seed {
        cfg.seed = v;
    } else if file_seed.is_none() {
        if let Some(v) = env_seed()? {
            cfg.seed = v;
        }
    }

    let records = arrow::run_ensemble(&cfg)?;
    let trend_window = args.trend_window.unwrap_or_else(|| records.len().min(20));
    let trend = arrow::entropy_trend(&records, trend_window)?;
    let reversal = match args.reversal_trials {
        Some(trials) => Some(arrow::reversal_test(&cfg, args.reversal_epsilon, trials)?),
        None => None,
    };

    let mut params = BTreeMap::new();
    params.insert("n_walkers".to_string(), cfg.n_walkers.to_string());
    params.insert("d".to_string(), format!("{:?}", cfg.d));
    params.insert("attempt_rate".to_string(), format!("{:?}", cfg.attempt_rate));
    params.insert("n_steps".to_string(), cfg.n_steps.to_string());
    params.insert(
        "initial_left_fraction".to_string(),
        format!("{:?}", cfg.initial_left_fraction),
    );
    params.insert("rng_algorithm".to_string(), arrow::RNG_ALGORITHM.to_string());
    params.insert("trend_window".to_string(), trend_window.to_string());
    if let Some(trials) = args.reversal_trials {
        params.insert("reversal_trials".to_string(), trials.to_string());
        params.insert(
            "reversal_epsilon".to_string(),
            format!("{:?}", args.reversal_epsilon),
        );
    }
    let manifest = RunManifest::new("arrow", params, Some(cfg.seed));
    let mut doc = Document::new(manifest, &["step", "n_left", "f_left", "entropy_nats"]);
    doc.comments.push(format!(
        "entropy trend: {} (max drop {:?}, tolerance {:?})",
        trend.verdict.name(),
        trend.max_drop,
        trend.tolerance
    ));
    if let Some(r) = &reversal {
        doc.comments.push(format!(
            "reversal: {} of {} trials returned to f_left >= {:?} within {} steps",
            r.returns_observed,
            r.n_trials,
            1.0 - r.epsilon,
            r.horizon
        ));
    }
    for r in &records {
        doc.push_row(vec![
            r.step.into(),
            r.n_left.into(),
            r.f_left.into(),
            r.entropy.into(),
        ]);
    }
    let mut extra = Map::new();
    extra.insert(
        "config".to_string(),
        serde_json::to_value(cfg).map_err(|e| Error::domain(format!("serialization failed: {e}")))?,
    );
    extra.insert("rng_algorithm".to_string(), json!(arrow::RNG_ALGORITHM));
    extra.insert(
        "trend".to_string(),
        serde_json::to_value(trend)
            .map_err(|e| Error::domain(format!("serialization failed: {e}")))?,
    );
    if let Some(r) = reversal {
        extra.insert(
            "reversal".to_string(),
            serde_json::to_value(r)
                .map_err(|e| Error::domain(format!("serialization failed: {e}")))?,
        );
    }
    let hint = "gnuplot recipe:\n  set datafile separator ','\n  plot '{path}' using 1:4 \
                with lines title 'entropy [nats]'"
        .to_string();
    Ok((doc, extra, hint))
}
