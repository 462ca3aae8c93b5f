//! Flat `key = value` configuration files.
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! No sections, no nesting, no quoting. Keys may repeat only where a
//! format explicitly says so (facet `site` records).

use crate::arrow::EnsembleConfig;
use crate::error::{Error, Result};
use crate::esfi::{GasSpecies, SiteKind, DEFAULT_RESOLUTION_THRESHOLD};

/// One `key = value` assignment with its 1-based source line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Split a config text into assignments, preserving order and repeats.
pub fn parse_flat(text: &str) -> Result<Vec<Assignment>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or(Error::Config {
            line,
            message: "expected `key = value`".to_string(),
        })?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(Error::Config {
                line,
                message: "empty key".to_string(),
            });
        }
        if value.is_empty() {
            return Err(Error::Config {
                line,
                message: format!("key `{key}` has no value"),
            });
        }
        out.push(Assignment {
            line,
            key: key.to_string(),
            value: value.to_string(),
        });
    }
    Ok(out)
}

fn parse_num<T: std::str::FromStr>(a: &Assignment, what: &str) -> Result<T> {
    a.value.parse::<T>().map_err(|_| Error::Config {
        line: a.line,
        message: format!("key `{}`: expected {what}, got `{}`", a.key, a.value),
    })
}

/// Facet model file: base values plus one `site` record per site.
///
/// ```text
/// species = He
/// phi = 4.5            # work function, eV
/// f0 = 44.0            # mean facet field, V/nm
/// tau = 2.0            # optional resolution threshold
/// site = corner 1.10 1.05       # kind F_mult d_mult [rho_rel]
/// site = interior 1.00 1.00
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct FacetConfig {
    pub species: GasSpecies,
    pub phi: f64,
    pub f0: f64,
    pub tau: f64,
    /// (kind, field multiplier, critical-distance multiplier, rho_rel).
    pub sites: Vec<(SiteKind, f64, f64, f64)>,
}

pub fn parse_facet_config(text: &str) -> Result<FacetConfig> {
    let mut species = None;
    let mut phi = None;
    let mut f0 = None;
    let mut tau = None;
    let mut sites = Vec::new();
    for a in parse_flat(text)? {
        match a.key.as_str() {
            "species" => {
                set_once(&mut species, &a, GasSpecies::by_name(&a.value))?;
            }
            "phi" => set_once(&mut phi, &a, parse_num::<f64>(&a, "a number"))?,
            "f0" | "F0" => set_once(&mut f0, &a, parse_num::<f64>(&a, "a number"))?,
            "tau" => set_once(&mut tau, &a, parse_num::<f64>(&a, "a number"))?,
            "site" => sites.push(parse_site(&a)?),
            other => {
                return Err(Error::Config {
                    line: a.line,
                    message: format!("unknown key `{other}`"),
                });
            }
        }
    }
    let missing = |what: &str| Error::Config {
        line: 0,
        message: format!("missing required key `{what}`"),
    };
    if sites.is_empty() {
        return Err(Error::Config {
            line: 0,
            message: "no `site` records".to_string(),
        });
    }
    Ok(FacetConfig {
        species: species.ok_or_else(|| missing("species"))?,
        phi: phi.ok_or_else(|| missing("phi"))?,
        f0: f0.ok_or_else(|| missing("f0"))?,
        tau: tau.unwrap_or(DEFAULT_RESOLUTION_THRESHOLD),
        sites,
    })
}

fn set_once<T>(slot: &mut Option<T>, a: &Assignment, value: Result<T>) -> Result<()> {
    if slot.is_some() {
        return Err(Error::Config {
            line: a.line,
            message: format!("key `{}` given more than once", a.key),
        });
    }
    *slot = Some(value?);
    Ok(())
}

fn parse_site(a: &Assignment) -> Result<(SiteKind, f64, f64, f64)> {
    let tokens: Vec<&str> = a.value.split_whitespace().collect();
    if tokens.len() < 3 || tokens.len() > 4 {
        return Err(Error::Config {
            line: a.line,
            message: format!(
                "site record needs `kind F_mult d_mult [rho_rel]`, got `{}`",
                a.value
            ),
        });
    }
    let kind = SiteKind::from_name(tokens[0]).map_err(|e| Error::Config {
        line: a.line,
        message: e.to_string(),
    })?;
    let num = |s: &str| -> Result<f64> {
        s.parse::<f64>().map_err(|_| Error::Config {
            line: a.line,
            message: format!("expected a number in site record, got `{s}`"),
        })
    };
    let f_mult = num(tokens[1])?;
    let d_mult = num(tokens[2])?;
    let rho = if tokens.len() == 4 { num(tokens[3])? } else { 1.0 };
    Ok((kind, f_mult, d_mult, rho))
}

/// Walker-ensemble file: any subset of the config fields; the caller fills
/// the gaps with its own defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EnsembleFileConfig {
    pub n_walkers: Option<u64>,
    pub d: Option<f64>,
    pub attempt_rate: Option<f64>,
    pub n_steps: Option<u32>,
    pub seed: Option<u64>,
    pub initial_left_fraction: Option<f64>,
}

pub fn parse_ensemble_config(text: &str) -> Result<EnsembleFileConfig> {
    let mut cfg = EnsembleFileConfig::default();
    for a in parse_flat(text)? {
        match a.key.as_str() {
            "n_walkers" => set_once(&mut cfg.n_walkers, &a, parse_num(&a, "a positive integer"))?,
            "d" | "D" => set_once(&mut cfg.d, &a, parse_num(&a, "a number"))?,
            "attempt_rate" => set_once(&mut cfg.attempt_rate, &a, parse_num(&a, "a number"))?,
            "n_steps" => set_once(&mut cfg.n_steps, &a, parse_num(&a, "a positive integer"))?,
            "seed" => set_once(&mut cfg.seed, &a, parse_num(&a, "an unsigned integer"))?,
            "initial_left_fraction" => {
                set_once(&mut cfg.initial_left_fraction, &a, parse_num(&a, "a number"))?
            }
            other => {
                return Err(Error::Config {
                    line: a.line,
                    message: format!("unknown key `{other}`"),
                });
            }
        }
    }
    Ok(cfg)
}

impl EnsembleFileConfig {
    /// Overlay onto a base config; file values win over the base, which
    /// carries the defaults and any command-line overrides applied later.
    pub fn apply_to(&self, base: EnsembleConfig) -> EnsembleConfig {
        EnsembleConfig {
            n_walkers: self.n_walkers.unwrap_or(base.n_walkers),
            d: self.d.unwrap_or(base.d),
            attempt_rate: self.attempt_rate.unwrap_or(base.attempt_rate),
            n_steps: self.n_steps.unwrap_or(base.n_steps),
            seed: self.seed.unwrap_or(base.seed),
            initial_left_fraction: self
                .initial_left_fraction
                .unwrap_or(base.initial_left_fraction),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_parsing_handles_comments_and_blanks() {
        let text = "\n# header comment\na = 1\n b = two words # trailing\n\nc=3\n";
        let got = parse_flat(text).unwrap();
        assert_eq!(got.len(), 3);
        assert_eq!(got[0], Assignment { line: 3, key: "a".into(), value: "1".into() });
        assert_eq!(got[1].value, "two words");
        assert_eq!(got[2].key, "c");
    }

    #[test]
    fn flat_parsing_rejects_malformed_lines() {
        for (text, line) in [("just words\n", 1), ("\n = 1\n", 2), ("k =   # gone\n", 1)] {
            match parse_flat(text).unwrap_err() {
                Error::Config { line: l, .. } => assert_eq!(l, line, "{text:?}"),
                other => panic!("unexpected error {other:?}"),
            }
        }
    }

    #[test]
    fn facet_file_round_trip() {
        let text = "\
species = He
phi = 4.5
f0 = 44.0
site = corner 1.10 1.05
site = edge 1.05 1.02
site = interior 1.00 1.00
site = midpoint 0.95 1.00 0.8
";
        let cfg = parse_facet_config(text).unwrap();
        assert_eq!(cfg.species, GasSpecies::helium());
        assert_eq!(cfg.phi, 4.5);
        assert_eq!(cfg.f0, 44.0);
        assert_eq!(cfg.tau, DEFAULT_RESOLUTION_THRESHOLD);
        assert_eq!(cfg.sites.len(), 4);
        assert_eq!(cfg.sites[0], (SiteKind::Corner, 1.10, 1.05, 1.0));
        assert_eq!(cfg.sites[3], (SiteKind::Midpoint, 0.95, 1.00, 0.8));
    }

    #[test]
    fn facet_file_rejects_bad_content() {
        assert!(parse_facet_config("species = He\nphi = 4.5\nf0 = 44\n").is_err());
        assert!(parse_facet_config("species = Xe\nphi = 4.5\nf0 = 44\nsite = corner 1 1\n").is_err());
        assert!(parse_facet_config(
            "species = He\nphi = 4.5\nphi = 5.0\nf0 = 44\nsite = corner 1 1\n"
        )
        .is_err());
        assert!(parse_facet_config(
            "species = He\nphi = 4.5\nf0 = 44\nsite = corner 1.1\nwhat = 3\n"
        )
        .is_err());
        assert!(parse_facet_config(
            "species = He\nphi = 4.5\nf0 = 44\nsite = corner 1.1 1.0\nwhat = 3\n"
        )
        .is_err());
    }

    #[test]
    fn ensemble_file_overlays_base() {
        let base = EnsembleConfig {
            n_walkers: 10_000,
            d: 0.1,
            attempt_rate: 1.0,
            n_steps: 500,
            seed: 42,
            initial_left_fraction: 1.0,
        };
        let cfg = parse_ensemble_config("n_walkers = 200\nD = 0.25\nseed = 7\n").unwrap();
        let merged = cfg.apply_to(base);
        assert_eq!(merged.n_walkers, 200);
        assert_eq!(merged.d, 0.25);
        assert_eq!(merged.seed, 7);
        assert_eq!(merged.n_steps, 500);
        assert_eq!(merged.attempt_rate, 1.0);
        assert!(parse_ensemble_config("walkers = 3\n").is_err());
        assert!(parse_ensemble_config("n_walkers = many\n").is_err());
    }
}
