//! Two-box walker ensemble: many individually direction-symmetric random
//! crossing events producing statistically irreversible occupancy flow.
//!
//! Walkers sit in a left or right region. Each step, every walker attempts
//! a crossing with probability a*D, the same in both directions, so any
//! time asymmetry in the occupancy trace is statistical, not built in.
//! The coarse-grained entropy is the two-box Shannon entropy of the
//! occupancy fractions, in nats.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of the generator behind every run, recorded in output
/// metadata. ChaCha with 8 rounds: seedable, portable, platform-stable.
pub const RNG_ALGORITHM: &str = "chacha8";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n_walkers: u64,
    /// Crossing probability per attempt, direction-symmetric by
    /// construction (a single field, used for both banks).
    pub d: f64,
    /// Attempts per step per walker.
    pub attempt_rate: f64,
    pub n_steps: u32,
    pub seed: u64,
    pub initial_left_fraction: f64,
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_walkers == 0 {
            return Err(Error::domain("n_walkers must be positive".to_string()));
        }
        // d = 0 is the frozen-dynamics edge case and stays legal.
        if !(self.d >= 0.0 && self.d <= 1.0) {
            return Err(Error::domain(format!(
                "crossing probability must lie in [0, 1], got {}",
                self.d
            )));
        }
        if !(self.attempt_rate > 0.0 && self.attempt_rate <= 1.0) {
            return Err(Error::domain(format!(
                "attempt_rate must lie in (0, 1], got {}",
                self.attempt_rate
            )));
        }
        if self.n_steps == 0 {
            return Err(Error::domain("n_steps must be positive".to_string()));
        }
        if !(self.initial_left_fraction >= 0.0 && self.initial_left_fraction <= 1.0) {
            return Err(Error::domain(format!(
                "initial_left_fraction must lie in [0, 1], got {}",
                self.initial_left_fraction
            )));
        }
        Ok(())
    }

    /// Per-step crossing probability for every walker, both directions.
    pub fn crossing_probability(&self) -> f64 {
        self.attempt_rate * self.d
    }

    /// Every walker switches every step: deterministic alternation with no
    /// mixing, excluded from irreversibility statements.
    pub fn is_degenerate_mixing(&self) -> bool {
        self.crossing_probability() == 1.0
    }
}

/// Occupancy snapshot after a given step. Step 0 is the initial state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub step: u32,
    pub n_left: u64,
    pub n_right: u64,
    pub f_left: f64,
    /// Two-box Shannon entropy of (f_left, 1 - f_left), nats.
    pub entropy: f64,
}

impl TrajectoryRecord {
    fn new(step: u32, n_left: u64, n_walkers: u64) -> Self {
        let f_left = n_left as f64 / n_walkers as f64;
        TrajectoryRecord {
            step,
            n_left,
            n_right: n_walkers - n_left,
            f_left,
            entropy: binary_entropy(f_left),
        }
    }
}

/// -f ln f - (1-f) ln(1-f), with the 0 ln 0 = 0 convention.
pub fn binary_entropy(f: f64) -> f64 {
    if f <= 0.0 || f >= 1.0 {
        return 0.0;
    }
    -(f * f.ln()) - (1.0 - f) * (1.0 - f).ln()
}

/// Run one ensemble trajectory. Identical config (seed included) gives a
/// bit-identical record stream. Records cover step 0 through n_steps.
pub fn run_ensemble(config: &EnsembleConfig) -> Result<Vec<TrajectoryRecord>> {
    config.validate()?;
    let n = config.n_walkers;
    let mut n_left = (config.initial_left_fraction * n as f64).round() as u64;
    n_left = n_left.min(n);
    let p = config.crossing_probability();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut records = Vec::with_capacity(config.n_steps as usize + 1);
    records.push(TrajectoryRecord::new(0, n_left, n));
    for step in 1..=config.n_steps {
        // Left bank draws first, then the right bank, both with the same
        // crossing probability. Walkers are exchangeable, so only the
        // success counts matter.
        let mut to_right = 0u64;
        for _ in 0..n_left {
            if rng.gen_bool(p) {
                to_right += 1;
            }
        }
        let mut to_left = 0u64;
        for _ in 0..(n - n_left) {
            if rng.gen_bool(p) {
                to_left += 1;
            }
        }
        n_left = n_left - to_right + to_left;
        records.push(TrajectoryRecord::new(step, n_left, n));
    }
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrendVerdict {
    NonDecreasing,
    Other,
}

impl TrendVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            TrendVerdict::NonDecreasing => "non_decreasing",
            TrendVerdict::Other => "other",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    pub verdict: TrendVerdict,
    /// Largest decrease between consecutive window means (0 if none).
    pub max_drop: f64,
    /// Drop size still attributable to stationary fluctuation.
    pub tolerance: f64,
    pub window: usize,
    pub n_windows: usize,
}

fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    var.sqrt()
}

/// Judge whether the window-averaged entropy sequence is non-decreasing up
/// to stationary fluctuation.
///
/// The trajectory is cut into consecutive full windows (a trailing partial
/// window is dropped) and each window's mean entropy is taken. The
/// fluctuation scale of one window mean is estimated from the second half
/// of the sequence, where the ensemble has relaxed; a drop compares two
/// such means, so the tolerance is 3 * sqrt(2) * that standard deviation.
pub fn entropy_trend(trajectory: &[TrajectoryRecord], window: usize) -> Result<TrendReport> {
    if window < 1 {
        return Err(Error::domain("window must be at least 1".to_string()));
    }
    if trajectory.len() < window {
        return Err(Error::domain(format!(
            "trajectory ({} records) is shorter than the averaging window ({window})",
            trajectory.len()
        )));
    }
    let means: Vec<f64> = trajectory
        .chunks_exact(window)
        .map(|c| c.iter().map(|r| r.entropy).sum::<f64>() / window as f64)
        .collect();
    let mut max_drop = 0.0_f64;
    for pair in means.windows(2) {
        max_drop = max_drop.max(pair[0] - pair[1]);
    }
    let tail = &means[means.len() / 2..];
    let tolerance = (3.0 * std::f64::consts::SQRT_2 * sample_sd(tail)).max(1e-12);
    let verdict = if max_drop <= tolerance {
        TrendVerdict::NonDecreasing
    } else {
        TrendVerdict::Other
    };
    Ok(TrendReport {
        verdict,
        max_drop,
        tolerance,
        window,
        n_windows: means.len(),
    })
}

/// Outcome of the macro-reversal experiment: how often the ensemble finds
/// its way back to the ordered macrostate it relaxed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReversalReport {
    /// Forward steps before the return window opens; the return window is
    /// the same length.
    pub horizon: u32,
    /// Ordered macrostate means f_left >= 1 - epsilon.
    pub epsilon: f64,
    pub n_trials: u64,
    pub returns_observed: u64,
    pub return_fraction: f64,
    /// 95% upper confidence bound on the return probability.
    pub return_upper_bound_95: f64,
    /// ln of the stationary union bound on the return probability:
    /// ln(horizon) - 2 n (1/2 - epsilon)^2. May be far below ln(f64::MIN).
    pub analytic_bound_ln: f64,
    /// Fraction of trials that left the ordered macrostate during the
    /// forward phase. Contrast with return_fraction.
    pub forward_relaxation_fraction: f64,
    pub degenerate_mixing: bool,
}

/// Run `n_trials` chains of 2 x n_steps from the all-left start (seeds
/// seed, seed+1, ...), counting trials whose second half re-enters
/// f_left >= 1 - epsilon. Each micro-event is direction-symmetric; the
/// macro numbers are not.
pub fn reversal_test(
    config: &EnsembleConfig,
    epsilon: f64,
    n_trials: u64,
) -> Result<ReversalReport> {
    config.validate()?;
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::domain(format!(
            "epsilon must lie in (0, 0.5), got {epsilon}"
        )));
    }
    if n_trials == 0 {
        return Err(Error::domain("n_trials must be positive".to_string()));
    }
    let t = config.n_steps;
    if t > u32::MAX / 2 {
        return Err(Error::domain(format!(
            "n_steps {t} too large to double for the return window"
        )));
    }
    let threshold = 1.0 - epsilon;
    let mut trial_config = *config;
    trial_config.n_steps = 2 * t;
    trial_config.initial_left_fraction = 1.0;
    let mut returns = 0u64;
    let mut relaxed = 0u64;
    for trial in 0..n_trials {
        trial_config.seed = config.seed.wrapping_add(trial);
        let records = run_ensemble(&trial_config)?;
        if records[1..=t as usize].iter().any(|r| r.f_left < threshold) {
            relaxed += 1;
        }
        if records[t as usize + 1..]
            .iter()
            .any(|r| r.f_left >= threshold)
        {
            returns += 1;
        }
    }
    let n_trials_f = n_trials as f64;
    let return_fraction = returns as f64 / n_trials_f;
    // Zero observed: rule-of-three bound. Otherwise Hoeffding at 95%.
    let return_upper_bound_95 = if returns == 0 {
        3.0 / n_trials_f
    } else {
        (return_fraction + ((20.0_f64).ln() / (2.0 * n_trials_f)).sqrt()).min(1.0)
    };
    // Union over the return window of the stationary binomial tail
    // (Hoeffding), treating the state at the horizon as relaxed.
    let analytic_bound_ln =
        (t as f64).ln() - 2.0 * config.n_walkers as f64 * (0.5 - epsilon).powi(2);
    Ok(ReversalReport {
        horizon: t,
        epsilon,
        n_trials,
        returns_observed: returns,
        return_fraction,
        return_upper_bound_95,
        analytic_bound_ln,
        forward_relaxation_fraction: relaxed as f64 / n_trials_f,
        degenerate_mixing: config.is_degenerate_mixing(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config() -> EnsembleConfig {
        EnsembleConfig {
            n_walkers: 500,
            d: 0.3,
            attempt_rate: 0.8,
            n_steps: 40,
            seed: 11,
            initial_left_fraction: 1.0,
        }
    }

    #[test]
    fn validation_bounds() {
        let ok = base_config();
        assert!(ok.validate().is_ok());
        for bad in [
            EnsembleConfig { n_walkers: 0, ..ok },
            EnsembleConfig { d: -0.1, ..ok },
            EnsembleConfig { d: 1.5, ..ok },
            EnsembleConfig { attempt_rate: 0.0, ..ok },
            EnsembleConfig { attempt_rate: 1.2, ..ok },
            EnsembleConfig { n_steps: 0, ..ok },
            EnsembleConfig { initial_left_fraction: 1.5, ..ok },
            EnsembleConfig { initial_left_fraction: -0.1, ..ok },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
        // Frozen dynamics is legal.
        assert!(EnsembleConfig { d: 0.0, ..ok }.validate().is_ok());
    }

    #[test]
    fn walker_count_is_conserved_and_records_cover_every_step() {
        let config = base_config();
        let records = run_ensemble(&config).unwrap();
        assert_eq!(records.len(), config.n_steps as usize + 1);
        for (i, r) in records.iter().enumerate() {
            assert_eq!(r.step as usize, i);
            assert_eq!(r.n_left + r.n_right, config.n_walkers);
            assert_eq!(r.f_left, r.n_left as f64 / config.n_walkers as f64);
            assert_eq!(r.entropy, binary_entropy(r.f_left));
        }
    }

    #[test]
    fn same_seed_same_trajectory() {
        let config = base_config();
        let a = run_ensemble(&config).unwrap();
        let b = run_ensemble(&config).unwrap();
        assert_eq!(a, b);
        let c = run_ensemble(&EnsembleConfig { seed: 12, ..config }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_crossing_probability_freezes_the_occupancy() {
        let config = EnsembleConfig {
            d: 0.0,
            initial_left_fraction: 0.73,
            ..base_config()
        };
        let records = run_ensemble(&config).unwrap();
        let n0 = records[0].n_left;
        assert_eq!(n0, 365);
        assert!(records.iter().all(|r| r.n_left == n0));
    }

    #[test]
    fn equilibrium_start_keeps_entropy_at_ln2() {
        let config = EnsembleConfig {
            n_walkers: 10_000,
            d: 0.1,
            attempt_rate: 1.0,
            n_steps: 200,
            seed: 7,
            initial_left_fraction: 0.5,
        };
        let records = run_ensemble(&config).unwrap();
        let ln2 = std::f64::consts::LN_2;
        assert!((records[0].entropy - ln2).abs() < 1e-3);
        let mean_late: f64 = records[100..].iter().map(|r| r.entropy).sum::<f64>() / 101.0;
        assert!((mean_late - ln2).abs() < 1e-3, "{mean_late}");
    }

    #[test]
    fn all_left_start_relaxes_to_half() {
        let config = EnsembleConfig {
            n_walkers: 10_000,
            d: 0.1,
            attempt_rate: 1.0,
            n_steps: 500,
            seed: 42,
            initial_left_fraction: 1.0,
        };
        let records = run_ensemble(&config).unwrap();
        let f_final = records.last().unwrap().f_left;
        // 3 sigma of the binomial stationary state, sigma = 1/(2 sqrt n).
        assert!((f_final - 0.5).abs() <= 0.015, "{f_final}");
    }

    #[test]
    fn degenerate_configuration_alternates_exactly() {
        let config = EnsembleConfig {
            n_walkers: 37,
            d: 1.0,
            attempt_rate: 1.0,
            n_steps: 6,
            seed: 3,
            initial_left_fraction: 1.0,
        };
        assert!(config.is_degenerate_mixing());
        assert!(!base_config().is_degenerate_mixing());
        let records = run_ensemble(&config).unwrap();
        for r in &records {
            let expect = if r.step % 2 == 0 { 37 } else { 0 };
            assert_eq!(r.n_left, expect, "step {}", r.step);
        }
    }

    #[test]
    fn entropy_rises_from_an_ordered_start() {
        let config = EnsembleConfig {
            n_walkers: 10_000,
            d: 0.1,
            attempt_rate: 1.0,
            n_steps: 500,
            seed: 42,
            initial_left_fraction: 1.0,
        };
        let records = run_ensemble(&config).unwrap();
        let report = entropy_trend(&records, 20).unwrap();
        assert_eq!(report.verdict, TrendVerdict::NonDecreasing);
        assert_eq!(report.n_windows, 25);
        assert!(report.max_drop <= report.tolerance);
        assert_eq!(records[0].entropy, 0.0);
        assert!(records.last().unwrap().entropy > 0.69);
    }

    #[test]
    fn trend_tolerates_equilibrium_chatter() {
        let config = EnsembleConfig {
            n_walkers: 10_000,
            d: 0.1,
            attempt_rate: 1.0,
            n_steps: 400,
            seed: 5,
            initial_left_fraction: 0.5,
        };
        let records = run_ensemble(&config).unwrap();
        let report = entropy_trend(&records, 20).unwrap();
        assert_eq!(report.verdict, TrendVerdict::NonDecreasing);
    }

    #[test]
    fn trend_input_validation() {
        let records = run_ensemble(&base_config()).unwrap();
        assert!(entropy_trend(&records, 0).is_err());
        assert!(entropy_trend(&records[..5], 20).is_err());
        // Single record, window 1: vacuously non-decreasing.
        let single = entropy_trend(&records[..1], 1).unwrap();
        assert_eq!(single.verdict, TrendVerdict::NonDecreasing);
        assert_eq!(single.max_drop, 0.0);
    }

    #[test]
    fn trend_flags_a_real_decrease() {
        // Fabricated trajectory: entropy collapses back to order.
        let mut records = Vec::new();
        for step in 0..60u32 {
            let f = if step < 30 { 0.5 } else { 0.999 };
            records.push(TrajectoryRecord {
                step,
                n_left: (f * 1000.0) as u64,
                n_right: 1000 - (f * 1000.0) as u64,
                f_left: f,
                entropy: binary_entropy(f),
            });
        }
        let report = entropy_trend(&records, 10).unwrap();
        assert_eq!(report.verdict, TrendVerdict::Other);
        assert!(report.max_drop > report.tolerance);
    }

    #[test]
    fn small_ensembles_do_return() {
        let config = EnsembleConfig {
            n_walkers: 6,
            d: 0.5,
            attempt_rate: 1.0,
            n_steps: 50,
            seed: 1,
            initial_left_fraction: 1.0,
        };
        let report = reversal_test(&config, 0.15, 400).unwrap();
        assert!(report.returns_observed > 0);
        assert!(report.return_fraction > 0.01);
        assert_eq!(report.forward_relaxation_fraction, 1.0);
        assert!(!report.degenerate_mixing);
    }

    #[test]
    fn large_ensembles_do_not_return() {
        let config = EnsembleConfig {
            n_walkers: 2000,
            d: 0.1,
            attempt_rate: 1.0,
            n_steps: 200,
            seed: 9,
            initial_left_fraction: 1.0,
        };
        let report = reversal_test(&config, 0.01, 30).unwrap();
        assert_eq!(report.returns_observed, 0);
        assert_eq!(report.return_fraction, 0.0);
        assert!(report.return_upper_bound_95 <= 0.1 + 1e-12);
        // ln(200) - 2 * 2000 * 0.49^2 is below -950.
        assert!(report.analytic_bound_ln < -900.0);
        assert_eq!(report.forward_relaxation_fraction, 1.0);
    }

    #[test]
    fn reversal_parameter_validation() {
        let config = base_config();
        assert!(reversal_test(&config, 0.0, 10).is_err());
        assert!(reversal_test(&config, 0.6, 10).is_err());
        assert!(reversal_test(&config, 0.1, 0).is_err());
        let degenerate = EnsembleConfig {
            d: 1.0,
            attempt_rate: 1.0,
            ..config
        };
        let report = reversal_test(&degenerate, 0.1, 5).unwrap();
        assert!(report.degenerate_mixing);
        // Alternation re-enters the ordered macrostate every other step.
        assert_eq!(report.return_fraction, 1.0);
    }
}
