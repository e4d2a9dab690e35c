//! Reproducible Monte Carlo experiments.
//!
//! Each experiment draws per-trial coefficient streams in counter mode,
//! distributes independent trials over a local worker pool, and aggregates
//! records in trial order. Scheduling never influences results: reruns of
//! one configuration are byte-identical for any worker count.

pub mod charfn;
pub mod lacunary;
pub mod near_one;
pub mod near_zero;
pub mod oracle;
pub mod pairing;
pub mod slln;
pub mod small_ball;
pub mod variance;

use crate::error::{ConfigError, KaclabError};
use crate::records::{ExperimentSummary, TrialRecord};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentName {
    Slln,
    Lacunary,
    SmallBall,
    CharFn,
    NearZeroTail,
    NearOneMax,
    Pairing,
    VarianceTrend,
    OracleCheck,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 9] = [
        ExperimentName::Slln,
        ExperimentName::Lacunary,
        ExperimentName::SmallBall,
        ExperimentName::CharFn,
        ExperimentName::NearZeroTail,
        ExperimentName::NearOneMax,
        ExperimentName::Pairing,
        ExperimentName::VarianceTrend,
        ExperimentName::OracleCheck,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentName::Slln => "slln",
            ExperimentName::Lacunary => "lacunary",
            ExperimentName::SmallBall => "smallball",
            ExperimentName::CharFn => "charfn",
            ExperimentName::NearZeroTail => "tail0",
            ExperimentName::NearOneMax => "near1",
            ExperimentName::Pairing => "pairing",
            ExperimentName::VarianceTrend => "variance",
            ExperimentName::OracleCheck => "oracle-check",
        }
    }

    pub fn parse(name: &str) -> Result<Self, ConfigError> {
        Self::ALL
            .into_iter()
            .find(|e| e.as_str() == name)
            .ok_or_else(|| ConfigError::UnknownExperiment(name.to_string()))
    }
}

/// Experiment-specific knobs. Every field has a default chosen so the
/// structural constraints among the constants hold; the configuration file
/// or CLI may override any of them.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    /// Small-ball thresholds.
    pub lambda_grid: Vec<f64>,
    /// Characteristic-function frequencies.
    pub w_grid: Vec<f64>,
    /// Evaluation points; empty means "derive from the near-one window".
    pub x_grid: Vec<f64>,
    /// Largest tail level reported by the survival curve.
    pub t_max: usize,
    /// Exceedance fraction of `log n`.
    pub epsilon: f64,
    /// Degree stretch: partial sums range over `[n, stretch * n]`.
    pub degree_stretch: f64,
    /// Near-one window `[1 - window_factor * log n / n, 1]`.
    pub window_factor: f64,
    /// End window `[1 - log n / (end_window_factor * n), 1]`.
    pub end_window_factor: f64,
    /// Number of geometric grid segments in the near-one window.
    pub grid_segments: usize,
    /// Interior sample count of the m-grid in `[n, stretch * n]`.
    pub m_grid: usize,
    /// Bulk interval `[1/bulk_left_inverse, 1 - bulk_window_factor log n / n]`.
    pub bulk_left_inverse: f64,
    pub bulk_window_factor: f64,
    /// Pairing passes when the maximal defect stays at or below this.
    pub defect_tolerance: usize,
    /// Witness threshold exponent: both |p| and |p'| below `n^-B`.
    pub witness_threshold_exp: f64,
    /// Witness scan pitch exponent: grid pitch `max(n^-A, 1e-7)`.
    pub witness_pitch_exp: f64,
    pub witness_schedule: Vec<usize>,
    pub witness_trials: usize,
    /// Frozen decay constant of the characteristic-function bound.
    pub charfn_decay: f64,
    /// Frozen reciprocal width of the admissible frequency window.
    pub charfn_freq_cap: f64,
    /// Exponent in the admissible window and the small-ball floor.
    pub c0: f64,
    /// Frozen comparison constant: empirical probability <= K * lambda.
    pub small_ball_constant: f64,
    /// Floor exponent: the ratio check applies for lambda >= V^-1/2 n^-c.
    pub small_ball_floor_exp: f64,
    /// Near-zero interval `(-1/interval_factor, 1/interval_factor)`.
    pub interval_factor: f64,
    /// Oracle-check coefficient range `[-coeff_span, coeff_span]`.
    pub coeff_span: i64,
    /// Oracle-check maximum degree.
    pub max_degree: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            lambda_grid: vec![0.05, 0.1, 0.2, 0.4, 0.8, 1.6],
            w_grid: vec![0.1, 0.25, 0.5, 0.75, 1.0, 1.5],
            x_grid: Vec::new(),
            t_max: 24,
            epsilon: 0.5,
            degree_stretch: 2.0,
            window_factor: 8.0,
            end_window_factor: 16.0,
            grid_segments: 8,
            m_grid: 32,
            bulk_left_inverse: 2.0,
            bulk_window_factor: 8.0,
            defect_tolerance: 2,
            witness_threshold_exp: 3.0,
            witness_pitch_exp: 2.0,
            witness_schedule: vec![64, 128, 256],
            witness_trials: 200,
            charfn_decay: 1.0,
            charfn_freq_cap: 10.0,
            c0: 0.5,
            small_ball_constant: 5.0,
            small_ball_floor_exp: 0.1,
            interval_factor: 4.0,
            coeff_span: 9,
            max_degree: 48,
        }
    }
}

/// Full description of one run; identical configs give identical outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentName,
    pub law: String,
    pub master_seed: u64,
    pub trials: usize,
    pub schedule: Vec<usize>,
    pub workers: usize,
    pub params: Params,
}

impl ExperimentConfig {
    /// Defaults sized for the acceptance runs.
    pub fn default_for(experiment: ExperimentName) -> Self {
        let mut cfg = ExperimentConfig {
            experiment,
            law: "gaussian".to_string(),
            master_seed: 42,
            trials: 1000,
            schedule: vec![256],
            workers: default_workers(),
            params: Params::default(),
        };
        match experiment {
            ExperimentName::Slln => {
                cfg.law = "rademacher".to_string();
                cfg.trials = 1;
                cfg.schedule = (4..=14).map(|k| 1usize << k).collect();
            }
            ExperimentName::Lacunary => {
                cfg.trials = 20_000;
                cfg.schedule = vec![16, 64, 256, 1024];
            }
            ExperimentName::SmallBall => {
                cfg.trials = 20_000;
                cfg.schedule = vec![256];
            }
            ExperimentName::CharFn => {
                cfg.trials = 20_000;
                cfg.schedule = vec![256];
            }
            ExperimentName::NearZeroTail => {
                cfg.law = "three_point:q0=0.5".to_string();
                cfg.trials = 100_000;
                cfg.schedule = vec![128];
            }
            ExperimentName::NearOneMax => {
                cfg.trials = 200;
                cfg.schedule = vec![256, 1024, 4096];
            }
            ExperimentName::Pairing => {
                cfg.trials = 1000;
                cfg.schedule = vec![512];
            }
            ExperimentName::VarianceTrend => {
                cfg.trials = 2000;
                cfg.schedule = (8..=13).map(|k| 1usize << k).collect();
            }
            ExperimentName::OracleCheck => {
                cfg.trials = 10_000;
                cfg.schedule = vec![48];
            }
        }
        cfg
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(ConfigError::InvalidValue {
                key: "trials".into(),
                reason: "at least one trial is required".into(),
            });
        }
        if self.schedule.is_empty() {
            return Err(ConfigError::InvalidValue {
                key: "schedule".into(),
                reason: "degree schedule must be nonempty".into(),
            });
        }
        if self.schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ConfigError::InvalidValue {
                key: "schedule".into(),
                reason: "degree schedule must be strictly increasing".into(),
            });
        }
        if self.workers == 0 {
            return Err(ConfigError::InvalidValue {
                key: "workers".into(),
                reason: "need at least one worker".into(),
            });
        }
        crate::laws::CoefficientLaw::parse(&self.law)?;
        Ok(())
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Result of one experiment run.
pub struct RunOutput {
    pub records: Vec<TrialRecord>,
    pub summary: ExperimentSummary,
}

/// Run one experiment to completion: trials in parallel, records sorted,
/// summary computed from the records.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput, KaclabError> {
    cfg.validate()?;
    let (records, summary) = match cfg.experiment {
        ExperimentName::Slln => slln::run(cfg)?,
        ExperimentName::Lacunary => lacunary::run(cfg)?,
        ExperimentName::SmallBall => small_ball::run(cfg)?,
        ExperimentName::CharFn => charfn::run(cfg)?,
        ExperimentName::NearZeroTail => near_zero::run(cfg)?,
        ExperimentName::NearOneMax => near_one::run(cfg)?,
        ExperimentName::Pairing => pairing::run(cfg)?,
        ExperimentName::VarianceTrend => variance::run(cfg)?,
        ExperimentName::OracleCheck => oracle::run(cfg)?,
    };
    Ok(RunOutput { records, summary })
}

/// Map independent trials over a dedicated pool of `workers` threads,
/// preserving trial order in the output.
pub(crate) fn parallel_trials<T: Send, F>(workers: usize, trials: usize, f: F) -> Vec<T>
where
    F: Fn(u64) -> T + Sync + Send,
{
    if workers <= 1 {
        return (0..trials as u64).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("worker pool");
    pool.install(|| (0..trials as u64).into_par_iter().map(f).collect())
}

/// Interior m-grid plus both endpoints, deduplicated, inside
/// `[n, stretch * n]`.
pub(crate) fn m_grid(n: usize, stretch: f64, interior: usize) -> Vec<usize> {
    let top = ((n as f64) * stretch).round() as usize;
    let mut grid: Vec<usize> = (0..=interior + 1)
        .map(|i| n + (top - n) * i / (interior + 1))
        .collect();
    grid.dedup();
    grid
}

/// Mark a trial whose root count did not resolve; such trials are excluded
/// from statistics but always reported.
pub(crate) fn unresolved_record(
    experiment: ExperimentName,
    law: &str,
    n: u64,
    trial: u64,
) -> TrialRecord {
    TrialRecord::new(experiment.as_str(), law, n, trial, "unresolved", 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_names_roundtrip() {
        for e in ExperimentName::ALL {
            assert_eq!(ExperimentName::parse(e.as_str()).unwrap(), e);
        }
        assert!(ExperimentName::parse("nope").is_err());
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let mut cfg = ExperimentConfig::default_for(ExperimentName::Pairing);
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::default_for(ExperimentName::Pairing);
        cfg.schedule = vec![64, 64];
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::default_for(ExperimentName::Pairing);
        cfg.law = "bogus".into();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn m_grid_covers_endpoints() {
        let g = m_grid(512, 2.0, 32);
        assert_eq!(*g.first().unwrap(), 512);
        assert_eq!(*g.last().unwrap(), 1024);
        assert_eq!(g.len(), 34);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn parallel_trials_preserve_order() {
        let out = parallel_trials(4, 100, |t| t * t);
        let expect: Vec<u64> = (0..100).map(|t| t * t).collect();
        assert_eq!(out, expect);
    }
}
