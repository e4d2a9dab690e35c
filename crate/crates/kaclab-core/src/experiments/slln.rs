//! Path experiment: the normalized root count `N_n[-1,1] / log n` along a
//! degree schedule, with the same coefficient stream reused across every
//! `n` (each polynomial is a partial sum of one random series).

use crate::error::KaclabError;
use crate::experiments::{parallel_trials, unresolved_record, ExperimentConfig};
use crate::interval::Interval;
use crate::laws::CoefficientLaw;
use crate::poly::PolynomialSample;
use crate::records::{ExperimentSummary, PlotData, SummaryBlock, TrialRecord};
use crate::roots::count_roots;
use crate::stats::mean_se;
use std::f64::consts::PI;

/// Desk-scale tolerance around the limit `1/pi` for the top-of-schedule
/// ratio.
pub const RATIO_TOLERANCE: f64 = 0.08;

/// Degree up to which the derived symmetric count is cross-checked against
/// a direct count of `[-1, 1]`.
const DIRECT_CHECK_MAX_DEGREE: usize = 1024;

pub fn run(cfg: &ExperimentConfig) -> Result<(Vec<TrialRecord>, ExperimentSummary), KaclabError> {
    let law = CoefficientLaw::parse(&cfg.law)?;
    let name = cfg.experiment.as_str();
    let n_max = *cfg.schedule.last().unwrap();

    let per_path: Vec<Vec<TrialRecord>> = parallel_trials(cfg.workers, cfg.trials, |t| {
        let full = PolynomialSample::sample(&law, n_max, cfg.master_seed, t);
        let mut rows = Vec::new();
        for &n in &cfg.schedule {
            let p = full.prefix(n);
            let neg = count_roots(&p, &Interval::closed_f64(-1.0, 0.0));
            let pos = count_roots(&p, &Interval::closed_f64(0.0, 1.0));
            let (neg, pos) = match (neg, pos) {
                (Ok(a), Ok(b)) => (a.count, b.count),
                _ => {
                    rows.push(unresolved_record(cfg.experiment, &cfg.law, n as u64, t));
                    continue;
                }
            };
            // p(0) = xi_0, so membership of the origin needs no extra count
            let origin = usize::from(p.coefficients()[0].is_zero());
            let pos_open = pos - origin;
            let sym = neg + pos_open;
            let log_n = (n as f64).ln();
            let mk = |obs: &str, v: f64| TrialRecord::new(name, &cfg.law, n as u64, t, obs, v);
            rows.push(mk("count_neg", neg as f64));
            rows.push(mk("count_pos", pos as f64));
            rows.push(mk("count_pos_open", pos_open as f64));
            rows.push(mk("count_sym", sym as f64));
            rows.push(mk("ratio_sym", sym as f64 / log_n));
            rows.push(mk("ratio_pos", pos as f64 / log_n));
            if n <= DIRECT_CHECK_MAX_DEGREE {
                if let Ok(direct) = count_roots(&p, &Interval::closed_f64(-1.0, 1.0)) {
                    rows.push(mk("count_sym_direct", direct.count as f64));
                }
            }
        }
        rows
    });
    let records: Vec<TrialRecord> = per_path.into_iter().flatten().collect();
    let summary = summarize(cfg, &records);
    Ok((records, summary))
}

pub fn summarize(cfg: &ExperimentConfig, records: &[TrialRecord]) -> ExperimentSummary {
    let mut summary = ExperimentSummary {
        experiment: cfg.experiment.as_str().to_string(),
        total_trials: cfg.trials,
        excluded_trials: records.iter().filter(|r| r.observable == "unresolved").count(),
        ..Default::default()
    };
    let mut plot = PlotData {
        name: "ratio_sym".to_string(),
        columns: vec!["n".into(), "ratio_sym_mean".into(), "limit".into()],
        rows: Vec::new(),
    };
    let mut top_means: Vec<(usize, f64)> = Vec::new();
    for &n in &cfg.schedule {
        let ratios: Vec<f64> = records
            .iter()
            .filter(|r| r.n == n as u64 && r.observable == "ratio_sym")
            .map(|r| r.value)
            .collect();
        if ratios.is_empty() {
            continue;
        }
        let (mean, se) = mean_se(&ratios);
        let mut block = SummaryBlock::new(format!("n={n}"));
        block.push("ratio_sym_mean", mean);
        if se.is_finite() {
            block.push("ratio_sym_se", se);
        }
        summary.blocks.push(block);
        plot.rows.push(vec![n as f64, mean, 1.0 / PI]);
        top_means.push((n, mean));
    }

    // additivity per record group: sym = neg + pos_open, and the direct
    // symmetric count agrees where it was measured
    let mut additivity_ok = true;
    let mut direct_ok = true;
    for &n in &cfg.schedule {
        for t in 0..cfg.trials as u64 {
            let get = |obs: &str| {
                records
                    .iter()
                    .find(|r| r.n == n as u64 && r.trial == t && r.observable == obs)
                    .map(|r| r.value)
            };
            let (Some(neg), Some(pos_open), Some(sym)) =
                (get("count_neg"), get("count_pos_open"), get("count_sym"))
            else {
                continue;
            };
            additivity_ok &= neg + pos_open == sym;
            if let Some(direct) = get("count_sym_direct") {
                direct_ok &= direct == sym;
            }
        }
    }
    summary.verdict(
        "additivity",
        additivity_ok && direct_ok,
        "N[-1,1] = N[-1,0] + N(0,1] on every path",
    );

    if let Some(&(n_top, mean_top)) = top_means.last() {
        let lo = 1.0 / PI - RATIO_TOLERANCE;
        let hi = 1.0 / PI + RATIO_TOLERANCE;
        summary.verdict(
            "ratio_near_limit",
            (lo..=hi).contains(&mean_top),
            format!("ratio {mean_top:.4} at n={n_top} vs 1/pi = {:.4} +- {RATIO_TOLERANCE}", 1.0 / PI),
        );
        // path fluctuation across the top three schedule points
        let tail: Vec<f64> = top_means.iter().rev().take(3).map(|&(_, m)| m).collect();
        let fluctuation = tail.iter().cloned().fold(f64::MIN, f64::max)
            - tail.iter().cloned().fold(f64::MAX, f64::min);
        let mut block = SummaryBlock::new("path");
        block.push("top3_fluctuation", fluctuation);
        summary.blocks.push(block);
    }
    summary.verdict(
        "exclusions_rare",
        (summary.excluded_trials as f64) < 0.001 * (cfg.trials.max(1000) as f64),
        format!("{} unresolved points", summary.excluded_trials),
    );
    summary.plots.push(plot);
    summary
}
