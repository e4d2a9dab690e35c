//! Pairing stability: the maximal root-count defect
//! `max_m |N_m(I_n) - N_n(I_n)|` over the m-grid in `[n, cn]` on the bulk
//! interval `I_n = [1/C1, 1 - C0 log n / n]`, plus the repulsion-witness
//! scan at threshold `n^-B`.

use crate::error::KaclabError;
use crate::experiments::{m_grid, parallel_trials, unresolved_record, ExperimentConfig};
use crate::interval::Interval;
use crate::laws::CoefficientLaw;
use crate::poly::PolynomialSample;
use crate::records::{ExperimentSummary, PlotData, SummaryBlock, TrialRecord};
use crate::roots::{count_roots, double_root_witness};
use crate::stats::empirical_probability;

/// Frozen floor for the pairing verdict: P(defect <= tolerance).
pub const PAIRING_PASS_MIN: f64 = 0.95;

/// Stream-index offset separating witness trials from pairing trials.
const WITNESS_STREAM_BASE: u64 = 1 << 32;

fn bulk_interval(n: usize, left_inverse: f64, window_factor: f64) -> Interval {
    let log_n = (n as f64).ln();
    Interval::closed_f64(1.0 / left_inverse, 1.0 - window_factor * log_n / n as f64)
}

pub fn run(cfg: &ExperimentConfig) -> Result<(Vec<TrialRecord>, ExperimentSummary), KaclabError> {
    let law = CoefficientLaw::parse(&cfg.law)?;
    let name = cfg.experiment.as_str();
    let mut records = Vec::new();

    for &n in &cfg.schedule {
        let grid = m_grid(n, cfg.params.degree_stretch, cfg.params.m_grid);
        let top = *grid.last().unwrap();
        let bulk = bulk_interval(n, cfg.params.bulk_left_inverse, cfg.params.bulk_window_factor);
        let per_trial: Vec<TrialRecord> = parallel_trials(cfg.workers, cfg.trials, |t| {
            let full = PolynomialSample::sample(&law, top, cfg.master_seed, t);
            let base = match count_roots(&full.prefix(n), &bulk) {
                Ok(r) => r.count,
                Err(_) => return unresolved_record(cfg.experiment, &cfg.law, n as u64, t),
            };
            let mut defect = 0usize;
            for &m in &grid {
                match count_roots(&full.prefix(m), &bulk) {
                    Ok(r) => defect = defect.max(r.count.abs_diff(base)),
                    Err(_) => return unresolved_record(cfg.experiment, &cfg.law, n as u64, t),
                }
            }
            TrialRecord::new(name, &cfg.law, n as u64, t, "max_defect", defect as f64)
        });
        records.extend(per_trial);
    }

    // repulsion witnesses on their own degree schedule
    for (wi, &wn) in cfg.params.witness_schedule.iter().enumerate() {
        let bulk = bulk_interval(wn, cfg.params.bulk_left_inverse, cfg.params.bulk_window_factor);
        let per_trial: Vec<TrialRecord> =
            parallel_trials(cfg.workers, cfg.params.witness_trials, |t| {
                let stream = WITNESS_STREAM_BASE * (wi as u64 + 1) + t;
                let p = PolynomialSample::sample(&law, wn, cfg.master_seed, stream);
                let found = double_root_witness(
                    &p,
                    &bulk,
                    cfg.params.witness_threshold_exp,
                    cfg.params.witness_pitch_exp,
                );
                TrialRecord::new(
                    name,
                    &cfg.law,
                    wn as u64,
                    t,
                    "witness_found",
                    f64::from(found.is_some()),
                )
            });
        records.extend(per_trial);
    }
    let summary = summarize(cfg, &records);
    Ok((records, summary))
}

pub fn summarize(cfg: &ExperimentConfig, records: &[TrialRecord]) -> ExperimentSummary {
    let mut summary = ExperimentSummary {
        experiment: cfg.experiment.as_str().to_string(),
        total_trials: cfg.trials * cfg.schedule.len()
            + cfg.params.witness_trials * cfg.params.witness_schedule.len(),
        excluded_trials: records.iter().filter(|r| r.observable == "unresolved").count(),
        ..Default::default()
    };
    let mut plot = PlotData {
        name: "pairing".to_string(),
        columns: vec!["n".into(), "p_defect_ok".into(), "se".into()],
        rows: Vec::new(),
    };
    for &n in &cfg.schedule {
        let defects: Vec<f64> = records
            .iter()
            .filter(|r| r.n == n as u64 && r.observable == "max_defect")
            .map(|r| r.value)
            .collect();
        if defects.is_empty() {
            continue;
        }
        let tol = cfg.params.defect_tolerance as f64;
        let hits = defects.iter().filter(|&&d| d <= tol).count();
        let (p_ok, se) = empirical_probability(hits, defects.len());
        let max_defect = defects.iter().cloned().fold(0.0, f64::max);
        let mut block = SummaryBlock::new(format!("n={n}"));
        block.push("p_defect_within_tolerance", p_ok);
        block.push("se", se);
        block.push("max_defect_seen", max_defect);
        summary.blocks.push(block);
        plot.rows.push(vec![n as f64, p_ok, se]);
        summary.verdict(
            format!("pairing_stable_n{n}"),
            p_ok >= PAIRING_PASS_MIN,
            format!(
                "P(defect <= {}) = {p_ok:.4} over {} trials (floor {PAIRING_PASS_MIN})",
                cfg.params.defect_tolerance,
                defects.len()
            ),
        );
    }
    summary.plots.push(plot);

    let mut freqs: Vec<(usize, f64, f64)> = Vec::new();
    let mut wblock = SummaryBlock::new("witness");
    for &wn in &cfg.params.witness_schedule {
        let found: Vec<f64> = records
            .iter()
            .filter(|r| r.n == wn as u64 && r.observable == "witness_found")
            .map(|r| r.value)
            .collect();
        if found.is_empty() {
            continue;
        }
        let hits = found.iter().filter(|&&v| v > 0.0).count();
        let (p, se) = empirical_probability(hits, found.len());
        wblock.push(format!("frequency[n={wn}]"), format!("{p} (se {se})"));
        freqs.push((wn, p, se));
    }
    summary.blocks.push(wblock);
    if let (Some(&(_, p0, se0)), Some(&(_, p1, se1))) = (freqs.first(), freqs.last()) {
        summary.verdict(
            "witness_frequency_shrinks",
            p1 <= p0 + 2.0 * (se0 + se1),
            format!("near-double-root frequency {p0:.4} -> {p1:.4} along the witness schedule"),
        );
    }
    summary.verdict(
        "exclusions_rare",
        (summary.excluded_trials as f64) < 0.001 * summary.total_trials.max(1000) as f64,
        format!("{} unresolved trials", summary.excluded_trials),
    );
    summary
}
