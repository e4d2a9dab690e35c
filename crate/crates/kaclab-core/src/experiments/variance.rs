//! Variance growth of the total real-root count `N_n(R)` along a degree
//! schedule, against the classical variance slope.

use crate::bounds::maslova_variance_slope;
use crate::error::KaclabError;
use crate::experiments::{parallel_trials, unresolved_record, ExperimentConfig};
use crate::interval::Interval;
use crate::laws::CoefficientLaw;
use crate::poly::PolynomialSample;
use crate::records::{ExperimentSummary, PlotData, SummaryBlock, TrialRecord};
use crate::roots::count_roots;
use crate::stats::{fit_line, mean_se, sample_skewness, sample_variance};

/// Generous band for the per-degree ratio `Var N / log n`.
pub const RATIO_BAND: (f64, f64) = (0.05, 5.0);

/// Skewness cap for the standardized counts at the top of the schedule.
pub const SKEWNESS_CAP: f64 = 0.5;

pub fn run(cfg: &ExperimentConfig) -> Result<(Vec<TrialRecord>, ExperimentSummary), KaclabError> {
    let law = CoefficientLaw::parse(&cfg.law)?;
    let name = cfg.experiment.as_str();
    let n_max = *cfg.schedule.last().unwrap();
    let line = Interval::real_line();

    let per_trial: Vec<Vec<TrialRecord>> = parallel_trials(cfg.workers, cfg.trials, |t| {
        let full = PolynomialSample::sample(&law, n_max, cfg.master_seed, t);
        let mut rows = Vec::new();
        for &n in &cfg.schedule {
            let p = full.prefix(n);
            match count_roots(&p, &line) {
                Ok(r) => rows.push(TrialRecord::new(
                    name,
                    &cfg.law,
                    n as u64,
                    t,
                    "count_line",
                    r.count as f64,
                )),
                Err(_) => rows.push(unresolved_record(cfg.experiment, &cfg.law, n as u64, t)),
            }
        }
        rows
    });
    let records: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();
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
        name: "variance_trend".to_string(),
        columns: vec!["n".into(), "variance".into(), "ratio".into(), "reference_slope".into()],
        rows: Vec::new(),
    };
    let mut fit_pts: Vec<(f64, f64)> = Vec::new();
    let mut ratios_ok = true;
    let mut last_counts: Vec<f64> = Vec::new();
    for &n in &cfg.schedule {
        let counts: Vec<f64> = records
            .iter()
            .filter(|r| r.n == n as u64 && r.observable == "count_line")
            .map(|r| r.value)
            .collect();
        if counts.is_empty() {
            continue;
        }
        let var = sample_variance(&counts);
        let (mean, se) = mean_se(&counts);
        let ratio = var / (n as f64).ln();
        let mut block = SummaryBlock::new(format!("n={n}"));
        block.push("mean", mean);
        block.push("se", se);
        block.push("variance", var);
        block.push("ratio_to_log_n", ratio);
        summary.blocks.push(block);
        plot.rows.push(vec![n as f64, var, ratio, maslova_variance_slope()]);
        fit_pts.push(((n as f64).ln(), var));
        ratios_ok &= var >= 0.0 && (RATIO_BAND.0..=RATIO_BAND.1).contains(&ratio);
        last_counts = counts;
    }
    summary.plots.push(plot);
    summary.verdict(
        "ratio_positive_and_stable",
        ratios_ok,
        format!(
            "Var N / log n inside [{}, {}] at every n (reference slope {:.4})",
            RATIO_BAND.0,
            RATIO_BAND.1,
            maslova_variance_slope()
        ),
    );
    if let Some((slope, intercept, rms)) = fit_line(&fit_pts) {
        let mut block = SummaryBlock::new("slope_fit");
        block.push("slope", slope);
        block.push("intercept", intercept);
        block.push("rms_residual", rms);
        block.push("fit_range", format!("log n in [{}, {}]", fit_pts[0].0, fit_pts.last().unwrap().0));
        summary.blocks.push(block);
    }
    if last_counts.len() >= 100 {
        let skew = sample_skewness(&last_counts);
        summary.verdict(
            "standardized_counts_symmetric",
            skew.abs() < SKEWNESS_CAP,
            format!("sample skewness {skew:.4} at the largest degree (cap {SKEWNESS_CAP})"),
        );
    }
    summary.verdict(
        "exclusions_rare",
        (summary.excluded_trials as f64)
            < 0.001 * (cfg.trials * cfg.schedule.len()).max(1000) as f64,
        format!("{} unresolved counts", summary.excluded_trials),
    );
    summary
}
