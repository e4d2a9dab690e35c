//! Backend equivalence suite: random integer-coefficient polynomials
//! counted by both engines on a fixed family of intervals, expecting exact
//! agreement everywhere.

use crate::dyadic::DyadicCoefficient;
use crate::error::KaclabError;
use crate::experiments::{parallel_trials, ExperimentConfig};
use crate::interval::Interval;
use crate::laws::CoefficientLaw;
use crate::poly::PolynomialSample;
use crate::records::{ExperimentSummary, SummaryBlock, TrialRecord};
use crate::rng::seeded_stream;
use crate::roots::{descartes_count, sturm_count, DescartesBudget};
use rand::Rng;

fn check_intervals() -> [Interval; 3] {
    [
        Interval::closed_f64(-2.0, 2.0),
        Interval::closed_f64(0.0, 1.0),
        Interval::closed_f64(-1.0, 0.0),
    ]
}

pub fn run(cfg: &ExperimentConfig) -> Result<(Vec<TrialRecord>, ExperimentSummary), KaclabError> {
    CoefficientLaw::parse(&cfg.law)?; // the law string is echoed but unused
    let name = cfg.experiment.as_str();
    let budget = DescartesBudget::default();
    let intervals = check_intervals();

    let per_trial: Vec<Vec<TrialRecord>> = parallel_trials(cfg.workers, cfg.trials, |t| {
        let mut rng = seeded_stream(cfg.master_seed, t);
        let degree = rng.gen_range(1..=cfg.params.max_degree);
        let span = cfg.params.coeff_span;
        let coeffs: Vec<DyadicCoefficient> = loop {
            let candidate: Vec<DyadicCoefficient> = (0..=degree)
                .map(|_| DyadicCoefficient::from_f64(rng.gen_range(-span..=span) as f64))
                .collect();
            if candidate.iter().any(|c| !c.is_zero()) {
                break candidate;
            }
        };
        let p = PolynomialSample::from_coefficients(coeffs);
        intervals
            .iter()
            .enumerate()
            .map(|(i, interval)| {
                let s = sturm_count(&p, interval).expect("nonzero polynomial");
                let d = descartes_count(&p, interval, &budget);
                let (mismatch, d_count) = match d {
                    Ok(r) => (usize::from(r.count != s.count), r.count as f64),
                    Err(_) => (1, f64::NAN), // an unresolved box counts against equivalence
                };
                TrialRecord::new(name, &cfg.law, degree as u64, t, format!("mismatch_{i}"), mismatch as f64)
                    .with_aux(s.count as f64)
                    .with_aux2(d_count)
            })
            .collect()
    });
    let records: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();
    let summary = summarize(cfg, &records);
    Ok((records, summary))
}

pub fn summarize(cfg: &ExperimentConfig, records: &[TrialRecord]) -> ExperimentSummary {
    let mut summary = ExperimentSummary {
        experiment: cfg.experiment.as_str().to_string(),
        total_trials: cfg.trials,
        ..Default::default()
    };
    let checks: Vec<&TrialRecord> = records
        .iter()
        .filter(|r| r.observable.starts_with("mismatch_"))
        .collect();
    let mismatches = checks.iter().filter(|r| r.value != 0.0).count();
    let mut block = SummaryBlock::new("equivalence");
    block.push("polynomials", cfg.trials);
    block.push("interval_checks", checks.len());
    block.push("mismatches", mismatches);
    summary.blocks.push(block);
    summary.verdict(
        "backends_agree",
        mismatches == 0,
        format!("{mismatches} mismatches across {} checks", checks.len()),
    );
    summary
}
