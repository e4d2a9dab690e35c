//! Small-ball experiment: empirical `P(|p_n(x)| <= lambda sqrt(V_n))` over
//! a lambda-grid, compared against the Gaussian closed form and the frozen
//! linear comparison `K * lambda` above the validity floor.

use crate::error::KaclabError;
use crate::experiments::{parallel_trials, ExperimentConfig};
use crate::laws::{normal_cdf, CoefficientLaw};
use crate::poly::{variance_profile, PolynomialSample};
use crate::records::{ExperimentSummary, PlotData, SummaryBlock, TrialRecord};
use crate::stats::empirical_probability;

/// Default evaluation points inside the near-one window
/// `[1 - 1/log n, 1 - log n / n]`.
pub fn default_x_grid(n: usize) -> Vec<f64> {
    let log_n = (n as f64).ln();
    let lo = 1.0 - 1.0 / log_n;
    let hi = 1.0 - log_n / n as f64;
    (0..4).map(|i| lo + (hi - lo) * i as f64 / 3.0).collect()
}

pub fn run(cfg: &ExperimentConfig) -> Result<(Vec<TrialRecord>, ExperimentSummary), KaclabError> {
    let law = CoefficientLaw::parse(&cfg.law)?;
    let name = cfg.experiment.as_str();
    let n = *cfg.schedule.last().unwrap();
    let xs = if cfg.params.x_grid.is_empty() {
        default_x_grid(n)
    } else {
        cfg.params.x_grid.clone()
    };

    let per_trial: Vec<Vec<TrialRecord>> = parallel_trials(cfg.workers, cfg.trials, |t| {
        let p = PolynomialSample::sample(&law, n, cfg.master_seed, t);
        xs.iter()
            .enumerate()
            .map(|(i, &x)| {
                let z = p.eval(x, 0).value.abs() / variance_profile(n, x).sqrt();
                TrialRecord::new(name, &cfg.law, n as u64, t, format!("norm_abs_{i}"), z)
                    .with_aux(x)
            })
            .collect()
    });
    let records: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();
    let summary = summarize(cfg, &records, &xs);
    Ok((records, summary))
}

pub fn summarize(
    cfg: &ExperimentConfig,
    records: &[TrialRecord],
    xs: &[f64],
) -> ExperimentSummary {
    let gaussian = cfg.law == "gaussian";
    let n = *cfg.schedule.last().unwrap();
    let mut summary = ExperimentSummary {
        experiment: cfg.experiment.as_str().to_string(),
        total_trials: cfg.trials,
        ..Default::default()
    };
    let mut gaussian_ok = true;
    let mut max_ratio = 0.0f64;
    let mut max_ratio_at = (0.0, 0.0);
    for (i, &x) in xs.iter().enumerate() {
        let obs = format!("norm_abs_{i}");
        let zs: Vec<f64> = records
            .iter()
            .filter(|r| r.observable == obs)
            .map(|r| r.value)
            .collect();
        if zs.is_empty() {
            continue;
        }
        let variance = variance_profile(n, x);
        let floor = crate::bounds::small_ball_window_floor(
            variance,
            n,
            cfg.params.small_ball_floor_exp,
        );
        let mut block = SummaryBlock::new(format!("x={x}"));
        block.push("variance", variance);
        block.push("floor", floor);
        let mut plot = PlotData {
            name: format!("smallball_x{i}"),
            columns: vec![
                "lambda".into(),
                "empirical".into(),
                "se".into(),
                "ratio".into(),
                "line".into(),
            ],
            rows: Vec::new(),
        };
        for &lambda in &cfg.params.lambda_grid {
            let hits = zs.iter().filter(|&&z| z <= lambda).count();
            let (p_hat, se) = empirical_probability(hits, zs.len());
            let line = crate::bounds::small_ball_bound(
                lambda,
                cfg.params.small_ball_constant,
                floor,
            );
            let ratio = p_hat / lambda;
            block.push(format!("p[lambda={lambda}]"), format!("{p_hat} (se {se})"));
            plot.rows.push(vec![lambda, p_hat, se, ratio, line.bound]);
            if gaussian && i == 0 {
                let truth = 2.0 * normal_cdf(lambda) - 1.0;
                gaussian_ok &= (p_hat - truth).abs() <= 3.0 * se.max(1e-12);
            }
            if line.asserted && ratio > max_ratio {
                max_ratio = ratio;
                max_ratio_at = (x, lambda);
            }
        }
        summary.blocks.push(block);
        summary.plots.push(plot);
    }
    if gaussian {
        summary.verdict(
            "gaussian_matches_normal_cdf",
            gaussian_ok,
            "empirical probabilities within 3 SE of 2 Phi(lambda) - 1 on the lambda grid",
        );
    } else {
        summary.verdict(
            "ratio_bounded",
            max_ratio <= cfg.params.small_ball_constant,
            format!(
                "max probability/lambda = {max_ratio:.3} at (x, lambda) = {max_ratio_at:?}, cap {}",
                cfg.params.small_ball_constant
            ),
        );
    }
    summary
}
