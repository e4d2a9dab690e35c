//! Small statistics helpers shared by the experiment summaries.

/// Sample mean and standard error `std / sqrt(M)`.
pub fn mean_se(values: &[f64]) -> (f64, f64) {
    let m = values.len();
    if m == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / m as f64;
    if m == 1 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m as f64 - 1.0);
    (mean, (var / m as f64).sqrt())
}

/// Unbiased sample variance.
pub fn sample_variance(values: &[f64]) -> f64 {
    let m = values.len();
    if m < 2 {
        return f64::NAN;
    }
    let mean = values.iter().sum::<f64>() / m as f64;
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m as f64 - 1.0)
}

/// Standardized third moment.
pub fn sample_skewness(values: &[f64]) -> f64 {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / m;
    if var <= 0.0 {
        return 0.0;
    }
    let third = values.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / m;
    third / var.powf(1.5)
}

/// Empirical probability with its binomial standard error.
pub fn empirical_probability(hits: usize, trials: usize) -> (f64, f64) {
    let p = hits as f64 / trials as f64;
    let se = (p * (1.0 - p) / trials as f64).sqrt();
    (p, se)
}

/// Least-squares line fit. Returns `(slope, intercept, rms_residual)`.
pub fn fit_line(points: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let m = points.len();
    if m < 2 {
        return None;
    }
    let mf = m as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = mf * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return None;
    }
    let slope = (mf * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / mf;
    let rss: f64 = points
        .iter()
        .map(|&(x, y)| {
            let r = y - slope * x - intercept;
            r * r
        })
        .sum();
    Some((slope, intercept, (rss / mf).sqrt()))
}

/// Survival curve `P(T >= t)` for integer-valued observations, for
/// `t = 0..=t_max`.
pub fn survival_curve(values: &[f64], t_max: usize) -> Vec<(usize, f64)> {
    let m = values.len() as f64;
    (0..=t_max)
        .map(|t| {
            let hits = values.iter().filter(|&&v| v >= t as f64).count();
            (t, hits as f64 / m)
        })
        .collect()
}

/// Fit the decay slope of `log P(T >= t)`, restricted to points with at
/// least `min_count` supporting observations (relative error of rarer tail
/// estimates defeats the fit). Returns `(slope, fit_range, rms_residual)`
/// with the slope reported positive for a decaying tail.
pub fn tail_slope(
    survival: &[(usize, f64)],
    trials: usize,
    min_count: usize,
) -> Option<(f64, (usize, usize), f64)> {
    let floor = min_count as f64 / trials as f64;
    let pts: Vec<(f64, f64)> = survival
        .iter()
        .filter(|&&(_, p)| p >= floor && p > 0.0)
        .map(|&(t, p)| (t as f64, p.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let (slope, _, rms) = fit_line(&pts)?;
    let lo = pts.first().unwrap().0 as usize;
    let hi = pts.last().unwrap().0 as usize;
    Some((-slope, (lo, hi), rms))
}
