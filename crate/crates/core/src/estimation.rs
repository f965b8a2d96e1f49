//! Empirical moments, cumulants and k-statistics with batch-means standard
//! errors, standardized moment gaps, and log-log decay fits.

use crate::combinatorics::{
    binomial_exact, cumulants_from_moments, gaussian_moment, MomentSequence,
};
use crate::error::{Error, Result};
use crate::simulators::SampleBatch;

/// Largest moment order tracked by a summary. Higher standardized moments are
/// too noisy at desk-scale replicate counts to be worth reporting.
pub const MAX_SUMMARY_ORDER: usize = 12;

#[derive(Debug, Clone)]
struct BatchSums {
    count: usize,
    /// `sum (x - shift)^r` for `r = 1..=max_order`.
    power_sums: Vec<f64>,
}

impl BatchSums {
    /// Batch moments `a_r = mean((x - shift)^r)` with `a_0 = 1`.
    fn shifted_moments(&self, max_order: usize) -> Vec<f64> {
        let mut a = Vec::with_capacity(max_order + 1);
        a.push(1.0);
        for r in 1..=max_order {
            a.push(self.power_sums[r - 1] / self.count as f64);
        }
        a
    }
}

/// Moments about `center` from moments about the accumulation shift.
fn recentered_moments(a: &[f64], shift: f64, center: f64, max_order: usize) -> Vec<f64> {
    let offset = shift - center;
    let mut out = Vec::with_capacity(max_order + 1);
    out.push(1.0);
    for r in 1..=max_order {
        let mut acc = 0.0;
        let mut offset_pow = 1.0;
        // sum_i C(r, i) a_i offset^{r-i}, accumulated from i = r down to 0.
        for i in (0..=r).rev() {
            acc += binomial_exact(r as u32, i as u32) as f64 * a[i] * offset_pow;
            offset_pow *= offset;
        }
        out.push(acc);
    }
    out
}

/// Empirical description of one sample batch.
#[derive(Debug, Clone)]
pub struct SampleSummary {
    count: usize,
    max_order: usize,
    shift: f64,
    raw_moments: Vec<f64>,
    central_moments: Vec<f64>,
    plugin_cumulants: Vec<f64>,
    k_statistics: Vec<f64>,
    std_errors: Vec<f64>,
    batches: Vec<BatchSums>,
}

impl SampleSummary {
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn mean(&self) -> f64 {
        self.raw_moments[0]
    }

    pub fn variance(&self) -> f64 {
        self.central_moments[1]
    }

    /// Raw moments `E X^1 ..`, 1-indexed by `order`.
    pub fn raw_moment(&self, order: usize) -> f64 {
        self.raw_moments[order - 1]
    }

    /// Central moments, 1-indexed; order 1 is zero by construction.
    pub fn central_moment(&self, order: usize) -> f64 {
        self.central_moments[order - 1]
    }

    pub fn raw_moments(&self) -> &[f64] {
        &self.raw_moments
    }

    pub fn central_moments(&self) -> &[f64] {
        &self.central_moments
    }

    /// Plug-in cumulants obtained by inverting the raw moments.
    pub fn plugin_cumulants(&self) -> &[f64] {
        &self.plugin_cumulants
    }

    /// Unbiased cumulant estimators `k_1..k_4` (fewer when the sample is
    /// smaller than the order needs).
    pub fn k_statistics(&self) -> &[f64] {
        &self.k_statistics
    }

    /// Batch-means standard errors of the empirically standardized moments,
    /// 1-indexed by order; NaN when fewer than two batches exist.
    pub fn std_errors(&self) -> &[f64] {
        &self.std_errors
    }

    /// Empirically standardized moment `mean(((x - mean)/sd)^k)`.
    pub fn standardized_moment(&self, k: usize) -> Result<f64> {
        self.check_order(k)?;
        let var = self.variance();
        if !(var > 0.0) {
            return Err(Error::DegenerateVariance(var));
        }
        Ok(self.central_moments[k - 1] / var.powf(k as f64 / 2.0))
    }

    pub fn skewness(&self) -> Result<f64> {
        self.standardized_moment(3)
    }

    pub fn kurtosis(&self) -> Result<f64> {
        self.standardized_moment(4)
    }

    fn check_order(&self, k: usize) -> Result<()> {
        if k < 1 || k > self.max_order {
            return Err(Error::InvalidArgument(format!(
                "order {k} outside the summarized range 1..={}",
                self.max_order
            )));
        }
        Ok(())
    }
}

/// Center and scale used to standardize before comparing against Gaussian
/// moments. Exact values remove the estimation bias of the empirical ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CenterScale {
    Empirical,
    Exact { mean: f64, sd: f64 },
}

/// One-pass summary of `values` up to moment order `max_order`.
///
/// Power sums are accumulated about the first value, which keeps the central
/// moments stable under large location offsets; batches are consecutive
/// slices, roughly `sqrt(count)` of them, reduced in a fixed order.
pub fn summarize_values(values: &[f64], max_order: usize) -> Result<SampleSummary> {
    if max_order < 1 || max_order > MAX_SUMMARY_ORDER {
        return Err(Error::InvalidArgument(format!(
            "max_order {max_order} outside 1..={MAX_SUMMARY_ORDER}"
        )));
    }
    let count = values.len();
    if count < 2 {
        return Err(Error::SampleTooSmall("summaries need at least two values".into()));
    }
    let shift = values[0];

    let batch_count = (count as f64).sqrt().floor() as usize;
    let batch_count = batch_count.clamp(1, count);
    let base = count / batch_count;
    let remainder = count % batch_count;

    let mut batches = Vec::with_capacity(batch_count);
    let mut start = 0;
    for b in 0..batch_count {
        let len = base + usize::from(b < remainder);
        let slice = &values[start..start + len];
        start += len;
        let mut power_sums = vec![0.0; max_order];
        for &x in slice {
            let d = x - shift;
            let mut pow = 1.0;
            for sum in power_sums.iter_mut() {
                pow *= d;
                *sum += pow;
            }
        }
        batches.push(BatchSums { count: len, power_sums });
    }

    let mut total = vec![0.0; max_order];
    for b in &batches {
        for (t, s) in total.iter_mut().zip(&b.power_sums) {
            *t += s;
        }
    }
    let mut a = Vec::with_capacity(max_order + 1);
    a.push(1.0);
    for r in 1..=max_order {
        a.push(total[r - 1] / count as f64);
    }

    let mean = shift + a[1];
    let raw_moments = recentered_moments(&a, shift, 0.0, max_order)[1..].to_vec();
    let mut central_moments = recentered_moments(&a, shift, mean, max_order)[1..].to_vec();
    central_moments[0] = 0.0;

    let plugin_cumulants = cumulants_from_moments(&MomentSequence::new(raw_moments.clone())?)?
        .values()
        .to_vec();

    let nf = count as f64;
    let mut k_statistics = vec![mean];
    if max_order >= 2 {
        let m2 = central_moments[1];
        k_statistics.push(nf / (nf - 1.0) * m2);
        if count >= 3 && max_order >= 3 {
            let m3 = central_moments[2];
            k_statistics.push(nf * nf / ((nf - 1.0) * (nf - 2.0)) * m3);
            if count >= 4 && max_order >= 4 {
                let m4 = central_moments[3];
                let k4 = nf * nf * ((nf + 1.0) * m4 - 3.0 * (nf - 1.0) * m2 * m2)
                    / ((nf - 1.0) * (nf - 2.0) * (nf - 3.0));
                k_statistics.push(k4);
            }
        }
    }

    let std_errors = empirical_std_errors(&batches, max_order);

    Ok(SampleSummary {
        count,
        max_order,
        shift,
        raw_moments,
        central_moments,
        plugin_cumulants,
        k_statistics,
        std_errors,
        batches,
    })
}

/// Summary of a simulator batch; see [`summarize_values`].
pub fn summarize(batch: &SampleBatch, max_order: usize) -> Result<SampleSummary> {
    summarize_values(&batch.values, max_order)
}

fn sample_sd(stats: &[f64]) -> f64 {
    let n = stats.len() as f64;
    let mean = stats.iter().sum::<f64>() / n;
    let ss: f64 = stats.iter().map(|s| (s - mean).powi(2)).sum();
    (ss / (n - 1.0)).sqrt()
}

fn empirical_std_errors(batches: &[BatchSums], max_order: usize) -> Vec<f64> {
    if batches.len() < 2 {
        return vec![f64::NAN; max_order];
    }
    let b = batches.len() as f64;
    let mut per_order = vec![Vec::with_capacity(batches.len()); max_order];
    for batch in batches {
        let a = batch.shifted_moments(max_order);
        let central = recentered_moments(&a, 0.0, a[1], max_order);
        let var = if max_order >= 2 { central[2] } else { f64::NAN };
        for (k, stats) in per_order.iter_mut().enumerate() {
            let order = k + 1;
            let stat = match order {
                1 => 0.0,
                2 => 1.0,
                _ => {
                    if var > 0.0 {
                        central[order] / var.powf(order as f64 / 2.0)
                    } else {
                        f64::NAN
                    }
                }
            };
            stats.push(stat);
        }
    }
    per_order.iter().map(|stats| sample_sd(stats) / b.sqrt()).collect()
}

/// `|mean(Z^k) - E N^k|` with its batch-means standard error, where `Z` is the
/// sample standardized either empirically or by caller-supplied exact values.
pub fn standardized_gap(
    summary: &SampleSummary,
    k: usize,
    center_scale: CenterScale,
) -> Result<(f64, f64)> {
    summary.check_order(k)?;
    match center_scale {
        CenterScale::Empirical => {
            let point = summary.standardized_moment(k)?;
            Ok(((point - gaussian_moment(k as u32)).abs(), summary.std_errors[k - 1]))
        }
        CenterScale::Exact { mean, sd } => {
            if !(sd > 0.0) {
                return Err(Error::DegenerateVariance(sd * sd));
            }
            let scale = sd.powi(k as i32);
            let mut batch_stats = Vec::with_capacity(summary.batches.len());
            let mut weighted_total = 0.0;
            for batch in &summary.batches {
                let a = batch.shifted_moments(k);
                let about_mean = recentered_moments(&a, summary.shift, mean, k);
                let stat = about_mean[k] / scale;
                weighted_total += stat * batch.count as f64;
                batch_stats.push(stat);
            }
            let point = weighted_total / summary.count as f64;
            let se = if batch_stats.len() >= 2 {
                sample_sd(&batch_stats) / (batch_stats.len() as f64).sqrt()
            } else {
                f64::NAN
            };
            Ok(((point - gaussian_moment(k as u32)).abs(), se))
        }
    }
}

/// Least-squares fit of `log gap` against `log x`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: Vec<(f64, f64)>,
}

/// Fits the decay exponent of gap values against a scale variable. Points
/// with nonpositive coordinates are rejected; the caller filters noise-floor
/// entries first.
pub fn decay_fit(points: &[(f64, f64)]) -> Result<DecayFit> {
    if points.len() < 3 {
        return Err(Error::SampleTooSmall(format!(
            "decay fits need at least 3 points, got {}",
            points.len()
        )));
    }
    for &(x, gap) in points {
        if !(x > 0.0) || !(gap > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "decay fit points must be positive, got ({x}, {gap})"
            )));
        }
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, g)| (x.ln(), g.ln())).collect();
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("decay fit needs at least two distinct x values".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_tot: f64 = logs.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = logs
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(DecayFit { slope, intercept, r_squared, points: points.to_vec() })
}
