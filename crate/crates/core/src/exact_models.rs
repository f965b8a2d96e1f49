//! Closed-form cumulants for log-determinant and log-volume statistics of the
//! classical ensembles, their standardized moments, and explicit bounds on the
//! standardized cumulants in each variance regime.
//!
//! Every model here has a Mellin transform that is a product of gamma-function
//! ratios, so all cumulants reduce to polygamma sums over an arithmetic grid.

use crate::bounds::GrowthSpec;
use crate::combinatorics::{moments_from_cumulants, CumulantSequence};
use crate::error::{Error, Result};
use crate::specfun::{ln_gamma, polygamma};

const MAX_GRID_POINTS: u64 = 100_000_000;

/// Dyson index; the ensembles are defined for these three values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Beta {
    One,
    Two,
    Four,
}

impl Beta {
    pub fn value(self) -> f64 {
        match self {
            Beta::One => 1.0,
            Beta::Two => 2.0,
            Beta::Four => 4.0,
        }
    }

    pub fn from_f64(v: f64) -> Result<Self> {
        match v {
            v if v == 1.0 => Ok(Beta::One),
            v if v == 2.0 => Ok(Beta::Two),
            v if v == 4.0 => Ok(Beta::Four),
            _ => Err(Error::InvalidArgument(format!("beta = {v} must be 1, 2 or 4"))),
        }
    }
}

/// One exact model together with its size parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    /// Real part of the log characteristic polynomial in a circular ensemble.
    Cbe { n: u64, beta: Beta },
    /// Log-determinant of a sample covariance (Laguerre) matrix built from an
    /// `n x p` Gaussian matrix.
    LaguerreLogDet { n: u64, p: u64, beta: Beta },
    /// Log-determinant of a Jacobi (MANOVA) matrix.
    JacobiLogDet { p: u64, n1: u64, n2: u64, beta: Beta },
    /// Log-determinant of a Ginibre Gram matrix.
    GinibreLogDet { n: u64, beta: Beta },
    /// Log-volume of the parallelotope spanned by `p` Gaussian points in
    /// dimension `n`.
    ParallelotopeLogVol { n: u64, p: u64 },
    /// Log-volume of the simplex on `p + 1` Gaussian points in dimension `n`.
    SimplexLogVol { n: u64, p: u64 },
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelSpec::Cbe { n, .. } | ModelSpec::GinibreLogDet { n, .. } => {
                if n < 1 {
                    return Err(Error::InvalidArgument("matrix size n must be >= 1".into()));
                }
            }
            ModelSpec::LaguerreLogDet { n, p, .. }
            | ModelSpec::ParallelotopeLogVol { n, p }
            | ModelSpec::SimplexLogVol { n, p } => {
                if p < 1 || p > n {
                    return Err(Error::InvalidArgument(format!("need 1 <= p <= n, got p={p} n={n}")));
                }
            }
            ModelSpec::JacobiLogDet { p, n1, n2, .. } => {
                if p < 1 || p > n1 || n2 < 1 {
                    return Err(Error::InvalidArgument(format!(
                        "Jacobi needs 1 <= p <= n1 and n2 >= 1, got p={p} n1={n1} n2={n2}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &'static str {
        match self {
            ModelSpec::Cbe { .. } => "cbe",
            ModelSpec::LaguerreLogDet { .. } => "laguerre",
            ModelSpec::JacobiLogDet { .. } => "jacobi",
            ModelSpec::GinibreLogDet { .. } => "ginibre",
            ModelSpec::ParallelotopeLogVol { .. } => "parallelotope",
            ModelSpec::SimplexLogVol { .. } => "simplex",
        }
    }
}

/// Variance regime of the Laguerre family, by how `p` scales with `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LaguerreRegime {
    /// `p = o(n)`.
    SmallP,
    /// `p ~ c n` with `c` in (0, 1).
    Proportional { c: f64 },
    /// `n - p = o(n)`, including `p = n`.
    FullRank,
}

/// `sum_{k=1}^{p} psi^{(j-1)}(alpha (k + l))`: the j-th derivative at zero of
/// the log Mellin transform shared by all models here.
pub fn polygamma_grid_sum(p: u64, l: u64, alpha: f64, j: u32) -> Result<f64> {
    if j < 1 {
        return Err(Error::InvalidArgument("derivative order j must be >= 1".into()));
    }
    if p < 1 {
        return Err(Error::InvalidArgument("grid length p must be >= 1".into()));
    }
    if p > MAX_GRID_POINTS {
        return Err(Error::InvalidArgument(format!(
            "grid length {p} exceeds the runtime guard {MAX_GRID_POINTS}"
        )));
    }
    if !(alpha > 0.0) {
        return Err(Error::Domain { argument: alpha, reason: "scale alpha must be positive" });
    }
    let mut total = 0.0;
    for k in 1..=p {
        total += polygamma(j - 1, alpha * (k + l) as f64)?;
    }
    Ok(total)
}

/// The j-th cumulant of the model's scalar statistic, exact up to floating
/// point error.
pub fn model_cumulant(model: &ModelSpec, j: u32) -> Result<f64> {
    model.validate()?;
    if j < 1 {
        return Err(Error::InvalidArgument("cumulant order j must be >= 1".into()));
    }
    let mean_only = |j: u32, shift: f64| if j == 1 { shift } else { 0.0 };
    match *model {
        ModelSpec::LaguerreLogDet { n, p, beta } => {
            let base = polygamma_grid_sum(p, n - p, beta.value() / 2.0, j)?;
            Ok(base + mean_only(j, p as f64 * std::f64::consts::LN_2))
        }
        ModelSpec::JacobiLogDet { p, n1, n2, beta } => {
            let alpha = beta.value() / 2.0;
            let first = polygamma_grid_sum(p, n1 - p, alpha, j)?;
            let second = polygamma_grid_sum(p, n1 + n2 - p, alpha, j)?;
            Ok(first - second)
        }
        ModelSpec::GinibreLogDet { n, beta } => {
            let base = polygamma_grid_sum(n, 0, beta.value() / 2.0, j)?;
            Ok(base + mean_only(j, n as f64 / 2.0 * (2.0 / beta.value()).ln()))
        }
        ModelSpec::Cbe { n, beta } => {
            // Prefactor (2^{j-1} - 1) / 2^{j-1}; zero at j = 1, so the mean
            // vanishes for every n and beta.
            let pow = 2.0f64.powi(j as i32 - 1);
            let prefactor = (pow - 1.0) / pow;
            if prefactor == 0.0 {
                return Ok(0.0);
            }
            let half_beta = beta.value() / 2.0;
            let mut sum = 0.0;
            for k in 0..n {
                sum += polygamma(j - 1, 1.0 + k as f64 * half_beta)?;
            }
            Ok(prefactor * sum)
        }
        ModelSpec::ParallelotopeLogVol { n, p } => {
            let base = polygamma_grid_sum(p, n - p, 0.5, j)? / 2.0f64.powi(j as i32);
            Ok(base + mean_only(j, p as f64 / 2.0 * std::f64::consts::LN_2))
        }
        ModelSpec::SimplexLogVol { n, p } => {
            let base = model_cumulant(&ModelSpec::ParallelotopeLogVol { n, p }, j)?;
            let shift = 0.5 * ((p + 1) as f64).ln() - ln_gamma(p as f64 + 1.0)?;
            Ok(base + mean_only(j, shift))
        }
    }
}

/// Cumulants `G_1..G_max_order` of the model statistic.
pub fn model_cumulants(model: &ModelSpec, max_order: u32) -> Result<CumulantSequence> {
    let values: Vec<f64> = (1..=max_order)
        .map(|j| model_cumulant(model, j))
        .collect::<Result<_>>()?;
    CumulantSequence::new(values)
}

/// Cumulant of the centred, unit-variance model statistic: zero at order 1,
/// one at order 2, `G_j / G_2^{j/2}` above.
pub fn standardized_cumulant_exact(model: &ModelSpec, j: u32) -> Result<f64> {
    let var = model_cumulant(model, 2)?;
    if !(var > 0.0) {
        return Err(Error::DegenerateVariance(var));
    }
    match j {
        0 => Err(Error::InvalidArgument("cumulant order j must be >= 1".into())),
        1 => Ok(0.0),
        2 => Ok(1.0),
        _ => Ok(model_cumulant(model, j)? / var.sqrt().powi(j as i32)),
    }
}

/// `E Z^k` for the centred, unit-variance model statistic, computed from the
/// exact cumulants through the composition expansion. No truncation is
/// involved: the k-th moment needs cumulants up to order k only.
pub fn standardized_moment_exact(model: &ModelSpec, k: u32) -> Result<f64> {
    if k < 1 {
        return Err(Error::InvalidArgument("moment order k must be >= 1".into()));
    }
    let cumulants = model_cumulants(model, k.max(2))?;
    let standardized = cumulants.standardized()?;
    let moments = moments_from_cumulants(&standardized)?;
    Ok(moments.value(k))
}

fn laguerre_like_params(model: &ModelSpec) -> Option<(u64, u64)> {
    match *model {
        ModelSpec::LaguerreLogDet { n, p, beta: Beta::One } => Some((n, p)),
        ModelSpec::ParallelotopeLogVol { n, p } | ModelSpec::SimplexLogVol { n, p } => {
            // The log-volume is an affine function of a Laguerre log-determinant,
            // so all standardized cumulants coincide with the beta = 1 case.
            Some((n, p))
        }
        ModelSpec::GinibreLogDet { n, beta: Beta::One } => Some((n, n)),
        _ => None,
    }
}

fn factorial_f64(n: u32) -> f64 {
    (2..=n as u64).map(|i| i as f64).product()
}

/// Explicit bound on `|G_j(Z)|` for the standardized statistic.
///
/// The constants are sound for all admissible sizes, not only asymptotically:
/// for the Laguerre family they follow from the elementary polygamma envelope
/// together with the variance lower bounds `G_2 > 2p/n` (small and
/// proportional rank) and `G_2 >= 2 ln((n+1)/(n-p+1))` (full rank).
pub fn model_cumulant_bound(model: &ModelSpec, regime: LaguerreRegime, j: u32) -> Result<f64> {
    model.validate()?;
    if j < 3 {
        return Err(Error::InvalidArgument("cumulant bounds start at order 3".into()));
    }
    if let ModelSpec::Cbe { n, beta } = *model {
        // The regime argument is irrelevant here; the envelope constant only
        // depends on beta.
        let _ = n;
        let c_beta = match beta {
            Beta::One => 2.0f64.powi(j as i32) * std::f64::consts::PI.powi(2) / 3.0,
            Beta::Two => 4.0 * std::f64::consts::PI.powi(2) / 6.0,
            Beta::Four => 8.0 * std::f64::consts::PI.powi(2) / 6.0,
        };
        let sigma = model_cumulant(model, 2)?.sqrt();
        return Ok(factorial_f64(j) * c_beta / sigma.powi(j as i32 - 2));
    }

    let (n, p) = laguerre_like_params(model).ok_or_else(|| {
        Error::UnsupportedBound(format!("{} has no cumulant bound in this build", model.label()))
    })?;
    let nf = n as f64;
    let pf = p as f64;
    let jf = j as f64;
    match regime {
        LaguerreRegime::SmallP | LaguerreRegime::Proportional { .. } => {
            let d = match regime {
                LaguerreRegime::SmallP => 4.0,
                LaguerreRegime::Proportional { c } => {
                    if !(c > 0.0 && c < 1.0) {
                        return Err(Error::InvalidArgument(format!("c = {c} must be in (0,1)")));
                    }
                    2.0 / (1.0 - c) + 1.0
                }
                LaguerreRegime::FullRank => unreachable!(),
            };
            // Validity of the envelope at the smallest grid argument:
            // (n - p + 1)/2 must exceed n/d and be at least 1.
            let z_min = (nf - pf + 1.0) / 2.0;
            if z_min <= nf / d || z_min < 1.0 {
                return Err(Error::UnsupportedBound(format!(
                    "regime constant d = {d} invalid for n = {n}, p = {p}"
                )));
            }
            Ok(2.0f64.powf(jf / 2.0) * d.powi(j as i32 - 1) * factorial_f64(j - 1)
                / (pf * nf).sqrt().powi(j as i32 - 2))
        }
        LaguerreRegime::FullRank => {
            let log_ratio = (nf / (nf - pf + 1.0)).ln();
            if !(log_ratio > 0.0) {
                return Err(Error::UnsupportedBound(format!(
                    "full-rank bound needs log(n/(n-p+1)) > 0, got n = {n}, p = {p}"
                )));
            }
            Ok(2.0f64.powf(jf / 2.0 + 1.0) * factorial_f64(j - 1)
                / log_ratio.sqrt().powi(j as i32))
        }
    }
}

/// Growth envelope for the standardized statistic, suitable for
/// [`crate::bounds::moment_gap_bound`]: the scale is the regime's natural one
/// and the per-order constants come from [`model_cumulant_bound`].
pub fn growth_spec_for(model: &ModelSpec, regime: LaguerreRegime, max_order: u32) -> Result<GrowthSpec> {
    let delta = match (model, regime) {
        (ModelSpec::Cbe { .. }, _) => model_cumulant(model, 2)?.sqrt(),
        (_, LaguerreRegime::SmallP) | (_, LaguerreRegime::Proportional { .. }) => {
            let (n, p) = laguerre_like_params(model).ok_or_else(|| {
                Error::UnsupportedBound(format!("{} has no cumulant bound in this build", model.label()))
            })?;
            ((n * p) as f64).sqrt()
        }
        (_, LaguerreRegime::FullRank) => {
            let (n, p) = laguerre_like_params(model).ok_or_else(|| {
                Error::UnsupportedBound(format!("{} has no cumulant bound in this build", model.label()))
            })?;
            (n as f64 / (n as f64 - p as f64 + 1.0)).ln().sqrt()
        }
    };
    let bounds: Vec<f64> = (3..=max_order.max(3))
        .map(|j| model_cumulant_bound(model, regime, j))
        .collect::<Result<_>>()?;
    GrowthSpec::from_cumulant_bounds(delta, &bounds)
}

/// Classifies a single `(n, p)` pair by threshold heuristics and returns the
/// matching asymptotic variance. Sequence-level intent should override the
/// heuristic when known.
pub fn laguerre_variance_regime(n: u64, p: u64) -> Result<(LaguerreRegime, f64)> {
    if p < 1 || p > n {
        return Err(Error::InvalidArgument(format!("need 1 <= p <= n, got p={p} n={n}")));
    }
    let nf = n as f64;
    let pf = p as f64;
    let sqrt_n = nf.sqrt();
    if nf - pf <= sqrt_n {
        Ok((LaguerreRegime::FullRank, 2.0 * (nf / (nf - pf + 1.0)).ln()))
    } else if pf <= sqrt_n {
        Ok((LaguerreRegime::SmallP, 2.0 * pf / nf))
    } else {
        let c = pf / nf;
        Ok((LaguerreRegime::Proportional { c }, 2.0 * (1.0 / (1.0 - c)).ln()))
    }
}
