//! Scalar-valued samplers: Wishart log-determinants, pair-kernel U-statistics
//! and normalized sums of independent variables.

use super::rng::SplitMix64;
use crate::error::{Error, Result};

/// One draw of `log det` of a sample covariance matrix built from an `n x p`
/// standard Gaussian matrix, using the Bartlett factorization: the determinant
/// equals a product of independent chi-squares with `n, n-1, ..., n-p+1`
/// degrees of freedom, so no matrix is ever formed and a draw costs `O(p)`.
pub fn sample_wishart_logdet(n: u64, p: u64, rng: &mut SplitMix64) -> Result<f64> {
    if p < 1 || p > n {
        return Err(Error::InvalidArgument(format!("need 1 <= p <= n, got p={p} n={n}")));
    }
    let mut log_det = 0.0;
    for i in 0..p {
        log_det += rng.chi_square((n - i) as f64).ln();
    }
    Ok(log_det)
}

/// Built-in symmetric pair kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UKernel {
    /// `h(x, y) = x + y + xy`; centred and non-degenerate for standard normal
    /// inputs, with conditional variance 1 and full variance 3.
    AddMul,
}

impl UKernel {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "addmul" => Ok(UKernel::AddMul),
            other => Err(Error::InvalidArgument(format!("unknown U-statistic kernel '{other}'"))),
        }
    }

    /// `(sigma_1^2, sigma_2^2)` for standard normal inputs.
    pub fn variances(self) -> (f64, f64) {
        match self {
            UKernel::AddMul => (1.0, 3.0),
        }
    }
}

/// One draw of the pair-average U-statistic over `n` i.i.d. standard normals.
pub fn sample_ustatistic(n: u64, kernel: UKernel, rng: &mut SplitMix64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("U-statistic needs n >= 2".into()));
    }
    match kernel {
        UKernel::AddMul => {
            // sum_{i<j} (x_i + x_j + x_i x_j)
            //   = (n-1) S_1 + (S_1^2 - S_2) / 2 with S_r the power sums.
            let mut s1 = 0.0;
            let mut s2 = 0.0;
            for _ in 0..n {
                let x = rng.standard_normal();
                s1 += x;
                s2 += x * x;
            }
            let pairs = (n * (n - 1) / 2) as f64;
            Ok(((n as f64 - 1.0) * s1 + 0.5 * (s1 * s1 - s2)) / pairs)
        }
    }
}

/// Exact variance of a degree-two U-statistic:
/// `4 sigma_1^2 (n-2) / (n(n-1)) + 2 sigma_2^2 / (n(n-1))`.
pub fn ustat_variance(n: u64, sigma1_sq: f64, sigma2_sq: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("U-statistic variance needs n >= 2".into()));
    }
    let nf = n as f64;
    Ok(4.0 * sigma1_sq / nf * (nf - 2.0) / (nf - 1.0) + 2.0 * sigma2_sq / (nf * (nf - 1.0)))
}

/// Summand laws for the independent-sum model. Each is centred with unit
/// variance before scaling by `sigma_i`, and satisfies a Bernstein-type
/// moment condition with the constant returned by [`SumDist::bernstein_k`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumDist {
    /// `sigma_i` times a uniform sign.
    Rademacher,
    /// `sigma_i` times `Exp(1) - 1`.
    CenteredExponential,
    /// Uniform on `[-sqrt(3) sigma_i, sqrt(3) sigma_i]`.
    ScaledUniform,
}

impl SumDist {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "rademacher" => Ok(SumDist::Rademacher),
            "exponential" => Ok(SumDist::CenteredExponential),
            "uniform" => Ok(SumDist::ScaledUniform),
            other => Err(Error::InvalidArgument(format!("unknown summand law '{other}'"))),
        }
    }

    /// Bernstein constant `K` such that `|E X_i^j| <= j! K^{j-2} sigma_i^2`.
    pub fn bernstein_k(self, max_sigma: f64) -> f64 {
        match self {
            SumDist::Rademacher | SumDist::CenteredExponential => max_sigma,
            SumDist::ScaledUniform => 3.0f64.sqrt() * max_sigma,
        }
    }

    /// Third cumulant of the unscaled (unit variance) law.
    pub fn unit_third_cumulant(self) -> f64 {
        match self {
            SumDist::Rademacher | SumDist::ScaledUniform => 0.0,
            SumDist::CenteredExponential => 2.0,
        }
    }

    fn draw_unit(self, rng: &mut SplitMix64) -> f64 {
        match self {
            SumDist::Rademacher => {
                if rng.next_bool() {
                    1.0
                } else {
                    -1.0
                }
            }
            SumDist::CenteredExponential => -(1.0 - rng.next_f64()).ln() - 1.0,
            SumDist::ScaledUniform => 3.0f64.sqrt() * (2.0 * rng.next_f64() - 1.0),
        }
    }
}

/// One draw of the normalized sum `sum sigma_i X_i / sqrt(sum sigma_i^2)`.
pub fn sample_independent_sum(sigmas: &[f64], dist: SumDist, rng: &mut SplitMix64) -> Result<f64> {
    if sigmas.is_empty() {
        return Err(Error::InvalidArgument("sigma list must be nonempty".into()));
    }
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for &s in sigmas {
        if !(s > 0.0) {
            return Err(Error::InvalidArgument(format!("sigma = {s} must be positive")));
        }
        sum += s * dist.draw_unit(rng);
        sum_sq += s * s;
    }
    Ok(sum / sum_sq.sqrt())
}
