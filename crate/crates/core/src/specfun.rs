//! Log-gamma, digamma and polygamma evaluation on the positive real axis.
//!
//! The implementation shifts the argument upward by the standard recurrence
//! until the asymptotic expansion with Bernoulli-number corrections applies,
//! which keeps relative accuracy near 1e-13 over the whole supported range.

use crate::error::{Error, Result};

/// Largest supported derivative order.
pub const MAX_POLYGAMMA_ORDER: u32 = 30;

/// Euler-Mascheroni constant.
pub const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// Bernoulli numbers B_2, B_4, ..., B_30.
const BERNOULLI: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

fn factorial_f64(n: u32) -> f64 {
    (2..=n as u64).map(|i| i as f64).product()
}

/// Natural log of the gamma function for `z > 0`.
pub fn ln_gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain { argument: z, reason: "ln_gamma needs z > 0" });
    }
    let mut shift = 0.0;
    let mut zz = z;
    while zz < 10.0 {
        shift += zz.ln();
        zz += 1.0;
    }
    let mut series = 0.0;
    let z2 = zz * zz;
    let mut zpow = zz;
    for (i, b) in BERNOULLI.iter().enumerate() {
        let n = (i + 1) as f64;
        series += b / (2.0 * n * (2.0 * n - 1.0) * zpow);
        zpow *= z2;
    }
    Ok((zz - 0.5) * zz.ln() - zz + LN_SQRT_2PI + series - shift)
}

/// Validated polygamma query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolygammaQuery {
    order: u32,
    argument: f64,
}

impl PolygammaQuery {
    pub fn new(order: u32, argument: f64) -> Result<Self> {
        if !(argument > 0.0) || !argument.is_finite() {
            return Err(Error::Domain { argument, reason: "polygamma needs z > 0" });
        }
        if order > MAX_POLYGAMMA_ORDER {
            return Err(Error::InvalidArgument(format!(
                "polygamma order {order} exceeds the cap {MAX_POLYGAMMA_ORDER}"
            )));
        }
        Ok(PolygammaQuery { order, argument })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn argument(&self) -> f64 {
        self.argument
    }

    pub fn evaluate(&self) -> f64 {
        polygamma_unchecked(self.order, self.argument)
    }
}

/// `psi^{(j)}(z)`, the j-th derivative of digamma; `j = 0` is digamma itself.
pub fn polygamma(j: u32, z: f64) -> Result<f64> {
    Ok(PolygammaQuery::new(j, z)?.evaluate())
}

fn polygamma_unchecked(j: u32, z: f64) -> f64 {
    // Shift past the asymptotic crossover; each step peels off one term of
    // the defining series.
    let threshold = 10.0 + j as f64;
    let mut shift_sum = 0.0;
    let mut zz = z;
    while zz < threshold {
        shift_sum += zz.powi(-(j as i32) - 1);
        zz += 1.0;
    }

    if j == 0 {
        // psi(z) = ln z - 1/(2z) - sum B_{2n} / (2n z^{2n}).
        let mut series = 0.0;
        let z2 = zz * zz;
        let mut zpow = z2;
        for (i, b) in BERNOULLI.iter().enumerate() {
            let two_n = 2.0 * (i + 1) as f64;
            series += b / (two_n * zpow);
            zpow *= z2;
        }
        return zz.ln() - 0.5 / zz - series - shift_sum;
    }

    // |psi^{(j)}(z)| = (j-1)!/z^j + j!/(2 z^{j+1})
    //                + sum_n B_{2n} (2n+j-1)!/((2n)! z^{2n+j}).
    let jf = j as f64;
    let fact_jm1 = factorial_f64(j - 1);
    let mut series = fact_jm1 / zz.powi(j as i32) + fact_jm1 * jf / (2.0 * zz.powi(j as i32 + 1));
    // ratio_n = (2n+j-1)!/(2n)!, built incrementally.
    let mut ratio = factorial_f64(j + 1) / 2.0;
    let z2 = zz * zz;
    let mut zpow = zz.powi(j as i32) * z2;
    for (i, b) in BERNOULLI.iter().enumerate() {
        series += b * ratio / zpow;
        let two_n = 2.0 * (i + 1) as f64;
        ratio *= (two_n + jf) * (two_n + jf + 1.0) / ((two_n + 1.0) * (two_n + 2.0));
        zpow *= z2;
    }

    let sign = if j % 2 == 0 { -1.0 } else { 1.0 };
    sign * (series + factorial_f64(j) * shift_sum)
}

/// Elementary envelope `(j-1)!/z^j + j!/z^{j+1}` dominating `|psi^{(j)}(z)|`.
pub fn polygamma_bound(j: u32, z: f64) -> Result<f64> {
    if j < 1 {
        return Err(Error::InvalidArgument("polygamma_bound needs j >= 1".into()));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain { argument: z, reason: "polygamma_bound needs z > 0" });
    }
    let fact = factorial_f64(j - 1);
    Ok(fact / z.powi(j as i32) + fact * j as f64 / z.powi(j as i32 + 1))
}

/// Partial sum `sum_{k=1}^{n} psi^{(j)}(k/2)`; for `j = 1` this grows like
/// `2 ln n + 2 (gamma + 1 + pi^2/8)`.
pub fn polygamma_half_sum(n: u32, j: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidArgument("half sum needs n >= 1".into()));
    }
    if j > MAX_POLYGAMMA_ORDER {
        return Err(Error::InvalidArgument(format!(
            "polygamma order {j} exceeds the cap {MAX_POLYGAMMA_ORDER}"
        )));
    }
    let mut total = 0.0;
    for k in 1..=n as u64 {
        total += polygamma_unchecked(j, k as f64 / 2.0);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn assert_rel(actual: f64, expected: f64, rtol: f64) {
        assert!(
            (actual - expected).abs() <= rtol * expected.abs().max(f64::MIN_POSITIVE),
            "actual {actual}, expected {expected}"
        );
    }

    #[test]
    fn digamma_known_values() {
        assert_rel(polygamma(0, 1.0).unwrap(), -EULER_MASCHERONI, 1e-14);
        assert_rel(
            polygamma(0, 0.5).unwrap(),
            -EULER_MASCHERONI - 2.0 * std::f64::consts::LN_2,
            1e-14,
        );
        // psi(4) = -gamma + 1 + 1/2 + 1/3.
        assert_rel(polygamma(0, 4.0).unwrap(), -EULER_MASCHERONI + 11.0 / 6.0, 1e-14);
    }

    #[test]
    fn trigamma_known_values() {
        assert_rel(polygamma(1, 1.0).unwrap(), PI * PI / 6.0, 1e-13);
        assert_rel(polygamma(1, 0.5).unwrap(), PI * PI / 2.0, 1e-13);
    }

    #[test]
    fn higher_orders_known_values() {
        // psi''(1) = -2 zeta(3), psi'''(1) = 6 zeta(4) = pi^4/15, psi'''(1/2) = pi^4.
        assert_rel(polygamma(2, 1.0).unwrap(), -2.404_113_806_319_188_57, 1e-13);
        assert_rel(polygamma(3, 1.0).unwrap(), PI.powi(4) / 15.0, 1e-13);
        assert_rel(polygamma(3, 0.5).unwrap(), PI.powi(4), 1e-13);
    }

    #[test]
    fn domain_errors() {
        assert!(polygamma(0, 0.0).is_err());
        assert!(polygamma(0, -1.0).is_err());
        assert!(polygamma(31, 1.0).is_err());
        assert!(polygamma_bound(0, 1.0).is_err());
        assert!(polygamma_half_sum(0, 1).is_err());
    }

    #[test]
    fn recurrence_holds() {
        // psi^{(j)}(z+1) - psi^{(j)}(z) = (-1)^j j! / z^{j+1}.
        for j in 0..=6u32 {
            for &z in &[0.1, 0.5, 1.0, 3.7, 50.0] {
                let lhs = polygamma(j, z + 1.0).unwrap() - polygamma(j, z).unwrap();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                let rhs = sign * factorial_f64(j) / z.powi(j as i32 + 1);
                assert!(
                    (lhs - rhs).abs() <= 1e-11 * rhs.abs().max(1e-12),
                    "j={j} z={z}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn bound_values() {
        assert_eq!(polygamma_bound(1, 1.0).unwrap(), 2.0);
        assert_eq!(polygamma_bound(2, 2.0).unwrap(), 0.5);
        assert_eq!(polygamma_bound(3, 1.0).unwrap(), 8.0);
    }

    #[test]
    fn bound_is_never_violated() {
        let mut z = 0.1;
        while z <= 1e4 {
            for j in 1..=6u32 {
                let val = polygamma(j, z).unwrap().abs();
                let bound = polygamma_bound(j, z).unwrap();
                assert!(val <= bound * (1.0 + 1e-13), "j={j} z={z}: {val} > {bound}");
            }
            z *= 1.3;
        }
    }

    #[test]
    fn sign_and_monotonicity() {
        for j in 1..=6u32 {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            let mut prev = f64::INFINITY;
            let mut z = 0.2;
            while z < 100.0 {
                let positive_part = sign * polygamma(j, z).unwrap();
                assert!(positive_part > 0.0, "j={j} z={z}");
                assert!(positive_part < prev, "j={j} z={z}");
                prev = positive_part;
                z *= 1.7;
            }
        }
    }

    /// Direct series for psi^{(j)} (j >= 1) with an Euler-Maclaurin tail.
    fn series_polygamma(j: u32, z: f64, terms: u64) -> f64 {
        let jf = j as f64;
        let mut sum = 0.0;
        for k in (0..terms).rev() {
            sum += (z + k as f64).powi(-(j as i32) - 1);
        }
        let edge = z + terms as f64;
        let tail = edge.powi(-(j as i32)) / jf + 0.5 * edge.powi(-(j as i32) - 1)
            + (jf + 1.0) / 12.0 * edge.powi(-(j as i32) - 2);
        let sign = if j % 2 == 0 { -1.0 } else { 1.0 };
        sign * factorial_f64(j) * (sum + tail)
    }

    #[test]
    fn matches_direct_series() {
        for j in 1..=6u32 {
            let mut z = 0.1;
            while z <= 1e4 {
                let oracle = series_polygamma(j, z, 100_000);
                let val = polygamma(j, z).unwrap();
                assert_rel(val, oracle, 1e-10);
                z *= 10.0;
            }
        }
    }

    #[test]
    fn high_orders_match_direct_series() {
        for j in [10u32, 19, 25, 30] {
            for &z in &[0.3, 1.0, 7.5, 64.0] {
                let oracle = series_polygamma(j, z, 200_000);
                let val = polygamma(j, z).unwrap();
                assert_rel(val, oracle, 1e-11);
            }
        }
    }

    #[test]
    fn half_sum_examples() {
        assert_rel(polygamma_half_sum(1, 1).unwrap(), PI * PI / 2.0, 1e-13);
        assert_rel(polygamma_half_sum(2, 1).unwrap(), 2.0 * PI * PI / 3.0, 1e-13);

        let n = 10_000u32;
        let asymptotic = 2.0 * (n as f64).ln()
            + 2.0 * (EULER_MASCHERONI + 1.0 + PI * PI / 8.0);
        let exact = polygamma_half_sum(n, 1).unwrap();
        assert!((exact - asymptotic).abs() < 1e-3, "{exact} vs {asymptotic}");
    }

    #[test]
    fn ln_gamma_known_values() {
        assert!(ln_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(ln_gamma(2.0).unwrap().abs() < 1e-14);
        assert_rel(ln_gamma(0.5).unwrap(), 0.5 * PI.ln(), 1e-13);
        assert_rel(ln_gamma(10.0).unwrap(), (362880.0f64).ln(), 1e-13);
        assert_rel(ln_gamma(101.0).unwrap(), (2..=100u64).map(|i| (i as f64).ln()).sum(), 1e-13);
        assert!(ln_gamma(0.0).is_err());
    }

    #[test]
    fn query_type_validates() {
        assert!(PolygammaQuery::new(2, 1.5).is_ok());
        assert!(PolygammaQuery::new(2, 0.0).is_err());
        assert!(PolygammaQuery::new(40, 1.0).is_err());
        let q = PolygammaQuery::new(1, 1.0).unwrap();
        assert_rel(q.evaluate(), PI * PI / 6.0, 1e-13);
    }
}
