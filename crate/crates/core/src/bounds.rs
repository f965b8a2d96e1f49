//! Moment-gap bounds driven by per-order cumulant growth envelopes.
//!
//! A growth envelope states `|G_j(Z)| <= C_j / delta^{j-2}` for a standardized
//! variable `Z` and all orders `j >= 2` (with `C_2 = 1` since `G_2(Z) = 1`).
//! Expanding `E Z^k` over compositions and bounding every non-Gaussian term by
//! the envelope yields an explicit bound on `|E Z^k - E N^k|`.

use crate::combinatorics::{compositions_min2, factorial_exact, multinomial, MAX_EXACT_ORDER};
use crate::error::{Error, Result};

/// How the per-order constants are stored.
#[derive(Debug, Clone, PartialEq)]
pub enum GrowthConstants {
    /// `C_j` directly; entry `i` holds the constant for order `j = i + 2`.
    Explicit(Vec<f64>),
    /// `C~_j` with an implicit `(j!)^{1+gamma}` factor; same indexing.
    Factorial(Vec<f64>),
}

/// Cumulant growth envelope `|G_j| <= C_{j,gamma} / delta^{j-2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthSpec {
    gamma: f64,
    delta: f64,
    constants: GrowthConstants,
}

impl GrowthSpec {
    pub fn new(gamma: f64, delta: f64, constants: GrowthConstants) -> Result<Self> {
        if !(gamma >= 0.0) {
            return Err(Error::InvalidArgument(format!("gamma = {gamma} must be >= 0")));
        }
        if !(delta > 0.0) {
            return Err(Error::InvalidArgument(format!("delta = {delta} must be positive")));
        }
        let list = match &constants {
            GrowthConstants::Explicit(c) | GrowthConstants::Factorial(c) => c,
        };
        if list.is_empty() || list.iter().any(|&c| !(c > 0.0) || !c.is_finite()) {
            return Err(Error::InvalidArgument("growth constants must be positive and finite".into()));
        }
        Ok(GrowthSpec { gamma, delta, constants })
    }

    /// Explicit constants `C_j` for `j = 2..`; the first entry is `C_2`.
    pub fn explicit(gamma: f64, delta: f64, constants_from_order2: Vec<f64>) -> Result<Self> {
        Self::new(gamma, delta, GrowthConstants::Explicit(constants_from_order2))
    }

    /// Factorial-form constants `C~_j` for `j = 2..` with the `(j!)^{1+gamma}`
    /// factor applied on evaluation.
    pub fn factorial(gamma: f64, delta: f64, constants_from_order2: Vec<f64>) -> Result<Self> {
        Self::new(gamma, delta, GrowthConstants::Factorial(constants_from_order2))
    }

    /// Envelope from per-order bounds `b_j >= |G_j(Z)|` for `j = 3..`,
    /// converted so that `C_j / delta^{j-2} = b_j`; `C_2` is pinned to 1.
    pub fn from_cumulant_bounds(delta: f64, bounds_from_order3: &[f64]) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::InvalidArgument(format!("delta = {delta} must be positive")));
        }
        let mut constants = vec![1.0];
        for (i, &b) in bounds_from_order3.iter().enumerate() {
            let j = i as i32 + 3;
            constants.push(b * delta.powi(j - 2));
        }
        Self::explicit(0.0, delta, constants)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// The effective constant `C_{j,gamma}` for order `j >= 2`.
    pub fn constant(&self, j: u32) -> Result<f64> {
        if j < 2 {
            return Err(Error::InvalidArgument(format!("no growth constant for order {j}")));
        }
        let idx = (j - 2) as usize;
        match &self.constants {
            GrowthConstants::Explicit(c) => c.get(idx).copied().ok_or_else(|| {
                Error::InvalidArgument(format!("growth constant for order {j} not provided"))
            }),
            GrowthConstants::Factorial(c) => {
                let base = c.get(idx).copied().ok_or_else(|| {
                    Error::InvalidArgument(format!("growth constant for order {j} not provided"))
                })?;
                let fact = factorial_exact(j)? as f64;
                Ok(fact.powf(1.0 + self.gamma) * base)
            }
        }
    }

    fn is_factorial(&self) -> bool {
        matches!(self.constants, GrowthConstants::Factorial(_))
    }

    fn raw_constant(&self, j: u32) -> Result<f64> {
        let idx = (j - 2) as usize;
        let list = match &self.constants {
            GrowthConstants::Explicit(c) | GrowthConstants::Factorial(c) => c,
        };
        list.get(idx).copied().ok_or_else(|| {
            Error::InvalidArgument(format!("growth constant for order {j} not provided"))
        })
    }
}

fn check_order(k: u32) -> Result<()> {
    if k > MAX_EXACT_ORDER {
        return Err(Error::OrderOverflow(k));
    }
    Ok(())
}

/// Composition coefficient
/// `A_{j,k} = (1/j!) sum_{k_1+...+k_j=k, k_i>=2} C_{k_1} ... C_{k_j} k!/(k_1!...k_j!)`.
pub fn coefficient_a(j: u32, k: u32, spec: &GrowthSpec) -> Result<f64> {
    check_order(k)?;
    if j < 1 {
        return Err(Error::InvalidArgument("j must be at least 1".into()));
    }
    if 2 * j > k {
        return Err(Error::InvalidArgument(format!("2j = {} exceeds k = {k}", 2 * j)));
    }
    let mut sum = 0.0;
    for comp in compositions_min2(k, j)? {
        let mut term = multinomial(k, &comp)? as f64;
        for &part in comp.parts() {
            term *= spec.constant(part)?;
        }
        sum += term;
    }
    Ok(sum / factorial_exact(j)? as f64)
}

/// Number of envelope terms in the gap bound for order `k`: `ceil(k/2) - 1`.
fn term_count(k: u32) -> u32 {
    (k + 1) / 2 - 1
}

/// Upper bound on `|E Z^k - E N^k|` for any `Z` matching the envelope:
/// `sum_{1 <= j <= ceil(k/2 - 1)} A_{j,k} delta^{-(k - 2j)}`.
pub fn moment_gap_bound(k: u32, spec: &GrowthSpec) -> Result<f64> {
    check_order(k)?;
    if k < 3 {
        return Err(Error::InvalidArgument(format!("k = {k} must be at least 3")));
    }
    let mut total = 0.0;
    for j in 1..=term_count(k) {
        total += coefficient_a(j, k, spec)? * spec.delta.powi(-((k - 2 * j) as i32));
    }
    Ok(total)
}

/// Coarser gap bound for factorial-form envelopes: the per-part factorials are
/// collapsed into a single `(k!)^{1+gamma}` factor, which is always an upper
/// bound for [`moment_gap_bound`] on the same constants.
pub fn factorial_growth_gap_bound(k: u32, spec: &GrowthSpec) -> Result<f64> {
    check_order(k)?;
    if k < 3 {
        return Err(Error::InvalidArgument(format!("k = {k} must be at least 3")));
    }
    if !spec.is_factorial() {
        return Err(Error::InvalidArgument(
            "factorial-growth bound needs factorial-form constants".into(),
        ));
    }
    let mut total = 0.0;
    for j in 1..=term_count(k) {
        let mut sum = 0.0;
        for comp in compositions_min2(k, j)? {
            let mut term = multinomial(k, &comp)? as f64;
            for &part in comp.parts() {
                term *= spec.raw_constant(part)?;
            }
            sum += term;
        }
        let a_tilde = sum / factorial_exact(j)? as f64;
        total += a_tilde * spec.delta.powi(-((k - 2 * j) as i32));
    }
    let fact_k = factorial_exact(k)? as f64;
    Ok(fact_k.powf(1.0 + spec.gamma) * total)
}

/// Leading-order form of the gap bound, valid for `delta >= 1`: returns the
/// decay exponent (2 for even `k`, 1 for odd `k`) and the crude constant
/// `sum_j A_{j,k}` so that `gap <= constant / delta^exponent`.
pub fn leading_bound(k: u32, spec: &GrowthSpec) -> Result<(u32, f64)> {
    check_order(k)?;
    if k < 3 {
        return Err(Error::InvalidArgument(format!("k = {k} must be at least 3")));
    }
    let exponent = if k % 2 == 0 { 2 } else { 1 };
    let mut constant = 0.0;
    for j in 1..=term_count(k) {
        constant += coefficient_a(j, k, spec)?;
    }
    Ok((exponent, constant))
}

/// Scale parameter for a normalized sum of independent variables under a
/// Bernstein-type moment condition: `sqrt(sum sigma_i^2) / (2 max(K, max sigma_i))`.
pub fn bernstein_delta(big_k: f64, sigmas: &[f64]) -> Result<f64> {
    if sigmas.is_empty() {
        return Err(Error::InvalidArgument("sigma list must be nonempty".into()));
    }
    if !(big_k > 0.0) {
        return Err(Error::InvalidArgument(format!("K = {big_k} must be positive")));
    }
    let mut sum_sq = 0.0;
    let mut max_sigma = 0.0f64;
    for &s in sigmas {
        if !(s > 0.0) {
            return Err(Error::InvalidArgument(format!("sigma = {s} must be positive")));
        }
        sum_sq += s * s;
        max_sigma = max_sigma.max(s);
    }
    Ok(sum_sq.sqrt() / (2.0 * big_k.max(max_sigma)))
}

/// Count, degree and amplitude data of a dependency structure, together with
/// the variance of the sum it controls.
#[derive(Debug, Clone, PartialEq)]
pub struct DnaSpec {
    /// Number of summands.
    pub n_count: f64,
    /// Maximal dependency degree plus one.
    pub degree: f64,
    /// Almost-sure bound on a single summand.
    pub amplitude: f64,
    /// Variance of the sum.
    pub sigma2: f64,
}

impl DnaSpec {
    pub fn new(n_count: f64, degree: f64, amplitude: f64, sigma2: f64) -> Result<Self> {
        if !(n_count > 0.0) || !(degree >= 1.0) || !(amplitude >= 0.0) || !(sigma2 > 0.0) {
            return Err(Error::InvalidArgument(
                "DNA spec needs n_count > 0, degree >= 1, amplitude >= 0, sigma2 > 0".into(),
            ));
        }
        Ok(DnaSpec { n_count, degree, amplitude, sigma2 })
    }

    /// Envelope equivalent to the per-order DNA bounds, with
    /// `delta = sigma / (A D)` and matching explicit constants.
    pub fn growth_spec(&self, max_order: u32) -> Result<GrowthSpec> {
        let bounds: Vec<f64> = (3..=max_order.max(3))
            .map(|j| dna_cumulant_bound(j, self))
            .collect::<Result<_>>()?;
        let delta = self.sigma2.sqrt() / (self.amplitude * self.degree);
        GrowthSpec::from_cumulant_bounds(delta, &bounds)
    }
}

/// Bound on the standardized cumulant `|G_j(Y/sigma)|` for a sum with the
/// given dependency data: `2^{j-1} j^{j-2} N D^{j-1} A^j / sigma^j`.
pub fn dna_cumulant_bound(j: u32, spec: &DnaSpec) -> Result<f64> {
    if j > MAX_EXACT_ORDER {
        return Err(Error::OrderOverflow(j));
    }
    if j < 3 {
        return Err(Error::InvalidArgument(format!("j = {j} must be at least 3")));
    }
    let jf = j as f64;
    let c_j = 2.0f64.powi(j as i32 - 1) * jf.powi(j as i32 - 2);
    let sigma = spec.sigma2.sqrt();
    Ok(c_j * spec.n_count * spec.degree.powi(j as i32 - 1) * spec.amplitude.powi(j as i32)
        / sigma.powi(j as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::gaussian_moment;
    use proptest::prelude::*;

    fn unit_spec(delta: f64, max_order: u32) -> GrowthSpec {
        GrowthSpec::explicit(0.0, delta, vec![1.0; (max_order - 1) as usize]).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        let spec = unit_spec(1.0, 8);
        assert_eq!(coefficient_a(1, 4, &spec).unwrap(), 1.0);
        assert_eq!(coefficient_a(2, 6, &spec).unwrap(), 25.0);

        // Only C_2 differs from one: A_{2,4} = c^2 * 3.
        let c = 0.7;
        let spec = GrowthSpec::explicit(0.0, 1.0, vec![c, 1.0, 1.0]).unwrap();
        let got = coefficient_a(2, 4, &spec).unwrap();
        assert!((got - 3.0 * c * c).abs() < 1e-14);

        assert!(coefficient_a(3, 5, &spec).is_err());
    }

    #[test]
    fn gap_bound_examples() {
        let spec = unit_spec(10.0, 6);
        assert!((moment_gap_bound(3, &spec).unwrap() - 0.1).abs() < 1e-15);
        assert!((moment_gap_bound(4, &spec).unwrap() - 0.01).abs() < 1e-15);

        // As delta grows, delta^2 * bound approaches the leading coefficient
        // A_{k/2-1, k} for every even order.
        for k in [4u32, 6, 8, 10] {
            let leading = coefficient_a(k / 2 - 1, k, &unit_spec(1.0, 10)).unwrap();
            for delta in [1e3, 1e6] {
                let spec = unit_spec(delta, 10);
                let scaled = moment_gap_bound(k, &spec).unwrap() * delta * delta;
                assert!((scaled - leading).abs() / leading <= 1e-6, "k={k} delta={delta}");
            }
        }
    }

    #[test]
    fn leading_bound_examples() {
        let spec = unit_spec(5.0, 6);
        assert_eq!(leading_bound(4, &spec).unwrap().0, 2);
        assert_eq!(leading_bound(5, &spec).unwrap().0, 1);
        let (exp, constant) = leading_bound(3, &spec).unwrap();
        assert_eq!((exp, constant), (1, 1.0));

        // Crude constant dominates the full bound once delta >= 1.
        let wide = unit_spec(5.0, 10);
        for k in 3..=10u32 {
            let (exp, constant) = leading_bound(k, &wide).unwrap();
            let direct = moment_gap_bound(k, &wide).unwrap();
            assert!(direct <= constant / wide.delta().powi(exp as i32) + 1e-12);
        }
    }

    #[test]
    fn bernstein_examples() {
        assert_eq!(bernstein_delta(1.0, &[1.0; 100]).unwrap(), 5.0);
        assert_eq!(bernstein_delta(2.0, &[1.0]).unwrap(), 0.25);
        assert_eq!(bernstein_delta(0.5, &[1.0; 400]).unwrap(), 10.0);
        assert!(bernstein_delta(1.0, &[]).is_err());
        assert!(bernstein_delta(1.0, &[0.0]).is_err());
    }

    #[test]
    fn dna_examples() {
        let spec = DnaSpec::new(1000.0, 10.0, 1.0, 1e4).unwrap();
        assert!((dna_cumulant_bound(3, &spec).unwrap() - 1.2).abs() < 1e-12);

        // Independent case: D = 1, N = sigma^2 = n gives 12 / sqrt(n).
        let n = 400.0;
        let spec = DnaSpec::new(n, 1.0, 1.0, n).unwrap();
        assert!((dna_cumulant_bound(3, &spec).unwrap() - 12.0 / n.sqrt()).abs() < 1e-12);

        let spec = DnaSpec::new(10.0, 2.0, 0.0, 4.0).unwrap();
        assert_eq!(dna_cumulant_bound(5, &spec).unwrap(), 0.0);
    }

    #[test]
    fn dna_growth_spec_reproduces_bounds() {
        let dna = DnaSpec::new(1140.0, 52.0, 0.875, 2.5e5).unwrap();
        let spec = dna.growth_spec(8).unwrap();
        for j in 3..=8u32 {
            let direct = dna_cumulant_bound(j, &dna).unwrap();
            let via_spec = spec.constant(j).unwrap() * spec.delta().powi(-(j as i32 - 2));
            assert!((direct - via_spec).abs() <= 1e-12 * direct.max(1e-300));
        }
    }

    #[test]
    fn factorial_and_explicit_paths_agree() {
        // With C_j = (j!)^{1+gamma} C~_j the two storages evaluate identically.
        let gamma = 0.6;
        let ctilde = [0.9, 1.3, 0.4, 2.0, 1.1];
        let explicit: Vec<f64> = ctilde
            .iter()
            .enumerate()
            .map(|(i, &c)| ((factorial_exact(i as u32 + 2).unwrap() as f64).powf(1.0 + gamma)) * c)
            .collect();
        let fact_spec = GrowthSpec::factorial(gamma, 7.0, ctilde.to_vec()).unwrap();
        let expl_spec = GrowthSpec::explicit(gamma, 7.0, explicit).unwrap();
        for k in 3..=6u32 {
            for j in 1..=(k / 2) {
                let a = coefficient_a(j, k, &fact_spec).unwrap();
                let b = coefficient_a(j, k, &expl_spec).unwrap();
                assert!((a - b).abs() <= 1e-12 * b.abs(), "j={j} k={k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn factorial_growth_bound_dominates() {
        let spec = GrowthSpec::factorial(1.0, 3.0, vec![1.0; 7]).unwrap();
        for k in 3..=8u32 {
            let tight = moment_gap_bound(k, &spec).unwrap();
            let coarse = factorial_growth_gap_bound(k, &spec).unwrap();
            assert!(coarse >= tight, "k={k}: coarse {coarse} < tight {tight}");
        }
        let explicit = unit_spec(3.0, 8);
        assert!(factorial_growth_gap_bound(4, &explicit).is_err());
    }

    #[test]
    fn non_gaussian_gap_is_positive_and_sound_for_gaussian() {
        // A variable that matches the envelope trivially (all higher cumulants
        // zero) has gap zero, so every bound must be nonnegative.
        let spec = unit_spec(2.0, 10);
        for k in 3..=10u32 {
            assert!(moment_gap_bound(k, &spec).unwrap() > 0.0);
            assert!(gaussian_moment(k) >= 0.0);
        }
    }

    proptest! {
        #[test]
        fn gap_bound_decreases_in_delta(
            k in 3u32..=10,
            d1 in 1.0f64..1e4,
            factor in 1.5f64..10.0,
        ) {
            let lo = unit_spec(d1, 10);
            let hi = unit_spec(d1 * factor, 10);
            prop_assert!(moment_gap_bound(k, &hi).unwrap() < moment_gap_bound(k, &lo).unwrap());
        }
    }
}
