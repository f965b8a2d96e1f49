//! Exact integer combinatorics and the moment/cumulant conversions built on it.
//!
//! Factorials and multinomial coefficients are evaluated in 128-bit integers
//! and are exact up to order [`MAX_EXACT_ORDER`]; the conversions only move to
//! floating point where cumulant values themselves do.

use crate::dd::Dd;
use crate::error::{Error, Result};

/// Largest order for which factorials and multinomials are exact.
pub const MAX_EXACT_ORDER: u32 = 20;

/// An ordered tuple of positive integers with a fixed total.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: Vec<u32>,
    total: u32,
}

impl Composition {
    /// Builds a composition from its parts. Parts must be positive and nonempty.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("composition needs at least one part".into()));
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidArgument("composition parts must be positive".into()));
        }
        let total = parts.iter().sum();
        Ok(Composition { parts, total })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// Cumulants of a single random variable, 1-indexed: `value(1)` is the mean.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantSequence {
    values: Vec<f64>,
}

/// Raw moments of a single random variable, 1-indexed: `value(k)` is `E X^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    values: Vec<f64>,
}

macro_rules! sequence_impl {
    ($name:ident) => {
        impl $name {
            /// Wraps the 1-indexed values; entries must be finite.
            pub fn new(values: Vec<f64>) -> Result<Self> {
                if values.is_empty() {
                    return Err(Error::InvalidArgument(concat!(stringify!($name), " needs max_order >= 1").into()));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidArgument(concat!(stringify!($name), " entries must be finite").into()));
                }
                Ok($name { values })
            }

            pub fn max_order(&self) -> u32 {
                self.values.len() as u32
            }

            /// 1-indexed accessor; panics when `j` is out of `1..=max_order`.
            pub fn value(&self, j: u32) -> f64 {
                assert!(j >= 1 && j <= self.max_order(), "order {j} out of range");
                self.values[(j - 1) as usize]
            }

            pub fn values(&self) -> &[f64] {
                &self.values
            }
        }
    };
}

sequence_impl!(CumulantSequence);
sequence_impl!(MomentSequence);

impl CumulantSequence {
    /// Cumulants of the centred, unit-variance version of the variable:
    /// `(0, 1, G_3/G_2^{3/2}, ..., G_K/G_2^{K/2})`.
    pub fn standardized(&self) -> Result<CumulantSequence> {
        if self.max_order() < 2 {
            return Err(Error::InvalidArgument("standardization needs the variance".into()));
        }
        let var = self.value(2);
        if var <= 0.0 {
            return Err(Error::DegenerateVariance(var));
        }
        let sd = var.sqrt();
        let mut out = vec![0.0, 1.0];
        for j in 3..=self.max_order() {
            out.push(self.value(j) / sd.powi(j as i32));
        }
        CumulantSequence::new(out)
    }
}

/// Exact factorial, capped at [`MAX_EXACT_ORDER`].
pub fn factorial_exact(k: u32) -> Result<u128> {
    if k > MAX_EXACT_ORDER {
        return Err(Error::OrderOverflow(k));
    }
    Ok((2..=k as u128).product())
}

/// Exact binomial coefficient for small arguments (enough for order-20 work).
pub fn binomial_exact(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n as u64 - i) / (i + 1);
    }
    acc
}

fn extend_compositions(
    prefix: &mut Vec<u32>,
    remaining: u32,
    slots: u32,
    min_part: u32,
    out: &mut Vec<Vec<u32>>,
) {
    if slots == 1 {
        if remaining >= min_part {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
        }
        return;
    }
    if remaining < min_part * slots {
        return;
    }
    let hi = remaining - min_part * (slots - 1);
    for part in min_part..=hi {
        prefix.push(part);
        extend_compositions(prefix, remaining - part, slots - 1, min_part, out);
        prefix.pop();
    }
}

/// All ordered tuples of `j` parts `>= min_part` summing to `k`, lexicographic.
pub(crate) fn compositions_with_min(k: u32, j: u32, min_part: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if j == 0 {
        return out;
    }
    let mut prefix = Vec::with_capacity(j as usize);
    extend_compositions(&mut prefix, k, j, min_part, &mut out);
    out
}

/// Every ordered tuple `(k_1, ..., k_j)` with `k_i >= 2` and sum `k`, in
/// lexicographic order. Returns the empty list when `2j > k`.
pub fn compositions_min2(k: u32, j: u32) -> Result<Vec<Composition>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k = {k} must be at least 2")));
    }
    if j < 1 {
        return Err(Error::InvalidArgument("j must be at least 1".into()));
    }
    compositions_with_min(k, j, 2)
        .into_iter()
        .map(Composition::new)
        .collect()
}

fn multinomial_u128(k: u32, parts: &[u32]) -> Result<u128> {
    let sum: u32 = parts.iter().sum();
    if sum != k {
        return Err(Error::PartsMismatch { expected: k, found: sum });
    }
    let mut acc = factorial_exact(k)?;
    for &p in parts {
        acc /= factorial_exact(p)?;
    }
    Ok(acc)
}

/// Exact multinomial coefficient `k! / (k_1! ... k_j!)`.
pub fn multinomial(k: u32, parts: &Composition) -> Result<u128> {
    multinomial_u128(k, parts.parts())
}

/// `E N^k` for a standard normal: `(k-1)!!` for even `k`, zero for odd `k`.
pub fn gaussian_moment(k: u32) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    let mut acc = 1.0;
    let mut m = 1u64;
    while m + 1 < k as u64 {
        m += 2;
        acc *= m as f64;
    }
    acc
}

/// Raw moments `E X^1 .. E X^K` from cumulants, via the composition expansion
/// `E X^k = sum_j (1/j!) sum_{k_1+...+k_j=k} k!/(k_1!...k_j!) G_{k_1}...G_{k_j}`.
pub fn moments_from_cumulants(c: &CumulantSequence) -> Result<MomentSequence> {
    let max_order = c.max_order();
    if max_order > MAX_EXACT_ORDER {
        return Err(Error::OrderOverflow(max_order));
    }
    let mut values = Vec::with_capacity(max_order as usize);
    for k in 1..=max_order {
        let mut moment = Dd::zero();
        for j in 1..=k {
            let mut inner = Dd::zero();
            for comp in compositions_with_min(k, j, 1) {
                let mult = multinomial_u128(k, &comp)? as u64;
                let mut term = Dd::from_u64(mult);
                for &part in &comp {
                    term = term.mul(Dd::from_f64(c.value(part)));
                }
                inner = inner.add(term);
            }
            moment = moment.add(inner.div_f64(factorial_exact(j)? as f64));
        }
        values.push(moment.value());
    }
    MomentSequence::new(values)
}

/// Cumulants from raw moments; the exact inverse of [`moments_from_cumulants`]
/// via the recurrence `G_k = m_k - sum_{i<k} C(k-1, i-1) G_i m_{k-i}`.
pub fn cumulants_from_moments(m: &MomentSequence) -> Result<CumulantSequence> {
    let max_order = m.max_order();
    if max_order > MAX_EXACT_ORDER {
        return Err(Error::OrderOverflow(max_order));
    }
    let mut cumulants: Vec<Dd> = Vec::with_capacity(max_order as usize);
    for k in 1..=max_order {
        let mut acc = Dd::from_f64(m.value(k));
        for i in 1..k {
            let coeff = Dd::from_u64(binomial_exact(k - 1, i - 1));
            let term = coeff
                .mul(cumulants[(i - 1) as usize])
                .mul(Dd::from_f64(m.value(k - i)));
            acc = acc.sub(term);
        }
        cumulants.push(acc);
    }
    CumulantSequence::new(cumulants.into_iter().map(Dd::value).collect())
}
