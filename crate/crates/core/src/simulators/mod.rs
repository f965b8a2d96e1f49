//! Seeded Monte Carlo samplers for the combinatorial and random-matrix models,
//! with a reproducible batch runner.
//!
//! Replicate `i` of a batch always draws from the substream `(seed, i)`, so
//! serial and parallel execution produce bit-identical output.

pub mod crossings;
pub mod graph;
pub mod rng;
pub mod scalar;

pub use crossings::{
    distribution_mean_variance, enumerate_pair_partitions_crossings, sample_pair_partition,
    sample_pair_partition_crossings,
};
pub use graph::{
    gnp_triangle_moments_exact, sample_gnm_subgraph_count, sample_gnp_subgraph_count,
    AdjacencyGraph, PatternGraph,
};
pub use rng::SplitMix64;
pub use scalar::{
    sample_independent_sum, sample_ustatistic, sample_wishart_logdet, ustat_variance, SumDist,
    UKernel,
};

use crate::error::{Error, Result};
use rayon::prelude::*;

fn check_pattern(pattern: &PatternGraph) -> Result<()> {
    if !pattern.is_connected() {
        return Err(Error::InvalidArgument("counting patterns must be connected".into()));
    }
    Ok(())
}

/// One Monte Carlo model with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum SimModel {
    /// Pattern count in a Bernoulli-edge random graph.
    GnpSubgraph { n: u64, edge_probability: f64, pattern: PatternGraph },
    /// Pattern count in a uniform fixed-edge-count random graph.
    GnmSubgraph { n: u64, edges: u64, pattern: PatternGraph },
    /// Crossing number of a uniform pair partition of `2n` points.
    Crossings { n: u64 },
    /// Log-determinant of a Wishart matrix via the Bartlett factorization.
    WishartLogDet { n: u64, p: u64 },
    /// Degree-two U-statistic over standard normal inputs.
    UStatistic { n: u64, kernel: UKernel },
    /// Normalized sum of independent scaled variables.
    IndependentSum { sigmas: Vec<f64>, dist: SumDist },
}

impl SimModel {
    pub fn label(&self) -> &'static str {
        match self {
            SimModel::GnpSubgraph { .. } => "gnp",
            SimModel::GnmSubgraph { .. } => "gnm",
            SimModel::Crossings { .. } => "crossings",
            SimModel::WishartLogDet { .. } => "wishart",
            SimModel::UStatistic { .. } => "ustat",
            SimModel::IndependentSum { .. } => "indep_sum",
        }
    }

    /// Primary size parameter of the model.
    pub fn primary_size(&self) -> u64 {
        match self {
            SimModel::GnpSubgraph { n, .. }
            | SimModel::GnmSubgraph { n, .. }
            | SimModel::Crossings { n }
            | SimModel::WishartLogDet { n, .. }
            | SimModel::UStatistic { n, .. } => *n,
            SimModel::IndependentSum { sigmas, .. } => sigmas.len() as u64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SimModel::GnpSubgraph { n, edge_probability, pattern } => {
                if *n < 1 {
                    return Err(Error::InvalidArgument("graph needs at least one vertex".into()));
                }
                if !(*edge_probability > 0.0 && *edge_probability < 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "edge probability {edge_probability} must be in (0,1)"
                    )));
                }
                check_pattern(pattern)
            }
            SimModel::GnmSubgraph { n, edges, pattern } => {
                let total = n * (n.saturating_sub(1)) / 2;
                if *edges > total {
                    return Err(Error::InvalidArgument(format!(
                        "m = {edges} exceeds the {total} possible edges"
                    )));
                }
                check_pattern(pattern)
            }
            SimModel::Crossings { .. } => Ok(()),
            SimModel::WishartLogDet { n, p } => {
                if *p < 1 || p > n {
                    return Err(Error::InvalidArgument(format!("need 1 <= p <= n, got p={p} n={n}")));
                }
                Ok(())
            }
            SimModel::UStatistic { n, .. } => {
                if *n < 2 {
                    return Err(Error::InvalidArgument("U-statistic needs n >= 2".into()));
                }
                Ok(())
            }
            SimModel::IndependentSum { sigmas, .. } => {
                if sigmas.is_empty() || sigmas.iter().any(|s| !(*s > 0.0)) {
                    return Err(Error::InvalidArgument("sigmas must be nonempty and positive".into()));
                }
                Ok(())
            }
        }
    }

    /// One replicate on an explicit substream.
    pub fn sample(&self, rng: &mut SplitMix64) -> Result<f64> {
        match self {
            SimModel::GnpSubgraph { n, edge_probability, pattern } => {
                Ok(sample_gnp_subgraph_count(*n, *edge_probability, pattern, rng)? as f64)
            }
            SimModel::GnmSubgraph { n, edges, pattern } => {
                Ok(sample_gnm_subgraph_count(*n, *edges, pattern, rng)? as f64)
            }
            SimModel::Crossings { n } => Ok(sample_pair_partition_crossings(*n, rng) as f64),
            SimModel::WishartLogDet { n, p } => sample_wishart_logdet(*n, *p, rng),
            SimModel::UStatistic { n, kernel } => sample_ustatistic(*n, *kernel, rng),
            SimModel::IndependentSum { sigmas, dist } => {
                sample_independent_sum(sigmas, *dist, rng)
            }
        }
    }

    /// Exact mean and standard deviation of the statistic, where a closed form
    /// exists; used to standardize without estimation noise.
    pub fn exact_center_scale(&self) -> Result<Option<(f64, f64)>> {
        match self {
            SimModel::GnpSubgraph { n, edge_probability, pattern } => {
                if *pattern == PatternGraph::triangle() {
                    let (mean, var) = gnp_triangle_moments_exact(*n, *edge_probability)?;
                    Ok(Some((mean, var.sqrt())))
                } else {
                    Ok(None)
                }
            }
            SimModel::GnmSubgraph { .. } => Ok(None),
            SimModel::Crossings { n } => {
                if *n >= 1 && *n <= crossings::MAX_ENUMERATION_PAIRS {
                    let dist = enumerate_pair_partitions_crossings(*n)?;
                    let (mean, var) = distribution_mean_variance(&dist);
                    Ok(Some((mean, var.sqrt())))
                } else {
                    Ok(None)
                }
            }
            SimModel::WishartLogDet { n, p } => {
                use crate::exact_models::{model_cumulant, Beta, ModelSpec};
                let m = ModelSpec::LaguerreLogDet { n: *n, p: *p, beta: Beta::One };
                let mean = model_cumulant(&m, 1)?;
                let var = model_cumulant(&m, 2)?;
                Ok(Some((mean, var.sqrt())))
            }
            SimModel::UStatistic { n, kernel } => {
                let (s1, s2) = kernel.variances();
                Ok(Some((0.0, ustat_variance(*n, s1, s2)?.sqrt())))
            }
            SimModel::IndependentSum { .. } => Ok(Some((0.0, 1.0))),
        }
    }
}

/// A Monte Carlo run description: model, replicate count and master seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SimSpec {
    pub model: SimModel,
    pub replicates: u32,
    pub seed: u64,
}

impl SimSpec {
    pub fn new(model: SimModel, replicates: u32, seed: u64) -> Result<Self> {
        if replicates < 1 {
            return Err(Error::InvalidArgument("replicates must be at least 1".into()));
        }
        model.validate()?;
        Ok(SimSpec { model, replicates, seed })
    }

    /// Runs the batch. Replicates may execute on any number of threads; the
    /// output is identical regardless because replicate `i` owns substream `i`.
    pub fn run(&self) -> Result<SampleBatch> {
        let values: Vec<f64> = (0..self.replicates)
            .into_par_iter()
            .map(|i| {
                let mut rng = SplitMix64::substream(self.seed, u64::from(i));
                self.model.sample(&mut rng)
            })
            .collect::<Result<_>>()?;
        Ok(SampleBatch::new(self.clone(), values))
    }
}

/// Replicate values together with the run description that produced them and
/// the value bits for quick reproducibility checks.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub spec: SimSpec,
    pub values: Vec<f64>,
    pub rng_state_digest: u64,
}

impl SampleBatch {
    fn new(spec: SimSpec, values: Vec<f64>) -> Self {
        let rng_state_digest = digest_values(&values);
        SampleBatch { spec, values, rng_state_digest }
    }
}

/// FNV-1a over the IEEE bit patterns.
fn digest_values(values: &[f64]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for v in values {
        for byte in v.to_bits().to_le_bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    hash
}
