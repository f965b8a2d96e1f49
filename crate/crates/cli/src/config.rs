//! Experiment configuration: a TOML file with one `[[exact]]` table per
//! closed-form model grid and one `[[sim]]` table per Monte Carlo grid.
//! Unknown keys are rejected so typos fail loudly instead of silently
//! changing the experiment.

use anyhow::{bail, Context};
use momentgap::exact_models::{laguerre_variance_regime, Beta, LaguerreRegime, ModelSpec};
use momentgap::simulators::{PatternGraph, SimModel, SumDist, UKernel};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: String,
    pub seed: u64,
    /// Moment orders to evaluate; each must lie in 3..=12.
    pub orders: Vec<u32>,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default, rename = "exact")]
    pub exact_entries: Vec<ExactEntry>,
    #[serde(default, rename = "sim")]
    pub sim_entries: Vec<SimEntry>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub csv: Option<String>,
    pub json: Option<String>,
}

/// Column count rule: a fixed number or a rule keyed off the grid `n`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PSpec {
    Fixed(u64),
    Rule(String),
}

impl PSpec {
    pub fn resolve(&self, n: u64) -> anyhow::Result<u64> {
        match self {
            PSpec::Fixed(v) => Ok(*v),
            PSpec::Rule(rule) => match rule.as_str() {
                "n" => Ok(n),
                "half" => Ok((n / 2).max(1)),
                "sqrt" => Ok((n as f64).sqrt().ceil() as u64),
                other => bail!("unknown p rule '{other}' (expected a number, \"n\", \"half\" or \"sqrt\")"),
            },
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactEntry {
    /// cbe | laguerre | jacobi | ginibre | parallelotope | simplex
    pub model: String,
    pub n: Vec<u64>,
    #[serde(default)]
    pub p: Option<PSpec>,
    #[serde(default)]
    pub n2: Option<u64>,
    #[serde(default)]
    pub beta: Option<f64>,
    /// small_p | proportional | full_rank | auto (default)
    #[serde(default)]
    pub regime: Option<String>,
    /// Scale variable for decay fits: n (default) | pn | logn
    #[serde(default)]
    pub fit_x: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimEntry {
    /// gnp | gnm | crossings | wishart | ustat | indep_sum
    pub model: String,
    pub n: Vec<u64>,
    pub replicates: u32,
    #[serde(default)]
    pub p: Option<PSpec>,
    #[serde(default)]
    pub edge_probability: Option<f64>,
    #[serde(default)]
    pub edges: Option<u64>,
    /// Alternative to `edges`: edge count as a fraction of all pairs.
    #[serde(default)]
    pub density: Option<f64>,
    #[serde(default)]
    pub pattern: Option<String>,
    #[serde(default)]
    pub kernel: Option<String>,
    #[serde(default)]
    pub dist: Option<String>,
    /// Common scale for the independent-sum sigmas (default 1).
    #[serde(default)]
    pub sigma: Option<f64>,
    #[serde(default)]
    pub fit_x: Option<String>,
}

/// Scale variable for decay fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitX {
    N,
    PTimesN,
    LogN,
}

impl FitX {
    fn parse(name: Option<&str>) -> anyhow::Result<Self> {
        match name {
            None | Some("n") => Ok(FitX::N),
            Some("pn") => Ok(FitX::PTimesN),
            Some("logn") => Ok(FitX::LogN),
            Some(other) => bail!("unknown fit_x '{other}' (expected n, pn or logn)"),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FitX::N => "n",
            FitX::PTimesN => "pn",
            FitX::LogN => "logn",
        }
    }

    pub fn value(self, n: u64, p: Option<f64>) -> Option<f64> {
        match self {
            FitX::N => Some(n as f64),
            FitX::PTimesN => p.map(|p| p * n as f64),
            FitX::LogN => Some((n as f64).ln()),
        }
    }
}

/// One grid point of an exact entry.
#[derive(Debug, Clone)]
pub struct ExactPoint {
    pub model: ModelSpec,
    pub regime: LaguerreRegime,
}

/// One grid point of a Monte Carlo entry.
#[derive(Debug, Clone)]
pub struct SimPoint {
    pub model: SimModel,
    pub replicates: u32,
}

#[derive(Debug, Clone)]
pub enum ResolvedGrid {
    Exact(Vec<ExactPoint>),
    Sim(Vec<SimPoint>),
}

#[derive(Debug, Clone)]
pub struct ResolvedEntry {
    pub label: String,
    pub fit_x: FitX,
    pub grid: ResolvedGrid,
}

#[derive(Debug, Clone)]
pub struct ResolvedExperiment {
    pub id: String,
    pub seed: u64,
    pub orders: Vec<u32>,
    pub output: OutputSpec,
    pub entries: Vec<ResolvedEntry>,
}

fn parse_regime(name: Option<&str>, n: u64, p: u64) -> anyhow::Result<LaguerreRegime> {
    match name {
        None | Some("auto") => Ok(laguerre_variance_regime(n, p)?.0),
        Some("small_p") => Ok(LaguerreRegime::SmallP),
        Some("proportional") => Ok(LaguerreRegime::Proportional { c: p as f64 / n as f64 }),
        Some("full_rank") => Ok(LaguerreRegime::FullRank),
        Some(other) => bail!("unknown regime '{other}'"),
    }
}

fn resolve_exact(entry: &ExactEntry) -> anyhow::Result<ResolvedEntry> {
    if entry.n.is_empty() {
        bail!("model '{}' has an empty n grid", entry.model);
    }
    let beta = || -> anyhow::Result<Beta> {
        let value = entry
            .beta
            .with_context(|| format!("model '{}' needs a beta", entry.model))?;
        Ok(Beta::from_f64(value)?)
    };
    let p_spec = |n: u64| -> anyhow::Result<u64> {
        entry
            .p
            .as_ref()
            .with_context(|| format!("model '{}' needs p", entry.model))?
            .resolve(n)
    };
    let mut grid = Vec::with_capacity(entry.n.len());
    for &n in &entry.n {
        let (model, regime) = match entry.model.as_str() {
            "cbe" => (ModelSpec::Cbe { n, beta: beta()? }, LaguerreRegime::FullRank),
            "laguerre" => {
                let p = p_spec(n)?;
                (
                    ModelSpec::LaguerreLogDet { n, p, beta: beta()? },
                    parse_regime(entry.regime.as_deref(), n, p)?,
                )
            }
            "jacobi" => {
                let p = p_spec(n)?;
                let n2 = entry.n2.with_context(|| "jacobi needs n2".to_string())?;
                (
                    ModelSpec::JacobiLogDet { p, n1: n, n2, beta: beta()? },
                    LaguerreRegime::FullRank,
                )
            }
            "ginibre" => (
                ModelSpec::GinibreLogDet { n, beta: beta()? },
                parse_regime(entry.regime.as_deref(), n, n)?,
            ),
            "parallelotope" => {
                let p = p_spec(n)?;
                (
                    ModelSpec::ParallelotopeLogVol { n, p },
                    parse_regime(entry.regime.as_deref(), n, p)?,
                )
            }
            "simplex" => {
                let p = p_spec(n)?;
                (
                    ModelSpec::SimplexLogVol { n, p },
                    parse_regime(entry.regime.as_deref(), n, p)?,
                )
            }
            other => bail!("unknown exact model '{other}'"),
        };
        model.validate()?;
        grid.push(ExactPoint { model, regime });
    }
    Ok(ResolvedEntry {
        label: entry.model.clone(),
        fit_x: FitX::parse(entry.fit_x.as_deref())?,
        grid: ResolvedGrid::Exact(grid),
    })
}

fn resolve_sim(entry: &SimEntry) -> anyhow::Result<ResolvedEntry> {
    if entry.n.is_empty() {
        bail!("model '{}' has an empty n grid", entry.model);
    }
    if entry.replicates == 0 {
        bail!("model '{}' needs at least one replicate", entry.model);
    }
    let pattern = || -> anyhow::Result<PatternGraph> {
        let name = entry
            .pattern
            .as_deref()
            .with_context(|| format!("model '{}' needs a pattern", entry.model))?;
        Ok(PatternGraph::named(name)?)
    };
    let mut grid = Vec::with_capacity(entry.n.len());
    for &n in &entry.n {
        let model = match entry.model.as_str() {
            "gnp" => {
                let p = entry
                    .edge_probability
                    .with_context(|| "gnp needs edge_probability".to_string())?;
                SimModel::GnpSubgraph { n, edge_probability: p, pattern: pattern()? }
            }
            "gnm" => {
                let total = n * n.saturating_sub(1) / 2;
                let edges = match (entry.edges, entry.density) {
                    (Some(m), None) => m,
                    (None, Some(d)) => {
                        if !(d > 0.0 && d < 1.0) {
                            bail!("gnm density {d} must be in (0,1)");
                        }
                        (d * total as f64).round() as u64
                    }
                    _ => bail!("gnm needs exactly one of edges or density"),
                };
                SimModel::GnmSubgraph { n, edges, pattern: pattern()? }
            }
            "crossings" => SimModel::Crossings { n },
            "wishart" => {
                let p = entry
                    .p
                    .as_ref()
                    .with_context(|| "wishart needs p".to_string())?
                    .resolve(n)?;
                SimModel::WishartLogDet { n, p }
            }
            "ustat" => {
                let kernel = UKernel::parse(entry.kernel.as_deref().unwrap_or("addmul"))?;
                SimModel::UStatistic { n, kernel }
            }
            "indep_sum" => {
                let dist = SumDist::parse(
                    entry.dist.as_deref().with_context(|| "indep_sum needs dist".to_string())?,
                )?;
                let sigma = entry.sigma.unwrap_or(1.0);
                SimModel::IndependentSum { sigmas: vec![sigma; n as usize], dist }
            }
            other => bail!("unknown sim model '{other}'"),
        };
        model.validate()?;
        grid.push(SimPoint { model, replicates: entry.replicates });
    }
    Ok(ResolvedEntry {
        label: entry.model.clone(),
        fit_x: FitX::parse(entry.fit_x.as_deref())?,
        grid: ResolvedGrid::Sim(grid),
    })
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let config: ExperimentConfig = toml::from_str(text).context("config parse error")?;
        Ok(config)
    }

    /// Validates everything up front; no work starts on a bad config.
    pub fn resolve(&self) -> anyhow::Result<ResolvedExperiment> {
        if self.id.is_empty() {
            bail!("experiment id must be nonempty");
        }
        if self.orders.is_empty() {
            bail!("orders must be nonempty");
        }
        for &k in &self.orders {
            if !(3..=12).contains(&k) {
                bail!("order {k} outside the supported range 3..=12");
            }
        }
        let mut orders = self.orders.clone();
        orders.sort_unstable();
        orders.dedup();
        if self.exact_entries.is_empty() && self.sim_entries.is_empty() {
            bail!("config has no exact or sim entries");
        }
        let mut entries = Vec::new();
        for entry in &self.exact_entries {
            entries.push(resolve_exact(entry)?);
        }
        for entry in &self.sim_entries {
            entries.push(resolve_sim(entry)?);
        }
        Ok(ResolvedExperiment {
            id: self.id.clone(),
            seed: self.seed,
            orders,
            output: self.output.clone(),
            entries,
        })
    }
}
