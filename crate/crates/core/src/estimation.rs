//! Budgeted sampling estimators.
//!
//! Three strategies share one stopping rule: keep drawing batches until the
//! normal-approximation confidence interval of the running mean is no wider
//! than `ci_ratio_threshold * |mean|`, or until the budget runs out.
//!
//! * random nodes: batches of `sample_size` nodes drawn without replacement;
//!   samples accumulate across batches.
//! * subgraphs: batches of `n_subgraphs` induced subgraphs on `k` uniformly
//!   chosen nodes, with `k` growing geometrically until it reaches `|V|`.
//! * cutoff: a path-length cutoff metric evaluated at increasing cutoffs.
//!
//! A budget is a wall-clock limit (read through a [`Clock`], checked between
//! batches only), a cap on the number of batches, or both. With a batch cap
//! and no clock the reports are bit-reproducible for a given seed, whatever
//! [`Executor`] evaluates the batches.
//!
//! Seeds for each batch are derived with [`derive_seed`]: SplitMix64 over
//! the base seed and a tag sequence `(strategy, level, batch)`.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{EstimationError, MetricError};
use crate::graph::Snapshot;

/// Name of the generator behind every seeded draw in this crate.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.3)";

/// Evaluates `f(0..n)` and returns the results in index order.
pub trait Executor: Sync {
    fn map<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync;
}

/// Runs everything on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync,
    {
        (0..n).map(f).collect()
    }
}

/// Monotone seconds counter used for wall-clock budgets.
pub trait Clock: Sync {
    fn now_secs(&self) -> f64;
}

/// A clock that never advances; only batch caps end an estimate.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now_secs(&self) -> f64 {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EstimationConfig {
    pub sample_size: usize,
    pub ci_level: f64,
    pub ci_ratio_threshold: f64,
    /// Wall-clock budget in seconds per estimate; `None` disables it.
    pub budget_seconds: Option<f64>,
    /// Maximum number of batches per estimate; `None` disables it.
    pub max_rounds: Option<u32>,
    pub n_subgraphs: usize,
    pub subgraph_start: usize,
    pub growth_factor: f64,
    pub cutoff_start: u32,
    /// Last cutoff to evaluate. Without it, escalation stops at the first
    /// cutoff that hides no path.
    pub cutoff_max: Option<u32>,
    pub rng_seed: u64,
}

impl Default for EstimationConfig {
    fn default() -> Self {
        EstimationConfig {
            sample_size: 1000,
            ci_level: 0.95,
            ci_ratio_threshold: 0.5,
            budget_seconds: Some(7200.0),
            max_rounds: None,
            n_subgraphs: 1000,
            subgraph_start: 100,
            growth_factor: 1.5,
            cutoff_start: 2,
            cutoff_max: None,
            rng_seed: 0,
        }
    }
}

impl EstimationConfig {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), EstimationError> {
        if self.sample_size < 2 {
            return Err(EstimationError::InvalidConfig("sample_size must be at least 2"));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(EstimationError::InvalidConfig("ci_level must lie in (0, 1)"));
        }
        if !(self.growth_factor > 1.0) {
            return Err(EstimationError::InvalidConfig("growth_factor must exceed 1"));
        }
        if !(self.ci_ratio_threshold >= 0.0) {
            return Err(EstimationError::InvalidConfig("ci_ratio_threshold must be non-negative"));
        }
        let has_clock = self.budget_seconds.is_some_and(|b| b > 0.0);
        let has_rounds = self.max_rounds.is_some_and(|r| r >= 1);
        if self.budget_seconds.is_some_and(|b| !(b > 0.0)) || self.max_rounds == Some(0) || !(has_clock || has_rounds) {
            return Err(EstimationError::InvalidConfig("need a positive budget_seconds or max_rounds >= 1"));
        }
        if self.n_subgraphs < 2 || self.subgraph_start < 1 {
            return Err(EstimationError::InvalidConfig("n_subgraphs >= 2 and subgraph_start >= 1 required"));
        }
        if self.cutoff_start < 1 {
            return Err(EstimationError::InvalidConfig("cutoff_start must be at least 1"));
        }
        Ok(())
    }
}

/// Outcome of one estimate.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EstimateReport {
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Valid samples behind the mean. Together with `skipped` this is
    /// `rounds x batch size`.
    pub n_samples: usize,
    pub rounds: u32,
    pub converged: bool,
    pub budget_spent: f64,
    /// Subgraph size or cutoff the report belongs to.
    pub param: Option<u32>,
    /// Samples on which the metric was undefined.
    pub skipped: usize,
}

impl EstimateReport {
    pub fn ci_width(&self) -> f64 {
        self.ci_high - self.ci_low
    }

    /// A zero-width report for an exactly computed value.
    pub fn exact(value: f64, n_samples: usize, param: Option<u32>) -> Self {
        EstimateReport {
            mean: value,
            ci_low: value,
            ci_high: value,
            n_samples,
            rounds: 1,
            converged: true,
            budget_spent: 0.0,
            param,
            skipped: 0,
        }
    }
}

/// Inverse of the standard normal CDF.
///
/// Acklam's rational approximation followed by one Halley step against
/// `erfc`, which brings it to full double precision.
pub fn normal_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00, 3.754408661907416e+00];
    const LOW: f64 = 0.02425;

    if !(p > 0.0 && p < 1.0) {
        return if p <= 0.0 { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    let x = if p < LOW {
        let q = libm::sqrt(-2.0 * libm::log(p));
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = libm::sqrt(-2.0 * libm::log(1.0 - p));
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let e = 0.5 * libm::erfc(-x / core::f64::consts::SQRT_2) - p;
    let u = e * libm::sqrt(2.0 * core::f64::consts::PI) * libm::exp(x * x / 2.0);
    x - u / (1.0 + x * u / 2.0)
}

/// Two-sided normal-approximation interval `mean +- z * sd / sqrt(n)` with
/// the sample standard deviation.
pub fn confidence_interval(values: &[f64], level: f64) -> Result<(f64, f64), EstimationError> {
    if values.len() < 2 {
        return Err(EstimationError::TooFewValues { needed: 2, got: values.len() });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(EstimationError::NonFinite);
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(EstimationError::InvalidConfig("ci_level must lie in (0, 1)"));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let sd = libm::sqrt(ss / (n - 1.0));
    let half = normal_quantile(0.5 + level / 2.0) * sd / libm::sqrt(n);
    Ok((mean - half, mean + half))
}

/// Subgraph sizes visited from `start`: each is `round(prev * growth)`,
/// and the last one is capped at `node_count`.
pub fn subgraph_size_schedule(start: usize, growth: f64, node_count: usize) -> Vec<usize> {
    let mut sizes = Vec::new();
    if node_count == 0 {
        return sizes;
    }
    let mut k = start.max(1);
    loop {
        if k >= node_count {
            sizes.push(node_count);
            return sizes;
        }
        sizes.push(k);
        let next = libm::round(k as f64 * growth) as usize;
        k = next.max(k + 1);
    }
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Expands a base seed into an independent stream seed for a tag path.
pub fn derive_seed(base: u64, tags: &[u64]) -> u64 {
    tags.iter().fold(splitmix64(base), |h, &t| splitmix64(h ^ splitmix64(t)))
}

/// 64-bit FNV-1a of a name, for use as a [`derive_seed`] tag.
pub fn name_tag(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

const TAG_NODES: u64 = 1;
const TAG_SUBGRAPH: u64 = 2;
const TAG_CUTOFF: u64 = 3;

/// A value from a cutoff-limited evaluation. `saturated` means the cutoff
/// hid no node, so larger cutoffs give the same value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffValue {
    pub value: f64,
    pub saturated: bool,
}

/// Shapes of cutoff-parameterized metrics.
pub enum CutoffMetric<'m> {
    /// One evaluation of the whole graph per cutoff.
    WholeGraph(&'m (dyn Fn(&Snapshot, u32) -> Result<CutoffValue, MetricError> + Sync)),
    /// A per-node value, estimated with random nodes at each cutoff.
    PerNode(&'m (dyn Fn(&Snapshot, usize, u32) -> Result<CutoffValue, MetricError> + Sync)),
}

struct Budget<'c, C: Clock> {
    clock: &'c C,
    started: f64,
    limit_secs: Option<f64>,
    max_rounds: Option<u32>,
    rounds: u32,
}

impl<C: Clock> Budget<'_, C> {
    fn spent(&self) -> f64 {
        self.clock.now_secs() - self.started
    }

    fn exhausted(&self) -> bool {
        self.max_rounds.is_some_and(|m| self.rounds >= m) || self.limit_secs.is_some_and(|l| self.spent() >= l)
    }
}

/// Running sample of one estimate.
#[derive(Default)]
struct Accumulator {
    values: Vec<f64>,
    skipped: usize,
    rounds: u32,
    any_truncated: bool,
    /// The whole population was evaluated; the mean is exact.
    exhaustive: bool,
}

impl Accumulator {
    fn mean(&self) -> Option<f64> {
        (!self.values.is_empty()).then(|| self.values.iter().sum::<f64>() / self.values.len() as f64)
    }

    /// Interval and convergence for the current sample.
    fn interval(&self, cfg: &EstimationConfig) -> Result<Option<(f64, f64, f64, bool)>, EstimationError> {
        let Some(mean) = self.mean() else {
            return Ok(None);
        };
        if self.exhaustive {
            return Ok(Some((mean, mean, mean, true)));
        }
        if self.values.len() < 2 {
            return Ok(Some((mean, mean, mean, false)));
        }
        let (lo, hi) = confidence_interval(&self.values, cfg.ci_level)?;
        let width = hi - lo;
        let converged = width <= 1e-9 || width <= libm::fabs(mean) * cfg.ci_ratio_threshold;
        Ok(Some((mean, lo, hi, converged)))
    }

    fn report<C: Clock>(&self, cfg: &EstimationConfig, budget: &Budget<'_, C>, param: Option<u32>) -> Result<EstimateReport, EstimationError> {
        let (mean, ci_low, ci_high, converged) = self.interval(cfg)?.ok_or(EstimationError::NoValidSamples)?;
        Ok(EstimateReport {
            mean,
            ci_low,
            ci_high,
            n_samples: self.values.len(),
            rounds: self.rounds,
            converged,
            budget_spent: budget.spent(),
            param,
            skipped: self.skipped,
        })
    }
}

/// The sampling framework bound to a configuration, an executor for batch
/// evaluation, and a clock for the wall-clock budget.
pub struct Estimator<'a, E: Executor, C: Clock> {
    cfg: &'a EstimationConfig,
    exec: &'a E,
    clock: &'a C,
}

impl<'a> Estimator<'a, Sequential, NoClock> {
    /// Single-threaded estimator without a clock; `cfg` should cap rounds.
    pub fn sequential(cfg: &'a EstimationConfig) -> Self {
        Estimator { cfg, exec: &Sequential, clock: &NoClock }
    }
}

impl<'a, E: Executor, C: Clock> Estimator<'a, E, C> {
    pub fn new(cfg: &'a EstimationConfig, exec: &'a E, clock: &'a C) -> Self {
        Estimator { cfg, exec, clock }
    }

    pub fn config(&self) -> &EstimationConfig {
        self.cfg
    }

    fn budget(&self) -> Budget<'a, C> {
        Budget {
            clock: self.clock,
            started: self.clock.now_secs(),
            limit_secs: self.cfg.budget_seconds,
            max_rounds: self.cfg.max_rounds,
            rounds: 0,
        }
    }

    /// Random-node estimate of the mean of a per-node metric.
    ///
    /// When `sample_size >= |V|` every node is evaluated once in index order
    /// and the report is exact. Nodes where the metric is undefined are
    /// skipped; any other failure aborts with the node id.
    pub fn estimate_random_nodes<F>(&self, s: &Snapshot, metric: &F) -> Result<EstimateReport, EstimationError>
    where
        F: Fn(&Snapshot, usize) -> Result<f64, MetricError> + Sync,
    {
        self.cfg.validate()?;
        let mut budget = self.budget();
        let node_fn = |v: usize| metric(s, v).map(|value| CutoffValue { value, saturated: true });
        let acc = self.node_batches(s, &mut budget, &[TAG_NODES], &node_fn)?;
        acc.report(self.cfg, &budget, None)
    }

    fn node_batches<F>(
        &self,
        s: &Snapshot,
        budget: &mut Budget<'a, C>,
        tags: &[u64],
        metric: &F,
    ) -> Result<Accumulator, EstimationError>
    where
        F: Fn(usize) -> Result<CutoffValue, MetricError> + Sync,
    {
        let n = s.node_count();
        if n == 0 {
            return Err(EstimationError::GraphTooSmall { nodes: 0, required: 1 });
        }
        let mut acc = Accumulator::default();
        let absorb = |acc: &mut Accumulator, nodes: &[usize], results: Vec<Result<CutoffValue, MetricError>>| {
            for (&v, r) in nodes.iter().zip(results) {
                match r {
                    Ok(cv) => {
                        if !cv.value.is_finite() {
                            return Err(EstimationError::NonFinite);
                        }
                        acc.values.push(cv.value);
                        acc.any_truncated |= !cv.saturated;
                    }
                    Err(e) if e.is_undefined() => acc.skipped += 1,
                    Err(e) => return Err(EstimationError::NodeMetric { node: s.id(v), source: e }),
                }
            }
            Ok(())
        };

        if self.cfg.sample_size >= n {
            let nodes: Vec<usize> = (0..n).collect();
            let results = self.exec.map(n, metric);
            absorb(&mut acc, &nodes, results)?;
            acc.rounds = 1;
            acc.exhaustive = true;
            budget.rounds += 1;
            if acc.values.is_empty() {
                return Err(EstimationError::NoValidSamples);
            }
            return Ok(acc);
        }

        loop {
            let mut path: Vec<u64> = tags.to_vec();
            path.push(acc.rounds as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.cfg.rng_seed, &path));
            let nodes = rand::seq::index::sample(&mut rng, n, self.cfg.sample_size).into_vec();
            let results = self.exec.map(nodes.len(), |i| metric(nodes[i]));
            absorb(&mut acc, &nodes, results)?;
            acc.rounds += 1;
            budget.rounds += 1;

            let converged = matches!(acc.interval(self.cfg)?, Some((_, _, _, true)));
            if converged || budget.exhausted() {
                break;
            }
        }
        if acc.values.is_empty() {
            return Err(EstimationError::NoValidSamples);
        }
        Ok(acc)
    }

    /// Escalating random-subgraph estimate of a whole-graph metric, one
    /// report per subgraph size. Reaching `|V|` ends with one exact
    /// evaluation of the full graph; running out of budget ends earlier.
    pub fn estimate_subgraphs<F>(&self, s: &Snapshot, metric: &F) -> Result<Vec<EstimateReport>, EstimationError>
    where
        F: Fn(&Snapshot) -> Result<f64, MetricError> + Sync,
    {
        self.cfg.validate()?;
        let n = s.node_count();
        if n == 0 || (n < self.cfg.subgraph_start && n < 1) {
            return Err(EstimationError::GraphTooSmall { nodes: n, required: 1 });
        }
        let mut budget = self.budget();
        let mut reports = Vec::new();

        for (level, k) in subgraph_size_schedule(self.cfg.subgraph_start, self.cfg.growth_factor, n)
            .into_iter()
            .enumerate()
        {
            if k >= n {
                match metric(s) {
                    Ok(v) if v.is_finite() => {
                        budget.rounds += 1;
                        let mut r = EstimateReport::exact(v, 1, Some(k as u32));
                        r.budget_spent = budget.spent();
                        reports.push(r);
                    }
                    Ok(_) => return Err(EstimationError::NonFinite),
                    Err(e) if reports.is_empty() => return Err(e.into()),
                    Err(_) => {}
                }
                break;
            }

            let mut acc = Accumulator::default();
            loop {
                let path = [TAG_SUBGRAPH, level as u64, acc.rounds as u64];
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.cfg.rng_seed, &path));
                let node_sets: Vec<Vec<usize>> = (0..self.cfg.n_subgraphs)
                    .map(|_| {
                        let mut v = rand::seq::index::sample(&mut rng, n, k).into_vec();
                        v.sort_unstable();
                        v
                    })
                    .collect();
                let results = self.exec.map(node_sets.len(), |i| metric(&s.induced_subgraph(&node_sets[i])));
                for r in results {
                    match r {
                        Ok(v) if v.is_finite() => acc.values.push(v),
                        _ => acc.skipped += 1,
                    }
                }
                acc.rounds += 1;
                budget.rounds += 1;
                let converged = matches!(acc.interval(self.cfg)?, Some((_, _, _, true)));
                if converged || budget.exhausted() {
                    break;
                }
            }
            if let Some((mean, ci_low, ci_high, converged)) = acc.interval(self.cfg)? {
                reports.push(EstimateReport {
                    mean,
                    ci_low,
                    ci_high,
                    n_samples: acc.values.len(),
                    rounds: acc.rounds,
                    converged,
                    budget_spent: budget.spent(),
                    param: Some(k as u32),
                    skipped: acc.skipped,
                });
            }
            if budget.exhausted() {
                break;
            }
        }
        if reports.is_empty() {
            return Err(EstimationError::NoValidSamples);
        }
        Ok(reports)
    }

    /// Evaluates a cutoff metric at `cutoff_start, cutoff_start + 1, ...`,
    /// one report per cutoff, until the budget is spent, `cutoff_max` is
    /// passed, or (without `cutoff_max`) a cutoff hides nothing.
    pub fn estimate_cutoff(&self, s: &Snapshot, metric: CutoffMetric<'_>) -> Result<Vec<EstimateReport>, EstimationError> {
        self.cfg.validate()?;
        let mut budget = self.budget();
        let mut reports = Vec::new();
        let mut cutoff = self.cfg.cutoff_start;
        loop {
            if self.cfg.cutoff_max.is_some_and(|m| cutoff > m) {
                break;
            }
            let saturated = match &metric {
                CutoffMetric::WholeGraph(f) => {
                    let cv = f(s, cutoff)?;
                    if !cv.value.is_finite() {
                        return Err(EstimationError::NonFinite);
                    }
                    budget.rounds += 1;
                    let mut r = EstimateReport::exact(cv.value, 1, Some(cutoff));
                    r.budget_spent = budget.spent();
                    reports.push(r);
                    cv.saturated
                }
                CutoffMetric::PerNode(f) => {
                    let node_fn = |v: usize| f(s, v, cutoff);
                    let acc = self.node_batches(s, &mut budget, &[TAG_CUTOFF, cutoff as u64], &node_fn)?;
                    reports.push(acc.report(self.cfg, &budget, Some(cutoff))?);
                    !acc.any_truncated
                }
            };
            let done_exploring = saturated && self.cfg.cutoff_max.is_none();
            if done_exploring || budget.exhausted() || cutoff == u32::MAX {
                break;
            }
            cutoff += 1;
        }
        Ok(reports)
    }
}
