//! Name-based access to all 24 metrics, their default sampling strategy and
//! a uniform way to evaluate them exactly, per node, or at a cutoff.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::centrality::{eigenvector_centrality, hits_scores, pagerank, PageRankOptions};
use super::degree::{self, assortativity_degree, degree_stats, density, knn_average_degree, neighborhood_size, strength};
use super::motifs::motifs_randesu;
use super::paths::{self, betweenness_with_saturation, closeness, closeness_of, diameter, eccentricity_radius, Bfs};
use super::similarity;
use super::structure::{coreness, edge_connectivity, local_clustering, max_clique, transitivity};
use super::{MetricValue, NodeMap};
use crate::error::{EstimationError, MetricError};
use crate::estimation::{Clock, CutoffMetric, CutoffValue, EstimateReport, Estimator, Executor};
use crate::graph::{Mode, Snapshot};

macro_rules! metric_names {
    ($($variant:ident => $name:literal,)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum MetricName {
            $($variant,)*
        }

        impl MetricName {
            pub const ALL: &'static [MetricName] = &[$(MetricName::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(MetricName::$variant => $name,)*
                }
            }
        }

        impl FromStr for MetricName {
            type Err = UnknownMetric;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok(MetricName::$variant),)*
                    _ => Err(UnknownMetric),
                }
            }
        }
    };
}

metric_names! {
    Assortativity => "assortativity",
    Betweenness => "betweenness",
    Cliques => "cliques",
    Closeness => "closeness",
    Cocitation => "cocitation",
    Coreness => "coreness",
    DegreeDistribution => "degree",
    Density => "density",
    Diameter => "diameter",
    Eccentricity => "eccentricity",
    EdgeConnectivity => "edge_connectivity",
    EigenvectorCentrality => "eigenvector_centrality",
    AllShortestPaths => "all_shortest_paths",
    HubScore => "hub_score",
    Knn => "knn",
    MaxDegree => "max_degree",
    Motifs3 => "motifs3",
    Motifs4 => "motifs4",
    NeighborhoodSize => "neighborhood_size",
    PageRank => "pagerank",
    Silw => "silw",
    Strength => "strength",
    TransitivityLocal => "transitivity_local",
    TransitivityGlobal => "transitivity_global",
}

impl fmt::Display for MetricName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnknownMetric;

impl fmt::Display for UnknownMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown metric; known metrics: ")?;
        for (i, m) in MetricName::ALL.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(m.as_str())?;
        }
        Ok(())
    }
}

impl core::error::Error for UnknownMetric {}

/// How a metric is computed on a large snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Exact evaluation on the whole snapshot.
    Exact,
    RandomNodes,
    Subgraph,
    Cutoff,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Exact => "none",
            Strategy::RandomNodes => "rnd_nodes",
            Strategy::Subgraph => "subgraph",
            Strategy::Cutoff => "cutoff",
        }
    }
}

impl FromStr for Strategy {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" | "exact" => Ok(Strategy::Exact),
            "rnd_nodes" | "random_nodes" => Ok(Strategy::RandomNodes),
            "subgraph" => Ok(Strategy::Subgraph),
            "cutoff" => Ok(Strategy::Cutoff),
            _ => Err(MetricError::InvalidParameter("strategy must be none, rnd_nodes, subgraph or cutoff")),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl MetricName {
    /// Strategy used when the caller does not override it.
    pub fn default_strategy(self) -> Strategy {
        use MetricName::*;
        match self {
            Betweenness | Closeness => Strategy::Cutoff,
            Cliques | Diameter => Strategy::Subgraph,
            Cocitation | Eccentricity | AllShortestPaths | Silw => Strategy::RandomNodes,
            _ => Strategy::Exact,
        }
    }

    /// Direction handling when [`MetricParams::mode`] is unset. Metrics
    /// defined on the undirected projection ignore the mode.
    pub fn default_mode(self) -> Mode {
        use MetricName::*;
        match self {
            Betweenness | Closeness | AllShortestPaths | Diameter => Mode::Out,
            _ => Mode::All,
        }
    }

    /// Whether a single node's contribution can be evaluated on its own.
    pub fn has_node_values(self) -> bool {
        use MetricName::*;
        matches!(
            self,
            Cocitation
                | Silw
                | Eccentricity
                | AllShortestPaths
                | Closeness
                | Knn
                | NeighborhoodSize
                | Strength
                | DegreeDistribution
                | TransitivityLocal
        )
    }

    pub fn has_cutoff(self) -> bool {
        matches!(self, MetricName::Betweenness | MetricName::Closeness)
    }

    pub fn supports(self, strategy: Strategy) -> bool {
        match strategy {
            Strategy::Exact | Strategy::Subgraph => true,
            Strategy::RandomNodes => self.has_node_values(),
            Strategy::Cutoff => self.has_cutoff(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricParams {
    /// Overrides [`MetricName::default_mode`]. For betweenness and edge
    /// connectivity `Mode::All` selects the undirected variant.
    pub mode: Option<Mode>,
    pub neighborhood_order: u32,
    pub pagerank: PageRankOptions,
    /// Tolerance for HITS and eigenvector centrality.
    pub tol: f64,
    /// Per-level RAND-ESU probabilities; exact motif counts when unset.
    pub motif_probs: Option<Vec<f64>>,
    pub seed: u64,
}

impl Default for MetricParams {
    fn default() -> Self {
        MetricParams {
            mode: None,
            neighborhood_order: 2,
            pagerank: PageRankOptions::default(),
            tol: 1e-10,
            motif_probs: None,
            seed: 0,
        }
    }
}

impl MetricParams {
    pub fn mode_for(&self, name: MetricName) -> Mode {
        self.mode.unwrap_or(name.default_mode())
    }
}

fn transitivity_local_map(s: &Snapshot) -> NodeMap {
    let values: Vec<Option<f64>> = (0..s.node_count()).map(|v| local_clustering(s, v)).collect();
    NodeMap::from_dense_opt(s, &values)
}

fn mean_distances(s: &Snapshot, mode: Mode) -> NodeMap {
    let mut bfs = Bfs::new(s.node_count());
    let values: Vec<Option<f64>> = (0..s.node_count()).map(|v| paths::mean_distance_from(s, v, mode, &mut bfs)).collect();
    NodeMap::from_dense_opt(s, &values)
}

fn all_nodes_map(s: &Snapshot, f: impl Fn(usize) -> f64) -> NodeMap {
    let values: Vec<f64> = (0..s.node_count()).map(f).collect();
    NodeMap::from_dense(s, &values)
}

/// Exact value of a metric on the whole snapshot.
///
/// `all_shortest_paths` yields each node's mean distance to the nodes it
/// reaches, so its summary is the mean over sources of those means.
pub fn evaluate(name: MetricName, s: &Snapshot, p: &MetricParams) -> Result<MetricValue, MetricError> {
    use MetricName::*;
    use MetricValue::{Histogram, PerNode, Scalar};
    if s.node_count() == 0 {
        return Err(MetricError::EmptyGraph);
    }
    let mode = p.mode_for(name);
    Ok(match name {
        Assortativity => Scalar(assortativity_degree(s, mode)?),
        Betweenness => PerNode(paths::betweenness(s, None, mode != Mode::All)?),
        Cliques => Scalar(max_clique(s) as f64),
        Closeness => PerNode(closeness(s, None, mode)?),
        Cocitation => PerNode(all_nodes_map(s, |v| similarity::cocitation_mean_of(s, v))),
        Coreness => PerNode(coreness(s, mode)),
        DegreeDistribution => Histogram(degree_stats(s, mode)?.distribution),
        Density => Scalar(density(s)?),
        Diameter => Scalar(diameter(s, mode)? as f64),
        Eccentricity => PerNode(eccentricity_radius(s, mode)?.ecc),
        EdgeConnectivity => Scalar(edge_connectivity(s, mode != Mode::All)? as f64),
        EigenvectorCentrality => PerNode(eigenvector_centrality(s, p.tol)?),
        AllShortestPaths => PerNode(mean_distances(s, mode)),
        HubScore => PerNode(hits_scores(s, p.tol)?.hub),
        Knn => PerNode(knn_average_degree(s, mode)),
        MaxDegree => Scalar(degree_stats(s, mode)?.max as f64),
        Motifs3 => Scalar(motifs_randesu(s, 3, p.motif_probs.as_deref(), p.seed)?),
        Motifs4 => Scalar(motifs_randesu(s, 4, p.motif_probs.as_deref(), p.seed)?),
        NeighborhoodSize => PerNode(neighborhood_size(s, p.neighborhood_order, mode)),
        PageRank => PerNode(pagerank(s, p.pagerank)?),
        Silw => PerNode(all_nodes_map(s, |v| similarity::silw_mean_of(s, v, mode))),
        Strength => PerNode(strength(s, mode, None)?),
        TransitivityLocal => PerNode(transitivity_local_map(s)),
        TransitivityGlobal => Scalar(transitivity(s)?.global),
    })
}

/// The single number an exact evaluation reports.
pub fn whole_value(name: MetricName, s: &Snapshot, p: &MetricParams) -> Result<f64, MetricError> {
    evaluate(name, s, p)?.summary().ok_or(MetricError::Undefined("metric has no defined value on this graph"))
}

/// Contribution of node index `v`; the mean over all nodes where it is
/// defined equals [`whole_value`].
pub fn node_value(name: MetricName, s: &Snapshot, v: usize, p: &MetricParams) -> Result<f64, MetricError> {
    use MetricName::*;
    let mode = p.mode_for(name);
    match name {
        Cocitation => Ok(similarity::cocitation_mean_of(s, v)),
        Silw => Ok(similarity::silw_mean_of(s, v, mode)),
        Eccentricity => {
            if s.edge_count() == 0 {
                return Err(MetricError::NoEdges);
            }
            Ok(paths::eccentricity_of(s, v, mode, &mut Bfs::new(s.node_count())) as f64)
        }
        AllShortestPaths => paths::mean_distance_from(s, v, mode, &mut Bfs::new(s.node_count()))
            .ok_or(MetricError::Undefined("node reaches no other node")),
        Closeness => Ok(closeness_of(s, v, None, mode, &mut Bfs::new(s.node_count())).0),
        Knn => degree::knn_of(s, v, mode).ok_or(MetricError::Undefined("node has no neighbors")),
        NeighborhoodSize => {
            let mut bfs = Bfs::new(s.node_count());
            bfs.run(s, v, mode, Some(p.neighborhood_order));
            Ok(bfs.order().len() as f64)
        }
        Strength | DegreeDistribution => Ok(degree::counted_degree(s, v, mode) as f64),
        TransitivityLocal => local_clustering(s, v).ok_or(MetricError::Undefined("node degree below 2")),
        _ => Err(MetricError::UnsupportedStrategy("metric has no per-node values")),
    }
}

/// Mean betweenness at a path-length cutoff, with saturation.
pub fn betweenness_at_cutoff(s: &Snapshot, cutoff: u32, p: &MetricParams) -> Result<CutoffValue, MetricError> {
    if s.node_count() == 0 {
        return Err(MetricError::EmptyGraph);
    }
    let directed = p.mode_for(MetricName::Betweenness) != Mode::All;
    let (b, saturated) = betweenness_with_saturation(s, Some(cutoff), directed)?;
    Ok(CutoffValue { value: b.iter().sum::<f64>() / b.len() as f64, saturated })
}

/// Closeness of node index `v` at a path-length cutoff.
pub fn closeness_at_cutoff(s: &Snapshot, v: usize, cutoff: u32, p: &MetricParams) -> Result<CutoffValue, MetricError> {
    let mode = p.mode_for(MetricName::Closeness);
    let (value, truncated) = closeness_of(s, v, Some(cutoff), mode, &mut Bfs::new(s.node_count()));
    Ok(CutoffValue { value, saturated: !truncated })
}

/// Runs one metric on one snapshot with the given strategy. Exact runs
/// return a single zero-width report whose `n_samples` is the number of
/// values summarized.
pub fn run_strategy<E: Executor, C: Clock>(
    name: MetricName,
    strategy: Strategy,
    s: &Snapshot,
    p: &MetricParams,
    est: &Estimator<'_, E, C>,
) -> Result<Vec<EstimateReport>, EstimationError> {
    if !name.supports(strategy) {
        return Err(MetricError::UnsupportedStrategy(strategy.as_str()).into());
    }
    match strategy {
        Strategy::Exact => {
            let value = evaluate(name, s, p)?;
            let mean = value.summary().ok_or(MetricError::Undefined("metric has no defined value on this graph"))?;
            Ok(alloc::vec![EstimateReport::exact(mean, value.count(), None)])
        }
        Strategy::RandomNodes => {
            let f = |g: &Snapshot, v: usize| node_value(name, g, v, p);
            Ok(alloc::vec![est.estimate_random_nodes(s, &f)?])
        }
        Strategy::Subgraph => est.estimate_subgraphs(s, &|g: &Snapshot| whole_value(name, g, p)),
        Strategy::Cutoff => match name {
            MetricName::Betweenness => {
                let f = |g: &Snapshot, c: u32| betweenness_at_cutoff(g, c, p);
                est.estimate_cutoff(s, CutoffMetric::WholeGraph(&f))
            }
            _ => {
                let f = |g: &Snapshot, v: usize, c: u32| closeness_at_cutoff(g, v, c, p);
                est.estimate_cutoff(s, CutoffMetric::PerNode(&f))
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::EstimationConfig;
    use crate::fixtures::*;

    #[test]
    fn names_round_trip() {
        assert_eq!(MetricName::ALL.len(), 24);
        for &m in MetricName::ALL {
            assert_eq!(m.as_str().parse::<MetricName>(), Ok(m));
        }
        assert!("nope".parse::<MetricName>().is_err());
    }

    #[test]
    fn strategy_table() {
        use MetricName::*;
        let sampled = [
            (Betweenness, Strategy::Cutoff),
            (Closeness, Strategy::Cutoff),
            (Cliques, Strategy::Subgraph),
            (Diameter, Strategy::Subgraph),
            (Cocitation, Strategy::RandomNodes),
            (Eccentricity, Strategy::RandomNodes),
            (AllShortestPaths, Strategy::RandomNodes),
            (Silw, Strategy::RandomNodes),
        ];
        for &m in MetricName::ALL {
            let expected = sampled.iter().find(|e| e.0 == m).map_or(Strategy::Exact, |e| e.1);
            assert_eq!(m.default_strategy(), expected, "{m}");
            assert!(m.supports(m.default_strategy()));
        }
    }

    #[test]
    fn every_metric_evaluates_on_k4() {
        let g = k4u();
        for &m in MetricName::ALL {
            if m == MetricName::Assortativity {
                // K4 is regular
                assert!(evaluate(m, &g, &MetricParams::default()).is_err());
                continue;
            }
            let v = whole_value(m, &g, &MetricParams::default()).unwrap();
            assert!(v.is_finite(), "{m}");
        }
        assert_eq!(whole_value(MetricName::Density, &g, &MetricParams::default()), Ok(1.0));
        assert_eq!(whole_value(MetricName::Cliques, &g, &MetricParams::default()), Ok(4.0));
        assert_eq!(whole_value(MetricName::EdgeConnectivity, &g, &MetricParams::default()), Ok(3.0));
    }

    #[test]
    fn node_values_average_to_whole_value() {
        let g = crate::synth::generate_random_digraph(40, 0.1, 4).unwrap();
        let p = MetricParams::default();
        for &m in MetricName::ALL.iter().filter(|m| m.has_node_values()) {
            let vals: Vec<f64> = (0..g.node_count()).filter_map(|v| node_value(m, &g, v, &p).ok()).collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let exact = whole_value(m, &g, &p).unwrap();
            assert!((mean - exact).abs() <= 1e-9 * exact.abs().max(1.0), "{m}: {mean} vs {exact}");
        }
    }

    #[test]
    fn exact_strategy_report() {
        let cfg = EstimationConfig { max_rounds: Some(1), budget_seconds: None, ..Default::default() };
        let est = Estimator::sequential(&cfg);
        let r = run_strategy(MetricName::Coreness, Strategy::Exact, &c3(), &MetricParams::default(), &est).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!((r[0].mean, r[0].n_samples, r[0].converged), (2.0, 3, true));
        assert!(run_strategy(MetricName::Density, Strategy::Cutoff, &c3(), &MetricParams::default(), &est).is_err());
    }
}
