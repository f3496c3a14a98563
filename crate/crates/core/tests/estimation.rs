use std::sync::Mutex;

use tempograph_core::estimation::{
    confidence_interval, subgraph_size_schedule, CutoffMetric, CutoffValue, EstimateReport, EstimationConfig, Estimator,
    Executor, NoClock, Sequential,
};
use tempograph_core::metrics::registry::{
    betweenness_at_cutoff, closeness_at_cutoff, node_value, run_strategy, whole_value, MetricName, MetricParams, Strategy,
};
use tempograph_core::metrics::{betweenness, Bfs};
use tempograph_core::synth::generate_random_digraph;
use tempograph_core::{fixtures, Mode, NodeId, Snapshot};

/// Runs items on several threads in scrambled order, then reassembles.
struct Scrambled(usize);

impl Executor for Scrambled {
    fn map<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync,
    {
        let slots: Vec<Mutex<Option<R>>> = (0..n).map(|_| Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for w in 0..self.0 {
                let (f, slots) = (&f, &slots);
                scope.spawn(move || {
                    for i in (0..n).rev().filter(|i| i % self.0 == w) {
                        *slots[i].lock().unwrap() = Some(f(i));
                    }
                });
            }
        });
        slots.into_iter().map(|m| m.into_inner().unwrap().unwrap()).collect()
    }
}

fn capped(rounds: u32) -> EstimationConfig {
    EstimationConfig { max_rounds: Some(rounds), budget_seconds: None, ..Default::default() }
}

fn bits(r: &[EstimateReport]) -> Vec<[u64; 3]> {
    r.iter().map(|r| [r.mean.to_bits(), r.ci_low.to_bits(), r.ci_high.to_bits()]).collect()
}

#[test]
fn reports_do_not_depend_on_the_executor() {
    let g = generate_random_digraph(2500, 0.002, 17).unwrap();
    let cfg = EstimationConfig { sample_size: 300, n_subgraphs: 40, subgraph_start: 50, rng_seed: 99, ..capped(3) };
    let p = MetricParams::default();
    let cases = [
        (MetricName::Eccentricity, Strategy::RandomNodes),
        (MetricName::Silw, Strategy::RandomNodes),
        (MetricName::Density, Strategy::Subgraph),
        (MetricName::Closeness, Strategy::Cutoff),
    ];
    for (m, strategy) in cases {
        let seq = run_strategy(m, strategy, &g, &p, &Estimator::new(&cfg, &Sequential, &NoClock)).unwrap();
        for workers in [2, 8] {
            let par = run_strategy(m, strategy, &g, &p, &Estimator::new(&cfg, &Scrambled(workers), &NoClock)).unwrap();
            assert_eq!(seq, par, "{m}");
            assert_eq!(bits(&seq), bits(&par));
        }
    }
}

#[test]
fn seeds_change_samples() {
    let g = generate_random_digraph(3000, 0.003, 1).unwrap();
    let f = |s: &Snapshot, v: usize| Ok(s.degree(v, Mode::Out) as f64);
    let a = Estimator::sequential(&EstimationConfig { rng_seed: 1, ..capped(1) }).estimate_random_nodes(&g, &f).unwrap();
    let b = Estimator::sequential(&EstimationConfig { rng_seed: 2, ..capped(1) }).estimate_random_nodes(&g, &f).unwrap();
    assert_ne!(a.mean, b.mean);
}

#[test]
fn exhaustive_sampling_equals_exact_values() {
    for seed in 0..6 {
        let g = generate_random_digraph(60, 0.08, seed).unwrap();
        let p = MetricParams::default();
        let cfg = capped(1);
        let est = Estimator::sequential(&cfg);
        for &m in MetricName::ALL {
            let exact = whole_value(m, &g, &p);
            if m.has_node_values() {
                let r = run_strategy(m, Strategy::RandomNodes, &g, &p, &est);
                match (&exact, r) {
                    (Ok(e), Ok(r)) => {
                        assert!((r[0].mean - e).abs() <= 1e-12 * e.abs().max(1.0), "{m}");
                        assert_eq!(r[0].ci_low, r[0].ci_high);
                        assert!(r[0].converged);
                    }
                    (Err(_), Err(_)) => {}
                    (e, r) => panic!("{m}: {e:?} vs {r:?}"),
                }
            }
            let r = run_strategy(m, Strategy::Subgraph, &g, &p, &est);
            match (&exact, r) {
                (Ok(e), Ok(r)) => {
                    assert_eq!(r.len(), 1);
                    assert_eq!(r[0].mean, *e, "{m}");
                    assert_eq!(r[0].param, Some(60));
                }
                (Err(_), Err(_)) => {}
                (e, r) => panic!("{m}: {e:?} vs {r:?}"),
            }
        }
    }
}

#[test]
fn cutoff_beyond_diameter_equals_exact() {
    for seed in 0..5 {
        let g = generate_random_digraph(40, 0.06, seed).unwrap();
        let p = MetricParams::default();
        let d = tempograph_core::metrics::diameter(&g, Mode::Out).unwrap().max(1);
        let cfg = EstimationConfig { cutoff_start: d, ..capped(1) };
        let est = Estimator::sequential(&cfg);
        for m in [MetricName::Betweenness, MetricName::Closeness] {
            let r = run_strategy(m, Strategy::Cutoff, &g, &p, &est).unwrap();
            assert_eq!(r.len(), 1);
            assert_eq!(r[0].param, Some(d));
            let exact = whole_value(m, &g, &p).unwrap();
            assert!((r[0].mean - exact).abs() <= 1e-12 * exact.abs().max(1.0), "{m}");
        }
    }
}

#[test]
fn cutoff_two_on_path() {
    let p = MetricParams::default();
    let cv = betweenness_at_cutoff(&fixtures::p3(), 2, &p).unwrap();
    assert_eq!(cv, CutoffValue { value: 1.0 / 3.0, saturated: true });
    let b = betweenness(&fixtures::p3(), Some(2), true).unwrap();
    assert_eq!(b.get(NodeId(2)), Some(1.0));

    let cfg = EstimationConfig { cutoff_max: Some(3), ..capped(5) };
    let f = |s: &Snapshot, v: usize, c: u32| closeness_at_cutoff(s, v, c, &p);
    let r = Estimator::sequential(&cfg).estimate_cutoff(&fixtures::p3(), CutoffMetric::PerNode(&f)).unwrap();
    assert_eq!(r.iter().map(|r| r.param).collect::<Vec<_>>(), vec![Some(2), Some(3)]);
    assert_eq!(r[0].mean, r[1].mean);

    let whole = |s: &Snapshot, c: u32| betweenness_at_cutoff(s, c, &p);
    let r = Estimator::sequential(&capped(1)).estimate_cutoff(&fixtures::k4u(), CutoffMetric::WholeGraph(&whole)).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].param, Some(2));
}

#[test]
fn ci_covers_true_mean_degree() {
    let g = generate_random_digraph(4000, 0.002, 5).unwrap();
    let truth = (0..g.node_count()).map(|v| g.total_degree(v) as f64).sum::<f64>() / g.node_count() as f64;
    let p = MetricParams::default();
    let mut covered = 0;
    for seed in 0..100 {
        let cfg = EstimationConfig { sample_size: 100, rng_seed: seed, ..capped(1) };
        let f = |s: &Snapshot, v: usize| node_value(MetricName::DegreeDistribution, s, v, &p);
        let r = Estimator::sequential(&cfg).estimate_random_nodes(&g, &f).unwrap();
        assert_eq!(r.n_samples, 100);
        if r.ci_low <= truth && truth <= r.ci_high {
            covered += 1;
        }
    }
    assert!(covered >= 90, "coverage {covered}/100");
}

#[test]
fn ci_narrows_with_more_samples() {
    let g = generate_random_digraph(5000, 0.002, 8).unwrap();
    let f = |s: &Snapshot, v: usize| Ok(s.total_degree(v) as f64);
    let mean_width = |size: usize, rounds: u32| {
        let total: f64 = (0..30)
            .map(|seed| {
                let cfg = EstimationConfig { sample_size: size, rng_seed: seed, ci_ratio_threshold: 0.0, ..capped(rounds) };
                Estimator::sequential(&cfg).estimate_random_nodes(&g, &f).unwrap().ci_width()
            })
            .sum();
        total / 30.0
    };
    let (w1, w4, w16) = (mean_width(100, 1), mean_width(100, 4), mean_width(100, 16));
    assert!(w1 > w4 && w4 > w16, "{w1} {w4} {w16}");
}

#[test]
fn accumulated_rounds_report_all_samples() {
    let g = generate_random_digraph(5000, 0.002, 3).unwrap();
    let cfg = EstimationConfig { sample_size: 100, ci_ratio_threshold: 0.0, ..capped(4) };
    let r = Estimator::sequential(&cfg)
        .estimate_random_nodes(&g, &|s: &Snapshot, v: usize| Ok(s.total_degree(v) as f64))
        .unwrap();
    assert_eq!((r.rounds, r.n_samples, r.skipped), (4, 400, 0));
    assert!(!r.converged);
}

#[test]
fn per_node_failures_name_the_node() {
    let g = fixtures::star();
    let p = MetricParams::default();
    let cfg = capped(1);
    let f = |s: &Snapshot, v: usize| node_value(MetricName::Density, s, v, &p);
    let err = Estimator::sequential(&cfg).estimate_random_nodes(&g, &f).unwrap_err();
    assert!(err.to_string().contains("node 0"), "{err}");
}

#[test]
fn interval_example() {
    let v: Vec<f64> = (0..100).map(|i| (i % 2) as f64).collect();
    let (lo, hi) = confidence_interval(&v, 0.95).unwrap();
    assert!(((hi - lo) / 2.0 - 1.959964 * 0.502519 / 10.0).abs() < 1e-6);
    assert_eq!(subgraph_size_schedule(100, 1.5, 400), vec![100, 150, 225, 338, 400]);
}

#[test]
fn bfs_buffers_are_reusable() {
    let g = fixtures::p3();
    let mut bfs = Bfs::new(g.node_count());
    bfs.run(&g, 0, Mode::Out, Some(1));
    assert!(bfs.truncated());
    bfs.run(&g, 0, Mode::Out, None);
    assert!(!bfs.truncated());
    assert_eq!(bfs.dist(2), Some(2));
}
