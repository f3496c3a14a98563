//! Wall time of exact metric evaluations on growing snapshots.

use std::fmt;
use std::sync::mpsc;
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use tempograph_core::metrics::registry::{evaluate, MetricName, MetricParams};
use tempograph_core::Snapshot;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Seconds(f64),
    Timeout,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Seconds(s) => write!(f, "{s:.6}"),
            Cell::Timeout => f.write_str("timeout"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub metric: MetricName,
    pub v_count: usize,
    pub e_count: usize,
    pub cell: Cell,
}

fn timed(metric: MetricName, s: &Snapshot, params: &MetricParams) -> f64 {
    let start = Instant::now();
    // Failing evaluations still cost time; the value itself is not needed.
    let _ = std::hint::black_box(evaluate(metric, s, params));
    start.elapsed().as_secs_f64()
}

/// Times one exact evaluation per metric per snapshot.
///
/// Snapshots are expected in ascending size. With a timeout, each cell runs
/// on its own thread; once a metric exceeds it, that cell and every larger
/// snapshot for the metric are recorded as [`Cell::Timeout`]. An abandoned
/// evaluation keeps running in the background until it finishes.
pub fn bench_metrics(
    snapshots: &[Arc<Snapshot>],
    metrics: &[MetricName],
    params: &MetricParams,
    timeout: Option<Duration>,
) -> Vec<BenchRow> {
    let mut rows = Vec::with_capacity(snapshots.len() * metrics.len());
    for &metric in metrics {
        let mut timed_out = false;
        for s in snapshots {
            let cell = if timed_out {
                Cell::Timeout
            } else {
                match timeout {
                    None => Cell::Seconds(timed(metric, s, params)),
                    Some(limit) => {
                        let (tx, rx) = mpsc::channel();
                        let (snap, p) = (Arc::clone(s), params.clone());
                        thread::spawn(move || {
                            let _ = tx.send(timed(metric, &snap, &p));
                        });
                        match rx.recv_timeout(limit) {
                            Ok(secs) => Cell::Seconds(secs),
                            Err(_) => {
                                timed_out = true;
                                Cell::Timeout
                            }
                        }
                    }
                }
            };
            rows.push(BenchRow { metric, v_count: s.node_count(), e_count: s.edge_count(), cell });
        }
    }
    rows
}
