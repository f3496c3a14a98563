//! Cumulative eras over a temporal edge list and per-era metric runs.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{EstimationError, TimelineError};
use crate::estimation::{derive_seed, name_tag, Clock, EstimateReport, EstimationConfig, Estimator, Executor};
use crate::graph::{Snapshot, TemporalEdgeList};
use crate::inference::{CreationIndex, TimeUnit};
use crate::metrics::registry::{run_strategy, MetricName, MetricParams, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Granularity {
    PerMonth,
    PerDay,
    PerEdgeCount(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EraSpec {
    pub granularity: Granularity,
    /// Inclusive range: epoch seconds for calendar granularities, edge
    /// indices for edge counts. Defaults to everything.
    pub range: Option<(u64, u64)>,
}

impl EraSpec {
    pub fn new(granularity: Granularity) -> Self {
        EraSpec { granularity, range: None }
    }
}

/// One cumulative era: the snapshot of the first `end` edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Era {
    pub label: String,
    pub end: usize,
}

/// Days since 1970-01-01 to a proleptic Gregorian (year, month, day).
fn civil_from_days(z: i64) -> (i64, u32, u32) {
    let z = z + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let m = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    let y = yoe + era * 400 + i64::from(m <= 2);
    (y, m, d)
}

fn days_from_civil(y: i64, m: u32, d: u32) -> i64 {
    let y = if m <= 2 { y - 1 } else { y };
    let era = y.div_euclid(400);
    let yoe = y.rem_euclid(400);
    let mp = (m as i64 + 9) % 12;
    let doy = (153 * mp + 2) / 5 + d as i64 - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146_097 + doe - 719_468
}

const DAY: u64 = 86_400;

/// Era boundaries as edge counts, with labels.
///
/// Eras are cumulative. Calendar eras need a creation index with epoch
/// timestamps; each month or day between the range ends yields an era,
/// labelled `YYYY-MM` or `YYYY-MM-DD`. Edge-count eras end after every `k`
/// edges of the range plus a final partial era, labelled by their end.
pub fn split_eras(edges: &TemporalEdgeList, spec: &EraSpec, calendar: Option<&CreationIndex>) -> Result<Vec<Era>, TimelineError> {
    match spec.granularity {
        Granularity::PerEdgeCount(k) => {
            if k == 0 {
                return Err(TimelineError::ZeroStep);
            }
            let (start, end) = match spec.range {
                Some((a, b)) => (a as usize, (b as usize).min(edges.edge_count())),
                None => (0, edges.edge_count()),
            };
            if start >= end {
                return Err(TimelineError::EmptyRange);
            }
            let mut eras = Vec::new();
            let mut b = start;
            while b < end {
                b = (b + k).min(end);
                eras.push(Era { label: format!("{b}"), end: b });
            }
            Ok(eras)
        }
        Granularity::PerMonth | Granularity::PerDay => {
            if calendar.map(CreationIndex::unit) != Some(TimeUnit::EpochSeconds) {
                return Err(TimelineError::CalendarRequired);
            }
            let (first, last) = match (spec.range, edges.edges().first(), edges.max_time()) {
                (Some(r), _, _) => r,
                (None, Some(e), Some(m)) => (e.est_time, m),
                _ => return Err(TimelineError::EmptyRange),
            };
            if first > last {
                return Err(TimelineError::EmptyRange);
            }
            let cap = edges.count_until(last);
            let per_day = spec.granularity == Granularity::PerDay;
            let mut eras = Vec::new();
            let mut day = (first / DAY) as i64;
            let last_day = (last / DAY) as i64;
            while day <= last_day {
                let (y, m, d) = civil_from_days(day);
                let (next, label) = if per_day {
                    (day + 1, format!("{y:04}-{m:02}-{d:02}"))
                } else {
                    let (ny, nm) = if m == 12 { (y + 1, 1) } else { (y, m + 1) };
                    (days_from_civil(ny, nm, 1), format!("{y:04}-{m:02}"))
                };
                let boundary = (next as u64).saturating_mul(DAY);
                let end = edges.count_until(boundary.saturating_sub(1)).min(cap);
                eras.push(Era { label, end });
                day = next;
            }
            Ok(eras)
        }
    }
}

/// A metric to follow through the eras.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec {
    pub name: MetricName,
    pub strategy: Strategy,
    pub params: MetricParams,
}

impl MetricSpec {
    /// The metric with its default strategy and parameters.
    pub fn new(name: MetricName) -> Self {
        MetricSpec { name, strategy: name.default_strategy(), params: MetricParams::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EraEntry {
    pub era: String,
    pub v_count: usize,
    pub e_count: usize,
    pub outcome: Result<Vec<EstimateReport>, EstimationError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionSeries {
    pub metric: MetricName,
    pub strategy: Strategy,
    pub entries: Vec<EraEntry>,
}

/// Evaluates every metric on the snapshot of every era.
///
/// Each snapshot is built once and shared by all metrics. Each (metric,
/// era) pair gets its own seed, derived from `cfg.rng_seed`, the metric
/// name and the era index, so adding or removing a metric leaves the
/// samples of the others untouched. Failures are recorded per entry.
pub fn run_evolution<E: Executor, C: Clock>(
    edges: &TemporalEdgeList,
    metrics: &[MetricSpec],
    eras: &[Era],
    cfg: &EstimationConfig,
    exec: &E,
    clock: &C,
) -> Vec<EvolutionSeries> {
    let mut series: Vec<EvolutionSeries> = metrics
        .iter()
        .map(|m| EvolutionSeries { metric: m.name, strategy: m.strategy, entries: Vec::with_capacity(eras.len()) })
        .collect();

    for (ei, era) in eras.iter().enumerate() {
        let snap = Snapshot::from_prefix(edges, era.end);
        for (m, out) in metrics.iter().zip(series.iter_mut()) {
            let seed = derive_seed(cfg.rng_seed, &[name_tag(m.name.as_str()), ei as u64]);
            let local_cfg = EstimationConfig { rng_seed: seed, ..cfg.clone() };
            let params = MetricParams { seed, ..m.params.clone() };
            let est = Estimator::new(&local_cfg, exec, clock);
            let outcome = run_strategy(m.name, m.strategy, &snap, &params, &est);
            out.entries.push(EraEntry {
                era: era.label.clone(),
                v_count: snap.node_count(),
                e_count: snap.edge_count(),
                outcome,
            });
        }
    }
    series
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::{NoClock, Sequential};
    use crate::graph::{NodeId, TimedEdge};
    use alloc::vec;

    fn list(times: &[u64]) -> TemporalEdgeList {
        let edges = times
            .iter()
            .enumerate()
            .map(|(i, &t)| TimedEdge { src: NodeId(i as u64), dst: NodeId(i as u64 + 1), est_time: t, seq: i as u64 })
            .collect();
        TemporalEdgeList::new(edges).unwrap().0
    }

    fn epoch() -> CreationIndex {
        CreationIndex::from_pairs([], TimeUnit::EpochSeconds)
    }

    #[test]
    fn calendar_round_trip() {
        assert_eq!(civil_from_days(0), (1970, 1, 1));
        assert_eq!(civil_from_days(13_239), (2006, 4, 1));
        assert_eq!(days_from_civil(2009, 1, 1), 14_245);
        for d in [-1000, 0, 11_016, 14_245, 20_000] {
            let (y, m, dd) = civil_from_days(d);
            assert_eq!(days_from_civil(y, m, dd), d);
        }
    }

    #[test]
    fn edge_count_eras() {
        let eras = split_eras(&list(&[1, 2, 3, 4]), &EraSpec::new(Granularity::PerEdgeCount(2)), None).unwrap();
        assert_eq!(eras.iter().map(|e| e.end).collect::<Vec<_>>(), vec![2, 4]);
        let eras = split_eras(&list(&[1, 2, 3, 4, 5]), &EraSpec::new(Granularity::PerEdgeCount(2)), None).unwrap();
        assert_eq!(eras.iter().map(|e| e.end).collect::<Vec<_>>(), vec![2, 4, 5]);
        assert_eq!(
            split_eras(&list(&[1]), &EraSpec::new(Granularity::PerEdgeCount(0)), None),
            Err(TimelineError::ZeroStep)
        );
    }

    #[test]
    fn monthly_eras() {
        let apr = 13_239 * DAY + 3600;
        let may = days_from_civil(2006, 5, 10) as u64 * DAY;
        let eras = split_eras(&list(&[apr, may, may + 10]), &EraSpec::new(Granularity::PerMonth), Some(&epoch())).unwrap();
        assert_eq!(eras, vec![Era { label: "2006-04".into(), end: 1 }, Era { label: "2006-05".into(), end: 3 }]);
    }

    #[test]
    fn daily_eras_respect_range_end() {
        let d0 = days_from_civil(2009, 1, 1) as u64 * DAY;
        let l = list(&[d0, d0 + DAY, d0 + 5 * DAY]);
        let spec = EraSpec { granularity: Granularity::PerDay, range: Some((d0, d0 + DAY + 10)) };
        let eras = split_eras(&l, &spec, Some(&epoch())).unwrap();
        assert_eq!(eras, vec![Era { label: "2009-01-01".into(), end: 1 }, Era { label: "2009-01-02".into(), end: 2 }]);
    }

    #[test]
    fn calendar_needs_epoch_times() {
        let l = list(&[1, 2]);
        assert_eq!(split_eras(&l, &EraSpec::new(Granularity::PerDay), None), Err(TimelineError::CalendarRequired));
        let ranks = CreationIndex::identity();
        assert_eq!(split_eras(&l, &EraSpec::new(Granularity::PerMonth), Some(&ranks)), Err(TimelineError::CalendarRequired));
    }

    fn cfg() -> EstimationConfig {
        EstimationConfig { max_rounds: Some(2), budget_seconds: None, ..Default::default() }
    }

    #[test]
    fn exact_series_per_era() {
        let l = list(&[1, 2, 3, 4, 5, 6]);
        let eras = split_eras(&l, &EraSpec::new(Granularity::PerEdgeCount(2)), None).unwrap();
        let metrics = [MetricSpec::new(MetricName::Density), MetricSpec::new(MetricName::Coreness)];
        let series = run_evolution(&l, &metrics, &eras, &cfg(), &Sequential, &NoClock);
        assert_eq!(series.len(), 2);
        for s in &series {
            assert_eq!(s.entries.len(), 3);
            assert!(s.entries.iter().all(|e| e.outcome.as_ref().map(|r| r.len()) == Ok(1)));
            assert!(s.entries.windows(2).all(|w| w[0].v_count <= w[1].v_count && w[0].e_count <= w[1].e_count));
        }
        let first = &series[0].entries[0];
        assert_eq!((first.v_count, first.e_count), (3, 2));
        assert_eq!(first.outcome.as_ref().unwrap()[0].mean, 2.0 / 6.0);
    }

    #[test]
    fn cutoff_entries_are_tagged() {
        let l = list(&[1, 2, 3]);
        let eras = vec![Era { label: "3".into(), end: 3 }];
        let metrics = [MetricSpec::new(MetricName::Closeness)];
        let series = run_evolution(&l, &metrics, &eras, &cfg(), &Sequential, &NoClock);
        let reports = series[0].entries[0].outcome.as_ref().unwrap();
        assert_eq!(reports[0].param, Some(2));
    }

    #[test]
    fn empty_era_records_error() {
        let l = list(&[1, 2]);
        let eras = vec![Era { label: "0".into(), end: 0 }, Era { label: "2".into(), end: 2 }];
        let series = run_evolution(&l, &[MetricSpec::new(MetricName::Density)], &eras, &cfg(), &Sequential, &NoClock);
        assert_eq!(series[0].entries[0].v_count, 0);
        assert!(series[0].entries[0].outcome.is_err());
        assert!(series[0].entries[1].outcome.is_ok());
    }
}
