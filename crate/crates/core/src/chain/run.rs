use std::io;

use rand::Rng;
use serde::Serialize;

use super::schedule::{EventSampler, EventSource, GateEvent};
use super::{step_m0, ChainError, ChainParams, LabelConfig, PairOutcome};
use crate::graphs::{Cut, Graph};

/// What a run should record besides the final state.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions<'a> {
    /// Vertices whose first `N` time is tracked.
    pub watch: &'a [usize],
    /// Sorted times at which to snapshot the labels.
    pub sample_times: &'a [f64],
    /// Keep the full event log (needed for crossing counts and CSV export).
    pub record_events: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EventRecord {
    pub time: f64,
    pub edge: (usize, usize),
    pub outcome: PairOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub labels: LabelConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstHit {
    pub vertex: usize,
    /// `None` when the vertex was never labelled `N` within the horizon.
    pub time: Option<f64>,
}

/// Sample path of the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub start: usize,
    pub horizon: f64,
    pub initial: LabelConfig,
    pub events: Option<Vec<EventRecord>>,
    pub snapshots: Vec<Snapshot>,
    pub first_hits: Vec<FirstHit>,
    pub gate_count: u64,
    pub final_labels: LabelConfig,
}

impl Trajectory {
    pub fn first_hit(&self, vertex: usize) -> Option<f64> {
        self.first_hits.iter().find(|h| h.vertex == vertex).and_then(|h| h.time)
    }

    /// Labels after every logged event with `time <= t`.
    pub fn replay(&self, t: f64) -> Result<LabelConfig, ChainError> {
        let events = self.events.as_ref().ok_or(ChainError::MissingEventLog)?;
        let mut labels = self.initial.clone();
        for ev in events.iter().take_while(|e| e.time <= t) {
            let (lu, lv) = ev.outcome.labels();
            labels.set(ev.edge.0, lu);
            labels.set(ev.edge.1, lv);
        }
        Ok(labels)
    }

    /// Writes the event log as CSV with columns `time,edge_u,edge_v,outcome`.
    pub fn write_events_csv<W: io::Write>(&self, out: W) -> Result<(), ChainError> {
        let events = self.events.as_ref().ok_or(ChainError::MissingEventLog)?;
        let mut w = csv::Writer::from_writer(out);
        let io_err = |e: csv::Error| ChainError::Sampling(format!("csv write failed: {e}"));
        w.write_record(["time", "edge_u", "edge_v", "outcome"])
            .map_err(io_err)?;
        for ev in events {
            w.write_record([
                ev.time.to_string(),
                ev.edge.0.to_string(),
                ev.edge.1.to_string(),
                ev.outcome.as_str().to_string(),
            ])
            .map_err(io_err)?;
        }
        w.flush()
            .map_err(|e| ChainError::Sampling(format!("csv flush failed: {e}")))
    }
}

pub(crate) enum Feed<'a> {
    Sampler(EventSampler),
    Fixed(std::slice::Iter<'a, GateEvent>),
}

impl<'a> Feed<'a> {
    pub(crate) fn new(g: &Graph, source: &EventSource<'a>) -> Result<Self, ChainError> {
        match source {
            EventSource::Schedule(s) => Ok(Feed::Sampler(s.sampler(g.num_edges()))),
            EventSource::Fixed(events) => {
                if let Some(bad) = events.iter().find(|e| e.edge >= g.num_edges()) {
                    return Err(ChainError::Schedule(format!(
                        "edge index {} out of range for {} edges",
                        bad.edge,
                        g.num_edges()
                    )));
                }
                if events.windows(2).any(|w| w[1].time <= w[0].time) {
                    return Err(ChainError::Schedule("fixed event times must strictly increase".into()));
                }
                Ok(Feed::Fixed(events.iter()))
            }
        }
    }

    #[inline]
    pub(crate) fn next_event<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<GateEvent> {
        match self {
            Feed::Sampler(s) => s.next_event(rng),
            Feed::Fixed(it) => it.next().copied(),
        }
    }
}

pub(crate) fn check_vertex(g: &Graph, vertex: usize) -> Result<(), ChainError> {
    if vertex < g.num_vertices() {
        Ok(())
    } else {
        Err(ChainError::Vertex {
            vertex,
            num_vertices: g.num_vertices(),
        })
    }
}

pub(crate) fn check_sample_times(times: &[f64]) -> Result<(), ChainError> {
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(ChainError::Sampling(
            "sample times must be finite and non-negative".into(),
        ));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(ChainError::Sampling("sample times must be sorted".into()));
    }
    Ok(())
}

struct Recorder<'o> {
    opts: &'o RunOptions<'o>,
    snapshots: Vec<Snapshot>,
    next_sample: usize,
    hits: Vec<FirstHit>,
    pending: usize,
    events: Option<Vec<EventRecord>>,
}

impl<'o> Recorder<'o> {
    fn new(opts: &'o RunOptions<'o>, initial: &LabelConfig) -> Self {
        let hits: Vec<_> = opts
            .watch
            .iter()
            .map(|&vertex| FirstHit {
                vertex,
                time: initial.is_n(vertex).then_some(0.0),
            })
            .collect();
        let pending = hits.iter().filter(|h| h.time.is_none()).count();
        Recorder {
            opts,
            snapshots: Vec::with_capacity(opts.sample_times.len()),
            next_sample: 0,
            hits,
            pending,
            events: opts.record_events.then(Vec::new),
        }
    }

    fn before_event(&mut self, time: f64, labels: &LabelConfig) {
        while self.next_sample < self.opts.sample_times.len() && self.opts.sample_times[self.next_sample] < time {
            self.snapshots.push(Snapshot {
                time: self.opts.sample_times[self.next_sample],
                labels: labels.clone(),
            });
            self.next_sample += 1;
        }
    }

    fn after_event(&mut self, time: f64, edge: (usize, usize), outcome: PairOutcome) {
        if let Some(log) = self.events.as_mut() {
            log.push(EventRecord { time, edge, outcome });
        }
        if self.pending > 0 {
            let (lu, lv) = outcome.labels();
            for hit in self.hits.iter_mut().filter(|h| h.time.is_none()) {
                if (lu && hit.vertex == edge.0) || (lv && hit.vertex == edge.1) {
                    hit.time = Some(time);
                    self.pending -= 1;
                }
            }
        }
    }

    fn finish(
        mut self,
        start: usize,
        horizon: f64,
        initial: LabelConfig,
        final_labels: LabelConfig,
        gates: u64,
    ) -> Trajectory {
        self.before_event(f64::INFINITY, &final_labels);
        Trajectory {
            start,
            horizon,
            initial,
            events: self.events,
            snapshots: self.snapshots,
            first_hits: self.hits,
            gate_count: gates,
            final_labels,
        }
    }
}

/// Runs the chain from a single `N` at `start`.
pub fn run_m0<R: Rng + ?Sized>(
    g: &Graph,
    params: &ChainParams,
    start: usize,
    source: EventSource<'_>,
    opts: &RunOptions<'_>,
    rng: &mut R,
) -> Result<Trajectory, ChainError> {
    check_vertex(g, start)?;
    opts.watch.iter().try_for_each(|&v| check_vertex(g, v))?;
    check_sample_times(opts.sample_times)?;
    let mut feed = Feed::new(g, &source)?;

    let initial = LabelConfig::single(g.num_vertices(), start);
    let mut labels = initial.clone();
    let mut rec = Recorder::new(opts, &initial);
    let mut gates = 0u64;
    while let Some(ev) = feed.next_event(rng) {
        rec.before_event(ev.time, &labels);
        let edge = g.edge(ev.edge);
        let outcome = step_m0(&mut labels, edge, params, rng);
        rec.after_event(ev.time, edge, outcome);
        gates += 1;
    }
    Ok(rec.finish(start, source.horizon(), initial, labels, gates))
}

/// Erases every `N` except one at minimal `dist_to_target`; ties go to the
/// smallest vertex index.
pub fn retain_closest(labels: &mut LabelConfig, dist_to_target: &[usize]) {
    let keep = labels.non_identity().min_by_key(|&v| (dist_to_target[v], v));
    if let Some(keep) = keep {
        labels.clear();
        labels.set(keep, true);
    }
}

/// One step of the bounding chain: an ordinary update followed by
/// [`retain_closest`].
pub fn step_modified<R: Rng + ?Sized>(
    labels: &mut LabelConfig,
    edge: (usize, usize),
    params: &ChainParams,
    dist_to_target: &[usize],
    rng: &mut R,
) -> PairOutcome {
    step_m0(labels, edge, params, rng);
    retain_closest(labels, dist_to_target);
    PairOutcome::from_labels(labels.is_n(edge.0), labels.is_n(edge.1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModifiedTrajectory {
    pub trajectory: Trajectory,
    /// `(time, distance from the surviving N to the target)`, one entry per change.
    pub distance_process: Vec<(f64, usize)>,
}

/// Runs the single-walker bounding chain from `start` towards `target`.
///
/// The logged outcome of each event is the pair pattern after erasure.
pub fn run_modified<R: Rng + ?Sized>(
    g: &Graph,
    params: &ChainParams,
    start: usize,
    target: usize,
    source: EventSource<'_>,
    opts: &RunOptions<'_>,
    rng: &mut R,
) -> Result<ModifiedTrajectory, ChainError> {
    check_vertex(g, start)?;
    check_vertex(g, target)?;
    opts.watch.iter().try_for_each(|&v| check_vertex(g, v))?;
    check_sample_times(opts.sample_times)?;
    let mut feed = Feed::new(g, &source)?;
    let dist = g.bfs_distances(target);

    let n = g.num_vertices();
    let watch_all: Vec<usize>;
    let opts_with_target;
    let opts = if opts.watch.contains(&target) {
        opts
    } else {
        watch_all = opts.watch.iter().copied().chain([target]).collect();
        opts_with_target = RunOptions {
            watch: &watch_all,
            ..*opts
        };
        &opts_with_target
    };

    let initial = LabelConfig::single(n, start);
    let mut labels = initial.clone();
    let mut walker = start;
    let mut rec = Recorder::new(opts, &initial);
    let mut distance_process = vec![(0.0, dist[start])];
    let mut gates = 0u64;
    while let Some(ev) = feed.next_event(rng) {
        rec.before_event(ev.time, &labels);
        let (a, b) = g.edge(ev.edge);
        let outcome = if walker != a && walker != b {
            PairOutcome::II
        } else {
            let (la, lb) = params.sample_outcome(rng).labels();
            let kept = match (la, lb) {
                (true, true) => {
                    if (dist[a], a) <= (dist[b], b) {
                        a
                    } else {
                        b
                    }
                }
                (true, false) => a,
                _ => b,
            };
            if kept != walker {
                labels.set(walker, false);
                labels.set(kept, true);
                walker = kept;
                distance_process.push((ev.time, dist[walker]));
            }
            PairOutcome::from_labels(walker == a, walker == b)
        };
        rec.after_event(ev.time, (a, b), outcome);
        gates += 1;
    }
    Ok(ModifiedTrajectory {
        trajectory: rec.finish(start, source.horizon(), initial, labels, gates),
        distance_process,
    })
}

/// Cumulative number of logged gates on edges crossing `cut`, as
/// `(time, count)` at each crossing gate.
pub fn crossing_counter(trajectory: &Trajectory, cut: &Cut) -> Result<Vec<(f64, u64)>, ChainError> {
    let events = trajectory.events.as_ref().ok_or(ChainError::MissingEventLog)?;
    if cut.num_vertices() != trajectory.initial.len() {
        return Err(ChainError::Sampling(format!(
            "cut covers {} vertices but trajectory has {}",
            cut.num_vertices(),
            trajectory.initial.len()
        )));
    }
    let mut count = 0u64;
    Ok(events
        .iter()
        .filter(|e| cut.contains(e.edge.0) != cut.contains(e.edge.1))
        .map(|e| {
            count += 1;
            (e.time, count)
        })
        .collect())
}

/// Value of a crossing-count step function at time `t`.
pub fn crossing_count_at(steps: &[(f64, u64)], t: f64) -> u64 {
    let idx = steps.partition_point(|(time, _)| *time <= t);
    if idx == 0 {
        0
    } else {
        steps[idx - 1].1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{RngPolicy, Schedule, ScheduleKind};
    use crate::graphs::{build_binary_tree, build_dumbbell, build_lattice};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poisson(h: f64) -> EventSource<'static> {
        EventSource::Schedule(Schedule::new(ScheduleKind::PoissonRateOne, h).unwrap())
    }

    #[test]
    fn single_vertex_has_no_events() {
        let g = build_lattice(&[1]).unwrap();
        let p = ChainParams::new(2).unwrap();
        let t = run_m0(
            &g,
            &p,
            0,
            poisson(100.0),
            &RunOptions {
                sample_times: &[0.0, 50.0],
                record_events: true,
                ..Default::default()
            },
            &mut ChaCha8Rng::seed_from_u64(0),
        )
        .unwrap();
        assert_eq!(t.gate_count, 0);
        assert!(t.snapshots.iter().all(|s| s.labels.is_n(0)));
    }

    #[test]
    fn two_vertex_path_hits_the_far_end() {
        let g = build_lattice(&[2]).unwrap();
        let p = ChainParams::new(2).unwrap();
        let policy = RngPolicy::new(5);
        let opts = RunOptions {
            watch: &[1],
            ..Default::default()
        };
        let hits = (0..200)
            .filter(|&k| {
                run_m0(&g, &p, 0, poisson(50.0), &opts, &mut policy.stream(k))
                    .unwrap()
                    .first_hit(1)
                    .is_some()
            })
            .count();
        assert_eq!(hits, 200);
    }

    #[test]
    fn snapshots_match_replay_and_never_lose_all_n() {
        let g = build_binary_tree(4).unwrap();
        let p = ChainParams::new(2).unwrap();
        let times: Vec<f64> = (0..40).map(|i| i as f64 * 0.5).collect();
        for k in 0..20 {
            let t = run_m0(
                &g,
                &p,
                15,
                poisson(20.0),
                &RunOptions {
                    watch: &[30, 0],
                    sample_times: &times,
                    record_events: true,
                },
                &mut RngPolicy::new(11).stream(k),
            )
            .unwrap();
            assert_eq!(t.snapshots.len(), times.len());
            for s in &t.snapshots {
                assert!(s.labels.count_n() >= 1);
                assert_eq!(s.labels, t.replay(s.time).unwrap());
            }
            let events = t.events.as_ref().unwrap();
            assert!(events.windows(2).all(|w| w[1].time > w[0].time));
            assert_eq!(events.len() as u64, t.gate_count);
            // A first hit is the first logged event that labels the vertex N.
            for hit in &t.first_hits {
                let expected = events
                    .iter()
                    .find(|e| {
                        let (lu, lv) = e.outcome.labels();
                        (lu && e.edge.0 == hit.vertex) || (lv && e.edge.1 == hit.vertex)
                    })
                    .map(|e| e.time);
                assert_eq!(hit.time, expected);
            }
        }
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let g = build_binary_tree(2).unwrap();
        let p = ChainParams::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(run_m0(&g, &p, 99, poisson(1.0), &RunOptions::default(), &mut rng).is_err());
        let unsorted = RunOptions {
            sample_times: &[2.0, 1.0],
            ..Default::default()
        };
        assert!(run_m0(&g, &p, 0, poisson(1.0), &unsorted, &mut rng).is_err());
        let fixed = [GateEvent { time: 1.0, edge: 50 }];
        assert!(run_m0(&g, &p, 0, EventSource::Fixed(&fixed), &RunOptions::default(), &mut rng).is_err());
    }

    #[test]
    fn retention_keeps_the_closest() {
        // Path 0-1-2-3-4, target 4: N at 1 (distance 3) and 3 (distance 1).
        let dist = [4, 3, 2, 1, 0];
        let mut labels = LabelConfig::all_identity(5);
        labels.set(1, true);
        labels.set(3, true);
        retain_closest(&mut labels, &dist);
        assert_eq!(labels.to_string(), "IIINI");

        // Equal distances: smallest index wins.
        let mut labels = LabelConfig::from_mask(3, 0b101);
        retain_closest(&mut labels, &[1, 0, 1]);
        assert_eq!(labels.to_string(), "NII");
    }

    #[test]
    fn modified_fast_path_matches_generic_rule() {
        let g = build_dumbbell(4).unwrap();
        let p = ChainParams::new(2).unwrap();
        let (x, y) = (0, 7);
        let dist = g.bfs_distances(y);
        for k in 0..20 {
            let policy = RngPolicy::new(3);
            let fast = run_modified(
                &g,
                &p,
                x,
                y,
                poisson(30.0),
                &RunOptions {
                    record_events: true,
                    ..Default::default()
                },
                &mut policy.stream(k),
            )
            .unwrap();

            let mut rng = policy.stream(k);
            let mut sampler = Schedule::new(ScheduleKind::PoissonRateOne, 30.0)
                .unwrap()
                .sampler(g.num_edges());
            let mut labels = LabelConfig::single(g.num_vertices(), x);
            let mut outcomes = Vec::new();
            while let Some(ev) = sampler.next_event(&mut rng) {
                let edge = g.edge(ev.edge);
                outcomes.push(step_modified(&mut labels, edge, &p, &dist, &mut rng));
                assert_eq!(labels.count_n(), 1);
            }
            let logged: Vec<_> = fast.trajectory.events.unwrap().iter().map(|e| e.outcome).collect();
            assert_eq!(logged, outcomes);
            assert_eq!(fast.trajectory.final_labels, labels);
            let (_, last_d) = *fast.distance_process.last().unwrap();
            assert_eq!(last_d, dist[labels.non_identity().next().unwrap()]);
        }
    }

    #[test]
    fn crossing_counts() {
        let g = build_dumbbell(4).unwrap();
        let cut = Cut::dumbbell_half(&g).unwrap();
        let p = ChainParams::new(2).unwrap();
        let t = run_m0(
            &g,
            &p,
            0,
            poisson(40.0),
            &RunOptions {
                record_events: true,
                ..Default::default()
            },
            &mut ChaCha8Rng::seed_from_u64(4),
        )
        .unwrap();
        let steps = crossing_counter(&t, &cut).unwrap();
        assert!(steps.windows(2).all(|w| w[1].1 == w[0].1 + 1 && w[1].0 > w[0].0));
        assert!(steps.iter().all(|(time, _)| *time <= 40.0));
        assert_eq!(crossing_count_at(&steps, -1.0), 0);
        assert_eq!(crossing_count_at(&steps, 1e9), steps.len() as u64);

        let bare = run_m0(
            &g,
            &p,
            0,
            poisson(5.0),
            &RunOptions::default(),
            &mut ChaCha8Rng::seed_from_u64(4),
        )
        .unwrap();
        assert_eq!(crossing_counter(&bare, &cut), Err(ChainError::MissingEventLog));
    }

    #[test]
    fn event_csv_columns() {
        let g = build_lattice(&[3]).unwrap();
        let p = ChainParams::new(2).unwrap();
        let t = run_m0(
            &g,
            &p,
            0,
            poisson(3.0),
            &RunOptions {
                record_events: true,
                ..Default::default()
            },
            &mut ChaCha8Rng::seed_from_u64(8),
        )
        .unwrap();
        let mut buf = Vec::new();
        t.write_events_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("time,edge_u,edge_v,outcome"));
        assert_eq!(lines.count() as u64, t.gate_count);
    }
}
