use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use super::ChainError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    /// Every edge fires at the times of its own rate-1 Poisson process.
    PoissonRateOne,
    /// One uniformly random edge every `1/E` time units.
    UniformRandomEdge,
    /// Edges in index order, cyclically, one every `1/E` time units.
    RoundRobin,
    /// Sweeps over a fresh random permutation of the edges, one gate every `1/E`.
    RandomPermutationSweeps,
}

impl ScheduleKind {
    pub const ALL: [ScheduleKind; 4] = [
        ScheduleKind::PoissonRateOne,
        ScheduleKind::UniformRandomEdge,
        ScheduleKind::RoundRobin,
        ScheduleKind::RandomPermutationSweeps,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScheduleKind::PoissonRateOne => "poisson_rate_one",
            ScheduleKind::UniformRandomEdge => "uniform_random_edge",
            ScheduleKind::RoundRobin => "round_robin",
            ScheduleKind::RandomPermutationSweeps => "random_permutation_sweeps",
        }
    }
}

impl std::str::FromStr for ScheduleKind {
    type Err = ChainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScheduleKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ChainError::Schedule(format!("unknown schedule kind `{s}`")))
    }
}

/// A schedule kind run over `[0, horizon]` time units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub kind: ScheduleKind,
    pub horizon: f64,
}

impl Schedule {
    pub fn new(kind: ScheduleKind, horizon: f64) -> Result<Self, ChainError> {
        if !(horizon.is_finite() && horizon >= 0.0) {
            return Err(ChainError::Schedule(format!(
                "horizon must be finite and >= 0, got {horizon}"
            )));
        }
        Ok(Schedule { kind, horizon })
    }

    pub fn sampler(&self, num_edges: usize) -> EventSampler {
        EventSampler {
            kind: self.kind,
            horizon: self.horizon,
            num_edges,
            rate: num_edges as f64,
            time: 0.0,
            step: 0,
            perm: (0..num_edges).collect(),
        }
    }
}

/// A gate on edge index `edge` at `time`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateEvent {
    pub time: f64,
    pub edge: usize,
}

/// Where a run's gate events come from.
#[derive(Debug, Clone, Copy)]
pub enum EventSource<'a> {
    Schedule(Schedule),
    /// A fixed, time-ordered list (e.g. to match an exact circuit).
    Fixed(&'a [GateEvent]),
}

impl EventSource<'_> {
    pub fn horizon(&self) -> f64 {
        match self {
            EventSource::Schedule(s) => s.horizon,
            EventSource::Fixed(events) => events.last().map_or(0.0, |e| e.time),
        }
    }
}

/// Lazily generates the gate events of a [`Schedule`].
///
/// The Poisson schedule superposes `E` independent rate-1 streams, which is a
/// single rate-`E` stream whose events land on uniformly random edges; gaps
/// are drawn as `Exp(1)/E`.
#[derive(Debug, Clone)]
pub struct EventSampler {
    kind: ScheduleKind,
    horizon: f64,
    num_edges: usize,
    rate: f64,
    time: f64,
    step: u64,
    perm: Vec<usize>,
}

impl EventSampler {
    #[inline]
    pub fn next_event<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<GateEvent> {
        if self.num_edges == 0 {
            return None;
        }
        let time = match self.kind {
            ScheduleKind::PoissonRateOne => {
                let gap: f64 = rng.sample(Exp1);
                self.time + gap / self.rate
            }
            _ => (self.step + 1) as f64 / self.rate,
        };
        if time > self.horizon {
            return None;
        }
        let edge = match self.kind {
            ScheduleKind::PoissonRateOne | ScheduleKind::UniformRandomEdge => rng.random_range(0..self.num_edges),
            ScheduleKind::RoundRobin => (self.step % self.num_edges as u64) as usize,
            ScheduleKind::RandomPermutationSweeps => {
                let pos = (self.step % self.num_edges as u64) as usize;
                if pos == 0 {
                    self.perm.shuffle(rng);
                }
                self.perm[pos]
            }
        };
        self.time = time;
        self.step += 1;
        Some(GateEvent { time, edge })
    }
}
