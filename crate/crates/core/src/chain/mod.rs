//! The I/N operator-support Markov chain and its bounding variant.
//!
//! Each vertex carries a label: `I` (identity) or `N` (non-identity Pauli
//! support). A gate on an edge leaves `II` alone and otherwise resamples the
//! pair to `IN`, `NI`, `NN` with weights `1 : 1 : d²-1`.

mod labels;
mod occupancy;
mod rng;
mod run;
mod schedule;

pub mod exact;

pub use labels::{Label, LabelConfig};
pub use occupancy::{occupancy_curve, schedule_equivalence_report, GateCountCheck, OccupancyStudy, ScheduleComparison};
pub use rng::RngPolicy;
pub use run::{
    crossing_count_at, crossing_counter, retain_closest, run_m0, run_modified, step_modified, EventRecord, FirstHit,
    ModifiedTrajectory, RunOptions, Snapshot, Trajectory,
};
pub use schedule::{EventSampler, EventSource, GateEvent, Schedule, ScheduleKind};

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error("local dimension must be at least 2, got {0}")]
    LocalDim(u32),
    #[error("vertex {vertex} out of range for a graph with {num_vertices} vertices")]
    Vertex { vertex: usize, num_vertices: usize },
    #[error("trajectory was recorded without an event log")]
    MissingEventLog,
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("state space too large: {0}")]
    Size(String),
    #[error("invalid sampling request: {0}")]
    Sampling(String),
    #[error(transparent)]
    Graph(#[from] crate::graphs::GraphError),
}

/// Local Hilbert-space dimension and the update weights it implies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainParams {
    local_dim: u32,
}

impl ChainParams {
    pub fn new(local_dim: u32) -> Result<Self, ChainError> {
        // d² + 1 must fit in u32 for the integer outcome draw.
        if !(2..=65_535).contains(&local_dim) {
            return Err(ChainError::LocalDim(local_dim));
        }
        Ok(ChainParams { local_dim })
    }

    pub fn local_dim(&self) -> u32 {
        self.local_dim
    }

    /// `d²`, the number of single-site Pauli operators including identity.
    pub fn pauli_count(&self) -> u32 {
        self.local_dim * self.local_dim
    }

    /// Integer weights `(IN, NI, NN)`; they sum to `d² + 1`.
    pub fn outcome_weights(&self) -> (u32, u32, u32) {
        (1, 1, self.pauli_count() - 1)
    }

    /// Probability of `IN` (equally `NI`): `1 / (d² + 1)`.
    pub fn p_single(&self) -> f64 {
        1.0 / f64::from(self.pauli_count() + 1)
    }

    /// Probability of `NN`: `(d² - 1) / (d² + 1)`.
    pub fn p_double(&self) -> f64 {
        1.0 - 2.0 * self.p_single()
    }

    /// Draws the post-gate pattern of a pair that is not `II`.
    pub fn sample_outcome<R: Rng + ?Sized>(&self, rng: &mut R) -> PairOutcome {
        match rng.random_range(0..self.pauli_count() + 1) {
            0 => PairOutcome::IN,
            1 => PairOutcome::NI,
            _ => PairOutcome::NN,
        }
    }
}

/// Labels of an edge's endpoints `(u, v)` after a gate.
#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairOutcome {
    II,
    IN,
    NI,
    NN,
}

impl PairOutcome {
    pub fn from_labels(u_is_n: bool, v_is_n: bool) -> Self {
        match (u_is_n, v_is_n) {
            (false, false) => PairOutcome::II,
            (false, true) => PairOutcome::IN,
            (true, false) => PairOutcome::NI,
            (true, true) => PairOutcome::NN,
        }
    }

    pub fn labels(self) -> (bool, bool) {
        match self {
            PairOutcome::II => (false, false),
            PairOutcome::IN => (false, true),
            PairOutcome::NI => (true, false),
            PairOutcome::NN => (true, true),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PairOutcome::II => "II",
            PairOutcome::IN => "IN",
            PairOutcome::NI => "NI",
            PairOutcome::NN => "NN",
        }
    }
}

impl fmt::Display for PairOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One gate of the chain on edge `(u, v)`; returns the resulting pair pattern.
pub fn step_m0<R: Rng + ?Sized>(
    state: &mut LabelConfig,
    (u, v): (usize, usize),
    params: &ChainParams,
    rng: &mut R,
) -> PairOutcome {
    if !state.is_n(u) && !state.is_n(v) {
        return PairOutcome::II;
    }
    let outcome = params.sample_outcome(rng);
    let (lu, lv) = outcome.labels();
    state.set(u, lu);
    state.set(v, lv);
    outcome
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn probabilities_sum_to_one() {
        for d in 2..=64 {
            let p = ChainParams::new(d).unwrap();
            assert_eq!(2.0 * p.p_single() + p.p_double(), 1.0);
            let (a, b, c) = p.outcome_weights();
            assert_eq!(a + b + c, d * d + 1);
        }
        let p = ChainParams::new(2).unwrap();
        assert!((p.p_single() - 0.2).abs() < 1e-15);
        assert!((p.p_double() - 0.6).abs() < 1e-15);
        assert!(ChainParams::new(1).is_err());
    }

    #[test]
    fn identity_pair_is_frozen() {
        let params = ChainParams::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut state = LabelConfig::single(4, 3);
        for _ in 0..1000 {
            assert_eq!(step_m0(&mut state, (0, 1), &params, &mut rng), PairOutcome::II);
        }
        assert_eq!(state, LabelConfig::single(4, 3));
    }

    #[test]
    fn other_labels_untouched() {
        let params = ChainParams::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut state = LabelConfig::single(5, 1);
        state.set(4, true);
        for _ in 0..200 {
            step_m0(&mut state, (1, 2), &params, &mut rng);
            assert!(state.is_n(4));
            assert!(!state.is_n(0) && !state.is_n(3));
            assert!(state.is_n(1) || state.is_n(2));
        }
    }

    #[test]
    fn empirical_outcome_frequencies() {
        let params = ChainParams::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let draws = 1_000_000u32;
        let mut counts = [0u32; 3];
        for _ in 0..draws {
            let mut s = LabelConfig::single(2, 0);
            match step_m0(&mut s, (0, 1), &params, &mut rng) {
                PairOutcome::IN => counts[0] += 1,
                PairOutcome::NI => counts[1] += 1,
                PairOutcome::NN => counts[2] += 1,
                PairOutcome::II => unreachable!(),
            }
        }
        for (count, p) in counts.iter().zip([0.2, 0.2, 0.6]) {
            let sigma = (p * (1.0 - p) / f64::from(draws)).sqrt();
            let freq = f64::from(*count) / f64::from(draws);
            assert!((freq - p).abs() < 4.0 * sigma, "freq {freq} vs {p}");
        }
    }
}
