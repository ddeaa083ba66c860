//! Operator spreading and entanglement growth in random two-site circuits on
//! graphs.
//!
//! [`chain`] simulates the `I`/`N` label process that governs the mean Pauli
//! weight of a Haar-random circuit, [`oracle`] evaluates small circuits
//! exactly, and [`estimators`] turns sampled curves into saturation times
//! and scaling fits.

pub mod chain;
pub mod cli;
pub mod estimators;
pub mod graphs;
pub mod oracle;
