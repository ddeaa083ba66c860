use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::run::{check_sample_times, check_vertex, Feed};
use super::schedule::{EventSource, Schedule, ScheduleKind};
use super::{ChainError, ChainParams, LabelConfig, RngPolicy};
use crate::estimators::{Observable, SaturationCurve};
use crate::graphs::Graph;

struct TargetPath {
    at_samples: Vec<bool>,
    first_hit: Option<f64>,
    gates: u64,
}

fn simulate_target<R: Rng + ?Sized>(
    g: &Graph,
    params: &ChainParams,
    start: usize,
    target: usize,
    schedule: &Schedule,
    sample_times: &[f64],
    rng: &mut R,
) -> TargetPath {
    let mut labels = LabelConfig::single(g.num_vertices(), start);
    let mut feed = Feed::new(g, &EventSource::Schedule(*schedule)).expect("generated schedules are valid");
    let mut at_samples = Vec::with_capacity(sample_times.len());
    let mut first_hit = (start == target).then_some(0.0);
    let mut gates = 0u64;
    while let Some(ev) = feed.next_event(rng) {
        while at_samples.len() < sample_times.len() && sample_times[at_samples.len()] < ev.time {
            at_samples.push(labels.is_n(target));
        }
        let edge = g.edge(ev.edge);
        super::step_m0(&mut labels, edge, params, rng);
        gates += 1;
        if first_hit.is_none() && labels.is_n(target) {
            first_hit = Some(ev.time);
        }
    }
    at_samples.resize(sample_times.len(), labels.is_n(target));
    TargetPath {
        at_samples,
        first_hit,
        gates,
    }
}

/// Monte Carlo estimate of `P(label(target) = N)` over time, with the
/// first-hit data needed by the light-cone and persistence checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OccupancyStudy {
    pub curve: SaturationCurve,
    /// First time the target carried `N`, per trajectory (`None` = censored).
    pub first_hits: Vec<Option<f64>>,
    /// Per sample time: trajectories whose first hit is at or before it.
    pub hit_by: Vec<u64>,
    /// Per sample time: of those, how many have `N` on the target.
    pub n_after_hit: Vec<u64>,
    pub gate_counts: Vec<u64>,
}

impl OccupancyStudy {
    /// Runs `num_traj` independent trajectories; trajectory `k` uses
    /// `policy.stream(k)`, so the result does not depend on thread count.
    #[allow(clippy::too_many_arguments)]
    pub fn run(
        g: &Graph,
        params: &ChainParams,
        start: usize,
        target: usize,
        schedule: &Schedule,
        sample_times: &[f64],
        num_traj: u64,
        policy: &RngPolicy,
    ) -> Result<Self, ChainError> {
        check_vertex(g, start)?;
        check_vertex(g, target)?;
        check_sample_times(sample_times)?;
        if num_traj == 0 {
            return Err(ChainError::Sampling("need at least one trajectory".into()));
        }
        let paths: Vec<TargetPath> = (0..num_traj)
            .into_par_iter()
            .map(|k| simulate_target(g, params, start, target, schedule, sample_times, &mut policy.stream(k)))
            .collect();

        let m = sample_times.len();
        let mut n_count = vec![0u64; m];
        let mut hit_by = vec![0u64; m];
        let mut n_after_hit = vec![0u64; m];
        for path in &paths {
            for (i, &t) in sample_times.iter().enumerate() {
                let on = path.at_samples[i];
                n_count[i] += u64::from(on);
                if path.first_hit.is_some_and(|h| h <= t) {
                    hit_by[i] += 1;
                    n_after_hit[i] += u64::from(on);
                }
            }
        }
        let nt = num_traj as f64;
        let estimates: Vec<f64> = n_count.iter().map(|&c| c as f64 / nt).collect();
        let std_errors = estimates.iter().map(|&p| (p * (1.0 - p) / nt).sqrt()).collect();
        Ok(OccupancyStudy {
            curve: SaturationCurve {
                observable: Observable::Occupancy,
                sample_times: sample_times.to_vec(),
                estimates,
                std_errors,
                num_traj,
            },
            first_hits: paths.iter().map(|p| p.first_hit).collect(),
            hit_by,
            n_after_hit,
            gate_counts: paths.iter().map(|p| p.gates).collect(),
        })
    }

    /// `P(N on target at sample i | target already hit)`.
    pub fn occupancy_given_hit(&self, i: usize) -> Option<f64> {
        (self.hit_by[i] > 0).then(|| self.n_after_hit[i] as f64 / self.hit_by[i] as f64)
    }

    /// Mean and standard error of the first-hit time over uncensored
    /// trajectories, with the number censored.
    pub fn first_hit_summary(&self) -> (Option<(f64, f64)>, usize) {
        let hits: Vec<f64> = self.first_hits.iter().flatten().copied().collect();
        let censored = self.first_hits.len() - hits.len();
        if hits.is_empty() {
            return (None, censored);
        }
        let n = hits.len() as f64;
        let mean = hits.iter().sum::<f64>() / n;
        let var = if hits.len() > 1 {
            hits.iter().map(|h| (h - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        (Some((mean, (var / n).sqrt())), censored)
    }
}

/// `P(label(target) = N)` at each sample time, with binomial standard errors.
#[allow(clippy::too_many_arguments)]
pub fn occupancy_curve(
    g: &Graph,
    params: &ChainParams,
    start: usize,
    target: usize,
    schedule: &Schedule,
    sample_times: &[f64],
    num_traj: u64,
    policy: &RngPolicy,
) -> Result<SaturationCurve, ChainError> {
    OccupancyStudy::run(g, params, start, target, schedule, sample_times, num_traj, policy).map(|s| s.curve)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateCountCheck {
    /// `E·t`.
    pub expected: f64,
    pub time: f64,
    pub mean_count: f64,
    /// Fraction of trajectories with `|count - E·t| > E·t / 2`.
    pub fraction_beyond_half: f64,
}

/// Poisson versus random-edge schedules on the same observable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleComparison {
    pub poisson: SaturationCurve,
    pub uniform: SaturationCurve,
    pub max_abs_diff: f64,
    /// Largest `|difference| / sqrt(se_a² + se_b²)` over sample times.
    pub max_pooled_z: f64,
    pub gate_counts: Vec<GateCountCheck>,
}

pub const GATE_COUNT_TARGETS: [f64; 3] = [10.0, 100.0, 1000.0];

/// Runs the occupancy curve under both continuous-time and discrete
/// scheduling and measures how concentrated the Poisson gate count is.
#[allow(clippy::too_many_arguments)]
pub fn schedule_equivalence_report(
    g: &Graph,
    params: &ChainParams,
    start: usize,
    target: usize,
    sample_times: &[f64],
    num_traj: u64,
    policy: &RngPolicy,
) -> Result<ScheduleComparison, ChainError> {
    if g.num_edges() == 0 {
        return Err(ChainError::Schedule("graph has no edges".into()));
    }
    let horizon = sample_times.last().copied().unwrap_or(0.0);
    let curve = |kind: ScheduleKind, label: &str| {
        let schedule = Schedule::new(kind, horizon)?;
        occupancy_curve(
            g,
            params,
            start,
            target,
            &schedule,
            sample_times,
            num_traj,
            &policy.derive(label),
        )
    };
    let poisson = curve(ScheduleKind::PoissonRateOne, "poisson")?;
    let uniform = curve(ScheduleKind::UniformRandomEdge, "uniform")?;

    let mut max_abs_diff = 0.0f64;
    let mut max_pooled_z = 0.0f64;
    for i in 0..sample_times.len() {
        let diff = (poisson.estimates[i] - uniform.estimates[i]).abs();
        let pooled = poisson.std_errors[i].hypot(uniform.std_errors[i]);
        max_abs_diff = max_abs_diff.max(diff);
        let z = if pooled > 0.0 {
            diff / pooled
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        max_pooled_z = max_pooled_z.max(z);
    }

    let gate_policy = policy.derive("gate_counts");
    let e = g.num_edges() as f64;
    let gate_counts = GATE_COUNT_TARGETS
        .iter()
        .map(|&expected| {
            let time = expected / e;
            let schedule = Schedule::new(ScheduleKind::PoissonRateOne, time)?;
            let counts: Vec<u64> = (0..num_traj)
                .into_par_iter()
                .map(|k| {
                    let mut rng = gate_policy.stream(k);
                    let mut s = schedule.sampler(g.num_edges());
                    std::iter::from_fn(|| s.next_event(&mut rng)).count() as u64
                })
                .collect();
            let beyond = counts
                .iter()
                .filter(|&&c| (c as f64 - expected).abs() > 0.5 * expected)
                .count();
            Ok(GateCountCheck {
                expected,
                time,
                mean_count: counts.iter().sum::<u64>() as f64 / num_traj as f64,
                fraction_beyond_half: beyond as f64 / num_traj as f64,
            })
        })
        .collect::<Result<Vec<_>, ChainError>>()?;

    Ok(ScheduleComparison {
        poisson,
        uniform,
        max_abs_diff,
        max_pooled_z,
        gate_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_binary_tree, build_lattice};

    #[test]
    fn initial_conditions() {
        let g = build_binary_tree(3).unwrap();
        let p = ChainParams::new(2).unwrap();
        let s = Schedule::new(ScheduleKind::PoissonRateOne, 1.0).unwrap();
        let policy = RngPolicy::new(1);
        let away = occupancy_curve(&g, &p, 7, 11, &s, &[0.0, 1.0], 100, &policy).unwrap();
        assert_eq!(away.estimates[0], 0.0);
        assert_eq!(away.std_errors[0], 0.0);
        let same = occupancy_curve(&g, &p, 7, 7, &s, &[0.0], 100, &policy).unwrap();
        assert_eq!(same.estimates[0], 1.0);
        assert!(occupancy_curve(&g, &p, 7, 7, &s, &[0.0], 0, &policy).is_err());
    }

    #[test]
    fn two_vertex_long_run_occupancy() {
        let g = build_lattice(&[2]).unwrap();
        let p = ChainParams::new(2).unwrap();
        let s = Schedule::new(ScheduleKind::PoissonRateOne, 30.0).unwrap();
        let c = occupancy_curve(&g, &p, 0, 1, &s, &[30.0], 20_000, &RngPolicy::new(2)).unwrap();
        assert!(
            (c.estimates[0] - 0.8).abs() < 3.0 * c.std_errors[0],
            "{:?}",
            c.estimates
        );
    }

    #[test]
    fn repeatable_for_a_seed() {
        let g = build_binary_tree(3).unwrap();
        let p = ChainParams::new(2).unwrap();
        let times = [1.0, 3.0, 6.0];
        let a = schedule_equivalence_report(&g, &p, 7, 14, &times, 300, &RngPolicy::new(9)).unwrap();
        let b = schedule_equivalence_report(&g, &p, 7, 14, &times, 300, &RngPolicy::new(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.gate_counts.len(), 3);
    }
}
