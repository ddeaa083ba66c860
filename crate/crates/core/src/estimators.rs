//! Saturation times, closed-form equilibrium values, entanglement bounds and
//! scaling fits.

use std::io;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{crossing_count_at, crossing_counter, ChainError, Trajectory};
use crate::graphs::{Cut, Graph, GraphError};
use crate::oracle::EntropyUnit;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimateError {
    #[error("invalid input: {0}")]
    Contract(String),
    #[error("value outside the formula's domain: {0}")]
    Domain(String),
    #[error("{count} censored point(s) in scaling fit; increase the horizon so every tau is observed")]
    Censored { count: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Occupancy,
    Otoc,
    EntBound,
    Entropy,
    PauliWeight,
}

/// Time-sampled Monte Carlo estimates of one observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaturationCurve {
    pub observable: Observable,
    pub sample_times: Vec<f64>,
    pub estimates: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub num_traj: u64,
}

impl SaturationCurve {
    pub fn len(&self) -> usize {
        self.sample_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sample_times.is_empty()
    }

    pub fn validate(&self) -> Result<(), EstimateError> {
        let n = self.sample_times.len();
        if self.estimates.len() != n || self.std_errors.len() != n {
            return Err(EstimateError::Contract("curve column lengths differ".into()));
        }
        if self.std_errors.iter().any(|s| s.is_nan() || *s < 0.0) {
            return Err(EstimateError::Contract("standard errors must be non-negative".into()));
        }
        if self.sample_times.windows(2).any(|w| w[1] < w[0]) {
            return Err(EstimateError::Contract("sample times must increase".into()));
        }
        Ok(())
    }

    /// Multiplies estimates and errors by `factor`.
    pub fn scaled(&self, factor: f64, observable: Observable) -> SaturationCurve {
        SaturationCurve {
            observable,
            sample_times: self.sample_times.clone(),
            estimates: self.estimates.iter().map(|e| e * factor).collect(),
            std_errors: self.std_errors.iter().map(|e| e * factor.abs()).collect(),
            num_traj: self.num_traj,
        }
    }

    /// CSV with columns `time,estimate,stderr`.
    pub fn write_csv<W: io::Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["time", "estimate", "stderr"])?;
        for i in 0..self.len() {
            w.write_record([
                self.sample_times[i].to_string(),
                self.estimates[i].to_string(),
                self.std_errors[i].to_string(),
            ])?;
        }
        w.flush()
    }
}

/// Evenly spaced sample times `0, step, 2·step, …` up to `horizon`.
pub fn uniform_sample_times(horizon: f64, step: f64) -> Vec<f64> {
    let count = (horizon / step + 1e-9).floor() as usize;
    (0..=count).map(|i| i as f64 * step).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaturationResult {
    /// Conservative crossing time (or the horizon when censored).
    pub tau: f64,
    pub threshold: f64,
    pub equilibrium: Option<f64>,
    /// Crossing of the upper band `estimate + 2·stderr`, and `tau`.
    pub ci: (f64, f64),
    pub censored: bool,
}

/// Equilibrium probability that a given vertex carries `N`:
/// `(d²-1)·d^{2(V-1)} / (d^{2V} - 1)`.
pub fn equilibrium_occupancy(local_dim: u32, num_vertices: usize) -> Result<f64, EstimateError> {
    if local_dim < 2 || num_vertices == 0 {
        return Err(EstimateError::Contract(format!(
            "need d >= 2 and V >= 1, got d={local_dim}, V={num_vertices}"
        )));
    }
    let d2 = f64::from(local_dim).powi(2);
    // Rewritten as ((d²-1)/d²) / (1 - d^{-2V}) so large V tends to the limit.
    let tail = (-(num_vertices as f64) * d2.ln()).exp();
    Ok(((d2 - 1.0) / d2) / (1.0 - tail))
}

/// Commutator-squared value implied by an occupancy: `d²/(d²-1) · p`.
pub fn otoc_from_occupancy(p: f64, local_dim: u32) -> Result<f64, EstimateError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(EstimateError::Domain(format!("occupancy {p} is not a probability")));
    }
    if local_dim < 2 {
        return Err(EstimateError::Contract(format!("local dimension {local_dim} < 2")));
    }
    let d2 = f64::from(local_dim).powi(2);
    Ok(d2 / (d2 - 1.0) * p)
}

/// Equilibrium commutator-squared value on `V` vertices.
pub fn equilibrium_otoc(local_dim: u32, num_vertices: usize) -> Result<f64, EstimateError> {
    otoc_from_occupancy(equilibrium_occupancy(local_dim, num_vertices)?, local_dim)
}

/// The saturation fraction `1/(d²+1)`.
pub fn default_threshold_fraction(local_dim: u32) -> f64 {
    1.0 / (f64::from(local_dim).powi(2) + 1.0)
}

fn band_crossing(curve: &SaturationCurve, threshold: f64, band: f64) -> Option<f64> {
    let value = |i: usize| curve.estimates[i] + band * curve.std_errors[i];
    let i = (0..curve.len()).find(|&i| value(i) >= threshold)?;
    if i == 0 {
        return Some(curve.sample_times[0]);
    }
    let (t0, t1) = (curve.sample_times[i - 1], curve.sample_times[i]);
    let (v0, v1) = (value(i - 1), value(i));
    Some(t0 + (threshold - v0) / (v1 - v0) * (t1 - t0))
}

/// First time the lower band `estimate - 2·stderr` reaches `threshold`,
/// linearly interpolated between the bracketing samples.
pub fn tau_from_curve(curve: &SaturationCurve, threshold: f64) -> Result<SaturationResult, EstimateError> {
    curve.validate()?;
    if curve.is_empty() {
        return Err(EstimateError::Contract("empty curve".into()));
    }
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(EstimateError::Contract(format!(
            "threshold must be positive, got {threshold}"
        )));
    }
    let horizon = *curve.sample_times.last().unwrap();
    let upper = band_crossing(curve, threshold, 2.0);
    Ok(match band_crossing(curve, threshold, -2.0) {
        Some(tau) => SaturationResult {
            tau,
            threshold,
            equilibrium: None,
            ci: (upper.unwrap_or(tau), tau),
            censored: false,
        },
        None => SaturationResult {
            tau: horizon,
            threshold,
            equilibrium: None,
            ci: (upper.unwrap_or(horizon), horizon),
            censored: true,
        },
    })
}

/// Saturation time of an occupancy curve measured on the commutator scale:
/// the curve is mapped to `d²/(d²-1)·p` and compared with
/// `fraction × equilibrium_otoc(d, V)`.
pub fn otoc_saturation(
    occupancy: &SaturationCurve,
    local_dim: u32,
    num_vertices: usize,
    fraction: f64,
) -> Result<(SaturationCurve, SaturationResult), EstimateError> {
    let d2 = f64::from(local_dim).powi(2);
    let otoc = occupancy.scaled(d2 / (d2 - 1.0), Observable::Otoc);
    let equilibrium = equilibrium_otoc(local_dim, num_vertices)?;
    let mut result = tau_from_curve(&otoc, fraction * equilibrium)?;
    result.equilibrium = Some(equilibrium);
    Ok((otoc, result))
}

/// Lower bound on the entanglement saturation time across `cut`:
/// `fraction · min(|A|,|B|) / (2·C(A,B))` time units.
///
/// Reaching `fraction` of the `min(|A|,|B|)·log d` maximum needs at least
/// that many crossing gates at `2·log d` each, and crossing gates arrive at
/// rate `C(A,B)`.
pub fn tau_ent_lower_bound(g: &Graph, cut: &Cut, local_dim: u32, fraction: f64) -> Result<f64, EstimateError> {
    if local_dim < 2 {
        return Err(EstimateError::Contract(format!("local dimension {local_dim} < 2")));
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(EstimateError::Contract(format!(
            "threshold fraction {fraction} not in (0, 1)"
        )));
    }
    let crossing = g.cut_size(cut)?;
    if crossing == 0 {
        return Err(EstimateError::Contract("cut has no crossing edges".into()));
    }
    Ok(fraction * cut.min_side() as f64 / (2.0 * crossing as f64))
}

/// Entropy ceiling `min(2·log d·crossings(t), min(|A|,|B|)·log d)` of one
/// trajectory at each sample time.
pub fn ent_bound_values(
    trajectory: &Trajectory,
    cut: &Cut,
    local_dim: u32,
    sample_times: &[f64],
    unit: EntropyUnit,
) -> Result<Vec<f64>, EstimateError> {
    let log_d = unit.log(f64::from(local_dim));
    let cap = cut.min_side() as f64 * log_d;
    let steps = crossing_counter(trajectory, cut)?;
    Ok(sample_times
        .iter()
        .map(|&s| (2.0 * log_d * crossing_count_at(&steps, s) as f64).min(cap))
        .collect())
}

/// Mean and standard error over rows of per-trajectory samples.
pub fn curve_from_samples(
    observable: Observable,
    sample_times: &[f64],
    per_traj: &[Vec<f64>],
) -> Result<SaturationCurve, EstimateError> {
    if per_traj.is_empty() {
        return Err(EstimateError::Contract("no trajectories".into()));
    }
    if per_traj.iter().any(|row| row.len() != sample_times.len()) {
        return Err(EstimateError::Contract(
            "sample row length differs from sample times".into(),
        ));
    }
    let n = per_traj.len() as f64;
    let mut estimates = Vec::with_capacity(sample_times.len());
    let mut std_errors = Vec::with_capacity(sample_times.len());
    for i in 0..sample_times.len() {
        let mean = per_traj.iter().map(|v| v[i]).sum::<f64>() / n;
        let var = if per_traj.len() > 1 {
            per_traj.iter().map(|v| (v[i] - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        estimates.push(mean);
        std_errors.push((var / n).sqrt());
    }
    Ok(SaturationCurve {
        observable,
        sample_times: sample_times.to_vec(),
        estimates,
        std_errors,
        num_traj: per_traj.len() as u64,
    })
}

/// Average over trajectories of [`ent_bound_values`].
pub fn ent_bound_curve(
    trajectories: &[Trajectory],
    cut: &Cut,
    local_dim: u32,
    sample_times: &[f64],
    unit: EntropyUnit,
) -> Result<SaturationCurve, EstimateError> {
    let per_traj = trajectories
        .iter()
        .map(|t| ent_bound_values(t, cut, local_dim, sample_times, unit))
        .collect::<Result<Vec<_>, _>>()?;
    curve_from_samples(Observable::EntBound, sample_times, &per_traj)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingModel {
    /// `tau = a·ln n + b`
    Log,
    /// `tau = a·n^b`
    Power,
    /// `tau = a·n + b`
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub n: f64,
    pub tau: f64,
    pub tau_err: f64,
    pub censored: bool,
}

impl ScalingPoint {
    pub fn exact(n: f64, tau: f64) -> Self {
        ScalingPoint {
            n,
            tau,
            tau_err: 0.0,
            censored: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub model: ScalingModel,
    pub points: Vec<ScalingPoint>,
    /// `(a, b)` in the model's parameterization.
    pub coefficients: (f64, f64),
    pub r_squared: f64,
    /// Residuals in the transformed domain.
    pub residuals: Vec<f64>,
    /// Quadratic term of a 3-parameter fit in the transformed domain, as a
    /// fraction of the linear rise over the fitted range. Positive values
    /// indicate upward curvature.
    pub relative_curvature: f64,
}

impl ScalingFit {
    pub fn predict(&self, n: f64) -> f64 {
        let (a, b) = self.coefficients;
        match self.model {
            ScalingModel::Log => a * n.ln() + b,
            ScalingModel::Power => a * n.powf(b),
            ScalingModel::Linear => a * n + b,
        }
    }

    /// CSV with columns `n,tau,tau_err`.
    pub fn write_csv<W: io::Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "tau", "tau_err"])?;
        for p in &self.points {
            w.write_record([p.n.to_string(), p.tau.to_string(), p.tau_err.to_string()])?;
        }
        w.flush()
    }
}

/// Least squares in the model's linearizing coordinates: `tau` vs `ln n`,
/// `ln tau` vs `ln n`, or `tau` vs `n`.
pub fn fit_scaling(points: &[ScalingPoint], model: ScalingModel) -> Result<ScalingFit, EstimateError> {
    if points.len() < 4 {
        return Err(EstimateError::Contract(format!(
            "scaling fit needs at least 4 points, got {}",
            points.len()
        )));
    }
    let censored = points.iter().filter(|p| p.censored).count();
    if censored > 0 {
        return Err(EstimateError::Censored { count: censored });
    }
    let needs_log_n = matches!(model, ScalingModel::Log | ScalingModel::Power);
    if needs_log_n && points.iter().any(|p| p.n.is_nan() || p.n <= 0.0) {
        return Err(EstimateError::Domain("log-scale fit needs n > 0".into()));
    }
    if model == ScalingModel::Power && points.iter().any(|p| p.tau.is_nan() || p.tau <= 0.0) {
        return Err(EstimateError::Domain("power-law fit needs tau > 0".into()));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .map(|p| match model {
            ScalingModel::Log => (p.n.ln(), p.tau),
            ScalingModel::Power => (p.n.ln(), p.tau.ln()),
            ScalingModel::Linear => (p.n, p.tau),
        })
        .unzip();

    let m = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / m;
    let y_mean = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    if sxx == 0.0 {
        return Err(EstimateError::Contract("all n values are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - x_mean) * (y - y_mean)).sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let residuals: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - (slope * x + intercept)).collect();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - y_mean).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };

    let coefficients = match model {
        ScalingModel::Power => (intercept.exp(), slope),
        _ => (slope, intercept),
    };

    Ok(ScalingFit {
        model,
        points: points.to_vec(),
        coefficients,
        r_squared,
        residuals,
        relative_curvature: relative_curvature(&xs, &ys, slope),
    })
}

fn relative_curvature(xs: &[f64], ys: &[f64], slope: f64) -> f64 {
    // Centre and scale x so the normal equations stay well conditioned.
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    let design = DMatrix::from_fn(xs.len(), 3, |r, c| ((xs[r] - lo) / span).powi(c as i32));
    let y = DVector::from_column_slice(ys);
    let Ok(coef) = design.clone().svd(true, true).solve(&y, 1e-12) else {
        return 0.0;
    };
    let rise = slope.abs() * span;
    if rise == 0.0 {
        0.0
    } else {
        coef[2] / rise
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityBound {
    /// `1 / (d_A² · (1 - C))` before capping.
    pub raw: f64,
    pub value: f64,
    pub capped: bool,
}

/// Lower bound on decoding fidelity from a commutator value, capped at 1.
pub fn decoding_fidelity_bound(otoc_value: f64, d_a: u32) -> Result<FidelityBound, EstimateError> {
    if !(0.0..1.0).contains(&otoc_value) {
        return Err(EstimateError::Domain(format!(
            "bound is degenerate for OTOC value {otoc_value}; need 0 <= C < 1"
        )));
    }
    if d_a < 2 {
        return Err(EstimateError::Contract(format!("subsystem dimension {d_a} < 2")));
    }
    let raw = 1.0 / (f64::from(d_a).powi(2) * (1.0 - otoc_value));
    Ok(FidelityBound {
        raw,
        value: raw.min(1.0),
        capped: raw > 1.0,
    })
}
