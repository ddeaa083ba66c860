//! Exact evolution of the label distribution on small graphs.
//!
//! Configurations are bitmasks over at most [`MAX_EXACT_VERTICES`] vertices
//! (bit `v` set = `N` on vertex `v`). The "random edge" dynamics here is the
//! discrete chain that updates one uniformly random edge per step.

use nalgebra::{DMatrix, DVector};

use super::{ChainError, ChainParams};
use crate::graphs::Graph;

/// Largest graph for distribution vectors (`2^V` doubles).
pub const MAX_EXACT_VERTICES: usize = 20;
/// Largest graph for dense transition matrices and linear solves.
pub const MAX_MATRIX_VERTICES: usize = 12;

fn check_size(g: &Graph, limit: usize) -> Result<usize, ChainError> {
    let n = g.num_vertices();
    if n > limit {
        return Err(ChainError::Size(format!(
            "{n} vertices exceeds the exact-chain limit of {limit} ({} configurations)",
            1u128 << n
        )));
    }
    Ok(1usize << n)
}

/// Applies one gate on `(u, v)` to a configuration distribution.
pub fn apply_edge(dist: &[f64], (u, v): (usize, usize), params: &ChainParams) -> Vec<f64> {
    let mut out = vec![0.0; dist.len()];
    let (ps, pd) = (params.p_single(), params.p_double());
    let (bu, bv) = (1usize << u, 1usize << v);
    for (c, &p) in dist.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        if c & (bu | bv) == 0 {
            out[c] += p;
        } else {
            let base = c & !(bu | bv);
            out[base | bv] += p * ps;
            out[base | bu] += p * ps;
            out[base | bu | bv] += p * pd;
        }
    }
    out
}

fn point_mass(size: usize, mask: usize) -> Vec<f64> {
    let mut d = vec![0.0; size];
    d[mask] = 1.0;
    d
}

/// `P(label(v) = N)` for every vertex.
pub fn marginals(dist: &[f64], num_vertices: usize) -> Vec<f64> {
    (0..num_vertices)
        .map(|v| {
            dist.iter()
                .enumerate()
                .filter(|(c, _)| c >> v & 1 == 1)
                .map(|(_, p)| p)
                .sum()
        })
        .collect()
}

/// Per-vertex `N` probabilities after each prefix of a fixed edge sequence,
/// starting from a single `N` at `start`. Row `k` is after `k` gates.
pub fn fixed_schedule_marginals(
    g: &Graph,
    params: &ChainParams,
    start: usize,
    edges: &[usize],
) -> Result<Vec<Vec<f64>>, ChainError> {
    let size = check_size(g, MAX_EXACT_VERTICES)?;
    super::run::check_vertex(g, start)?;
    if let Some(&bad) = edges.iter().find(|&&e| e >= g.num_edges()) {
        return Err(ChainError::Schedule(format!("edge index {bad} out of range")));
    }
    let n = g.num_vertices();
    let mut dist = point_mass(size, 1 << start);
    let mut rows = vec![marginals(&dist, n)];
    for &e in edges {
        dist = apply_edge(&dist, g.edge(e), params);
        rows.push(marginals(&dist, n));
    }
    Ok(rows)
}

/// One step of the random-edge chain applied to a distribution.
pub fn random_edge_step(g: &Graph, params: &ChainParams, dist: &[f64]) -> Vec<f64> {
    let weight = 1.0 / g.num_edges() as f64;
    let mut out = vec![0.0; dist.len()];
    for &edge in g.edges() {
        for (o, p) in out.iter_mut().zip(apply_edge(dist, edge, params)) {
            *o += weight * p;
        }
    }
    out
}

/// `P(label(target) = N)` after `0..=steps` random-edge steps.
pub fn occupancy_after_steps(
    g: &Graph,
    params: &ChainParams,
    start: usize,
    target: usize,
    steps: usize,
) -> Result<Vec<f64>, ChainError> {
    let size = check_size(g, MAX_EXACT_VERTICES)?;
    super::run::check_vertex(g, start)?;
    super::run::check_vertex(g, target)?;
    let mut dist = point_mass(size, 1 << start);
    let marginal = |d: &[f64]| -> f64 {
        d.iter()
            .enumerate()
            .filter(|(c, _)| c >> target & 1 == 1)
            .map(|(_, p)| p)
            .sum()
    };
    let mut out = vec![marginal(&dist)];
    for _ in 0..steps {
        if g.num_edges() > 0 {
            dist = random_edge_step(g, params, &dist);
        }
        out.push(marginal(&dist));
    }
    Ok(out)
}

/// Row-stochastic one-step matrix of the random-edge chain over all `2^V`
/// configurations.
pub fn transition_matrix(g: &Graph, params: &ChainParams) -> Result<DMatrix<f64>, ChainError> {
    let size = check_size(g, MAX_MATRIX_VERTICES)?;
    if g.num_edges() == 0 {
        return Ok(DMatrix::identity(size, size));
    }
    let mut p = DMatrix::zeros(size, size);
    for c in 0..size {
        let row = random_edge_step(g, params, &point_mass(size, c));
        for (c2, v) in row.into_iter().enumerate() {
            p[(c, c2)] = v;
        }
    }
    Ok(p)
}

/// `π(c) ∝ (d² - 1)^{#N(c)}` over non-identity configurations.
pub fn stationary_distribution(num_vertices: usize, params: &ChainParams) -> Vec<f64> {
    let size = 1usize << num_vertices;
    let w = f64::from(params.pauli_count() - 1);
    let mut pi: Vec<f64> = (0..size)
        .map(|c| if c == 0 { 0.0 } else { w.powi(c.count_ones() as i32) })
        .collect();
    let z: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|p| *p /= z);
    pi
}

/// `max_c |(πP)(c) - π(c)|` for the product-weight distribution.
pub fn stationarity_residual(g: &Graph, params: &ChainParams) -> Result<f64, ChainError> {
    let p = transition_matrix(g, params)?;
    let pi = DVector::from_vec(stationary_distribution(g.num_vertices(), params));
    let moved = p.transpose() * &pi;
    Ok((moved - pi).amax())
}

/// Expected number of random-edge steps until `target` first carries `N`,
/// from a single `N` at `start`. Solves `(I - Q) h = 1` on the transient
/// configurations.
pub fn mean_hitting_steps(g: &Graph, params: &ChainParams, start: usize, target: usize) -> Result<f64, ChainError> {
    super::run::check_vertex(g, start)?;
    super::run::check_vertex(g, target)?;
    if start == target {
        return Ok(0.0);
    }
    let p = transition_matrix(g, params)?;
    let transient: Vec<usize> = (1..p.nrows()).filter(|c| c >> target & 1 == 0).collect();
    let mut index = vec![usize::MAX; p.nrows()];
    for (i, &c) in transient.iter().enumerate() {
        index[c] = i;
    }
    let m = transient.len();
    let mut a = DMatrix::<f64>::identity(m, m);
    for (i, &c) in transient.iter().enumerate() {
        for (j, &c2) in transient.iter().enumerate() {
            a[(i, j)] -= p[(c, c2)];
        }
    }
    let h = a
        .lu()
        .solve(&DVector::from_element(m, 1.0))
        .ok_or_else(|| ChainError::Sampling("hitting-time system is singular".into()))?;
    Ok(h[index[1 << start]])
}
