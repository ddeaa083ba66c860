//! Exact dense simulation of random circuits on small systems.
//!
//! Basis index `i = Σ_v a_v · d^v`: vertex 0 is the least significant digit.
//! A two-site gate on `(u, v)` acts on the local index `a_u · d + a_v`.
//!
//! Gate lists are in time order. States evolve as `U(t) = U_k ⋯ U_1`, and
//! operators in the Heisenberg picture as `O(t) = U(t)† O U(t)`, so an
//! evolved operator meets the gates last-to-first. Its Pauli-support
//! statistics therefore match the label chain run over the reversed list.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{Cut, Graph};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Eigenvalues below this are treated as exact zeros in `0·log 0`.
pub const SPECTRAL_CUTOFF: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("system too large: {what} needs dimension {needed} (about {bytes} bytes) but the cap is {cap}")]
    Size {
        what: &'static str,
        needed: u128,
        bytes: u128,
        cap: usize,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid request: {0}")]
    Contract(String),
}

/// Largest dense dimensions the oracle will allocate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeCap {
    /// Maximum state-vector length (default `2^12`).
    pub max_state_dim: usize,
    /// Maximum operator side length (default `2^7`).
    pub max_operator_dim: usize,
}

impl Default for SizeCap {
    fn default() -> Self {
        SizeCap {
            max_state_dim: 1 << 12,
            max_operator_dim: 1 << 7,
        }
    }
}

fn full_dim(local_dim: u32, num_vertices: usize) -> u128 {
    (local_dim as u128).saturating_pow(num_vertices as u32)
}

fn check_cap(
    what: &'static str,
    needed: u128,
    cap: usize,
    entries: impl Fn(u128) -> u128,
) -> Result<usize, OracleError> {
    if needed > cap as u128 {
        return Err(OracleError::Size {
            what,
            needed,
            bytes: entries(needed).saturating_mul(16),
            cap,
        });
    }
    Ok(needed as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyUnit {
    Nats,
    Bits,
}

impl EntropyUnit {
    pub fn log(self, x: f64) -> f64 {
        match self {
            EntropyUnit::Nats => x.ln(),
            EntropyUnit::Bits => x.log2(),
        }
    }
}

/// Dense complex matrix: a full `d^V × d^V` operator or a `d² × d²` gate.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    pub matrix: DMatrix<C64>,
}

impl DenseOperator {
    pub fn identity(dim: usize) -> Self {
        DenseOperator {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Self {
        DenseOperator {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `max |(U†U - I)_{ij}|`.
    pub fn unitarity_error(&self) -> f64 {
        let prod = self.matrix.adjoint() * &self.matrix;
        let n = self.dim();
        (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .map(|(r, c)| (prod[(r, c)] - if r == c { ONE } else { ZERO }).norm())
            .fold(0.0, f64::max)
    }

    /// The two-qudit swap gate.
    pub fn swap(local_dim: u32) -> Self {
        let d = local_dim as usize;
        let mut m = DMatrix::zeros(d * d, d * d);
        for a in 0..d {
            for b in 0..d {
                m[(b * d + a, a * d + b)] = ONE;
            }
        }
        DenseOperator { matrix: m }
    }
}

/// A gate placed on the endpoints of an edge; `sites.0` is the first tensor factor.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitGate {
    pub sites: (usize, usize),
    pub unitary: DenseOperator,
}

/// Haar-random `dim × dim` unitary: orthonormalize a complex Gaussian
/// matrix column by column. Gram–Schmidt leaves the triangular factor with a
/// positive real diagonal, which is the phase normalization that makes the
/// result Haar distributed.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DenseOperator {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = DMatrix::<C64>::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * scale, im * scale)
    });
    for k in 0..dim {
        // Two passes of modified Gram–Schmidt for numerical orthogonality.
        for _ in 0..2 {
            for j in 0..k {
                let proj: C64 = (0..dim).map(|r| m[(r, j)].conj() * m[(r, k)]).sum();
                for r in 0..dim {
                    let q = m[(r, j)];
                    m[(r, k)] -= proj * q;
                }
            }
        }
        let norm = (0..dim).map(|r| m[(r, k)].norm_sqr()).sum::<f64>().sqrt();
        for r in 0..dim {
            m[(r, k)] /= norm;
        }
    }
    DenseOperator { matrix: m }
}

/// Haar gates on a sequence of edge indices of `g`.
pub fn random_circuit<R: Rng + ?Sized>(g: &Graph, local_dim: u32, edges: &[usize], rng: &mut R) -> Vec<CircuitGate> {
    let gate_dim = (local_dim * local_dim) as usize;
    edges
        .iter()
        .map(|&e| CircuitGate {
            sites: g.edge(e),
            unitary: haar_unitary(gate_dim, rng),
        })
        .collect()
}

/// Normalized pure state on `num_vertices` qudits.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    pub amplitudes: Vec<C64>,
    pub local_dim: u32,
    pub num_vertices: usize,
}

impl QuantumState {
    /// `|0…0⟩`.
    pub fn product_zero(local_dim: u32, num_vertices: usize, cap: &SizeCap) -> Result<Self, OracleError> {
        let dim = check_cap(
            "state vector",
            full_dim(local_dim, num_vertices),
            cap.max_state_dim,
            |n| n,
        )?;
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[0] = ONE;
        Ok(QuantumState {
            amplitudes,
            local_dim,
            num_vertices,
        })
    }

    /// Builds from raw amplitudes, normalizing them.
    pub fn from_amplitudes(local_dim: u32, num_vertices: usize, amplitudes: Vec<C64>) -> Result<Self, OracleError> {
        if full_dim(local_dim, num_vertices) != amplitudes.len() as u128 {
            return Err(OracleError::Dimension(format!(
                "{} amplitudes for {num_vertices} qudits of dimension {local_dim}",
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(OracleError::Contract("zero vector".into()));
        }
        Ok(QuantumState {
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
            local_dim,
            num_vertices,
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

fn site_stride(local_dim: u32, site: usize) -> usize {
    (local_dim as usize).pow(site as u32)
}

fn digit(index: usize, local_dim: usize, stride: usize) -> usize {
    (index / stride) % local_dim
}

/// Index groups `[base + a·s_u + b·s_v]` over all bases with zero digits at `u`, `v`.
fn local_blocks(dim: usize, local_dim: u32, u: usize, v: usize) -> impl Iterator<Item = Vec<usize>> {
    let d = local_dim as usize;
    let (su, sv) = (site_stride(local_dim, u), site_stride(local_dim, v));
    (0..dim)
        .filter(move |&i| digit(i, d, su) == 0 && digit(i, d, sv) == 0)
        .map(move |base| (0..d * d).map(|k| base + (k / d) * su + (k % d) * sv).collect())
}

fn check_gate(
    gate: &DenseOperator,
    local_dim: u32,
    num_vertices: usize,
    u: usize,
    v: usize,
) -> Result<(), OracleError> {
    let want = (local_dim * local_dim) as usize;
    if gate.matrix.nrows() != want || gate.matrix.ncols() != want {
        return Err(OracleError::Dimension(format!(
            "gate is {}x{}, expected {want}x{want}",
            gate.matrix.nrows(),
            gate.matrix.ncols()
        )));
    }
    if u == v || u >= num_vertices || v >= num_vertices {
        return Err(OracleError::Contract(format!(
            "invalid gate sites ({u}, {v}) on {num_vertices} qudits"
        )));
    }
    Ok(())
}

/// Applies `gate` to the `(u, v)` tensor factors of `state`.
pub fn apply_two_site_gate(
    state: &mut QuantumState,
    gate: &DenseOperator,
    u: usize,
    v: usize,
) -> Result<(), OracleError> {
    check_gate(gate, state.local_dim, state.num_vertices, u, v)?;
    let k = gate.dim();
    let mut buf = vec![ZERO; k];
    for idx in local_blocks(state.dim(), state.local_dim, u, v) {
        for (r, slot) in buf.iter_mut().enumerate() {
            *slot = (0..k).map(|c| gate.matrix[(r, c)] * state.amplitudes[idx[c]]).sum();
        }
        for (r, &i) in idx.iter().enumerate() {
            state.amplitudes[i] = buf[r];
        }
    }
    Ok(())
}

fn check_circuit(g: &Graph, gates: &[CircuitGate]) -> Result<(), OracleError> {
    for gate in gates {
        let (u, v) = gate.sites;
        if u >= g.num_vertices() || v >= g.num_vertices() || !g.neighbors(u).contains(&v) {
            return Err(OracleError::Contract(format!(
                "gate sites ({u}, {v}) are not an edge of the graph"
            )));
        }
    }
    Ok(())
}

/// Applies the gates in order to `initial`.
pub fn evolve_circuit(g: &Graph, gates: &[CircuitGate], initial: QuantumState) -> Result<QuantumState, OracleError> {
    if initial.num_vertices != g.num_vertices() {
        return Err(OracleError::Dimension(format!(
            "state has {} qudits, graph has {} vertices",
            initial.num_vertices,
            g.num_vertices()
        )));
    }
    check_circuit(g, gates)?;
    let mut state = initial;
    for gate in gates {
        apply_two_site_gate(&mut state, &gate.unitary, gate.sites.0, gate.sites.1)?;
    }
    Ok(state)
}

/// `O ← U_e† O U_e` for a gate on `(u, v)`.
pub fn conjugate_by_gate(
    op: &mut DenseOperator,
    gate: &DenseOperator,
    local_dim: u32,
    u: usize,
    v: usize,
) -> Result<(), OracleError> {
    let n = op.dim();
    let num_vertices = (0..).take_while(|&k| site_stride(local_dim, k) < n).count();
    check_gate(gate, local_dim, num_vertices, u, v)?;
    let k = gate.dim();
    let g = &gate.matrix;
    let blocks: Vec<Vec<usize>> = local_blocks(n, local_dim, u, v).collect();
    let mut buf = vec![ZERO; k];
    // Right multiplication: each row w becomes w·U.
    for r in 0..n {
        for idx in &blocks {
            for (c, slot) in buf.iter_mut().enumerate() {
                *slot = (0..k).map(|l| op.matrix[(r, idx[l])] * g[(l, c)]).sum();
            }
            for (c, &i) in idx.iter().enumerate() {
                op.matrix[(r, i)] = buf[c];
            }
        }
    }
    // Left multiplication by U†: each column x becomes U†·x.
    for c in 0..n {
        for idx in &blocks {
            for (r, slot) in buf.iter_mut().enumerate() {
                *slot = (0..k).map(|l| g[(l, r)].conj() * op.matrix[(idx[l], c)]).sum();
            }
            for (r, &i) in idx.iter().enumerate() {
                op.matrix[(i, c)] = buf[r];
            }
        }
    }
    Ok(())
}

/// Heisenberg evolution `U(t)† O U(t)` with `U(t) = U_k ⋯ U_1`.
pub fn evolve_operator(
    op: &DenseOperator,
    gates: &[CircuitGate],
    local_dim: u32,
) -> Result<DenseOperator, OracleError> {
    let mut out = op.clone();
    for gate in gates.iter().rev() {
        conjugate_by_gate(&mut out, &gate.unitary, local_dim, gate.sites.0, gate.sites.1)?;
    }
    Ok(out)
}

/// Generalized Pauli string: vertex `v` carries `X^a Z^b` with index `a·d + b`
/// (index 0 = identity). For `d = 2`: 1 = Z, 2 = X, 3 = XZ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub local_dim: u32,
    pub indices: Vec<u32>,
}

impl PauliString {
    pub fn identity(local_dim: u32, num_vertices: usize) -> Self {
        PauliString {
            local_dim,
            indices: vec![0; num_vertices],
        }
    }

    /// Index `pauli` on `site`, identity elsewhere.
    pub fn single(local_dim: u32, num_vertices: usize, site: usize, pauli: u32) -> Result<Self, OracleError> {
        if pauli >= local_dim * local_dim {
            return Err(OracleError::Contract(format!(
                "Pauli index {pauli} >= d² = {}",
                local_dim * local_dim
            )));
        }
        if site >= num_vertices {
            return Err(OracleError::Contract(format!("site {site} out of range")));
        }
        let mut p = Self::identity(local_dim, num_vertices);
        p.indices[site] = pauli;
        Ok(p)
    }

    /// Decodes a flat index `Σ_v q_v · (d²)^v`.
    pub fn from_flat(local_dim: u32, num_vertices: usize, mut flat: usize) -> Self {
        let base = (local_dim * local_dim) as usize;
        let indices = (0..num_vertices)
            .map(|_| {
                let q = (flat % base) as u32;
                flat /= base;
                q
            })
            .collect();
        PauliString { local_dim, indices }
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.indices.len()).filter(|&v| self.indices[v] != 0).collect()
    }

    /// `σ|j⟩ = phase_j |image_j⟩`.
    pub fn monomial(&self) -> (Vec<usize>, Vec<C64>) {
        let d = self.local_dim as usize;
        let dim = d.pow(self.indices.len() as u32);
        let omega = 2.0 * std::f64::consts::PI / d as f64;
        let mut image = vec![0usize; dim];
        let mut phase = vec![ONE; dim];
        for j in 0..dim {
            let mut rest = j;
            let mut stride = 1;
            let mut target = 0;
            let mut angle = 0usize;
            for &q in &self.indices {
                let a = q as usize / d;
                let b = q as usize % d;
                let digit = rest % d;
                rest /= d;
                target += ((digit + a) % d) * stride;
                angle += b * digit;
                stride *= d;
            }
            image[j] = target;
            phase[j] = C64::from_polar(1.0, omega * (angle % d) as f64);
        }
        (image, phase)
    }

    pub fn to_dense(&self) -> DenseOperator {
        let (image, phase) = self.monomial();
        let n = image.len();
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            m[(image[j], j)] = phase[j];
        }
        DenseOperator { matrix: m }
    }
}

/// `σ · M` for a Pauli monomial `σ`.
fn monomial_left(image: &[usize], phase: &[C64], m: &DMatrix<C64>) -> DMatrix<C64> {
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    for j in 0..n {
        for c in 0..n {
            out[(image[j], c)] = phase[j] * m[(j, c)];
        }
    }
    out
}

/// `M · σ` for a Pauli monomial `σ`.
fn monomial_right(image: &[usize], phase: &[C64], m: &DMatrix<C64>) -> DMatrix<C64> {
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    for j in 0..n {
        for r in 0..n {
            out[(r, j)] = m[(r, image[j])] * phase[j];
        }
    }
    out
}

/// Coefficients `α_q = d^{-V} Tr[O σ_q†]` for every Pauli string, indexed by
/// [`PauliString::from_flat`] order.
pub fn pauli_expansion(op: &DenseOperator, local_dim: u32, num_vertices: usize) -> Vec<C64> {
    let n = op.dim();
    let count = (local_dim as usize * local_dim as usize).pow(num_vertices as u32);
    (0..count)
        .map(|flat| {
            let (image, phase) = PauliString::from_flat(local_dim, num_vertices, flat).monomial();
            let tr: C64 = (0..n).map(|j| phase[j].conj() * op.matrix[(image[j], j)]).sum();
            tr / n as f64
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PauliWeight {
    /// `Σ_{q : q_y ≠ 0} |α_q|²`.
    pub weight: f64,
    /// `Σ_q |α_q|²`; 1 for any unitary evolution of a Pauli string.
    pub total: f64,
}

/// Pauli weight of a full operator on `site`.
pub fn weight_on_site(op: &DenseOperator, local_dim: u32, num_vertices: usize, site: usize) -> PauliWeight {
    let alphas = pauli_expansion(op, local_dim, num_vertices);
    let base = (local_dim * local_dim) as usize;
    let stride = base.pow(site as u32);
    let mut weight = 0.0;
    let mut total = 0.0;
    for (flat, a) in alphas.iter().enumerate() {
        let w = a.norm_sqr();
        total += w;
        if !(flat / stride).is_multiple_of(base) {
            weight += w;
        }
    }
    PauliWeight { weight, total }
}

fn pauli_operator(
    g: &Graph,
    local_dim: u32,
    site: usize,
    pauli: u32,
    cap: &SizeCap,
) -> Result<DenseOperator, OracleError> {
    check_cap(
        "operator",
        full_dim(local_dim, g.num_vertices()),
        cap.max_operator_dim,
        |n| n * n,
    )?;
    Ok(PauliString::single(local_dim, g.num_vertices(), site, pauli)?.to_dense())
}

/// Pauli weight at `y` of `U(t)† σ U(t)` where `σ` has index `pauli` on `x`.
pub fn pauli_weight_at(
    g: &Graph,
    local_dim: u32,
    x: usize,
    pauli: u32,
    gates: &[CircuitGate],
    y: usize,
    cap: &SizeCap,
) -> Result<PauliWeight, OracleError> {
    if pauli == 0 {
        return Err(OracleError::Contract("the evolved Pauli must be non-identity".into()));
    }
    if y >= g.num_vertices() {
        return Err(OracleError::Contract(format!("site {y} out of range")));
    }
    check_circuit(g, gates)?;
    let op = pauli_operator(g, local_dim, x, pauli, cap)?;
    let evolved = evolve_operator(&op, gates, local_dim)?;
    Ok(weight_on_site(&evolved, local_dim, g.num_vertices(), y))
}

/// `C(t) = 1 - Re{d^{-V} Tr[O₁† O₂(t)† O₁ O₂(t)]}` at infinite temperature,
/// with `O₁` (index `pauli_a`) fixed at `x` and `O₂` (index `pauli_b`)
/// evolved from `y`.
#[allow(clippy::too_many_arguments)]
pub fn otoc_exact(
    g: &Graph,
    local_dim: u32,
    x: usize,
    y: usize,
    gates: &[CircuitGate],
    pauli_a: u32,
    pauli_b: u32,
    cap: &SizeCap,
) -> Result<f64, OracleError> {
    if pauli_a == 0 || pauli_b == 0 {
        return Err(OracleError::Contract(
            "identity Pauli requested; the commutator vanishes".into(),
        ));
    }
    check_circuit(g, gates)?;
    let o2 = evolve_operator(&pauli_operator(g, local_dim, y, pauli_b, cap)?, gates, local_dim)?;
    let o1 = PauliString::single(local_dim, g.num_vertices(), x, pauli_a)?;
    Ok(otoc_with_static(&o1, &o2))
}

fn otoc_with_static(o1: &PauliString, o2: &DenseOperator) -> f64 {
    let (image, phase) = o1.monomial();
    // Tr[O₁† O₂† O₁ O₂] = ⟨O₂ O₁, O₁ O₂⟩ in the Hilbert–Schmidt inner product.
    let a = monomial_right(&image, &phase, &o2.matrix);
    let b = monomial_left(&image, &phase, &o2.matrix);
    let inner: C64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    1.0 - inner.re / o2.dim() as f64
}

/// [`otoc_exact`] averaged over every non-identity `O₁` at `x`.
pub fn otoc_probe_averaged(
    g: &Graph,
    local_dim: u32,
    x: usize,
    y: usize,
    gates: &[CircuitGate],
    pauli_b: u32,
    cap: &SizeCap,
) -> Result<f64, OracleError> {
    if pauli_b == 0 {
        return Err(OracleError::Contract(
            "identity Pauli requested; the commutator vanishes".into(),
        ));
    }
    check_circuit(g, gates)?;
    let o2 = evolve_operator(&pauli_operator(g, local_dim, y, pauli_b, cap)?, gates, local_dim)?;
    let count = local_dim * local_dim - 1;
    let mut sum = 0.0;
    for a in 1..=count {
        sum += otoc_with_static(&PauliString::single(local_dim, g.num_vertices(), x, a)?, &o2);
    }
    Ok(sum / f64::from(count))
}

/// Amplitudes reshaped to `(dim_A × dim_B)` with `A` the smaller side.
fn bipartite_matrix(state: &QuantumState, cut: &Cut) -> Result<DMatrix<C64>, OracleError> {
    if cut.num_vertices() != state.num_vertices {
        return Err(OracleError::Dimension(format!(
            "cut covers {} vertices, state has {}",
            cut.num_vertices(),
            state.num_vertices
        )));
    }
    let (side_a, side_b) = if cut.size_a() <= cut.size_b() {
        (cut.side_a(), cut.side_b())
    } else {
        (cut.side_b(), cut.side_a())
    };
    let d = state.local_dim as usize;
    let dim_a = d.pow(side_a.len() as u32);
    let dim_b = d.pow(side_b.len() as u32);
    let sub_index = |i: usize, sites: &[usize]| -> usize {
        sites
            .iter()
            .rev()
            .fold(0, |acc, &s| acc * d + digit(i, d, site_stride(state.local_dim, s)))
    };
    let mut m = DMatrix::zeros(dim_a, dim_b);
    for (i, &amp) in state.amplitudes.iter().enumerate() {
        m[(sub_index(i, &side_a), sub_index(i, &side_b))] = amp;
    }
    Ok(m)
}

/// Reduced density matrix of the smaller side of `cut`.
pub fn reduced_density_matrix(state: &QuantumState, cut: &Cut) -> Result<DMatrix<C64>, OracleError> {
    let m = bipartite_matrix(state, cut)?;
    Ok(&m * m.adjoint())
}

/// Von Neumann entropy of the reduced state across `cut`.
pub fn entanglement_entropy(state: &QuantumState, cut: &Cut, unit: EntropyUnit) -> Result<f64, OracleError> {
    let rho = reduced_density_matrix(state, cut)?;
    let eig = SymmetricEigen::new(rho);
    Ok(eig
        .eigenvalues
        .iter()
        .filter(|&&l| l > SPECTRAL_CUTOFF)
        .map(|&l| -l * unit.log(l))
        .sum())
}

/// Rényi-2 entropy `-log Tr[ρ_A²]`.
pub fn renyi2(state: &QuantumState, cut: &Cut, unit: EntropyUnit) -> Result<f64, OracleError> {
    let rho = reduced_density_matrix(state, cut)?;
    let purity: f64 = rho.iter().map(|z| z.norm_sqr()).sum();
    Ok(-unit.log(purity))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_binary_tree, build_lattice};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn basis(local_dim: u32, n: usize, index: usize) -> QuantumState {
        let mut amps = vec![ZERO; (local_dim as usize).pow(n as u32)];
        amps[index] = ONE;
        QuantumState::from_amplitudes(local_dim, n, amps).unwrap()
    }

    #[test]
    fn haar_is_unitary() {
        let mut r = rng(1);
        for dim in [1, 2, 4, 9, 16] {
            assert!(haar_unitary(dim, &mut r).unitarity_error() < 1e-10);
        }
    }

    #[test]
    fn haar_low_moments() {
        let mut r = rng(2);
        let samples = 100_000;
        let dim = 4;
        let (mut s1, mut s2, mut sq) = (C64::new(0.0, 0.0), 0.0, 0.0);
        for _ in 0..samples {
            let u = haar_unitary(dim, &mut r);
            let z = u.matrix[(0, 0)];
            s1 += z;
            s2 += z.norm_sqr();
            sq += z.norm_sqr().powi(2);
        }
        let n = samples as f64;
        let mean_abs2 = s2 / n;
        let sd_abs2 = ((sq / n - mean_abs2 * mean_abs2) / n).sqrt();
        assert!((mean_abs2 - 0.25).abs() < 4.0 * sd_abs2, "{mean_abs2}");
        // Each component of U₀₀ has variance 1/(2·dim).
        let sd_mean = (1.0 / (2.0 * dim as f64) / n).sqrt();
        assert!((s1 / n).re.abs() < 4.0 * sd_mean && (s1 / n).im.abs() < 4.0 * sd_mean);
    }

    #[test]
    fn identity_and_swap_gates() {
        let mut s = basis(2, 2, 0b10); // vertex 1 = 1, vertex 0 = 0: |a_0 a_1⟩ = |01⟩
        let before = s.clone();
        apply_two_site_gate(&mut s, &DenseOperator::identity(4), 0, 1).unwrap();
        assert_eq!(s, before);
        apply_two_site_gate(&mut s, &DenseOperator::swap(2), 0, 1).unwrap();
        assert_eq!(s, basis(2, 2, 0b01));
    }

    #[test]
    fn gate_then_inverse_restores() {
        let mut r = rng(3);
        let amps: Vec<C64> = (0..27)
            .map(|_| C64::new(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5))
            .collect();
        let mut s = QuantumState::from_amplitudes(3, 3, amps).unwrap();
        let orig = s.clone();
        let u = haar_unitary(9, &mut r);
        apply_two_site_gate(&mut s, &u, 2, 0).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        apply_two_site_gate(&mut s, &u.adjoint(), 2, 0).unwrap();
        let err = s
            .amplitudes
            .iter()
            .zip(&orig.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10);
    }

    #[test]
    fn gate_contract_errors() {
        let mut s = basis(2, 3, 0);
        assert!(matches!(
            apply_two_site_gate(&mut s, &DenseOperator::identity(3), 0, 1),
            Err(OracleError::Dimension(_))
        ));
        assert!(apply_two_site_gate(&mut s, &DenseOperator::identity(4), 1, 1).is_err());
        let g = build_lattice(&[3]).unwrap();
        let bad = vec![CircuitGate {
            sites: (0, 2),
            unitary: DenseOperator::identity(4),
        }];
        assert!(evolve_circuit(&g, &bad, basis(2, 3, 0)).is_err());
    }

    #[test]
    fn long_circuits_preserve_norm_and_are_reproducible() {
        let g = build_binary_tree(2).unwrap();
        let edges: Vec<usize> = (0..1000).map(|i| (i * 7 + 3) % g.num_edges()).collect();
        let run = || {
            let gates = random_circuit(&g, 2, &edges, &mut rng(4));
            evolve_circuit(
                &g,
                &gates,
                QuantumState::product_zero(2, 7, &SizeCap::default()).unwrap(),
            )
            .unwrap()
        };
        let a = run();
        assert!((a.norm_sqr() - 1.0).abs() < 1e-9);
        assert_eq!(a, run());
        assert!(evolve_circuit(&g, &[], a.clone()).unwrap() == a);
    }

    #[test]
    fn size_cap_reports_memory() {
        let err = QuantumState::product_zero(2, 13, &SizeCap::default()).unwrap_err();
        assert!(matches!(err, OracleError::Size { needed: 8192, .. }), "{err}");
        let g = build_lattice(&[8]).unwrap();
        assert!(matches!(
            pauli_weight_at(&g, 2, 0, 1, &[], 7, &SizeCap::default()),
            Err(OracleError::Size { .. })
        ));
    }

    #[test]
    fn conjugation_matches_dense_products() {
        let mut r = rng(5);
        let g = build_lattice(&[3]).unwrap();
        let gates = random_circuit(&g, 2, &[0, 1, 0], &mut r);
        let op = PauliString::single(2, 3, 1, 2).unwrap().to_dense();
        let fast = evolve_operator(&op, &gates, 2).unwrap();
        // Dense U(t) from the state picture, column by column.
        let mut u = DMatrix::<C64>::zeros(8, 8);
        for c in 0..8 {
            let s = evolve_circuit(&g, &gates, basis(2, 3, c)).unwrap();
            for rr in 0..8 {
                u[(rr, c)] = s.amplitudes[rr];
            }
        }
        let slow = u.adjoint() * &op.matrix * &u;
        assert!((fast.matrix - slow).camax() < 1e-12);
    }

    #[test]
    fn pauli_strings() {
        // d = 2: index 1 = Z, 2 = X, 3 = XZ.
        let z = PauliString::single(2, 1, 0, 1).unwrap().to_dense().matrix;
        assert!((z[(1, 1)] - C64::new(-1.0, 0.0)).norm() < 1e-15);
        let x = PauliString::single(2, 1, 0, 2).unwrap().to_dense().matrix;
        assert_eq!((x[(0, 1)], x[(1, 0)]), (ONE, ONE));
        for d in 2..5u32 {
            for q in 0..d * d {
                let p = PauliString::single(d, 2, 1, q).unwrap();
                assert!(p.to_dense().unitarity_error() < 1e-12);
                assert_eq!(p.support(), if q == 0 { vec![] } else { vec![1] });
            }
        }
    }

    #[test]
    fn expansion_is_orthonormal() {
        for d in [2u32, 3] {
            let n = 2;
            let count = (d * d) as usize * (d * d) as usize;
            for flat in 0..count {
                let p = PauliString::from_flat(d, n, flat);
                let alphas = pauli_expansion(&p.to_dense(), d, n);
                for (i, a) in alphas.iter().enumerate() {
                    let expect = if i == flat { 1.0 } else { 0.0 };
                    assert!((a.norm() - expect).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn pauli_weight_without_gates() {
        let g = build_lattice(&[3]).unwrap();
        let cap = SizeCap::default();
        assert_eq!(pauli_weight_at(&g, 2, 0, 3, &[], 0, &cap).unwrap().weight, 1.0);
        assert_eq!(pauli_weight_at(&g, 2, 0, 3, &[], 2, &cap).unwrap().weight, 0.0);
        assert!(pauli_weight_at(&g, 2, 0, 0, &[], 2, &cap).is_err());
    }

    #[test]
    fn pauli_weight_completeness() {
        let mut r = rng(6);
        let g = build_lattice(&[2, 2]).unwrap();
        for d in [2u32, 3] {
            let edges: Vec<usize> = (0..12).map(|i| i % g.num_edges()).collect();
            let gates = random_circuit(&g, d, &edges, &mut r);
            let w = pauli_weight_at(
                &g,
                d,
                0,
                1,
                &gates,
                3,
                &SizeCap {
                    max_operator_dim: 81,
                    ..SizeCap::default()
                },
            )
            .unwrap();
            assert!((w.total - 1.0).abs() < 1e-9);
            assert!((0.0..=1.0 + 1e-12).contains(&w.weight));
        }
    }

    #[test]
    fn commutator_factor_identity() {
        // (1/(d²-1)) Σ_i (1/2d) Tr([σ_i, P]† [σ_i, P]) = d²/(d²-1) for any
        // non-identity single-qudit P.
        for d in 2..6u32 {
            for p in 1..d * d {
                let pm = PauliString::single(d, 1, 0, p).unwrap().to_dense().matrix;
                let mut acc = 0.0;
                for i in 1..d * d {
                    let s = PauliString::single(d, 1, 0, i).unwrap().to_dense().matrix;
                    let c = &s * &pm - &pm * &s;
                    acc += (c.adjoint() * &c).trace().re / (2.0 * f64::from(d));
                }
                let avg = acc / f64::from(d * d - 1);
                let want = f64::from(d * d) / f64::from(d * d - 1);
                assert!((avg - want).abs() < 1e-12, "d={d} p={p}: {avg}");
            }
        }
    }

    #[test]
    fn otoc_without_gates() {
        let g = build_lattice(&[3]).unwrap();
        let cap = SizeCap::default();
        assert!(otoc_exact(&g, 2, 0, 2, &[], 1, 2, &cap).unwrap().abs() < 1e-15);
        // X (index 2) and XZ (index 3, = -iY) anticommute: C = 2.
        assert!((otoc_exact(&g, 2, 1, 1, &[], 2, 3, &cap).unwrap() - 2.0).abs() < 1e-12);
        // Commuting Paulis on the same site.
        assert!(otoc_exact(&g, 2, 1, 1, &[], 2, 2, &cap).unwrap().abs() < 1e-12);
        assert!(otoc_exact(&g, 2, 0, 2, &[], 0, 2, &cap).is_err());
    }

    #[test]
    fn probe_averaged_otoc_is_scaled_weight() {
        let mut r = rng(7);
        let g = build_lattice(&[2, 2]).unwrap();
        let cap = SizeCap {
            max_operator_dim: 81,
            ..SizeCap::default()
        };
        for d in [2u32, 3] {
            let d2 = f64::from(d * d);
            for trial in 0..4 {
                let edges: Vec<usize> = (0..6).map(|i| (i + trial) % g.num_edges()).collect();
                let gates = random_circuit(&g, d, &edges, &mut r);
                for b in 1..d * d {
                    let c = otoc_probe_averaged(&g, d, 3, 0, &gates, b, &cap).unwrap();
                    let w = pauli_weight_at(&g, d, 0, b, &gates, 3, &cap).unwrap();
                    assert!((c - d2 / (d2 - 1.0) * w.weight).abs() < 1e-10, "{c} vs {}", w.weight);
                    for a in 1..d * d {
                        let single = otoc_exact(&g, d, 3, 0, &gates, a, b, &cap).unwrap();
                        assert!((-1e-12..=2.0 + 1e-12).contains(&single));
                    }
                }
            }
        }
    }

    #[test]
    fn entropies() {
        let cap = SizeCap::default();
        let zero = QuantumState::product_zero(2, 4, &cap).unwrap();
        for side in [vec![0], vec![1, 2], vec![0, 3, 2]] {
            let cut = Cut::new(4, side).unwrap();
            assert!(entanglement_entropy(&zero, &cut, EntropyUnit::Nats).unwrap().abs() < 1e-12);
            assert!(renyi2(&zero, &cut, EntropyUnit::Nats).unwrap().abs() < 1e-12);
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = QuantumState::from_amplitudes(2, 2, vec![C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)]).unwrap();
        let cut = Cut::new(2, [0]).unwrap();
        assert!((entanglement_entropy(&bell, &cut, EntropyUnit::Nats).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!((entanglement_entropy(&bell, &cut, EntropyUnit::Bits).unwrap() - 1.0).abs() < 1e-12);
        assert!((renyi2(&bell, &cut, EntropyUnit::Nats).unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn renyi2_below_von_neumann() {
        let mut r = rng(8);
        for _ in 0..50 {
            let amps: Vec<C64> = (0..64)
                .map(|_| C64::new(r.sample::<f64, _>(StandardNormal), r.sample::<f64, _>(StandardNormal)))
                .collect();
            let s = QuantumState::from_amplitudes(2, 6, amps).unwrap();
            let cut = Cut::new(6, [0, 2, 5]).unwrap();
            let vn = entanglement_entropy(&s, &cut, EntropyUnit::Nats).unwrap();
            let r2 = renyi2(&s, &cut, EntropyUnit::Nats).unwrap();
            assert!(r2 <= vn + 1e-9);
            let flipped = entanglement_entropy(&s, &cut.complement(), EntropyUnit::Nats).unwrap();
            assert!((vn - flipped).abs() < 1e-9);
        }
    }
}
