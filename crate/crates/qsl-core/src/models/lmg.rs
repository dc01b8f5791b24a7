use num_complex::Complex64;

use crate::dynamics::{TimeGrid, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::{self, eigh, ComplexMatrix};
use crate::operator::{DensityMatrix, HermitianOperator};
use crate::units::UnitSystem;

pub const MAX_SPINS: usize = 400;

/// Probe qubit coupled to an LMG bath of `n_spins` spins, restricted to the symmetric sector.
///
/// With J_α = Σ_i σ_i^α/2 the pairwise couplings collapse to
/// Σ_{i<j}(σ_i^xσ_j^x + σ_i^yσ_j^y) = 2(J² − J_z²) − N and
/// Σ_i(σ_i^xσ^x + σ_i^yσ^y) = 2(J_+σ_− + J_−σ_+).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmgParams {
    pub n_spins: usize,
    pub lambda: f64,
    pub gamma: f64,
    /// Extra factor on the probe–bath coupling (1 takes the coupling as written; 1/N is the
    /// alternative normalization).
    pub coupling_scale: f64,
}

impl LmgParams {
    pub fn new(n_spins: usize, lambda: f64, gamma: f64) -> Result<Self> {
        if n_spins < 2 {
            return Err(Error::InvalidInput(format!("need at least 2 bath spins, got {n_spins}")));
        }
        if n_spins > MAX_SPINS {
            return Err(Error::InvalidInput(format!("{n_spins} bath spins exceeds the limit of {MAX_SPINS}")));
        }
        if !(lambda >= 0.0) || !(gamma >= 0.0) {
            return Err(Error::InvalidInput("lambda and gamma must be non-negative".into()));
        }
        Ok(Self {
            n_spins,
            lambda,
            gamma,
            coupling_scale: 1.0,
        })
    }

    pub fn with_coupling_scale(mut self, scale: f64) -> Self {
        self.coupling_scale = scale;
        self
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_spins + 1)
    }

    /// Index of |probe⟩⊗|j, m⟩ with probe 0 = σ^z up, 1 = down and m = j − `level`.
    pub fn index(&self, probe: usize, level: usize) -> usize {
        probe * (self.n_spins + 1) + level
    }

    fn j(&self) -> f64 {
        self.n_spins as f64 / 2.0
    }

    fn m(&self, level: usize) -> f64 {
        self.j() - level as f64
    }

    /// Bath energy of the Dicke state at `level`.
    pub fn bath_energy(&self, level: usize) -> f64 {
        let n = self.n_spins as f64;
        let j = self.j();
        let m = self.m(level);
        -(self.lambda / n) * (2.0 * (j * (j + 1.0) - m * m) - n) - 2.0 * m
    }

    /// Dicke level of the bath ground state (lowest index on ties).
    pub fn bath_ground_level(&self) -> usize {
        (0..=self.n_spins)
            .min_by(|&a, &b| self.bath_energy(a).total_cmp(&self.bath_energy(b)))
            .unwrap()
    }
}

pub fn lmg_probe_hamiltonian(p: &LmgParams) -> Result<HermitianOperator> {
    let n = p.n_spins;
    let dim = p.dim();
    let mut h = ComplexMatrix::zeros(dim, dim);
    let j = p.j();
    for level in 0..=n {
        let eb = p.bath_energy(level);
        h[(p.index(0, level), p.index(0, level))] += Complex64::new(eb - 1.0, 0.0);
        h[(p.index(1, level), p.index(1, level))] += Complex64::new(eb + 1.0, 0.0);
    }
    let g = -2.0 * p.gamma * p.coupling_scale;
    for level in 1..=n {
        // J_+ |m⟩ = √(j(j+1) − m(m+1)) |m+1⟩ with |m+1⟩ at level − 1
        let m = p.m(level);
        let amp = (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt();
        // J_+σ_−: probe up → down, bath m → m + 1
        let a = p.index(1, level - 1);
        let b = p.index(0, level);
        h[(a, b)] += Complex64::new(g * amp, 0.0);
        h[(b, a)] += Complex64::new(g * amp, 0.0);
    }
    HermitianOperator::new(h)
}

/// Reduced probe state with dρ_S/dt at every node; probe starts excited (σ^z down),
/// bath in its ground state.
pub fn lmg_probe_trajectory(p: &LmgParams, grid: &TimeGrid, units: &UnitSystem) -> Result<Trajectory> {
    let h = lmg_probe_hamiltonian(p)?;
    let eig = eigh(h.matrix())?;
    let dim = p.dim();
    let mut psi0 = vec![Complex64::new(0.0, 0.0); dim];
    psi0[p.index(1, p.bath_ground_level())] = Complex64::new(1.0, 0.0);
    // coefficients in the eigenbasis
    let coeffs: Vec<Complex64> = (0..dim)
        .map(|k| linalg::dot(&eig.vector(k), &psi0))
        .collect();
    let active: Vec<(usize, Vec<Complex64>)> = (0..dim)
        .filter(|&k| coeffs[k].norm() > 1e-15)
        .map(|k| (k, eig.vector(k)))
        .collect();
    let mut states = Vec::with_capacity(grid.nodes());
    let mut gens = Vec::with_capacity(grid.nodes());
    for t in grid.times() {
        let mut psi = vec![Complex64::new(0.0, 0.0); dim];
        let mut phi = vec![Complex64::new(0.0, 0.0); dim];
        for (k, vec) in &active {
            let k = *k;
            let e = eig.values[k];
            let w = coeffs[k] * Complex64::new(0.0, -e * t / units.hbar).exp();
            let dw = w * Complex64::new(0.0, -e / units.hbar);
            for (i, v) in vec.iter().enumerate() {
                psi[i] += v * w;
                phi[i] += v * dw;
            }
        }
        let rho = partial_trace_bath(p, &psi, &psi);
        let drho = &partial_trace_bath(p, &phi, &psi) + &partial_trace_bath(p, &psi, &phi);
        states.push(DensityMatrix::repaired(rho.hermitian_part())?);
        gens.push(drho);
    }
    Trajectory::new(*grid, states)?.with_generators(gens)
}

/// tr_B |a⟩⟨b|
fn partial_trace_bath(p: &LmgParams, a: &[Complex64], b: &[Complex64]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(2, 2);
    for s in 0..2 {
        for r in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for level in 0..=p.n_spins {
                acc += a[p.index(s, level)] * b[p.index(r, level)].conj();
            }
            out[(s, r)] = acc;
        }
    }
    out
}
