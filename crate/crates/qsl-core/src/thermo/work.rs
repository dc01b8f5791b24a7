use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dynamics::{total_propagator, ControlledHamiltonian, TimeGrid};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::operator::{bures_angle, check_dim, von_neumann_entropy, DensityMatrix, HermitianOperator};
use crate::units::UnitSystem;

const MERGE_TOL: f64 = 1e-12;

/// Two-point-measurement statistics of a unitary protocol started in equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkStatistics {
    pub mean_work: f64,
    pub delta_f: f64,
    /// β⟨W⟩ − βΔF in nats.
    pub entropy_production: f64,
    pub beta: f64,
    /// (W, P(W)) sorted by W, equal values merged.
    pub work_distribution: Vec<(f64, f64)>,
    /// S(ρ_τ‖ρ_τ^eq) computed from the states.
    pub relative_entropy: f64,
    pub final_state: DensityMatrix,
    pub final_equilibrium: DensityMatrix,
}

/// e^{−βH}/Z with the ground energy factored out, and ln Z.
pub fn thermal_state(h: &HermitianOperator, beta: f64) -> Result<(DensityMatrix, f64)> {
    let eig = h.eigen()?;
    let e0 = eig.values[0];
    let z_shifted: f64 = eig.values.iter().map(|e| (-beta * (e - e0)).exp()).sum();
    let rho = eig.reconstruct(|e| Complex64::new((-beta * (e - e0)).exp() / z_shifted, 0.0));
    Ok((DensityMatrix::new(rho.hermitian_part())?, z_shifted.ln() - beta * e0))
}

/// Work statistics for initial Hamiltonian H_0, final Hamiltonian H_τ and propagator U.
pub fn work_statistics(h0: &HermitianOperator, h_tau: &HermitianOperator, u: &ComplexMatrix, beta: f64) -> Result<WorkStatistics> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidInput(format!("beta must be positive, got {beta}")));
    }
    check_dim(h0.dim(), h_tau.dim())?;
    check_dim(h0.dim(), u.rows())?;
    let d = h0.dim();
    let e0 = h0.eigen()?;
    let et = h_tau.eigen()?;
    let (rho0, ln_z0) = thermal_state(h0, beta)?;
    let (rho_eq, ln_zt) = thermal_state(h_tau, beta)?;
    let p0: Vec<f64> = {
        let g = e0.values[0];
        let w: Vec<f64> = e0.values.iter().map(|e| (-beta * (e - g)).exp()).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|x| x / z).collect()
    };
    let mut pairs = Vec::with_capacity(d * d);
    let mut mean_work = 0.0;
    for n in 0..d {
        let un = u.mul_vec(&e0.vector(n));
        for m in 0..d {
            let t = crate::linalg::dot(&et.vector(m), &un).norm_sqr();
            let p = p0[n] * t;
            let w = et.values[m] - e0.values[n];
            mean_work += p * w;
            pairs.push((w, p));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut work_distribution: Vec<(f64, f64)> = Vec::new();
    for (w, p) in pairs {
        match work_distribution.last_mut() {
            Some(last) if (w - last.0).abs() <= MERGE_TOL * w.abs().max(1.0) => last.1 += p,
            _ => work_distribution.push((w, p)),
        }
    }
    let delta_f = -(ln_zt - ln_z0) / beta;
    let final_state = rho0.conjugate_by(u)?;
    let relative_entropy =
        beta * final_state.expectation(h_tau.matrix())?.re + ln_zt - von_neumann_entropy(&final_state)?;
    Ok(WorkStatistics {
        mean_work,
        delta_f,
        entropy_production: beta * (mean_work - delta_f),
        beta,
        work_distribution,
        relative_entropy,
        final_state,
        final_equilibrium: rho_eq,
    })
}

/// Thermal start in H(t_0), unitary protocol on `grid`, final Hamiltonian H(t_N).
pub fn two_point_work(h: &ControlledHamiltonian, beta: f64, grid: &TimeGrid, units: &UnitSystem) -> Result<WorkStatistics> {
    let u = total_propagator(h, grid, units)?;
    work_statistics(&h.node(0), &h.node(grid.steps()), &u, beta)
}

/// (⟨Σ⟩, (8/π²)L²(ρ_τ, ρ_τ^eq)).
pub fn clausius_geometric_check(stats: &WorkStatistics, rho_tau: &DensityMatrix, rho_eq: &DensityMatrix) -> Result<(f64, f64)> {
    let l = bures_angle(rho_tau, rho_eq)?;
    Ok((stats.entropy_production, 8.0 / (PI * PI) * l * l))
}

/// σ_max = 2β⟨H_τ⟩ min(ΔH_0/(ℏL), π⟨H_0⟩/(2ℏL²)); infinite for L = 0.
pub fn sigma_max(beta: f64, h_tau_mean: f64, moments0: (f64, f64), angle: f64, units: &UnitSystem) -> f64 {
    if angle <= 0.0 {
        return f64::INFINITY;
    }
    let (mean0, std0) = moments0;
    let hbar = units.hbar;
    2.0 * beta * h_tau_mean * (std0 / (hbar * angle)).min(PI * mean0 / (2.0 * hbar * angle * angle))
}
