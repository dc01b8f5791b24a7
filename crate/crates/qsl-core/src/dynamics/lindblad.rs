use num_complex::Complex64;

use super::unitary::von_neumann;
use super::{ControlledHamiltonian, RateSignal, Stage, StepHamiltonian, TimeGrid, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::operator::{check_dim, DensityMatrix, HermitianOperator};
use crate::units::UnitSystem;

const TRACE_DRIFT_LIMIT: f64 = 1e-8;

/// Jump operator with a time-dependent rate of either sign.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub operator: ComplexMatrix,
    pub rate: RateSignal,
}

/// Time-local generator
/// L(ρ) = −(i/ℏ)[H, ρ] − iλ_t[O, ρ] + Σ_k γ_k(t)(A_k ρ A_k† − ½{A_k†A_k, ρ}).
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladGenerator {
    hamiltonian: ControlledHamiltonian,
    lamb_shift: Option<(HermitianOperator, RateSignal)>,
    channels: Vec<Channel>,
    products: Vec<ComplexMatrix>,
}

impl LindbladGenerator {
    pub fn new(hamiltonian: ControlledHamiltonian, channels: Vec<Channel>) -> Result<Self> {
        let d = hamiltonian.dim();
        for c in &channels {
            check_dim(d, c.operator.rows())?;
            check_dim(d, c.operator.cols())?;
        }
        let products = channels
            .iter()
            .map(|c| c.operator.adjoint().matmul(&c.operator))
            .collect();
        Ok(Self {
            hamiltonian,
            lamb_shift: None,
            channels,
            products,
        })
    }

    pub fn with_lamb_shift(mut self, operator: HermitianOperator, rate: RateSignal) -> Result<Self> {
        check_dim(self.dim(), operator.dim())?;
        self.lamb_shift = Some((operator, rate));
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn hamiltonian(&self) -> &ControlledHamiltonian {
        &self.hamiltonian
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn lamb_shift(&self) -> Option<&(HermitianOperator, RateSignal)> {
        self.lamb_shift.as_ref()
    }

    pub fn check_grid(&self, grid: &TimeGrid) -> Result<()> {
        self.hamiltonian.check_grid(grid)?;
        for c in &self.channels {
            c.rate.check_grid(grid)?;
        }
        if let Some((_, r)) = &self.lamb_shift {
            r.check_grid(grid)?;
        }
        Ok(())
    }

    /// H + ℏλ_t O on step k: the coherent part in energy units.
    pub fn coherent_part(&self, k: usize, stage: Stage, hbar: f64) -> ComplexMatrix {
        let mut h = self.hamiltonian.step(k).into_matrix();
        if let Some((op, rate)) = &self.lamb_shift {
            h.axpy(Complex64::new(hbar * rate.value(k, stage), 0.0), op.matrix());
        }
        h
    }

    pub fn rates(&self, k: usize, stage: Stage) -> Vec<f64> {
        self.channels.iter().map(|c| c.rate.value(k, stage)).collect()
    }

    /// L(ρ) on step k at the given stage.
    pub fn apply(&self, k: usize, stage: Stage, rho: &ComplexMatrix, hbar: f64) -> ComplexMatrix {
        let h = self.coherent_part(k, stage, hbar);
        let mut out = von_neumann(&h, rho, hbar);
        for (c, ata) in self.channels.iter().zip(&self.products) {
            let g = c.rate.value(k, stage);
            if g == 0.0 {
                continue;
            }
            let a = &c.operator;
            let jump = a.matmul(rho).matmul(&a.adjoint());
            out.axpy(Complex64::new(g, 0.0), &jump);
            out.axpy(Complex64::new(-0.5 * g, 0.0), &ata.anticommutator(rho));
        }
        out
    }

    /// d²×d² matrix of L acting on column-stacked ρ.
    pub fn liouville(&self, k: usize, stage: Stage, hbar: f64) -> ComplexMatrix {
        let d = self.dim();
        let id = ComplexMatrix::identity(d);
        let h = self.coherent_part(k, stage, hbar);
        let mut l = &id.kron(&h) - &h.transpose().kron(&id);
        l = l.scale(Complex64::new(0.0, -1.0 / hbar));
        for (c, ata) in self.channels.iter().zip(&self.products) {
            let g = c.rate.value(k, stage);
            if g == 0.0 {
                continue;
            }
            let a = &c.operator;
            let mut d_part = a.conj().kron(a);
            d_part.axpy(Complex64::new(-0.5, 0.0), &id.kron(ata));
            d_part.axpy(Complex64::new(-0.5, 0.0), &ata.transpose().kron(&id));
            l.axpy(Complex64::new(g, 0.0), &d_part);
        }
        l
    }
}

/// Fixed-step RK4 integration of dρ/dt = L(ρ).
pub fn evolve_lindblad(
    generator: &LindbladGenerator,
    initial: &DensityMatrix,
    grid: &TimeGrid,
    units: &UnitSystem,
) -> Result<Trajectory> {
    check_dim(generator.dim(), initial.dim())?;
    generator.check_grid(grid)?;
    let hbar = units.hbar;
    let dt = grid.dt();
    let n = grid.steps();
    let mut states = Vec::with_capacity(n + 1);
    let mut gens = Vec::with_capacity(n + 1);
    let mut ends = Vec::with_capacity(n);
    states.push(initial.clone());
    let mut max_drift = 0.0f64;
    for k in 0..n {
        let rho = states[k].matrix();
        let k1 = generator.apply(k, Stage::Start, rho, hbar);
        let mut tmp = rho.clone();
        tmp.axpy(Complex64::new(0.5 * dt, 0.0), &k1);
        let k2 = generator.apply(k, Stage::Mid, &tmp, hbar);
        let mut tmp = rho.clone();
        tmp.axpy(Complex64::new(0.5 * dt, 0.0), &k2);
        let k3 = generator.apply(k, Stage::Mid, &tmp, hbar);
        let mut tmp = rho.clone();
        tmp.axpy(Complex64::new(dt, 0.0), &k3);
        let k4 = generator.apply(k, Stage::End, &tmp, hbar);
        let mut next = rho.clone();
        next.axpy(Complex64::new(dt / 6.0, 0.0), &k1);
        next.axpy(Complex64::new(dt / 3.0, 0.0), &k2);
        next.axpy(Complex64::new(dt / 3.0, 0.0), &k3);
        next.axpy(Complex64::new(dt / 6.0, 0.0), &k4);
        if !next.is_finite() {
            return Err(Error::IntegrationFailure {
                step: k + 1,
                reason: "state became non-finite".into(),
            });
        }
        let drift = (next.trace().re - 1.0).abs();
        if drift > TRACE_DRIFT_LIMIT {
            return Err(Error::IntegrationFailure {
                step: k + 1,
                reason: format!("trace drift {drift:.3e}"),
            });
        }
        max_drift = max_drift.max(drift);
        let state = DensityMatrix::repaired(next.hermitian_part()).map_err(|e| Error::IntegrationFailure {
            step: k + 1,
            reason: e.to_string(),
        })?;
        ends.push(generator.apply(k, Stage::End, state.matrix(), hbar));
        gens.push(k1);
        states.push(state);
    }
    log::debug!("lindblad integration: max trace drift {max_drift:.3e}");
    gens.push(ends[n - 1].clone());
    let hams = (0..=n)
        .map(|k| generator.hamiltonian().step(k.min(n - 1)))
        .collect();
    Trajectory::new(*grid, states)?
        .with_generators(gens)?
        .with_step_end_generators(ends)?
        .with_hamiltonians(hams)
}
