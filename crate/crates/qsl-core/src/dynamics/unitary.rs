use num_complex::Complex64;

use super::{StepHamiltonian, TimeGrid, Trajectory};
use crate::error::Result;
use crate::linalg::{eigvalsh, unitary_exp, ComplexMatrix};
use crate::operator::{check_dim, DensityMatrix, HermitianOperator, Ket, StateRef};
use crate::units::UnitSystem;

const STEP_WARNING: f64 = 0.5;

/// −(i/ℏ)[H, ρ]
pub(crate) fn von_neumann(h: &ComplexMatrix, rho: &ComplexMatrix, hbar: f64) -> ComplexMatrix {
    h.commutator(rho).scale(Complex64::new(0.0, -1.0 / hbar))
}

/// exp(−i H_k dt/ℏ) for every step, reusing the previous one when the step repeats.
pub fn step_propagators<H: StepHamiltonian + ?Sized>(
    h: &H,
    grid: &TimeGrid,
    units: &UnitSystem,
) -> Result<Vec<ComplexMatrix>> {
    h.check_grid(grid)?;
    let dt = grid.dt() / units.hbar;
    let mut out: Vec<ComplexMatrix> = Vec::with_capacity(grid.steps());
    let mut warned = false;
    for k in 0..grid.steps() {
        if k > 0 && (h.repeats_previous(k) || h.sample_count().is_none()) {
            let prev = out[k - 1].clone();
            out.push(prev);
            continue;
        }
        let hk = h.step(k);
        if !warned {
            let vals = eigvalsh(hk.matrix())?;
            let norm = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if norm * dt > STEP_WARNING {
                log::warn!("step {k}: ‖H‖·dt/ℏ = {:.3} exceeds {STEP_WARNING}; consider a finer grid", norm * dt);
                warned = true;
            }
        }
        out.push(unitary_exp(hk.matrix(), dt)?);
    }
    Ok(out)
}

/// Ordered product U_{n−1} ⋯ U_0.
pub fn total_propagator<H: StepHamiltonian + ?Sized>(
    h: &H,
    grid: &TimeGrid,
    units: &UnitSystem,
) -> Result<ComplexMatrix> {
    let steps = step_propagators(h, grid, units)?;
    let mut u = ComplexMatrix::identity(h.dim());
    for s in &steps {
        u = s.matmul(&u);
    }
    Ok(u)
}

/// Kets at every grid node.
pub fn propagate_ket<H: StepHamiltonian + ?Sized>(
    h: &H,
    initial: &Ket,
    grid: &TimeGrid,
    units: &UnitSystem,
) -> Result<Vec<Ket>> {
    check_dim(h.dim(), initial.dim())?;
    let steps = step_propagators(h, grid, units)?;
    let mut kets = Vec::with_capacity(grid.nodes());
    kets.push(initial.clone());
    for u in &steps {
        let next = Ket::new(u.mul_vec(kets.last().unwrap().amplitudes()))?;
        kets.push(next);
    }
    Ok(kets)
}

/// Exact piecewise-constant unitary evolution with generator and Hamiltonian snapshots.
pub fn evolve_unitary<'a, H: StepHamiltonian + ?Sized>(
    h: &H,
    initial: impl Into<StateRef<'a>>,
    grid: &TimeGrid,
    units: &UnitSystem,
) -> Result<Trajectory> {
    let initial = initial.into();
    check_dim(h.dim(), initial.dim())?;
    let states: Vec<DensityMatrix> = match initial {
        StateRef::Pure(k) => propagate_ket(h, k, grid, units)?
            .iter()
            .map(Ket::to_density)
            .collect(),
        StateRef::Mixed(r) => {
            let steps = step_propagators(h, grid, units)?;
            let mut states = Vec::with_capacity(grid.nodes());
            states.push(r.clone());
            for u in &steps {
                let next = states.last().unwrap().conjugate_by(u)?;
                states.push(next);
            }
            states
        }
    };
    let n = grid.steps();
    let hams: Vec<HermitianOperator> = (0..=n).map(|k| h.step(k.min(n - 1))).collect();
    let gens: Vec<ComplexMatrix> = (0..=n)
        .map(|k| von_neumann(hams[k].matrix(), states[k].matrix(), units.hbar))
        .collect();
    let ends: Vec<ComplexMatrix> = (0..n)
        .map(|k| von_neumann(hams[k].matrix(), states[k + 1].matrix(), units.hbar))
        .collect();
    Trajectory::new(*grid, states)?
        .with_generators(gens)?
        .with_step_end_generators(ends)?
        .with_hamiltonians(hams)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::ControlledHamiltonian;
    use crate::linalg::pauli;

    #[test]
    fn zero_hamiltonian_freezes_state() {
        let h = ControlledHamiltonian::constant(HermitianOperator::zeros(2));
        let k = Ket::from_real(&[0.6, 0.8]).unwrap();
        let traj = evolve_unitary(&h, &k, &TimeGrid::span(3.0, 10).unwrap(), &UnitSystem::NATURAL).unwrap();
        for s in traj.states() {
            assert!(s.matrix().distance(traj.initial().matrix()) < 1e-14);
        }
    }

    #[test]
    fn saturating_qubit_reaches_orthogonal_state() {
        let h = ControlledHamiltonian::constant(HermitianOperator::from_real_diag(&[0.0, 1.0]));
        let k = Ket::from_real(&[1.0, 1.0]).unwrap();
        let grid = TimeGrid::span(std::f64::consts::PI, 8).unwrap();
        let kets = propagate_ket(&h, &k, &grid, &UnitSystem::NATURAL).unwrap();
        assert!(kets[8].overlap(&k).unwrap() < 1e-10);
    }

    #[test]
    fn hbar_rescales_time() {
        let h = ControlledHamiltonian::constant(HermitianOperator::new(pauli::x()).unwrap());
        let grid = TimeGrid::span(0.7, 4).unwrap();
        let u1 = total_propagator(&h, &grid, &UnitSystem::new(2.0, 1.0)).unwrap();
        let u2 = total_propagator(&h, &TimeGrid::span(0.35, 4).unwrap(), &UnitSystem::NATURAL).unwrap();
        assert!(u1.distance(&u2) < 1e-14);
    }
}
