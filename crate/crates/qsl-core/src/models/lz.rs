use crate::dynamics::{ControlledHamiltonian, TimeGrid};
use crate::error::{Error, Result};
use crate::linalg::pauli;
use crate::operator::{HermitianOperator, Ket};

/// H(t) = ωσ_x + Γ(t)σ_z.
pub fn landau_zener(omega: f64, gamma_signal: Vec<f64>, grid: &TimeGrid) -> Result<ControlledHamiltonian> {
    if !(omega > 0.0) {
        return Err(Error::InvalidInput(format!("omega must be positive, got {omega}")));
    }
    if gamma_signal.len() != grid.steps() {
        return Err(Error::InvalidInput(format!(
            "bias signal has {} samples but the grid has {} steps",
            gamma_signal.len(),
            grid.steps()
        )));
    }
    ControlledHamiltonian::new(
        HermitianOperator::new(pauli::x().scale_real(omega))?,
        vec![HermitianOperator::new(pauli::z())?],
        vec![gamma_signal],
    )
}

/// Ground state of ωσ_x + γσ_z (real amplitudes).
pub fn lz_ground_state(omega: f64, gamma: f64) -> Result<Ket> {
    let r = omega.hypot(gamma);
    if gamma >= 0.0 {
        Ket::from_real(&[-omega, gamma + r])
    } else {
        Ket::from_real(&[r - gamma, -omega])
    }
}

/// Linear sweep of Γ from `start` to `end`, one sample per step at the step midpoints.
pub fn linear_sweep(start: f64, end: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|k| start + (end - start) * (k as f64 + 0.5) / steps as f64)
        .collect()
}
