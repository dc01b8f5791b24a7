use num_complex::Complex64;

use super::{QslReport, SpeedCheck, Variant};
use crate::dynamics::NonHermitianTrajectory;
use crate::error::{Error, Result};
use crate::linalg::{self, singular_values, ComplexMatrix};
use crate::units::UnitSystem;

/// Speed limit v = ‖H − (tr H/N)I‖_op/ℏ with the pointwise check
/// |dL/dt| ≤ √(⟨𝓗†𝓗⟩ − |⟨𝓗⟩|²)/ℏ, cos L = |⟨ψ_0|Ψ_t⟩|.
pub fn nonhermitian_qsl(traj: &NonHermitianTrajectory, h: &ComplexMatrix, units: &UnitSystem) -> Result<QslReport> {
    if !h.is_square() || h.rows() != traj.trajectory.dim() {
        return Err(Error::DimensionMismatch {
            expected: traj.trajectory.dim(),
            found: h.rows(),
        });
    }
    let n = h.rows();
    let mu = h.trace() / n as f64;
    let mut shifted = h.clone();
    for i in 0..n {
        shifted[(i, i)] -= mu;
    }
    let v = singular_values(&shifted)[0] / units.hbar;
    let psi0 = traj.kets[0].amplitudes();
    let angles: Vec<f64> = traj
        .kets
        .iter()
        .map(|k| linalg::dot(psi0, k.amplitudes()).norm().clamp(0.0, 1.0).acos())
        .collect();
    let spreads: Vec<f64> = traj
        .kets
        .iter()
        .map(|k| {
            let psi = k.amplitudes();
            let hp = shifted.mul_vec(psi);
            let second = linalg::norm(&hp).powi(2);
            let first: Complex64 = linalg::dot(psi, &hp);
            (second - first.norm_sqr()).max(0.0).sqrt() / units.hbar
        })
        .collect();
    let grid = traj.trajectory.grid();
    let dt = grid.dt();
    let steps = grid.steps();
    let check = SpeedCheck::from_pairs((1..steps).map(|k| {
        let rate = ((angles[k + 1] - angles[k - 1]) / (2.0 * dt)).abs();
        (rate, spreads[k])
    }));
    let angle = angles[steps];
    let mut r = QslReport::ratio(Variant::NonHermitian, angle, v, 1.0, angle);
    r.v_samples = Some(spreads.into_iter().map(Some).collect());
    r.speed_check = Some(check);
    Ok(r)
}
