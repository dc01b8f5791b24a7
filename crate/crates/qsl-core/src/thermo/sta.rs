use crate::dynamics::{ControlledHamiltonian, TimeGrid};
use crate::error::{Error, Result};
use crate::models::counterdiabatic_term;
use crate::operator::{schatten_norm, Ket};
use crate::units::UnitSystem;

#[derive(Debug, Clone, PartialEq)]
pub struct StaCostReport {
    /// ∂_tC = ‖H_1(t)‖_tr per node.
    pub instantaneous_cost: Vec<f64>,
    /// C = ∫∂_tC dt.
    pub total_cost: f64,
    pub tau_qsl: f64,
    /// ε_n(t) per node.
    pub eigen_energies: Vec<f64>,
    /// Bures angle between |n_0⟩ and |n_τ⟩.
    pub angle: f64,
}

/// Cost of transitionless driving along level `level` of H_0(t) and the speed limit
/// τ_QSL = ℏτ sin²L_τ / (2∫√(ε_n² + (∂_tC)²) dt).
pub fn sta_cost_and_qsl(h0: &ControlledHamiltonian, level: usize, grid: &TimeGrid, units: &UnitSystem) -> Result<StaCostReport> {
    use crate::dynamics::StepHamiltonian;
    h0.check_grid(grid)?;
    if level >= h0.dim() {
        return Err(Error::InvalidInput(format!("level {level} outside dimension {}", h0.dim())));
    }
    let mut cost = Vec::with_capacity(grid.nodes());
    let mut energies = Vec::with_capacity(grid.nodes());
    let mut first: Option<Ket> = None;
    let mut last: Option<Ket> = None;
    for k in 0..=grid.steps() {
        let h1 = counterdiabatic_term(h0, grid, k, units)?;
        cost.push(schatten_norm(h1.matrix(), 1.0)?);
        let eig = h0.node(k).eigen()?;
        energies.push(eig.values[level]);
        let v = Ket::new(eig.vector(level))?;
        if k == 0 {
            first = Some(v);
        } else if k == grid.steps() {
            last = Some(v);
        }
    }
    let overlap = first.expect("node 0").overlap(&last.expect("last node"))?;
    let angle = overlap.min(1.0).acos();
    let total_cost = grid.trapezoid(&cost);
    let speed: Vec<f64> = energies.iter().zip(&cost).map(|(e, c)| e.hypot(*c)).collect();
    let integral = grid.trapezoid(&speed);
    let s = angle.sin();
    let tau_qsl = if integral > 0.0 {
        units.hbar * grid.duration() * s * s / (2.0 * integral)
    } else {
        0.0
    };
    Ok(StaCostReport {
        instantaneous_cost: cost,
        total_cost,
        tau_qsl,
        eigen_energies: energies,
        angle,
    })
}
