use num_complex::Complex64;

use super::{RateSignal, Stage, TimeGrid, Trajectory};
use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::Ket;
use crate::units::UnitSystem;

const STEP_DRIFT_LIMIT: f64 = 1e-6;

/// Two-mode mean-field model iℏψ̇ = [(Γ(t) + κ(|ψ1|² − |ψ2|²))σ_z + ω(t)σ_x]ψ.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearTwoModeParams {
    pub kappa: f64,
    pub bias: RateSignal,
    pub coupling: RateSignal,
}

impl NonlinearTwoModeParams {
    pub fn new(kappa: f64, bias: RateSignal, coupling: RateSignal) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(Error::InvalidInput("kappa must be finite".into()));
        }
        Ok(Self { kappa, bias, coupling })
    }

    fn rhs(&self, k: usize, stage: Stage, psi: &[Complex64; 2], hbar: f64) -> [Complex64; 2] {
        let z = self.bias.value(k, stage) + self.kappa * (psi[0].norm_sqr() - psi[1].norm_sqr());
        let x = self.coupling.value(k, stage);
        let h0 = psi[0] * z + psi[1] * x;
        let h1 = psi[0] * x - psi[1] * z;
        let f = Complex64::new(0.0, -1.0 / hbar);
        [h0 * f, h1 * f]
    }
}

fn shifted(psi: &[Complex64; 2], d: &[Complex64; 2], h: f64) -> [Complex64; 2] {
    [psi[0] + d[0] * h, psi[1] + d[1] * h]
}

/// Fixed-step RK4 with per-step renormalization.
pub fn evolve_nonlinear_two_mode(
    params: &NonlinearTwoModeParams,
    initial: &Ket,
    grid: &TimeGrid,
    units: &UnitSystem,
) -> Result<Trajectory> {
    if initial.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: initial.dim(),
        });
    }
    params.bias.check_grid(grid)?;
    params.coupling.check_grid(grid)?;
    let kets = integrate(params, initial, grid, units)?;
    Trajectory::from_kets(*grid, &kets)
}

/// Kets at every node; exposed for the control layer.
pub(crate) fn integrate(
    params: &NonlinearTwoModeParams,
    initial: &Ket,
    grid: &TimeGrid,
    units: &UnitSystem,
) -> Result<Vec<Ket>> {
    let dt = grid.dt();
    let hbar = units.hbar;
    let a = initial.amplitudes();
    let mut psi = [a[0], a[1]];
    let mut kets = Vec::with_capacity(grid.nodes());
    kets.push(initial.clone());
    let mut max_drift = 0.0f64;
    for k in 0..grid.steps() {
        let k1 = params.rhs(k, Stage::Start, &psi, hbar);
        let k2 = params.rhs(k, Stage::Mid, &shifted(&psi, &k1, 0.5 * dt), hbar);
        let k3 = params.rhs(k, Stage::Mid, &shifted(&psi, &k2, 0.5 * dt), hbar);
        let k4 = params.rhs(k, Stage::End, &shifted(&psi, &k3, dt), hbar);
        let next = [
            psi[0] + (k1[0] + k2[0] * 2.0 + k3[0] * 2.0 + k4[0]) * (dt / 6.0),
            psi[1] + (k1[1] + k2[1] * 2.0 + k3[1] * 2.0 + k4[1]) * (dt / 6.0),
        ];
        let norm = linalg::norm(&next);
        let drift = (norm - 1.0).abs();
        if !drift.is_finite() || drift > STEP_DRIFT_LIMIT {
            return Err(Error::StepSize { step: k + 1, drift });
        }
        max_drift = max_drift.max(drift);
        psi = [next[0] / norm, next[1] / norm];
        kets.push(Ket::new(psi.to_vec())?);
    }
    log::debug!("nonlinear integration: max per-step norm drift {max_drift:.3e}");
    Ok(kets)
}
