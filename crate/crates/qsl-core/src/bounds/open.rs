use super::{BoundFlag, QslReport, Variant, ZERO_SPEED};
use crate::dynamics::{LindbladGenerator, Stage, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::eigvalsh;
use crate::operator::trace_distance;
use crate::units::UnitSystem;

#[derive(Debug, Clone, PartialEq)]
pub struct PurityBounds {
    pub mt: QslReport,
    pub ml: QslReport,
}

/// Purity speed limits τ^P = |ln P(τ) − ln P(0)| / ⟨rate⟩ with
/// MT rate 4Σ_k|γ_k(t)|‖A_k‖²_hs and ML rate ‖𝓛_t + 𝓛_t†‖_op (𝓛 the Liouville-space generator).
pub fn purity_qsl(generator: &LindbladGenerator, traj: &Trajectory, units: &UnitSystem) -> Result<PurityBounds> {
    let grid = traj.grid();
    generator.check_grid(grid)?;
    if generator.dim() != traj.dim() {
        return Err(Error::DimensionMismatch {
            expected: generator.dim(),
            found: traj.dim(),
        });
    }
    let hs2: Vec<f64> = generator
        .channels()
        .iter()
        .map(|c| c.operator.frobenius_norm().powi(2))
        .collect();
    let mt_rate = |k: usize, stage: Stage| -> f64 {
        4.0 * generator
            .rates(k, stage)
            .iter()
            .zip(&hs2)
            .map(|(g, a)| g.abs() * a)
            .sum::<f64>()
    };
    let ml_rate = |k: usize, stage: Stage| -> Result<f64> {
        let l = generator.liouville(k, stage, units.hbar);
        let sym = &l + &l.adjoint();
        let v = eigvalsh(&sym.hermitian_part())?;
        Ok(v[0].abs().max(v[v.len() - 1].abs()))
    };
    let dt = grid.dt();
    let (mut mt_int, mut ml_int) = (0.0, 0.0);
    for k in 0..grid.steps() {
        mt_int += 0.5 * dt * (mt_rate(k, Stage::Start) + mt_rate(k, Stage::End));
        ml_int += 0.5 * dt * (ml_rate(k, Stage::Start)? + ml_rate(k, Stage::End)?);
    }
    let numerator = (traj.last().purity().ln() - traj.initial().purity().ln()).abs();
    let tau = grid.duration();
    let bound = |variant, average: f64| {
        if average < ZERO_SPEED {
            // No dissipation: purity is conserved and any numerator left is integration error.
            let mut r = QslReport::ratio(variant, 0.0, average, 1.0, numerator);
            r.flag = Some(BoundFlag::Trivial);
            r
        } else {
            QslReport::ratio(variant, numerator, average, 1.0, numerator)
        }
    };
    Ok(PurityBounds {
        mt: bound(Variant::PurityMt, mt_int / tau),
        ml: bound(Variant::PurityMl, ml_int / tau),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonMarkovianityReport {
    /// Σ over intervals with σ > 0 of ∫σ dt.
    pub n_measure: f64,
    /// σ(t) = d/dt D(ρ_1(t), ρ_2(t)) per node.
    pub sigma_samples: Vec<f64>,
    /// D(ρ_1(t), ρ_2(t)) = ½‖ρ_1 − ρ_2‖_tr per node.
    pub distances: Vec<f64>,
    pub pair_description: String,
}

/// Information backflow between two trajectories of the same dynamics.
pub fn non_markovianity(first: &Trajectory, second: &Trajectory, pair_description: &str) -> Result<NonMarkovianityReport> {
    if first.grid() != second.grid() {
        return Err(Error::InvalidInput("trajectories live on different grids".into()));
    }
    let grid = first.grid();
    let d: Vec<f64> = first
        .states()
        .iter()
        .zip(second.states())
        .map(|(a, b)| trace_distance(a, b))
        .collect::<Result<_>>()?;
    let n = grid.steps();
    let dt = grid.dt();
    let sigma: Vec<f64> = (0..=n)
        .map(|k| {
            if k == 0 {
                (d[1] - d[0]) / dt
            } else if k == n {
                (d[n] - d[n - 1]) / dt
            } else {
                (d[k + 1] - d[k - 1]) / (2.0 * dt)
            }
        })
        .collect();
    let positive: Vec<f64> = sigma.iter().map(|s| s.max(0.0)).collect();
    let n_measure = grid.trapezoid(&positive);
    Ok(NonMarkovianityReport {
        n_measure,
        sigma_samples: sigma,
        distances: d,
        pair_description: pair_description.to_string(),
    })
}
