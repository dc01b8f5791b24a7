use num_complex::Complex64;

use super::{ratio_with_flag, QslReport, SpeedCheck, Variant};
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::operator::{bures_angle, energy_moments, schatten_norm, DensityMatrix, HermitianOperator};
use crate::units::UnitSystem;

const PURE_TOL: f64 = 1e-8;
const QFI_CUTOFF: f64 = 1e-12;
const ANGLE_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Op,
    Tr,
    Hs,
}

impl NormKind {
    pub fn order(&self) -> f64 {
        match self {
            NormKind::Op => f64::INFINITY,
            NormKind::Tr => 1.0,
            NormKind::Hs => 2.0,
        }
    }

    fn variant(&self) -> Variant {
        match self {
            NormKind::Op => Variant::GeometricOp,
            NormKind::Tr => Variant::GeometricTr,
            NormKind::Hs => Variant::GeometricHs,
        }
    }
}

/// Bures angle L(ρ_0, ρ_t) at every node.
pub fn bures_angles(traj: &Trajectory) -> Result<Vec<f64>> {
    let rho0 = traj.initial();
    traj.states().iter().map(|s| bures_angle(rho0, s)).collect()
}

/// f at every node; at interior nodes of a trajectory with step-end generators, the mean of the
/// values left and right of the node, matching a central-difference rate across a control jump.
fn node_speeds(
    traj: &Trajectory,
    mut f: impl FnMut(&DensityMatrix, &ComplexMatrix) -> Result<f64>,
) -> Result<Vec<f64>> {
    let gens = traj
        .generators()
        .ok_or_else(|| Error::Precondition("trajectory has no generator snapshots".into()))?;
    let states = traj.states();
    let n = traj.grid().steps();
    let ends = traj.step_end_generators();
    (0..=n)
        .map(|k| {
            let right = f(&states[k], &gens[k])?;
            match ends {
                Some(e) if k > 0 && k < n => Ok(0.5 * (right + f(&states[k], &e[k - 1])?)),
                _ => Ok(right),
            }
        })
        .collect()
}

/// Central differences at interior nodes.
fn interior_rates(values: &[f64], dt: f64) -> Vec<f64> {
    (1..values.len() - 1)
        .map(|k| (values[k + 1] - values[k - 1]) / (2.0 * dt))
        .collect()
}

fn energy_spread(h: &HermitianOperator, rho: &DensityMatrix) -> Result<f64> {
    Ok(energy_moments(h, rho)?.std_dev)
}

/// τ_QSL = ℏL(ρ_0, ρ_τ)/ΔE_τ with ΔE_τ = (1/τ)∫ΔH_t dt.
pub fn mt_driven(traj: &Trajectory, units: &UnitSystem) -> Result<QslReport> {
    let hams = traj
        .hamiltonians()
        .ok_or_else(|| Error::Precondition("trajectory has no Hamiltonian snapshots".into()))?;
    let states = traj.states();
    let grid = traj.grid();
    let dt = grid.dt();
    let mut integral = 0.0;
    for k in 0..grid.steps() {
        integral += 0.5 * dt * (energy_spread(&hams[k], &states[k])? + energy_spread(&hams[k], &states[k + 1])?);
    }
    let spread = integral / grid.duration();
    let angle = bures_angle(traj.initial(), traj.last())?;
    let mut r = QslReport::ratio(Variant::MtDriven, angle, spread, units.hbar, angle);
    r.v_samples = Some(
        states
            .iter()
            .zip(hams)
            .map(|(s, h)| energy_spread(h, s).map(|d| Some(d / units.hbar)))
            .collect::<Result<_>>()?,
    );
    Ok(r)
}

/// τ_QSL = sin²L(ρ_0, ρ_τ) / [(1/τ)∫‖dρ/dt‖ dt] for a pure initial state.
pub fn geometric_qsl(traj: &Trajectory, norm: NormKind) -> Result<QslReport> {
    let purity = traj.initial().purity();
    if purity < 1.0 - PURE_TOL {
        return Err(Error::Precondition(format!(
            "geometric bound needs a pure initial state, purity is {purity}"
        )));
    }
    let p = norm.order();
    let grid = traj.grid();
    let average = traj.generator_integral(|g| schatten_norm(g, p))? / grid.duration();
    let angles = bures_angles(traj)?;
    let angle = *angles.last().unwrap();
    let s = angle.sin();
    let mut r = QslReport::ratio(norm.variant(), s * s, average, 1.0, angle);
    let speeds = node_speeds(traj, |_, g| schatten_norm(g, p))?;
    let n = grid.steps();
    let v: Vec<Option<f64>> = (0..=n)
        .map(|k| {
            let l = angles[k];
            let denom = 2.0 * l.cos() * l.sin();
            if k == 0 || k == n || l < ANGLE_FLOOR || l.cos() < ANGLE_FLOOR {
                None
            } else {
                Some(speeds[k] / denom)
            }
        })
        .collect();
    let rates = interior_rates(&angles, grid.dt());
    r.speed_check = Some(SpeedCheck::from_pairs(
        (1..n).filter_map(|k| v[k].map(|b| (rates[k - 1], b))),
    ));
    r.v_samples = Some(v);
    Ok(r)
}

/// F_Q = 2 Σ_{p_j+p_k > 1e-12} |⟨j|dρ|k⟩|²/(p_j + p_k) in the eigenbasis of ρ.
pub fn fisher_information(rho: &DensityMatrix, drho: &ComplexMatrix) -> Result<f64> {
    let eig = rho.eigen()?;
    let d = rho.dim();
    let vecs: Vec<Vec<Complex64>> = (0..d).map(|k| eig.vector(k)).collect();
    let mut f = 0.0;
    for k in 0..d {
        let dk = drho.mul_vec(&vecs[k]);
        for j in 0..d {
            let s = eig.values[j].max(0.0) + eig.values[k].max(0.0);
            if s > QFI_CUTOFF {
                f += 2.0 * linalg::dot(&vecs[j], &dk).norm_sqr() / s;
            }
        }
    }
    Ok(f)
}

/// Central (one-sided at the ends) differences of the states.
fn finite_difference_generators(traj: &Trajectory) -> Vec<ComplexMatrix> {
    let s = traj.states();
    let n = s.len() - 1;
    let dt = traj.grid().dt();
    (0..=n)
        .map(|k| {
            let (a, b, h) = if k == 0 {
                (1, 0, dt)
            } else if k == n {
                (n, n - 1, dt)
            } else {
                (k + 1, k - 1, 2.0 * dt)
            };
            (s[a].matrix() - s[b].matrix()).scale_real(1.0 / h)
        })
        .collect()
}

/// τ_QSL = L(ρ_0, ρ_τ) / [(1/τ)∫½√F_Q dt].
pub fn qfi_qsl(traj: &Trajectory) -> Result<QslReport> {
    let owned;
    let traj = if traj.generators().is_some() {
        traj
    } else {
        owned = traj.clone().with_generators(finite_difference_generators(traj))?;
        &owned
    };
    let grid = traj.grid();
    let speed = |rho: &DensityMatrix, g: &ComplexMatrix| fisher_information(rho, g).map(|f| 0.5 * f.max(0.0).sqrt());
    let average = traj.step_integral(speed)? / grid.duration();
    let angles = bures_angles(traj)?;
    let angle = *angles.last().unwrap();
    let mut r = QslReport::ratio(Variant::Qfi, angle, average, 1.0, angle);
    let v = node_speeds(traj, speed)?;
    let rates = interior_rates(&angles, grid.dt());
    r.speed_check = Some(SpeedCheck::from_pairs((1..grid.steps()).map(|k| (rates[k - 1], v[k]))));
    r.v_samples = Some(v.into_iter().map(Some).collect());
    Ok(r)
}

/// τ_QSL = ‖ρ_τ − ρ_0‖_p / [(1/τ)∫‖dρ/dt‖_p dt], with the pointwise check d‖ρ_t − ρ_0‖_p/dt ≤ ‖dρ/dt‖_p.
pub fn universal_qsl(traj: &Trajectory, p: f64) -> Result<QslReport> {
    let grid = traj.grid();
    let rho0 = traj.initial().matrix();
    let distances: Vec<f64> = traj
        .states()
        .iter()
        .map(|s| schatten_norm(&(s.matrix() - rho0), p))
        .collect::<Result<_>>()?;
    let average = traj.generator_integral(|g| schatten_norm(g, p))? / grid.duration();
    let distance = *distances.last().unwrap();
    let (tau, flag) = ratio_with_flag(distance, average);
    let speeds = node_speeds(traj, |_, g| schatten_norm(g, p))?;
    let rates = interior_rates(&distances, grid.dt());
    let check = SpeedCheck::from_pairs((1..grid.steps()).map(|k| (rates[k - 1].abs(), speeds[k])));
    Ok(QslReport {
        variant: Variant::UniversalP,
        tau_qsl: tau,
        angle: distance,
        averaged_norm: average,
        v_samples: Some(speeds.into_iter().map(Some).collect()),
        flag,
        speed_check: Some(check),
        norm_order: Some(p),
    })
}
