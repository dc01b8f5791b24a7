use std::f64::consts::{FRAC_PI_2, PI};

use super::{BoundFlag, QslReport, Variant, ZERO_SPEED};
use crate::error::Result;
use crate::operator::{bures_angle, energy_moments, DensityMatrix, HermitianOperator, StateRef};
use crate::units::UnitSystem;

/// Mandelstam–Tamm, Margolus–Levitin and their maximum for orthogonalization.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedBounds {
    pub mt: QslReport,
    pub ml: QslReport,
    pub unified: QslReport,
}

fn report(variant: Variant, tau: f64, angle: f64, norm: f64) -> QslReport {
    QslReport {
        variant,
        tau_qsl: tau,
        angle,
        averaged_norm: norm,
        v_samples: None,
        flag: if tau.is_infinite() { Some(BoundFlag::Infinite) } else { None },
        speed_check: None,
        norm_order: None,
    }
}

/// MT = πℏ/(2ΔH), ML = πℏ/(2⟨H⟩), unified = max of both, from given moments.
pub fn unified_from_moments(mean: f64, std_dev: f64, hbar: f64) -> ClosedBounds {
    let mt = if std_dev < ZERO_SPEED { f64::INFINITY } else { hbar * FRAC_PI_2 / std_dev };
    let ml = if mean < ZERO_SPEED { f64::INFINITY } else { PI * hbar / (2.0 * mean) };
    ClosedBounds {
        mt: report(Variant::Mt, mt, FRAC_PI_2, std_dev),
        ml: report(Variant::Ml, ml, FRAC_PI_2, mean),
        unified: report(Variant::Unified, mt.max(ml), FRAC_PI_2, std_dev.min(mean)),
    }
}

pub fn mt_ml_unified<'a>(
    h: &HermitianOperator,
    state: impl Into<StateRef<'a>>,
    shift_ground: bool,
    units: &UnitSystem,
) -> Result<ClosedBounds> {
    let m = energy_moments(h, state)?;
    let mean = if shift_ground { m.mean - m.ground_energy } else { m.mean };
    Ok(unified_from_moments(mean, m.std_dev, units.hbar))
}

/// max(ℏL/ΔH, 2ℏL²/(π⟨H⟩)) from given moments.
pub fn glm_from_moments(mean: f64, std_dev: f64, angle: f64, hbar: f64) -> QslReport {
    if angle == 0.0 {
        let mut r = report(Variant::Glm, 0.0, 0.0, std_dev);
        r.flag = Some(BoundFlag::Trivial);
        return r;
    }
    let mt = if std_dev < ZERO_SPEED { f64::INFINITY } else { hbar * angle / std_dev };
    let ml = if mean < ZERO_SPEED {
        f64::INFINITY
    } else {
        2.0 * hbar * angle * angle / (PI * mean)
    };
    report(Variant::Glm, mt.max(ml), angle, std_dev)
}

/// Arbitrary-angle bound with moments taken in ρ0 and L the Bures angle between ρ0 and ρτ.
pub fn glm_bound(
    h: &HermitianOperator,
    rho0: &DensityMatrix,
    rho_tau: &DensityMatrix,
    shift_ground: bool,
    units: &UnitSystem,
) -> Result<QslReport> {
    let angle = bures_angle(rho0, rho_tau)?;
    let m = energy_moments(h, rho0)?;
    let mean = if shift_ground { m.mean - m.ground_energy } else { m.mean };
    Ok(glm_from_moments(mean, m.std_dev, angle, units.hbar))
}
