use crate::error::{Error, Result};
use crate::operator::{energy_moments, HermitianOperator, Ket};
use crate::units::UnitSystem;

/// τ_min = arccos(|f0 i0| + |f1 i1|)/ω for a qubit with bounded transverse coupling ω.
pub fn hegerfeldt_tmin(initial: &Ket, target: &Ket, omega: f64) -> Result<f64> {
    if initial.dim() != 2 || target.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: if initial.dim() != 2 { initial.dim() } else { target.dim() },
        });
    }
    if !(omega > 0.0) {
        return Err(Error::InvalidInput(format!("omega must be positive, got {omega}")));
    }
    let (i, f) = (initial.amplitudes(), target.amplitudes());
    let s = (f[0].norm() * i[0].norm() + f[1].norm() * i[1].norm()).min(1.0);
    Ok(s.acos() / omega)
}

/// (1/√(γ² + ω²), π/(2ω)): the true minimal time to the excited state and the naive bound.
pub fn lz_excited_tmin(gamma: f64, omega: f64) -> Result<(f64, f64)> {
    if !(omega > 0.0) || !(gamma >= 0.0) {
        return Err(Error::InvalidInput("gamma must be non-negative and omega positive".into()));
    }
    Ok((1.0 / gamma.hypot(omega), std::f64::consts::FRAC_PI_2 / omega))
}

/// |θ_i − θ_f|/(2ω0), independent of the nonlinearity.
pub fn nonlinear_tmin(theta_i: f64, theta_f: f64, omega0: f64) -> Result<f64> {
    if !(omega0 > 0.0) {
        return Err(Error::InvalidInput(format!("omega0 must be positive, got {omega0}")));
    }
    Ok((theta_i - theta_f).abs() / (2.0 * omega0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BhattacharyyaBound {
    pub overlap: f64,
    pub delta_h: f64,
    pub tau_qsl: f64,
}

/// ℏ arccos|⟨ψ0|ψT⟩| / ΔH with ΔH taken in ψ0 under `h`.
pub fn bhattacharyya_qsl(initial: &Ket, target: &Ket, h: &HermitianOperator, units: &UnitSystem) -> Result<BhattacharyyaBound> {
    let overlap = initial.overlap(target)?;
    let delta_h = energy_moments(h, initial)?.std_dev;
    let angle = overlap.min(1.0).acos();
    let tau_qsl = if angle == 0.0 {
        0.0
    } else if delta_h < 1e-12 {
        f64::INFINITY
    } else {
        units.hbar * angle / delta_h
    };
    Ok(BhattacharyyaBound { overlap, delta_h, tau_qsl })
}
