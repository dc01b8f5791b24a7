use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::units::UnitSystem;

/// Electron in a uniform magnetic field prepared in an equal superposition of two Landau levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracLandauParams {
    pub b_field: f64,
    pub mass: f64,
    pub charge: f64,
    pub light_speed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracLandauReport {
    pub tau_s: f64,
    pub tau_d: f64,
    pub disp_s: f64,
    pub disp_d: f64,
    pub v_s: f64,
    pub v_d: f64,
    pub v_s_exceeds_c: bool,
}

impl DiracLandauParams {
    pub fn new(b_field: f64, mass: f64, charge: f64, light_speed: f64) -> Result<Self> {
        for (name, v) in [("b_field", b_field), ("mass", mass), ("charge", charge), ("light_speed", light_speed)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { b_field, mass, charge, light_speed })
    }

    /// Field at which the Schrödinger speed reaches c: 2πm²c²/(eℏ).
    pub fn critical_field(&self, units: &UnitSystem) -> f64 {
        2.0 * PI * (self.mass * self.light_speed).powi(2) / (self.charge * units.hbar)
    }

    /// ℏc²eB/(mc²)²; large values mean the strong-field regime.
    pub fn field_strength(&self, units: &UnitSystem) -> f64 {
        let c2 = self.light_speed * self.light_speed;
        units.hbar * c2 * self.charge * self.b_field / (self.mass * c2).powi(2)
    }
}

pub fn dirac_landau_report(p: &DiracLandauParams, units: &UnitSystem) -> DiracLandauReport {
    let hbar = units.hbar;
    let (m, e, b, c) = (p.mass, p.charge, p.b_field, p.light_speed);
    let c2 = c * c;
    let rest = (m * c2).powi(2);
    let tau_s = PI * m / (e * b);
    // difference of square roots written to avoid cancellation for weak fields
    let x4 = 4.0 * hbar * c2 * e * b;
    let x2 = 2.0 * hbar * c2 * e * b;
    let diff = (x4 - x2) / ((rest + x4).sqrt() + (rest + x2).sqrt());
    let tau_d = PI * hbar / diff;
    let beta = (e * b / (2.0 * hbar)).sqrt();
    let disp_s = (PI * hbar / (2.0 * e * b)).sqrt();
    let disp_d = PI.sqrt() / (4.0 * beta) * (1.0 + 3.0 / (2.0 * 2f64.sqrt()));
    let v_s = disp_s / tau_s;
    let v_d = disp_d / tau_d;
    DiracLandauReport {
        tau_s,
        tau_d,
        disp_s,
        disp_d,
        v_s,
        v_d,
        v_s_exceeds_c: v_s > c,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schrodinger_speed_closed_form() {
        let p = DiracLandauParams::new(3.0, 2.0, 1.5, 10.0).unwrap();
        let r = dirac_landau_report(&p, &UnitSystem::NATURAL);
        let expected = (1.5f64 * 3.0 / (2.0 * PI)).sqrt() / 2.0;
        assert!((r.v_s - expected).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(DiracLandauParams::new(0.0, 1.0, 1.0, 1.0).is_err());
    }
}
