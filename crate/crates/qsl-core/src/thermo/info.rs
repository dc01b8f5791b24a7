use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::operator::{von_neumann_entropy, DensityMatrix};
use crate::units::UnitSystem;

const PROJECTOR_TOL: f64 = 1e-10;

/// Maximal information rate π⟨H⟩/(ℏ ln 2) in bits per unit time.
pub fn bekenstein_rate(h_mean: f64, units: &UnitSystem) -> Result<f64> {
    if !(h_mean >= 0.0) {
        return Err(Error::InvalidInput(format!("mean energy must be non-negative, got {h_mean}")));
    }
    Ok(PI * h_mean / (units.hbar * LN_2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OttoStrokes {
    pub w1: f64,
    pub w3: f64,
    pub q2: f64,
    /// ⟨H_1^SA⟩, ⟨H_3^SA⟩.
    pub sa_means: (f64, f64),
    /// Bures angles of the two strokes.
    pub angles: (f64, f64),
    /// Stroke durations.
    pub taus: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OttoBounds {
    pub eta_sa: f64,
    pub eta_qsl: f64,
    pub p_sa: f64,
    pub p_sa_qsl: f64,
    pub tau_qsl: (f64, f64),
    /// Set when a speed-limit time vanishes and the power bound is unbounded.
    pub unbounded_power: bool,
}

/// Efficiency and power of a superadiabatic Otto cycle with instantaneous thermalization, and
/// their bounds from τ_QSL^i = ℏL_i/⟨H_SA^i⟩.
pub fn otto_engine_bounds(s: &OttoStrokes, units: &UnitSystem) -> Result<OttoBounds> {
    let output = -(s.w1 + s.w3);
    if !(output > 0.0) {
        return Err(Error::Precondition(format!("the cycle produces no work: −(W1 + W3) = {output}")));
    }
    let hbar = units.hbar;
    let tau_of = |l: f64, h: f64| if h > 0.0 { hbar * l / h } else { f64::INFINITY };
    let tau_qsl = (tau_of(s.angles.0, s.sa_means.0), tau_of(s.angles.1, s.sa_means.1));
    let tq = tau_qsl.0 + tau_qsl.1;
    let unbounded_power = !(tq > 0.0);
    let eta_qsl = output / (s.q2 + hbar * (s.angles.0 + s.angles.1) / tq);
    Ok(OttoBounds {
        eta_sa: output / (s.q2 + s.sa_means.0 + s.sa_means.1),
        eta_qsl,
        p_sa: output / (s.taus.0 + s.taus.1),
        p_sa_qsl: if unbounded_power { f64::INFINITY } else { output / tq },
        tau_qsl,
        unbounded_power,
    })
}

/// χ = S(ρ) − Σ_n 𝔭_n S(Π_nρΠ_n/𝔭_n) and the rate bound Δχ/τ_QSL.
pub fn holevo_learning(rho: &DensityMatrix, projectors: &[ComplexMatrix], tau_qsl: f64, delta_chi: f64) -> Result<(f64, f64)> {
    let d = rho.dim();
    let mut sum = ComplexMatrix::zeros(d, d);
    for (i, p) in projectors.iter().enumerate() {
        if p.rows() != d || p.cols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: p.rows() });
        }
        for (j, q) in projectors.iter().enumerate() {
            let prod = p.matmul(q);
            let expected = if i == j { p.clone() } else { ComplexMatrix::zeros(d, d) };
            if prod.distance(&expected) > PROJECTOR_TOL {
                return Err(Error::InvalidInput(format!("projectors {i} and {j} are not orthogonal projectors")));
            }
        }
        sum += p;
    }
    if sum.distance(&ComplexMatrix::identity(d)) > PROJECTOR_TOL {
        return Err(Error::InvalidInput("projectors do not sum to the identity".into()));
    }
    let mut chi = von_neumann_entropy(rho)?;
    for p in projectors {
        let block = p.matmul(rho.matrix()).matmul(p);
        let prob = block.trace().re;
        if prob > 1e-14 {
            let post = DensityMatrix::repaired(block.scale_real(1.0 / prob).hermitian_part())?;
            chi -= prob * von_neumann_entropy(&post)?;
        }
    }
    let rate = if tau_qsl > 0.0 { delta_chi / tau_qsl } else { f64::INFINITY };
    Ok((chi, rate))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandauerReport {
    pub product: f64,
    pub quantum_limit: f64,
    /// Product within 1% of πℏ/2.
    pub saturates: bool,
}

pub fn landauer_product(q_heat: f64, tau: f64, units: &UnitSystem) -> Result<LandauerReport> {
    if !(q_heat > 0.0) || !(tau > 0.0) {
        return Err(Error::InvalidInput("heat and time must be positive".into()));
    }
    let product = q_heat * tau;
    let quantum_limit = PI * units.hbar / 2.0;
    Ok(LandauerReport {
        product,
        quantum_limit,
        saturates: (product - quantum_limit).abs() <= 0.01 * quantum_limit,
    })
}
