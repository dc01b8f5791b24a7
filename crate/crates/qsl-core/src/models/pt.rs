use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::operator::Ket;
use crate::units::UnitSystem;

/// H = [[r e^{iθ}, s], [s, r e^{−iθ}]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtQubitParams {
    pub r: f64,
    pub theta: f64,
    pub s: f64,
}

impl PtQubitParams {
    pub fn new(r: f64, theta: f64, s: f64) -> Result<Self> {
        if s == 0.0 || !s.is_finite() || !r.is_finite() || !theta.is_finite() {
            return Err(Error::InvalidInput("s must be non-zero and all parameters finite".into()));
        }
        Ok(Self { r, theta, s })
    }

    /// s² > r² sin²θ
    pub fn is_unbroken(&self) -> bool {
        self.s * self.s > (self.r * self.theta.sin()).powi(2)
    }

    /// sin α = r sinθ / s
    pub fn alpha(&self) -> f64 {
        (self.r * self.theta.sin() / self.s).asin()
    }

    /// ω = √(4s² − 4r² sin²θ)
    pub fn omega(&self) -> f64 {
        (4.0 * self.s * self.s - 4.0 * (self.r * self.theta.sin()).powi(2)).max(0.0).sqrt()
    }

    /// Time for the solution to return to its initial ray: 2πℏ/ω.
    pub fn period(&self, units: &UnitSystem) -> f64 {
        2.0 * std::f64::consts::PI * units.hbar / self.omega()
    }
}

pub fn pt_qubit_hamiltonian(p: &PtQubitParams) -> ComplexMatrix {
    let d = Complex64::from_polar(p.r, p.theta);
    let s = Complex64::new(p.s, 0.0);
    ComplexMatrix::new(2, 2, vec![d, s, s, d.conj()]).expect("finite parameters")
}

/// Unnormalized ψ(t) = e^{−itr cosθ/ℏ}/cos α · (cos(ωt/2ℏ − α), −i sin(ωt/2ℏ)) from ψ(0) = (1, 0).
pub fn pt_qubit_solution(p: &PtQubitParams, t: f64, units: &UnitSystem) -> Result<Ket> {
    if !p.is_unbroken() {
        return Err(Error::Domain(format!(
            "broken phase: s² = {} ≤ r² sin²θ = {}",
            p.s * p.s,
            (p.r * p.theta.sin()).powi(2)
        )));
    }
    let alpha = p.alpha();
    let x = p.omega() * t / (2.0 * units.hbar);
    let pre = Complex64::new(0.0, -t * p.r * p.theta.cos() / units.hbar).exp() / alpha.cos();
    Ket::new(vec![
        pre * (x - alpha).cos(),
        pre * Complex64::new(0.0, -x.sin()),
    ])
}
