use num_complex::Complex64;

use crate::dynamics::{
    Channel, ControlledHamiltonian, LindbladGenerator, RateSignal, TimeGrid, Trajectory,
};
use crate::error::{Error, Result};
use crate::linalg::{pauli, ComplexMatrix};
use crate::operator::{DensityMatrix, HermitianOperator};
use crate::units::UnitSystem;

const POLE_WINDOW: f64 = 1e-9;

/// Qubit resonantly coupled to a Lorentzian reservoir. Basis order: excited, ground.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcParams {
    pub omega0: f64,
    pub gamma0: f64,
    pub lambda: f64,
}

enum Regime {
    /// d = √(λ² − 2γ0λ) real.
    Overdamped(f64),
    Critical,
    /// w = √(2γ0λ − λ²), d = i·w.
    Oscillatory(f64),
}

impl JcParams {
    pub fn new(omega0: f64, gamma0: f64, lambda: f64) -> Result<Self> {
        for (name, v) in [("omega0", omega0), ("gamma0", gamma0), ("lambda", lambda)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { omega0, gamma0, lambda })
    }

    fn regime(&self) -> Regime {
        let disc = self.lambda * self.lambda - 2.0 * self.gamma0 * self.lambda;
        if disc > 0.0 {
            Regime::Overdamped(disc.sqrt())
        } else if disc < 0.0 {
            Regime::Oscillatory((-disc).sqrt())
        } else {
            Regime::Critical
        }
    }

    /// True when the decay rate changes sign (λ < 2γ0).
    pub fn is_strong_coupling(&self) -> bool {
        matches!(self.regime(), Regime::Oscillatory(_))
    }

    /// Zeros of c_t in (0, t_max]; empty in the weak-coupling regime.
    pub fn pole_times(&self, t_max: f64) -> Vec<f64> {
        match self.regime() {
            Regime::Oscillatory(w) => {
                let base = std::f64::consts::PI - (w / self.lambda).atan();
                (0..)
                    .map(|n| 2.0 * (n as f64 * std::f64::consts::PI + base) / w)
                    .take_while(|&t| t <= t_max)
                    .collect()
            }
            _ => Vec::new(),
        }
    }
}

/// Excited-state amplitude c_t (real for the resonant Lorentzian reservoir).
pub fn jc_amplitude(p: &JcParams, t: f64) -> Complex64 {
    let l = p.lambda;
    let c = match p.regime() {
        Regime::Overdamped(d) => {
            0.5 * ((d - l) * t / 2.0).exp() * (1.0 + l / d) + 0.5 * (-(d + l) * t / 2.0).exp() * (1.0 - l / d)
        }
        Regime::Critical => (-l * t / 2.0).exp() * (1.0 + l * t / 2.0),
        Regime::Oscillatory(w) => {
            (-l * t / 2.0).exp() * ((w * t / 2.0).cos() + l / w * (w * t / 2.0).sin())
        }
    };
    Complex64::new(c, 0.0)
}

/// dc_t/dt.
pub fn jc_amplitude_derivative(p: &JcParams, t: f64) -> Complex64 {
    let l = p.lambda;
    let g = p.gamma0;
    let d = match p.regime() {
        Regime::Overdamped(d) => {
            -g * l * 0.5 * (((d - l) * t / 2.0).exp() - (-(d + l) * t / 2.0).exp()) / d
        }
        Regime::Critical => -g * l * (-l * t / 2.0).exp() * t / 2.0,
        Regime::Oscillatory(w) => -g * l * (-l * t / 2.0).exp() * (w * t / 2.0).sin() / w,
    };
    Complex64::new(d, 0.0)
}

/// |c_t|²
pub fn jc_excited_population(p: &JcParams, t: f64) -> f64 {
    jc_amplitude(p, t).norm_sqr()
}

fn check_pole(p: &JcParams, t: f64) -> Result<()> {
    if let Some(&tp) = p
        .pole_times(t + 1.0)
        .iter()
        .find(|&&tp| (tp - t).abs() < POLE_WINDOW)
    {
        return Err(Error::Pole { t: tp });
    }
    Ok(())
}

/// γ_t = −2 Re(ċ_t/c_t).
pub fn jc_decay_rate(p: &JcParams, t: f64) -> Result<f64> {
    check_pole(p, t)?;
    Ok(-2.0 * (jc_amplitude_derivative(p, t) / jc_amplitude(p, t)).re)
}

/// λ_t = −2 Im(ċ_t/c_t); identically zero on resonance.
pub fn jc_lamb_shift(p: &JcParams, t: f64) -> Result<f64> {
    check_pole(p, t)?;
    Ok(-2.0 * (jc_amplitude_derivative(p, t) / jc_amplitude(p, t)).im)
}

/// Time-local generator with H = ℏω0σ+σ−, channel (σ−, γ_t) and optional (λ_t/2)σ+σ−.
/// Rates are sampled at nodes and step midpoints.
pub fn jc_generator(p: &JcParams, grid: &TimeGrid, include_lamb_shift: bool, units: &UnitSystem) -> Result<LindbladGenerator> {
    let excited = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
    let h = HermitianOperator::new(excited.scale_real(units.hbar * p.omega0))?;
    let rate = RateSignal::half_step(grid, |t| jc_decay_rate(p, t))?;
    let gen = LindbladGenerator::new(
        ControlledHamiltonian::constant(h),
        vec![Channel {
            operator: pauli::lowering(),
            rate,
        }],
    )?;
    if include_lamb_shift {
        let shift = RateSignal::half_step(grid, |t| jc_lamb_shift(p, t))?;
        gen.with_lamb_shift(HermitianOperator::new(excited.scale_real(0.5))?, shift)
    } else {
        Ok(gen)
    }
}

/// Exact solution ρ_ee = |c_t|²ρ_ee(0), ρ_eg = c_t e^{−iω0t}ρ_eg(0), with exact dρ/dt at every node.
pub fn jc_trajectory(p: &JcParams, initial: &DensityMatrix, grid: &TimeGrid) -> Result<Trajectory> {
    if initial.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: initial.dim(),
        });
    }
    let ee0 = initial.matrix()[(0, 0)].re;
    let eg0 = initial.matrix()[(0, 1)];
    let mut states = Vec::with_capacity(grid.nodes());
    let mut gens = Vec::with_capacity(grid.nodes());
    for t in grid.times() {
        let c = jc_amplitude(p, t);
        let dc = jc_amplitude_derivative(p, t);
        let phase = Complex64::new(0.0, -p.omega0 * t).exp();
        let ee = c.norm_sqr() * ee0;
        let eg = c * phase * eg0;
        let dee = 2.0 * (c.conj() * dc).re * ee0;
        let deg = (dc - c * Complex64::new(0.0, p.omega0)) * phase * eg0;
        let cplx = |x: f64| Complex64::new(x, 0.0);
        states.push(DensityMatrix::repaired(ComplexMatrix::from_rows(&[
            vec![cplx(ee), eg],
            vec![eg.conj(), cplx(1.0 - ee)],
        ])?)?);
        gens.push(ComplexMatrix::from_rows(&[vec![cplx(dee), deg], vec![deg.conj(), cplx(-dee)]])?);
    }
    Trajectory::new(*grid, states)?.with_generators(gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn amplitude_starts_at_one_in_every_regime() {
        for g in [1.0, 25.0, 200.0] {
            let p = JcParams::new(1.0, g, 50.0).unwrap();
            assert_eq!(jc_amplitude(&p, 0.0).re, 1.0);
            assert_eq!(jc_decay_rate(&p, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn regimes_join_continuously_at_critical_coupling() {
        let t = 0.07;
        let at = |g| jc_amplitude(&JcParams::new(1.0, g, 50.0).unwrap(), t).re;
        assert!((at(25.0) - at(25.0 + 1e-9)).abs() < 1e-7);
        assert!((at(25.0) - at(25.0 - 1e-9)).abs() < 1e-7);
    }

    #[test]
    fn markovian_plateau() {
        let p = JcParams::new(1.0, 1.0, 50.0).unwrap();
        let d = (50.0f64 * 50.0 - 2.0 * 50.0).sqrt();
        let plateau = 2.0 * 50.0 / (50.0 + d);
        assert!((jc_decay_rate(&p, 1.0).unwrap() - plateau).abs() < 1e-12);
        assert!((plateau - 1.0).abs() < 0.011);
    }

    #[test]
    fn pole_is_reported() {
        let p = JcParams::new(1.0, 200.0, 50.0).unwrap();
        let tp = p.pole_times(1.0)[0];
        assert!(jc_amplitude(&p, tp).re.abs() < 1e-12);
        assert!(matches!(jc_decay_rate(&p, tp), Err(Error::Pole { .. })));
        assert!(jc_decay_rate(&p, tp + 1e-6).is_ok());
    }
}
