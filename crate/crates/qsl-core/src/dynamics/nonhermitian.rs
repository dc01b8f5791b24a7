use num_complex::Complex64;

use super::{TimeGrid, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::{self, expm, ComplexMatrix};
use crate::operator::{check_dim, Ket};
use crate::units::UnitSystem;

const DIVERGENCE: f64 = 1e100;

/// Normalized states of a non-unitary evolution plus the raw norms ‖ψ(t)‖.
#[derive(Debug, Clone)]
pub struct NonHermitianTrajectory {
    pub trajectory: Trajectory,
    pub kets: Vec<Ket>,
    pub raw_norms: Vec<f64>,
}

/// Propagates iℏψ̇ = Hψ with a general (not necessarily Hermitian) constant H.
pub fn evolve_nonhermitian(
    h: &ComplexMatrix,
    initial: &Ket,
    grid: &TimeGrid,
    units: &UnitSystem,
) -> Result<NonHermitianTrajectory> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            found: h.cols(),
        });
    }
    check_dim(h.rows(), initial.dim())?;
    let a = h.scale(Complex64::new(0.0, -1.0 / units.hbar));
    let u = expm(&a.scale_real(grid.dt()))?;
    let mut kets = Vec::with_capacity(grid.nodes());
    let mut norms = Vec::with_capacity(grid.nodes());
    kets.push(Ket::new(initial.amplitudes().to_vec())?);
    norms.push(1.0);
    for k in 0..grid.steps() {
        let next = u.mul_vec(kets[k].amplitudes());
        let growth = linalg::norm(&next);
        let norm = norms[k] * growth;
        if !norm.is_finite() || norm > DIVERGENCE {
            return Err(Error::Divergence { step: k + 1, norm });
        }
        let ket = Ket::new(next).map_err(|_| Error::NumericalFailure(format!("state vanished at step {}", k + 1)))?;
        kets.push(ket);
        norms.push(norm);
    }
    let gens = kets
        .iter()
        .map(|k| {
            let psi = k.amplitudes();
            let mut dpsi = a.mul_vec(psi);
            let shift = linalg::dot(psi, &dpsi).re;
            for (d, p) in dpsi.iter_mut().zip(psi) {
                *d -= p * shift;
            }
            let mut g = ComplexMatrix::outer(&dpsi, psi);
            g += &ComplexMatrix::outer(psi, &dpsi);
            g
        })
        .collect();
    let trajectory = Trajectory::from_kets(*grid, &kets)?.with_generators(gens)?;
    Ok(NonHermitianTrajectory {
        trajectory,
        kets,
        raw_norms: norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;

    #[test]
    fn hermitian_hamiltonian_keeps_unit_norm() {
        let grid = TimeGrid::span(5.0, 50).unwrap();
        let k = Ket::from_real(&[1.0, 2.0]).unwrap();
        let out = evolve_nonhermitian(&pauli::x(), &k, &grid, &UnitSystem::NATURAL).unwrap();
        for n in &out.raw_norms {
            assert!((n - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn uniform_decay() {
        let gamma = 0.8;
        let h = ComplexMatrix::identity(2).scale(Complex64::new(0.0, -gamma / 2.0));
        let grid = TimeGrid::span(3.0, 30).unwrap();
        let out = evolve_nonhermitian(&h, &Ket::basis(2, 0).unwrap(), &grid, &UnitSystem::NATURAL).unwrap();
        for (k, n) in out.raw_norms.iter().enumerate() {
            assert!((n - (-gamma * grid.time(k) / 2.0).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn growth_beyond_limit_is_divergence() {
        let h = ComplexMatrix::identity(2).scale(Complex64::new(0.0, 100.0));
        let grid = TimeGrid::span(10.0, 100).unwrap();
        let r = evolve_nonhermitian(&h, &Ket::basis(2, 0).unwrap(), &grid, &UnitSystem::NATURAL);
        assert!(matches!(r, Err(Error::Divergence { .. })));
    }
}
