use num_complex::Complex64;

use crate::dynamics::{ControlledHamiltonian, SampledHamiltonian, StepHamiltonian, TimeGrid};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::operator::HermitianOperator;
use crate::units::UnitSystem;

const MIN_GAP: f64 = 1e-8;

/// H1 = iℏ Σ_{m≠n} |m⟩⟨m|∂_tH|n⟩⟨n| / (ε_n − ε_m) for a given H and ∂_tH.
pub fn counterdiabatic_from(h: &HermitianOperator, dh: &ComplexMatrix, node: usize, units: &UnitSystem) -> Result<HermitianOperator> {
    let eig = h.eigen()?;
    let d = h.dim();
    for k in 1..d {
        let gap = eig.values[k] - eig.values[k - 1];
        if gap < MIN_GAP {
            return Err(Error::Degeneracy {
                node,
                lower: k - 1,
                upper: k,
                gap,
            });
        }
    }
    let vecs: Vec<Vec<Complex64>> = (0..d).map(|k| eig.vector(k)).collect();
    let mut h1 = ComplexMatrix::zeros(d, d);
    for n in 0..d {
        let dhn = dh.mul_vec(&vecs[n]);
        for m in 0..d {
            if m == n {
                continue;
            }
            let amp = linalg::dot(&vecs[m], &dhn) / (eig.values[n] - eig.values[m]);
            let coeff = Complex64::new(0.0, units.hbar) * amp;
            h1.axpy(coeff, &ComplexMatrix::outer(&vecs[m], &vecs[n]));
        }
    }
    HermitianOperator::new(h1.hermitian_part())
}

/// Counterdiabatic term at a grid node, with ∂_tH from differences of the adjacent control samples.
pub fn counterdiabatic_term(h0: &ControlledHamiltonian, grid: &TimeGrid, node: usize, units: &UnitSystem) -> Result<HermitianOperator> {
    h0.check_grid(grid)?;
    if node > grid.steps() {
        return Err(Error::InvalidInput(format!("node {node} outside grid")));
    }
    counterdiabatic_from(&h0.node(node), &h0.node_derivative(node, grid.dt()), node, units)
}

/// Step Hamiltonians H0_k + H1_k, with ∂_tH on step k from central differences of the samples.
pub fn counterdiabatic_protocol(h0: &ControlledHamiltonian, grid: &TimeGrid, units: &UnitSystem) -> Result<SampledHamiltonian> {
    h0.check_grid(grid)?;
    let n = grid.steps();
    let dt = grid.dt();
    let mut steps = Vec::with_capacity(n);
    for k in 0..n {
        let hk = h0.step(k);
        let mut dh = ComplexMatrix::zeros(h0.dim(), h0.dim());
        for (term, s) in h0.terms().iter().zip(h0.signals()) {
            let d = if k == 0 {
                (s[1] - s[0]) / dt
            } else if k == n - 1 {
                (s[n - 1] - s[n - 2]) / dt
            } else {
                (s[k + 1] - s[k - 1]) / (2.0 * dt)
            };
            dh.axpy(Complex64::new(d, 0.0), term.matrix());
        }
        let h1 = counterdiabatic_from(&hk, &dh, k, units)?;
        steps.push(hk.add(&h1)?);
    }
    SampledHamiltonian::new(steps)
}
