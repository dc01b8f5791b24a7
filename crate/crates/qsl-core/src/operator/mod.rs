//! Quantum states, Hermitian operators and state-space geometry.

mod geometry;

pub use geometry::{
    bures_angle, energy_moments, fidelity, matrix_function, relative_entropy, schatten_norm,
    trace_distance, von_neumann_entropy, EnergyMoments, MatrixFunction,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, eigh, ComplexMatrix, HermitianEigen};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const REPAIR_BAND: f64 = 1e-10;

/// Square matrix equal to its adjoint within 1e-12 (relative Frobenius).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        let deviation = matrix.hermiticity_defect();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self {
            matrix: ComplexMatrix::from_real_diag(diag),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn eigen(&self) -> Result<HermitianEigen> {
        eigh(&self.matrix)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            matrix: self.matrix.scale_real(s),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self {
            matrix: &self.matrix + &other.matrix,
        })
    }

    /// self + s·other
    pub fn add_scaled(&self, s: f64, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        let mut m = self.matrix.clone();
        m.axpy(Complex64::new(s, 0.0), &other.matrix);
        Ok(Self { matrix: m })
    }

    /// Shift by a multiple of the identity.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut m = self.matrix.clone();
        for i in 0..m.rows() {
            m[(i, i)] += Complex64::new(shift, 0.0);
        }
        Self { matrix: m }
    }
}

/// Pure state. The stored amplitudes are normalized; `norm_tracked` keeps the raw norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amplitudes: Vec<Complex64>,
    norm_tracked: f64,
}

impl Ket {
    /// Normalizes the given amplitudes and records their original norm.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidInput("empty ket".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("ket has non-finite amplitudes".into()));
        }
        let norm = linalg::norm(&amplitudes);
        if norm == 0.0 {
            return Err(Error::InvalidInput("zero ket".into()));
        }
        Ok(Self {
            amplitudes: amplitudes.iter().map(|z| z / norm).collect(),
            norm_tracked: norm,
        })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis state |k⟩ of dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidInput(format!("basis index {k} out of range for dimension {dim}")));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[k] = Complex64::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_tracked(&self) -> f64 {
        self.norm_tracked
    }

    /// Unnormalized vector: amplitudes × norm_tracked.
    pub fn raw(&self) -> Vec<Complex64> {
        self.amplitudes.iter().map(|z| z * self.norm_tracked).collect()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn inner(&self, other: &Ket) -> Result<Complex64> {
        check_dim(self.dim(), other.dim())?;
        Ok(linalg::dot(&self.amplitudes, &other.amplitudes))
    }

    /// |⟨self|other⟩|
    pub fn overlap(&self, other: &Ket) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
        }
    }
}

/// Mixed state: Hermitian, unit trace, positive semi-definite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates the matrix. Eigenvalues in [−1e-10, 0) are clamped to zero.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::build(matrix, false)
    }

    /// Like [`DensityMatrix::new`] but renormalizes the trace instead of rejecting a drift.
    pub fn repaired(matrix: ComplexMatrix) -> Result<Self> {
        Self::build(matrix, true)
    }

    fn build(matrix: ComplexMatrix, renormalize: bool) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        if !matrix.is_finite() {
            return Err(Error::InvalidInput("density matrix has non-finite entries".into()));
        }
        let deviation = matrix.hermiticity_defect();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let mut m = matrix.hermitian_part();
        let tr = m.trace().re;
        if renormalize {
            if tr <= 0.0 {
                return Err(Error::Domain(format!("trace {tr} is not positive")));
            }
            m = m.scale_real(1.0 / tr);
        } else if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::Domain(format!("trace {tr} differs from 1")));
        }
        let eig = eigh(&m)?;
        let min = eig.values[0];
        if min < -REPAIR_BAND {
            return Err(Error::Domain(format!("negative eigenvalue {min:.3e}")));
        }
        if min < 0.0 {
            let clamped = eig.reconstruct(|x| Complex64::new(x.max(0.0), 0.0));
            let t = clamped.trace().re;
            m = clamped.scale_real(1.0 / t);
        }
        Ok(Self { matrix: m })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn from_real_diag(diag: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diag(diag))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn eigen(&self) -> Result<HermitianEigen> {
        eigh(&self.matrix)
    }

    /// tr ρ²
    pub fn purity(&self) -> f64 {
        self.matrix.inner(&self.matrix).re
    }

    /// tr(ρ A)
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<Complex64> {
        check_dim(self.dim(), op.rows())?;
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.matrix[(i, j)] * op[(j, i)];
            }
        }
        Ok(acc)
    }

    /// U ρ U†
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        check_dim(self.dim(), u.rows())?;
        Self::repaired(u.matmul(&self.matrix).matmul(&u.adjoint()))
    }
}

/// Either kind of state, for routines that accept both.
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a Ket),
    Mixed(&'a DensityMatrix),
}

impl<'a> StateRef<'a> {
    pub fn dim(&self) -> usize {
        match self {
            StateRef::Pure(k) => k.dim(),
            StateRef::Mixed(r) => r.dim(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            StateRef::Pure(k) => k.to_density(),
            StateRef::Mixed(r) => (*r).clone(),
        }
    }

    /// ⟨A⟩ in this state.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<Complex64> {
        match self {
            StateRef::Pure(k) => {
                check_dim(k.dim(), op.rows())?;
                Ok(linalg::dot(k.amplitudes(), &op.mul_vec(k.amplitudes())))
            }
            StateRef::Mixed(r) => r.expectation(op),
        }
    }
}

impl<'a> From<&'a Ket> for StateRef<'a> {
    fn from(k: &'a Ket) -> Self {
        StateRef::Pure(k)
    }
}

impl<'a> From<&'a DensityMatrix> for StateRef<'a> {
    fn from(r: &'a DensityMatrix) -> Self {
        StateRef::Mixed(r)
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(Error::DimensionMismatch { expected, found })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_operator_rejects_asymmetric_matrix() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn density_rejects_bad_trace_and_negative_eigenvalue() {
        assert!(DensityMatrix::from_real_diag(&[0.5, 0.4]).is_err());
        assert!(DensityMatrix::from_real_diag(&[1.1, -0.1]).is_err());
    }

    #[test]
    fn density_repairs_tiny_negative_eigenvalue() {
        let rho = DensityMatrix::from_real_diag(&[1.0 + 5e-11, -5e-11]).unwrap();
        let eig = rho.eigen().unwrap();
        assert!(eig.values[0] >= 0.0);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ket_normalizes_and_tracks_norm() {
        let k = Ket::from_real(&[3.0, 4.0]).unwrap();
        assert!((k.norm_tracked() - 5.0).abs() < 1e-15);
        assert!((k.amplitudes()[0].re - 0.6).abs() < 1e-15);
        assert!((k.raw()[1].re - 4.0).abs() < 1e-14);
    }
}
