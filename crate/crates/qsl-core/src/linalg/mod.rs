//! Dense complex linear algebra.

mod eigen;
mod expm;
mod matrix;
mod svd;

pub use eigen::{eigh, eigvalsh, HermitianEigen};
pub use expm::{expm, lu_solve, unitary_exp};
pub use matrix::ComplexMatrix;
pub use svd::singular_values;

use num_complex::Complex64;

/// Pauli matrices and qubit ladder operators.
pub mod pauli {
    use super::{Complex64, ComplexMatrix};

    fn m(entries: [(f64, f64); 4]) -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |i, j| {
            let (re, im) = entries[2 * i + j];
            Complex64::new(re, im)
        })
    }

    pub fn x() -> ComplexMatrix {
        m([(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)])
    }

    pub fn y() -> ComplexMatrix {
        m([(0.0, 0.0), (0.0, -1.0), (0.0, 1.0), (0.0, 0.0)])
    }

    pub fn z() -> ComplexMatrix {
        m([(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)])
    }

    /// |0⟩⟨1|
    pub fn raising() -> ComplexMatrix {
        m([(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)])
    }

    /// |1⟩⟨0|
    pub fn lowering() -> ComplexMatrix {
        m([(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 0.0)])
    }
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
