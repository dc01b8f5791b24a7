use num_complex::Complex64;

use super::{check_dim, DensityMatrix, HermitianOperator, StateRef};
use crate::error::{Error, Result};
use crate::linalg::{self, singular_values, ComplexMatrix};

const PURE_CUTOFF: f64 = 1e-12;
const LOG_SUPPORT: f64 = 1e-14;
const PSD_TOL: f64 = 1e-10;

/// Schatten p-norm. Pass `f64::INFINITY` for the operator norm.
pub fn schatten_norm(a: &ComplexMatrix, p: f64) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    if p.is_nan() || p <= 0.0 {
        return Err(Error::InvalidInput(format!("norm order {p} must be positive")));
    }
    if p == 2.0 {
        return Ok(a.frobenius_norm());
    }
    let sv = singular_values(a);
    if p.is_infinite() {
        return Ok(sv.first().copied().unwrap_or(0.0));
    }
    if p == 1.0 {
        return Ok(sv.iter().sum());
    }
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(0.0);
    }
    let s: f64 = sv.iter().map(|&x| (x / top).powf(p)).sum();
    Ok(top * s.powf(1.0 / p))
}

/// ½‖ρ1 − ρ2‖₁
pub fn trace_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    check_dim(rho1.dim(), rho2.dim())?;
    let diff = rho1.matrix() - rho2.matrix();
    let vals = linalg::eigvalsh(&diff)?;
    Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
}

/// Uhlmann fidelity [tr √(√ρ1 ρ2 √ρ1)]², clamped to [0, 1].
pub fn fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    check_dim(rho1.dim(), rho2.dim())?;
    let e1 = rho1.eigen()?;
    let e2 = rho2.eigen()?;
    let top1 = *e1.values.last().unwrap();
    let top2 = *e2.values.last().unwrap();
    // ⟨v|ρ|v⟩ for a pure argument
    let pure = |v: Vec<Complex64>, other: &DensityMatrix| {
        linalg::dot(&v, &other.matrix().mul_vec(&v)).re
    };
    let f = if top1 >= 1.0 - PURE_CUTOFF {
        pure(e1.vector(e1.values.len() - 1), rho2)
    } else if top2 >= 1.0 - PURE_CUTOFF {
        pure(e2.vector(e2.values.len() - 1), rho1)
    } else {
        let s = e1.reconstruct(|x| Complex64::new(x.max(0.0).sqrt(), 0.0));
        let m = s.matmul(rho2.matrix()).matmul(&s);
        let vals = linalg::eigvalsh(&m.hermitian_part())?;
        let t: f64 = vals.iter().map(|&x| x.max(0.0).sqrt()).sum();
        t * t
    };
    Ok(f.clamp(0.0, 1.0))
}

/// arccos √F, in [0, π/2].
pub fn bures_angle(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    let f = fidelity(rho1, rho2)?;
    Ok(f.sqrt().clamp(0.0, 1.0).acos())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyMoments {
    pub mean: f64,
    pub std_dev: f64,
    pub ground_energy: f64,
}

pub fn energy_moments<'a>(h: &HermitianOperator, state: impl Into<StateRef<'a>>) -> Result<EnergyMoments> {
    let state = state.into();
    check_dim(h.dim(), state.dim())?;
    let m = h.matrix();
    let mean = state.expectation(m)?.re;
    // Centred second moment, free of the cancellation in ⟨H²⟩ − ⟨H⟩².
    let mut centred = m.clone();
    for i in 0..centred.rows() {
        centred[(i, i)] -= Complex64::new(mean, 0.0);
    }
    let variance = match state {
        StateRef::Pure(k) => linalg::norm(&centred.mul_vec(k.amplitudes())).powi(2),
        StateRef::Mixed(r) => r.expectation(&centred.matmul(&centred))?.re,
    };
    let ground_energy = linalg::eigvalsh(m)?[0];
    Ok(EnergyMoments {
        mean,
        std_dev: variance.max(0.0).sqrt(),
        ground_energy,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFunction {
    SqrtPsd,
    Exp,
    Log,
}

/// Spectral functional calculus on a Hermitian operator.
pub fn matrix_function(a: &HermitianOperator, kind: MatrixFunction) -> Result<ComplexMatrix> {
    let eig = a.eigen()?;
    let min = eig.values[0];
    match kind {
        MatrixFunction::SqrtPsd => {
            if min < -PSD_TOL {
                return Err(Error::Domain(format!("square root of operator with eigenvalue {min:.3e}")));
            }
            Ok(eig.reconstruct(|x| Complex64::new(x.max(0.0).sqrt(), 0.0)))
        }
        MatrixFunction::Exp => Ok(eig.reconstruct(|x| Complex64::new(x.exp(), 0.0))),
        MatrixFunction::Log => {
            if min < -PSD_TOL {
                return Err(Error::Domain(format!("logarithm of operator with eigenvalue {min:.3e}")));
            }
            Ok(eig.reconstruct(|x| {
                if x < LOG_SUPPORT {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(x.ln(), 0.0)
                }
            }))
        }
    }
}

fn xlogx(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.ln()
    }
}

/// −tr ρ ln ρ in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let vals = linalg::eigvalsh(rho.matrix())?;
    Ok((-vals.iter().map(|&p| xlogx(p)).sum::<f64>()).max(0.0))
}

/// tr ρ ln ρ − tr ρ ln σ, or +∞ when supp ρ ⊄ supp σ.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dim(rho.dim(), sigma.dim())?;
    let neg_s: f64 = linalg::eigvalsh(rho.matrix())?.iter().map(|&p| xlogx(p)).sum();
    let es = sigma.eigen()?;
    let mut cross = 0.0;
    for (j, &q) in es.values.iter().enumerate() {
        let v = es.vector(j);
        let w = linalg::dot(&v, &rho.matrix().mul_vec(&v)).re;
        if q < LOG_SUPPORT {
            if w > PURE_CUTOFF {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += w * q.ln();
    }
    Ok((neg_s - cross).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Ket;
    use approx::assert_abs_diff_eq;

    #[test]
    fn schatten_examples() {
        let id = ComplexMatrix::identity(2);
        assert_abs_diff_eq!(schatten_norm(&id, 1.0).unwrap(), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(schatten_norm(&id, 2.0).unwrap(), 2f64.sqrt(), epsilon = 1e-14);
        let d = ComplexMatrix::from_real_diag(&[3.0, -4.0]);
        assert_abs_diff_eq!(schatten_norm(&d, f64::INFINITY).unwrap(), 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(schatten_norm(&d, 1.0).unwrap(), 7.0, epsilon = 1e-14);
        assert!(schatten_norm(&d, 0.0).is_err());
    }

    #[test]
    fn schatten_rejects_non_finite() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(schatten_norm(&m, 1.0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn fidelity_examples() {
        let zero = Ket::basis(2, 0).unwrap().to_density();
        let plus = Ket::from_real(&[1.0, 1.0]).unwrap().to_density();
        let mixed = DensityMatrix::maximally_mixed(2);
        assert_abs_diff_eq!(fidelity(&zero, &zero).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fidelity(&zero, &plus).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(fidelity(&mixed, &zero).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(bures_angle(&mixed, &zero).unwrap(), std::f64::consts::FRAC_PI_4, epsilon = 1e-10);
        let one = Ket::basis(2, 1).unwrap().to_density();
        assert_abs_diff_eq!(bures_angle(&zero, &one).unwrap(), std::f64::consts::FRAC_PI_2, epsilon = 1e-10);
    }

    #[test]
    fn fidelity_dimension_mismatch() {
        let a = DensityMatrix::maximally_mixed(2);
        let b = DensityMatrix::maximally_mixed(3);
        assert!(matches!(fidelity(&a, &b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn moments_two_point_distribution() {
        let h = HermitianOperator::from_real_diag(&[0.0, 1.0]);
        let k = Ket::from_real(&[1.0, 1.0]).unwrap();
        let m = energy_moments(&h, &k).unwrap();
        assert_abs_diff_eq!(m.mean, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(m.std_dev, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(m.ground_energy, 0.0, epsilon = 1e-14);
        let e = Ket::basis(2, 1).unwrap();
        assert_eq!(energy_moments(&h, &e).unwrap().std_dev, 0.0);
    }

    #[test]
    fn matrix_function_examples() {
        let d = HermitianOperator::from_real_diag(&[4.0, 9.0]);
        let s = matrix_function(&d, MatrixFunction::SqrtPsd).unwrap();
        assert!(s.distance(&ComplexMatrix::from_real_diag(&[2.0, 3.0])) < 1e-13);
        let z = matrix_function(&HermitianOperator::zeros(3), MatrixFunction::Exp).unwrap();
        assert!(z.distance(&ComplexMatrix::identity(3)) < 1e-14);
        let bad = HermitianOperator::from_real_diag(&[1.0, -1.0]);
        assert!(matches!(matrix_function(&bad, MatrixFunction::SqrtPsd), Err(Error::Domain(_))));
    }

    #[test]
    fn entropy_examples() {
        let pure = Ket::basis(3, 1).unwrap().to_density();
        assert_abs_diff_eq!(von_neumann_entropy(&pure).unwrap(), 0.0, epsilon = 1e-14);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert_abs_diff_eq!(von_neumann_entropy(&mixed).unwrap(), 2f64.ln(), epsilon = 1e-14);
        let d = DensityMatrix::from_real_diag(&[0.9, 0.1]).unwrap();
        let oracle = -0.9 * 0.9f64.ln() - 0.1 * 0.1f64.ln();
        assert_abs_diff_eq!(von_neumann_entropy(&d).unwrap(), oracle, epsilon = 1e-14);
        assert_abs_diff_eq!(oracle, 0.325083, epsilon = 1e-6);
    }

    #[test]
    fn relative_entropy_examples() {
        let zero = Ket::basis(2, 0).unwrap().to_density();
        let one = Ket::basis(2, 1).unwrap().to_density();
        assert_eq!(relative_entropy(&zero, &one).unwrap(), f64::INFINITY);
        let r = DensityMatrix::from_real_diag(&[0.7, 0.3]).unwrap();
        let s = DensityMatrix::maximally_mixed(2);
        assert_abs_diff_eq!(relative_entropy(&r, &r).unwrap(), 0.0, epsilon = 1e-14);
        let oracle = 0.7 * (0.7f64 / 0.5).ln() + 0.3 * (0.3f64 / 0.5).ln();
        assert_abs_diff_eq!(relative_entropy(&r, &s).unwrap(), oracle, epsilon = 1e-14);
        assert_abs_diff_eq!(oracle, 0.082282, epsilon = 1e-6);
    }
}
