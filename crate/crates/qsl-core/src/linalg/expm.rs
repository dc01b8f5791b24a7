use num_complex::Complex64;

use super::eigen::eigh;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const PADE_ORDERS: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_230e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068e0),
];
const THETA_13: f64 = 5.371_920_351_148_152;

fn pade_coefficients(m: usize) -> &'static [f64] {
    match m {
        3 => &[120.0, 60.0, 12.0, 1.0],
        5 => &[30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0],
        7 => &[17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0],
        9 => &[
            17643225600.0,
            8821612800.0,
            2075673600.0,
            302702400.0,
            30270240.0,
            2162160.0,
            110880.0,
            3960.0,
            90.0,
            1.0,
        ],
        _ => &[
            64764752532480000.0,
            32382376266240000.0,
            7771770303897600.0,
            1187353796428800.0,
            129060195264000.0,
            10559470521600.0,
            670442572800.0,
            33522128640.0,
            1323241920.0,
            40840800.0,
            960960.0,
            16380.0,
            182.0,
            1.0,
        ],
    }
}

/// Matrix exponential of a general square matrix (scaling and squaring with Padé approximants).
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    if !a.is_finite() {
        return Err(Error::InvalidInput("expm of non-finite matrix".into()));
    }
    let n = a.rows();
    let ident = ComplexMatrix::identity(n);
    let norm = a.norm_one();
    for &(m, theta) in &PADE_ORDERS {
        if norm <= theta {
            return pade(a, m, &ident);
        }
    }
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a.scale_real(0.5f64.powi(s));
    let mut r = pade(&scaled, 13, &ident)?;
    for _ in 0..s {
        r = r.matmul(&r);
    }
    if !r.is_finite() {
        return Err(Error::NumericalFailure("expm overflow".into()));
    }
    Ok(r)
}

fn pade(a: &ComplexMatrix, m: usize, ident: &ComplexMatrix) -> Result<ComplexMatrix> {
    let b = pade_coefficients(m);
    let a2 = a.matmul(a);
    let (u, v) = if m == 13 {
        let a4 = a2.matmul(&a2);
        let a6 = a4.matmul(&a2);
        let mut inner_u = a6.scale_real(b[13]);
        inner_u.axpy(Complex64::new(b[11], 0.0), &a4);
        inner_u.axpy(Complex64::new(b[9], 0.0), &a2);
        let mut u = a6.matmul(&inner_u);
        u.axpy(Complex64::new(b[7], 0.0), &a6);
        u.axpy(Complex64::new(b[5], 0.0), &a4);
        u.axpy(Complex64::new(b[3], 0.0), &a2);
        u.axpy(Complex64::new(b[1], 0.0), ident);
        let u = a.matmul(&u);
        let mut inner_v = a6.scale_real(b[12]);
        inner_v.axpy(Complex64::new(b[10], 0.0), &a4);
        inner_v.axpy(Complex64::new(b[8], 0.0), &a2);
        let mut v = a6.matmul(&inner_v);
        v.axpy(Complex64::new(b[6], 0.0), &a6);
        v.axpy(Complex64::new(b[4], 0.0), &a4);
        v.axpy(Complex64::new(b[2], 0.0), &a2);
        v.axpy(Complex64::new(b[0], 0.0), ident);
        (u, v)
    } else {
        let mut powers = vec![ident.clone()];
        for k in 1..=m / 2 {
            powers.push(powers[k - 1].matmul(&a2));
        }
        let n = a.rows();
        let mut u = ComplexMatrix::zeros(n, n);
        let mut v = ComplexMatrix::zeros(n, n);
        for (k, p) in powers.iter().enumerate() {
            u.axpy(Complex64::new(b[2 * k + 1], 0.0), p);
            v.axpy(Complex64::new(b[2 * k], 0.0), p);
        }
        (a.matmul(&u), v)
    };
    let p = &v + &u;
    let q = &v - &u;
    lu_solve(&q, &p)
}

/// Solves A X = B by LU decomposition with partial pivoting.
pub fn lu_solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.rows();
    if !a.is_square() || b.rows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.rows(),
        });
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    let m = b.cols();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for k in 0..n {
        let mut piv = k;
        let mut best = lu[(k, k)].norm();
        for i in k + 1..n {
            let v = lu[(i, k)].norm();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best <= 1e-300 * scale {
            return Err(Error::NumericalFailure("singular matrix in LU solve".into()));
        }
        if piv != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(piv, j)];
                lu[(piv, j)] = t;
            }
            for j in 0..m {
                let t = x[(k, j)];
                x[(k, j)] = x[(piv, j)];
                x[(piv, j)] = t;
            }
        }
        let d = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / d;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            lu[(i, k)] = f;
            for j in k + 1..n {
                let t = lu[(k, j)];
                lu[(i, j)] -= f * t;
            }
            for j in 0..m {
                let t = x[(k, j)];
                x[(i, j)] -= f * t;
            }
        }
    }
    for k in (0..n).rev() {
        let d = lu[(k, k)];
        for j in 0..m {
            let mut acc = x[(k, j)];
            for i in k + 1..n {
                acc -= lu[(k, i)] * x[(i, j)];
            }
            x[(k, j)] = acc / d;
        }
    }
    Ok(x)
}

/// exp(−i H t) for Hermitian H. Qubits use the closed Pauli form, larger matrices the spectral form.
pub fn unitary_exp(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if h.rows() == 2 && h.cols() == 2 {
        let a0 = 0.5 * (h[(0, 0)].re + h[(1, 1)].re);
        let az = 0.5 * (h[(0, 0)].re - h[(1, 1)].re);
        let off = 0.5 * (h[(0, 1)] + h[(1, 0)].conj());
        let (ax, ay) = (off.re, -off.im);
        let r = (ax * ax + ay * ay + az * az).sqrt();
        let (s, c) = (r * t).sin_cos();
        let sinc = if r > 0.0 { s / r } else { t };
        let phase = Complex64::from_polar(1.0, -a0 * t);
        let i = Complex64::i();
        let m00 = Complex64::new(c, 0.0) - i * sinc * az;
        let m11 = Complex64::new(c, 0.0) + i * sinc * az;
        let m01 = -i * sinc * Complex64::new(ax, -ay);
        let m10 = -i * sinc * Complex64::new(ax, ay);
        return ComplexMatrix::new(2, 2, vec![m00 * phase, m01 * phase, m10 * phase, m11 * phase]);
    }
    let eig = eigh(h)?;
    Ok(eig.reconstruct(|e| Complex64::from_polar(1.0, -e * t)))
}
