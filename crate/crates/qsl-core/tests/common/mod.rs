#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use qsl_core::{ComplexMatrix, DensityMatrix, HermitianOperator, Ket};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// d×d complex matrix with entries in the unit square.
pub fn matrix(d: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d * d).prop_map(move |v| {
        ComplexMatrix::new(d, d, v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap()
    })
}

pub fn any_matrix(max_d: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_d).prop_flat_map(matrix)
}

pub fn hermitian(d: usize) -> impl Strategy<Value = HermitianOperator> {
    matrix(d).prop_map(|m| HermitianOperator::new(m.hermitian_part()).unwrap())
}

pub fn ket(d: usize) -> impl Strategy<Value = Ket> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d)
        .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(|v| Ket::new(v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
}

/// Full-rank mixed state G G† / tr with a small identity admixture.
pub fn density(d: usize) -> impl Strategy<Value = DensityMatrix> {
    matrix(d).prop_map(move |g| {
        let mut m = g.matmul(&g.adjoint());
        let shift = 1e-3 * m.trace().re.max(1e-3);
        for i in 0..d {
            m[(i, i)] += c(shift, 0.0);
        }
        let t = m.trace().re;
        DensityMatrix::new(m.scale_real(1.0 / t)).unwrap()
    })
}

/// Pure or mixed, chosen by the strategy.
pub fn state(d: usize) -> impl Strategy<Value = DensityMatrix> {
    prop_oneof![density(d), ket(d).prop_map(|k| k.to_density())]
}
