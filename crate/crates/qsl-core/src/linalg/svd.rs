use num_complex::Complex64;

use super::matrix::ComplexMatrix;

const TOLERANCE: f64 = 1e-13;
const MAX_SWEEPS: usize = 80;

/// Singular values in descending order (one-sided Jacobi).
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let work = if a.rows() >= a.cols() { a.clone() } else { a.adjoint() };
    let (m, n) = (work.rows(), work.cols());
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| work.column(j)).collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let mag = gamma.norm();
                if mag <= TOLERANCE * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let e = gamma / mag;
                let zeta = (beta - alpha) / (2.0 * mag);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (zeta.abs() + (zeta * zeta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..m {
                    let bp = cols[p][i];
                    let bq = cols[q][i];
                    cols[p][i] = bp * c - e.conj() * bq * s;
                    cols[q][i] = e * bp * s + bq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}
