use num_complex::Complex64;

use super::ControlProblem;
use crate::dynamics::{integrate_two_mode, NonlinearTwoModeParams, RateSignal, StepHamiltonian, TimeGrid};
use crate::error::{Error, Result};
use crate::linalg::{self, expm, unitary_exp, ComplexMatrix};
use crate::operator::Ket;

/// Squared overlap |⟨target|ψ_τ⟩|² as a function of the flattened control samples
/// (control j, step k) ↦ j·n + k.
pub(crate) trait Objective {
    fn value(&mut self, u: &[f64]) -> Result<f64>;
    fn value_grad(&mut self, u: &[f64], grad: &mut [f64]) -> Result<f64>;
}

type Mat2 = [Complex64; 4];

/// (a0, ax, ay, az) with H = a0 I + a·σ.
fn pauli_coefficients(h: &ComplexMatrix) -> [f64; 4] {
    let off = 0.5 * (h[(0, 1)] + h[(1, 0)].conj());
    [
        0.5 * (h[(0, 0)].re + h[(1, 1)].re),
        off.re,
        -off.im,
        0.5 * (h[(0, 0)].re - h[(1, 1)].re),
    ]
}

fn mul_vec(m: &Mat2, v: &[Complex64; 2]) -> [Complex64; 2] {
    [m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]]
}

fn adjoint_mul_vec(m: &Mat2, v: &[Complex64; 2]) -> [Complex64; 2] {
    [m[0].conj() * v[0] + m[2].conj() * v[1], m[1].conj() * v[0] + m[3].conj() * v[1]]
}

fn dot2(a: &[Complex64; 2], b: &[Complex64; 2]) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

/// c I − i s (h·σ) scaled by `phase`.
fn su2(phase: Complex64, c: Complex64, s: f64, h: &[f64; 4]) -> Mat2 {
    let i = Complex64::i();
    [
        phase * (c - i * s * h[3]),
        phase * (-i * s * Complex64::new(h[1], -h[2])),
        phase * (-i * s * Complex64::new(h[1], h[2])),
        phase * (c + i * s * h[3]),
    ]
}

/// exp(−iH dt) and its derivatives along each direction b_j, for H = h·(I, σ).
fn qubit_step(h: &[f64; 4], dirs: &[[f64; 4]], dt: f64, out: &mut Vec<Mat2>) -> Mat2 {
    let r = (h[1] * h[1] + h[2] * h[2] + h[3] * h[3]).sqrt();
    let theta = r * dt;
    let (sin, cos) = theta.sin_cos();
    let s = if theta > 1e-8 { sin / r } else { dt * (1.0 - theta * theta / 6.0) };
    // (θ cos θ − sin θ)/θ³
    let q = if theta > 1e-3 {
        (theta * cos - sin) / (theta * theta * theta)
    } else {
        -1.0 / 3.0 + theta * theta / 30.0
    };
    let phase = Complex64::from_polar(1.0, -h[0] * dt);
    let u = su2(phase, Complex64::new(cos, 0.0), s, h);
    out.clear();
    for b in dirs {
        let hb = h[1] * b[1] + h[2] * b[2] + h[3] * b[3];
        let dc = -s * dt * hb;
        let ds = dt * dt * dt * q * hb;
        let part_h = su2(phase, Complex64::new(dc, 0.0), ds, h);
        let i = Complex64::i();
        let part_b = [
            phase * (-i * s * b[3]),
            phase * (-i * s * Complex64::new(b[1], -b[2])),
            phase * (-i * s * Complex64::new(b[1], b[2])),
            phase * (i * s * b[3]),
        ];
        let shift = -i * b[0] * dt;
        out.push([
            shift * u[0] + part_h[0] + part_b[0],
            shift * u[1] + part_h[1] + part_b[1],
            shift * u[2] + part_h[2] + part_b[2],
            shift * u[3] + part_h[3] + part_b[3],
        ]);
    }
    u
}

/// Linear qubit dynamics with the closed SU(2) step.
pub(crate) struct QubitObjective {
    drift: [f64; 4],
    dirs: Vec<[f64; 4]>,
    steps: usize,
    dt: f64,
    initial: [Complex64; 2],
    target: [Complex64; 2],
    props: Vec<Mat2>,
    derivs: Vec<Vec<Mat2>>,
    forward: Vec<[Complex64; 2]>,
}

impl QubitObjective {
    pub(crate) fn new(p: &ControlProblem, steps: usize) -> Self {
        let a = p.initial.amplitudes();
        let t = p.target.amplitudes();
        Self {
            drift: pauli_coefficients(p.hamiltonian.drift().matrix()),
            dirs: p.hamiltonian.terms().iter().map(|h| pauli_coefficients(h.matrix())).collect(),
            steps,
            dt: p.duration / steps as f64 / p.units.hbar,
            initial: [a[0], a[1]],
            target: [t[0], t[1]],
            props: Vec::with_capacity(steps),
            derivs: Vec::with_capacity(steps),
            forward: Vec::with_capacity(steps + 1),
        }
    }

    fn h(&self, u: &[f64], k: usize) -> [f64; 4] {
        let mut h = self.drift;
        for (j, b) in self.dirs.iter().enumerate() {
            let x = u[j * self.steps + k];
            for c in 0..4 {
                h[c] += x * b[c];
            }
        }
        h
    }
}

impl Objective for QubitObjective {
    fn value(&mut self, u: &[f64]) -> Result<f64> {
        let mut psi = self.initial;
        let mut scratch = Vec::new();
        for k in 0..self.steps {
            let m = qubit_step(&self.h(u, k), &[], self.dt, &mut scratch);
            psi = mul_vec(&m, &psi);
        }
        Ok(dot2(&self.target, &psi).norm_sqr())
    }

    fn value_grad(&mut self, u: &[f64], grad: &mut [f64]) -> Result<f64> {
        let n = self.steps;
        self.props.clear();
        self.forward.clear();
        self.derivs.resize(n, Vec::new());
        let mut psi = self.initial;
        self.forward.push(psi);
        for k in 0..n {
            let h = self.h(u, k);
            let m = qubit_step(&h, &self.dirs, self.dt, &mut self.derivs[k]);
            psi = mul_vec(&m, &psi);
            self.props.push(m);
            self.forward.push(psi);
        }
        let overlap = dot2(&self.target, &psi);
        let mut back = self.target;
        for k in (0..n).rev() {
            for (j, d) in self.derivs[k].iter().enumerate() {
                let dpsi = mul_vec(d, &self.forward[k]);
                grad[j * n + k] = 2.0 * (overlap.conj() * dot2(&back, &dpsi)).re;
            }
            back = adjoint_mul_vec(&self.props[k], &back);
        }
        Ok(overlap.norm_sqr())
    }
}

/// Linear dynamics of any dimension; step derivatives from the block exponential
/// exp([[A, E], [0, A]]) whose upper-right block is the Fréchet derivative of exp at A along E.
pub(crate) struct GeneralObjective {
    drift: ComplexMatrix,
    terms: Vec<ComplexMatrix>,
    steps: usize,
    dt: f64,
    initial: Vec<Complex64>,
    target: Vec<Complex64>,
}

impl GeneralObjective {
    pub(crate) fn new(p: &ControlProblem, steps: usize) -> Self {
        Self {
            drift: p.hamiltonian.drift().matrix().clone(),
            terms: p.hamiltonian.terms().iter().map(|h| h.matrix().clone()).collect(),
            steps,
            dt: p.duration / steps as f64 / p.units.hbar,
            initial: p.initial.amplitudes().to_vec(),
            target: p.target.amplitudes().to_vec(),
        }
    }

    fn h(&self, u: &[f64], k: usize) -> ComplexMatrix {
        let mut h = self.drift.clone();
        for (j, t) in self.terms.iter().enumerate() {
            h.axpy(Complex64::new(u[j * self.steps + k], 0.0), t);
        }
        h
    }

    fn derivative(&self, h: &ComplexMatrix, e: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = h.rows();
        let f = Complex64::new(0.0, -self.dt);
        let block = ComplexMatrix::from_fn(2 * d, 2 * d, |r, c| match (r < d, c < d) {
            (true, true) => h[(r, c)] * f,
            (false, false) => h[(r - d, c - d)] * f,
            (true, false) => e[(r, c - d)] * f,
            (false, true) => Complex64::new(0.0, 0.0),
        });
        let x = expm(&block)?;
        Ok(ComplexMatrix::from_fn(d, d, |r, c| x[(r, c + d)]))
    }
}

impl Objective for GeneralObjective {
    fn value(&mut self, u: &[f64]) -> Result<f64> {
        let mut psi = self.initial.clone();
        for k in 0..self.steps {
            psi = unitary_exp(&self.h(u, k), self.dt)?.mul_vec(&psi);
        }
        Ok(linalg::dot(&self.target, &psi).norm_sqr())
    }

    fn value_grad(&mut self, u: &[f64], grad: &mut [f64]) -> Result<f64> {
        let n = self.steps;
        let mut forward = vec![self.initial.clone()];
        let mut props = Vec::with_capacity(n);
        for k in 0..n {
            let m = unitary_exp(&self.h(u, k), self.dt)?;
            forward.push(m.mul_vec(&forward[k]));
            props.push(m);
        }
        let overlap = linalg::dot(&self.target, &forward[n]);
        let mut back = self.target.clone();
        for k in (0..n).rev() {
            let h = self.h(u, k);
            for (j, t) in self.terms.iter().enumerate() {
                let dpsi = self.derivative(&h, t)?.mul_vec(&forward[k]);
                grad[j * n + k] = 2.0 * (overlap.conj() * linalg::dot(&back, &dpsi)).re;
            }
            back = props[k].adjoint_mul_vec(&back);
        }
        Ok(overlap.norm_sqr())
    }
}

/// Two-mode nonlinear dynamics; each control sample is held over `substeps` RK4 steps and the
/// gradient is a central finite difference.
pub(crate) struct NonlinearObjective<'a> {
    problem: &'a ControlProblem,
    kappa: f64,
    steps: usize,
    substeps: usize,
}

impl<'a> NonlinearObjective<'a> {
    pub(crate) fn new(problem: &'a ControlProblem, kappa: f64, steps: usize) -> Result<Self> {
        if problem.hamiltonian.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: problem.hamiltonian.dim(),
            });
        }
        let mut coefficients = vec![pauli_coefficients(problem.hamiltonian.drift().matrix())];
        coefficients.extend(problem.hamiltonian.terms().iter().map(|h| pauli_coefficients(h.matrix())));
        if coefficients.iter().any(|c| c[2].abs() > 1e-12) {
            return Err(Error::InvalidInput("the two-mode model has no σ_y term".into()));
        }
        Ok(Self {
            problem,
            kappa,
            steps,
            substeps: problem.substeps,
        })
    }

    fn final_ket(&self, u: &[f64]) -> Result<Ket> {
        let drift = pauli_coefficients(self.problem.hamiltonian.drift().matrix());
        let dirs: Vec<[f64; 4]> = self
            .problem
            .hamiltonian
            .terms()
            .iter()
            .map(|h| pauli_coefficients(h.matrix()))
            .collect();
        let n = self.steps;
        let mut bias = Vec::with_capacity(n * self.substeps);
        let mut coupling = Vec::with_capacity(n * self.substeps);
        for k in 0..n {
            let mut h = drift;
            for (j, b) in dirs.iter().enumerate() {
                for c in 0..4 {
                    h[c] += u[j * n + k] * b[c];
                }
            }
            for _ in 0..self.substeps {
                bias.push(h[3]);
                coupling.push(h[1]);
            }
        }
        let params = NonlinearTwoModeParams::new(self.kappa, RateSignal::piecewise(bias)?, RateSignal::piecewise(coupling)?)?;
        let grid = TimeGrid::span(self.problem.duration, n * self.substeps)?;
        let mut kets = integrate_two_mode(&params, &self.problem.initial, &grid, &self.problem.units)?;
        Ok(kets.pop().expect("grid has nodes"))
    }
}

impl Objective for NonlinearObjective<'_> {
    fn value(&mut self, u: &[f64]) -> Result<f64> {
        Ok(self.problem.target.inner(&self.final_ket(u)?)?.norm_sqr())
    }

    fn value_grad(&mut self, u: &[f64], grad: &mut [f64]) -> Result<f64> {
        let f = self.value(u)?;
        let mut x = u.to_vec();
        for i in 0..u.len() {
            let h = 1e-6 * u[i].abs().max(1.0);
            x[i] = u[i] + h;
            let up = self.value(&x)?;
            x[i] = u[i] - h;
            let down = self.value(&x)?;
            x[i] = u[i];
            grad[i] = (up - down) / (2.0 * h);
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::HermitianOperator;

    fn hermitian_from(h: &[f64; 4]) -> HermitianOperator {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::new(h[0] + h[3], 0.0), Complex64::new(h[1], -h[2])],
            vec![Complex64::new(h[1], h[2]), Complex64::new(h[0] - h[3], 0.0)],
        ])
        .expect("2x2");
        HermitianOperator::new(m).expect("Hermitian by construction")
    }

    #[test]
    fn closed_step_matches_exponential_and_finite_difference() {
        let cases = [[0.3, 1.0, -0.4, 2.0], [0.0, 0.0, 0.0, 0.0], [1.0, 1e-7, 0.0, -2e-7], [-0.2, 500.0, 0.0, -3.0]];
        let dirs = [[0.1, 0.0, 0.0, 1.0], [0.0, 1.0, 0.5, 0.0]];
        for h in cases {
            let dt = 0.013;
            let mut d = Vec::new();
            let u = qubit_step(&h, &dirs, dt, &mut d);
            let exact = unitary_exp(hermitian_from(&h).matrix(), dt).unwrap();
            for (a, b) in u.iter().zip(exact.data()) {
                assert!((a - b).norm() < 1e-12);
            }
            for (b, dm) in dirs.iter().zip(&d) {
                let eps = 1e-6;
                let hp: [f64; 4] = std::array::from_fn(|c| h[c] + eps * b[c]);
                let hm: [f64; 4] = std::array::from_fn(|c| h[c] - eps * b[c]);
                let up = unitary_exp(hermitian_from(&hp).matrix(), dt).unwrap();
                let um = unitary_exp(hermitian_from(&hm).matrix(), dt).unwrap();
                for i in 0..4 {
                    let fd = (up.data()[i] - um.data()[i]) / (2.0 * eps);
                    assert!((dm[i] - fd).norm() < 1e-7, "{h:?}: {} vs {}", dm[i], fd);
                }
            }
        }
    }

    fn check_gradient(obj: &mut dyn Objective, u: &[f64], tol: f64) {
        let mut g = vec![0.0; u.len()];
        let f = obj.value_grad(u, &mut g).unwrap();
        assert!((f - obj.value(u).unwrap()).abs() < 1e-12);
        let mut x = u.to_vec();
        for i in (0..u.len()).step_by(3) {
            let h = 1e-6;
            x[i] = u[i] + h;
            let up = obj.value(&x).unwrap();
            x[i] = u[i] - h;
            let down = obj.value(&x).unwrap();
            x[i] = u[i];
            let fd = (up - down) / (2.0 * h);
            assert!((g[i] - fd).abs() < tol, "component {i}: {} vs {fd}", g[i]);
        }
    }

    fn qubit_problem(samples: usize) -> (ControlProblem, Vec<f64>) {
        use crate::dynamics::ControlledHamiltonian;
        use crate::linalg::pauli;
        let h = ControlledHamiltonian::new(
            HermitianOperator::new(pauli::x().scale_real(0.7)).unwrap(),
            vec![HermitianOperator::new(pauli::z()).unwrap(), HermitianOperator::new(pauli::y()).unwrap()],
            vec![vec![0.0; samples], vec![0.0; samples]],
        )
        .unwrap();
        let target = Ket::new(vec![Complex64::new(0.3, 0.1), Complex64::new(-0.5, 0.8)]).unwrap();
        let p = ControlProblem::new(h, Ket::basis(2, 0).unwrap(), target, 1.3).unwrap();
        let u = (0..2 * samples).map(|i| (i as f64 * 0.37).sin() * 2.0).collect();
        (p, u)
    }

    #[test]
    fn qubit_gradient_matches_finite_difference() {
        let (p, u) = qubit_problem(30);
        check_gradient(&mut QubitObjective::new(&p, 30), &u, 1e-8);
    }

    #[test]
    fn general_gradient_agrees_with_qubit_form() {
        let (p, u) = qubit_problem(12);
        let mut a = QubitObjective::new(&p, 12);
        let mut b = GeneralObjective::new(&p, 12);
        let (mut ga, mut gb) = (vec![0.0; 24], vec![0.0; 24]);
        let fa = a.value_grad(&u, &mut ga).unwrap();
        let fb = b.value_grad(&u, &mut gb).unwrap();
        assert!((fa - fb).abs() < 1e-12);
        for (x, y) in ga.iter().zip(&gb) {
            assert!((x - y).abs() < 1e-10);
        }
        check_gradient(&mut b, &u, 1e-8);
    }

    #[test]
    fn nonlinear_gradient_reduces_to_linear_at_zero_kappa() {
        let (p, u) = qubit_problem(10);
        let mut p = p;
        // The two-mode model has no σ_y term.
        p.hamiltonian = crate::dynamics::ControlledHamiltonian::new(
            p.hamiltonian.drift().clone(),
            vec![p.hamiltonian.terms()[0].clone()],
            vec![vec![0.0; 10]],
        )
        .unwrap();
        p.substeps = 200;
        let u = &u[..10];
        let mut lin = QubitObjective::new(&p, 10);
        let mut nl = NonlinearObjective::new(&p, 0.0, 10).unwrap();
        let (mut ga, mut gb) = (vec![0.0; 10], vec![0.0; 10]);
        let fa = lin.value_grad(u, &mut ga).unwrap();
        let fb = nl.value_grad(u, &mut gb).unwrap();
        assert!((fa - fb).abs() < 1e-8);
        for (x, y) in ga.iter().zip(&gb) {
            assert!((x - y).abs() < 1e-6, "{x} {y}");
        }
    }
}
