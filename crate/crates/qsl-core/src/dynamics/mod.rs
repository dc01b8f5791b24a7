//! Time grids, protocols and propagators.

mod lindblad;
mod nonhermitian;
mod nonlinear;
mod unitary;

pub use lindblad::{evolve_lindblad, Channel, LindbladGenerator};
pub use nonhermitian::{evolve_nonhermitian, NonHermitianTrajectory};
pub use nonlinear::{evolve_nonlinear_two_mode, NonlinearTwoModeParams};
pub(crate) use nonlinear::integrate as integrate_two_mode;
pub use unitary::{evolve_unitary, propagate_ket, step_propagators, total_propagator};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::operator::{check_dim, DensityMatrix, HermitianOperator, Ket};

/// Uniform grid on [t_start, t_end] with `steps` intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, steps: usize) -> Result<Self> {
        if !t_start.is_finite() || !t_end.is_finite() || t_end <= t_start {
            return Err(Error::InvalidInput(format!(
                "grid end {t_end} must exceed start {t_start}"
            )));
        }
        if steps < 2 {
            return Err(Error::InvalidInput(format!("grid needs at least 2 steps, got {steps}")));
        }
        Ok(Self { t_start, t_end, steps })
    }

    /// Grid on [0, duration].
    pub fn span(duration: f64, steps: usize) -> Result<Self> {
        Self::new(0.0, duration, steps)
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn nodes(&self) -> usize {
        self.steps + 1
    }

    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }

    pub fn dt(&self) -> f64 {
        self.duration() / self.steps as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        if k == self.steps {
            self.t_end
        } else {
            self.t_start + k as f64 * self.dt()
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|k| self.time(k)).collect()
    }

    /// Same interval, `factor` times as many steps.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.t_start, self.t_end, self.steps * factor.max(1))
    }

    /// Trapezoid rule over node samples.
    pub fn trapezoid(&self, samples: &[f64]) -> f64 {
        debug_assert_eq!(samples.len(), self.nodes());
        let dt = self.dt();
        samples.windows(2).map(|w| 0.5 * dt * (w[0] + w[1])).sum()
    }
}

/// A Hamiltonian that is constant on each step of a grid.
pub trait StepHamiltonian {
    fn dim(&self) -> usize;

    /// Number of steps the protocol is sampled on, or `None` when it is time independent.
    fn sample_count(&self) -> Option<usize>;

    /// Hamiltonian on step `k`.
    fn step(&self, k: usize) -> HermitianOperator;

    /// True when step `k` carries the same Hamiltonian as step `k - 1`.
    fn repeats_previous(&self, _k: usize) -> bool {
        false
    }

    fn check_grid(&self, grid: &TimeGrid) -> Result<()> {
        match self.sample_count() {
            Some(n) if n != grid.steps() => Err(Error::InvalidInput(format!(
                "protocol has {n} samples but the grid has {} steps",
                grid.steps()
            ))),
            _ => Ok(()),
        }
    }
}

/// H(t) = H_drift + Σ_j u_j(t) H_j with piecewise-constant controls.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlledHamiltonian {
    drift: HermitianOperator,
    terms: Vec<HermitianOperator>,
    signals: Vec<Vec<f64>>,
}

impl ControlledHamiltonian {
    pub fn new(drift: HermitianOperator, terms: Vec<HermitianOperator>, signals: Vec<Vec<f64>>) -> Result<Self> {
        if terms.len() != signals.len() {
            return Err(Error::InvalidInput(format!(
                "{} control terms but {} signals",
                terms.len(),
                signals.len()
            )));
        }
        for t in &terms {
            check_dim(drift.dim(), t.dim())?;
        }
        if let Some(first) = signals.first() {
            if first.is_empty() {
                return Err(Error::InvalidInput("empty control signal".into()));
            }
            for s in &signals {
                if s.len() != first.len() {
                    return Err(Error::InvalidInput("control signals differ in length".into()));
                }
                if s.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidInput("control signal has non-finite samples".into()));
                }
            }
        }
        Ok(Self { drift, terms, signals })
    }

    pub fn constant(h: HermitianOperator) -> Self {
        Self {
            drift: h,
            terms: Vec::new(),
            signals: Vec::new(),
        }
    }

    pub fn drift(&self) -> &HermitianOperator {
        &self.drift
    }

    pub fn terms(&self) -> &[HermitianOperator] {
        &self.terms
    }

    pub fn signals(&self) -> &[Vec<f64>] {
        &self.signals
    }

    /// Copy with the control samples replaced.
    pub fn with_signals(&self, signals: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(self.drift.clone(), self.terms.clone(), signals)
    }

    fn combine(&self, u: impl Fn(&[f64]) -> f64) -> HermitianOperator {
        let mut m = self.drift.matrix().clone();
        for (term, s) in self.terms.iter().zip(&self.signals) {
            m.axpy(Complex64::new(u(s), 0.0), term.matrix());
        }
        HermitianOperator::new(m).expect("sum of Hermitian terms")
    }

    /// Hamiltonian at grid node `k`: endpoints take the first/last sample, interior nodes
    /// the mean of the two adjacent samples.
    pub fn node(&self, k: usize) -> HermitianOperator {
        self.combine(|s| {
            let n = s.len();
            if k == 0 {
                s[0]
            } else if k >= n {
                s[n - 1]
            } else {
                0.5 * (s[k - 1] + s[k])
            }
        })
    }

    /// dH/dt at node `k` by differences of adjacent samples (one-sided at the ends).
    pub fn node_derivative(&self, k: usize, dt: f64) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim(), self.dim());
        for (term, s) in self.terms.iter().zip(&self.signals) {
            let n = s.len();
            let d = if n < 2 {
                0.0
            } else if k == 0 {
                (s[1] - s[0]) / dt
            } else if k >= n {
                (s[n - 1] - s[n - 2]) / dt
            } else {
                (s[k] - s[k - 1]) / dt
            };
            m.axpy(Complex64::new(d, 0.0), term.matrix());
        }
        m
    }
}

impl StepHamiltonian for ControlledHamiltonian {
    fn dim(&self) -> usize {
        self.drift.dim()
    }

    fn sample_count(&self) -> Option<usize> {
        self.signals.first().map(Vec::len)
    }

    fn step(&self, k: usize) -> HermitianOperator {
        self.combine(|s| s[k])
    }

    fn repeats_previous(&self, k: usize) -> bool {
        k > 0 && self.signals.iter().all(|s| s[k] == s[k - 1])
    }
}

/// Explicit list of step Hamiltonians.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledHamiltonian {
    steps: Vec<HermitianOperator>,
}

impl SampledHamiltonian {
    pub fn new(steps: Vec<HermitianOperator>) -> Result<Self> {
        let first = steps
            .first()
            .ok_or_else(|| Error::InvalidInput("no step Hamiltonians".into()))?;
        for h in &steps {
            check_dim(first.dim(), h.dim())?;
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> &[HermitianOperator] {
        &self.steps
    }
}

impl StepHamiltonian for SampledHamiltonian {
    fn dim(&self) -> usize {
        self.steps[0].dim()
    }

    fn sample_count(&self) -> Option<usize> {
        Some(self.steps.len())
    }

    fn step(&self, k: usize) -> HermitianOperator {
        self.steps[k].clone()
    }
}

/// Real signal on a grid: either one value per step (piecewise constant) or `2·steps + 1`
/// values at t_0, t_0 + dt/2, t_1, …, t_n.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSignal {
    samples: Vec<f64>,
    half_step: bool,
}

/// Position inside a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Start,
    Mid,
    End,
}

impl RateSignal {
    /// One value per step.
    pub fn piecewise(samples: Vec<f64>) -> Result<Self> {
        Self::build(samples, false)
    }

    /// Values at every node and every step midpoint.
    pub fn half_step_samples(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 3 || samples.len() % 2 == 0 {
            return Err(Error::InvalidInput(format!(
                "half-step signal needs an odd length of at least 3, got {}",
                samples.len()
            )));
        }
        Self::build(samples, true)
    }

    fn build(samples: Vec<f64>, half_step: bool) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("empty signal".into()));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("signal has non-finite samples".into()));
        }
        Ok(Self { samples, half_step })
    }

    pub fn constant(value: f64, steps: usize) -> Result<Self> {
        Self::piecewise(vec![value; steps])
    }

    /// Samples f at t_0, t_0 + dt/2, …, t_n.
    pub fn half_step(grid: &TimeGrid, f: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        let h = 0.5 * grid.dt();
        let samples = (0..=2 * grid.steps())
            .map(|j| {
                let t = if j == 2 * grid.steps() {
                    grid.t_end()
                } else {
                    grid.t_start() + j as f64 * h
                };
                f(t)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::half_step_samples(samples)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn is_half_step(&self) -> bool {
        self.half_step
    }

    pub fn steps(&self) -> usize {
        if self.half_step {
            (self.samples.len() - 1) / 2
        } else {
            self.samples.len()
        }
    }

    pub fn check_grid(&self, grid: &TimeGrid) -> Result<()> {
        if self.steps() == grid.steps() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "signal covers {} steps but the grid has {}",
                self.steps(),
                grid.steps()
            )))
        }
    }

    pub fn value(&self, k: usize, stage: Stage) -> f64 {
        if self.half_step {
            let offset = match stage {
                Stage::Start => 0,
                Stage::Mid => 1,
                Stage::End => 2,
            };
            self.samples[2 * k + offset]
        } else {
            self.samples[k]
        }
    }
}

/// States on a grid with optional generator and Hamiltonian records.
#[derive(Debug, Clone)]
pub struct Trajectory {
    grid: TimeGrid,
    states: Vec<DensityMatrix>,
    generators: Option<Vec<ComplexMatrix>>,
    step_end_generators: Option<Vec<ComplexMatrix>>,
    hamiltonians: Option<Vec<HermitianOperator>>,
}

impl Trajectory {
    pub fn new(grid: TimeGrid, states: Vec<DensityMatrix>) -> Result<Self> {
        if states.len() != grid.nodes() {
            return Err(Error::InvalidInput(format!(
                "{} states for {} grid nodes",
                states.len(),
                grid.nodes()
            )));
        }
        for s in &states {
            check_dim(states[0].dim(), s.dim())?;
        }
        Ok(Self {
            grid,
            states,
            generators: None,
            step_end_generators: None,
            hamiltonians: None,
        })
    }

    pub fn from_kets(grid: TimeGrid, kets: &[Ket]) -> Result<Self> {
        Self::new(grid, kets.iter().map(Ket::to_density).collect())
    }

    /// Attaches dρ/dt at every node.
    pub fn with_generators(mut self, generators: Vec<ComplexMatrix>) -> Result<Self> {
        self.check_len(generators.len(), self.grid.nodes())?;
        self.generators = Some(generators);
        Ok(self)
    }

    /// Attaches the step-k generator evaluated at ρ_{k+1}, for every step.
    pub fn with_step_end_generators(mut self, generators: Vec<ComplexMatrix>) -> Result<Self> {
        self.check_len(generators.len(), self.grid.steps())?;
        self.step_end_generators = Some(generators);
        Ok(self)
    }

    /// Attaches the Hamiltonian of the step starting at every node (last node repeats the last step).
    pub fn with_hamiltonians(mut self, hamiltonians: Vec<HermitianOperator>) -> Result<Self> {
        self.check_len(hamiltonians.len(), self.grid.nodes())?;
        self.hamiltonians = Some(hamiltonians);
        Ok(self)
    }

    fn check_len(&self, found: usize, expected: usize) -> Result<()> {
        if found != expected {
            Err(Error::InvalidInput(format!("{found} snapshots, expected {expected}")))
        } else {
            Ok(())
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn initial(&self) -> &DensityMatrix {
        &self.states[0]
    }

    pub fn last(&self) -> &DensityMatrix {
        &self.states[self.states.len() - 1]
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn generators(&self) -> Option<&[ComplexMatrix]> {
        self.generators.as_deref()
    }

    pub fn step_end_generators(&self) -> Option<&[ComplexMatrix]> {
        self.step_end_generators.as_deref()
    }

    pub fn hamiltonians(&self) -> Option<&[HermitianOperator]> {
        self.hamiltonians.as_deref()
    }

    /// ∫ f(ρ_t, dρ/dt) dt by the trapezoid rule taken step by step: each step pairs its start
    /// node with the same step's generator at its end, so piecewise-constant protocols are
    /// integrated without mixing neighbouring steps.
    pub fn step_integral(&self, mut f: impl FnMut(&DensityMatrix, &ComplexMatrix) -> Result<f64>) -> Result<f64> {
        let g = self
            .generators
            .as_ref()
            .ok_or_else(|| Error::Precondition("trajectory has no generator snapshots".into()))?;
        let dt = self.grid.dt();
        let mut acc = 0.0;
        for k in 0..self.grid.steps() {
            let end = match &self.step_end_generators {
                Some(e) => &e[k],
                None => &g[k + 1],
            };
            acc += 0.5 * dt * (f(&self.states[k], &g[k])? + f(&self.states[k + 1], end)?);
        }
        Ok(acc)
    }

    /// ∫ f(dρ/dt) dt, see [`Trajectory::step_integral`].
    pub fn generator_integral(&self, mut f: impl FnMut(&ComplexMatrix) -> Result<f64>) -> Result<f64> {
        self.step_integral(|_, g| f(g))
    }

    /// Node values of f(dρ/dt).
    pub fn generator_samples(&self, mut f: impl FnMut(&ComplexMatrix) -> Result<f64>) -> Result<Vec<f64>> {
        let g = self
            .generators
            .as_ref()
            .ok_or_else(|| Error::Precondition("trajectory has no generator snapshots".into()))?;
        g.iter().map(|m| f(m)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
        assert!(TimeGrid::new(1.0, 1.0, 10).is_err());
        let g = TimeGrid::new(0.0, 2.0, 4).unwrap();
        assert_eq!(g.dt(), 0.5);
        assert_eq!(g.times(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(g.trapezoid(&[1.0; 5]), 2.0);
    }

    #[test]
    fn node_values_and_derivatives() {
        let h = ControlledHamiltonian::new(
            HermitianOperator::new(pauli::x()).unwrap(),
            vec![HermitianOperator::new(pauli::z()).unwrap()],
            vec![vec![0.0, 1.0, 3.0]],
        )
        .unwrap();
        assert_eq!(h.node(0).matrix()[(0, 0)].re, 0.0);
        assert_eq!(h.node(1).matrix()[(0, 0)].re, 0.5);
        assert_eq!(h.node(3).matrix()[(0, 0)].re, 3.0);
        assert_eq!(h.node_derivative(2, 0.5)[(0, 0)].re, 4.0);
        assert!(h.repeats_previous(1) == false);
    }

    #[test]
    fn rate_signal_layouts() {
        let g = TimeGrid::span(1.0, 2).unwrap();
        let p = RateSignal::piecewise(vec![1.0, 2.0]).unwrap();
        p.check_grid(&g).unwrap();
        assert_eq!(p.value(1, Stage::End), 2.0);
        let h = RateSignal::half_step(&g, |t| Ok(t)).unwrap();
        h.check_grid(&g).unwrap();
        assert_eq!(h.value(1, Stage::Mid), 0.75);
        assert!(RateSignal::piecewise(vec![1.0; 3]).unwrap().check_grid(&TimeGrid::span(1.0, 4).unwrap()).is_err());
    }
}
