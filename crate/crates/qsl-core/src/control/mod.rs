//! Minimal-time control: a monotone quasi-Newton optimizer for piecewise-constant controls,
//! duration threshold scans and closed-form minimal times.

mod analytic;
mod objective;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{ControlledHamiltonian, StepHamiltonian};
use crate::error::{Error, Result};
use crate::operator::{check_dim, Ket};
use crate::units::UnitSystem;
use objective::{GeneralObjective, NonlinearObjective, Objective, QubitObjective};

pub use analytic::{bhattacharyya_qsl, hegerfeldt_tmin, lz_excited_tmin, nonlinear_tmin, BhattacharyyaBound};

const MEMORY: usize = 20;
const MAX_HALVINGS: usize = 60;
const MIN_IMPROVEMENT: f64 = 1e-12;

/// State-to-state transfer with the control samples of `hamiltonian` as the initial-guess ramp.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlProblem {
    pub hamiltonian: ControlledHamiltonian,
    pub initial: Ket,
    pub target: Ket,
    pub duration: f64,
    /// Per-control (min, max).
    pub control_bounds: Option<Vec<(f64, f64)>>,
    /// Iteration budget of every restart.
    pub max_iterations: usize,
    /// Number of independent initial guesses.
    pub restarts: usize,
    pub fidelity_goal: f64,
    pub seed: u64,
    /// Switches propagation to the two-mode nonlinear model.
    pub nonlinear_kappa: Option<f64>,
    /// RK4 steps per control sample in the nonlinear case.
    pub substeps: usize,
    /// Uniform noise amplitude of the initial guess relative to the largest ramp endpoint
    /// (or to one energy unit when the endpoints are smaller).
    pub guess_noise: f64,
    pub units: UnitSystem,
}

impl ControlProblem {
    pub fn new(hamiltonian: ControlledHamiltonian, initial: Ket, target: Ket, duration: f64) -> Result<Self> {
        check_dim(hamiltonian.dim(), initial.dim())?;
        check_dim(hamiltonian.dim(), target.dim())?;
        if hamiltonian.terms().is_empty() {
            return Err(Error::InvalidInput("control problem needs at least one control term".into()));
        }
        let p = Self {
            hamiltonian,
            initial,
            target,
            duration,
            control_bounds: None,
            max_iterations: 5000,
            restarts: 20,
            fidelity_goal: 0.99,
            seed: 0,
            nonlinear_kappa: None,
            substeps: 20,
            guess_noise: 0.1,
            units: UnitSystem::NATURAL,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_bounds(mut self, bounds: Vec<(f64, f64)>) -> Result<Self> {
        self.control_bounds = Some(bounds);
        self.validate()?;
        Ok(self)
    }

    pub fn with_budget(mut self, max_iterations: usize, restarts: usize) -> Result<Self> {
        self.max_iterations = max_iterations;
        self.restarts = restarts;
        self.validate()?;
        Ok(self)
    }

    pub fn with_goal(mut self, fidelity_goal: f64) -> Result<Self> {
        self.fidelity_goal = fidelity_goal;
        self.validate()?;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_nonlinear(mut self, kappa: f64, substeps: usize) -> Result<Self> {
        self.nonlinear_kappa = Some(kappa);
        self.substeps = substeps;
        self.validate()?;
        Ok(self)
    }

    pub fn with_guess_noise(mut self, noise: f64) -> Result<Self> {
        self.guess_noise = noise;
        self.validate()?;
        Ok(self)
    }

    pub fn with_duration(mut self, duration: f64) -> Result<Self> {
        self.duration = duration;
        self.validate()?;
        Ok(self)
    }

    pub fn with_units(mut self, units: UnitSystem) -> Self {
        self.units = units;
        self
    }

    pub fn samples(&self) -> usize {
        self.hamiltonian.sample_count().unwrap_or(0)
    }

    fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0) || !self.duration.is_finite() {
            return Err(Error::InvalidInput(format!("duration must be positive, got {}", self.duration)));
        }
        if !(self.fidelity_goal > 0.0 && self.fidelity_goal <= 1.0) {
            return Err(Error::InvalidInput(format!("fidelity goal {} outside (0, 1]", self.fidelity_goal)));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidInput("at least one restart is required".into()));
        }
        if self.substeps == 0 {
            return Err(Error::InvalidInput("substeps must be positive".into()));
        }
        if !(self.guess_noise >= 0.0) {
            return Err(Error::InvalidInput("guess noise must be non-negative".into()));
        }
        if let Some(k) = self.nonlinear_kappa {
            if !k.is_finite() {
                return Err(Error::InvalidInput("kappa must be finite".into()));
            }
        }
        if let Some(b) = &self.control_bounds {
            if b.len() != self.hamiltonian.terms().len() {
                return Err(Error::InvalidInput(format!(
                    "{} bounds for {} controls",
                    b.len(),
                    self.hamiltonian.terms().len()
                )));
            }
            if b.iter().any(|(lo, hi)| !(lo <= hi)) {
                return Err(Error::InvalidInput("control bounds need min ≤ max".into()));
            }
        }
        Ok(())
    }

    fn clamp(&self, u: &mut [f64]) {
        if let Some(bounds) = &self.control_bounds {
            let n = self.samples();
            for (j, (lo, hi)) in bounds.iter().enumerate() {
                for x in &mut u[j * n..(j + 1) * n] {
                    *x = x.clamp(*lo, *hi);
                }
            }
        }
    }

    /// Linear ramp between the first and last sample of each control plus seeded uniform noise.
    fn initial_guess(&self, restart: usize) -> Vec<f64> {
        let n = self.samples();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(restart as u64));
        let mut u = Vec::with_capacity(n * self.hamiltonian.terms().len());
        for s in self.hamiltonian.signals() {
            let (a, b) = (s[0], s[n - 1]);
            let amplitude = self.guess_noise * a.abs().max(b.abs()).max(1.0);
            for k in 0..n {
                let t = if n > 1 { k as f64 / (n - 1) as f64 } else { 0.0 };
                let noise = if amplitude > 0.0 { rng.gen_range(-amplitude..amplitude) } else { 0.0 };
                u.push(a + (b - a) * t + noise);
            }
        }
        self.clamp(&mut u);
        u
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    /// |⟨target|ψ_τ⟩| of the best restart.
    pub final_fidelity: f64,
    /// Iterations of the best restart.
    pub iterations_used: usize,
    /// Fidelity after each iteration of the best restart, starting with the initial guess.
    pub fidelity_trace: Vec<f64>,
    /// Optimized samples per control.
    pub optimized_signals: Vec<Vec<f64>>,
    pub converged: bool,
    /// Restarts actually run (the search stops at the first converged restart).
    pub restarts_used: usize,
}

struct Run {
    fidelity: f64,
    iterations: usize,
    trace: Vec<f64>,
    controls: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn checked(f: f64) -> Result<f64> {
    if f.is_finite() {
        Ok(f)
    } else {
        Err(Error::NumericalFailure("non-finite fidelity".into()))
    }
}

/// Line-search trial: integration failures of the nonlinear model reject the step.
fn trial(obj: &mut dyn Objective, u: &[f64], grad: &mut [f64]) -> Result<Option<f64>> {
    match obj.value_grad(u, grad) {
        Ok(f) => checked(f).map(Some),
        Err(Error::StepSize { .. }) | Err(Error::Divergence { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Limited-memory BFGS ascent on |⟨target|ψ_τ⟩|² with projection onto the control bounds.
/// Only improving steps are accepted, so the fidelity never decreases.
fn ascend(p: &ControlProblem, obj: &mut dyn Objective, mut u: Vec<f64>, dt: f64) -> Result<Run> {
    let m = u.len();
    let mut g = vec![0.0; m];
    let mut g_new = vec![0.0; m];
    let mut f = checked(obj.value_grad(&u, &mut g)?)?;
    let mut trace = vec![f.sqrt()];
    let mut s_hist: Vec<Vec<f64>> = Vec::new();
    let mut y_hist: Vec<Vec<f64>> = Vec::new();
    let mut u_new = vec![0.0; m];
    let mut scale = 1.0 / dt;
    let mut iterations = 0;
    while iterations < p.max_iterations && f.sqrt() < p.fidelity_goal {
        let mut d = g.clone();
        let h = s_hist.len();
        let mut alpha = vec![0.0; h];
        for i in (0..h).rev() {
            alpha[i] = dot(&s_hist[i], &d) / dot(&y_hist[i], &s_hist[i]);
            for (x, y) in d.iter_mut().zip(&y_hist[i]) {
                *x -= alpha[i] * y;
            }
        }
        let gamma = if h > 0 {
            dot(&s_hist[h - 1], &y_hist[h - 1]) / dot(&y_hist[h - 1], &y_hist[h - 1])
        } else {
            scale
        };
        d.iter_mut().for_each(|x| *x *= gamma);
        for i in 0..h {
            let beta = dot(&y_hist[i], &d) / dot(&y_hist[i], &s_hist[i]);
            for (x, s) in d.iter_mut().zip(&s_hist[i]) {
                *x += s * (alpha[i] - beta);
            }
        }
        if dot(&d, &g) <= 0.0 {
            d = g.iter().map(|x| x * scale).collect();
            s_hist.clear();
            y_hist.clear();
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            for ((x, u0), di) in u_new.iter_mut().zip(&u).zip(&d) {
                *x = u0 + step * di;
            }
            p.clamp(&mut u_new);
            if let Some(f_new) = trial(obj, &u_new, &mut g_new)? {
                if f_new > f {
                    accepted = Some(f_new);
                    break;
                }
            }
            step *= 0.5;
        }
        iterations += 1;
        match accepted {
            Some(f_new) => {
                let s: Vec<f64> = u_new.iter().zip(&u).map(|(a, b)| a - b).collect();
                let y: Vec<f64> = g.iter().zip(&g_new).map(|(a, b)| a - b).collect();
                if dot(&s, &y) > 1e-300 {
                    s_hist.push(s);
                    y_hist.push(y);
                    if s_hist.len() > MEMORY {
                        s_hist.remove(0);
                        y_hist.remove(0);
                    }
                }
                std::mem::swap(&mut u, &mut u_new);
                std::mem::swap(&mut g, &mut g_new);
                let gain = f_new.sqrt() - f.sqrt();
                f = f_new;
                trace.push(f.sqrt());
                if gain < MIN_IMPROVEMENT {
                    break;
                }
            }
            None => {
                trace.push(f.sqrt());
                let had_memory = !s_hist.is_empty();
                s_hist.clear();
                y_hist.clear();
                scale *= 0.1;
                if !had_memory && scale * dt < 1e-20 {
                    break;
                }
            }
        }
    }
    Ok(Run {
        fidelity: f.sqrt().min(1.0),
        iterations,
        trace,
        controls: u,
    })
}

/// Best of `restarts` monotone ascents; stops at the first restart that reaches the goal.
pub fn optimize_control(p: &ControlProblem) -> Result<OptimizationResult> {
    p.validate()?;
    let n = p.samples();
    let dt = p.duration / n as f64 / p.units.hbar;
    let mut best: Option<Run> = None;
    let mut restarts_used = 0;
    for r in 0..p.restarts {
        let guess = p.initial_guess(r);
        let run = match p.nonlinear_kappa {
            Some(kappa) => ascend(p, &mut NonlinearObjective::new(p, kappa, n)?, guess, dt)?,
            None if p.hamiltonian.dim() == 2 => ascend(p, &mut QubitObjective::new(p, n), guess, dt)?,
            None => ascend(p, &mut GeneralObjective::new(p, n), guess, dt)?,
        };
        restarts_used += 1;
        log::debug!("restart {r}: F = {:.6} after {} iterations", run.fidelity, run.iterations);
        let done = run.fidelity >= p.fidelity_goal;
        if best.as_ref().map_or(true, |b| run.fidelity > b.fidelity) {
            best = Some(run);
        }
        if done {
            break;
        }
    }
    let best = best.expect("at least one restart");
    Ok(OptimizationResult {
        final_fidelity: best.fidelity,
        iterations_used: best.iterations,
        converged: best.fidelity >= p.fidelity_goal,
        fidelity_trace: best.trace,
        optimized_signals: best.controls.chunks(n).map(<[f64]>::to_vec).collect(),
        restarts_used,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub duration: f64,
    pub best_fidelity: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Runs the template at every duration with identical budgets and seeds.
pub fn threshold_scan(template: &ControlProblem, durations: &[f64]) -> Result<Vec<ScanPoint>> {
    if durations.len() < 2 {
        return Err(Error::InvalidInput("a threshold scan needs at least two durations".into()));
    }
    if durations.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidInput("durations must be strictly ascending".into()));
    }
    durations
        .iter()
        .map(|&t| {
            let r = optimize_control(&template.clone().with_duration(t)?)?;
            Ok(ScanPoint {
                duration: t,
                best_fidelity: r.final_fidelity,
                converged: r.converged,
                iterations: r.iterations_used,
            })
        })
        .collect()
}

/// Smallest converged duration of a scan.
pub fn empirical_threshold(scan: &[ScanPoint]) -> Option<f64> {
    scan.iter().find(|p| p.converged).map(|p| p.duration)
}

/// Transfer from the ground state at Γ = −edge to the ground state at Γ = +edge of
/// ωσ_x + Γ(t)σ_z with an unbounded bias sampled `samples` times.
pub fn lz_transfer_problem(omega: f64, gamma_edge: f64, samples: usize, duration: f64) -> Result<ControlProblem> {
    let grid = crate::dynamics::TimeGrid::span(duration, samples)?;
    let h = crate::models::landau_zener(omega, crate::models::linear_sweep(-gamma_edge, gamma_edge, samples), &grid)?;
    let initial = crate::models::lz_ground_state(omega, -gamma_edge)?;
    let target = crate::models::lz_ground_state(omega, gamma_edge)?;
    ControlProblem::new(h, initial, target, duration)
}
