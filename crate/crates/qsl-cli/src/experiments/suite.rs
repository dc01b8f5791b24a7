use num_complex::Complex64;
use qsl_core::bounds::{geometric_qsl, mt_driven, purity_qsl, qfi_qsl, universal_qsl, NormKind};
use qsl_core::dynamics::{evolve_lindblad, evolve_unitary, Channel, LindbladGenerator, RateSignal};
use qsl_core::operator::schatten_norm;
use qsl_core::{ComplexMatrix, ControlledHamiltonian, DensityMatrix, HermitianOperator, Ket, Result, TimeGrid, Trajectory, UnitSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::Params;
use crate::output::{ExperimentOutput, Table};

const U: UnitSystem = UnitSystem::NATURAL;

fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> Result<HermitianOperator> {
    HermitianOperator::new(random_matrix(rng, d).hermitian_part())
}

fn random_ket(rng: &mut ChaCha8Rng, d: usize) -> Result<Ket> {
    Ket::new((0..d).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
}

/// Full-rank G G†/tr with a small identity admixture.
fn random_mixed(rng: &mut ChaCha8Rng, d: usize) -> Result<DensityMatrix> {
    let g = random_matrix(rng, d);
    let mut m = g.matmul(&g.adjoint());
    for i in 0..d {
        m[(i, i)] += Complex64::new(0.05, 0.0);
    }
    let t = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / t))
}

/// One inequality: `lhs ≥ rhs` must hold up to the tolerance.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Check {
    pub instance: usize,
    pub system: &'static str,
    pub dim: usize,
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

impl Check {
    pub fn slack(&self) -> f64 {
        self.lhs - self.rhs
    }
}

fn bound_checks(traj: &Trajectory, tau: f64, geometric: bool, out: &mut Vec<(&'static str, f64, f64)>) -> Result<()> {
    if geometric {
        for (name, n) in [("geometric-op", NormKind::Op), ("geometric-hs", NormKind::Hs), ("geometric-tr", NormKind::Tr)] {
            out.push((name, tau, geometric_qsl(traj, n)?.tau_qsl));
        }
    }
    out.push(("qfi", tau, qfi_qsl(traj)?.tau_qsl));
    for (name, p) in [("universal-1", 1.0), ("universal-2", 2.0), ("universal-inf", f64::INFINITY)] {
        out.push((name, tau, universal_qsl(traj, p)?.tau_qsl));
    }
    Ok(())
}

/// Instance `index`: qubit or qutrit, driven unitary or constant-rate Lindblad, alternating.
pub(crate) fn instance_checks(seed: u64, index: usize, p: &Params) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let d = if index % 2 == 0 { 2 } else { 3 };
    let unitary = index % 4 < 2;
    let steps = p.integer("steps");
    let (lo, hi) = (p.number("tau_min"), p.number("tau_max"));
    let tau = if hi > lo { rng.gen_range(lo..hi) } else { lo };
    let grid = TimeGrid::span(tau, steps)?;
    let mut raw = Vec::new();
    if unitary {
        let drift = random_hermitian(&mut rng, d)?;
        let terms = vec![random_hermitian(&mut rng, d)?, random_hermitian(&mut rng, d)?];
        let signals = (0..2).map(|_| (0..steps).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
        let h = ControlledHamiltonian::new(drift, terms, signals)?;
        let psi = random_ket(&mut rng, d)?;
        let traj = evolve_unitary(&h, &psi, &grid, &U)?;
        raw.push(("mt-driven", tau, mt_driven(&traj, &U)?.tau_qsl));
        bound_checks(&traj, tau, true, &mut raw)?;
    } else {
        let h = random_hermitian(&mut rng, d)?;
        let mut channels = Vec::new();
        for _ in 0..2 {
            let operator = random_matrix(&mut rng, d);
            channels.push(Channel {
                operator,
                rate: RateSignal::constant(rng.gen_range(0.0..0.3), steps)?,
            });
        }
        let gen = LindbladGenerator::new(ControlledHamiltonian::constant(h), channels)?;
        let psi = random_ket(&mut rng, d)?.to_density();
        let pure = evolve_lindblad(&gen, &psi, &grid, &U)?;
        for (name, n) in [("geometric-op", NormKind::Op), ("geometric-hs", NormKind::Hs), ("geometric-tr", NormKind::Tr)] {
            raw.push((name, tau, geometric_qsl(&pure, n)?.tau_qsl));
        }
        let b = purity_qsl(&gen, &pure, &U)?;
        raw.push(("purity-mt", tau, b.mt.tau_qsl));
        raw.push(("purity-ml", tau, b.ml.tau_qsl));
        // Mixed start: the QFI and Schatten rates stay regular at t = 0.
        let mixed = random_mixed(&mut rng, d)?;
        let traj = evolve_lindblad(&gen, &mixed, &grid, &U)?;
        bound_checks(&traj, tau, false, &mut raw)?;
        let mut hierarchy = f64::INFINITY;
        for m in traj.generators().unwrap_or(&[]) {
            let op = schatten_norm(m, f64::INFINITY)?;
            let hs = schatten_norm(m, 2.0)?;
            let tr = schatten_norm(m, 1.0)?;
            hierarchy = hierarchy.min(hs - op).min(tr - hs);
        }
        raw.push(("norm-hierarchy", hierarchy, 0.0));
    }
    let system = if unitary { "unitary" } else { "lindblad" };
    Ok(raw
        .into_iter()
        .map(|(name, lhs, rhs)| Check {
            instance: index,
            system,
            dim: d,
            name,
            lhs,
            rhs,
        })
        .collect())
}

pub(crate) fn all_checks(p: &Params, seed: u64) -> Result<Vec<Check>> {
    let per: Vec<Vec<Check>> = (0..p.integer("instances"))
        .into_par_iter()
        .map(|i| instance_checks(seed, i, p))
        .collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

pub fn property_suite(p: &Params, seed: u64) -> Result<ExperimentOutput> {
    let checks = all_checks(p, seed)?;
    let tol = p.number("tolerance");
    let mut table = Table::new(&["instance", "system", "dim", "check", "lhs", "rhs", "slack"]);
    for c in &checks {
        table.push(vec![
            c.instance.into(),
            c.system.into(),
            c.dim.into(),
            c.name.into(),
            c.lhs.into(),
            c.rhs.into(),
            c.slack().into(),
        ]);
    }
    let violations = checks.iter().filter(|c| !(c.slack() >= -tol)).count();
    let min_slack = checks.iter().map(Check::slack).fold(f64::INFINITY, f64::min);
    let mut out = ExperimentOutput::new(table);
    out.note("checks", checks.len());
    out.note("violations", violations);
    out.note_number("min_slack", min_slack);
    Ok(out)
}
