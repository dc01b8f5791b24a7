use qsl_core::dynamics::evolve_unitary;
use qsl_core::linalg::pauli;
use qsl_core::models::{counterdiabatic_protocol, landau_zener, linear_sweep};
use qsl_core::operator::fidelity;
use qsl_core::thermo::{clausius_geometric_check, sta_cost_and_qsl, two_point_work, StaCostReport};
use qsl_core::{ControlledHamiltonian, HermitianOperator, Ket, Result, TimeGrid, UnitSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::Params;
use crate::output::{ExperimentOutput, Table};

const U: UnitSystem = UnitSystem::NATURAL;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct StaSweep {
    pub duration: f64,
    pub report: StaCostReport,
    /// Worst fidelity between the counterdiabatically driven state and the instantaneous ground state.
    pub tracking: f64,
}

impl StaSweep {
    pub fn peak_cost(&self) -> f64 {
        self.report.instantaneous_cost.iter().copied().fold(0.0, f64::max)
    }
}

pub(crate) fn sta_sweep(omega: f64, start: f64, end: f64, duration: f64, steps: usize) -> Result<StaSweep> {
    let grid = TimeGrid::span(duration, steps)?;
    let h0 = landau_zener(omega, linear_sweep(start, end, steps), &grid)?;
    let report = sta_cost_and_qsl(&h0, 0, &grid, &U)?;
    let ground = |k: usize| -> Result<Ket> { Ket::new(h0.node(k).eigen()?.vector(0)) };
    let protocol = counterdiabatic_protocol(&h0, &grid, &U)?;
    let traj = evolve_unitary(&protocol, &ground(0)?, &grid, &U)?;
    let mut tracking: f64 = 1.0;
    for (k, s) in traj.states().iter().enumerate() {
        tracking = tracking.min(fidelity(s, &ground(k)?.to_density())?);
    }
    Ok(StaSweep { duration, report, tracking })
}

pub fn sta_tradeoff(p: &Params) -> Result<ExperimentOutput> {
    let (omega, start, end, steps) = (p.number("omega"), p.number("gamma_start"), p.number("gamma_end"), p.integer("steps"));
    let mut durations = p.list("durations").to_vec();
    durations.sort_by(f64::total_cmp);
    let sweeps: Vec<StaSweep> = durations
        .par_iter()
        .map(|&d| sta_sweep(omega, start, end, d, steps))
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["duration", "total_cost", "peak_cost", "tau_qsl", "angle", "tracking_fidelity"]);
    for s in &sweeps {
        table.push(vec![
            s.duration.into(),
            s.report.total_cost.into(),
            s.peak_cost().into(),
            s.report.tau_qsl.into(),
            s.report.angle.into(),
            s.tracking.into(),
        ]);
    }
    let mut out = ExperimentOutput::new(table);
    out.note("duration_respects_bound", sweeps.iter().all(|s| s.duration >= s.report.tau_qsl));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ThermoInstance {
    pub beta: f64,
    pub duration: f64,
    pub mean_work: f64,
    pub delta_f: f64,
    pub entropy_production: f64,
    pub relative_entropy: f64,
    pub clausius_bound: f64,
}

/// Random driven qubit number `index` of the stream selected by `seed`.
pub(crate) fn thermo_instance(seed: u64, index: u64, p: &Params) -> Result<ThermoInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let steps = p.integer("steps");
    let amp = p.number("amplitude");
    let (b0, b1) = (p.number("beta_min"), p.number("beta_max"));
    let beta = if b1 > b0 { rng.gen_range(b0..b1) } else { b0 };
    let duration = rng.gen_range(0.05..1.0) * p.number("duration_max");
    let drift = HermitianOperator::new(
        &pauli::z().scale_real(rng.gen_range(0.2..2.0)) + &pauli::x().scale_real(rng.gen_range(-1.0..1.0)),
    )?;
    let signals = (0..2).map(|_| (0..steps).map(|_| rng.gen_range(-amp..amp)).collect()).collect();
    let h = ControlledHamiltonian::new(drift, vec![HermitianOperator::new(pauli::x())?, HermitianOperator::new(pauli::y())?], signals)?;
    let s = two_point_work(&h, beta, &TimeGrid::span(duration, steps)?, &U)?;
    let (_, bound) = clausius_geometric_check(&s, &s.final_state, &s.final_equilibrium)?;
    Ok(ThermoInstance {
        beta,
        duration,
        mean_work: s.mean_work,
        delta_f: s.delta_f,
        entropy_production: s.entropy_production,
        relative_entropy: s.relative_entropy,
        clausius_bound: bound,
    })
}

pub fn entropy_production(p: &Params, seed: u64) -> Result<ExperimentOutput> {
    let n = p.integer("instances");
    let rows: Vec<ThermoInstance> = (0..n as u64)
        .into_par_iter()
        .map(|i| thermo_instance(seed, i, p))
        .collect::<Result<_>>()?;
    let mut table = Table::new(&[
        "instance",
        "beta",
        "duration",
        "mean_work",
        "delta_f",
        "entropy_production",
        "relative_entropy",
        "clausius_bound",
    ]);
    for (i, r) in rows.iter().enumerate() {
        table.push(vec![
            i.into(),
            r.beta.into(),
            r.duration.into(),
            r.mean_work.into(),
            r.delta_f.into(),
            r.entropy_production.into(),
            r.relative_entropy.into(),
            r.clausius_bound.into(),
        ]);
    }
    let identity_gap = rows.iter().map(|r| (r.entropy_production - r.relative_entropy).abs()).fold(0.0, f64::max);
    let clausius_slack = rows.iter().map(|r| r.entropy_production - r.clausius_bound).fold(f64::INFINITY, f64::min);
    let mut out = ExperimentOutput::new(table);
    out.note_number("max_identity_gap", identity_gap);
    out.note_number("min_clausius_slack", clausius_slack);
    Ok(out)
}
