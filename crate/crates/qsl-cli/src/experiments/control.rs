use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use qsl_core::control::{
    bhattacharyya_qsl, empirical_threshold, lz_transfer_problem, nonlinear_tmin as analytic_tmin, optimize_control,
    ControlProblem, ScanPoint,
};
use qsl_core::linalg::pauli;
use qsl_core::models::lz_ground_state;
use qsl_core::{ControlledHamiltonian, HermitianOperator, Ket, Result, TimeGrid, UnitSystem};
use rayon::prelude::*;
use serde_json::json;

use crate::config::Params;
use crate::output::{ExperimentOutput, Table};

/// Every duration runs with the template's budget and seed; results come back in duration order.
pub(crate) fn parallel_scan(template: &ControlProblem, durations: &[f64]) -> Result<Vec<ScanPoint>> {
    durations
        .par_iter()
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

pub(crate) fn lz_template(p: &Params, seed: u64) -> Result<ControlProblem> {
    let durations = p.list("durations");
    Ok(lz_transfer_problem(p.number("omega"), p.number("gamma_edge"), p.integer("steps"), durations[0])?
        .with_budget(p.integer("max_iterations"), p.integer("restarts"))?
        .with_goal(p.number("fidelity_goal"))?
        .with_seed(seed))
}

pub fn lz_threshold(p: &Params, seed: u64) -> Result<ExperimentOutput> {
    let (omega, edge) = (p.number("omega"), p.number("gamma_edge"));
    let scan = parallel_scan(&lz_template(p, seed)?, p.list("durations"))?;
    let mut table = Table::new(&["duration", "best_fidelity", "converged", "iterations"]);
    for s in &scan {
        table.push(vec![s.duration.into(), s.best_fidelity.into(), s.converged.into(), s.iterations.into()]);
    }
    let start = lz_ground_state(omega, -edge)?;
    let end = lz_ground_state(omega, edge)?;
    let transverse = HermitianOperator::new(pauli::x().scale_real(omega))?;
    let b = bhattacharyya_qsl(&start, &end, &transverse, &UnitSystem::NATURAL)?;
    let mut out = ExperimentOutput::new(table);
    out.note_number("endpoint_overlap", b.overlap);
    out.note_number("bhattacharyya_tau_qsl", b.tau_qsl);
    match empirical_threshold(&scan) {
        Some(t) => out.note_number("empirical_threshold", t),
        None => out.note("empirical_threshold", serde_json::Value::Null),
    }
    Ok(out)
}

/// Two-mode transfer from |0⟩ to (|0⟩ − i|1⟩)/√2 with fixed tunnelling and a free bias.
pub(crate) fn nonlinear_problem(coupling: f64, kappa: f64, samples: usize, substeps: usize, duration: f64) -> Result<ControlProblem> {
    let grid = TimeGrid::span(duration, samples)?;
    let h = ControlledHamiltonian::new(
        HermitianOperator::new(pauli::x().scale_real(coupling))?,
        vec![HermitianOperator::new(pauli::z())?],
        vec![vec![0.0; grid.steps()]],
    )?;
    let initial = Ket::basis(2, 0)?;
    let target = Ket::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)])?;
    ControlProblem::new(h, initial, target, duration)?.with_nonlinear(kappa, substeps)
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct NonlinearThreshold {
    pub kappa: f64,
    pub threshold: Option<f64>,
    pub analytic: f64,
    pub scan: Vec<ScanPoint>,
}

pub(crate) fn nonlinear_thresholds(p: &Params, seed: u64) -> Result<Vec<NonlinearThreshold>> {
    let durations = p.list("durations");
    let coupling = p.number("coupling");
    // Bloch polar angles 0 and π/2.
    let analytic = analytic_tmin(0.0, FRAC_PI_2, coupling)?;
    let mut kappas = p.list("kappa").to_vec();
    kappas.sort_by(f64::total_cmp);
    kappas
        .iter()
        .map(|&kappa| {
            let template = nonlinear_problem(coupling, kappa, p.integer("steps"), p.integer("substeps"), durations[0])?
                .with_budget(p.integer("max_iterations"), p.integer("restarts"))?
                .with_goal(p.number("fidelity_goal"))?
                .with_seed(seed);
            let scan = parallel_scan(&template, durations)?;
            Ok(NonlinearThreshold {
                kappa,
                threshold: empirical_threshold(&scan),
                analytic,
                scan,
            })
        })
        .collect()
}

pub fn nonlinear_tmin(p: &Params, seed: u64) -> Result<ExperimentOutput> {
    let rows = nonlinear_thresholds(p, seed)?;
    let mut table = Table::new(&["kappa", "threshold", "analytic", "relative_error"]);
    let mut scans = Vec::new();
    for r in &rows {
        let t = r.threshold.unwrap_or(f64::NAN);
        table.push(vec![r.kappa.into(), t.into(), r.analytic.into(), ((t - r.analytic).abs() / r.analytic).into()]);
        for s in &r.scan {
            scans.push(json!({
                "kappa": r.kappa,
                "duration": s.duration,
                "best_fidelity": s.best_fidelity,
                "converged": s.converged,
                "iterations": s.iterations,
            }));
        }
    }
    let mut out = ExperimentOutput::new(table);
    out.note("scan", scans);
    Ok(out)
}
