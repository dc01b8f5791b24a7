use qsl_core::bounds::{geometric_qsl, non_markovianity, NormKind};
use qsl_core::models::{jc_excited_population, jc_trajectory, lmg_probe_trajectory, JcParams, LmgParams};
use qsl_core::{Ket, Result, TimeGrid, UnitSystem};
use rayon::prelude::*;

use crate::config::Params;
use crate::output::{ExperimentOutput, Table};

/// Interior local maxima of the available samples, in order.
pub(crate) fn local_maxima(samples: &[Option<f64>]) -> usize {
    let v: Vec<f64> = samples.iter().flatten().copied().collect();
    v.windows(3).filter(|w| w[1] > w[0] && w[1] > w[2]).count()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct JcPoint {
    pub gamma0: f64,
    pub tau_qsl: f64,
    pub n_measure: f64,
    /// τ(1 − P_τ)/(2N + 1 − P_τ) from the excited population and the backflow.
    pub tau_qsl_identity: f64,
    pub speed_maxima: usize,
}

pub(crate) fn jc_point(gamma0: f64, lambda: f64, omega0: f64, tau: f64, steps: usize) -> Result<JcPoint> {
    let p = JcParams::new(omega0, gamma0, lambda)?;
    let grid = TimeGrid::span(tau, steps)?;
    let excited = jc_trajectory(&p, &Ket::basis(2, 0)?.to_density(), &grid)?;
    let ground = jc_trajectory(&p, &Ket::basis(2, 1)?.to_density(), &grid)?;
    let geo = geometric_qsl(&excited, NormKind::Op)?;
    let nm = non_markovianity(&excited, &ground, "excited/ground")?;
    let pt = jc_excited_population(&p, grid.t_end());
    Ok(JcPoint {
        gamma0,
        tau_qsl: geo.tau_qsl,
        n_measure: nm.n_measure,
        tau_qsl_identity: tau * (1.0 - pt) / (2.0 * nm.n_measure + 1.0 - pt),
        speed_maxima: geo.v_samples.as_deref().map(local_maxima).unwrap_or(0),
    })
}

pub fn jc_sweep(p: &Params) -> Result<ExperimentOutput> {
    let (lambda, omega0, tau, steps) = (p.number("lambda"), p.number("omega0"), p.number("tau"), p.integer("steps"));
    let mut gammas = p.list("gamma0").to_vec();
    gammas.sort_by(f64::total_cmp);
    let points: Vec<JcPoint> = gammas
        .par_iter()
        .map(|&g| jc_point(g, lambda, omega0, tau, steps))
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["gamma0", "tau_qsl_op", "n_measure", "tau_qsl_identity", "v_qsl_local_maxima"]);
    for q in &points {
        table.push(vec![
            q.gamma0.into(),
            q.tau_qsl.into(),
            q.n_measure.into(),
            q.tau_qsl_identity.into(),
            q.speed_maxima.into(),
        ]);
    }
    let mut out = ExperimentOutput::new(table);
    out.note(
        "tau_qsl_strictly_decreasing",
        points.windows(2).all(|w| w[0].tau_qsl - w[1].tau_qsl > 1e-6),
    );
    Ok(out)
}

pub(crate) fn lmg_tau_qsl(n_spins: usize, lambda: f64, gamma: f64, tau: f64, steps: usize) -> Result<f64> {
    let params = LmgParams::new(n_spins, lambda, gamma)?;
    let traj = lmg_probe_trajectory(&params, &TimeGrid::span(tau, steps)?, &UnitSystem::NATURAL)?;
    Ok(geometric_qsl(&traj, NormKind::Op)?.tau_qsl)
}

pub fn lmg_scan(p: &Params) -> Result<ExperimentOutput> {
    let (n, gamma, tau, steps) = (p.integer("n_spins"), p.number("gamma"), p.number("tau"), p.integer("steps"));
    let (lo, hi, count) = (p.number("lambda_min"), p.number("lambda_max"), p.integer("lambda_points"));
    let lambdas: Vec<f64> = (0..count).map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64).collect();
    let taus: Vec<f64> = lambdas
        .par_iter()
        .map(|&l| lmg_tau_qsl(n, l, gamma, tau, steps))
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["lambda", "tau_qsl", "tau_qsl_over_tau"]);
    for (l, t) in lambdas.iter().zip(&taus) {
        table.push(vec![(*l).into(), (*t).into(), (t / tau).into()]);
    }
    let (arg, min) = lambdas
        .iter()
        .zip(&taus)
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(l, t)| (*l, *t))
        .expect("at least two lambda values");
    let mut out = ExperimentOutput::new(table);
    out.note_number("min_tau_qsl", min);
    out.note_number("argmin_lambda", arg);
    Ok(out)
}
