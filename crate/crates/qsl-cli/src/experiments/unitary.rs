use num_complex::Complex64;
use qsl_core::bounds::nonhermitian_qsl;
use qsl_core::dynamics::evolve_nonhermitian;
use qsl_core::linalg::expm;
use qsl_core::models::{dirac_landau_report, pt_qubit_hamiltonian, pt_qubit_solution, DiracLandauParams, PtQubitParams};
use qsl_core::{Ket, Result, TimeGrid, UnitSystem};

use crate::config::Params;
use crate::output::{ExperimentOutput, Table};

pub fn dirac(p: &Params) -> Result<ExperimentOutput> {
    let units = UnitSystem::new(p.number("hbar"), 1.0);
    let (b0, b1, n) = (p.number("b_min"), p.number("b_max"), p.integer("steps"));
    let c = p.number("light_speed");
    let mut table = Table::new(&[
        "b_field",
        "b_over_critical",
        "field_strength",
        "v_s_over_c",
        "v_d_over_c",
        "v_s_exceeds_c",
    ]);
    let mut critical = f64::NAN;
    for k in 0..n {
        let b = if n == 1 { b0 } else { b0 * (b1 / b0).powf(k as f64 / (n - 1) as f64) };
        let q = DiracLandauParams::new(b, p.number("mass"), p.number("charge"), c)?;
        let r = dirac_landau_report(&q, &units);
        critical = q.critical_field(&units);
        table.push(vec![
            b.into(),
            (b / critical).into(),
            q.field_strength(&units).into(),
            (r.v_s / c).into(),
            (r.v_d / c).into(),
            r.v_s_exceeds_c.into(),
        ]);
    }
    let mut out = ExperimentOutput::new(table);
    out.note_number("critical_field", critical);
    Ok(out)
}

/// Distance between the normalized analytic and matrix-exponential states at time `t`.
pub(crate) fn pt_deviation(q: &PtQubitParams, t: f64, units: &UnitSystem) -> Result<f64> {
    let h = pt_qubit_hamiltonian(q);
    let analytic = pt_qubit_solution(q, t, units)?;
    let direct = expm(&h.scale(Complex64::new(0.0, -t / units.hbar)))?.mul_vec(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    let direct = Ket::new(direct)?;
    Ok(analytic
        .amplitudes()
        .iter()
        .zip(direct.amplitudes())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

pub fn pt_qubit(p: &Params) -> Result<ExperimentOutput> {
    let units = UnitSystem::new(p.number("hbar"), 1.0);
    let q = PtQubitParams::new(p.number("r"), p.number("theta"), p.number("s"))?;
    let h = pt_qubit_hamiltonian(&q);
    let grid = TimeGrid::span(p.number("periods") * q.period(&units), p.integer("steps"))?;
    let start = Ket::basis(2, 0)?;
    let nh = evolve_nonhermitian(&h, &start, &grid, &units)?;
    let report = nonhermitian_qsl(&nh, &h, &units)?;
    let speeds = report.v_samples.clone().unwrap_or_default();
    let mut table = Table::new(&["t", "analytic_vs_expm", "angle", "v_qsl"]);
    let mut worst: f64 = 0.0;
    for (k, ket) in nh.kets.iter().enumerate() {
        let t = grid.time(k);
        let dev = pt_deviation(&q, t, &units)?;
        worst = worst.max(dev);
        let angle = start.overlap(ket)?.min(1.0).acos();
        let v = speeds.get(k).copied().flatten().unwrap_or(f64::NAN);
        table.push(vec![t.into(), dev.into(), angle.into(), v.into()]);
    }
    let mut out = ExperimentOutput::new(table);
    out.note_number("max_deviation", worst);
    out.note_number("tau_qsl", report.tau_qsl);
    if let Some(c) = report.speed_check {
        out.note_number("speed_check_max_excess", c.max_excess);
        out.note("speed_check_holds", c.holds(1e-6));
    }
    Ok(out)
}
