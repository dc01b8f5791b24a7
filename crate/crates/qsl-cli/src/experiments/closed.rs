use num_complex::Complex64;
use qsl_core::bounds::{glm_bound, mt_ml_unified};
use qsl_core::dynamics::propagate_ket;
use qsl_core::{ControlledHamiltonian, HermitianOperator, Ket, Result, TimeGrid, UnitSystem};

use crate::config::Params;
use crate::output::{ExperimentOutput, Table};

/// Nodes below this overlap start a refined search for an exact zero.
const BRACKET_OVERLAP: f64 = 1e-2;
/// Overlap accepted as orthogonal after refinement.
const ORTHOGONAL_OVERLAP: f64 = 1e-6;

/// First time where |⟨ψ0|ψt⟩| reaches a local minimum below `ORTHOGONAL_OVERLAP`, if any.
pub(crate) fn orthogonality_time(
    h: &HermitianOperator,
    psi: &Ket,
    horizon: f64,
    steps: usize,
    units: &UnitSystem,
) -> Result<Option<(f64, f64)>> {
    let hc = ControlledHamiltonian::constant(h.clone());
    let grid = TimeGrid::span(horizon, steps)?;
    let kets = propagate_ket(&hc, psi, &grid, units)?;
    let overlaps: Vec<f64> = kets.iter().map(|k| psi.overlap(k)).collect::<Result<_>>()?;
    for k in 1..overlaps.len() {
        let next = overlaps.get(k + 1).copied().unwrap_or(f64::INFINITY);
        if overlaps[k] < BRACKET_OVERLAP && overlaps[k] <= overlaps[k - 1] && overlaps[k] <= next {
            // Refine from the node before the bracket so every propagation step stays short.
            let (t0, from) = (grid.time(k - 1), &kets[k - 1]);
            let at = |t: f64| -> Result<f64> {
                if t <= t0 {
                    return psi.overlap(from);
                }
                let local = propagate_ket(&hc, from, &TimeGrid::span(t - t0, 2)?, units)?;
                psi.overlap(&local[2])
            };
            let hi = if k + 1 < overlaps.len() { grid.time(k + 1) } else { grid.time(k) };
            let (t, o) = golden_min(&at, t0, hi)?;
            if o < ORTHOGONAL_OVERLAP {
                return Ok(Some((t, o)));
            }
        }
    }
    Ok(None)
}

fn golden_min(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..200 {
        if b - a <= 1e-13 * b.abs().max(1.0) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    let t = 0.5 * (a + b);
    Ok((t, f(t)?))
}

pub fn bounds(p: &Params) -> Result<ExperimentOutput> {
    let units = UnitSystem::new(p.number("hbar"), 1.0);
    let h = HermitianOperator::from_real_diag(p.list("energies"));
    let psi = Ket::new(p.list("amplitudes").iter().map(|&a| Complex64::new(a, 0.0)).collect())?;
    let shift = p.integer("shift_ground") == 1;
    let closed = mt_ml_unified(&h, &psi, shift, &units)?;
    let orth = orthogonality_time(&h, &psi, p.number("duration"), p.integer("steps"), &units)?;
    let t_end = orth.map(|o| o.0).unwrap_or(p.number("duration"));
    let hc = ControlledHamiltonian::constant(h.clone());
    let steps = ((t_end / p.number("duration")) * p.integer("steps") as f64).ceil().max(2.0) as usize;
    let kets = propagate_ket(&hc, &psi, &TimeGrid::span(t_end, steps)?, &units)?;
    let glm = glm_bound(&h, &psi.to_density(), &kets[steps].to_density(), shift, &units)?;

    let mut table = Table::new(&["quantity", "value"]);
    table.push(vec!["mt".into(), closed.mt.tau_qsl.into()]);
    table.push(vec!["ml".into(), closed.ml.tau_qsl.into()]);
    table.push(vec!["unified".into(), closed.unified.tau_qsl.into()]);
    table.push(vec!["glm".into(), glm.tau_qsl.into()]);
    table.push(vec!["glm_angle".into(), glm.angle.into()]);
    table.push(vec!["orthogonality_time".into(), orth.map(|o| o.0).unwrap_or(f64::INFINITY).into()]);
    let mut out = ExperimentOutput::new(table);
    out.note("orthogonal_within_horizon", orth.is_some());
    if let Some((_, o)) = orth {
        out.note_number("residual_overlap", o);
    }
    Ok(out)
}
