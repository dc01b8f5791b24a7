//! Named model systems and their closed-form solutions.

mod counterdiabatic;
mod dirac;
mod jc;
mod lmg;
mod lz;
pub mod presets;
mod pt;

pub use counterdiabatic::{counterdiabatic_from, counterdiabatic_protocol, counterdiabatic_term};
pub use dirac::{dirac_landau_report, DiracLandauParams, DiracLandauReport};
pub use jc::{
    jc_amplitude, jc_amplitude_derivative, jc_decay_rate, jc_excited_population, jc_generator,
    jc_lamb_shift, jc_trajectory, JcParams,
};
pub use lmg::{lmg_probe_hamiltonian, lmg_probe_trajectory, LmgParams, MAX_SPINS};
pub use lz::{landau_zener, linear_sweep, lz_ground_state};
pub use presets::Preset;
pub use pt::{pt_qubit_hamiltonian, pt_qubit_solution, PtQubitParams};
