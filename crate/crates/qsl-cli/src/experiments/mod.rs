use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use qsl_core::models::{presets, PtQubitParams, Preset, MAX_SPINS};

use crate::config::{Default as D, Diagnostic, Kind, ParamSpec, ParamValue, Params, Range};
use crate::output::ExperimentOutput;

mod closed;
mod control;
mod open;
mod suite;
mod thermo;
mod unitary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    Bounds,
    JcSweep,
    LmgScan,
    LzThreshold,
    StaTradeoff,
    Thermo,
    Dirac,
    PtQubit,
    NonlinearTmin,
    PropertySuite,
}

const fn p(name: &'static str, kind: Kind, range: Range, default: D, help: &'static str) -> ParamSpec {
    ParamSpec::new(name, kind, range, default, help)
}

fn steps(n: f64, help: &'static str) -> ParamSpec {
    p("steps", Kind::Integer, Range::Positive, D::Number(n), help)
}

use Kind::{Integer as I, List as L, Number as N};
use Range::{Any, NonNegative as NonNeg, Positive as Pos};

fn schema_bounds() -> Vec<ParamSpec> {
    vec![
        p("energies", L, Any, D::Required, "diagonal spectrum of H"),
        p("amplitudes", L, Any, D::Required, "real amplitudes of the initial state in the energy basis"),
        p("hbar", N, Pos, D::Number(1.0), "reduced Planck constant"),
        p("shift_ground", I, Range::Between(0.0, 1.0), D::Number(1.0), "1 to measure energies from the ground level"),
        p("duration", N, Pos, D::Number(10.0), "horizon of the orthogonality scan"),
        steps(4000.0, "scan nodes"),
    ]
}

fn schema_jc() -> Vec<ParamSpec> {
    vec![
        p("gamma0", L, Pos, D::Required, "coupling strengths to sweep"),
        p("lambda", N, Pos, D::Required, "reservoir spectral width"),
        p("omega0", N, Pos, D::Number(1.0), "qubit frequency"),
        p("tau", N, Pos, D::Required, "actual driving time"),
        steps(20000.0, "time steps per trajectory"),
    ]
}

fn schema_lmg() -> Vec<ParamSpec> {
    vec![
        p("n_spins", I, Range::Between(2.0, MAX_SPINS as f64), D::Required, "bath size"),
        p("gamma", N, NonNeg, D::Required, "probe-bath coupling"),
        p("tau", N, Pos, D::Required, "actual driving time"),
        p("lambda_min", N, NonNeg, D::Number(0.0), "first bath anisotropy"),
        p("lambda_max", N, NonNeg, D::Number(2.0), "last bath anisotropy"),
        p("lambda_points", I, Range::Between(2.0, 1e6), D::Number(201.0), "number of anisotropy values"),
        steps(2000.0, "time steps per trajectory"),
    ]
}

fn schema_lz() -> Vec<ParamSpec> {
    vec![
        p("omega", N, Pos, D::Required, "transverse field"),
        p("gamma_edge", N, Pos, D::Required, "bias at the endpoints, swept from -edge to +edge"),
        p("durations", L, Pos, D::Required, "strictly ascending driving times"),
        p("max_iterations", I, Pos, D::Number(5000.0), "optimizer iterations per restart"),
        p("restarts", I, Pos, D::Number(20.0), "optimizer restarts"),
        p("fidelity_goal", N, Range::Between(0.0, 1.0), D::Number(0.99), "convergence fidelity"),
        steps(4000.0, "piecewise-constant control samples"),
    ]
}

fn schema_sta() -> Vec<ParamSpec> {
    vec![
        p("omega", N, Pos, D::Number(1.0), "transverse field"),
        p("gamma_start", N, Any, D::Number(-4.0), "bias at the start of the sweep"),
        p("gamma_end", N, Any, D::Number(4.0), "bias at the end of the sweep"),
        p("durations", L, Pos, D::List(&[2.0, 1.0]), "sweep durations along the same path"),
        steps(4000.0, "time steps per sweep"),
    ]
}

fn schema_thermo() -> Vec<ParamSpec> {
    vec![
        p("instances", I, Pos, D::Number(100.0), "random qubit protocols"),
        p("beta_min", N, Pos, D::Number(0.1), "smallest inverse temperature"),
        p("beta_max", N, Pos, D::Number(5.0), "largest inverse temperature"),
        p("duration_max", N, Pos, D::Number(3.0), "longest protocol"),
        p("amplitude", N, Pos, D::Number(2.0), "largest control amplitude"),
        steps(40.0, "piecewise-constant control steps per protocol"),
    ]
}

fn schema_dirac() -> Vec<ParamSpec> {
    vec![
        p("mass", N, Pos, D::Number(1.0), "particle mass"),
        p("charge", N, Pos, D::Number(1.0), "particle charge"),
        p("light_speed", N, Pos, D::Number(1.0), "speed of light"),
        p("hbar", N, Pos, D::Number(1.0), "reduced Planck constant"),
        p("b_min", N, Pos, D::Number(0.1), "weakest field"),
        p("b_max", N, Pos, D::Number(1e5), "strongest field"),
        steps(41.0, "logarithmically spaced field values"),
    ]
}

fn schema_pt() -> Vec<ParamSpec> {
    vec![
        p("r", N, Any, D::Number(1.0), "diagonal magnitude"),
        p("theta", N, Any, D::Number(PI / 6.0), "diagonal phase"),
        p("s", N, Any, D::Number(2.0), "off-diagonal coupling"),
        p("periods", N, Pos, D::Number(1.0), "evolution time in oscillation periods"),
        p("hbar", N, Pos, D::Number(1.0), "reduced Planck constant"),
        steps(4000.0, "time steps"),
    ]
}

fn schema_nonlinear() -> Vec<ParamSpec> {
    vec![
        p("kappa", L, Any, D::List(&[0.0, 1.0, 5.0]), "nonlinearities to scan"),
        p("durations", L, Pos, D::List(&[0.70, 0.74, 0.76, 0.78, 0.80, 0.84, 0.90]), "strictly ascending driving times"),
        p("coupling", N, Pos, D::Number(1.0), "fixed tunnelling amplitude"),
        p("substeps", I, Pos, D::Number(25.0), "integrator substeps per control sample"),
        p("max_iterations", I, Pos, D::Number(500.0), "optimizer iterations per restart"),
        p("restarts", I, Pos, D::Number(3.0), "optimizer restarts"),
        p("fidelity_goal", N, Range::Between(0.0, 1.0), D::Number(0.9999), "convergence fidelity"),
        steps(40.0, "piecewise-constant control samples"),
    ]
}

fn schema_suite() -> Vec<ParamSpec> {
    vec![
        p("instances", I, Pos, D::Number(1000.0), "random instances"),
        p("tau_min", N, Pos, D::Number(0.2), "shortest evolution time"),
        p("tau_max", N, Pos, D::Number(2.0), "longest evolution time"),
        p("tolerance", N, NonNeg, D::Number(1e-7), "allowed violation"),
        steps(60.0, "time steps per trajectory"),
    ]
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Experiment::Bounds,
        Experiment::JcSweep,
        Experiment::LmgScan,
        Experiment::LzThreshold,
        Experiment::StaTradeoff,
        Experiment::Thermo,
        Experiment::Dirac,
        Experiment::PtQubit,
        Experiment::NonlinearTmin,
        Experiment::PropertySuite,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Experiment::Bounds => "bounds",
            Experiment::JcSweep => "jc-sweep",
            Experiment::LmgScan => "lmg-scan",
            Experiment::LzThreshold => "lz-threshold",
            Experiment::StaTradeoff => "sta-tradeoff",
            Experiment::Thermo => "thermo",
            Experiment::Dirac => "dirac",
            Experiment::PtQubit => "pt-qubit",
            Experiment::NonlinearTmin => "nonlinear-tmin",
            Experiment::PropertySuite => "property-suite",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Experiment::Bounds => "MT, ML, unified and GLM bounds against a scanned orthogonality time",
            Experiment::JcSweep => "geometric operator-norm bound and non-Markovianity of a damped qubit",
            Experiment::LmgScan => "probe-qubit bound across the LMG bath anisotropy",
            Experiment::LzThreshold => "optimal-control threshold scan for Landau-Zener transfer",
            Experiment::StaTradeoff => "counterdiabatic cost and its speed limit for Landau-Zener sweeps",
            Experiment::Thermo => "entropy production identities on random driven qubits",
            Experiment::Dirac => "Schrodinger and Dirac Landau-level speeds against the speed of light",
            Experiment::PtQubit => "PT-symmetric qubit: analytic solution and non-Hermitian speed limit",
            Experiment::NonlinearTmin => "two-mode minimal transfer time across nonlinearities",
            Experiment::PropertySuite => "universality of every bound on random unitary and Lindblad instances",
        }
    }

    pub fn schema(&self) -> Vec<ParamSpec> {
        match self {
            Experiment::Bounds => schema_bounds(),
            Experiment::JcSweep => schema_jc(),
            Experiment::LmgScan => schema_lmg(),
            Experiment::LzThreshold => schema_lz(),
            Experiment::StaTradeoff => schema_sta(),
            Experiment::Thermo => schema_thermo(),
            Experiment::Dirac => schema_dirac(),
            Experiment::PtQubit => schema_pt(),
            Experiment::NonlinearTmin => schema_nonlinear(),
            Experiment::PropertySuite => schema_suite(),
        }
    }

    /// Parameter values a preset supplies to this experiment, if it applies.
    pub fn preset_values(&self, preset: Preset) -> Option<Params> {
        use ParamValue::{List, Number};
        match (self, preset) {
            (Experiment::JcSweep, Preset::JcFig2) => {
                let q = presets::jc_fig2();
                Some(Params::from_pairs([
                    ("gamma0", List(q.gamma0_values)),
                    ("lambda", Number(q.lambda)),
                    ("omega0", Number(q.omega0)),
                    ("tau", Number(q.tau)),
                ]))
            }
            (Experiment::LmgScan, Preset::LmgFig3) => {
                let q = presets::lmg_fig3();
                Some(Params::from_pairs([
                    ("n_spins", Number(q.n_spins as f64)),
                    ("gamma", Number(q.gamma)),
                    ("tau", Number(q.tau)),
                ]))
            }
            (Experiment::LzThreshold, Preset::LzCaneva) => {
                let q = presets::lz_caneva();
                Some(Params::from_pairs([
                    ("omega", Number(q.omega)),
                    ("gamma_edge", Number(q.gamma_edge)),
                    ("durations", List(q.durations)),
                ]))
            }
            _ => None,
        }
    }

    /// Constraints spanning several parameters; runs only when each parameter is valid alone.
    pub fn cross_check(&self, p: &Params) -> Vec<Diagnostic> {
        let mut d = Vec::new();
        let ascending = |name: &str, min_len: usize, d: &mut Vec<Diagnostic>| {
            let v = p.list(name);
            if v.len() < min_len {
                d.push(Diagnostic::new(name, format!("needs at least {min_len} values, got {}", v.len())));
            } else if v.windows(2).any(|w| !(w[0] < w[1])) {
                d.push(Diagnostic::new(name, "must be strictly ascending"));
            }
        };
        match self {
            Experiment::Bounds => {
                let (e, a) = (p.list("energies"), p.list("amplitudes"));
                if e.len() < 2 {
                    d.push(Diagnostic::new("energies", "needs at least two levels"));
                }
                if e.len() != a.len() {
                    d.push(Diagnostic::new(
                        "amplitudes",
                        format!("has {} entries but energies has {}", a.len(), e.len()),
                    ));
                }
                if a.iter().all(|x| *x == 0.0) {
                    d.push(Diagnostic::new("amplitudes", "state must not be zero"));
                }
                if p.integer("steps") < 2 {
                    d.push(Diagnostic::new("steps", "the scan needs at least 2 steps"));
                }
            }
            Experiment::LmgScan => {
                if !(p.number("lambda_max") > p.number("lambda_min")) {
                    d.push(Diagnostic::new("lambda_max", "must exceed lambda_min"));
                }
            }
            Experiment::LzThreshold | Experiment::NonlinearTmin => {
                ascending("durations", 2, &mut d);
                if !(p.number("fidelity_goal") > 0.0) {
                    d.push(Diagnostic::new("fidelity_goal", "must be positive"));
                }
            }
            Experiment::StaTradeoff => {
                if p.number("gamma_start") == p.number("gamma_end") {
                    d.push(Diagnostic::new("gamma_end", "must differ from gamma_start"));
                }
                if p.integer("steps") < 2 {
                    d.push(Diagnostic::new("steps", "needs at least 2 steps"));
                }
            }
            Experiment::Thermo => {
                if p.number("beta_max") < p.number("beta_min") {
                    d.push(Diagnostic::new("beta_max", "must not be below beta_min"));
                }
            }
            Experiment::Dirac => {
                if p.number("b_max") < p.number("b_min") {
                    d.push(Diagnostic::new("b_max", "must not be below b_min"));
                }
            }
            Experiment::PtQubit => match PtQubitParams::new(p.number("r"), p.number("theta"), p.number("s")) {
                Ok(q) if !q.is_unbroken() => d.push(Diagnostic::new("s", "parameters lie in the broken phase, s^2 <= r^2 sin^2(theta)")),
                Ok(_) => {}
                Err(e) => d.push(Diagnostic::new("s", e.to_string())),
            },
            Experiment::PropertySuite => {
                if p.number("tau_max") < p.number("tau_min") {
                    d.push(Diagnostic::new("tau_max", "must not be below tau_min"));
                }
                if p.integer("steps") < 2 {
                    d.push(Diagnostic::new("steps", "needs at least 2 steps"));
                }
            }
            Experiment::JcSweep => {
                if p.integer("steps") < 2 {
                    d.push(Diagnostic::new("steps", "needs at least 2 steps"));
                }
            }
        }
        d
    }

    pub fn run(&self, p: &Params, seed: u64) -> qsl_core::Result<ExperimentOutput> {
        match self {
            Experiment::Bounds => closed::bounds(p),
            Experiment::JcSweep => open::jc_sweep(p),
            Experiment::LmgScan => open::lmg_scan(p),
            Experiment::LzThreshold => control::lz_threshold(p, seed),
            Experiment::StaTradeoff => thermo::sta_tradeoff(p),
            Experiment::Thermo => thermo::entropy_production(p, seed),
            Experiment::Dirac => unitary::dirac(p),
            Experiment::PtQubit => unitary::pt_qubit(p),
            Experiment::NonlinearTmin => control::nonlinear_tmin(p, seed),
            Experiment::PropertySuite => suite::property_suite(p, seed),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Experiment::ALL.into_iter().find(|e| e.tag() == s).ok_or_else(|| {
            let tags: Vec<_> = Experiment::ALL.iter().map(Experiment::tag).collect();
            format!("unknown experiment '{s}', valid experiments are {}", tags.join(", "))
        })
    }
}
