//! Quantum speed limit evaluators.

mod closed;
mod nonhermitian;
mod open;
mod trajectory;

use std::fmt;

pub use closed::{glm_bound, glm_from_moments, mt_ml_unified, unified_from_moments, ClosedBounds};
pub use nonhermitian::nonhermitian_qsl;
pub use open::{non_markovianity, purity_qsl, NonMarkovianityReport, PurityBounds};
pub use trajectory::{
    bures_angles, fisher_information, geometric_qsl, mt_driven, qfi_qsl, universal_qsl, NormKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Mt,
    Ml,
    Unified,
    MtDriven,
    Glm,
    GeometricOp,
    GeometricTr,
    GeometricHs,
    Qfi,
    PurityMt,
    PurityMl,
    UniversalP,
    NonHermitian,
}

impl Variant {
    pub fn tag(&self) -> &'static str {
        match self {
            Variant::Mt => "MT",
            Variant::Ml => "ML",
            Variant::Unified => "unified",
            Variant::MtDriven => "MT-driven",
            Variant::Glm => "GLM",
            Variant::GeometricOp => "geometric-op",
            Variant::GeometricTr => "geometric-tr",
            Variant::GeometricHs => "geometric-hs",
            Variant::Qfi => "QFI",
            Variant::PurityMt => "purity-MT",
            Variant::PurityMl => "purity-ML",
            Variant::UniversalP => "universal-p",
            Variant::NonHermitian => "non-hermitian",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Special outcomes of a bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundFlag {
    /// The speed vanishes while the state moves or nothing can move: τ_QSL = ∞.
    Infinite,
    /// Zero distance travelled: τ_QSL = 0.
    Trivial,
    /// Zero distance and zero speed (0/0), reported as 0.
    Stationary,
}

/// Outcome of comparing a numerically differentiated distance against its speed bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedCheck {
    /// max over checked nodes of (distance rate − bound), negative when the bound holds everywhere.
    pub max_excess: f64,
    /// Largest bound value among checked nodes.
    pub max_speed: f64,
    pub nodes_checked: usize,
}

impl SpeedCheck {
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.max_excess <= rel_tol * self.max_speed
    }

    pub(crate) fn from_pairs(pairs: impl Iterator<Item = (f64, f64)>) -> Self {
        let mut check = SpeedCheck {
            max_excess: f64::NEG_INFINITY,
            max_speed: 0.0,
            nodes_checked: 0,
        };
        for (rate, bound) in pairs {
            check.max_excess = check.max_excess.max(rate - bound);
            check.max_speed = check.max_speed.max(bound);
            check.nodes_checked += 1;
        }
        if check.nodes_checked == 0 {
            check.max_excess = 0.0;
        }
        check
    }
}

/// One bound evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct QslReport {
    pub variant: Variant,
    pub tau_qsl: f64,
    /// Bures angle, |Δ ln P| for purity variants, Schatten distance for universal-p.
    pub angle: f64,
    /// Time-averaged speed in the denominator of the bound.
    pub averaged_norm: f64,
    /// Speed-limit value per node; `None` where it is unavailable.
    pub v_samples: Option<Vec<Option<f64>>>,
    pub flag: Option<BoundFlag>,
    pub speed_check: Option<SpeedCheck>,
    /// Schatten order for universal-p.
    pub norm_order: Option<f64>,
}

impl QslReport {
    pub(crate) fn ratio(variant: Variant, numerator: f64, averaged_norm: f64, scale: f64, angle: f64) -> Self {
        let (tau_qsl, flag) = ratio_with_flag(numerator, averaged_norm);
        QslReport {
            variant,
            tau_qsl: tau_qsl * if tau_qsl.is_finite() { scale } else { 1.0 },
            angle,
            averaged_norm,
            v_samples: None,
            flag,
            speed_check: None,
            norm_order: None,
        }
    }

    /// Interior node values of `v_samples` that are available.
    pub fn available_speeds(&self) -> Vec<f64> {
        self.v_samples
            .as_ref()
            .map(|v| v.iter().flatten().copied().collect())
            .unwrap_or_default()
    }
}

pub(crate) const ZERO_SPEED: f64 = 1e-12;
pub(crate) const ZERO_DISTANCE: f64 = 1e-12;

/// numerator / denominator with the 0 and ∞ conventions.
pub(crate) fn ratio_with_flag(numerator: f64, denominator: f64) -> (f64, Option<BoundFlag>) {
    let zero_num = numerator.abs() < ZERO_DISTANCE;
    let zero_den = denominator.abs() < ZERO_SPEED;
    match (zero_num, zero_den) {
        (true, true) => (0.0, Some(BoundFlag::Stationary)),
        (true, false) => (0.0, Some(BoundFlag::Trivial)),
        (false, true) => (f64::INFINITY, Some(BoundFlag::Infinite)),
        (false, false) => (numerator / denominator, None),
    }
}
