use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Damped JC sweep: λ = 50, τ = 0.5, ℏ = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct JcPreset {
    pub omega0: f64,
    pub lambda: f64,
    pub tau: f64,
    pub gamma0_values: Vec<f64>,
}

/// LMG bath probe: N = 100, γ = 0.05, τ = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmgPreset {
    pub n_spins: usize,
    pub gamma: f64,
    pub tau: f64,
    pub lambda: f64,
}

/// Landau–Zener transfer between ground states at Γ/ω = ∓500.
#[derive(Debug, Clone, PartialEq)]
pub struct LzPreset {
    pub omega: f64,
    pub gamma_edge: f64,
    pub durations: Vec<f64>,
}

pub fn jc_fig2() -> JcPreset {
    JcPreset {
        omega0: 1.0,
        lambda: 50.0,
        tau: 0.5,
        gamma0_values: vec![2.0, 5.0, 10.0, 20.0, 50.0, 100.0],
    }
}

pub fn lmg_fig3() -> LmgPreset {
    LmgPreset {
        n_spins: 100,
        gamma: 0.05,
        tau: 1.0,
        lambda: 0.25,
    }
}

pub fn lz_caneva() -> LzPreset {
    LzPreset {
        omega: 1.0,
        gamma_edge: 500.0,
        durations: vec![1.0, 1.2, 1.4, 1.5, 1.6, 1.7, 2.0],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    JcFig2,
    LmgFig3,
    LzCaneva,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::JcFig2, Preset::LmgFig3, Preset::LzCaneva];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::JcFig2 => "jc-fig2",
            Preset::LmgFig3 => "lmg-fig3",
            Preset::LzCaneva => "lz-caneva",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Preset::JcFig2 => "damped Jaynes-Cummings qubit, lambda=50, tau=0.5, gamma0 in {2,5,10,20,50,100}",
            Preset::LmgFig3 => "probe qubit on an LMG bath, N=100, gamma=0.05, tau=1",
            Preset::LzCaneva => "Landau-Zener ground-state transfer, Gamma/omega from -500 to 500",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Preset::ALL.iter().map(Preset::name).collect();
                Error::InvalidInput(format!("unknown preset '{s}', expected one of {}", names.join(", ")))
            })
    }
}
