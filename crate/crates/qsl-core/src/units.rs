/// Values of ℏ and k_B used by every routine that needs them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub hbar: f64,
    pub kb: f64,
}

impl UnitSystem {
    /// Natural units, ℏ = k_B = 1.
    pub const NATURAL: UnitSystem = UnitSystem { hbar: 1.0, kb: 1.0 };

    /// SI values (J·s and J/K).
    pub const SI: UnitSystem = UnitSystem {
        hbar: 1.054_571_817e-34,
        kb: 1.380_649e-23,
    };

    pub fn new(hbar: f64, kb: f64) -> Self {
        Self { hbar, kb }
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::NATURAL
    }
}
