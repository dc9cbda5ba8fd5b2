//! Conversion between natural units (ħ = k_B = 1, energies in multiples of a
//! reference energy) and SI.

use serde::{Deserialize, Serialize};

/// Boltzmann constant, J/K (exact since the 2019 SI redefinition).
pub const BOLTZMANN: f64 = 1.380649e-23;
/// Planck constant, J·s (exact).
pub const PLANCK: f64 = 6.62607015e-34;
/// Reduced Planck constant h/2π, J·s.
pub const HBAR: f64 = PLANCK / (2.0 * std::f64::consts::PI);

/// Physical dimension of a reported quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Dimensionless,
    Energy,
    InverseEnergy,
    Time,
    Rate,
    Power,
}

impl Dimension {
    /// Column-name suffix used when values are reported in SI.
    pub fn si_suffix(self) -> &'static str {
        match self {
            Dimension::Dimensionless => "",
            Dimension::Energy => "_J",
            Dimension::InverseEnergy => "_per_J",
            Dimension::Time => "_s",
            Dimension::Rate => "_per_s",
            Dimension::Power => "_W",
        }
    }
}

/// Natural-unit system anchored at a reference energy E_ref = k_B·T_ref.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitSystem {
    pub reference_kelvin: f64,
}

impl UnitSystem {
    pub fn new(reference_kelvin: f64) -> Option<Self> {
        (reference_kelvin.is_finite() && reference_kelvin > 0.0)
            .then_some(Self { reference_kelvin })
    }

    pub fn reference_energy(&self) -> f64 {
        BOLTZMANN * self.reference_kelvin
    }

    /// SI value of one natural unit of the given dimension.
    pub fn scale(&self, dim: Dimension) -> f64 {
        let e = self.reference_energy();
        match dim {
            Dimension::Dimensionless => 1.0,
            Dimension::Energy => e,
            Dimension::InverseEnergy => 1.0 / e,
            Dimension::Time => HBAR / e,
            Dimension::Rate => e / HBAR,
            Dimension::Power => e * e / HBAR,
        }
    }

    pub fn to_si(&self, value: f64, dim: Dimension) -> f64 {
        value * self.scale(dim)
    }

    pub fn from_si(&self, value: f64, dim: Dimension) -> f64 {
        value / self.scale(dim)
    }

    /// Natural-unit inverse temperature for a bath at `kelvin`.
    pub fn beta_from_kelvin(&self, kelvin: f64) -> f64 {
        self.reference_kelvin / kelvin
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hundred_millikelvin_scales() {
        let u = UnitSystem::new(0.1).unwrap();
        // ω = k_B·0.1 K/ħ ≈ 1.309e10 rad/s
        assert!((u.scale(Dimension::Rate) / 1.3092e10 - 1.0).abs() < 1e-4);
        assert!((u.beta_from_kelvin(0.02) - 5.0).abs() < 1e-15);
        assert!(UnitSystem::new(0.0).is_none());
    }

    proptest! {
        #[test]
        fn round_trip(kelvin in 1e-4f64..1e3, x in -1e6f64..1e6) {
            let u = UnitSystem::new(kelvin).unwrap();
            for dim in [Dimension::Energy, Dimension::InverseEnergy, Dimension::Time, Dimension::Rate, Dimension::Power] {
                let back = u.from_si(u.to_si(x, dim), dim);
                prop_assert!((back - x).abs() <= 1e-12 * x.abs());
            }
        }
    }
}
