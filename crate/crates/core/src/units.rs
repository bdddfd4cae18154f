//! Unit presets.
//!
//! Every formula in the crate carries `mass` and `hbar` explicitly, so a unit
//! system is nothing more than a choice of those two numbers plus labels for
//! the length, energy and time axes. The physical presets measure lengths in
//! nm, energies in eV and times in ps.

use crate::error::{Error, Result};

/// ħ in eV·ps.
pub const HBAR_EV_PS: f64 = 6.582_119_569e-4;
/// ħ²/2mₑ in eV·nm².
pub const HBAR2_OVER_2ME_EV_NM2: f64 = 0.038_099_8;

/// Free-electron mass in eV·ps²/nm², derived from the two constants above.
pub fn electron_mass() -> f64 {
    HBAR_EV_PS * HBAR_EV_PS / (2.0 * HBAR2_OVER_2ME_EV_NM2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnitPreset {
    /// m = ħ = 1, dimensionless lengths.
    Natural,
    /// Free electron, nm / eV / ps.
    Electron,
    /// Electron with an effective mass `fraction · mₑ`, nm / eV / ps.
    EffectiveMass { fraction: f64 },
}

impl UnitPreset {
    pub const NAMES: [&'static str; 3] = ["natural", "electron", "effective-mass"];

    /// Parses a preset name; `fraction` is required for "effective-mass" and
    /// ignored otherwise.
    pub fn from_name(name: &str, fraction: Option<f64>) -> Result<Self> {
        match name {
            "natural" => Ok(UnitPreset::Natural),
            "electron" => Ok(UnitPreset::Electron),
            "effective-mass" => {
                let fraction = fraction.ok_or_else(|| {
                    Error::config("units.mass_fraction", "required for the effective-mass preset")
                })?;
                if !(fraction > 0.0 && fraction.is_finite()) {
                    return Err(Error::config(
                        "units.mass_fraction",
                        format!("must be positive, got {fraction}"),
                    ));
                }
                Ok(UnitPreset::EffectiveMass { fraction })
            }
            other => Err(Error::config(
                "units.preset",
                format!("unknown preset `{other}` (expected one of {:?})", Self::NAMES),
            )),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            UnitPreset::Natural => "natural",
            UnitPreset::Electron => "electron",
            UnitPreset::EffectiveMass { .. } => "effective-mass",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub preset: UnitPreset,
    pub mass: f64,
    pub hbar: f64,
}

impl UnitSystem {
    pub fn new(preset: UnitPreset) -> Self {
        let (mass, hbar) = match preset {
            UnitPreset::Natural => (1.0, 1.0),
            UnitPreset::Electron => (electron_mass(), HBAR_EV_PS),
            UnitPreset::EffectiveMass { fraction } => (fraction * electron_mass(), HBAR_EV_PS),
        };
        UnitSystem { preset, mass, hbar }
    }

    pub fn natural() -> Self {
        Self::new(UnitPreset::Natural)
    }

    /// Effective-mass system whose mass makes a free particle of energy
    /// `energy` cross `length` in exactly `time`: m = 2E t² / ℓ².
    pub fn calibrated_from_free_time(energy: f64, length: f64, time: f64) -> Result<Self> {
        if !(energy > 0.0 && length > 0.0 && time > 0.0) {
            return Err(Error::param(
                "calibration",
                "energy, length and time must all be positive",
            ));
        }
        let mass = 2.0 * energy * time * time / (length * length);
        Ok(Self::new(UnitPreset::EffectiveMass {
            fraction: mass / electron_mass(),
        }))
    }

    pub fn length_unit(&self) -> &'static str {
        match self.preset {
            UnitPreset::Natural => "1",
            _ => "nm",
        }
    }

    pub fn energy_unit(&self) -> &'static str {
        match self.preset {
            UnitPreset::Natural => "1",
            _ => "eV",
        }
    }

    pub fn time_unit(&self) -> &'static str {
        match self.preset {
            UnitPreset::Natural => "1",
            _ => "ps",
        }
    }

    /// Converts a time computed with m = ħ = 1 (same length unit) into this
    /// system. The natural time unit is m·ℓ²/ħ.
    pub fn time_from_natural(&self, t: f64) -> f64 {
        t * self.mass / self.hbar
    }

    pub fn time_to_natural(&self, t: f64) -> f64 {
        t * self.hbar / self.mass
    }

    /// Natural energy unit is ħ²/(m·ℓ²).
    pub fn energy_from_natural(&self, e: f64) -> f64 {
        e * self.hbar * self.hbar / self.mass
    }

    pub fn energy_to_natural(&self, e: f64) -> f64 {
        e * self.mass / (self.hbar * self.hbar)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn electron_constant_roundtrip() {
        let u = UnitSystem::new(UnitPreset::Electron);
        let ratio = u.hbar * u.hbar / (2.0 * u.mass);
        assert!((ratio / HBAR2_OVER_2ME_EV_NM2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn calibration_reproduces_free_time() {
        let u = UnitSystem::calibrated_from_free_time(0.05, 15.0, 0.025).unwrap();
        let k = (2.0 * u.mass * 0.05).sqrt() / u.hbar;
        let tau_free = u.mass * 15.0 / (u.hbar * k);
        assert!((tau_free - 0.025).abs() < 1e-15);
        if let UnitPreset::EffectiveMass { fraction } = u.preset {
            assert!(fraction > 0.04 && fraction < 0.06, "fraction {fraction}");
        } else {
            panic!("wrong preset");
        }
    }

    #[test]
    fn time_conversion_roundtrip() {
        for preset in [
            UnitPreset::Natural,
            UnitPreset::Electron,
            UnitPreset::EffectiveMass { fraction: 0.067 },
        ] {
            let u = UnitSystem::new(preset);
            for t in [1e-3, 0.7, 12.5, 3.3e4] {
                let back = u.time_to_natural(u.time_from_natural(t));
                assert!((back / t - 1.0).abs() < 1e-14);
                let back_e = u.energy_to_natural(u.energy_from_natural(t));
                assert!((back_e / t - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn preset_names() {
        assert_eq!(UnitPreset::from_name("natural", None).unwrap(), UnitPreset::Natural);
        assert!(UnitPreset::from_name("effective-mass", None).is_err());
        assert!(UnitPreset::from_name("effective-mass", Some(-1.0)).is_err());
        assert!(UnitPreset::from_name("bogus", None).is_err());
        let p = UnitPreset::from_name("effective-mass", Some(0.05)).unwrap();
        assert_eq!(p.name(), "effective-mass");
    }
}
