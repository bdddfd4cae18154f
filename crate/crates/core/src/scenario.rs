//! Scenario files: one TOML document per run, resolved into a barrier
//! system in internal units plus a sweep or a packet specification.
//!
//! Lengths and energies are given in the units of the chosen preset. The
//! barrier can be described physically (`V0`, `d`, `L`) or, in the figure
//! style, by the opacity `two_kappa0_d` and `gap_over_d`; in natural units
//! the latter fixes κ0 = 1.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::BarrierSystem;
use crate::packet::{PacketSpec, RunConfig};
use crate::units::{UnitPreset, UnitSystem};

/// Name and source text of every builtin scenario.
pub const BUILTINS: [(&str, &str); 7] = [
    ("fig1", include_str!("../scenarios/fig1.toml")),
    ("fig2", include_str!("../scenarios/fig2.toml")),
    ("fig3", include_str!("../scenarios/fig3.toml")),
    ("fig4", include_str!("../scenarios/fig4.toml")),
    ("fig5", include_str!("../scenarios/fig5.toml")),
    ("fig6", include_str!("../scenarios/fig6.toml")),
    ("fig7", include_str!("../scenarios/fig7.toml")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Mode {
    #[serde(rename = "times-vs-k")]
    TimesVsK,
    #[serde(rename = "times-vs-L")]
    TimesVsL,
    #[serde(rename = "wavepacket")]
    Wavepacket,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::TimesVsK => "times-vs-k",
            Mode::TimesVsL => "times-vs-L",
            Mode::Wavepacket => "wavepacket",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    mode: Mode,
    #[serde(default)]
    plot: Vec<String>,
    #[serde(default)]
    units: RawUnits,
    system: RawSystem,
    sweep: Option<RawSweep>,
    packet: Option<RawPacket>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUnits {
    #[serde(default = "natural")]
    preset: String,
    mass_fraction: Option<f64>,
    calibrate: Option<Calibration>,
}

fn natural() -> String {
    "natural".into()
}

impl Default for RawUnits {
    fn default() -> Self {
        RawUnits {
            preset: natural(),
            mass_fraction: None,
            calibrate: None,
        }
    }
}

/// Mass chosen so that a free particle of `energy` crosses `length` in
/// `time`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Calibration {
    pub energy: f64,
    pub length: f64,
    pub time: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    #[serde(rename = "V0")]
    v0: Option<f64>,
    d: Option<f64>,
    #[serde(rename = "L")]
    gap: Option<f64>,
    two_kappa0_d: Option<f64>,
    gap_over_d: Option<f64>,
    a1: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    from: f64,
    to: f64,
    points: usize,
    k_over_kappa0: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPacket {
    l0: f64,
    energy: Option<f64>,
    kbar: Option<f64>,
    t_end: Option<f64>,
    #[serde(default = "default_samples")]
    samples: usize,
}

fn default_samples() -> usize {
    RunConfig::default().samples
}

/// Sweep of k/κ0 (times-vs-k) or of L/d at fixed k/κ0 (times-vs-L).
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub from: f64,
    pub to: f64,
    pub points: usize,
    /// Fixed k/κ0 of a times-vs-L sweep.
    pub k_over_kappa0: Option<f64>,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        crate::numerics::linspace(self.from, self.to, self.points)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PacketSettings {
    pub spec: PacketSpec,
    pub run: RunConfig,
}

/// A scenario with every quantity in internal units.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub mode: Mode,
    pub plot: Vec<String>,
    pub units: UnitSystem,
    pub sys: BarrierSystem,
    pub sweep: Option<Sweep>,
    pub packet: Option<PacketSettings>,
    /// How the input was turned into internal parameters, for the metadata.
    pub resolution: Vec<(String, String)>,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| {
            let field = e.span().map_or_else(String::new, |s| format!("bytes {}..{}", s.start, s.end));
            Error::config(field, e.message().to_string())
        })?;
        raw.resolve()
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn builtin(name: &str) -> Option<Self> {
        BUILTINS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, text)| Self::from_toml(text).expect("builtin scenarios are valid"))
    }

    /// A builtin name or the path of a scenario file.
    pub fn load(name_or_path: &str) -> Result<Self> {
        match Self::builtin(name_or_path) {
            Some(s) => Ok(s),
            None => {
                let path = Path::new(name_or_path);
                if !path.exists() {
                    let names: Vec<&str> = BUILTINS.iter().map(|b| b.0).collect();
                    return Err(Error::config(
                        "scenario",
                        format!("{name_or_path} is neither a file nor a builtin ({})", names.join(", ")),
                    ));
                }
                Self::from_file(path)
            }
        }
    }

    pub fn kappa0(&self) -> f64 {
        self.sys.kappa0().re
    }
}

fn positive(field: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::config(field, format!("must be positive, got {v}")))
    }
}

impl RawScenario {
    fn resolve(self) -> Result<Scenario> {
        if self.name.trim().is_empty() {
            return Err(Error::config("name", "must not be empty"));
        }
        let mut resolution = Vec::new();
        let units = self.units.resolve(&mut resolution)?;
        let sys = self.system.resolve(&units, &mut resolution)?;
        let (sweep, packet) = match self.mode {
            Mode::TimesVsK | Mode::TimesVsL => {
                if self.packet.is_some() {
                    return Err(Error::config("packet", format!("not used in {} mode", self.mode.name())));
                }
                let raw = self
                    .sweep
                    .ok_or_else(|| Error::config("sweep", format!("required in {} mode", self.mode.name())))?;
                (Some(raw.resolve(self.mode)?), None)
            }
            Mode::Wavepacket => {
                if self.sweep.is_some() {
                    return Err(Error::config("sweep", "not used in wavepacket mode"));
                }
                let raw = self
                    .packet
                    .ok_or_else(|| Error::config("packet", "required in wavepacket mode"))?;
                (None, Some(raw.resolve(&sys, &mut resolution)?))
            }
        };
        for col in &self.plot {
            if !crate::runner::TIME_COLUMNS.contains(&col.as_str()) {
                return Err(Error::config("plot", format!("unknown column `{col}`")));
            }
        }
        Ok(Scenario {
            name: self.name,
            mode: self.mode,
            plot: self.plot,
            units,
            sys,
            sweep,
            packet,
            resolution,
        })
    }
}

impl RawUnits {
    fn resolve(&self, notes: &mut Vec<(String, String)>) -> Result<UnitSystem> {
        let units = match (&self.calibrate, self.mass_fraction) {
            (Some(_), Some(_)) => {
                return Err(Error::config("units", "give either mass_fraction or calibrate, not both"));
            }
            (Some(c), None) => {
                if self.preset != "effective-mass" {
                    return Err(Error::config("units.calibrate", "only valid with the effective-mass preset"));
                }
                positive("units.calibrate.energy", c.energy)?;
                positive("units.calibrate.length", c.length)?;
                positive("units.calibrate.time", c.time)?;
                let u = UnitSystem::calibrated_from_free_time(c.energy, c.length, c.time)?;
                notes.push((
                    "mass_calibration".into(),
                    format!("free crossing of {} nm at {} eV in {} ps", c.length, c.energy, c.time),
                ));
                u
            }
            (None, fraction) => UnitSystem::new(UnitPreset::from_name(&self.preset, fraction)?),
        };
        if let UnitPreset::EffectiveMass { fraction } = units.preset {
            notes.push(("mass_fraction".into(), format!("{fraction:.10e}")));
        }
        Ok(units)
    }
}

impl RawSystem {
    fn resolve(&self, units: &UnitSystem, notes: &mut Vec<(String, String)>) -> Result<BarrierSystem> {
        let natural = matches!(units.preset, UnitPreset::Natural);
        let v0 = match self.v0 {
            Some(v) => v,
            None if natural => {
                notes.push(("V0".into(), "0.5 (kappa0 = 1)".into()));
                0.5
            }
            None => return Err(Error::config("system.V0", "required outside natural units")),
        };
        let kappa0 = (2.0 * units.mass * v0).max(0.0).sqrt() / units.hbar;
        let d = match (self.d, self.two_kappa0_d) {
            (Some(_), Some(_)) => return Err(Error::config("system", "give either d or two_kappa0_d, not both")),
            (Some(d), None) => positive("system.d", d)?,
            (None, Some(o)) => {
                positive("system.two_kappa0_d", o)?;
                positive("system.V0", v0)?;
                let d = o / (2.0 * kappa0);
                notes.push(("d".into(), format!("{d:.15e} from 2 kappa0 d = {o}")));
                d
            }
            (None, None) => return Err(Error::config("system", "one of d or two_kappa0_d is required")),
        };
        let gap = match (self.gap, self.gap_over_d) {
            (Some(_), Some(_)) => return Err(Error::config("system", "give either L or gap_over_d, not both")),
            (Some(l), None) => l,
            (None, Some(r)) => r * d,
            (None, None) => 0.0,
        };
        BarrierSystem::with_units(v0, d, gap, self.a1, units).map_err(|e| match e {
            Error::InvalidParameter { field, reason } => Error::config(format!("system.{field}"), reason),
            other => other,
        })
    }
}

impl RawSweep {
    fn resolve(&self, mode: Mode) -> Result<Sweep> {
        if self.points < 2 {
            return Err(Error::config("sweep.points", "at least 2 points are needed"));
        }
        if !(self.to > self.from) {
            return Err(Error::config("sweep.to", "must exceed sweep.from"));
        }
        match mode {
            Mode::TimesVsK => {
                positive("sweep.from", self.from)?;
                if self.k_over_kappa0.is_some() {
                    return Err(Error::config("sweep.k_over_kappa0", "k is the sweep variable in times-vs-k mode"));
                }
            }
            _ => {
                if self.from < 0.0 {
                    return Err(Error::config("sweep.from", "gap widths must be non-negative"));
                }
                let k = self.k_over_kappa0.ok_or_else(|| Error::config("sweep.k_over_kappa0", "required in times-vs-L mode"))?;
                positive("sweep.k_over_kappa0", k)?;
            }
        }
        Ok(Sweep {
            from: self.from,
            to: self.to,
            points: self.points,
            k_over_kappa0: self.k_over_kappa0,
        })
    }
}

impl RawPacket {
    fn resolve(&self, sys: &BarrierSystem, notes: &mut Vec<(String, String)>) -> Result<PacketSettings> {
        let kbar = match (self.energy, self.kbar) {
            (Some(_), Some(_)) => return Err(Error::config("packet", "give either energy or kbar, not both")),
            (Some(e), None) => {
                let k = sys.wavenumber(positive("packet.energy", e)?);
                notes.push(("kbar".into(), format!("{k:.15e} from mean energy {e}")));
                k
            }
            (None, Some(k)) => positive("packet.kbar", k)?,
            (None, None) => return Err(Error::config("packet", "one of energy or kbar is required")),
        };
        let spec = PacketSpec::new(positive("packet.l0", self.l0)?, kbar)?;
        if let Some(t) = self.t_end {
            positive("packet.t_end", t)?;
        }
        if self.samples < 2 {
            return Err(Error::config("packet.samples", "at least 2 samples are needed"));
        }
        Ok(PacketSettings {
            spec,
            run: RunConfig {
                t_end: self.t_end,
                samples: self.samples,
            },
        })
    }
}
