//! Geometry, constants and the complex-κ kinematics shared by every module.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::UnitSystem;

/// Relative width of the band |E − V0| < ε·|V0| in which κ counts as zero.
pub const NEAR_THRESHOLD_REL: f64 = 1e-10;

/// Two identical rectangular barriers of height `v0` and width `d`
/// separated by a gap `gap`, the left one starting at `a1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSystem {
    v0: f64,
    d: f64,
    gap: f64,
    a1: f64,
    mass: f64,
    hbar: f64,
}

impl BarrierSystem {
    pub fn new(v0: f64, d: f64, gap: f64, a1: f64, mass: f64, hbar: f64) -> Result<Self> {
        if !v0.is_finite() {
            return Err(Error::param("V0", "must be finite"));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::param("d", format!("barrier width must be positive, got {d}")));
        }
        if !(gap >= 0.0 && gap.is_finite()) {
            return Err(Error::param("L", format!("gap must be non-negative, got {gap}")));
        }
        if !(a1 > 0.0 && a1.is_finite()) {
            return Err(Error::param("a1", format!("left edge must be positive, got {a1}")));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::param("m", format!("mass must be positive, got {mass}")));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::param("hbar", format!("must be positive, got {hbar}")));
        }
        Ok(BarrierSystem {
            v0,
            d,
            gap,
            a1,
            mass,
            hbar,
        })
    }

    /// Natural units (m = ħ = 1).
    pub fn natural(v0: f64, d: f64, gap: f64, a1: f64) -> Result<Self> {
        Self::new(v0, d, gap, a1, 1.0, 1.0)
    }

    pub fn with_units(v0: f64, d: f64, gap: f64, a1: f64, units: &UnitSystem) -> Result<Self> {
        Self::new(v0, d, gap, a1, units.mass, units.hbar)
    }

    /// Natural-unit system parameterized by 2κ0d, with κ0 = 1.
    pub fn from_opacity(two_kappa0_d: f64, gap_over_d: f64, a1: f64) -> Result<Self> {
        if !(two_kappa0_d > 0.0) {
            return Err(Error::param("2kappa0_d", "must be positive"));
        }
        let d = two_kappa0_d / 2.0;
        Self::natural(0.5, d, gap_over_d * d, a1)
    }

    pub fn with_gap(&self, gap: f64) -> Result<Self> {
        Self::new(self.v0, self.d, gap, self.a1, self.mass, self.hbar)
    }

    pub fn with_width(&self, d: f64) -> Result<Self> {
        Self::new(self.v0, d, self.gap, self.a1, self.mass, self.hbar)
    }

    pub fn with_height(&self, v0: f64) -> Result<Self> {
        Self::new(v0, self.d, self.gap, self.a1, self.mass, self.hbar)
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    /// Inter-barrier distance L.
    pub fn gap(&self) -> f64 {
        self.gap
    }
    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn a1(&self) -> f64 {
        self.a1
    }
    pub fn b1(&self) -> f64 {
        self.a1 + self.d
    }
    pub fn a2(&self) -> f64 {
        self.b1() + self.gap
    }
    pub fn b2(&self) -> f64 {
        self.a2() + self.d
    }
    /// Total width D = 2d + L.
    pub fn width(&self) -> f64 {
        2.0 * self.d + self.gap
    }
    /// Midpoint x_c, the joining point of the subprocess waves.
    pub fn midpoint(&self) -> f64 {
        self.a1 + self.d + 0.5 * self.gap
    }

    /// Potential at x (barriers are closed intervals).
    pub fn potential(&self, x: f64) -> f64 {
        if (x >= self.a1 && x <= self.b1()) || (x >= self.a2() && x <= self.b2()) {
            self.v0
        } else {
            0.0
        }
    }

    /// κ0² = 2mV0/ħ² (negative for a well).
    pub fn kappa0_sq(&self) -> f64 {
        2.0 * self.mass * self.v0 / (self.hbar * self.hbar)
    }

    pub fn kappa0(&self) -> Complex64 {
        Complex64::new(self.kappa0_sq(), 0.0).sqrt()
    }

    pub fn energy(&self, k: f64) -> f64 {
        let p = self.hbar * k;
        p * p / (2.0 * self.mass)
    }

    pub fn wavenumber(&self, energy: f64) -> f64 {
        (2.0 * self.mass * energy).sqrt() / self.hbar
    }

    /// Group velocity ħk/m of a free particle.
    pub fn velocity(&self, k: f64) -> f64 {
        self.hbar * k / self.mass
    }

    /// Free-passage time mD/(ħk).
    pub fn free_time(&self, k: f64) -> f64 {
        self.width() / self.velocity(k)
    }

    /// τ0 = 2md/(ħκ0), the time unit of the stationary plots. NaN when V0 ≤ 0.
    pub fn tau0(&self) -> f64 {
        2.0 * self.mass * self.d / (self.hbar * self.kappa0_sq().sqrt())
    }

    pub fn kinematics(&self, k: f64) -> Result<Kinematics> {
        Kinematics::new(self, k)
    }
}

/// Wavenumber-dependent quantities at one k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub k: f64,
    pub energy: f64,
    /// κ² = 2m(V0 − E)/ħ²; the closed forms work with this real number.
    pub kappa_sq: f64,
    pub kappa0_sq: f64,
    /// Principal square root of κ²: real below the barrier top, +i|κ| above.
    pub kappa: Complex64,
    pub kappa0: Complex64,
    /// θ₊ = (k/κ + κ/k)/2; infinite at κ = 0.
    pub theta_plus: Complex64,
    /// θ₋ = (k/κ − κ/k)/2; infinite at κ = 0.
    pub theta_minus: Complex64,
    /// |E − V0| below the threshold band: series limits are in effect.
    pub near_threshold: bool,
}

impl Kinematics {
    pub fn new(sys: &BarrierSystem, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::param("k", format!("wavenumber must be positive, got {k}")));
        }
        let kappa0_sq = sys.kappa0_sq();
        let kappa_sq = kappa0_sq - k * k;
        let energy = sys.energy(k);
        let kappa = Complex64::new(kappa_sq, 0.0).sqrt();
        let kappa0 = Complex64::new(kappa0_sq, 0.0).sqrt();
        let near_threshold = (energy - sys.v0()).abs() < NEAR_THRESHOLD_REL * sys.v0().abs();
        let (theta_plus, theta_minus) = if kappa_sq == 0.0 {
            let inf = Complex64::new(f64::INFINITY, 0.0);
            (inf, inf)
        } else {
            let ratio = k / kappa;
            let inv = kappa / k;
            ((ratio + inv) * 0.5, (ratio - inv) * 0.5)
        };
        Ok(Kinematics {
            k,
            energy,
            kappa_sq,
            kappa0_sq,
            kappa,
            kappa0,
            theta_plus,
            theta_minus,
            near_threshold,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{UnitPreset, UnitSystem, HBAR2_OVER_2ME_EV_NM2};

    #[test]
    fn derived_geometry() {
        let s = BarrierSystem::natural(1.0, 1.0, 2.0, 5.0).unwrap();
        assert_eq!(s.b1(), 6.0);
        assert_eq!(s.a2(), 8.0);
        assert_eq!(s.b2(), 9.0);
        assert_eq!(s.width(), 4.0);
        assert_eq!(s.midpoint(), 7.0);
        assert_eq!(s.midpoint() - s.b1(), s.gap() / 2.0);
    }

    #[test]
    fn zero_gap_midpoint_is_junction() {
        let s = BarrierSystem::natural(1.0, 1.0, 0.0, 5.0).unwrap();
        assert_eq!(s.midpoint(), 6.0);
        assert_eq!(s.b1(), s.a2());
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(BarrierSystem::natural(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(BarrierSystem::natural(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(BarrierSystem::natural(1.0, 1.0, -0.1, 1.0).is_err());
        assert!(BarrierSystem::natural(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(BarrierSystem::new(1.0, 1.0, 1.0, 1.0, 0.0, 1.0).is_err());
        assert!(BarrierSystem::new(1.0, 1.0, 1.0, 1.0, 1.0, -1.0).is_err());
        assert!(BarrierSystem::natural(-1.0, 1.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn electron_kappa0_matches_direct_formula() {
        let u = UnitSystem::new(UnitPreset::Electron);
        let s = BarrierSystem::with_units(0.2, 1.0, 0.0, 1.0, &u).unwrap();
        let oracle = (2.0 * u.mass * 0.2).sqrt() / u.hbar;
        assert!((s.kappa0().re / oracle - 1.0).abs() < 1e-12);
        let from_constant = (0.2 / HBAR2_OVER_2ME_EV_NM2).sqrt();
        assert!((s.kappa0().re / from_constant - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kinematics_examples() {
        let s = BarrierSystem::natural(0.5, 1.0, 0.0, 1.0).unwrap();
        let k0 = s.kappa0().re;
        assert!((k0 - 1.0).abs() < 1e-15);

        let kin = s.kinematics(k0 / 2f64.sqrt()).unwrap();
        assert!((kin.energy - 0.25).abs() < 1e-15);
        assert!((kin.kappa.re - kin.k).abs() < 1e-15);
        assert!(kin.theta_minus.norm() < 1e-15);

        let kin = s.kinematics(k0).unwrap();
        assert_eq!(kin.kappa_sq, 0.0);
        assert!(kin.near_threshold);

        let kin = s.kinematics(1.5 * k0).unwrap();
        assert_eq!(kin.kappa.re, 0.0);
        assert!((kin.kappa.im - k0 * 1.25f64.sqrt()).abs() < 1e-14);

        assert!(s.kinematics(0.0).is_err());
        assert!(s.kinematics(-1.0).is_err());
    }

    #[test]
    fn kinematic_identities() {
        let s = BarrierSystem::natural(0.5, 1.0, 0.0, 1.0).unwrap();
        for i in 1..300 {
            let k = 3.0 * i as f64 / 300.0;
            let kin = s.kinematics(k).unwrap();
            let lhs = kin.kappa * kin.kappa + k * k;
            assert!((lhs - kin.kappa0 * kin.kappa0).norm() <= 1e-14 * kin.kappa0_sq.abs().max(k * k));
            if kin.kappa_sq.abs() > 1e-3 {
                let id = kin.theta_plus * kin.theta_plus - kin.theta_minus * kin.theta_minus;
                assert!((id - 1.0).norm() < 1e-12, "k={k}: {id}");
            }
        }
    }
}
