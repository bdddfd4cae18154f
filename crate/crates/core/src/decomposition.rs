//! The total stationary state and its split into transmission and
//! reflection subprocess waves joined at the midpoint x_c.

use num_complex::Complex64;

use crate::model::BarrierSystem;
use crate::scattering::Scattering;
use crate::wave::{Basis, PiecewiseWave, Region};

fn cis(phase: f64) -> Complex64 {
    Complex64::from_polar(1.0, phase)
}

/// Ψ_tot with unit incident amplitude, five regions.
pub fn total_wave(sys: &BarrierSystem, sc: &Scattering) -> PiecewiseWave {
    let k = sc.k();
    let two = &sc.two;
    let i = Complex64::i();
    let w_free = -k * k;
    let w_bar = sc.kin.kappa_sq;
    let ea1 = cis(k * sys.a1());
    let a_out = two.a_out;
    let b_out = two.b_out;

    let gap = Region {
        start: sys.b1(),
        end: sys.a2(),
        w: w_free,
        basis: Basis::Trig {
            center: sys.midpoint(),
            sin: -a_out * two.p_amp.conj() * ea1,
            cos: a_out * two.q_amp.conj() * ea1,
        },
    };
    let first_barrier = if sc.kin.kappa_sq > 0.0 {
        // anchored on the gap side: for an opaque barrier the data at a1 loses
        // the small growing component to round-off
        let (value, slope) = gap.eval(k, sys.b1());
        Region {
            start: sys.a1(),
            end: sys.b1(),
            w: w_bar,
            basis: Basis::Hyperbolic {
                anchor: sys.b1(),
                value,
                slope,
            },
        }
    } else {
        Region {
            start: sys.a1(),
            end: sys.b1(),
            w: w_bar,
            basis: Basis::Hyperbolic {
                anchor: sys.a1(),
                value: (1.0 + b_out) * ea1,
                slope: i * k * (1.0 - b_out) * ea1,
            },
        }
    };

    let regions = vec![
        Region {
            start: f64::NEG_INFINITY,
            end: sys.a1(),
            w: w_free,
            basis: Basis::Plane {
                forward: Complex64::new(1.0, 0.0),
                backward: b_out * ea1 * ea1,
            },
        },
        first_barrier,
        gap,
        Region {
            start: sys.a2(),
            end: sys.b2(),
            w: w_bar,
            basis: Basis::Hyperbolic {
                anchor: sys.b2(),
                value: a_out * ea1,
                slope: i * k * a_out * ea1,
            },
        },
        Region {
            start: sys.b2(),
            end: f64::INFINITY,
            w: w_free,
            basis: Basis::Plane {
                forward: a_out * cis(-k * sys.width()),
                backward: Complex64::new(0.0, 0.0),
            },
        },
    ];
    PiecewiseWave::new(k, sys.hbar() / sys.mass(), drop_empty(regions))
}

/// A_ref^in = b_out(b_out* − a_out*) = √R_two·e^{iλ}.
pub fn reflected_incident_amplitude(sc: &Scattering) -> Complex64 {
    let two = &sc.two;
    two.b_out * (two.b_out.conj() - two.a_out.conj())
}

/// Sin coefficient of ψ_ref in [b1, x_c]: −2P·b_out·a_out*·e^{ika1}.
pub fn reflected_gap_amplitude(sys: &BarrierSystem, sc: &Scattering) -> Complex64 {
    let two = &sc.two;
    -2.0 * two.p_amp * two.b_out * two.a_out.conj() * cis(sc.k() * sys.a1())
}

/// ψ_ref: nonzero only left of x_c, where it vanishes.
pub fn reflected_wave(sys: &BarrierSystem, sc: &Scattering) -> PiecewiseWave {
    let k = sc.k();
    let w_free = -k * k;
    let a_gap = reflected_gap_amplitude(sys, sc);
    let (sn, cs) = (0.5 * k * sys.gap()).sin_cos();
    let ea1 = cis(k * sys.a1());

    let regions = vec![
        Region {
            start: f64::NEG_INFINITY,
            end: sys.a1(),
            w: w_free,
            basis: Basis::Plane {
                forward: reflected_incident_amplitude(sc),
                backward: sc.two.b_out * ea1 * ea1,
            },
        },
        Region {
            start: sys.a1(),
            end: sys.b1(),
            w: sc.kin.kappa_sq,
            basis: Basis::Hyperbolic {
                anchor: sys.b1(),
                value: -a_gap * sn,
                slope: k * a_gap * cs,
            },
        },
        Region {
            start: sys.b1(),
            end: sys.midpoint(),
            w: w_free,
            basis: Basis::Trig {
                center: sys.midpoint(),
                sin: a_gap,
                cos: Complex64::new(0.0, 0.0),
            },
        },
        Region {
            start: sys.midpoint(),
            end: f64::INFINITY,
            w: w_free,
            basis: Basis::Zero,
        },
    ];
    PiecewiseWave::new(k, sys.hbar() / sys.mass(), drop_empty(regions))
}

/// Removes zero-length regions (the gap when L = 0).
fn drop_empty(regions: Vec<Region>) -> Vec<Region> {
    regions.into_iter().filter(|r| r.end > r.start).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubprocessPair {
    pub total: PiecewiseWave,
    pub transmitted: PiecewiseWave,
    pub reflected: PiecewiseWave,
    pub a_tr_in: Complex64,
    pub a_ref_in: Complex64,
    pub x_join: f64,
    pub near_resonance: bool,
}

pub fn decompose(sys: &BarrierSystem, sc: &Scattering) -> SubprocessPair {
    let total = total_wave(sys, sc);
    let reflected = reflected_wave(sys, sc);
    let transmitted = total.sub(&reflected);
    let a_ref_in = reflected_incident_amplitude(sc);
    SubprocessPair {
        total,
        transmitted,
        reflected,
        a_tr_in: 1.0 - a_ref_in,
        a_ref_in,
        x_join: sys.midpoint(),
        near_resonance: sc.two.near_resonance,
    }
}

/// Largest |ψ_ref(x_c)| over a k sample: the joining point is a
/// k-independent node of the reflected wave.
pub fn join_point_residual(sys: &BarrierSystem, ks: &[f64]) -> crate::Result<f64> {
    let mut worst: f64 = 0.0;
    for &k in ks {
        let sc = Scattering::new(sys, k)?;
        let psi = reflected_wave(sys, &sc);
        let v = psi.eval_side(sys.midpoint(), crate::wave::Side::Left).0;
        worst = worst.max(v.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wave::Side;
    use std::f64::consts::PI;

    fn generic() -> BarrierSystem {
        BarrierSystem::from_opacity(3.0 * PI, 2.0, 5.0).unwrap()
    }

    #[test]
    fn total_wave_is_smooth() {
        let s = generic();
        for &k in &[0.2, 0.6, 0.99, 1.0, 1.01, 1.7, 2.9] {
            let sc = Scattering::new(&s, k).unwrap();
            let psi = total_wave(&s, &sc);
            let scale = 1.0 + psi.regions.iter().map(|r| r.eval(k, r.start.max(-1e3)).0.norm()).fold(0.0, f64::max);
            assert!(psi.max_value_jump() < 1e-10 * scale, "k={k}: {}", psi.max_value_jump());
            assert!(psi.max_slope_jump() < 1e-10 * scale * k.max(1.0), "k={k}: {}", psi.max_slope_jump());
        }
    }

    #[test]
    fn reflected_wave_is_continuous_and_vanishes_at_midpoint() {
        let s = generic();
        for &k in &[0.3, 0.6, 1.2, 2.5] {
            let sc = Scattering::new(&s, k).unwrap();
            let psi = reflected_wave(&s, &sc);
            assert!(psi.max_value_jump() < 1e-10);
            let (v, _) = psi.eval_side(s.midpoint(), Side::Left);
            assert!(v.norm() < 1e-12);
            let a = reflected_incident_amplitude(&sc);
            let expect = Complex64::from_polar(sc.two.r_two.sqrt(), sc.two.lambda);
            assert!((a - expect).norm() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn zero_gap_drops_the_gap_region() {
        let s = BarrierSystem::from_opacity(3.0 * PI, 0.0, 5.0).unwrap();
        let sc = Scattering::new(&s, 0.7).unwrap();
        let pair = decompose(&s, &sc);
        assert_eq!(pair.total.regions.len(), 4);
        assert!(pair.total.max_value_jump() < 1e-10);
        assert!(pair.reflected.eval_side(s.midpoint(), Side::Left).0.norm() < 1e-12);
    }
}
