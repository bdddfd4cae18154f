//! Stationary time scales: subprocess dwell times with per-region parts,
//! the Büttiker dwell time, phase and asymptotic group times.
//!
//! Barrier integrals reduce to two combinations of the even functions at 2d,
//!
//! * B₊ = 2d + S(2d) + k²G(2d)
//! * B₋ = 2d + S(2d) − k²G(2d)
//!
//! which stay regular through E = V0.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hyperbolic::even_functions;
use crate::model::BarrierSystem;
use crate::scattering::Scattering;

/// Contributions of the left barrier, the gap and the right barrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DwellParts {
    pub first: f64,
    pub gap: f64,
    pub second: f64,
}

impl DwellParts {
    pub fn total(&self) -> f64 {
        self.first + self.gap + self.second
    }
}

struct BarrierIntegrals {
    plus: f64,
    minus: f64,
    /// (sinh κd / κ)²
    s_sq: f64,
}

fn barrier_integrals(sys: &BarrierSystem, sc: &Scattering) -> BarrierIntegrals {
    let k = sc.k();
    let d = sys.d();
    let e2 = even_functions(sc.kin.kappa_sq, 2.0 * d);
    let base = 2.0 * d + e2.s;
    BarrierIntegrals {
        plus: base + k * k * e2.g,
        minus: base - k * k * e2.g,
        s_sq: sc.one.sinhc * sc.one.sinhc,
    }
}

/// |P|² = [1 + R − 2η√R sin(J + kL)]/T.
pub fn p_norm_sqr(sys: &BarrierSystem, sc: &Scattering) -> f64 {
    let one = &sc.one;
    let eta_sqrt_r = one.s * one.t.sqrt();
    (1.0 + one.r - 2.0 * eta_sqrt_r * (one.j + sc.k() * sys.gap()).sin()) / one.t
}

/// Transmission and reflection dwell times.
pub fn dwell_times(sys: &BarrierSystem, sc: &Scattering) -> (DwellParts, DwellParts) {
    let k = sc.k();
    let l = sys.gap();
    let mh = sys.mass() / sys.hbar();
    let one = &sc.one;
    let two = &sc.two;
    let b = barrier_integrals(sys, sc);
    let eta_sqrt_r = one.s * one.t.sqrt();

    let tr_barrier = mh / (4.0 * k) * b.plus;
    let tr_gap = mh / (k * k * one.t)
        * (k * l * (1.0 + one.r) + 4.0 * eta_sqrt_r * (0.5 * k * l).sin() * (one.j + 0.5 * k * l).sin());

    let p2 = p_norm_sqr(sys, sc);
    let (sn, cs) = (k * l).sin_cos();
    let ref_barrier = mh * two.t_two * p2 / (2.0 * k) * (b.plus - cs * b.minus + 4.0 * k * sn * b.s_sq);
    let ref_gap = mh * two.t_two / (k * k) * (k * l - sn) * p2;

    (
        DwellParts {
            first: tr_barrier,
            gap: tr_gap,
            second: tr_barrier,
        },
        DwellParts {
            first: ref_barrier,
            gap: ref_gap,
            second: 0.0,
        },
    )
}

const CANCELLATION_LIMIT: f64 = 1e4;

/// Büttiker dwell time of the full state.
pub fn buttiker_dwell(sys: &BarrierSystem, sc: &Scattering) -> DwellParts {
    let k = sc.k();
    let l = sys.gap();
    let mh = sys.mass() / sys.hbar();
    let one = &sc.one;
    let two = &sc.two;
    let b = barrier_integrals(sys, sc);
    let sqrt_r2 = two.r_two.sqrt();
    let (sn, cs) = (two.j_two - two.f_two).sin_cos();
    let eta_sqrt_r = one.s * one.t.sqrt();

    let terms = [
        (1.0 + two.r_two) * b.plus,
        2.0 * sqrt_r2 * sn * b.minus,
        -8.0 * k * sqrt_r2 * cs * b.s_sq,
    ];
    let sum: f64 = terms.iter().sum();
    let scale: f64 = terms.iter().map(|t| t.abs()).sum();
    let first = if scale > CANCELLATION_LIMIT * sum.abs() {
        // opaque barrier: the three terms nearly cancel, integrate |Ψ|² directly
        mh / k * crate::decomposition::total_wave(sys, sc).density_integral(sys.a1(), sys.b1())
    } else {
        mh / (4.0 * k) * sum
    };
    let gap = mh * two.t_two / (k * k * one.t)
        * (k * l * (1.0 + one.r) + 2.0 * eta_sqrt_r * (one.j + k * l).sin() * (k * l).sin());
    let second = mh / (4.0 * k) * b.plus * two.t_two;
    DwellParts { first, gap, second }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupTimes {
    pub tau_ph: f64,
    pub tau_as: f64,
    pub tau_dep: f64,
    pub x_start: f64,
}

pub fn group_times(sys: &BarrierSystem, sc: &Scattering) -> GroupTimes {
    let mhk = sys.mass() / (sys.hbar() * sc.k());
    let tau_ph = mhk * sc.two.j_two_prime;
    let tau_dep = mhk * sc.two.lambda_prime;
    GroupTimes {
        tau_ph,
        tau_as: tau_ph - tau_dep,
        tau_dep,
        x_start: -sc.two.lambda_prime,
    }
}

/// Closed forms for one barrier of width D (the L = 0 pair):
/// (τ_as, x_start).
pub fn single_barrier_times(sys: &BarrierSystem, k: f64) -> Result<(f64, f64)> {
    let kin = sys.kinematics(k)?;
    let width = sys.width();
    let w = kin.kappa_sq;
    let k0sq = kin.kappa0_sq;
    let full = even_functions(w, width);
    let half = even_functions(w, 0.5 * width);
    let denom = 4.0 * k * k + k0sq * k0sq * full.s * full.s;
    let tau_as = 4.0 * sys.mass() / (sys.hbar() * k)
        * (k * k + k0sq * w * half.s * half.s)
        * (full.s + k * k * full.g)
        / denom;
    let x_start = -2.0 * k0sq * (full.s + k * k * full.h) / denom;
    Ok((tau_as, x_start))
}

/// All time scales at one k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeScales {
    pub k: f64,
    pub t_two: f64,
    pub r_two: f64,
    pub tau_tr: DwellParts,
    pub tau_ref: DwellParts,
    pub tau_tot: DwellParts,
    pub tau_ph: f64,
    pub tau_as: f64,
    pub tau_dep: f64,
    pub x_start: f64,
    pub tau_free: f64,
    pub tau_0: f64,
    pub near_resonance: bool,
}

impl TimeScales {
    pub fn new(sys: &BarrierSystem, k: f64) -> Result<Self> {
        let sc = Scattering::new(sys, k)?;
        Ok(Self::from_scattering(sys, &sc))
    }

    pub fn from_scattering(sys: &BarrierSystem, sc: &Scattering) -> Self {
        let (tau_tr, tau_ref) = dwell_times(sys, sc);
        let tau_tot = buttiker_dwell(sys, sc);
        let g = group_times(sys, sc);
        TimeScales {
            k: sc.k(),
            t_two: sc.two.t_two,
            r_two: sc.two.r_two,
            tau_tr,
            tau_ref,
            tau_tot,
            tau_ph: g.tau_ph,
            tau_as: g.tau_as,
            tau_dep: g.tau_dep,
            x_start: g.x_start,
            tau_free: sys.free_time(sc.k()),
            tau_0: sys.tau0(),
            near_resonance: sc.two.near_resonance,
        }
    }

    pub fn tau_tr_dwell(&self) -> f64 {
        self.tau_tr.total()
    }

    pub fn tau_ref_dwell(&self) -> f64 {
        self.tau_ref.total()
    }

    pub fn tau_dwell(&self) -> f64 {
        self.tau_tot.total()
    }

    /// Transmission dwell time on [a1, x_c]; equals the one on [x_c, b2].
    pub fn tau_tr_left(&self) -> f64 {
        self.tau_tr.first + 0.5 * self.tau_tr.gap
    }

    pub fn tau_tr_right(&self) -> f64 {
        self.tau_tr.second + 0.5 * self.tau_tr.gap
    }
}

/// One row per k, computed in parallel, returned in input order.
pub fn times_profile(sys: &BarrierSystem, ks: &[f64]) -> Result<Vec<TimeScales>> {
    if ks.windows(2).any(|w| w[1] <= w[0]) || ks.first().map_or(false, |&k| k <= 0.0) {
        return Err(Error::param("k_grid", "must be positive and strictly increasing"));
    }
    ks.par_iter().map(|&k| TimeScales::new(sys, k)).collect()
}

/// One row per gap width at fixed k.
pub fn times_vs_gap(sys: &BarrierSystem, k: f64, gaps: &[f64]) -> Result<Vec<TimeScales>> {
    gaps.par_iter()
        .map(|&l| TimeScales::new(&sys.with_gap(l)?, k))
        .collect()
}
