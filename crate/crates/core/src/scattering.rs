//! Single-barrier parameters, transfer matrices and the two-barrier
//! composition with analytic k-derivatives.
//!
//! Everything is expressed through the real even functions of w = κ² from
//! [`crate::hyperbolic`], so one code path serves E < V0, E = V0 and E > V0.
//! The two key single-barrier numbers are
//!
//! * s = θ₊ sinh κd = κ0² S(d) / 2k
//! * y = θ₋ sinh κd = (k − κ0²/2k) S(d)
//!
//! with T = 1/(1 + s²), η = sign s and J = arg(cosh κd + i y).

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::Result;
use crate::hyperbolic::even_functions;
use crate::model::{BarrierSystem, Kinematics};

/// R_two at or below this counts as resonant.
pub const RESONANCE_GUARD: f64 = 1e-12;

/// Maps an `atan2` angle into (−π/2, 3π/2], the range of arctan(·) + {0, π}.
fn lift_angle(angle: f64) -> f64 {
    if angle < -FRAC_PI_2 {
        angle + 2.0 * PI
    } else {
        angle
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneBarrierParams {
    pub t: f64,
    pub r: f64,
    pub j: f64,
    /// 0 or π.
    pub f: f64,
    /// +1 or −1.
    pub eta: f64,
    pub t_prime: f64,
    pub j_prime: f64,
    /// θ₊ sinh κd.
    pub s: f64,
    /// d s / dk.
    pub s_prime: f64,
    /// θ₋ sinh κd.
    pub y: f64,
    /// cosh κd.
    pub cosh: f64,
    /// sinh(κd)/κ.
    pub sinhc: f64,
}

impl OneBarrierParams {
    pub fn new(sys: &BarrierSystem, kin: &Kinematics) -> Self {
        Self::for_width(sys.d(), kin)
    }

    /// Parameters of one barrier of width `d` at the given kinematics.
    pub fn for_width(d: f64, kin: &Kinematics) -> Self {
        let k = kin.k;
        let k0sq = kin.kappa0_sq;
        let e = even_functions(kin.kappa_sq, d);
        let s = k0sq * e.s / (2.0 * k);
        let s_prime = 0.5 * k0sq * (-e.h - e.s / (k * k));
        let beta = k - k0sq / (2.0 * k);
        let y = beta * e.s;
        let y_prime = (1.0 + k0sq / (2.0 * k * k)) * e.s - beta * k * e.h;
        let c_prime = -k * d * e.s;

        let t = 1.0 / (1.0 + s * s);
        let r = s * s * t;
        let (eta, f) = if s >= 0.0 { (1.0, 0.0) } else { (-1.0, PI) };
        OneBarrierParams {
            t,
            r,
            j: lift_angle(y.atan2(e.c)),
            f,
            eta,
            t_prime: -2.0 * s * s_prime * t * t,
            j_prime: t * (e.c * y_prime - y * c_prime),
            s,
            s_prime,
            y,
            cosh: e.c,
            sinhc: e.s,
        }
    }

    /// q = e^{−iJ}/√T.
    pub fn q(&self) -> Complex64 {
        Complex64::from_polar(1.0 / self.t.sqrt(), -self.j)
    }

    /// p = η√(R/T), which is just s.
    pub fn p(&self) -> f64 {
        self.s
    }
}

/// The matrix [[q, p], [p*, q*]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub q: Complex64,
    pub p: Complex64,
}

impl TransferMatrix {
    /// Matrix of barrier `n` (1 or 2) placed at its position in `sys`.
    pub fn single(sys: &BarrierSystem, k: f64, one: &OneBarrierParams, n: u8) -> Self {
        let (a, b) = match n {
            1 => (sys.a1(), sys.b1()),
            2 => (sys.a2(), sys.b2()),
            _ => panic!("barrier index must be 1 or 2, got {n}"),
        };
        TransferMatrix {
            q: one.q() * Complex64::from_polar(1.0, k * (b - a)),
            p: Complex64::i() * one.p() * Complex64::from_polar(1.0, -k * (b + a)),
        }
    }

    pub fn det(&self) -> f64 {
        self.q.norm_sqr() - self.p.norm_sqr()
    }
}

impl Mul for TransferMatrix {
    type Output = TransferMatrix;

    fn mul(self, rhs: TransferMatrix) -> TransferMatrix {
        TransferMatrix {
            q: self.q * rhs.q + self.p * rhs.p.conj(),
            p: self.q * rhs.p + self.p * rhs.q.conj(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBarrierParams {
    pub t_two: f64,
    pub r_two: f64,
    pub j_two: f64,
    /// 0 or π.
    pub f_two: f64,
    pub eta_two: f64,
    /// χ = J + kL.
    pub chi: f64,
    pub q_amp: Complex64,
    pub p_amp: Complex64,
    pub a_out: Complex64,
    pub b_out: Complex64,
    pub lambda: f64,
    pub j_two_prime: f64,
    pub lambda_prime: f64,
    /// R_two within the resonance guard band.
    pub near_resonance: bool,
}

impl TwoBarrierParams {
    pub fn new(sys: &BarrierSystem, kin: &Kinematics, one: &OneBarrierParams) -> Self {
        let k = kin.k;
        let l = sys.gap();
        let OneBarrierParams {
            t,
            r,
            j,
            f,
            t_prime,
            j_prime,
            s,
            s_prime,
            ..
        } = *one;

        let chi = j + k * l;
        let (sin_chi, cos_chi) = chi.sin_cos();
        let f0 = if cos_chi >= 0.0 { 0.0 } else { PI };
        let x = 4.0 * s * s * (1.0 + s * s) * cos_chi * cos_chi;
        let t_two = 1.0 / (1.0 + x);
        let r_two = x * t_two;

        let j_two = j + lift_angle((t * sin_chi).atan2((1.0 + r) * cos_chi));
        let f_two = (f + f0) % (2.0 * PI);
        let eta_two = if f_two == 0.0 { 1.0 } else { -1.0 };

        let a_out = Complex64::from_polar(t_two.sqrt(), j_two);
        let b_out = Complex64::from_polar(r_two.sqrt(), j_two - f_two - FRAC_PI_2);

        let half = Complex64::from_polar(1.0, 0.5 * k * l);
        let qc = one.q().conj();
        let i = Complex64::i();
        let q_amp = qc * half + i * s * half.conj();
        let p_amp = i * qc * half + s * half.conj();

        let lambda = eta_two * t_two.sqrt().atan2(r_two.sqrt());
        let j_two_prime = j_prime
            + (t_two / (t * t)) * (t * (1.0 + r) * (j_prime + l) + t_prime * (2.0 * chi).sin());
        let lambda_prime =
            2.0 * t_two / t.sqrt() * (s * (j_prime + l) * sin_chi - s_prime * (1.0 + r) * cos_chi);

        TwoBarrierParams {
            t_two,
            r_two,
            j_two,
            f_two,
            eta_two,
            chi,
            q_amp,
            p_amp,
            a_out,
            b_out,
            lambda,
            j_two_prime,
            lambda_prime,
            near_resonance: r_two <= RESONANCE_GUARD,
        }
    }

    /// [[q_two, p_two], [p_two*, q_two*]] from the composed parameters.
    pub fn transfer_matrix(&self, sys: &BarrierSystem, k: f64) -> TransferMatrix {
        let inv = 1.0 / self.t_two.sqrt();
        TransferMatrix {
            q: Complex64::from_polar(inv, k * sys.width() - self.j_two),
            p: Complex64::from_polar(
                (self.r_two / self.t_two).sqrt(),
                self.f_two - k * (sys.b2() + sys.a1()) + FRAC_PI_2,
            ),
        }
    }

    /// a_out = (Q/Q* − P/P*)/2.
    pub fn a_out_from_qp(&self) -> Complex64 {
        0.5 * (self.q_amp / self.q_amp.conj() - self.p_amp / self.p_amp.conj())
    }

    /// b_out = −(Q/Q* + P/P*)/2.
    pub fn b_out_from_qp(&self) -> Complex64 {
        -0.5 * (self.q_amp / self.q_amp.conj() + self.p_amp / self.p_amp.conj())
    }
}

/// Kinematics plus single- and two-barrier parameters at one k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scattering {
    pub kin: Kinematics,
    pub one: OneBarrierParams,
    pub two: TwoBarrierParams,
}

impl Scattering {
    pub fn new(sys: &BarrierSystem, k: f64) -> Result<Self> {
        let kin = sys.kinematics(k)?;
        let one = OneBarrierParams::new(sys, &kin);
        let two = TwoBarrierParams::new(sys, &kin, &one);
        Ok(Scattering { kin, one, two })
    }

    pub fn k(&self) -> f64 {
        self.kin.k
    }
}

/// cos χ normalized by the single-barrier amplitude, smooth in k:
/// (cosh κd · cos kL − y · sin kL)·√T.
fn cos_chi(sys: &BarrierSystem, k: f64) -> Result<(f64, f64)> {
    let kin = sys.kinematics(k)?;
    let one = OneBarrierParams::new(sys, &kin);
    let (sn, cs) = (k * sys.gap()).sin_cos();
    let value = (one.cosh * cs - one.y * sn) * one.t.sqrt();
    Ok((value, one.j_prime + sys.gap()))
}

/// Why T_two reaches 1 at a resonance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResonanceKind {
    /// cos χ = 0: the two barriers interfere constructively.
    Interference,
    /// θ₊ sinh κd = 0 (|κ|d = nπ above the top): each barrier alone is
    /// transparent.
    Transparent,
}

/// A point with T_two = 1, numbered from the low-energy end starting at 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    pub k: f64,
    pub index: usize,
    pub kind: ResonanceKind,
}

impl Resonance {
    pub fn is_even(&self) -> bool {
        self.index % 2 == 0
    }
}

/// Every point of full transmission in [k_lo, k_hi], sorted ascending:
/// the roots of cos(J(k) + kL) plus the transparency points of a single
/// barrier, k² = κ0² + (nπ/d)².
///
/// The scan always starts near k = 0 so the numbering does not depend on
/// `k_lo`. Steps are kept below 0.25/|χ′| so no pair of roots is skipped.
pub fn find_resonances(sys: &BarrierSystem, k_lo: f64, k_hi: f64) -> Result<Vec<Resonance>> {
    let mut all = interference_roots(sys, k_hi)?
        .into_iter()
        .map(|k| (k, ResonanceKind::Interference))
        .collect::<Vec<_>>();
    for n in 1.. {
        let k_sq = sys.kappa0_sq() + (n as f64 * PI / sys.d()).powi(2);
        let k = k_sq.max(0.0).sqrt();
        if k > k_hi {
            break;
        }
        if k > 0.0 {
            all.push((k, ResonanceKind::Transparent));
        }
    }
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(all
        .into_iter()
        .enumerate()
        .map(|(i, (k, kind))| Resonance { k, index: i + 1, kind })
        .filter(|r| r.k >= k_lo && r.k <= k_hi)
        .collect())
}

/// Roots of cos χ in (0, k_hi].
pub fn interference_roots(sys: &BarrierSystem, k_hi: f64) -> Result<Vec<f64>> {
    if !(k_hi > 0.0 && k_hi.is_finite()) {
        return Err(crate::Error::param("k_range", format!("invalid upper limit {k_hi}")));
    }
    let max_step = k_hi / 400.0;
    let mut k = k_hi * 1e-9;
    let (mut g, mut slope) = cos_chi(sys, k)?;
    let mut roots = Vec::new();
    while k < k_hi {
        let step = (0.25 / slope.abs().max(1e-300)).min(max_step);
        let k_next = (k + step).min(k_hi);
        let (g_next, slope_next) = cos_chi(sys, k_next)?;
        if g == 0.0 {
            roots.push(k);
        } else if g_next != 0.0 && g.signum() != g_next.signum() {
            roots.push(bisect_root(sys, k, k_next, g)?);
        }
        k = k_next;
        g = g_next;
        slope = slope_next;
    }
    Ok(roots)
}

fn bisect_root(sys: &BarrierSystem, mut lo: f64, mut hi: f64, g_lo: f64) -> Result<f64> {
    let sign_lo = g_lo.signum();
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (g, _) = cos_chi(sys, mid)?;
        if g == 0.0 {
            return Ok(mid);
        }
        if g.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (g_lo, _) = cos_chi(sys, lo)?;
    let (g_hi, _) = cos_chi(sys, hi)?;
    Ok(if g_lo.abs() <= g_hi.abs() { lo } else { hi })
}

/// Removes jumps of ±`period` between consecutive samples in place.
pub fn unwrap_phases(values: &mut [f64], period: f64) {
    let mut shift = 0.0;
    for i in 1..values.len() {
        let raw = values[i] + shift;
        let delta = raw - values[i - 1];
        let n = (delta / period).round();
        shift -= n * period;
        values[i] = raw - n * period;
    }
}

/// J_two on a monotone k sweep, continuous except for the F⁽⁰⁾ jumps of π
/// that a resonance crossing produces.
pub fn j_two_sweep(sys: &BarrierSystem, ks: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(ks.len());
    for &k in ks {
        out.push(Scattering::new(sys, k)?.two.j_two);
    }
    unwrap_phases(&mut out, 2.0 * PI);
    Ok(out)
}
