use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{Moments, Packet, Which};
use crate::error::{Error, Result};
use crate::numerics::{bisect, linear_fit};
use crate::oracle::integrate;
use crate::wave::Side;

/// k-space averages over the transmitted (weight T_two·A²) and reflected
/// (weight R_two·A²) parts of the spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymptotics {
    pub t_as: f64,
    pub r_as: f64,
    pub k_tr: f64,
    pub k_ref: f64,
    pub j_prime_tr: f64,
    pub lambda_prime_tr: f64,
    pub j_prime_ref: f64,
    pub lambda_prime_ref: f64,
    pub tau_tr_as: f64,
    pub tau_ref_as: f64,
    /// x̄_tr^inc(t_dep) = 0.
    pub t_dep: f64,
    /// x̄_tr^out(t_arr) = b2.
    pub t_arr: f64,
    /// ⟨ψ_tr^inc|ψ_ref^inc⟩
    pub interference: Complex64,
    /// Standard deviations of k under the two weights.
    pub k_spread_tr: f64,
    pub k_spread_ref: f64,
}

impl Asymptotics {
    /// Velocity of the transmitted packet's centroid far from the barriers.
    pub fn v_tr(&self, p: &Packet) -> f64 {
        p.sys.velocity(self.k_tr)
    }

    /// Centroid of the reference packet: the free continuation of the
    /// incoming transmitted packet.
    pub fn rwp(&self, p: &Packet, t: f64) -> f64 {
        self.v_tr(p) * t - self.lambda_prime_tr
    }

    /// Late-time asymptote of x̄_tr(t).
    pub fn outgoing_line(&self, p: &Packet, t: f64) -> f64 {
        self.v_tr(p) * t - self.j_prime_tr + p.sys.width()
    }
}

impl Packet {
    pub fn asymptotics(&self) -> Asymptotics {
        let mut acc = [0.0f64; 10];
        let mut interference = Complex64::new(0.0, 0.0);
        for n in &self.nodes {
            let a2 = n.weight * n.amplitude * n.amplitude;
            let (wt, wr) = (a2 * n.t_two, a2 * n.r_two);
            acc[0] += wt;
            acc[1] += wr;
            acc[2] += wt * n.k;
            acc[3] += wr * n.k;
            acc[4] += wt * n.j_two_prime;
            acc[5] += wt * n.lambda_prime;
            acc[6] += wr * n.j_two_prime;
            acc[7] += wr * n.lambda_prime;
            acc[8] += wt * n.k * n.k;
            acc[9] += wr * n.k * n.k;
            interference += a2 * n.a_tr_in.conj() * n.a_ref_in;
        }
        let [t_as, r_as, ..] = acc;
        let k_tr = acc[2] / t_as;
        let k_ref = acc[3] / r_as;
        let (j_tr, l_tr) = (acc[4] / t_as, acc[5] / t_as);
        let (j_ref, l_ref) = (acc[6] / r_as, acc[7] / r_as);
        let mhk = |k: f64| self.sys.mass() / (self.sys.hbar() * k);
        let v_tr = self.sys.velocity(k_tr);
        Asymptotics {
            t_as,
            r_as,
            k_tr,
            k_ref,
            j_prime_tr: j_tr,
            lambda_prime_tr: l_tr,
            j_prime_ref: j_ref,
            lambda_prime_ref: l_ref,
            tau_tr_as: mhk(k_tr) * (j_tr - l_tr),
            tau_ref_as: mhk(k_ref) * (j_ref - l_ref),
            t_dep: l_tr / v_tr,
            t_arr: (self.sys.a1() + j_tr) / v_tr,
            interference,
            k_spread_tr: (acc[8] / t_as - k_tr * k_tr).max(0.0).sqrt(),
            k_spread_ref: (acc[9] / r_as - k_ref * k_ref).max(0.0).sqrt(),
        }
    }

    /// I_tr(x_c − 0, t) and I_tr(x_c + 0, t).
    pub fn flux_at_midpoint(&self, t: f64) -> FluxSample {
        let xc = self.sys.midpoint();
        FluxSample {
            t,
            minus: self.flux(Which::Transmitted, t, xc, Side::Left),
            plus: self.flux(Which::Transmitted, t, xc, Side::Right),
        }
    }

    /// ∫ dT/dt dt over [t0, t1] with dT/dt = I_tr(x_c + 0) − I_tr(x_c − 0).
    pub fn norm_change(&self, t0: f64, t1: f64, tol: f64) -> Result<f64> {
        integrate(|t| self.flux_at_midpoint(t).balance(), t0, t1, tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxSample {
    pub t: f64,
    pub minus: f64,
    pub plus: f64,
}

impl FluxSample {
    /// dT/dt
    pub fn balance(&self) -> f64 {
        self.plus - self.minus
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub x_tr: f64,
    pub x_ref: f64,
    pub x_tot: f64,
    pub norm_t: f64,
    pub norm_r: f64,
    pub norm_tot: f64,
    pub flux_minus: f64,
    pub flux_plus: f64,
    pub rwp_x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalTimes {
    pub t_entry: f64,
    pub t_exit: f64,
    pub tau_tr_loc: f64,
    pub tau_ref_loc: f64,
    /// More than one crossing of a1 or b2 was seen.
    pub multiple_crossings: bool,
}

/// Time window and sampling of a packet run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    /// End of the window; see [`Packet::default_t_end`] for the default.
    pub t_end: Option<f64>,
    pub samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            t_end: None,
            samples: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub asymptotics: Asymptotics,
    pub local: LocalTimes,
    pub final_overlap: f64,
    pub ocs_valid: bool,
    pub panels: usize,
    pub warnings: Vec<String>,
}

/// Final-stage overlap below which scattering counts as completed.
pub const OCS_OVERLAP: f64 = 1e-4;
/// Gaussian overlap targeted by the default run window.
pub const SEPARATION_ESTIMATE: f64 = 1e-6;
/// Cap on the intervals of one crossing scan.
pub const MAX_SCAN: usize = 24;

impl Packet {
    /// End of the run window: the first time after arrival at which two
    /// freely spreading Gaussians with the transmitted and reflected
    /// centroid velocities and k-spreads overlap by less than
    /// [`SEPARATION_ESTIMATE`], or by less than three times the late-time
    /// floor of that overlap when the floor is higher, and never much past
    /// twice the start of the search. The estimate ignores the non-Gaussian
    /// tails, hence the margin below [`OCS_OVERLAP`]; the run measures the
    /// real overlap.
    pub fn default_t_end(&self) -> f64 {
        let a = self.asymptotics();
        let start = 2.0 * a.t_arr.max(self.sys.a1() / self.sys.velocity(self.spec.kbar));
        if !(a.t_as > 1e-12 && a.r_as > 1e-12) {
            return start;
        }
        let hm = self.hbar_over_m();
        let l0 = self.spec.l0;
        let estimate = |t: f64| {
            let dt = t - a.t_arr;
            let sep = self.sys.width() + (a.v_tr(self) + self.sys.velocity(a.k_ref)) * dt;
            let s1 = (l0 * l0 + (hm * a.k_spread_tr * t).powi(2)).sqrt();
            let s2 = (l0 * l0 + (hm * a.k_spread_ref * t).powi(2)).sqrt();
            let sum = s1 * s1 + s2 * s2;
            (2.0 * s1 * s2 / sum).sqrt() * (-sep * sep / (4.0 * sum)).exp()
        };
        // packets that spread as fast as they separate never get below a
        // floor; settle for being close to it
        let (w1, w2) = (a.k_spread_tr, a.k_spread_ref);
        let v_sum = a.v_tr(self) + self.sys.velocity(a.k_ref);
        let floor = (2.0 * w1 * w2 / (w1 * w1 + w2 * w2)).sqrt()
            * (-v_sum * v_sum / (4.0 * hm * hm * (w1 * w1 + w2 * w2))).exp();
        let target = SEPARATION_ESTIMATE.max(3.0 * floor);
        let mut t = start;
        while estimate(t) > target && t < 2.0 * start {
            t *= 1.25;
        }
        t
    }

    /// Packet whose k-quadrature has been checked at the start, middle and
    /// end of the run window.
    pub fn for_run(sys: &crate::BarrierSystem, spec: super::PacketSpec, cfg: &RunConfig) -> Result<(Self, f64)> {
        let t_end = match cfg.t_end {
            Some(t) => t,
            None => Packet::with_panels(sys, spec, 64)?.default_t_end(),
        };
        let packet = Packet::converged(sys, spec, &[0.0, 0.5 * t_end, t_end])?;
        Ok((packet, t_end))
    }

    pub fn sample(&self, t: f64, asym: &Asymptotics) -> Result<Sample> {
        let [tr, rf, tot]: [Moments; 3] = self.all_moments(t)?;
        let flux = self.flux_at_midpoint(t);
        Ok(Sample {
            t,
            x_tr: tr.mean,
            x_ref: rf.mean,
            x_tot: tot.mean,
            norm_t: tr.norm,
            norm_r: rf.norm,
            norm_tot: tot.norm,
            flux_minus: flux.minus,
            flux_plus: flux.plus,
            rwp_x: asym.rwp(self, t),
        })
    }

    fn centroid(&self, which: Which, t: f64) -> Result<f64> {
        Ok(self.moments(which, t)?.mean)
    }

    /// Every time in [lo, hi] at which the centroid crosses `target`: a scan
    /// with spacing `step` (at most [`MAX_SCAN`] intervals) brackets the
    /// roots, bisection refines them to `tol`.
    fn crossings(&self, which: Which, target: f64, lo: f64, hi: f64, step: f64, tol: f64) -> Result<Vec<f64>> {
        let n = ((hi - lo) / step).ceil().clamp(1.0, MAX_SCAN as f64) as usize;
        let ts: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
        let xs: Vec<f64> = ts
            .par_iter()
            .map(|&t| self.centroid(which, t))
            .collect::<Result<_>>()?;
        let mut roots = Vec::new();
        for i in 0..n {
            let (f0, f1) = (xs[i] - target, xs[i + 1] - target);
            if f0 == 0.0 {
                roots.push(ts[i]);
            } else if f0 * f1 < 0.0 {
                let mut err = None;
                let root = bisect(
                    |t| match self.centroid(which, t) {
                        Ok(x) => x - target,
                        Err(e) => {
                            err.get_or_insert(e);
                            0.0
                        }
                    },
                    ts[i],
                    ts[i + 1],
                    tol,
                );
                if let Some(e) = err {
                    return Err(e);
                }
                roots.push(root);
            }
        }
        Ok(roots)
    }

    /// Entry/exit times of x̄_tr through a1 and b2 and the reflection
    /// analogue; `coarse` brackets the search.
    pub fn local_times(&self, coarse: &[Sample]) -> Result<LocalTimes> {
        let tau_free = self.free_time();
        let step = tau_free / 50.0;
        let tol = 1e-4 * tau_free;
        let (a1, b2) = (self.sys.a1(), self.sys.b2());

        let bracket = |f: &dyn Fn(&Sample) -> f64, target: f64| -> Option<(f64, f64)> {
            let first = coarse.windows(2).position(|w| (f(&w[0]) - target) * (f(&w[1]) - target) <= 0.0)?;
            let last = coarse.windows(2).rposition(|w| (f(&w[0]) - target) * (f(&w[1]) - target) <= 0.0)?;
            Some((coarse[first].t, coarse[last + 1].t))
        };
        let x_tr = |s: &Sample| s.x_tr;
        let (e_lo, e_hi) = bracket(&x_tr, a1).ok_or(Error::NoCrossing { target: a1 })?;
        let (x_lo, x_hi) = bracket(&x_tr, b2).ok_or(Error::NoCrossing { target: b2 })?;
        let entries = self.crossings(Which::Transmitted, a1, e_lo, e_hi, step, tol)?;
        let exits = self.crossings(Which::Transmitted, b2, x_lo, x_hi, step, tol)?;
        let t_entry = *entries.first().ok_or(Error::NoCrossing { target: a1 })?;
        let t_exit = *exits.last().ok_or(Error::NoCrossing { target: b2 })?;

        let x_ref = |s: &Sample| s.x_ref;
        let tau_ref_loc = match bracket(&x_ref, a1) {
            Some((lo, hi)) => {
                let roots = self.crossings(Which::Reflected, a1, lo, hi, step, tol)?;
                if roots.len() >= 2 {
                    roots[roots.len() - 1] - roots[0]
                } else {
                    0.0
                }
            }
            None => 0.0,
        };
        Ok(LocalTimes {
            t_entry,
            t_exit,
            tau_tr_loc: t_exit - t_entry,
            tau_ref_loc,
            multiple_crossings: entries.len() > 1 || exits.len() > 1,
        })
    }

    /// Full run: trajectory samples on an even grid over [0, t_end], local
    /// times, the final-stage overlap and the completed-scattering flag.
    pub fn run(&self, t_end: f64, samples: usize) -> Result<Trajectory> {
        let asym = self.asymptotics();
        let ts: Vec<f64> = (0..=samples).map(|i| t_end * i as f64 / samples as f64).collect();
        let rows: Vec<Sample> = ts.par_iter().map(|&t| self.sample(t, &asym)).collect::<Result<_>>()?;
        let final_overlap = self.overlap(t_end)?;
        let ocs_valid = final_overlap < OCS_OVERLAP;
        let mut warnings = self.warnings.clone();
        let local = match self.local_times(&rows) {
            Ok(l) => {
                if l.multiple_crossings {
                    warnings.push("centroid crosses a1 or b2 more than once; first entry and last exit used".into());
                }
                l
            }
            Err(e @ Error::NoCrossing { .. }) => {
                warnings.push(e.to_string());
                LocalTimes {
                    t_entry: f64::NAN,
                    t_exit: f64::NAN,
                    tau_tr_loc: f64::NAN,
                    tau_ref_loc: f64::NAN,
                    multiple_crossings: false,
                }
            }
            Err(e) => return Err(e),
        };
        if !ocs_valid {
            warnings.push(format!("completed-scattering check failed: final overlap {final_overlap:.2e}"));
        }
        Ok(Trajectory {
            samples: rows,
            asymptotics: asym,
            local,
            final_overlap,
            ocs_valid,
            panels: self.panels,
            warnings,
        })
    }
}

impl Trajectory {
    /// Line fitted to the samples with t in [t0, t1]: (slope, intercept).
    pub fn fit_tr(&self, t0: f64, t1: f64) -> (f64, f64) {
        let (ts, xs): (Vec<f64>, Vec<f64>) = self
            .samples
            .iter()
            .filter(|s| s.t >= t0 && s.t <= t1)
            .map(|s| (s.t, s.x_tr))
            .unzip();
        linear_fit(&ts, &xs)
    }

    /// One row per sample; `flags` fills the trailing flags column.
    pub fn write_csv(&self, out: &mut impl Write, flags: &str) -> std::io::Result<()> {
        writeln!(out, "t,x_tr,x_ref,x_tot,norm_T,norm_R,flux_xc_minus,flux_xc_plus,rwp_x,flags")?;
        for s in &self.samples {
            writeln!(
                out,
                "{:.10e},{:.10e},{:.10e},{:.10e},{:.12e},{:.12e},{:.10e},{:.10e},{:.10e},{flags}",
                s.t, s.x_tr, s.x_ref, s.x_tot, s.norm_t, s.norm_r, s.flux_minus, s.flux_plus, s.rwp_x
            )?;
        }
        Ok(())
    }
}
