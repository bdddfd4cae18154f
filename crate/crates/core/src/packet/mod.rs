//! Gaussian wave packets built from the stationary states by k-quadrature:
//! Ψ_tot(x, t), ψ_tr(x, t), ψ_ref(x, t), their norms and centroids, local and
//! asymptotic group times and the probability flux through x_c.
//!
//! The spectrum is A(k) = (2l0²/π)^{1/4}·exp[−l0²(k − k̄)²], so at t = 0 the
//! incident packet is centred at x = 0 with |ψ|² of standard deviation l0.

mod dynamics;
pub mod grid;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::decomposition::decompose;
use crate::error::{Error, Result};
use crate::model::BarrierSystem;
use crate::numerics::gauss_legendre_panels;
use crate::scattering::Scattering;
use crate::wave::{Basis, PiecewiseWave, Region, Side};

pub use dynamics::{Asymptotics, FluxSample, LocalTimes, RunConfig, Sample, Trajectory, MAX_SCAN, OCS_OVERLAP, SEPARATION_ESTIMATE};
pub use grid::XGrid;

/// A² is below e⁻⁶⁴ of its peak outside k̄ ± SPAN/(√2·l0), which keeps the
/// cut negligible even for a subprocess holding a tiny share of the norm.
const SPAN: f64 = 8.0;
/// Gauss-Legendre nodes per k-panel.
pub const ORDER: usize = 16;
const MAX_PANELS: usize = 2048;
/// Density allowed at the window edges, relative to the peak density
/// 1/(√(2π)·l0) of the incident packet.
pub const CONTAINMENT: f64 = 1e-10;
const WINDOW_FACTORS: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 16.0];
/// Relative sup-norm change allowed when the panel count doubles.
pub const CONVERGENCE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec {
    pub l0: f64,
    pub kbar: f64,
}

impl PacketSpec {
    pub fn new(l0: f64, kbar: f64) -> Result<Self> {
        if !(l0 > 0.0 && l0.is_finite()) {
            return Err(Error::param("l0", format!("must be positive, got {l0}")));
        }
        if !(kbar > 0.0 && kbar.is_finite()) {
            return Err(Error::param("kbar", format!("must be positive, got {kbar}")));
        }
        Ok(PacketSpec { l0, kbar })
    }

    pub fn amplitude(&self, k: f64) -> f64 {
        let dk = k - self.kbar;
        (2.0 * self.l0 * self.l0 / PI).powf(0.25) * (-self.l0 * self.l0 * dk * dk).exp()
    }

    /// Support of the k-quadrature, cut at k = 0.
    pub fn k_range(&self) -> (f64, f64) {
        let half = SPAN / (2f64.sqrt() * self.l0);
        ((self.kbar - half).max(0.0), self.kbar + half)
    }

    /// ∫_{k≤0} A² dk, the part of the spectrum that is dropped.
    pub fn negative_tail_mass(&self) -> f64 {
        0.5 * libm::erfc(2f64.sqrt() * self.l0 * self.kbar)
    }

    pub fn warnings(&self, sys: &BarrierSystem) -> Vec<String> {
        let mut out = Vec::new();
        // smaller tails sit below the norm tolerances of a run; the metadata
        // still records them
        let tail = self.negative_tail_mass();
        if tail > 1e-6 {
            out.push(format!("spectral mass {tail:.2e} at k <= 0 dropped"));
        }
        if sys.a1() < 5.0 * self.l0 {
            out.push(format!("a1 = {} is less than 5 l0 = {}", sys.a1(), 5.0 * self.l0));
        }
        out
    }
}

/// Which of the three packets to synthesize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Total,
    Transmitted,
    Reflected,
}

/// Stationary data at one quadrature node.
#[derive(Debug, Clone)]
pub struct KNode {
    pub k: f64,
    /// Quadrature weight times A(k), normalized so Σ weight² / w = 1.
    pub amplitude: f64,
    pub weight: f64,
    pub energy: f64,
    pub t_two: f64,
    pub r_two: f64,
    pub j_two_prime: f64,
    pub lambda_prime: f64,
    pub a_tr_in: Complex64,
    pub a_ref_in: Complex64,
    pub transmitted: PiecewiseWave,
    pub reflected: PiecewiseWave,
}

impl KNode {
    fn wave(&self, which: Which) -> Option<&PiecewiseWave> {
        match which {
            Which::Transmitted => Some(&self.transmitted),
            Which::Reflected => Some(&self.reflected),
            Which::Total => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Packet {
    pub sys: BarrierSystem,
    pub spec: PacketSpec,
    pub nodes: Vec<KNode>,
    pub panels: usize,
    /// Σ w A² on the grid before renormalization.
    pub raw_mass: f64,
    /// Multiplies the default spatial step.
    pub x_step_scale: f64,
    pub warnings: Vec<String>,
}

/// A field on every point of an [`XGrid`], segment by segment.
pub type Field = Vec<Vec<Complex64>>;

impl Packet {
    /// Packet on a fixed number of Gauss-Legendre panels.
    pub fn with_panels(sys: &BarrierSystem, spec: PacketSpec, panels: usize) -> Result<Self> {
        let (lo, hi) = spec.k_range();
        let nodes: Vec<(f64, f64)> = gauss_legendre_panels(lo, hi, panels, ORDER);
        let built: Vec<KNode> = nodes
            .par_iter()
            .map(|&(k, w)| {
                let sc = Scattering::new(sys, k)?;
                let pair = decompose(sys, &sc);
                Ok(KNode {
                    k,
                    amplitude: spec.amplitude(k),
                    weight: w,
                    energy: sys.energy(k),
                    t_two: sc.two.t_two,
                    r_two: sc.two.r_two,
                    j_two_prime: sc.two.j_two_prime,
                    lambda_prime: sc.two.lambda_prime,
                    a_tr_in: pair.a_tr_in,
                    a_ref_in: pair.a_ref_in,
                    transmitted: pair.transmitted,
                    reflected: pair.reflected,
                })
            })
            .collect::<Result<_>>()?;
        let raw_mass: f64 = built.iter().map(|n| n.weight * n.amplitude * n.amplitude).sum();
        let scale = raw_mass.sqrt().recip();
        let nodes = built
            .into_iter()
            .map(|mut n| {
                n.amplitude *= scale;
                n
            })
            .collect();
        Ok(Packet {
            sys: *sys,
            spec,
            nodes,
            panels,
            raw_mass,
            x_step_scale: 1.0,
            warnings: spec.warnings(sys),
        })
    }

    /// Doubles the panel count until the fields at `probe_times` change by
    /// less than [`CONVERGENCE`] relative to their peak.
    pub fn converged(sys: &BarrierSystem, spec: PacketSpec, probe_times: &[f64]) -> Result<Self> {
        let mut panels = 4;
        let mut current = Packet::with_panels(sys, spec, panels)?;
        loop {
            let finer = Packet::with_panels(sys, spec, 2 * panels)?;
            let mut residual: f64 = 0.0;
            for &t in probe_times {
                // a coarse k-sum aliases the packet across the window
                let grid = match finer.window(t) {
                    Ok(g) => g,
                    Err(Error::Containment { .. }) => {
                        residual = f64::INFINITY;
                        break;
                    }
                    Err(e) => return Err(e),
                };
                let (a_tr, a_rf) = current.fields(t, &grid);
                let (b_tr, b_rf) = finer.fields(t, &grid);
                residual = residual
                    .max(relative_sup_difference(&a_tr, &b_tr))
                    .max(relative_sup_difference(&a_rf, &b_rf));
            }
            panels *= 2;
            if residual < CONVERGENCE {
                return Ok(finer);
            }
            if panels >= MAX_PANELS {
                return Err(Error::QuadratureNotConverged { residual, panels });
            }
            current = finer;
        }
    }

    pub fn hbar_over_m(&self) -> f64 {
        self.sys.hbar() / self.sys.mass()
    }

    pub fn free_time(&self) -> f64 {
        self.sys.free_time(self.spec.kbar)
    }

    /// Step bound on [a, b]: 1/(4·k_max) everywhere, d/50 inside a barrier
    /// and L/32 inside the gap.
    fn step_for(&self, a: f64, b: f64) -> f64 {
        let (_, k_hi) = self.spec.k_range();
        let s = &self.sys;
        let mid = 0.5 * (a + b);
        let mut step = 1.0 / (4.0 * k_hi);
        if mid > s.a1() && mid < s.b2() {
            let in_gap = mid > s.b1() && mid < s.a2();
            step = step.min(if in_gap { s.gap() / 32.0 } else { s.d() / 50.0 });
        }
        step * self.x_step_scale
    }

    fn breaks(&self) -> [f64; 5] {
        let s = &self.sys;
        [s.a1(), s.b1(), s.midpoint(), s.a2(), s.b2()]
    }

    /// Largest centroid shift any significant component can carry.
    fn shift_bound(&self) -> f64 {
        let peak = self.nodes.iter().map(|n| n.amplitude).fold(0.0, f64::max);
        let width = self.sys.width();
        self.nodes
            .iter()
            .filter(|n| n.amplitude > 1e-7 * peak)
            .map(|n| n.lambda_prime.abs().max((n.j_two_prime - width).abs()))
            .fold(0.0, f64::max)
    }

    /// Smallest spatial window, from a sequence of widening candidates,
    /// at whose ends all three packets have decayed to the containment
    /// level.
    pub fn window(&self, t: f64) -> Result<XGrid> {
        let limit = CONTAINMENT * self.reference_density();
        let mut worst = 0.0;
        for factor in WINDOW_FACTORS {
            let (lo, hi) = self.window_bounds(t, factor);
            let tr = self.field_at(Which::Transmitted, t, &[lo, hi]);
            let rf = self.field_at(Which::Reflected, t, &[lo, hi]);
            let edge = (0..2)
                .map(|i| tr[i].norm_sqr().max(rf[i].norm_sqr()).max((tr[i] + rf[i]).norm_sqr()))
                .fold(0.0, f64::max);
            if edge <= limit {
                return Ok(XGrid::graded(lo, hi, &self.breaks(), |a, b| self.step_for(a, b)));
            }
            worst = edge;
        }
        Err(Error::Containment {
            edge: worst / self.reference_density(),
            limit: CONTAINMENT,
        })
    }

    fn window_bounds(&self, t: f64, factor: f64) -> (f64, f64) {
        let (_, k_hi) = self.spec.k_range();
        let reach = self.sys.velocity(k_hi) * t.abs();
        let margin = factor * (8.0 * self.spec.l0 + self.shift_bound());
        let lo = (-margin).min(2.0 * self.sys.a1() - reach - margin);
        let hi = (self.sys.b2() + margin).max(reach + margin);
        (lo, hi)
    }

    /// ψ(x, t) on every grid point.
    pub fn field(&self, which: Which, t: f64, grid: &XGrid) -> Field {
        let (tr, rf) = self.fields(t, grid);
        match which {
            Which::Transmitted => tr,
            Which::Reflected => rf,
            Which::Total => sum_fields(&tr, &rf),
        }
    }

    /// ψ_tr(x, t) and ψ_ref(x, t) from one pass over the nodes.
    pub fn fields(&self, t: f64, grid: &XGrid) -> (Field, Field) {
        let zero = |g: &XGrid| -> Field { g.segments.iter().map(|s| vec![Complex64::new(0.0, 0.0); s.len()]).collect() };
        let (mut tr, mut rf) = (zero(grid), zero(grid));
        for node in &self.nodes {
            let c = self.coefficient(node, t);
            for (s, seg) in grid.segments.iter().enumerate() {
                let mid = seg.x0 + 0.5 * seg.h * (seg.len() - 1) as f64;
                let r_tr = node.transmitted.regions[node.transmitted.region_index(mid, Side::Right)];
                let r_rf = node.reflected.regions[node.reflected.region_index(mid, Side::Right)];
                accumulate(node.k, c, seg, [(&r_tr, &mut tr[s]), (&r_rf, &mut rf[s])]);
            }
        }
        (tr, rf)
    }

    fn coefficient(&self, node: &KNode, t: f64) -> Complex64 {
        node.amplitude * node.weight / (2.0 * PI).sqrt() * Complex64::from_polar(1.0, -node.energy * t / self.sys.hbar())
    }

    /// ψ(x, t) at isolated points.
    pub fn field_at(&self, which: Which, t: f64, xs: &[f64]) -> Vec<Complex64> {
        xs.iter()
            .map(|&x| {
                self.nodes
                    .iter()
                    .map(|n| {
                        let c = self.coefficient(n, t);
                        let v = match which {
                            Which::Total => n.transmitted.value(x) + n.reflected.value(x),
                            _ => n.wave(which).expect("subprocess wave").value(x),
                        };
                        c * v
                    })
                    .sum()
            })
            .collect()
    }

    /// Probability current of ψ_tr or ψ_ref at x from one side.
    pub fn flux(&self, which: Which, t: f64, x: f64, side: Side) -> f64 {
        let mut psi = Complex64::new(0.0, 0.0);
        let mut dpsi = Complex64::new(0.0, 0.0);
        for n in &self.nodes {
            let c = self.coefficient(n, t);
            let (v, d) = match which {
                Which::Total => {
                    let (v1, d1) = n.transmitted.eval_side(x, side);
                    let (v2, d2) = n.reflected.eval_side(x, side);
                    (v1 + v2, d1 + d2)
                }
                _ => n.wave(which).expect("subprocess wave").eval_side(x, side),
            };
            psi += c * v;
            dpsi += c * d;
        }
        self.hbar_over_m() * (psi.conj() * dpsi).im
    }
}

/// e^{ikx} and e^{−ikx} coefficients of an oscillatory region.
fn plane_coefficients(region: &Region, k: f64) -> Option<(Complex64, Complex64)> {
    match region.basis {
        Basis::Plane { forward, backward } => Some((forward, backward)),
        Basis::Trig { center, sin, cos } => {
            // sin·sin u + cos·cos u = ½(cos − i·sin)e^{iu} + ½(cos + i·sin)e^{−iu}
            let i = Complex64::i();
            let shift = Complex64::from_polar(1.0, -k * center);
            Some((0.5 * (cos - i * sin) * shift, 0.5 * (cos + i * sin) * shift.conj()))
        }
        _ => None,
    }
}

/// Adds c·ψ_region(x) on the segment's points for each target. Oscillatory
/// regions share one phase recurrence, re-seeded every 64 steps.
fn accumulate(k: f64, c: Complex64, seg: &grid::Segment, targets: [(&Region, &mut Vec<Complex64>); 2]) {
    const RESEED: usize = 64;
    let mut waves: Vec<(Complex64, Complex64, &mut Vec<Complex64>)> = Vec::with_capacity(2);
    for (region, out) in targets {
        match plane_coefficients(region, k) {
            Some((f, g)) => waves.push((c * f, c * g, out)),
            None => {
                if let Basis::Hyperbolic { .. } = region.basis {
                    for (i, o) in out.iter_mut().enumerate() {
                        *o += c * region.eval(k, seg.x(i)).0;
                    }
                }
            }
        }
    }
    if waves.is_empty() {
        return;
    }
    let step = Complex64::from_polar(1.0, k * seg.h);
    let mut e = Complex64::new(1.0, 0.0);
    for i in 0..seg.len() {
        if i % RESEED == 0 {
            e = Complex64::from_polar(1.0, k * seg.x(i));
        }
        let ec = e.conj();
        for (f, g, out) in waves.iter_mut() {
            out[i] += *f * e + *g * ec;
        }
        e *= step;
    }
}

fn sum_fields(a: &Field, b: &Field) -> Field {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect()).collect()
}

fn relative_sup_difference(a: &Field, b: &Field) -> f64 {
    let mut diff: f64 = 0.0;
    let mut peak: f64 = 0.0;
    for (sa, sb) in a.iter().zip(b) {
        for (x, y) in sa.iter().zip(sb) {
            diff = diff.max((x - y).norm());
            peak = peak.max(y.norm());
        }
    }
    diff / peak.max(f64::MIN_POSITIVE)
}

/// ∫|ψ|², ∫x|ψ|² and ∫x²|ψ|² over the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub norm: f64,
    pub mean: f64,
    pub std: f64,
}

/// Moments of `field`; fails when the density at either end of the grid
/// exceeds CONTAINMENT·`reference`.
pub fn moments(field: &Field, grid: &XGrid, reference: f64) -> Result<Moments> {
    let peak = reference;
    let first = field[0][0].norm_sqr();
    let last = field.last().and_then(|s| s.last()).map_or(0.0, |v| v.norm_sqr());
    let edge = first.max(last);
    if edge > CONTAINMENT * peak {
        return Err(Error::Containment {
            edge: edge / peak,
            limit: CONTAINMENT,
        });
    }
    let norm = grid.integrate(|s, i, _| field[s][i].norm_sqr());
    if norm == 0.0 {
        return Ok(Moments {
            norm,
            mean: f64::NAN,
            std: f64::NAN,
        });
    }
    let mean = grid.integrate(|s, i, x| x * field[s][i].norm_sqr()) / norm;
    let var = grid.integrate(|s, i, x| (x - mean) * (x - mean) * field[s][i].norm_sqr()) / norm;
    Ok(Moments {
        norm,
        mean,
        std: var.sqrt(),
    })
}

impl Packet {
    /// Peak density of the incident packet at t = 0.
    pub fn reference_density(&self) -> f64 {
        1.0 / ((2.0 * PI).sqrt() * self.spec.l0)
    }

    /// Moments of one packet at time t.
    pub fn moments(&self, which: Which, t: f64) -> Result<Moments> {
        let grid = self.window(t)?;
        moments(&self.field(which, t, &grid), &grid, self.reference_density())
    }

    /// Transmitted, reflected and total moments from one synthesis.
    pub fn all_moments(&self, t: f64) -> Result<[Moments; 3]> {
        let reference = self.reference_density();
        let grid = self.window(t)?;
        let (tr, rf) = self.fields(t, &grid);
        let tot = sum_fields(&tr, &rf);
        Ok([
            moments(&tr, &grid, reference)?,
            moments(&rf, &grid, reference)?,
            moments(&tot, &grid, reference)?,
        ])
    }

    /// ∫|ψ_tr|·|ψ_ref| dx / √(T·R): spatial overlap of the two subprocess
    /// packets.
    pub fn overlap(&self, t: f64) -> Result<f64> {
        let grid = self.window(t)?;
        let (tr, rf) = self.fields(t, &grid);
        let cross = grid.integrate(|s, i, _| tr[s][i].norm() * rf[s][i].norm());
        let nt = grid.integrate(|s, i, _| tr[s][i].norm_sqr());
        let nr = grid.integrate(|s, i, _| rf[s][i].norm_sqr());
        Ok(cross / (nt * nr).sqrt().max(f64::MIN_POSITIVE))
    }
}
