//! The acceptance criteria as runnable checks. Each criterion compares the
//! closed forms with an independent route (quadrature, finite differences,
//! ODE integration, wave-packet synthesis) and reports measured values next
//! to the required bounds.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomposition::decompose;
use crate::error::Result;
use crate::model::BarrierSystem;
use crate::oracle::{integrate_density, numeric_derivative, numeric_phase_derivative, solve_stationary};
use crate::packet::{Packet, PacketSpec, RunConfig, Which};
use crate::scattering::{find_resonances, interference_roots, Scattering};
use crate::scenario::Scenario;
use crate::times::{single_barrier_times, TimeScales};
use crate::wave::PiecewiseWave;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
}

impl Bound {
    fn holds(&self, v: f64) -> bool {
        match *self {
            Bound::AtMost(b) => v <= b,
            Bound::AtLeast(b) => v >= b,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::AtMost(b) => write!(f, "<= {b:.1e}"),
            Bound::AtLeast(b) => write!(f, ">= {b:.1e}"),
        }
    }
}

/// One measured quantity of a criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    pub required: Bound,
}

impl Check {
    pub fn new(label: impl Into<String>, measured: f64, required: Bound) -> Self {
        Check {
            label: label.into(),
            measured,
            required,
        }
    }

    pub fn passed(&self) -> bool {
        self.required.holds(self.measured)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: &'static str,
    pub name: &'static str,
    pub checks: Vec<Check>,
    /// Set when the criterion was not run in this suite.
    pub skipped: bool,
}

impl CriterionResult {
    fn new(id: &'static str, name: &'static str, checks: Vec<Check>) -> Self {
        CriterionResult {
            id,
            name,
            checks,
            skipped: false,
        }
    }

    fn skipped(id: &'static str, name: &'static str) -> Self {
        CriterionResult {
            id,
            name,
            checks: Vec::new(),
            skipped: true,
        }
    }

    pub fn passed(&self) -> bool {
        self.skipped || self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.skipped {
            return write!(f, "SKIP [{}] {} (full suite only)", self.id, self.name);
        }
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} [{}] {}:", self.id, self.name)?;
        for (i, c) in self.checks.iter().enumerate() {
            let sep = if i == 0 { " " } else { "; " };
            let mark = if c.passed() { "" } else { " (!)" };
            write!(f, "{sep}{} {:.3e} {}{mark}", c.label, c.measured, c.required)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Everything except the ODE sweep and the physical-unit packet run.
    Fast,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub results: Vec<CriterionResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.results.iter().all(CriterionResult::passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(f, "{r}")?;
        }
        let failed = self.results.iter().filter(|r| !r.passed()).count();
        write!(f, "{} criteria, {failed} failed", self.results.len())
    }
}

/// A deliberate fault injected into the formulas under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tamper {
    None,
    NegatedLambdaPrime,
    NegatedGapDwell,
}

pub fn run(suite: Suite) -> Result<Report> {
    let full = suite == Suite::Full;
    let mut results = vec![
        unitarity()?,
        if full {
            ode_equivalence()?
        } else {
            CriterionResult::skipped("2", ODE_NAME)
        },
        dwell_formulas(Tamper::None)?,
        derivatives(Tamper::None)?,
        resonance_identities()?,
        single_barrier()?,
        hartman()?,
        figure_shapes()?,
        if full {
            fig7()?
        } else {
            CriterionResult::skipped("9", FIG7_NAME)
        },
        conservation()?,
    ];
    results.push(mutation_sanity()?);
    Ok(Report { results })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Random systems in natural units, V0 in [0.2, 2], d in [0.3, 3], L in [0, 5].
fn draw_system(rng: &mut ChaCha8Rng) -> Result<BarrierSystem> {
    let v0 = rng.gen_range(0.2..2.0);
    let d = rng.gen_range(0.3..3.0);
    let l = rng.gen_range(0.0..5.0);
    BarrierSystem::natural(v0, d, l, rng.gen_range(1.0..10.0))
}

/// Distance to the nearest full-transmission point, relative to κ0.
fn resonance_distance(sys: &BarrierSystem, k: f64, roots: &[f64]) -> f64 {
    let kappa0 = sys.kappa0().re;
    roots.iter().map(|r| (r - k).abs()).fold(f64::INFINITY, f64::min) / kappa0
}

fn full_transmission_points(sys: &BarrierSystem, k_hi: f64) -> Result<Vec<f64>> {
    Ok(find_resonances(sys, 0.0, k_hi)?.into_iter().map(|r| r.k).collect())
}

pub fn unitarity() -> Result<CriterionResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut sum_t, mut sum_a, mut norm_a): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..20 {
        let sys = draw_system(&mut rng)?;
        let kappa0 = sys.kappa0().re;
        for i in 1..=10_000 {
            let k = 3.0 * kappa0 * i as f64 / 10_000.0;
            let sc = Scattering::new(&sys, k)?;
            let pair = decompose(&sys, &sc);
            sum_t = sum_t.max((sc.two.t_two + sc.two.r_two - 1.0).abs());
            norm_a = norm_a.max((pair.a_tr_in.norm_sqr() + pair.a_ref_in.norm_sqr() - 1.0).abs());
            sum_a = sum_a.max((pair.a_tr_in + pair.a_ref_in - 1.0).norm());
        }
    }
    Ok(CriterionResult::new(
        "1",
        "unitarity and decomposition algebra",
        vec![
            Check::new("|T+R-1|", sum_t, Bound::AtMost(1e-12)),
            Check::new("||A_tr|^2+|A_ref|^2-1|", norm_a, Bound::AtMost(1e-12)),
            Check::new("|A_tr+A_ref-1|", sum_a, Bound::AtMost(1e-12)),
        ],
    ))
}

const ODE_NAME: &str = "closed-form amplitudes against ODE integration";

pub fn ode_equivalence() -> Result<CriterionResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let sys = draw_system(&mut rng)?;
        let kappa0 = sys.kappa0().re;
        // below, at and above the barrier top in turn
        let ratio = match i % 3 {
            0 => rng.gen_range(0.05..0.95),
            1 => 1.0 + rng.gen_range(-1e-3..1e-3),
            _ => rng.gen_range(1.05..3.0),
        };
        let k = ratio * kappa0;
        let sc = Scattering::new(&sys, k)?;
        let sol = solve_stationary(&sys, k)?;
        worst = worst.max((sc.two.a_out - sol.a_out).norm() / sol.a_out.norm());
        // at full transmission b_out vanishes; compare against the incident amplitude
        let scale = sol.b_out.norm().max(1e-6);
        worst = worst.max((sc.two.b_out - sol.b_out).norm() / scale);
    }
    Ok(CriterionResult::new(
        "2",
        ODE_NAME,
        vec![Check::new("worst relative error", worst, Bound::AtMost(1e-8))],
    ))
}

fn dwell_errors(sys: &BarrierSystem, k: f64, tamper: Tamper) -> Result<f64> {
    let sc = Scattering::new(sys, k)?;
    let t = TimeScales::from_scattering(sys, &sc);
    let pair = decompose(sys, &sc);
    let mhk = sys.mass() / (sys.hbar() * k);
    let q = |w: &PiecewiseWave, a: f64, b: f64| integrate_density(w, a, b);
    let (t2, r2) = (sc.two.t_two, sc.two.r_two);
    let mut tr_gap = t.tau_tr.gap;
    if tamper == Tamper::NegatedGapDwell {
        tr_gap = -tr_gap;
    }
    let mut worst = [
        rel(t.tau_tr.first, mhk / t2 * q(&pair.transmitted, sys.a1(), sys.b1())?),
        rel(t.tau_tr.second, mhk / t2 * q(&pair.transmitted, sys.a2(), sys.b2())?),
        rel(t.tau_tot.first, mhk * q(&pair.total, sys.a1(), sys.b1())?),
        rel(t.tau_tot.second, mhk * q(&pair.total, sys.a2(), sys.b2())?),
        rel(t.tau_ref.first, mhk / r2 * q(&pair.reflected, sys.a1(), sys.b1())?),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if sys.gap() > 0.0 {
        for e in [
            rel(tr_gap, mhk / t2 * q(&pair.transmitted, sys.b1(), sys.a2())?),
            rel(t.tau_tot.gap, mhk * q(&pair.total, sys.b1(), sys.a2())?),
            rel(t.tau_ref.gap, mhk / r2 * q(&pair.reflected, sys.b1(), sys.midpoint())?),
        ] {
            worst = worst.max(e);
        }
    }
    Ok(worst)
}

pub fn dwell_formulas(tamper: Tamper) -> Result<CriterionResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut parts, mut split): (f64, f64) = (0.0, 0.0);
    let mut systems = vec![
        BarrierSystem::from_opacity(3.0 * PI, 0.0, 5.0)?,
        BarrierSystem::from_opacity(3.0 * PI, 2.0, 5.0)?,
    ];
    for _ in 0..10 {
        systems.push(draw_system(&mut rng)?);
    }
    for sys in &systems {
        let kappa0 = sys.kappa0().re;
        let roots = full_transmission_points(sys, 3.0 * kappa0)?;
        for ratio in [0.13, 0.37, 0.61, 0.88, 1.27, 2.3] {
            let k = ratio * kappa0;
            // guard band around full transmission, where R_two → 0
            if resonance_distance(sys, k, &roots) < 1e-3 {
                continue;
            }
            parts = parts.max(dwell_errors(sys, k, tamper)?);
            let sc = Scattering::new(sys, k)?;
            let pair = decompose(sys, &sc);
            let left = integrate_density(&pair.transmitted, sys.a1(), sys.midpoint())?;
            let right = integrate_density(&pair.transmitted, sys.midpoint(), sys.b2())?;
            split = split.max(rel(left, right));
        }
    }
    Ok(CriterionResult::new(
        "3",
        "dwell components against quadrature",
        vec![
            Check::new("worst component error", parts, Bound::AtMost(1e-8)),
            Check::new("left/right half split", split, Bound::AtMost(1e-9)),
        ],
    ))
}

pub fn derivatives(tamper: Tamper) -> Result<CriterionResult> {
    let h = 1e-3;
    let mut worst: f64 = 0.0;
    for sys in [
        BarrierSystem::from_opacity(3.0 * PI, 2.0, 5.0)?,
        BarrierSystem::from_opacity(5.0, 0.0, 2.0)?,
        BarrierSystem::from_opacity(8.0, 5.0, 2.0)?,
    ] {
        let roots = full_transmission_points(&sys, 3.0)?;
        let at = |k: f64| Scattering::new(&sys, k);
        for i in 1..60 {
            let k = 0.05 * i as f64;
            if resonance_distance(&sys, k, &roots) < 1e-2 {
                continue;
            }
            let sc = at(k)?;
            let mut lambda_prime = sc.two.lambda_prime;
            if tamper == Tamper::NegatedLambdaPrime {
                lambda_prime = -lambda_prime;
            }
            let dt = numeric_derivative(|k| at(k).map_or(f64::NAN, |s| s.one.t), k, h)?;
            let dj = numeric_phase_derivative(|k| at(k).map_or(f64::NAN, |s| s.one.j), k, h, 2.0 * PI)?;
            let djt = numeric_phase_derivative(|k| at(k).map_or(f64::NAN, |s| s.two.j_two), k, h, 2.0 * PI)?;
            let dl = numeric_phase_derivative(|k| at(k).map_or(f64::NAN, |s| s.two.lambda), k, h, PI)?;
            for e in [
                rel(sc.one.t_prime, dt.value),
                rel(sc.one.j_prime, dj.value),
                rel(sc.two.j_two_prime, djt.value),
                rel(lambda_prime, dl.value),
            ] {
                worst = worst.max(if e.is_nan() { f64::INFINITY } else { e });
            }
        }
    }
    Ok(CriterionResult::new(
        "4",
        "derivatives against Richardson differences",
        vec![Check::new("worst relative error", worst, Bound::AtMost(1e-6))],
    ))
}

pub fn resonance_identities() -> Result<CriterionResult> {
    let (mut t_err, mut a_err, mut tau_err): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut count = 0;
    for sys in [
        BarrierSystem::from_opacity(3.0 * PI, 0.0, 5.0)?,
        BarrierSystem::from_opacity(3.0 * PI, 2.0, 5.0)?,
        BarrierSystem::from_opacity(3.0 * PI, 5.0, 5.0)?,
    ] {
        for k in interference_roots(&sys, 3.0 * sys.kappa0().re)? {
            let sc = Scattering::new(&sys, k)?;
            let pair = decompose(&sys, &sc);
            let t = TimeScales::from_scattering(&sys, &sc);
            t_err = t_err.max((sc.two.t_two - 1.0).abs());
            a_err = a_err.max(pair.a_ref_in.norm());
            tau_err = tau_err.max(rel(t.tau_dwell(), t.tau_tr_dwell()));
            count += 1;
        }
    }
    Ok(CriterionResult::new(
        "5",
        "identities at the roots of cos chi",
        vec![
            Check::new("roots", count as f64, Bound::AtLeast(1.0)),
            Check::new("|T_two-1|", t_err, Bound::AtMost(1e-10)),
            Check::new("|A_ref_in|", a_err, Bound::AtMost(1e-10)),
            Check::new("dwell vs transmission dwell", tau_err, Bound::AtMost(1e-9)),
        ],
    ))
}

pub fn single_barrier() -> Result<CriterionResult> {
    let sys = BarrierSystem::from_opacity(3.0 * PI, 0.0, 5.0)?;
    let mut worst: f64 = 0.0;
    for i in 1..=1000 {
        let k = 3.0 * i as f64 / 1000.0;
        let t = TimeScales::new(&sys, k)?;
        let (tau_as, x_start) = single_barrier_times(&sys, k)?;
        worst = worst.max(rel(tau_as, t.tau_as));
        // x_start passes through zero; measure it on the scale of the barrier
        worst = worst.max((x_start - t.x_start).abs() / t.x_start.abs().max(sys.d() * 1e-3));
    }
    Ok(CriterionResult::new(
        "6",
        "single-barrier closed forms at L = 0",
        vec![Check::new("worst relative error", worst, Bound::AtMost(1e-10))],
    ))
}

/// E = V0/2 in natural units with κ0 = 1, so κ = k = 1/√2.
fn half_height_system(kappa_d: f64, gap: f64) -> Result<(BarrierSystem, f64)> {
    let k = 0.5f64.sqrt();
    Ok((BarrierSystem::natural(0.5, kappa_d / k, gap, 5.0)?, k))
}

pub fn hartman() -> Result<CriterionResult> {
    let (thin, k) = half_height_system(15.0, 0.0)?;
    let (thick, _) = half_height_system(30.0, 0.0)?;
    let a = TimeScales::new(&thin, k)?;
    let b = TimeScales::new(&thick, k)?;

    // gaps half way between consecutive resonances, L_n = (nπ − J)/k
    let j = Scattering::new(&thin, k)?.one.j;
    let first = (j / PI).floor() as i64 + 1;
    let gaps: Vec<f64> = (0..8).map(|i| ((first + i) as f64 * PI - j) / k).collect();
    let times: Vec<TimeScales> = gaps
        .iter()
        .map(|&l| TimeScales::new(&thin.with_gap(l)?, k))
        .collect::<Result<_>>()?;
    let mut gap_change: f64 = 0.0;
    for (i, t) in times.iter().enumerate() {
        if let Some(doubled) = gaps.iter().position(|&l| (l - 2.0 * gaps[i]).abs() < 0.5 * PI / k) {
            gap_change = gap_change.max(rel(times[doubled].tau_as, t.tau_as));
        }
    }
    gap_change = gap_change.max(rel(times[times.len() - 1].tau_as, times[0].tau_as));
    let rising = times
        .windows(2)
        .map(|w| w[1].tau_tr_dwell() / w[0].tau_tr_dwell())
        .fold(f64::INFINITY, f64::min);
    Ok(CriterionResult::new(
        "7",
        "Hartman saturation in d and L",
        vec![
            Check::new("tau_as change, kd 15 -> 30", rel(b.tau_as, a.tau_as), Bound::AtMost(1e-2)),
            Check::new("tau_tr_dwell growth, kd 15 -> 30", b.tau_tr_dwell() / a.tau_tr_dwell(), Bound::AtLeast(10.0)),
            Check::new("tau_as change over gap midpoints", gap_change, Bound::AtMost(2e-2)),
            // strictly increasing: every step ratio above one
            Check::new("smallest tau_tr_dwell step ratio", rising, Bound::AtLeast(1.0 + 1e-12)),
        ],
    ))
}

fn local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len() - 1)
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
        .collect()
}

/// Maxima whose nearest resonance is odd, plus even resonances that are
/// nearest to no maximum.
fn parity_mismatches(ks: &[f64], values: &[f64], resonances: &[(f64, usize)]) -> usize {
    let nearest = |k: f64| {
        resonances
            .iter()
            .min_by(|a, b| (a.0 - k).abs().total_cmp(&(b.0 - k).abs()))
            .map(|r| r.1)
    };
    let peaks: Vec<usize> = local_maxima(values)
        .into_iter()
        .filter_map(|i| nearest(ks[i]))
        .collect();
    let odd_peaks = peaks.iter().filter(|&&n| n % 2 == 1).count();
    let missed = resonances
        .iter()
        .filter(|r| r.1 % 2 == 0 && !peaks.contains(&r.1))
        .count();
    odd_peaks + missed
}

pub fn figure_shapes() -> Result<CriterionResult> {
    let sys = BarrierSystem::from_opacity(3.0 * PI, 0.0, 5.0)?;
    let mut checks = Vec::new();

    let low = TimeScales::new(&sys, 0.1)?;
    checks.push(Check::new("low k: tau_tr_dwell/tau_as", low.tau_tr_dwell() / low.tau_as, Bound::AtLeast(5.0)));
    checks.push(Check::new("low k: |tau_as/tau_ph-1|", rel(low.tau_as, low.tau_ph), Bound::AtMost(0.1)));
    checks.push(Check::new("low k: tau_ph/tau_ref_dwell", low.tau_ph / low.tau_ref_dwell(), Bound::AtLeast(5.0)));
    checks.push(Check::new("low k: |tau_ref_dwell/tau_dwell-1|", rel(low.tau_ref_dwell(), low.tau_dwell()), Bound::AtMost(0.1)));

    let high = TimeScales::new(&sys, 3.0)?;
    let spread = [high.tau_tr_dwell(), high.tau_ref_dwell(), high.tau_dwell(), high.tau_ph, high.tau_as]
        .into_iter()
        .map(|t| rel(t, high.tau_free))
        .fold(0.0, f64::max);
    checks.push(Check::new("k = 3 kappa0: worst |tau/tau_free-1|", spread, Bound::AtMost(0.05)));

    let ks: Vec<f64> = (0..=8000).map(|i| 1.0 + 2.0 * i as f64 / 8000.0).collect();
    let rows = crate::times::times_profile(&sys, &ks)?;
    let resonances: Vec<(f64, usize)> = find_resonances(&sys, 1.0, 3.0)?.into_iter().map(|r| (r.k, r.index)).collect();
    let tau_as: Vec<f64> = rows.iter().map(|t| t.tau_as).collect();
    let tau_ref: Vec<f64> = rows.iter().map(|t| t.tau_ref_dwell()).collect();
    checks.push(Check::new("tau_as maxima off even resonances", parity_mismatches(&ks, &tau_as, &resonances) as f64, Bound::AtMost(0.0)));
    checks.push(Check::new("tau_ref_dwell maxima off even resonances", parity_mismatches(&ks, &tau_ref, &resonances) as f64, Bound::AtMost(0.0)));
    Ok(CriterionResult::new("8", "figure shapes", checks))
}

const FIG7_NAME: &str = "physical-unit packet run";

/// Samples of the trajectory in the criterion run; local times come from
/// root finding and do not depend on it.
pub const FIG7_SAMPLES: usize = 40;

pub fn fig7() -> Result<CriterionResult> {
    let sc = Scenario::builtin("fig7").expect("builtin fig7");
    let settings = sc.packet.as_ref().expect("packet scenario");
    let cfg = RunConfig {
        samples: FIG7_SAMPLES,
        ..settings.run
    };
    let (packet, t_end) = Packet::for_run(&sc.sys, settings.spec, &cfg)?;
    let traj = packet.run(t_end, cfg.samples)?;
    let a = traj.asymptotics;
    let (entry, exit) = (traj.local.t_entry, traj.local.t_exit);
    // x̄_tr − RWP inside the barrier, at interior times of the passage
    let mut behind = 0;
    let n = 9;
    for i in 1..=n {
        let t = entry + (exit - entry) * i as f64 / (n + 1) as f64;
        let x = packet.moments(Which::Transmitted, t)?.mean;
        if x < a.rwp(&packet, t) {
            behind += 1;
        }
    }
    let last = traj.samples.last().expect("samples");
    Ok(CriterionResult::new(
        "9",
        FIG7_NAME,
        vec![
            Check::new("ocs overlap", traj.final_overlap, Bound::AtMost(crate::packet::OCS_OVERLAP)),
            Check::new("|tau_tr_loc/0.155-1|", rel(traj.local.tau_tr_loc, 0.155), Bound::AtMost(0.2)),
            Check::new("|tau_tr_as/0.01-1|", rel(a.tau_tr_as, 0.01), Bound::AtMost(0.3)),
            Check::new("share of passage behind the RWP", behind as f64 / n as f64, Bound::AtLeast(1.0)),
            Check::new("late lead over the RWP", last.x_tr - last.rwp_x, Bound::AtLeast(0.0)),
        ],
    ))
}

pub fn conservation() -> Result<CriterionResult> {
    let sys = BarrierSystem::natural(1.0, 0.5, 1.0, 40.0)?;
    let spec = PacketSpec::new(5.0, 1.2)?;
    let (packet, t_end) = Packet::for_run(&sys, spec, &RunConfig::default())?;
    let traj = packet.run(t_end, 60)?;
    let a = traj.asymptotics;
    let r0 = traj.samples[0].norm_r;
    let r_drift = traj.samples.iter().map(|s| (s.norm_r - r0).abs()).fold(0.0, f64::max);
    let t_ends = (traj.samples[0].norm_t - traj.samples.last().expect("samples").norm_t).abs();
    let integral = packet.norm_change(0.0, t_end, 1e-9)?.abs();
    Ok(CriterionResult::new(
        "10",
        "packet conservation laws",
        vec![
            Check::new("R(t) drift", r_drift, Bound::AtMost(1e-6)),
            Check::new("T(0) vs T(t_end)", t_ends, Bound::AtMost(1e-5)),
            Check::new("integral of dT/dt", integral, Bound::AtMost(1e-5)),
            Check::new("Re <psi_tr_in|psi_ref_in>", a.interference.re.abs(), Bound::AtMost(1e-10)),
            Check::new("|T_as+R_as-1|", (a.t_as + a.r_as - 1.0).abs(), Bound::AtMost(1e-10)),
        ],
    ))
}

/// Passes when deliberately broken formulas are caught by the checks.
pub fn mutation_sanity() -> Result<CriterionResult> {
    let caught = [
        !derivatives(Tamper::NegatedLambdaPrime)?.passed(),
        !dwell_formulas(Tamper::NegatedGapDwell)?.passed(),
    ];
    let n = caught.iter().filter(|&&c| c).count();
    Ok(CriterionResult::new(
        "M",
        "tampered formulas are detected",
        vec![Check::new("faults caught of 2", n as f64, Bound::AtLeast(2.0))],
    ))
}
