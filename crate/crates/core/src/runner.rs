//! Executes a [`Scenario`] and writes its data files, a key-value metadata
//! file and a gnuplot script into an output directory.
//!
//! Output is a pure function of the scenario: rows are computed in parallel
//! but written in sweep order with fixed formatting, and the metadata holds
//! no timestamps.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::packet::{self, Packet, Trajectory};
use crate::scattering::{find_resonances, Resonance, ResonanceKind, Scattering};
use crate::scenario::{Mode, Scenario};
use crate::times::{times_profile, times_vs_gap, TimeScales};

/// Time columns of the sweep tables, also the names a scenario may plot.
pub const TIME_COLUMNS: [&str; 9] = [
    "tau_tr_dwell",
    "tau_tr_1",
    "tau_tr_gap",
    "tau_ref_dwell",
    "tau_dwell",
    "tau_ph",
    "tau_as",
    "tau_dep",
    "tau_free",
];

const TIMES_HEADER: &str = "k,k/kappa0,T_two,R_two,tau_tr_dwell,tau_tr_1,tau_tr_gap,tau_ref_dwell,tau_dwell,tau_ph,tau_as,tau_dep,x_start,tau_free,resonance_flag,L,flags";

/// Per-row markers; several are joined with ';'.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Flags(Vec<&'static str>);

impl Flags {
    pub fn push(&mut self, flag: &'static str) {
        if !self.0.contains(&flag) {
            self.0.push(flag);
        }
    }

    pub fn is_ok(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for Flags {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            f.write_str("ok")
        } else {
            f.write_str(&self.0.join(";"))
        }
    }
}

/// One row of a times-vs-k or times-vs-L sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct TimesRow {
    pub gap: f64,
    pub times: TimeScales,
    /// Index of the resonance closest to this row, 0 when none is.
    pub resonance: usize,
    pub flags: Flags,
}

impl TimesRow {
    /// Value of a [`TIME_COLUMNS`] entry.
    pub fn time(&self, column: &str) -> f64 {
        let t = &self.times;
        match column {
            "tau_tr_dwell" => t.tau_tr_dwell(),
            "tau_tr_1" => t.tau_tr.first,
            "tau_tr_gap" => t.tau_tr.gap,
            "tau_ref_dwell" => t.tau_ref_dwell(),
            "tau_dwell" => t.tau_dwell(),
            "tau_ph" => t.tau_ph,
            "tau_as" => t.tau_as,
            "tau_dep" => t.tau_dep,
            "tau_free" => t.tau_free,
            other => panic!("unknown time column {other}"),
        }
    }
}

/// A point of full transmission inside the sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepResonance {
    pub index: usize,
    pub k: f64,
    pub gap: f64,
    pub kind: ResonanceKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimesTable {
    pub rows: Vec<TimesRow>,
    pub resonances: Vec<SweepResonance>,
}

/// Everything a run produced.
#[derive(Debug, Clone)]
pub enum Output {
    Times(TimesTable),
    Packet(Box<(Packet, Trajectory)>),
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub output: Output,
    pub files: Vec<PathBuf>,
    /// Rows whose flags are not `ok`.
    pub flagged_rows: usize,
}

/// Computes the sweep of a times-vs-k or times-vs-L scenario.
pub fn times_table(sc: &Scenario) -> Result<TimesTable> {
    let sweep = sc.sweep.as_ref().expect("sweep scenario");
    let values = sweep.values();
    let kappa0 = sc.kappa0();
    let sys = &sc.sys;
    let (rows, resonances) = match sc.mode {
        Mode::TimesVsK => {
            let ks: Vec<f64> = values.iter().map(|v| v * kappa0).collect();
            let times = times_profile(sys, &ks)?;
            let res: Vec<SweepResonance> = find_resonances(sys, ks[0], ks[ks.len() - 1])?
                .into_iter()
                .map(|r: Resonance| SweepResonance {
                    index: r.index,
                    k: r.k,
                    gap: sys.gap(),
                    kind: r.kind,
                })
                .collect();
            (assemble(times, vec![sys.gap(); ks.len()], &ks, &res, |r| r.k), res)
        }
        _ => {
            let k = sweep.k_over_kappa0.expect("fixed k") * kappa0;
            let gaps: Vec<f64> = values.iter().map(|v| v * sys.d()).collect();
            let times = times_vs_gap(sys, k, &gaps)?;
            let res = gap_resonances(sc, k, gaps[0], gaps[gaps.len() - 1])?;
            (assemble(times, gaps.clone(), &gaps, &res, |r| r.gap), res)
        }
    };
    Ok(TimesTable { rows, resonances })
}

fn assemble(
    times: Vec<TimeScales>,
    gaps: Vec<f64>,
    axis: &[f64],
    res: &[SweepResonance],
    at: impl Fn(&SweepResonance) -> f64,
) -> Vec<TimesRow> {
    let mut rows: Vec<TimesRow> = times
        .into_iter()
        .zip(gaps)
        .map(|(times, gap)| {
            let mut flags = Flags::default();
            if times.near_resonance {
                flags.push("near-resonance");
            }
            let values = [
                times.t_two,
                times.tau_tr_dwell(),
                times.tau_ref_dwell(),
                times.tau_dwell(),
                times.tau_as,
                times.x_start,
            ];
            if values.iter().any(|v| !v.is_finite()) {
                flags.push("quadrature-warn");
            }
            TimesRow {
                gap,
                times,
                resonance: 0,
                flags,
            }
        })
        .collect();
    for r in res {
        let x = at(r);
        let nearest = axis
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
            .map(|(i, _)| i)
            .expect("non-empty sweep");
        rows[nearest].resonance = r.index;
    }
    rows
}

/// Gap widths in [lo, hi] with cos(J + kL) = 0 at fixed k, numbered from
/// L = 0 upwards.
pub fn gap_resonances(sc: &Scenario, k: f64, lo: f64, hi: f64) -> Result<Vec<SweepResonance>> {
    let one = Scattering::new(&sc.sys, k)?.one;
    let pi = std::f64::consts::PI;
    let mut out = Vec::new();
    // L_m = ((m + 1/2)π − J)/k, first m with L_m ≥ 0
    let mut m = ((one.j / pi) - 0.5).ceil();
    let mut index = 0;
    loop {
        let gap = ((m + 0.5) * pi - one.j) / k;
        m += 1.0;
        if gap < 0.0 {
            continue;
        }
        index += 1;
        if gap > hi {
            break;
        }
        if gap >= lo {
            out.push(SweepResonance {
                index,
                k,
                gap,
                kind: ResonanceKind::Interference,
            });
        }
    }
    Ok(out)
}

/// Runs the scenario and writes its files into `out`.
pub fn run(sc: &Scenario, out: &Path) -> Result<RunReport> {
    fs::create_dir_all(out)?;
    let mut files = Vec::new();
    let mut meta = metadata(sc);
    let (output, flagged_rows) = match sc.mode {
        Mode::TimesVsK | Mode::TimesVsL => {
            let table = times_table(sc)?;
            let tau0 = sc.sys.tau0();
            let kappa0 = sc.kappa0();
            files.push(write_file(out, "times.csv", |w| write_times(w, &table, kappa0, 1.0))?);
            files.push(write_file(out, "times_tau0.csv", |w| write_times(w, &table, kappa0, tau0))?);
            files.push(write_file(out, "resonances.csv", |w| write_resonances(w, sc, &table))?);
            files.push(write_file(out, "plot.gp", |w| w.write_all(times_plot(sc).as_bytes()))?);
            let flagged = table.rows.iter().filter(|r| !r.flags.is_ok()).count();
            kv(&mut meta, "rows", table.rows.len());
            kv(&mut meta, "flagged_rows", flagged);
            kv(&mut meta, "resonances_in_range", table.resonances.len());
            (Output::Times(table), flagged)
        }
        Mode::Wavepacket => {
            let settings = sc.packet.as_ref().expect("packet scenario");
            let (packet, t_end) = Packet::for_run(&sc.sys, settings.spec, &settings.run)?;
            let traj = packet.run(t_end, settings.run.samples)?;
            let flags = trajectory_flags(&traj);
            let stationary = TimeScales::new(&sc.sys, settings.spec.kbar)?;
            files.push(write_file(out, "trajectory.csv", |w| traj.write_csv(w, &flags.to_string()))?);
            files.push(write_file(out, "summary.csv", |w| write_summary(w, &packet, &traj, &stationary, &flags))?);
            files.push(write_file(out, "plot.gp", |w| w.write_all(packet_plot(sc, &packet).as_bytes()))?);
            packet_metadata(&mut meta, &packet, &traj, t_end);
            let flagged = if flags.is_ok() { 0 } else { traj.samples.len() };
            (Output::Packet(Box::new((packet, traj))), flagged)
        }
    };
    files.push(write_file(out, "metadata.txt", |w| w.write_all(meta.as_bytes()))?);
    Ok(RunReport {
        output,
        files,
        flagged_rows,
    })
}

fn write_file(dir: &Path, name: &str, body: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>) -> Result<PathBuf> {
    let path = dir.join(name);
    let mut w = BufWriter::new(fs::File::create(&path)?);
    body(&mut w)?;
    w.flush()?;
    Ok(path)
}

fn write_times(w: &mut impl Write, table: &TimesTable, kappa0: f64, unit: f64) -> std::io::Result<()> {
    writeln!(w, "{TIMES_HEADER}")?;
    for r in &table.rows {
        let t = &r.times;
        write!(w, "{:.12e},{:.12e},{:.15e},{:.15e}", t.k, t.k / kappa0, t.t_two, t.r_two)?;
        for col in &TIME_COLUMNS[..8] {
            write!(w, ",{:.12e}", r.time(col) / unit)?;
        }
        writeln!(
            w,
            ",{:.12e},{:.12e},{},{:.12e},{}",
            t.x_start,
            t.tau_free / unit,
            r.resonance,
            r.gap,
            r.flags
        )?;
    }
    Ok(())
}

fn write_resonances(w: &mut impl Write, sc: &Scenario, table: &TimesTable) -> std::io::Result<()> {
    writeln!(w, "index,k,k/kappa0,L,kind,parity")?;
    let kappa0 = sc.kappa0();
    for r in &table.resonances {
        let kind = match r.kind {
            ResonanceKind::Interference => "interference",
            ResonanceKind::Transparent => "transparent",
        };
        let parity = if r.index % 2 == 0 { "even" } else { "odd" };
        writeln!(w, "{},{:.15e},{:.15e},{:.15e},{kind},{parity}", r.index, r.k, r.k / kappa0, r.gap)?;
    }
    Ok(())
}

fn trajectory_flags(traj: &Trajectory) -> Flags {
    let mut flags = Flags::default();
    if !traj.ocs_valid {
        flags.push("ocs-invalid");
    }
    let local = [traj.local.tau_tr_loc, traj.local.tau_ref_loc];
    if !traj.warnings.is_empty() || local.iter().any(|v| !v.is_finite()) {
        flags.push("quadrature-warn");
    }
    flags
}

fn write_summary(
    w: &mut impl Write,
    packet: &Packet,
    traj: &Trajectory,
    stationary: &TimeScales,
    flags: &Flags,
) -> std::io::Result<()> {
    let a = &traj.asymptotics;
    writeln!(
        w,
        "tau_tr_loc,tau_ref_loc,tau_tr_as,tau_ref_as,T_as,R_as,t_dep,ocs_valid,tau_free,tau_as_stationary,t_entry,t_exit,final_overlap,panels,flags"
    )?;
    writeln!(
        w,
        "{:.10e},{:.10e},{:.10e},{:.10e},{:.12e},{:.12e},{:.10e},{},{:.10e},{:.10e},{:.10e},{:.10e},{:.6e},{},{}",
        traj.local.tau_tr_loc,
        traj.local.tau_ref_loc,
        a.tau_tr_as,
        a.tau_ref_as,
        a.t_as,
        a.r_as,
        a.t_dep,
        traj.ocs_valid,
        packet.free_time(),
        stationary.tau_as,
        traj.local.t_entry,
        traj.local.t_exit,
        traj.final_overlap,
        traj.panels,
        flags
    )
}

fn kv(meta: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(meta, "{key} = {value}");
}

fn metadata(sc: &Scenario) -> String {
    let mut m = String::new();
    let s = &sc.sys;
    kv(&mut m, "name", &sc.name);
    kv(&mut m, "mode", sc.mode.name());
    kv(&mut m, "code_version", env!("CARGO_PKG_VERSION"));
    kv(&mut m, "units", sc.units.preset.name());
    kv(&mut m, "length_unit", sc.units.length_unit());
    kv(&mut m, "energy_unit", sc.units.energy_unit());
    kv(&mut m, "time_unit", sc.units.time_unit());
    kv(&mut m, "mass", format!("{:.15e}", s.mass()));
    kv(&mut m, "hbar", format!("{:.15e}", s.hbar()));
    for (key, value) in &sc.resolution {
        kv(&mut m, &format!("resolved.{key}"), value);
    }
    for (key, value) in [
        ("V0", s.v0()),
        ("d", s.d()),
        ("L", s.gap()),
        ("a1", s.a1()),
        ("b1", s.b1()),
        ("a2", s.a2()),
        ("b2", s.b2()),
        ("D", s.width()),
        ("x_c", s.midpoint()),
        ("kappa0", sc.kappa0()),
        ("tau0", s.tau0()),
    ] {
        kv(&mut m, key, format!("{value:.15e}"));
    }
    if let Some(sw) = &sc.sweep {
        let var = if sc.mode == Mode::TimesVsK { "k/kappa0" } else { "L/d" };
        kv(&mut m, "sweep.variable", var);
        kv(&mut m, "sweep.from", sw.from);
        kv(&mut m, "sweep.to", sw.to);
        kv(&mut m, "sweep.points", sw.points);
        if let Some(k) = sw.k_over_kappa0 {
            kv(&mut m, "sweep.k/kappa0", k);
        }
    }
    m
}

fn packet_metadata(m: &mut String, p: &Packet, traj: &Trajectory, t_end: f64) {
    let (k_lo, k_hi) = p.spec.k_range();
    kv(m, "packet.l0", p.spec.l0);
    kv(m, "packet.kbar", format!("{:.15e}", p.spec.kbar));
    kv(m, "packet.t_end", format!("{t_end:.10e}"));
    kv(m, "packet.samples", traj.samples.len());
    kv(m, "quadrature.k_range", format!("{k_lo:.10e} .. {k_hi:.10e}"));
    kv(m, "quadrature.gauss_legendre_order", packet::ORDER);
    kv(m, "quadrature.panels", p.panels);
    kv(m, "quadrature.nodes", p.nodes.len());
    kv(m, "quadrature.convergence", packet::CONVERGENCE);
    kv(m, "quadrature.containment", packet::CONTAINMENT);
    kv(m, "quadrature.raw_spectral_mass", format!("{:.15e}", p.raw_mass));
    kv(m, "quadrature.negative_k_mass", format!("{:.3e}", p.spec.negative_tail_mass()));
    kv(m, "ocs.final_overlap", format!("{:.6e}", traj.final_overlap));
    kv(m, "ocs.valid", traj.ocs_valid);
    for (i, w) in traj.warnings.iter().enumerate() {
        kv(m, &format!("warning.{}", i + 1), w);
    }
}

fn times_plot(sc: &Scenario) -> String {
    let (x, label) = match sc.mode {
        Mode::TimesVsK => ("k/kappa0", "k / kappa0"),
        _ => ("L", "L"),
    };
    let columns: Vec<&str> = if sc.plot.is_empty() {
        vec!["tau_tr_dwell", "tau_dwell", "tau_ph", "tau_as", "tau_free"]
    } else {
        sc.plot.iter().map(String::as_str).collect()
    };
    let mut g = String::new();
    let _ = writeln!(g, "# gnuplot script for scenario {}", sc.name);
    let _ = writeln!(g, "set datafile separator ','");
    let _ = writeln!(g, "set terminal pngcairo size 900,600");
    let _ = writeln!(g, "set output '{}.png'", sc.name);
    let _ = writeln!(g, "set xlabel '{label}'");
    let _ = writeln!(g, "set ylabel 'time / tau0'");
    let _ = writeln!(g, "set key top right");
    let plots: Vec<String> = columns
        .iter()
        .map(|c| {
            let style = match *c {
                "tau_tr_dwell" => "lines lw 3",
                "tau_ph" | "tau_as" => "lines dt 3",
                "tau_dep" => "lines dt 4",
                "tau_free" => "lines dt 2",
                _ => "lines",
            };
            format!("'times_tau0.csv' using '{x}':'{c}' with {style} title '{c}'")
        })
        .collect();
    let _ = writeln!(g, "plot {}", plots.join(", \\\n     "));
    g
}

fn packet_plot(sc: &Scenario, p: &Packet) -> String {
    let unit = sc.units.time_unit();
    let len = sc.units.length_unit();
    let mut g = String::new();
    let _ = writeln!(g, "# gnuplot script for scenario {}", sc.name);
    let _ = writeln!(g, "set datafile separator ','");
    let _ = writeln!(g, "set terminal pngcairo size 900,600");
    let _ = writeln!(g, "set output '{}.png'", sc.name);
    let _ = writeln!(g, "set xlabel 't [{unit}]'");
    let _ = writeln!(g, "set ylabel 'x [{len}]'");
    let _ = writeln!(g, "set key top left");
    let _ = writeln!(g, "a1 = {:.10e}", p.sys.a1());
    let _ = writeln!(g, "b2 = {:.10e}", p.sys.b2());
    let _ = writeln!(
        g,
        "plot 'trajectory.csv' using 't':'x_tr' with points pt 6 title 'transmitted CM', \\\n     'trajectory.csv' using 't':'rwp_x' with lines dt 2 title 'RWP', \\\n     a1 with lines lc 'gray' notitle, b2 with lines lc 'gray' notitle"
    );
    g
}
