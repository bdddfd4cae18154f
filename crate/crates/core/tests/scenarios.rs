use std::fs;

use tunneltime::runner::{self, times_table, Output};
use tunneltime::scenario::{Mode, Scenario, BUILTINS};
use tunneltime::Error;

#[test]
fn every_builtin_resolves() {
    for (name, _) in BUILTINS {
        let sc = Scenario::builtin(name).unwrap();
        assert_eq!(sc.name, name);
        let expect = match name {
            "fig1" | "fig2" => Mode::TimesVsK,
            "fig7" => Mode::Wavepacket,
            _ => Mode::TimesVsL,
        };
        assert_eq!(sc.mode, expect, "{name}");
    }
    let fig5 = Scenario::builtin("fig5").unwrap();
    assert!((fig5.sys.d() * 2.0 * fig5.kappa0() - 3.0 * std::f64::consts::PI).abs() < 1e-12);
    assert_eq!(fig5.sweep.unwrap().k_over_kappa0, Some(0.97));
}

#[test]
fn low_energy_phase_time_diverges_while_dwell_time_vanishes() {
    let table = times_table(&Scenario::builtin("fig1").unwrap()).unwrap();
    let (first, later) = (&table.rows[0].times, &table.rows[40].times);
    assert!(first.k < later.k);
    assert!(first.tau_ph > 2.0 * later.tau_ph);
    assert!(first.tau_dwell() < 0.5 * later.tau_dwell());
    assert!(first.tau_ph > 100.0 * first.tau_dwell());
}

#[test]
fn transmission_dwell_time_grows_with_the_gap() {
    let table = times_table(&Scenario::builtin("fig5").unwrap()).unwrap();
    for w in table.rows.windows(2) {
        assert!(w[1].times.tau_tr_dwell() > w[0].times.tau_tr_dwell(), "L={}", w[1].gap);
    }
    // the asymptotic time does not build up with L the way the dwell time
    // does: its floor in every resonance cell stays within 20% (the barrier
    // is far from opaque at this energy) while the dwell time grows 6-fold
    let res = &table.resonances;
    assert!(res.len() >= 4);
    let floors: Vec<f64> = res
        .windows(2)
        .map(|pair| {
            table
                .rows
                .iter()
                .filter(|r| r.gap > pair[0].gap && r.gap < pair[1].gap)
                .map(|r| r.times.tau_as)
                .fold(f64::MAX, f64::min)
        })
        .collect();
    let (lo, hi) = floors.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(hi / lo - 1.0 < 0.2, "{floors:?}");
    let (first, last) = (&table.rows[0].times, &table.rows[table.rows.len() - 1].times);
    assert!(last.tau_tr_dwell() > 5.0 * first.tau_tr_dwell());
}

#[test]
fn resonance_rows_are_marked() {
    let table = times_table(&Scenario::builtin("fig1").unwrap()).unwrap();
    let marked: Vec<usize> = table.rows.iter().map(|r| r.resonance).filter(|&i| i > 0).collect();
    let expect: Vec<usize> = table.resonances.iter().map(|r| r.index).collect();
    assert_eq!(marked, expect);
}

#[test]
fn runs_are_deterministic() {
    let sc = Scenario::builtin("fig3").unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = runner::run(&sc, a.path()).unwrap();
    runner::run(&sc, b.path()).unwrap();
    assert_eq!(first.files.len(), 5);
    for f in &first.files {
        let name = f.file_name().unwrap();
        assert_eq!(fs::read(f).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name:?}");
    }
    let csv = fs::read_to_string(a.path().join("times.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.last(), Some(&"flags"));
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), header.len());
        let flags = cells.last().unwrap();
        assert!(flags.split(';').all(|f| ["ok", "near-resonance", "quadrature-warn"].contains(&f)), "{flags}");
        assert!(cells.iter().all(|c| *c != "NaN") || *flags != "ok");
    }
    let meta = fs::read_to_string(a.path().join("metadata.txt")).unwrap();
    for key in ["code_version", "mass", "sweep.k/kappa0", "resolved.d", "tau0"] {
        assert!(meta.lines().any(|l| l.starts_with(&format!("{key} = "))), "{key}");
    }
}

#[test]
fn small_packet_scenario_writes_trajectory_and_summary() {
    let text = r#"
name = "small"
mode = "wavepacket"

[system]
V0 = 1.0
d = 0.5
L = 1.0
a1 = 40.0

[packet]
l0 = 5.0
kbar = 1.2
samples = 30
"#;
    let sc = Scenario::from_toml(text).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let report = runner::run(&sc, dir.path()).unwrap();
    let Output::Packet(run) = &report.output else {
        panic!("packet output expected")
    };
    let traj = &run.1;
    assert!(traj.ocs_valid);
    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert_eq!(csv.lines().count(), 32);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",ok")));
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let rows: Vec<Vec<&str>> = summary.lines().map(|l| l.split(',').collect()).collect();
    let col = |name: &str| rows[1][rows[0].iter().position(|h| *h == name).unwrap()];
    assert_eq!(col("ocs_valid"), "true");
    let tau: f64 = col("tau_tr_loc").parse().unwrap();
    assert!((tau - traj.local.tau_tr_loc).abs() < 1e-9 * tau);
}

#[test]
fn invalid_scenarios_name_the_field() {
    let head = "name = \"x\"\nmode = \"times-vs-L\"\n";
    let base = format!("{head}[system]\ntwo_kappa0_d = 3.0\na1 = 1.0\n");
    let cases = [
        (format!("{base}[sweep]\nfrom = 0.0\nto = 2.0\npoints = 10\n"), "sweep.k_over_kappa0"),
        (format!("{base}[sweep]\nfrom = 0.0\nto = 2.0\npoints = 1\nk_over_kappa0 = 0.5\n"), "sweep.points"),
        (format!("{base}[sweep]\nfrom = 2.0\nto = 1.0\npoints = 5\nk_over_kappa0 = 0.5\n"), "sweep.to"),
        (format!("{head}plot = [\"tau_x\"]\n[system]\ntwo_kappa0_d = 3.0\na1 = 1.0\n[sweep]\nfrom = 0.0\nto = 2.0\npoints = 5\nk_over_kappa0 = 0.5\n"), "plot"),
        (format!("{base}[sweep]\nfrom = 0.0\nto = 2.0\npoints = 5\nk_over_kappa0 = 0.5\nstep = 1\n"), "bytes"),
        ("name = \"x\"\nmode = \"times-vs-k\"\n[system]\nd = -1.0\na1 = 1.0\n[sweep]\nfrom = 0.1\nto = 2.0\npoints = 5\n".into(), "system.d"),
    ];
    for (text, field) in cases {
        match Scenario::from_toml(&text) {
            Err(Error::Config { field: f, .. }) => assert!(f.starts_with(field), "expected {field}, got {f}"),
            other => panic!("expected a config error for {field}, got {other:?}"),
        }
    }
    assert!(matches!(Scenario::load("no-such-scenario"), Err(Error::Config { .. })));
}
