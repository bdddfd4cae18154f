use std::fs;
use std::process::{Command, Output};

fn tunneltime(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tunneltime")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn lists_the_seven_builtins() {
    let o = tunneltime(&["list-builtins"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let names: Vec<&str> = text.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(names, ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"]);
}

#[test]
fn builtin_run_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for (out, threads) in [(&a, "1"), (&b, "2")] {
        let o = tunneltime(&["run", "fig2", "--out", out.to_str().unwrap(), "--threads", threads]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("times.csv"));
    }
    for name in ["times.csv", "times_tau0.csv", "resonances.csv", "plot.gp", "metadata.txt"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    let plot = fs::read_to_string(a.join("plot.gp")).unwrap();
    assert!(plot.contains("'tau_dep'") && plot.contains("'tau_ref_dwell'"));
}

#[test]
fn scenario_files_run_and_bad_ones_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("gap.toml");
    fs::write(
        &good,
        "name = \"gap\"\nmode = \"times-vs-L\"\n[system]\ntwo_kappa0_d = 5.0\na1 = 2.0\n[sweep]\nfrom = 0.0\nto = 3.0\npoints = 31\nk_over_kappa0 = 0.8\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = tunneltime(&["run", good.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(out.join("times.csv")).unwrap().lines().count(), 32);

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "name = \"bad\"\nmode = \"times-vs-k\"\n[system]\nd = 1.0\na1 = 1.0\n[sweep]\nfrom = 0.5\nto = 0.1\npoints = 5\n").unwrap();
    let o = tunneltime(&["run", bad.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("sweep.to"));

    let o = tunneltime(&["run", "fig9"]);
    assert!(!o.status.success());
}

#[test]
fn fast_verification_reports_every_criterion() {
    let o = tunneltime(&["verify", "--fast"]);
    let text = stdout(&o);
    let ids: Vec<&str> = text
        .lines()
        .filter_map(|l| l.split('[').nth(1).and_then(|r| r.split(']').next()))
        .collect();
    assert_eq!(ids, ["1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "M"]);
    assert!(text.contains("SKIP [2]") && text.contains("SKIP [9]"));
    assert!(text.contains("PASS [M]"));
    let any_failed = text.lines().any(|l| l.starts_with("FAIL"));
    assert_eq!(o.status.success(), !any_failed);
}
