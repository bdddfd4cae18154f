use std::f64::consts::PI;

use proptest::prelude::*;
use tunneltime::decomposition::{decompose, join_point_residual};
use tunneltime::oracle::{integrate_density, numeric_derivative, numeric_phase_derivative};
use tunneltime::scattering::{find_resonances, interference_roots};
use tunneltime::times::{single_barrier_times, TimeScales};
use tunneltime::wave::Side;
use tunneltime::{BarrierSystem, OneBarrierParams, Scattering};

fn generic() -> BarrierSystem {
    BarrierSystem::from_opacity(3.0 * PI, 2.0, 5.0).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Every dwell part against quadrature of the matching density.
fn dwell_errors(s: &BarrierSystem, k: f64) -> Vec<(&'static str, f64)> {
    let sc = Scattering::new(s, k).unwrap();
    let t = TimeScales::from_scattering(s, &sc);
    let pair = decompose(s, &sc);
    let mhk = s.mass() / (s.hbar() * k);
    let q = |w: &tunneltime::wave::PiecewiseWave, a: f64, b: f64| integrate_density(w, a, b).unwrap();
    let (t2, r2) = (sc.two.t_two, sc.two.r_two);
    let mut out = vec![
        ("tr_1", rel(t.tau_tr.first, mhk / t2 * q(&pair.transmitted, s.a1(), s.b1()))),
        ("tr_2", rel(t.tau_tr.second, mhk / t2 * q(&pair.transmitted, s.a2(), s.b2()))),
        ("tot_1", rel(t.tau_tot.first, mhk * q(&pair.total, s.a1(), s.b1()))),
        ("tot_2", rel(t.tau_tot.second, mhk * q(&pair.total, s.a2(), s.b2()))),
        ("ref_1", rel(t.tau_ref.first, mhk / r2 * q(&pair.reflected, s.a1(), s.b1()))),
    ];
    if s.gap() > 0.0 {
        out.push(("tr_gap", rel(t.tau_tr.gap, mhk / t2 * q(&pair.transmitted, s.b1(), s.a2()))));
        out.push(("tot_gap", rel(t.tau_tot.gap, mhk * q(&pair.total, s.b1(), s.a2()))));
        out.push(("ref_gap", rel(t.tau_ref.gap, mhk / r2 * q(&pair.reflected, s.b1(), s.midpoint()))));
    }
    out
}

#[test]
fn dwell_parts_match_quadrature() {
    for (s, ks) in [
        (generic(), vec![0.6, 0.25, 0.9, 1.0, 1.3, 2.2]),
        (BarrierSystem::from_opacity(3.0 * PI, 0.0, 5.0).unwrap(), vec![0.3, 0.8, 1.7]),
        (BarrierSystem::from_opacity(8.0, 5.0, 2.0).unwrap(), vec![0.4, 0.97, 1.5]),
    ] {
        for k in ks {
            for (name, e) in dwell_errors(&s, k) {
                assert!(e < 1e-8, "L={} k={k} {name}: {e:e}", s.gap());
            }
        }
    }
}

#[test]
fn transmission_dwell_splits_in_half() {
    let s = generic();
    for k in [0.35, 0.6, 1.4] {
        let sc = Scattering::new(&s, k).unwrap();
        let pair = decompose(&s, &sc);
        let left = integrate_density(&pair.transmitted, s.a1(), s.midpoint()).unwrap();
        let right = integrate_density(&pair.transmitted, s.midpoint(), s.b2()).unwrap();
        assert!(rel(left, right) < 1e-9, "k={k}");
        let t = TimeScales::from_scattering(&s, &sc);
        assert!(rel(t.tau_tr_left(), 0.5 * t.tau_tr_dwell()) < 1e-14);
    }
}

fn derivative_errors(s: &BarrierSystem, k: f64) -> [f64; 4] {
    let h = 1e-3;
    let one = |k: f64| Scattering::new(s, k).unwrap();
    let sc = one(k);
    let dt = numeric_derivative(|k| one(k).one.t, k, h).unwrap();
    let dj = numeric_phase_derivative(|k| one(k).one.j, k, h, 2.0 * PI).unwrap();
    let djt = numeric_phase_derivative(|k| one(k).two.j_two, k, h, 2.0 * PI).unwrap();
    let dl = numeric_phase_derivative(|k| one(k).two.lambda, k, h, PI).unwrap();
    [
        rel(sc.one.t_prime, dt.value),
        rel(sc.one.j_prime, dj.value),
        rel(sc.two.j_two_prime, djt.value),
        rel(sc.two.lambda_prime, dl.value),
    ]
}

#[test]
fn analytic_derivatives_match_finite_differences() {
    for s in [generic(), BarrierSystem::from_opacity(5.0, 0.0, 2.0).unwrap()] {
        let roots = find_resonances(&s, 0.0, 3.0).unwrap();
        for i in 1..60 {
            let k = 0.05 * i as f64;
            if roots.iter().any(|r| (r.k - k).abs() < 0.01) {
                continue;
            }
            let e = derivative_errors(&s, k);
            assert!(e.iter().all(|&v| v < 1e-6), "L={} k={k}: {e:?}", s.gap());
        }
    }
}

#[test]
fn decomposition_properties() {
    let s = generic();
    for k in [0.3, 0.61, 1.0, 1.9] {
        let sc = Scattering::new(&s, k).unwrap();
        let pair = decompose(&s, &sc);
        let xc = s.midpoint();
        assert!((pair.a_tr_in + pair.a_ref_in - 1.0).norm() < 1e-14);
        assert!((pair.a_tr_in.norm_sqr() + pair.a_ref_in.norm_sqr() - 1.0).abs() < 1e-12);
        let incident = s.velocity(k);
        let flux = incident * sc.two.t_two;
        let left = pair.transmitted.flux_side(xc, Side::Left);
        let right = pair.transmitted.flux_side(xc, Side::Right);
        assert!(rel(left, right) < 1e-11);
        for i in 0..100 {
            let x = s.a1() - 3.0 + (s.width() + 6.0) * i as f64 / 99.0;
            assert!(pair.reflected.flux(x).abs() < 1e-10 * incident);
            assert!(rel(pair.transmitted.flux(x), flux) < 1e-10, "x={x}");
            let sum = pair.transmitted.value(x) + pair.reflected.value(x);
            assert!((sum - pair.total.value(x)).norm() < 1e-12 * 10.0);
            if x >= xc {
                assert_eq!(pair.reflected.value(x).norm(), 0.0);
            }
        }
        let jump = pair.transmitted.eval_side(xc, Side::Right).1 - pair.transmitted.eval_side(xc, Side::Left).1;
        let expect = pair.reflected.eval_side(xc, Side::Left).1;
        assert!((jump - expect).norm() < 1e-10 * expect.norm().max(1.0));
    }
    let ks: Vec<f64> = (1..200).map(|i| 0.015 * i as f64).collect();
    assert!(join_point_residual(&s, &ks).unwrap() < 1e-12);
}

#[test]
fn resonance_identities() {
    let s = generic();
    let roots = find_resonances(&s, 0.0, 3.0).unwrap();
    assert!(!roots.is_empty());
    for r in roots {
        let sc = Scattering::new(&s, r.k).unwrap();
        let pair = decompose(&s, &sc);
        let t = TimeScales::from_scattering(&s, &sc);
        assert!((sc.two.t_two - 1.0).abs() < 1e-10);
        assert!(pair.a_ref_in.norm() < 1e-10);
        assert!(rel(t.tau_dwell(), t.tau_tr_dwell()) < 1e-9);
        let x = s.a1() - 2.0;
        assert!((pair.total.value(x).norm() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn single_barrier_closed_forms_match_general_route() {
    let s = BarrierSystem::from_opacity(3.0 * PI, 0.0, 5.0).unwrap();
    let mut worst: f64 = 0.0;
    for i in 1..=1000 {
        let k = 3.0 * i as f64 / 1000.0;
        let t = TimeScales::new(&s, k).unwrap();
        let (tau_as, x_start) = single_barrier_times(&s, k).unwrap();
        worst = worst.max(rel(tau_as, t.tau_as));
        worst = worst.max((x_start - t.x_start).abs() / t.x_start.abs().max(s.d() * 1e-3));
    }
    assert!(worst < 1e-10, "{worst:e}");
}

#[test]
fn threshold_is_seamless() {
    let s = generic();
    let below = Scattering::new(&s, 1.0 - 1e-6).unwrap();
    let above = Scattering::new(&s, 1.0 + 1e-6).unwrap();
    assert!(rel(below.one.t, above.one.t) < 1e-4);
    assert!(rel(below.one.j, above.one.j) < 1e-4);
    let (a, _) = single_barrier_times(&s, 1.0 - 1e-6).unwrap();
    let (b, _) = single_barrier_times(&s, 1.0 + 1e-6).unwrap();
    assert!(rel(a, b) < 1e-4);
}

#[test]
fn resonances_agree_with_dense_scan() {
    let s = generic();
    let roots = interference_roots(&s, 3.0).unwrap();
    let n = 200_000;
    let mut changes = 0;
    let cos_chi = |k: f64| Scattering::new(&s, k).unwrap().two.chi.cos();
    let mut prev = cos_chi(3.0 / n as f64);
    for i in 2..=n {
        let v = cos_chi(3.0 * i as f64 / n as f64);
        if v.signum() != prev.signum() {
            changes += 1;
        }
        prev = v;
    }
    assert_eq!(changes, roots.len());

    let zero_gap = BarrierSystem::from_opacity(3.0 * PI, 0.0, 5.0).unwrap();
    let below: Vec<_> = find_resonances(&zero_gap, 0.0, 1.0).unwrap();
    assert!(below.is_empty());
}

#[test]
fn f_two_jumps_only_at_resonances() {
    let s = generic();
    let roots = find_resonances(&s, 0.0, 3.0).unwrap();
    let mut prev = Scattering::new(&s, 0.001).unwrap().two.f_two;
    let n = 30_000;
    for i in 2..=n {
        let k = 3.0 * i as f64 / n as f64;
        let f = Scattering::new(&s, k).unwrap().two.f_two;
        if f != prev {
            let kp = 3.0 * (i - 1) as f64 / n as f64;
            let single = Scattering::new(&s, kp).unwrap().one.f != Scattering::new(&s, k).unwrap().one.f;
            assert!(
                single || roots.iter().any(|r| r.k > kp && r.k <= k),
                "jump in ({kp}, {k}] without a resonance"
            );
        }
        prev = f;
    }
}

#[test]
fn opaque_limit_departure_time_vanishes() {
    let s = BarrierSystem::from_opacity(40.0, 1.0, 5.0).unwrap();
    let k = 1.0 / 2f64.sqrt();
    let t = TimeScales::new(&s, k).unwrap();
    assert!(t.tau_dep.abs() < 1e-4 * t.tau_ph);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitarity_holds(v0 in 0.05f64..3.0, d in 0.1f64..6.0, l in 0.0f64..8.0, ratio in 0.001f64..3.0) {
        let s = BarrierSystem::natural(v0, d, l, 3.0).unwrap();
        let k = ratio * s.kappa0().re;
        let sc = Scattering::new(&s, k).unwrap();
        prop_assert!((sc.one.t + sc.one.r - 1.0).abs() < 1e-14);
        prop_assert!((sc.two.t_two + sc.two.r_two - 1.0).abs() < 1e-14);
        let pair = decompose(&s, &sc);
        prop_assert!((pair.a_tr_in + pair.a_ref_in - 1.0).norm() < 1e-12);
        prop_assert!((pair.a_tr_in.norm_sqr() + pair.a_ref_in.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mirror_symmetry_of_transmitted_wave(ratio in 0.05f64..2.5, shift in 0.0f64..1.0) {
        let s = generic();
        let k = ratio * s.kappa0().re;
        let sc = Scattering::new(&s, k).unwrap();
        let pair = decompose(&s, &sc);
        let off = shift * (s.width() / 2.0 + 3.0);
        let a = pair.transmitted.value(s.midpoint() - off).norm();
        let b = pair.transmitted.value(s.midpoint() + off).norm();
        prop_assert!((a - b).abs() <= 1e-10 * a.max(b).max(1e-12));
    }

    #[test]
    fn single_barrier_sign_conventions(ratio in 0.01f64..0.999, d in 0.1f64..10.0) {
        let s = BarrierSystem::natural(0.5, d, 0.0, 1.0).unwrap();
        let kin = s.kinematics(ratio).unwrap();
        let one = OneBarrierParams::new(&s, &kin);
        prop_assert_eq!(one.eta, 1.0);
        prop_assert!(one.t > 0.0 && one.t <= 1.0);
    }
}

#[test]
fn analytic_density_integrals_match_quadrature() {
    for (s, k) in [(generic(), 0.6), (generic(), 1.7), (generic(), 1.0), (BarrierSystem::from_opacity(0.5, 1.0, 2.0).unwrap(), 0.3)] {
        let sc = Scattering::new(&s, k).unwrap();
        let pair = decompose(&s, &sc);
        for wave in [&pair.total, &pair.transmitted, &pair.reflected] {
            for (a, b) in [(s.a1(), s.b1()), (s.b1(), s.a2()), (s.a2(), s.b2()), (s.a1() - 3.0, s.b2() + 2.0)] {
                let exact = wave.density_integral(a, b);
                let quad = integrate_density(wave, a, b).unwrap();
                assert!(rel(exact, quad) < 1e-9, "k={k} [{a},{b}]: {exact} vs {quad}");
            }
        }
    }
}

#[test]
fn opaque_dwell_time_saturates() {
    let k = 1.0 / 2f64.sqrt();
    let at = |kd: f64| {
        let s = BarrierSystem::natural(0.5, kd / 0.5f64.sqrt(), 0.0, 1.0).unwrap();
        TimeScales::new(&s, k).unwrap().tau_dwell()
    };
    let moderate = at(12.0);
    for kd in [20.0, 30.0, 60.0] {
        let v = at(kd);
        assert!(rel(v, moderate) < 1e-8, "kd={kd}: {v} vs {moderate}");
    }
}
