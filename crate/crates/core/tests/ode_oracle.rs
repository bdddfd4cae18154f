use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tunneltime::decomposition::total_wave;
use tunneltime::oracle::solve_stationary;
use tunneltime::scattering::find_resonances;
use tunneltime::{BarrierSystem, Scattering};

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

#[test]
fn single_barrier_transmission_matches_ode() {
    let d = 1.5 * PI;
    let k = 0.5;
    let sc = Scattering::new(&BarrierSystem::natural(0.5, d, 0.0, 5.0).unwrap(), k).unwrap();
    // two touching halves form one barrier of width d
    let halves = BarrierSystem::natural(0.5, d / 2.0, 0.0, 5.0).unwrap();
    let sol = solve_stationary(&halves, k).unwrap();
    assert!((sol.a_out.norm_sqr() / sc.one.t - 1.0).abs() < 1e-8);
}

#[test]
fn generic_point_amplitudes() {
    let s = BarrierSystem::from_opacity(3.0 * PI, 2.0, 5.0).unwrap();
    let sc = Scattering::new(&s, 0.6).unwrap();
    let sol = solve_stationary(&s, 0.6).unwrap();
    assert!(rel(sc.two.a_out, sol.a_out) < 1e-8);
    assert!(rel(sc.two.b_out, sol.b_out) < 1e-8);
}

#[test]
fn random_draws_across_threshold() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let v0 = rng.gen_range(0.2..2.0);
        let d = rng.gen_range(0.3..4.0);
        let l = rng.gen_range(0.0..6.0);
        let s = BarrierSystem::natural(v0, d, l, rng.gen_range(1.0..10.0)).unwrap();
        let k0 = s.kappa0().re;
        let ratio = match i % 3 {
            0 => rng.gen_range(0.05..0.95),
            1 => 1.0 + rng.gen_range(-1e-3..1e-3),
            _ => rng.gen_range(1.05..3.0),
        };
        let k = ratio * k0;
        let sc = Scattering::new(&s, k).unwrap();
        let sol = solve_stationary(&s, k).unwrap();
        worst = worst.max(rel(sc.two.a_out, sol.a_out));
        if sc.two.r_two > 1e-6 {
            worst = worst.max(rel(sc.two.b_out, sol.b_out));
        } else {
            worst = worst.max((sc.two.b_out - sol.b_out).norm());
        }
    }
    assert!(worst < 1e-8, "worst relative error {worst:e}");
}

#[test]
fn total_wave_matches_ode_samples() {
    let s = BarrierSystem::from_opacity(3.0 * PI, 2.0, 5.0).unwrap();
    let k = 0.6;
    let sc = Scattering::new(&s, k).unwrap();
    let psi = total_wave(&s, &sc);
    let sol = solve_stationary(&s, k).unwrap();
    let peak = sol.psi.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for (x, v) in sol.x.iter().zip(&sol.psi) {
        assert!((psi.value(*x) - v).norm() < 1e-7 * peak, "x={x}");
    }
}

#[test]
fn resonance_kills_reflection() {
    let s = BarrierSystem::from_opacity(3.0 * PI, 2.0, 5.0).unwrap();
    for r in find_resonances(&s, 0.0, 3.0).unwrap() {
        let sol = solve_stationary(&s, r.k).unwrap();
        assert!(sol.b_out.norm() < 1e-8, "k={} |b|={}", r.k, sol.b_out.norm());
    }
}
