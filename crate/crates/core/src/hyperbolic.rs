//! Even entire functions of κ used throughout the closed forms.
//!
//! Inside a barrier the solutions are built from cosh(κx) and sinh(κx)/κ.
//! Both are even in κ, hence real functions of the real number w = κ²: for
//! w > 0 they are hyperbolic, for w < 0 (κ purely imaginary) they turn into
//! cos and sin, and at w = 0 they reduce to 1 and x. Evaluating them through
//! w instead of a complex κ removes every 0/0 at the E = V0 threshold.

/// Below this |w·x²| the Taylor series is used.
const SERIES_LIMIT: f64 = 0.5;
const SERIES_TERMS: usize = 14;

/// Values of the four basis functions at one (w, x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvenFunctions {
    /// cosh(κx)
    pub c: f64,
    /// sinh(κx)/κ
    pub s: f64,
    /// (sinh(κx)/κ − x)/κ²
    pub g: f64,
    /// (x·cosh(κx) − sinh(κx)/κ)/κ², which equals 2·∂S/∂w
    pub h: f64,
}

pub fn even_functions(w: f64, x: f64) -> EvenFunctions {
    let z = w * x * x;
    if z.abs() < SERIES_LIMIT {
        series(z, x)
    } else if w > 0.0 {
        let kappa = w.sqrt();
        let kx = kappa * x;
        let c = kx.cosh();
        let s = kx.sinh() / kappa;
        EvenFunctions {
            c,
            s,
            g: (s - x) / w,
            h: (x * c - s) / w,
        }
    } else {
        let q = (-w).sqrt();
        let qx = q * x;
        let c = qx.cos();
        let s = qx.sin() / q;
        EvenFunctions {
            c,
            s,
            g: (s - x) / w,
            h: (x * c - s) / w,
        }
    }
}

fn series(z: f64, x: f64) -> EvenFunctions {
    let mut c = 1.0;
    let mut s = 1.0;
    let mut g = 0.0;
    let mut h = 0.0;
    let mut inv_even = 1.0; // 1/(2n)!
    let mut inv_odd = 1.0; // 1/(2n+1)!
    let mut z_prev = 1.0; // z^(n-1)
    for n in 1..SERIES_TERMS {
        let nf = n as f64;
        inv_even /= (2.0 * nf - 1.0) * (2.0 * nf);
        inv_odd /= (2.0 * nf) * (2.0 * nf + 1.0);
        let zn = z_prev * z;
        c += inv_even * zn;
        s += inv_odd * zn;
        g += inv_odd * z_prev;
        h += 2.0 * nf * inv_odd * z_prev;
        z_prev = zn;
    }
    let x3 = x * x * x;
    EvenFunctions {
        c,
        s: s * x,
        g: g * x3,
        h: h * x3,
    }
}

/// cosh(κx)
pub fn cosh_k(w: f64, x: f64) -> f64 {
    even_functions(w, x).c
}

/// sinh(κx)/κ
pub fn sinhc_k(w: f64, x: f64) -> f64 {
    even_functions(w, x).s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn direct(w: f64, x: f64) -> EvenFunctions {
        let kappa = Complex64::new(w, 0.0).sqrt();
        let kx = kappa * x;
        let c = kx.cosh();
        let s = kx.sinh() / kappa;
        let g = (s - x) / w;
        let h = (c * x - s) / w;
        EvenFunctions {
            c: c.re,
            s: s.re,
            g: g.re,
            h: h.re,
        }
    }

    #[test]
    fn matches_direct_evaluation_away_from_zero() {
        for &w in &[-7.3, -1.0, -0.2, 0.2, 1.0, 4.5] {
            for &x in &[0.4, 1.0, 2.3] {
                let a = even_functions(w, x);
                let b = direct(w, x);
                for (u, v) in [(a.c, b.c), (a.s, b.s), (a.g, b.g), (a.h, b.h)] {
                    assert!((u - v).abs() <= 1e-12 * v.abs().max(1.0), "w={w} x={x}: {u} vs {v}");
                }
            }
        }
    }

    #[test]
    fn series_and_direct_agree_at_switch() {
        for &sign in &[-1.0, 1.0] {
            let x = 1.0;
            let w_in = sign * (SERIES_LIMIT * 0.999);
            let w_out = sign * (SERIES_LIMIT * 1.001);
            let a = even_functions(w_in, x);
            let b = even_functions(w_out, x);
            // smooth across the switch: differences of order dw
            assert!((a.c - b.c).abs() < 2e-3);
            assert!((a.g - b.g).abs() < 1e-4);
            let exact = direct(w_in, x);
            assert!((a.g - exact.g).abs() < 1e-13);
            assert!((a.h - exact.h).abs() < 1e-13);
        }
    }

    #[test]
    fn threshold_limits() {
        let f = even_functions(0.0, 2.0);
        assert_eq!(f.c, 1.0);
        assert_eq!(f.s, 2.0);
        assert!((f.g - 8.0 / 6.0).abs() < 1e-15);
        assert!((f.h - 8.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn h_is_twice_ds_dw() {
        let (w, x) = (0.9, 1.7);
        let eps = 1e-6;
        let ds = (sinhc_k(w + eps, x) - sinhc_k(w - eps, x)) / (2.0 * eps);
        assert!((2.0 * ds - even_functions(w, x).h).abs() < 1e-8);
    }
}
