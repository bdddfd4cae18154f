//! Small numerical helpers shared by the packet and times modules.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

/// Nodes and weights of `panels` equal Gauss-Legendre panels of `order`
/// points on [a, b], left to right.
pub fn gauss_legendre_panels(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(order).expect("order must be positive"));
    let mut ref_pairs: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (*x, *w)).collect();
    ref_pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let width = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + width * p as f64;
        let mid = lo + 0.5 * width;
        for &(x, w) in &ref_pairs {
            out.push((mid + 0.5 * width * x, 0.5 * width * w));
        }
    }
    out
}

/// Root of `f` in [lo, hi] by bisection, given f(lo) and f(hi) of opposite
/// sign; stops when the bracket is narrower than `tol`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let f_lo = f(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Least-squares line through the points: (slope, intercept).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// `n` points evenly spaced from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panels_integrate_polynomials_and_gaussians() {
        let nodes = gauss_legendre_panels(-1.0, 3.0, 4, 8);
        let cubic: f64 = nodes.iter().map(|(x, w)| w * x * x * x).sum();
        assert!((cubic - 20.0).abs() < 1e-12);
        let g = gauss_legendre_panels(-8.0, 8.0, 16, 16);
        let gauss: f64 = g.iter().map(|(x, w)| w * (-x * x).exp()).sum();
        assert!((gauss - std::f64::consts::PI.sqrt()).abs() < 1e-13);
        assert!(nodes.windows(2).all(|p| p[0].0 < p[1].0));
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14);
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn fit_recovers_line() {
        let xs = linspace(0.0, 1.0, 11);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        let (m, c) = linear_fit(&xs, &ys);
        assert!((m - 3.0).abs() < 1e-14 && (c + 1.0).abs() < 1e-14);
    }
}
