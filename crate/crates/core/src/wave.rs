//! Piecewise analytic stationary wave functions.

use std::io::Write;

use num_complex::Complex64;

use crate::hyperbolic::even_functions;

/// How ψ is represented on one interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Basis {
    /// forward·e^{ikx} + backward·e^{−ikx}
    Plane { forward: Complex64, backward: Complex64 },
    /// sin·sin(k(x − center)) + cos·cos(k(x − center))
    Trig { center: f64, sin: Complex64, cos: Complex64 },
    /// value·cosh(κ(x − anchor)) + slope·sinh(κ(x − anchor))/κ, i.e. the
    /// solution with Cauchy data (value, slope) at `anchor`.
    Hyperbolic { anchor: f64, value: Complex64, slope: Complex64 },
    Zero,
}

impl Basis {
    pub fn kind(&self) -> &'static str {
        match self {
            Basis::Plane { .. } => "plane",
            Basis::Trig { .. } => "sin-cos",
            Basis::Hyperbolic { .. } => "sinh-cosh",
            Basis::Zero => "zero",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub start: f64,
    pub end: f64,
    /// κ² = 2m(V − E)/ħ² on this interval; −k² where the potential vanishes.
    pub w: f64,
    pub basis: Basis,
}

impl Region {
    /// (ψ, ψ′) at x.
    pub fn eval(&self, k: f64, x: f64) -> (Complex64, Complex64) {
        let i = Complex64::i();
        match self.basis {
            Basis::Plane { forward, backward } => {
                let e = Complex64::from_polar(1.0, k * x);
                let f = forward * e;
                let b = backward * e.conj();
                (f + b, i * k * (f - b))
            }
            Basis::Trig { center, sin, cos } => {
                let (sn, cs) = (k * (x - center)).sin_cos();
                (sin * sn + cos * cs, k * (sin * cs - cos * sn))
            }
            Basis::Hyperbolic { anchor, value, slope } => {
                let e = even_functions(self.w, x - anchor);
                (value * e.c + slope * e.s, value * (self.w * e.s) + slope * e.c)
            }
            Basis::Zero => (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
        }
    }

    /// ∫|ψ|² over [a, b] ⊂ this region, in closed form.
    pub fn density_integral(&self, k: f64, a: f64, b: f64) -> f64 {
        match self.basis {
            Basis::Plane { forward, backward } => plane_density(k, forward, backward, a, b),
            Basis::Trig { center, sin, cos } => {
                let (f, g) = trig_to_plane(k, center, sin, cos);
                plane_density(k, f, g, a, b)
            }
            Basis::Hyperbolic { anchor, value, slope } => {
                let (lo, hi) = (a - anchor, b - anchor);
                let reach = lo.abs().max(hi.abs());
                if self.w > 0.0 && self.w.sqrt() * reach > 1.0 {
                    // e^{±κξ} basis: no cancellation between growing parts
                    let kappa = self.w.sqrt();
                    let up = 0.5 * (value + slope / kappa);
                    let down = 0.5 * (value - slope / kappa);
                    let grow = ((2.0 * kappa * hi).exp() - (2.0 * kappa * lo).exp()) / (2.0 * kappa);
                    let decay = ((-2.0 * kappa * lo).exp() - (-2.0 * kappa * hi).exp()) / (2.0 * kappa);
                    up.norm_sqr() * grow + down.norm_sqr() * decay + 2.0 * (up * down.conj()).re * (b - a)
                } else {
                    let antiderivative = |xi: f64| {
                        let e1 = even_functions(self.w, xi);
                        let e2 = even_functions(self.w, 2.0 * xi);
                        let cc = 0.5 * xi + 0.25 * e2.s;
                        let ss = 0.25 * e2.g;
                        let cs = 0.5 * e1.s * e1.s;
                        value.norm_sqr() * cc + slope.norm_sqr() * ss + 2.0 * (value * slope.conj()).re * cs
                    };
                    antiderivative(hi) - antiderivative(lo)
                }
            }
            Basis::Zero => 0.0,
        }
    }
}

fn plane_density(k: f64, forward: Complex64, backward: Complex64, a: f64, b: f64) -> f64 {
    let cross = if k * (b - a) < 1e-3 {
        // (e^{2ikb} − e^{2ika})/2ik without the cancellation
        Complex64::from_polar(b - a, k * (a + b))
    } else {
        (Complex64::from_polar(1.0, 2.0 * k * b) - Complex64::from_polar(1.0, 2.0 * k * a))
            / Complex64::new(0.0, 2.0 * k)
    };
    (forward.norm_sqr() + backward.norm_sqr()) * (b - a) + 2.0 * (forward * backward.conj() * cross).re
}

/// Which region to use at a shared boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Ordered regions covering the real line.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseWave {
    pub k: f64,
    /// ħ/m, used for the probability flux.
    pub hbar_over_m: f64,
    pub regions: Vec<Region>,
}

impl PiecewiseWave {
    pub fn new(k: f64, hbar_over_m: f64, regions: Vec<Region>) -> Self {
        debug_assert!(regions.first().map_or(false, |r| r.start == f64::NEG_INFINITY));
        debug_assert!(regions.last().map_or(false, |r| r.end == f64::INFINITY));
        debug_assert!(regions.windows(2).all(|p| p[0].end == p[1].start));
        PiecewiseWave {
            k,
            hbar_over_m,
            regions,
        }
    }

    pub fn region_index(&self, x: f64, side: Side) -> usize {
        let n = self.regions.len();
        match side {
            Side::Left => self.regions.iter().position(|r| x <= r.end).unwrap_or(n - 1),
            Side::Right => self.regions.iter().rposition(|r| x >= r.start).unwrap_or(0),
        }
    }

    pub fn eval_side(&self, x: f64, side: Side) -> (Complex64, Complex64) {
        self.regions[self.region_index(x, side)].eval(self.k, x)
    }

    /// (ψ, ψ′), taking the right-hand region at a boundary.
    pub fn eval(&self, x: f64) -> (Complex64, Complex64) {
        self.eval_side(x, Side::Right)
    }

    pub fn value(&self, x: f64) -> Complex64 {
        self.eval(x).0
    }

    pub fn density(&self, x: f64) -> f64 {
        self.value(x).norm_sqr()
    }

    /// Probability current (ħ/m)·Im(ψ*ψ′).
    pub fn flux_side(&self, x: f64, side: Side) -> f64 {
        let (v, d) = self.eval_side(x, side);
        self.hbar_over_m * (v.conj() * d).im
    }

    pub fn flux(&self, x: f64) -> f64 {
        self.flux_side(x, Side::Right)
    }

    /// Finite region boundaries in order.
    pub fn boundaries(&self) -> Vec<f64> {
        self.regions[1..].iter().map(|r| r.start).collect()
    }

    /// Largest jump of ψ across an internal boundary.
    pub fn max_value_jump(&self) -> f64 {
        self.boundaries()
            .iter()
            .map(|&x| (self.eval_side(x, Side::Left).0 - self.eval_side(x, Side::Right).0).norm())
            .fold(0.0, f64::max)
    }

    /// Largest jump of ψ′ across an internal boundary.
    pub fn max_slope_jump(&self) -> f64 {
        self.boundaries()
            .iter()
            .map(|&x| (self.eval_side(x, Side::Left).1 - self.eval_side(x, Side::Right).1).norm())
            .fold(0.0, f64::max)
    }

    /// alpha·self + beta·other on the common refinement of both partitions.
    pub fn combine(&self, alpha: Complex64, other: &PiecewiseWave, beta: Complex64) -> PiecewiseWave {
        let mut cuts: Vec<f64> = self.boundaries();
        cuts.extend(other.boundaries());
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut edges = vec![f64::NEG_INFINITY];
        edges.extend(cuts);
        edges.push(f64::INFINITY);

        let regions = edges
            .windows(2)
            .map(|e| {
                let probe = probe_point(e[0], e[1]);
                let a = self.regions[self.region_index(probe, Side::Right)];
                let b = other.regions[other.region_index(probe, Side::Right)];
                Region {
                    start: e[0],
                    end: e[1],
                    w: if matches!(a.basis, Basis::Zero) { b.w } else { a.w },
                    basis: combine_basis(self.k, &a, alpha, &b, beta, e[0], e[1]),
                }
            })
            .collect();
        PiecewiseWave::new(self.k, self.hbar_over_m, regions)
    }

    /// ∫|ψ|² over a finite interval, region by region in closed form.
    pub fn density_integral(&self, a: f64, b: f64) -> f64 {
        self.regions
            .iter()
            .filter(|r| r.end > a && r.start < b)
            .map(|r| r.density_integral(self.k, r.start.max(a), r.end.min(b)))
            .sum()
    }

    /// self − other.
    pub fn sub(&self, other: &PiecewiseWave) -> PiecewiseWave {
        self.combine(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    /// Writes x, Re ψ, Im ψ, |ψ|², flux on a uniform grid.
    pub fn write_csv<W: Write>(&self, out: &mut W, x_min: f64, x_max: f64, points: usize) -> std::io::Result<()> {
        writeln!(out, "x,re_psi,im_psi,density,flux")?;
        let n = points.max(2);
        for i in 0..n {
            let x = x_min + (x_max - x_min) * i as f64 / (n - 1) as f64;
            let (v, d) = self.eval(x);
            let flux = self.hbar_over_m * (v.conj() * d).im;
            writeln!(out, "{x:.12e},{:.12e},{:.12e},{:.12e},{flux:.12e}", v.re, v.im, v.norm_sqr())?;
        }
        Ok(())
    }
}

fn probe_point(a: f64, b: f64) -> f64 {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => 0.5 * (a + b),
        (true, false) => a + 1.0,
        (false, true) => b - 1.0,
        (false, false) => 0.0,
    }
}

fn scale(basis: Basis, c: Complex64) -> Basis {
    match basis {
        Basis::Plane { forward, backward } => Basis::Plane {
            forward: forward * c,
            backward: backward * c,
        },
        Basis::Trig { center, sin, cos } => Basis::Trig {
            center,
            sin: sin * c,
            cos: cos * c,
        },
        Basis::Hyperbolic { anchor, value, slope } => Basis::Hyperbolic {
            anchor,
            value: value * c,
            slope: slope * c,
        },
        Basis::Zero => Basis::Zero,
    }
}

fn combine_basis(
    k: f64,
    a: &Region,
    alpha: Complex64,
    b: &Region,
    beta: Complex64,
    start: f64,
    end: f64,
) -> Basis {
    match (a.basis, b.basis) {
        (_, Basis::Zero) => scale(a.basis, alpha),
        (Basis::Zero, _) => scale(b.basis, beta),
        (
            Basis::Plane { forward: f1, backward: b1 },
            Basis::Plane { forward: f2, backward: b2 },
        ) => Basis::Plane {
            forward: alpha * f1 + beta * f2,
            backward: alpha * b1 + beta * b2,
        },
        (
            Basis::Trig { center: c1, sin: s1, cos: o1 },
            Basis::Trig { center: c2, sin: s2, cos: o2 },
        ) if c1 == c2 => Basis::Trig {
            center: c1,
            sin: alpha * s1 + beta * s2,
            cos: alpha * o1 + beta * o2,
        },
        (
            Basis::Hyperbolic { anchor: x1, value: v1, slope: p1 },
            Basis::Hyperbolic { anchor: x2, value: v2, slope: p2 },
        ) if x1 == x2 => Basis::Hyperbolic {
            anchor: x1,
            value: alpha * v1 + beta * v2,
            slope: alpha * p1 + beta * p2,
        },
        _ => {
            let anchor = if start.is_finite() { start } else { end };
            let (va, da) = a.eval(k, anchor);
            let (vb, db) = b.eval(k, anchor);
            Basis::Hyperbolic {
                anchor,
                value: alpha * va + beta * vb,
                slope: alpha * da + beta * db,
            }
        }
    }
}

/// Trig coefficients about `center` from plane-wave amplitudes A, B:
/// sin = i(A·e^{ikc} − B·e^{−ikc}), cos = A·e^{ikc} + B·e^{−ikc}.
pub fn plane_to_trig(k: f64, center: f64, forward: Complex64, backward: Complex64) -> (Complex64, Complex64) {
    let a = forward * Complex64::from_polar(1.0, k * center);
    let b = backward * Complex64::from_polar(1.0, -k * center);
    (Complex64::i() * (a - b), a + b)
}

/// Inverse of [`plane_to_trig`].
pub fn trig_to_plane(k: f64, center: f64, sin: Complex64, cos: Complex64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let a = 0.5 * (cos - i * sin);
    let b = 0.5 * (cos + i * sin);
    (
        a * Complex64::from_polar(1.0, -k * center),
        b * Complex64::from_polar(1.0, k * center),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trig_plane_roundtrip_and_pointwise_agreement() {
        let (k, center) = (1.3, 2.7);
        let (f, b) = (c(0.3, -1.1), c(-0.7, 0.4));
        let (s, o) = plane_to_trig(k, center, f, b);
        let (f2, b2) = trig_to_plane(k, center, s, o);
        assert!((f - f2).norm() < 1e-15 && (b - b2).norm() < 1e-15);
        let plane = Region {
            start: f64::NEG_INFINITY,
            end: f64::INFINITY,
            w: -k * k,
            basis: Basis::Plane { forward: f, backward: b },
        };
        let trig = Region {
            basis: Basis::Trig { center, sin: s, cos: o },
            ..plane
        };
        let hyp = Region {
            basis: Basis::Hyperbolic {
                anchor: 0.4,
                value: plane.eval(k, 0.4).0,
                slope: plane.eval(k, 0.4).1,
            },
            ..plane
        };
        for x in [-3.0, 0.0, 1.1, 5.0] {
            let p = plane.eval(k, x);
            for other in [trig.eval(k, x), hyp.eval(k, x)] {
                assert!((p.0 - other.0).norm() < 1e-13);
                assert!((p.1 - other.1).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn combine_on_mismatched_partitions() {
        let k = 0.8;
        let a = PiecewiseWave::new(
            k,
            1.0,
            vec![
                Region {
                    start: f64::NEG_INFINITY,
                    end: 1.0,
                    w: -k * k,
                    basis: Basis::Plane { forward: c(1.0, 0.0), backward: c(0.2, 0.1) },
                },
                Region {
                    start: 1.0,
                    end: f64::INFINITY,
                    w: 0.5,
                    basis: Basis::Hyperbolic { anchor: 1.0, value: c(1.0, 0.5), slope: c(0.0, 0.3) },
                },
            ],
        );
        let b = PiecewiseWave::new(
            k,
            1.0,
            vec![
                Region {
                    start: f64::NEG_INFINITY,
                    end: 1.0,
                    w: -k * k,
                    basis: Basis::Plane { forward: c(0.5, 0.0), backward: c(0.0, 0.0) },
                },
                Region {
                    start: 1.0,
                    end: 2.0,
                    w: 0.5,
                    basis: Basis::Hyperbolic { anchor: 2.0, value: c(0.1, 0.0), slope: c(0.2, 0.0) },
                },
                Region {
                    start: 2.0,
                    end: f64::INFINITY,
                    w: 0.5,
                    basis: Basis::Zero,
                },
            ],
        );
        let d = a.sub(&b);
        assert_eq!(d.regions.len(), 3);
        for x in [-2.0, 0.5, 1.5, 1.99, 2.5, 4.0] {
            let expect = a.value(x) - b.value(x);
            assert!((d.value(x) - expect).norm() < 1e-13, "x={x}");
        }
    }
}
