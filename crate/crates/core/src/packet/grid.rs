//! Piecewise-uniform spatial grids whose segment ends sit exactly on the
//! region boundaries, with end-corrected composite weights per segment.

/// One uniform segment: points x0, x0 + h, …, x0 + n·h.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub x0: f64,
    pub h: f64,
    pub weights: Vec<f64>,
}

impl Segment {
    fn new(a: f64, b: f64, max_step: f64) -> Self {
        let n = ((b - a) / max_step).ceil().max(1.0) as usize;
        let h = (b - a) / n as f64;
        Segment {
            x0: a,
            h,
            weights: composite_weights(n, h),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + self.h * i as f64
    }

    pub fn end(&self) -> f64 {
        self.x(self.len() - 1)
    }
}

/// Gregory coefficients G₂, G₃, …: the trapezoid rule minus
/// Σ_j (−1)^{j+1}·G_{j+1}·Δʲf₀ (and the mirror image at the far end).
const GREGORY: [f64; 7] = [
    1.0 / 12.0,
    1.0 / 24.0,
    19.0 / 720.0,
    3.0 / 160.0,
    863.0 / 60480.0,
    275.0 / 24192.0,
    33953.0 / 3628800.0,
];

/// Weights on n + 1 equispaced points: trapezoid with Gregory end
/// corrections through the highest difference order that fits twice into
/// the segment (seventh differences, eighth-order accuracy, from 16
/// intervals on).
fn composite_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![1.0; n + 1];
    w[0] = 0.5;
    w[n] = 0.5;
    let order = GREGORY.len().min(n / 2);
    for (j1, g) in GREGORY.iter().take(order).enumerate() {
        let j = j1 + 1;
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        // Δʲf₀ = Σ_i (−1)^{j−i} C(j, i) f_i
        let mut binom = 1.0;
        for i in 0..=j {
            let coeff = sign * g * binom * if (j - i) % 2 == 0 { 1.0 } else { -1.0 };
            w[i] += coeff;
            w[n - i] += coeff;
            binom = binom * (j - i) as f64 / (i + 1) as f64;
        }
    }
    w.iter().map(|v| v * h).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct XGrid {
    pub segments: Vec<Segment>,
}

impl XGrid {
    /// Grid on [lo, hi] with spacing at most `max_step`; every break inside
    /// the interval becomes a segment end.
    pub fn new(lo: f64, hi: f64, max_step: f64, breaks: &[f64]) -> Self {
        Self::graded(lo, hi, breaks, |_, _| max_step)
    }

    /// Like [`XGrid::new`], with the step bound chosen per segment from its
    /// ends.
    pub fn graded(lo: f64, hi: f64, breaks: &[f64], step: impl Fn(f64, f64) -> f64) -> Self {
        let mut cuts = vec![lo];
        let mut inner: Vec<f64> = breaks.iter().copied().filter(|&b| b > lo && b < hi).collect();
        inner.sort_by(f64::total_cmp);
        inner.dedup();
        cuts.extend(inner);
        cuts.push(hi);
        let segments = cuts
            .windows(2)
            .map(|w| Segment::new(w[0], w[1], step(w[0], w[1])))
            .collect();
        XGrid { segments }
    }

    pub fn lo(&self) -> f64 {
        self.segments[0].x0
    }

    pub fn hi(&self) -> f64 {
        self.segments.last().expect("empty grid").end()
    }

    pub fn points(&self) -> usize {
        self.segments.iter().map(Segment::len).sum()
    }

    /// Σ w·f(x) over all segments (shared ends counted once per side, which
    /// is what the composite rule needs).
    pub fn integrate(&self, mut f: impl FnMut(usize, usize, f64) -> f64) -> f64 {
        let mut sum = 0.0;
        for (s, seg) in self.segments.iter().enumerate() {
            for (i, w) in seg.weights.iter().enumerate() {
                sum += w * f(s, i, seg.x(i));
            }
        }
        sum
    }
}
