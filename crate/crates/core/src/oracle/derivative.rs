//! Five-point central differences with Richardson step halving.

use crate::error::{Error, Result};

const LEVELS: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: f64,
    pub error: f64,
}

fn five_point<F: FnMut(f64) -> f64>(f: &mut F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// f′(x) starting from step `h`. Each halving feeds a Richardson table
/// (the five-point rule has an h⁴, h⁶, … expansion); the diagonal entry with
/// the smallest change is returned. Fails when the very first refinement
/// already makes things worse, which means round-off dominates.
pub fn numeric_derivative<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> Result<Derivative> {
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(LEVELS);
    let mut best = Derivative {
        value: f64::NAN,
        error: f64::INFINITY,
    };
    let mut previous_error = f64::INFINITY;
    for level in 0..LEVELS {
        let step = h / (1u64 << level) as f64;
        let mut row = vec![five_point(&mut f, x, step)];
        for j in 1..=level {
            let factor = 4f64.powi(j as i32 + 1);
            let v = (factor * row[j - 1] - table[level - 1][j - 1]) / (factor - 1.0);
            row.push(v);
        }
        if level > 0 {
            let error = (row[level] - table[level - 1][level - 1]).abs();
            if error < best.error {
                best = Derivative {
                    value: row[level],
                    error,
                };
            }
            if error > previous_error {
                if level == 2 && best.error > 1e-6 * best.value.abs() {
                    return Err(Error::NoisyDerivative { error: best.error });
                }
                break;
            }
            previous_error = error;
        }
        table.push(row);
    }
    Ok(best)
}

/// Derivative of a phase known only modulo `period`: samples are shifted by
/// multiples of the period to lie within half a period of f(x).
pub fn numeric_phase_derivative<F: FnMut(f64) -> f64>(
    mut f: F,
    x: f64,
    h: f64,
    period: f64,
) -> Result<Derivative> {
    let centre = f(x);
    numeric_derivative(
        move |t| {
            let v = f(t);
            v - period * ((v - centre) / period).round()
        },
        x,
        h,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial() {
        let d = numeric_derivative(|k| k * k, 1.0, 0.1).unwrap();
        assert!((d.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn transcendental() {
        let d = numeric_derivative(|k| (3.0 * k).sin() * k.exp(), 0.7, 0.05).unwrap();
        let exact = (3.0 * (2.1f64).cos() + (2.1f64).sin()) * 0.7f64.exp();
        assert!((d.value - exact).abs() < 1e-11);
    }

    #[test]
    fn wrapped_phase() {
        let d = numeric_phase_derivative(
            |k| (5.0 * k).rem_euclid(std::f64::consts::PI),
            0.6283185307179586,
            0.01,
            std::f64::consts::PI,
        )
        .unwrap();
        assert!((d.value - 5.0).abs() < 1e-10);
    }
}
