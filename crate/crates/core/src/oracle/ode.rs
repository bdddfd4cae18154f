//! Backward integration of ψ″ = (2m/ħ²)(V − E)ψ from the transmitted side.
//!
//! On x ≥ b2 only the outgoing wave exists, so the solution is fixed up to
//! a constant: start from ψ(b2) = 1, ψ′(b2) = ik and integrate to a1, region
//! by region so the integrator never steps across a potential jump. There the
//! solution is projected onto e^{±ikx} and normalized to unit incidence.

use num_complex::Complex64;
use ode_solvers::dop_shared::IntegrationError;
use ode_solvers::{Dop853, OutputType, System, Vector4};

use crate::error::{Error, Result};
use crate::model::BarrierSystem;

const RTOL: f64 = 1e-13;
const ATOL: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    /// Decreasing, from b2 to a1.
    pub x: Vec<f64>,
    pub psi: Vec<Complex64>,
    pub dpsi: Vec<Complex64>,
    pub a_out: Complex64,
    pub b_out: Complex64,
}

impl OdeSolution {
    /// Largest relative deviation of Im(ψ*ψ′) from its value at b2.
    pub fn flux_drift(&self) -> f64 {
        let flux = |i: usize| (self.psi[i].conj() * self.dpsi[i]).im;
        let reference = flux(0);
        (0..self.x.len())
            .map(|i| ((flux(i) - reference) / reference).abs())
            .fold(0.0, f64::max)
    }
}

/// ψ″ = w ψ written in u = x0 − x.
struct Region {
    w: f64,
}

impl System<f64, Vector4<f64>> for Region {
    fn system(&self, _u: f64, y: &Vector4<f64>, dy: &mut Vector4<f64>) {
        dy[0] = -y[2];
        dy[1] = -y[3];
        dy[2] = -self.w * y[0];
        dy[3] = -self.w * y[1];
    }
}

pub fn solve_stationary(sys: &BarrierSystem, k: f64) -> Result<OdeSolution> {
    let kin = sys.kinematics(k)?;
    let w_free = -k * k;
    let mut pieces = vec![(sys.b2(), sys.a2(), kin.kappa_sq)];
    if sys.gap() > 0.0 {
        pieces.push((sys.a2(), sys.b1(), w_free));
    }
    pieces.push((sys.b1(), sys.a1(), kin.kappa_sq));

    let mut state = Vector4::new(1.0, 0.0, 0.0, k);
    let mut log_scale = 0.0;
    let mut xs = vec![sys.b2()];
    let mut psi = vec![Complex64::new(1.0, 0.0)];
    let mut dpsi = vec![Complex64::new(0.0, k)];
    let mut scales = vec![0.0];

    for (start, end, w) in pieces {
        let length = start - end;
        let mut solver = Dop853::from_param(
            Region { w },
            0.0,
            length,
            length,
            state,
            RTOL,
            ATOL,
            0.9,
            0.0,
            0.333,
            6.0,
            length,
            0.0,
            10_000_000,
            u32::MAX,
            OutputType::Sparse,
        );
        solver.integrate().map_err(|e| match e {
            IntegrationError::StepSizeUnderflow { x } => Error::StepUnderflow { x: start - x },
            _ => Error::IntegrationNotConverged {
                estimate: f64::NAN,
                error: f64::NAN,
            },
        })?;
        for (u, y) in solver.x_out().iter().zip(solver.y_out()).skip(1) {
            xs.push(start - u);
            psi.push(Complex64::new(y[0], y[1]));
            dpsi.push(Complex64::new(y[2], y[3]));
            scales.push(log_scale);
        }
        state = *solver.y_out().last().expect("solver produced no output");
        let norm = state.amax();
        state /= norm;
        log_scale += norm.ln();
    }

    let last = psi.len() - 1;
    let psi_a1 = psi[last];
    let dpsi_a1 = dpsi[last];
    let scale_a1 = scales[last];

    let i = Complex64::i();
    let a1 = sys.a1();
    let ratio = dpsi_a1 / (i * k);
    let alpha = 0.5 * (psi_a1 + ratio) * Complex64::from_polar(1.0, -k * a1);
    let beta = 0.5 * (psi_a1 - ratio) * Complex64::from_polar(1.0, k * a1);

    let a_out = Complex64::from_polar((-scale_a1).exp(), -k * a1) / alpha;
    let b_out = beta / alpha * Complex64::from_polar(1.0, -2.0 * k * a1);

    for j in 0..psi.len() {
        let factor = (scales[j] - scale_a1).exp() / alpha;
        psi[j] *= factor;
        dpsi[j] *= factor;
    }

    Ok(OdeSolution {
        x: xs,
        psi,
        dpsi,
        a_out,
        b_out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_propagation() {
        let s = BarrierSystem::natural(0.0, 1.0, 2.0, 3.0).unwrap();
        let sol = solve_stationary(&s, 1.3).unwrap();
        assert!((sol.a_out - Complex64::from_polar(1.0, 1.3 * s.width())).norm() < 1e-10);
        assert!(sol.b_out.norm() < 1e-10);
    }

    #[test]
    fn flux_is_conserved() {
        let s = BarrierSystem::from_opacity(3.0 * std::f64::consts::PI, 2.0, 5.0).unwrap();
        let sol = solve_stationary(&s, 0.6).unwrap();
        assert!(sol.flux_drift() < 1e-9, "{}", sol.flux_drift());
        let r = sol.a_out.norm_sqr() + sol.b_out.norm_sqr();
        assert!((r - 1.0).abs() < 1e-10);
    }
}
