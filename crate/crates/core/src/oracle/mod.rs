//! Brute-force cross-checks: ODE integration of the stationary equation,
//! adaptive quadrature and finite differences. None of these use the
//! closed forms they are meant to verify.

pub mod derivative;
pub mod integrate;
pub mod ode;

pub use derivative::{numeric_derivative, numeric_phase_derivative, Derivative};
pub use integrate::{integrate, integrate_density};
pub use ode::{solve_stationary, OdeSolution};
