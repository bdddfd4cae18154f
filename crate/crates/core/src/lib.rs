//! Stationary scattering, subprocess decomposition and characteristic times
//! for a particle on two identical rectangular barriers, plus Gaussian
//! wave-packet dynamics and brute-force oracles.

pub mod decomposition;
pub mod error;
pub mod hyperbolic;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod packet;
pub mod runner;
pub mod scattering;
pub mod scenario;
pub mod times;
pub mod units;
pub mod verify;
pub mod wave;

pub use error::{Error, Result};
pub use model::{BarrierSystem, Kinematics};
pub use scattering::{OneBarrierParams, Scattering, TransferMatrix, TwoBarrierParams};
pub use units::{UnitPreset, UnitSystem};
