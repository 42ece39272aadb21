//! Finite-size corrections to Landauer's principle: quantum states and
//! entropies, thermal reservoirs, the lower-bound functions, and processes
//! that attain or probe them.

pub mod bounds;
pub mod cli;
pub mod curve;
pub mod error;
pub mod optimize;
pub mod processes;
pub mod quantum;
pub mod scalar;
pub mod scenario;
pub mod sweep;
pub mod thermo;

pub use error::{Error, Result};

pub type QState = quantum::QState<f64>;
pub type HermitianOp = quantum::HermitianOp<f64>;
pub type Unitary = quantum::Unitary<f64>;
pub type Reservoir = thermo::Reservoir<f64>;
pub type InverseTemp = thermo::InverseTemp<f64>;
pub type ProcessSpec = processes::ProcessSpec<f64>;
pub type ProcessReport = processes::ProcessReport<f64>;
