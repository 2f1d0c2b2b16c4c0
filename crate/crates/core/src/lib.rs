//! Numerical toolkit for one-sided witnesses of quantum memory in
//! gravitationally coupled probe dynamics.

pub mod choi;
pub mod error;
pub mod jaynes_cummings;
pub mod linalg;
pub mod locc;
pub mod physical;
pub mod qubit_gravity;
pub mod sdp;
pub mod witness;

pub use choi::ChoiState;
pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
pub use qubit_gravity::{dynamics_pair, DynamicsPair, TwoQubitProtocol};
pub use witness::{analytical_witness, certify_witness, correlator, CorrelatorSet, WitnessOperators};
