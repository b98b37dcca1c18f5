//! Flux-qubit / atomic-BEC hybrid simulation toolkit.
//!
//! The crate is organised along the physical pipeline:
//!
//! * [`squid`]: rf-SQUID circuit, double-well analysis and the two-level flux qubit.
//! * [`loop_field`]: vector potential and magnetic field of the SQUID loop
//!   (complete elliptic integrals, see [`elliptic`]).
//! * [`bec`]: hyperfine qubit of the condensate and its bosonically enhanced
//!   coupling to the loop field.
//! * [`dynamics`]: time-dependent four-level evolution under tanh resonance ramps,
//!   state transfer and entanglement protocols.
//! * [`tomography`]: shot-level simulation of the BEC-qubit measurement protocol and
//!   density-matrix reconstruction.
//!
//! Energies handed to the dynamics are angular frequencies (rad/s); circuit and
//! field quantities are SI.

pub mod bec;
pub mod constants;
pub mod dynamics;
pub mod elliptic;
pub mod error;
pub mod loop_field;
pub mod quadrature;
pub mod squid;
pub mod tomography;

pub use error::{Error, ErrorCategory, Result};
