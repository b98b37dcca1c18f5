//! Coupled flux-qubit / BEC-qubit dynamics.
//!
//! The four-dimensional computational basis is (|11⟩, |10⟩, |01⟩, |00⟩) with
//! |ij⟩ = |i⟩_B ⊗ |j⟩_S. The flux-qubit splitting is swept through resonance
//! with the hyperfine splitting by Δ(t) = E_hfs·W(t), where W is a pair of tanh
//! edges; holding resonance for a quarter (half) Rabi cycle entangles
//! (swaps) the two qubits.

mod hamiltonian;
mod propagate;
mod protocol;
mod schedule;
mod state;

pub use hamiltonian::{hamiltonian_at, hamiltonian_for_window, HybridParams, ValidationTerms};
pub use propagate::{expm_hermitian, propagate, Frame, IntegratorOptions};
pub use protocol::{
    entangle_protocol, evolve, run_protocol, sweep_ramp_times, transfer_protocol, HoldRule, ProtocolConfig,
    ProtocolResult, Sample, SweepRow, Target,
};
pub use schedule::{
    measured_hold_time, measured_ramp_time, ramp_window, tau_for_ramp_time, RampSchedule, RESONANCE_LEVEL,
};
pub use state::{concurrence, HybridState, IDX_00, IDX_01, IDX_10, IDX_11};
