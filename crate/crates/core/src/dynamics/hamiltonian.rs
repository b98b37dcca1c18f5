use nalgebra::Matrix4;
use num_complex::Complex64;

use super::schedule::RampSchedule;
use super::state::{IDX_00, IDX_01, IDX_10, IDX_11};

/// Coefficients of the 𝟙⊗σ and σ_z⊗σ terms dropped from the reduced coupling,
/// for validation runs (rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ValidationTerms {
    pub diagonal_shift: f64,
    pub zz_coupling: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridParams {
    /// Hyperfine splitting (rad/s).
    pub e_hfs: f64,
    /// Complex Rabi frequency (rad/s).
    pub omega: Complex64,
    pub validation: Option<ValidationTerms>,
}

impl HybridParams {
    pub fn new(e_hfs: f64, omega: Complex64) -> Self {
        HybridParams {
            e_hfs,
            omega,
            validation: None,
        }
    }
}

/// H(t) = (E_hfs/2)σ_z ⊕ (Δ(t)/2)σ_z − [[0, Ω], [Ω*, 0]]⊗σ_x with Δ = E_hfs·W(t).
pub fn hamiltonian_at(t: f64, params: &HybridParams, schedule: &RampSchedule) -> Matrix4<Complex64> {
    hamiltonian_for_window(schedule.window(t), params)
}

pub fn hamiltonian_for_window(w: f64, params: &HybridParams) -> Matrix4<Complex64> {
    let e = 0.5 * params.e_hfs;
    let d = 0.5 * params.e_hfs * w;
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut h = Matrix4::zeros();
    h[(IDX_11, IDX_11)] = c(e + d);
    h[(IDX_10, IDX_10)] = c(e - d);
    h[(IDX_01, IDX_01)] = c(-e + d);
    h[(IDX_00, IDX_00)] = c(-e - d);
    let om = params.omega;
    h[(IDX_11, IDX_00)] = -om;
    h[(IDX_10, IDX_01)] = -om;
    h[(IDX_00, IDX_11)] = -om.conj();
    h[(IDX_01, IDX_10)] = -om.conj();
    if let Some(v) = params.validation {
        // −s 𝟙⊗σ_x − j σ_z⊗σ_x in the flux-qubit energy basis.
        let upper = c(-v.diagonal_shift - v.zz_coupling);
        let lower = c(-v.diagonal_shift + v.zz_coupling);
        h[(IDX_11, IDX_10)] += upper;
        h[(IDX_10, IDX_11)] += upper;
        h[(IDX_01, IDX_00)] += lower;
        h[(IDX_00, IDX_01)] += lower;
    }
    h
}
