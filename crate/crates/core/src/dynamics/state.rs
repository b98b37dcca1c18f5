use nalgebra::Vector4;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const IDX_11: usize = 0;
pub const IDX_10: usize = 1;
pub const IDX_01: usize = 2;
pub const IDX_00: usize = 3;

/// Index of |bec, squid⟩ in the (|11⟩, |10⟩, |01⟩, |00⟩) ordering.
pub fn basis_index(bec: u8, squid: u8) -> usize {
    2 * (1 - bec.min(1) as usize) + (1 - squid.min(1) as usize)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridState {
    pub amplitudes: Vector4<Complex64>,
    pub time: f64,
}

impl HybridState {
    pub fn new(amplitudes: Vector4<Complex64>, time: f64) -> Result<Self> {
        let norm = amplitudes.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
            return Err(Error::param("amplitudes", format!("state must be normalized, norm = {norm}")));
        }
        Ok(HybridState { amplitudes, time })
    }

    /// |bec⟩_B ⊗ |squid⟩_S at t = 0.
    pub fn basis(bec: u8, squid: u8) -> Self {
        let mut amplitudes = Vector4::zeros();
        amplitudes[basis_index(bec, squid)] = Complex64::new(1.0, 0.0);
        HybridState { amplitudes, time: 0.0 }
    }

    /// |0⟩_B ⊗ (α|0⟩_S + β|1⟩_S), normalized.
    pub fn from_squid_qubit(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::param("squid_qubit", "amplitudes must not both vanish"));
        }
        let mut amplitudes = Vector4::zeros();
        amplitudes[IDX_00] = alpha / norm;
        amplitudes[IDX_01] = beta / norm;
        Ok(HybridState { amplitudes, time: 0.0 })
    }

    pub fn amplitude(&self, bec: u8, squid: u8) -> Complex64 {
        self.amplitudes[basis_index(bec, squid)]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// [P00, P01, P10, P11].
    pub fn populations(&self) -> [f64; 4] {
        let p = |i: usize| self.amplitudes[i].norm_sqr();
        [p(IDX_00), p(IDX_01), p(IDX_10), p(IDX_11)]
    }

    pub fn concurrence(&self) -> f64 {
        concurrence(&self.amplitudes)
    }
}

/// Pure-state concurrence 2|c11 c00 − c10 c01|.
pub fn concurrence(c: &Vector4<Complex64>) -> f64 {
    (2.0 * (c[IDX_11] * c[IDX_00] - c[IDX_10] * c[IDX_01]).norm()).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_layout() {
        assert_eq!(basis_index(1, 1), IDX_11);
        assert_eq!(basis_index(1, 0), IDX_10);
        assert_eq!(basis_index(0, 1), IDX_01);
        assert_eq!(basis_index(0, 0), IDX_00);
    }

    #[test]
    fn squid_qubit_preparation() {
        let s = HybridState::from_squid_qubit(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15);
        let p = s.populations();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
        assert!(HybridState::from_squid_qubit(Complex64::default(), Complex64::default()).is_err());
    }

    #[test]
    fn concurrence_limits() {
        assert_eq!(HybridState::basis(0, 1).concurrence(), 0.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut a = Vector4::zeros();
        a[IDX_01] = Complex64::new(h, 0.0);
        a[IDX_10] = Complex64::new(0.0, h);
        assert!((concurrence(&a) - 1.0).abs() < 1e-15);
    }
}
