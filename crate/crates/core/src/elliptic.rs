//! Complete elliptic integrals of the first and second kind.
//!
//! Both integrals are computed with the arithmetic-geometric mean, which
//! converges quadratically. Arguments are the *modulus* `k`:
//!
//! ```text
//! K(k) = ∫₀^{π/2} (1 − k² sin²x)^{-1/2} dx
//! E(k) = ∫₀^{π/2} (1 − k² sin²x)^{+1/2} dx
//! ```

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const MAX_ITER: usize = 40;

/// Complete elliptic integral of the first kind. Domain `0 ≤ k < 1`.
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain {
            function: "elliptic_k",
            reason: format!("modulus {k} not in [0, 1)"),
        });
    }
    let kc = ((1.0 - k) * (1.0 + k)).sqrt();
    Ok(complete_integrals(kc).0)
}

/// Complete elliptic integral of the second kind. Domain `0 ≤ k ≤ 1`.
pub fn elliptic_e(k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::Domain {
            function: "elliptic_e",
            reason: format!("modulus {k} not in [0, 1]"),
        });
    }
    if k == 1.0 {
        return Ok(1.0);
    }
    let kc = ((1.0 - k) * (1.0 + k)).sqrt();
    Ok(complete_integrals(kc).1)
}

/// `(K, E)` from the complementary modulus `kc = √(1 − k²)`, `0 < kc ≤ 1`.
///
/// Taking the complement directly lets callers near the logarithmic
/// singularity (k → 1) avoid forming `1 − k²` by subtraction.
pub(crate) fn complete_integrals(kc: f64) -> (f64, f64) {
    debug_assert!(kc > 0.0 && kc <= 1.0);
    let mut a = 1.0_f64;
    let mut b = kc;
    // c₀² = k² = 1 − kc²
    let mut sum = 0.5 * (1.0 - kc) * (1.0 + kc);
    let mut weight = 0.5;
    for _ in 0..MAX_ITER {
        let c = 0.5 * (a - b);
        let a_next = 0.5 * (a + b);
        let b_next = (a * b).sqrt();
        weight *= 2.0;
        sum += weight * c * c;
        a = a_next;
        b = b_next;
        if c.abs() <= 1e-17 * a {
            break;
        }
    }
    let k = FRAC_PI_2 / a;
    (k, k * (1.0 - sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_points() {
        assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
        assert!((elliptic_e(0.0).unwrap() - FRAC_PI_2).abs() < 1e-16);
        assert_eq!(elliptic_e(1.0).unwrap(), 1.0);
        // K(1/√2) = Γ(1/4)² / (4√π)
        let gamma_quarter = 3.625_609_908_221_908_4;
        let expected = gamma_quarter * gamma_quarter / (4.0 * PI.sqrt());
        let got = elliptic_k(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        assert!((got - expected).abs() / expected < 1e-15);
    }

    #[test]
    fn legendre_relation() {
        // E K' + E' K − K K' = π/2
        for &k in &[0.1f64, 0.3, 0.5, 0.7, 0.9, 0.99] {
            let kp = (1.0 - k * k).sqrt();
            let (kk, ee) = (elliptic_k(k).unwrap(), elliptic_e(k).unwrap());
            let (kkp, eep) = (elliptic_k(kp).unwrap(), elliptic_e(kp).unwrap());
            let lhs = ee * kkp + eep * kk - kk * kkp;
            assert!((lhs - FRAC_PI_2).abs() < 1e-13, "k={k}: {lhs}");
        }
    }

    #[test]
    fn rejects_outside_domain() {
        assert!(elliptic_k(1.0).is_err());
        assert!(elliptic_k(-0.1).is_err());
        assert!(elliptic_e(1.0001).is_err());
        assert!(elliptic_k(f64::NAN).is_err());
    }
}
