//! BEC-qubit tomography: partial trace, axis rotations, shot simulation and
//! Bloch-vector reconstruction.
//!
//! Qubit matrices use the (|1⟩, |0⟩) ordering of the dynamics module, so
//! σ_z = diag(1, −1) and a_z = +1 is the state |1⟩.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::dynamics::{HybridState, ProtocolResult, IDX_00, IDX_01, IDX_10, IDX_11};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }

    pub fn from_label(c: char) -> Option<Axis> {
        match c.to_ascii_lowercase() {
            'x' => Some(Axis::X),
            'y' => Some(Axis::Y),
            'z' => Some(Axis::Z),
            _ => None,
        }
    }

    /// ChaCha stream reserved for this axis.
    pub fn stream(self) -> u64 {
        self as u64 + 1
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn pauli(axis: Axis) -> Matrix2<Complex64> {
    let i = Complex64::i();
    match axis {
        Axis::X => Matrix2::new(c(0.0), c(1.0), c(1.0), c(0.0)),
        Axis::Y => Matrix2::new(c(0.0), -i, i, c(0.0)),
        Axis::Z => Matrix2::new(c(1.0), c(0.0), c(0.0), c(-1.0)),
    }
}

/// ρ = ½(𝟙 + a·σ). Trace one and Hermitian; positive only if ‖a‖ ≤ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensityMatrix {
    matrix: Matrix2<Complex64>,
}

impl QubitDensityMatrix {
    pub fn from_matrix(matrix: Matrix2<Complex64>) -> Result<Self> {
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::param("rho", format!("trace must be 1, got {tr}")));
        }
        if (matrix - matrix.adjoint()).norm() > 1e-12 {
            return Err(Error::param("rho", "matrix is not Hermitian"));
        }
        Ok(QubitDensityMatrix { matrix })
    }

    pub fn from_bloch(a: Vector3<f64>) -> Self {
        let mut m = Matrix2::identity();
        for axis in Axis::ALL {
            m += pauli(axis) * c(a[axis.index()]);
        }
        QubitDensityMatrix { matrix: m * c(0.5) }
    }

    /// |ψ⟩⟨ψ| for ψ = c₀|0⟩ + c₁|1⟩ (normalized internally).
    pub fn pure(c0: Complex64, c1: Complex64) -> Result<Self> {
        let n = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::param("state", "amplitudes must not both vanish"));
        }
        let v = nalgebra::Vector2::new(c1 / n, c0 / n);
        Ok(QubitDensityMatrix { matrix: v * v.adjoint() })
    }

    pub fn maximally_mixed() -> Self {
        Self::from_bloch(Vector3::zeros())
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.matrix
    }

    pub fn bloch(&self) -> Vector3<f64> {
        Vector3::from_fn(|k, _| (self.matrix * pauli(Axis::ALL[k])).trace().re)
    }

    /// Tr(ρ Ŝ_axis) with Ŝ = σ/2.
    pub fn spin_expectation(&self, axis: Axis) -> f64 {
        0.5 * (self.matrix * pauli(axis)).trace().re
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        let r = self.bloch().norm();
        [0.5 * (1.0 - r), 0.5 * (1.0 + r)]
    }

    pub fn is_physical(&self) -> bool {
        self.bloch().norm() <= 1.0 + 1e-12
    }

    /// ⟨ψ|ρ|ψ⟩ for ψ = c₀|0⟩ + c₁|1⟩.
    pub fn overlap_with_pure(&self, c0: Complex64, c1: Complex64) -> f64 {
        let v = nalgebra::Vector2::new(c1, c0);
        v.dotc(&(self.matrix * v)).re
    }
}

/// Partial trace of a four-amplitude state over the flux-qubit factor.
pub fn reduce_to_bec(state: &HybridState) -> QubitDensityMatrix {
    let a = &state.amplitudes;
    // rows: BEC |1⟩ then |0⟩; columns: flux qubit |1⟩ then |0⟩.
    let rows = [[a[IDX_11], a[IDX_10]], [a[IDX_01], a[IDX_00]]];
    let n2 = a.norm_squared();
    let m = Matrix2::from_fn(|i, k| (rows[i][0] * rows[k][0].conj() + rows[i][1] * rows[k][1].conj()) / n2);
    QubitDensityMatrix { matrix: m }
}

/// Rotates ρ so that an Ŝ_z measurement of the result samples Ŝ_axis of ρ.
pub fn rotate_for_axis(rho: &QubitDensityMatrix, axis: Axis) -> QubitDensityMatrix {
    let (cs, sn) = ((PI / 4.0).cos(), (PI / 4.0).sin());
    let i = Complex64::i();
    let u = match axis {
        Axis::Z => return *rho,
        // e^{iπ/2 Ŝ_y}
        Axis::X => Matrix2::identity() * c(cs) + pauli(Axis::Y) * (i * sn),
        // e^{−iπ/2 Ŝ_x}
        Axis::Y => Matrix2::identity() * c(cs) - pauli(Axis::X) * (i * sn),
    };
    QubitDensityMatrix {
        matrix: u * rho.matrix * u.adjoint(),
    }
}

/// Probability of the |1⟩ (absorption) outcome when measuring `axis`.
pub fn plus_probability(rho: &QubitDensityMatrix, axis: Axis) -> f64 {
    let rotated = rotate_for_axis(rho, axis);
    (0.5 * (1.0 + rotated.bloch()[2])).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasurementRecord {
    pub axis: Axis,
    pub shots: u64,
    pub plus_count: u64,
    pub seed: u64,
}

impl MeasurementRecord {
    pub fn new(axis: Axis, shots: u64, plus_count: u64, seed: u64) -> Result<Self> {
        if shots == 0 {
            return Err(Error::param("shots", "need at least one shot"));
        }
        if plus_count > shots {
            return Err(Error::param("plus_count", format!("{plus_count} exceeds {shots} shots")));
        }
        Ok(MeasurementRecord {
            axis,
            shots,
            plus_count,
            seed,
        })
    }

    pub fn frequency(&self) -> f64 {
        self.plus_count as f64 / self.shots as f64
    }
}

/// Detector model; the ideal projective measurement has unit efficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detector {
    /// Probability that an absorption event is registered.
    pub efficiency: f64,
}

impl Default for Detector {
    fn default() -> Self {
        Detector { efficiency: 1.0 }
    }
}

pub fn simulate_shots(rho: &QubitDensityMatrix, axis: Axis, shots: u64, seed: u64) -> Result<MeasurementRecord> {
    simulate_shots_with(rho, axis, shots, seed, &Detector::default())
}

/// Draws the number of |1⟩ outcomes among `shots` identically prepared copies.
/// The generator is ChaCha8 seeded with `seed`, on the stream of `axis`.
pub fn simulate_shots_with(
    rho: &QubitDensityMatrix,
    axis: Axis,
    shots: u64,
    seed: u64,
    detector: &Detector,
) -> Result<MeasurementRecord> {
    if shots == 0 {
        return Err(Error::param("shots", "need at least one shot"));
    }
    if !(0.0..=1.0).contains(&detector.efficiency) {
        return Err(Error::param("efficiency", format!("must lie in [0, 1], got {}", detector.efficiency)));
    }
    let p = plus_probability(rho, axis) * detector.efficiency;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(axis.stream());
    let dist = Binomial::new(shots, p).map_err(|e| Error::param("p", e.to_string()))?;
    let plus_count = dist.sample(&mut rng);
    MeasurementRecord::new(axis, shots, plus_count, seed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    /// â_i = 2 p̂_i − 1.
    pub bloch: Vector3<f64>,
    /// 2√(p̂(1 − p̂)/M) per axis.
    pub std_errors: Vector3<f64>,
    /// ½(𝟙 + â·σ); may be unphysical.
    pub estimate: QubitDensityMatrix,
    /// â rescaled to unit norm, present when ‖â‖ > 1.
    pub projected: Option<QubitDensityMatrix>,
}

impl Reconstruction {
    /// The physical estimate: the projection when one exists, else the raw one.
    pub fn physical(&self) -> &QubitDensityMatrix {
        self.projected.as_ref().unwrap_or(&self.estimate)
    }
}

fn reconstruction_from(p_hat: [f64; 3], shots: [f64; 3]) -> Reconstruction {
    let bloch = Vector3::from_fn(|k, _| 2.0 * p_hat[k] - 1.0);
    let std_errors = Vector3::from_fn(|k, _| {
        if shots[k].is_infinite() {
            0.0
        } else {
            2.0 * (p_hat[k] * (1.0 - p_hat[k]) / shots[k]).sqrt()
        }
    });
    let norm = bloch.norm();
    let projected = (norm > 1.0).then(|| QubitDensityMatrix::from_bloch(bloch / norm));
    Reconstruction {
        bloch,
        std_errors,
        estimate: QubitDensityMatrix::from_bloch(bloch),
        projected,
    }
}

/// Linear-inversion estimate from one record per axis. Repeated records for an
/// axis are pooled.
pub fn reconstruct(records: &[MeasurementRecord]) -> Result<Reconstruction> {
    let mut shots = [0u64; 3];
    let mut plus = [0u64; 3];
    for r in records {
        if r.shots == 0 || r.plus_count > r.shots {
            return Err(Error::param("records", format!("inconsistent record {r:?}")));
        }
        shots[r.axis.index()] += r.shots;
        plus[r.axis.index()] += r.plus_count;
    }
    for axis in Axis::ALL {
        if shots[axis.index()] == 0 {
            return Err(Error::MissingRecord(axis.label()));
        }
    }
    let p_hat = [0, 1, 2].map(|k| plus[k] as f64 / shots[k] as f64);
    Ok(reconstruction_from(p_hat, shots.map(|m| m as f64)))
}

/// M → ∞ limit: exact outcome probabilities, zero standard errors.
pub fn exact_reconstruction(rho: &QubitDensityMatrix) -> Reconstruction {
    let p = Axis::ALL.map(|axis| plus_probability(rho, axis));
    reconstruction_from(p, [f64::INFINITY; 3])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShotModel {
    /// Exact expectation values.
    Exact,
    /// `shots` per axis, seeded.
    Sampled { shots: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FidelityEstimate {
    pub fidelity: f64,
    pub std_error: f64,
    /// 95% normal interval, clipped to [0, 1].
    pub ci95: (f64, f64),
    /// √⟨t|ρ_B|t⟩ of the exact reduced state.
    pub true_fidelity: f64,
    pub target_bloch: Vector3<f64>,
    pub reconstruction: Reconstruction,
    pub records: Vec<MeasurementRecord>,
}

/// Reduces the protocol output to the BEC qubit, measures it on three axes and
/// estimates F = √(½(1 + â·b)) against the transferred target b.
pub fn transfer_fidelity_experiment(
    protocol: &ProtocolResult,
    model: ShotModel,
    detector: &Detector,
) -> Result<FidelityEstimate> {
    let [t0, t1] = protocol
        .bec_target()
        .ok_or_else(|| Error::Unsupported("entangled targets have no pure BEC-qubit target".into()))?;
    let target = QubitDensityMatrix::pure(t0, t1)?;
    let b = target.bloch();
    let rho = reduce_to_bec(&protocol.final_state);
    let (reconstruction, records) = match model {
        ShotModel::Exact => (exact_reconstruction(&rho), Vec::new()),
        ShotModel::Sampled { shots, seed } => {
            let records = Axis::ALL
                .iter()
                .map(|&axis| simulate_shots_with(&rho, axis, shots, seed, detector))
                .collect::<Result<Vec<_>>>()?;
            (reconstruct(&records)?, records)
        }
    };
    let a = reconstruction.bloch;
    let fidelity = (0.5 * (1.0 + a.dot(&b))).clamp(0.0, 1.0).sqrt();
    let std_error = if fidelity > 0.0 {
        let grad = b / (4.0 * fidelity);
        grad.component_mul(&reconstruction.std_errors).norm()
    } else {
        f64::INFINITY
    };
    let half = 1.96 * std_error;
    let norm = t0.norm_sqr() + t1.norm_sqr();
    Ok(FidelityEstimate {
        fidelity,
        std_error,
        ci95: ((fidelity - half).max(0.0), (fidelity + half).min(1.0)),
        true_fidelity: (rho.overlap_with_pure(t0, t1) / norm).clamp(0.0, 1.0).sqrt(),
        target_bloch: b,
        reconstruction,
        records,
    })
}

/// Bloch vector of the Bell-state reduction, for reference in reports.
pub fn bell_reduced() -> QubitDensityMatrix {
    let h = c(FRAC_1_SQRT_2);
    let mut a = nalgebra::Vector4::zeros();
    a[IDX_01] = h;
    a[IDX_10] = h;
    reduce_to_bec(&HybridState { amplitudes: a, time: 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_state_reduction() {
        let rho = reduce_to_bec(&HybridState::basis(1, 0));
        assert!((rho.bloch() - Vector3::new(0.0, 0.0, 1.0)).norm() < 1e-15);
        assert!(bell_reduced().bloch().norm() < 1e-15);
    }

    #[test]
    fn rotation_identity() {
        let rho = QubitDensityMatrix::from_bloch(Vector3::new(0.3, -0.5, 0.6));
        for axis in Axis::ALL {
            let r = rotate_for_axis(&rho, axis);
            assert!((r.spin_expectation(Axis::Z) - rho.spin_expectation(axis)).abs() < 1e-15);
        }
        let x = QubitDensityMatrix::from_bloch(Vector3::new(1.0, 0.0, 0.0));
        assert!((rotate_for_axis(&x, Axis::X).bloch() - Vector3::new(0.0, 0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn certain_outcome() {
        let one = QubitDensityMatrix::pure(c(0.0), c(1.0)).unwrap();
        let r = simulate_shots(&one, Axis::Z, 1000, 9).unwrap();
        assert_eq!(r.plus_count, 1000);
    }

    #[test]
    fn missing_axis() {
        let r = MeasurementRecord::new(Axis::X, 10, 5, 0).unwrap();
        let z = MeasurementRecord::new(Axis::Z, 10, 5, 0).unwrap();
        assert_eq!(reconstruct(&[r, z]).unwrap_err(), Error::MissingRecord('y'));
    }

    #[test]
    fn overshoot_is_projected() {
        let recs = Axis::ALL.map(|a| MeasurementRecord::new(a, 10, 10, 0).unwrap());
        let rec = reconstruct(&recs).unwrap();
        assert!(!rec.estimate.is_physical());
        let p = rec.projected.unwrap();
        assert!((p.bloch().norm() - 1.0).abs() < 1e-12);
    }
}
