//! Hyperfine qubit of a trapped condensate and its coupling to the loop field.
//!
//! The qubit states are Fock states of a single spatial mode: |0⟩_B with all N
//! atoms in |↓⟩ and |1⟩_B with one atom flipped to |↑⟩. Matrix elements of the
//! magnetic-dipole coupling pick up factors N and √N from the condensate.
//! Basis order for 2×2 objects is (|1⟩, |0⟩).

use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::constants::{ATOMIC_MASS_UNIT, BOHR_MAGNETON, HBAR, RB87_HYPERFINE_HZ};
use crate::error::{Error, Result};
use crate::loop_field::{CurrentLoop, LoopGeometry, MagneticSource};
use crate::quadrature::{gauss_hermite, Rule};

/// Index of |↓⟩ in the spin matrices below.
pub const DOWN: usize = 0;
/// Index of |↑⟩.
pub const UP: usize = 1;

/// Magnetic-moment matrix elements μ_{σσ'} (J/T), indexed `[σ][σ']` with
/// [`DOWN`] = 0 and [`UP`] = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentMatrix(pub [[Vector3<Complex64>; 2]; 2]);

impl MomentMatrix {
    /// ⁸⁷Rb-like moments for |F=1, m_F=−1⟩ (↓) and |F=2, m_F=−2⟩ (↑): diagonal
    /// moments −μ_B/2 and +μ_B along `quantization_axis`, transition moment of
    /// magnitude `transition` along `transition_direction`.
    pub fn rb87_like(
        quantization_axis: Vector3<f64>,
        transition_direction: Vector3<f64>,
        transition: f64,
    ) -> Self {
        let q = quantization_axis.normalize();
        let t = transition_direction.normalize();
        let real = |v: Vector3<f64>| v.map(|x| Complex64::new(x, 0.0));
        let down = real(q * (-0.5 * BOHR_MAGNETON));
        let up = real(q * BOHR_MAGNETON);
        let flip = real(t * transition);
        MomentMatrix([[down, flip], [flip.map(|c| c.conj()), up]])
    }

    pub fn get(&self, row: usize, col: usize) -> &Vector3<Complex64> {
        &self.0[row][col]
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        let scale = self
            .0
            .iter()
            .flatten()
            .map(|v| v.iter().map(|c| c.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let tol = rel_tol * scale;
        let close = |a: &Vector3<Complex64>, b: &Vector3<Complex64>| {
            a.iter().zip(b.iter()).all(|(x, y)| (x - y.conj()).norm() <= tol)
        };
        let real = |v: &Vector3<Complex64>| v.iter().all(|c| c.im.abs() <= tol);
        close(&self.0[0][1], &self.0[1][0]) && real(&self.0[0][0]) && real(&self.0[1][1])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BecParams {
    pub atom_count: u64,
    /// Isotropic trap frequency (rad/s).
    pub omega_ho: f64,
    /// Atomic mass (kg).
    pub mass: f64,
    /// Trap centre relative to the loop centre (m).
    pub trap_center: Vector3<f64>,
    /// Hyperfine splitting (rad/s).
    pub e_hfs: f64,
    pub moments: MomentMatrix,
}

impl BecParams {
    pub fn validate(&self) -> Result<()> {
        if self.atom_count < 1 {
            return Err(Error::param("atom_count", "need at least one atom"));
        }
        for (name, v) in [("omega_ho", self.omega_ho), ("mass", self.mass), ("e_hfs", self.e_hfs)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, format!("must be positive, got {v}")));
            }
        }
        if !self.trap_center.iter().all(|c| c.is_finite()) {
            return Err(Error::param("trap_center", "must be finite"));
        }
        if !self.moments.is_hermitian(1e-12) {
            return Err(Error::param("moments", "μ_{↑↓} must equal μ_{↓↑}* and diagonal moments must be real"));
        }
        Ok(())
    }

    /// Oscillator length √(ħ/(mω)) (m).
    pub fn oscillator_length(&self) -> f64 {
        (HBAR / (self.mass * self.omega_ho)).sqrt()
    }

    /// Defaults used for the coupling estimate: N = 10⁶ ⁸⁷Rb atoms in a
    /// 2π×50 Hz trap, 50 μm from the loop centre along its axis, quantisation
    /// axis in the loop plane and |μ_{↓↑}| = μ_B along the loop axis.
    pub fn rb87_default() -> Self {
        BecParams {
            atom_count: 1_000_000,
            omega_ho: 2.0 * std::f64::consts::PI * 50.0,
            mass: 86.909_180_527 * ATOMIC_MASS_UNIT,
            trap_center: Vector3::new(0.0, 0.0, 50e-6),
            e_hfs: 2.0 * std::f64::consts::PI * RB87_HYPERFINE_HZ,
            moments: MomentMatrix::rb87_like(Vector3::x(), Vector3::z(), BOHR_MAGNETON),
        }
    }
}

/// Condensate mode φ(r): isotropic 3-D oscillator ground state centred on the
/// trap, `r` measured from the loop centre (m^{-3/2}).
pub fn ho_ground_state(r: &Vector3<f64>, params: &BecParams) -> f64 {
    let a = params.oscillator_length();
    let x2 = (r - params.trap_center).norm_squared();
    (std::f64::consts::PI * a * a).powf(-0.75) * (-0.5 * x2 / (a * a)).exp()
}

/// g_{σσ'} = ∫ φ*_σ B φ_σ' d³r (T), indexed like [`MomentMatrix`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingVectors(pub [[Vector3<f64>; 2]; 2]);

impl CouplingVectors {
    pub fn get(&self, row: usize, col: usize) -> &Vector3<f64> {
        &self.0[row][col]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingResult {
    pub g: CouplingVectors,
    /// Ω = √N g_{↓↑}·μ_{↓↑}/ħ (rad/s).
    pub omega_rabi: Complex64,
    /// Coefficient of 𝟙⊗σ_z (rad/s).
    pub diagonal_shift: f64,
    /// Coefficient of σ_z⊗σ_z (rad/s).
    pub zz_coupling: f64,
}

/// Quadrature controls for [`coupling_vectors`].
#[derive(Debug, Clone, Copy)]
pub struct CouplingQuadrature {
    /// Gauss–Hermite nodes per axis.
    pub nodes: usize,
    /// Maximum relative change between `nodes/2` and `nodes`.
    pub tolerance: f64,
}

impl Default for CouplingQuadrature {
    fn default() -> Self {
        CouplingQuadrature {
            nodes: 32,
            tolerance: 1e-6,
        }
    }
}

/// Coupling vectors for the loop field with current `current`.
pub fn coupling_vectors(params: &BecParams, geometry: &LoopGeometry, current: f64) -> Result<CouplingVectors> {
    params.validate()?;
    let source = CurrentLoop {
        geometry: geometry.clone(),
        current,
    };
    let center = geometry.center + params.trap_center;
    let a = params.oscillator_length();
    let reach = geometry.distance_to_wire(&center);
    if reach <= geometry.wire_radius + 3.0 * a {
        return Err(Error::param(
            "trap_center",
            format!("trap (oscillator length {a:e} m) overlaps the wire: centre is {reach:e} m from it"),
        ));
    }
    coupling_vectors_with(params, &center, &source, &CouplingQuadrature::default())
}

/// Coupling vectors for an arbitrary field source; `center` is the absolute
/// trap position in the source's frame.
///
/// Both hyperfine states share the spatial mode, so all four g_{σσ'} are the
/// mean field over |φ|²; they are kept separate for asymmetric modes.
pub fn coupling_vectors_with(
    params: &BecParams,
    center: &Vector3<f64>,
    source: &dyn MagneticSource,
    quadrature: &CouplingQuadrature,
) -> Result<CouplingVectors> {
    let a = params.oscillator_length();
    let coarse = gaussian_average(source, center, a, &gauss_hermite((quadrature.nodes / 2).max(1)))?;
    let fine = gaussian_average(source, center, a, &gauss_hermite(quadrature.nodes))?;
    let change = (fine - coarse).norm() / fine.norm().max(f64::MIN_POSITIVE);
    if fine.norm() > 0.0 && change > quadrature.tolerance {
        return Err(Error::NoConvergence {
            what: "Gauss-Hermite coupling quadrature",
            iterations: quadrature.nodes,
            residual: change,
        });
    }
    Ok(CouplingVectors([[fine; 2]; 2]))
}

/// ∫ |φ|² B d³r with |φ|² = (πa²)^{-3/2} exp(−|r−c|²/a²), via the
/// substitution r = c + a·x and a tensor-product Gauss–Hermite rule.
fn gaussian_average(source: &dyn MagneticSource, center: &Vector3<f64>, a: f64, rule: &Rule) -> Result<Vector3<f64>> {
    let n = rule.len();
    let norm = std::f64::consts::PI.powf(-1.5);
    let w_max = rule.weights.iter().copied().fold(0.0, f64::max);
    // Nodes whose weight product is this far below the peak contribute nothing
    // representable and may sit anywhere, including inside the wire.
    let cutoff = w_max * w_max * w_max * 1e-40;
    let slabs: Result<Vec<Vector3<f64>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = Vector3::zeros();
            for j in 0..n {
                for k in 0..n {
                    let w = rule.weights[i] * rule.weights[j] * rule.weights[k];
                    if w < cutoff {
                        continue;
                    }
                    let p = center + Vector3::new(rule.nodes[i], rule.nodes[j], rule.nodes[k]) * a;
                    acc += source.field_at(&p)? * w;
                }
            }
            Ok(acc)
        })
        .collect();
    Ok(slabs?.into_iter().fold(Vector3::zeros(), |s, v| s + v) * norm)
}

fn dot(g: &Vector3<f64>, mu: &Vector3<Complex64>) -> Complex64 {
    g.iter().zip(mu.iter()).map(|(gi, mi)| mi * *gi).sum()
}

/// Ω = √N g_{↓↑}·μ_{↓↑}/ħ (rad/s).
pub fn rabi_frequency(g: &CouplingVectors, params: &BecParams) -> Complex64 {
    (params.atom_count as f64).sqrt() * dot(g.get(DOWN, UP), params.moments.get(DOWN, UP)) / HBAR
}

/// The three parts of the projected coupling
///
/// ```text
/// H_int = −s 𝟙⊗σ_z − j σ_z⊗σ_z − [[0, Ω], [Ω*, 0]]⊗σ_z
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionDecomposition {
    /// s = [(2N−1) g_{↓↓}·μ_{↓↓} + g_{↑↑}·μ_{↑↑}]/2ħ (rad/s).
    pub diagonal_shift: f64,
    /// j = [g_{↑↑}·μ_{↑↑} − g_{↓↓}·μ_{↓↓}]/2ħ (rad/s).
    pub zz_coupling: f64,
    pub omega_rabi: Complex64,
    /// [[0, Ω], [Ω*, 0]] in the (|1⟩, |0⟩) basis.
    pub exchange_block: Matrix2<Complex64>,
}

pub fn interaction_decomposition(g: &CouplingVectors, params: &BecParams) -> InteractionDecomposition {
    let n = params.atom_count as f64;
    let down = dot(g.get(DOWN, DOWN), params.moments.get(DOWN, DOWN)).re;
    let up = dot(g.get(UP, UP), params.moments.get(UP, UP)).re;
    let omega = rabi_frequency(g, params);
    let zero = Complex64::new(0.0, 0.0);
    InteractionDecomposition {
        diagonal_shift: ((2.0 * n - 1.0) * down + up) / (2.0 * HBAR),
        zz_coupling: (up - down) / (2.0 * HBAR),
        omega_rabi: omega,
        exchange_block: Matrix2::new(zero, omega, omega.conj(), zero),
    }
}

/// Coupling vectors, Rabi frequency and decomposition in one call.
pub fn couple(params: &BecParams, geometry: &LoopGeometry, current: f64) -> Result<CouplingResult> {
    let g = coupling_vectors(params, geometry, current)?;
    let d = interaction_decomposition(&g, params);
    Ok(CouplingResult {
        g,
        omega_rabi: d.omega_rabi,
        diagonal_shift: d.diagonal_shift,
        zz_coupling: d.zz_coupling,
    })
}

/// (E_hfs/2)σ_z in the (|1⟩_B, |0⟩_B) basis (rad/s).
pub fn bec_hamiltonian(params: &BecParams) -> Matrix2<Complex64> {
    let h = Complex64::new(0.5 * params.e_hfs, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    Matrix2::new(h, zero, zero, -h)
}

/// Samples of |φ|² and |φ|²B along the loop axis through the trap centre:
/// `(offset from trap centre (m), density (m⁻³), integrand (T m⁻³))`.
pub fn integrand_along_axis(
    params: &BecParams,
    geometry: &LoopGeometry,
    current: f64,
    half_span: f64,
    n: usize,
) -> Result<Vec<(f64, f64, Vector3<f64>)>> {
    let n = n.max(2);
    let axis = geometry.axis();
    (0..n)
        .map(|i| {
            let s = -half_span + 2.0 * half_span * i as f64 / (n - 1) as f64;
            let rel = params.trap_center + axis * s;
            let density = ho_ground_state(&rel, params).powi(2);
            let b = crate::loop_field::magnetic_field_at(&(geometry.center + rel), geometry, current)?;
            Ok((s, density, b * density))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loop_field::UniformField;

    #[test]
    fn oscillator_length_for_rb87() {
        let p = BecParams::rb87_default();
        let a = p.oscillator_length();
        assert!((a - 1.525e-6).abs() < 0.01e-6, "a_ho = {a}");
        let peak = ho_ground_state(&p.trap_center, &p);
        let expected = (std::f64::consts::PI * a * a).powf(-0.75);
        assert!((peak - expected).abs() / expected < 1e-15);
    }

    #[test]
    fn mode_is_normalized() {
        let p = BecParams::rb87_default();
        let a = p.oscillator_length();
        let rule = crate::quadrature::gauss_legendre(64);
        let l = 6.0 * a;
        let mut total = 0.0;
        for (x, wx) in rule.nodes.iter().zip(&rule.weights) {
            for (y, wy) in rule.nodes.iter().zip(&rule.weights) {
                for (z, wz) in rule.nodes.iter().zip(&rule.weights) {
                    let r = p.trap_center + Vector3::new(*x, *y, *z) * l;
                    total += wx * wy * wz * ho_ground_state(&r, &p).powi(2);
                }
            }
        }
        total *= l * l * l;
        assert!((total - 1.0).abs() < 1e-10, "{total}");
    }

    #[test]
    fn uniform_field_coupling_is_the_field() {
        let p = BecParams::rb87_default();
        let b = Vector3::new(1e-6, -2e-7, 3e-5);
        let g = coupling_vectors_with(&p, &p.trap_center, &UniformField(b), &CouplingQuadrature::default()).unwrap();
        for s in [DOWN, UP] {
            for t in [DOWN, UP] {
                assert!((g.get(s, t) - b).norm() <= 1e-14 * b.norm());
            }
        }
    }

    #[test]
    fn coupling_decays_with_distance() {
        let g = LoopGeometry::centered(1e-6, 5e-8).unwrap();
        let mut p = BecParams::rb87_default();
        let mut last = f64::INFINITY;
        for z in [20e-6, 100e-6, 1e-3, 1e-2] {
            p.trap_center = Vector3::new(0.0, 0.0, z);
            let v = coupling_vectors(&p, &g, 1e-3).unwrap();
            let mag = v.get(DOWN, UP).norm();
            assert!(mag < last);
            last = mag;
        }
        assert!(last < 1e-15);
    }

    #[test]
    fn trap_on_wire_rejected() {
        let g = LoopGeometry::centered(1e-6, 5e-8).unwrap();
        let mut p = BecParams::rb87_default();
        p.trap_center = Vector3::new(1e-6, 0.0, 0.5e-6);
        assert!(coupling_vectors(&p, &g, 1e-3).is_err());
    }

    #[test]
    fn decomposition_limits() {
        let mut p = BecParams::rb87_default();
        let g = CouplingVectors([[Vector3::new(1e-9, 2e-9, 3e-9); 2]; 2]);
        p.moments = MomentMatrix::rb87_like(Vector3::new(1.0, 1.0, 0.0), Vector3::z(), BOHR_MAGNETON);
        let mut m = p.moments.0;
        let zero = Vector3::from_element(Complex64::new(0.0, 0.0));
        m[DOWN][DOWN] = zero;
        m[UP][UP] = zero;
        p.moments = MomentMatrix(m);
        let d = interaction_decomposition(&g, &p);
        assert_eq!(d.diagonal_shift, 0.0);
        assert_eq!(d.zz_coupling, 0.0);

        let same = Vector3::new(0.3, 0.1, -0.2).map(|x| Complex64::new(x * BOHR_MAGNETON, 0.0));
        m[DOWN][DOWN] = same;
        m[UP][UP] = same;
        p.moments = MomentMatrix(m);
        let d = interaction_decomposition(&g, &p);
        assert_eq!(d.zz_coupling, 0.0);
        assert!(d.diagonal_shift != 0.0);
        assert_eq!(d.exchange_block[(0, 1)], d.omega_rabi);
        assert_eq!(d.exchange_block[(1, 0)], d.omega_rabi.conj());
    }

    #[test]
    fn rabi_frequency_is_hermitian_pair() {
        let p = BecParams {
            moments: MomentMatrix::rb87_like(
                Vector3::x(),
                Vector3::new(0.0, 1.0, 1.0),
                BOHR_MAGNETON,
            ),
            ..BecParams::rb87_default()
        };
        let mut m = p.moments.0;
        let twisted = Vector3::new(Complex64::new(0.0, 1.0), Complex64::new(0.5, 0.5), Complex64::new(1.0, -0.2))
            * Complex64::new(BOHR_MAGNETON, 0.0);
        m[DOWN][UP] = twisted;
        m[UP][DOWN] = twisted.map(|c| c.conj());
        let p = BecParams { moments: MomentMatrix(m), ..p };
        p.validate().unwrap();
        let g = CouplingVectors([[Vector3::new(1e-9, -4e-9, 2e-9); 2]; 2]);
        let down_up = rabi_frequency(&g, &p);
        let up_down = (p.atom_count as f64).sqrt() * dot(g.get(UP, DOWN), p.moments.get(UP, DOWN)) / HBAR;
        assert!((down_up - up_down.conj()).norm() <= 1e-15 * down_up.norm());
    }

    #[test]
    fn non_hermitian_moments_rejected() {
        let mut p = BecParams::rb87_default();
        let mut m = p.moments.0;
        m[UP][DOWN] *= Complex64::new(0.0, 1.0);
        p.moments = MomentMatrix(m);
        assert!(p.validate().is_err());
    }

    #[test]
    fn bec_hamiltonian_convention() {
        let p = BecParams::rb87_default();
        let h = bec_hamiltonian(&p);
        assert_eq!(h.trace(), Complex64::new(0.0, 0.0));
        assert!(((h[(0, 0)] - h[(1, 1)]).re / (2.0 * std::f64::consts::PI) - 6.835e9).abs() < 1e-3);
        assert!(h[(0, 0)].re > 0.0);
    }
}
