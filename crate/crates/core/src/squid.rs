//! rf-SQUID circuit model and its reduction to a two-level flux qubit.
//!
//! The flux coordinate Φ moves in the potential
//!
//! ```text
//! U(Φ) = (Φ − Φ_ex)² / 2L − (I_c Φ₀ / 2π) cos(2πΦ/Φ₀)
//!      = U₀ [ (2π)² (φ − φ_ex)² / 2 − β_L cos(2πφ) ]
//! ```
//!
//! with φ = Φ/Φ₀, U₀ = Φ₀²/(4π²L) and β_L = 2πLI_c/Φ₀. For β_L > 1 and
//! φ_ex ≈ ½ the potential is a double well; the ground states of the two wells
//! (approximated by Gaussians) span the flux-qubit subspace.

use std::f64::consts::PI;

use log::warn;
use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::constants::{FLUX_QUANTUM, HBAR};
use crate::error::{Error, Result};
use crate::quadrature::{bisect, gauss_legendre, integrate_composite};

const TWO_PI: f64 = 2.0 * PI;

/// Circuit constants of a single-junction rf SQUID (SI units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquidParams {
    /// Loop inductance (H).
    pub inductance: f64,
    /// Junction capacitance (F).
    pub capacitance: f64,
    /// Junction critical current (A).
    pub critical_current: f64,
    /// Applied external flux (Wb).
    pub external_flux: f64,
}

impl SquidParams {
    pub fn new(inductance: f64, capacitance: f64, critical_current: f64, external_flux: f64) -> Result<Self> {
        let p = SquidParams {
            inductance,
            capacitance,
            critical_current,
            external_flux,
        };
        p.validate()?;
        Ok(p)
    }

    /// Build from the reduced parameters β_L and φ_ex (external flux in units of Φ₀).
    pub fn from_reduced(inductance: f64, capacitance: f64, beta_l: f64, phi_ex: f64) -> Result<Self> {
        let critical_current = beta_l * FLUX_QUANTUM / (TWO_PI * inductance);
        Self::new(inductance, capacitance, critical_current, phi_ex * FLUX_QUANTUM)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("inductance", self.inductance),
            ("capacitance", self.capacitance),
            ("critical_current", self.critical_current),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, format!("must be positive and finite, got {v}")));
            }
        }
        if !self.external_flux.is_finite() {
            return Err(Error::param("external_flux", "must be finite"));
        }
        Ok(())
    }

    /// Screening parameter β_L = 2πLI_c/Φ₀.
    pub fn beta_l(&self) -> f64 {
        TWO_PI * self.inductance * self.critical_current / FLUX_QUANTUM
    }

    /// Energy scale U₀ = Φ₀²/(4π²L) in joule.
    pub fn u0(&self) -> f64 {
        FLUX_QUANTUM * FLUX_QUANTUM / (4.0 * PI * PI * self.inductance)
    }

    /// External flux in units of Φ₀.
    pub fn phi_ex(&self) -> f64 {
        self.external_flux / FLUX_QUANTUM
    }

    /// Bare LC plasma frequency 1/√(LC) in rad/s.
    pub fn plasma_frequency(&self) -> f64 {
        1.0 / (self.inductance * self.capacitance).sqrt()
    }

    /// Potential energy U(Φ) in joule.
    pub fn potential(&self, flux: f64) -> f64 {
        self.u0() * reduced_potential(flux / FLUX_QUANTUM, self.phi_ex(), self.beta_l())
    }
}

/// U(φ)/U₀ for flux and external flux in units of Φ₀.
pub fn reduced_potential(phi: f64, phi_ex: f64, beta_l: f64) -> f64 {
    let x = TWO_PI * (phi - phi_ex);
    0.5 * x * x - beta_l * (TWO_PI * phi).cos()
}

/// dU/dφ in units of U₀.
pub fn reduced_potential_slope(phi: f64, phi_ex: f64, beta_l: f64) -> f64 {
    TWO_PI * TWO_PI * (phi - phi_ex) + TWO_PI * beta_l * (TWO_PI * phi).sin()
}

/// d²U/dφ² in units of U₀.
pub fn reduced_potential_curvature(phi: f64, beta_l: f64) -> f64 {
    TWO_PI * TWO_PI * (1.0 + beta_l * (TWO_PI * phi).cos())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Minimum,
    Maximum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    /// Location in units of Φ₀.
    pub phi: f64,
    pub kind: ExtremumKind,
}

/// Controls for the bracketing scan in [`find_extrema_with`].
#[derive(Debug, Clone, Copy)]
pub struct ExtremaSearch {
    pub grid_points: usize,
    /// Half-width of the scan window around φ_ex (Φ₀ units); widened
    /// automatically when β_L/2π exceeds it.
    pub half_width: f64,
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for ExtremaSearch {
    fn default() -> Self {
        ExtremaSearch {
            grid_points: 10_000,
            half_width: 1.0,
            tolerance: 1e-12,
            max_iter: 200,
        }
    }
}

/// All stationary points of U, solutions of φ = φ_ex − (β_L/2π) sin(2πφ).
pub fn find_extrema(params: &SquidParams) -> Result<Vec<Extremum>> {
    find_extrema_with(params.phi_ex(), params.beta_l(), &ExtremaSearch::default())
}

pub fn find_extrema_with(phi_ex: f64, beta_l: f64, search: &ExtremaSearch) -> Result<Vec<Extremum>> {
    // Every stationary point satisfies |φ − φ_ex| ≤ β_L/2π.
    let half = search.half_width.max(beta_l.abs() / TWO_PI + 0.05);
    let lo = phi_ex - half;
    let n = search.grid_points.max(16);
    let step = 2.0 * half / n as f64;
    let slope = |phi: f64| reduced_potential_slope(phi, phi_ex, beta_l);
    // Fixed-point residual, in units of φ.
    let residual = |phi: f64| slope(phi) / (TWO_PI * TWO_PI);

    if (beta_l - 1.0).abs() < 1e-12 {
        warn!("beta_L = 1: barrier is an inflection point, classified as a single minimum");
    }

    let mut out: Vec<Extremum> = Vec::new();
    let mut x0 = lo;
    let mut f0 = slope(x0);
    for i in 1..=n {
        let x1 = lo + i as f64 * step;
        let f1 = slope(x1);
        let root = if f0 == 0.0 {
            None // handled when it was x1 of the previous interval
        } else if f1 == 0.0 {
            Some(x1)
        } else if f0.signum() != f1.signum() {
            Some(bisect(slope, x0, x1, search.tolerance * 1e-2, search.max_iter)?)
        } else {
            None
        };
        if let Some(phi) = root {
            let r = residual(phi);
            if r.abs() >= search.tolerance {
                return Err(Error::NoConvergence {
                    what: "stationary-point refinement",
                    iterations: search.max_iter,
                    residual: r,
                });
            }
            // Direction of the sign change separates minima from maxima; at a
            // degenerate point (U″ = 0) it still gives the right answer.
            let left = slope(phi - step * 0.5);
            let right = slope(phi + step * 0.5);
            let kind = if left < 0.0 && right > 0.0 {
                ExtremumKind::Minimum
            } else if left > 0.0 && right < 0.0 {
                ExtremumKind::Maximum
            } else if reduced_potential_curvature(phi, beta_l) >= 0.0 {
                ExtremumKind::Minimum
            } else {
                ExtremumKind::Maximum
            };
            out.push(Extremum { phi, kind });
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(out)
}

/// Harmonic frequency of the well at `phi_min`: √[(1 + β_L cos 2πφ)/(LC)] (rad/s).
pub fn well_frequency(params: &SquidParams, phi_min: f64) -> Result<f64> {
    let stiffness = 1.0 + params.beta_l() * (TWO_PI * phi_min).cos();
    if stiffness <= 0.0 {
        return Err(Error::Domain {
            function: "well_frequency",
            reason: format!("1 + β_L cos(2πφ) = {stiffness} ≤ 0 at φ = {phi_min}"),
        });
    }
    Ok((stiffness / (params.inductance * params.capacitance)).sqrt())
}

/// Double-well landscape derived from the circuit constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleWellAnalysis {
    /// Left/right well minima and barrier top, in units of Φ₀.
    pub phi_min_l: f64,
    pub phi_min_r: f64,
    pub phi_barrier: f64,
    /// Well frequencies (rad/s).
    pub omega_l: f64,
    pub omega_r: f64,
    /// U at the minima (J); zero-point terms are not included.
    pub energy_l: f64,
    pub energy_r: f64,
    /// (E_L − E_R)/ħ (rad/s).
    pub epsilon: f64,
    /// Tunnelling estimate from the Gaussian well states (rad/s).
    pub delta_est: f64,
    /// Barrier height above the lower minimum (J).
    pub barrier_height: f64,
    /// (Φ_L − Φ_ex)/L (A).
    pub circulating_current: f64,
}

/// Locate the two wells adjacent to the barrier nearest φ_ex and derive the
/// flux-qubit parameters.
pub fn analyze_double_well(params: &SquidParams) -> Result<DoubleWellAnalysis> {
    params.validate()?;
    let extrema = find_extrema(params)?;
    let (left, barrier, right) = select_wells(&extrema, params.phi_ex())?;
    let beta = params.beta_l();
    let phi_ex = params.phi_ex();
    let u0 = params.u0();

    let energy_l = u0 * reduced_potential(left, phi_ex, beta);
    let energy_r = u0 * reduced_potential(right, phi_ex, beta);
    let barrier_energy = u0 * reduced_potential(barrier, phi_ex, beta);

    let mut analysis = DoubleWellAnalysis {
        phi_min_l: left,
        phi_min_r: right,
        phi_barrier: barrier,
        omega_l: well_frequency(params, left)?,
        omega_r: well_frequency(params, right)?,
        energy_l,
        energy_r,
        epsilon: (energy_l - energy_r) / HBAR,
        delta_est: 0.0,
        barrier_height: barrier_energy - energy_l.min(energy_r),
        circulating_current: (left - phi_ex) * FLUX_QUANTUM / params.inductance,
    };
    analysis.delta_est = tunneling_estimate(params, &analysis)?.delta;
    Ok(analysis)
}

fn select_wells(extrema: &[Extremum], phi_ex: f64) -> Result<(f64, f64, f64)> {
    let minima = extrema.iter().filter(|e| e.kind == ExtremumKind::Minimum).count();
    let barrier = extrema
        .iter()
        .enumerate()
        .filter(|(_, e)| e.kind == ExtremumKind::Maximum)
        .min_by(|a, b| {
            (a.1.phi - phi_ex)
                .abs()
                .total_cmp(&(b.1.phi - phi_ex).abs())
        });
    let Some((idx, top)) = barrier else {
        return Err(Error::NotDoubleWell { minima });
    };
    let left = extrema[..idx]
        .iter()
        .rev()
        .find(|e| e.kind == ExtremumKind::Minimum);
    let right = extrema[idx + 1..]
        .iter()
        .find(|e| e.kind == ExtremumKind::Minimum);
    match (left, right) {
        (Some(l), Some(r)) => Ok((l.phi, top.phi, r.phi)),
        _ => Err(Error::NotDoubleWell { minima }),
    }
}

/// Harmonic-oscillator ground state centred in one well:
/// ψ(Φ) = (a/π)^{1/4} exp(−a(Φ − Φ_c)²/2) with a = Cω/ħ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianWellState {
    /// Well centre (Wb).
    pub center: f64,
    /// Cω/ħ (Wb⁻²).
    pub stiffness: f64,
}

impl GaussianWellState {
    pub fn amplitude(&self, flux: f64) -> f64 {
        let x = flux - self.center;
        (self.stiffness / PI).powf(0.25) * (-0.5 * self.stiffness * x * x).exp()
    }

    /// ψ″(Φ)/ψ(Φ) = a²(Φ − Φ_c)² − a.
    fn curvature_ratio(&self, flux: f64) -> f64 {
        let x = flux - self.center;
        self.stiffness * self.stiffness * x * x - self.stiffness
    }

    /// Flux standard deviation of |ψ|² (Wb).
    pub fn width(&self) -> f64 {
        (0.5 / self.stiffness).sqrt()
    }

    /// Closed-form overlap ⟨self|other⟩.
    pub fn overlap(&self, other: &GaussianWellState) -> f64 {
        let (a, b) = (self.stiffness, other.stiffness);
        let dc = self.center - other.center;
        (a * b / (PI * PI)).powf(0.25) * (2.0 * PI / (a + b)).sqrt() * (-a * b * dc * dc / (2.0 * (a + b))).exp()
    }
}

/// The |L⟩ and |R⟩ Gaussians of the two wells.
pub fn gaussian_well_states(
    analysis: &DoubleWellAnalysis,
    params: &SquidParams,
) -> (GaussianWellState, GaussianWellState) {
    let make = |phi: f64, omega: f64| GaussianWellState {
        center: phi * FLUX_QUANTUM,
        stiffness: params.capacitance * omega / HBAR,
    };
    (
        make(analysis.phi_min_l, analysis.omega_l),
        make(analysis.phi_min_r, analysis.omega_r),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunnelingEstimate {
    /// Tunnelling amplitude Δ (rad/s), positive.
    pub delta: f64,
    /// ⟨L|R⟩.
    pub overlap: f64,
    /// Matrix elements ⟨i|H|j⟩/ħ (rad/s) in the Gaussian basis, order (L, R).
    pub h_ll: f64,
    pub h_lr: f64,
    pub h_rr: f64,
    /// False when Δ exceeds the smaller well frequency.
    pub two_level_valid: bool,
}

/// Tunnelling amplitude from the Gaussian well states, with
/// H = −(ħ²/2C) ∂²_Φ + U(Φ) integrated by composite Gauss–Legendre quadrature.
///
/// The two Gaussians are not orthogonal, so the raw ⟨L|H|R⟩ depends on the
/// zero of energy. The returned Δ is taken after symmetric removal of the
/// overlap, Δ = 2|H_LR − S(H_LL + H_RR)/2| / (1 − S²), which is invariant
/// under constant shifts of U and reduces to −2⟨L|H|R⟩ when S → 0.
pub fn tunneling_estimate(params: &SquidParams, analysis: &DoubleWellAnalysis) -> Result<TunnelingEstimate> {
    let (l, r) = gaussian_well_states(analysis, params);
    let kinetic = HBAR * HBAR / (2.0 * params.capacitance);
    let element = |bra: &GaussianWellState, ket: &GaussianWellState| {
        let integrand = |flux: f64| {
            let h_ket = (-kinetic * ket.curvature_ratio(flux) + params.potential(flux)) * ket.amplitude(flux);
            bra.amplitude(flux) * h_ket
        };
        let (lo, hi) = window(bra, ket);
        integrate_composite(integrand, lo, hi, 600, &gauss_legendre(16))
    };
    let h_ll = element(&l, &l) / HBAR;
    let h_rr = element(&r, &r) / HBAR;
    let h_lr = element(&l, &r) / HBAR;
    let s = l.overlap(&r);
    let delta = 2.0 * (h_lr - 0.5 * s * (h_ll + h_rr)).abs() / (1.0 - s * s);
    if !delta.is_finite() {
        return Err(Error::NoConvergence {
            what: "tunnelling quadrature",
            iterations: 1,
            residual: delta,
        });
    }
    let spacing = analysis.omega_l.min(analysis.omega_r);
    let two_level_valid = delta <= spacing;
    if !two_level_valid {
        warn!("tunnelling estimate {delta:e} rad/s exceeds well spacing {spacing:e} rad/s; two-level reduction is not valid");
    }
    Ok(TunnelingEstimate {
        delta,
        overlap: s,
        h_ll,
        h_lr,
        h_rr,
        two_level_valid,
    })
}

fn window(a: &GaussianWellState, b: &GaussianWellState) -> (f64, f64) {
    let w = 14.0 * a.width().max(b.width());
    (a.center.min(b.center) - w, a.center.max(b.center) + w)
}

/// Default relative tolerance on well asymmetry for [`circulating_current`].
pub const DEFAULT_SYMMETRY_TOLERANCE: f64 = 0.1;

/// Persistent current I with Î ≈ Iσ_z, I = (Φ_L − Φ_ex)/L.
///
/// Fails when |(Φ_L − Φ_ex) + (Φ_R − Φ_ex)| > `tolerance`·|Φ_L − Φ_ex|.
pub fn circulating_current(params: &SquidParams, analysis: &DoubleWellAnalysis, tolerance: f64) -> Result<f64> {
    let phi_ex = params.phi_ex();
    let dl = analysis.phi_min_l - phi_ex;
    let dr = analysis.phi_min_r - phi_ex;
    let ratio = (dl + dr).abs() / dl.abs();
    if !(ratio <= tolerance) {
        return Err(Error::SymmetryViolation { ratio, tolerance });
    }
    Ok(dl * FLUX_QUANTUM / params.inductance)
}

/// Two-level flux qubit (ε, Δ in rad/s, current in A).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxQubit {
    pub epsilon: f64,
    pub delta: f64,
    pub circulating_current: f64,
}

impl FluxQubit {
    pub fn new(epsilon: f64, delta: f64, circulating_current: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::param("delta", format!("must be positive, got {delta}")));
        }
        Ok(FluxQubit {
            epsilon,
            delta,
            circulating_current,
        })
    }

    pub fn from_analysis(analysis: &DoubleWellAnalysis) -> Result<Self> {
        Self::new(analysis.epsilon, analysis.delta_est, analysis.circulating_current)
    }

    /// Eigenvalues (ground, excited) = ∓½√(ε² + Δ²).
    pub fn levels(&self) -> (f64, f64) {
        let half = 0.5 * self.epsilon.hypot(self.delta);
        (-half, half)
    }
}

/// (ε/2)σ_z − (Δ/2)σ_x in the (|L⟩, |R⟩) basis, rad/s.
pub fn flux_qubit_hamiltonian(q: &FluxQubit) -> Matrix2<Complex64> {
    let c = |x: f64| Complex64::new(x, 0.0);
    Matrix2::new(
        c(0.5 * q.epsilon),
        c(-0.5 * q.delta),
        c(-0.5 * q.delta),
        c(-0.5 * q.epsilon),
    )
}

/// Samples of U(φ)/U₀ on `n` evenly spaced points of `[lo, hi]`.
pub fn sample_potential(params: &SquidParams, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let (phi_ex, beta) = (params.phi_ex(), params.beta_l());
    let n = n.max(2);
    (0..n)
        .map(|i| {
            let phi = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            (phi, reduced_potential(phi, phi_ex, beta))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;

    fn representative(beta: f64, phi_ex: f64) -> SquidParams {
        SquidParams::from_reduced(100e-12, 10e-15, beta, phi_ex).unwrap()
    }

    #[test]
    fn reduced_potential_values() {
        assert_eq!(reduced_potential(0.0, 0.0, 0.0), 0.0);
        assert_eq!(reduced_potential(0.0, 0.0, 2.1), -2.1);
    }

    #[test]
    fn reduced_potential_symmetric_about_half() {
        for i in 0..=200 {
            let phi = -0.5 + 2.0 * i as f64 / 200.0;
            let a = reduced_potential(phi, 0.5, 2.1);
            let b = reduced_potential(1.0 - phi, 0.5, 2.1);
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn double_well_shape() {
        let ext = find_extrema_with(0.51, 2.1, &ExtremaSearch::default()).unwrap();
        let kinds: Vec<_> = ext.iter().map(|e| e.kind).collect();
        assert_eq!(
            kinds,
            vec![ExtremumKind::Minimum, ExtremumKind::Maximum, ExtremumKind::Minimum]
        );
        assert!(ext[0].phi < ext[1].phi && ext[1].phi < ext[2].phi);
        // Tilt toward larger φ deepens the right well.
        let u = |phi| reduced_potential(phi, 0.51, 2.1);
        assert!(u(ext[2].phi) < u(ext[0].phi));
    }

    #[test]
    fn quadratic_potential_single_minimum() {
        let ext = find_extrema_with(0.3, 0.0, &ExtremaSearch::default()).unwrap();
        assert_eq!(ext.len(), 1);
        assert_eq!(ext[0].kind, ExtremumKind::Minimum);
        assert!((ext[0].phi - 0.3).abs() < 1e-12);
        let ext = find_extrema_with(0.3, 0.5, &ExtremaSearch::default()).unwrap();
        assert_eq!(ext.len(), 1);
    }

    #[test]
    fn unit_beta_is_single_minimum() {
        let ext = find_extrema_with(0.5, 1.0, &ExtremaSearch::default()).unwrap();
        let minima = ext.iter().filter(|e| e.kind == ExtremumKind::Minimum).count();
        assert_eq!(minima, 1);
        assert!(ext.iter().all(|e| e.kind == ExtremumKind::Minimum));
    }

    #[test]
    fn well_frequency_limits() {
        let p = SquidParams::new(100e-12, 10e-15, 1e-30, 0.0).unwrap();
        let w = well_frequency(&p, 0.123).unwrap();
        assert!((w - 1e12).abs() / 1e12 < 1e-9);
        let p = representative(2.1, 0.5);
        assert!(well_frequency(&p, 0.5).is_err());
    }

    #[test]
    fn symmetric_flux_gives_zero_bias() {
        let p = representative(2.1, 0.5);
        let a = analyze_double_well(&p).unwrap();
        assert!(a.epsilon.abs() <= 1e-9 * a.energy_l.abs() / HBAR);
        assert!((a.omega_l - a.omega_r).abs() / a.omega_l < 1e-9);
        let i = circulating_current(&p, &a, DEFAULT_SYMMETRY_TOLERANCE).unwrap();
        let ir = (a.phi_min_r - p.phi_ex()) * FLUX_QUANTUM / p.inductance;
        assert!((i.abs() - ir.abs()).abs() <= 1e-9 * i.abs());
    }

    #[test]
    fn current_vanishes_as_wells_merge() {
        let big = analyze_double_well(&representative(2.1, 0.5)).unwrap();
        let small = analyze_double_well(&representative(1.001, 0.5)).unwrap();
        assert!(small.circulating_current.abs() < 0.1 * big.circulating_current.abs());
    }

    #[test]
    fn asymmetric_wells_are_rejected() {
        let p = representative(2.1, 0.62);
        let a = analyze_double_well(&p).unwrap();
        assert!(matches!(
            circulating_current(&p, &a, 0.05),
            Err(Error::SymmetryViolation { .. })
        ));
    }

    #[test]
    fn single_well_is_not_a_double_well() {
        assert!(matches!(
            analyze_double_well(&representative(0.5, 0.3)),
            Err(Error::NotDoubleWell { minima: 1 })
        ));
    }

    #[test]
    fn gaussian_overlap_decays_with_separation() {
        let a = GaussianWellState { center: 0.0, stiffness: 4.0 };
        assert!((a.overlap(&a) - 1.0).abs() < 1e-14);
        let mut last = 1.0;
        for c in [1.0, 2.0, 4.0, 8.0] {
            let b = GaussianWellState { center: c, stiffness: 4.0 };
            let s = a.overlap(&b);
            assert!(s < last);
            last = s;
        }
        assert!(last < 1e-20);
    }

    #[test]
    fn hamiltonian_spectrum() {
        let q = FluxQubit::new(0.0, 2.0, 0.0).unwrap();
        let h = flux_qubit_hamiltonian(&q);
        let eig = SymmetricEigen::new(h);
        let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
        // Ground state is the symmetric combination.
        let idx = if eig.eigenvalues[0] < eig.eigenvalues[1] { 0 } else { 1 };
        let v = eig.eigenvectors.column(idx);
        assert!((v[0] - v[1]).norm() < 1e-12);

        let q = FluxQubit::new(3.0, 4.0, 0.0).unwrap();
        let (g, e) = q.levels();
        assert_eq!(e - g, 5.0);
        assert!(FluxQubit::new(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn invalid_circuit_rejected() {
        assert!(SquidParams::new(-1e-10, 1e-14, 1e-6, 0.0).is_err());
        assert!(SquidParams::new(1e-10, 0.0, 1e-6, 0.0).is_err());
        assert!(SquidParams::new(1e-10, 1e-14, f64::NAN, 0.0).is_err());
    }
}
