//! Classical fields of the SQUID loop, modelled as a thin circular filament.
//!
//! With ρ and z the cylindrical coordinates of the field point about the loop
//! axis, s² = (d + ρ)² + z² and m = κ² = 4dρ/s², the azimuthal vector
//! potential is
//!
//! ```text
//! A_φ = (μ₀/4π) (4Id/s) [(2 − m) K(κ) − 2E(κ)] / m
//! ```
//!
//! It is evaluated as A_φ = (μ₀I/π)·4d²ρ·h(m)/s³ with
//! h(m) = [(2 − m)K − 2E]/m², which is regular at m = 0. The magnetic
//! field follows from analytic derivatives of the same expression.

use std::f64::consts::PI;

use nalgebra::{Unit, Vector3};

use crate::constants::MU_0;
use crate::elliptic::complete_integrals;
use crate::error::{Error, Result};

/// Below this parameter value h(m) and h′(m) are summed from their Maclaurin
/// series; above it the closed form has no significant cancellation.
const SERIES_THRESHOLD: f64 = 0.3;

#[derive(Debug, Clone, PartialEq)]
pub struct LoopGeometry {
    /// Loop radius d (m).
    pub radius: f64,
    /// Wire cross-section radius a (m), a < d/10.
    pub wire_radius: f64,
    pub center: Vector3<f64>,
    axis: Unit<Vector3<f64>>,
    // Orthonormal in-plane basis completing `axis` to a right-handed frame.
    e1: Vector3<f64>,
    e2: Vector3<f64>,
}

impl LoopGeometry {
    pub fn new(radius: f64, wire_radius: f64, center: Vector3<f64>, axis: Vector3<f64>) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::param("radius", format!("must be positive, got {radius}")));
        }
        if !(wire_radius.is_finite() && wire_radius > 0.0 && wire_radius < radius / 10.0) {
            return Err(Error::param(
                "wire_radius",
                format!("must satisfy 0 < a < d/10, got a = {wire_radius}, d = {radius}"),
            ));
        }
        if !center.iter().all(|c| c.is_finite()) {
            return Err(Error::param("center", "must be finite"));
        }
        let norm = axis.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::param("axis", "must be a non-zero finite vector"));
        }
        let axis = Unit::new_normalize(axis);
        let seed = if axis.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let e1 = (seed - axis.into_inner() * axis.dot(&seed)).normalize();
        let e2 = axis.cross(&e1);
        Ok(LoopGeometry {
            radius,
            wire_radius,
            center,
            axis,
            e1,
            e2,
        })
    }

    /// Loop of radius `radius` in the xy-plane centred at the origin.
    pub fn centered(radius: f64, wire_radius: f64) -> Result<Self> {
        Self::new(radius, wire_radius, Vector3::zeros(), Vector3::z())
    }

    pub fn axis(&self) -> Vector3<f64> {
        self.axis.into_inner()
    }

    /// Point at spherical coordinates (r, θ, azimuth) about the loop centre,
    /// θ measured from the loop axis.
    pub fn spherical_point(&self, r: f64, theta: f64, azimuth: f64) -> Vector3<f64> {
        let rho = r * theta.sin();
        self.center
            + self.axis.into_inner() * (r * theta.cos())
            + (self.e1 * azimuth.cos() + self.e2 * azimuth.sin()) * rho
    }

    fn local(&self, p: &Vector3<f64>) -> Local {
        let rel = p - self.center;
        let z = rel.dot(&self.axis);
        let radial = rel - self.axis.into_inner() * z;
        let rho = radial.norm();
        let e_rho = if rho > 0.0 { radial / rho } else { self.e1 };
        Local { rho, z, e_rho }
    }

    /// Distance from `p` to the wire centre line.
    pub fn distance_to_wire(&self, p: &Vector3<f64>) -> f64 {
        let l = self.local(p);
        (l.rho - self.radius).hypot(l.z)
    }

    fn check_outside(&self, p: &Vector3<f64>) -> Result<Local> {
        let l = self.local(p);
        let distance = (l.rho - self.radius).hypot(l.z);
        if !(distance >= self.wire_radius) {
            return Err(Error::InsideWire {
                distance,
                wire_radius: self.wire_radius,
            });
        }
        Ok(l)
    }
}

struct Local {
    rho: f64,
    z: f64,
    e_rho: Vector3<f64>,
}

/// A field evaluation point together with its loop-frame coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPoint {
    pub position: Vector3<f64>,
    /// Distance from the loop centre (m).
    pub r: f64,
    /// Polar angle from the loop axis (rad).
    pub theta: f64,
    /// True when the point lies inside the wire volume.
    pub inside_wire: bool,
}

impl FieldPoint {
    pub fn new(geometry: &LoopGeometry, position: Vector3<f64>) -> Self {
        let l = geometry.local(&position);
        FieldPoint {
            position,
            r: l.rho.hypot(l.z),
            theta: l.rho.atan2(l.z),
            inside_wire: (l.rho - geometry.radius).hypot(l.z) < geometry.wire_radius,
        }
    }

    pub fn spherical(geometry: &LoopGeometry, r: f64, theta: f64, azimuth: f64) -> Self {
        Self::new(geometry, geometry.spherical_point(r, theta, azimuth))
    }
}

/// h(m) = [(2 − m)K − 2E]/m² and its derivative, K and E at parameter m = κ².
/// `mc` = 1 − m is passed separately to keep precision near the wire.
fn bracket(m: f64, mc: f64) -> (f64, f64) {
    if m < SERIES_THRESHOLD {
        return bracket_series(m);
    }
    let (k, e) = complete_integrals(mc.sqrt());
    let n = (2.0 - m) * k - 2.0 * e;
    let dk = (e - mc * k) / (2.0 * m * mc);
    let de = (e - k) / (2.0 * m);
    let dn = -k + (2.0 - m) * dk - 2.0 * de;
    let h = n / (m * m);
    let dh = dn / (m * m) - 2.0 * n / (m * m * m);
    (h, dh)
}

fn bracket_series(m: f64) -> (f64, f64) {
    // (2 − m)K − 2E = Σ_{n≥2} aₙ mⁿ,
    // aₙ = (π/2)[cₙ²(2 − 2/(1 − 2n)) − cₙ₋₁²], cₙ = (2n)!/(4ⁿ n!²).
    let mut c_prev = 0.5; // c₁
    let mut h = 0.0;
    let mut dh = 0.0;
    let mut power = 1.0; // m^{n−2}
    let mut power_d = 0.0; // m^{n−3}
    for n in 2..400 {
        let nf = n as f64;
        let c = c_prev * (2.0 * nf - 1.0) / (2.0 * nf);
        let a = 0.5 * PI * (c * c * (2.0 - 2.0 / (1.0 - 2.0 * nf)) - c_prev * c_prev);
        let term = a * power;
        h += term;
        dh += (nf - 2.0) * a * power_d;
        if term.abs() <= 1e-18 * h.abs() && n > 4 {
            break;
        }
        power_d = power;
        power *= m;
        c_prev = c;
    }
    (h, dh)
}

struct Potentials {
    a_phi: f64,
    b_rho: f64,
    b_z: f64,
}

fn evaluate(geometry: &LoopGeometry, rho: f64, z: f64, current: f64) -> Potentials {
    let d = geometry.radius;
    let s2 = (d + rho) * (d + rho) + z * z;
    let s = s2.sqrt();
    let m = 4.0 * d * rho / s2;
    let mc = ((d - rho) * (d - rho) + z * z) / s2;
    let (h, dh) = bracket(m, mc);
    let pref = MU_0 * current / PI * 4.0 * d * d;
    let s3 = s2 * s;
    let s5 = s3 * s2;
    let a_phi = pref * rho * h / s3;
    let b_rho = pref * rho * z / s5 * (3.0 * h + 2.0 * m * dh);
    let u = rho * (d + rho) / s2;
    let b_z = pref / s3 * (2.0 * h + dh * m * (1.0 - 2.0 * u) - 3.0 * h * u);
    Potentials { a_phi, b_rho, b_z }
}

/// Azimuthal component A_φ of the vector potential (T·m) for loop current `current` (A).
pub fn vector_potential(p: &FieldPoint, geometry: &LoopGeometry, current: f64) -> Result<f64> {
    let l = geometry.check_outside(&p.position)?;
    Ok(evaluate(geometry, l.rho, l.z, current).a_phi)
}

/// Vector potential as a Cartesian vector, A_φ ê_φ.
pub fn vector_potential_vec(p: &FieldPoint, geometry: &LoopGeometry, current: f64) -> Result<Vector3<f64>> {
    let l = geometry.check_outside(&p.position)?;
    let a = evaluate(geometry, l.rho, l.z, current).a_phi;
    let e_phi = geometry.axis.cross(&l.e_rho);
    Ok(e_phi * a)
}

/// B = ∇ × A (T), as a Cartesian vector.
pub fn magnetic_field(p: &FieldPoint, geometry: &LoopGeometry, current: f64) -> Result<Vector3<f64>> {
    magnetic_field_at(&p.position, geometry, current)
}

pub fn magnetic_field_at(position: &Vector3<f64>, geometry: &LoopGeometry, current: f64) -> Result<Vector3<f64>> {
    let l = geometry.check_outside(position)?;
    let f = evaluate(geometry, l.rho, l.z, current);
    Ok(l.e_rho * f.b_rho + geometry.axis.into_inner() * f.b_z)
}

/// Scalar profiles multiplying the qubit operators: B̂(r) = B(r)σ_z and
/// Ê(r) = A(r)Δσ_y. No field quantisation is implied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldOperatorAmplitude {
    pub position: Vector3<f64>,
    /// Vector potential A(r) (T·m).
    pub vector_potential: Vector3<f64>,
    /// Coefficient of σ_z in B̂ (T).
    pub magnetic: Vector3<f64>,
    /// Coefficient of σ_y in Ê (V/m).
    pub electric: Vector3<f64>,
}

pub fn field_operator_amplitudes(
    points: &[Vector3<f64>],
    geometry: &LoopGeometry,
    current: f64,
    delta: f64,
) -> Result<Vec<FieldOperatorAmplitude>> {
    points
        .iter()
        .map(|&position| {
            let p = FieldPoint::new(geometry, position);
            let a = vector_potential_vec(&p, geometry, current)?;
            Ok(FieldOperatorAmplitude {
                position,
                vector_potential: a,
                magnetic: magnetic_field(&p, geometry, current)?,
                electric: a * delta,
            })
        })
        .collect()
}

/// Anything that can report a static magnetic field at a point.
pub trait MagneticSource: Sync {
    fn field_at(&self, position: &Vector3<f64>) -> Result<Vector3<f64>>;
}

/// The loop carrying a fixed current.
#[derive(Debug, Clone)]
pub struct CurrentLoop {
    pub geometry: LoopGeometry,
    pub current: f64,
}

impl MagneticSource for CurrentLoop {
    fn field_at(&self, position: &Vector3<f64>) -> Result<Vector3<f64>> {
        magnetic_field_at(position, &self.geometry, self.current)
    }
}

/// Spatially uniform field; used to check coupling normalisation.
#[derive(Debug, Clone, Copy)]
pub struct UniformField(pub Vector3<f64>);

impl MagneticSource for UniformField {
    fn field_at(&self, _position: &Vector3<f64>) -> Result<Vector3<f64>> {
        Ok(self.0)
    }
}
