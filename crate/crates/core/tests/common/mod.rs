#![allow(dead_code)]

use std::f64::consts::PI;

use fluxbec::constants::MU_0;
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// K(k) and E(k) from their Maclaurin series in k², summed until the terms
/// stop changing the result.
pub fn elliptic_series(k: f64) -> (f64, f64) {
    let m = k * k;
    let (mut kk, mut ee) = (1.0, 1.0);
    let mut c = 1.0; // [(2n)!/(4ⁿ n!²)]²
    let mut p = 1.0;
    for n in 1..20_000 {
        let nf = n as f64;
        let r = (2.0 * nf - 1.0) / (2.0 * nf);
        c *= r * r;
        p *= m;
        let t = c * p;
        kk += t;
        ee += t / (1.0 - 2.0 * nf);
        if t < 1e-19 {
            break;
        }
    }
    (0.5 * PI * kk, 0.5 * PI * ee)
}

/// Loop of radius `d` about `axis` through `center`, current counter-clockwise
/// about the axis. Returns (A, B) by the periodic trapezoidal rule with `n` nodes.
pub fn biot_savart(
    center: &Vector3<f64>,
    axis: &Vector3<f64>,
    d: f64,
    current: f64,
    point: &Vector3<f64>,
    n: usize,
) -> (Vector3<f64>, Vector3<f64>) {
    let w = axis.normalize();
    let helper = if w.z.abs() < 0.9 { Vector3::z() } else { Vector3::x() };
    let u1 = w.cross(&helper).normalize();
    let u2 = w.cross(&u1);
    let mut a = Vector3::zeros();
    let mut b = Vector3::zeros();
    let h = 2.0 * PI / n as f64;
    for i in 0..n {
        let t = i as f64 * h;
        let src = center + (u1 * t.cos() + u2 * t.sin()) * d;
        let dl = (u2 * t.cos() - u1 * t.sin()) * d * h;
        let r = point - src;
        let rn = r.norm();
        a += dl / rn;
        b += dl.cross(&r) / (rn * rn * rn);
    }
    let k = MU_0 * current / (4.0 * PI);
    (a * k, b * k)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Points in the cube [−3d, 3d]³ at least `clearance` from the loop wire
/// (loop centred at the origin in the xy-plane).
pub fn random_points(n: usize, d: f64, clearance: f64, seed: u64) -> Vec<Vector3<f64>> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = Vector3::new(
            r.random_range(-3.0..3.0),
            r.random_range(-3.0..3.0),
            r.random_range(-3.0..3.0),
        ) * d;
        let rho = p.x.hypot(p.y);
        if (rho - d).hypot(p.z) > clearance {
            out.push(p);
        }
    }
    out
}

pub fn rel_err(got: &Vector3<f64>, want: &Vector3<f64>) -> f64 {
    (got - want).norm() / want.norm()
}
