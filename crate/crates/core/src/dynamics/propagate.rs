use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;

use super::hamiltonian::{hamiltonian_for_window, HybridParams};
use super::schedule::RampSchedule;
use super::state::{HybridState, IDX_00, IDX_01, IDX_10, IDX_11};
use crate::error::{Error, Result};

/// Reference frame used for the integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Frame {
    /// Direct integration of i∂ₜψ = H(t)ψ.
    #[default]
    Lab,
    /// Interaction picture of the static part H₀ = diag(E, 0, 0, −E).
    Rotating,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub frame: Frame,
    /// Steps per period of the fastest oscillation in the chosen frame.
    pub steps_per_period: f64,
    /// Extra refinement on the ramp edges: the step is at most τ/edge_steps there.
    pub edge_steps: f64,
    /// Number of equally spaced output samples (including both ends).
    pub samples: usize,
    pub norm_tolerance: f64,
    pub max_steps: u64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions {
            frame: Frame::Lab,
            steps_per_period: 100.0,
            edge_steps: 20.0,
            samples: 1001,
            norm_tolerance: 1e-9,
            max_steps: 2_000_000_000,
        }
    }
}

impl IntegratorOptions {
    pub fn with_frame(mut self, frame: Frame) -> Self {
        self.frame = frame;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    /// Largest step away from the ramp edges.
    fn base_step(&self, params: &HybridParams) -> f64 {
        let e = params.e_hfs.abs();
        // In the rotating frame the counter-rotating coupling still turns at 2E.
        let fastest = match self.frame {
            Frame::Lab => e,
            Frame::Rotating => 2.0 * e,
        };
        let mut step = f64::INFINITY;
        if fastest > 0.0 {
            step = 2.0 * PI / fastest / self.steps_per_period;
        }
        let om = params.omega.norm();
        if om > 0.0 {
            step = step.min(2.0 * PI / om / self.steps_per_period);
        }
        step
    }
}

/// exp(−i H dt) for Hermitian H.
pub fn expm_hermitian(h: &Matrix4<Complex64>, dt: f64) -> Matrix4<Complex64> {
    let eig = SymmetricEigen::new(*h);
    let v = eig.eigenvectors;
    let phases = Matrix4::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -l * dt)));
    v * phases * v.adjoint()
}

/// exp(−i H dt) for a Hermitian 2×2 block, via H = a𝟙 + b·σ.
fn expm_hermitian_2(h: &Matrix2<Complex64>, dt: f64) -> Matrix2<Complex64> {
    let a = 0.5 * (h[(0, 0)].re + h[(1, 1)].re);
    let bz = 0.5 * (h[(0, 0)].re - h[(1, 1)].re);
    let off = h[(0, 1)];
    let (bx, by) = (off.re, -off.im);
    let b = (bx * bx + by * by + bz * bz).sqrt();
    let global = Complex64::from_polar(1.0, -a * dt);
    let (c, s) = ((b * dt).cos(), (b * dt).sin());
    let i = Complex64::i();
    if b == 0.0 {
        return Matrix2::identity() * global;
    }
    let (nx, ny, nz) = (bx / b, by / b, bz / b);
    let m = Matrix2::new(
        Complex64::new(c, 0.0) - i * s * nz,
        -i * s * Complex64::new(nx, -ny),
        -i * s * Complex64::new(nx, ny),
        Complex64::new(c, 0.0) + i * s * nz,
    );
    m * global
}

const BLOCKS: [[usize; 2]; 2] = [[IDX_11, IDX_00], [IDX_10, IDX_01]];

fn decoupled(h: &Matrix4<Complex64>) -> bool {
    [IDX_11, IDX_00].iter().all(|&a| [IDX_10, IDX_01].iter().all(|&b| h[(a, b)] == Complex64::default()))
}

fn apply_exp(h: &Matrix4<Complex64>, dt: f64, psi: &mut Vector4<Complex64>) {
    if decoupled(h) {
        for blk in BLOCKS {
            let sub = Matrix2::new(h[(blk[0], blk[0])], h[(blk[0], blk[1])], h[(blk[1], blk[0])], h[(blk[1], blk[1])]);
            let u = expm_hermitian_2(&sub, dt);
            let (x, y) = (psi[blk[0]], psi[blk[1]]);
            psi[blk[0]] = u[(0, 0)] * x + u[(0, 1)] * y;
            psi[blk[1]] = u[(1, 0)] * x + u[(1, 1)] * y;
        }
    } else {
        *psi = expm_hermitian(h, dt) * *psi;
    }
}

/// Diagonal of H₀ = (E/2)(σ_z⊗𝟙 + 𝟙⊗σ_z).
fn static_diagonal(e: f64) -> [f64; 4] {
    let mut d = [0.0; 4];
    d[IDX_11] = e;
    d[IDX_10] = 0.0;
    d[IDX_01] = 0.0;
    d[IDX_00] = -e;
    d
}

struct FrameHamiltonian<'a> {
    params: &'a HybridParams,
    schedule: &'a RampSchedule,
    frame: Frame,
    h0: [f64; 4],
}

impl FrameHamiltonian<'_> {
    fn at(&self, t: f64) -> Matrix4<Complex64> {
        let mut h = hamiltonian_for_window(self.schedule.window(t), self.params);
        if self.frame == Frame::Rotating {
            for a in 0..4 {
                h[(a, a)] -= Complex64::new(self.h0[a], 0.0);
                for b in 0..4 {
                    if a != b && h[(a, b)] != Complex64::default() {
                        h[(a, b)] *= Complex64::from_polar(1.0, (self.h0[a] - self.h0[b]) * t);
                    }
                }
            }
        }
        h
    }

    fn to_lab(&self, psi: &Vector4<Complex64>, t: f64) -> Vector4<Complex64> {
        match self.frame {
            Frame::Lab => *psi,
            Frame::Rotating => Vector4::from_fn(|a, _| psi[a] * Complex64::from_polar(1.0, -self.h0[a] * t)),
        }
    }

    fn from_lab(&self, psi: &Vector4<Complex64>, t: f64) -> Vector4<Complex64> {
        match self.frame {
            Frame::Lab => *psi,
            Frame::Rotating => Vector4::from_fn(|a, _| psi[a] * Complex64::from_polar(1.0, self.h0[a] * t)),
        }
    }

    /// Fourth-order commutator-free Magnus step from t to t + dt.
    fn step(&self, t: f64, dt: f64, psi: &mut Vector4<Complex64>) {
        let r = 3f64.sqrt() / 6.0;
        let h1 = self.at(t + (0.5 - r) * dt);
        let h2 = self.at(t + (0.5 + r) * dt);
        let a1 = (3.0 - 2.0 * 3f64.sqrt()) / 12.0;
        let a2 = (3.0 + 2.0 * 3f64.sqrt()) / 12.0;
        apply_exp(&(h1 * Complex64::new(a2, 0.0) + h2 * Complex64::new(a1, 0.0)), dt, psi);
        apply_exp(&(h1 * Complex64::new(a1, 0.0) + h2 * Complex64::new(a2, 0.0)), dt, psi);
    }
}

/// Integrates from `initial.time` to `t_end`, calling `observer(t, ψ_lab)` on an
/// equally spaced output grid. Returns the lab-frame state at `t_end`.
pub fn propagate<F>(
    initial: &HybridState,
    schedule: &RampSchedule,
    params: &HybridParams,
    t_end: f64,
    options: &IntegratorOptions,
    mut observer: F,
) -> Result<HybridState>
where
    F: FnMut(f64, &Vector4<Complex64>),
{
    let t0 = initial.time;
    let span = t_end - t0;
    if !(span.is_finite() && span > 0.0) {
        return Err(Error::param("t_end", format!("must exceed the initial time {t0}, got {t_end}")));
    }
    if options.samples < 2 {
        return Err(Error::param("samples", "need at least two output samples"));
    }
    let norm0 = initial.norm();
    if (norm0 - 1.0).abs() > options.norm_tolerance {
        return Err(Error::param("initial", format!("state not normalized, norm = {norm0}")));
    }
    let base = options.base_step(params);
    let fine = base.min(schedule.tau / options.edge_steps);
    let zone = 12.0 * schedule.tau;
    let edges = [
        (schedule.t_on - zone, schedule.t_on + zone),
        (schedule.t_off - zone, schedule.t_off + zone),
    ];

    let mut breaks: Vec<f64> = (0..options.samples)
        .map(|k| t0 + span * k as f64 / (options.samples - 1) as f64)
        .collect();
    let sample_count = breaks.len();
    for &(a, b) in &edges {
        for x in [a, b] {
            if x > t0 && x < t_end {
                breaks.push(x);
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let frame = FrameHamiltonian {
        params,
        schedule,
        frame: options.frame,
        h0: static_diagonal(params.e_hfs),
    };
    let mut psi = frame.from_lab(&initial.amplitudes, t0);
    let mut steps: u64 = 0;
    let mut next_sample = 0usize;
    let sample_time = |k: usize| t0 + span * k as f64 / (sample_count - 1) as f64;

    observer(t0, &initial.amplitudes);
    next_sample += 1;
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let len = b - a;
        if len <= 0.0 {
            continue;
        }
        let on_edge = edges.iter().any(|&(lo, hi)| a < hi && b > lo);
        let max_dt = if on_edge { fine } else { base };
        let n = (len / max_dt).ceil().max(1.0);
        if n > options.max_steps as f64 || steps as f64 + n > options.max_steps as f64 {
            return Err(Error::StepUnderflow { step: len / n, span });
        }
        let n = n as u64;
        let dt = len / n as f64;
        if dt < 1e-15 * span && len > 1e-15 * span {
            return Err(Error::StepUnderflow { step: dt, span });
        }
        for k in 0..n {
            frame.step(a + k as f64 * dt, dt, &mut psi);
        }
        steps += n;
        if next_sample < sample_count && (b - sample_time(next_sample)).abs() <= 1e-12 * span {
            let drift = (psi.norm() - 1.0).abs();
            if drift > options.norm_tolerance {
                return Err(Error::NormDrift {
                    drift,
                    tolerance: options.norm_tolerance,
                    time: b,
                });
            }
            let lab = frame.to_lab(&psi, b);
            observer(b, &lab);
            next_sample += 1;
        }
    }
    log::debug!("propagated {span:.3e} s in {steps} steps ({:?} frame)", options.frame);
    Ok(HybridState {
        amplitudes: frame.to_lab(&psi, t_end),
        time: t_end,
    })
}
