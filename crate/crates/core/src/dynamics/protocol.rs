use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::Vector4;
use num_complex::Complex64;
use rayon::prelude::*;

use super::hamiltonian::HybridParams;
use super::propagate::{propagate, IntegratorOptions};
use super::schedule::{edge_argument, measured_hold_time, measured_ramp_time, tau_for_ramp_time, RampSchedule, RESONANCE_LEVEL};
use super::state::{concurrence, HybridState, IDX_00, IDX_01, IDX_10};
use crate::error::{Error, Result};
use crate::quadrature::bisect;

/// How the resonant hold is turned into ramp midpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HoldRule {
    /// Time spent at W ≥ 0.99 equals the hold target.
    #[default]
    ResonantWindow,
    /// Midpoint spacing t_off − t_on equals the hold target.
    MidpointSpacing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    pub params: HybridParams,
    /// Target ramp time (s), see [`measured_ramp_time`].
    pub ramp_time: f64,
    pub w_off: f64,
    pub hold_rule: HoldRule,
    pub integrator: IntegratorOptions,
}

impl ProtocolConfig {
    pub fn new(params: HybridParams, ramp_time: f64) -> Self {
        ProtocolConfig {
            params,
            ramp_time,
            w_off: 0.5,
            hold_rule: HoldRule::default(),
            integrator: IntegratorOptions::default(),
        }
    }

    /// E_hfs = 2π×100 MHz, |Ω| = 2π×1 MHz, 1 μs ramp.
    pub fn fast_profile() -> Self {
        Self::new(HybridParams::new(2.0 * PI * 100e6, Complex64::new(2.0 * PI * 1e6, 0.0)), 1e-6)
    }

    /// E_hfs = 2π×6.835 GHz, |Ω| = 2π×1 MHz, 1 μs ramp.
    pub fn desk_profile() -> Self {
        Self::new(
            HybridParams::new(2.0 * PI * crate::constants::RB87_HYPERFINE_HZ, Complex64::new(2.0 * PI * 1e6, 0.0)),
            1e-6,
        )
    }

    pub fn with_ramp_time(mut self, ramp_time: f64) -> Self {
        self.ramp_time = ramp_time;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.params.e_hfs.is_finite() && self.params.e_hfs > 0.0) {
            return Err(Error::param("e_hfs", format!("must be positive, got {}", self.params.e_hfs)));
        }
        let om = self.params.omega.norm();
        if !(om.is_finite() && om > 0.0) {
            return Err(Error::param("omega", "protocols need a nonzero Rabi frequency"));
        }
        if !(self.ramp_time.is_finite() && self.ramp_time > 0.0) {
            return Err(Error::param("ramp_time", format!("must be positive, got {}", self.ramp_time)));
        }
        Ok(())
    }

    /// Schedule holding resonance for a rotation `angle` = |Ω|·t_hold, and the end time.
    pub fn schedule_for(&self, angle: f64) -> Result<(RampSchedule, f64)> {
        self.validate()?;
        let tau = tau_for_ramp_time(self.ramp_time, self.w_off);
        let hold = angle / self.params.omega.norm();
        let spacing = match self.hold_rule {
            HoldRule::MidpointSpacing => hold,
            HoldRule::ResonantWindow => self.resonant_spacing(tau, hold)?,
        };
        let pad = 10.0 * tau + 20.0 * 2.0 * PI / self.params.e_hfs;
        let schedule = RampSchedule::new(pad, pad + spacing, tau, self.w_off)?;
        Ok((schedule, schedule.t_off + pad))
    }

    fn resonant_spacing(&self, tau: f64, hold: f64) -> Result<f64> {
        let window = |spacing: f64| -> f64 {
            match RampSchedule::new(0.0, spacing, tau, self.w_off) {
                Ok(s) if s.peak() >= RESONANCE_LEVEL => measured_hold_time(&s).unwrap_or(0.0),
                _ => 0.0,
            }
        };
        let hi = hold + 2.0 * tau * edge_argument(RESONANCE_LEVEL, self.w_off) + 40.0 * tau;
        let lo = 1e-9 * hi;
        bisect(|s| window(s) - hold, lo, hi, 1e-14 * hi, 400)
    }
}

/// State the protocol aims for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    /// α|00⟩ + β e^{iχ}|10⟩.
    Transfer { alpha: Complex64, beta: Complex64 },
    /// (|01⟩ + e^{iχ}|10⟩)/√2.
    Bell,
}

impl Target {
    pub fn state(&self, chi: f64) -> Vector4<Complex64> {
        let mut t = Vector4::zeros();
        let ph = Complex64::from_polar(1.0, chi);
        match *self {
            Target::Transfer { alpha, beta } => {
                t[IDX_00] = alpha;
                t[IDX_10] = beta * ph;
            }
            Target::Bell => {
                t[IDX_01] = Complex64::new(FRAC_1_SQRT_2, 0.0);
                t[IDX_10] = ph * FRAC_1_SQRT_2;
            }
        }
        t
    }

    /// |⟨target(0)|ψ⟩|.
    pub fn fidelity_raw(&self, psi: &Vector4<Complex64>) -> f64 {
        self.state(0.0).dotc(psi).norm().min(1.0)
    }

    /// max_χ |⟨target(χ)|ψ⟩| and the maximizing χ.
    pub fn fidelity_phase_opt(&self, psi: &Vector4<Complex64>) -> (f64, f64) {
        let (fixed, rotating) = match *self {
            Target::Transfer { alpha, beta } => (alpha.conj() * psi[IDX_00], beta.conj() * psi[IDX_10]),
            Target::Bell => (psi[IDX_01] * FRAC_1_SQRT_2, psi[IDX_10] * FRAC_1_SQRT_2),
        };
        let chi = if fixed.norm() > 0.0 && rotating.norm() > 0.0 {
            wrap_phase(rotating.arg() - fixed.arg())
        } else {
            0.0
        };
        ((fixed.norm() + rotating.norm()).min(1.0), chi)
    }
}

fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub w: f64,
    pub fidelity_raw: f64,
    pub fidelity_phase_opt: f64,
    /// [P00, P01, P10, P11].
    pub populations: [f64; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolResult {
    pub target: Target,
    pub schedule: RampSchedule,
    pub samples: Vec<Sample>,
    pub final_state: HybridState,
    pub fidelity_raw: f64,
    pub fidelity_phase_opt: f64,
    /// Phase χ of the best-matching target.
    pub chi: f64,
    pub concurrence: f64,
    pub ramp_time: f64,
    pub hold_time: f64,
}

impl ProtocolResult {
    /// BEC-qubit target (c₀, c₁) for transfer protocols, with the recorded phase applied.
    pub fn bec_target(&self) -> Option<[Complex64; 2]> {
        match self.target {
            Target::Transfer { alpha, beta } => Some([alpha, beta * Complex64::from_polar(1.0, self.chi)]),
            Target::Bell => None,
        }
    }

    /// Largest |‖ψ‖ − 1| is bounded by the integrator tolerance; this reports the final one.
    pub fn norm_drift(&self) -> f64 {
        (self.final_state.norm() - 1.0).abs()
    }
}

/// Propagates `initial` under `schedule` and records fidelities against `target`.
pub fn evolve(
    initial: &HybridState,
    schedule: &RampSchedule,
    params: &HybridParams,
    t_end: f64,
    target: Target,
    options: &IntegratorOptions,
) -> Result<ProtocolResult> {
    let mut samples = Vec::with_capacity(options.samples);
    let final_state = propagate(initial, schedule, params, t_end, options, |t, psi| {
        let state = HybridState {
            amplitudes: *psi,
            time: t,
        };
        samples.push(Sample {
            t,
            w: schedule.window(t),
            fidelity_raw: target.fidelity_raw(psi),
            fidelity_phase_opt: target.fidelity_phase_opt(psi).0,
            populations: state.populations(),
        });
    })?;
    let (fidelity_phase_opt, chi) = target.fidelity_phase_opt(&final_state.amplitudes);
    let ramp_time = measured_ramp_time(schedule).unwrap_or(f64::NAN);
    let hold_time = measured_hold_time(schedule).unwrap_or(0.0);
    Ok(ProtocolResult {
        target,
        schedule: *schedule,
        samples,
        fidelity_raw: target.fidelity_raw(&final_state.amplitudes),
        fidelity_phase_opt,
        chi,
        concurrence: concurrence(&final_state.amplitudes),
        final_state,
        ramp_time,
        hold_time,
    })
}

/// Generic resonant-hold protocol rotating the exchange block by `angle`.
pub fn run_protocol(initial: &HybridState, target: Target, angle: f64, cfg: &ProtocolConfig) -> Result<ProtocolResult> {
    let (schedule, t_end) = cfg.schedule_for(angle)?;
    let mut start = initial.clone();
    start.time = 0.0;
    evolve(&start, &schedule, &cfg.params, t_end, target, &cfg.integrator)
}

/// Swaps the flux-qubit state α|0⟩ + β|1⟩ into the BEC qubit (hold π/(2|Ω|)).
pub fn transfer_protocol(alpha: Complex64, beta: Complex64, cfg: &ProtocolConfig) -> Result<ProtocolResult> {
    let initial = HybridState::from_squid_qubit(alpha, beta)?;
    let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
    let target = Target::Transfer {
        alpha: alpha / norm,
        beta: beta / norm,
    };
    run_protocol(&initial, target, FRAC_PI_2, cfg)
}

/// Entangles |01⟩ into (|01⟩ + e^{iχ}|10⟩)/√2 (hold π/(4|Ω|)).
pub fn entangle_protocol(cfg: &ProtocolConfig) -> Result<ProtocolResult> {
    run_protocol(&HybridState::basis(0, 1), Target::Bell, FRAC_PI_4, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// Requested ramp time (s).
    pub ramp_time: f64,
    /// Ramp time measured on the realized schedule (s).
    pub measured_ramp_time: f64,
    pub fidelity_raw: f64,
    pub fidelity_phase_opt: f64,
}

/// One transfer run per ramp time, in parallel; rows sorted by ramp time.
pub fn sweep_ramp_times(
    alpha: Complex64,
    beta: Complex64,
    cfg: &ProtocolConfig,
    ramps: &[f64],
) -> Result<Vec<SweepRow>> {
    let mut rows = ramps
        .par_iter()
        .map(|&ramp| {
            let mut c = cfg.with_ramp_time(ramp);
            c.integrator.samples = 2;
            let r = transfer_protocol(alpha, beta, &c)?;
            Ok(SweepRow {
                ramp_time: ramp,
                measured_ramp_time: r.ramp_time,
                fidelity_raw: r.fidelity_raw,
                fidelity_phase_opt: r.fidelity_phase_opt,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.ramp_time.total_cmp(&b.ramp_time));
    Ok(rows)
}
