use crate::error::{Error, Result};
use crate::quadrature::bisect;

/// W level treated as "on resonance" (within 1% of 1).
pub const RESONANCE_LEVEL: f64 = 0.99;
/// Off-resonance departure threshold, as a multiple of `w_off`.
const DEPARTURE_FACTOR: f64 = 1.01;

/// W(t) = w_off + (1 − w_off)·½[tanh((t − t_on)/τ) − tanh((t − t_off)/τ)].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RampSchedule {
    /// Midpoint of the rising edge (s).
    pub t_on: f64,
    /// Midpoint of the falling edge (s).
    pub t_off: f64,
    /// Edge time constant (s).
    pub tau: f64,
    /// Off-resonance plateau, as a fraction of E_hfs.
    pub w_off: f64,
}

impl RampSchedule {
    pub fn new(t_on: f64, t_off: f64, tau: f64, w_off: f64) -> Result<Self> {
        if !(t_on.is_finite() && t_off.is_finite() && t_on < t_off) {
            return Err(Error::param("t_on", format!("need t_on < t_off, got {t_on} and {t_off}")));
        }
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::param("tau", format!("must be positive, got {tau}")));
        }
        if !(w_off > 0.0 && w_off < 1.0 / DEPARTURE_FACTOR * RESONANCE_LEVEL) {
            return Err(Error::param("w_off", format!("must lie in (0, 0.98), got {w_off}")));
        }
        Ok(RampSchedule {
            t_on,
            t_off,
            tau,
            w_off,
        })
    }

    pub fn window(&self, t: f64) -> f64 {
        ramp_window(t, self)
    }

    /// W at the plateau centre.
    pub fn peak(&self) -> f64 {
        self.window(0.5 * (self.t_on + self.t_off))
    }

    fn midpoint(&self) -> f64 {
        0.5 * (self.t_on + self.t_off)
    }

    /// First time W rises through `level` on the leading edge.
    pub fn rising_crossing(&self, level: f64) -> Result<f64> {
        self.require_peak(level)?;
        let lo = self.t_on - 80.0 * self.tau;
        bisect(|t| self.window(t) - level, lo, self.midpoint(), self.xtol(), 400)
    }

    /// Time W falls back through `level` on the trailing edge.
    pub fn falling_crossing(&self, level: f64) -> Result<f64> {
        self.require_peak(level)?;
        let hi = self.t_off + 80.0 * self.tau;
        bisect(|t| self.window(t) - level, self.midpoint(), hi, self.xtol(), 400)
    }

    fn require_peak(&self, level: f64) -> Result<()> {
        let peak = self.peak();
        if peak < level {
            return Err(Error::NeverResonant { peak });
        }
        Ok(())
    }

    fn xtol(&self) -> f64 {
        1e-13 * self.tau.max(self.t_off - self.t_on)
    }
}

pub fn ramp_window(t: f64, s: &RampSchedule) -> f64 {
    let rise = ((t - s.t_on) / s.tau).tanh();
    let fall = ((t - s.t_off) / s.tau).tanh();
    s.w_off + (1.0 - s.w_off) * 0.5 * (rise - fall)
}

/// Time for W to go from 1% above `w_off` to within 1% of resonance (s).
pub fn measured_ramp_time(s: &RampSchedule) -> Result<f64> {
    let start = s.rising_crossing(DEPARTURE_FACTOR * s.w_off)?;
    let end = s.rising_crossing(RESONANCE_LEVEL)?;
    Ok(end - start)
}

/// Time W spends at or above [`RESONANCE_LEVEL`] (s).
pub fn measured_hold_time(s: &RampSchedule) -> Result<f64> {
    Ok(s.falling_crossing(RESONANCE_LEVEL)? - s.rising_crossing(RESONANCE_LEVEL)?)
}

/// Edge argument x at which an isolated rising edge reaches `level`.
pub(crate) fn edge_argument(level: f64, w_off: f64) -> f64 {
    (2.0 * (level - w_off) / (1.0 - w_off) - 1.0).atanh()
}

/// τ giving ramp time `ramp` for an isolated edge.
pub fn tau_for_ramp_time(ramp: f64, w_off: f64) -> f64 {
    let span = edge_argument(RESONANCE_LEVEL, w_off) - edge_argument(DEPARTURE_FACTOR * w_off, w_off);
    ramp / span
}
