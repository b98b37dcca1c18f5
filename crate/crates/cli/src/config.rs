//! Run configuration: the TOML schema as written by users, and its resolved,
//! unit-converted form.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use fluxbec::constants::FLUX_QUANTUM;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::units::{format_quantity, parse_quantity, Dimension};

/// Config failure tied to a field path such as `squid.critical_current`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for ConfigError {}

type Res<T> = Result<T, ConfigError>;

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub squid: Option<RawSquid>,
    #[serde(rename = "loop", skip_serializing_if = "Option::is_none")]
    pub loop_: Option<RawLoop>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bec: Option<RawBec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<RawDynamics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tomography: Option<RawTomography>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<RawOutput>,
    // Manifest sections; accepted so a manifest can be fed back as a config.
    #[allow(dead_code)]
    #[serde(skip_serializing)]
    pub tool: Option<toml::Table>,
    #[allow(dead_code)]
    #[serde(skip_serializing)]
    pub run: Option<toml::Table>,
    #[allow(dead_code)]
    #[serde(skip_serializing)]
    pub derived: Option<toml::Table>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawSquid {
    pub inductance: Option<String>,
    pub capacitance: Option<String>,
    pub critical_current: Option<String>,
    pub beta_l: Option<f64>,
    pub external_flux: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawLoop {
    pub radius: Option<String>,
    pub wire_radius: Option<String>,
    pub current: Option<String>,
    pub sample_r_min: Option<String>,
    pub sample_r_max: Option<String>,
    pub sample_points: Option<usize>,
    pub sample_theta_deg: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawBec {
    pub atom_count: Option<u64>,
    pub trap_frequency: Option<String>,
    pub mass: Option<String>,
    pub separation: Option<String>,
    pub hyperfine: Option<String>,
    pub transition_moment: Option<String>,
    pub quantization_axis: Option<[f64; 3]>,
    pub transition_direction: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawDynamics {
    pub profile: Option<String>,
    pub rabi: Option<String>,
    pub ramp_time: Option<String>,
    pub w_off: Option<f64>,
    pub hold_rule: Option<String>,
    pub frame: Option<String>,
    pub samples: Option<usize>,
    pub steps_per_period: Option<f64>,
    pub initial_state: Option<[[f64; 2]; 2]>,
    pub sweep_ramps: Option<Vec<String>>,
    pub validation_terms: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawTomography {
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub model: Option<String>,
    pub efficiency: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawOutput {
    pub directory: Option<String>,
    pub potential_points: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SquidConfig {
    pub inductance: f64,
    pub capacitance: f64,
    pub critical_current: f64,
    pub external_flux: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopConfig {
    pub radius: f64,
    pub wire_radius: f64,
    pub current: f64,
    pub sample_r_min: f64,
    pub sample_r_max: f64,
    pub sample_points: usize,
    pub sample_theta_deg: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BecConfig {
    pub atom_count: u64,
    pub trap_frequency: f64,
    pub mass: f64,
    pub separation: f64,
    pub hyperfine: f64,
    pub transition_moment: f64,
    pub quantization_axis: [f64; 3],
    pub transition_direction: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Desk,
    Fast,
}

/// E_hfs of the fast integrator profile (rad/s).
pub const FAST_HYPERFINE: f64 = 2.0 * PI * 100e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RabiSource {
    /// |Ω| given directly (rad/s).
    Fixed(f64),
    /// Ω computed from the loop and condensate blocks.
    Coupling,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsConfig {
    pub profile: Profile,
    pub rabi: RabiSource,
    pub ramp_time: f64,
    pub w_off: f64,
    pub hold_rule: fluxbec::dynamics::HoldRule,
    pub frame: fluxbec::dynamics::Frame,
    pub samples: usize,
    pub steps_per_period: f64,
    pub initial_state: [Complex64; 2],
    pub sweep_ramps: Vec<f64>,
    pub validation_terms: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShotModelKind {
    Sampled,
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TomographyConfig {
    pub shots: u64,
    pub seed: u64,
    pub model: ShotModelKind,
    pub efficiency: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub potential_points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub squid: SquidConfig,
    pub loop_: LoopConfig,
    pub bec: BecConfig,
    pub dynamics: DynamicsConfig,
    pub tomography: TomographyConfig,
    pub output: OutputConfig,
}

fn quantity(path: &str, value: Option<&str>, default: &str, dim: Dimension) -> Res<f64> {
    parse_quantity(value.unwrap_or(default), dim).map_err(|m| ConfigError::new(path, m))
}

fn positive(path: &str, value: Option<&str>, default: &str, dim: Dimension) -> Res<f64> {
    let v = quantity(path, value, default, dim)?;
    if v <= 0.0 {
        return Err(ConfigError::new(path, format!("must be positive, got {}", value.unwrap_or(default))));
    }
    Ok(v)
}

fn unit_vector(path: &str, v: [f64; 3]) -> Res<[f64; 3]> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if !(n.is_finite() && n > 0.0) {
        return Err(ConfigError::new(path, "must be a non-zero vector"));
    }
    Ok(v)
}

impl RunConfig {
    pub fn from_toml(text: &str, origin: &Path) -> Res<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| ConfigError::new(origin.display().to_string(), e.to_string()))?;
        Self::resolve(&raw)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::Error::new(e).context(format!("reading config {}", path.display())))?;
        Ok(Self::from_toml(&text, path)?)
    }

    pub fn defaults() -> Self {
        Self::resolve(&RawConfig::default()).expect("built-in defaults are valid")
    }

    pub fn resolve(raw: &RawConfig) -> Res<Self> {
        Ok(RunConfig {
            squid: resolve_squid(raw.squid.as_ref().cloned().unwrap_or_default())?,
            loop_: resolve_loop(raw.loop_.as_ref().cloned().unwrap_or_default())?,
            bec: resolve_bec(raw.bec.as_ref().cloned().unwrap_or_default())?,
            dynamics: resolve_dynamics(raw.dynamics.as_ref().cloned().unwrap_or_default())?,
            tomography: resolve_tomography(raw.tomography.as_ref().cloned().unwrap_or_default())?,
            output: resolve_output(raw.output.as_ref().cloned().unwrap_or_default())?,
        })
    }

    /// Fully explicit schema form; parses back to an identical config.
    pub fn to_raw(&self) -> RawConfig {
        use fluxbec::dynamics::{Frame, HoldRule};
        let q = |v: f64, d: Dimension| Some(format_quantity(v, d));
        let d = &self.dynamics;
        RawConfig {
            squid: Some(RawSquid {
                inductance: q(self.squid.inductance, Dimension::Inductance),
                capacitance: q(self.squid.capacitance, Dimension::Capacitance),
                critical_current: q(self.squid.critical_current, Dimension::Current),
                beta_l: None,
                external_flux: q(self.squid.external_flux, Dimension::Flux),
            }),
            loop_: Some(RawLoop {
                radius: q(self.loop_.radius, Dimension::Length),
                wire_radius: q(self.loop_.wire_radius, Dimension::Length),
                current: q(self.loop_.current, Dimension::Current),
                sample_r_min: q(self.loop_.sample_r_min, Dimension::Length),
                sample_r_max: q(self.loop_.sample_r_max, Dimension::Length),
                sample_points: Some(self.loop_.sample_points),
                sample_theta_deg: Some(self.loop_.sample_theta_deg.clone()),
            }),
            bec: Some(RawBec {
                atom_count: Some(self.bec.atom_count),
                trap_frequency: q(self.bec.trap_frequency, Dimension::Frequency),
                mass: q(self.bec.mass, Dimension::Mass),
                separation: q(self.bec.separation, Dimension::Length),
                hyperfine: q(self.bec.hyperfine, Dimension::Frequency),
                transition_moment: q(self.bec.transition_moment, Dimension::MagneticMoment),
                quantization_axis: Some(self.bec.quantization_axis),
                transition_direction: Some(self.bec.transition_direction),
            }),
            dynamics: Some(RawDynamics {
                profile: Some(match d.profile {
                    Profile::Desk => "desk".into(),
                    Profile::Fast => "fast".into(),
                }),
                rabi: Some(match d.rabi {
                    RabiSource::Fixed(v) => format_quantity(v, Dimension::Frequency),
                    RabiSource::Coupling => "coupling".into(),
                }),
                ramp_time: q(d.ramp_time, Dimension::Time),
                w_off: Some(d.w_off),
                hold_rule: Some(match d.hold_rule {
                    HoldRule::ResonantWindow => "resonant-window".into(),
                    HoldRule::MidpointSpacing => "midpoint-spacing".into(),
                }),
                frame: Some(match d.frame {
                    Frame::Lab => "lab".into(),
                    Frame::Rotating => "rotating".into(),
                }),
                samples: Some(d.samples),
                steps_per_period: Some(d.steps_per_period),
                initial_state: Some(d.initial_state.map(|c| [c.re, c.im])),
                sweep_ramps: Some(d.sweep_ramps.iter().map(|&r| format_quantity(r, Dimension::Time)).collect()),
                validation_terms: Some(d.validation_terms),
            }),
            tomography: Some(RawTomography {
                shots: Some(self.tomography.shots),
                seed: Some(self.tomography.seed),
                model: Some(match self.tomography.model {
                    ShotModelKind::Sampled => "sampled".into(),
                    ShotModelKind::Exact => "exact".into(),
                }),
                efficiency: Some(self.tomography.efficiency),
            }),
            output: Some(RawOutput {
                directory: Some(self.output.directory.display().to_string()),
                potential_points: Some(self.output.potential_points),
            }),
            tool: None,
            run: None,
            derived: None,
        }
    }

    pub fn squid_params(&self) -> fluxbec::Result<fluxbec::squid::SquidParams> {
        let s = &self.squid;
        fluxbec::squid::SquidParams::new(s.inductance, s.capacitance, s.critical_current, s.external_flux)
    }

    pub fn loop_geometry(&self) -> fluxbec::Result<fluxbec::loop_field::LoopGeometry> {
        fluxbec::loop_field::LoopGeometry::centered(self.loop_.radius, self.loop_.wire_radius)
    }

    pub fn bec_params(&self) -> fluxbec::bec::BecParams {
        use nalgebra::Vector3;
        let b = &self.bec;
        fluxbec::bec::BecParams {
            atom_count: b.atom_count,
            omega_ho: b.trap_frequency,
            mass: b.mass,
            trap_center: Vector3::new(0.0, 0.0, b.separation),
            e_hfs: b.hyperfine,
            moments: fluxbec::bec::MomentMatrix::rb87_like(
                Vector3::from(b.quantization_axis),
                Vector3::from(b.transition_direction),
                b.transition_moment,
            ),
        }
    }

    /// Hyperfine splitting used by the dynamics (rad/s).
    pub fn dynamics_hyperfine(&self) -> f64 {
        match self.dynamics.profile {
            Profile::Desk => self.bec.hyperfine,
            Profile::Fast => FAST_HYPERFINE,
        }
    }
}

fn resolve_squid(r: RawSquid) -> Res<SquidConfig> {
    let inductance = positive("squid.inductance", r.inductance.as_deref(), "100 pH", Dimension::Inductance)?;
    let capacitance = positive("squid.capacitance", r.capacitance.as_deref(), "10 fF", Dimension::Capacitance)?;
    let critical_current = match (r.critical_current.as_deref(), r.beta_l) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::new("squid.beta_l", "give either critical_current or beta_l, not both"))
        }
        (Some(ic), None) => positive("squid.critical_current", Some(ic), "", Dimension::Current)?,
        (None, beta) => {
            let beta = beta.unwrap_or(2.1);
            if !(beta.is_finite() && beta > 0.0) {
                return Err(ConfigError::new("squid.beta_l", format!("must be positive, got {beta}")));
            }
            beta * FLUX_QUANTUM / (2.0 * PI * inductance)
        }
    };
    let external_flux = quantity("squid.external_flux", r.external_flux.as_deref(), "0.5 Phi0", Dimension::Flux)?;
    Ok(SquidConfig {
        inductance,
        capacitance,
        critical_current,
        external_flux,
    })
}

fn resolve_loop(r: RawLoop) -> Res<LoopConfig> {
    let radius = positive("loop.radius", r.radius.as_deref(), "1 um", Dimension::Length)?;
    let wire_radius = positive("loop.wire_radius", r.wire_radius.as_deref(), "10 nm", Dimension::Length)?;
    if wire_radius >= radius / 10.0 {
        return Err(ConfigError::new("loop.wire_radius", "must be below a tenth of the loop radius"));
    }
    let current = quantity("loop.current", r.current.as_deref(), "1 mA", Dimension::Current)?;
    let sample_r_min = positive("loop.sample_r_min", r.sample_r_min.as_deref(), "1.5 um", Dimension::Length)?;
    let sample_r_max = positive("loop.sample_r_max", r.sample_r_max.as_deref(), "100 um", Dimension::Length)?;
    if sample_r_max <= sample_r_min {
        return Err(ConfigError::new("loop.sample_r_max", "must exceed loop.sample_r_min"));
    }
    let sample_points = r.sample_points.unwrap_or(200);
    if sample_points < 2 {
        return Err(ConfigError::new("loop.sample_points", "need at least 2 points"));
    }
    let sample_theta_deg = r.sample_theta_deg.unwrap_or_else(|| vec![0.0, 45.0, 90.0]);
    if sample_theta_deg.is_empty() || sample_theta_deg.iter().any(|t| !(0.0..=180.0).contains(t)) {
        return Err(ConfigError::new("loop.sample_theta_deg", "need polar angles in [0, 180] degrees"));
    }
    Ok(LoopConfig {
        radius,
        wire_radius,
        current,
        sample_r_min,
        sample_r_max,
        sample_points,
        sample_theta_deg,
    })
}

fn resolve_bec(r: RawBec) -> Res<BecConfig> {
    let atom_count = r.atom_count.unwrap_or(1_000_000);
    if atom_count == 0 {
        return Err(ConfigError::new("bec.atom_count", "need at least one atom"));
    }
    Ok(BecConfig {
        atom_count,
        trap_frequency: positive("bec.trap_frequency", r.trap_frequency.as_deref(), "50 Hz", Dimension::Frequency)?,
        mass: positive("bec.mass", r.mass.as_deref(), "86.909180527 u", Dimension::Mass)?,
        separation: positive("bec.separation", r.separation.as_deref(), "50 um", Dimension::Length)?,
        hyperfine: positive("bec.hyperfine", r.hyperfine.as_deref(), "6.835 GHz", Dimension::Frequency)?,
        transition_moment: positive(
            "bec.transition_moment",
            r.transition_moment.as_deref(),
            "1 muB",
            Dimension::MagneticMoment,
        )?,
        quantization_axis: unit_vector("bec.quantization_axis", r.quantization_axis.unwrap_or([1.0, 0.0, 0.0]))?,
        transition_direction: unit_vector(
            "bec.transition_direction",
            r.transition_direction.unwrap_or([0.0, 0.0, 1.0]),
        )?,
    })
}

fn resolve_dynamics(r: RawDynamics) -> Res<DynamicsConfig> {
    use fluxbec::dynamics::{Frame, HoldRule};
    let profile = match r.profile.as_deref().unwrap_or("desk") {
        "desk" => Profile::Desk,
        "fast" => Profile::Fast,
        other => return Err(ConfigError::new("dynamics.profile", format!("expected \"desk\" or \"fast\", got \"{other}\""))),
    };
    let rabi = match r.rabi.as_deref() {
        Some("coupling") => RabiSource::Coupling,
        other => RabiSource::Fixed(positive("dynamics.rabi", other, "1 MHz", Dimension::Frequency)?),
    };
    let ramp_time = positive("dynamics.ramp_time", r.ramp_time.as_deref(), "1 us", Dimension::Time)?;
    let w_off = r.w_off.unwrap_or(0.5);
    if !(w_off > 0.0 && w_off < 0.98) {
        return Err(ConfigError::new("dynamics.w_off", format!("must lie in (0, 0.98), got {w_off}")));
    }
    let hold_rule = match r.hold_rule.as_deref().unwrap_or("resonant-window") {
        "resonant-window" => HoldRule::ResonantWindow,
        "midpoint-spacing" => HoldRule::MidpointSpacing,
        other => {
            return Err(ConfigError::new(
                "dynamics.hold_rule",
                format!("expected \"resonant-window\" or \"midpoint-spacing\", got \"{other}\""),
            ))
        }
    };
    let frame = match r.frame.as_deref().unwrap_or("lab") {
        "lab" => Frame::Lab,
        "rotating" => Frame::Rotating,
        other => return Err(ConfigError::new("dynamics.frame", format!("expected \"lab\" or \"rotating\", got \"{other}\""))),
    };
    let samples = r.samples.unwrap_or(1001);
    if samples < 2 {
        return Err(ConfigError::new("dynamics.samples", "need at least 2 samples"));
    }
    let steps_per_period = r.steps_per_period.unwrap_or(100.0);
    if !(steps_per_period.is_finite() && steps_per_period >= 1.0) {
        return Err(ConfigError::new("dynamics.steps_per_period", "must be at least 1"));
    }
    let [a, b] = r.initial_state.unwrap_or([[0.0, 0.0], [1.0, 0.0]]);
    let initial_state = [Complex64::new(a[0], a[1]), Complex64::new(b[0], b[1])];
    let norm = initial_state[0].norm_sqr() + initial_state[1].norm_sqr();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(ConfigError::new("dynamics.initial_state", "amplitudes must not both vanish"));
    }
    let default_ramps = ["10 ns", "30 ns", "100 ns", "300 ns", "1 us"].map(String::from).to_vec();
    let sweep_ramps = r
        .sweep_ramps
        .unwrap_or(default_ramps)
        .iter()
        .enumerate()
        .map(|(i, s)| positive(&format!("dynamics.sweep_ramps[{i}]"), Some(s), "", Dimension::Time))
        .collect::<Res<Vec<f64>>>()?;
    if sweep_ramps.is_empty() {
        return Err(ConfigError::new("dynamics.sweep_ramps", "need at least one ramp time"));
    }
    Ok(DynamicsConfig {
        profile,
        rabi,
        ramp_time,
        w_off,
        hold_rule,
        frame,
        samples,
        steps_per_period,
        initial_state,
        sweep_ramps,
        validation_terms: r.validation_terms.unwrap_or(false),
    })
}

fn resolve_tomography(r: RawTomography) -> Res<TomographyConfig> {
    let shots = r.shots.unwrap_or(10_000);
    if shots == 0 {
        return Err(ConfigError::new("tomography.shots", "need at least one shot"));
    }
    let model = match r.model.as_deref().unwrap_or("sampled") {
        "sampled" => ShotModelKind::Sampled,
        "exact" => ShotModelKind::Exact,
        other => return Err(ConfigError::new("tomography.model", format!("expected \"sampled\" or \"exact\", got \"{other}\""))),
    };
    let efficiency = r.efficiency.unwrap_or(1.0);
    if !(0.0..=1.0).contains(&efficiency) {
        return Err(ConfigError::new("tomography.efficiency", format!("must lie in [0, 1], got {efficiency}")));
    }
    Ok(TomographyConfig {
        shots,
        seed: r.seed.unwrap_or(1),
        model,
        efficiency,
    })
}

fn resolve_output(r: RawOutput) -> Res<OutputConfig> {
    let potential_points = r.potential_points.unwrap_or(2001);
    if potential_points < 2 {
        return Err(ConfigError::new("output.potential_points", "need at least 2 points"));
    }
    Ok(OutputConfig {
        directory: PathBuf::from(r.directory.unwrap_or_else(|| "fluxbec-out".into())),
        potential_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Res<RunConfig> {
        RunConfig::from_toml(text, Path::new("test.toml"))
    }

    #[test]
    fn minimal_squid_block_gets_defaults() {
        let c = parse("[squid]\ninductance = \"200 pH\"\n").unwrap();
        assert_eq!(c.squid.inductance, 200.0 * 1e-12);
        assert_eq!(c.loop_, RunConfig::defaults().loop_);
        assert_eq!(c.tomography.shots, 10_000);
    }

    #[test]
    fn negative_current_names_the_field() {
        let e = parse("[squid]\ncritical_current = \"−1 mA\"\n").unwrap_err();
        assert_eq!(e.path, "squid.critical_current");
        assert!(e.message.contains("positive"));
    }

    #[test]
    fn unknown_keys_rejected() {
        let e = parse("[squid]\ninductanse = \"1 pH\"\n").unwrap_err();
        assert!(e.message.contains("inductanse"), "{e}");
        assert!(parse("[nonsense]\n").is_err());
    }

    #[test]
    fn wrong_unit_rejected() {
        let e = parse("[bec]\nseparation = \"50 Hz\"\n").unwrap_err();
        assert_eq!(e.path, "bec.separation");
    }

    #[test]
    fn explicit_form_round_trips() {
        let c = parse("[squid]\nbeta_l = 2.1\nexternal_flux = \"0.51 Phi0\"\n[dynamics]\nrabi = \"coupling\"\n").unwrap();
        let text = toml::to_string(&c.to_raw()).unwrap();
        assert_eq!(parse(&text).unwrap(), c);
    }
}
