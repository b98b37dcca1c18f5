//! Pipeline stages. Each stage renders its CSV artifacts into memory; nothing
//! touches the filesystem until the whole subcommand has succeeded.

use std::f64::consts::PI;
use std::fmt::Write as _;

use anyhow::Context;
use fluxbec::bec::{couple, integrand_along_axis, CouplingResult};
use fluxbec::dynamics::{
    entangle_protocol, sweep_ramp_times, transfer_protocol, HybridParams, IntegratorOptions, ProtocolConfig,
    ProtocolResult, ValidationTerms,
};
use fluxbec::loop_field::{field_operator_amplitudes, FieldPoint};
use fluxbec::squid::{analyze_double_well, find_extrema, sample_potential, tunneling_estimate, ExtremumKind};
use fluxbec::tomography::{transfer_fidelity_experiment, Detector, ShotModel};
use num_complex::Complex64;

use crate::config::{RabiSource, RunConfig, ShotModelKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    SquidAnalyze,
    FieldSample,
    Coupling,
    Transfer,
    Entangle,
    SweepRamp,
    Tomography,
    FullPipeline,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::SquidAnalyze => "squid-analyze",
            Stage::FieldSample => "field-sample",
            Stage::Coupling => "coupling",
            Stage::Transfer => "transfer",
            Stage::Entangle => "entangle",
            Stage::SweepRamp => "sweep-ramp",
            Stage::Tomography => "tomography",
            Stage::FullPipeline => "full-pipeline",
        }
    }
}

/// Files to publish plus the derived quantities echoed in the manifest.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub files: Vec<(String, String)>,
    pub derived: toml::Table,
}

impl Artifacts {
    fn file(&mut self, name: &str, body: String) {
        self.files.push((name.to_string(), body));
    }

    fn derive(&mut self, section: &str, key: &str, value: impl Into<toml::Value>) {
        let entry = self
            .derived
            .entry(section.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        if let toml::Value::Table(t) = entry {
            t.insert(key.to_string(), value.into());
        }
    }
}

pub fn run(stage: Stage, cfg: &RunConfig) -> anyhow::Result<Artifacts> {
    let mut p = Pipeline {
        cfg,
        art: Artifacts::default(),
        coupling: None,
        transfer: None,
    };
    match stage {
        Stage::SquidAnalyze => p.squid()?,
        Stage::FieldSample => p.field()?,
        Stage::Coupling => {
            p.coupling()?;
        }
        Stage::Transfer => {
            p.transfer()?;
        }
        Stage::Entangle => p.entangle()?,
        Stage::SweepRamp => p.sweep()?,
        Stage::Tomography => p.tomography()?,
        Stage::FullPipeline => {
            p.squid()?;
            p.field()?;
            p.coupling()?;
            p.transfer()?;
            p.entangle()?;
            p.sweep()?;
            p.tomography()?;
        }
    }
    Ok(p.art)
}

struct Pipeline<'a> {
    cfg: &'a RunConfig,
    art: Artifacts,
    coupling: Option<CouplingResult>,
    transfer: Option<ProtocolResult>,
}

fn row(out: &mut String, fields: &[String]) {
    out.push_str(&fields.join(","));
    out.push('\n');
}

fn e(v: f64) -> String {
    format!("{v:e}")
}

impl Pipeline<'_> {
    fn squid(&mut self) -> anyhow::Result<()> {
        let params = self.cfg.squid_params().context("squid parameters")?;
        let analysis = analyze_double_well(&params).context("double-well analysis")?;
        let tunnel = tunneling_estimate(&params, &analysis).context("tunnelling estimate")?;
        let extrema = find_extrema(&params).context("locating extrema")?;
        let u0 = params.u0();

        let lo = analysis.phi_min_l - 0.5;
        let hi = analysis.phi_min_r + 0.5;
        let mut pot = String::from("phi_over_phi0,U_over_U0,U_joule\n");
        for (phi, u) in sample_potential(&params, lo, hi, self.cfg.output.potential_points) {
            row(&mut pot, &[e(phi), e(u), e(u * u0)]);
        }
        self.art.file("squid_potential.csv", pot);

        let mut ext = String::from("phi_over_phi0,kind,U_joule\n");
        for x in &extrema {
            let kind = match x.kind {
                ExtremumKind::Minimum => "minimum",
                ExtremumKind::Maximum => "maximum",
            };
            row(&mut ext, &[e(x.phi), kind.into(), e(params.potential(x.phi * fluxbec::constants::FLUX_QUANTUM))]);
        }
        self.art.file("squid_extrema.csv", ext);

        let mut summary = String::from("quantity,value,unit\n");
        let entries = [
            ("beta_l", params.beta_l(), "1"),
            ("plasma_frequency", params.plasma_frequency(), "rad/s"),
            ("phi_min_left", analysis.phi_min_l, "Phi0"),
            ("phi_min_right", analysis.phi_min_r, "Phi0"),
            ("phi_barrier", analysis.phi_barrier, "Phi0"),
            ("omega_left", analysis.omega_l, "rad/s"),
            ("omega_right", analysis.omega_r, "rad/s"),
            ("epsilon", analysis.epsilon, "rad/s"),
            ("delta", tunnel.delta, "rad/s"),
            ("well_overlap", tunnel.overlap, "1"),
            ("barrier_height", analysis.barrier_height, "J"),
            ("circulating_current", analysis.circulating_current, "A"),
        ];
        for (k, v, unit) in entries {
            row(&mut summary, &[k.into(), e(v), unit.into()]);
            self.art.derive("squid", k, v);
        }
        self.art.derive("squid", "two_level_valid", tunnel.two_level_valid);
        self.art.file("squid_summary.csv", summary);
        Ok(())
    }

    fn field(&mut self) -> anyhow::Result<()> {
        let l = &self.cfg.loop_;
        let geometry = self.cfg.loop_geometry().context("loop geometry")?;
        // Ê carries the tunnelling amplitude; fall back to zero if the circuit has no double well.
        let delta = self
            .cfg
            .squid_params()
            .and_then(|p| analyze_double_well(&p))
            .map(|a| a.delta_est)
            .unwrap_or(0.0);
        let n = l.sample_points;
        let ratio = (l.sample_r_max / l.sample_r_min).ln();
        let mut points = Vec::new();
        for &theta_deg in &l.sample_theta_deg {
            let theta = theta_deg.to_radians();
            for i in 0..n {
                let r = l.sample_r_min * (ratio * i as f64 / (n - 1) as f64).exp();
                let fp = FieldPoint::spherical(&geometry, r, theta, 0.0);
                if fp.inside_wire {
                    log::warn!("skipping r = {r:e} m, theta = {theta_deg} deg: inside the wire");
                    continue;
                }
                points.push((r, theta, fp.position));
            }
        }
        let positions: Vec<_> = points.iter().map(|p| p.2).collect();
        let amps = field_operator_amplitudes(&positions, &geometry, l.current, delta).context("field evaluation")?;
        let mut out = String::from("r_m,theta_rad,x_m,y_m,z_m,A_x,A_y,A_z,B_x,B_y,B_z,B_abs,E_x,E_y,E_z\n");
        for ((r, theta, _), a) in points.iter().zip(&amps) {
            let mut f = vec![e(*r), e(*theta)];
            f.extend(a.position.iter().map(|v| e(*v)));
            f.extend(a.vector_potential.iter().map(|v| e(*v)));
            f.extend(a.magnetic.iter().map(|v| e(*v)));
            f.push(e(a.magnetic.norm()));
            f.extend(a.electric.iter().map(|v| e(*v)));
            row(&mut out, &f);
        }
        self.art.file("field_samples.csv", out);
        self.art.derive("field", "center_field_tesla", fluxbec::constants::MU_0 * l.current / (2.0 * l.radius));
        self.art.derive("field", "tunnelling_delta", delta);
        Ok(())
    }

    fn coupling(&mut self) -> anyhow::Result<CouplingResult> {
        if let Some(c) = self.coupling {
            return Ok(c);
        }
        let geometry = self.cfg.loop_geometry().context("loop geometry")?;
        let params = self.cfg.bec_params();
        let current = self.cfg.loop_.current;
        let c = couple(&params, &geometry, current).context("coupling integrals")?;

        let mut out = String::from("quantity,value,unit\n");
        let om = c.omega_rabi;
        let entries = [
            ("separation", self.cfg.bec.separation, "m"),
            ("oscillator_length", params.oscillator_length(), "m"),
            ("omega_rabi_re", om.re, "rad/s"),
            ("omega_rabi_im", om.im, "rad/s"),
            ("omega_rabi_abs", om.norm(), "rad/s"),
            ("rabi_frequency_hz", om.norm() / (2.0 * PI), "Hz"),
            ("diagonal_shift", c.diagonal_shift, "rad/s"),
            ("zz_coupling", c.zz_coupling, "rad/s"),
        ];
        for (k, v, unit) in entries {
            row(&mut out, &[k.into(), e(v), unit.into()]);
            self.art.derive("coupling", k, v);
        }
        let labels = ["down", "up"];
        for (i, a) in labels.iter().enumerate() {
            for (j, b) in labels.iter().enumerate() {
                for (k, axis) in ["x", "y", "z"].iter().enumerate() {
                    row(&mut out, &[format!("g_{a}{b}_{axis}"), e(c.g.get(i, j)[k]), "T".into()]);
                }
            }
        }
        self.art.file("coupling.csv", out);

        let span = 4.0 * params.oscillator_length();
        let mut axis = String::from("offset_m,density_per_m3,integrand_x,integrand_y,integrand_z\n");
        for (s, density, v) in integrand_along_axis(&params, &geometry, current, span, 401).context("axis profile")? {
            row(&mut axis, &[e(s), e(density), e(v.x), e(v.y), e(v.z)]);
        }
        self.art.file("coupling_axis.csv", axis);
        self.coupling = Some(c);
        Ok(c)
    }

    fn protocol_config(&mut self) -> anyhow::Result<ProtocolConfig> {
        let d = &self.cfg.dynamics;
        let needs_coupling = d.rabi == RabiSource::Coupling || d.validation_terms;
        let coupling = if needs_coupling { Some(self.coupling()?) } else { None };
        let omega = match (d.rabi, coupling) {
            (RabiSource::Fixed(w), _) => Complex64::new(w, 0.0),
            (RabiSource::Coupling, Some(c)) => c.omega_rabi,
            (RabiSource::Coupling, None) => unreachable!("coupling computed above"),
        };
        let mut params = HybridParams::new(self.cfg.dynamics_hyperfine(), omega);
        if d.validation_terms {
            let c = coupling.expect("coupling computed above");
            params.validation = Some(ValidationTerms {
                diagonal_shift: c.diagonal_shift,
                zz_coupling: c.zz_coupling,
            });
        }
        let mut pc = ProtocolConfig::new(params, d.ramp_time);
        pc.w_off = d.w_off;
        pc.hold_rule = d.hold_rule;
        pc.integrator = IntegratorOptions::default().with_frame(d.frame).with_samples(d.samples);
        pc.integrator.steps_per_period = d.steps_per_period;
        self.art.derive("dynamics", "e_hfs", params.e_hfs);
        self.art.derive("dynamics", "omega_rabi_abs", omega.norm());
        Ok(pc)
    }

    fn timeseries(&mut self, name: &str, label: &str, pc: &ProtocolConfig, r: &ProtocolResult) {
        let s = &r.schedule;
        let mut out = String::new();
        let header = [
            ("protocol", label.to_string()),
            ("e_hfs_rad_s", e(pc.params.e_hfs)),
            ("omega_rabi_re_rad_s", e(pc.params.omega.re)),
            ("omega_rabi_im_rad_s", e(pc.params.omega.im)),
            ("t_on_s", e(s.t_on)),
            ("t_off_s", e(s.t_off)),
            ("tau_s", e(s.tau)),
            ("w_off", e(s.w_off)),
            ("ramp_time_s", e(r.ramp_time)),
            ("hold_time_s", e(r.hold_time)),
            ("final_fidelity_raw", e(r.fidelity_raw)),
            ("final_fidelity_phase_opt", e(r.fidelity_phase_opt)),
            ("chi_rad", e(r.chi)),
            ("concurrence", e(r.concurrence)),
            ("norm_drift", e(r.norm_drift())),
        ];
        for (k, v) in header {
            let _ = writeln!(out, "# {k} = {v}");
        }
        out.push_str("t_seconds,W,F_raw,F_phase_opt,P00,P01,P10,P11\n");
        for smp in &r.samples {
            let mut f = vec![e(smp.t), e(smp.w), e(smp.fidelity_raw), e(smp.fidelity_phase_opt)];
            f.extend(smp.populations.iter().map(|p| e(*p)));
            row(&mut out, &f);
        }
        self.art.file(name, out);
        for (k, v) in [
            ("ramp_time", r.ramp_time),
            ("hold_time", r.hold_time),
            ("fidelity_raw", r.fidelity_raw),
            ("fidelity_phase_opt", r.fidelity_phase_opt),
            ("concurrence", r.concurrence),
        ] {
            self.art.derive(label, k, v);
        }
    }

    fn transfer(&mut self) -> anyhow::Result<ProtocolResult> {
        if let Some(r) = &self.transfer {
            return Ok(r.clone());
        }
        let pc = self.protocol_config()?;
        let [alpha, beta] = self.cfg.dynamics.initial_state;
        let r = transfer_protocol(alpha, beta, &pc).context("transfer protocol")?;
        self.timeseries("transfer_timeseries.csv", "transfer", &pc, &r);
        self.transfer = Some(r.clone());
        Ok(r)
    }

    fn entangle(&mut self) -> anyhow::Result<()> {
        let pc = self.protocol_config()?;
        let r = entangle_protocol(&pc).context("entangling protocol")?;
        self.timeseries("entangle_timeseries.csv", "entangle", &pc, &r);
        Ok(())
    }

    fn sweep(&mut self) -> anyhow::Result<()> {
        let pc = self.protocol_config()?;
        let [alpha, beta] = self.cfg.dynamics.initial_state;
        let rows = sweep_ramp_times(alpha, beta, &pc, &self.cfg.dynamics.sweep_ramps).context("ramp sweep")?;
        let mut out = String::from("ramp_seconds,measured_ramp_seconds,F_raw,F_final\n");
        for r in &rows {
            row(&mut out, &[e(r.ramp_time), e(r.measured_ramp_time), e(r.fidelity_raw), e(r.fidelity_phase_opt)]);
        }
        self.art.file("sweep_ramp.csv", out);
        self.art.derive("sweep", "rows", rows.len() as i64);
        Ok(())
    }

    fn tomography(&mut self) -> anyhow::Result<()> {
        let t = &self.cfg.tomography;
        let model = match t.model {
            ShotModelKind::Exact => ShotModel::Exact,
            ShotModelKind::Sampled => ShotModel::Sampled {
                shots: t.shots,
                seed: t.seed,
            },
        };
        let detector = Detector {
            efficiency: t.efficiency,
        };
        let transfer = self.transfer()?;
        let est = transfer_fidelity_experiment(&transfer, model, &detector).context("tomography")?;

        let mut records = String::from("axis,M,plus_count,seed\n");
        for rec in &est.records {
            row(
                &mut records,
                &[rec.axis.label().to_string(), rec.shots.to_string(), rec.plus_count.to_string(), rec.seed.to_string()],
            );
        }
        self.art.file("tomography_records.csv", records);

        let rec = &est.reconstruction;
        let mut report = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(report, "{k} = {v}");
        };
        kv("model", format!("{:?}", t.model).to_lowercase());
        kv("shots_per_axis", t.shots.to_string());
        kv("seed", t.seed.to_string());
        kv("efficiency", e(t.efficiency));
        for (i, axis) in ["x", "y", "z"].iter().enumerate() {
            kv(&format!("bloch_{axis}"), e(rec.bloch[i]));
            kv(&format!("bloch_{axis}_std_error"), e(rec.std_errors[i]));
            kv(&format!("target_bloch_{axis}"), e(est.target_bloch[i]));
        }
        kv("bloch_norm", e(rec.bloch.norm()));
        kv("estimate_physical", rec.estimate.is_physical().to_string());
        if let Some(p) = &rec.projected {
            let b = p.bloch();
            kv("projected_bloch", format!("{} {} {}", e(b.x), e(b.y), e(b.z)));
        }
        kv("fidelity", e(est.fidelity));
        kv("fidelity_std_error", e(est.std_error));
        kv("fidelity_ci95_low", e(est.ci95.0));
        kv("fidelity_ci95_high", e(est.ci95.1));
        kv("true_fidelity", e(est.true_fidelity));
        self.art.file("tomography_report.txt", report);
        self.art.derive("tomography", "fidelity", est.fidelity);
        self.art.derive("tomography", "fidelity_std_error", est.std_error);
        self.art.derive("tomography", "true_fidelity", est.true_fidelity);
        Ok(())
    }
}
