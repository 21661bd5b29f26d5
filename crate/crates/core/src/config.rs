//! Configuration ingestion: TOML key-value documents with defaults, strict
//! unknown-key rejection, and a deterministic emit/parse round trip.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event_sim::ExperimentConfig;
use crate::nuclear::{Arm, FieldSchedule, SampleParams, TimeGrid};
use crate::rate::{PumpParams, SourceReference, XPDCParams};

/// Driver mode, one per CLI subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Wavepacket,
    Fringe,
    Simulate,
    Tomography,
    Rate,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Wavepacket => "wavepacket",
            Mode::Fringe => "fringe",
            Mode::Simulate => "simulate",
            Mode::Tomography => "tomography",
            Mode::Rate => "rate",
        }
    }
}

/// Beat frequency entry: a number in rad/ns, or a "<factor>*gamma" string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DeltaBSpec {
    RadPerNs(f64),
    Expr(String),
}

impl DeltaBSpec {
    fn resolve(&self, gamma: f64) -> Result<f64> {
        match self {
            DeltaBSpec::RadPerNs(v) => Ok(*v),
            DeltaBSpec::Expr(s) => {
                let trimmed = s.trim();
                let factor = trimmed
                    .strip_suffix("*gamma")
                    .or_else(|| trimmed.strip_suffix("* gamma"))
                    .map(str::trim)
                    .ok_or_else(|| {
                        Error::validation(
                            "sample.delta_b",
                            format!("expected a number or \"<factor>*gamma\", got {s:?}"),
                        )
                    })?;
                let factor: f64 = factor.parse().map_err(|_| {
                    Error::validation("sample.delta_b", format!("bad factor in {s:?}"))
                })?;
                Ok(factor * gamma)
            }
        }
    }
}

fn default_alpha() -> f64 {
    1.0
}
fn default_gamma() -> f64 {
    1.0 / 141.0
}
fn default_delta_b() -> DeltaBSpec {
    DeltaBSpec::Expr("30*gamma".into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleSection {
    pub alpha: f64,
    pub gamma: f64,
    pub delta_b: DeltaBSpec,
}

impl Default for SampleSection {
    fn default() -> Self {
        Self {
            alpha: default_alpha(),
            gamma: default_gamma(),
            delta_b: default_delta_b(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            t_start: 0.0,
            t_end: 1410.0,
            dt: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScheduleSection {
    /// Arm whose hyperfine field is inverted.
    pub arm: Arm,
}

impl Default for ScheduleSection {
    fn default() -> Self {
        Self { arm: Arm::Right }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InterferometerSection {
    /// Static arm phase in rad.
    pub theta: f64,
}

impl Default for InterferometerSection {
    fn default() -> Self {
        Self { theta: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentSection {
    pub n_events: u64,
    pub seed: u64,
    pub p_abs: f64,
    pub eta_x: f64,
    pub eps_inc: f64,
    pub dark_rate: f64,
    pub t_phi: f64,
    pub herald_window: f64,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        Self {
            n_events: 100_000,
            seed: 1,
            p_abs: 1.0,
            eta_x: 1.0,
            eps_inc: 0.0,
            dark_rate: 0.0,
            t_phi: 20.0,
            herald_window: 1410.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FringeSection {
    pub t_phi_start: f64,
    pub t_phi_end: f64,
    pub t_phi_step: f64,
}

impl Default for FringeSection {
    fn default() -> Self {
        Self {
            t_phi_start: 0.0,
            t_phi_end: 60.0,
            t_phi_step: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct XpdcSection {
    pub e_signal_ev: f64,
    pub e_idler_ev: f64,
    pub n_cell: f64,
    pub f_v111: f64,
    pub q111: f64,
}

impl Default for XpdcSection {
    fn default() -> Self {
        let d = XPDCParams::diamond_default();
        Self {
            e_signal_ev: d.e_signal_ev,
            e_idler_ev: d.e_idler_ev,
            n_cell: d.n_cell,
            f_v111: d.f_v111,
            q111: d.q111,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PumpSection {
    pub photons_per_pulse: f64,
    pub rep_rate: f64,
    pub spot_area_mm2: f64,
}

impl Default for PumpSection {
    fn default() -> Self {
        let d = PumpParams::xfel_default();
        Self {
            photons_per_pulse: d.photons_per_pulse,
            rep_rate: d.rep_rate,
            spot_area_mm2: d.spot_area_mm2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SourceRefSection {
    pub chi_ref: f64,
    pub ip_ref: f64,
    pub xi_ref: f64,
    pub bandwidth_ev: f64,
}

impl Default for SourceRefSection {
    fn default() -> Self {
        let d = SourceReference::published_default();
        Self {
            chi_ref: d.chi_ref,
            ip_ref: d.ip_ref,
            xi_ref: d.xi_ref,
            bandwidth_ev: d.bandwidth_ev,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RateSection {
    /// Nuclear linewidth, eV.
    pub de_n_ev: f64,
    /// Signal bandwidth, eV.
    pub de_s_ev: f64,
}

impl Default for RateSection {
    fn default() -> Self {
        Self {
            de_n_ev: 29.3e-9,
            de_s_ev: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
}

/// Whole configuration document, with defaults for every key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigDoc {
    pub sample: SampleSection,
    pub grid: GridSection,
    pub schedule: ScheduleSection,
    pub interferometer: InterferometerSection,
    pub experiment: ExperimentSection,
    pub fringe: FringeSection,
    pub xpdc: XpdcSection,
    pub pump: PumpSection,
    pub source_ref: SourceRefSection,
    pub rate: RateSection,
    pub output: OutputSection,
}

/// Validated run configuration: the normalized document plus the mode.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub doc: ConfigDoc,
}

impl RunConfig {
    pub fn sample(&self) -> Result<SampleParams<f64>> {
        let s = &self.doc.sample;
        let delta_b = s.delta_b.resolve(s.gamma)?;
        SampleParams::new(s.alpha, s.gamma, delta_b)
    }

    pub fn grid(&self) -> Result<TimeGrid<f64>> {
        let g = &self.doc.grid;
        TimeGrid::new(g.t_start, g.t_end, g.dt)
    }

    pub fn schedule(&self) -> Result<FieldSchedule<f64>> {
        let t_phi = self.doc.experiment.t_phi;
        if t_phi > 0.0 {
            FieldSchedule::inverted_at(t_phi, self.doc.schedule.arm)
        } else {
            Ok(FieldSchedule::constant(self.doc.schedule.arm))
        }
    }

    pub fn experiment(&self) -> Result<ExperimentConfig> {
        let e = &self.doc.experiment;
        let cfg = ExperimentConfig {
            n_events: e.n_events,
            seed: e.seed,
            p_abs: e.p_abs,
            eta_x: e.eta_x,
            eps_inc: e.eps_inc,
            dark_rate: e.dark_rate,
            theta: self.doc.interferometer.theta,
            t_phi: e.t_phi,
            herald_window: e.herald_window,
            sample: self.sample()?,
            grid: self.grid()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn xpdc(&self) -> Result<XPDCParams> {
        let x = &self.doc.xpdc;
        let p = XPDCParams {
            e_signal_ev: x.e_signal_ev,
            e_idler_ev: x.e_idler_ev,
            n_cell: x.n_cell,
            f_v111: x.f_v111,
            q111: x.q111,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn pump(&self) -> Result<PumpParams> {
        let p = &self.doc.pump;
        let pp = PumpParams {
            photons_per_pulse: p.photons_per_pulse,
            rep_rate: p.rep_rate,
            spot_area_mm2: p.spot_area_mm2,
        };
        pp.validate()?;
        Ok(pp)
    }

    pub fn source_ref(&self) -> Result<SourceReference> {
        let r = &self.doc.source_ref;
        let sr = SourceReference {
            chi_ref: r.chi_ref,
            ip_ref: r.ip_ref,
            xi_ref: r.xi_ref,
            bandwidth_ev: r.bandwidth_ev,
        };
        sr.validate()?;
        Ok(sr)
    }

    /// Switching times of the fringe scan.
    pub fn fringe_scan_points(&self) -> Result<Vec<f64>> {
        let f = &self.doc.fringe;
        if !(f.t_phi_step > 0.0 && f.t_phi_end >= f.t_phi_start && f.t_phi_start >= 0.0) {
            return Err(Error::validation(
                "fringe",
                "need t_phi_start >= 0, t_phi_end >= t_phi_start, t_phi_step > 0",
            ));
        }
        let n = ((f.t_phi_end - f.t_phi_start) / f.t_phi_step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|k| f.t_phi_start + k as f64 * f.t_phi_step).collect())
    }
}

/// Parse a TOML document into a validated run configuration. Every typed
/// object is constructed once so invariant violations surface here with
/// their key path.
pub fn parse_config(text: &str, mode: Mode) -> Result<RunConfig> {
    let doc: ConfigDoc = toml::from_str(text)
        .map_err(|e| Error::validation("config", e.message().to_string()))?;
    let mut cfg = RunConfig { mode, doc };
    // normalize the beat entry to rad/ns so emit/parse round-trips exactly
    let sample = cfg.sample()?;
    cfg.doc.sample.delta_b = DeltaBSpec::RadPerNs(sample.delta_b());
    let grid = cfg.grid()?;
    if !grid.resolves_beat(sample.delta_b()) {
        return Err(Error::validation(
            "grid.dt",
            format!(
                "dt = {} does not resolve the beat; need dt <= pi/(20 delta_b)",
                grid.dt()
            ),
        ));
    }
    cfg.schedule()?;
    cfg.experiment()?;
    cfg.xpdc()?;
    cfg.pump()?;
    cfg.source_ref()?;
    cfg.fringe_scan_points()?;
    Ok(cfg)
}

/// Serialize the resolved document; `parse_config(emit_config(c), c.mode)`
/// reproduces `c` exactly.
pub fn emit_config(cfg: &RunConfig) -> String {
    toml::to_string_pretty(&cfg.doc).expect("resolved config serializes")
}
