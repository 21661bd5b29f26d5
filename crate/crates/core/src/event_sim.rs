//! Seeded Monte Carlo generation of heralded trials: idler herald, prompt
//! routing or absorption, delayed re-emission time sampling, detector channel
//! choice, and losses. One master seed spawns a counter-based substream per
//! event, so results are bit-identical under any parallel partitioning.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interferometer::{
    propagate_chain_with_phase, prompt_routing, FringePoint, TwoModeField,
};
use crate::nuclear::{switched_pair, SampleParams, TimeGrid};
use crate::tomography::{
    assemble_rho, concurrence, visibility_from_fringe, DiagonalProbs, Visibility,
};

/// Full configuration of one Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n_events: u64,
    pub seed: u64,
    /// Probability that the signal photon is absorbed by the crystals.
    pub p_abs: f64,
    /// X-ray detector efficiency.
    pub eta_x: f64,
    /// Fraction of excitations decaying incoherently into 4 pi.
    pub eps_inc: f64,
    /// Spurious double-count probability per herald.
    pub dark_rate: f64,
    /// Static arm phase of the interferometer.
    pub theta: f64,
    /// Magnetic switching time in ns.
    pub t_phi: f64,
    /// Heralding window: delayed photons later than this are declared lost.
    pub herald_window: f64,
    pub sample: SampleParams<f64>,
    pub grid: TimeGrid<f64>,
}

impl ExperimentConfig {
    pub fn ideal(sample: SampleParams<f64>, grid: TimeGrid<f64>, t_phi: f64, n_events: u64, seed: u64) -> Self {
        Self {
            n_events,
            seed,
            p_abs: 1.0,
            eta_x: 1.0,
            eps_inc: 0.0,
            dark_rate: 0.0,
            theta: 0.0,
            t_phi,
            herald_window: 10.0 * 141.0,
            sample,
            grid,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_events < 1 {
            return Err(Error::validation("experiment.n_events", "must be >= 1"));
        }
        for (name, p) in [
            ("experiment.p_abs", self.p_abs),
            ("experiment.eta_x", self.eta_x),
            ("experiment.eps_inc", self.eps_inc),
            ("experiment.dark_rate", self.dark_rate),
        ] {
            if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                return Err(Error::validation(name, format!("must lie in [0, 1], got {p}")));
            }
        }
        if !(self.t_phi.is_finite() && self.t_phi >= 0.0) {
            return Err(Error::validation("experiment.t_phi", "must be >= 0"));
        }
        if !(self.herald_window.is_finite() && self.herald_window > 0.0) {
            return Err(Error::validation("experiment.herald_window", "must be > 0"));
        }
        Ok(())
    }
}

/// Which detection chain the delayed photon traverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainMode {
    /// Full interferometer: BS1 -> samples -> mirror -> BS2 -> detectors B/C.
    Full,
    /// BS2 removed: per-arm direct detection for the conditional (which-path)
    /// measurement. Channel B then reads the right-crystal arm, channel C the
    /// left-crystal arm.
    WhichPath,
}

/// Exhaustive, exclusive trial outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    PromptB,
    PromptC,
    DelayedB,
    DelayedC,
    Incoherent4pi,
    Lost,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::PromptB => "prompt_b",
            Outcome::PromptC => "prompt_c",
            Outcome::DelayedB => "delayed_b",
            Outcome::DelayedC => "delayed_c",
            Outcome::Incoherent4pi => "incoherent_4pi",
            Outcome::Lost => "lost",
        }
    }
}

/// One heralded trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventRecord {
    pub event_id: u64,
    pub outcome: Outcome,
    /// Delay after the herald in ns; 0 for prompt outcomes.
    pub detection_time: f64,
}

/// Aggregated counts of a run, plus the spurious double-count tally.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CountSummary {
    pub n_events: u64,
    pub prompt_b: u64,
    pub prompt_c: u64,
    pub delayed_b: u64,
    pub delayed_c: u64,
    pub incoherent: u64,
    pub lost: u64,
    pub dark_coincidences: u64,
}

impl CountSummary {
    pub fn total(&self) -> u64 {
        self.prompt_b + self.prompt_c + self.delayed_b + self.delayed_c + self.incoherent + self.lost
    }

    pub fn tally(&mut self, rec: &EventRecord) {
        self.n_events += 1;
        match rec.outcome {
            Outcome::PromptB => self.prompt_b += 1,
            Outcome::PromptC => self.prompt_c += 1,
            Outcome::DelayedB => self.delayed_b += 1,
            Outcome::DelayedC => self.delayed_c += 1,
            Outcome::Incoherent4pi => self.incoherent += 1,
            Outcome::Lost => self.lost += 1,
        }
    }

    /// Associative merge of disjoint partitions.
    pub fn merge(&self, other: &CountSummary) -> CountSummary {
        CountSummary {
            n_events: self.n_events + other.n_events,
            prompt_b: self.prompt_b + other.prompt_b,
            prompt_c: self.prompt_c + other.prompt_c,
            delayed_b: self.delayed_b + other.delayed_b,
            delayed_c: self.delayed_c + other.delayed_c,
            incoherent: self.incoherent + other.incoherent,
            lost: self.lost + other.lost,
            dark_coincidences: self.dark_coincidences + other.dark_coincidences,
        }
    }

    /// Empirical delayed-channel intensities.
    pub fn q_b_emp(&self) -> f64 {
        self.delayed_b as f64 / self.n_events as f64
    }

    pub fn q_c_emp(&self) -> f64 {
        self.delayed_c as f64 / self.n_events as f64
    }

    /// Delayed-B fraction, when any delayed counts exist.
    pub fn q_b_norm_emp(&self) -> Option<f64> {
        let total = self.delayed_b + self.delayed_c;
        if total == 0 {
            None
        } else {
            Some(self.delayed_b as f64 / total as f64)
        }
    }

    /// Per-count Poisson standard error.
    pub fn poisson_err(count: u64) -> f64 {
        (count as f64).sqrt()
    }
}

/// Cumulative trapezoidal mass of a density sampled on a grid.
struct GridCdf {
    grid: TimeGrid<f64>,
    cdf: Vec<f64>,
    total: f64,
}

impl GridCdf {
    fn new(grid: TimeGrid<f64>, density: &[f64]) -> Result<Self> {
        let n = grid.len();
        if density.len() != n {
            return Err(Error::GridMismatch("density array does not match grid".into()));
        }
        let dt = grid.dt();
        let mut cdf = Vec::with_capacity(n);
        cdf.push(0.0);
        for i in 1..n {
            let cell = 0.5 * (density[i - 1] + density[i]) * dt;
            cdf.push(cdf[i - 1] + cell);
        }
        let total = cdf[n - 1];
        if total <= 0.0 {
            return Err(Error::DegenerateDensity);
        }
        Ok(Self { grid, cdf, total })
    }

    /// Inverse-CDF sample for u in [0, 1): linear interpolation inside the
    /// first cell whose cumulative mass exceeds u * total.
    fn sample(&self, u: f64) -> f64 {
        debug_assert!((0.0..1.0).contains(&u));
        let target = u * self.total;
        // first index with cdf > target (cdf[0] = 0 <= target always)
        let hi = self.cdf.partition_point(|&c| c <= target);
        let hi = hi.min(self.cdf.len() - 1);
        let lo = hi - 1;
        let cell = self.cdf[hi] - self.cdf[lo];
        let frac = if cell > 0.0 { (target - self.cdf[lo]) / cell } else { 0.0 };
        self.grid.time(lo) + frac * self.grid.dt()
    }

    fn mass_up_to(&self, t: f64) -> f64 {
        let i = ((t - self.grid.t_start()) / self.grid.dt()).round() as usize;
        self.cdf[i.min(self.cdf.len() - 1)] / self.total
    }
}

enum SamplerKind {
    /// Interferometer output: one joint density with a time-local
    /// channel-B probability.
    Full { cdf: GridCdf, channel_b: Vec<f64> },
    /// BS2 removed: the arm is fixed by the 50/50 split at BS1, then the
    /// emission time follows that arm's own density.
    WhichPath { cdf_r: GridCdf, cdf_l: GridCdf },
}

/// Inverse-CDF sampler for the delayed re-emission: channel choice plus
/// emission time, for either detection chain.
pub struct EmissionSampler {
    kind: SamplerKind,
}

impl EmissionSampler {
    /// Full-chain sampler from a raw density and per-sample channel-B
    /// probabilities.
    pub fn from_density(grid: TimeGrid<f64>, density: Vec<f64>, channel_b: Vec<f64>) -> Result<Self> {
        if channel_b.len() != grid.len() {
            return Err(Error::GridMismatch("channel array does not match grid".into()));
        }
        Ok(Self {
            kind: SamplerKind::Full {
                cdf: GridCdf::new(grid, &density)?,
                channel_b,
            },
        })
    }

    pub fn for_config(cfg: &ExperimentConfig, mode: ChainMode) -> Result<Self> {
        match mode {
            ChainMode::Full => {
                let input = TwoModeField::single_photon_input(&cfg.grid);
                let out = propagate_chain_with_phase(&cfg.sample, cfg.t_phi, &cfg.grid, &input, cfg.theta)?;
                let density: Vec<f64> = (0..cfg.grid.len())
                    .map(|i| out.a[i].norm_sqr() + out.b[i].norm_sqr())
                    .collect();
                let channel_b = (0..cfg.grid.len())
                    .map(|i| {
                        let pa = out.a[i].norm_sqr();
                        let tot = pa + out.b[i].norm_sqr();
                        if tot > 0.0 {
                            pa / tot
                        } else {
                            0.0
                        }
                    })
                    .collect();
                Self::from_density(cfg.grid, density, channel_b)
            }
            ChainMode::WhichPath => {
                let (psi_r, psi_l) = switched_pair(&cfg.sample, cfg.t_phi, &cfg.grid)?;
                let sq = |v: &[f64]| v.iter().map(|a| a * a).collect::<Vec<_>>();
                Ok(Self {
                    kind: SamplerKind::WhichPath {
                        cdf_r: GridCdf::new(cfg.grid, &sq(&psi_r.amplitude))?,
                        cdf_l: GridCdf::new(cfg.grid, &sq(&psi_l.amplitude))?,
                    },
                })
            }
        }
    }

    /// Draw (channel-B flag, emission time) from two uniforms. In the full
    /// chain the time comes first and the channel follows the time-local
    /// intensity ratio; in the which-path chain the 50/50 arm choice comes
    /// first and the time follows that arm's density.
    pub fn draw(&self, u_time: f64, u_channel: f64) -> (bool, f64) {
        match &self.kind {
            SamplerKind::Full { cdf, channel_b } => {
                let t = cdf.sample(u_time);
                let i = ((t - cdf.grid.t_start()) / cdf.grid.dt()).round() as usize;
                let p_b = channel_b[i.min(channel_b.len() - 1)];
                (u_channel < p_b, t)
            }
            SamplerKind::WhichPath { cdf_r, cdf_l } => {
                let is_b = u_channel < 0.5;
                let t = if is_b { cdf_r.sample(u_time) } else { cdf_l.sample(u_time) };
                (is_b, t)
            }
        }
    }

    /// Emission-time draw alone (full-chain joint density, or the
    /// arm-averaged mixture for the which-path chain).
    pub fn sample(&self, u: f64) -> f64 {
        match &self.kind {
            SamplerKind::Full { cdf, .. } => cdf.sample(u),
            SamplerKind::WhichPath { cdf_r, cdf_l } => {
                // mixture quantile via the right arm; callers needing exact
                // per-arm draws use `draw`
                if u < 0.5 {
                    cdf_r.sample(2.0 * u)
                } else {
                    cdf_l.sample(2.0 * (u - 0.5))
                }
            }
        }
    }

    /// Time where the cumulative density reaches the given quantile, by
    /// direct quadrature on the grid.
    pub fn quantile(&self, q: f64) -> f64 {
        match &self.kind {
            SamplerKind::Full { cdf, .. } => cdf.sample(q),
            SamplerKind::WhichPath { cdf_r, .. } => cdf_r.sample(q),
        }
    }

    pub fn grid(&self) -> &TimeGrid<f64> {
        match &self.kind {
            SamplerKind::Full { cdf, .. } => &cdf.grid,
            SamplerKind::WhichPath { cdf_r, .. } => &cdf_r.grid,
        }
    }

    /// Cumulative density mass below t, normalized to 1.
    pub fn cdf_at(&self, t: f64) -> f64 {
        match &self.kind {
            SamplerKind::Full { cdf, .. } => cdf.mass_up_to(t),
            SamplerKind::WhichPath { cdf_r, cdf_l } => {
                0.5 * (cdf_r.mass_up_to(t) + cdf_l.mass_up_to(t))
            }
        }
    }
}

/// One-shot inverse-CDF draw of the delayed re-emission time.
pub fn sample_emission_time(
    s: &SampleParams<f64>,
    t_phi: f64,
    grid: &TimeGrid<f64>,
    u: f64,
) -> Result<f64> {
    if !(0.0..1.0).contains(&u) {
        return Err(Error::domain(format!("sample_emission_time: u must lie in [0, 1), got {u}")));
    }
    let cfg = ExperimentConfig::ideal(*s, *grid, t_phi, 1, 0);
    let sampler = EmissionSampler::for_config(&cfg, ChainMode::Full)?;
    Ok(sampler.sample(u))
}

fn simulate_one(
    cfg: &ExperimentConfig,
    sampler: &EmissionSampler,
    routing: (f64, f64),
    run_tag: u64,
    event_id: u64,
) -> (EventRecord, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ run_tag);
    rng.set_stream(event_id);

    let (outcome, t) = {
        let u_abs: f64 = rng.gen();
        if u_abs >= cfg.p_abs {
            // not absorbed: prompt routing through the empty chain
            let u_route: f64 = rng.gen();
            if u_route < routing.0 {
                (Outcome::PromptB, 0.0)
            } else {
                (Outcome::PromptC, 0.0)
            }
        } else {
            let u_inc: f64 = rng.gen();
            if u_inc < cfg.eps_inc {
                (Outcome::Incoherent4pi, 0.0)
            } else {
                let u_t: f64 = rng.gen();
                let u_ch: f64 = rng.gen();
                let (is_b, t) = sampler.draw(u_t, u_ch);
                if t > cfg.herald_window {
                    (Outcome::Lost, t)
                } else if is_b {
                    (Outcome::DelayedB, t)
                } else {
                    (Outcome::DelayedC, t)
                }
            }
        }
    };

    // detector thinning applies to every would-be detection
    let outcome = match outcome {
        Outcome::PromptB | Outcome::PromptC | Outcome::DelayedB | Outcome::DelayedC => {
            let u_det: f64 = rng.gen();
            if u_det < cfg.eta_x {
                outcome
            } else {
                Outcome::Lost
            }
        }
        other => other,
    };

    let dark = rng.gen::<f64>() < cfg.dark_rate;
    (
        EventRecord {
            event_id,
            outcome,
            detection_time: if matches!(outcome, Outcome::DelayedB | Outcome::DelayedC) { t } else { 0.0 },
        },
        dark,
    )
}

/// Run the configured number of heralded trials through the given chain.
pub fn run_events_mode(
    cfg: &ExperimentConfig,
    mode: ChainMode,
) -> Result<(Vec<EventRecord>, CountSummary)> {
    run_events_tagged(cfg, mode, 0)
}

/// Full-chain run.
pub fn run_events(cfg: &ExperimentConfig) -> Result<(Vec<EventRecord>, CountSummary)> {
    run_events_mode(cfg, ChainMode::Full)
}

fn run_events_tagged(
    cfg: &ExperimentConfig,
    mode: ChainMode,
    run_tag: u64,
) -> Result<(Vec<EventRecord>, CountSummary)> {
    cfg.validate()?;
    let sampler = EmissionSampler::for_config(cfg, mode)?;
    let routing = prompt_routing(cfg.theta);
    let results: Vec<(EventRecord, bool)> = (0..cfg.n_events)
        .into_par_iter()
        .map(|id| simulate_one(cfg, &sampler, routing, run_tag, id))
        .collect();
    let mut summary = CountSummary::default();
    let mut records = Vec::with_capacity(results.len());
    for (rec, dark) in results {
        summary.tally(&rec);
        if dark {
            summary.dark_coincidences += 1;
        }
        records.push(rec);
    }
    Ok((records, summary))
}

/// Diagonal probabilities from a which-path (BS2-removed) run: p01 and p10
/// from per-arm delayed counts over heralds, p11 from the spurious
/// double-count tally, p00 inferred as the remainder.
pub fn empirical_probs(
    summary: &CountSummary,
    which_path_run: &CountSummary,
) -> Result<DiagonalProbs<f64>> {
    if summary.n_events != which_path_run.n_events {
        return Err(Error::InconsistentCounts(format!(
            "fringe run has {} heralds, which-path run has {}",
            summary.n_events, which_path_run.n_events
        )));
    }
    let n = which_path_run.n_events as f64;
    let p01 = which_path_run.delayed_b as f64 / n; // right-crystal arm
    let p10 = which_path_run.delayed_c as f64 / n; // left-crystal arm
    let p11 = which_path_run.dark_coincidences as f64 / n;
    let probs = DiagonalProbs::with_inferred_p00(p01, p10, p11)?;
    Ok(probs)
}

/// Full tomography pipeline: fringe-mode runs over the scan for the
/// visibility, one which-path run for the diagonal probabilities, then the
/// concurrence of the assembled density matrix. An empty fringe (no delayed
/// counts anywhere) is read as zero visibility.
pub fn end_to_end_concurrence(cfg: &ExperimentConfig, t_phi_scan: &[f64]) -> Result<f64> {
    cfg.validate()?;
    if t_phi_scan.is_empty() {
        return Err(Error::domain("end_to_end_concurrence: empty scan"));
    }
    let mut points = Vec::with_capacity(t_phi_scan.len());
    for (k, &t_phi) in t_phi_scan.iter().enumerate() {
        let mut point_cfg = cfg.clone();
        point_cfg.t_phi = t_phi;
        let (_, s) = run_events_tagged(&point_cfg, ChainMode::Full, 1 + k as u64)?;
        points.push(FringePoint {
            t_phi,
            q_b: s.delayed_b as f64,
            q_c: s.delayed_c as f64,
        });
    }
    let v = match visibility_from_fringe(&points) {
        Ok(v) => v,
        Err(Error::UndefinedVisibility(_)) => Visibility::new(0.0)?,
        Err(e) => return Err(e),
    };
    let (_, fringe_summary) = run_events_tagged(cfg, ChainMode::Full, 0)?;
    let (_, wp_summary) = run_events_tagged(cfg, ChainMode::WhichPath, u64::MAX)?;
    let probs = empirical_probs(&fringe_summary, &wp_summary)?;
    let rho = assemble_rho(None, probs.p01, probs.p10, probs.p11, v)?;
    concurrence(&rho)
}
