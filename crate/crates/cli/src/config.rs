//! Run configuration: a single JSON document with a versioned schema.
//! Every default mirrors the reference parameter table (200 mW average
//! budget, 350 mW peak, J = 4, 1 km link, xi = 4, sigma_n = 1e-7 A).

use harq_fso::channel::{ChannelModel, LinkParams, PointingParams, TurbulenceParams};
use harq_fso::harq::{default_capacity_constant, Scheme};
use harq_fso::optim::{OptConfig, ScaSettings};
use harq_fso::sim::SimSettings;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeName {
    Cc,
    Ir,
}

impl From<SchemeName> for Scheme {
    fn from(s: SchemeName) -> Scheme {
        match s {
            SchemeName::Cc => Scheme::Cc,
            SchemeName::Ir => Scheme::Ir,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelSection {
    pub alpha: f64,
    pub beta: f64,
    pub xi2: f64,
    pub a0: f64,
    pub attenuation_per_km: f64,
    pub length_km: f64,
    pub sigma_n: f64,
}

impl Default for ChannelSection {
    fn default() -> Self {
        ChannelSection {
            alpha: 2.296,
            beta: 1.822,
            xi2: 16.0,
            a0: 1.0,
            attenuation_per_km: 0.1,
            length_km: 1.0,
            sigma_n: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HarqSection {
    pub scheme: SchemeName,
    pub max_rounds: usize,
    pub rate: f64,
    /// Capacity-gap constant; `null` means 1/(2 pi e).
    pub capacity_constant: Option<f64>,
}

impl Default for HarqSection {
    fn default() -> Self {
        HarqSection {
            scheme: SchemeName::Cc,
            max_rounds: 4,
            rate: 2.0,
            capacity_constant: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AllocationMode {
    /// `P_j = min(P0 / J, Pmax)` in every round.
    Equal,
    /// Run the scheme's outage-minimizing allocator.
    Optimized,
    /// Fixed per-round powers.
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PowerSection {
    pub average_budget: f64,
    pub peak: f64,
    pub allocation: AllocationMode,
}

impl Default for PowerSection {
    fn default() -> Self {
        PowerSection {
            average_budget: 0.2,
            peak: 0.35,
            allocation: AllocationMode::Equal,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub start_db: f64,
    pub stop_db: f64,
    pub step_db: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            start_db: 20.0,
            stop_db: 80.0,
            step_db: 5.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RateGridSection {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for RateGridSection {
    fn default() -> Self {
        RateGridSection {
            start: 0.1,
            stop: 6.0,
            step: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub enabled: bool,
    pub packets: u64,
    pub seed: u64,
    pub chunks: usize,
}

impl Default for SimSection {
    fn default() -> Self {
        SimSection {
            enabled: false,
            packets: 1_000_000,
            seed: 20_240_901,
            chunks: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScaSection {
    pub epsilon: f64,
    pub max_outer: usize,
    pub inner_tolerance: f64,
}

impl Default for ScaSection {
    fn default() -> Self {
        ScaSection {
            epsilon: 1e-5,
            max_outer: 50,
            inner_tolerance: 1e-9,
        }
    }
}

pub const SCHEMA_VERSION: u32 = 1;

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_schema")]
    pub schema: u32,
    #[serde(default)]
    pub channel: ChannelSection,
    #[serde(default)]
    pub harq: HarqSection,
    #[serde(default)]
    pub power: PowerSection,
    /// Average-SNR sweep for `op-curve` (dB, inclusive bounds).
    #[serde(default)]
    pub snr_sweep: SweepSection,
    /// Fixed operating SNR for `optimize` / `throughput` / `validate`;
    /// when absent the channel's own sigma_n decides.
    #[serde(default)]
    pub gamma_bar_db: Option<f64>,
    #[serde(default)]
    pub rate_grid: RateGridSection,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default)]
    pub sca: ScaSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema: SCHEMA_VERSION,
            channel: ChannelSection::default(),
            harq: HarqSection::default(),
            power: PowerSection::default(),
            snr_sweep: SweepSection::default(),
            gamma_bar_db: None,
            rate_grid: RateGridSection::default(),
            sim: SimSection::default(),
            sca: ScaSection::default(),
        }
    }
}

/// A configuration problem; the message names the offending field.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

impl RunConfig {
    pub fn from_file(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("config {}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| ConfigError(format!("config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.schema != SCHEMA_VERSION {
            return Err(ConfigError(format!(
                "schema: expected version {SCHEMA_VERSION}, got {}",
                self.schema
            )));
        }
        let c = &self.channel;
        if !(c.alpha > 0.0 && c.beta > 0.0) {
            return Err(ConfigError("channel.alpha/channel.beta must be > 0".into()));
        }
        if !(c.xi2 > 0.0) {
            return Err(ConfigError("channel.xi2 must be > 0".into()));
        }
        if !(c.a0 > 0.0 && c.a0 <= 1.0) {
            return Err(ConfigError("channel.a0 must be in (0, 1]".into()));
        }
        if c.attenuation_per_km < 0.0 || c.length_km < 0.0 {
            return Err(ConfigError(
                "channel.attenuation_per_km/length_km must be >= 0".into(),
            ));
        }
        if !(c.sigma_n > 0.0) {
            return Err(ConfigError("channel.sigma_n must be > 0".into()));
        }
        if self.harq.max_rounds == 0 {
            return Err(ConfigError("harq.max_rounds must be >= 1".into()));
        }
        if !(self.harq.rate > 0.0) {
            return Err(ConfigError("harq.rate must be > 0".into()));
        }
        if let Some(cc) = self.harq.capacity_constant {
            if !(cc > 0.0 && cc <= 1.0) {
                return Err(ConfigError(
                    "harq.capacity_constant must be in (0, 1]".into(),
                ));
            }
        }
        if !(self.power.average_budget > 0.0) {
            return Err(ConfigError("power.average_budget must be > 0".into()));
        }
        if !(self.power.peak > 0.0) {
            return Err(ConfigError("power.peak must be > 0".into()));
        }
        if let AllocationMode::Explicit(p) = &self.power.allocation {
            if p.len() != self.harq.max_rounds {
                return Err(ConfigError(format!(
                    "power.allocation: expected {} entries, got {}",
                    self.harq.max_rounds,
                    p.len()
                )));
            }
            if p.iter().any(|&v| v < 0.0 || v > self.power.peak) {
                return Err(ConfigError(
                    "power.allocation: entries must lie in [0, peak]".into(),
                ));
            }
        }
        let s = &self.snr_sweep;
        if !(s.step_db > 0.0)
            || !s.start_db.is_finite()
            || !s.stop_db.is_finite()
            || s.stop_db < s.start_db
        {
            return Err(ConfigError(
                "snr_sweep: bounds must be finite and ordered with step > 0".into(),
            ));
        }
        let g = &self.rate_grid;
        if !(g.step > 0.0) || !(g.start > 0.0) || g.stop < g.start {
            return Err(ConfigError(
                "rate_grid: bounds must be positive and ordered with step > 0".into(),
            ));
        }
        if self.sim.packets == 0 {
            return Err(ConfigError("sim.packets must be >= 1".into()));
        }
        Ok(())
    }

    pub fn capacity_constant(&self) -> f64 {
        self.harq
            .capacity_constant
            .unwrap_or_else(default_capacity_constant::<f64>)
    }

    /// Channel model at the configured link parameters (before any SNR
    /// override).
    pub fn base_channel(&self) -> Result<ChannelModel<f64>, ConfigError> {
        let turbulence = TurbulenceParams::new(self.channel.alpha, self.channel.beta)
            .map_err(|e| ConfigError(e.to_string()))?;
        let pointing = PointingParams::new(self.channel.xi2, self.channel.a0)
            .map_err(|e| ConfigError(e.to_string()))?;
        let link = LinkParams::from_attenuation(
            self.channel.attenuation_per_km,
            self.channel.length_km,
            self.channel.sigma_n,
        )
        .map_err(|e| ConfigError(e.to_string()))?;
        Ok(ChannelModel::new(turbulence, pointing, link))
    }

    /// Channel model pinned to a given average SNR (dB), realized by
    /// scaling sigma_n at fixed A0 h_l.
    pub fn channel_at_db(&self, gamma_bar_db: f64) -> Result<ChannelModel<f64>, ConfigError> {
        self.base_channel()?
            .with_average_snr(harq_fso::channel::snr_from_db(gamma_bar_db))
            .map_err(|e| ConfigError(e.to_string()))
    }

    /// Channel for the single-SNR commands: `gamma_bar_db` when present,
    /// otherwise the raw link parameters.
    pub fn operating_channel(&self, default_db: f64) -> Result<ChannelModel<f64>, ConfigError> {
        match self.gamma_bar_db {
            Some(db) => self.channel_at_db(db),
            None => self.channel_at_db(default_db),
        }
    }

    pub fn opt_config(&self, channel: ChannelModel<f64>) -> OptConfig<f64> {
        OptConfig {
            scheme: self.harq.scheme.into(),
            channel,
            rate: self.harq.rate,
            rounds: self.harq.max_rounds,
            avg_power: self.power.average_budget,
            peak_power: self.power.peak,
            capacity_constant: self.capacity_constant(),
        }
    }

    pub fn sca_settings(&self) -> ScaSettings<f64> {
        ScaSettings {
            epsilon: self.sca.epsilon,
            max_outer: self.sca.max_outer,
            inner_tolerance: self.sca.inner_tolerance,
        }
    }

    pub fn sim_settings(&self) -> SimSettings {
        SimSettings {
            num_packets: self.sim.packets,
            seed: self.sim.seed,
            parallel_chunks: self.sim.chunks,
        }
    }

    pub fn rate_grid_values(&self) -> Vec<f64> {
        let g = &self.rate_grid;
        let n = ((g.stop - g.start) / g.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| g.start + i as f64 * g.step).collect()
    }

    pub fn snr_sweep_values(&self) -> Vec<f64> {
        let s = &self.snr_sweep;
        let n = ((s.stop_db - s.start_db) / s.step_db + 1e-9).floor() as usize + 1;
        (0..n).map(|i| s.start_db + i as f64 * s.step_db).collect()
    }

    /// The per-round powers for `equal` and `explicit` modes; `None` when
    /// the allocation must be optimized per operating point.
    pub fn fixed_allocation(&self) -> Option<Vec<f64>> {
        match &self.power.allocation {
            AllocationMode::Equal => Some(vec![
                (self.power.average_budget
                    / self.harq.max_rounds as f64)
                    .min(self.power.peak);
                self.harq.max_rounds
            ]),
            AllocationMode::Explicit(p) => Some(p.clone()),
            AllocationMode::Optimized => None,
        }
    }
}
