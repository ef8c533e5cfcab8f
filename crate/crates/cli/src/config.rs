//! Versioned TOML run configuration.

use serde::{Deserialize, Serialize};

use restoreplan_core::scenario::RepairTimeModel;
use restoreplan_core::stage1::ObjectiveWeights;
use restoreplan_core::{CrewCosts, FrameOffset, ScenarioConfig, TravelRates};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub version: u32,
    /// Used when `--seed` is not given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub scenarios: ScenarioSection,
    #[serde(default)]
    pub costs: CostSection,
    #[serde(default)]
    pub schedule: ScheduleSection,
    #[serde(default)]
    pub network: NetworkSection,
    #[serde(default)]
    pub corridor: CorridorSection,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            version: CONFIG_VERSION,
            seed: None,
            scenarios: ScenarioSection::default(),
            costs: CostSection::default(),
            schedule: ScheduleSection::default(),
            network: NetworkSection::default(),
            corridor: CorridorSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSection {
    pub count: usize,
    pub demand_min: u32,
    pub demand_max: u32,
    pub repair_mu: f64,
    pub repair_sigma: f64,
    pub repair_min_h: f64,
    pub repair_max_h: f64,
    pub edge_failure_probability: f64,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        let c = ScenarioConfig::default();
        ScenarioSection {
            count: c.n_scenarios,
            demand_min: c.demand_min,
            demand_max: c.demand_max,
            repair_mu: c.repair_time.mu,
            repair_sigma: c.repair_time.sigma,
            repair_min_h: c.repair_time.min_h,
            repair_max_h: c.repair_time.max_h,
            edge_failure_probability: c.edge_failure_probability,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostSection {
    /// Hourly cost per person, crews C0..C3.
    pub crew: [f64; 4],
    /// Crew-cost scale `c`; omitted means the smallest admissible power of ten.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale_c: Option<f64>,
    pub weight_power: f64,
    pub weight_time: f64,
    /// Travel cost per meter, crews C0..C3.
    pub travel_rate_per_m: [f64; 4],
}

impl Default for CostSection {
    fn default() -> Self {
        CostSection {
            crew: CrewCosts::default().to_array(),
            scale_c: None,
            weight_power: 1.0,
            weight_time: 1.0,
            travel_rate_per_m: TravelRates::default().0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleSection {
    pub speed_kmh: f64,
}

impl Default for ScheduleSection {
    fn default() -> Self {
        ScheduleSection { speed_kmh: 40.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSection {
    pub offset_x: f64,
    pub offset_y: f64,
    pub scale: f64,
}

impl Default for NetworkSection {
    fn default() -> Self {
        NetworkSection { offset_x: 0.0, offset_y: 0.0, scale: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorridorSection {
    /// Width for event rows that leave `width_m` empty.
    pub width_m: f64,
}

impl Default for CorridorSection {
    fn default() -> Self {
        CorridorSection { width_m: 400.0 }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("config version {found} is not supported (expected {CONFIG_VERSION})")]
    Version { found: u32 },
    #[error("config: {0}")]
    Invalid(String),
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: Config = toml::from_str(text)?;
        if cfg.version != CONFIG_VERSION {
            return Err(ConfigError::Version { found: cfg.version });
        }
        cfg.scenario_config().validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if cfg.costs.crew.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
            return Err(ConfigError::Invalid("crew costs must be positive".into()));
        }
        if cfg.costs.travel_rate_per_m.iter().any(|&r| !(r >= 0.0 && r.is_finite())) {
            return Err(ConfigError::Invalid("travel rates must be non-negative".into()));
        }
        if !(cfg.corridor.width_m > 0.0) {
            return Err(ConfigError::Invalid("corridor width must be positive".into()));
        }
        Ok(cfg)
    }

    pub fn scenario_config(&self) -> ScenarioConfig {
        let s = &self.scenarios;
        ScenarioConfig {
            n_scenarios: s.count,
            demand_min: s.demand_min,
            demand_max: s.demand_max,
            repair_time: RepairTimeModel { mu: s.repair_mu, sigma: s.repair_sigma, min_h: s.repair_min_h, max_h: s.repair_max_h },
            edge_failure_probability: s.edge_failure_probability,
        }
    }

    pub fn crew_costs(&self) -> CrewCosts {
        let [initial_inspection, tree, line, final_inspection] = self.costs.crew;
        CrewCosts { initial_inspection, tree, line, final_inspection }
    }

    pub fn weights(&self) -> ObjectiveWeights {
        ObjectiveWeights { power: self.costs.weight_power, time: self.costs.weight_time }
    }

    pub fn travel_rates(&self) -> TravelRates {
        TravelRates(self.costs.travel_rate_per_m)
    }

    pub fn frame_offset(&self) -> FrameOffset {
        FrameOffset { offset_x: self.network.offset_x, offset_y: self.network.offset_y, scale: self.network.scale }
    }
}
