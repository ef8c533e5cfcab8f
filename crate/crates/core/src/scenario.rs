//! Crew taxonomy, tornado damage selection and seeded scenario generation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::{point_segment_distance_m, LatLon};
use crate::network::{edge_key, CoupledNetwork};
use crate::units::NodeId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("invalid demand range [{lo}, {hi}]")]
    InvalidRange { lo: u32, hi: u32 },
    #[error("invalid repair-time window [{min_h}, {max_h}]")]
    InvalidClamp { min_h: f64, max_h: f64 },
    #[error("edge failure probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("at least one scenario is required")]
    NoScenarios,
    #[error("no damaged nodes: every tornado corridor misses the feeder")]
    NoDamagedNodes,
    #[error("invalid tornado event: {0}")]
    InvalidEvent(String),
    #[error("scenario {scenario}: {detail}")]
    InvalidScenario { scenario: usize, detail: String },
    #[error("unsupported scenario file version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },
}

/// The four crew specializations, in the order they must work at a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrewKind {
    InitialInspection,
    Tree,
    Line,
    FinalInspection,
}

pub const CREW_COUNT: usize = 4;

impl CrewKind {
    pub const ALL: [CrewKind; CREW_COUNT] =
        [CrewKind::InitialInspection, CrewKind::Tree, CrewKind::Line, CrewKind::FinalInspection];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(k: usize) -> Option<CrewKind> {
        Self::ALL.get(k).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            CrewKind::InitialInspection => "initial_inspection",
            CrewKind::Tree => "tree",
            CrewKind::Line => "line",
            CrewKind::FinalInspection => "final_inspection",
        }
    }

    /// Crew that must finish at a node before this one starts.
    pub fn predecessor(self) -> Option<CrewKind> {
        self.index().checked_sub(1).and_then(CrewKind::from_index)
    }
}

impl fmt::Display for CrewKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CrewKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Ok(k) = s.trim_start_matches(['C', 'c']).parse::<usize>() {
            return CrewKind::from_index(k).ok_or_else(|| format!("crew index {k} out of range"));
        }
        CrewKind::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown crew {s:?}"))
    }
}

/// Per-person hourly labor cost of each crew kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrewCosts {
    pub initial_inspection: f64,
    pub tree: f64,
    pub line: f64,
    pub final_inspection: f64,
}

impl Default for CrewCosts {
    fn default() -> Self {
        CrewCosts { initial_inspection: 200.0, tree: 65.0, line: 75.0, final_inspection: 200.0 }
    }
}

impl CrewCosts {
    pub fn get(&self, k: CrewKind) -> f64 {
        self.to_array()[k.index()]
    }

    pub fn to_array(&self) -> [f64; CREW_COUNT] {
        [self.initial_inspection, self.tree, self.line, self.final_inspection]
    }
}

/// Straight-line tornado track with an EF rating and damage corridor width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TornadoEvent {
    #[serde(rename = "ef")]
    pub ef_rating: u8,
    pub start_lat: f64,
    pub start_lon: f64,
    pub end_lat: f64,
    pub end_lon: f64,
    #[serde(rename = "width_m")]
    pub corridor_width_m: f64,
}

impl TornadoEvent {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.ef_rating > 5 {
            return Err(ScenarioError::InvalidEvent(format!("EF rating {} above 5", self.ef_rating)));
        }
        if !(self.corridor_width_m > 0.0) || !self.corridor_width_m.is_finite() {
            return Err(ScenarioError::InvalidEvent(format!("corridor width {} not positive", self.corridor_width_m)));
        }
        Ok(())
    }

    pub fn path_start(&self) -> LatLon {
        LatLon::new(self.start_lat, self.start_lon)
    }

    pub fn path_end(&self) -> LatLon {
        LatLon::new(self.end_lat, self.end_lon)
    }

    fn in_corridor(&self, p: LatLon) -> bool {
        point_segment_distance_m(p, self.path_start(), self.path_end()) <= self.corridor_width_m / 2.0
    }
}

/// Repair time and crew demand of one crew kind at one node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepairTask {
    pub time_h: f64,
    pub demand: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TaskRow {
    node: NodeId,
    crew: CrewKind,
    time_h: f64,
    demand: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ScenarioData {
    id: usize,
    tasks: Vec<TaskRow>,
    #[serde(default)]
    failed_edges: Vec<(NodeId, NodeId)>,
}

/// One realization of repair times, repair demands and failed road segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScenarioData", into = "ScenarioData")]
pub struct Scenario {
    pub id: usize,
    tasks: BTreeMap<NodeId, [RepairTask; CREW_COUNT]>,
    failed_edges: BTreeSet<(NodeId, NodeId)>,
}

impl From<Scenario> for ScenarioData {
    fn from(s: Scenario) -> Self {
        let tasks = s
            .tasks
            .iter()
            .flat_map(|(&node, row)| {
                CrewKind::ALL.into_iter().map(move |crew| TaskRow {
                    node,
                    crew,
                    time_h: row[crew.index()].time_h,
                    demand: row[crew.index()].demand,
                })
            })
            .collect();
        ScenarioData { id: s.id, tasks, failed_edges: s.failed_edges.into_iter().collect() }
    }
}

impl TryFrom<ScenarioData> for Scenario {
    type Error = ScenarioError;

    fn try_from(d: ScenarioData) -> Result<Self, Self::Error> {
        let invalid = |detail: String| ScenarioError::InvalidScenario { scenario: d.id, detail };
        let mut partial: BTreeMap<NodeId, [Option<RepairTask>; CREW_COUNT]> = BTreeMap::new();
        for row in &d.tasks {
            let slot = &mut partial.entry(row.node).or_default()[row.crew.index()];
            if slot.is_some() {
                return Err(invalid(format!("duplicate task ({}, {})", row.node, row.crew)));
            }
            *slot = Some(RepairTask { time_h: row.time_h, demand: row.demand });
        }
        let mut tasks = BTreeMap::new();
        for (node, row) in partial {
            let mut full = [RepairTask { time_h: 0.0, demand: 0 }; CREW_COUNT];
            for crew in CrewKind::ALL {
                full[crew.index()] = row[crew.index()].ok_or_else(|| invalid(format!("node {node} lacks a {crew} task")))?;
            }
            tasks.insert(node, full);
        }
        Scenario::new(d.id, tasks, d.failed_edges.into_iter().collect())
    }
}

impl Scenario {
    pub fn new(
        id: usize,
        tasks: BTreeMap<NodeId, [RepairTask; CREW_COUNT]>,
        failed_edges: BTreeSet<(NodeId, NodeId)>,
    ) -> Result<Self, ScenarioError> {
        for (node, row) in &tasks {
            for crew in CrewKind::ALL {
                let t = row[crew.index()].time_h;
                if !(t > 0.0) || !t.is_finite() {
                    return Err(ScenarioError::InvalidScenario {
                        scenario: id,
                        detail: format!("repair time {t} at ({node}, {crew}) is not positive"),
                    });
                }
            }
        }
        let failed_edges = failed_edges.into_iter().map(|(a, b)| edge_key(a, b)).collect();
        Ok(Scenario { id, tasks, failed_edges })
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.tasks.keys().copied()
    }

    pub fn task(&self, node: NodeId, crew: CrewKind) -> Option<RepairTask> {
        self.tasks.get(&node).map(|row| row[crew.index()])
    }

    pub fn repair_time_h(&self, node: NodeId, crew: CrewKind) -> Option<f64> {
        self.task(node, crew).map(|t| t.time_h)
    }

    pub fn repair_demand(&self, node: NodeId, crew: CrewKind) -> Option<u32> {
        self.task(node, crew).map(|t| t.demand)
    }

    pub fn failed_edges(&self) -> &BTreeSet<(NodeId, NodeId)> {
        &self.failed_edges
    }

    /// Nodes with positive demand for `crew`, ascending.
    pub fn required(&self, crew: CrewKind) -> BTreeSet<NodeId> {
        self.tasks
            .iter()
            .filter(|(_, row)| row[crew.index()].demand > 0)
            .map(|(&n, _)| n)
            .collect()
    }
}

/// Lognormal repair-time model with a clamp window, hours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepairTimeModel {
    pub mu: f64,
    pub sigma: f64,
    pub min_h: f64,
    pub max_h: f64,
}

impl Default for RepairTimeModel {
    fn default() -> Self {
        RepairTimeModel { mu: -0.3072, sigma: 1.8404, min_h: 0.5, max_h: 12.0 }
    }
}

impl RepairTimeModel {
    /// Unclamped lognormal value for a standard-normal quantile.
    pub fn raw(&self, z: f64) -> f64 {
        (self.mu + self.sigma * z).exp()
    }

    pub fn from_standard_normal(&self, z: f64) -> f64 {
        self.raw(z).clamp(self.min_h, self.max_h)
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.min_h > 0.0 && self.min_h <= self.max_h && self.max_h.is_finite()) {
            return Err(ScenarioError::InvalidClamp { min_h: self.min_h, max_h: self.max_h });
        }
        Ok(())
    }
}

pub fn sample_repair_time<R: Rng + ?Sized>(rng: &mut R, model: &RepairTimeModel) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    model.from_standard_normal(z)
}

/// Uniform integer in `[lo, hi]`.
pub fn sample_repair_demand<R: Rng + ?Sized>(rng: &mut R, lo: u32, hi: u32) -> Result<u32, ScenarioError> {
    if lo > hi {
        return Err(ScenarioError::InvalidRange { lo, hi });
    }
    Ok(rng.gen_range(lo..=hi))
}

/// Damaged road nodes and failed road edges inside one tornado corridor.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Damage {
    pub nodes: BTreeSet<NodeId>,
    pub edges: BTreeSet<(NodeId, NodeId)>,
}

/// A projected feeder node is damaged when its road location lies within half
/// the corridor width of the track; a road edge fails when both endpoints do.
/// Depots are never marked damaged.
pub fn select_damage(event: &TornadoEvent, net: &CoupledNetwork) -> Damage {
    let road = net.road();
    let inside = |id: NodeId| road.node(id).is_some_and(|n| event.in_corridor(n.position()));
    let nodes = net
        .power_to_road()
        .values()
        .copied()
        .filter(|n| !net.depots().contains(n))
        .filter(|&n| inside(n))
        .collect();
    let edges = road
        .edges()
        .iter()
        .filter(|e| inside(e.u) && inside(e.v))
        .map(|e| (e.u, e.v))
        .collect();
    Damage { nodes, edges }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub n_scenarios: usize,
    pub demand_min: u32,
    pub demand_max: u32,
    pub repair_time: RepairTimeModel,
    /// Probability that a road edge inside a corridor fails in a scenario.
    pub edge_failure_probability: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            n_scenarios: 3,
            demand_min: 5,
            demand_max: 19,
            repair_time: RepairTimeModel::default(),
            edge_failure_probability: 0.5,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.n_scenarios == 0 {
            return Err(ScenarioError::NoScenarios);
        }
        if self.demand_min > self.demand_max {
            return Err(ScenarioError::InvalidRange { lo: self.demand_min, hi: self.demand_max });
        }
        if !(0.0..=1.0).contains(&self.edge_failure_probability) {
            return Err(ScenarioError::InvalidProbability(self.edge_failure_probability));
        }
        self.repair_time.validate()
    }
}

pub const SCENARIO_SCHEMA: &str = "restoreplan.scenarios";
pub const SCENARIO_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ScenarioSetData {
    schema: String,
    version: u32,
    seed: u64,
    #[serde(default)]
    config: Option<ScenarioConfig>,
    damaged: BTreeSet<NodeId>,
    loads_kw: BTreeMap<NodeId, f64>,
    scenarios: Vec<Scenario>,
}

/// Scenario set shared by both solver stages. Every scenario covers the same
/// damaged nodes; loads are the downstream kW restored at each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScenarioSetData", into = "ScenarioSetData")]
pub struct ScenarioSet {
    pub seed: u64,
    pub config: Option<ScenarioConfig>,
    damaged: BTreeSet<NodeId>,
    loads_kw: BTreeMap<NodeId, f64>,
    scenarios: Vec<Scenario>,
}

impl From<ScenarioSet> for ScenarioSetData {
    fn from(s: ScenarioSet) -> Self {
        ScenarioSetData {
            schema: SCENARIO_SCHEMA.to_string(),
            version: SCENARIO_VERSION,
            seed: s.seed,
            config: s.config,
            damaged: s.damaged,
            loads_kw: s.loads_kw,
            scenarios: s.scenarios,
        }
    }
}

impl TryFrom<ScenarioSetData> for ScenarioSet {
    type Error = ScenarioError;

    fn try_from(d: ScenarioSetData) -> Result<Self, Self::Error> {
        if d.version != SCENARIO_VERSION {
            return Err(ScenarioError::Version { found: d.version, expected: SCENARIO_VERSION });
        }
        ScenarioSet::new(d.seed, d.config, d.damaged, d.loads_kw, d.scenarios)
    }
}

impl ScenarioSet {
    pub fn new(
        seed: u64,
        config: Option<ScenarioConfig>,
        damaged: BTreeSet<NodeId>,
        loads_kw: BTreeMap<NodeId, f64>,
        scenarios: Vec<Scenario>,
    ) -> Result<Self, ScenarioError> {
        for (pos, s) in scenarios.iter().enumerate() {
            let invalid = |detail: String| ScenarioError::InvalidScenario { scenario: s.id, detail };
            if s.id != pos {
                return Err(invalid(format!("expected id {pos}")));
            }
            if !s.nodes().eq(damaged.iter().copied()) {
                return Err(invalid("task nodes differ from the damaged set".into()));
            }
        }
        for n in &damaged {
            match loads_kw.get(n) {
                Some(&p) if p >= 0.0 => {}
                _ => return Err(ScenarioError::InvalidScenario { scenario: 0, detail: format!("node {n} lacks a load") }),
            }
        }
        Ok(ScenarioSet { seed, config, damaged, loads_kw, scenarios })
    }

    pub fn scenarios(&self) -> &[Scenario] {
        &self.scenarios
    }

    pub fn damaged(&self) -> &BTreeSet<NodeId> {
        &self.damaged
    }

    pub fn loads_kw(&self) -> &BTreeMap<NodeId, f64> {
        &self.loads_kw
    }

    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario set serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Random stream for scenario `id`: ChaCha8 keyed by the seed, with the
/// scenario id as stream number.
pub fn scenario_stream(seed: u64, id: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id as u64);
    rng
}

fn sample_scenario(
    id: usize,
    seed: u64,
    config: &ScenarioConfig,
    damaged: &BTreeSet<NodeId>,
    corridor_edges: &BTreeSet<(NodeId, NodeId)>,
) -> Scenario {
    let mut rng = scenario_stream(seed, id);
    let mut tasks = BTreeMap::new();
    for &node in damaged {
        let mut row = [RepairTask { time_h: 0.0, demand: 0 }; CREW_COUNT];
        for task in row.iter_mut() {
            task.time_h = sample_repair_time(&mut rng, &config.repair_time);
            task.demand = rng.gen_range(config.demand_min..=config.demand_max);
        }
        tasks.insert(node, row);
    }
    let failed = corridor_edges
        .iter()
        .filter(|_| rng.gen_bool(config.edge_failure_probability))
        .copied()
        .collect();
    Scenario::new(id, tasks, failed).expect("sampled times are positive")
}

/// Draws `config.n_scenarios` scenarios over the damage of all events.
/// Scenario `s` depends only on `(seed, s)`, so generation order is irrelevant.
pub fn generate_scenarios(
    config: &ScenarioConfig,
    net: &CoupledNetwork,
    events: &[TornadoEvent],
    seed: u64,
) -> Result<ScenarioSet, ScenarioError> {
    config.validate()?;
    let mut damage = Damage::default();
    for event in events {
        event.validate()?;
        let d = select_damage(event, net);
        damage.nodes.extend(d.nodes);
        damage.edges.extend(d.edges);
    }
    if damage.nodes.is_empty() {
        return Err(ScenarioError::NoDamagedNodes);
    }
    let scenarios = (0..config.n_scenarios)
        .into_par_iter()
        .map(|s| sample_scenario(s, seed, config, &damage.nodes, &damage.edges))
        .collect();
    let loads = damage.nodes.iter().map(|&n| (n, net.load_at(n))).collect();
    ScenarioSet::new(seed, Some(config.clone()), damage.nodes, loads, scenarios)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crew_order_and_names() {
        assert_eq!(CrewKind::FinalInspection.predecessor(), Some(CrewKind::Line));
        assert_eq!(CrewKind::InitialInspection.predecessor(), None);
        assert_eq!("C2".parse::<CrewKind>(), Ok(CrewKind::Line));
        assert_eq!("tree".parse::<CrewKind>(), Ok(CrewKind::Tree));
        assert!("C4".parse::<CrewKind>().is_err());
    }

    #[test]
    fn default_costs_positive() {
        assert!(CrewCosts::default().to_array().iter().all(|&c| c > 0.0));
    }

    #[test]
    fn repair_time_at_median_and_clamp() {
        let m = RepairTimeModel::default();
        assert!((m.from_standard_normal(0.0) - 0.7355).abs() < 5e-5);
        assert_eq!(m.from_standard_normal(3.0), m.max_h);
        assert_eq!(m.from_standard_normal(-3.0), m.min_h);
    }

    #[test]
    fn degenerate_demand_range() {
        let mut rng = scenario_stream(1, 0);
        assert_eq!(sample_repair_demand(&mut rng, 7, 7), Ok(7));
        assert_eq!(sample_repair_demand(&mut rng, 8, 7), Err(ScenarioError::InvalidRange { lo: 8, hi: 7 }));
    }

    #[test]
    fn event_validation() {
        let ev = TornadoEvent {
            ef_rating: 6,
            start_lat: 0.0,
            start_lon: 0.0,
            end_lat: 0.0,
            end_lon: 1.0,
            corridor_width_m: 10.0,
        };
        assert!(ev.validate().is_err());
        let ev = TornadoEvent { ef_rating: 2, corridor_width_m: 0.0, ..ev };
        assert!(ev.validate().is_err());
    }

    #[test]
    fn scenario_rejects_incomplete_rows() {
        let text = r#"{"id":0,"tasks":[{"node":1,"crew":"tree","time_h":1.0,"demand":2}]}"#;
        assert!(serde_json::from_str::<Scenario>(text).is_err());
    }
}
