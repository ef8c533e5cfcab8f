//! First stage: integer crew capacities `x[k]` and per-scenario assignments
//! `y[s][i][k]` minimizing
//!
//! ```text
//! c * sum_k C1[k] x[k] - (1/|S|) * ( wP * sum P[i] y[s][i][k] - wT * sum T[s][i][k] y[s][i][k] )
//! ```
//!
//! subject to `sum_i y[s][i][k] <= x[k]` and `y[s][i][k] >= D[s][i][k]`.
//!
//! Each extra unit of `x[k]` lets every scenario place one more unit of `y`
//! on its most profitable node, so the objective is bounded below exactly
//! when `c * C1[k]` exceeds the average of those best per-unit profits
//! ([`marginal_gain`]). In that regime the optimum takes the smallest
//! feasible capacity, `x[k] = max_s sum_i D[s][i][k]`, and in each scenario
//! gives the demand to every node plus any leftover capacity to the most
//! profitable node when that profit is positive.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scenario::{CrewCosts, CrewKind, ScenarioSet, CREW_COUNT};
use crate::units::NodeId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Stage1Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("scenario set is empty")]
    EmptyScenarioSet,
    #[error(
        "objective unbounded for crew {crew}: marginal gain {gain} >= c*C1 = {weighted_cost}; \
         use c > {min_scale_c}"
    )]
    UnboundedObjective { crew: usize, gain: f64, weighted_cost: f64, min_scale_c: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Multipliers on the restored-power and repair-time terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveWeights {
    pub power: f64,
    pub time: f64,
}

impl Default for ObjectiveWeights {
    fn default() -> Self {
        ObjectiveWeights { power: 1.0, time: 1.0 }
    }
}

/// Dense first-stage data, indexed `[scenario][node][crew]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage1Instance {
    nodes: Vec<NodeId>,
    time_h: Vec<Vec<Vec<f64>>>,
    demand: Vec<Vec<Vec<u32>>>,
    loads_kw: Vec<f64>,
    crew_costs: Vec<f64>,
    scale_c: f64,
    weights: ObjectiveWeights,
}

impl Stage1Instance {
    /// `scale_c = None` selects [`default_scale_c`].
    pub fn new(
        nodes: Vec<NodeId>,
        time_h: Vec<Vec<Vec<f64>>>,
        demand: Vec<Vec<Vec<u32>>>,
        loads_kw: Vec<f64>,
        crew_costs: Vec<f64>,
        scale_c: Option<f64>,
        weights: ObjectiveWeights,
    ) -> Result<Self, Stage1Error> {
        let (n, m) = (nodes.len(), crew_costs.len());
        let mismatch = |what: &str| Err(Stage1Error::DimensionMismatch(what.to_string()));
        if loads_kw.len() != n {
            return mismatch("loads must have one entry per node");
        }
        if time_h.len() != demand.len() {
            return mismatch("times and demands cover different scenario counts");
        }
        let shaped = |rows: usize, cols: usize| rows == n && cols == m;
        for s in 0..time_h.len() {
            if !shaped(time_h[s].len(), m) || time_h[s].iter().any(|r| r.len() != m) {
                return mismatch("repair-time table shape");
            }
            if !shaped(demand[s].len(), m) || demand[s].iter().any(|r| r.len() != m) {
                return mismatch("demand table shape");
            }
        }
        if crew_costs.iter().any(|&c| !(c > 0.0) || !c.is_finite()) {
            return Err(Stage1Error::InvalidParameter("crew costs must be positive".into()));
        }
        if loads_kw.iter().any(|&p| !(p >= 0.0)) {
            return Err(Stage1Error::InvalidParameter("loads must be non-negative".into()));
        }
        let mut inst = Stage1Instance { nodes, time_h, demand, loads_kw, crew_costs, scale_c: 1.0, weights };
        inst.scale_c = match scale_c {
            Some(c) if c > 0.0 && c.is_finite() => c,
            Some(c) => return Err(Stage1Error::InvalidParameter(format!("scale c = {c} must be positive"))),
            None => default_scale_c(&marginal_gain(&inst), &inst.crew_costs),
        };
        Ok(inst)
    }

    pub fn from_scenarios(
        set: &ScenarioSet,
        costs: &CrewCosts,
        scale_c: Option<f64>,
        weights: ObjectiveWeights,
    ) -> Result<Self, Stage1Error> {
        let nodes: Vec<NodeId> = set.damaged().iter().copied().collect();
        let mut time_h = Vec::with_capacity(set.len());
        let mut demand = Vec::with_capacity(set.len());
        for s in set.scenarios() {
            let mut t_rows = Vec::with_capacity(nodes.len());
            let mut d_rows = Vec::with_capacity(nodes.len());
            for &i in &nodes {
                let task = |k: CrewKind| s.task(i, k).expect("scenario covers every damaged node");
                t_rows.push(CrewKind::ALL.iter().map(|&k| task(k).time_h).collect());
                d_rows.push(CrewKind::ALL.iter().map(|&k| task(k).demand).collect());
            }
            time_h.push(t_rows);
            demand.push(d_rows);
        }
        let loads = nodes.iter().map(|n| set.loads_kw()[n]).collect();
        Self::new(nodes, time_h, demand, loads, costs.to_array().to_vec(), scale_c, weights)
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn n_scenarios(&self) -> usize {
        self.demand.len()
    }

    pub fn n_crews(&self) -> usize {
        self.crew_costs.len()
    }

    pub fn scale_c(&self) -> f64 {
        self.scale_c
    }

    pub fn crew_costs(&self) -> &[f64] {
        &self.crew_costs
    }

    pub fn demand(&self, s: usize, i: usize, k: usize) -> u32 {
        self.demand[s][i][k]
    }

    pub fn time_h(&self, s: usize, i: usize, k: usize) -> f64 {
        self.time_h[s][i][k]
    }

    pub fn load_kw(&self, i: usize) -> f64 {
        self.loads_kw[i]
    }

    /// Same data with a different `c`.
    pub fn with_scale_c(&self, scale_c: f64) -> Result<Self, Stage1Error> {
        Self::new(
            self.nodes.clone(),
            self.time_h.clone(),
            self.demand.clone(),
            self.loads_kw.clone(),
            self.crew_costs.clone(),
            Some(scale_c),
            self.weights,
        )
    }

    /// Objective coefficient of one unit of `y[s][i][k]` inside the bracket.
    pub fn unit_profit(&self, s: usize, i: usize, k: usize) -> f64 {
        self.weights.power * self.loads_kw[i] - self.weights.time * self.time_h[s][i][k]
    }

    /// `max_s sum_i D[s][i][k]`: the smallest capacity covering every scenario.
    pub fn capacity_lower_bound(&self, k: usize) -> u64 {
        self.demand
            .iter()
            .map(|rows| rows.iter().map(|r| r[k] as u64).sum::<u64>())
            .max()
            .unwrap_or(0)
    }
}

/// Stage-1 decision and its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct CrewAllocation {
    pub capacity: Vec<u64>,
    /// `[scenario][node][crew]`, persons.
    pub assignment: Vec<Vec<Vec<f64>>>,
    pub objective_value: f64,
}

fn check_shape(alloc: &CrewAllocation, inst: &Stage1Instance) -> Result<(), Stage1Error> {
    let (n, m) = (inst.nodes.len(), inst.n_crews());
    let ok = alloc.capacity.len() == m
        && alloc.assignment.len() == inst.n_scenarios()
        && alloc.assignment.iter().all(|rows| rows.len() == n && rows.iter().all(|r| r.len() == m));
    if ok {
        Ok(())
    } else {
        Err(Stage1Error::DimensionMismatch("allocation does not match instance".into()))
    }
}

/// Evaluates the first-stage objective at `(alloc.capacity, alloc.assignment)`.
/// `alloc.objective_value` is ignored.
pub fn stage1_objective(alloc: &CrewAllocation, inst: &Stage1Instance) -> Result<f64, Stage1Error> {
    check_shape(alloc, inst)?;
    let crew_cost: f64 = inst.crew_costs.iter().zip(&alloc.capacity).map(|(c, &x)| c * x as f64).sum();
    if inst.n_scenarios() == 0 {
        return Ok(inst.scale_c * crew_cost);
    }
    let mut restored = 0.0;
    let mut repair = 0.0;
    for (s, rows) in alloc.assignment.iter().enumerate() {
        for (i, row) in rows.iter().enumerate() {
            for (k, &y) in row.iter().enumerate() {
                restored += inst.loads_kw[i] * y;
                repair += inst.time_h[s][i][k] * y;
            }
        }
    }
    let bracket = inst.weights.power * restored - inst.weights.time * repair;
    Ok(inst.scale_c * crew_cost - bracket / inst.n_scenarios() as f64)
}

/// `g[k] = (1/|S|) sum_s max(0, max_i profit(s, i, k))`: the objective
/// improvement bought by one extra unit of `x[k]` when the slack is placed optimally.
pub fn marginal_gain(inst: &Stage1Instance) -> Vec<f64> {
    let n_s = inst.n_scenarios();
    (0..inst.n_crews())
        .map(|k| {
            if n_s == 0 {
                return 0.0;
            }
            let total: f64 = (0..n_s)
                .map(|s| (0..inst.nodes.len()).map(|i| inst.unit_profit(s, i, k)).fold(0.0, f64::max))
                .sum();
            total / n_s as f64
        })
        .collect()
}

/// Smallest power of ten (at least 1) strictly above `max g / min C1`.
pub fn default_scale_c(gains: &[f64], crew_costs: &[f64]) -> f64 {
    let max_gain = gains.iter().copied().fold(0.0, f64::max);
    let min_cost = crew_costs.iter().copied().fold(f64::INFINITY, f64::min);
    if !min_cost.is_finite() {
        return 1.0;
    }
    let ratio = max_gain / min_cost;
    let mut c = 1.0_f64;
    while c <= ratio {
        c *= 10.0;
    }
    c
}

/// Per-crew boundedness margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessReport {
    pub scale_c: f64,
    pub gains: Vec<f64>,
    pub weighted_costs: Vec<f64>,
    /// `max_k g[k] / C1[k]`; any `c` strictly above it is admissible.
    pub min_scale_c: f64,
    pub bounded: bool,
}

pub fn boundedness(inst: &Stage1Instance) -> BoundednessReport {
    let gains = marginal_gain(inst);
    let weighted_costs: Vec<f64> = inst.crew_costs.iter().map(|c| inst.scale_c * c).collect();
    let min_scale_c = gains.iter().zip(&inst.crew_costs).map(|(g, c)| g / c).fold(0.0, f64::max);
    let bounded = gains.iter().zip(&weighted_costs).all(|(g, w)| w > g);
    BoundednessReport { scale_c: inst.scale_c, gains, weighted_costs, min_scale_c, bounded }
}

fn ensure_bounded(inst: &Stage1Instance) -> Result<(), Stage1Error> {
    let report = boundedness(inst);
    for (k, (&gain, &weighted_cost)) in report.gains.iter().zip(&report.weighted_costs).enumerate() {
        if weighted_cost <= gain {
            return Err(Stage1Error::UnboundedObjective {
                crew: k,
                gain,
                weighted_cost,
                min_scale_c: report.min_scale_c,
            });
        }
    }
    Ok(())
}

/// Exact optimum in the bounded regime.
pub fn solve_stage1(inst: &Stage1Instance) -> Result<CrewAllocation, Stage1Error> {
    if inst.n_scenarios() == 0 {
        return Err(Stage1Error::EmptyScenarioSet);
    }
    ensure_bounded(inst)?;
    let capacity: Vec<u64> = (0..inst.n_crews()).map(|k| inst.capacity_lower_bound(k)).collect();
    let mut assignment = Vec::with_capacity(inst.n_scenarios());
    for s in 0..inst.n_scenarios() {
        let mut rows: Vec<Vec<f64>> =
            inst.demand[s].iter().map(|r| r.iter().map(|&d| d as f64).collect()).collect();
        for (k, &x) in capacity.iter().enumerate() {
            let used: u64 = inst.demand[s].iter().map(|r| r[k] as u64).sum();
            let slack = x - used;
            let best = (0..inst.nodes.len())
                .map(|i| (i, inst.unit_profit(s, i, k)))
                .fold(None, |acc: Option<(usize, f64)>, (i, p)| match acc {
                    Some((_, bp)) if bp >= p => acc,
                    _ => Some((i, p)),
                });
            if let Some((i, p)) = best {
                if p > 0.0 && slack > 0 {
                    rows[i][k] += slack as f64;
                }
            }
        }
        assignment.push(rows);
    }
    let mut alloc = CrewAllocation { capacity, assignment, objective_value: 0.0 };
    alloc.objective_value = stage1_objective(&alloc, inst)?;
    Ok(alloc)
}

/// Optimal `y` for fixed capacities, placing slack one unit at a time on the
/// currently most profitable node. `None` if `x` cannot cover some scenario.
fn greedy_assignment(inst: &Stage1Instance, capacity: &[u64]) -> Option<Vec<Vec<Vec<f64>>>> {
    let mut out = Vec::with_capacity(inst.n_scenarios());
    for s in 0..inst.n_scenarios() {
        let mut rows: Vec<Vec<f64>> = inst.demand[s].iter().map(|r| r.iter().map(|&d| d as f64).collect()).collect();
        for (k, &x) in capacity.iter().enumerate() {
            let used: u64 = inst.demand[s].iter().map(|r| r[k] as u64).sum();
            if used > x {
                return None;
            }
            for _ in used..x {
                let mut pick: Option<(usize, f64)> = None;
                for i in 0..inst.nodes.len() {
                    let p = inst.unit_profit(s, i, k);
                    if p > 0.0 && pick.map_or(true, |(_, bp)| p > bp) {
                        pick = Some((i, p));
                    }
                }
                match pick {
                    Some((i, _)) => rows[i][k] += 1.0,
                    None => break,
                }
            }
        }
        out.push(rows);
    }
    Some(out)
}

/// Enumeration oracle: tries every `x` with `x[k]` in
/// `[LB[k], LB[k] + band]`, pairs each with its greedy optimal `y`, and keeps
/// the lowest objective (ties to the lexicographically smallest `x`).
pub fn solve_stage1_enumerate(inst: &Stage1Instance, band: u64) -> Result<CrewAllocation, Stage1Error> {
    if inst.n_scenarios() == 0 {
        return Err(Stage1Error::EmptyScenarioSet);
    }
    ensure_bounded(inst)?;
    let lower: Vec<u64> = (0..inst.n_crews()).map(|k| inst.capacity_lower_bound(k)).collect();
    let width = band + 1;
    let total = width.checked_pow(inst.n_crews() as u32).ok_or_else(|| {
        Stage1Error::InvalidParameter("enumeration space too large".into())
    })?;
    let best = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let mut rest = code;
            let capacity: Vec<u64> = lower
                .iter()
                .map(|&lb| {
                    let off = rest % width;
                    rest /= width;
                    lb + off
                })
                .collect();
            let assignment = greedy_assignment(inst, &capacity)?;
            let mut alloc = CrewAllocation { capacity, assignment, objective_value: 0.0 };
            alloc.objective_value = stage1_objective(&alloc, inst).ok()?;
            Some(alloc)
        })
        .reduce_with(|a, b| {
            let a_first = a.objective_value < b.objective_value
                || (a.objective_value == b.objective_value && a.capacity <= b.capacity);
            if a_first {
                a
            } else {
                b
            }
        });
    best.ok_or_else(|| Stage1Error::InvalidParameter("no feasible capacity in band".into()))
}

/// Mechanical check of both constraint families and integrality; returns
/// one message per violation.
pub fn check_feasible(alloc: &CrewAllocation, inst: &Stage1Instance) -> Vec<String> {
    let mut out = Vec::new();
    if check_shape(alloc, inst).is_err() {
        out.push("allocation shape does not match instance".into());
        return out;
    }
    for s in 0..inst.n_scenarios() {
        for k in 0..inst.n_crews() {
            let total: f64 = alloc.assignment[s].iter().map(|r| r[k]).sum();
            if total > alloc.capacity[k] as f64 + 1e-9 {
                out.push(format!("coverage: scenario {s} crew {k} assigns {total} > capacity {}", alloc.capacity[k]));
            }
            for i in 0..inst.nodes.len() {
                let y = alloc.assignment[s][i][k];
                if y < inst.demand[s][i][k] as f64 {
                    out.push(format!("demand: scenario {s} node {} crew {k}: {y} < {}", inst.nodes[i], inst.demand[s][i][k]));
                }
                if y < 0.0 {
                    out.push(format!("non-negativity: scenario {s} node {} crew {k}", inst.nodes[i]));
                }
            }
        }
    }
    out
}

pub const ALLOCATION_SCHEMA: &str = "restoreplan.allocation";
pub const ALLOCATION_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityRow {
    pub crew: CrewKind,
    pub persons: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentRow {
    pub scenario: usize,
    pub node: NodeId,
    pub crew: CrewKind,
    pub persons: f64,
}

/// On-disk form of a four-crew allocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationFile {
    pub schema: String,
    pub version: u32,
    pub capacities: Vec<CapacityRow>,
    pub assignments: Vec<AssignmentRow>,
    pub objective_value: f64,
    pub boundedness: BoundednessReport,
}

impl AllocationFile {
    pub fn new(alloc: &CrewAllocation, inst: &Stage1Instance) -> Result<Self, Stage1Error> {
        check_shape(alloc, inst)?;
        if inst.n_crews() != CREW_COUNT {
            return Err(Stage1Error::DimensionMismatch(format!("expected {CREW_COUNT} crews")));
        }
        let capacities = CrewKind::ALL
            .iter()
            .map(|&crew| CapacityRow { crew, persons: alloc.capacity[crew.index()] })
            .collect();
        let mut assignments = Vec::new();
        for (s, rows) in alloc.assignment.iter().enumerate() {
            for (i, row) in rows.iter().enumerate() {
                for crew in CrewKind::ALL {
                    assignments.push(AssignmentRow {
                        scenario: s,
                        node: inst.nodes[i],
                        crew,
                        persons: row[crew.index()],
                    });
                }
            }
        }
        Ok(AllocationFile {
            schema: ALLOCATION_SCHEMA.into(),
            version: ALLOCATION_VERSION,
            capacities,
            assignments,
            objective_value: alloc.objective_value,
            boundedness: boundedness(inst),
        })
    }

    pub fn capacity(&self, crew: CrewKind) -> u64 {
        self.capacities.iter().find(|r| r.crew == crew).map_or(0, |r| r.persons)
    }
}
