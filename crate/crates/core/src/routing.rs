//! Second stage: one depot-to-depot route per crew kind and scenario over the
//! reduced complete graph, solved exactly.
//!
//! Each crew must visit every node where it has positive demand exactly once,
//! leaving from and returning to any depot (start and end may differ). The
//! optimum is found by a Held-Karp dynamic program over subsets of required
//! nodes. Ties resolve to the lexicographically smallest visit order, then the
//! smallest `(depot_start, depot_end)`; [`brute_force_routing`] enumerates the
//! same space with the same rule and serves as the verification oracle.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{apply_road_failures, shortest_path_matrix, CompleteGraph, CoupledNetwork, NetworkError};
use crate::scenario::{CrewKind, Scenario, CREW_COUNT};
use crate::units::{Cost, Distance, NodeId};

/// Largest required-node count the dynamic program accepts.
pub const MAX_EXACT_NODES: usize = 15;
/// Largest required-node count the permutation oracle accepts.
pub const MAX_BRUTE_FORCE_NODES: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RoutingError {
    #[error("crew {crew}: node {node} is unreachable from every depot")]
    NodeUnreachable { node: NodeId, crew: CrewKind },
    #[error("crew {crew}: required nodes lie in different road components; no single route covers them")]
    NoFeasibleRoute { crew: CrewKind },
    #[error("crew {crew}: {count} required nodes exceed the exact limit of {limit}")]
    TooManyNodes { crew: CrewKind, count: usize, limit: usize },
    #[error("arc {from} -> {to} is unreachable")]
    UnreachableArc { from: NodeId, to: NodeId },
    #[error("no depots")]
    NoDepots,
    #[error("invalid routing instance: {0}")]
    InvalidInstance(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// Per-crew travel cost per meter of shortest-path distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TravelRates(pub [f64; CREW_COUNT]);

impl Default for TravelRates {
    fn default() -> Self {
        TravelRates([1.0; CREW_COUNT])
    }
}

impl TravelRates {
    pub fn get(&self, k: CrewKind) -> f64 {
        self.0[k.index()]
    }
}

/// One scenario's routing data.
#[derive(Debug, Clone)]
pub struct RoutingInstance {
    scenario_id: usize,
    complete: CompleteGraph,
    depots: Vec<NodeId>,
    damaged: BTreeSet<NodeId>,
    required: BTreeMap<CrewKind, BTreeSet<NodeId>>,
    rates: TravelRates,
}

impl RoutingInstance {
    pub fn new(
        scenario_id: usize,
        complete: CompleteGraph,
        depots: BTreeSet<NodeId>,
        damaged: BTreeSet<NodeId>,
        required: BTreeMap<CrewKind, BTreeSet<NodeId>>,
        rates: TravelRates,
    ) -> Result<Self, RoutingError> {
        let invalid = |m: String| Err(RoutingError::InvalidInstance(m));
        if depots.is_empty() {
            return Err(RoutingError::NoDepots);
        }
        for &n in depots.iter().chain(damaged.iter()) {
            if complete.index_of(n).is_none() {
                return invalid(format!("node {n} is not a terminal of the complete graph"));
            }
        }
        if let Some(n) = depots.intersection(&damaged).next() {
            return invalid(format!("node {n} is both depot and damaged"));
        }
        for (crew, nodes) in &required {
            if let Some(n) = nodes.iter().find(|n| !damaged.contains(n)) {
                return invalid(format!("crew {crew} requires non-damaged node {n}"));
            }
        }
        if rates.0.iter().any(|&r| !(r >= 0.0) || !r.is_finite()) {
            return invalid("travel rates must be finite and non-negative".into());
        }
        Ok(RoutingInstance {
            scenario_id,
            complete,
            depots: depots.into_iter().collect(),
            damaged,
            required,
            rates,
        })
    }

    /// Applies the scenario's road failures to the network, reduces it over
    /// depots and the scenario's nodes, and requires each crew at the nodes
    /// where its demand is positive.
    pub fn from_scenario(net: &CoupledNetwork, scenario: &Scenario, rates: TravelRates) -> Result<Self, RoutingError> {
        let (road, _) = apply_road_failures(net.road(), scenario.failed_edges());
        let damaged: BTreeSet<NodeId> = scenario.nodes().collect();
        let terminals: Vec<NodeId> = net.depots().iter().chain(damaged.iter()).copied().collect();
        let complete = shortest_path_matrix(&road, &terminals)?;
        let required = CrewKind::ALL.iter().map(|&k| (k, scenario.required(k))).collect();
        Self::new(scenario.id, complete, net.depots().clone(), damaged, required, rates)
    }

    pub fn scenario_id(&self) -> usize {
        self.scenario_id
    }

    pub fn complete(&self) -> &CompleteGraph {
        &self.complete
    }

    pub fn depots(&self) -> &[NodeId] {
        &self.depots
    }

    pub fn damaged(&self) -> &BTreeSet<NodeId> {
        &self.damaged
    }

    pub fn required(&self, crew: CrewKind) -> BTreeSet<NodeId> {
        self.required.get(&crew).cloned().unwrap_or_default()
    }

    pub fn travel_cost(&self, crew: CrewKind, from: NodeId, to: NodeId) -> Option<Cost> {
        self.complete.distance(from, to).map(|d| d.cost_at(self.rates.get(crew)))
    }

    fn leg(&self, crew: CrewKind, from: NodeId, to: NodeId) -> Result<Leg, RoutingError> {
        let length = self.complete.distance(from, to).ok_or(RoutingError::UnreachableArc { from, to })?;
        Ok(Leg {
            from,
            to,
            length,
            cost: length.cost_at(self.rates.get(crew)),
            road_path: self.complete.road_path(from, to).unwrap_or_default(),
        })
    }

    fn build_route(&self, crew: CrewKind, depot_start: NodeId, order: Vec<NodeId>, depot_end: NodeId) -> Result<Route, RoutingError> {
        let stops: Vec<NodeId> = std::iter::once(depot_start).chain(order.iter().copied()).chain([depot_end]).collect();
        let legs = stops.windows(2).map(|w| self.leg(crew, w[0], w[1])).collect::<Result<Vec<_>, _>>()?;
        let total_cost = legs.iter().map(|l| l.cost).sum();
        let mtz_labels = order.iter().enumerate().map(|(p, &n)| (n, p as u32 + 1)).collect();
        Ok(Route { crew, depot_start, depot_end, visit_order: order, legs, total_cost, mtz_labels })
    }
}

/// One traversed arc of the complete graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leg {
    pub from: NodeId,
    pub to: NodeId,
    #[serde(rename = "length_m")]
    pub length: Distance,
    pub cost: Cost,
    /// Road-level node sequence realizing the arc; empty when unavailable.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub road_path: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Route {
    pub crew: CrewKind,
    pub depot_start: NodeId,
    pub depot_end: NodeId,
    pub visit_order: Vec<NodeId>,
    pub legs: Vec<Leg>,
    pub total_cost: Cost,
    /// Visit position `u` of each node, starting at 1.
    pub mtz_labels: BTreeMap<NodeId, u32>,
}

impl Route {
    pub fn leg_costs(&self) -> Vec<Cost> {
        self.legs.iter().map(|l| l.cost).collect()
    }

    pub fn stops(&self) -> Vec<NodeId> {
        std::iter::once(self.depot_start)
            .chain(self.visit_order.iter().copied())
            .chain([self.depot_end])
            .collect()
    }

    pub fn arcs(&self) -> Vec<(NodeId, NodeId)> {
        self.stops().windows(2).map(|w| (w[0], w[1])).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutePlan {
    pub scenario_id: usize,
    /// Absent for crews with no required nodes.
    pub routes: BTreeMap<CrewKind, Route>,
    pub total_cost: Cost,
}

impl RoutePlan {
    fn from_routes(scenario_id: usize, routes: BTreeMap<CrewKind, Route>) -> Self {
        let total_cost = routes.values().map(|r| r.total_cost).sum();
        RoutePlan { scenario_id, routes, total_cost }
    }
}

/// Mean plan cost across scenarios.
pub fn expected_cost(plans: &[RoutePlan]) -> f64 {
    if plans.is_empty() {
        return 0.0;
    }
    plans.iter().map(|p| p.total_cost.as_f64()).sum::<f64>() / plans.len() as f64
}

/// Sum of arc costs `depot_start -> v1 -> ... -> vn -> depot_end`, priced by the instance.
pub fn route_cost(route: &Route, inst: &RoutingInstance) -> Result<Cost, RoutingError> {
    route
        .arcs()
        .into_iter()
        .map(|(a, b)| inst.travel_cost(route.crew, a, b).ok_or(RoutingError::UnreachableArc { from: a, to: b }))
        .sum()
}

const INF: i64 = i64::MAX;

/// Local cost matrix: required nodes `0..n`, then depots.
struct LocalCosts {
    n: usize,
    depots: usize,
    cost: Vec<Vec<i64>>,
}

impl LocalCosts {
    fn new(inst: &RoutingInstance, crew: CrewKind, nodes: &[NodeId]) -> Self {
        let all: Vec<NodeId> = nodes.iter().chain(inst.depots.iter()).copied().collect();
        let cost = all
            .iter()
            .map(|&a| all.iter().map(|&b| inst.travel_cost(crew, a, b).map_or(INF, |c| c.milli())).collect())
            .collect();
        LocalCosts { n: nodes.len(), depots: inst.depots.len(), cost }
    }

    fn c(&self, a: usize, b: usize) -> i64 {
        self.cost[a][b]
    }

    fn depot(&self, d: usize) -> usize {
        self.n + d
    }

    fn start_cost(&self, v: usize) -> i64 {
        (0..self.depots).map(|d| self.c(self.depot(d), v)).min().unwrap_or(INF)
    }

    fn end_cost(&self, v: usize) -> i64 {
        (0..self.depots).map(|d| self.c(v, self.depot(d))).min().unwrap_or(INF)
    }

    /// Smallest-index depots attaining the cheapest start and end.
    fn depots_for(&self, first: usize, last: usize) -> (usize, usize) {
        let start = self.start_cost(first);
        let end = self.end_cost(last);
        let ds = (0..self.depots).find(|&d| self.c(self.depot(d), first) == start).expect("start depot");
        let de = (0..self.depots).find(|&d| self.c(last, self.depot(d)) == end).expect("end depot");
        (ds, de)
    }
}

fn add(a: i64, b: i64) -> i64 {
    if a == INF || b == INF {
        INF
    } else {
        a + b
    }
}

fn check_reachable(crew: CrewKind, nodes: &[NodeId], costs: &LocalCosts) -> Result<(), RoutingError> {
    for (v, &node) in nodes.iter().enumerate() {
        if costs.start_cost(v) == INF || costs.end_cost(v) == INF {
            return Err(RoutingError::NodeUnreachable { node, crew });
        }
    }
    Ok(())
}

fn held_karp(inst: &RoutingInstance, crew: CrewKind) -> Result<Option<Route>, RoutingError> {
    let nodes: Vec<NodeId> = inst.required(crew).into_iter().collect();
    let n = nodes.len();
    if n == 0 {
        return Ok(None);
    }
    if n > MAX_EXACT_NODES {
        return Err(RoutingError::TooManyNodes { crew, count: n, limit: MAX_EXACT_NODES });
    }
    let costs = LocalCosts::new(inst, crew, &nodes);
    check_reachable(crew, &nodes, &costs)?;

    // g[mask][v]: cheapest path that starts at v (in mask), covers mask and ends at a depot
    let full = (1usize << n) - 1;
    let mut g = vec![vec![INF; n]; full + 1];
    for v in 0..n {
        g[1 << v][v] = costs.end_cost(v);
    }
    for mask in 1..=full {
        if mask.count_ones() < 2 {
            continue;
        }
        for v in 0..n {
            if mask & (1 << v) == 0 {
                continue;
            }
            let rest = mask & !(1 << v);
            let mut best = INF;
            for w in 0..n {
                if rest & (1 << w) != 0 {
                    best = best.min(add(costs.c(v, w), g[rest][w]));
                }
            }
            g[mask][v] = best;
        }
    }
    let total = (0..n).map(|v| add(costs.start_cost(v), g[full][v])).min().unwrap_or(INF);
    if total == INF {
        return Err(RoutingError::NoFeasibleRoute { crew });
    }

    let mut order = Vec::with_capacity(n);
    let mut cur = (0..n).find(|&v| add(costs.start_cost(v), g[full][v]) == total).expect("optimal first node");
    let mut mask = full;
    order.push(cur);
    while mask.count_ones() > 1 {
        let rest = mask & !(1 << cur);
        let next = (0..n)
            .filter(|&w| rest & (1 << w) != 0)
            .find(|&w| add(costs.c(cur, w), g[rest][w]) == g[mask][cur])
            .expect("optimal successor");
        order.push(next);
        mask = rest;
        cur = next;
    }
    let (ds, de) = costs.depots_for(order[0], *order.last().unwrap());
    let route = inst.build_route(crew, inst.depots[ds], order.into_iter().map(|i| nodes[i]).collect(), inst.depots[de])?;
    debug_assert_eq!(route.total_cost.milli(), total);
    Ok(Some(route))
}

/// Exact minimum-cost route for every crew with required nodes.
pub fn solve_routing(inst: &RoutingInstance) -> Result<RoutePlan, RoutingError> {
    let mut routes = BTreeMap::new();
    for crew in CrewKind::ALL {
        if let Some(route) = held_karp(inst, crew)? {
            routes.insert(crew, route);
        }
    }
    Ok(RoutePlan::from_routes(inst.scenario_id, routes))
}

/// Rearranges `p` into the next lexicographic permutation; false at the last.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Returns the best route and the number of (order, depot pair) candidates tried.
fn brute_force_crew(inst: &RoutingInstance, crew: CrewKind) -> Result<(Option<Route>, usize), RoutingError> {
    let nodes: Vec<NodeId> = inst.required(crew).into_iter().collect();
    let n = nodes.len();
    if n == 0 {
        return Ok((None, 0));
    }
    if n > MAX_BRUTE_FORCE_NODES {
        return Err(RoutingError::TooManyNodes { crew, count: n, limit: MAX_BRUTE_FORCE_NODES });
    }
    let costs = LocalCosts::new(inst, crew, &nodes);
    check_reachable(crew, &nodes, &costs)?;

    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<(i64, Vec<usize>, usize, usize)> = None;
    let mut tried = 0;
    loop {
        let inner = perm.windows(2).fold(0, |acc, w| add(acc, costs.c(w[0], w[1])));
        for ds in 0..costs.depots {
            for de in 0..costs.depots {
                tried += 1;
                let total = add(add(costs.c(costs.depot(ds), perm[0]), inner), costs.c(perm[n - 1], costs.depot(de)));
                if total != INF && best.as_ref().map_or(true, |b| total < b.0) {
                    best = Some((total, perm.clone(), ds, de));
                }
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let (_, order, ds, de) = best.ok_or(RoutingError::NoFeasibleRoute { crew })?;
    let route = inst.build_route(crew, inst.depots[ds], order.into_iter().map(|i| nodes[i]).collect(), inst.depots[de])?;
    Ok((Some(route), tried))
}

/// Exhaustive oracle over all visit orders and depot pairs.
pub fn brute_force_routing(inst: &RoutingInstance) -> Result<RoutePlan, RoutingError> {
    let mut routes = BTreeMap::new();
    for crew in CrewKind::ALL {
        if let (Some(route), _) = brute_force_crew(inst, crew)? {
            routes.insert(crew, route);
        }
    }
    Ok(RoutePlan::from_routes(inst.scenario_id, routes))
}

/// Arc-level view of one crew's routing decision (`z = 1` arcs plus `u` labels).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArcSet {
    pub arcs: Vec<(NodeId, NodeId)>,
    pub labels: BTreeMap<NodeId, u32>,
    /// Declared total, checked against the priced arcs when present.
    pub declared_cost: Option<Cost>,
}

impl From<&Route> for ArcSet {
    fn from(r: &Route) -> Self {
        ArcSet { arcs: r.arcs(), labels: r.mtz_labels.clone(), declared_cost: Some(r.total_cost) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintFamily {
    VisitOnce,
    DepotEndpoints,
    FlowConservation,
    SubtourElimination,
    CostConsistency,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub crew: CrewKind,
    pub nodes: Vec<NodeId>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyResult {
    pub family: ConstraintFamily,
    pub passed: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub scenario_id: usize,
    pub families: Vec<FamilyResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.families.iter().all(|f| f.passed)
    }

    pub fn family(&self, family: ConstraintFamily) -> &FamilyResult {
        self.families.iter().find(|f| f.family == family).expect("every family is reported")
    }

    pub fn violations(&self) -> impl Iterator<Item = (ConstraintFamily, &Violation)> {
        self.families.iter().flat_map(|f| f.violations.iter().map(move |v| (f.family, v)))
    }
}

/// Checks a plan against every routing constraint family.
pub fn validate_routes(plan: &RoutePlan, inst: &RoutingInstance) -> ValidationReport {
    let sets: BTreeMap<CrewKind, ArcSet> = plan.routes.iter().map(|(&k, r)| (k, ArcSet::from(r))).collect();
    let mut report = validate_arcs(plan.scenario_id, &sets, inst);
    for (&key, route) in &plan.routes {
        if route.crew != key {
            let v = Violation { crew: key, nodes: vec![], message: format!("route stored under {key} is for {}", route.crew) };
            let fam = report.families.iter_mut().find(|f| f.family == ConstraintFamily::CostConsistency).unwrap();
            fam.violations.push(v);
            fam.passed = false;
        }
    }
    report
}

/// Validator over raw arc sets, so that decisions not expressible as a single
/// path (detached subtours, repeated visits) can be checked too.
pub fn validate_arcs(scenario_id: usize, sets: &BTreeMap<CrewKind, ArcSet>, inst: &RoutingInstance) -> ValidationReport {
    let mut found: BTreeMap<ConstraintFamily, Vec<Violation>> = BTreeMap::new();
    let mut flag = |family, crew, nodes: Vec<NodeId>, message: String| {
        found.entry(family).or_default().push(Violation { crew, nodes, message });
    };
    let depots: BTreeSet<NodeId> = inst.depots.iter().copied().collect();
    let big_m = inst.damaged.len() as i64;
    let empty = ArcSet::default();

    for crew in CrewKind::ALL {
        let required = inst.required(crew);
        let set = sets.get(&crew).unwrap_or(&empty);
        let mut out_deg: BTreeMap<NodeId, usize> = BTreeMap::new();
        let mut in_deg: BTreeMap<NodeId, usize> = BTreeMap::new();
        for &(a, b) in &set.arcs {
            *out_deg.entry(a).or_default() += 1;
            *in_deg.entry(b).or_default() += 1;
        }
        let deg = |m: &BTreeMap<NodeId, usize>, n: NodeId| m.get(&n).copied().unwrap_or(0);

        for &n in &required {
            let (o, i) = (deg(&out_deg, n), deg(&in_deg, n));
            if o != 1 || i != 1 {
                flag(ConstraintFamily::VisitOnce, crew, vec![n], format!("node {n} entered {i} and left {o} times"));
            }
        }
        let touched: BTreeSet<NodeId> = out_deg.keys().chain(in_deg.keys()).copied().collect();
        for &n in touched.iter().filter(|n| !depots.contains(n) && !required.contains(n)) {
            flag(ConstraintFamily::VisitOnce, crew, vec![n], format!("node {n} visited without demand"));
        }

        let leaving: usize = depots.iter().map(|&d| deg(&out_deg, d)).sum();
        let entering: usize = depots.iter().map(|&d| deg(&in_deg, d)).sum();
        let expected = usize::from(!required.is_empty());
        if leaving != expected || entering != expected {
            flag(
                ConstraintFamily::DepotEndpoints,
                crew,
                depots.iter().copied().filter(|&d| deg(&out_deg, d) + deg(&in_deg, d) > 0).collect(),
                format!("{leaving} departures and {entering} returns at depots, expected {expected}"),
            );
        }
        if let Some(&(a, b)) = set.arcs.iter().find(|(a, b)| depots.contains(a) && depots.contains(b)) {
            flag(ConstraintFamily::DepotEndpoints, crew, vec![a, b], format!("depot-to-depot arc {a} -> {b}"));
        }

        for &n in touched.iter().filter(|n| !depots.contains(n)) {
            if deg(&out_deg, n) != deg(&in_deg, n) {
                flag(ConstraintFamily::FlowConservation, crew, vec![n], format!("node {n} inflow differs from outflow"));
            }
        }

        let inner: Vec<(NodeId, NodeId)> = set
            .arcs
            .iter()
            .copied()
            .filter(|(a, b)| inst.damaged.contains(a) && inst.damaged.contains(b))
            .collect();
        for &(a, b) in &inner {
            match (set.labels.get(&a), set.labels.get(&b)) {
                (Some(&ua), Some(&ub)) if ua as i64 - ub as i64 + big_m <= big_m - 1 => {}
                (Some(&ua), Some(&ub)) => flag(
                    ConstraintFamily::SubtourElimination,
                    crew,
                    vec![a, b],
                    format!("u[{a}] - u[{b}] + {big_m} = {} > {}", ua as i64 - ub as i64 + big_m, big_m - 1),
                ),
                _ => flag(ConstraintFamily::SubtourElimination, crew, vec![a, b], format!("arc {a} -> {b} lacks labels")),
            }
        }
        if let Some(cycle) = find_cycle(&inner) {
            flag(
                ConstraintFamily::SubtourElimination,
                crew,
                cycle.clone(),
                format!("subtour through {} damaged nodes admits no valid labels", cycle.len()),
            );
        }

        let priced: Option<Cost> = set.arcs.iter().map(|&(a, b)| inst.travel_cost(crew, a, b)).sum();
        match (priced, set.declared_cost) {
            (None, _) => flag(ConstraintFamily::CostConsistency, crew, vec![], "route uses an unreachable arc".into()),
            (Some(p), Some(d)) if p != d => {
                flag(ConstraintFamily::CostConsistency, crew, vec![], format!("declared cost {d} but arcs price at {p}"))
            }
            _ => {}
        }
    }

    let families = [
        ConstraintFamily::VisitOnce,
        ConstraintFamily::DepotEndpoints,
        ConstraintFamily::FlowConservation,
        ConstraintFamily::SubtourElimination,
        ConstraintFamily::CostConsistency,
    ]
    .into_iter()
    .map(|family| {
        let violations = found.remove(&family).unwrap_or_default();
        FamilyResult { family, passed: violations.is_empty(), violations }
    })
    .collect();
    ValidationReport { scenario_id, families }
}

/// Nodes of some directed cycle, if the arc set has one.
fn find_cycle(arcs: &[(NodeId, NodeId)]) -> Option<Vec<NodeId>> {
    let mut succ: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for &(a, b) in arcs {
        succ.entry(a).or_default().push(b);
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    fn visit(
        n: NodeId,
        succ: &BTreeMap<NodeId, Vec<NodeId>>,
        marks: &mut BTreeMap<NodeId, Mark>,
        stack: &mut Vec<NodeId>,
    ) -> Option<Vec<NodeId>> {
        marks.insert(n, Mark::Open);
        stack.push(n);
        for &m in succ.get(&n).map(Vec::as_slice).unwrap_or(&[]) {
            match marks.get(&m) {
                Some(Mark::Open) => {
                    let start = stack.iter().position(|&x| x == m).unwrap();
                    return Some(stack[start..].to_vec());
                }
                Some(Mark::Done) => {}
                None => {
                    if let Some(c) = visit(m, succ, marks, stack) {
                        return Some(c);
                    }
                }
            }
        }
        stack.pop();
        marks.insert(n, Mark::Done);
        None
    }
    let mut marks = BTreeMap::new();
    for &start in succ.keys() {
        if !marks.contains_key(&start) {
            if let Some(c) = visit(start, &succ, &mut marks, &mut Vec::new()) {
                return Some(c);
            }
        }
    }
    None
}

pub const ROUTES_SCHEMA: &str = "restoreplan.routes";
pub const ROUTES_VERSION: u32 = 1;

/// Versioned on-disk form of one scenario's plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutePlanFile {
    pub schema: String,
    pub version: u32,
    pub plan: RoutePlan,
    pub validation: ValidationReport,
}

impl RoutePlanFile {
    pub fn new(plan: RoutePlan, validation: ValidationReport) -> Self {
        RoutePlanFile { schema: ROUTES_SCHEMA.into(), version: ROUTES_VERSION, plan, validation }
    }
}
