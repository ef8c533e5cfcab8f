//! Coupled power/road network: ingestion, feeder projection, road failures
//! and reduction to a complete shortest-path graph over terminals.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::{haversine_m, LatLon};
use crate::units::{Distance, NodeId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("record {record}: duplicate node id {id}")]
    DuplicateNode { record: usize, id: NodeId },
    #[error("record {record}: node {id} has invalid coordinates ({lat}, {lon})")]
    InvalidCoordinate { record: usize, id: NodeId, lat: f64, lon: f64 },
    #[error("record {record}: edge ({u}, {v}) references unknown node {missing}")]
    DanglingEdge { record: usize, u: NodeId, v: NodeId, missing: NodeId },
    #[error("record {record}: edge ({u}, {v}) has non-positive length {length_m}")]
    NonPositiveLength { record: usize, u: NodeId, v: NodeId, length_m: f64 },
    #[error("road graph has no nodes")]
    EmptyRoadGraph,
    #[error("terminal {0} is not a road node")]
    UnknownTerminal(NodeId),
    #[error("terminal {0} listed twice")]
    DuplicateTerminal(NodeId),
    #[error("depot {0} is not a road node")]
    UnknownDepot(NodeId),
    #[error("damaged node {0} is not a road node")]
    UnknownDamaged(NodeId),
    #[error("node {0} is both a depot and damaged")]
    DepotDamaged(NodeId),
    #[error("bus {bus} maps to unknown road node {node}")]
    UnknownMapping { bus: String, node: NodeId },
    #[error("bus {0} listed twice")]
    DuplicateBus(String),
    #[error("bus {bus} has negative downstream load {load_kw}")]
    NegativeLoad { bus: String, load_kw: f64 },
    #[error("power edge references unknown bus {0}")]
    UnknownBus(String),
    #[error("distance matrix is not a valid metric: {0}")]
    InvalidMatrix(String),
}

/// One row of the road node table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoadNode {
    #[serde(rename = "node_id")]
    pub id: NodeId,
    pub lat: f64,
    pub lon: f64,
}

impl RoadNode {
    pub fn position(&self) -> LatLon {
        LatLon::new(self.lat, self.lon)
    }
}

/// One row of the road edge table, as read from input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: NodeId,
    pub v: NodeId,
    pub length_m: f64,
}

/// Undirected road segment with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoadEdge {
    pub u: NodeId,
    pub v: NodeId,
    #[serde(rename = "length_m")]
    pub length: Distance,
}

/// Normalized undirected edge key.
pub fn edge_key(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RoadGraphData {
    nodes: Vec<RoadNode>,
    edges: Vec<RoadEdge>,
}

/// Undirected road graph. Nodes are kept sorted by id and edges by `(u, v)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RoadGraphData", into = "RoadGraphData")]
pub struct RoadGraph {
    nodes: Vec<RoadNode>,
    edges: Vec<RoadEdge>,
    index: HashMap<NodeId, usize>,
}

impl PartialEq for RoadGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

impl From<RoadGraph> for RoadGraphData {
    fn from(g: RoadGraph) -> Self {
        RoadGraphData { nodes: g.nodes, edges: g.edges }
    }
}

impl TryFrom<RoadGraphData> for RoadGraph {
    type Error = NetworkError;

    fn try_from(data: RoadGraphData) -> Result<Self, Self::Error> {
        let edges = data.edges.into_iter().map(|e| EdgeRecord {
            u: e.u,
            v: e.v,
            length_m: e.length.meters(),
        });
        load_road_network(data.nodes, edges)
    }
}

impl RoadGraph {
    pub fn nodes(&self) -> &[RoadNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[RoadEdge] {
        &self.edges
    }

    pub fn node(&self, id: NodeId) -> Option<&RoadNode> {
        self.index.get(&id).map(|&i| &self.nodes[i])
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index.contains_key(&id)
    }

    pub fn edge_length(&self, a: NodeId, b: NodeId) -> Option<Distance> {
        let key = edge_key(a, b);
        self.edges
            .binary_search_by(|e| (e.u, e.v).cmp(&key))
            .ok()
            .map(|i| self.edges[i].length)
    }

    fn index_of(&self, id: NodeId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    fn adjacency(&self) -> Vec<Vec<(usize, i64)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            let (a, b) = (self.index[&e.u], self.index[&e.v]);
            adj[a].push((b, e.length.milli()));
            adj[b].push((a, e.length.milli()));
        }
        adj
    }
}

/// Builds a validated road graph. Duplicate edges collapse to their minimum
/// length; self-loops are dropped. Record indices in errors are zero-based.
pub fn load_road_network<N, E>(node_records: N, edge_records: E) -> Result<RoadGraph, NetworkError>
where
    N: IntoIterator<Item = RoadNode>,
    E: IntoIterator<Item = EdgeRecord>,
{
    let mut nodes: Vec<RoadNode> = Vec::new();
    let mut seen = HashMap::new();
    for (record, n) in node_records.into_iter().enumerate() {
        let valid = n.lat.is_finite()
            && n.lon.is_finite()
            && (-90.0..=90.0).contains(&n.lat)
            && (-180.0..=180.0).contains(&n.lon);
        if !valid {
            return Err(NetworkError::InvalidCoordinate { record, id: n.id, lat: n.lat, lon: n.lon });
        }
        if seen.insert(n.id, record).is_some() {
            return Err(NetworkError::DuplicateNode { record, id: n.id });
        }
        nodes.push(n);
    }
    nodes.sort_by_key(|n| n.id);
    let index: HashMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, n)| (n.id, i)).collect();

    let mut collapsed: BTreeMap<(NodeId, NodeId), Distance> = BTreeMap::new();
    for (record, e) in edge_records.into_iter().enumerate() {
        for end in [e.u, e.v] {
            if !index.contains_key(&end) {
                return Err(NetworkError::DanglingEdge { record, u: e.u, v: e.v, missing: end });
            }
        }
        let length = Distance::from_meters(e.length_m);
        if !e.length_m.is_finite() || length <= Distance::ZERO {
            return Err(NetworkError::NonPositiveLength { record, u: e.u, v: e.v, length_m: e.length_m });
        }
        if e.u == e.v {
            log::debug!("dropping self-loop at {}", e.u);
            continue;
        }
        collapsed
            .entry(edge_key(e.u, e.v))
            .and_modify(|l| *l = (*l).min(length))
            .or_insert(length);
    }
    let edges = collapsed.into_iter().map(|((u, v), length)| RoadEdge { u, v, length }).collect();
    Ok(RoadGraph { nodes, edges, index })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Line,
    Switch,
    Transformer,
    Substation,
}

impl FromStr for ComponentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "line" => Ok(ComponentKind::Line),
            "switch" => Ok(ComponentKind::Switch),
            "transformer" => Ok(ComponentKind::Transformer),
            "substation" => Ok(ComponentKind::Substation),
            other => Err(format!("unknown component kind {other:?}")),
        }
    }
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ComponentKind::Line => "line",
            ComponentKind::Switch => "switch",
            ComponentKind::Transformer => "transformer",
            ComponentKind::Substation => "substation",
        };
        f.write_str(s)
    }
}

/// Feeder bus with its local coordinates and precomputed downstream load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerNode {
    pub bus_id: String,
    #[serde(rename = "x")]
    pub local_x: f64,
    #[serde(rename = "y")]
    pub local_y: f64,
    pub downstream_load_kw: f64,
    #[serde(rename = "kind")]
    pub component_kind: ComponentKind,
}

/// Affine map from the feeder frame into (lon, lat) degrees:
/// `lon = x * scale + offset_x`, `lat = y * scale + offset_y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameOffset {
    pub offset_x: f64,
    pub offset_y: f64,
    #[serde(default = "unit_scale")]
    pub scale: f64,
}

fn unit_scale() -> f64 {
    1.0
}

impl Default for FrameOffset {
    fn default() -> Self {
        FrameOffset { offset_x: 0.0, offset_y: 0.0, scale: 1.0 }
    }
}

impl FrameOffset {
    pub fn new(offset_x: f64, offset_y: f64) -> Self {
        FrameOffset { offset_x, offset_y, scale: 1.0 }
    }

    pub fn apply(&self, x: f64, y: f64) -> LatLon {
        LatLon::new(y * self.scale + self.offset_y, x * self.scale + self.offset_x)
    }
}

fn nearest_node(road: &RoadGraph, p: LatLon) -> NodeId {
    // nodes are sorted by id, so strict `<` keeps the smallest id on ties
    let mut best = (f64::INFINITY, road.nodes[0].id);
    for n in &road.nodes {
        let d = haversine_m(p, n.position());
        if d < best.0 {
            best = (d, n.id);
        }
    }
    best.1
}

/// Snaps each translated feeder bus to its nearest road node (great-circle
/// distance, ties to the smallest node id).
pub fn project_power_nodes(
    power: &[PowerNode],
    offset: FrameOffset,
    road: &RoadGraph,
) -> Result<BTreeMap<String, NodeId>, NetworkError> {
    if road.nodes.is_empty() {
        return Err(NetworkError::EmptyRoadGraph);
    }
    let snapped: Vec<(String, NodeId)> = power
        .par_iter()
        .map(|p| (p.bus_id.clone(), nearest_node(road, offset.apply(p.local_x, p.local_y))))
        .collect();
    Ok(snapped.into_iter().collect())
}

/// Outcome of removing failed road segments.
#[derive(Debug, Clone, PartialEq)]
pub struct FailureReport {
    pub removed: usize,
    /// Failure pairs that matched no edge.
    pub unmatched: Vec<(NodeId, NodeId)>,
}

/// Returns a copy of `road` without the failed edges. Pairs that are not
/// edges are counted in the report and otherwise ignored.
pub fn apply_road_failures(
    road: &RoadGraph,
    failed_edges: &BTreeSet<(NodeId, NodeId)>,
) -> (RoadGraph, FailureReport) {
    let failed: BTreeSet<(NodeId, NodeId)> = failed_edges.iter().map(|&(a, b)| edge_key(a, b)).collect();
    let edges: Vec<RoadEdge> = road
        .edges
        .iter()
        .filter(|e| !failed.contains(&(e.u, e.v)))
        .copied()
        .collect();
    let unmatched: Vec<(NodeId, NodeId)> = failed
        .iter()
        .filter(|&&(a, b)| road.edge_length(a, b).is_none())
        .copied()
        .collect();
    if !unmatched.is_empty() {
        log::warn!("{} failed road segments match no edge", unmatched.len());
    }
    let report = FailureReport { removed: road.edges.len() - edges.len(), unmatched };
    let graph = RoadGraph { nodes: road.nodes.clone(), edges, index: road.index.clone() };
    (graph, report)
}

#[derive(Debug)]
struct PathData {
    node_ids: Vec<NodeId>,
    /// Per terminal, predecessor index of every road node in its shortest-path tree.
    pred: Vec<Vec<u32>>,
}

const NO_PRED: u32 = u32::MAX;

/// Complete graph over terminals weighted by shortest-path distance.
/// `None` marks an unreachable pair.
#[derive(Debug, Clone)]
pub struct CompleteGraph {
    terminals: Vec<NodeId>,
    dist: Vec<Vec<Option<Distance>>>,
    position: HashMap<NodeId, usize>,
    paths: Option<Arc<PathData>>,
}

impl PartialEq for CompleteGraph {
    fn eq(&self, other: &Self) -> bool {
        self.terminals == other.terminals && self.dist == other.dist
    }
}

impl CompleteGraph {
    /// Builds a complete graph from an explicit matrix, checking symmetry,
    /// a zero diagonal, non-negativity and the triangle inequality.
    pub fn from_matrix(terminals: Vec<NodeId>, dist: Vec<Vec<Option<Distance>>>) -> Result<Self, NetworkError> {
        let n = terminals.len();
        let bad = |m: String| Err(NetworkError::InvalidMatrix(m));
        if dist.len() != n || dist.iter().any(|r| r.len() != n) {
            return bad(format!("expected a {n}x{n} matrix"));
        }
        let mut position = HashMap::new();
        for (i, &t) in terminals.iter().enumerate() {
            if position.insert(t, i).is_some() {
                return Err(NetworkError::DuplicateTerminal(t));
            }
        }
        for i in 0..n {
            if dist[i][i] != Some(Distance::ZERO) {
                return bad(format!("diagonal entry {i} is not zero"));
            }
            for j in 0..n {
                if dist[i][j] != dist[j][i] {
                    return bad(format!("entries ({i},{j}) and ({j},{i}) differ"));
                }
                if matches!(dist[i][j], Some(d) if d < Distance::ZERO) {
                    return bad(format!("entry ({i},{j}) is negative"));
                }
            }
        }
        let graph = CompleteGraph { terminals, dist, position, paths: None };
        if let Some((i, j, k)) = graph.triangle_violation() {
            return bad(format!("triangle inequality fails for ({i},{j}) via {k}"));
        }
        Ok(graph)
    }

    /// First `(i, j, k)` with `d(i,j) > d(i,k) + d(k,j)`, if any. Unreachable
    /// pairs whose endpoints share a reachable intermediate also count.
    pub fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.terminals.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if let (Some(a), Some(b)) = (self.dist[i][k], self.dist[k][j]) {
                        match self.dist[i][j] {
                            Some(d) if d <= a + b => {}
                            _ => return Some((i, j, k)),
                        }
                    }
                }
            }
        }
        None
    }

    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    pub fn len(&self) -> usize {
        self.terminals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terminals.is_empty()
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.position.get(&id).copied()
    }

    pub fn dist_at(&self, i: usize, j: usize) -> Option<Distance> {
        self.dist[i][j]
    }

    pub fn distance(&self, a: NodeId, b: NodeId) -> Option<Distance> {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.dist[i][j],
            _ => None,
        }
    }

    pub fn reachable(&self, a: NodeId, b: NodeId) -> bool {
        self.distance(a, b).is_some()
    }

    pub fn matrix(&self) -> &[Vec<Option<Distance>>] {
        &self.dist
    }

    /// Road-level node sequence of one shortest path from `a` to `b`.
    /// `None` if unreachable or the graph was built from a bare matrix.
    pub fn road_path(&self, a: NodeId, b: NodeId) -> Option<Vec<NodeId>> {
        let paths = self.paths.as_ref()?;
        let i = self.index_of(a)?;
        self.distance(a, b)?;
        let target = paths.node_ids.binary_search(&b).ok()?;
        let pred = &paths.pred[i];
        let mut seq = vec![target];
        let mut cur = target;
        while pred[cur] != NO_PRED {
            cur = pred[cur] as usize;
            seq.push(cur);
        }
        seq.reverse();
        Some(seq.into_iter().map(|k| paths.node_ids[k]).collect())
    }
}

fn dijkstra(adj: &[Vec<(usize, i64)>], source: usize) -> (Vec<Option<i64>>, Vec<u32>) {
    let mut dist: Vec<Option<i64>> = vec![None; adj.len()];
    let mut pred = vec![NO_PRED; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(0);
    heap.push(Reverse((0_i64, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u].is_some_and(|best| d > best) {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if dist[v].map_or(true, |cur| nd < cur) {
                dist[v] = Some(nd);
                pred[v] = u as u32;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    (dist, pred)
}

/// Single-source shortest paths from every terminal, restricted to the
/// terminal set. Sources run in parallel; output order follows `terminals`.
pub fn shortest_path_matrix(road: &RoadGraph, terminals: &[NodeId]) -> Result<CompleteGraph, NetworkError> {
    let mut position = HashMap::new();
    let mut sources = Vec::with_capacity(terminals.len());
    for (i, &t) in terminals.iter().enumerate() {
        let idx = road.index_of(t).ok_or(NetworkError::UnknownTerminal(t))?;
        if position.insert(t, i).is_some() {
            return Err(NetworkError::DuplicateTerminal(t));
        }
        sources.push(idx);
    }
    let adj = road.adjacency();
    let runs: Vec<(Vec<Option<i64>>, Vec<u32>)> = sources.par_iter().map(|&s| dijkstra(&adj, s)).collect();
    let dist = runs
        .iter()
        .map(|(d, _)| sources.iter().map(|&t| d[t].map(Distance::from_milli)).collect())
        .collect();
    let paths = PathData {
        node_ids: road.nodes.iter().map(|n| n.id).collect(),
        pred: runs.into_iter().map(|(_, p)| p).collect(),
    };
    Ok(CompleteGraph { terminals: terminals.to_vec(), dist, position, paths: Some(Arc::new(paths)) })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CoupledNetworkData {
    road: RoadGraph,
    power: Vec<PowerNode>,
    #[serde(default)]
    power_edges: Vec<(String, String)>,
    power_to_road: BTreeMap<String, NodeId>,
    depots: BTreeSet<NodeId>,
    damaged: BTreeSet<NodeId>,
}

/// Road graph with projected feeder buses, depots and damaged nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoupledNetworkData", into = "CoupledNetworkData")]
pub struct CoupledNetwork {
    road: RoadGraph,
    power: Vec<PowerNode>,
    power_edges: Vec<(String, String)>,
    power_to_road: BTreeMap<String, NodeId>,
    depots: BTreeSet<NodeId>,
    damaged: BTreeSet<NodeId>,
}

impl From<CoupledNetwork> for CoupledNetworkData {
    fn from(n: CoupledNetwork) -> Self {
        CoupledNetworkData {
            road: n.road,
            power: n.power,
            power_edges: n.power_edges,
            power_to_road: n.power_to_road,
            depots: n.depots,
            damaged: n.damaged,
        }
    }
}

impl TryFrom<CoupledNetworkData> for CoupledNetwork {
    type Error = NetworkError;

    fn try_from(d: CoupledNetworkData) -> Result<Self, Self::Error> {
        let net = CoupledNetwork::from_parts(d.road, d.power, d.power_edges, d.power_to_road, d.depots)?;
        net.with_damaged(d.damaged)
    }
}

impl CoupledNetwork {
    /// Projects the feeder onto `road` and attaches depots.
    pub fn build(
        road: RoadGraph,
        power: Vec<PowerNode>,
        power_edges: Vec<(String, String)>,
        offset: FrameOffset,
        depots: BTreeSet<NodeId>,
    ) -> Result<Self, NetworkError> {
        let power_to_road = project_power_nodes(&power, offset, &road)?;
        Self::from_parts(road, power, power_edges, power_to_road, depots)
    }

    fn from_parts(
        road: RoadGraph,
        power: Vec<PowerNode>,
        power_edges: Vec<(String, String)>,
        power_to_road: BTreeMap<String, NodeId>,
        depots: BTreeSet<NodeId>,
    ) -> Result<Self, NetworkError> {
        let mut buses = BTreeSet::new();
        for p in &power {
            if !buses.insert(p.bus_id.as_str()) {
                return Err(NetworkError::DuplicateBus(p.bus_id.clone()));
            }
            if !(p.downstream_load_kw >= 0.0) {
                return Err(NetworkError::NegativeLoad { bus: p.bus_id.clone(), load_kw: p.downstream_load_kw });
            }
        }
        for (a, b) in &power_edges {
            for bus in [a, b] {
                if !buses.contains(bus.as_str()) {
                    return Err(NetworkError::UnknownBus(bus.clone()));
                }
            }
        }
        for (bus, &node) in &power_to_road {
            if !road.contains(node) {
                return Err(NetworkError::UnknownMapping { bus: bus.clone(), node });
            }
        }
        if let Some(&d) = depots.iter().find(|d| !road.contains(**d)) {
            return Err(NetworkError::UnknownDepot(d));
        }
        Ok(CoupledNetwork { road, power, power_edges, power_to_road, depots, damaged: BTreeSet::new() })
    }

    /// Replaces the damaged set, enforcing that damaged nodes are road nodes
    /// and not depots.
    pub fn with_damaged(mut self, damaged: BTreeSet<NodeId>) -> Result<Self, NetworkError> {
        for &n in &damaged {
            if !self.road.contains(n) {
                return Err(NetworkError::UnknownDamaged(n));
            }
            if self.depots.contains(&n) {
                return Err(NetworkError::DepotDamaged(n));
            }
        }
        self.damaged = damaged;
        Ok(self)
    }

    pub fn road(&self) -> &RoadGraph {
        &self.road
    }

    pub fn power(&self) -> &[PowerNode] {
        &self.power
    }

    pub fn power_edges(&self) -> &[(String, String)] {
        &self.power_edges
    }

    pub fn power_to_road(&self) -> &BTreeMap<String, NodeId> {
        &self.power_to_road
    }

    pub fn depots(&self) -> &BTreeSet<NodeId> {
        &self.depots
    }

    pub fn damaged(&self) -> &BTreeSet<NodeId> {
        &self.damaged
    }

    /// Downstream load attributed to a road node: the largest load among the
    /// buses snapped to it.
    pub fn load_at(&self, node: NodeId) -> f64 {
        self.power
            .iter()
            .filter(|p| self.power_to_road.get(&p.bus_id) == Some(&node))
            .map(|p| p.downstream_load_kw)
            .fold(0.0, f64::max)
    }

    /// Depots followed by damaged nodes, each group ascending.
    pub fn terminals(&self) -> Vec<NodeId> {
        self.depots.iter().chain(self.damaged.iter()).copied().collect()
    }

    pub fn summary(&self) -> NetworkSummary {
        NetworkSummary {
            road_nodes: self.road.nodes.len(),
            road_edges: self.road.edges.len(),
            power_nodes: self.power.len(),
            power_edges: self.power_edges.len(),
            mapped_road_nodes: self.power_to_road.values().collect::<BTreeSet<_>>().len(),
            depots: self.depots.len(),
            damaged: self.damaged.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSummary {
    pub road_nodes: usize,
    pub road_edges: usize,
    pub power_nodes: usize,
    pub power_edges: usize,
    pub mapped_road_nodes: usize,
    pub depots: usize,
    pub damaged: usize,
}
