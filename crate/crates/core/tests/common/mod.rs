#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use restoreplan_core::network::{load_road_network, EdgeRecord, RoadNode};
use restoreplan_core::{CompleteGraph, CrewKind, Distance, NodeId, RoadGraph, RoutingInstance, ScenarioSet, TravelRates};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn reference_set() -> ScenarioSet {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/reference_scenarios.json");
    ScenarioSet::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Random undirected graph on `n` nodes; lengths are whole meters so that
/// oracle sums are exact.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> RoadGraph {
    let nodes: Vec<RoadNode> = (0..n)
        .map(|i| RoadNode { id: NodeId(i as u64 + 1), lat: 32.0 + rng.gen::<f64>() * 0.1, lon: -97.0 + rng.gen::<f64>() * 0.1 })
        .collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                edges.push(EdgeRecord { u: NodeId(a as u64 + 1), v: NodeId(b as u64 + 1), length_m: rng.gen_range(1..500) as f64 });
            }
        }
    }
    load_road_network(nodes, edges).unwrap()
}

/// Floyd-Warshall all-pairs oracle in integer millimeters; `None` = unreachable.
pub fn floyd_warshall(g: &RoadGraph) -> (Vec<NodeId>, Vec<Vec<Option<i64>>>) {
    let ids: Vec<NodeId> = g.nodes().iter().map(|n| n.id).collect();
    let pos: BTreeMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let n = ids.len();
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    for e in g.edges() {
        let (a, b) = (pos[&e.u], pos[&e.v]);
        let w = e.length.milli();
        if d[a][b].map_or(true, |x| w < x) {
            d[a][b] = Some(w);
            d[b][a] = Some(w);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(x), Some(y)) = (d[i][k], d[k][j]) {
                    if d[i][j].map_or(true, |cur| x + y < cur) {
                        d[i][j] = Some(x + y);
                    }
                }
            }
        }
    }
    (ids, d)
}

/// Random metric closure over `n` points: random symmetric weights on a
/// complete graph, closed under shortest paths.
pub fn random_metric(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut d = vec![vec![0_i64; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let w = rng.gen_range(1..1000) * 1000;
            d[a][b] = w;
            d[b][a] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Pieces of a routing instance, kept apart so tests can perturb them.
#[derive(Clone)]
pub struct RoutingParts {
    pub complete: CompleteGraph,
    pub depots: BTreeSet<NodeId>,
    pub damaged: BTreeSet<NodeId>,
    pub required: BTreeMap<CrewKind, BTreeSet<NodeId>>,
    pub rates: TravelRates,
}

impl RoutingParts {
    pub fn build(&self) -> RoutingInstance {
        RoutingInstance::new(0, self.complete.clone(), self.depots.clone(), self.damaged.clone(), self.required.clone(), self.rates)
            .unwrap()
    }
}

/// Metric routing instance: depots get ids 1000.., damaged nodes 1..; every
/// crew gets a random non-empty subset of at most `max_required` nodes.
pub fn random_parts(rng: &mut ChaCha8Rng, max_required: usize, max_depots: usize) -> RoutingParts {
    let n_nodes = rng.gen_range(1..=max_required);
    let n_depots = rng.gen_range(1..=max_depots);
    let damaged: Vec<NodeId> = (1..=n_nodes as u64).map(NodeId).collect();
    let depots: Vec<NodeId> = (0..n_depots as u64).map(|i| NodeId(1000 + i)).collect();
    let terminals: Vec<NodeId> = depots.iter().chain(damaged.iter()).copied().collect();
    let metric = random_metric(rng, terminals.len());
    let matrix = metric.iter().map(|r| r.iter().map(|&m| Some(Distance::from_milli(m))).collect()).collect();
    let complete = CompleteGraph::from_matrix(terminals, matrix).unwrap();
    let mut required = BTreeMap::new();
    for crew in CrewKind::ALL {
        let mut set: BTreeSet<NodeId> = damaged.iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
        if set.is_empty() {
            set.insert(damaged[rng.gen_range(0..damaged.len())]);
        }
        required.insert(crew, set);
    }
    let mut rates = TravelRates::default();
    for r in rates.0.iter_mut() {
        *r = rng.gen_range(1..=4) as f64 * 0.5;
    }
    RoutingParts { complete, depots: depots.into_iter().collect(), damaged: damaged.into_iter().collect(), required, rates }
}

pub fn random_routing(rng: &mut ChaCha8Rng, max_required: usize, max_depots: usize) -> RoutingInstance {
    random_parts(rng, max_required, max_depots).build()
}
