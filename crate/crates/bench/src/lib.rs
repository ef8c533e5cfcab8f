//! Synthetic instance generators shared by the criterion benches.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use restoreplan_core::network::{load_road_network, shortest_path_matrix, EdgeRecord, RoadNode};
use restoreplan_core::stage1::{ObjectiveWeights, Stage1Instance};
use restoreplan_core::{CrewKind, NodeId, RoadGraph, RoutingInstance, TravelRates};

/// Connected grid-like road graph: a random spanning tree plus extra edges.
pub fn random_road(n: usize, extra_edges: usize, seed: u64) -> RoadGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes: Vec<RoadNode> = (0..n)
        .map(|i| RoadNode { id: NodeId(i as u64), lat: 32.7 + rng.gen_range(0.0..0.2), lon: -97.0 + rng.gen_range(0.0..0.2) })
        .collect();
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push(EdgeRecord { u: NodeId(i as u64), v: NodeId(j as u64), length_m: rng.gen_range(50.0..2000.0) });
    }
    for _ in 0..extra_edges {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        edges.push(EdgeRecord { u: NodeId(a as u64), v: NodeId(b as u64), length_m: rng.gen_range(50.0..2000.0) });
    }
    load_road_network(nodes, edges).expect("generated graph is valid")
}

/// Routing instance over `random_road` with `depots` depots and `required`
/// nodes demanded by the tree crew.
pub fn routing_instance(required: usize, depots: usize, seed: u64) -> RoutingInstance {
    let road = random_road(400, 800, seed);
    let terminals: Vec<NodeId> = (0..(depots + required) as u64).map(|i| NodeId(i * 7)).collect();
    let complete = shortest_path_matrix(&road, &terminals).expect("terminals exist");
    let depot_set: BTreeSet<NodeId> = terminals[..depots].iter().copied().collect();
    let damaged: BTreeSet<NodeId> = terminals[depots..].iter().copied().collect();
    RoutingInstance::new(
        0,
        complete,
        depot_set,
        damaged.clone(),
        BTreeMap::from([(CrewKind::Tree, damaged)]),
        TravelRates::default(),
    )
    .expect("valid instance")
}

/// Bounded-regime first-stage instance.
pub fn stage1_instance(nodes: usize, scenarios: usize, crews: usize, seed: u64) -> Stage1Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let time = (0..scenarios)
        .map(|_| (0..nodes).map(|_| (0..crews).map(|_| rng.gen_range(0.5..12.0)).collect()).collect())
        .collect();
    let demand = (0..scenarios)
        .map(|_| (0..nodes).map(|_| (0..crews).map(|_| rng.gen_range(5..=19)).collect()).collect())
        .collect();
    let loads = (0..nodes).map(|_| rng.gen_range(0.0..300.0)).collect();
    let costs = (0..crews).map(|_| rng.gen_range(50.0..225.0)).collect();
    Stage1Instance::new((0..nodes as u64).map(NodeId).collect(), time, demand, loads, costs, None, ObjectiveWeights::default())
        .expect("valid instance")
}
