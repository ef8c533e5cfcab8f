mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use restoreplan_core::routing::solve_routing;
use restoreplan_core::scenario::RepairTask;
use restoreplan_core::schedule::{build_schedule, check_chart, from_csv, makespan, render_svg, to_csv};
use restoreplan_core::{CrewKind, GanttChart, NodeId, RoutePlan, Scenario, ScheduleError};

use common::{random_parts, rng};

fn random_times(r: &mut ChaCha8Rng, nodes: &BTreeSet<NodeId>) -> BTreeMap<NodeId, [RepairTask; 4]> {
    nodes
        .iter()
        .map(|&n| (n, std::array::from_fn(|_| RepairTask { time_h: r.gen_range(1..=240) as f64 / 20.0, demand: 1 })))
        .collect()
}

fn case(seed: u64) -> (RoutePlan, Scenario, ChaCha8Rng) {
    let mut r = rng(seed);
    let parts = random_parts(&mut r, 6, 3);
    let plan = solve_routing(&parts.build()).unwrap();
    let tasks = random_times(&mut r, &parts.damaged);
    (plan, Scenario::new(0, tasks, BTreeSet::new()).unwrap(), r)
}

fn assert_route_order(chart: &GanttChart, plan: &RoutePlan, speed: f64) {
    for (&crew, route) in &plan.routes {
        let mut clock = 0.0;
        for (leg, &node) in route.legs.iter().zip(&route.visit_order) {
            let e = chart.entry(0, node, crew).expect("every visit is scheduled");
            assert!(e.start_h >= clock + leg.length.meters() / (speed * 1000.0) - 1e-9);
            clock = e.finish_h;
        }
    }
}

#[test]
fn random_schedules_hold_invariants() {
    for seed in 0..200 {
        let (plan, scenario, mut r) = case(seed);
        let speed = r.gen_range(5.0..80.0);
        let chart = build_schedule(&plan, &scenario, speed).unwrap();
        let visits: usize = plan.routes.values().map(|r| r.visit_order.len()).sum();
        assert_eq!(chart.entries.len(), visits);
        assert!(check_chart(&chart, std::slice::from_ref(&scenario)).is_empty(), "seed {seed}");
        assert_route_order(&chart, &plan, speed);
        assert_eq!(makespan(&chart).unwrap(), chart.makespan_h);
    }
}

#[test]
fn instant_travel_starts_first_crew_at_zero() {
    let (plan, scenario, _) = case(3);
    let chart = build_schedule(&plan, &scenario, f64::INFINITY).unwrap();
    let (&crew, route) = plan.routes.iter().next().unwrap();
    assert_eq!(chart.entry(0, route.visit_order[0], crew).unwrap().start_h, 0.0);
    assert!(check_chart(&chart, &[scenario]).is_empty());
}

#[test]
fn rejects_bad_speed_and_mismatched_plans() {
    let (plan, scenario, _) = case(4);
    assert_eq!(build_schedule(&plan, &scenario, 0.0), Err(ScheduleError::NonPositiveSpeed(0.0)));
    assert!(matches!(build_schedule(&plan, &scenario, f64::NAN), Err(ScheduleError::NonPositiveSpeed(_))));
    let other = Scenario::new(9, BTreeMap::new(), BTreeSet::new()).unwrap();
    assert!(matches!(build_schedule(&plan, &other, 30.0), Err(ScheduleError::InvalidPlan(_))));
}

#[test]
fn checker_catches_tampering() {
    let (plan, scenario, _) = case(5);
    let mut chart = build_schedule(&plan, &scenario, 40.0).unwrap();
    chart.entries[0].finish_h += 0.25;
    assert!(!check_chart(&chart, std::slice::from_ref(&scenario)).is_empty());

    // pull a later crew back so it overlaps its predecessor at a shared node
    let mut chart = build_schedule(&plan, &scenario, 40.0).unwrap();
    let shared = chart
        .entries
        .iter()
        .enumerate()
        .find(|(_, e)| e.crew != CrewKind::InitialInspection && chart.entries.iter().any(|o| o.node == e.node && o.crew < e.crew))
        .map(|(i, _)| i);
    if let Some(i) = shared {
        let e = &mut chart.entries[i];
        let t = scenario.repair_time_h(e.node, e.crew).unwrap();
        e.start_h = 0.0;
        e.finish_h = t;
        assert!(check_chart(&chart, &[scenario]).iter().any(|m| m.starts_with("precedence")));
    }
}

#[test]
fn csv_round_trip_and_svg() {
    let (plan, scenario, _) = case(6);
    let chart = build_schedule(&plan, &scenario, 25.0).unwrap();
    let text = to_csv(&chart);
    let back = from_csv(&text).unwrap();
    assert_eq!(back.entries.len(), chart.entries.len());
    for (a, b) in back.entries.iter().zip(&chart.entries) {
        assert_eq!((a.node, a.crew), (b.node, b.crew));
        assert!((a.start_h - b.start_h).abs() <= 5e-4 && (a.finish_h - b.finish_h).abs() <= 5e-4);
    }
    assert_eq!(to_csv(&back), text);
    let svg = render_svg(&chart);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg, render_svg(&chart));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn shorter_repair_never_lengthens_makespan(seed in any::<u64>(), cut in 0.05f64..1.0) {
        let (plan, scenario, mut r) = case(seed);
        let before = build_schedule(&plan, &scenario, 30.0).unwrap();
        let nodes: Vec<NodeId> = scenario.nodes().collect();
        let target = nodes[r.gen_range(0..nodes.len())];
        let crew = CrewKind::ALL[r.gen_range(0..4)];
        let tasks: BTreeMap<NodeId, [RepairTask; 4]> = nodes
            .iter()
            .map(|&n| {
                let mut row: [RepairTask; 4] = std::array::from_fn(|k| scenario.task(n, CrewKind::ALL[k]).unwrap());
                if n == target {
                    row[crew.index()].time_h *= cut;
                }
                (n, row)
            })
            .collect();
        let faster = Scenario::new(0, tasks, BTreeSet::new()).unwrap();
        let after = build_schedule(&plan, &faster, 30.0).unwrap();
        prop_assert!(after.makespan_h <= before.makespan_h + 1e-9);
        for e in &after.entries {
            let old = before.entry(0, e.node, e.crew).unwrap();
            prop_assert!(e.start_h <= old.start_h + 1e-9);
        }
    }

    #[test]
    fn faster_travel_never_lengthens_makespan(seed in any::<u64>(), v in 1.0f64..100.0, boost in 1.0f64..10.0) {
        let (plan, scenario, _) = case(seed);
        let slow = build_schedule(&plan, &scenario, v).unwrap();
        let fast = build_schedule(&plan, &scenario, v * boost).unwrap();
        let instant = build_schedule(&plan, &scenario, f64::INFINITY).unwrap();
        prop_assert!(fast.makespan_h <= slow.makespan_h + 1e-9);
        prop_assert!(instant.makespan_h <= fast.makespan_h + 1e-9);
    }
}
