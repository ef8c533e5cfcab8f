mod common;

use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use restoreplan_core::stage1::{
    boundedness, check_feasible, marginal_gain, solve_stage1, solve_stage1_enumerate, stage1_objective, CrewAllocation,
    ObjectiveWeights, Stage1Error, Stage1Instance,
};
use restoreplan_core::{AllocationFile, CrewCosts, CrewKind, NodeId};

use common::{rng, reference_set};

struct Raw {
    time_h: Vec<Vec<Vec<f64>>>,
    demand: Vec<Vec<Vec<u32>>>,
    loads: Vec<f64>,
    costs: Vec<f64>,
}

fn raw(r: &mut ChaCha8Rng) -> Raw {
    let (n, s, m) = (r.gen_range(1..=4), r.gen_range(1..=3), r.gen_range(1..=4));
    Raw {
        time_h: (0..s).map(|_| (0..n).map(|_| (0..m).map(|_| r.gen_range(1..=240) as f64 / 20.0).collect()).collect()).collect(),
        demand: (0..s).map(|_| (0..n).map(|_| (0..m).map(|_| r.gen_range(0..=19)).collect()).collect()).collect(),
        loads: (0..n).map(|_| r.gen_range(0..3000) as f64 / 10.0).collect(),
        costs: (0..m).map(|_| r.gen_range(50..=200) as f64).collect(),
    }
}

fn build(raw: &Raw, c: Option<f64>) -> Stage1Instance {
    let nodes = (1..=raw.loads.len() as u64).map(NodeId).collect();
    Stage1Instance::new(nodes, raw.time_h.clone(), raw.demand.clone(), raw.loads.clone(), raw.costs.clone(), c, ObjectiveWeights::default())
        .unwrap()
}

/// Closed-form optimum per crew over `x[k]` in `[LB, LB + band]`: with `x`
/// fixed the best `y` is `D` plus every spare unit on the top-profit node
/// when that profit is positive, so each crew separates.
fn separable_optimum(raw: &Raw, c: f64, band: u64) -> (Vec<u64>, f64) {
    let n_s = raw.demand.len() as f64;
    let mut caps = Vec::new();
    let mut total = 0.0;
    for k in 0..raw.costs.len() {
        let used: Vec<u64> = raw.demand.iter().map(|rows| rows.iter().map(|r| r[k] as u64).sum()).collect();
        let lb = *used.iter().max().unwrap();
        let term = |x: u64| {
            let mut bracket = 0.0;
            for (s, rows) in raw.demand.iter().enumerate() {
                let mut best = 0.0_f64;
                for (i, r) in rows.iter().enumerate() {
                    let p = raw.loads[i] - raw.time_h[s][i][k];
                    bracket += p * r[k] as f64;
                    best = best.max(p);
                }
                bracket += best * (x - used[s]) as f64;
            }
            c * raw.costs[k] * x as f64 - bracket / n_s
        };
        let (x, v) = (lb..=lb + band).map(|x| (x, term(x))).fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
        caps.push(x);
        total += v;
    }
    (caps, total)
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn random_instances_match_enumeration() {
    let mut r = rng(1);
    for case in 0..60 {
        let raw = raw(&mut r);
        let inst = build(&raw, None);
        assert!(boundedness(&inst).bounded);
        let fast = solve_stage1(&inst).unwrap();
        let band = if raw.costs.len() == 4 { 6 } else { 10 };
        let slow = solve_stage1_enumerate(&inst, band).unwrap();
        assert_eq!(fast.capacity, slow.capacity, "case {case}");
        assert!(rel_close(fast.objective_value, slow.objective_value), "case {case}: {} vs {}", fast.objective_value, slow.objective_value);
        let (caps, value) = separable_optimum(&raw, inst.scale_c(), 10);
        assert_eq!(fast.capacity, caps, "case {case}");
        assert!(rel_close(fast.objective_value, value), "case {case}: {} vs {value}", fast.objective_value);
        assert!(check_feasible(&fast, &inst).is_empty());
    }
}

#[test]
fn reference_capacities_and_objective() {
    let set = reference_set();
    let inst = Stage1Instance::from_scenarios(&set, &CrewCosts::default(), None, ObjectiveWeights::default()).unwrap();
    assert_eq!(inst.scale_c(), 10.0);
    let alloc = solve_stage1(&inst).unwrap();
    assert_eq!(alloc.capacity, vec![50, 44, 48, 44]);

    // y = D exactly
    let at_demand = CrewAllocation {
        capacity: alloc.capacity.clone(),
        assignment: (0..3)
            .map(|s| (0..4).map(|i| (0..4).map(|k| inst.demand(s, i, k) as f64).collect()).collect())
            .collect(),
        objective_value: 0.0,
    };
    let v = stage1_objective(&at_demand, &inst).unwrap();
    assert!((v - 221_656.066_666_666_7).abs() < 1e-6, "{v}");
    assert!(alloc.objective_value <= v);
    assert!(check_feasible(&alloc, &inst).is_empty());

    let g = marginal_gain(&inst);
    for (got, want) in g.iter().zip([281.866_666_666_7, 285.533_333_333_3, 284.533_333_333_3, 284.0]) {
        assert!((got - want).abs() < 1e-9, "{g:?}");
    }

    let file = AllocationFile::new(&alloc, &inst).unwrap();
    assert_eq!(file.capacity(CrewKind::InitialInspection), 50);
    assert_eq!(file.assignments.len(), 3 * 4 * 4);
    assert!(file.boundedness.bounded);
}

#[test]
fn reference_unbounded_below_threshold() {
    let set = reference_set();
    let inst = Stage1Instance::from_scenarios(&set, &CrewCosts::default(), Some(1.0), ObjectiveWeights::default()).unwrap();
    match solve_stage1(&inst) {
        Err(Stage1Error::UnboundedObjective { min_scale_c, .. }) => assert!(min_scale_c > 1.0 && min_scale_c < 10.0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn marginal_gain_matches_per_scenario_scan() {
    let mut r = rng(2);
    for _ in 0..50 {
        let raw = raw(&mut r);
        let inst = build(&raw, None);
        let g = marginal_gain(&inst);
        for k in 0..raw.costs.len() {
            let mut sum = 0.0;
            for s in 0..raw.demand.len() {
                let profits: Vec<f64> = (0..raw.loads.len()).map(|i| raw.loads[i] - raw.time_h[s][i][k]).collect();
                let best = profits.into_iter().fold(f64::NEG_INFINITY, f64::max);
                sum += if best > 0.0 { best } else { 0.0 };
            }
            assert!(rel_close(g[k], sum / raw.demand.len() as f64));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn capacity_monotone_in_demand(seed in any::<u64>(), bump in 1u32..10) {
        let mut r = rng(seed);
        let base = raw(&mut r);
        let mut more = Raw { time_h: base.time_h.clone(), demand: base.demand.clone(), loads: base.loads.clone(), costs: base.costs.clone() };
        let (s, i, k) = (r.gen_range(0..base.demand.len()), r.gen_range(0..base.loads.len()), r.gen_range(0..base.costs.len()));
        more.demand[s][i][k] += bump;
        let a = solve_stage1(&build(&base, Some(1e4))).unwrap();
        let b = solve_stage1(&build(&more, Some(1e4))).unwrap();
        for (x, y) in a.capacity.iter().zip(&b.capacity) {
            prop_assert!(x <= y);
        }
    }

    #[test]
    fn capacity_invariant_in_admissible_c(seed in any::<u64>(), factor in 1.0f64..1000.0) {
        let mut r = rng(seed);
        let raw = raw(&mut r);
        let inst = build(&raw, None);
        let scaled = inst.with_scale_c(inst.scale_c() * factor).unwrap();
        let a = solve_stage1(&inst).unwrap();
        let b = solve_stage1(&scaled).unwrap();
        prop_assert_eq!(&a.capacity, &b.capacity);
        prop_assert_eq!(&a.assignment, &b.assignment);
    }

    #[test]
    fn solutions_are_feasible(seed in any::<u64>()) {
        let mut r = rng(seed);
        let raw = raw(&mut r);
        let inst = build(&raw, None);
        let alloc = solve_stage1(&inst).unwrap();
        prop_assert!(check_feasible(&alloc, &inst).is_empty());
        let recomputed = stage1_objective(&alloc, &inst).unwrap();
        prop_assert!(rel_close(recomputed, alloc.objective_value));
    }
}
