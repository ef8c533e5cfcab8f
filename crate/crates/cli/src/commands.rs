//! Subcommand bodies. Each reads only its named inputs and writes only into
//! the output directory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Context;
use log::info;
use rayon::prelude::*;

use restoreplan_core::io::{read_json, read_power_csv, read_power_edges_csv, read_road_csv, read_road_json, read_tornado_csv};
use restoreplan_core::routing::{expected_cost, solve_routing, validate_routes, RoutePlanFile, ValidationReport};
use restoreplan_core::scenario::generate_scenarios;
use restoreplan_core::schedule::{build_schedule, check_chart, from_csv, render_svg, to_csv};
use restoreplan_core::stage1::solve_stage1;
use restoreplan_core::{
    AllocationFile, CoupledNetwork, FrameOffset, GanttChart, NodeId, RoutePlan, RoutingInstance, ScenarioSet, ScheduleError,
    Stage1Instance,
};

use crate::config::Config;
use crate::manifest::{RunManifest, StageLog};
use crate::render::render_allocation_svg;
use crate::{BuildNetworkArgs, Command, GenScenariosArgs, GlobalArgs, RenderArgs, ScheduleArgs, SolveArgs, ValidationFailed};

struct RunContext {
    config: Config,
    seed: u64,
    manifest: RunManifest,
    out_dir: std::path::PathBuf,
}

pub fn dispatch(global: &GlobalArgs, command: &Command) -> anyhow::Result<()> {
    let config = match &global.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Config::from_toml(&text).with_context(|| path.display().to_string())?
        }
        None => Config::default(),
    };
    let seed = global.seed.or(config.seed).unwrap_or(0);
    fs::create_dir_all(&global.out_dir).with_context(|| format!("creating {}", global.out_dir.display()))?;
    let manifest = RunManifest::open(&global.out_dir, seed, config.clone())?;
    let mut ctx = RunContext { config, seed, manifest, out_dir: global.out_dir.clone() };
    let mut log = StageLog::new(&ctx.out_dir);
    if let Some(path) = &global.config {
        log.input(path)?;
    }
    let (stage, result) = match command {
        Command::BuildNetwork(a) => ("build-network", build_network(&ctx, a, &mut log)),
        Command::GenScenarios(a) => ("gen-scenarios", gen_scenarios(&ctx, a, &mut log)),
        Command::Solve(a) => ("solve", solve(&ctx, a, &mut log)),
        Command::Schedule(a) => ("schedule", schedule(&ctx, a, &mut log)),
        Command::Render(a) => ("render", render(a, &mut log)),
    };
    // artifacts that were written are recorded even when their checks failed
    log.finish(&mut ctx.manifest, stage);
    ctx.manifest.save(&ctx.out_dir)?;
    result
}

fn pretty<T: serde::Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn load_network(path: &Path, log: &mut StageLog) -> anyhow::Result<CoupledNetwork> {
    log.input(path)?;
    Ok(read_json(path)?)
}

fn load_scenarios(path: &Path, log: &mut StageLog) -> anyhow::Result<ScenarioSet> {
    log.input(path)?;
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ScenarioSet::from_json(&text).with_context(|| path.display().to_string())
}

fn build_network(ctx: &RunContext, a: &BuildNetworkArgs, log: &mut StageLog) -> anyhow::Result<()> {
    let road = match (&a.road_nodes, &a.road_edges, &a.road_json) {
        (Some(nodes), Some(edges), _) => {
            log.input(nodes)?;
            log.input(edges)?;
            read_road_csv(nodes, edges)?
        }
        (_, _, Some(json)) => {
            log.input(json)?;
            read_road_json(json)?
        }
        _ => anyhow::bail!("give either --road-nodes with --road-edges, or --road-json"),
    };
    log.input(&a.power)?;
    let power = read_power_csv(&a.power)?;
    let power_edges = match &a.power_edges {
        Some(p) => {
            log.input(p)?;
            read_power_edges_csv(p)?
        }
        None => Vec::new(),
    };
    let base = ctx.config.frame_offset();
    let offset = FrameOffset {
        offset_x: a.offset_x.unwrap_or(base.offset_x),
        offset_y: a.offset_y.unwrap_or(base.offset_y),
        scale: a.scale.unwrap_or(base.scale),
    };
    let depots = a.depots.iter().copied().map(NodeId).collect();
    let net = CoupledNetwork::build(road, power, power_edges, offset, depots)?;
    let summary = net.summary();
    log.output("network.json", &pretty(&net)?)?;
    log.output("network_summary.json", &pretty(&summary)?)?;
    println!("road nodes: {}", summary.road_nodes);
    println!("road edges: {}", summary.road_edges);
    println!("power nodes: {}", summary.power_nodes);
    println!("power edges: {}", summary.power_edges);
    println!("mapped road nodes: {}", summary.mapped_road_nodes);
    println!("depots: {}", summary.depots);
    Ok(())
}

/// Per-scenario failure counts and totals, plus the digest of the set file.
fn scenario_digest(set: &ScenarioSet, json: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "sha256 {}", crate::manifest::sha256_hex(json.as_bytes()));
    let _ = writeln!(out, "seed {}", set.seed);
    let _ = writeln!(out, "scenarios {}", set.len());
    let _ = writeln!(out, "damaged nodes {}", set.damaged().len());
    for s in set.scenarios() {
        let mut demand = 0u64;
        let mut hours = 0.0;
        for n in s.nodes() {
            for k in restoreplan_core::CrewKind::ALL {
                let t = s.task(n, k).expect("task per node and crew");
                demand += t.demand as u64;
                hours += t.time_h;
            }
        }
        let _ = writeln!(
            out,
            "scenario {}: failed edges {}, demand {} persons, repair {:.3} h",
            s.id,
            s.failed_edges().len(),
            demand,
            hours
        );
    }
    out
}

fn gen_scenarios(ctx: &RunContext, a: &GenScenariosArgs, log: &mut StageLog) -> anyhow::Result<()> {
    let net = load_network(&a.network, log)?;
    log.input(&a.events)?;
    let events = read_tornado_csv(&a.events, ctx.config.corridor.width_m)?;
    let mut cfg = ctx.config.scenario_config();
    if let Some(count) = a.count {
        cfg.n_scenarios = count;
    }
    let set = generate_scenarios(&cfg, &net, &events, ctx.seed)?;
    let json = set.to_json();
    log.output("scenarios.json", &(json.clone() + "\n"))?;
    let digest = scenario_digest(&set, &json);
    log.output("scenario_digest.txt", &digest)?;
    print!("{digest}");
    Ok(())
}

fn route_file_name(scenario: usize) -> String {
    format!("routes/scenario_{scenario:03}.json")
}

fn solve(ctx: &RunContext, a: &SolveArgs, log: &mut StageLog) -> anyhow::Result<()> {
    let net = load_network(&a.network, log)?;
    let set = load_scenarios(&a.scenarios, log)?;
    let cfg = &ctx.config;
    let inst = Stage1Instance::from_scenarios(&set, &cfg.crew_costs(), cfg.costs.scale_c, cfg.weights())?;
    let alloc = solve_stage1(&inst)?;
    let file = AllocationFile::new(&alloc, &inst)?;
    log.output("allocation.json", &pretty(&file)?)?;
    info!("stage 1: capacities {:?}, c = {}", alloc.capacity, inst.scale_c());

    let rates = cfg.travel_rates();
    // solved concurrently, assembled in scenario order
    let solved: Vec<anyhow::Result<(RoutePlan, ValidationReport)>> = set
        .scenarios()
        .par_iter()
        .map(|s| {
            let inst = RoutingInstance::from_scenario(&net, s, rates).with_context(|| format!("scenario {}", s.id))?;
            let plan = solve_routing(&inst).with_context(|| format!("scenario {}", s.id))?;
            let report = validate_routes(&plan, &inst);
            Ok((plan, report))
        })
        .collect();
    let mut plans = Vec::with_capacity(solved.len());
    let mut failed = Vec::new();
    for result in solved {
        let (plan, report) = result?;
        if !report.passed() {
            failed.push(plan.scenario_id);
        }
        log.output(&route_file_name(plan.scenario_id), &pretty(&RoutePlanFile::new(plan.clone(), report))?)?;
        plans.push(plan);
    }

    println!("c = {}", inst.scale_c());
    for row in &file.capacities {
        println!("capacity {}: {}", row.crew, row.persons);
    }
    println!("stage-1 objective: {}", alloc.objective_value);
    println!("expected routing cost: {:.3}", expected_cost(&plans));
    if !failed.is_empty() {
        return Err(ValidationFailed(format!("route validation failed for scenarios {failed:?}")).into());
    }
    Ok(())
}

fn schedule(ctx: &RunContext, a: &ScheduleArgs, log: &mut StageLog) -> anyhow::Result<()> {
    let set = load_scenarios(&a.scenarios, log)?;
    let speed = a.speed.unwrap_or(ctx.config.schedule.speed_kmh);
    if !(speed > 0.0) {
        return Err(ScheduleError::NonPositiveSpeed(speed).into());
    }
    let mut plans: BTreeMap<usize, RoutePlan> = BTreeMap::new();
    for path in &a.routes {
        log.input(path)?;
        let file: RoutePlanFile = read_json(path)?;
        let id = file.plan.scenario_id;
        if !file.validation.passed() {
            return Err(ScheduleError::InvalidPlan(format!("{}: routes did not pass validation", path.display())).into());
        }
        if plans.insert(id, file.plan).is_some() {
            return Err(ScheduleError::InvalidPlan(format!("two route files for scenario {id}")).into());
        }
    }
    let mut charts = Vec::with_capacity(plans.len());
    for (id, plan) in &plans {
        let scenario = set
            .scenarios()
            .get(*id)
            .ok_or_else(|| ScheduleError::InvalidPlan(format!("scenario {id} is not in {}", a.scenarios.display())))?;
        let chart = build_schedule(plan, scenario, speed)?;
        let problems = check_chart(&chart, std::slice::from_ref(scenario));
        if !problems.is_empty() {
            return Err(ValidationFailed(problems.join("; ")).into());
        }
        log.output(&format!("gantt/scenario_{id:03}.csv"), &to_csv(&chart))?;
        log.output(&format!("gantt/scenario_{id:03}.svg"), &render_svg(&chart))?;
        println!("scenario {id}: makespan {:.3} h", chart.makespan_h);
        charts.push(chart);
    }
    let combined = GanttChart::combine(&charts);
    log.output("gantt.csv", &to_csv(&combined))?;
    log.output("gantt.svg", &render_svg(&combined))?;
    Ok(())
}

fn render(a: &RenderArgs, log: &mut StageLog) -> anyhow::Result<()> {
    let (input, svg) = if let Some(path) = &a.gantt {
        log.input(path)?;
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let chart = from_csv(&text).with_context(|| path.display().to_string())?;
        (path, render_svg(&chart))
    } else {
        let path = a.allocation.as_ref().expect("clap requires one input");
        log.input(path)?;
        let file: AllocationFile = read_json(path)?;
        (path, render_allocation_svg(&file))
    };
    let name = match &a.output {
        Some(name) => name.clone(),
        None => format!("render_{}.svg", input.file_stem().map_or("out".into(), |s| s.to_string_lossy())),
    };
    let written = log.output(&name, &svg)?;
    println!("{}", written.display());
    Ok(())
}
