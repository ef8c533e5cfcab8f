//! Turns routes and repair times into per-node, per-crew work intervals.
//!
//! All crews leave their depots at hour zero. A crew travels its route at a
//! fixed speed; at each node it starts once it has arrived and every earlier
//! crew kind has finished there, works for the scenario's repair time, then
//! moves on. Blocked crews wait in place.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::routing::RoutePlan;
use crate::scenario::{CrewKind, Scenario};
use crate::units::NodeId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScheduleError {
    #[error("speed must be positive, got {0} km/h")]
    NonPositiveSpeed(f64),
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("chart has no entries")]
    EmptyChart,
    #[error("gantt csv: {0}")]
    Csv(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GanttEntry {
    pub scenario: usize,
    pub node: NodeId,
    pub crew: CrewKind,
    pub start_h: f64,
    pub finish_h: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GanttChart {
    pub entries: Vec<GanttEntry>,
    pub makespan_h: f64,
}

impl GanttChart {
    pub fn new(mut entries: Vec<GanttEntry>) -> Self {
        entries.sort_by(|a, b| (a.scenario, a.node, a.crew).cmp(&(b.scenario, b.node, b.crew)));
        let makespan_h = entries.iter().map(|e| e.finish_h).fold(0.0, f64::max);
        GanttChart { entries, makespan_h }
    }

    /// Union of several charts, e.g. one per scenario.
    pub fn combine<'a>(charts: impl IntoIterator<Item = &'a GanttChart>) -> Self {
        GanttChart::new(charts.into_iter().flat_map(|c| c.entries.iter().copied()).collect())
    }

    pub fn entry(&self, scenario: usize, node: NodeId, crew: CrewKind) -> Option<&GanttEntry> {
        self.entries.iter().find(|e| e.scenario == scenario && e.node == node && e.crew == crew)
    }
}

pub fn makespan(chart: &GanttChart) -> Result<f64, ScheduleError> {
    chart
        .entries
        .iter()
        .map(|e| e.finish_h)
        .reduce(f64::max)
        .ok_or(ScheduleError::EmptyChart)
}

fn check_plan(plan: &RoutePlan, scenario: &Scenario) -> Result<(), ScheduleError> {
    let invalid = |m: String| Err(ScheduleError::InvalidPlan(m));
    if plan.scenario_id != scenario.id {
        return invalid(format!("plan is for scenario {} but times are for {}", plan.scenario_id, scenario.id));
    }
    for (&crew, route) in &plan.routes {
        if route.crew != crew {
            return invalid(format!("route under {crew} belongs to {}", route.crew));
        }
        let stops = route.stops();
        if route.legs.len() + 1 != stops.len() || route.legs.iter().zip(stops.windows(2)).any(|(l, w)| l.from != w[0] || l.to != w[1]) {
            return invalid(format!("{crew} legs do not follow the visit order"));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &n in &route.visit_order {
            if !seen.insert(n) {
                return invalid(format!("{crew} visits {n} twice"));
            }
            if scenario.task(n, crew).is_none() {
                return invalid(format!("{crew} visits {n}, which has no repair task"));
            }
        }
    }
    Ok(())
}

/// Simulates every crew along its route. `speed_kmh = f64::INFINITY` makes
/// travel instantaneous.
pub fn build_schedule(plan: &RoutePlan, scenario: &Scenario, speed_kmh: f64) -> Result<GanttChart, ScheduleError> {
    if !(speed_kmh > 0.0) {
        return Err(ScheduleError::NonPositiveSpeed(speed_kmh));
    }
    check_plan(plan, scenario)?;
    let speed_m_per_h = speed_kmh * 1000.0;
    // latest finish of any earlier crew kind at each node
    let mut released: BTreeMap<NodeId, f64> = BTreeMap::new();
    let mut entries = Vec::new();
    // crew k only waits on crews < k, so one pass in crew order is the fixed point
    for crew in CrewKind::ALL {
        let Some(route) = plan.routes.get(&crew) else { continue };
        let mut clock = 0.0_f64;
        let mut finished = Vec::with_capacity(route.visit_order.len());
        for (leg, &node) in route.legs.iter().zip(&route.visit_order) {
            let arrival = clock + leg.length.meters() / speed_m_per_h;
            let start_h = arrival.max(released.get(&node).copied().unwrap_or(0.0));
            let finish_h = start_h + scenario.repair_time_h(node, crew).expect("checked above");
            entries.push(GanttEntry { scenario: scenario.id, node, crew, start_h, finish_h });
            finished.push((node, finish_h));
            clock = finish_h;
        }
        for (node, finish_h) in finished {
            let slot = released.entry(node).or_insert(finish_h);
            *slot = slot.max(finish_h);
        }
    }
    Ok(GanttChart::new(entries))
}

/// Precedence and duration checks; one message per violation.
pub fn check_chart(chart: &GanttChart, scenarios: &[Scenario]) -> Vec<String> {
    let mut out = Vec::new();
    let by_id: BTreeMap<usize, &Scenario> = scenarios.iter().map(|s| (s.id, s)).collect();
    let mut at: BTreeMap<(usize, NodeId), Vec<&GanttEntry>> = BTreeMap::new();
    for e in &chart.entries {
        at.entry((e.scenario, e.node)).or_default().push(e);
        match by_id.get(&e.scenario).and_then(|s| s.repair_time_h(e.node, e.crew)) {
            Some(t) if e.start_h + t == e.finish_h && e.start_h >= 0.0 => {}
            Some(t) => out.push(format!(
                "duration: scenario {} node {} {}: [{}, {}] vs repair time {t}",
                e.scenario, e.node, e.crew, e.start_h, e.finish_h
            )),
            None => out.push(format!("unknown task: scenario {} node {} {}", e.scenario, e.node, e.crew)),
        }
    }
    for ((s, node), mut list) in at {
        list.sort_by_key(|e| e.crew);
        for w in list.windows(2) {
            if w[1].start_h < w[0].finish_h {
                out.push(format!(
                    "precedence: scenario {s} node {node}: {} starts at {} before {} finishes at {}",
                    w[1].crew, w[1].start_h, w[0].crew, w[0].finish_h
                ));
            }
        }
    }
    out
}

pub const GANTT_CSV_HEADER: &str = "scenario,node,crew,start_h,finish_h";

/// CSV with crews by index and hours at three decimals.
pub fn to_csv(chart: &GanttChart) -> String {
    let mut out = String::from(GANTT_CSV_HEADER);
    out.push('\n');
    for e in &chart.entries {
        let _ = writeln!(out, "{},{},{},{:.3},{:.3}", e.scenario, e.node, e.crew.index(), e.start_h, e.finish_h);
    }
    out
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    scenario: usize,
    node: NodeId,
    crew: String,
    start_h: f64,
    finish_h: f64,
}

pub fn from_csv(text: &str) -> Result<GanttChart, ScheduleError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut entries = Vec::new();
    for row in reader.deserialize::<CsvRow>() {
        let row = row.map_err(|e| ScheduleError::Csv(e.to_string()))?;
        let crew = row.crew.parse().map_err(ScheduleError::Csv)?;
        entries.push(GanttEntry { scenario: row.scenario, node: row.node, crew, start_h: row.start_h, finish_h: row.finish_h });
    }
    Ok(GanttChart::new(entries))
}

const PALETTE: [&str; 10] = [
    "#c2185b", "#1976d2", "#388e3c", "#f57c00", "#7b1fa2", "#0097a7", "#5d4037", "#afb42b", "#455a64", "#e64a19",
];

/// Gantt chart as SVG: one row per (node, crew), sorted by node then crew,
/// one bar per scenario colored by scenario id.
pub fn render_svg(chart: &GanttChart) -> String {
    let mut rows: Vec<(NodeId, CrewKind)> = chart.entries.iter().map(|e| (e.node, e.crew)).collect();
    rows.sort();
    rows.dedup();
    let row_of: BTreeMap<(NodeId, CrewKind), usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let scenarios: std::collections::BTreeSet<usize> = chart.entries.iter().map(|e| e.scenario).collect();
    let n_scen = scenarios.len().max(1);

    let (left, top, row_h, px_per_h) = (190.0, 30.0, 22.0, 40.0);
    let span = chart.makespan_h.ceil().max(1.0);
    let width = left + span * px_per_h + 20.0;
    let height = top + rows.len() as f64 * row_h + 40.0;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let step = if span > 48.0 { 6 } else if span > 24.0 { 2 } else { 1 };
    for h in (0..=span as usize).step_by(step) {
        let x = left + h as f64 * px_per_h;
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.1}" y1="{top:.1}" x2="{x:.1}" y2="{:.1}" stroke="#dddddd"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">{h}</text>"##,
            top + rows.len() as f64 * row_h,
            top - 8.0
        );
    }
    for (i, (node, crew)) in rows.iter().enumerate() {
        let y = top + i as f64 * row_h;
        let _ = writeln!(svg, r#"<text x="6" y="{:.1}">node {node} / C{} {crew}</text>"#, y + row_h * 0.65, crew.index());
    }
    for e in &chart.entries {
        let row = row_of[&(e.node, e.crew)];
        let lane = scenarios.iter().position(|&s| s == e.scenario).unwrap_or(0);
        let lane_h = (row_h - 4.0) / n_scen as f64;
        let y = top + row as f64 * row_h + 2.0 + lane as f64 * lane_h;
        let x = left + e.start_h * px_per_h;
        let w = ((e.finish_h - e.start_h) * px_per_h).max(0.5);
        let _ = writeln!(
            svg,
            r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{lane_h:.2}" fill="{}" fill-opacity="0.8"><title>scenario {} node {} {}: {:.3}-{:.3} h</title></rect>"#,
            PALETTE[e.scenario % PALETTE.len()],
            e.scenario,
            e.node,
            e.crew,
            e.start_h,
            e.finish_h
        );
    }
    let legend_y = top + rows.len() as f64 * row_h + 25.0;
    for (i, s) in scenarios.iter().enumerate() {
        let x = left + i as f64 * 90.0;
        let _ = writeln!(
            svg,
            r#"<rect x="{x:.1}" y="{:.1}" width="12" height="12" fill="{}"/><text x="{:.1}" y="{legend_y:.1}">scenario {s}</text>"#,
            legend_y - 10.0,
            PALETTE[s % PALETTE.len()],
            x + 16.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
