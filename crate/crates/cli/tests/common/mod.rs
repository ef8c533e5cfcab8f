#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use restoreplan_core::scenario::RepairTask;
use restoreplan_core::{NodeId, Scenario, ScenarioSet};

pub const REFERENCE_NODES: [u64; 4] = [23214, 36856, 37215, 51201];
pub const REFERENCE_DEPOTS: [u64; 3] = [1, 2, 3];

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_restoreplan")
}

pub fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin()).current_dir(dir).args(args).output().expect("spawn restoreplan")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

pub fn reference_fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/reference_scenarios.json")
}

pub fn reference_set() -> ScenarioSet {
    ScenarioSet::from_json(&fs::read_to_string(reference_fixture()).unwrap()).unwrap()
}

/// `rows x cols` road grid around 32.8N 97W, ids `1..`, 0.001 degree spacing,
/// lengths rounded to whole meters.
pub struct Grid {
    pub rows: usize,
    pub cols: usize,
}

impl Grid {
    pub fn id(&self, r: usize, c: usize) -> u64 {
        (r * self.cols + c) as u64 + 1
    }

    pub fn position(&self, r: usize, c: usize) -> (f64, f64) {
        (32.8 + r as f64 * 0.001, -97.0 + c as f64 * 0.001)
    }

    pub fn nodes_csv(&self) -> String {
        let mut s = String::from("node_id,lat,lon\n");
        for r in 0..self.rows {
            for c in 0..self.cols {
                let (lat, lon) = self.position(r, c);
                let _ = writeln!(s, "{},{lat:.6},{lon:.6}", self.id(r, c));
            }
        }
        s
    }

    pub fn edges_csv(&self) -> String {
        let mut s = String::from("u,v,length_m\n");
        for r in 0..self.rows {
            for c in 0..self.cols {
                if c + 1 < self.cols {
                    let _ = writeln!(s, "{},{},93", self.id(r, c), self.id(r, c + 1));
                }
                if r + 1 < self.rows {
                    let _ = writeln!(s, "{},{},111", self.id(r, c), self.id(r + 1, c));
                }
            }
        }
        s
    }
}

/// Radial feeder of `n` buses spread over the grid: bus `i` hangs off bus
/// `(i - 1) / 3`, so there are `n - 1` edges.
pub fn feeder_csv(grid: &Grid, n: usize) -> (String, String) {
    let mut buses = String::from("bus_id,x,y,downstream_load_kw,kind\n");
    let mut edges = String::from("from_bus,to_bus\n");
    let kinds = ["line", "switch", "transformer", "line"];
    for i in 0..n {
        let r = (i * 7) % grid.rows;
        let c = (i * 13 + i / grid.rows) % grid.cols;
        let (lat, lon) = grid.position(r, c);
        let load = 5.0 + ((i * 37) % 300) as f64;
        let kind = if i == 0 { "substation" } else { kinds[i % 4] };
        let _ = writeln!(buses, "B{i},{:.6},{:.6},{load:.1},{kind}", lon + 0.0001, lat - 0.0001);
        if i > 0 {
            let _ = writeln!(edges, "B{},B{i}", (i - 1) / 3);
        }
    }
    (buses, edges)
}

/// Grid network, feeder and one tornado crossing it, written into `dir`.
pub struct SmallCase {
    pub grid: Grid,
    pub depots: String,
}

pub fn small_case(dir: &Path) -> SmallCase {
    let grid = Grid { rows: 8, cols: 8 };
    write(dir, "nodes.csv", &grid.nodes_csv());
    write(dir, "edges.csv", &grid.edges_csv());
    let (buses, edges) = feeder_csv(&grid, 40);
    write(dir, "power.csv", &buses);
    write(dir, "power_edges.csv", &edges);
    // short track across the middle columns
    write(dir, "events.csv", "ef,start_lat,start_lon,end_lat,end_lon,width_m\n2,32.8025,-96.9965,32.8045,-96.9955,150\n");
    let depots = format!("{},{}", grid.id(0, 0), grid.id(7, 7));
    SmallCase { grid, depots }
}

pub fn small_pipeline(dir: &Path, out: &str, extra: &[&str]) -> Vec<Output> {
    let case = small_case(dir);
    let mut outs = Vec::new();
    let base = |rest: &[&str]| -> Vec<String> {
        let mut v: Vec<String> = vec!["--out-dir".into(), out.into()];
        v.extend(extra.iter().map(|s| s.to_string()));
        v.extend(rest.iter().map(|s| s.to_string()));
        v
    };
    let steps: Vec<Vec<String>> = vec![
        base(&[
            "build-network", "--road-nodes", "nodes.csv", "--road-edges", "edges.csv", "--power", "power.csv",
            "--power-edges", "power_edges.csv", "--depots", &case.depots,
        ]),
        base(&["gen-scenarios", "--network", &format!("{out}/network.json"), "--events", "events.csv"]),
        base(&["solve", "--network", &format!("{out}/network.json"), "--scenarios", &format!("{out}/scenarios.json")]),
    ];
    for step in steps {
        let args: Vec<&str> = step.iter().map(String::as_str).collect();
        let o = run(dir, &args);
        assert_eq!(code(&o), 0, "{args:?}: {}", stderr(&o));
        outs.push(o);
    }
    let mut routes: Vec<String> = fs::read_dir(dir.join(out).join("routes"))
        .unwrap()
        .map(|e| format!("{out}/routes/{}", e.unwrap().file_name().to_string_lossy()))
        .collect();
    routes.sort();
    let mut args = base(&["schedule", "--scenarios", &format!("{out}/scenarios.json"), "--routes"]);
    args.extend(routes);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let o = run(dir, &args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    outs.push(o);
    let o = run(dir, &base(&["render", "--allocation", &format!("{out}/allocation.json")]).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    outs.push(o);
    outs
}

/// Every file under `root`, keyed by relative path.
pub fn snapshot(root: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(base: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for entry in fs::read_dir(dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                walk(base, &p, out);
            } else {
                out.insert(p.strip_prefix(base).unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

/// Road network holding the four reference nodes, depots 1-3 and two fillers,
/// with one feeder bus on each reference node.
pub fn reference_network_files(dir: &Path) {
    let ids = [1u64, 2, 3, 23214, 36856, 37215, 51201, 9000, 9001];
    let mut nodes = String::from("node_id,lat,lon\n");
    let mut pos = Vec::new();
    for (i, id) in ids.iter().enumerate() {
        let (lat, lon) = (32.70 + 0.01 * (i / 3) as f64, -97.10 + 0.01 * (i % 3) as f64);
        pos.push((*id, lat, lon));
        let _ = writeln!(nodes, "{id},{lat:.4},{lon:.4}");
    }
    let mut edges = String::from("u,v,length_m\n");
    for (i, a) in pos.iter().enumerate() {
        for b in &pos[i + 1..] {
            let dr = ((a.1 - b.1).abs() / 0.01).round();
            let dc = ((a.2 - b.2).abs() / 0.01).round();
            if dr + dc == 1.0 {
                let _ = writeln!(edges, "{},{},{}", a.0, b.0, if dr == 1.0 { 1112 } else { 935 });
            }
        }
    }
    let mut power = String::from("bus_id,x,y,downstream_load_kw,kind\n");
    let loads = reference_set().loads_kw().clone();
    for &(id, lat, lon) in &pos {
        if let Some(load) = loads.get(&NodeId(id)) {
            let _ = writeln!(power, "bus{id},{lon:.4},{lat:.4},{load},line");
        }
    }
    write(dir, "ref_nodes.csv", &nodes);
    write(dir, "ref_edges.csv", &edges);
    write(dir, "ref_power.csv", &power);
}

/// Scenario 0 of the reference set restricted to node 37215.
pub fn single_node_set() -> ScenarioSet {
    let t1 = reference_set();
    let node = NodeId(37215);
    let s0 = &t1.scenarios()[0];
    let row: [RepairTask; 4] = std::array::from_fn(|k| s0.task(node, restoreplan_core::CrewKind::ALL[k]).unwrap());
    let scenario = Scenario::new(0, BTreeMap::from([(node, row)]), BTreeSet::new()).unwrap();
    ScenarioSet::new(0, None, BTreeSet::from([node]), BTreeMap::from([(node, t1.loads_kw()[&node])]), vec![scenario]).unwrap()
}
