//! Readers for the CSV and JSON input formats, with line-numbered errors.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use thiserror::Error;

use crate::network::{load_road_network, ComponentKind, EdgeRecord, NetworkError, PowerNode, RoadGraph, RoadNode};
use crate::scenario::TornadoEvent;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}:{line}: {source}")]
    Invalid { path: PathBuf, line: u64, source: NetworkError },
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Io { path: path.to_path_buf(), source })
}

/// Deserializes every row of a headed CSV file.
pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, InputError> {
    let text = read(path)?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for result in reader.deserialize::<T>() {
        let row = result.map_err(|e| InputError::Parse {
            path: path.to_path_buf(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|source| InputError::Json { path: path.to_path_buf(), source })
}

fn record_line(err: &NetworkError) -> u64 {
    match err {
        NetworkError::DuplicateNode { record, .. }
        | NetworkError::InvalidCoordinate { record, .. }
        | NetworkError::DanglingEdge { record, .. }
        | NetworkError::NonPositiveLength { record, .. } => *record as u64 + 2,
        _ => 0,
    }
}

/// Road network from `node_id,lat,lon` and `u,v,length_m` CSV files.
pub fn read_road_csv(nodes_path: &Path, edges_path: &Path) -> Result<RoadGraph, InputError> {
    let nodes: Vec<RoadNode> = read_csv(nodes_path)?;
    let edges: Vec<EdgeRecord> = read_csv(edges_path)?;
    load_road_network(nodes, edges).map_err(|source| {
        let path = match source {
            NetworkError::DuplicateNode { .. } | NetworkError::InvalidCoordinate { .. } => nodes_path,
            _ => edges_path,
        };
        InputError::Invalid { path: path.to_path_buf(), line: record_line(&source), source }
    })
}

#[derive(Deserialize)]
struct RoadTables {
    nodes: Vec<RoadNode>,
    edges: Vec<EdgeRecord>,
}

/// Road network from one JSON document `{"nodes": [...], "edges": [...]}`.
/// Line numbers in errors are 1-based positions in the respective table.
pub fn read_road_json(path: &Path) -> Result<RoadGraph, InputError> {
    let tables: RoadTables = read_json(path)?;
    load_road_network(tables.nodes, tables.edges).map_err(|source| InputError::Invalid {
        path: path.to_path_buf(),
        line: record_line(&source).saturating_sub(1),
        source,
    })
}

#[derive(Deserialize)]
struct PowerRow {
    bus_id: String,
    x: f64,
    y: f64,
    downstream_load_kw: f64,
    kind: String,
}

/// Feeder buses from `bus_id,x,y,downstream_load_kw,kind`.
pub fn read_power_csv(path: &Path) -> Result<Vec<PowerNode>, InputError> {
    let rows: Vec<PowerRow> = read_csv(path)?;
    rows.into_iter()
        .enumerate()
        .map(|(i, r)| {
            let line = i as u64 + 2;
            let kind: ComponentKind = r.kind.parse().map_err(|message| InputError::Parse {
                path: path.to_path_buf(),
                line,
                message,
            })?;
            if !(r.downstream_load_kw >= 0.0) {
                return Err(InputError::Invalid {
                    path: path.to_path_buf(),
                    line,
                    source: NetworkError::NegativeLoad { bus: r.bus_id, load_kw: r.downstream_load_kw },
                });
            }
            Ok(PowerNode { bus_id: r.bus_id, local_x: r.x, local_y: r.y, downstream_load_kw: r.downstream_load_kw, component_kind: kind })
        })
        .collect()
}

#[derive(Deserialize)]
struct PowerEdgeRow {
    from_bus: String,
    to_bus: String,
}

/// Feeder connectivity from `from_bus,to_bus`.
pub fn read_power_edges_csv(path: &Path) -> Result<Vec<(String, String)>, InputError> {
    let rows: Vec<PowerEdgeRow> = read_csv(path)?;
    Ok(rows.into_iter().map(|r| (r.from_bus, r.to_bus)).collect())
}

#[derive(Deserialize)]
struct EventRow {
    ef: u8,
    start_lat: f64,
    start_lon: f64,
    end_lat: f64,
    end_lon: f64,
    width_m: Option<f64>,
}

/// Tornado tracks from `ef,start_lat,start_lon,end_lat,end_lon,width_m`;
/// an empty width takes `default_width_m`.
pub fn read_tornado_csv(path: &Path, default_width_m: f64) -> Result<Vec<TornadoEvent>, InputError> {
    let rows: Vec<EventRow> = read_csv(path)?;
    rows.into_iter()
        .enumerate()
        .map(|(i, r)| {
            let event = TornadoEvent {
                ef_rating: r.ef,
                start_lat: r.start_lat,
                start_lon: r.start_lon,
                end_lat: r.end_lat,
                end_lon: r.end_lon,
                corridor_width_m: r.width_m.unwrap_or(default_width_m),
            };
            event.validate().map_err(|e| InputError::Parse {
                path: path.to_path_buf(),
                line: i as u64 + 2,
                message: e.to_string(),
            })?;
            Ok(event)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
        let p = dir.path().join(name);
        fs::File::create(&p).unwrap().write_all(body.as_bytes()).unwrap();
        p
    }

    #[test]
    fn road_csv_errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let nodes = file(&dir, "n.csv", "node_id,lat,lon\n1,32.0,-97.0\n2,32.0,-96.9\n");
        let edges = file(&dir, "e.csv", "u,v,length_m\n1,2,100\n1,9,50\n");
        match read_road_csv(&nodes, &edges) {
            Err(InputError::Invalid { line: 3, source: NetworkError::DanglingEdge { .. }, .. }) => {}
            other => panic!("{other:?}"),
        }
        let bad = file(&dir, "b.csv", "u,v,length_m\n1,2,abc\n");
        match read_road_csv(&nodes, &bad) {
            Err(InputError::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn road_json_and_power_csv() {
        let dir = tempfile::tempdir().unwrap();
        let road = file(
            &dir,
            "road.json",
            r#"{"nodes":[{"node_id":1,"lat":32.0,"lon":-97.0},{"node_id":2,"lat":32.0,"lon":-96.9}],
                "edges":[{"u":1,"v":2,"length_m":120.5}]}"#,
        );
        let g = read_road_json(&road).unwrap();
        assert_eq!(g.edges().len(), 1);
        let power = file(&dir, "p.csv", "bus_id,x,y,downstream_load_kw,kind\nb1,-97.0,32.0,10.5,Transformer\n");
        let p = read_power_csv(&power).unwrap();
        assert_eq!(p[0].component_kind, ComponentKind::Transformer);
        let bad = file(&dir, "q.csv", "bus_id,x,y,downstream_load_kw,kind\nb1,0,0,1,capacitor\n");
        assert!(matches!(read_power_csv(&bad), Err(InputError::Parse { line: 2, .. })));
    }

    #[test]
    fn tornado_default_width() {
        let dir = tempfile::tempdir().unwrap();
        let ev = file(&dir, "t.csv", "ef,start_lat,start_lon,end_lat,end_lon,width_m\n2,32.0,-97.0,32.1,-96.9,\n3,32,-97,32.2,-96.8,300\n");
        let events = read_tornado_csv(&ev, 150.0).unwrap();
        assert_eq!(events[0].corridor_width_m, 150.0);
        assert_eq!(events[1].corridor_width_m, 300.0);
        let bad = file(&dir, "u.csv", "ef,start_lat,start_lon,end_lat,end_lon,width_m\n7,32.0,-97.0,32.1,-96.9,100\n");
        assert!(read_tornado_csv(&bad, 150.0).is_err());
    }
}
