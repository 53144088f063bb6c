//! Flow-record and node-geometry CSV ingestion and export.
//!
//! The flow schema is `timestamp,origin,destination,weight` with ISO-8601
//! date or non-negative integer timestamps; geometry rows are `node,lon,lat`
//! centroids. Weights are written with shortest round-trip formatting, so an
//! export/ingest cycle reproduces the network exactly.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::temporal::{FlowRecord, TemporalNetwork, Timestamp};

const FLOW_HEADER: [&str; 4] = ["timestamp", "origin", "destination", "weight"];
const GEOMETRY_HEADER: [&str; 3] = ["node", "lon", "lat"];

fn format_err(line: u64, message: impl Into<String>) -> Error {
    Error::CsvFormat { line, message: message.into() }
}

/// Read validated flow records from CSV. Structural or semantic problems are
/// reported with their 1-based line number.
pub fn read_flow_records<R: Read>(reader: R) -> Result<Vec<FlowRecord>> {
    let mut csv = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = csv.headers().map_err(|e| format_err(1, e.to_string()))?;
    let found: Vec<&str> = headers.iter().map(str::trim).collect();
    if found != FLOW_HEADER {
        return Err(format_err(
            1,
            format!("expected header {:?}, found {:?}", FLOW_HEADER.join(","), found.join(",")),
        ));
    }

    let mut records = Vec::new();
    for row in csv.records() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            format_err(line, e.to_string())
        })?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.len() != 4 {
            return Err(format_err(line, format!("expected 4 fields, found {}", row.len())));
        }
        let timestamp = row[0].trim().to_string();
        if Timestamp::parse(&timestamp).is_none() {
            return Err(format_err(
                line,
                format!("timestamp {timestamp:?} is not an ISO-8601 date or non-negative integer"),
            ));
        }
        let weight: f64 = row[3]
            .trim()
            .parse()
            .map_err(|_| format_err(line, format!("weight {:?} is not a number", &row[3])))?;
        if !weight.is_finite() || weight < 0.0 {
            return Err(format_err(line, format!("weight {weight} must be finite and >= 0")));
        }
        records.push(FlowRecord {
            timestamp,
            origin: row[1].trim().to_string(),
            destination: row[2].trim().to_string(),
            weight,
        });
    }
    Ok(records)
}

pub fn read_flow_records_path(path: &Path) -> Result<Vec<FlowRecord>> {
    read_flow_records(File::open(path)?)
}

/// One flow record per temporal edge, in timestamp-then-pair order.
pub fn flow_records(net: &TemporalNetwork) -> Vec<FlowRecord> {
    let mut records = Vec::new();
    for (t, snap) in net.snapshots().iter().enumerate() {
        let timestamp = net.timestamps()[t].to_string();
        for (pair, weight) in snap.edges() {
            let (a, b) = pair.endpoints();
            records.push(FlowRecord {
                timestamp: timestamp.clone(),
                origin: net.label(a).to_string(),
                destination: net.label(b).to_string(),
                weight: *weight,
            });
        }
    }
    records
}

/// Write flow records in the ingestion schema.
pub fn write_flow_records<W: Write>(writer: W, records: &[FlowRecord]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(FLOW_HEADER)
        .map_err(|e| Error::Config(format!("csv write: {e}")))?;
    for record in records {
        csv.write_record([
            record.timestamp.as_str(),
            record.origin.as_str(),
            record.destination.as_str(),
            &record.weight.to_string(),
        ])
        .map_err(|e| Error::Config(format!("csv write: {e}")))?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_flow_records_path(path: &Path, records: &[FlowRecord]) -> Result<()> {
    write_flow_records(File::create(path)?, records)
}

/// Node centroids keyed by label. One row per node; coordinates must be
/// within valid longitude/latitude ranges.
pub fn read_node_geometry<R: Read>(reader: R) -> Result<BTreeMap<String, (f64, f64)>> {
    let mut csv = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = csv.headers().map_err(|e| format_err(1, e.to_string()))?;
    let found: Vec<&str> = headers.iter().map(str::trim).collect();
    if found != GEOMETRY_HEADER {
        return Err(format_err(
            1,
            format!(
                "expected header {:?}, found {:?}",
                GEOMETRY_HEADER.join(","),
                found.join(",")
            ),
        ));
    }
    let mut geometry = BTreeMap::new();
    for row in csv.records() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            format_err(line, e.to_string())
        })?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.len() != 3 {
            return Err(format_err(line, format!("expected 3 fields, found {}", row.len())));
        }
        let node = row[0].trim().to_string();
        let lon: f64 = row[1]
            .trim()
            .parse()
            .map_err(|_| format_err(line, format!("lon {:?} is not a number", &row[1])))?;
        let lat: f64 = row[2]
            .trim()
            .parse()
            .map_err(|_| format_err(line, format!("lat {:?} is not a number", &row[2])))?;
        if !(-180.0..=180.0).contains(&lon) || !(-90.0..=90.0).contains(&lat) {
            return Err(format_err(line, format!("coordinates ({lon}, {lat}) out of range")));
        }
        if geometry.insert(node.clone(), (lon, lat)).is_some() {
            return Err(format_err(line, format!("duplicate geometry row for node {node:?}")));
        }
    }
    Ok(geometry)
}

pub fn read_node_geometry_path(path: &Path) -> Result<BTreeMap<String, (f64, f64)>> {
    read_node_geometry(File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::temporal::{build_temporal_network, BuildOptions};

    #[test]
    fn reads_valid_flows() {
        let csv = "timestamp,origin,destination,weight\n\
                   2020-01-06,A,B,3.5\n\
                   2020-01-13,B,C,2\n";
        let records = read_flow_records(csv.as_bytes()).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].weight, 3.5);
    }

    #[test]
    fn rejects_bad_header() {
        let err = read_flow_records("time,from,to,w\n1,A,B,1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::CsvFormat { line: 1, .. }));
    }

    #[test]
    fn rejects_bad_weight_with_line() {
        let csv = "timestamp,origin,destination,weight\n1,A,B,1\n2,B,C,abc\n";
        let err = read_flow_records(csv.as_bytes()).unwrap_err();
        match err {
            Error::CsvFormat { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_negative_weight_with_line() {
        let csv = "timestamp,origin,destination,weight\n1,A,B,-2\n";
        let err = read_flow_records(csv.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::CsvFormat { line: 2, .. }));
    }

    #[test]
    fn rejects_bad_timestamp_with_line() {
        let csv = "timestamp,origin,destination,weight\n1,A,B,1\nlater,A,B,1\n";
        let err = read_flow_records(csv.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::CsvFormat { line: 3, .. }));
    }

    #[test]
    fn round_trip_is_exact() {
        let records = vec![
            FlowRecord {
                timestamp: "1".into(),
                origin: "a".into(),
                destination: "b".into(),
                weight: 0.1 + 0.2,
            },
            FlowRecord {
                timestamp: "2".into(),
                origin: "b".into(),
                destination: "c".into(),
                weight: 1.0 / 3.0,
            },
        ];
        let net = build_temporal_network(&records, &BuildOptions::default()).unwrap();
        let mut buffer = Vec::new();
        write_flow_records(&mut buffer, &flow_records(&net)).unwrap();
        let reread = read_flow_records(buffer.as_slice()).unwrap();
        let rebuilt = build_temporal_network(&reread, &BuildOptions::default()).unwrap();
        assert_eq!(rebuilt, net);
    }

    #[test]
    fn geometry_reads_and_validates() {
        let csv = "node,lon,lat\nA,-89.4,43.07\nB,-91.2,43.8\n";
        let geometry = read_node_geometry(csv.as_bytes()).unwrap();
        assert_eq!(geometry["A"], (-89.4, 43.07));

        let err = read_node_geometry("node,lon,lat\nA,-200,10\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::CsvFormat { line: 2, .. }));

        let err = read_node_geometry("node,lon,lat\nA,1,2\nA,3,4\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::CsvFormat { line: 3, .. }));
    }
}
