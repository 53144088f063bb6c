//! GeoJSON (RFC 7946) emission of rich-club membership and flows: one Point
//! per rich member, one LineString per rich-rich edge active in the selected
//! cell's argmax window, weighted by its mean weight over that window.

use std::collections::BTreeMap;
use std::fmt;

use anyhow::Result;
use richclub::temporal::Pair;
use richclub::{ScanResult, TemporalNetwork};
use serde_json::{json, Value};

/// Rich-set nodes missing from the geometry table; exits with code 4.
#[derive(Debug)]
pub struct MissingGeometry {
    pub missing: Vec<String>,
}

impl fmt::Display for MissingGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no geometry for rich nodes: {}", self.missing.join(", "))
    }
}

impl std::error::Error for MissingGeometry {}

/// Build the FeatureCollection for one scan cell.
pub fn cell_feature_collection(
    result: &ScanResult,
    net: &TemporalNetwork,
    geometry: &BTreeMap<String, (f64, f64)>,
    k_index: usize,
    delta_index: usize,
) -> Result<Value> {
    let cell = result.cell(k_index, delta_index);
    let members = &result.membership[k_index].nodes;

    let missing: Vec<String> = members
        .iter()
        .filter(|m| !geometry.contains_key(&m.id))
        .map(|m| m.id.clone())
        .collect();
    if !missing.is_empty() {
        return Err(MissingGeometry { missing }.into());
    }

    let mut features = Vec::new();
    for member in members {
        let (lon, lat) = geometry[&member.id];
        features.push(json!({
            "type": "Feature",
            "geometry": { "type": "Point", "coordinates": [lon, lat] },
            "properties": { "id": member.id, "richness": member.richness },
        }));
    }

    // The cell's argmax window; static cells cover the whole interval.
    let delta = result.deltas[delta_index];
    let start = cell.t_index.unwrap_or(0);
    let window = start..(start + delta).min(net.snapshot_count());

    let ids: Vec<_> = members
        .iter()
        .map(|m| net.node(&m.id).ok_or_else(|| {
            anyhow::anyhow!("rich node {:?} not present in the flow input", m.id)
        }))
        .collect::<Result<_>>()?;
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            let pair = Pair::new(a, b).expect("distinct rich members");
            let total: f64 = window
                .clone()
                .map(|t| net.snapshot(t).weight(pair).unwrap_or(0.0))
                .sum();
            if total <= 0.0 {
                continue;
            }
            let mean = total / window.len() as f64;
            let (sa, sb) = (net.label(a), net.label(b));
            let (lon_a, lat_a) = geometry[sa];
            let (lon_b, lat_b) = geometry[sb];
            features.push(json!({
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [[lon_a, lat_a], [lon_b, lat_b]],
                },
                "properties": {
                    "source": sa,
                    "target": sb,
                    "mean_window_weight": mean,
                },
            }));
        }
    }

    Ok(json!({ "type": "FeatureCollection", "features": features }))
}
