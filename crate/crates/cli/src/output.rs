//! Result bundle writers: scan JSON, coefficient matrix CSV, membership CSV.
//!
//! Floats are written with shortest round-trip formatting so CSV values parse
//! back to exactly the numbers serialized in the JSON.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use richclub::ScanResult;

/// Render a float the way the matrix CSV and SVG labels share it.
pub fn format_value(value: f64) -> String {
    value.to_string()
}

pub fn result_json(result: &ScanResult) -> Result<String> {
    let mut text = serde_json::to_string_pretty(result).context("serializing scan result")?;
    text.push('\n');
    Ok(text)
}

pub fn write_result_json(dir: &Path, result: &ScanResult) -> Result<PathBuf> {
    let path = dir.join("result.json");
    fs::write(&path, result_json(result)?)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Coefficient matrix: first row the delta values, first column the richness
/// thresholds, empty cells where the coefficient is undefined.
pub fn matrix_csv(result: &ScanResult) -> String {
    let mut out = String::from("k\\delta");
    for delta in &result.deltas {
        out.push(',');
        out.push_str(&delta.to_string());
    }
    out.push('\n');
    for (k_index, &k) in result.thresholds.iter().enumerate() {
        out.push_str(&format_value(k));
        for delta_index in 0..result.deltas.len() {
            out.push(',');
            if let Some(c) = result.cell(k_index, delta_index).coefficient {
                out.push_str(&format_value(c));
            }
        }
        out.push('\n');
    }
    out
}

pub fn write_matrix_csv(dir: &Path, result: &ScanResult) -> Result<PathBuf> {
    let path = dir.join(format!("matrix_{}.csv", result.metric.name()));
    fs::write(&path, matrix_csv(result))
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Rich-set membership rows `k,node_id,richness` for every threshold.
pub fn membership_csv(result: &ScanResult) -> String {
    let mut out = String::from("k,node_id,richness\n");
    for membership in &result.membership {
        for node in &membership.nodes {
            out.push_str(&format_value(membership.k));
            out.push(',');
            out.push_str(&node.id);
            out.push(',');
            out.push_str(&format_value(node.richness));
            out.push('\n');
        }
    }
    out
}

pub fn write_membership_csv(dir: &Path, result: &ScanResult) -> Result<PathBuf> {
    let path = dir.join("membership.csv");
    fs::write(&path, membership_csv(result))
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// One-line human summary of the global argmax cell.
pub fn argmax_line(result: &ScanResult) -> String {
    match &result.argmax {
        Some(cell) => {
            let t = match (&cell.t_index, &cell.t_label) {
                (Some(i), Some(label)) => format!(" t_index={i} t={label}"),
                _ => String::new(),
            };
            format!(
                "argmax: k={} delta={} coefficient={} p={}{}",
                format_value(cell.k),
                cell.delta,
                format_value(cell.coefficient),
                format_value(cell.p_two_tailed),
                t
            )
        }
        None => "argmax: none (no defined cells)".to_string(),
    }
}
