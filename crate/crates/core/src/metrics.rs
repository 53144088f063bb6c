//! Rich-club numerators and null-based normalization.
//!
//! Numerators come in static form (topological density, weighted
//! connectedness of the rich sub-network) and temporal form (window cohesion
//! and window-mean weighted connectedness maximized over window starts).
//! [`normalize`] divides an observed numerator by the mean over null models
//! and attaches an empirical two-tailed p-value.
//!
//! Cells where no value exists (fewer than two rich nodes, or a null mean of
//! zero) are carried as explicit `None`/undefined markers rather than zeros;
//! a silent zero would read as an anti-rich-club signal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::temporal::{RichSet, Snapshot, TemporalNetwork};

/// Value of a window statistic together with the earliest window start that
/// attains it. `start` is a 0-based snapshot index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowStat {
    pub start: usize,
    pub delta: usize,
    pub value: f64,
}

/// An observed numerator normalized against a set of null-model numerators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedCoefficient {
    pub observed: f64,
    pub null_values: Vec<f64>,
    pub null_mean: f64,
    /// `observed / null_mean`; absent when the null mean is zero.
    pub coefficient: Option<f64>,
    /// Add-one empirical two-tailed p-value against the null sample.
    pub p_two_tailed: f64,
}

impl NormalizedCoefficient {
    pub fn defined(&self) -> bool {
        self.coefficient.is_some()
    }
}

/// Topological rich-club density 2E/(N(N-1)) over the rich sub-network.
///
/// Returns `None` for fewer than two rich nodes, where the density is
/// undefined.
pub fn topo_rc(graph: &Snapshot, rich: &RichSet) -> Option<f64> {
    let n = rich.len();
    if n < 2 {
        return None;
    }
    let edges = graph
        .edges()
        .iter()
        .filter(|(pair, _)| rich.contains_pair(*pair))
        .count();
    Some(2.0 * edges as f64 / (n as f64 * (n - 1) as f64))
}

/// Total weight of edges with both endpoints rich; 0 when fewer than two
/// rich nodes.
pub fn weighted_connectedness(graph: &Snapshot, rich: &RichSet) -> f64 {
    if rich.len() < 2 {
        return 0.0;
    }
    graph
        .edges()
        .iter()
        .filter(|(pair, _)| rich.contains_pair(*pair))
        .map(|(_, w)| w)
        .sum()
}

/// Per-snapshot weighted connectedness of the rich sub-network.
pub fn connectedness_series(net: &TemporalNetwork, rich: &RichSet) -> Vec<f64> {
    net.snapshots()
        .iter()
        .map(|snap| weighted_connectedness(snap, rich))
        .collect()
}

fn check_window(t_len: usize, start: usize, delta: usize) -> Result<()> {
    if delta == 0 {
        return Err(Error::Config("window duration must be at least 1".into()));
    }
    if delta > t_len || start > t_len - delta {
        return Err(Error::Config(format!(
            "window start {start} with duration {delta} exceeds {t_len} snapshots"
        )));
    }
    Ok(())
}

/// Fraction of rich pairs whose edge is present in every snapshot of the
/// window `[start, start + delta)`, over the maximal rich pair count.
pub fn delta_cohesion(
    net: &TemporalNetwork,
    rich: &RichSet,
    start: usize,
    delta: usize,
) -> Result<Option<f64>> {
    check_window(net.snapshot_count(), start, delta)?;
    let n = rich.len();
    if n < 2 {
        return Ok(None);
    }
    let stable = stable_pair_count(net, rich, start, delta);
    let denom = n as f64 * (n - 1) as f64 / 2.0;
    Ok(Some(stable as f64 / denom))
}

/// Count rich pairs present in all snapshots of the window: seed with the
/// first snapshot's rich edges, then retain those present in the rest.
fn stable_pair_count(net: &TemporalNetwork, rich: &RichSet, start: usize, delta: usize) -> usize {
    let mut stable: Vec<crate::temporal::Pair> = net
        .snapshot(start)
        .edges()
        .iter()
        .filter(|(pair, _)| rich.contains_pair(*pair))
        .map(|(pair, _)| *pair)
        .collect();
    for t in (start + 1)..(start + delta) {
        if stable.is_empty() {
            break;
        }
        let snap = net.snapshot(t);
        stable.retain(|pair| snap.contains(*pair));
    }
    stable.len()
}

/// Mean over the window's snapshots of rich weighted connectedness.
pub fn avg_weighted_connectedness(
    net: &TemporalNetwork,
    rich: &RichSet,
    start: usize,
    delta: usize,
) -> Result<Option<f64>> {
    check_window(net.snapshot_count(), start, delta)?;
    if rich.len() < 2 {
        return Ok(None);
    }
    let sum: f64 = (start..start + delta)
        .map(|t| weighted_connectedness(net.snapshot(t), rich))
        .sum();
    Ok(Some(sum / delta as f64))
}

/// Maximum over window starts of a per-start statistic, recording the
/// earliest maximizing start.
fn window_max(values: impl Iterator<Item = f64>, delta: usize) -> Option<WindowStat> {
    let mut best: Option<WindowStat> = None;
    for (start, value) in values.enumerate() {
        match &best {
            Some(current) if value <= current.value => {}
            _ => best = Some(WindowStat { start, delta, value }),
        }
    }
    best
}

pub(crate) fn window_means(series: &[f64], delta: usize) -> impl Iterator<Item = f64> + '_ {
    series
        .windows(delta)
        .map(move |window| window.iter().sum::<f64>() / delta as f64)
}

/// Temporal rich-club numerator: maximal window cohesion over all starts.
pub fn trc_numerator(
    net: &TemporalNetwork,
    rich: &RichSet,
    delta: usize,
) -> Result<Option<WindowStat>> {
    let t_len = net.snapshot_count();
    check_window(t_len, 0, delta)?;
    if rich.len() < 2 {
        return Ok(None);
    }
    let denom = rich.len() as f64 * (rich.len() - 1) as f64 / 2.0;
    let cohesions =
        (0..=t_len - delta).map(|start| stable_pair_count(net, rich, start, delta) as f64 / denom);
    Ok(window_max(cohesions, delta))
}

/// Weighted temporal rich-club numerator: maximal window-mean weighted
/// connectedness over all starts, with the earliest maximizing start.
pub fn wtrc_numerator(
    net: &TemporalNetwork,
    rich: &RichSet,
    delta: usize,
) -> Result<Option<WindowStat>> {
    check_window(net.snapshot_count(), 0, delta)?;
    if rich.len() < 2 {
        return Ok(None);
    }
    let series = connectedness_series(net, rich);
    Ok(window_max(window_means(&series, delta), delta))
}

/// Topological temporal rich-club numerator: the weighted numerator with all
/// edge weights set to 1.
pub fn ttrc_numerator(
    net: &TemporalNetwork,
    rich: &RichSet,
    delta: usize,
) -> Result<Option<WindowStat>> {
    wtrc_numerator(&net.unweight(), rich, delta)
}

/// Add-one empirical two-tailed p-value of `observed` against `nulls`.
pub fn empirical_p_two_tailed(observed: f64, nulls: &[f64]) -> f64 {
    let n = nulls.len() as f64;
    let ge = nulls.iter().filter(|&&v| v >= observed).count() as f64;
    let le = nulls.iter().filter(|&&v| v <= observed).count() as f64;
    let tail = ((ge + 1.0) / (n + 1.0)).min((le + 1.0) / (n + 1.0));
    (2.0 * tail).min(1.0)
}

/// Normalize an observed numerator against null-model numerators.
///
/// The coefficient is `observed / mean(nulls)`, undefined when the null mean
/// is zero. Errors on an empty null sample.
pub fn normalize(observed: f64, null_values: &[f64]) -> Result<NormalizedCoefficient> {
    if null_values.is_empty() {
        return Err(Error::Config("normalization requires at least one null value".into()));
    }
    let null_mean = null_values.iter().sum::<f64>() / null_values.len() as f64;
    let coefficient = (null_mean > 0.0).then(|| observed / null_mean);
    Ok(NormalizedCoefficient {
        observed,
        null_values: null_values.to_vec(),
        null_mean,
        coefficient,
        p_two_tailed: empirical_p_two_tailed(observed, null_values),
    })
}
