//! Grid scans over richness thresholds and window durations, with
//! null-model normalization, per-timestamp coefficient series, and the
//! min-max regression used to relate coefficients to flow volumes.
//!
//! A scan is a deterministic parallel map over `(cell, null-model)` work
//! items. Every item derives an independent RNG stream from
//! `(seed, k-index, delta-index, null-index)`, so results are bit-identical
//! regardless of thread count or schedule.

use std::borrow::Cow;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{
    empirical_p_two_tailed, topo_rc, trc_numerator, weighted_connectedness, window_means,
    wtrc_numerator, WindowStat,
};
use crate::null::{
    edge_switch_snapshot, make_null, mixing_attempts, weight_decorrelate_snapshot, NullRecipe,
    NullStep,
};
use crate::rng::RngStream;
use crate::temporal::{RichSet, RichnessProperty, Snapshot, TemporalNetwork, ThresholdMode};

/// Identifier embedded in every result JSON; bump on breaking layout changes.
pub const SCHEMA_VERSION: &str = "richclub.scan/1";

const DOMAIN_SCAN_NULLS: u64 = 1;
const DOMAIN_SERIES_NULLS: u64 = 2;

/// Which rich-club coefficient a scan measures.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// Weighted temporal rich club: max window-mean weighted connectedness.
    #[default]
    Wtrc,
    /// Topological temporal rich club: the WTRC on unit weights.
    Ttrc,
    /// Stable-edge temporal rich club: max window cohesion.
    Trc,
    /// Weighted connectedness of the time-aggregated graph.
    StaticWrc,
    /// Topological density of the time-aggregated graph.
    #[serde(rename = "static-toporc")]
    StaticTopoRc,
    /// WTRC normalized against nulls with both topology and weights
    /// randomized.
    Mixed,
}

impl Metric {
    pub fn is_static(self) -> bool {
        matches!(self, Metric::StaticWrc | Metric::StaticTopoRc)
    }

    /// Null recipe used when the configuration does not name one.
    pub fn default_recipe(self) -> NullRecipe {
        let steps = match self {
            Metric::Wtrc => vec![NullStep::weight_decorrelate(), NullStep::SequenceShuffle],
            Metric::Ttrc => vec![NullStep::edge_switch(), NullStep::SequenceShuffle],
            Metric::Trc => vec![NullStep::timestamp_shuffle()],
            Metric::Mixed => vec![
                NullStep::edge_switch(),
                NullStep::weight_decorrelate(),
                NullStep::SequenceShuffle,
            ],
            Metric::StaticWrc => vec![NullStep::weight_decorrelate()],
            Metric::StaticTopoRc => vec![NullStep::edge_switch()],
        };
        NullRecipe::new(steps).expect("default recipes are valid")
    }

    /// Temporal metrics default to 10 null models, static ones to 100.
    pub fn default_null_count(self) -> usize {
        if self.is_static() {
            100
        } else {
            10
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Wtrc => "wtrc",
            Metric::Ttrc => "ttrc",
            Metric::Trc => "trc",
            Metric::StaticWrc => "static-wrc",
            Metric::StaticTopoRc => "static-toporc",
            Metric::Mixed => "mixed",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wtrc" => Ok(Metric::Wtrc),
            "ttrc" => Ok(Metric::Ttrc),
            "trc" => Ok(Metric::Trc),
            "static-wrc" => Ok(Metric::StaticWrc),
            "static-toporc" => Ok(Metric::StaticTopoRc),
            "mixed" => Ok(Metric::Mixed),
            other => Err(Error::Config(format!("unknown metric {other:?}"))),
        }
    }
}

/// Full scan configuration. Defaults follow the usual scan setup: 12
/// richness thresholds, 8 durations, and the metric's default recipe and
/// null count.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanConfig {
    pub metric: Metric,
    pub richness: RichnessProperty,
    pub threshold_mode: ThresholdMode,
    /// Number of evenly spaced richness thresholds (ignored with `k_values`).
    pub k_count: usize,
    /// Number of evenly spaced durations (ignored with `delta_values`).
    pub delta_count: usize,
    pub k_values: Option<Vec<f64>>,
    pub delta_values: Option<Vec<usize>>,
    /// Largest duration of the generated grid; defaults to T.
    pub delta_max: Option<usize>,
    pub null_count: usize,
    pub recipe: Option<NullRecipe>,
    pub seed: u64,
}

impl ScanConfig {
    pub fn new(metric: Metric) -> Self {
        Self {
            metric,
            richness: RichnessProperty::default(),
            threshold_mode: ThresholdMode::default(),
            k_count: 12,
            delta_count: 8,
            k_values: None,
            delta_values: None,
            delta_max: None,
            null_count: metric.default_null_count(),
            recipe: None,
            seed: 0,
        }
    }
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self::new(Metric::Wtrc)
    }
}

/// `count` evenly spaced thresholds spanning the richness range, inclusive.
/// All-equal values collapse to a single threshold (the caller should warn).
pub fn richness_grid(values: &[f64], count: usize) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::Config("richness grid needs at least one value".into()));
    }
    if count < 2 {
        return Err(Error::Config("richness grid needs at least 2 thresholds".into()));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return Ok(vec![min]);
    }
    Ok((0..count)
        .map(|i| min + (max - min) * i as f64 / (count - 1) as f64)
        .collect())
}

/// `count` evenly spaced integer durations from 1 to `endpoint`, rounded to
/// nearest and deduplicated ascending.
pub fn delta_grid(t_len: usize, count: usize, endpoint: usize) -> Result<Vec<usize>> {
    if endpoint < 1 || endpoint > t_len {
        return Err(Error::Config(format!(
            "delta endpoint {endpoint} outside [1, {t_len}]"
        )));
    }
    if count == 0 {
        return Err(Error::Config("delta grid needs at least 1 duration".into()));
    }
    if count == 1 {
        return Ok(vec![1]);
    }
    let mut out: Vec<usize> = (0..count)
        .map(|i| {
            let v = 1.0 + (endpoint as f64 - 1.0) * i as f64 / (count as f64 - 1.0);
            v.round() as usize
        })
        .collect();
    out.dedup();
    Ok(out)
}

/// One grid cell of a scan result. Undefined cells (fewer than two rich
/// nodes, or a zero null mean) keep `defined = false` and `null` fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub k_index: usize,
    pub delta_index: usize,
    pub defined: bool,
    pub observed: Option<f64>,
    pub null_values: Vec<f64>,
    /// Nulls whose own rich set fell below two members (only possible when
    /// rich sets are recomputed per null).
    pub null_undefined: usize,
    pub null_mean: Option<f64>,
    pub coefficient: Option<f64>,
    pub p_two_tailed: Option<f64>,
    /// Earliest window start attaining the observed maximum (0-based).
    pub t_index: Option<usize>,
    pub t_label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemberNode {
    pub id: String,
    pub richness: f64,
}

/// Rich-set membership at one threshold, on the observed network.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub k: f64,
    pub nodes: Vec<MemberNode>,
}

/// The grid cell with the largest defined coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArgmaxCell {
    pub k_index: usize,
    pub delta_index: usize,
    pub k: f64,
    pub delta: usize,
    pub coefficient: f64,
    pub p_two_tailed: f64,
    pub t_index: Option<usize>,
    pub t_label: Option<String>,
}

/// Complete result of a scan: realized grids, per-cell statistics, rich-set
/// membership, and enough configuration echo to reproduce the run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub schema_version: String,
    pub metric: Metric,
    pub richness_property: RichnessProperty,
    pub threshold_mode: ThresholdMode,
    pub seed: u64,
    pub null_count: usize,
    pub recipe: Vec<String>,
    pub timestamps: Vec<String>,
    pub thresholds: Vec<f64>,
    pub deltas: Vec<usize>,
    pub membership: Vec<Membership>,
    pub cells: Vec<Cell>,
    pub argmax: Option<ArgmaxCell>,
    pub warnings: Vec<String>,
    /// Not serialized: wall clock varies between runs while outputs must not.
    #[serde(skip)]
    pub wall_clock_ms: u64,
}

impl ScanResult {
    pub fn cell(&self, k_index: usize, delta_index: usize) -> &Cell {
        &self.cells[k_index * self.deltas.len() + delta_index]
    }
}

struct ObservedCell {
    value: Option<f64>,
    t_index: Option<usize>,
}

/// Run a full grid scan.
pub fn scan(net: &TemporalNetwork, config: &ScanConfig) -> Result<ScanResult> {
    let started = Instant::now();
    let t_len = net.snapshot_count();
    if config.null_count == 0 {
        return Err(Error::Config("null count must be at least 1".into()));
    }
    let metric = config.metric;
    let recipe = match &config.recipe {
        Some(recipe) => recipe.clone(),
        None => metric.default_recipe(),
    };
    if metric.is_static() {
        if let Some(step) = recipe.steps().iter().find(|s| !s.is_per_snapshot()) {
            return Err(Error::Config(format!(
                "step {step} does not apply to static metrics"
            )));
        }
    }

    let mut warnings = Vec::new();

    // Observation network: temporal-topology metrics run on unit weights.
    let obs_net: Cow<'_, TemporalNetwork> = match metric {
        Metric::Ttrc | Metric::Trc => Cow::Owned(net.unweight()),
        _ => Cow::Borrowed(net),
    };

    let richness = obs_net.richness_vector(config.richness);
    let thresholds = match &config.k_values {
        Some(values) => {
            if values.is_empty() {
                return Err(Error::Config("explicit threshold list is empty".into()));
            }
            let mut sorted = values.clone();
            sorted.sort_unstable_by(f64::total_cmp);
            sorted.dedup();
            sorted
        }
        None => {
            let grid = richness_grid(&richness.values, config.k_count)?;
            if grid.len() == 1 {
                warnings.push(format!(
                    "all richness values equal {}; threshold grid collapsed to a single threshold",
                    grid[0]
                ));
            }
            grid
        }
    };

    let deltas = if metric.is_static() {
        if config.delta_values.is_some() {
            warnings.push("delta values are ignored for static metrics".into());
        }
        vec![t_len]
    } else {
        match &config.delta_values {
            Some(values) => {
                if values.is_empty() {
                    return Err(Error::Config("explicit delta list is empty".into()));
                }
                let mut sorted = values.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if let Some(&bad) = sorted.iter().find(|&&d| d < 1 || d > t_len) {
                    return Err(Error::Config(format!(
                        "delta {bad} outside [1, {t_len}]"
                    )));
                }
                sorted
            }
            None => delta_grid(t_len, config.delta_count, config.delta_max.unwrap_or(t_len))?,
        }
    };

    let rich_sets: Vec<RichSet> = thresholds
        .iter()
        .map(|&k| richness.rich_set(k, config.threshold_mode))
        .collect();
    let membership: Vec<Membership> = thresholds
        .iter()
        .zip(&rich_sets)
        .map(|(&k, rich)| Membership {
            k,
            nodes: rich
                .members()
                .iter()
                .map(|&id| MemberNode {
                    id: obs_net.label(id).to_string(),
                    richness: richness.values[id.index()],
                })
                .collect(),
        })
        .collect();

    // Rich sets transfer to null models when richness is invariant under the
    // randomizers, which holds for temporal edge count. Aggregate degree is
    // not preserved by edge switching, so those sets are recomputed per null.
    let recompute_rich = config.richness == RichnessProperty::AggregateDegree;
    if recompute_rich {
        warnings.push(
            "aggregate-degree richness is recomputed for every null model: randomizing edges \
             changes the number of rich nodes at each threshold"
                .into(),
        );
    }

    let aggregate = metric.is_static().then(|| obs_net.aggregate());

    // Observed numerators.
    let observed: Vec<ObservedCell> = if let Some(agg) = &aggregate {
        rich_sets
            .iter()
            .map(|rich| ObservedCell {
                value: static_numerator(metric, agg.graph(), rich),
                t_index: None,
            })
            .collect()
    } else {
        let mut cells = Vec::with_capacity(rich_sets.len() * deltas.len());
        for rich in &rich_sets {
            for &delta in &deltas {
                let stat = temporal_numerator(metric, &obs_net, rich, delta)?;
                cells.push(ObservedCell {
                    value: stat.map(|s| s.value),
                    t_index: stat.map(|s| s.start),
                });
            }
        }
        cells
    };
    let observed_at =
        |k: usize, d: usize| &observed[if aggregate.is_some() { k } else { k * deltas.len() + d }];

    // Null work items; cells undefined on the observed network are skipped.
    let base = RngStream::new(config.seed).substream(DOMAIN_SCAN_NULLS);
    let mut items: Vec<(usize, usize, usize)> = Vec::new();
    for k in 0..thresholds.len() {
        if rich_sets[k].len() < 2 {
            continue;
        }
        for d in 0..deltas.len() {
            for j in 0..config.null_count {
                items.push((k, d, j));
            }
        }
    }

    let null_results: Result<Vec<((usize, usize, usize), Option<f64>)>> = items
        .par_iter()
        .map(|&(k, d, j)| {
            let stream = base
                .substream(k as u64)
                .substream(d as u64)
                .substream(j as u64);
            let value = if let Some(agg) = &aggregate {
                static_null_value(
                    metric,
                    agg.graph(),
                    &recipe,
                    stream,
                    &rich_sets[k],
                    recompute_rich,
                    thresholds[k],
                    config.threshold_mode,
                    config.richness,
                )
            } else {
                temporal_null_value(
                    metric,
                    &obs_net,
                    &recipe,
                    stream,
                    &rich_sets[k],
                    recompute_rich,
                    thresholds[k],
                    config.threshold_mode,
                    config.richness,
                    deltas[d],
                )?
            };
            Ok(((k, d, j), value))
        })
        .collect();
    let null_results = null_results?;

    let mut null_grid: Vec<Vec<Option<f64>>> =
        vec![vec![None; config.null_count]; thresholds.len() * deltas.len()];
    for ((k, d, j), value) in null_results {
        null_grid[k * deltas.len() + d][j] = value;
    }

    let mut cells = Vec::with_capacity(thresholds.len() * deltas.len());
    for k in 0..thresholds.len() {
        for d in 0..deltas.len() {
            let obs = observed_at(k, d);
            let t_label = obs.t_index.map(|t| obs_net.timestamps()[t].to_string());
            let cell = if rich_sets[k].len() < 2 || obs.value.is_none() {
                Cell {
                    k_index: k,
                    delta_index: d,
                    defined: false,
                    observed: None,
                    null_values: Vec::new(),
                    null_undefined: 0,
                    null_mean: None,
                    coefficient: None,
                    p_two_tailed: None,
                    t_index: None,
                    t_label: None,
                }
            } else {
                let slot = &null_grid[k * deltas.len() + d];
                let null_values: Vec<f64> = slot.iter().filter_map(|v| *v).collect();
                let null_undefined = slot.len() - null_values.len();
                let observed_value = obs.value.expect("checked above");
                if null_values.is_empty() {
                    Cell {
                        k_index: k,
                        delta_index: d,
                        defined: false,
                        observed: Some(observed_value),
                        null_values,
                        null_undefined,
                        null_mean: None,
                        coefficient: None,
                        p_two_tailed: None,
                        t_index: obs.t_index,
                        t_label,
                    }
                } else {
                    let null_mean = null_values.iter().sum::<f64>() / null_values.len() as f64;
                    let coefficient = (null_mean > 0.0).then(|| observed_value / null_mean);
                    Cell {
                        k_index: k,
                        delta_index: d,
                        defined: coefficient.is_some(),
                        observed: Some(observed_value),
                        p_two_tailed: Some(empirical_p_two_tailed(observed_value, &null_values)),
                        null_values,
                        null_undefined,
                        null_mean: Some(null_mean),
                        coefficient,
                        t_index: obs.t_index,
                        t_label,
                    }
                }
            };
            cells.push(cell);
        }
    }

    let argmax = cells
        .iter()
        .filter(|c| c.defined)
        .max_by(|a, b| {
            a.coefficient
                .unwrap()
                .total_cmp(&b.coefficient.unwrap())
                // Earliest row-major cell wins ties.
                .then(b.k_index.cmp(&a.k_index))
                .then(b.delta_index.cmp(&a.delta_index))
        })
        .map(|c| ArgmaxCell {
            k_index: c.k_index,
            delta_index: c.delta_index,
            k: thresholds[c.k_index],
            delta: deltas[c.delta_index],
            coefficient: c.coefficient.unwrap(),
            p_two_tailed: c.p_two_tailed.unwrap(),
            t_index: c.t_index,
            t_label: c.t_label.clone(),
        });

    Ok(ScanResult {
        schema_version: SCHEMA_VERSION.to_string(),
        metric,
        richness_property: config.richness,
        threshold_mode: config.threshold_mode,
        seed: config.seed,
        null_count: config.null_count,
        recipe: recipe.step_strings(),
        timestamps: net.timestamps().iter().map(|t| t.to_string()).collect(),
        thresholds,
        deltas,
        membership,
        cells,
        argmax,
        warnings,
        wall_clock_ms: started.elapsed().as_millis() as u64,
    })
}

fn temporal_numerator(
    metric: Metric,
    net: &TemporalNetwork,
    rich: &RichSet,
    delta: usize,
) -> Result<Option<WindowStat>> {
    match metric {
        Metric::Trc => trc_numerator(net, rich, delta),
        _ => wtrc_numerator(net, rich, delta),
    }
}

fn static_numerator(metric: Metric, graph: &Snapshot, rich: &RichSet) -> Option<f64> {
    if rich.len() < 2 {
        return None;
    }
    match metric {
        Metric::StaticTopoRc => topo_rc(graph, rich),
        _ => Some(weighted_connectedness(graph, rich)),
    }
}

#[allow(clippy::too_many_arguments)]
fn temporal_null_value(
    metric: Metric,
    net: &TemporalNetwork,
    recipe: &NullRecipe,
    stream: RngStream,
    rich: &RichSet,
    recompute_rich: bool,
    threshold: f64,
    mode: ThresholdMode,
    property: RichnessProperty,
    delta: usize,
) -> Result<Option<f64>> {
    let null_net = make_null(net, recipe, stream)?;
    let recomputed;
    let rich = if recompute_rich {
        recomputed = null_net.richness_vector(property).rich_set(threshold, mode);
        &recomputed
    } else {
        rich
    };
    Ok(temporal_numerator(metric, &null_net, rich, delta)?.map(|s| s.value))
}

#[allow(clippy::too_many_arguments)]
fn static_null_value(
    metric: Metric,
    graph: &Snapshot,
    recipe: &NullRecipe,
    stream: RngStream,
    rich: &RichSet,
    recompute_rich: bool,
    threshold: f64,
    mode: ThresholdMode,
    property: RichnessProperty,
) -> Option<f64> {
    let mut null_graph = graph.clone();
    for (step_index, step) in recipe.steps().iter().enumerate() {
        let step_stream = stream.substream(step_index as u64);
        null_graph = match step {
            NullStep::EdgeSwitch { attempts_multiplier } => {
                let attempts = mixing_attempts(null_graph.edge_count(), *attempts_multiplier);
                edge_switch_snapshot(&null_graph, attempts, step_stream)
            }
            NullStep::WeightDecorrelate { .. } => {
                weight_decorrelate_snapshot(&null_graph, step_stream)
            }
            _ => unreachable!("static recipes are validated to per-snapshot steps"),
        };
    }
    let recomputed;
    let rich = if recompute_rich && property == RichnessProperty::AggregateDegree {
        let n = rich.universe();
        let values: Vec<f64> = null_graph.degrees(n).iter().map(|&d| d as f64).collect();
        let richness = crate::temporal::RichnessVector { property, values };
        recomputed = richness.rich_set(threshold, mode);
        &recomputed
    } else {
        rich
    };
    static_numerator(metric, &null_graph, rich)
}

/// One per-timestamp point of a normalized coefficient series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeseriesPoint {
    pub t_index: usize,
    pub t_label: String,
    pub observed: Option<f64>,
    pub null_mean: Option<f64>,
    pub coefficient: Option<f64>,
    /// Total flow at the window-start timestamp.
    pub flow_sum: f64,
}

/// Options for [`coefficient_timeseries`].
#[derive(Clone, Debug, PartialEq)]
pub struct TimeseriesOptions {
    pub metric: Metric,
    pub richness: RichnessProperty,
    pub threshold_mode: ThresholdMode,
    pub null_count: usize,
    pub recipe: Option<NullRecipe>,
    pub seed: u64,
}

impl Default for TimeseriesOptions {
    fn default() -> Self {
        Self {
            metric: Metric::Wtrc,
            richness: RichnessProperty::default(),
            threshold_mode: ThresholdMode::default(),
            null_count: 10,
            recipe: None,
            seed: 0,
        }
    }
}

/// Normalized coefficient at every window start: observed window mean over
/// the null mean *at the same start*, so temporal dips reflect structure
/// rather than overall null volume.
pub fn coefficient_timeseries(
    net: &TemporalNetwork,
    threshold: f64,
    delta: usize,
    options: &TimeseriesOptions,
) -> Result<Vec<TimeseriesPoint>> {
    let t_len = net.snapshot_count();
    if delta < 1 || delta > t_len {
        return Err(Error::Config(format!("delta {delta} outside [1, {t_len}]")));
    }
    if options.null_count == 0 {
        return Err(Error::Config("null count must be at least 1".into()));
    }
    let metric = options.metric;
    if metric.is_static() {
        return Err(Error::Config("coefficient series requires a temporal metric".into()));
    }
    let recipe = match &options.recipe {
        Some(recipe) => recipe.clone(),
        None => metric.default_recipe(),
    };

    let obs_net: Cow<'_, TemporalNetwork> = match metric {
        Metric::Ttrc | Metric::Trc => Cow::Owned(net.unweight()),
        _ => Cow::Borrowed(net),
    };
    let richness = obs_net.richness_vector(options.richness);
    let rich = richness.rich_set(threshold, options.threshold_mode);
    let flows = flow_sum_timeseries(net);
    let starts = t_len - delta + 1;

    let make_points = |observed: Option<Vec<f64>>, null_means: Option<Vec<f64>>| {
        (0..starts)
            .map(|t| {
                let obs = observed.as_ref().map(|v| v[t]);
                let null_mean = null_means.as_ref().map(|v| v[t]);
                let coefficient = match (obs, null_mean) {
                    (Some(o), Some(m)) if m > 0.0 => Some(o / m),
                    _ => None,
                };
                TimeseriesPoint {
                    t_index: t,
                    t_label: net.timestamps()[t].to_string(),
                    observed: obs,
                    null_mean,
                    coefficient,
                    flow_sum: flows[t],
                }
            })
            .collect()
    };

    if rich.len() < 2 {
        return Ok(make_points(None, None));
    }

    let observed = per_start_values(metric, &obs_net, &rich, delta)?;

    let base = RngStream::new(options.seed).substream(DOMAIN_SERIES_NULLS);
    let null_series: Result<Vec<Vec<Option<f64>>>> = (0..options.null_count)
        .into_par_iter()
        .map(|j| {
            let null_net = make_null(&obs_net, &recipe, base.substream(j as u64))?;
            let recomputed;
            let rich_for_null = if options.richness == RichnessProperty::AggregateDegree {
                recomputed = null_net
                    .richness_vector(options.richness)
                    .rich_set(threshold, options.threshold_mode);
                &recomputed
            } else {
                &rich
            };
            if rich_for_null.len() < 2 {
                return Ok(vec![None; starts]);
            }
            Ok(per_start_values(metric, &null_net, rich_for_null, delta)?
                .into_iter()
                .map(Some)
                .collect())
        })
        .collect();
    let null_series = null_series?;

    let null_means: Vec<f64> = (0..starts)
        .map(|t| {
            let defined: Vec<f64> = null_series.iter().filter_map(|s| s[t]).collect();
            if defined.is_empty() {
                // No defined nulls at this start; mean zero marks undefined.
                0.0
            } else {
                defined.iter().sum::<f64>() / defined.len() as f64
            }
        })
        .collect();

    Ok(make_points(Some(observed), Some(null_means)))
}

/// Per-start window statistic for the chosen temporal metric.
fn per_start_values(
    metric: Metric,
    net: &TemporalNetwork,
    rich: &RichSet,
    delta: usize,
) -> Result<Vec<f64>> {
    match metric {
        Metric::Trc => {
            let t_len = net.snapshot_count();
            (0..=t_len - delta)
                .map(|start| {
                    crate::metrics::delta_cohesion(net, rich, start, delta)
                        .map(|v| v.expect("rich set size checked by caller"))
                })
                .collect()
        }
        _ => {
            let series = crate::metrics::connectedness_series(net, rich);
            Ok(window_means(&series, delta).collect())
        }
    }
}

/// Total edge weight per snapshot.
pub fn flow_sum_timeseries(net: &TemporalNetwork) -> Vec<f64> {
    net.snapshots().iter().map(Snapshot::total_weight).collect()
}

/// Ordinary least squares after independent min-max scaling of both series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Min-max scale `x` and `y` to [0,1] independently, then fit y = a + b x by
/// least squares. `None` when either series is constant or shorter than 2.
pub fn minmax_regression(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    assert_eq!(x.len(), y.len(), "regression series must have equal length");
    if x.len() < 2 {
        return None;
    }
    let xs = minmax_scale(x)?;
    let ys = minmax_scale(y)?;
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (xi, yi) in xs.iter().zip(&ys) {
        sxx += (xi - mean_x) * (xi - mean_x);
        sxy += (xi - mean_x) * (yi - mean_y);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some(LinearFit { slope, intercept: mean_y - slope * mean_x })
}

fn minmax_scale(values: &[f64]) -> Option<Vec<f64>> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > min) {
        return None;
    }
    Some(values.iter().map(|v| (v - min) / (max - min)).collect())
}
