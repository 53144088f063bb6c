//! Implementations of the CLI subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use richclub::scan::TimeseriesOptions;
use richclub::{
    build_temporal_network, coefficient_timeseries, evaluate_recovery, generate_planted,
    minmax_regression, scan, BuildOptions, Error, LinearFit, NullRecipe, PlantedSpec, ScanConfig,
    ScanResult, TemporalNetwork, WeightLaw,
};
use serde_json::json;

use crate::config::{parse_richness, parse_threshold_mode};
use crate::geojson::cell_feature_collection;
use crate::output::{
    argmax_line, format_value, write_matrix_csv, write_membership_csv, write_result_json,
};
use crate::svg::heatmap_svg;

pub fn load_network(input: &Path) -> Result<TemporalNetwork> {
    let records = richclub::io::read_flow_records_path(input)
        .with_context(|| format!("reading {}", input.display()))?;
    let net = build_temporal_network(&records, &BuildOptions::default())?;
    Ok(net)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

// ---------------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------------

pub fn run_scan(
    input: &Path,
    output_dir: &Path,
    config: &ScanConfig,
    emit_svg: bool,
) -> Result<ScanResult> {
    let net = load_network(input)?;
    let result = scan(&net, config)?;
    ensure_dir(output_dir)?;
    write_result_json(output_dir, &result)?;
    write_matrix_csv(output_dir, &result)?;
    write_membership_csv(output_dir, &result)?;
    if emit_svg {
        let path = output_dir.join("heatmap.svg");
        fs::write(&path, heatmap_svg(&result))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    for warning in &result.warnings {
        log::warn!("{warning}");
    }
    println!("{}", argmax_line(&result));
    Ok(result)
}

// ---------------------------------------------------------------------------
// timeseries
// ---------------------------------------------------------------------------

pub struct TimeseriesArgs {
    pub threshold: f64,
    pub delta: usize,
    pub metric: String,
    pub richness: Option<String>,
    pub threshold_mode: Option<String>,
    pub nulls: usize,
    pub recipe: Option<Vec<String>>,
    pub seed: u64,
    pub split: Option<usize>,
}

fn fit_line(name: &str, fit: Option<(LinearFit, usize)>) -> String {
    match fit {
        Some((fit, points)) => format!(
            "{name}: slope={} intercept={} points={points}",
            format_value(fit.slope),
            format_value(fit.intercept)
        ),
        None => format!("{name}: undefined (constant series or too few points)"),
    }
}

fn segment_fit(
    points: &[richclub::scan::TimeseriesPoint],
    range: std::ops::Range<usize>,
) -> Option<(LinearFit, usize)> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|p| range.contains(&p.t_index))
        .filter_map(|p| p.coefficient.map(|c| (p.flow_sum, c)))
        .unzip();
    if xs.len() < 2 {
        return None;
    }
    minmax_regression(&xs, &ys).map(|fit| (fit, xs.len()))
}

pub fn run_timeseries(
    input: &Path,
    output_dir: &Path,
    args: &TimeseriesArgs,
) -> Result<Vec<richclub::scan::TimeseriesPoint>> {
    let net = load_network(input)?;
    let mut options = TimeseriesOptions {
        metric: args.metric.parse()?,
        null_count: args.nulls,
        seed: args.seed,
        ..Default::default()
    };
    if let Some(name) = &args.richness {
        options.richness = parse_richness(name)?;
    }
    if let Some(name) = &args.threshold_mode {
        options.threshold_mode = parse_threshold_mode(name)?;
    }
    if let Some(steps) = &args.recipe {
        options.recipe = Some(NullRecipe::parse(steps)?);
    }

    let points = coefficient_timeseries(&net, args.threshold, args.delta, &options)?;

    ensure_dir(output_dir)?;
    let mut csv = String::from("t_index,t_label,observed,null_mean,coefficient,flow_sum\n");
    for p in &points {
        let opt = |v: Option<f64>| v.map(format_value).unwrap_or_default();
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            p.t_index,
            p.t_label,
            opt(p.observed),
            opt(p.null_mean),
            opt(p.coefficient),
            format_value(p.flow_sum)
        ));
    }
    let csv_path = output_dir.join("timeseries.csv");
    fs::write(&csv_path, csv).with_context(|| format!("writing {}", csv_path.display()))?;

    // Regression of the coefficient on the flow sum, min-max scaled.
    let full = segment_fit(&points, 0..points.len());
    println!("{}", fit_line("regression", full));
    let mut summary = json!({
        "threshold": args.threshold,
        "delta": args.delta,
        "regression": full.map(|(f, n)| json!({
            "slope": f.slope, "intercept": f.intercept, "points": n
        })),
    });
    if let Some(split) = args.split {
        let pre = segment_fit(&points, 0..split);
        let post = segment_fit(&points, split..points.len());
        println!("{}", fit_line(&format!("regression pre t<{split}"), pre));
        println!("{}", fit_line(&format!("regression post t>={split}"), post));
        summary["split"] = json!(split);
        summary["regression_pre"] =
            pre.map(|(f, n)| json!({"slope": f.slope, "intercept": f.intercept, "points": n}))
                .unwrap_or(serde_json::Value::Null);
        summary["regression_post"] =
            post.map(|(f, n)| json!({"slope": f.slope, "intercept": f.intercept, "points": n}))
                .unwrap_or(serde_json::Value::Null);
    }
    let json_path = output_dir.join("regression.json");
    fs::write(&json_path, format!("{}\n", serde_json::to_string_pretty(&summary)?))
        .with_context(|| format!("writing {}", json_path.display()))?;
    Ok(points)
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

pub fn parse_weight_law(text: &str) -> Result<WeightLaw> {
    let (name, params) = text
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("weight law {text:?} needs parameters")))?;
    let values: Vec<f64> = params
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad weight-law parameter {s:?}")))
        })
        .collect::<std::result::Result<_, _>>()?;
    if values.len() != 2 {
        return Err(Error::Config(format!("weight law {text:?} needs two parameters")).into());
    }
    match name.trim() {
        "uniform" => Ok(WeightLaw::Uniform { low: values[0], high: values[1] }),
        "lognormal" => Ok(WeightLaw::LogNormal { mu: values[0], sigma: values[1] }),
        other => Err(Error::Config(format!("unknown weight law {other:?}")).into()),
    }
}

pub fn run_synth(output_dir: &Path, spec: &PlantedSpec) -> Result<(PathBuf, PathBuf)> {
    let (net, truth) = generate_planted(spec)?;
    ensure_dir(output_dir)?;
    let flows_path = output_dir.join("flows.csv");
    richclub::io::write_flow_records_path(&flows_path, &richclub::io::flow_records(&net))?;
    let truth_path = output_dir.join("truth.json");
    fs::write(&truth_path, format!("{}\n", serde_json::to_string_pretty(&truth)?))
        .with_context(|| format!("writing {}", truth_path.display()))?;
    println!(
        "generated {} nodes x {} snapshots, club {:?} over window [{}, {}]",
        spec.nodes, spec.snapshots, truth.club, truth.window.0, truth.window.1
    );
    Ok((flows_path, truth_path))
}

/// Score a finished scan against a ground-truth file (used by tests and
/// ad-hoc validation; not a dedicated subcommand).
pub fn recovery_report(
    result: &ScanResult,
    truth_path: &Path,
    alpha: f64,
) -> Result<richclub::synth::RecoveryReport> {
    let truth: richclub::GroundTruth =
        serde_json::from_str(&fs::read_to_string(truth_path)?)
            .with_context(|| format!("parsing {}", truth_path.display()))?;
    Ok(evaluate_recovery(result, &truth, alpha))
}

// ---------------------------------------------------------------------------
// export-geo
// ---------------------------------------------------------------------------

pub struct ExportGeoArgs {
    pub result: PathBuf,
    pub geometry: PathBuf,
    pub k: Option<f64>,
    pub delta: Option<usize>,
    pub output: Option<PathBuf>,
}

fn find_k_index(result: &ScanResult, k: f64) -> Result<usize> {
    let tolerance = 1e-9 * k.abs().max(1.0);
    result
        .thresholds
        .iter()
        .position(|&t| (t - k).abs() <= tolerance)
        .ok_or_else(|| {
            Error::Config(format!(
                "threshold {k} not in scan grid {:?}",
                result.thresholds
            ))
            .into()
        })
}

fn find_delta_index(result: &ScanResult, delta: usize) -> Result<usize> {
    result.deltas.iter().position(|&d| d == delta).ok_or_else(|| {
        Error::Config(format!("delta {delta} not in scan grid {:?}", result.deltas)).into()
    })
}

pub fn run_export_geo(input: &Path, output_dir: &Path, args: &ExportGeoArgs) -> Result<PathBuf> {
    let net = load_network(input)?;
    let result: ScanResult = serde_json::from_str(
        &fs::read_to_string(&args.result)
            .with_context(|| format!("reading {}", args.result.display()))?,
    )
    .with_context(|| format!("parsing {}", args.result.display()))?;
    let geometry = richclub::io::read_node_geometry_path(&args.geometry)?;

    let (k_index, delta_index) = match (args.k, args.delta) {
        (Some(k), Some(d)) => (find_k_index(&result, k)?, find_delta_index(&result, d)?),
        (None, None) => {
            let argmax = result.argmax.as_ref().ok_or_else(|| {
                Error::Config("scan has no defined cells; pass --k and --delta".into())
            })?;
            (argmax.k_index, argmax.delta_index)
        }
        _ => {
            return Err(Error::Config(
                "pass both --k and --delta, or neither for the argmax cell".into(),
            )
            .into())
        }
    };

    if result.membership[k_index].nodes.is_empty() {
        log::warn!(
            "rich set at k={} is empty; emitting an empty FeatureCollection",
            result.thresholds[k_index]
        );
    }
    let fc = cell_feature_collection(&result, &net, &geometry, k_index, delta_index)?;
    ensure_dir(output_dir)?;
    let path = args
        .output
        .clone()
        .unwrap_or_else(|| output_dir.join("richclub.geojson"));
    fs::write(&path, format!("{}\n", serde_json::to_string_pretty(&fc)?))
        .with_context(|| format!("writing {}", path.display()))?;
    println!(
        "wrote {} ({} features)",
        path.display(),
        fc["features"].as_array().map(|f| f.len()).unwrap_or(0)
    );
    Ok(path)
}

// ---------------------------------------------------------------------------
// aggregate
// ---------------------------------------------------------------------------

pub fn run_aggregate(input: &Path, output_dir: &Path) -> Result<()> {
    let net = load_network(input)?;
    let agg = net.aggregate();
    ensure_dir(output_dir)?;

    let mut edges = String::from("origin,destination,weight\n");
    for (pair, weight) in agg.graph().edges() {
        let (a, b) = pair.endpoints();
        edges.push_str(&format!(
            "{},{},{}\n",
            net.label(a),
            net.label(b),
            format_value(*weight)
        ));
    }
    let edges_path = output_dir.join("aggregate_edges.csv");
    fs::write(&edges_path, edges)
        .with_context(|| format!("writing {}", edges_path.display()))?;

    let mut nodes = String::from("node,degree,strength\n");
    for (i, label) in net.labels().iter().enumerate() {
        nodes.push_str(&format!("{label},{},{}\n", agg.degree()[i], agg.strength()[i]));
    }
    let nodes_path = output_dir.join("aggregate_nodes.csv");
    fs::write(&nodes_path, nodes)
        .with_context(|| format!("writing {}", nodes_path.display()))?;

    println!(
        "aggregate: {} nodes, {} edges, total weight {}",
        net.node_count(),
        agg.graph().edge_count(),
        format_value(agg.total_weight())
    );
    Ok(())
}
