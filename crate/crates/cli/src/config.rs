//! Scan configuration assembly: TOML config file, overridable by CLI flags.

use std::path::Path;

use richclub::{Error, Metric, NullRecipe, RichnessProperty, ScanConfig, ThresholdMode};
use serde::Deserialize;

/// Keys accepted in the `--config` TOML file. Every key mirrors a scan
/// setting and is overridden by the corresponding CLI flag.
#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigFile {
    pub metric: Option<String>,
    pub richness: Option<String>,
    pub threshold_mode: Option<String>,
    pub k_count: Option<usize>,
    pub delta_count: Option<usize>,
    pub k_list: Option<Vec<f64>>,
    pub delta_list: Option<Vec<usize>>,
    pub delta_max: Option<usize>,
    pub nulls: Option<usize>,
    pub recipe: Option<Vec<String>>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text)
            .map_err(|e| Error::Config(format!("config file {}: {e}", path.display())))
    }
}

/// Flag-level scan settings before defaults are applied. `None` means the
/// flag was not given.
#[derive(Debug, Default, Clone)]
pub struct ScanOverrides {
    pub metric: Option<String>,
    pub richness: Option<String>,
    pub threshold_mode: Option<String>,
    pub k_count: Option<usize>,
    pub delta_count: Option<usize>,
    pub k_list: Option<Vec<f64>>,
    pub delta_list: Option<Vec<usize>>,
    pub delta_max: Option<usize>,
    pub nulls: Option<usize>,
    pub recipe: Option<Vec<String>>,
    pub seed: Option<u64>,
}

pub fn parse_richness(name: &str) -> Result<RichnessProperty, Error> {
    match name {
        "temporal-edge-count" => Ok(RichnessProperty::TemporalEdgeCount),
        "aggregate-degree" => Ok(RichnessProperty::AggregateDegree),
        other => Err(Error::Config(format!("unknown richness property {other:?}"))),
    }
}

pub fn parse_threshold_mode(name: &str) -> Result<ThresholdMode, Error> {
    match name {
        "inclusive" => Ok(ThresholdMode::Inclusive),
        "strict" => Ok(ThresholdMode::Strict),
        other => Err(Error::Config(format!("unknown threshold mode {other:?}"))),
    }
}

/// Resolve flags over config-file values over defaults into a [`ScanConfig`].
pub fn resolve_scan_config(
    flags: &ScanOverrides,
    file: &ConfigFile,
) -> Result<ScanConfig, Error> {
    let metric_name = flags
        .metric
        .clone()
        .or_else(|| file.metric.clone())
        .unwrap_or_else(|| "wtrc".into());
    let metric: Metric = metric_name.parse()?;

    let mut config = ScanConfig::new(metric);
    if let Some(name) = flags.richness.as_deref().or(file.richness.as_deref()) {
        config.richness = parse_richness(name)?;
    }
    if let Some(name) = flags.threshold_mode.as_deref().or(file.threshold_mode.as_deref()) {
        config.threshold_mode = parse_threshold_mode(name)?;
    }
    if let Some(count) = flags.k_count.or(file.k_count) {
        config.k_count = count;
    }
    if let Some(count) = flags.delta_count.or(file.delta_count) {
        config.delta_count = count;
    }
    if let Some(list) = flags.k_list.clone().or_else(|| file.k_list.clone()) {
        config.k_values = Some(list);
    }
    if let Some(list) = flags.delta_list.clone().or_else(|| file.delta_list.clone()) {
        config.delta_values = Some(list);
    }
    if let Some(max) = flags.delta_max.or(file.delta_max) {
        config.delta_max = Some(max);
    }
    if let Some(nulls) = flags.nulls.or(file.nulls) {
        config.null_count = nulls;
    }
    if let Some(steps) = flags.recipe.as_ref().or(file.recipe.as_ref()) {
        config.recipe = Some(NullRecipe::parse(steps)?);
    }
    config.seed = flags.seed.or(file.seed).unwrap_or(0);
    Ok(config)
}

/// Parse a comma-separated list of numbers.
pub fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| Error::Config(format!("bad {what} entry {s:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: ConfigFile = toml::from_str(
            r#"
            metric = "ttrc"
            nulls = 25
            seed = 9
            recipe = ["edge-switch", "sequence-shuffle"]
            "#,
        )
        .unwrap();
        let flags = ScanOverrides { nulls: Some(5), ..Default::default() };
        let config = resolve_scan_config(&flags, &file).unwrap();
        assert_eq!(config.metric, Metric::Ttrc);
        assert_eq!(config.null_count, 5);
        assert_eq!(config.seed, 9);
        assert!(config.recipe.is_some());
    }

    #[test]
    fn defaults_apply_without_file() {
        let config = resolve_scan_config(&ScanOverrides::default(), &ConfigFile::default())
            .unwrap();
        assert_eq!(config.metric, Metric::Wtrc);
        assert_eq!(config.null_count, 10);
        assert_eq!(config.k_count, 12);
        assert_eq!(config.delta_count, 8);
    }

    #[test]
    fn static_metric_defaults_to_100_nulls() {
        let flags = ScanOverrides { metric: Some("static-wrc".into()), ..Default::default() };
        let config = resolve_scan_config(&flags, &ConfigFile::default()).unwrap();
        assert_eq!(config.null_count, 100);
    }

    #[test]
    fn unknown_keys_rejected() {
        let parsed: Result<ConfigFile, _> = toml::from_str("bogus = 1");
        assert!(parsed.is_err());
    }

    #[test]
    fn bad_metric_is_config_error() {
        let flags = ScanOverrides { metric: Some("nope".into()), ..Default::default() };
        assert!(resolve_scan_config(&flags, &ConfigFile::default()).is_err());
    }

    #[test]
    fn list_parsing() {
        let ks: Vec<f64> = parse_list("1, 2.5,3", "threshold").unwrap();
        assert_eq!(ks, vec![1.0, 2.5, 3.0]);
        assert!(parse_list::<usize>("1,x", "delta").is_err());
    }
}
