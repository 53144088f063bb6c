//! Synthetic temporal networks with planted rich clubs, plus recovery
//! scoring. These instances stand in for proprietary flow data when
//! validating the scan pipeline end to end.

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, LogNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::scan::ScanResult;
use crate::temporal::{NodeId, Pair, Snapshot, TemporalNetwork, Timestamp};

const DOMAIN_SYNTH: u64 = 3;

/// Distribution of background edge weights.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "law")]
pub enum WeightLaw {
    /// Uniform on [low, high).
    Uniform { low: f64, high: f64 },
    /// Heavy-tailed, like observed flow volumes.
    LogNormal { mu: f64, sigma: f64 },
}

impl WeightLaw {
    fn validate(&self) -> Result<()> {
        match self {
            WeightLaw::Uniform { low, high } => {
                if !low.is_finite() || !high.is_finite() || *low < 0.0 || high < low {
                    return Err(Error::Config(format!(
                        "uniform weight law needs 0 <= low <= high, got [{low}, {high})"
                    )));
                }
            }
            WeightLaw::LogNormal { mu, sigma } => {
                if !mu.is_finite() || !sigma.is_finite() || *sigma < 0.0 {
                    return Err(Error::Config(format!(
                        "log-normal weight law needs finite mu and sigma >= 0, got ({mu}, {sigma})"
                    )));
                }
            }
        }
        Ok(())
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            WeightLaw::Uniform { low, high } => {
                if high > low {
                    rng.random_range(*low..*high)
                } else {
                    *low
                }
            }
            WeightLaw::LogNormal { mu, sigma } => {
                LogNormal::new(*mu, *sigma).expect("validated parameters").sample(rng)
            }
        }
    }
}

impl Default for WeightLaw {
    fn default() -> Self {
        WeightLaw::LogNormal { mu: 0.0, sigma: 1.0 }
    }
}

/// Parameters of a planted-club instance.
///
/// Background pairs appear per snapshot with probability
/// `background_density`; club pairs are always present during
/// `club_window` (inclusive 0-based snapshot indices) with their drawn
/// weight multiplied by `club_weight_scale`. A scale of 1 on a complete
/// background (`density = 1`) is the degenerate, structureless instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedSpec {
    pub nodes: usize,
    pub snapshots: usize,
    pub club_size: usize,
    pub club_weight_scale: f64,
    pub club_window: (usize, usize),
    pub background_density: f64,
    pub background_weight_law: WeightLaw,
    pub seed: u64,
}

impl PlantedSpec {
    fn validate(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(Error::Config("planted spec needs at least 2 nodes".into()));
        }
        if self.snapshots == 0 {
            return Err(Error::Config("planted spec needs at least 1 snapshot".into()));
        }
        if self.club_size > self.nodes {
            return Err(Error::Config(format!(
                "club size {} exceeds node count {}",
                self.club_size, self.nodes
            )));
        }
        let (a, b) = self.club_window;
        if a > b || b >= self.snapshots {
            return Err(Error::Config(format!(
                "club window [{a}, {b}] outside snapshot range [0, {})",
                self.snapshots
            )));
        }
        if !(self.background_density > 0.0 && self.background_density <= 1.0) {
            return Err(Error::Config(format!(
                "background density {} outside (0, 1]",
                self.background_density
            )));
        }
        if !self.club_weight_scale.is_finite() || self.club_weight_scale < 1.0 {
            return Err(Error::Config(format!(
                "club weight scale {} must be >= 1",
                self.club_weight_scale
            )));
        }
        self.background_weight_law.validate()
    }
}

/// What was planted, for recovery scoring.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub club: Vec<String>,
    pub window: (usize, usize),
    /// Window length the scan is expected to favor.
    pub expected_delta: usize,
    /// False for the degenerate scale-1 plant.
    pub expect_significant: bool,
}

/// Zero-padded node label, stable under the sorted node-table convention.
fn node_label(index: usize, width: usize) -> String {
    format!("n{index:0width$}")
}

/// Generate a planted-club instance, deterministic under the spec seed.
pub fn generate_planted(spec: &PlantedSpec) -> Result<(TemporalNetwork, GroundTruth)> {
    spec.validate()?;
    let width = (spec.nodes.max(2) - 1).to_string().len();
    let labels: Vec<String> = (0..spec.nodes).map(|i| node_label(i, width)).collect();
    let mut rng = RngStream::new(spec.seed).substream(DOMAIN_SYNTH).rng();

    let club: Vec<usize> = {
        let mut picked = sample(&mut rng, spec.nodes, spec.club_size).into_vec();
        picked.sort_unstable();
        picked
    };
    let mut in_club = vec![false; spec.nodes];
    for &i in &club {
        in_club[i] = true;
    }
    let (window_start, window_end) = spec.club_window;

    let mut snapshots = Vec::with_capacity(spec.snapshots);
    for t in 0..spec.snapshots {
        let boosted = t >= window_start && t <= window_end;
        let mut edges = Vec::new();
        for i in 0..spec.nodes {
            for j in (i + 1)..spec.nodes {
                let pair = Pair::new(NodeId::new(i as u32), NodeId::new(j as u32)).unwrap();
                let club_pair = in_club[i] && in_club[j];
                if club_pair && boosted {
                    let weight =
                        spec.background_weight_law.sample(&mut rng) * spec.club_weight_scale;
                    edges.push((pair, weight));
                } else if rng.random_bool(spec.background_density) {
                    edges.push((pair, spec.background_weight_law.sample(&mut rng)));
                }
            }
        }
        snapshots.push(Snapshot::from_sorted_unchecked(edges));
    }

    let timestamps = (0..spec.snapshots).map(|t| Timestamp::Integer(t as u64)).collect();
    let net = TemporalNetwork::from_parts(labels.clone(), timestamps, snapshots)?;

    let truth = GroundTruth {
        club: club.iter().map(|&i| labels[i].clone()).collect(),
        window: spec.club_window,
        expected_delta: window_end - window_start + 1,
        expect_significant: spec.club_weight_scale > 1.0 && spec.club_size >= 2,
    };
    Ok((net, truth))
}

/// Recovery scores of a scan against the planted ground truth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    /// Fraction of the argmax cell's rich set that is planted club.
    pub precision: Option<f64>,
    /// Fraction of the planted club recovered in the argmax cell's rich set.
    pub recall: Option<f64>,
    /// |argmax delta - expected delta|.
    pub delta_error: Option<f64>,
    /// Grid cell whose rich-set size and duration best match the plant.
    pub planted_k_index: usize,
    pub planted_delta_index: usize,
    pub p_at_planted: Option<f64>,
    pub coefficient_at_planted: Option<f64>,
    /// Whether the planted cell's p-value clears `alpha`.
    pub significant_at_planted: bool,
    pub expect_significant: bool,
}

/// Score a scan result against ground truth. `alpha` is the significance
/// level for the planted-cell flag.
pub fn evaluate_recovery(result: &ScanResult, truth: &GroundTruth, alpha: f64) -> RecoveryReport {
    let argmax = result.argmax.as_ref();

    let (precision, recall, delta_error) = match argmax {
        Some(cell) => {
            let rich: Vec<&str> = result.membership[cell.k_index]
                .nodes
                .iter()
                .map(|n| n.id.as_str())
                .collect();
            let hits = rich.iter().filter(|id| truth.club.iter().any(|c| c == *id)).count();
            let precision =
                (!rich.is_empty()).then(|| hits as f64 / rich.len() as f64);
            let recall =
                (!truth.club.is_empty()).then(|| hits as f64 / truth.club.len() as f64);
            let delta_error = (cell.delta as f64 - truth.expected_delta as f64).abs();
            (precision, recall, Some(delta_error))
        }
        None => (None, None, None),
    };

    // Planted cell: rich-set size closest to the club size (larger threshold
    // on ties), duration closest to the expected delta (shorter on ties).
    let size_distance: Vec<u64> = result
        .membership
        .iter()
        .map(|m| (m.nodes.len() as i64 - truth.club.len() as i64).unsigned_abs())
        .collect();
    let best_distance = size_distance.iter().copied().min().unwrap_or(0);
    let planted_k_index = size_distance.iter().rposition(|&d| d == best_distance).unwrap_or(0);
    let planted_delta_index = result
        .deltas
        .iter()
        .enumerate()
        .min_by_key(|(_, &d)| {
            ((d as i64 - truth.expected_delta as i64).unsigned_abs(), d as i64)
        })
        .map(|(i, _)| i)
        .unwrap_or(0);

    let planted = result.cell(planted_k_index, planted_delta_index);
    let p_at_planted = planted.p_two_tailed;
    let coefficient_at_planted = planted.coefficient;
    let significant_at_planted = p_at_planted.is_some_and(|p| p <= alpha);

    RecoveryReport {
        precision,
        recall,
        delta_error,
        planted_k_index,
        planted_delta_index,
        p_at_planted,
        coefficient_at_planted,
        significant_at_planted,
        expect_significant: truth.expect_significant,
    }
}
