//! Weighted temporal networks: snapshots, aggregation, and richness.
//!
//! A [`TemporalNetwork`] is an ordered sequence of weighted undirected
//! snapshots over a shared node set. Nodes carry external string labels and
//! dense internal indices; the label table is sorted so that construction is
//! canonical (ingesting the same flows in any record or column order yields
//! an equal network). Networks are immutable once built and safe to share
//! across threads.

use std::collections::HashMap;
use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense node index, valid for the network that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(u32);

impl NodeId {
    pub fn new(index: u32) -> Self {
        Self(index)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Unordered node pair with no self-loops; endpoints are kept sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    a: u32,
    b: u32,
}

impl Pair {
    /// Returns `None` for a self-loop.
    pub fn new(i: NodeId, j: NodeId) -> Option<Self> {
        if i.0 == j.0 {
            None
        } else {
            Some(Self { a: i.0.min(j.0), b: i.0.max(j.0) })
        }
    }

    pub(crate) fn from_raw(i: u32, j: u32) -> Option<Self> {
        Self::new(NodeId(i), NodeId(j))
    }

    pub fn endpoints(self) -> (NodeId, NodeId) {
        (NodeId(self.a), NodeId(self.b))
    }
}

/// One external timestamp label: a non-negative integer or an ISO-8601 date.
///
/// A single network never mixes the two kinds, so the derived ordering only
/// ever compares within one variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Timestamp {
    Integer(u64),
    Date(NaiveDate),
}

impl Timestamp {
    pub fn parse(value: &str) -> Option<Self> {
        let trimmed = value.trim();
        if !trimmed.is_empty() && trimmed.bytes().all(|b| b.is_ascii_digit()) {
            return trimmed.parse().ok().map(Timestamp::Integer);
        }
        NaiveDate::parse_from_str(trimmed, "%Y-%m-%d").ok().map(Timestamp::Date)
    }

    fn same_kind(self, other: Self) -> bool {
        matches!(
            (self, other),
            (Timestamp::Integer(_), Timestamp::Integer(_)) | (Timestamp::Date(_), Timestamp::Date(_))
        )
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Timestamp::Integer(v) => write!(f, "{v}"),
            Timestamp::Date(d) => write!(f, "{}", d.format("%Y-%m-%d")),
        }
    }
}

/// One origin-destination observation before network construction.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowRecord {
    pub timestamp: String,
    pub origin: String,
    pub destination: String,
    pub weight: f64,
}

/// How directed record pairs at the same timestamp merge into one
/// undirected weight.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetrization {
    /// Sum both directions; flows are extensive quantities.
    #[default]
    Sum,
    Max,
    Mean,
}

/// What to do with records whose origin equals their destination.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelfLoopPolicy {
    /// Drop silently; rich-club connectedness counts only inter-node edges.
    #[default]
    Drop,
    Reject,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildOptions {
    pub symmetrization: Symmetrization,
    pub self_loops: SelfLoopPolicy,
}

/// Instantaneous weighted graph at one timestamp. Edge list is sorted by
/// pair and duplicate-free; weights are finite and non-negative.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    edges: Vec<(Pair, f64)>,
}

impl Snapshot {
    pub fn empty() -> Self {
        Self { edges: Vec::new() }
    }

    /// Build from an edge list, normalizing order and validating weights.
    pub fn new(mut edges: Vec<(Pair, f64)>) -> Result<Self> {
        for (pair, weight) in &edges {
            if !weight.is_finite() || *weight < 0.0 {
                return Err(Error::Config(format!(
                    "edge {:?} has invalid weight {weight}",
                    (pair.a, pair.b)
                )));
            }
        }
        edges.sort_unstable_by_key(|(pair, _)| *pair);
        if edges.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Config("duplicate edge in snapshot".into()));
        }
        Ok(Self { edges })
    }

    /// Edges must already be sorted by pair and unique.
    pub(crate) fn from_sorted_unchecked(edges: Vec<(Pair, f64)>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0].0 < w[1].0));
        Self { edges }
    }

    pub fn edges(&self) -> &[(Pair, f64)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, pair: Pair) -> Option<f64> {
        self.edges
            .binary_search_by_key(&pair, |(p, _)| *p)
            .ok()
            .map(|i| self.edges[i].1)
    }

    pub fn contains(&self, pair: Pair) -> bool {
        self.edges.binary_search_by_key(&pair, |(p, _)| *p).is_ok()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|(_, w)| w).sum()
    }

    /// Instantaneous degree per node, for a graph over `n` nodes.
    pub fn degrees(&self, n: usize) -> Vec<u32> {
        let mut deg = vec![0u32; n];
        for (pair, _) in &self.edges {
            deg[pair.a as usize] += 1;
            deg[pair.b as usize] += 1;
        }
        deg
    }

    fn max_endpoint(&self) -> Option<u32> {
        self.edges.iter().map(|(p, _)| p.b).max()
    }
}

/// Ordered sequence of weighted undirected snapshots over a shared node set.
#[derive(Clone, Debug, PartialEq)]
pub struct TemporalNetwork {
    labels: Vec<String>,
    index: HashMap<String, u32>,
    timestamps: Vec<Timestamp>,
    snapshots: Vec<Snapshot>,
}

impl TemporalNetwork {
    /// Assemble a network from parts. Labels must be unique; timestamps must
    /// be strictly increasing, one per snapshot; every edge endpoint must be
    /// a valid node index.
    pub fn from_parts(
        labels: Vec<String>,
        timestamps: Vec<Timestamp>,
        snapshots: Vec<Snapshot>,
    ) -> Result<Self> {
        if snapshots.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        if timestamps.len() != snapshots.len() {
            return Err(Error::Config(format!(
                "{} timestamps for {} snapshots",
                timestamps.len(),
                snapshots.len()
            )));
        }
        if timestamps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("timestamps must be strictly increasing".into()));
        }
        if timestamps.windows(2).any(|w| !w[0].same_kind(w[1])) {
            return Err(Error::Config("timestamps mix integer and date kinds".into()));
        }
        let n = labels.len() as u32;
        for snap in &snapshots {
            if let Some(max) = snap.max_endpoint() {
                if max >= n {
                    return Err(Error::Config(format!(
                        "edge endpoint {max} outside node table of size {n}"
                    )));
                }
            }
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i as u32).is_some() {
                return Err(Error::Config(format!("duplicate node label {label:?}")));
            }
        }
        Ok(Self { labels, index, timestamps, snapshots })
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of snapshots T.
    pub fn snapshot_count(&self) -> usize {
        self.snapshots.len()
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn snapshot(&self, t: usize) -> &Snapshot {
        &self.snapshots[t]
    }

    pub fn timestamps(&self) -> &[Timestamp] {
        &self.timestamps
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.labels[id.index()]
    }

    pub fn node(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied().map(NodeId)
    }

    /// Replace the snapshot sequence, keeping nodes and timestamps.
    pub(crate) fn with_snapshots(&self, snapshots: Vec<Snapshot>) -> Self {
        debug_assert_eq!(snapshots.len(), self.snapshots.len());
        Self {
            labels: self.labels.clone(),
            index: self.index.clone(),
            timestamps: self.timestamps.clone(),
            snapshots,
        }
    }

    /// Same topology per snapshot with every weight set to 1.
    pub fn unweight(&self) -> Self {
        let snapshots = self
            .snapshots
            .iter()
            .map(|snap| {
                Snapshot::from_sorted_unchecked(
                    snap.edges().iter().map(|(pair, _)| (*pair, 1.0)).collect(),
                )
            })
            .collect();
        self.with_snapshots(snapshots)
    }

    /// Time-aggregated static graph with per-node degree and strength.
    pub fn aggregate(&self) -> AggregateGraph {
        let n = self.node_count();
        let mut weights: HashMap<Pair, f64> = HashMap::new();
        let mut strength = vec![0u64; n];
        for snap in &self.snapshots {
            for (pair, weight) in snap.edges() {
                *weights.entry(*pair).or_insert(0.0) += weight;
                strength[pair.a as usize] += 1;
                strength[pair.b as usize] += 1;
            }
        }
        let mut edges: Vec<(Pair, f64)> = weights.into_iter().collect();
        edges.sort_unstable_by_key(|(pair, _)| *pair);
        let graph = Snapshot::from_sorted_unchecked(edges);
        let degree = graph.degrees(n);
        AggregateGraph { n, graph, degree, strength }
    }

    /// Per-node values of the chosen richness property.
    pub fn richness_vector(&self, property: RichnessProperty) -> RichnessVector {
        let aggregate = self.aggregate();
        richness_of_aggregate(&aggregate, property)
    }
}

/// Time-aggregated static graph: per-pair summed weights, distinct-neighbor
/// degree, and temporal edge count (strength) per node. Weights accrue per
/// pair in snapshot order.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateGraph {
    n: usize,
    graph: Snapshot,
    degree: Vec<u32>,
    strength: Vec<u64>,
}

impl AggregateGraph {
    /// The time-summed weighted graph.
    pub fn graph(&self) -> &Snapshot {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// k_i: count of distinct neighbors over the whole interval.
    pub fn degree(&self) -> &[u32] {
        &self.degree
    }

    /// s_i: total temporal edge count of node i (sum of instantaneous degrees).
    pub fn strength(&self) -> &[u64] {
        &self.strength
    }

    pub fn total_weight(&self) -> f64 {
        self.graph.total_weight()
    }
}

/// Node property used to rank nodes for rich-club membership.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RichnessProperty {
    /// Distinct-neighbor count in the time-aggregated graph.
    AggregateDegree,
    /// Sum of instantaneous degrees across all snapshots.
    #[default]
    TemporalEdgeCount,
}

/// Per-node richness values for one property.
#[derive(Clone, Debug, PartialEq)]
pub struct RichnessVector {
    pub property: RichnessProperty,
    pub values: Vec<f64>,
}

pub(crate) fn richness_of_aggregate(
    aggregate: &AggregateGraph,
    property: RichnessProperty,
) -> RichnessVector {
    let values = match property {
        RichnessProperty::AggregateDegree => {
            aggregate.degree().iter().map(|&k| k as f64).collect()
        }
        RichnessProperty::TemporalEdgeCount => {
            aggregate.strength().iter().map(|&s| s as f64).collect()
        }
    };
    RichnessVector { property, values }
}

/// Threshold comparison for rich-set membership. The usual definition is
/// inclusive (richness >= threshold); strict is kept for the variant that
/// writes the threshold as a lower bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdMode {
    #[default]
    Inclusive,
    Strict,
}

/// Membership of one rich set: sorted member list plus a lookup mask.
#[derive(Clone, Debug, PartialEq)]
pub struct RichSet {
    members: Vec<NodeId>,
    mask: Vec<bool>,
}

impl RichSet {
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.mask.get(id.index()).copied().unwrap_or(false)
    }

    /// Size of the node universe the membership mask covers.
    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub(crate) fn contains_pair(&self, pair: Pair) -> bool {
        self.mask[pair.a as usize] && self.mask[pair.b as usize]
    }

    /// Build a rich set from an explicit member list (for ground-truth
    /// evaluation); `n` is the network's node count.
    pub fn from_members(mut members: Vec<NodeId>, n: usize) -> Self {
        members.sort_unstable();
        members.dedup();
        let mut mask = vec![false; n];
        for id in &members {
            mask[id.index()] = true;
        }
        Self { members, mask }
    }
}

impl RichnessVector {
    /// Nodes whose richness clears the threshold under the given mode.
    pub fn rich_set(&self, threshold: f64, mode: ThresholdMode) -> RichSet {
        let mut members = Vec::new();
        let mut mask = vec![false; self.values.len()];
        for (i, &value) in self.values.iter().enumerate() {
            let rich = match mode {
                ThresholdMode::Inclusive => value >= threshold,
                ThresholdMode::Strict => value > threshold,
            };
            if rich {
                members.push(NodeId(i as u32));
                mask[i] = true;
            }
        }
        RichSet { members, mask }
    }
}

/// Construct a temporal network from origin-destination flow records.
///
/// Distinct sorted timestamps become snapshot positions; directed records
/// between the same pair at the same timestamp merge per the symmetrization
/// policy; self-loop records are dropped (or rejected); the node table is the
/// sorted set of endpoint labels of surviving records.
pub fn build_temporal_network(
    records: &[FlowRecord],
    options: &BuildOptions,
) -> Result<TemporalNetwork> {
    struct Accum {
        sum: f64,
        max: f64,
        count: u32,
    }

    let mut parsed: Vec<(Timestamp, &str, &str, f64)> = Vec::with_capacity(records.len());
    let mut first_kind: Option<Timestamp> = None;
    for (index, record) in records.iter().enumerate() {
        if !record.weight.is_finite() || record.weight < 0.0 {
            return Err(Error::NegativeWeight { index, weight: record.weight });
        }
        let ts = Timestamp::parse(&record.timestamp).ok_or_else(|| Error::InvalidTimestamp {
            index,
            value: record.timestamp.clone(),
        })?;
        match first_kind {
            None => first_kind = Some(ts),
            Some(first) if !first.same_kind(ts) => {
                return Err(Error::MixedTimestamps { index, value: record.timestamp.clone() })
            }
            _ => {}
        }
        if record.origin == record.destination {
            match options.self_loops {
                SelfLoopPolicy::Drop => continue,
                SelfLoopPolicy::Reject => {
                    return Err(Error::Config(format!(
                        "record {index}: self-loop on {:?}",
                        record.origin
                    )))
                }
            }
        }
        parsed.push((ts, &record.origin, &record.destination, record.weight));
    }
    if parsed.is_empty() {
        return Err(Error::EmptyNetwork);
    }

    // Canonical node table: sorted unique labels, so construction does not
    // depend on record order or origin/destination column orientation.
    let mut labels: Vec<String> = parsed
        .iter()
        .flat_map(|(_, o, d, _)| [o.to_string(), d.to_string()])
        .collect();
    labels.sort_unstable();
    labels.dedup();
    let index: HashMap<&str, u32> =
        labels.iter().enumerate().map(|(i, l)| (l.as_str(), i as u32)).collect();

    let mut timestamps: Vec<Timestamp> = parsed.iter().map(|(ts, ..)| *ts).collect();
    timestamps.sort_unstable();
    timestamps.dedup();
    let time_index: HashMap<Timestamp, usize> =
        timestamps.iter().enumerate().map(|(i, ts)| (*ts, i)).collect();

    let mut cells: HashMap<(usize, Pair), Accum> = HashMap::new();
    for (ts, origin, destination, weight) in &parsed {
        let pair = Pair::from_raw(index[*origin], index[*destination])
            .expect("self-loops filtered above");
        let entry = cells
            .entry((time_index[ts], pair))
            .or_insert(Accum { sum: 0.0, max: 0.0, count: 0 });
        entry.sum += weight;
        entry.max = entry.max.max(*weight);
        entry.count += 1;
    }

    let mut per_snapshot: Vec<Vec<(Pair, f64)>> = vec![Vec::new(); timestamps.len()];
    for ((t, pair), accum) in cells {
        let weight = match options.symmetrization {
            Symmetrization::Sum => accum.sum,
            Symmetrization::Max => accum.max,
            Symmetrization::Mean => accum.sum / accum.count as f64,
        };
        per_snapshot[t].push((pair, weight));
    }
    let snapshots = per_snapshot
        .into_iter()
        .map(|mut edges| {
            edges.sort_unstable_by_key(|(pair, _)| *pair);
            Snapshot::from_sorted_unchecked(edges)
        })
        .collect();

    TemporalNetwork::from_parts(labels, timestamps, snapshots)
}
