//! Rich-club analysis for weighted temporal networks.
//!
//! Quantifies how strongly and how consistently high-richness nodes
//! interconnect in an undirected, weighted, time-varying network. Four
//! coefficient families are covered:
//!
//! * static topological and weighted rich clubs on the time-aggregated graph;
//! * the stable-edge temporal rich club (window cohesion);
//! * the topological temporal rich club (TTRC);
//! * the weighted temporal rich club (WTRC): the maximum over window starts
//!   of the window-mean weighted connectedness of the rich sub-network,
//!   normalized by the same statistic on randomized null models.
//!
//! Null models compose edge switching, weight decorrelation, sequence
//! shuffling, and timestamp shuffling ([`null`]); scans sweep a grid of
//! richness thresholds and window durations with empirical significance
//! testing ([`scan`]); planted-club generators validate recovery end to end
//! ([`synth`]); flow CSV ingestion and export live in [`io`].
//!
//! All randomness flows through seeded [`rng::RngStream`]s, so every result
//! is reproducible bit-for-bit regardless of thread count.

pub mod error;
pub mod io;
pub mod metrics;
pub mod null;
pub mod rng;
pub mod scan;
pub mod synth;
pub mod temporal;

pub use error::{Error, Result};
pub use metrics::{
    avg_weighted_connectedness, connectedness_series, delta_cohesion, normalize, topo_rc,
    trc_numerator, ttrc_numerator, weighted_connectedness, wtrc_numerator, NormalizedCoefficient,
    WindowStat,
};
pub use null::{make_null, NullRecipe, NullStep};
pub use rng::RngStream;
pub use scan::{
    coefficient_timeseries, delta_grid, flow_sum_timeseries, minmax_regression, richness_grid,
    scan, LinearFit, Metric, ScanConfig, ScanResult,
};
pub use synth::{evaluate_recovery, generate_planted, GroundTruth, PlantedSpec, WeightLaw};
pub use temporal::{
    build_temporal_network, AggregateGraph, BuildOptions, FlowRecord, NodeId, Pair, RichSet,
    RichnessProperty, RichnessVector, SelfLoopPolicy, Snapshot, Symmetrization, TemporalNetwork,
    ThresholdMode, Timestamp,
};
