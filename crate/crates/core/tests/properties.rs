//! Property tests for the data model, randomizers, and metrics, plus
//! oracle checks against independent brute-force enumerations.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use richclub::metrics::{trc_numerator, ttrc_numerator, wtrc_numerator};
use richclub::null::{make_null, NullRecipe, NullStep};
use richclub::rng::RngStream;
use richclub::temporal::{
    build_temporal_network, BuildOptions, FlowRecord, Pair, RichSet, RichnessProperty,
    TemporalNetwork, ThresholdMode,
};

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// Raw edge events: (t, i, j, integer weight), nodes 0..n.
fn raw_events(
    max_nodes: usize,
    max_t: u64,
) -> impl Strategy<Value = (usize, Vec<(u64, usize, usize, u16)>)> {
    (2..=max_nodes).prop_flat_map(move |n| {
        let event = (1..=max_t, 0..n, 0..n, 1u16..50u16);
        (Just(n), proptest::collection::vec(event, 1..40))
    })
}

fn records_from_events(events: &[(u64, usize, usize, u16)]) -> Vec<FlowRecord> {
    events
        .iter()
        .map(|&(t, i, j, w)| FlowRecord {
            timestamp: t.to_string(),
            origin: format!("v{i:02}"),
            destination: format!("v{j:02}"),
            weight: w as f64,
        })
        .collect()
}

fn try_build(events: &[(u64, usize, usize, u16)]) -> Option<TemporalNetwork> {
    let records = records_from_events(events);
    build_temporal_network(&records, &BuildOptions::default()).ok()
}

fn rich_all(net: &TemporalNetwork) -> RichSet {
    RichSet::from_members(
        (0..net.node_count() as u32)
            .map(richclub::temporal::NodeId::new)
            .collect(),
        net.node_count(),
    )
}

// ---------------------------------------------------------------------------
// Independent oracles (brute force over pairs and windows, no library calls)
// ---------------------------------------------------------------------------

/// Per-snapshot edge maps extracted from raw events after self-loop dropping
/// and per-(t, pair) summation, mirroring the documented build contract.
fn oracle_edge_maps(events: &[(u64, usize, usize, u16)]) -> Vec<BTreeMap<(usize, usize), f64>> {
    let mut times: Vec<u64> = events.iter().filter(|e| e.1 != e.2).map(|e| e.0).collect();
    times.sort_unstable();
    times.dedup();
    let mut snapshots = vec![BTreeMap::new(); times.len()];
    for &(t, i, j, w) in events {
        if i == j {
            continue;
        }
        let slot = times.binary_search(&t).unwrap();
        let key = (i.min(j), i.max(j));
        *snapshots[slot].entry(key).or_insert(0.0) += w as f64;
    }
    snapshots
}

fn oracle_window_mean_connectedness(
    snapshots: &[BTreeMap<(usize, usize), f64>],
    start: usize,
    delta: usize,
) -> f64 {
    let mut sum = 0.0;
    for snap in &snapshots[start..start + delta] {
        sum += snap.values().sum::<f64>();
    }
    sum / delta as f64
}

// ---------------------------------------------------------------------------
// Data-model properties
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn build_is_column_swap_invariant((_, events) in raw_events(6, 4)) {
        let forward = records_from_events(&events);
        let swapped: Vec<FlowRecord> = forward
            .iter()
            .map(|r| FlowRecord {
                timestamp: r.timestamp.clone(),
                origin: r.destination.clone(),
                destination: r.origin.clone(),
                weight: r.weight,
            })
            .collect();
        let a = build_temporal_network(&forward, &BuildOptions::default());
        let b = build_temporal_network(&swapped, &BuildOptions::default());
        match (a, b) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "one orientation built, the other failed"),
        }
    }

    #[test]
    fn aggregate_matches_per_pair_oracle((n, events) in raw_events(5, 4)) {
        let Some(net) = try_build(&events) else { return Ok(()) };
        let oracle = oracle_edge_maps(&events);

        let label_of = |i: usize| format!("v{i:02}");
        let agg = net.aggregate();
        // w_ij equals each pair's independent timeline sum.
        for i in 0..n {
            for j in (i + 1)..n {
                let expected: f64 = oracle.iter().filter_map(|s| s.get(&(i, j))).sum();
                let actual = match (net.node(&label_of(i)), net.node(&label_of(j))) {
                    (Some(a), Some(b)) => {
                        Pair::new(a, b).and_then(|p| agg.graph().weight(p)).unwrap_or(0.0)
                    }
                    _ => 0.0,
                };
                prop_assert_eq!(actual, expected);
            }
        }
        // s_i equals the sum over pairs of presence counts.
        for i in 0..n {
            let Some(id) = net.node(&label_of(i)) else { continue };
            let expected: u64 = oracle
                .iter()
                .map(|s| s.keys().filter(|(a, b)| *a == i || *b == i).count() as u64)
                .sum();
            prop_assert_eq!(agg.strength()[id.index()], expected);
        }
    }

    #[test]
    fn rich_sets_are_monotone((_, events) in raw_events(6, 4)) {
        let Some(net) = try_build(&events) else { return Ok(()) };
        let richness = net.richness_vector(RichnessProperty::TemporalEdgeCount);
        let max = richness.values.iter().cloned().fold(0.0f64, f64::max);
        let thresholds: Vec<f64> = (0..=8).map(|i| max * i as f64 / 8.0).collect();
        for pair in thresholds.windows(2) {
            let lower = richness.rich_set(pair[0], ThresholdMode::Inclusive);
            let upper = richness.rich_set(pair[1], ThresholdMode::Inclusive);
            for &id in upper.members() {
                prop_assert!(lower.contains(id));
            }
        }
    }

    #[test]
    fn unweight_strength_equals_temporal_edge_count((_, events) in raw_events(6, 4)) {
        let Some(net) = try_build(&events) else { return Ok(()) };
        let unit = net.unweight();
        let richness = net.richness_vector(RichnessProperty::TemporalEdgeCount);
        let strengths = unit.aggregate();
        for (i, &value) in richness.values.iter().enumerate() {
            prop_assert_eq!(strengths.strength()[i] as f64, value);
        }
    }
}

// ---------------------------------------------------------------------------
// Randomizer preservation properties
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recipes_preserve_componentwise_structure(
        (_, events) in raw_events(6, 4),
        seed in 0u64..1000,
    ) {
        let Some(net) = try_build(&events) else { return Ok(()) };
        let n = net.node_count();
        let recipe = NullRecipe::new(vec![
            NullStep::edge_switch(),
            NullStep::weight_decorrelate(),
            NullStep::SequenceShuffle,
        ])
        .unwrap();
        let out = make_null(&net, &recipe, RngStream::new(seed)).unwrap();

        // Per-snapshot degree vectors and weight multisets survive as a
        // multiset over snapshots (sequence shuffling reorders them).
        let signature = |net: &TemporalNetwork| {
            let mut sig: Vec<(Vec<u32>, Vec<u64>)> = net
                .snapshots()
                .iter()
                .map(|s| {
                    let mut deg = s.degrees(n);
                    deg.sort_unstable();
                    let mut ws: Vec<u64> =
                        s.edges().iter().map(|(_, w)| w.to_bits()).collect();
                    ws.sort_unstable();
                    (deg, ws)
                })
                .collect();
            sig.sort();
            sig
        };
        prop_assert_eq!(signature(&out), signature(&net));

        // Temporal-edge-count richness is invariant under the whole recipe.
        prop_assert_eq!(
            out.richness_vector(RichnessProperty::TemporalEdgeCount).values,
            net.richness_vector(RichnessProperty::TemporalEdgeCount).values
        );
    }

    #[test]
    fn timestamp_shuffle_conserves_histograms(
        (_, events) in raw_events(6, 5),
        seed in 0u64..1000,
    ) {
        let Some(net) = try_build(&events) else { return Ok(()) };
        let unit = net.unweight();
        let total: usize = unit.snapshots().iter().map(|s| s.edge_count()).sum();
        let out =
            richclub::null::timestamp_shuffle(&unit, total * 10, false, RngStream::new(seed))
                .unwrap();
        let histograms = |net: &TemporalNetwork| {
            let mut per_pair: BTreeMap<Pair, usize> = BTreeMap::new();
            let mut per_t = Vec::new();
            for snap in net.snapshots() {
                per_t.push(snap.edge_count());
                for (pair, _) in snap.edges() {
                    *per_pair.entry(*pair).or_insert(0) += 1;
                }
            }
            (per_pair, per_t)
        };
        prop_assert_eq!(histograms(&out), histograms(&unit));
    }
}

// ---------------------------------------------------------------------------
// Metric properties and window oracles
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn wtrc_matches_window_oracle((_, events) in raw_events(6, 5)) {
        let Some(net) = try_build(&events) else { return Ok(()) };
        let oracle = oracle_edge_maps(&events);
        let rich = rich_all(&net);
        let t_len = net.snapshot_count();
        for delta in 1..=t_len {
            let stat = wtrc_numerator(&net, &rich, delta).unwrap().unwrap();
            let mut best = f64::NEG_INFINITY;
            let mut best_start = 0;
            for start in 0..=(t_len - delta) {
                let value = oracle_window_mean_connectedness(&oracle, start, delta);
                if value > best {
                    best = value;
                    best_start = start;
                }
            }
            prop_assert_eq!(stat.value, best);
            prop_assert_eq!(stat.start, best_start);
        }
    }

    #[test]
    fn trc_matches_stable_pair_oracle((_, events) in raw_events(6, 5)) {
        let Some(net) = try_build(&events) else { return Ok(()) };
        let oracle = oracle_edge_maps(&events);
        let rich = rich_all(&net);
        let n = net.node_count();
        let denom = n as f64 * (n - 1) as f64 / 2.0;
        let t_len = net.snapshot_count();
        for delta in 1..=t_len {
            let stat = trc_numerator(&net, &rich, delta).unwrap().unwrap();
            let mut best = f64::NEG_INFINITY;
            for start in 0..=(t_len - delta) {
                let mut stable = 0;
                let universe: BTreeSet<(usize, usize)> =
                    oracle[start].keys().copied().collect();
                for key in universe {
                    if oracle[start..start + delta].iter().all(|s| s.contains_key(&key)) {
                        stable += 1;
                    }
                }
                best = best.max(stable as f64 / denom);
            }
            prop_assert_eq!(stat.value, best);
        }
    }

    #[test]
    fn ttrc_is_wtrc_of_unweighted((_, events) in raw_events(6, 5)) {
        let Some(net) = try_build(&events) else { return Ok(()) };
        let rich = rich_all(&net);
        for delta in 1..=net.snapshot_count() {
            prop_assert_eq!(
                ttrc_numerator(&net, &rich, delta).unwrap(),
                wtrc_numerator(&net.unweight(), &rich, delta).unwrap()
            );
        }
    }

    #[test]
    fn wtrc_scales_with_weights(
        (_, events) in raw_events(6, 4),
        scale_pick in 0usize..3,
    ) {
        let scale = [2.0, 0.5, 10.0][scale_pick];
        let Some(net) = try_build(&events) else { return Ok(()) };
        let scaled_records: Vec<FlowRecord> = records_from_events(&events)
            .into_iter()
            .map(|mut r| {
                r.weight *= scale;
                r
            })
            .collect();
        let scaled = build_temporal_network(&scaled_records, &BuildOptions::default()).unwrap();
        let rich = rich_all(&net);
        for delta in 1..=net.snapshot_count() {
            let base = wtrc_numerator(&net, &rich, delta).unwrap().unwrap();
            let big = wtrc_numerator(&scaled, &rich, delta).unwrap().unwrap();
            prop_assert_eq!(big.start, base.start);
            let expected = base.value * scale;
            prop_assert!(
                (big.value - expected).abs() <= 1e-12 * expected.abs().max(1e-300),
                "{} vs {}", big.value, expected
            );
        }
    }

    #[test]
    fn wtrc_full_window_equals_aggregate_over_t((_, events) in raw_events(6, 5)) {
        let Some(net) = try_build(&events) else { return Ok(()) };
        let rich = rich_all(&net);
        let t = net.snapshot_count();
        let stat = wtrc_numerator(&net, &rich, t).unwrap().unwrap();
        let agg = richclub::metrics::weighted_connectedness(net.aggregate().graph(), &rich);
        prop_assert!((stat.value - agg / t as f64).abs() <= 1e-12 * agg.abs().max(1.0));
        prop_assert_eq!(stat.start, 0);
    }

    #[test]
    fn window_max_is_dominated_by_delta_one((_, events) in raw_events(6, 5)) {
        let Some(net) = try_build(&events) else { return Ok(()) };
        let rich = rich_all(&net);
        let at_one = wtrc_numerator(&net, &rich, 1).unwrap().unwrap().value;
        for delta in 2..=net.snapshot_count() {
            let v = wtrc_numerator(&net, &rich, delta).unwrap().unwrap().value;
            prop_assert!(v <= at_one + 1e-12 * at_one.abs());
        }
    }
}

// ---------------------------------------------------------------------------
// Scale equivariance of the normalized coefficient
// ---------------------------------------------------------------------------

#[test]
fn normalized_coefficient_is_scale_invariant() {
    let events: Vec<(u64, usize, usize, u16)> = vec![
        (1, 0, 1, 3),
        (1, 1, 2, 4),
        (1, 0, 3, 2),
        (2, 0, 1, 7),
        (2, 2, 3, 1),
        (3, 0, 1, 2),
        (3, 1, 2, 9),
        (4, 0, 2, 5),
    ];
    let net = try_build(&events).unwrap();
    let scaled_records: Vec<FlowRecord> = records_from_events(&events)
        .into_iter()
        .map(|mut r| {
            r.weight *= 4.0;
            r
        })
        .collect();
    let scaled = build_temporal_network(&scaled_records, &BuildOptions::default()).unwrap();
    let rich = rich_all(&net);
    let recipe =
        NullRecipe::new(vec![NullStep::weight_decorrelate(), NullStep::SequenceShuffle]).unwrap();

    for delta in 1..=2usize {
        let observed = wtrc_numerator(&net, &rich, delta).unwrap().unwrap();
        let observed_scaled = wtrc_numerator(&scaled, &rich, delta).unwrap().unwrap();
        assert_eq!(observed_scaled.start, observed.start);

        let nulls: Vec<f64> = (0..8)
            .map(|j| {
                let null = make_null(&net, &recipe, RngStream::new(7).substream(j)).unwrap();
                wtrc_numerator(&null, &rich, delta).unwrap().unwrap().value
            })
            .collect();
        let nulls_scaled: Vec<f64> = (0..8)
            .map(|j| {
                let null = make_null(&scaled, &recipe, RngStream::new(7).substream(j)).unwrap();
                wtrc_numerator(&null, &rich, delta).unwrap().unwrap().value
            })
            .collect();
        let a = richclub::metrics::normalize(observed.value, &nulls).unwrap();
        let b = richclub::metrics::normalize(observed_scaled.value, &nulls_scaled).unwrap();
        let ca = a.coefficient.unwrap();
        let cb = b.coefficient.unwrap();
        assert!((ca - cb).abs() <= 1e-12 * ca.abs(), "{ca} vs {cb}");
        assert_eq!(a.p_two_tailed, b.p_two_tailed);
    }
}

// ---------------------------------------------------------------------------
// Scan determinism across thread counts
// ---------------------------------------------------------------------------

#[test]
fn scan_is_identical_across_thread_counts() {
    let spec = richclub::synth::PlantedSpec {
        nodes: 18,
        snapshots: 10,
        club_size: 4,
        club_weight_scale: 6.0,
        club_window: (2, 7),
        background_density: 0.5,
        background_weight_law: richclub::synth::WeightLaw::default(),
        seed: 21,
    };
    let (net, _) = richclub::synth::generate_planted(&spec).unwrap();
    let mut config = richclub::scan::ScanConfig::new(richclub::scan::Metric::Wtrc);
    config.seed = 4;
    config.null_count = 4;
    config.k_count = 4;
    config.delta_count = 3;

    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| richclub::scan::scan(&net, &config).unwrap())
    };
    let single = run(1);
    let multi = run(3);
    assert_eq!(single.cells, multi.cells);
    assert_eq!(single.argmax, multi.argmax);
    assert_eq!(single.membership, multi.membership);
}
