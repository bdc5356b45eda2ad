//! Shared helpers for the integration suites: seeded scenario generators,
//! an independent BFS oracle over unit-disk graphs, and trace milestone
//! extraction.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use manet_sim::mobility::{WaypointLeg, WaypointScript};
use manet_sim::scenario::NodeSpec;
use manet_sim::trace::{TraceKind, TraceRecord};
use manet_sim::{ClusterMode, FlowSpec, NodeId, Position, Scenario, SimDuration, SimTime};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Unit-disk adjacency computed directly from coordinates; this is the
/// oracle-side graph, independent of the simulator's neighbor logic.
pub fn unit_disk_graph(
    positions: &[(NodeId, Position)],
    range: f64,
) -> BTreeMap<NodeId, BTreeSet<NodeId>> {
    let mut graph: BTreeMap<NodeId, BTreeSet<NodeId>> = positions
        .iter()
        .map(|&(id, _)| (id, BTreeSet::new()))
        .collect();
    for (i, &(a, pa)) in positions.iter().enumerate() {
        for &(b, pb) in &positions[i + 1..] {
            if pa.distance_to(&pb) <= range {
                graph.get_mut(&a).unwrap().insert(b);
                graph.get_mut(&b).unwrap().insert(a);
            }
        }
    }
    graph
}

/// Breadth-first hop counts from `src`; unreachable nodes are absent.
pub fn bfs_distances(
    graph: &BTreeMap<NodeId, BTreeSet<NodeId>>,
    src: NodeId,
) -> BTreeMap<NodeId, u32> {
    let mut dist = BTreeMap::new();
    dist.insert(src, 0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        for &v in &graph[&u] {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(v) {
                e.insert(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn is_connected(graph: &BTreeMap<NodeId, BTreeSet<NodeId>>) -> bool {
    let Some((&first, _)) = graph.iter().next() else {
        return true;
    };
    bfs_distances(graph, first).len() == graph.len()
}

/// A random static scenario whose unit-disk graph is connected, plus the
/// flow endpoints (a maximally distant pair) and their BFS hop count.
pub fn static_connected_scenario(seed: u64) -> (Scenario, NodeId, NodeId, u32) {
    let mut r = rng(seed);
    let range = 250.0;
    loop {
        let n: u16 = r.random_range(4..=20);
        let side = 170.0 * (n as f64).sqrt();
        let positions: Vec<(NodeId, Position)> = (0..n)
            .map(|i| {
                (
                    NodeId(i),
                    Position::new(r.random_range(0.0..side), r.random_range(0.0..side)),
                )
            })
            .collect();
        let graph = unit_disk_graph(&positions, range);
        if !is_connected(&graph) {
            continue;
        }
        // Deterministically pick a maximally distant pair.
        let mut best = (NodeId(0), NodeId(0), 0u32);
        for &(src, _) in &positions {
            for (&dst, &d) in bfs_distances(&graph, src).iter() {
                if d > best.2 {
                    best = (src, dst, d);
                }
            }
        }
        let (src, dst, hops) = best;
        if hops == 0 {
            continue; // single node; resample
        }
        // Enough retries to let the ring expand to the full diameter.
        let aodv = manet_sim::AodvConfig {
            rreq_retries: 5,
            ..Default::default()
        };
        let scenario = Scenario {
            name: format!("static-{seed}"),
            description: None,
            sim_end: SimTime::from_secs_f64(12.0),
            seed,
            radio: manet_sim::RadioParams {
                range_m: range,
                ..Default::default()
            },
            aodv,
            cluster_mode: ClusterMode::Off,
            cluster_interval: SimDuration::from_secs_f64(2.0),
            distances: None,
            nodes: positions
                .iter()
                .map(|&(id, p)| NodeSpec { id, x: p.x, y: p.y })
                .collect(),
            waypoints: vec![],
            flows: vec![FlowSpec {
                id: 1,
                src,
                dst,
                start: SimTime::from_secs_f64(3.0),
                stop: SimTime::from_secs_f64(3.1),
                interval: SimDuration::from_secs_f64(1.0),
                payload_bytes: 256,
            }],
        };
        return (scenario, src, dst, hops);
    }
}

/// A random mobile scenario: waypoint legs per node, a few flows, sixty
/// simulated seconds.
pub fn mobile_scenario(seed: u64) -> Scenario {
    let mut r = rng(seed.wrapping_add(0x6d6f62));
    let n: u16 = r.random_range(5..=20);
    let side = 800.0;
    let nodes: Vec<NodeSpec> = (0..n)
        .map(|i| NodeSpec {
            id: NodeId(i),
            x: r.random_range(0.0..side),
            y: r.random_range(0.0..side),
        })
        .collect();
    let mut waypoints = Vec::new();
    for node in &nodes {
        let legs_count = r.random_range(0..=3);
        if legs_count == 0 {
            continue;
        }
        let mut departs: Vec<f64> = (0..legs_count).map(|_| r.random_range(1.0..50.0)).collect();
        departs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let legs: Vec<WaypointLeg> = departs
            .iter()
            .enumerate()
            .map(|(k, &d)| WaypointLeg {
                // Spacing guarantees strictly increasing departures.
                depart_at: SimTime::from_secs_f64(d + k as f64 * 0.001),
                x: r.random_range(0.0..side),
                y: r.random_range(0.0..side),
                speed: r.random_range(1.0..20.0),
            })
            .collect();
        waypoints.push(WaypointScript {
            node: node.id,
            legs,
        });
    }
    let flow_count = r.random_range(2..=3);
    let mut flows = Vec::new();
    for id in 1..=flow_count {
        let src = NodeId(r.random_range(0..n));
        let dst = loop {
            let d = NodeId(r.random_range(0..n));
            if d != src {
                break d;
            }
        };
        let start = r.random_range(1.0..10.0);
        let stop = r.random_range(start + 10.0..58.0);
        let interval_ms: u64 = r.random_range(250..=1000);
        flows.push(FlowSpec {
            id,
            src,
            dst,
            start: SimTime::from_secs_f64(start),
            stop: SimTime::from_secs_f64(stop),
            interval: SimDuration::from_micros(interval_ms * 1000),
            payload_bytes: 256,
        });
    }
    Scenario {
        name: format!("mobile-{seed}"),
        description: None,
        sim_end: SimTime::from_secs_f64(60.0),
        seed,
        radio: Default::default(),
        aodv: Default::default(),
        cluster_mode: ClusterMode::Overlay,
        cluster_interval: SimDuration::from_secs_f64(2.0),
        distances: None,
        nodes,
        waypoints,
        flows,
    }
}

/// Straight chain of `n` nodes spaced `spacing` meters apart on the x axis.
pub fn chain_scenario(n: u16, spacing: f64, flows: Vec<FlowSpec>, sim_end: f64) -> Scenario {
    Scenario {
        name: format!("chain-{n}"),
        description: None,
        sim_end: SimTime::from_secs_f64(sim_end),
        seed: 1,
        radio: Default::default(),
        aodv: Default::default(),
        cluster_mode: ClusterMode::Off,
        cluster_interval: SimDuration::from_secs_f64(2.0),
        distances: None,
        nodes: (0..n)
            .map(|i| NodeSpec {
                id: NodeId(i),
                x: i as f64 * spacing,
                y: 0.0,
            })
            .collect(),
        waypoints: vec![],
        flows,
    }
}

// ----- trace queries -------------------------------------------------------

pub fn first_time(
    records: &[TraceRecord],
    mut pred: impl FnMut(&TraceRecord) -> bool,
) -> Option<&TraceRecord> {
    records.iter().find(|r| pred(r))
}

pub fn is_data_drop(r: &TraceRecord) -> bool {
    r.kind == TraceKind::Drop && r.field("flow").is_some()
}

pub fn drop_cause(r: &TraceRecord) -> Option<&str> {
    r.field("cause")
}

/// Parses a `hops=4,0` style field into node ids.
pub fn hop_list(r: &TraceRecord) -> Vec<NodeId> {
    r.field("hops")
        .map(|s| {
            s.split(',')
                .filter(|p| !p.is_empty())
                .map(|p| p.parse().expect("hop list holds node ids"))
                .collect()
        })
        .unwrap_or_default()
}

pub fn has_repeats(hops: &[NodeId]) -> bool {
    let set: BTreeSet<&NodeId> = hops.iter().collect();
    set.len() != hops.len()
}
