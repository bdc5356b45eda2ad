//! Run-level protocol invariants, checked over whole traces: sequence
//! monotonicity, route-table soundness on static topologies, flood
//! suppression, reply/request correspondence, the latency floor, and the
//! cluster-backbone constraint in forwarding mode.

mod common;

use std::collections::BTreeMap;

use common::*;
use manet_sim::clustering::{cluster_route, elect_clusters, identify_gateways};
use manet_sim::scenario::NodeSpec;
use manet_sim::trace::TraceKind;
use manet_sim::{
    compute_metrics, scenario, ClusterMode, FlowSpec, NodeId, Scenario, SimDuration, SimTime,
    Simulation,
};

fn run(s: &Scenario) -> Simulation {
    let mut sim = Simulation::new(s).expect("scenario valid");
    sim.run_to_end();
    sim
}

fn wrap_newer(a: u32, b: u32) -> bool {
    a.wrapping_sub(b) as i32 > 0
}

/// A node's own sequence number, as observed in everything it transmits,
/// never moves backward under wrap-aware comparison.
#[test]
fn own_sequence_numbers_never_decrease() {
    for seed in [3, 17, 29, 31, 52] {
        let sim = run(&mobile_scenario(seed));
        let mut last_seen: BTreeMap<NodeId, u32> = BTreeMap::new();
        for r in sim.trace().records() {
            let own: Option<u32> = match r.kind {
                TraceKind::Hello if r.field("ev") == Some("tx") => {
                    r.field("seq").and_then(|v| v.parse().ok())
                }
                TraceKind::Rreq
                    if r.field("ev") == Some("tx")
                        && r.field("orig") == Some(&r.node.to_string()) =>
                {
                    r.field("oseq").and_then(|v| v.parse().ok())
                }
                _ => None,
            };
            if let Some(seq) = own {
                if let Some(&prev) = last_seen.get(&r.node) {
                    assert!(
                        !wrap_newer(prev, seq),
                        "seed {seed}: node {} went from seq {prev} back to {seq}",
                        r.node
                    );
                }
                last_seen.insert(r.node, seq);
            }
        }
    }
}

/// In a static scenario every valid route entry points at a next hop that
/// is actually within radio range.
#[test]
fn valid_routes_in_static_runs_have_live_links() {
    let mut checked = 0usize;
    for seed in [0, 7, 21] {
        let (scn, _, _, _) = static_connected_scenario(seed);
        let graph = unit_disk_graph(&scn.node_positions(), scn.radio.range_m);
        let sim = run(&scn);
        for id in scn.node_ids() {
            let node = sim.node(id).unwrap();
            for entry in node.routing_table().entries() {
                if entry.is_valid() {
                    assert!(
                        graph[&id].contains(&entry.next_hop),
                        "seed {seed}: node {id} holds a valid route via unreachable {}",
                        entry.next_hop
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 0, "some valid routes were inspected");
}

/// Duplicate suppression: for any (originator, request id), each node
/// transmits that flood at most once.
#[test]
fn rreq_rebroadcast_at_most_once_per_id() {
    for scn in [
        scenario::paper_5node(),
        mobile_scenario(11),
        mobile_scenario(77),
    ] {
        let sim = run(&scn);
        let mut counts: BTreeMap<(String, String, NodeId), u32> = BTreeMap::new();
        for r in sim.trace().records() {
            if r.kind == TraceKind::Rreq && r.field("ev") == Some("tx") {
                let key = (
                    r.field("orig").unwrap().to_string(),
                    r.field("id").unwrap().to_string(),
                    r.node,
                );
                *counts.entry(key).or_insert(0) += 1;
            }
        }
        for ((orig, id, node), count) in counts {
            assert!(
                count <= 1,
                "{}: node {node} transmitted request ({orig},{id}) {count} times",
                scn.name
            );
        }
    }
}

/// No orphan replies in static connected runs: every reply transmission
/// names a discovery that some earlier request transmission opened.
#[test]
fn every_rrep_answers_a_prior_rreq_in_static_runs() {
    for seed in [2, 13] {
        let (scn, _, _, _) = static_connected_scenario(seed);
        let sim = run(&scn);
        let mut seen_requests: Vec<(String, String)> = Vec::new();
        for r in sim.trace().records() {
            match r.kind {
                TraceKind::Rreq if r.field("ev") == Some("tx") => {
                    seen_requests.push((
                        r.field("orig").unwrap().to_string(),
                        r.field("dst").unwrap().to_string(),
                    ));
                }
                TraceKind::Rrep if r.field("ev") == Some("tx") => {
                    let key = (
                        r.field("orig").unwrap().to_string(),
                        r.field("dst").unwrap().to_string(),
                    );
                    assert!(
                        seen_requests.contains(&key),
                        "seed {seed}: reply for {key:?} without a prior request"
                    );
                }
                _ => {}
            }
        }
    }
}

/// Every delivered packet took at least per-hop latency times its hop
/// count to arrive.
#[test]
fn delivery_latency_at_least_per_hop_floor() {
    for scn in [scenario::static_grid(), scenario::paper_5node()] {
        let sim = run(&scn);
        let per_hop = scn.radio.per_hop_latency.as_secs_f64();
        let mut sent_at: BTreeMap<(String, String), SimTime> = BTreeMap::new();
        let mut deliveries = 0u32;
        for r in sim.trace().records() {
            let key = || {
                (
                    r.field("flow").unwrap().to_string(),
                    r.field("seq").unwrap().to_string(),
                )
            };
            match r.kind {
                TraceKind::Send => {
                    sent_at.insert(key(), r.time);
                }
                TraceKind::Recv => {
                    let hops = hop_list(r).len();
                    let latency = r.time.since(sent_at[&key()]).as_secs_f64();
                    assert!(
                        latency + 1e-9 >= per_hop * hops as f64,
                        "{}: latency {latency} under the floor for {hops} hops",
                        scn.name
                    );
                    deliveries += 1;
                }
                _ => {}
            }
        }
        assert!(deliveries > 0);
    }
}

/// Two clusters joined by a dedicated gateway: the relay pattern is
/// head -> gateway -> head, members stay silent as relays, and the
/// delivered hop trace matches the cluster-route computation.
#[test]
fn forwarding_mode_routes_along_the_cluster_backbone() {
    // 2 -- 0 -- 4 -- 1 -- 3 geometrically, with 5 hanging off node 0.
    let nodes = vec![
        NodeSpec {
            id: NodeId(0),
            x: 0.0,
            y: 0.0,
        },
        NodeSpec {
            id: NodeId(1),
            x: 400.0,
            y: 0.0,
        },
        NodeSpec {
            id: NodeId(2),
            x: 0.0,
            y: 160.0,
        },
        NodeSpec {
            id: NodeId(3),
            x: 400.0,
            y: 160.0,
        },
        NodeSpec {
            id: NodeId(4),
            x: 200.0,
            y: 0.0,
        },
        NodeSpec {
            id: NodeId(5),
            x: 0.0,
            y: -160.0,
        },
    ];
    let flow = FlowSpec {
        id: 1,
        src: NodeId(2),
        dst: NodeId(3),
        start: SimTime::from_secs_f64(5.0),
        stop: SimTime::from_secs_f64(10.0),
        interval: SimDuration::from_secs_f64(0.5),
        payload_bytes: 128,
    };
    let base = Scenario {
        name: "two-clusters".into(),
        description: None,
        sim_end: SimTime::from_secs_f64(12.0),
        seed: 5,
        radio: Default::default(),
        aodv: Default::default(),
        cluster_mode: ClusterMode::Forwarding,
        cluster_interval: SimDuration::from_secs_f64(2.0),
        distances: None,
        nodes,
        waypoints: vec![],
        flows: vec![flow],
    };

    let sim = run(&base);
    let m = compute_metrics(sim.trace().records());
    assert!(
        m.delivered > 0,
        "forwarding mode delivers across the gateway"
    );
    for r in sim.trace().records() {
        if r.kind == TraceKind::Recv {
            assert_eq!(
                hop_list(r),
                vec![NodeId(2), NodeId(0), NodeId(4), NodeId(1)],
                "relays follow head -> gateway -> head"
            );
        }
        // Members never rebroadcast floods in forwarding mode.
        if r.kind == TraceKind::Rreq && r.field("ev") == Some("tx") {
            assert_ne!(r.node, NodeId(5), "member 5 must stay silent");
            assert_ne!(r.node, NodeId(3), "member 3 must stay silent");
        }
    }

    // The same relay sequence falls out of the standalone route computation.
    let graph = unit_disk_graph(&base.node_positions(), base.radio.range_m);
    let mut view = elect_clusters(&graph, &Default::default());
    identify_gateways(&mut view, &graph);
    let path = cluster_route(NodeId(2), NodeId(3), &view, &graph).expect("path exists");
    assert_eq!(
        path,
        vec![NodeId(2), NodeId(0), NodeId(4), NodeId(1), NodeId(3)]
    );

    // Overlay mode on the same scenario delivers along the same (only)
    // physical path; the constraint changes nothing here.
    let mut overlay = base.clone();
    overlay.cluster_mode = ClusterMode::Overlay;
    let m2 = compute_metrics(run(&overlay).trace().records());
    assert_eq!(m2.delivered, m.delivered);
}

/// Disjoint clusters bridged by two adjacent gateways: the alternation
/// constraint forbids gateway-to-gateway relaying, so forwarding mode
/// reports the destination unreachable while overlay mode routes freely.
/// The live simulator and the standalone route computation must agree.
#[test]
fn forwarding_mode_respects_role_alternation() {
    let nodes = vec![
        NodeSpec {
            id: NodeId(0),
            x: 0.0,
            y: 0.0,
        },
        NodeSpec {
            id: NodeId(1),
            x: 0.0,
            y: 680.0,
        },
        NodeSpec {
            id: NodeId(2),
            x: 0.0,
            y: 200.0,
        },
        NodeSpec {
            id: NodeId(3),
            x: 0.0,
            y: 440.0,
        },
    ];
    let flow = FlowSpec {
        id: 1,
        src: NodeId(0),
        dst: NodeId(1),
        start: SimTime::from_secs_f64(5.0),
        stop: SimTime::from_secs_f64(10.0),
        interval: SimDuration::from_secs_f64(1.0),
        payload_bytes: 128,
    };
    let base = Scenario {
        name: "gateway-bridge".into(),
        description: None,
        sim_end: SimTime::from_secs_f64(20.0),
        seed: 3,
        radio: Default::default(),
        aodv: Default::default(),
        cluster_mode: ClusterMode::Forwarding,
        cluster_interval: SimDuration::from_secs_f64(2.0),
        distances: None,
        nodes,
        waypoints: vec![],
        flows: vec![flow],
    };

    let graph = unit_disk_graph(&base.node_positions(), base.radio.range_m);
    let mut view = elect_clusters(&graph, &Default::default());
    identify_gateways(&mut view, &graph);
    assert_eq!(cluster_route(NodeId(0), NodeId(1), &view, &graph), None);

    let forwarding = compute_metrics(run(&base).trace().records());
    assert_eq!(forwarding.delivered, 0, "no backbone path exists");
    assert!(
        forwarding.drops.no_route > 0,
        "discoveries exhaust their retries"
    );

    let mut overlay = base.clone();
    overlay.cluster_mode = ClusterMode::Overlay;
    let sim = run(&overlay);
    let m = compute_metrics(sim.trace().records());
    assert!(m.delivered > 0, "overlay mode routes through the members");
    for r in sim.trace().records() {
        if r.kind == TraceKind::Recv {
            assert_eq!(hop_list(r), vec![NodeId(0), NodeId(2), NodeId(3)]);
        }
    }
}

/// Fifty-plus frames pushed into one outbound queue in a single instant
/// overflow it, and the drop is attributed to the queue.
#[test]
fn queue_overflow_surfaces_in_the_trace() {
    // One source, fifty-plus packets in a burst: interval far below the
    // per-hop latency keeps transmissions in flight simultaneously.
    let nodes = vec![
        NodeSpec {
            id: NodeId(0),
            x: 0.0,
            y: 0.0,
        },
        NodeSpec {
            id: NodeId(1),
            x: 100.0,
            y: 0.0,
        },
    ];
    let flow = FlowSpec {
        id: 1,
        src: NodeId(0),
        dst: NodeId(1),
        start: SimTime::from_secs_f64(5.0),
        stop: SimTime::from_secs_f64(5.006),
        interval: SimDuration::from_micros(100), // 60 packets inside 6 ms
        payload_bytes: 64,
    };
    let scn = Scenario {
        name: "burst".into(),
        description: None,
        sim_end: SimTime::from_secs_f64(8.0),
        seed: 1,
        radio: Default::default(),
        aodv: Default::default(),
        cluster_mode: ClusterMode::Off,
        cluster_interval: SimDuration::from_secs_f64(2.0),
        distances: None,
        nodes,
        waypoints: vec![],
        flows: vec![flow],
    };
    let sim = run(&scn);
    let m = compute_metrics(sim.trace().records());
    assert_eq!(m.sent, 60);
    assert!(
        m.drops.queue_overflow > 0,
        "drop-tail queue overflows under the burst"
    );
    assert!(m.conserves_packets());
}
