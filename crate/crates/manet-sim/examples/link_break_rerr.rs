//! A four-node chain with an active flow loses its last link when the
//! destination drives away. Watch the failure detection, the route-error
//! chain running back to the source, and the rediscovery that asks for a
//! fresher destination sequence number.

use manet_sim::mobility::{WaypointLeg, WaypointScript};
use manet_sim::scenario::NodeSpec;
use manet_sim::trace::TraceKind;
use manet_sim::{ClusterMode, FlowSpec, NodeId, Scenario, SimDuration, SimTime, Simulation};

fn main() {
    let nodes: Vec<NodeSpec> = (0..4)
        .map(|i| NodeSpec {
            id: NodeId(i),
            x: i as f64 * 200.0,
            y: 0.0,
        })
        .collect();
    let scn = Scenario {
        name: "breaking-chain".into(),
        description: None,
        sim_end: SimTime::from_secs_f64(16.0),
        seed: 4,
        radio: Default::default(),
        aodv: Default::default(),
        cluster_mode: ClusterMode::Off,
        cluster_interval: SimDuration::from_secs_f64(2.0),
        distances: None,
        nodes,
        waypoints: vec![WaypointScript {
            node: NodeId(3),
            legs: vec![WaypointLeg {
                depart_at: SimTime::from_secs_f64(8.0),
                x: 1200.0,
                y: 0.0,
                speed: 20.0,
            }],
        }],
        flows: vec![FlowSpec {
            id: 1,
            src: NodeId(0),
            dst: NodeId(3),
            start: SimTime::from_secs_f64(3.0),
            stop: SimTime::from_secs_f64(14.0),
            interval: SimDuration::from_secs_f64(0.25),
            payload_bytes: 128,
        }],
    };

    let mut sim = Simulation::new(&scn).expect("valid scenario");
    sim.run_to_end();

    println!("maintenance events after node 3 departs at t=8:\n");
    for r in sim.trace().records() {
        let line = match r.kind {
            TraceKind::Rerr => format!(
                "node {} {} route error: destinations {}",
                r.node,
                if r.field("ev") == Some("tx") {
                    "sends"
                } else {
                    "hears"
                },
                r.field("unreachable").unwrap_or("?")
            ),
            TraceKind::Rtbl if r.field("op") == Some("invalidate") => format!(
                "node {} marks its route to {} invalid (seq bumped to {})",
                r.node,
                r.field("dst").unwrap_or("?"),
                r.field("seq").unwrap_or("?")
            ),
            TraceKind::Drop if r.field("cause").is_some() => format!(
                "node {} drops flow {} packet {}: {}",
                r.node,
                r.field("flow").unwrap_or("?"),
                r.field("seq").unwrap_or("?"),
                r.field("cause").unwrap()
            ),
            TraceKind::Rreq if r.field("ev") == Some("tx") && r.node == NodeId(0) => format!(
                "node 0 (re)discovers node {} asking for seq {}",
                r.field("dst").unwrap_or("?"),
                r.field("dseq").unwrap_or("?")
            ),
            _ => continue,
        };
        println!("  t={}  {line}", r.time);
    }
}
