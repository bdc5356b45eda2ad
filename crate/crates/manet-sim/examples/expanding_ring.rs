//! Shows the expanding-ring search: a destination five hops down a chain
//! is out of reach for the first two request attempts, so successive
//! attempts carry growing lifespans (1, then 3, then 5) until one reaches
//! far enough.

use manet_sim::scenario::NodeSpec;
use manet_sim::trace::TraceKind;
use manet_sim::{ClusterMode, FlowSpec, NodeId, Scenario, SimDuration, SimTime, Simulation};

fn main() {
    let nodes: Vec<NodeSpec> = (0..6)
        .map(|i| NodeSpec {
            id: NodeId(i),
            x: i as f64 * 200.0,
            y: 0.0,
        })
        .collect();
    let scn = Scenario {
        name: "six-node-chain".into(),
        description: None,
        sim_end: SimTime::from_secs_f64(12.0),
        seed: 2,
        radio: Default::default(),
        aodv: Default::default(),
        cluster_mode: ClusterMode::Off,
        cluster_interval: SimDuration::from_secs_f64(2.0),
        distances: None,
        nodes,
        waypoints: vec![],
        flows: vec![FlowSpec {
            id: 1,
            src: NodeId(0),
            dst: NodeId(5),
            start: SimTime::from_secs_f64(5.0),
            stop: SimTime::from_secs_f64(5.1),
            interval: SimDuration::from_secs_f64(1.0),
            payload_bytes: 128,
        }],
    };

    let mut sim = Simulation::new(&scn).expect("valid scenario");
    sim.run_to_end();

    println!("discovery attempts from node 0 for node 5 (5 hops away):\n");
    for r in sim.trace().records() {
        if r.kind == TraceKind::Rreq && r.field("ev") == Some("tx") && r.node == NodeId(0) {
            println!(
                "  t={}  attempt id={}  lifespan ttl={}",
                r.time,
                r.field("id").unwrap(),
                r.field("ttl").unwrap()
            );
        }
        if r.kind == TraceKind::Rrep && r.field("ev") == Some("rx") && r.node == NodeId(0) {
            println!(
                "  t={}  reply arrived: {} hops toward node {}",
                r.time,
                r.field("hops").unwrap(),
                r.field("dst").unwrap()
            );
        }
        if r.kind == TraceKind::Recv {
            println!(
                "  t={}  packet delivered via [{}]",
                r.time,
                r.field("hops").unwrap()
            );
        }
    }

    let entry = sim
        .node(NodeId(0))
        .unwrap()
        .routing_table()
        .get(NodeId(5))
        .expect("route established");
    println!(
        "\nfinal route at node 0: via {} in {} hops",
        entry.next_hop, entry.hop_count
    );
}
