//! Runs the bundled five-node replication scenario end to end and prints
//! the milestone events (cluster formation, first discovery, link break,
//! drops, relayed delivery) followed by the metrics report.

use manet_sim::trace::TraceKind;
use manet_sim::{compute_metrics, scenario, NodeId, Simulation};

fn main() {
    let scn = scenario::paper_5node();
    println!(
        "scenario `{}`, seed {}, {} nodes",
        scn.name,
        scn.seed,
        scn.nodes.len()
    );

    let mut sim = Simulation::new(&scn).expect("bundled scenario is valid");
    sim.run_to_end();
    let records = sim.trace().records();

    let formed = records
        .iter()
        .find(|r| r.kind == TraceKind::Clst && r.field("event") == Some("formed"));
    let first_rreq = records
        .iter()
        .find(|r| r.kind == TraceKind::Rreq && r.field("ev") == Some("tx"));
    let link_break = records
        .iter()
        .find(|r| r.kind == TraceKind::Rtbl && r.field("op") == Some("invalidate"));
    let first_drop = records
        .iter()
        .find(|r| r.kind == TraceKind::Drop && r.field("cause").is_some());
    let relay = records.iter().find(|r| {
        r.kind == TraceKind::Recv && r.field("hops") == Some("4,0") && r.field("flow") == Some("1")
    });

    println!("\nmilestones:");
    for (label, record) in [
        ("cluster formed", formed),
        ("first route request", first_rreq),
        ("first route invalidation", link_break),
        ("first packet drop", first_drop),
        ("first delivery relayed via node 0", relay),
    ] {
        match record {
            Some(r) => println!("  {:>9}s  {label}", r.time.to_string()),
            None => println!("      never  {label}"),
        }
    }

    let node1_route = sim
        .node(NodeId(4))
        .and_then(|n| n.routing_table().get(NodeId(1)));
    if let Some(entry) = node1_route {
        println!(
            "\nnode 4's route to node 1 at the end: via {} in {} hops (seq {})",
            entry.next_hop, entry.hop_count, entry.dest_seq
        );
    }

    println!("\nmetrics:\n{}", compute_metrics(records).to_text());
}
