//! Cluster structure on its own, without a simulation: lowest-ID head
//! election, gateway identification (including the disjoint-cluster
//! bridge rule), and backbone-constrained routes.

use std::collections::{BTreeMap, BTreeSet};

use manet_sim::clustering::{cluster_route, elect_clusters, identify_gateways, NeighborGraph};
use manet_sim::NodeId;

fn graph(edges: &[(u16, u16)], n: u16) -> NeighborGraph {
    let mut g: NeighborGraph = (0..n).map(|v| (NodeId(v), BTreeSet::new())).collect();
    for &(a, b) in edges {
        g.get_mut(&NodeId(a)).unwrap().insert(NodeId(b));
        g.get_mut(&NodeId(b)).unwrap().insert(NodeId(a));
    }
    g
}

fn show(title: &str, g: &NeighborGraph) {
    let mut view = elect_clusters(g, &BTreeSet::new());
    identify_gateways(&mut view, g);
    println!("{title}");
    for (node, role) in &view.roles {
        println!("  node {node}: {role}");
    }
    println!();
}

fn main() {
    // One dense cluster: the lowest ID heads it.
    show(
        "fully meshed five nodes:",
        &graph(
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (1, 2),
                (2, 3),
                (3, 4),
                (1, 4),
            ],
            5,
        ),
    );

    // A member wedged between two heads becomes a gateway.
    let g = graph(&[(0, 2), (2, 1), (1, 3)], 4);
    show("two clusters sharing node 2:", &g);
    let mut view = elect_clusters(&g, &BTreeSet::new());
    identify_gateways(&mut view, &g);
    match cluster_route(NodeId(0), NodeId(3), &view, &g) {
        Some(path) => {
            let p: Vec<String> = path.iter().map(|n| n.to_string()).collect();
            println!("backbone route 0 -> 3: {}\n", p.join(" -> "));
        }
        None => println!("backbone route 0 -> 3: unreachable\n"),
    }

    // Disjoint clusters bridged by two adjacent members: the fixpoint rule
    // promotes both members to gateways.
    show(
        "disjoint clusters bridged by members 2 and 3:",
        &graph(&[(0, 2), (1, 3), (2, 3)], 4),
    );

    // Incumbency: a sitting head survives re-election while legal.
    let g = graph(&[(0, 1)], 2);
    let incumbents: BTreeSet<NodeId> = [NodeId(1)].into();
    let view = elect_clusters(&g, &incumbents);
    let roles: BTreeMap<_, _> = view.roles.iter().collect();
    println!("pair with node 1 as incumbent head: {:?}", roles);
}
