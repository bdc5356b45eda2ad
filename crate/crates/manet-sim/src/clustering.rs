//! Cluster structure over the live neighbor graph: lowest-ID head
//! election with incumbent retention, gateway identification, and the
//! head/gateway relay pattern for forwarding-mode runs.
//!
//! Heads are elected so that no two heads are ever neighbors. A gateway
//! is a node with two or more head neighbors, or — when clusters are
//! disjoint — a node with one head neighbor and a gateway neighbor of a
//! different cluster. The disjoint rule is evaluated as a greatest
//! fixpoint so that two adjacent members bridging two clusters promote
//! each other.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::time::SimTime;
use crate::NodeId;

/// Symmetric adjacency at a sampling instant.
pub type NeighborGraph = BTreeMap<NodeId, BTreeSet<NodeId>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusterMode {
    Off,
    #[default]
    Overlay,
    Forwarding,
}

impl fmt::Display for ClusterMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClusterMode::Off => write!(f, "off"),
            ClusterMode::Overlay => write!(f, "overlay"),
            ClusterMode::Forwarding => write!(f, "forwarding"),
        }
    }
}

impl std::str::FromStr for ClusterMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "off" => Ok(ClusterMode::Off),
            "overlay" => Ok(ClusterMode::Overlay),
            "forwarding" => Ok(ClusterMode::Forwarding),
            other => Err(format!(
                "unknown cluster mode `{other}` (off|overlay|forwarding)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClusterRole {
    Undecided,
    Head,
    Member(NodeId),
    Gateway(BTreeSet<NodeId>),
}

impl fmt::Display for ClusterRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClusterRole::Undecided => write!(f, "undecided"),
            ClusterRole::Head => write!(f, "head"),
            ClusterRole::Member(head) => write!(f, "member:{head}"),
            ClusterRole::Gateway(heads) => {
                let ids: Vec<String> = heads.iter().map(|h| h.to_string()).collect();
                write!(f, "gateway:{}", ids.join("+"))
            }
        }
    }
}

/// Role assignment over all nodes at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterView {
    pub roles: BTreeMap<NodeId, ClusterRole>,
    /// First sampling instant at which no node was left undecided.
    pub formed_at: Option<SimTime>,
}

impl ClusterView {
    pub fn heads(&self) -> BTreeSet<NodeId> {
        self.roles
            .iter()
            .filter(|(_, r)| matches!(r, ClusterRole::Head))
            .map(|(&n, _)| n)
            .collect()
    }
}

/// Iterative lowest-ID election. Incumbent heads are retained while still
/// legal, damping re-election churn under mobility; fresh heads are the
/// undecided nodes whose ID is smallest in their undecided neighborhood.
pub fn elect_clusters(graph: &NeighborGraph, incumbents: &BTreeSet<NodeId>) -> ClusterView {
    let mut roles: BTreeMap<NodeId, ClusterRole> =
        graph.keys().map(|&n| (n, ClusterRole::Undecided)).collect();

    let no_neighbor_head = |roles: &BTreeMap<NodeId, ClusterRole>, node: NodeId| {
        graph[&node]
            .iter()
            .all(|nb| !matches!(roles.get(nb), Some(ClusterRole::Head)))
    };

    // Keep surviving incumbents first, lowest ID wins a conflict.
    for &inc in incumbents {
        if roles.get(&inc) == Some(&ClusterRole::Undecided) && no_neighbor_head(&roles, inc) {
            roles.insert(inc, ClusterRole::Head);
        }
    }

    loop {
        // Nodes adjacent to a head join the lowest-ID head next to them.
        let mut changed = false;
        let assignments: Vec<(NodeId, NodeId)> = roles
            .iter()
            .filter(|(_, r)| **r == ClusterRole::Undecided)
            .filter_map(|(&n, _)| {
                graph[&n]
                    .iter()
                    .find(|nb| matches!(roles.get(nb), Some(ClusterRole::Head)))
                    .map(|&head| (n, head))
            })
            .collect();
        for (n, head) in assignments {
            roles.insert(n, ClusterRole::Member(head));
            changed = true;
        }

        // An undecided node with the smallest ID among its undecided
        // neighbors becomes a head.
        let new_heads: Vec<NodeId> = roles
            .iter()
            .filter(|(_, r)| **r == ClusterRole::Undecided)
            .filter(|(&n, _)| {
                graph[&n]
                    .iter()
                    .filter(|nb| matches!(roles.get(nb), Some(ClusterRole::Undecided)))
                    .all(|&nb| n < nb)
            })
            .map(|(&n, _)| n)
            .collect();
        for n in new_heads {
            roles.insert(n, ClusterRole::Head);
            changed = true;
        }

        if !changed {
            break;
        }
    }

    debug_assert!(roles.values().all(|r| *r != ClusterRole::Undecided));
    ClusterView {
        roles,
        formed_at: None,
    }
}

/// Promotes members to gateways. First every non-head with two or more
/// head neighbors, then the disjoint-cluster rule as a greatest fixpoint:
/// keep a member a gateway candidate only while it has a neighboring
/// candidate or established gateway anchored in a different cluster.
pub fn identify_gateways(view: &mut ClusterView, graph: &NeighborGraph) {
    let heads: BTreeSet<NodeId> = view.heads();

    let head_neighbors =
        |node: NodeId| -> BTreeSet<NodeId> { graph[&node].intersection(&heads).copied().collect() };

    let mut member_heads: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    for (&node, role) in view.roles.iter() {
        if let ClusterRole::Member(h) = role {
            member_heads.insert(node, *h);
        }
    }

    // Multi-head gateways.
    for (&node, &_head) in member_heads.iter() {
        let hn = head_neighbors(node);
        if hn.len() >= 2 {
            view.roles.insert(node, ClusterRole::Gateway(hn));
        }
    }

    // Disjoint-cluster gateways: greatest fixpoint over remaining members.
    let mut candidates: BTreeSet<NodeId> = view
        .roles
        .iter()
        .filter(|(_, r)| matches!(r, ClusterRole::Member(_)))
        .map(|(&n, _)| n)
        .collect();
    loop {
        let mut removed = false;
        let snapshot = candidates.clone();
        for &node in &snapshot {
            let my_head = member_heads[&node];
            // A supporter is a candidate or gateway anchored in a cluster
            // that does not include this member's own head.
            let supported = graph[&node].iter().any(|nb| {
                if candidates.contains(nb) {
                    return member_heads.get(nb).is_some_and(|&h| h != my_head);
                }
                match view.roles.get(nb) {
                    Some(ClusterRole::Gateway(heads_of_nb)) => !heads_of_nb.contains(&my_head),
                    _ => false,
                }
            });
            if !supported {
                candidates.remove(&node);
                removed = true;
            }
        }
        if !removed {
            break;
        }
    }
    for node in candidates {
        let hn = head_neighbors(node);
        view.roles.insert(node, ClusterRole::Gateway(hn));
    }
}

/// Shortest path whose interior positions are heads or gateways with
/// alternating roles, per the source → head → gateway → head → ...
/// forwarding pattern. Endpoints are unconstrained; a direct hop between
/// adjacent endpoints is allowed. Returns `None` when no such path exists.
pub fn cluster_route(
    src: NodeId,
    dst: NodeId,
    view: &ClusterView,
    graph: &NeighborGraph,
) -> Option<Vec<NodeId>> {
    if src == dst {
        return Some(vec![src]);
    }
    if !graph.contains_key(&src) || !graph.contains_key(&dst) {
        return None;
    }

    #[derive(Clone, Copy, PartialEq)]
    enum RelayRole {
        Head,
        Gateway,
    }
    let relay_role = |n: NodeId| match view.roles.get(&n) {
        Some(ClusterRole::Head) => Some(RelayRole::Head),
        Some(ClusterRole::Gateway(_)) => Some(RelayRole::Gateway),
        _ => None,
    };

    let mut pred: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut frontier = vec![src];
    let mut visited: BTreeSet<NodeId> = BTreeSet::new();
    visited.insert(src);
    while !frontier.is_empty() {
        let mut next_frontier = Vec::new();
        for &u in &frontier {
            let u_role = if u == src { None } else { relay_role(u) };
            for &v in &graph[&u] {
                if visited.contains(&v) {
                    continue;
                }
                if v == dst {
                    pred.insert(v, u);
                    let mut path = vec![dst];
                    let mut cur = dst;
                    while cur != src {
                        cur = pred[&cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                // Interior hop: must be a relay, alternating with the
                // previous relay's role.
                let Some(v_role) = relay_role(v) else {
                    continue;
                };
                if let Some(u_role) = u_role {
                    if u_role == v_role {
                        continue;
                    }
                }
                visited.insert(v);
                pred.insert(v, u);
                next_frontier.push(v);
            }
        }
        frontier = next_frontier;
    }
    None
}

/// Structural check used by tests and the acceptance suite: no adjacent
/// heads, full role coverage, every non-head next to a head, members'
/// heads adjacent, no member left with two head neighbors, and every
/// gateway satisfying the definition.
pub fn check_cluster_invariants(view: &ClusterView, graph: &NeighborGraph) -> Result<(), String> {
    let heads = view.heads();
    for (&node, role) in view.roles.iter() {
        let neighbors = graph
            .get(&node)
            .ok_or_else(|| format!("view covers unknown node {node}"))?;
        let head_nbrs: BTreeSet<NodeId> = neighbors.intersection(&heads).copied().collect();
        match role {
            ClusterRole::Undecided => return Err(format!("node {node} left undecided")),
            ClusterRole::Head => {
                if !head_nbrs.is_empty() {
                    return Err(format!(
                        "adjacent heads: {node} and {}",
                        head_nbrs.first().unwrap()
                    ));
                }
            }
            ClusterRole::Member(h) => {
                if !neighbors.contains(h) {
                    return Err(format!("member {node} not adjacent to its head {h}"));
                }
                if head_nbrs.len() >= 2 {
                    return Err(format!(
                        "member {node} has {} head neighbors",
                        head_nbrs.len()
                    ));
                }
            }
            ClusterRole::Gateway(gw_heads) => {
                if head_nbrs.is_empty() {
                    return Err(format!("gateway {node} has no head neighbor"));
                }
                if gw_heads != &head_nbrs {
                    return Err(format!("gateway {node} heads set mismatch"));
                }
                if head_nbrs.len() < 2 {
                    // Disjoint-cluster case: needs a gateway neighbor whose
                    // cluster set excludes this gateway's own head.
                    let my_head = *gw_heads.first().expect("non-empty head set");
                    let foreign_gateway = neighbors.iter().any(|nb| {
                        matches!(view.roles.get(nb), Some(ClusterRole::Gateway(nb_heads))
                            if !nb_heads.contains(&my_head))
                    });
                    if !foreign_gateway {
                        return Err(format!("gateway {node} fails the gateway definition"));
                    }
                }
            }
        }
        if *role != ClusterRole::Head && head_nbrs.is_empty() {
            return Err(format!("non-head {node} has no head neighbor"));
        }
    }
    Ok(())
}
