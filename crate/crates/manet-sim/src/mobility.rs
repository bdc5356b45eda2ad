//! Node kinematics: scripted waypoint motion over a 2-D field.
//!
//! Each node follows a piecewise-linear plan: stationary until its first
//! leg departs, straight-line travel at constant speed per leg, holding
//! position between legs and after the last one. A leg that departs while
//! the previous one is still in flight diverts the node from wherever it
//! currently is.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::time::{SimDuration, SimTime};
use crate::NodeId;

/// A point in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn new(x: f64, y: f64) -> Self {
        Position { x, y }
    }

    pub fn distance_to(&self, other: &Position) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// One straight-line movement order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaypointLeg {
    pub depart_at: SimTime,
    pub x: f64,
    pub y: f64,
    /// Meters per second, must be > 0.
    pub speed: f64,
}

impl WaypointLeg {
    pub fn target(&self) -> Position {
        Position::new(self.x, self.y)
    }
}

/// The full motion plan for one node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaypointScript {
    pub node: NodeId,
    pub legs: Vec<WaypointLeg>,
}

#[derive(Debug, Error, PartialEq)]
pub enum MobilityError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {node}: leg {index} departs at {depart_at}, not after the previous leg")]
    UnorderedLegs {
        node: NodeId,
        index: usize,
        depart_at: SimTime,
    },
    #[error("node {node}: leg {index} has non-positive speed {speed}")]
    BadSpeed {
        node: NodeId,
        index: usize,
        speed: f64,
    },
    #[error("node {node}: leg {index} has a non-finite target")]
    BadTarget { node: NodeId, index: usize },
}

#[derive(Debug, Clone)]
struct Segment {
    start_at: SimTime,
    end_at: SimTime,
    from: Position,
    to: Position,
}

/// Compiled per-node motion, ready for O(log n) position queries.
#[derive(Debug, Clone)]
pub struct MotionPlan {
    initial: Position,
    segments: Vec<Segment>,
}

impl MotionPlan {
    pub fn stationary(at: Position) -> Self {
        MotionPlan {
            initial: at,
            segments: Vec::new(),
        }
    }

    pub fn compile(
        node: NodeId,
        initial: Position,
        legs: &[WaypointLeg],
    ) -> Result<Self, MobilityError> {
        let mut plan = MotionPlan::stationary(initial);
        let mut prev_depart: Option<SimTime> = None;
        for (index, leg) in legs.iter().enumerate() {
            if let Some(p) = prev_depart {
                if leg.depart_at <= p {
                    return Err(MobilityError::UnorderedLegs {
                        node,
                        index,
                        depart_at: leg.depart_at,
                    });
                }
            }
            prev_depart = Some(leg.depart_at);
            if !(leg.speed > 0.0 && leg.speed.is_finite()) {
                return Err(MobilityError::BadSpeed {
                    node,
                    index,
                    speed: leg.speed,
                });
            }
            let target = leg.target();
            if !target.is_finite() {
                return Err(MobilityError::BadTarget { node, index });
            }
            let from = plan.position_at(leg.depart_at);
            let travel_secs = from.distance_to(&target) / leg.speed;
            let end_at = leg.depart_at + SimDuration::from_secs_f64(travel_secs);
            plan.segments.push(Segment {
                start_at: leg.depart_at,
                end_at,
                from,
                to: target,
            });
        }
        Ok(plan)
    }

    /// Position at time `t`. The latest-started segment governs, so a leg
    /// departing mid-flight supersedes the one it interrupts; position is
    /// interpolated along it and clamped at the target after arrival.
    pub fn position_at(&self, t: SimTime) -> Position {
        let mut active: Option<&Segment> = None;
        for seg in &self.segments {
            if seg.start_at <= t {
                active = Some(seg);
            } else {
                break;
            }
        }
        let Some(seg) = active else {
            return self.initial;
        };
        if t >= seg.end_at {
            return seg.to;
        }
        let total = seg.end_at.since(seg.start_at).as_secs_f64();
        if total <= 0.0 {
            return seg.to;
        }
        let frac = t.since(seg.start_at).as_secs_f64() / total;
        Position::new(
            seg.from.x + (seg.to.x - seg.from.x) * frac,
            seg.from.y + (seg.to.y - seg.from.y) * frac,
        )
    }
}

/// All node motion for a run, plus the unit-disk neighborhood queries the
/// radio and clustering layers are built on.
#[derive(Debug, Clone)]
pub struct Mobility {
    plans: BTreeMap<NodeId, MotionPlan>,
}

impl Mobility {
    pub fn new(
        nodes: &[(NodeId, Position)],
        scripts: &[WaypointScript],
    ) -> Result<Self, MobilityError> {
        let mut legs_by_node: BTreeMap<NodeId, Vec<WaypointLeg>> = BTreeMap::new();
        for script in scripts {
            legs_by_node
                .entry(script.node)
                .or_default()
                .extend(script.legs.iter().copied());
        }
        let mut plans = BTreeMap::new();
        for &(id, pos) in nodes {
            let legs = legs_by_node.remove(&id).unwrap_or_default();
            plans.insert(id, MotionPlan::compile(id, pos, &legs)?);
        }
        if let Some((&id, _)) = legs_by_node.iter().next() {
            return Err(MobilityError::UnknownNode(id));
        }
        Ok(Mobility { plans })
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.plans.keys().copied()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.plans.contains_key(&node)
    }

    pub fn position_at(&self, node: NodeId, t: SimTime) -> Result<Position, MobilityError> {
        self.plans
            .get(&node)
            .map(|p| p.position_at(t))
            .ok_or(MobilityError::UnknownNode(node))
    }

    pub fn distance(&self, a: NodeId, b: NodeId, t: SimTime) -> Result<f64, MobilityError> {
        let pa = self.position_at(a, t)?;
        let pb = self.position_at(b, t)?;
        Ok(pa.distance_to(&pb))
    }

    /// All other nodes within `range` meters of `node` at time `t`.
    /// Unit-disk links are symmetric by construction.
    pub fn neighbors(&self, node: NodeId, t: SimTime, range: f64) -> BTreeSet<NodeId> {
        let Ok(origin) = self.position_at(node, t) else {
            return BTreeSet::new();
        };
        self.plans
            .iter()
            .filter(|(&id, _)| id != node)
            .filter(|(_, plan)| plan.position_at(t).distance_to(&origin) <= range)
            .map(|(&id, _)| id)
            .collect()
    }

    /// Symmetric adjacency over all nodes at one instant.
    pub fn snapshot_graph(&self, t: SimTime, range: f64) -> BTreeMap<NodeId, BTreeSet<NodeId>> {
        let positions: Vec<(NodeId, Position)> = self
            .plans
            .iter()
            .map(|(&id, plan)| (id, plan.position_at(t)))
            .collect();
        let mut graph: BTreeMap<NodeId, BTreeSet<NodeId>> = positions
            .iter()
            .map(|&(id, _)| (id, BTreeSet::new()))
            .collect();
        for (i, &(a, pa)) in positions.iter().enumerate() {
            for &(b, pb) in &positions[i + 1..] {
                if pa.distance_to(&pb) <= range {
                    graph.get_mut(&a).expect("node present").insert(b);
                    graph.get_mut(&b).expect("node present").insert(a);
                }
            }
        }
        graph
    }
}
