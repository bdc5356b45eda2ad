//! Scenario files: one JSON document describing nodes, motion, radio,
//! protocol constants, clustering mode and traffic. Unknown keys are
//! rejected so a typo in a protocol constant fails loudly instead of
//! silently running with defaults.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aodv::AodvConfig;
use crate::clustering::ClusterMode;
use crate::mobility::{MobilityError, Position, WaypointScript};
use crate::radio::RadioParams;
use crate::time::{SimDuration, SimTime};
use crate::traffic::FlowSpec;
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub id: NodeId,
    pub x: f64,
    pub y: f64,
}

impl NodeSpec {
    pub fn position(&self) -> Position {
        Position::new(self.x, self.y)
    }
}

/// Periodic distance sampling relative to a reference node, emitted as
/// DIST trace records during the run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceSampling {
    pub ref_node: NodeId,
    pub sample_dt: SimDuration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub sim_end: SimTime,
    pub seed: u64,
    #[serde(default)]
    pub radio: RadioParams,
    #[serde(default)]
    pub aodv: AodvConfig,
    #[serde(default)]
    pub cluster_mode: ClusterMode,
    #[serde(default = "default_cluster_interval")]
    pub cluster_interval: SimDuration,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distances: Option<DistanceSampling>,
    pub nodes: Vec<NodeSpec>,
    #[serde(default)]
    pub waypoints: Vec<WaypointScript>,
    #[serde(default)]
    pub flows: Vec<FlowSpec>,
}

fn default_cluster_interval() -> SimDuration {
    SimDuration::from_secs_f64(2.0)
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario file: {0}")]
    Io(#[from] std::io::Error),
    /// serde_json errors carry line and column positions.
    #[error("scenario syntax error: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("scenario `{name}`: {message}")]
    Semantic { name: String, message: String },
}

impl Scenario {
    pub fn parse_str(text: &str) -> Result<Scenario, ScenarioError> {
        let scenario: Scenario = serde_json::from_str(text)?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
        let text = std::fs::read_to_string(path)?;
        Scenario::parse_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    fn err(&self, message: impl Into<String>) -> ScenarioError {
        ScenarioError::Semantic {
            name: self.name.clone(),
            message: message.into(),
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.nodes.is_empty() {
            return Err(self.err("nodes list is empty"));
        }
        if self.sim_end == SimTime::ZERO {
            return Err(self.err("sim_end must be positive"));
        }
        let mut ids = BTreeSet::new();
        for node in &self.nodes {
            if !ids.insert(node.id) {
                return Err(self.err(format!("duplicate node id {}", node.id)));
            }
            if !node.position().is_finite() {
                return Err(self.err(format!("node {} has a non-finite position", node.id)));
            }
        }
        for script in &self.waypoints {
            if !ids.contains(&script.node) {
                return Err(self.err(format!("waypoints reference unknown node {}", script.node)));
            }
        }
        for flow in &self.flows {
            if !ids.contains(&flow.src) {
                return Err(self.err(format!(
                    "flow {} references unknown src {}",
                    flow.id, flow.src
                )));
            }
            if !ids.contains(&flow.dst) {
                return Err(self.err(format!(
                    "flow {} references unknown dst {}",
                    flow.id, flow.dst
                )));
            }
            flow.validate().map_err(|e| self.err(e.to_string()))?;
        }
        let mut flow_ids = BTreeSet::new();
        for flow in &self.flows {
            if !flow_ids.insert(flow.id) {
                return Err(self.err(format!("duplicate flow id {}", flow.id)));
            }
        }
        self.radio.validate().map_err(|m| self.err(m))?;
        self.aodv.validate().map_err(|m| self.err(m))?;
        if self.cluster_mode != ClusterMode::Off && self.cluster_interval.is_zero() {
            return Err(self.err("cluster_interval must be positive"));
        }
        if let Some(d) = &self.distances {
            if !ids.contains(&d.ref_node) {
                return Err(self.err(format!("distances reference unknown node {}", d.ref_node)));
            }
            if d.sample_dt.is_zero() {
                return Err(self.err("distances.sample_dt must be positive"));
            }
        }
        // Compile motion plans once here so leg ordering and speed errors
        // surface at validation time with node context.
        crate::mobility::Mobility::new(&self.node_positions(), &self.waypoints)
            .map_err(|e: MobilityError| self.err(e.to_string()))?;
        Ok(())
    }

    pub fn node_positions(&self) -> Vec<(NodeId, Position)> {
        self.nodes.iter().map(|n| (n.id, n.position())).collect()
    }

    pub fn node_ids(&self) -> BTreeSet<NodeId> {
        self.nodes.iter().map(|n| n.id).collect()
    }

    pub fn with_seed(&self, seed: u64) -> Scenario {
        let mut s = self.clone();
        s.seed = seed;
        s
    }
}

/// The bundled five-node replication scenario: formation by convergence,
/// on-demand routing once traffic starts, node 1 departing mid-run, the
/// resulting link break and drops, and node 0 relaying afterwards.
pub const PAPER_5NODE_JSON: &str = include_str!("../scenarios/paper-5node.json");

/// A static 3x3 grid used for oracle-style testing: connectivity never
/// changes, so every discovery must match shortest paths and every packet
/// must arrive.
pub const STATIC_GRID_JSON: &str = include_str!("../scenarios/static-grid.json");

pub fn paper_5node() -> Scenario {
    Scenario::parse_str(PAPER_5NODE_JSON).expect("bundled scenario is valid")
}

pub fn static_grid() -> Scenario {
    Scenario::parse_str(STATIC_GRID_JSON).expect("bundled scenario is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_paper_scenario_parses() {
        let s = paper_5node();
        assert_eq!(s.nodes.len(), 5);
        assert_eq!(s.cluster_mode, ClusterMode::Overlay);
        assert_eq!(s.name, "paper-5node");
    }

    #[test]
    fn bundled_static_grid_parses() {
        let s = static_grid();
        assert_eq!(s.nodes.len(), 9);
        assert!(s.waypoints.is_empty());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = r#"{
            "name": "typo", "sim_end": 1.0, "seed": 1,
            "nodes": [{"id": 0, "x": 0.0, "y": 0.0}],
            "aodv": {"helo_interval": 1.0}
        }"#;
        let err = Scenario::parse_str(text).unwrap_err();
        assert!(matches!(err, ScenarioError::Syntax(_)));
        assert!(err.to_string().contains("helo_interval"));
    }

    #[test]
    fn flow_referencing_unknown_node_is_named() {
        let text = r#"{
            "name": "bad-flow", "sim_end": 10.0, "seed": 1,
            "nodes": [{"id": 0, "x": 0.0, "y": 0.0}, {"id": 1, "x": 10.0, "y": 0.0}],
            "flows": [{"id": 7, "src": 0, "dst": 9, "start": 1.0, "stop": 2.0,
                       "interval": 0.5, "payload_bytes": 64}]
        }"#;
        let err = Scenario::parse_str(text).unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("flow 7") && msg.contains("unknown dst 9"),
            "{msg}"
        );
    }

    #[test]
    fn empty_node_list_is_rejected() {
        let text = r#"{"name": "empty", "sim_end": 1.0, "seed": 1, "nodes": []}"#;
        let err = Scenario::parse_str(text).unwrap_err();
        assert!(err.to_string().contains("nodes list is empty"));
    }

    #[test]
    fn serialization_round_trips() {
        let s = paper_5node();
        let again = Scenario::parse_str(&s.to_json_string()).unwrap();
        assert_eq!(again, s);

        let g = static_grid();
        let again = Scenario::parse_str(&g.to_json_string()).unwrap();
        assert_eq!(again, g);
    }
}
