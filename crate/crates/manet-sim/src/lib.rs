//! # manet-sim
//!
//! A deterministic discrete-event simulator of wireless mobile ad-hoc
//! networks: on-demand distance-vector routing over a clustered topology,
//! scripted waypoint mobility, a unit-disk radio, and a measurement layer
//! that turns traces into delivery/latency/overhead reports.
//!
//! Identical scenario + identical seed means byte-identical traces; that
//! property is what the whole verification story hangs off.
//!
//! ## Examples
//!
//! The `examples/` directory is the front door — one runnable program per
//! major capability:
//!
//! ```text
//! cargo run --example run_paper_scenario   # five-node replication run, milestone events
//! cargo run --example route_discovery      # watch a request/reply exchange on a chain
//! cargo run --example expanding_ring       # lifespans 1, 3, 5 across retries
//! cargo run --example link_break_rerr      # route error propagation after a link dies
//! cargo run --example clustering_roles     # head election, gateways, cluster routes
//! cargo run --example cluster_modes        # off vs overlay vs forwarding, side by side
//! cargo run --example distance_series      # plot data for node distances over time
//! cargo run --example seed_sweep           # one scenario, many seeds, aggregate table
//! cargo run --example deterministic_replay # same seed twice, hash-identical traces
//! ```
//!
//! ## Library sketch
//!
//! ```
//! use manet_sim::{scenario, Simulation, compute_metrics};
//!
//! let scn = scenario::paper_5node();
//! let mut sim = Simulation::new(&scn).unwrap();
//! sim.run_to_end();
//! let report = compute_metrics(sim.trace().records());
//! assert!(report.conserves_packets());
//! ```
//!
//! There is also a thin `manet-sim` binary wrapping the library behind
//! `run`, `validate`, `metrics`, `sweep` and `distances` subcommands.

use std::fmt;

use serde::{Deserialize, Serialize};

pub mod aodv;
pub mod cli;
pub mod clustering;
pub mod kernel;
pub mod metrics;
pub mod mobility;
mod net;
pub mod radio;
pub mod rng;
pub mod scenario;
pub mod sim;
pub mod sweep;
pub mod time;
pub mod trace;
pub mod traffic;

pub use aodv::{AodvConfig, RouteEntry, RouteState, SequenceNumber};
pub use clustering::{ClusterMode, ClusterRole, ClusterView};
pub use metrics::{
    compute_metrics, compute_metrics_from_text, distance_series, distance_series_from_trace,
    MetricsReport,
};
pub use mobility::{Mobility, Position, WaypointLeg, WaypointScript};
pub use radio::RadioParams;
pub use scenario::Scenario;
pub use sim::Simulation;
pub use sweep::{sweep, SweepReport};
pub use time::{SimDuration, SimTime};
pub use trace::{DropCause, TraceKind, TraceLog, TraceRecord};
pub use traffic::{DataPacket, FlowSpec};

/// A node's identity. Election and trace output order by it, so the
/// numeric value matters: lowest ID wins cluster-head elections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u16);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl std::str::FromStr for NodeId {
    type Err = std::num::ParseIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(NodeId(s.parse()?))
    }
}
