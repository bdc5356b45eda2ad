//! On-demand distance-vector routing: sequence-numbered route freshness,
//! hello-based neighbor tracking, expanding-ring discovery and error-driven
//! route maintenance.

pub mod config;
pub mod messages;
pub mod node;
pub mod routing;
pub mod seqnum;

pub use config::AodvConfig;
pub use messages::{Frame, Hello, Rerr, Rrep, Rreq};
pub use node::{AodvNode, SelfAddressedError};
pub use routing::{RouteEntry, RouteState, RoutingTable, UpdateOutcome};
pub use seqnum::SequenceNumber;
