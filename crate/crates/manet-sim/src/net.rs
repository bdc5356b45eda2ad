//! The slice of simulator state a protocol handler sees while it runs:
//! clock, event queue, trace sink, radio and the current cluster view.
//!
//! Handlers never touch other nodes directly; everything crosses the
//! network as a scheduled [`Frame`] reception.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::aodv::config::AodvConfig;
use crate::aodv::messages::Frame;
use crate::clustering::{ClusterMode, ClusterRole, ClusterView};
use crate::kernel::{EventHandle, EventQueue};
use crate::mobility::Mobility;
use crate::radio::{OutboundQueues, RadioParams};
use crate::time::{SimDuration, SimTime};
use crate::trace::{TraceKind, TraceLog, TraceRecord};
use crate::NodeId;

/// Everything the event queue can dispatch.
#[derive(Debug, Clone)]
pub(crate) enum Action {
    /// A frame arriving at a node's radio.
    Deliver {
        to: NodeId,
        from: NodeId,
        frame: Frame,
    },
    HelloTick {
        node: NodeId,
    },
    NeighborTimeout {
        node: NodeId,
        neighbor: NodeId,
    },
    DiscoveryTimeout {
        node: NodeId,
        dst: NodeId,
    },
    BufferTimeout {
        node: NodeId,
        dst: NodeId,
        flow: u32,
        seq: u64,
    },
    FlowTick {
        flow_index: usize,
    },
    ClusterSample,
    DistanceSample,
}

/// Result of handing a frame to the radio for one-hop transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SendOutcome {
    Sent,
    /// The named next hop is not currently in range; the sender's protocol
    /// layer treats this as a detected link failure.
    OutOfRange,
    /// The sender's outbound queue was full; frame dropped.
    QueueFull,
}

pub(crate) struct Net<'a> {
    pub now: SimTime,
    pub queue: &'a mut EventQueue<Action>,
    pub trace: &'a mut TraceLog,
    pub mobility: &'a Mobility,
    pub radio: &'a RadioParams,
    pub outbound: &'a mut OutboundQueues,
    pub loss_rng: &'a mut ChaCha8Rng,
    pub cfg: &'a AodvConfig,
    pub cluster_mode: ClusterMode,
    pub cluster_view: Option<&'a ClusterView>,
}

impl Net<'_> {
    pub fn record(&mut self, record: TraceRecord) {
        self.trace.push(record);
    }

    pub fn rec(&mut self, kind: TraceKind, node: NodeId) -> TraceRecord {
        TraceRecord::new(self.now, kind, node)
    }

    pub fn schedule_in(&mut self, delay: SimDuration, action: Action) -> EventHandle {
        self.queue.schedule_in(delay, action)
    }

    pub fn cancel(&mut self, handle: EventHandle) -> bool {
        self.queue.cancel(handle)
    }

    fn lost(&mut self) -> bool {
        self.radio.loss_probability > 0.0
            && self.loss_rng.random::<f64>() < self.radio.loss_probability
    }

    /// Broadcast: one queue slot, a reception scheduled at
    /// `now + per_hop_latency` for every current neighbor of `from`.
    pub fn broadcast(&mut self, from: NodeId, frame: Frame) -> SendOutcome {
        if !self.outbound.try_claim(
            from,
            self.now,
            self.radio.per_hop_latency,
            self.radio.queue_capacity,
        ) {
            return SendOutcome::QueueFull;
        }
        let receivers = self.mobility.neighbors(from, self.now, self.radio.range_m);
        for to in receivers {
            if self.lost() {
                continue;
            }
            self.queue.schedule_in(
                self.radio.per_hop_latency,
                Action::Deliver {
                    to,
                    from,
                    frame: frame.clone(),
                },
            );
        }
        SendOutcome::Sent
    }

    /// Unicast: reception scheduled only if the next hop is in range right
    /// now, otherwise the sender learns of the link failure immediately.
    pub fn unicast(&mut self, from: NodeId, to: NodeId, frame: Frame) -> SendOutcome {
        let in_range = self
            .mobility
            .distance(from, to, self.now)
            .map(|d| d <= self.radio.range_m)
            .unwrap_or(false);
        if !in_range {
            return SendOutcome::OutOfRange;
        }
        if !self.outbound.try_claim(
            from,
            self.now,
            self.radio.per_hop_latency,
            self.radio.queue_capacity,
        ) {
            return SendOutcome::QueueFull;
        }
        if !self.lost() {
            self.queue.schedule_in(
                self.radio.per_hop_latency,
                Action::Deliver { to, from, frame },
            );
        }
        SendOutcome::Sent
    }

    /// Whether `node` may act as a relay (rebroadcast discovery floods,
    /// forward data, answer from cache) given the cluster mode. Under
    /// `forwarding`, relays must be heads or gateways and consecutive
    /// relays must alternate roles; endpoints are always allowed.
    pub fn may_relay(&self, node: NodeId, prev_hop: NodeId, path_endpoint: NodeId) -> bool {
        if self.cluster_mode != ClusterMode::Forwarding {
            return true;
        }
        let Some(view) = self.cluster_view else {
            // Before the first sampling there is no backbone to honor.
            return true;
        };
        let relay_role = match view.roles.get(&node) {
            Some(ClusterRole::Head) => ClusterRelay::Head,
            Some(ClusterRole::Gateway(_)) => ClusterRelay::Gateway,
            _ => return false,
        };
        if prev_hop == path_endpoint {
            return true;
        }
        match view.roles.get(&prev_hop) {
            Some(ClusterRole::Head) => relay_role != ClusterRelay::Head,
            Some(ClusterRole::Gateway(_)) => relay_role != ClusterRelay::Gateway,
            _ => true,
        }
    }
}

#[derive(PartialEq, Eq)]
enum ClusterRelay {
    Head,
    Gateway,
}
