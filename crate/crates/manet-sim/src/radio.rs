//! The unit-disk radio: homogeneous range, fixed per-hop latency and a
//! finite drop-tail outbound queue per node. No interference or capture
//! model; congestion shows up solely as queue overflow.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::time::{SimDuration, SimTime};
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadioParams {
    /// Unit-disk radius in meters, identical for every node.
    pub range_m: f64,
    /// Fixed transmission-to-reception delay in seconds.
    pub per_hop_latency: SimDuration,
    /// Outbound frames a node may have in flight before drop-tail kicks in.
    pub queue_capacity: usize,
    /// Uniform per-reception loss probability; 0 disables the draw entirely.
    pub loss_probability: f64,
}

impl Default for RadioParams {
    fn default() -> Self {
        RadioParams {
            range_m: 250.0,
            per_hop_latency: SimDuration::from_secs_f64(0.01),
            queue_capacity: 50,
            loss_probability: 0.0,
        }
    }
}

impl RadioParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.range_m > 0.0 && self.range_m.is_finite()) {
            return Err("radio.range_m must be positive".into());
        }
        if self.per_hop_latency.is_zero() {
            return Err("radio.per_hop_latency must be positive".into());
        }
        if self.queue_capacity == 0 {
            return Err("radio.queue_capacity must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.loss_probability) || !self.loss_probability.is_finite() {
            return Err("radio.loss_probability must be within [0, 1]".into());
        }
        Ok(())
    }
}

/// Tracks how many transmissions each node currently has in the air. A
/// frame occupies a slot from transmission until its reception instant.
#[derive(Debug, Default)]
pub struct OutboundQueues {
    in_flight: BTreeMap<NodeId, VecDeque<SimTime>>,
}

impl OutboundQueues {
    pub fn new() -> Self {
        OutboundQueues::default()
    }

    /// Claims a queue slot for one transmission at `now`. Returns false
    /// when the queue is at capacity, in which case the frame is dropped
    /// by the caller with cause QUEUE_OVERFLOW.
    pub fn try_claim(
        &mut self,
        node: NodeId,
        now: SimTime,
        latency: SimDuration,
        capacity: usize,
    ) -> bool {
        let queue = self.in_flight.entry(node).or_default();
        while queue.front().is_some_and(|&done| done <= now) {
            queue.pop_front();
        }
        if queue.len() >= capacity {
            return false;
        }
        queue.push_back(now + latency);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifty_first_simultaneous_frame_overflows() {
        let mut q = OutboundQueues::new();
        let now = SimTime::from_secs_f64(1.0);
        let lat = SimDuration::from_secs_f64(0.01);
        for _ in 0..50 {
            assert!(q.try_claim(NodeId(0), now, lat, 50));
        }
        assert!(!q.try_claim(NodeId(0), now, lat, 50));
    }

    #[test]
    fn slots_free_once_receptions_complete() {
        let mut q = OutboundQueues::new();
        let lat = SimDuration::from_secs_f64(0.01);
        let t0 = SimTime::from_secs_f64(1.0);
        for _ in 0..50 {
            assert!(q.try_claim(NodeId(0), t0, lat, 50));
        }
        assert!(!q.try_claim(NodeId(0), t0, lat, 50));
        let later = t0 + lat;
        assert!(q.try_claim(NodeId(0), later, lat, 50));
    }

    #[test]
    fn queues_are_per_node() {
        let mut q = OutboundQueues::new();
        let now = SimTime::ZERO;
        let lat = SimDuration::from_secs_f64(0.01);
        assert!(q.try_claim(NodeId(0), now, lat, 1));
        assert!(!q.try_claim(NodeId(0), now, lat, 1));
        assert!(q.try_claim(NodeId(1), now, lat, 1));
    }
}
