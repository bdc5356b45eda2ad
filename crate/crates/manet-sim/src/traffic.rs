//! Constant-bit-rate traffic: flow specifications and the data packets
//! they originate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::time::{SimDuration, SimTime};
use crate::NodeId;

/// A constant-bit-rate flow between two nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSpec {
    pub id: u32,
    pub src: NodeId,
    pub dst: NodeId,
    pub start: SimTime,
    pub stop: SimTime,
    /// Seconds between originations.
    pub interval: SimDuration,
    pub payload_bytes: u32,
}

#[derive(Debug, Error, PartialEq)]
pub enum FlowError {
    #[error("flow {0}: start must be before stop")]
    EmptyWindow(u32),
    #[error("flow {0}: interval must be positive")]
    ZeroInterval(u32),
    #[error("flow {0}: src and dst must differ")]
    SelfAddressed(u32),
}

impl FlowSpec {
    pub fn validate(&self) -> Result<(), FlowError> {
        if self.start >= self.stop {
            return Err(FlowError::EmptyWindow(self.id));
        }
        if self.interval.is_zero() {
            return Err(FlowError::ZeroInterval(self.id));
        }
        if self.src == self.dst {
            return Err(FlowError::SelfAddressed(self.id));
        }
        Ok(())
    }

    /// Origination instants: start, start+interval, ... while strictly
    /// before stop.
    pub fn origination_times(&self) -> impl Iterator<Item = SimTime> + '_ {
        let mut next = self.start;
        std::iter::from_fn(move || {
            if next >= self.stop {
                return None;
            }
            let now = next;
            next += self.interval;
            Some(now)
        })
    }
}

/// One application packet making its way through the network.
#[derive(Debug, Clone, PartialEq)]
pub struct DataPacket {
    pub flow_id: u32,
    pub packet_seq: u64,
    pub src: NodeId,
    pub dst: NodeId,
    pub payload_bytes: u32,
    pub created_at: SimTime,
    /// Nodes that have transmitted this packet, source first. A repeat
    /// here means a routing loop; the forwarding path treats that as a
    /// drop that must never happen.
    pub hop_trace: Vec<NodeId>,
}

impl DataPacket {
    pub fn hop_trace_string(&self) -> String {
        let ids: Vec<String> = self.hop_trace.iter().map(|n| n.to_string()).collect();
        ids.join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(secs: f64) -> SimTime {
        SimTime::from_secs_f64(secs)
    }

    fn flow(start: f64, stop: f64, interval: f64) -> FlowSpec {
        FlowSpec {
            id: 1,
            src: NodeId(0),
            dst: NodeId(1),
            start: t(start),
            stop: t(stop),
            interval: SimDuration::from_secs_f64(interval),
            payload_bytes: 512,
        }
    }

    #[test]
    fn schedule_stops_strictly_before_stop_time() {
        let times: Vec<SimTime> = flow(10.0, 10.5, 0.25).origination_times().collect();
        assert_eq!(times, vec![t(10.0), t(10.25)]);
    }

    #[test]
    fn stop_before_first_tick_sends_nothing() {
        // start >= stop is invalid, but a window shorter than one interval
        // still yields exactly the starting tick.
        let times: Vec<SimTime> = flow(10.0, 10.1, 0.25).origination_times().collect();
        assert_eq!(times, vec![t(10.0)]);
        assert!(flow(10.0, 10.0, 0.25).validate().is_err());
    }

    #[test]
    fn validation_catches_self_addressed_flows() {
        let mut f = flow(0.0, 1.0, 0.5);
        f.dst = f.src;
        assert_eq!(f.validate(), Err(FlowError::SelfAddressed(1)));
    }
}
