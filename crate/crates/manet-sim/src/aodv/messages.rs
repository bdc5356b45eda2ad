//! The wire message kinds nodes exchange.

use crate::aodv::seqnum::SequenceNumber;
use crate::time::SimDuration;
use crate::traffic::DataPacket;
use crate::NodeId;

/// Route request, flooded with a bounded lifespan (`ttl`).
#[derive(Debug, Clone, PartialEq)]
pub struct Rreq {
    /// Per-originator counter; (originator, rreq_id) names one attempt.
    pub rreq_id: u32,
    pub originator: NodeId,
    pub originator_seq: SequenceNumber,
    pub destination: NodeId,
    /// Freshest destination sequence number the originator has seen, if any.
    pub dest_seq_known: Option<SequenceNumber>,
    pub hop_count: u32,
    /// Remaining lifespan in hops; at least 1 when transmitted.
    pub ttl: u32,
}

/// Route reply, unicast back along the reverse route.
#[derive(Debug, Clone, PartialEq)]
pub struct Rrep {
    pub destination: NodeId,
    pub dest_seq: SequenceNumber,
    pub originator: NodeId,
    pub hop_count: u32,
    pub lifetime: SimDuration,
}

/// Route error: destinations that became unreachable through the sender.
#[derive(Debug, Clone, PartialEq)]
pub struct Rerr {
    pub unreachable: Vec<(NodeId, SequenceNumber)>,
}

/// Periodic liveness beacon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hello {
    pub originator: NodeId,
    pub originator_seq: SequenceNumber,
}

/// Anything a radio can carry.
#[derive(Debug, Clone, PartialEq)]
pub enum Frame {
    Rreq(Rreq),
    Rrep(Rrep),
    Rerr(Rerr),
    Hello(Hello),
    Data(DataPacket),
}

impl Frame {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Frame::Rreq(_) => "RREQ",
            Frame::Rrep(_) => "RREP",
            Frame::Rerr(_) => "RERR",
            Frame::Hello(_) => "HELLO",
            Frame::Data(_) => "DATA",
        }
    }
}

impl Rerr {
    /// `dst:seq` pairs joined with `|`, e.g. `3:7|5:2`.
    pub fn unreachable_string(&self) -> String {
        let parts: Vec<String> = self
            .unreachable
            .iter()
            .map(|(dst, seq)| format!("{dst}:{seq}"))
            .collect();
        parts.join("|")
    }
}
