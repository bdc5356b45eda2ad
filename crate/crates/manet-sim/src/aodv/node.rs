//! The per-node protocol state machine: neighbor tracking via hellos,
//! expanding-ring route discovery, route establishment via replies, route
//! maintenance via error messages, and data forwarding.
//!
//! A node's state is mutated only by the single-threaded kernel dispatch;
//! everything between nodes travels as a scheduled frame.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::aodv::messages::{Frame, Hello, Rerr, Rrep, Rreq};
use crate::aodv::routing::{RoutingTable, UpdateOutcome};
use crate::aodv::seqnum::SequenceNumber;
use crate::kernel::EventHandle;
use crate::net::{Action, Net, SendOutcome};
use crate::time::{SimDuration, SimTime};
use crate::trace::{DropCause, TraceKind};
use crate::traffic::DataPacket;
use crate::NodeId;

#[derive(Debug, Error, PartialEq)]
#[error("node {node} asked to send traffic to itself")]
pub struct SelfAddressedError {
    pub node: NodeId,
}

#[derive(Debug)]
struct NeighborRecord {
    last_heard: SimTime,
    timeout: EventHandle,
}

#[derive(Debug)]
struct PendingDiscovery {
    /// 0-based attempt currently waiting for a reply.
    attempt: u32,
    timeout: EventHandle,
    queue: VecDeque<DataPacket>,
}

/// One node's protocol state.
pub struct AodvNode {
    id: NodeId,
    own_seq: SequenceNumber,
    next_rreq_id: u32,
    table: RoutingTable,
    neighbors: BTreeMap<NodeId, NeighborRecord>,
    /// (originator, rreq id) pairs already processed, with expiry.
    seen_rreqs: BTreeMap<(NodeId, u32), SimTime>,
    pending: BTreeMap<NodeId, PendingDiscovery>,
    last_broadcast_at: Option<SimTime>,
}

impl AodvNode {
    pub fn new(id: NodeId) -> Self {
        AodvNode {
            id,
            own_seq: SequenceNumber(0),
            next_rreq_id: 0,
            table: RoutingTable::new(),
            neighbors: BTreeMap::new(),
            seen_rreqs: BTreeMap::new(),
            pending: BTreeMap::new(),
            last_broadcast_at: None,
        }
    }

    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn own_seq(&self) -> SequenceNumber {
        self.own_seq
    }

    pub fn routing_table(&self) -> &RoutingTable {
        &self.table
    }

    pub fn neighbor_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.neighbors.keys().copied()
    }

    // ----- frame reception ------------------------------------------------

    pub(crate) fn handle_frame(&mut self, frame: Frame, from: NodeId, net: &mut Net<'_>) {
        // Hearing anything from a neighbor proves the link is alive.
        self.note_neighbor(from, net);
        match frame {
            Frame::Rreq(rreq) => {
                let dseq = rreq
                    .dest_seq_known
                    .map_or_else(|| "unknown".to_string(), |s| s.to_string());
                let rec = net
                    .rec(TraceKind::Rreq, self.id)
                    .with("ev", "rx")
                    .with("from", from)
                    .with("id", rreq.rreq_id)
                    .with("orig", rreq.originator)
                    .with("oseq", rreq.originator_seq)
                    .with("dst", rreq.destination)
                    .with("dseq", dseq)
                    .with("hops", rreq.hop_count)
                    .with("ttl", rreq.ttl);
                net.record(rec);
                self.handle_rreq(rreq, from, net);
            }
            Frame::Rrep(rrep) => {
                let rec = net
                    .rec(TraceKind::Rrep, self.id)
                    .with("ev", "rx")
                    .with("from", from)
                    .with("dst", rrep.destination)
                    .with("dseq", rrep.dest_seq)
                    .with("orig", rrep.originator)
                    .with("hops", rrep.hop_count);
                net.record(rec);
                self.handle_rrep(rrep, from, net);
            }
            Frame::Rerr(rerr) => {
                let rec = net
                    .rec(TraceKind::Rerr, self.id)
                    .with("ev", "rx")
                    .with("from", from)
                    .with("unreachable", rerr.unreachable_string());
                net.record(rec);
                self.handle_rerr(rerr, from, net);
            }
            Frame::Hello(hello) => {
                let rec = net
                    .rec(TraceKind::Hello, self.id)
                    .with("ev", "rx")
                    .with("from", from)
                    .with("seq", hello.originator_seq);
                net.record(rec);
                self.handle_hello(hello, from, net);
            }
            Frame::Data(packet) => self.handle_data(packet, net),
        }
    }

    fn note_neighbor(&mut self, from: NodeId, net: &mut Net<'_>) {
        let timeout = net.cfg.hello_timeout();
        if let Some(rec) = self.neighbors.get_mut(&from) {
            rec.last_heard = net.now;
            let old = rec.timeout;
            rec.timeout = net.schedule_in(
                timeout,
                Action::NeighborTimeout {
                    node: self.id,
                    neighbor: from,
                },
            );
            net.cancel(old);
        } else {
            let handle = net.schedule_in(
                timeout,
                Action::NeighborTimeout {
                    node: self.id,
                    neighbor: from,
                },
            );
            self.neighbors.insert(
                from,
                NeighborRecord {
                    last_heard: net.now,
                    timeout: handle,
                },
            );
        }
    }

    // ----- data plane -----------------------------------------------------

    /// Entry point for locally generated traffic.
    pub(crate) fn originate_data(
        &mut self,
        packet: DataPacket,
        net: &mut Net<'_>,
    ) -> Result<(), SelfAddressedError> {
        if packet.dst == self.id {
            return Err(SelfAddressedError { node: self.id });
        }
        debug_assert_eq!(packet.src, self.id);
        let rec = net
            .rec(TraceKind::Send, self.id)
            .with("flow", packet.flow_id)
            .with("seq", packet.packet_seq)
            .with("src", packet.src)
            .with("dst", packet.dst);
        net.record(rec);
        self.expire_route_if_due(packet.dst, net);
        if self.table.valid_route(packet.dst).is_some() {
            self.send_on_route(packet, net);
        } else {
            self.buffer_and_discover(packet, net);
        }
        Ok(())
    }

    fn handle_data(&mut self, packet: DataPacket, net: &mut Net<'_>) {
        if packet.dst == self.id {
            let rec = net
                .rec(TraceKind::Recv, self.id)
                .with("flow", packet.flow_id)
                .with("seq", packet.packet_seq)
                .with("src", packet.src)
                .with("hops", packet.hop_trace_string());
            net.record(rec);
            return;
        }
        self.forward_data(packet, net);
    }

    /// Relay path: forward along a valid route, or report the failure
    /// back toward the source.
    fn forward_data(&mut self, mut packet: DataPacket, net: &mut Net<'_>) {
        let prev_hop = *packet
            .hop_trace
            .last()
            .expect("hop trace starts at the source");
        if packet.hop_trace.contains(&self.id) {
            // Diagnostic safeguard; loop freedom says this never fires.
            self.drop_data(&packet, DropCause::LoopDetected, net);
            return;
        }
        self.expire_route_if_due(packet.dst, net);
        let relay_allowed = net.may_relay(self.id, prev_hop, packet.src);
        if let Some(next_hop) = self
            .table
            .valid_route(packet.dst)
            .filter(|_| relay_allowed)
            .map(|e| e.next_hop)
        {
            packet.hop_trace.push(self.id);
            self.transmit_data(packet, next_hop, net);
        } else {
            self.drop_data(&packet, DropCause::NoRouteForwarding, net);
            let dest_seq = self
                .table
                .get(packet.dst)
                .map(|e| e.dest_seq)
                .unwrap_or(SequenceNumber(0));
            let rerr = Rerr {
                unreachable: vec![(packet.dst, dest_seq)],
            };
            self.send_rerr_unicast(rerr, prev_hop, net);
        }
    }

    /// Transmits along the already-chosen next hop and handles the three
    /// radio outcomes. A unicast link failure invalidates routes through
    /// the hop before the packet itself is dropped; rediscovery is the
    /// source's job.
    fn transmit_data(&mut self, packet: DataPacket, next_hop: NodeId, net: &mut Net<'_>) {
        match net.unicast(self.id, next_hop, Frame::Data(packet.clone())) {
            SendOutcome::Sent => {
                let rec = net
                    .rec(TraceKind::Fwd, self.id)
                    .with("flow", packet.flow_id)
                    .with("seq", packet.packet_seq)
                    .with("src", packet.src)
                    .with("dst", packet.dst)
                    .with("to", next_hop);
                net.record(rec);
                self.table
                    .touch(packet.dst, net.now + net.cfg.active_route_timeout);
            }
            SendOutcome::OutOfRange => {
                self.detect_link_break(next_hop, net);
                self.drop_data(&packet, DropCause::LinkBreak, net);
            }
            SendOutcome::QueueFull => {
                self.drop_data(&packet, DropCause::QueueOverflow, net);
            }
        }
    }

    /// Source transmission on a known-valid route.
    fn send_on_route(&mut self, packet: DataPacket, net: &mut Net<'_>) {
        let next_hop = self
            .table
            .valid_route(packet.dst)
            .expect("caller checked the route")
            .next_hop;
        self.transmit_data(packet, next_hop, net);
    }

    fn drop_data(&mut self, packet: &DataPacket, cause: DropCause, net: &mut Net<'_>) {
        let rec = net
            .rec(TraceKind::Drop, self.id)
            .with("flow", packet.flow_id)
            .with("seq", packet.packet_seq)
            .with("src", packet.src)
            .with("dst", packet.dst)
            .with("cause", cause);
        net.record(rec);
    }

    // ----- route discovery ------------------------------------------------

    fn buffer_and_discover(&mut self, packet: DataPacket, net: &mut Net<'_>) {
        let dst = packet.dst;
        net.schedule_in(
            net.cfg.buffer_timeout,
            Action::BufferTimeout {
                node: self.id,
                dst,
                flow: packet.flow_id,
                seq: packet.packet_seq,
            },
        );
        if let Some(p) = self.pending.get_mut(&dst) {
            if p.queue.len() >= net.cfg.pending_buffer_capacity {
                self.drop_data(&packet, DropCause::NoRoute, net);
                return;
            }
            p.queue.push_back(packet);
            return;
        }
        let mut queue = VecDeque::new();
        queue.push_back(packet);
        // Placeholder handle; send_rreq installs the real timeout.
        let timeout = net.schedule_in(
            SimDuration::ZERO,
            Action::DiscoveryTimeout { node: self.id, dst },
        );
        net.cancel(timeout);
        self.pending.insert(
            dst,
            PendingDiscovery {
                attempt: 0,
                timeout,
                queue,
            },
        );
        self.send_rreq(dst, net);
    }

    /// Broadcasts the request for the current attempt: a fresh id, a fresh
    /// own sequence number, and a lifespan from the expanding-ring schedule.
    fn send_rreq(&mut self, dst: NodeId, net: &mut Net<'_>) {
        let attempt = self.pending[&dst].attempt;
        let ttl = net.cfg.ttl_for_attempt(attempt);
        self.own_seq = self.own_seq.incremented();
        let rreq_id = self.next_rreq_id;
        self.next_rreq_id += 1;
        self.seen_rreqs
            .insert((self.id, rreq_id), net.now + net.cfg.seen_cache_lifetime);
        let dest_seq_known = self
            .table
            .get(dst)
            .filter(|e| e.seq_known)
            .map(|e| e.dest_seq);
        let rreq = Rreq {
            rreq_id,
            originator: self.id,
            originator_seq: self.own_seq,
            destination: dst,
            dest_seq_known,
            hop_count: 0,
            ttl,
        };
        let dseq_field = dest_seq_known.map_or_else(|| "unknown".to_string(), |s| s.to_string());
        match net.broadcast(self.id, Frame::Rreq(rreq)) {
            SendOutcome::Sent => {
                self.last_broadcast_at = Some(net.now);
                let rec = net
                    .rec(TraceKind::Rreq, self.id)
                    .with("ev", "tx")
                    .with("id", rreq_id)
                    .with("orig", self.id)
                    .with("oseq", self.own_seq)
                    .with("dst", dst)
                    .with("dseq", dseq_field)
                    .with("hops", 0)
                    .with("ttl", ttl);
                net.record(rec);
            }
            _ => self.drop_control("RREQ", "QUEUE_OVERFLOW", net),
        }
        let wait = net.cfg.reply_wait(ttl, net.radio.per_hop_latency);
        let handle = net.schedule_in(wait, Action::DiscoveryTimeout { node: self.id, dst });
        let p = self
            .pending
            .get_mut(&dst)
            .expect("pending discovery exists");
        p.timeout = handle;
    }

    pub(crate) fn on_discovery_timeout(&mut self, dst: NodeId, net: &mut Net<'_>) {
        let Some(p) = self.pending.get_mut(&dst) else {
            return;
        };
        if p.attempt < net.cfg.rreq_retries {
            p.attempt += 1;
            self.send_rreq(dst, net);
            return;
        }
        let p = self.pending.remove(&dst).expect("checked above");
        for packet in p.queue {
            self.drop_data(&packet, DropCause::NoRoute, net);
        }
    }

    pub(crate) fn on_buffer_timeout(
        &mut self,
        dst: NodeId,
        flow: u32,
        seq: u64,
        net: &mut Net<'_>,
    ) {
        let Some(p) = self.pending.get_mut(&dst) else {
            return;
        };
        let Some(idx) = p
            .queue
            .iter()
            .position(|pkt| pkt.flow_id == flow && pkt.packet_seq == seq)
        else {
            return;
        };
        let packet = p.queue.remove(idx).expect("index valid");
        self.drop_data(&packet, DropCause::BufferTimeout, net);
    }

    // ----- control plane --------------------------------------------------

    fn handle_rreq(&mut self, rreq: Rreq, prev_hop: NodeId, net: &mut Net<'_>) {
        if rreq.originator == self.id {
            return; // own flood echoed back
        }
        let key = (rreq.originator, rreq.rreq_id);
        self.seen_rreqs.retain(|_, &mut expires| expires > net.now);
        if self.seen_rreqs.contains_key(&key) {
            return; // duplicate, silently dropped
        }
        self.seen_rreqs
            .insert(key, net.now + net.cfg.seen_cache_lifetime);

        // Reverse route back to the originator through the previous hop.
        self.offer_route(
            rreq.originator,
            rreq.originator_seq,
            rreq.hop_count + 1,
            prev_hop,
            net.cfg.active_route_timeout,
            net,
        );

        if rreq.destination == self.id {
            // Raise own freshness to at least what the network asked about.
            if let Some(requested) = rreq.dest_seq_known {
                self.own_seq = self.own_seq.max_fresh(requested);
            }
            let rrep = Rrep {
                destination: self.id,
                dest_seq: self.own_seq,
                originator: rreq.originator,
                hop_count: 0,
                lifetime: net.cfg.active_route_timeout,
            };
            self.send_rrep_toward(rrep, net);
            return;
        }

        let relay_allowed = net.may_relay(self.id, prev_hop, rreq.originator);

        // A fresh-enough cached route lets an intermediate answer itself.
        if net.cfg.intermediate_rrep && relay_allowed {
            self.expire_route_if_due(rreq.destination, net);
            let fresh_cached = self.table.valid_route(rreq.destination).filter(|e| {
                e.seq_known
                    && rreq
                        .dest_seq_known
                        .is_none_or(|req| e.dest_seq == req || e.dest_seq.newer_than(req))
            });
            if let Some(entry) = fresh_cached {
                let rrep = Rrep {
                    destination: rreq.destination,
                    dest_seq: entry.dest_seq,
                    originator: rreq.originator,
                    hop_count: entry.hop_count,
                    lifetime: entry.expires_at.since(net.now),
                };
                let toward_dst = entry.next_hop;
                self.table.add_precursor(rreq.destination, prev_hop);
                self.table.add_precursor(rreq.originator, toward_dst);
                self.send_rrep_toward(rrep, net);
                return;
            }
        }

        if rreq.ttl > 1 {
            if !relay_allowed {
                return; // outside the cluster backbone in forwarding mode
            }
            let fwd = Rreq {
                hop_count: rreq.hop_count + 1,
                ttl: rreq.ttl - 1,
                ..rreq
            };
            let dseq_field = fwd
                .dest_seq_known
                .map_or_else(|| "unknown".to_string(), |s| s.to_string());
            match net.broadcast(self.id, Frame::Rreq(fwd.clone())) {
                SendOutcome::Sent => {
                    self.last_broadcast_at = Some(net.now);
                    let rec = net
                        .rec(TraceKind::Rreq, self.id)
                        .with("ev", "tx")
                        .with("id", fwd.rreq_id)
                        .with("orig", fwd.originator)
                        .with("oseq", fwd.originator_seq)
                        .with("dst", fwd.destination)
                        .with("dseq", dseq_field)
                        .with("hops", fwd.hop_count)
                        .with("ttl", fwd.ttl);
                    net.record(rec);
                }
                _ => self.drop_control("RREQ", "QUEUE_OVERFLOW", net),
            }
        } else {
            // Lifespan exhausted at the ring boundary.
            let rec = net
                .rec(TraceKind::Drop, self.id)
                .with("frame", "RREQ")
                .with("reason", DropCause::TtlExpired)
                .with("orig", rreq.originator)
                .with("id", rreq.rreq_id);
            net.record(rec);
        }
    }

    /// Unicasts a reply one hop along the reverse route to its originator.
    fn send_rrep_toward(&mut self, rrep: Rrep, net: &mut Net<'_>) {
        self.expire_route_if_due(rrep.originator, net);
        let Some(next_hop) = self.table.valid_route(rrep.originator).map(|e| e.next_hop) else {
            self.drop_control("RREP", "REPLY_ORPHANED", net);
            return;
        };
        match net.unicast(self.id, next_hop, Frame::Rrep(rrep.clone())) {
            SendOutcome::Sent => {
                let rec = net
                    .rec(TraceKind::Rrep, self.id)
                    .with("ev", "tx")
                    .with("to", next_hop)
                    .with("dst", rrep.destination)
                    .with("dseq", rrep.dest_seq)
                    .with("orig", rrep.originator)
                    .with("hops", rrep.hop_count);
                net.record(rec);
            }
            SendOutcome::OutOfRange => {
                self.detect_link_break(next_hop, net);
            }
            SendOutcome::QueueFull => {
                self.drop_control("RREP", "QUEUE_OVERFLOW", net);
            }
        }
    }

    fn handle_rrep(&mut self, rrep: Rrep, prev_hop: NodeId, net: &mut Net<'_>) {
        let hops = rrep.hop_count + 1;
        self.offer_route(
            rrep.destination,
            rrep.dest_seq,
            hops,
            prev_hop,
            rrep.lifetime,
            net,
        );

        if rrep.originator == self.id {
            // Discovery answered: push everything that was waiting.
            if let Some(p) = self.pending.remove(&rrep.destination) {
                net.cancel(p.timeout);
                for packet in p.queue {
                    self.expire_route_if_due(packet.dst, net);
                    if self.table.valid_route(packet.dst).is_some() {
                        self.send_on_route(packet, net);
                    } else {
                        // Route died between reply and flush; try again.
                        self.buffer_and_discover(packet, net);
                    }
                }
            }
            return;
        }

        // Forward one hop toward the originator, remembering who routes
        // through us in each direction.
        self.expire_route_if_due(rrep.originator, net);
        let Some(toward_orig) = self.table.valid_route(rrep.originator).map(|e| e.next_hop) else {
            self.drop_control("RREP", "REPLY_ORPHANED", net);
            return;
        };
        self.table.add_precursor(rrep.destination, toward_orig);
        self.table.add_precursor(rrep.originator, prev_hop);
        let fwd = Rrep {
            hop_count: hops,
            ..rrep
        };
        match net.unicast(self.id, toward_orig, Frame::Rrep(fwd.clone())) {
            SendOutcome::Sent => {
                let rec = net
                    .rec(TraceKind::Rrep, self.id)
                    .with("ev", "tx")
                    .with("to", toward_orig)
                    .with("dst", fwd.destination)
                    .with("dseq", fwd.dest_seq)
                    .with("orig", fwd.originator)
                    .with("hops", fwd.hop_count);
                net.record(rec);
            }
            SendOutcome::OutOfRange => {
                self.detect_link_break(toward_orig, net);
            }
            SendOutcome::QueueFull => {
                self.drop_control("RREP", "QUEUE_OVERFLOW", net);
            }
        }
    }

    fn handle_rerr(&mut self, rerr: Rerr, prev_hop: NodeId, net: &mut Net<'_>) {
        let affected = self.table.invalidate_from_rerr(prev_hop, &rerr.unreachable);
        self.after_invalidation(affected, net);
    }

    fn handle_hello(&mut self, hello: Hello, prev_hop: NodeId, net: &mut Net<'_>) {
        debug_assert_eq!(hello.originator, prev_hop);
        // A hello doubles as a one-hop route advertisement.
        self.offer_route(
            prev_hop,
            hello.originator_seq,
            1,
            prev_hop,
            net.cfg.hello_timeout(),
            net,
        );
    }

    /// Periodic beacon, suppressed whenever some other broadcast already
    /// proved this node alive within the current interval.
    pub(crate) fn on_hello_tick(&mut self, net: &mut Net<'_>) {
        let due = self
            .last_broadcast_at
            .is_none_or(|t| net.now.since(t) >= net.cfg.hello_interval);
        if due {
            let hello = Hello {
                originator: self.id,
                originator_seq: self.own_seq,
            };
            match net.broadcast(self.id, Frame::Hello(hello)) {
                SendOutcome::Sent => {
                    self.last_broadcast_at = Some(net.now);
                    let rec = net
                        .rec(TraceKind::Hello, self.id)
                        .with("ev", "tx")
                        .with("seq", self.own_seq);
                    net.record(rec);
                }
                _ => self.drop_control("HELLO", "QUEUE_OVERFLOW", net),
            }
        }
        net.schedule_in(net.cfg.hello_interval, Action::HelloTick { node: self.id });
    }

    pub(crate) fn on_neighbor_timeout(&mut self, neighbor: NodeId, net: &mut Net<'_>) {
        // Timers are cancelled on refresh, so firing means true silence.
        self.detect_link_break(neighbor, net);
    }

    /// A neighbor is gone: every valid route through it becomes invalid
    /// with a bumped sequence number, and precursors are told via a
    /// route error that propagates recursively.
    pub(crate) fn detect_link_break(&mut self, lost_neighbor: NodeId, net: &mut Net<'_>) {
        if let Some(rec) = self.neighbors.remove(&lost_neighbor) {
            net.cancel(rec.timeout);
        }
        let affected = self.table.invalidate_via(lost_neighbor);
        self.after_invalidation(affected, net);
    }

    /// Traces invalidations and notifies precursors when there are any.
    fn after_invalidation(
        &mut self,
        affected: Vec<(NodeId, SequenceNumber, std::collections::BTreeSet<NodeId>)>,
        net: &mut Net<'_>,
    ) {
        if affected.is_empty() {
            return;
        }
        let mut any_precursor = false;
        let mut unreachable = Vec::new();
        for (dst, seq, precursors) in &affected {
            let rec = net
                .rec(TraceKind::Rtbl, self.id)
                .with("op", "invalidate")
                .with("dst", dst)
                .with("seq", seq)
                .with("state", "invalid");
            net.record(rec);
            unreachable.push((*dst, *seq));
            any_precursor |= !precursors.is_empty();
        }
        if !any_precursor {
            return; // nothing to notify
        }
        let rerr = Rerr { unreachable };
        match net.broadcast(self.id, Frame::Rerr(rerr.clone())) {
            SendOutcome::Sent => {
                self.last_broadcast_at = Some(net.now);
                let rec = net
                    .rec(TraceKind::Rerr, self.id)
                    .with("ev", "tx")
                    .with("unreachable", rerr.unreachable_string());
                net.record(rec);
            }
            _ => self.drop_control("RERR", "QUEUE_OVERFLOW", net),
        }
    }

    /// Route error aimed at one upstream node (forwarding failure).
    fn send_rerr_unicast(&mut self, rerr: Rerr, to: NodeId, net: &mut Net<'_>) {
        match net.unicast(self.id, to, Frame::Rerr(rerr.clone())) {
            SendOutcome::Sent => {
                let rec = net
                    .rec(TraceKind::Rerr, self.id)
                    .with("ev", "tx")
                    .with("to", to)
                    .with("unreachable", rerr.unreachable_string());
                net.record(rec);
            }
            SendOutcome::OutOfRange => {
                self.detect_link_break(to, net);
            }
            SendOutcome::QueueFull => {
                self.drop_control("RERR", "QUEUE_OVERFLOW", net);
            }
        }
    }

    // ----- shared plumbing --------------------------------------------------

    /// Applies the freshness rule to an offered route and traces the result.
    /// Equal offers from the stored next hop just refresh the lifetime.
    fn offer_route(
        &mut self,
        dst: NodeId,
        seq: SequenceNumber,
        hops: u32,
        next_hop: NodeId,
        lifetime: SimDuration,
        net: &mut Net<'_>,
    ) -> bool {
        let expires = net.now + lifetime;
        match self.table.update(dst, seq, hops, next_hop, expires) {
            UpdateOutcome::Accepted => {
                let rec = net
                    .rec(TraceKind::Rtbl, self.id)
                    .with("op", "update")
                    .with("dst", dst)
                    .with("next", next_hop)
                    .with("seq", seq)
                    .with("hops", hops)
                    .with("state", "valid");
                net.record(rec);
                true
            }
            UpdateOutcome::RejectedStale => {
                let rec = net
                    .rec(TraceKind::Rtbl, self.id)
                    .with("op", "reject_stale")
                    .with("dst", dst)
                    .with("offered_seq", seq)
                    .with("offered_hops", hops);
                net.record(rec);
                false
            }
            UpdateOutcome::RejectedNoImprovement => {
                let same_route = self
                    .table
                    .get(dst)
                    .is_some_and(|e| e.next_hop == next_hop && e.dest_seq == seq);
                if same_route {
                    self.table.touch(dst, expires);
                }
                false
            }
        }
    }

    fn expire_route_if_due(&mut self, dst: NodeId, net: &mut Net<'_>) {
        if self.table.expire_if_due(dst, net.now) {
            let seq = self.table.get(dst).expect("entry exists").dest_seq;
            let rec = net
                .rec(TraceKind::Rtbl, self.id)
                .with("op", "expire")
                .with("dst", dst)
                .with("seq", seq)
                .with("state", "invalid");
            net.record(rec);
        }
    }

    fn drop_control(&mut self, frame: &str, reason: &str, net: &mut Net<'_>) {
        let rec = net
            .rec(TraceKind::Drop, self.id)
            .with("frame", frame)
            .with("reason", reason);
        net.record(rec);
    }
}
