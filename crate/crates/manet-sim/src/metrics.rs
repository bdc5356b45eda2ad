//! Post-run measurement: delivery ratio, drop accounting by cause,
//! discovery latency, control overhead, and the distance-versus-time
//! series. All of it is a pure pass over the trace, safe to run on any
//! thread once the run has finished.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::mobility::Mobility;
use crate::scenario::Scenario;
use crate::time::{SimDuration, SimTime};
use crate::trace::{DropCause, TraceKind, TraceLog, TraceParseError, TraceRecord};
use crate::NodeId;

/// Data-packet drop tally, one counter per cause.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DropCounts {
    pub no_route: u64,
    pub no_route_forwarding: u64,
    pub link_break: u64,
    pub queue_overflow: u64,
    pub ttl_expired: u64,
    pub buffer_timeout: u64,
    pub loop_detected: u64,
}

impl DropCounts {
    pub fn add(&mut self, cause: DropCause) {
        *self.slot(cause) += 1;
    }

    fn slot(&mut self, cause: DropCause) -> &mut u64 {
        match cause {
            DropCause::NoRoute => &mut self.no_route,
            DropCause::NoRouteForwarding => &mut self.no_route_forwarding,
            DropCause::LinkBreak => &mut self.link_break,
            DropCause::QueueOverflow => &mut self.queue_overflow,
            DropCause::TtlExpired => &mut self.ttl_expired,
            DropCause::BufferTimeout => &mut self.buffer_timeout,
            DropCause::LoopDetected => &mut self.loop_detected,
        }
    }

    pub fn get(&self, cause: DropCause) -> u64 {
        match cause {
            DropCause::NoRoute => self.no_route,
            DropCause::NoRouteForwarding => self.no_route_forwarding,
            DropCause::LinkBreak => self.link_break,
            DropCause::QueueOverflow => self.queue_overflow,
            DropCause::TtlExpired => self.ttl_expired,
            DropCause::BufferTimeout => self.buffer_timeout,
            DropCause::LoopDetected => self.loop_detected,
        }
    }

    pub fn total(&self) -> u64 {
        DropCause::ALL.iter().map(|&c| self.get(c)).sum()
    }
}

/// Control transmissions by message kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ControlCounts {
    pub rreq: u64,
    pub rrep: u64,
    pub rerr: u64,
    pub hello: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowMetrics {
    pub src: NodeId,
    pub dst: NodeId,
    pub sent: u64,
    pub delivered: u64,
    /// First route reply arriving back at the flow's source for its
    /// destination; absent when the route never needed discovering.
    pub first_route_established_at: Option<SimTime>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub sent: u64,
    pub delivered: u64,
    /// Packets originated but neither delivered nor dropped by run end:
    /// still buffered or still in the air.
    pub in_flight: u64,
    /// `None` when nothing was sent; reported as "undefined" rather than
    /// 0 or 1 so sweeps cannot misread an idle run.
    pub delivery_ratio: Option<f64>,
    pub drops: DropCounts,
    pub control_drops: u64,
    pub reply_orphaned: u64,
    pub stale_rejected: u64,
    pub control_tx: ControlCounts,
    pub latency_mean_s: Option<f64>,
    pub latency_p50_s: Option<f64>,
    pub latency_p95_s: Option<f64>,
    pub first_rreq_at: Option<SimTime>,
    pub cluster_formed_at: Option<SimTime>,
    pub flows: BTreeMap<u32, FlowMetrics>,
}

impl MetricsReport {
    /// The accounting identity every run must satisfy.
    pub fn conserves_packets(&self) -> bool {
        self.sent == self.delivered + self.drops.total() + self.in_flight
    }

    /// Flat `key=value` text block, one line per metric.
    pub fn to_text(&self) -> String {
        fn opt_f64(v: Option<f64>) -> String {
            v.map_or_else(|| "undefined".into(), |x| format!("{x:.6}"))
        }
        fn opt_time(v: Option<SimTime>) -> String {
            v.map_or_else(|| "undefined".into(), |t| t.to_string())
        }
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        };
        line("sent", self.sent.to_string());
        line("delivered", self.delivered.to_string());
        line("in_flight", self.in_flight.to_string());
        line("delivery_ratio", opt_f64(self.delivery_ratio));
        line("drop.no_route", self.drops.no_route.to_string());
        line(
            "drop.no_route_forwarding",
            self.drops.no_route_forwarding.to_string(),
        );
        line("drop.link_break", self.drops.link_break.to_string());
        line("drop.queue_overflow", self.drops.queue_overflow.to_string());
        line("drop.ttl_expired", self.drops.ttl_expired.to_string());
        line("drop.buffer_timeout", self.drops.buffer_timeout.to_string());
        line("drop.loop_detected", self.drops.loop_detected.to_string());
        line("control_drops", self.control_drops.to_string());
        line("reply_orphaned", self.reply_orphaned.to_string());
        line("stale_rejected", self.stale_rejected.to_string());
        line("control.rreq", self.control_tx.rreq.to_string());
        line("control.rrep", self.control_tx.rrep.to_string());
        line("control.rerr", self.control_tx.rerr.to_string());
        line("control.hello", self.control_tx.hello.to_string());
        line("latency.mean_s", opt_f64(self.latency_mean_s));
        line("latency.p50_s", opt_f64(self.latency_p50_s));
        line("latency.p95_s", opt_f64(self.latency_p95_s));
        line("first_rreq_at", opt_time(self.first_rreq_at));
        line("cluster.formed_at", opt_time(self.cluster_formed_at));
        for (id, f) in &self.flows {
            line(&format!("flow.{id}.src"), f.src.to_string());
            line(&format!("flow.{id}.dst"), f.dst.to_string());
            line(&format!("flow.{id}.sent"), f.sent.to_string());
            line(&format!("flow.{id}.delivered"), f.delivered.to_string());
            line(
                &format!("flow.{id}.first_route_established_at"),
                opt_time(f.first_route_established_at),
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Nearest-rank percentile over a sorted slice.
fn percentile(sorted: &[f64], p: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let rank = ((p / 100.0) * sorted.len() as f64).ceil() as usize;
    Some(sorted[rank.clamp(1, sorted.len()) - 1])
}

/// Aggregates a finished run's trace into a [`MetricsReport`].
pub fn compute_metrics(records: &[TraceRecord]) -> MetricsReport {
    #[derive(Clone, Copy, PartialEq)]
    enum PacketState {
        InFlight,
        Delivered,
        Dropped,
    }
    let mut packets: BTreeMap<(u32, u64), (SimTime, PacketState)> = BTreeMap::new();
    let mut report = MetricsReport {
        sent: 0,
        delivered: 0,
        in_flight: 0,
        delivery_ratio: None,
        drops: DropCounts::default(),
        control_drops: 0,
        reply_orphaned: 0,
        stale_rejected: 0,
        control_tx: ControlCounts::default(),
        latency_mean_s: None,
        latency_p50_s: None,
        latency_p95_s: None,
        first_rreq_at: None,
        cluster_formed_at: None,
        flows: BTreeMap::new(),
    };
    let mut latencies: Vec<f64> = Vec::new();

    let packet_key = |r: &TraceRecord| -> Option<(u32, u64)> {
        let flow = r.field("flow")?.parse().ok()?;
        let seq = r.field("seq")?.parse().ok()?;
        Some((flow, seq))
    };

    for r in records {
        match r.kind {
            TraceKind::Send => {
                let Some(key) = packet_key(r) else { continue };
                report.sent += 1;
                packets.insert(key, (r.time, PacketState::InFlight));
                let src: NodeId = r
                    .field("src")
                    .and_then(|v| v.parse().ok())
                    .unwrap_or(r.node);
                let dst: NodeId = r
                    .field("dst")
                    .and_then(|v| v.parse().ok())
                    .unwrap_or(NodeId(0));
                let flow = report.flows.entry(key.0).or_insert(FlowMetrics {
                    src,
                    dst,
                    sent: 0,
                    delivered: 0,
                    first_route_established_at: None,
                });
                flow.sent += 1;
            }
            TraceKind::Recv => {
                let Some(key) = packet_key(r) else { continue };
                report.delivered += 1;
                if let Some((sent_at, state)) = packets.get_mut(&key) {
                    *state = PacketState::Delivered;
                    latencies.push(r.time.since(*sent_at).as_secs_f64());
                }
                if let Some(flow) = report.flows.get_mut(&key.0) {
                    flow.delivered += 1;
                }
            }
            TraceKind::Drop => {
                if let Some(key) = packet_key(r) {
                    if let Some(cause) = r.field("cause").and_then(|v| v.parse().ok()) {
                        report.drops.add(cause);
                        if let Some((_, state)) = packets.get_mut(&key) {
                            *state = PacketState::Dropped;
                        }
                    }
                } else if r.field("frame").is_some() {
                    report.control_drops += 1;
                    if r.field("reason") == Some("REPLY_ORPHANED") {
                        report.reply_orphaned += 1;
                    }
                }
            }
            TraceKind::Rreq => {
                if r.field("ev") == Some("tx") {
                    report.control_tx.rreq += 1;
                    report.first_rreq_at.get_or_insert(r.time);
                }
            }
            TraceKind::Rrep => match r.field("ev") {
                Some("tx") => report.control_tx.rrep += 1,
                Some("rx") => {
                    // A reply reaching its originator establishes the route.
                    let orig: Option<NodeId> = r.field("orig").and_then(|v| v.parse().ok());
                    let dst: Option<NodeId> = r.field("dst").and_then(|v| v.parse().ok());
                    if orig == Some(r.node) {
                        for f in report.flows.values_mut() {
                            if f.src == r.node && Some(f.dst) == dst {
                                f.first_route_established_at.get_or_insert(r.time);
                            }
                        }
                    }
                }
                _ => {}
            },
            TraceKind::Rerr => {
                if r.field("ev") == Some("tx") {
                    report.control_tx.rerr += 1;
                }
            }
            TraceKind::Hello => {
                if r.field("ev") == Some("tx") {
                    report.control_tx.hello += 1;
                }
            }
            TraceKind::Rtbl => {
                if r.field("op") == Some("reject_stale") {
                    report.stale_rejected += 1;
                }
            }
            TraceKind::Clst => {
                if r.field("event") == Some("formed") {
                    report.cluster_formed_at.get_or_insert(r.time);
                }
            }
            TraceKind::Fwd | TraceKind::Dist => {}
        }
    }

    report.in_flight = packets
        .values()
        .filter(|(_, s)| *s == PacketState::InFlight)
        .count() as u64;
    if report.sent > 0 {
        report.delivery_ratio = Some(report.delivered as f64 / report.sent as f64);
    }
    if !latencies.is_empty() {
        latencies.sort_by(|a, b| a.partial_cmp(b).expect("latencies are finite"));
        report.latency_mean_s = Some(latencies.iter().sum::<f64>() / latencies.len() as f64);
        report.latency_p50_s = percentile(&latencies, 50.0);
        report.latency_p95_s = percentile(&latencies, 95.0);
    }
    report
}

/// Recomputes metrics from a serialized trace; a malformed line fails
/// with its line number.
pub fn compute_metrics_from_text(text: &str) -> Result<MetricsReport, TraceParseError> {
    let log = TraceLog::parse_text(text)?;
    Ok(compute_metrics(log.records()))
}

#[derive(Debug, Error, PartialEq)]
pub enum DistanceSeriesError {
    #[error("reference node {0} is not part of the scenario")]
    UnknownReference(NodeId),
    #[error("sample step must be positive")]
    ZeroStep,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceSample {
    pub t: SimTime,
    pub node: NodeId,
    pub reference: NodeId,
    pub meters: f64,
}

/// Distance of every node to `reference`, sampled every `sample_dt` from
/// time zero through the scenario end. Plot data for the mobility story.
pub fn distance_series(
    scenario: &Scenario,
    reference: NodeId,
    sample_dt: SimDuration,
) -> Result<Vec<DistanceSample>, DistanceSeriesError> {
    if sample_dt.is_zero() {
        return Err(DistanceSeriesError::ZeroStep);
    }
    if !scenario.node_ids().contains(&reference) {
        return Err(DistanceSeriesError::UnknownReference(reference));
    }
    let mobility = Mobility::new(&scenario.node_positions(), &scenario.waypoints)
        .expect("validated scenario compiles");
    let mut samples = Vec::new();
    let mut t = SimTime::ZERO;
    while t <= scenario.sim_end {
        for node in mobility.node_ids() {
            if node == reference {
                continue;
            }
            let meters = mobility
                .distance(node, reference, t)
                .expect("scenario nodes exist");
            samples.push(DistanceSample {
                t,
                node,
                reference,
                meters,
            });
        }
        t += sample_dt;
    }
    Ok(samples)
}

/// The same series recovered from a recorded trace's DIST records, for
/// when only the trace of a finished run is at hand.
pub fn distance_series_from_trace(records: &[TraceRecord]) -> Vec<DistanceSample> {
    records
        .iter()
        .filter(|r| r.kind == TraceKind::Dist)
        .filter_map(|r| {
            Some(DistanceSample {
                t: r.time,
                node: r.node,
                reference: r.field("ref")?.parse().ok()?,
                meters: r.field("dist_m")?.parse().ok()?,
            })
        })
        .collect()
}

/// Comma-separated plot data with a header row.
pub fn distance_series_csv(samples: &[DistanceSample]) -> String {
    let mut out = String::from("time,node,ref,distance_m\n");
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{:.3}\n",
            s.t, s.node, s.reference, s.meters
        ));
    }
    out
}
