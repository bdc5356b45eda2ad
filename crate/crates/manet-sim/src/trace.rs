//! Timestamped simulation events and their on-disk form.
//!
//! One record per line, tab separated. The first three columns are fixed —
//! time with six decimal places, record kind, node — and the remainder are
//! `key=value` pairs. The format is greppable, diff-stable and round-trips
//! losslessly, which is what the golden and determinism tests lean on.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use thiserror::Error;

use crate::time::SimTime;
use crate::NodeId;

/// What a trace line describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TraceKind {
    /// Data packet originated by the traffic layer.
    Send,
    /// Data packet delivered at its destination.
    Recv,
    /// Data packet transmitted one hop (at the source or a relay).
    Fwd,
    /// Packet discarded; data drops carry `cause=`, control drops `reason=`.
    Drop,
    Rreq,
    Rrep,
    Rerr,
    Hello,
    /// Routing-table change.
    Rtbl,
    /// Cluster role change or formation-complete marker.
    Clst,
    /// Sampled distance to the reference node.
    Dist,
}

impl TraceKind {
    pub const ALL: [TraceKind; 11] = [
        TraceKind::Send,
        TraceKind::Recv,
        TraceKind::Fwd,
        TraceKind::Drop,
        TraceKind::Rreq,
        TraceKind::Rrep,
        TraceKind::Rerr,
        TraceKind::Hello,
        TraceKind::Rtbl,
        TraceKind::Clst,
        TraceKind::Dist,
    ];

    fn as_str(self) -> &'static str {
        match self {
            TraceKind::Send => "SEND",
            TraceKind::Recv => "RECV",
            TraceKind::Fwd => "FWD",
            TraceKind::Drop => "DROP",
            TraceKind::Rreq => "RREQ",
            TraceKind::Rrep => "RREP",
            TraceKind::Rerr => "RERR",
            TraceKind::Hello => "HELLO",
            TraceKind::Rtbl => "RTBL",
            TraceKind::Clst => "CLST",
            TraceKind::Dist => "DIST",
        }
    }
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TraceKind {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        TraceKind::ALL
            .iter()
            .copied()
            .find(|k| k.as_str() == s)
            .ok_or(())
    }
}

/// Why a data packet was discarded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DropCause {
    /// Route discovery exhausted its retries, or the pending buffer was full.
    NoRoute,
    /// A relay held no valid route for the packet's destination.
    NoRouteForwarding,
    /// A unicast transmission failed because the next hop left radio range.
    LinkBreak,
    /// The sender's outbound queue was at capacity.
    QueueOverflow,
    /// Flood lifespan ran out (route requests at the ring boundary).
    TtlExpired,
    /// Packet sat in the pending buffer longer than the configured limit.
    BufferTimeout,
    /// Diagnostic safeguard; a packet revisited a node. Must never happen.
    LoopDetected,
}

impl DropCause {
    pub const ALL: [DropCause; 7] = [
        DropCause::NoRoute,
        DropCause::NoRouteForwarding,
        DropCause::LinkBreak,
        DropCause::QueueOverflow,
        DropCause::TtlExpired,
        DropCause::BufferTimeout,
        DropCause::LoopDetected,
    ];

    fn as_str(self) -> &'static str {
        match self {
            DropCause::NoRoute => "NO_ROUTE",
            DropCause::NoRouteForwarding => "NO_ROUTE_FORWARDING",
            DropCause::LinkBreak => "LINK_BREAK",
            DropCause::QueueOverflow => "QUEUE_OVERFLOW",
            DropCause::TtlExpired => "TTL_EXPIRED",
            DropCause::BufferTimeout => "BUFFER_TIMEOUT",
            DropCause::LoopDetected => "LOOP_DETECTED",
        }
    }
}

impl fmt::Display for DropCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DropCause {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        DropCause::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or(())
    }
}

/// One timestamped simulation event.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub time: SimTime,
    pub kind: TraceKind,
    pub node: NodeId,
    pub fields: Vec<(String, String)>,
}

impl TraceRecord {
    pub fn new(time: SimTime, kind: TraceKind, node: NodeId) -> Self {
        TraceRecord {
            time,
            kind,
            node,
            fields: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        let value = value.to_string();
        debug_assert!(
            !key.contains(['\t', '\n', '=']) && !value.contains(['\t', '\n']),
            "trace fields must stay tab-free: {key}={value}"
        );
        self.fields.push((key.to_string(), value));
        self
    }

    pub fn field(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn to_line(&self) -> String {
        let mut line = format!("{}\t{}\t{}", self.time, self.kind, self.node);
        for (k, v) in &self.fields {
            line.push('\t');
            line.push_str(k);
            line.push('=');
            line.push_str(v);
        }
        line
    }

    pub fn parse_line(line: &str, line_number: usize) -> Result<Self, TraceParseError> {
        let bad = |what: &str| TraceParseError {
            line: line_number,
            message: what.to_string(),
        };
        let mut cols = line.split('\t');
        let time = cols
            .next()
            .filter(|s| !s.is_empty())
            .ok_or_else(|| bad("missing time column"))?
            .parse::<SimTime>()
            .map_err(|e| bad(&format!("bad time: {e}")))?;
        let kind = cols
            .next()
            .ok_or_else(|| bad("missing kind column"))?
            .parse::<TraceKind>()
            .map_err(|()| bad("unknown record kind"))?;
        let node = cols
            .next()
            .ok_or_else(|| bad("missing node column"))?
            .parse::<NodeId>()
            .map_err(|e| bad(&format!("bad node id: {e}")))?;
        let mut record = TraceRecord::new(time, kind, node);
        for col in cols {
            let (k, v) = col
                .split_once('=')
                .ok_or_else(|| bad(&format!("field `{col}` is not key=value")))?;
            if k.is_empty() {
                return Err(bad("empty field key"));
            }
            record.fields.push((k.to_string(), v.to_string()));
        }
        Ok(record)
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("trace line {line}: {message}")]
pub struct TraceParseError {
    pub line: usize,
    pub message: String,
}

/// Append-only record of everything a run did, in emission order.
#[derive(Debug, Default, Clone)]
pub struct TraceLog {
    records: Vec<TraceRecord>,
}

impl TraceLog {
    pub fn new() -> Self {
        TraceLog::default()
    }

    pub fn push(&mut self, record: TraceRecord) {
        debug_assert!(
            self.records
                .last()
                .is_none_or(|prev| prev.time <= record.time),
            "trace timestamps must be non-decreasing"
        );
        self.records.push(record);
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_line());
            out.push('\n');
        }
        out
    }

    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        for r in &self.records {
            writeln!(w, "{}", r.to_line())?;
        }
        Ok(())
    }

    /// Parses a full trace file; errors name the offending line (1-based).
    pub fn parse_text(text: &str) -> Result<TraceLog, TraceParseError> {
        let mut log = TraceLog::new();
        for (idx, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            log.records.push(TraceRecord::parse_line(line, idx + 1)?);
        }
        Ok(log)
    }
}
