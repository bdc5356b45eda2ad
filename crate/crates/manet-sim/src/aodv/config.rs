//! Protocol constants. Defaults follow widely published values; every one
//! of them can be overridden from the scenario file's `aodv` section.

use serde::{Deserialize, Serialize};

use crate::time::SimDuration;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AodvConfig {
    /// Seconds between hello broadcasts while a node is up.
    pub hello_interval: SimDuration,
    /// Hellos that may be missed before a neighbor counts as lost.
    pub allowed_hello_loss: u32,
    /// Lifetime granted to a route each time it is installed or used.
    pub active_route_timeout: SimDuration,
    /// Lifespans for successive discovery attempts; attempts beyond the
    /// schedule use `net_diameter`.
    pub ttl_schedule: Vec<u32>,
    pub net_diameter: u32,
    /// Additional discovery attempts after the initial one.
    pub rreq_retries: u32,
    /// Reply wait per attempt = 2 * per-hop latency * ttl * this factor.
    pub traversal_factor: f64,
    /// How long a (originator, rreq id) pair suppresses reprocessing.
    pub seen_cache_lifetime: SimDuration,
    /// Data packets buffered per destination while discovery runs.
    pub pending_buffer_capacity: usize,
    /// Buffered packets older than this drop with their own cause.
    pub buffer_timeout: SimDuration,
    /// Whether intermediate nodes with a fresh cached route may answer a
    /// route request themselves. Disable to measure the multiple-reply
    /// control overhead the protocol otherwise avoids.
    pub intermediate_rrep: bool,
}

impl Default for AodvConfig {
    fn default() -> Self {
        AodvConfig {
            hello_interval: SimDuration::from_secs_f64(1.0),
            allowed_hello_loss: 2,
            active_route_timeout: SimDuration::from_secs_f64(3.0),
            ttl_schedule: vec![1, 3, 5, 7],
            net_diameter: 35,
            rreq_retries: 2,
            traversal_factor: 20.0,
            seen_cache_lifetime: SimDuration::from_secs_f64(3.0),
            pending_buffer_capacity: 64,
            buffer_timeout: SimDuration::from_secs_f64(30.0),
            intermediate_rrep: true,
        }
    }
}

impl AodvConfig {
    /// Neighbor timeout: allowed losses times the hello interval.
    pub fn hello_timeout(&self) -> SimDuration {
        self.hello_interval
            .saturating_mul(self.allowed_hello_loss as u64)
    }

    /// Lifespan for the given (0-based) discovery attempt.
    pub fn ttl_for_attempt(&self, attempt: u32) -> u32 {
        self.ttl_schedule
            .get(attempt as usize)
            .copied()
            .unwrap_or(self.net_diameter)
            .max(1)
    }

    /// How long to wait for a reply before retrying, proportional to the
    /// ring being searched.
    pub fn reply_wait(&self, ttl: u32, per_hop_latency: SimDuration) -> SimDuration {
        let secs = 2.0 * per_hop_latency.as_secs_f64() * ttl as f64 * self.traversal_factor;
        SimDuration::from_secs_f64(secs)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.hello_interval.is_zero() {
            return Err("aodv.hello_interval must be positive".into());
        }
        if self.allowed_hello_loss == 0 {
            return Err("aodv.allowed_hello_loss must be at least 1".into());
        }
        if self.active_route_timeout.is_zero() {
            return Err("aodv.active_route_timeout must be positive".into());
        }
        if self.ttl_schedule.is_empty() || self.ttl_schedule.contains(&0) {
            return Err("aodv.ttl_schedule must be non-empty with positive lifespans".into());
        }
        if self.net_diameter == 0 {
            return Err("aodv.net_diameter must be positive".into());
        }
        if !(self.traversal_factor > 0.0 && self.traversal_factor.is_finite()) {
            return Err("aodv.traversal_factor must be positive".into());
        }
        if self.pending_buffer_capacity == 0 {
            return Err("aodv.pending_buffer_capacity must be positive".into());
        }
        Ok(())
    }
}
