//! Deterministic event scheduling: a monotone clock and an ordered queue.
//!
//! Events fire strictly in `(fire_at, insertion_seq)` order, so two events
//! scheduled for the same instant fire in the order they were scheduled.
//! The only other ingredient of reproducibility, the seeded random source,
//! lives in [`crate::rng`].

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use thiserror::Error;

use crate::time::{SimDuration, SimTime};

/// Ticket returned by [`EventQueue::schedule`]; lets the owner cancel a
/// pending event (used for timer resets, e.g. on hello receipt).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EventHandle(u64);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot schedule event at {fire_at} before current clock {now}")]
pub struct PastEventError {
    pub fire_at: SimTime,
    pub now: SimTime,
}

struct Entry<A> {
    fire_at: SimTime,
    seq: u64,
    action: A,
}

// Ordering considers only (fire_at, seq); the payload never influences it.
impl<A> PartialEq for Entry<A> {
    fn eq(&self, other: &Self) -> bool {
        self.fire_at == other.fire_at && self.seq == other.seq
    }
}
impl<A> Eq for Entry<A> {}
impl<A> PartialOrd for Entry<A> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<A> Ord for Entry<A> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap, we want the earliest first.
        (other.fire_at, other.seq).cmp(&(self.fire_at, self.seq))
    }
}

/// The discrete-event core: clock plus pending-event heap.
pub struct EventQueue<A> {
    now: SimTime,
    heap: BinaryHeap<Entry<A>>,
    live: HashSet<u64>,
    next_seq: u64,
}

impl<A> Default for EventQueue<A> {
    fn default() -> Self {
        Self::new()
    }
}

impl<A> EventQueue<A> {
    pub fn new() -> Self {
        EventQueue {
            now: SimTime::ZERO,
            heap: BinaryHeap::new(),
            live: HashSet::new(),
            next_seq: 0,
        }
    }

    pub fn now(&self) -> SimTime {
        self.now
    }

    /// Number of pending (not cancelled, not fired) events.
    pub fn pending(&self) -> usize {
        self.live.len()
    }

    pub fn schedule(&mut self, fire_at: SimTime, action: A) -> Result<EventHandle, PastEventError> {
        if fire_at < self.now {
            return Err(PastEventError {
                fire_at,
                now: self.now,
            });
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.live.insert(seq);
        self.heap.push(Entry {
            fire_at,
            seq,
            action,
        });
        Ok(EventHandle(seq))
    }

    pub fn schedule_in(&mut self, delay: SimDuration, action: A) -> EventHandle {
        self.schedule(self.now + delay, action)
            .expect("now + delay is never in the past")
    }

    /// Removes a pending event. Returns `true` if it was still pending,
    /// `false` if it already fired or was already cancelled.
    pub fn cancel(&mut self, handle: EventHandle) -> bool {
        self.live.remove(&handle.0)
    }

    /// Pops the next event with `fire_at <= t_end`, advancing the clock to
    /// its fire time. Cancelled entries are discarded silently. Returns
    /// `None` once nothing is due at or before `t_end`.
    pub fn pop_due(&mut self, t_end: SimTime) -> Option<(SimTime, A)> {
        while let Some(top) = self.heap.peek() {
            if top.fire_at > t_end {
                return None;
            }
            let entry = self.heap.pop().expect("peeked entry exists");
            if self.live.remove(&entry.seq) {
                debug_assert!(entry.fire_at >= self.now, "clock must never run backwards");
                self.now = entry.fire_at;
                return Some((entry.fire_at, entry.action));
            }
        }
        None
    }

    /// Moves the clock forward to `t` (no-op if already past it).
    pub fn advance_to(&mut self, t: SimTime) {
        if t > self.now {
            self.now = t;
        }
    }
}
