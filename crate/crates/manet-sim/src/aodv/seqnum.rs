//! Route freshness timestamps.
//!
//! Sequence numbers are unsigned 32-bit counters compared with signed
//! wraparound arithmetic, so `u32::MAX + 1 == 0` still counts as newer.
//! A higher number means fresher routing information.

use std::fmt;

/// A node's freshness counter, or the cached value it holds for a peer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct SequenceNumber(pub u32);

impl SequenceNumber {
    /// The "newer" predicate: signed difference of the raw u32 values.
    pub fn newer_than(self, other: SequenceNumber) -> bool {
        self.0.wrapping_sub(other.0) as i32 > 0
    }

    pub fn incremented(self) -> SequenceNumber {
        SequenceNumber(self.0.wrapping_add(1))
    }

    /// The fresher of the two under wraparound ordering.
    pub fn max_fresh(self, other: SequenceNumber) -> SequenceNumber {
        if other.newer_than(self) {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for SequenceNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl std::str::FromStr for SequenceNumber {
    type Err = std::num::ParseIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(SequenceNumber(s.parse()?))
    }
}
