//! Per-destination next-hop records and the freshness rule that governs
//! when an offered route replaces a stored one.

use std::collections::{BTreeMap, BTreeSet};

use crate::aodv::seqnum::SequenceNumber;
use crate::time::SimTime;
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteState {
    Valid,
    Invalid,
}

/// One stored route: the "pointer" to a destination.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteEntry {
    pub destination: NodeId,
    pub next_hop: NodeId,
    pub dest_seq: SequenceNumber,
    pub seq_known: bool,
    pub hop_count: u32,
    pub expires_at: SimTime,
    pub state: RouteState,
    /// Upstream neighbors known to route through this node for the
    /// destination; the recipients of a route error when the route dies.
    pub precursors: BTreeSet<NodeId>,
}

impl RouteEntry {
    pub fn is_valid(&self) -> bool {
        self.state == RouteState::Valid
    }
}

/// How a routing-table offer was resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateOutcome {
    /// Entry installed or overwritten.
    Accepted,
    /// Offer carried a strictly older sequence number.
    RejectedStale,
    /// Same freshness but no better hop count.
    RejectedNoImprovement,
}

/// The per-node route store.
#[derive(Debug, Clone, Default)]
pub struct RoutingTable {
    entries: BTreeMap<NodeId, RouteEntry>,
}

impl RoutingTable {
    pub fn new() -> Self {
        RoutingTable::default()
    }

    pub fn get(&self, dst: NodeId) -> Option<&RouteEntry> {
        self.entries.get(&dst)
    }

    pub fn entries(&self) -> impl Iterator<Item = &RouteEntry> {
        self.entries.values()
    }

    /// The freshness rule. An offer wins iff there is no entry, the offer
    /// is newer (wrap-aware), it ties on sequence with fewer hops, or the
    /// stored entry is invalid. Acceptance overwrites next hop, hop count
    /// and sequence, revalidates the entry and extends its lifetime;
    /// precursors survive.
    pub fn update(
        &mut self,
        destination: NodeId,
        offered_seq: SequenceNumber,
        offered_hops: u32,
        next_hop: NodeId,
        expires_at: SimTime,
    ) -> UpdateOutcome {
        debug_assert!(offered_hops >= 1, "routes to self are never stored");
        let Some(entry) = self.entries.get_mut(&destination) else {
            self.entries.insert(
                destination,
                RouteEntry {
                    destination,
                    next_hop,
                    dest_seq: offered_seq,
                    seq_known: true,
                    hop_count: offered_hops,
                    expires_at,
                    state: RouteState::Valid,
                    precursors: BTreeSet::new(),
                },
            );
            return UpdateOutcome::Accepted;
        };
        let accept = entry.state == RouteState::Invalid
            || !entry.seq_known
            || offered_seq.newer_than(entry.dest_seq)
            || (offered_seq == entry.dest_seq && offered_hops < entry.hop_count);
        if !accept {
            return if entry.dest_seq.newer_than(offered_seq) {
                UpdateOutcome::RejectedStale
            } else {
                UpdateOutcome::RejectedNoImprovement
            };
        }
        entry.next_hop = next_hop;
        entry.dest_seq = offered_seq;
        entry.seq_known = true;
        entry.hop_count = offered_hops;
        entry.state = RouteState::Valid;
        entry.expires_at = entry.expires_at.max(expires_at);
        UpdateOutcome::Accepted
    }

    /// Lifetime refresh on use (no freshness change involved).
    pub fn touch(&mut self, dst: NodeId, expires_at: SimTime) {
        if let Some(entry) = self.entries.get_mut(&dst) {
            entry.expires_at = entry.expires_at.max(expires_at);
        }
    }

    pub fn add_precursor(&mut self, dst: NodeId, precursor: NodeId) {
        if let Some(entry) = self.entries.get_mut(&dst) {
            entry.precursors.insert(precursor);
        }
    }

    /// Marks an expired entry invalid. Returns true when the entry flipped
    /// state just now (so the caller can trace it).
    pub fn expire_if_due(&mut self, dst: NodeId, now: SimTime) -> bool {
        match self.entries.get_mut(&dst) {
            Some(entry) if entry.state == RouteState::Valid && entry.expires_at <= now => {
                entry.state = RouteState::Invalid;
                true
            }
            _ => false,
        }
    }

    /// The valid, unexpired route to `dst`, if any. Expiry is checked by
    /// the caller via [`Self::expire_if_due`] so it can be traced.
    pub fn valid_route(&self, dst: NodeId) -> Option<&RouteEntry> {
        self.entries.get(&dst).filter(|e| e.is_valid())
    }

    /// Invalidates every valid route using `lost` as next hop, bumping each
    /// destination sequence number by one. Returns the affected routes as
    /// (destination, bumped seq, precursors at invalidation time).
    pub fn invalidate_via(
        &mut self,
        lost: NodeId,
    ) -> Vec<(NodeId, SequenceNumber, BTreeSet<NodeId>)> {
        let mut affected = Vec::new();
        for entry in self.entries.values_mut() {
            if entry.state == RouteState::Valid && entry.next_hop == lost {
                entry.state = RouteState::Invalid;
                entry.dest_seq = entry.dest_seq.incremented();
                affected.push((entry.destination, entry.dest_seq, entry.precursors.clone()));
            }
        }
        affected
    }

    /// Applies a received route error: invalidates each listed destination
    /// whose valid route uses the error's sender as next hop, adopting the
    /// advertised sequence number. Returns routes invalidated here.
    pub fn invalidate_from_rerr(
        &mut self,
        sender: NodeId,
        unreachable: &[(NodeId, SequenceNumber)],
    ) -> Vec<(NodeId, SequenceNumber, BTreeSet<NodeId>)> {
        let mut affected = Vec::new();
        for &(dst, seq) in unreachable {
            if let Some(entry) = self.entries.get_mut(&dst) {
                if entry.state == RouteState::Valid && entry.next_hop == sender {
                    entry.state = RouteState::Invalid;
                    entry.dest_seq = entry.dest_seq.max_fresh(seq);
                    entry.seq_known = true;
                    affected.push((dst, entry.dest_seq, entry.precursors.clone()));
                }
            }
        }
        affected
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(secs: f64) -> SimTime {
        SimTime::from_secs_f64(secs)
    }

    fn seq(v: u32) -> SequenceNumber {
        SequenceNumber(v)
    }

    fn table_with(stored_seq: u32, stored_hops: u32) -> RoutingTable {
        let mut table = RoutingTable::new();
        assert_eq!(
            table.update(NodeId(9), seq(stored_seq), stored_hops, NodeId(1), t(10.0)),
            UpdateOutcome::Accepted
        );
        table
    }

    #[test]
    fn freshness_dominates_distance() {
        let mut table = table_with(5, 3);
        assert_eq!(
            table.update(NodeId(9), seq(6), 5, NodeId(2), t(10.0)),
            UpdateOutcome::Accepted
        );
        let e = table.get(NodeId(9)).unwrap();
        assert_eq!(
            (e.dest_seq, e.hop_count, e.next_hop),
            (seq(6), 5, NodeId(2))
        );
    }

    #[test]
    fn equal_seq_ties_break_on_hops() {
        let mut table = table_with(5, 3);
        assert_eq!(
            table.update(NodeId(9), seq(5), 2, NodeId(2), t(10.0)),
            UpdateOutcome::Accepted
        );
        assert_eq!(table.get(NodeId(9)).unwrap().hop_count, 2);
    }

    #[test]
    fn stale_offer_is_rejected() {
        let mut table = table_with(5, 3);
        assert_eq!(
            table.update(NodeId(9), seq(4), 1, NodeId(2), t(10.0)),
            UpdateOutcome::RejectedStale
        );
        let e = table.get(NodeId(9)).unwrap();
        assert_eq!(
            (e.dest_seq, e.hop_count, e.next_hop),
            (seq(5), 3, NodeId(1))
        );
    }

    #[test]
    fn invalid_entry_accepts_any_offer() {
        let mut table = table_with(5, 3);
        table.invalidate_via(NodeId(1));
        assert_eq!(
            table.update(NodeId(9), seq(2), 7, NodeId(3), t(10.0)),
            UpdateOutcome::Accepted
        );
        assert!(table.get(NodeId(9)).unwrap().is_valid());
    }

    #[test]
    fn invalidate_via_bumps_sequence_numbers() {
        let mut table = table_with(5, 3);
        let affected = table.invalidate_via(NodeId(1));
        assert_eq!(affected.len(), 1);
        assert_eq!(affected[0].0, NodeId(9));
        assert_eq!(affected[0].1, seq(6));
        assert!(!table.get(NodeId(9)).unwrap().is_valid());
    }

    #[test]
    fn rerr_only_matches_routes_through_the_sender() {
        let mut table = table_with(5, 3); // next hop 1
        let affected = table.invalidate_from_rerr(NodeId(2), &[(NodeId(9), seq(6))]);
        assert!(affected.is_empty());
        assert!(table.get(NodeId(9)).unwrap().is_valid());

        let affected = table.invalidate_from_rerr(NodeId(1), &[(NodeId(9), seq(6))]);
        assert_eq!(affected.len(), 1);
        assert_eq!(table.get(NodeId(9)).unwrap().dest_seq, seq(6));
    }

    #[test]
    fn touch_extends_lifetime_without_freshness_change() {
        let mut table = table_with(5, 3);
        table.touch(NodeId(9), t(42.0));
        assert_eq!(table.get(NodeId(9)).unwrap().expires_at, t(42.0));
    }

    proptest! {
        // For any set of offers, applying them in any order converges to the
        // same winner: the maximum under (seq, -hops) lexicographic order.
        #[test]
        fn update_order_is_irrelevant(
            offers in proptest::collection::vec((0u32..8, 1u32..10, 0u16..5), 1..6),
            permutation in 0usize..720,
        ) {
            let offers: Vec<(SequenceNumber, u32, NodeId)> = offers
                .into_iter()
                .map(|(s, h, n)| (seq(s), h, NodeId(n)))
                .collect();

            let mut shuffled = offers.clone();
            // Deterministic permutation from the index.
            let mut k = permutation;
            for i in (1..shuffled.len()).rev() {
                shuffled.swap(i, k % (i + 1));
                k /= i + 1;
            }

            let apply = |list: &[(SequenceNumber, u32, NodeId)]| {
                let mut table = RoutingTable::new();
                for &(s, h, n) in list {
                    table.update(NodeId(9), s, h, n, t(1.0));
                }
                let e = table.get(NodeId(9)).unwrap().clone();
                (e.dest_seq, e.hop_count)
            };

            let expected = offers
                .iter()
                .map(|&(s, h, _)| (s, h))
                .max_by(|a, b| {
                    if a.0 == b.0 {
                        b.1.cmp(&a.1) // fewer hops is better
                    } else if a.0.newer_than(b.0) {
                        std::cmp::Ordering::Greater
                    } else {
                        std::cmp::Ordering::Less
                    }
                })
                .unwrap();

            prop_assert_eq!(apply(&offers), expected);
            prop_assert_eq!(apply(&shuffled), expected);
        }
    }
}
