//! Two-pass pairing heap on the shared forest storage, as the benchmark
//! baseline. Insert and decrease-key stay lazy (no immediate pairing); the
//! consolidation runs at the next extract-min.

use alloc::vec::Vec;

use crate::forest::{ForestStore, HeapError, Key, NodeHandle};
use crate::ledger::CostLedger;

#[derive(Debug, Clone)]
pub struct PairingHeap {
    store: ForestStore<Key>,
    ledger: CostLedger,
    seq: u64,
}

impl Default for PairingHeap {
    fn default() -> Self {
        Self::new()
    }
}

impl PairingHeap {
    pub fn new() -> Self {
        Self {
            store: ForestStore::new(),
            ledger: CostLedger::new(),
            seq: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.is_empty()
    }

    pub fn store(&self) -> &ForestStore<Key> {
        &self.store
    }

    pub fn store_mut(&mut self) -> &mut ForestStore<Key> {
        &mut self.store
    }

    pub fn ledger(&self) -> &CostLedger {
        &self.ledger
    }

    pub fn ledger_mut(&mut self) -> &mut CostLedger {
        &mut self.ledger
    }

    pub fn insert(&mut self, value: i64) -> Result<NodeHandle, HeapError> {
        let key = Key::new(value, self.seq);
        self.seq += 1;
        let h = self.store.insert(key)?;
        self.ledger.charge_insert();
        Ok(h)
    }

    pub fn decrease_key(&mut self, h: NodeHandle, delta: i64) -> Result<(), HeapError> {
        if delta < 0 {
            return Err(HeapError::NegativeDelta);
        }
        let cur = *self.store.key(h)?;
        let new = Key::new(cur.value.saturating_sub(delta), cur.seq);
        self.store.decrease_key_to(h, new)?;
        self.ledger.charge_decrease_key();
        Ok(())
    }

    /// Two-pass consolidation, then removal of the unique root (children
    /// promoted, deferred to the next consolidation). First pass pairs the
    /// roots left to right in adjacent pairs (an odd leftover joins the
    /// second pass unpaired); the second pass accumulates right to left,
    /// pairing each result into the running winner.
    pub fn extract_min(&mut self) -> Result<Key, HeapError> {
        let roots = self.store.roots();
        let k = roots.len() as u64;
        if k == 0 {
            return Err(HeapError::EmptyHeap);
        }
        let mut pairings = 0u64;
        let mut winners: Vec<NodeHandle> = Vec::with_capacity(roots.len() / 2 + 1);
        let mut it = roots.chunks_exact(2);
        for pair in &mut it {
            winners.push(self.store.pair(pair[0], pair[1])?);
            pairings += 1;
        }
        if let Some(&odd) = it.remainder().first() {
            winners.push(odd);
        }
        let mut acc = *winners.last().expect("at least one root");
        for &w in winners.iter().rev().skip(1) {
            acc = self.store.pair(w, acc)?;
            pairings += 1;
        }
        debug_assert_eq!(self.store.root_count(), 1);
        debug_assert_eq!(pairings, k - 1);
        let (key, _children) = self.store.remove_root(acc)?;
        self.ledger.charge_extract_min(k + pairings);
        Ok(key)
    }

    pub fn drain_all(&mut self) -> Vec<Key> {
        let mut out = Vec::with_capacity(self.len());
        while !self.is_empty() {
            out.push(self.extract_min().expect("nonempty"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn two_pass_worked_example() {
        // Roots 4,1,3,2: first pass pairs (4,1) -> 1 and (3,2) -> 2;
        // second pass pairs (1,2) -> 1; extract returns 1.
        let mut h = PairingHeap::new();
        // Insert in reverse so the root order left to right is 4,1,3,2.
        h.insert(2).unwrap();
        h.insert(3).unwrap();
        h.insert(1).unwrap();
        h.insert(4).unwrap();
        let vals: Vec<i64> = h
            .store()
            .roots()
            .iter()
            .map(|&r| h.store().key(r).unwrap().value)
            .collect();
        assert_eq!(vals, vec![4, 1, 3, 2]);
        let min = h.extract_min().unwrap();
        assert_eq!(min.value, 1);
        // Cost: scan 4 roots + 3 pairings.
        assert_eq!(h.ledger().extract_min_actual_cost, 7);
        assert!(h.store().validate().is_empty());
    }

    #[test]
    fn single_root_direct_return() {
        let mut h = PairingHeap::new();
        h.insert(11).unwrap();
        assert_eq!(h.extract_min().unwrap().value, 11);
        assert_eq!(h.ledger().extract_min_actual_cost, 1); // scan 1, no pairing
        assert!(h.is_empty());
        assert_eq!(h.extract_min().err(), Some(HeapError::EmptyHeap));
    }

    #[test]
    fn consolidation_does_exactly_k_minus_one_pairings() {
        let mut h = PairingHeap::new();
        for i in 0..17 {
            h.insert(i).unwrap();
        }
        h.extract_min().unwrap();
        // 17 roots scanned + 16 pairings.
        assert_eq!(h.ledger().extract_min_actual_cost, 33);
    }

    #[test]
    fn heapsort_matches_reference() {
        let mut rng = crate::rng::SplitMix64::new(10);
        let mut h = PairingHeap::new();
        let mut expected = Vec::new();
        for seq in 0..10_000u64 {
            let v = rng.next_u64() as i64;
            expected.push((v, seq));
            h.insert(v).unwrap();
        }
        expected.sort();
        let got: Vec<(i64, u64)> = h.drain_all().into_iter().map(|k| (k.value, k.seq)).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn decrease_key_then_extract() {
        let mut h = PairingHeap::new();
        let a = h.insert(50).unwrap();
        h.insert(20).unwrap();
        h.insert(30).unwrap();
        h.decrease_key(a, 45).unwrap();
        assert_eq!(h.extract_min().unwrap().value, 5);
        assert_eq!(h.decrease_key(a, 1).err(), Some(HeapError::StaleHandle));
        assert_eq!(
            h.decrease_key(h.store().roots()[0], -1).err(),
            Some(HeapError::NegativeDelta)
        );
    }
}
