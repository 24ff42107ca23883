//! The sort heap: lazy inserts and decrease-keys, block-sorted chain pairing
//! on extract-min.
//!
//! Consolidation partitions the root list, left to right, into blocks of
//! `max(1, ceil(log2 n))` roots. Each block is sorted by key and paired in
//! descending order, which collapses it into a vertical chain topped by the
//! block minimum; the block winners are then paired left to right until one
//! tree remains.
//!
//! Two extract-min orderings are kept:
//!
//! * [`Strategy::Eager`] (default) removes the minimum root first and then
//!   consolidates, so every extract-min leaves a single tree (or nothing);
//! * [`Strategy::Model`] consolidates the pre-removal root list first and
//!   only then removes the unique root, deferring the promoted children to
//!   the next consolidation. This is the ordering the suboperation VM
//!   reproduces.

use alloc::vec::Vec;

use crate::forest::{ForestStore, HeapError, Key, NodeHandle};
use crate::ledger::CostLedger;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Eager,
    Model,
}

/// `ceil(log2(x))` for `x >= 1`.
pub fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Block size used for consolidation planning: `max(1, ceil(log2(max(2, n))))`
/// where `n` is the heap size the plan is computed for.
pub fn block_size_for(n: usize) -> usize {
    ceil_log2(n.max(2)).max(1)
}

/// Partition of a root list into consolidation blocks.
#[derive(Debug, Clone)]
pub struct BlockPlan {
    pub block_size: usize,
    pub blocks: Vec<Vec<NodeHandle>>,
}

impl BlockPlan {
    /// Plan over the given roots (left to right) for a heap of size `n`.
    pub fn new(roots: &[NodeHandle], n: usize) -> Self {
        let block_size = block_size_for(n);
        let blocks = roots.chunks(block_size).map(|c| c.to_vec()).collect();
        Self { block_size, blocks }
    }
}

/// Charged cost of comparison-sorting one block of `m` roots:
/// `ceil(m * log2(max(2, m)))`.
fn sort_charge(m: usize) -> u64 {
    let b = m.max(2) as f64;
    libm::ceil(m as f64 * libm::log2(b)) as u64
}

#[derive(Debug, Clone, Default)]
pub struct ConsolidationRecord {
    /// Roots consolidated (0 if there was nothing to do).
    pub roots: usize,
    /// Number of blocks.
    pub block_count: usize,
    /// Charged sorting cost, summed over blocks.
    pub sort_cost: u64,
    /// Pairings performed (`roots - 1` when `roots > 0`).
    pub pairings: u64,
    /// The blocks themselves (handles in pre-sort root order), kept only
    /// when block recording is on.
    pub blocks: Vec<Vec<NodeHandle>>,
    pub block_size: usize,
}

#[derive(Debug, Clone)]
pub struct SortHeap {
    store: ForestStore<Key>,
    ledger: CostLedger,
    strategy: Strategy,
    seq: u64,
    record_blocks: bool,
    last_consolidation: ConsolidationRecord,
}

impl SortHeap {
    pub fn new(strategy: Strategy) -> Self {
        Self {
            store: ForestStore::new(),
            ledger: CostLedger::new(),
            strategy,
            seq: 0,
            record_blocks: false,
            last_consolidation: ConsolidationRecord::default(),
        }
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
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

    /// Keep the per-extract-min block partition for inspection.
    pub fn set_block_recording(&mut self, on: bool) {
        self.record_blocks = on;
    }

    pub fn last_consolidation(&self) -> &ConsolidationRecord {
        &self.last_consolidation
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

    pub fn extract_min(&mut self) -> Result<Key, HeapError> {
        match self.strategy {
            Strategy::Eager => self.extract_min_eager(),
            Strategy::Model => self.extract_min_model(),
        }
    }

    /// Remove the minimum root first, promote its children leftmost, then
    /// consolidate everything into a single tree.
    fn extract_min_eager(&mut self) -> Result<Key, HeapError> {
        let (min, _) = self.store.scan_min().ok_or(HeapError::EmptyHeap)?;
        let (key, _children) = self.store.remove_root(min)?;
        let n = self.store.len();
        let rec = consolidate(
            &mut self.store,
            block_size_for(n),
            self.record_blocks,
        )?;
        let k = rec.roots as u64;
        let ell = rec.block_count as u64;
        // Scan + per-block sorting + in-block pairings + winner pairings.
        let actual = k
            + rec.sort_cost
            + if k > 0 { (k - ell) + (ell - 1) } else { 0 };
        self.ledger.charge_extract_min(actual);
        self.last_consolidation = rec;
        Ok(key)
    }

    /// Consolidate the current root list first (so the forest is a single
    /// tree), then remove that root; its children become the new roots and
    /// wait for the next consolidation.
    fn extract_min_model(&mut self) -> Result<Key, HeapError> {
        if self.store.is_empty() {
            return Err(HeapError::EmptyHeap);
        }
        let n = self.store.len();
        let rec = consolidate(
            &mut self.store,
            block_size_for(n),
            self.record_blocks,
        )?;
        let root = self.store.leftmost_root().expect("nonempty heap has a root");
        debug_assert_eq!(self.store.root_count(), 1);
        let (key, _children) = self.store.remove_root(root)?;
        let k = rec.roots as u64;
        let actual = k + rec.sort_cost + (k - 1);
        self.ledger.charge_extract_min(actual);
        self.last_consolidation = rec;
        Ok(key)
    }

    /// Drain the heap, returning keys in extraction order.
    pub fn drain_all(&mut self) -> Vec<Key> {
        let mut out = Vec::with_capacity(self.len());
        while !self.is_empty() {
            out.push(self.extract_min().expect("nonempty"));
        }
        out
    }
}

/// Block-sorted chain-pairing consolidation over the current root list.
///
/// Within each block the roots are paired in descending key order (second
/// largest over largest, then third largest over the winner, ...), which
/// leaves one chain per block topped by the block minimum; the block winners
/// are then paired sequentially left to right.
pub fn consolidate(
    store: &mut ForestStore<Key>,
    block_size: usize,
    record_blocks: bool,
) -> Result<ConsolidationRecord, HeapError> {
    let roots = store.roots();
    let k = roots.len();
    let mut rec = ConsolidationRecord {
        roots: k,
        block_size,
        ..ConsolidationRecord::default()
    };
    if k == 0 {
        return Ok(rec);
    }
    let mut winners: Vec<NodeHandle> = Vec::with_capacity(k / block_size + 1);
    let mut sorted: Vec<NodeHandle> = Vec::with_capacity(block_size);
    for block in roots.chunks(block_size) {
        rec.block_count += 1;
        rec.sort_cost += sort_charge(block.len());
        if record_blocks {
            rec.blocks.push(block.to_vec());
        }
        sorted.clear();
        sorted.extend_from_slice(block);
        sorted.sort_by(|&a, &b| {
            store
                .key(b)
                .expect("root is live")
                .cmp(store.key(a).expect("root is live"))
        });
        let mut chain = sorted[0];
        for &next in &sorted[1..] {
            let w = store.pair(next, chain)?;
            debug_assert_eq!(w, next);
            rec.pairings += 1;
            chain = w;
        }
        winners.push(chain);
    }
    let mut acc = winners[0];
    for &w in &winners[1..] {
        acc = store.pair(acc, w)?;
        rec.pairings += 1;
    }
    debug_assert_eq!(store.root_count(), 1);
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn block_sizes() {
        assert_eq!(block_size_for(0), 1);
        assert_eq!(block_size_for(1), 1);
        assert_eq!(block_size_for(2), 1);
        assert_eq!(block_size_for(3), 2);
        assert_eq!(block_size_for(4), 2);
        assert_eq!(block_size_for(5), 3);
        assert_eq!(block_size_for(16), 4);
        assert_eq!(block_size_for(17), 5);
        assert_eq!(block_size_for(1 << 16), 16);
    }

    #[test]
    fn sort_charges() {
        assert_eq!(sort_charge(1), 1); // ceil(1 * log2(2))
        assert_eq!(sort_charge(2), 2);
        assert_eq!(sort_charge(3), 5); // ceil(3 * 1.585)
        assert_eq!(sort_charge(4), 8);
    }

    #[test]
    fn eager_extract_min_worked_example() {
        // Inserts 5,3,8,1 give roots 1,8,3,5 left to right. Extract-min
        // removes 1; n=3, block size 2, blocks [8,3] and [5]. Block one
        // sorts to (8,3) descending and pairs 8 under 3; winners 3 and 5
        // pair into a final tree rooted at 3 with children 5, 8.
        let mut h = SortHeap::new(Strategy::Eager);
        h.insert(5).unwrap();
        h.insert(3).unwrap();
        h.insert(8).unwrap();
        h.insert(1).unwrap();
        let vals: Vec<i64> = h
            .store()
            .roots()
            .iter()
            .map(|&r| h.store().key(r).unwrap().value)
            .collect();
        assert_eq!(vals, vec![1, 8, 3, 5]);

        let min = h.extract_min().unwrap();
        assert_eq!(min.value, 1);

        let roots = h.store().roots();
        assert_eq!(roots.len(), 1);
        let root = roots[0];
        assert_eq!(h.store().key(root).unwrap().value, 3);
        let child_vals: Vec<i64> = h
            .store()
            .children(root)
            .iter()
            .map(|&c| h.store().key(c).unwrap().value)
            .collect();
        assert_eq!(child_vals, vec![5, 8]);
        // Cost: scan 3 + sort (2 + 1) + block pairings 1 + winner pairings 1.
        assert_eq!(h.ledger().extract_min_actual_cost, 3 + 3 + 1 + 1);
        assert!(h.store().validate().is_empty());
    }

    #[test]
    fn single_root_extract() {
        let mut h = SortHeap::new(Strategy::Eager);
        h.insert(42).unwrap();
        let k = h.extract_min().unwrap();
        assert_eq!(k.value, 42);
        assert!(h.is_empty());
        assert_eq!(h.last_consolidation().pairings, 0);
    }

    #[test]
    fn inserts_stay_lazy() {
        let mut h = SortHeap::new(Strategy::Eager);
        for i in 0..100 {
            h.insert(i).unwrap();
        }
        assert_eq!(h.store().root_count(), 100);
        assert_eq!(h.ledger().total_actual_cost(), 100);
    }

    #[test]
    fn empty_extract_errors() {
        let mut h = SortHeap::new(Strategy::Eager);
        assert_eq!(h.extract_min().err(), Some(HeapError::EmptyHeap));
        let mut m = SortHeap::new(Strategy::Model);
        assert_eq!(m.extract_min().err(), Some(HeapError::EmptyHeap));
    }

    #[test]
    fn eager_leaves_single_tree_model_defers() {
        let mut e = SortHeap::new(Strategy::Eager);
        let mut m = SortHeap::new(Strategy::Model);
        for v in [9, 4, 7, 1, 8, 2] {
            e.insert(v).unwrap();
            m.insert(v).unwrap();
        }
        assert_eq!(e.extract_min().unwrap().value, 1);
        assert_eq!(m.extract_min().unwrap().value, 1);
        assert!(e.store().root_count() <= 1);
        // The model heap removed the consolidated root; its children are
        // now the roots, deferred to the next consolidation.
        assert!(m.store().validate().is_empty());
        assert_eq!(e.extract_min().unwrap().value, 2);
        assert_eq!(m.extract_min().unwrap().value, 2);
    }

    #[test]
    fn strategies_agree_on_extraction_order() {
        let mut rng = crate::rng::SplitMix64::new(1);
        let mut e = SortHeap::new(Strategy::Eager);
        let mut m = SortHeap::new(Strategy::Model);
        let mut he = Vec::new();
        let mut hm = Vec::new();
        for _ in 0..200 {
            let v = rng.next_below(50) as i64;
            he.push(e.insert(v).unwrap());
            hm.push(m.insert(v).unwrap());
        }
        for _ in 0..100 {
            let i = rng.next_below(he.len() as u64) as usize;
            let d = rng.next_below(20) as i64;
            if e.store().is_live(he[i]) {
                e.decrease_key(he[i], d).unwrap();
                m.decrease_key(hm[i], d).unwrap();
            }
            if rng.next_below(3) == 0 {
                assert_eq!(
                    e.extract_min().unwrap().value,
                    m.extract_min().unwrap().value
                );
            }
        }
        while !e.is_empty() {
            assert_eq!(
                e.extract_min().unwrap().value,
                m.extract_min().unwrap().value
            );
        }
        assert!(m.is_empty());
    }

    #[test]
    fn heapsort_matches_reference() {
        for seed in 0..5u64 {
            let mut rng = crate::rng::SplitMix64::new(seed);
            let mut h = SortHeap::new(Strategy::Eager);
            let mut expected = Vec::new();
            for seq in 0..2000u64 {
                let v = rng.next_u64() as i64;
                expected.push((v, seq));
                h.insert(v).unwrap();
            }
            expected.sort();
            let got: Vec<(i64, u64)> =
                h.drain_all().into_iter().map(|k| (k.value, k.seq)).collect();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn full_blocks_form_sorted_chains() {
        let mut rng = crate::rng::SplitMix64::new(3);
        let mut h = SortHeap::new(Strategy::Eager);
        h.set_block_recording(true);
        let mut handles = Vec::new();
        for _ in 0..300 {
            handles.push(h.insert(rng.next_below(1 << 30) as i64).unwrap());
        }
        for _ in 0..40 {
            let i = rng.next_below(handles.len() as u64) as usize;
            if h.store().is_live(handles[i]) {
                h.decrease_key(handles[i], rng.next_below(100) as i64).unwrap();
            }
            h.extract_min().unwrap();
            let rec = h.last_consolidation().clone();
            for block in &rec.blocks {
                if block.len() != rec.block_size {
                    continue;
                }
                let mut sorted = block.clone();
                sorted.sort_by_key(|&x| *h.store().key(x).unwrap());
                for w in sorted.windows(2) {
                    assert_eq!(h.store().parent(w[1]).unwrap(), Some(w[0]));
                }
            }
        }
    }
}
