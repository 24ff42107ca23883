//! Exhaustive enumeration of small ordered forests, used as the oracle for
//! structural checks: every forest shape on up to a handful of nodes, and
//! every heap-ordered key assignment on top of a shape.

use alloc::vec::Vec;

use crate::forest::{ForestStore, Key, KeyTree};

/// An unlabeled ordered tree shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub children: Vec<Shape>,
}

impl Shape {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }
}

/// All ordered forests with exactly `n` nodes (there are Catalan(n) many).
pub fn forests(n: usize) -> Vec<Vec<Shape>> {
    if n == 0 {
        return alloc::vec![Vec::new()];
    }
    let mut out = Vec::new();
    // Choose the size of the first tree, then recurse on the remainder.
    for first in 1..=n {
        for tree in trees(first) {
            for rest in forests(n - first) {
                let mut f = Vec::with_capacity(rest.len() + 1);
                f.push(tree.clone());
                f.extend(rest);
                out.push(f);
            }
        }
    }
    out
}

/// All ordered trees with exactly `n >= 1` nodes.
pub fn trees(n: usize) -> Vec<Shape> {
    forests(n - 1)
        .into_iter()
        .map(|children| Shape { children })
        .collect()
}

/// All ordered forest shapes with sizes `1..=max_n`.
pub fn all_forests_up_to(max_n: usize) -> Vec<Vec<Shape>> {
    (1..=max_n).flat_map(forests).collect()
}

/// Assign the distinct values `0..n` to a forest shape in every way that
/// respects strict heap order (parents smaller than children). Values are
/// reported per node in preorder (roots left to right).
pub fn heap_labelings(forest: &[Shape]) -> Vec<Vec<i64>> {
    // Flatten to a parent table in preorder.
    let mut parents: Vec<Option<usize>> = Vec::new();
    fn flatten(shape: &Shape, parent: Option<usize>, parents: &mut Vec<Option<usize>>) {
        let id = parents.len();
        parents.push(parent);
        for c in &shape.children {
            flatten(c, Some(id), parents);
        }
    }
    for t in forest {
        flatten(t, None, &mut parents);
    }
    let n = parents.len();
    let mut out = Vec::new();
    let mut assigned: Vec<Option<i64>> = alloc::vec![None; n];
    // Place values in increasing order; each value may go on any node whose
    // parent is already labeled. This enumerates exactly the strict
    // heap-ordered labelings.
    fn place(
        next: i64,
        n: usize,
        parents: &[Option<usize>],
        assigned: &mut Vec<Option<i64>>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if next == n as i64 {
            out.push(assigned.iter().map(|v| v.unwrap()).collect());
            return;
        }
        for i in 0..n {
            if assigned[i].is_none() && parents[i].map(|p| assigned[p].is_some()).unwrap_or(true) {
                assigned[i] = Some(next);
                place(next + 1, n, parents, assigned, out);
                assigned[i] = None;
            }
        }
    }
    place(0, n, &parents, &mut assigned, &mut out);
    out
}

/// Materialize a labeled shape into a store. The preorder labeling supplies
/// `Key::value`; sequence numbers follow preorder so keys stay distinct even
/// if values repeat.
pub fn materialize(forest: &[Shape], values: &[i64]) -> ForestStore<Key> {
    let mut idx = 0usize;
    fn build(shape: &Shape, values: &[i64], idx: &mut usize) -> KeyTree<Key> {
        let key = Key::new(values[*idx], *idx as u64);
        *idx += 1;
        let children = shape
            .children
            .iter()
            .map(|c| build(c, values, idx))
            .collect();
        KeyTree { key, children }
    }
    let trees: Vec<KeyTree<Key>> = forest.iter().map(|t| build(t, values, &mut idx)).collect();
    let (store, _) = ForestStore::build(&trees);
    store
}

/// A deterministic pseudo-random heap-ordered forest with `n` nodes, built
/// by inserts, random root pairings and random subtree moves.
pub fn random_forest(n: usize, seed: u64) -> ForestStore<Key> {
    let mut rng = crate::rng::SplitMix64::new(seed);
    let mut store: ForestStore<Key> = ForestStore::new();
    for seq in 0..n as u64 {
        let v = rng.next_below(1 << 40) as i64;
        store.insert(Key::new(v, seq)).unwrap();
    }
    // Random pairings, leaving a random number of roots.
    let target_roots = 1 + rng.next_below(1 + n as u64 / 4) as usize;
    while store.root_count() > target_roots {
        let roots = store.roots();
        let i = rng.next_below(roots.len() as u64) as usize;
        let j = rng.next_below(roots.len() as u64) as usize;
        if i != j {
            store.pair(roots[i], roots[j]).unwrap();
        }
    }
    // A few decrease-keys to move subtrees around.
    for _ in 0..n / 4 {
        let live = store.live_handles();
        let h = live[rng.next_below(live.len() as u64) as usize];
        let cur = *store.key(h).unwrap();
        let delta = rng.next_below(1 << 16) as i64;
        store
            .decrease_key_to(h, Key::new(cur.value - delta, cur.seq))
            .unwrap();
    }
    store
}
