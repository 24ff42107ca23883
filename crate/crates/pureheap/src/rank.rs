//! Rank and marking bookkeeping driven by pairings.
//!
//! Each node carries a nonnegative integer rank, recomputed from its
//! unmarked children taken right to left (the order in which they were
//! attached). Scanning that order, a running rank `r` starts at 0 and the
//! scan keeps a "run": the children seen since the last rank increment.
//! A child whose own rank lies in the window `[r - w, r]` is *efficiently
//! linked*. The rank increments, ending the run, when either
//!
//! * the child is efficiently linked and is the `t`-th efficient member of
//!   the current run, or
//! * the run length reaches `2^w`.
//!
//! A node whose rank just increased is *marked* until the next decrease-key
//! on it; marked nodes are invisible to their ancestors' rank computations.
//! Marks live here, in analysis-side state, never inside heap nodes.
//!
//! Both parameters are free here (the analysis that motivates them couples
//! them to a hypothesized decrease-key cost), so the lemma checkers can be
//! exercised across regimes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::forest::{ForestStore, Key, NodeHandle, StructEvent};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankParams {
    /// Window exponent `w >= 1`: efficient links live in `[r - w, r]` and
    /// the default case fires at run length `2^w`.
    pub window: u32,
    /// Efficient-count threshold `t >= 1`.
    pub threshold: u32,
}

impl RankParams {
    pub fn new(window: u32, threshold: u32) -> Self {
        assert!(window >= 1 && threshold >= 1);
        Self { window, threshold }
    }

    fn run_cap(&self) -> u32 {
        1u32 << self.window
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NodeRankInfo {
    pub rank: u32,
    pub marked: bool,
    run_len: u32,
    run_eff: u32,
}

/// Analysis-side rank state for the live nodes of one store.
#[derive(Debug, Clone)]
pub struct RankState {
    pub params: RankParams,
    info: BTreeMap<NodeHandle, NodeRankInfo>,
}

impl RankState {
    pub fn new(params: RankParams) -> Self {
        Self {
            params,
            info: BTreeMap::new(),
        }
    }

    pub fn on_insert(&mut self, h: NodeHandle) {
        self.info.insert(h, NodeRankInfo::default());
    }

    pub fn on_remove(&mut self, h: NodeHandle) {
        self.info.remove(&h);
    }

    pub fn rank(&self, h: NodeHandle) -> u32 {
        self.info.get(&h).map(|i| i.rank).unwrap_or(0)
    }

    pub fn is_marked(&self, h: NodeHandle) -> bool {
        self.info.get(&h).map(|i| i.marked).unwrap_or(false)
    }

    pub fn info(&self, h: NodeHandle) -> NodeRankInfo {
        self.info.get(&h).copied().unwrap_or_default()
    }

    /// Incremental rank maintenance across one pairing: only the winner's
    /// rank can change. Returns whether it was incremented; an increment
    /// marks the winner. A marked loser is invisible and leaves the
    /// winner's run untouched.
    pub fn apply_pairing(&mut self, winner: NodeHandle, loser: NodeHandle) -> bool {
        let loser_info = self.info(loser);
        if loser_info.marked {
            return false;
        }
        let params = self.params;
        let w = self.info.entry(winner).or_default();
        let eff = loser_info.rank <= w.rank && loser_info.rank + params.window >= w.rank;
        w.run_len += 1;
        if eff {
            w.run_eff += 1;
        }
        if (eff && w.run_eff == params.threshold) || w.run_len == params.run_cap() {
            // The incremental child ends the run in both cases.
            w.rank += 1;
            w.run_len = 0;
            w.run_eff = 0;
            w.marked = true;
            true
        } else {
            false
        }
    }

    /// A decrease-key unmarks its target.
    pub fn unmark_on_decrease_key(&mut self, h: NodeHandle) {
        if let Some(i) = self.info.get_mut(&h) {
            i.marked = false;
        }
    }

    /// Mirror a heap's recorded mutations: inserts create rank-0 unmarked
    /// entries, pairings run the recurrence, decrease-keys unmark, root
    /// removals forget the node. Detaches carry no rank content of their
    /// own (under monotonic usage they only move roots or marked nodes).
    pub fn apply_heap_events(&mut self, events: &[StructEvent]) -> Vec<(NodeHandle, bool)> {
        let mut pairings = Vec::new();
        for ev in events {
            match ev {
                StructEvent::Insert { node } => self.on_insert(*node),
                StructEvent::Pair { winner, loser, .. } => {
                    let inc = self.apply_pairing(*winner, *loser);
                    pairings.push((*winner, inc));
                }
                StructEvent::KeyDecreased { node } => self.unmark_on_decrease_key(*node),
                StructEvent::RemoveRoot { node, .. } => self.on_remove(*node),
                StructEvent::Detach { .. } => {}
            }
        }
        pairings
    }

    /// From-scratch rank of every live node, bottom-up over the current
    /// structure with the current marks. Independent of the incremental
    /// run state, so it serves as its oracle.
    pub fn ranks_from_scratch<K>(&self, store: &ForestStore<K>) -> BTreeMap<NodeHandle, u32> {
        let mut computed: BTreeMap<NodeHandle, u32> = BTreeMap::new();
        let mut order: Vec<NodeHandle> = Vec::with_capacity(store.len());
        for r in store.roots() {
            order.extend(store.subtree(r));
        }
        // Reverse preorder visits children before parents.
        for &h in order.iter().rev() {
            let (rank, _) = self.rank_of_with_links(store, h, &computed);
            computed.insert(h, rank);
        }
        computed
    }

    /// One node's rank from its children's already-computed ranks; also
    /// reports, per unmarked child, whether it was efficiently linked and
    /// what running rank it saw.
    fn rank_of_with_links<K>(
        &self,
        store: &ForestStore<K>,
        h: NodeHandle,
        computed: &BTreeMap<NodeHandle, u32>,
    ) -> (u32, Vec<ChildLink>) {
        let params = self.params;
        let mut r = 0u32;
        let mut run_len = 0u32;
        let mut run_eff = 0u32;
        let mut links = Vec::new();
        let children = store.children(h);
        // Rightmost child first: the order of attachment.
        for &c in children.iter().rev() {
            if self.is_marked(c) {
                continue;
            }
            let cr = *computed.get(&c).expect("children computed before parents");
            let eff = cr <= r && cr + params.window >= r;
            links.push(ChildLink {
                child: c,
                child_rank: cr,
                running_rank: r,
                efficient: eff,
            });
            run_len += 1;
            if eff {
                run_eff += 1;
            }
            if (eff && run_eff == params.threshold) || run_len == params.run_cap() {
                r += 1;
                run_len = 0;
                run_eff = 0;
            }
        }
        (r, links)
    }

    /// Size of the unmarked subtree: the node plus everything reachable
    /// without passing through a marked node.
    pub fn unmarked_subtree_size<K>(&self, store: &ForestStore<K>, h: NodeHandle) -> u64 {
        let mut count = 0u64;
        let mut stack = alloc::vec![h];
        while let Some(x) = stack.pop() {
            count += 1;
            for c in store.children(x) {
                if !self.is_marked(c) {
                    stack.push(c);
                }
            }
        }
        count
    }

    /// Size bound: every unmarked node's unmarked subtree has at most
    /// `t^rank` nodes (equivalently, `rank >= log_t(size)`). Valid-regime
    /// precondition: `2^w <= t^w`, i.e. `t >= 2`.
    pub fn check_size_lemma<K>(&self, store: &ForestStore<K>) -> Vec<String> {
        let ranks = self.ranks_from_scratch(store);
        let t = self.params.threshold as u128;
        let mut bad = Vec::new();
        for h in store.live_handles() {
            if self.is_marked(h) {
                continue;
            }
            let rank = ranks[&h];
            let size = self.unmarked_subtree_size(store, h) as u128;
            let bound = if rank >= 64 {
                u128::MAX
            } else {
                t.saturating_pow(rank)
            };
            if size > bound {
                bad.push(format!(
                    "{:?}: unmarked subtree size {} > t^rank = {}^{} = {}",
                    h, size, t, rank, bound
                ));
            }
        }
        bad
    }

    /// Efficient-children bound: a node of rank at least `k` with at most
    /// `(k/2) * 2^w` unmarked children has at least `k/2` efficiently
    /// linked unmarked children, each of rank below `k`. Checked for every
    /// `k` up to the node's rank, with exact integer comparisons
    /// (`2*children <= k*2^w`, `2*efficient >= k`).
    pub fn check_efficient_children_lemma<K>(&self, store: &ForestStore<K>) -> Vec<String> {
        let mut computed: BTreeMap<NodeHandle, u32> = BTreeMap::new();
        let mut order: Vec<NodeHandle> = Vec::with_capacity(store.len());
        for r in store.roots() {
            order.extend(store.subtree(r));
        }
        let mut bad = Vec::new();
        let cap = self.params.run_cap() as u64;
        for &h in order.iter().rev() {
            let (rank, links) = self.rank_of_with_links(store, h, &computed);
            computed.insert(h, rank);
            let unmarked_children = links.len() as u64;
            for k in 1..=rank as u64 {
                if 2 * unmarked_children <= k * cap {
                    let eff = links
                        .iter()
                        .filter(|l| l.efficient && (l.child_rank as u64) < k)
                        .count() as u64;
                    if 2 * eff < k {
                        bad.push(format!(
                            "{:?}: rank {} with {} unmarked children but only {} efficient links below rank {}",
                            h, rank, unmarked_children, eff, k
                        ));
                    }
                }
            }
        }
        bad
    }

    /// The incremental ranks must match a from-scratch recomputation.
    pub fn check_incremental_agreement<K>(&self, store: &ForestStore<K>) -> Vec<String> {
        let scratch = self.ranks_from_scratch(store);
        let mut bad = Vec::new();
        for h in store.live_handles() {
            let inc = self.rank(h);
            let sc = scratch[&h];
            if inc != sc {
                bad.push(format!(
                    "{:?}: incremental rank {} != scratch rank {}",
                    h, inc, sc
                ));
            }
        }
        bad
    }
}

/// One unmarked child as seen by the rank scan of its parent.
#[derive(Debug, Clone, Copy)]
pub struct ChildLink {
    pub child: NodeHandle,
    pub child_rank: u32,
    /// The parent's running rank just before this child was folded in.
    pub running_rank: u32,
    pub efficient: bool,
}

/// A random pairing/marking simulation under monotonic discipline:
/// inserts, pairings of random roots, decrease-keys on roots or marked
/// nodes only, and occasional minimum-root removals. Rank state follows
/// the recorded events. Returns the final store and rank state.
pub fn random_monotonic_simulation(
    params: RankParams,
    max_nodes: usize,
    steps: usize,
    seed: u64,
) -> (ForestStore<Key>, RankState) {
    let mut rng = crate::rng::SplitMix64::new(seed);
    let mut store: ForestStore<Key> = ForestStore::new();
    store.enable_events();
    let mut state = RankState::new(params);
    let mut seq = 0u64;
    for _ in 0..steps {
        match rng.next_below(10) {
            0..=3 => {
                if store.len() < max_nodes {
                    store
                        .insert(Key::new(rng.next_below(1 << 32) as i64, seq))
                        .unwrap();
                    seq += 1;
                }
            }
            4..=7 => {
                let roots = store.roots();
                if roots.len() >= 2 {
                    let i = rng.next_below(roots.len() as u64) as usize;
                    let j = rng.next_below(roots.len() as u64) as usize;
                    if i != j {
                        store.pair(roots[i], roots[j]).unwrap();
                    }
                }
            }
            8 => {
                // Decrease-key on a root or a marked node (monotonic targets).
                let marked: Vec<NodeHandle> = store
                    .live_handles()
                    .into_iter()
                    .filter(|&h| state.is_marked(h))
                    .collect();
                let target = if !marked.is_empty() && rng.next_below(2) == 0 {
                    Some(marked[rng.next_below(marked.len() as u64) as usize])
                } else {
                    let roots = store.roots();
                    if roots.is_empty() {
                        None
                    } else {
                        Some(roots[rng.next_below(roots.len() as u64) as usize])
                    }
                };
                if let Some(h) = target {
                    let cur = *store.key(h).unwrap();
                    let delta = rng.next_below(1 << 10) as i64;
                    store
                        .decrease_key_to(h, Key::new(cur.value - delta, cur.seq))
                        .unwrap();
                }
            }
            _ => {
                if let Some((min, _)) = store.scan_min() {
                    store.remove_root(min).unwrap();
                }
            }
        }
        let events = store.take_events();
        state.apply_heap_events(&events);
    }
    (store, state)
}
