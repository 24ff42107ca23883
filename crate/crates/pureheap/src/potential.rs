//! Subtree-balance potential over a forest, exact where it matters.
//!
//! For a node `x`, `L(x)` counts the nodes of `x`'s induced subtree, `R(x)`
//! the nodes in the induced subtrees of `x`'s right siblings, and
//! `S(x) = L(x) + R(x)`. The root list counts as one more sibling group, so
//! every live node has defined stats even between consolidations.
//!
//! The raw potential is
//!
//! `zeta(x) = clamp((3*R - S) / S, 0, 1)`
//!
//! which is 1 for right-heavy nodes (`3R >= 2S`), 0 for left-heavy nodes
//! (`3L >= 2S`) and linear in between. The heap potential is
//! `phi = zeta_total * c * log2(log2(max(n, 4)))`.
//!
//! Three structural facts about `zeta` back the amortized accounting, and
//! each has an executable checker in exact rational arithmetic here:
//! any `k` mutual siblings carry at least `k - log_{3/2} n` of raw
//! potential, any root-to-leaf chain carries at most `log_{3/2} n`, and
//! detaching a subtree raises the remaining nodes' raw potential by at
//! most 13.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::forest::{ForestStore, NodeHandle, StructEvent};
use crate::ledger::OpKind;

/// `log2(log2(max(n, 4)))`, the per-node potential multiplier base.
pub fn loglog2(n: usize) -> f64 {
    libm::log2(libm::log2(n.max(4) as f64))
}

/// `log_{3/2}(max(n, 2))`.
pub fn log32(n: usize) -> f64 {
    libm::log2(n.max(2) as f64) / libm::log2(1.5)
}

/// Per-node subtree statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubtreeStats {
    /// Nodes in the induced subtree (includes the node itself).
    pub l: i64,
    /// Nodes in the induced subtrees of the right siblings.
    pub r: i64,
}

impl SubtreeStats {
    pub fn s(&self) -> i64 {
        self.l + self.r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Heaviness {
    RightHeavy,
    LeftHeavy,
    Transitional,
}

/// Three-case classification; the two heavy cases are mutually exclusive
/// for `S >= 1`.
pub fn classify(stats: SubtreeStats) -> Heaviness {
    let s = stats.s();
    if 3 * stats.r >= 2 * s {
        Heaviness::RightHeavy
    } else if 3 * stats.l >= 2 * s {
        Heaviness::LeftHeavy
    } else {
        Heaviness::Transitional
    }
}

/// Exact raw potential by the three-case definition.
pub fn zeta_exact(stats: SubtreeStats) -> Ratio<i64> {
    match classify(stats) {
        Heaviness::RightHeavy => Ratio::from_integer(1),
        Heaviness::LeftHeavy => Ratio::from_integer(0),
        Heaviness::Transitional => Ratio::new(3 * stats.r - stats.s(), stats.s()),
    }
}

/// Exact raw potential by the clamp formula `clamp((3R-S)/S, 0, 1)`.
pub fn zeta_clamped(stats: SubtreeStats) -> Ratio<i64> {
    let v = Ratio::new(3 * stats.r - stats.s(), stats.s());
    let zero = Ratio::from_integer(0);
    let one = Ratio::from_integer(1);
    if v < zero {
        zero
    } else if v > one {
        one
    } else {
        v
    }
}

/// Raw potential in floating point (for the audit hot path).
pub fn zeta_f64(l: i64, r: i64) -> f64 {
    let s = l + r;
    let num = 3 * r - s;
    if num <= 0 {
        0.0
    } else if num >= s {
        1.0
    } else {
        num as f64 / s as f64
    }
}

/// Subtree stats for every live node: one bottom-up pass for `L`, one
/// right-to-left pass per sibling group (roots included) for `R`.
#[derive(Debug, Clone)]
pub struct StatsMap {
    by_slot: BTreeMap<u32, SubtreeStats>,
}

impl StatsMap {
    pub fn get(&self, h: NodeHandle) -> Option<SubtreeStats> {
        self.by_slot.get(&h.index()).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, SubtreeStats)> + '_ {
        self.by_slot.iter().map(|(&i, &s)| (i, s))
    }

    /// Exact sum of raw potentials over all live nodes.
    pub fn zeta_total(&self) -> BigRational {
        let mut sum = BigRational::zero();
        for (_, st) in self.iter() {
            sum += big(zeta_exact(st));
        }
        sum
    }
}

fn big(r: Ratio<i64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn compute_stats<K>(store: &ForestStore<K>) -> StatsMap {
    let mut by_slot: BTreeMap<u32, SubtreeStats> = BTreeMap::new();
    // Subtree sizes: reverse preorder visits children before parents.
    let roots = store.roots();
    let mut sizes: BTreeMap<u32, i64> = BTreeMap::new();
    let mut order: Vec<NodeHandle> = Vec::with_capacity(store.len());
    for &r in &roots {
        order.extend(store.subtree(r));
    }
    for &h in order.iter().rev() {
        let mut l = 1i64;
        for c in store.children(h) {
            l += sizes[&c.index()];
        }
        sizes.insert(h.index(), l);
    }
    // Right-sibling mass: right-to-left per sibling group; the root list is
    // a sibling group too.
    let mut group_stack: Vec<Vec<NodeHandle>> = alloc::vec![roots];
    while let Some(group) = group_stack.pop() {
        let mut acc = 0i64;
        for &h in group.iter().rev() {
            by_slot.insert(
                h.index(),
                SubtreeStats {
                    l: sizes[&h.index()],
                    r: acc,
                },
            );
            acc += sizes[&h.index()];
            let children = store.children(h);
            if !children.is_empty() {
                group_stack.push(children);
            }
        }
    }
    StatsMap { by_slot }
}

/// Exact per-node raw potential plus the aggregate `phi`.
#[derive(Debug, Clone)]
pub struct PotentialSnapshot {
    pub per_node: Vec<(NodeHandle, Ratio<i64>)>,
    pub zeta_total: BigRational,
    pub phi_total: f64,
    pub c: f64,
    pub n: usize,
}

pub fn snapshot<K>(store: &ForestStore<K>, c: f64) -> PotentialSnapshot {
    let stats = compute_stats(store);
    let mut per_node = Vec::with_capacity(store.len());
    for h in store.live_handles() {
        let st = stats.get(h).expect("live node has stats");
        per_node.push((h, zeta_exact(st)));
    }
    let zeta_total = stats.zeta_total();
    let n = store.len();
    let phi_total = zeta_total.to_f64().unwrap_or(0.0) * c * loglog2(n);
    PotentialSnapshot {
        per_node,
        zeta_total,
        phi_total,
        c,
        n,
    }
}

// ---------------------------------------------------------------------------
// Lemma checkers (exact rational arithmetic).
// ---------------------------------------------------------------------------

const EPS: f64 = 1e-9;

/// Sum of raw potentials of `k` mutual siblings is at least
/// `k - log_{3/2} n`. The left side is exact; the comparison against the
/// irrational right side uses an epsilon, falling back to the integer-safe
/// `k - ceil(log_{3/2} n)` bound when within the epsilon.
pub fn check_sibling_group(
    stats: &StatsMap,
    group: &[NodeHandle],
    n: usize,
) -> Result<(), String> {
    let k = group.len() as i64;
    let mut sum = BigRational::zero();
    for &h in group {
        let st = stats.get(h).ok_or_else(|| format!("{:?} has no stats", h))?;
        sum += big(zeta_exact(st));
    }
    let bound = k as f64 - log32(n);
    let sf = sum.to_f64().unwrap_or(0.0);
    if sf >= bound - EPS {
        return Ok(());
    }
    let safe = BigRational::from_integer(BigInt::from(k - libm::ceil(log32(n)) as i64));
    if sum >= safe {
        return Ok(());
    }
    Err(format!(
        "sibling group of {} nodes has zeta sum {:.6} < {} - log3/2({}) = {:.6}",
        k, sf, k, n, bound
    ))
}

/// Sum of raw potentials along any set of mutual ancestors/descendants is
/// at most `log_{3/2} n`.
pub fn check_path(stats: &StatsMap, chain: &[NodeHandle], n: usize) -> Result<(), String> {
    let mut sum = BigRational::zero();
    for &h in chain {
        let st = stats.get(h).ok_or_else(|| format!("{:?} has no stats", h))?;
        sum += big(zeta_exact(st));
    }
    let bound = log32(n);
    let sf = sum.to_f64().unwrap_or(f64::INFINITY);
    if sf <= bound + EPS {
        Ok(())
    } else {
        Err(format!(
            "chain of {} nodes has zeta sum {:.6} > log3/2({}) = {:.6}",
            chain.len(),
            sf,
            n,
            bound
        ))
    }
}

/// Check every maximal sibling group (the root list plus each node's child
/// list). Since each raw potential is at most 1, a maximal group that
/// satisfies the bound certifies all of its subsets.
pub fn check_all_sibling_groups<K>(store: &ForestStore<K>) -> Vec<String> {
    let stats = compute_stats(store);
    let n = store.len();
    let mut bad = Vec::new();
    let roots = store.roots();
    if let Err(e) = check_sibling_group(&stats, &roots, n) {
        bad.push(e);
    }
    for h in store.live_handles() {
        let children = store.children(h);
        if !children.is_empty() {
            if let Err(e) = check_sibling_group(&stats, &children, n) {
                bad.push(e);
            }
        }
    }
    bad
}

/// Check every root-to-leaf path. Raw potentials are nonnegative, so a
/// maximal path that satisfies the bound certifies all of its subsets.
pub fn check_all_paths<K>(store: &ForestStore<K>) -> Vec<String> {
    let stats = compute_stats(store);
    let n = store.len();
    let mut bad = Vec::new();
    let mut stack: Vec<(NodeHandle, Vec<NodeHandle>)> = store
        .roots()
        .into_iter()
        .map(|r| (r, Vec::new()))
        .collect();
    while let Some((h, mut path)) = stack.pop() {
        path.push(h);
        let children = store.children(h);
        if children.is_empty() {
            if let Err(e) = check_path(&stats, &path, n) {
                bad.push(e);
            }
        } else {
            for c in children {
                stack.push((c, path.clone()));
            }
        }
    }
    bad
}

/// Detaching `h` (with its subtree) increases the summed raw potential of
/// the nodes outside the subtree by at most 13. Exact rational comparison;
/// works on a clone, so the store is untouched.
pub fn check_detach<K: Ord + Clone + core::fmt::Debug>(
    store: &ForestStore<K>,
    h: NodeHandle,
) -> Result<BigRational, String> {
    let before = compute_stats(store);
    let subtree: alloc::collections::BTreeSet<u32> =
        store.subtree(h).iter().map(|x| x.index()).collect();

    let mut clone = store.clone();
    clone.detach_subtree(h).map_err(|e| format!("{:?}: {}", h, e))?;
    clone.push_leftmost_root(h).map_err(|e| format!("{:?}: {}", h, e))?;
    let after = compute_stats(&clone);

    let mut sum_before = BigRational::zero();
    let mut sum_after = BigRational::zero();
    for (idx, st) in before.iter() {
        if !subtree.contains(&idx) {
            sum_before += big(zeta_exact(st));
        }
    }
    for (idx, st) in after.iter() {
        if !subtree.contains(&idx) {
            sum_after += big(zeta_exact(st));
        }
    }
    let increase = sum_after - sum_before;
    if increase <= BigRational::from_integer(BigInt::from(13)) {
        Ok(increase)
    } else {
        Err(format!(
            "detaching {:?} increased outside zeta by {:.6} > 13",
            h,
            increase.to_f64().unwrap_or(f64::INFINITY)
        ))
    }
}

/// `n*loglog(n) - n*loglog(n-1)` stays at most 2 for every `n` in range
/// (`n >= 4` so both inner logs are positive).
pub fn check_growth_fact(lo: usize, hi: usize) -> Result<(), String> {
    for n in lo.max(4)..=hi {
        let d = growth_difference(n);
        if d > 2.0 + EPS {
            return Err(format!("n log log n - n log log (n-1) = {:.9} > 2 at n = {}", d, n));
        }
    }
    Ok(())
}

pub fn growth_difference(n: usize) -> f64 {
    let n_f = n as f64;
    n_f * (libm::log2(libm::log2(n_f)) - libm::log2(libm::log2(n_f - 1.0)))
}

// ---------------------------------------------------------------------------
// Incremental potential tracking for audits.
// ---------------------------------------------------------------------------

/// Incrementally maintained `(L, R)` per node plus a compensated running
/// `zeta` sum. The integer stats are exact (they are checked against
/// [`compute_stats`] in tests and resynced periodically); the `f64` sum is
/// instrumentation for the amortized audit.
#[derive(Debug, Clone)]
pub struct PhiTracker {
    size: Vec<i64>,
    rmass: Vec<i64>,
    total: i64,
    sum: f64,
    comp: f64,
    ops_since_resync: u64,
    resync_every: u64,
}

impl PhiTracker {
    pub fn new<K>(store: &ForestStore<K>) -> Self {
        let mut t = Self {
            size: Vec::new(),
            rmass: Vec::new(),
            total: 0,
            sum: 0.0,
            comp: 0.0,
            ops_since_resync: 0,
            resync_every: 4096,
        };
        t.resync(store);
        t
    }

    pub fn live_count(&self) -> usize {
        self.total as usize
    }

    pub fn zeta_sum(&self) -> f64 {
        self.sum
    }

    pub fn stats_of(&self, h: NodeHandle) -> SubtreeStats {
        SubtreeStats {
            l: self.size[h.index() as usize],
            r: self.rmass[h.index() as usize],
        }
    }

    /// Current potential `zeta_total * c * loglog2(n)`.
    pub fn phi(&self, c: f64) -> f64 {
        self.sum * c * loglog2(self.total as usize)
    }

    fn ensure(&mut self, idx: usize) {
        if self.size.len() <= idx {
            self.size.resize(idx + 1, 0);
            self.rmass.resize(idx + 1, 0);
        }
    }

    fn add(&mut self, x: f64) {
        // Kahan compensated summation.
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    fn set_lr(&mut self, h: NodeHandle, l: i64, r: i64) {
        let idx = h.index() as usize;
        let old = zeta_f64(self.size[idx], self.rmass[idx]);
        let new = zeta_f64(l, r);
        self.add(new - old);
        self.size[idx] = l;
        self.rmass[idx] = r;
    }

    /// Fold one recorded mutation into the stats.
    pub fn apply_event(&mut self, ev: &StructEvent) {
        match ev {
            StructEvent::Insert { node } => {
                let idx = node.index() as usize;
                self.ensure(idx);
                self.size[idx] = 1;
                self.rmass[idx] = self.total;
                self.add(zeta_f64(1, self.total));
                self.total += 1;
            }
            StructEvent::KeyDecreased { .. } => {}
            StructEvent::Detach {
                node,
                ancestors,
                lost_right_mass,
            } => {
                let m = self.size[node.index() as usize];
                for &a in ancestors {
                    let idx = a.index() as usize;
                    self.set_lr(a, self.size[idx] - m, self.rmass[idx]);
                }
                for &x in lost_right_mass {
                    let idx = x.index() as usize;
                    self.set_lr(x, self.size[idx], self.rmass[idx] - m);
                }
                self.set_lr(*node, m, self.total - m);
            }
            StructEvent::Pair {
                winner,
                loser,
                between,
                loser_was_left,
            } => {
                let m = self.size[loser.index() as usize];
                let w_idx = winner.index() as usize;
                let w_size = self.size[w_idx];
                let w_r = self.rmass[w_idx];
                // The loser's new right siblings are the winner's former
                // children.
                self.set_lr(*loser, m, w_size - 1);
                for &x in between {
                    let idx = x.index() as usize;
                    let r = if *loser_was_left {
                        self.rmass[idx] + m
                    } else {
                        self.rmass[idx] - m
                    };
                    self.set_lr(x, self.size[idx], r);
                }
                let new_r = if *loser_was_left { w_r } else { w_r - m };
                self.set_lr(*winner, w_size + m, new_r);
            }
            StructEvent::RemoveRoot {
                node,
                children,
                left_roots,
            } => {
                let idx = node.index() as usize;
                let m_total = self.size[idx];
                for &x in left_roots {
                    let i = x.index() as usize;
                    self.set_lr(x, self.size[i], self.rmass[i] - m_total);
                }
                self.add(-zeta_f64(self.size[idx], self.rmass[idx]));
                self.size[idx] = 0;
                self.rmass[idx] = 0;
                self.total -= 1;
                let mut prefix = 0i64;
                for &c in children {
                    let i = c.index() as usize;
                    prefix += self.size[i];
                    self.set_lr(c, self.size[i], self.total - prefix);
                }
            }
        }
    }

    pub fn apply_events(&mut self, events: &[StructEvent]) {
        for ev in events {
            self.apply_event(ev);
        }
        self.ops_since_resync += 1;
    }

    /// Recompute everything from the store. Returns the drift the running
    /// `f64` sum had accumulated (should be tiny).
    pub fn resync<K>(&mut self, store: &ForestStore<K>) -> f64 {
        let stats = compute_stats(store);
        self.size.clear();
        self.rmass.clear();
        self.ensure(store.capacity().saturating_sub(1));
        let old_sum = self.sum;
        let mut fresh = 0.0f64;
        let mut comp = 0.0f64;
        for (idx, st) in stats.iter() {
            self.size[idx as usize] = st.l;
            self.rmass[idx as usize] = st.r;
            let y = zeta_f64(st.l, st.r) - comp;
            let t = fresh + y;
            comp = (t - fresh) - y;
            fresh = t;
        }
        self.total = store.len() as i64;
        self.sum = fresh;
        self.comp = 0.0;
        let drift = (old_sum - fresh).abs();
        self.ops_since_resync = 0;
        drift
    }

    pub fn maybe_resync<K>(&mut self, store: &ForestStore<K>) {
        if self.ops_since_resync >= self.resync_every {
            self.resync(store);
        }
    }

    /// Compare the incremental stats against a from-scratch pass.
    pub fn verify_against<K>(&self, store: &ForestStore<K>) -> Result<(), String> {
        let stats = compute_stats(store);
        for (idx, st) in stats.iter() {
            let have = SubtreeStats {
                l: self.size[idx as usize],
                r: self.rmass[idx as usize],
            };
            if have != st {
                return Err(format!(
                    "slot {}: incremental stats {:?} != scratch {:?}",
                    idx, have, st
                ));
            }
        }
        if self.total != store.len() as i64 {
            return Err(format!(
                "incremental total {} != live {}",
                self.total,
                store.len()
            ));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Amortized audit.
// ---------------------------------------------------------------------------

/// Per-operation audit record: `amortized = actual + (phi_after - phi_before)`,
/// `ratio = amortized / bound`.
#[derive(Debug, Clone, Copy)]
pub struct AuditRow {
    pub kind: OpKind,
    pub actual: u64,
    pub delta_phi: f64,
    pub amortized: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// Audited bound for one operation on a heap that has `n` live nodes after
/// the operation: `15 * c * loglog(n) + 2` for insert and decrease-key
/// (detach raises outside potential by at most 13, the moved node by at
/// most 1, plus slack for the unit actual cost and the growth of `n`), and
/// `c * log_{3/2}(n) * loglog(n)` for extract-min.
pub fn bound_for(kind: OpKind, n_after: usize, c: f64) -> f64 {
    let ll = loglog2(n_after);
    match kind {
        OpKind::Insert | OpKind::DecreaseKey => 15.0 * c * ll + 2.0,
        OpKind::ExtractMin => c * log32(n_after.max(4)) * ll,
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct KindSummary {
    pub count: u64,
    pub max_amortized: f64,
    pub max_ratio: f64,
}

/// Drives a [`PhiTracker`] across a run and produces one [`AuditRow`] per
/// operation. The caller owns the op loop: call [`Auditor::begin_op`],
/// perform the operation, then feed the drained events to
/// [`Auditor::end_op`].
#[derive(Debug, Clone)]
pub struct Auditor {
    tracker: PhiTracker,
    pub c: f64,
    phi_before: f64,
    pub total_actual: f64,
    pub total_amortized: f64,
    pub insert: KindSummary,
    pub decrease_key: KindSummary,
    pub extract_min: KindSummary,
}

impl Auditor {
    pub fn new<K>(store: &ForestStore<K>, c: f64) -> Self {
        Self {
            tracker: PhiTracker::new(store),
            c,
            phi_before: 0.0,
            total_actual: 0.0,
            total_amortized: 0.0,
            insert: KindSummary::default(),
            decrease_key: KindSummary::default(),
            extract_min: KindSummary::default(),
        }
    }

    pub fn tracker(&self) -> &PhiTracker {
        &self.tracker
    }

    pub fn phi(&self) -> f64 {
        self.tracker.phi(self.c)
    }

    pub fn begin_op(&mut self) {
        self.phi_before = self.tracker.phi(self.c);
    }

    pub fn end_op<K>(
        &mut self,
        store: &ForestStore<K>,
        events: &[StructEvent],
        kind: OpKind,
        actual: u64,
    ) -> AuditRow {
        self.tracker.apply_events(events);
        self.tracker.maybe_resync(store);
        let phi_after = self.tracker.phi(self.c);
        let delta_phi = phi_after - self.phi_before;
        let amortized = actual as f64 + delta_phi;
        let bound = bound_for(kind, self.tracker.live_count(), self.c);
        let ratio = amortized / bound;
        let summary = match kind {
            OpKind::Insert => &mut self.insert,
            OpKind::DecreaseKey => &mut self.decrease_key,
            OpKind::ExtractMin => &mut self.extract_min,
        };
        summary.count += 1;
        if amortized > summary.max_amortized {
            summary.max_amortized = amortized;
        }
        if ratio > summary.max_ratio {
            summary.max_ratio = ratio;
        }
        self.total_actual += actual as f64;
        self.total_amortized += amortized;
        AuditRow {
            kind,
            actual,
            delta_phi,
            amortized,
            bound,
            ratio,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{Key, KeyTree};
    use crate::sort_heap::{SortHeap, Strategy};
    use alloc::vec;

    fn stats_for(tree_sizes: &[i64]) -> Vec<SubtreeStats> {
        // Build stats for a sibling group with given subtree sizes.
        let mut out = Vec::new();
        for i in 0..tree_sizes.len() {
            let r: i64 = tree_sizes[i + 1..].iter().sum();
            out.push(SubtreeStats {
                l: tree_sizes[i],
                r,
            });
        }
        out
    }

    #[test]
    fn single_node_stats() {
        let (store, handles) = ForestStore::build(&[KeyTree::leaf(Key::new(1, 0))]);
        let stats = compute_stats(&store);
        assert_eq!(stats.get(handles[0]), Some(SubtreeStats { l: 1, r: 0 }));
    }

    #[test]
    fn balanced_node_has_half_potential() {
        // R = L = S/2 gives zeta 1/2.
        let st = SubtreeStats { l: 2, r: 2 };
        assert_eq!(zeta_exact(st), Ratio::new(1, 2));
        assert_eq!(classify(st), Heaviness::Transitional);
    }

    #[test]
    fn rightmost_nodes_are_left_heavy() {
        let st = SubtreeStats { l: 5, r: 0 };
        assert_eq!(classify(st), Heaviness::LeftHeavy);
        assert_eq!(zeta_exact(st), Ratio::from_integer(0));
    }

    #[test]
    fn heavy_classifications() {
        assert_eq!(classify(SubtreeStats { l: 1, r: 2 }), Heaviness::RightHeavy);
        assert_eq!(zeta_exact(SubtreeStats { l: 1, r: 2 }), Ratio::from_integer(1));
        assert_eq!(classify(SubtreeStats { l: 2, r: 1 }), Heaviness::LeftHeavy);
        assert_eq!(zeta_exact(SubtreeStats { l: 2, r: 1 }), Ratio::from_integer(0));
    }

    #[test]
    fn clamp_formula_matches_three_case_definition() {
        for l in 1..=200i64 {
            for r in 0..=200i64 {
                let st = SubtreeStats { l, r };
                assert_eq!(zeta_exact(st), zeta_clamped(st), "L={} R={}", l, r);
            }
        }
    }

    #[test]
    fn worked_example_stats() {
        // Roots [a, b]; a has children [c, d]; sizes: a-subtree 3, b 1.
        let (store, handles) = ForestStore::build(&[
            KeyTree::node(
                Key::new(0, 0),
                vec![KeyTree::leaf(Key::new(5, 1)), KeyTree::leaf(Key::new(7, 2))],
            ),
            KeyTree::leaf(Key::new(9, 3)),
        ]);
        let stats = compute_stats(&store);
        let (a, c, d, b) = (handles[0], handles[1], handles[2], handles[3]);
        assert_eq!(stats.get(a), Some(SubtreeStats { l: 3, r: 1 }));
        assert_eq!(stats.get(b), Some(SubtreeStats { l: 1, r: 0 }));
        assert_eq!(stats.get(c), Some(SubtreeStats { l: 1, r: 1 }));
        assert_eq!(stats.get(d), Some(SubtreeStats { l: 1, r: 0 }));
    }

    #[test]
    fn sibling_lemma_trivial_cases() {
        let sts = stats_for(&[1]);
        // k=1: zeta >= 0 >= 1 - log3/2(n) for n >= 2.
        assert!(zeta_exact(sts[0]) >= Ratio::from_integer(0));
        let (store, _) = ForestStore::build(&[KeyTree::leaf(Key::new(1, 0))]);
        assert!(check_all_sibling_groups(&store).is_empty());
        assert!(check_all_paths(&store).is_empty());
    }

    #[test]
    fn detach_under_right_heavy_ancestors_is_free() {
        // A left-spine tree: a -> b -> leaf, with heavy right siblings so
        // ancestors stay right-heavy after the detach.
        let (store, handles) = ForestStore::build(&[KeyTree::node(
            Key::new(0, 0),
            vec![
                KeyTree::node(Key::new(1, 1), vec![KeyTree::leaf(Key::new(9, 2))]),
                KeyTree::node(
                    Key::new(2, 3),
                    vec![
                        KeyTree::leaf(Key::new(8, 4)),
                        KeyTree::leaf(Key::new(7, 5)),
                        KeyTree::leaf(Key::new(6, 6)),
                    ],
                ),
            ],
        )]);
        // Detach the leaf 9 under child 1: its ancestor (node 1) has a large
        // right sibling group, so it stays right-heavy.
        let leaf = handles[2];
        let increase = check_detach(&store, leaf).unwrap();
        assert!(increase <= BigRational::zero());
    }

    #[test]
    fn growth_fact_small_and_large() {
        assert!(growth_difference(4) <= 2.0);
        assert!(growth_difference(10) <= 2.0);
        assert!(growth_difference(1_000_000) <= 2.0);
        check_growth_fact(4, 10_000).unwrap();
        // The difference decreases monotonically from n = 8 on.
        let mut prev = growth_difference(8);
        for n in 9..2000 {
            let d = growth_difference(n);
            assert!(d <= prev + 1e-12, "not monotone at {}", n);
            prev = d;
        }
    }

    #[test]
    fn tracker_matches_scratch_on_random_workload() {
        let mut rng = crate::rng::SplitMix64::new(17);
        let mut heap = SortHeap::new(Strategy::Eager);
        heap.store_mut().enable_events();
        let mut tracker = PhiTracker::new(heap.store());
        let mut handles = Vec::new();
        for step in 0..3000u64 {
            match rng.next_below(10) {
                0..=4 => {
                    handles.push(heap.insert(rng.next_below(1 << 30) as i64).unwrap());
                }
                5..=7 => {
                    if !handles.is_empty() {
                        let h = handles[rng.next_below(handles.len() as u64) as usize];
                        if heap.store().is_live(h) {
                            heap.decrease_key(h, rng.next_below(1 << 12) as i64).unwrap();
                        }
                    }
                }
                _ => {
                    if !heap.is_empty() {
                        heap.extract_min().unwrap();
                    }
                }
            }
            let events = heap.store_mut().take_events();
            tracker.apply_events(&events);
            if step % 250 == 0 {
                tracker.verify_against(heap.store()).unwrap();
                let scratch = compute_stats(heap.store())
                    .zeta_total()
                    .to_f64()
                    .unwrap_or(0.0);
                assert!(
                    (tracker.zeta_sum() - scratch).abs() < 1e-6,
                    "zeta drift at step {}: {} vs {}",
                    step,
                    tracker.zeta_sum(),
                    scratch
                );
            }
        }
    }

    #[test]
    fn tracker_matches_scratch_under_model_strategy() {
        let mut rng = crate::rng::SplitMix64::new(23);
        let mut heap = SortHeap::new(Strategy::Model);
        heap.store_mut().enable_events();
        let mut tracker = PhiTracker::new(heap.store());
        let mut handles = Vec::new();
        for step in 0..1500u64 {
            match rng.next_below(8) {
                0..=4 => {
                    handles.push(heap.insert(rng.next_below(1 << 20) as i64).unwrap());
                }
                5..=6 => {
                    if !handles.is_empty() {
                        let h = handles[rng.next_below(handles.len() as u64) as usize];
                        if heap.store().is_live(h) {
                            heap.decrease_key(h, rng.next_below(1 << 8) as i64).unwrap();
                        }
                    }
                }
                _ => {
                    if !heap.is_empty() {
                        heap.extract_min().unwrap();
                    }
                }
            }
            let events = heap.store_mut().take_events();
            tracker.apply_events(&events);
            if step % 300 == 0 {
                tracker.verify_against(heap.store()).unwrap();
            }
        }
        tracker.verify_against(heap.store()).unwrap();
    }

    #[test]
    fn phi_is_zero_on_empty_and_nonnegative() {
        let store: ForestStore<Key> = ForestStore::new();
        let tracker = PhiTracker::new(&store);
        assert_eq!(tracker.phi(64.0), 0.0);
        let snap = snapshot(&store, 64.0);
        assert_eq!(snap.phi_total, 0.0);
        assert!(snap.zeta_total.is_zero() || snap.zeta_total.is_positive());
    }
}
