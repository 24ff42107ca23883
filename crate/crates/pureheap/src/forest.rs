//! Arena-backed ordered forest of heap-ordered trees.
//!
//! Nodes live in a generational arena and carry parent / leftmost-child /
//! right-sibling / left-sibling links. The roots themselves form a doubly
//! linked sibling list (leftmost first), so navigation and the potential
//! accounting treat the root list as one more sibling group.
//!
//! All structural mutation goes through a small set of primitives:
//! [`ForestStore::insert`], [`ForestStore::decrease_key_to`],
//! [`ForestStore::detach_subtree`], [`ForestStore::attach_leftmost_child`],
//! [`ForestStore::push_leftmost_root`], [`ForestStore::pair`] and
//! [`ForestStore::remove_root`]. With event logging enabled each mutation
//! records a [`StructEvent`] carrying enough pre-mutation context for
//! incremental observers (potential tracking, rank tracking) to stay exact.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Total order used by the heaps at the CLI layer: compare by value, then by
/// insertion sequence number, so no two live keys ever compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Key {
    pub value: i64,
    pub seq: u64,
}

impl Key {
    pub fn new(value: i64, seq: u64) -> Self {
        Self { value, seq }
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.value, self.seq)
    }
}

/// Stable opaque identifier of a live node. A handle is live iff its
/// generation matches the slot's current generation.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeHandle {
    index: u32,
    generation: u32,
}

impl NodeHandle {
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn generation(&self) -> u32 {
        self.generation
    }
}

impl fmt::Debug for NodeHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}g{}", self.index, self.generation)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeapError {
    /// The handle's generation does not match its slot (the node was
    /// extracted, or the handle belongs to another store).
    StaleHandle,
    /// The operation requires a root.
    NotARoot,
    /// The operation requires a detached (floating) subtree.
    NotDetached,
    /// The operation requires an attached node.
    NotAttached,
    /// `pair` was given the same node twice.
    SameNode,
    /// A key update would increase the key.
    KeyIncrease,
    /// Negative decrease amount.
    NegativeDelta,
    /// Extract from an empty heap.
    EmptyHeap,
    /// The arena cannot allocate another slot.
    CapacityExhausted,
}

impl fmt::Display for HeapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            HeapError::StaleHandle => "stale handle",
            HeapError::NotARoot => "node is not a root",
            HeapError::NotDetached => "node is not detached",
            HeapError::NotAttached => "node is not attached",
            HeapError::SameNode => "pair requires two distinct roots",
            HeapError::KeyIncrease => "new key is larger than the current key",
            HeapError::NegativeDelta => "decrease amount must be nonnegative",
            HeapError::EmptyHeap => "heap is empty",
            HeapError::CapacityExhausted => "arena capacity exhausted",
        };
        f.write_str(msg)
    }
}

impl core::error::Error for HeapError {}

#[derive(Debug, Clone)]
pub struct HeapNode<K> {
    key: K,
    parent: Option<NodeHandle>,
    leftmost_child: Option<NodeHandle>,
    left_sibling: Option<NodeHandle>,
    right_sibling: Option<NodeHandle>,
}

#[derive(Debug, Clone)]
struct Slot<K> {
    generation: u32,
    node: Option<HeapNode<K>>,
}

/// Structural mutation record. Events carry the pre-mutation context that an
/// incremental observer cannot reconstruct from the post-state:
/// which nodes lost right-sibling mass, which roots a pairing crossed, and
/// so on. Only populated when event logging is enabled.
#[derive(Debug, Clone)]
pub enum StructEvent {
    /// A fresh node became the leftmost root.
    Insert { node: NodeHandle },
    /// `node` (with its subtree) was detached and pushed as the leftmost
    /// root. `ancestors` is the former parent chain from parent up to the
    /// tree root; `lost_right_mass` are all left-siblings of every node on
    /// the path (including `node` itself), whose right-sibling mass shrank
    /// by the subtree size.
    Detach {
        node: NodeHandle,
        ancestors: Vec<NodeHandle>,
        lost_right_mass: Vec<NodeHandle>,
    },
    /// The key of `node` was decreased (no structural content; the move is
    /// reported by the accompanying `Detach`).
    KeyDecreased { node: NodeHandle },
    /// `loser` was attached as the leftmost child of `winner`. `between`
    /// lists the roots strictly between the two in root order;
    /// `loser_was_left` tells which direction the loser's mass moved.
    Pair {
        winner: NodeHandle,
        loser: NodeHandle,
        between: Vec<NodeHandle>,
        loser_was_left: bool,
    },
    /// Root `node` was removed; its children (left to right) became the
    /// leftmost roots. `left_roots` are the roots that were to the left of
    /// `node` at removal time.
    RemoveRoot {
        node: NodeHandle,
        children: Vec<NodeHandle>,
        left_roots: Vec<NodeHandle>,
    },
}

/// One invariant violation found by [`ForestStore::validate`].
#[derive(Debug, Clone)]
pub struct Violation {
    pub handle: Option<NodeHandle>,
    pub message: String,
}

/// Arena of heap nodes plus the ordered root list.
#[derive(Debug, Clone)]
pub struct ForestStore<K> {
    slots: Vec<Slot<K>>,
    free: Vec<u32>,
    leftmost_root: Option<NodeHandle>,
    live: usize,
    events: Option<Vec<StructEvent>>,
}

impl<K> Default for ForestStore<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K> ForestStore<K> {
    pub fn new() -> Self {
        Self {
            slots: Vec::new(),
            free: Vec::new(),
            leftmost_root: None,
            live: 0,
            events: None,
        }
    }

    /// Number of live nodes.
    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Number of arena slots ever allocated (live or reusable).
    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    /// Start recording [`StructEvent`]s. Recording makes some mutations pay
    /// an extra walk proportional to the sibling distance they span; it is
    /// instrumentation, not part of any operation's accounted cost.
    pub fn enable_events(&mut self) {
        if self.events.is_none() {
            self.events = Some(Vec::new());
        }
    }

    pub fn disable_events(&mut self) {
        self.events = None;
    }

    pub fn events_enabled(&self) -> bool {
        self.events.is_some()
    }

    /// Drain the recorded events since the last call.
    pub fn take_events(&mut self) -> Vec<StructEvent> {
        match &mut self.events {
            Some(buf) => core::mem::take(buf),
            None => Vec::new(),
        }
    }

    pub fn is_live(&self, h: NodeHandle) -> bool {
        self.slots
            .get(h.index as usize)
            .map(|s| s.generation == h.generation && s.node.is_some())
            .unwrap_or(false)
    }

    fn node(&self, h: NodeHandle) -> Result<&HeapNode<K>, HeapError> {
        self.slots
            .get(h.index as usize)
            .filter(|s| s.generation == h.generation)
            .and_then(|s| s.node.as_ref())
            .ok_or(HeapError::StaleHandle)
    }

    // Unchecked accessors for internal link surgery on handles already
    // validated by the caller.
    fn n(&self, h: NodeHandle) -> &HeapNode<K> {
        self.slots[h.index as usize].node.as_ref().unwrap()
    }

    fn n_mut(&mut self, h: NodeHandle) -> &mut HeapNode<K> {
        self.slots[h.index as usize].node.as_mut().unwrap()
    }

    pub fn key(&self, h: NodeHandle) -> Result<&K, HeapError> {
        Ok(&self.node(h)?.key)
    }

    pub fn parent(&self, h: NodeHandle) -> Result<Option<NodeHandle>, HeapError> {
        Ok(self.node(h)?.parent)
    }

    pub fn leftmost_child(&self, h: NodeHandle) -> Result<Option<NodeHandle>, HeapError> {
        Ok(self.node(h)?.leftmost_child)
    }

    pub fn left_sibling(&self, h: NodeHandle) -> Result<Option<NodeHandle>, HeapError> {
        Ok(self.node(h)?.left_sibling)
    }

    pub fn right_sibling(&self, h: NodeHandle) -> Result<Option<NodeHandle>, HeapError> {
        Ok(self.node(h)?.right_sibling)
    }

    pub fn leftmost_root(&self) -> Option<NodeHandle> {
        self.leftmost_root
    }

    /// A node is a root iff it has no parent and sits in the root list.
    /// Detached (floating) subtrees have no parent either but are not
    /// reachable from the root list and carry no sibling links.
    pub fn is_root(&self, h: NodeHandle) -> bool {
        match self.node(h) {
            Ok(n) => {
                n.parent.is_none()
                    && (n.left_sibling.is_some()
                        || n.right_sibling.is_some()
                        || self.leftmost_root == Some(h))
            }
            Err(_) => false,
        }
    }

    fn is_floating(&self, h: NodeHandle) -> bool {
        match self.node(h) {
            Ok(n) => {
                n.parent.is_none()
                    && n.left_sibling.is_none()
                    && n.right_sibling.is_none()
                    && self.leftmost_root != Some(h)
            }
            Err(_) => false,
        }
    }

    fn alloc(&mut self, key: K) -> Result<NodeHandle, HeapError> {
        let node = HeapNode {
            key,
            parent: None,
            leftmost_child: None,
            left_sibling: None,
            right_sibling: None,
        };
        if let Some(index) = self.free.pop() {
            let slot = &mut self.slots[index as usize];
            debug_assert!(slot.node.is_none());
            slot.node = Some(node);
            self.live += 1;
            return Ok(NodeHandle {
                index,
                generation: slot.generation,
            });
        }
        if self.slots.len() >= u32::MAX as usize {
            return Err(HeapError::CapacityExhausted);
        }
        let index = self.slots.len() as u32;
        self.slots.push(Slot {
            generation: 0,
            node: Some(node),
        });
        self.live += 1;
        Ok(NodeHandle {
            index,
            generation: 0,
        })
    }

    fn record(&mut self, ev: StructEvent) {
        if let Some(buf) = &mut self.events {
            buf.push(ev);
        }
    }

    /// Add a new key as the leftmost root.
    pub fn insert(&mut self, key: K) -> Result<NodeHandle, HeapError> {
        let h = self.alloc(key)?;
        self.link_as_leftmost_root(h);
        self.record(StructEvent::Insert { node: h });
        Ok(h)
    }

    fn link_as_leftmost_root(&mut self, h: NodeHandle) {
        let old = self.leftmost_root;
        self.n_mut(h).right_sibling = old;
        self.n_mut(h).left_sibling = None;
        self.n_mut(h).parent = None;
        if let Some(old) = old {
            self.n_mut(old).left_sibling = Some(h);
        }
        self.leftmost_root = Some(h);
    }

    /// Attach a floating subtree as the leftmost root.
    pub fn push_leftmost_root(&mut self, h: NodeHandle) -> Result<(), HeapError> {
        self.node(h)?;
        if !self.is_floating(h) {
            return Err(HeapError::NotDetached);
        }
        self.link_as_leftmost_root(h);
        Ok(())
    }

    /// All left-siblings of every node on the path from `h` (inclusive) to
    /// its tree root; these are exactly the nodes whose right-sibling mass
    /// shrinks when `h`'s subtree leaves its position.
    fn collect_lost_right_mass(&self, h: NodeHandle) -> (Vec<NodeHandle>, Vec<NodeHandle>) {
        let mut ancestors = Vec::new();
        let mut lost = Vec::new();
        let mut cur = h;
        loop {
            let mut ls = self.n(cur).left_sibling;
            while let Some(s) = ls {
                lost.push(s);
                ls = self.n(s).left_sibling;
            }
            match self.n(cur).parent {
                Some(p) => {
                    ancestors.push(p);
                    cur = p;
                }
                None => break,
            }
        }
        (ancestors, lost)
    }

    /// Detach `h` together with its subtree from its parent (or from the
    /// root list), leaving it floating. The subtree itself is untouched.
    pub fn detach_subtree(&mut self, h: NodeHandle) -> Result<(), HeapError> {
        self.node(h)?;
        if self.is_floating(h) {
            return Err(HeapError::NotAttached);
        }
        let event = if self.events.is_some() {
            let (ancestors, lost) = self.collect_lost_right_mass(h);
            Some(StructEvent::Detach {
                node: h,
                ancestors,
                lost_right_mass: lost,
            })
        } else {
            None
        };

        let (parent, left, right) = {
            let n = self.n(h);
            (n.parent, n.left_sibling, n.right_sibling)
        };
        match left {
            Some(l) => self.n_mut(l).right_sibling = right,
            None => {
                // h is the leftmost among its siblings: either the leftmost
                // child of its parent or the leftmost root.
                match parent {
                    Some(p) => self.n_mut(p).leftmost_child = right,
                    None => self.leftmost_root = right,
                }
            }
        }
        if let Some(r) = right {
            self.n_mut(r).left_sibling = left;
        }
        let n = self.n_mut(h);
        n.parent = None;
        n.left_sibling = None;
        n.right_sibling = None;

        if let Some(ev) = event {
            self.record(ev);
        }
        Ok(())
    }

    /// Attach a floating subtree as the leftmost child of `parent`.
    pub fn attach_leftmost_child(
        &mut self,
        parent: NodeHandle,
        child: NodeHandle,
    ) -> Result<(), HeapError> {
        self.node(parent)?;
        self.node(child)?;
        if parent == child {
            return Err(HeapError::SameNode);
        }
        if !self.is_floating(child) {
            return Err(HeapError::NotDetached);
        }
        let old = self.n(parent).leftmost_child;
        self.n_mut(child).parent = Some(parent);
        self.n_mut(child).right_sibling = old;
        if let Some(old) = old {
            self.n_mut(old).left_sibling = Some(child);
        }
        self.n_mut(parent).leftmost_child = Some(child);
        Ok(())
    }
}

impl<K: Ord> ForestStore<K> {
    /// Detach `h`, replace its key with a smaller-or-equal one and push it
    /// as the leftmost root. The subtree moves intact.
    pub fn decrease_key_to(&mut self, h: NodeHandle, new_key: K) -> Result<(), HeapError> {
        if new_key > self.node(h)?.key {
            return Err(HeapError::KeyIncrease);
        }
        self.detach_subtree(h)?;
        self.n_mut(h).key = new_key;
        self.link_as_leftmost_root(h);
        self.record(StructEvent::KeyDecreased { node: h });
        Ok(())
    }

    /// Pairing: attach the larger-keyed root as the leftmost child of the
    /// smaller-keyed root. Returns the winner (the smaller).
    pub fn pair(&mut self, a: NodeHandle, b: NodeHandle) -> Result<NodeHandle, HeapError> {
        if a == b {
            return Err(HeapError::SameNode);
        }
        if !self.is_root(a) || !self.is_root(b) {
            self.node(a)?;
            self.node(b)?;
            return Err(HeapError::NotARoot);
        }
        let (winner, loser) = if self.n(a).key < self.n(b).key {
            (a, b)
        } else {
            (b, a)
        };

        let event = if self.events.is_some() {
            let mut between = Vec::new();
            let mut loser_was_left = false;
            // Walk right from the loser; if we meet the winner the loser was
            // on its left, otherwise walk right from the winner instead.
            let mut cur = self.n(loser).right_sibling;
            let mut found = false;
            let mut tmp = Vec::new();
            while let Some(x) = cur {
                if x == winner {
                    found = true;
                    break;
                }
                tmp.push(x);
                cur = self.n(x).right_sibling;
            }
            if found {
                loser_was_left = true;
                between = tmp;
            } else {
                let mut cur = self.n(winner).right_sibling;
                while let Some(x) = cur {
                    if x == loser {
                        break;
                    }
                    between.push(x);
                    cur = self.n(x).right_sibling;
                }
            }
            Some(StructEvent::Pair {
                winner,
                loser,
                between,
                loser_was_left,
            })
        } else {
            None
        };

        // Unlink the loser from the root list, then hang it under the winner.
        let (left, right) = {
            let n = self.n(loser);
            (n.left_sibling, n.right_sibling)
        };
        match left {
            Some(l) => self.n_mut(l).right_sibling = right,
            None => self.leftmost_root = right,
        }
        if let Some(r) = right {
            self.n_mut(r).left_sibling = left;
        }
        {
            let n = self.n_mut(loser);
            n.left_sibling = None;
            n.right_sibling = None;
        }
        let old_child = self.n(winner).leftmost_child;
        self.n_mut(loser).parent = Some(winner);
        self.n_mut(loser).right_sibling = old_child;
        if let Some(c) = old_child {
            self.n_mut(c).left_sibling = Some(loser);
        }
        self.n_mut(winner).leftmost_child = Some(loser);

        if let Some(ev) = event {
            self.record(ev);
        }
        Ok(winner)
    }

    /// Remove a root, promoting its children (order preserved) as the
    /// leftmost roots. Returns the key and the promoted children.
    pub fn remove_root(&mut self, h: NodeHandle) -> Result<(K, Vec<NodeHandle>), HeapError> {
        if !self.is_root(h) {
            self.node(h)?;
            return Err(HeapError::NotARoot);
        }
        let left_roots = if self.events.is_some() {
            let mut v = Vec::new();
            let mut cur = self.n(h).left_sibling;
            while let Some(x) = cur {
                v.push(x);
                cur = self.n(x).left_sibling;
            }
            v
        } else {
            Vec::new()
        };

        let mut children = Vec::new();
        let mut c = self.n(h).leftmost_child;
        while let Some(x) = c {
            children.push(x);
            c = self.n(x).right_sibling;
        }

        // Unlink h from the root list.
        let (left, right) = {
            let n = self.n(h);
            (n.left_sibling, n.right_sibling)
        };
        match left {
            Some(l) => self.n_mut(l).right_sibling = right,
            None => self.leftmost_root = right,
        }
        if let Some(r) = right {
            self.n_mut(r).left_sibling = left;
        }

        // Splice the child chain at the leftmost end of the root list.
        if let (Some(&first), Some(&last)) = (children.first(), children.last()) {
            for &c in &children {
                self.n_mut(c).parent = None;
            }
            let old_leftmost = self.leftmost_root;
            self.n_mut(last).right_sibling = old_leftmost;
            if let Some(ol) = old_leftmost {
                self.n_mut(ol).left_sibling = Some(last);
            }
            self.n_mut(first).left_sibling = None;
            self.leftmost_root = Some(first);
        }

        if self.events.is_some() {
            self.record(StructEvent::RemoveRoot {
                node: h,
                children: children.clone(),
                left_roots,
            });
        }

        let slot = &mut self.slots[h.index as usize];
        let node = slot.node.take().unwrap();
        slot.generation = slot.generation.wrapping_add(1);
        self.free.push(h.index);
        self.live -= 1;
        Ok((node.key, children))
    }

    /// Linear scan of the root list for the minimum root. Returns the
    /// handle and the number of roots examined.
    pub fn scan_min(&self) -> Option<(NodeHandle, u64)> {
        let mut cur = self.leftmost_root?;
        let mut best = cur;
        let mut scanned = 1u64;
        while let Some(next) = self.n(cur).right_sibling {
            scanned += 1;
            if self.n(next).key < self.n(best).key {
                best = next;
            }
            cur = next;
        }
        Some((best, scanned))
    }
}

impl<K> ForestStore<K> {
    /// Roots, leftmost first.
    pub fn roots(&self) -> Vec<NodeHandle> {
        let mut v = Vec::new();
        let mut cur = self.leftmost_root;
        while let Some(h) = cur {
            v.push(h);
            cur = self.n(h).right_sibling;
        }
        v
    }

    pub fn root_count(&self) -> usize {
        let mut k = 0;
        let mut cur = self.leftmost_root;
        while let Some(h) = cur {
            k += 1;
            cur = self.n(h).right_sibling;
        }
        k
    }

    /// Children of `h`, leftmost (most recently attached) first.
    pub fn children(&self, h: NodeHandle) -> Vec<NodeHandle> {
        let mut v = Vec::new();
        let mut cur = self.n(h).leftmost_child;
        while let Some(c) = cur {
            v.push(c);
            cur = self.n(c).right_sibling;
        }
        v
    }

    /// Preorder walk of `h`'s subtree (iterative; heap chains can be deep).
    pub fn subtree(&self, h: NodeHandle) -> Vec<NodeHandle> {
        let mut out = Vec::new();
        let mut stack = alloc::vec![h];
        while let Some(x) = stack.pop() {
            out.push(x);
            // Push children right-to-left so the leftmost pops first.
            let children = self.children(x);
            for &c in children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    pub fn subtree_size(&self, h: NodeHandle) -> usize {
        self.subtree(h).len()
    }

    /// Every live node, in ascending slot order (deterministic).
    pub fn live_handles(&self) -> Vec<NodeHandle> {
        let mut v = Vec::with_capacity(self.live);
        for (i, s) in self.slots.iter().enumerate() {
            if s.node.is_some() {
                v.push(NodeHandle {
                    index: i as u32,
                    generation: s.generation,
                });
            }
        }
        v
    }
}

impl<K: Clone> ForestStore<K> {
    /// Shape-and-keys signature: preorder over roots left to right, emitting
    /// `(key, child_count)` per node. Two stores with equal signatures hold
    /// structurally identical forests with identical key placement.
    pub fn signature(&self) -> Vec<(K, u32)> {
        let mut out = Vec::with_capacity(self.live);
        for r in self.roots() {
            for h in self.subtree(r) {
                let n = self.n(h);
                out.push((n.key.clone(), self.children(h).len() as u32));
            }
        }
        out
    }
}

/// A tree literal for building fixtures: children listed left to right.
#[derive(Debug, Clone)]
pub struct KeyTree<K> {
    pub key: K,
    pub children: Vec<KeyTree<K>>,
}

impl<K> KeyTree<K> {
    pub fn leaf(key: K) -> Self {
        Self {
            key,
            children: Vec::new(),
        }
    }

    pub fn node(key: K, children: Vec<KeyTree<K>>) -> Self {
        Self { key, children }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }
}

impl<K: Clone> ForestStore<K> {
    /// Build a forest from tree literals (roots left to right). Returns the
    /// store and the handles of all nodes in preorder (roots first).
    pub fn build(trees: &[KeyTree<K>]) -> (Self, Vec<NodeHandle>) {
        let mut store = Self::new();
        let mut handles = Vec::new();
        let mut root_handles = Vec::new();
        for t in trees {
            let h = store.build_tree(t, &mut handles);
            root_handles.push(h);
        }
        // Link the root list left to right.
        store.leftmost_root = root_handles.first().copied();
        for w in root_handles.windows(2) {
            store.n_mut(w[0]).right_sibling = Some(w[1]);
            store.n_mut(w[1]).left_sibling = Some(w[0]);
        }
        (store, handles)
    }

    fn build_tree(&mut self, t: &KeyTree<K>, handles: &mut Vec<NodeHandle>) -> NodeHandle {
        let h = self.alloc(t.key.clone()).expect("arena capacity");
        handles.push(h);
        let mut child_handles = Vec::with_capacity(t.children.len());
        for c in &t.children {
            child_handles.push(self.build_tree(c, handles));
        }
        for w in child_handles.windows(2) {
            self.n_mut(w[0]).right_sibling = Some(w[1]);
            self.n_mut(w[1]).left_sibling = Some(w[0]);
        }
        if let Some(&first) = child_handles.first() {
            self.n_mut(h).leftmost_child = Some(first);
        }
        for &c in &child_handles {
            self.n_mut(c).parent = Some(h);
        }
        h
    }
}

impl<K: Ord + fmt::Debug> ForestStore<K> {
    /// Check every structural invariant and report violations (empty on
    /// success): sibling-link symmetry, parent links, root-list sanity,
    /// strict heap order, reachability of every live node exactly once, and
    /// the live counter.
    pub fn validate(&self) -> Vec<Violation> {
        use alloc::format;
        let mut out = Vec::new();
        let mut seen: BTreeSet<u32> = BTreeSet::new();

        // Root list sanity.
        if let Some(first) = self.leftmost_root {
            if !self.is_live(first) {
                out.push(Violation {
                    handle: Some(first),
                    message: String::from("leftmost_root is not live"),
                });
                return out;
            }
            if self.n(first).left_sibling.is_some() {
                out.push(Violation {
                    handle: Some(first),
                    message: String::from("leftmost root has a left sibling"),
                });
            }
        }

        let mut stack: Vec<NodeHandle> = Vec::new();
        let mut cur = self.leftmost_root;
        while let Some(r) = cur {
            if self.n(r).parent.is_some() {
                out.push(Violation {
                    handle: Some(r),
                    message: String::from("root has a parent"),
                });
            }
            stack.push(r);
            cur = self.n(r).right_sibling;
        }

        // Walk all trees, checking links and heap order.
        while let Some(h) = stack.pop() {
            if !seen.insert(h.index) {
                out.push(Violation {
                    handle: Some(h),
                    message: String::from("node reachable more than once"),
                });
                continue;
            }
            if let Some(r) = self.n(h).right_sibling {
                if !self.is_live(r) {
                    out.push(Violation {
                        handle: Some(h),
                        message: String::from("right sibling is not live"),
                    });
                } else if self.n(r).left_sibling != Some(h) {
                    out.push(Violation {
                        handle: Some(h),
                        message: format!("sibling links inconsistent between {:?} and {:?}", h, r),
                    });
                }
            }
            let mut c = self.n(h).leftmost_child;
            if let Some(c0) = c {
                if self.is_live(c0) && self.n(c0).left_sibling.is_some() {
                    out.push(Violation {
                        handle: Some(c0),
                        message: String::from("leftmost child has a left sibling"),
                    });
                }
            }
            while let Some(ch) = c {
                if !self.is_live(ch) {
                    out.push(Violation {
                        handle: Some(h),
                        message: String::from("child link to a dead node"),
                    });
                    break;
                }
                if self.n(ch).parent != Some(h) {
                    out.push(Violation {
                        handle: Some(ch),
                        message: format!("child of {:?} has wrong parent link", h),
                    });
                }
                if self.n(ch).key <= self.n(h).key {
                    out.push(Violation {
                        handle: Some(ch),
                        message: format!(
                            "heap order violated: child {:?} not greater than parent {:?}",
                            self.n(ch).key,
                            self.n(h).key
                        ),
                    });
                }
                stack.push(ch);
                c = self.n(ch).right_sibling;
            }
        }

        if seen.len() != self.live {
            out.push(Violation {
                handle: None,
                message: format!(
                    "live counter is {} but {} nodes reachable from roots",
                    self.live,
                    seen.len()
                ),
            });
        }
        out
    }
}
