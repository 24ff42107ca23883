//! Link-based heap forests and the machinery to measure them.
//!
//! The crate provides two priority queues built on one arena-backed forest
//! representation ([`forest::ForestStore`]):
//!
//! * [`SortHeap`] — consolidates roots on `extract_min` by sorting blocks of
//!   roots and pairing each block into a vertical chain;
//! * [`PairingHeap`] — the classic two-pass pairing heap, for comparison
//!   under the same cost accounting.
//!
//! Around them sit three analysis tools:
//!
//! * [`vm`] — an instruction-level interpreter for the pointer-model
//!   suboperations that implement `extract_min` (navigation, checks,
//!   `Compare`, `Pair`, `End`), with strict verified-precondition tracking
//!   and a compiler from sort-heap consolidation to suboperation programs;
//! * [`potential`] — the subtree-balance potential (exact per-node rational,
//!   incremental tracking, lemma checkers, amortized-cost audits);
//! * [`rank`] — the rank/marking bookkeeping driven by pairings, with its
//!   structural lemma checkers.
//!
//! The crate is `no_std` (it allocates, but performs no IO); the companion
//! `heapbench` crate carries workload generation, graph parsing and the CLI.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod enumerate;
pub mod forest;
pub mod ledger;
pub mod pairing_heap;
pub mod potential;
pub mod rank;
pub mod rng;
pub mod sort_heap;
pub mod vm;

pub use forest::{ForestStore, HeapError, Key, NodeHandle, StructEvent};
pub use ledger::{CostLedger, OpKind};
pub use pairing_heap::PairingHeap;
pub use rng::SplitMix64;
pub use sort_heap::{BlockPlan, SortHeap, Strategy};
