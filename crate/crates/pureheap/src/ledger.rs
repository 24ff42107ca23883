//! Actual-cost accounting shared by both heaps.
//!
//! Inserts and decrease-keys cost exactly 1 each. An extract-min is charged
//! its scan, sorting and pairing work by the heap that performs it.

use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    Insert,
    DecreaseKey,
    ExtractMin,
}

impl OpKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OpKind::Insert => "insert",
            OpKind::DecreaseKey => "decrease_key",
            OpKind::ExtractMin => "extract_min",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CostLedger {
    pub inserts: u64,
    pub decrease_keys: u64,
    pub extract_mins: u64,
    /// Cumulative actual cost of all extract-mins.
    pub extract_min_actual_cost: u64,
    /// Per-operation `(kind, actual cost)` trail, kept only when enabled.
    pub per_op_trace: Option<Vec<(OpKind, u64)>>,
}

impl CostLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn enable_trace(&mut self) {
        if self.per_op_trace.is_none() {
            self.per_op_trace = Some(Vec::new());
        }
    }

    pub fn charge_insert(&mut self) {
        self.inserts += 1;
        if let Some(t) = &mut self.per_op_trace {
            t.push((OpKind::Insert, 1));
        }
    }

    pub fn charge_decrease_key(&mut self) {
        self.decrease_keys += 1;
        if let Some(t) = &mut self.per_op_trace {
            t.push((OpKind::DecreaseKey, 1));
        }
    }

    pub fn charge_extract_min(&mut self, actual: u64) {
        self.extract_mins += 1;
        self.extract_min_actual_cost += actual;
        if let Some(t) = &mut self.per_op_trace {
            t.push((OpKind::ExtractMin, actual));
        }
    }

    /// Total actual cost under the unit-cost model.
    pub fn total_actual_cost(&self) -> u64 {
        self.inserts + self.decrease_keys + self.extract_min_actual_cost
    }

    /// Actual cost of the most recent operation (1 for insert/decrease-key).
    pub fn last_cost(&self) -> Option<(OpKind, u64)> {
        self.per_op_trace.as_ref().and_then(|t| t.last().copied())
    }
}
