use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::PointId;

/// Wall time spent in each query phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub rotation: Duration,
    pub probe: Duration,
    pub rerank: Duration,
}

impl Timings {
    pub fn total(&self) -> Duration {
        self.rotation + self.probe + self.rerank
    }
}

/// Ranked answer of a top-k query. `entries` hold exact inner products,
/// best first.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct QueryResult {
    pub entries: Vec<(PointId, f64)>,
    pub candidates_examined: usize,
    /// Per-dimension scan depth actually used by budgeted queries.
    pub effective_budget: Option<usize>,
    pub timings: Timings,
}

impl QueryResult {
    pub fn ids(&self) -> Vec<PointId> {
        self.entries.iter().map(|e| e.0).collect()
    }

    /// Equality of everything except wall times.
    pub fn same_answer(&self, other: &QueryResult) -> bool {
        self.entries == other.entries
            && self.candidates_examined == other.candidates_examined
            && self.effective_budget == other.effective_budget
    }
}
