#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub t: usize,
    pub suboptimality: f64,
    pub elapsed_s: f64,
    pub oracle_calls: u64,
}

/// Per-iteration history of a single run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunTrace {
    pub records: Vec<TraceRecord>,
    pub notes: Vec<String>,
}

impl RunTrace {
    pub fn new(notes: Vec<String>) -> Self {
        Self { records: Vec::new(), notes }
    }

    pub fn push(&mut self, record: TraceRecord) {
        self.records.push(record);
    }

    pub fn final_suboptimality(&self) -> Option<f64> {
        self.records.last().map(|r| r.suboptimality)
    }

    pub fn total_time(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.elapsed_s)
    }

    pub fn total_calls(&self) -> u64 {
        self.records.last().map_or(0, |r| r.oracle_calls)
    }

    /// Suboptimality recorded at iteration t.
    pub fn at(&self, t: usize) -> Option<f64> {
        self.records.iter().find(|r| r.t == t).map(|r| r.suboptimality)
    }
}
