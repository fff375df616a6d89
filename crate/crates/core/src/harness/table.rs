//! Raw and aggregated result tables and their CSV form.
//!
//! Runs are sampled on a grid of transmission buckets `0, w, 2w, ...`: the
//! row for bucket `b` holds the state after the last step whose cumulative
//! transmission count is at most `b`. Every algorithm is sampled on the same
//! grid, so curves are compared at equal transmission cost.

use std::fmt::Write as _;
use std::path::Path;

use crate::analysis::Accumulator;
use crate::engine::TracePoint;
use crate::error::Result;

pub const RAW_HEADER: &str = "algorithm,graph_id,run_id,k,tx,rel_err";
pub const AGGREGATE_HEADER: &str = "algorithm,tx_bucket,mean_rel_err,stderr,count";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawRow {
    /// Index into [`ResultTable::algorithms`].
    pub algorithm: usize,
    pub graph_id: usize,
    pub run_id: usize,
    pub k: u64,
    /// Bucket value, not the exact count at step `k`.
    pub tx: u64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub algorithm: String,
    pub tx_bucket: u64,
    pub mean_rel_err: f64,
    pub stderr: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub algorithms: Vec<String>,
    pub bucket: u64,
    pub rows: Vec<RawRow>,
    /// Exact transmission count at the end of every run, keyed like `rows`.
    pub final_tx: Vec<(usize, usize, usize, u64)>,
}

/// Turns a stream of trace points into one sample per bucket.
#[derive(Debug, Clone)]
pub(crate) struct BucketSampler {
    width: u64,
    last_bucket: u64,
    next: u64,
    prev: Option<TracePoint>,
    pub(crate) samples: Vec<(u64, u64, f64)>,
}

impl BucketSampler {
    /// Buckets run from 0 to the largest multiple of `width` not above `budget`.
    pub(crate) fn new(width: u64, budget: u64) -> Self {
        BucketSampler {
            width,
            last_bucket: budget / width * width,
            next: 0,
            prev: None,
            samples: Vec::with_capacity((budget / width + 1) as usize),
        }
    }

    pub(crate) fn observe(&mut self, p: &TracePoint) {
        while self.next <= self.last_bucket && p.tx > self.next {
            // before any step fits in the bucket, report the starting state
            let s = self.prev.unwrap_or(*p);
            self.samples.push((s.k, self.next, s.rel_err));
            self.next += self.width;
        }
        self.prev = Some(*p);
    }

    pub(crate) fn finish(mut self) -> Vec<(u64, u64, f64)> {
        if let Some(p) = self.prev {
            while self.next <= self.last_bucket {
                self.samples.push((p.k, self.next, p.rel_err));
                self.next += self.width;
            }
        }
        self.samples
    }
}

fn stderr_of(sum: f64, sum_sq: f64, count: usize) -> f64 {
    if count < 2 {
        return 0.0;
    }
    let c = count as f64;
    let mean = sum / c;
    let var = ((sum_sq - c * mean * mean) / (c - 1.0)).max(0.0);
    (var / c).sqrt()
}

impl ResultTable {
    /// Sort rows canonically by (algorithm name, graph, run, k, tx).
    pub(crate) fn canonicalize(&mut self) {
        let names = &self.algorithms;
        self.rows.sort_by(|a, b| {
            names[a.algorithm]
                .cmp(&names[b.algorithm])
                .then(a.graph_id.cmp(&b.graph_id))
                .then(a.run_id.cmp(&b.run_id))
                .then(a.k.cmp(&b.k))
                .then(a.tx.cmp(&b.tx))
        });
        self.final_tx
            .sort_by(|a, b| names[a.0].cmp(&names[b.0]).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    }

    /// Rows of one algorithm, by name.
    pub fn rows_for<'a>(&'a self, name: &str) -> impl Iterator<Item = &'a RawRow> + 'a {
        let idx = self.algorithms.iter().position(|a| a == name);
        self.rows.iter().filter(move |r| Some(r.algorithm) == idx)
    }

    /// Mean relative error and standard error per (algorithm, bucket).
    pub fn aggregate(&self) -> Vec<AggregateRow> {
        let buckets = self
            .rows
            .iter()
            .map(|r| r.tx / self.bucket)
            .max()
            .map_or(0, |b| b as usize + 1);
        let mut out = Vec::new();
        let mut order: Vec<usize> = (0..self.algorithms.len()).collect();
        order.sort_by(|&a, &b| self.algorithms[a].cmp(&self.algorithms[b]));
        for alg in order {
            let mut sum = vec![Accumulator::default(); buckets];
            let mut sum_sq = vec![Accumulator::default(); buckets];
            let mut count = vec![0usize; buckets];
            for r in self.rows.iter().filter(|r| r.algorithm == alg) {
                let b = (r.tx / self.bucket) as usize;
                sum[b].add(r.rel_err);
                sum_sq[b].add(r.rel_err * r.rel_err);
                count[b] += 1;
            }
            for b in 0..buckets {
                if count[b] == 0 {
                    continue;
                }
                out.push(AggregateRow {
                    algorithm: self.algorithms[alg].clone(),
                    tx_bucket: b as u64 * self.bucket,
                    mean_rel_err: sum[b].value() / count[b] as f64,
                    stderr: stderr_of(sum[b].value(), sum_sq[b].value(), count[b]),
                    count: count[b],
                });
            }
        }
        out
    }

    pub fn raw_csv(&self) -> String {
        let mut s = String::with_capacity(self.rows.len() * 48 + 64);
        s.push_str(RAW_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{:.16e}",
                self.algorithms[r.algorithm], r.graph_id, r.run_id, r.k, r.tx, r.rel_err
            );
        }
        s
    }

    pub fn write_raw_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.raw_csv())?;
        Ok(())
    }

    pub fn write_aggregate_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, aggregate_csv(&self.aggregate()))?;
        Ok(())
    }
}

pub fn aggregate_csv(rows: &[AggregateRow]) -> String {
    let mut s = String::from(AGGREGATE_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{:.16e},{:.16e},{}",
            r.algorithm, r.tx_bucket, r.mean_rel_err, r.stderr, r.count
        );
    }
    s
}

/// Transmissions at which the mean curve of `rows` first drops below `level`.
pub fn tx_to_reach(rows: &[AggregateRow], algorithm: &str, level: f64) -> Option<u64> {
    rows.iter()
        .filter(|r| r.algorithm == algorithm)
        .find(|r| r.mean_rel_err < level)
        .map(|r| r.tx_bucket)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(k: u64, tx: u64, rel_err: f64) -> TracePoint {
        TracePoint { k, tx, rel_err }
    }

    #[test]
    fn sampler_takes_last_state_within_bucket() {
        let mut s = BucketSampler::new(10, 30);
        for p in [
            pt(0, 0, 1.0),
            pt(1, 3, 0.9),
            pt(2, 10, 0.8),
            pt(3, 13, 0.7),
            pt(4, 31, 0.1),
        ] {
            s.observe(&p);
        }
        assert_eq!(s.finish(), vec![(0, 0, 1.0), (2, 10, 0.8), (3, 20, 0.7), (3, 30, 0.7)]);
    }

    #[test]
    fn sampler_with_upfront_cost() {
        let mut s = BucketSampler::new(10, 40);
        for p in [pt(0, 25, 1.0), pt(1, 28, 0.5), pt(2, 41, 0.25)] {
            s.observe(&p);
        }
        let rows = s.finish();
        assert_eq!(
            rows,
            vec![(0, 0, 1.0), (0, 10, 1.0), (0, 20, 1.0), (1, 30, 0.5), (1, 40, 0.5)]
        );
    }

    #[test]
    fn aggregate_matches_direct_computation() {
        let table = ResultTable {
            algorithms: vec!["b".into(), "a".into()],
            bucket: 10,
            rows: vec![
                RawRow {
                    algorithm: 0,
                    graph_id: 0,
                    run_id: 0,
                    k: 0,
                    tx: 0,
                    rel_err: 1.0,
                },
                RawRow {
                    algorithm: 0,
                    graph_id: 0,
                    run_id: 1,
                    k: 0,
                    tx: 0,
                    rel_err: 0.5,
                },
                RawRow {
                    algorithm: 1,
                    graph_id: 0,
                    run_id: 0,
                    k: 2,
                    tx: 10,
                    rel_err: 0.25,
                },
            ],
            final_tx: vec![],
        };
        let agg = table.aggregate();
        assert_eq!(agg.len(), 2);
        assert_eq!(agg[0].algorithm, "a");
        assert_eq!(agg[0].tx_bucket, 10);
        assert_eq!(agg[1].mean_rel_err, 0.75);
        assert!((agg[1].stderr - (0.125f64 / 2.0).sqrt()).abs() < 1e-15);
        assert!(aggregate_csv(&agg).starts_with("algorithm,tx_bucket,"));
    }
}
