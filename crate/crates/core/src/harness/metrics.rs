//! Rate-binned statistics over run records.
//!
//! Bin `k` covers aggregate rates in `[2hk, 2h(k+1))` and is reported at its
//! center `2hk + h`. The mean is taken over every record in the bin. The
//! spread is the pooled within-seed standard deviation, i.e. variation across
//! wind samples with the seed effect removed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::sequencing::Policy;

/// One scenario × wind × policy × grid run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub wind_seed: u64,
    pub wind_kts: f64,
    pub policy: String,
    pub delta_d: f64,
    pub delta_s: f64,
    /// Aggregate arrival rate, AC/hr.
    pub rate: f64,
    pub n: usize,
    pub mean_stretch: f64,
    pub mean_violation: f64,
    pub mean_delay: f64,
    pub mean_fuel: f64,
    pub mean_solve_s: f64,
    pub max_solve_s: f64,
    pub bb_nodes: u64,
    pub node_limit_hits: u64,
    pub cache_hits: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Stretch,
    Violation,
    Delay,
    Fuel,
    SolveTime,
    MaxSolveTime,
    Nodes,
}

impl Metric {
    pub const ALL: [Metric; 7] = [
        Metric::Stretch,
        Metric::Violation,
        Metric::Delay,
        Metric::Fuel,
        Metric::SolveTime,
        Metric::MaxSolveTime,
        Metric::Nodes,
    ];

    pub fn value(self, r: &RunRecord) -> f64 {
        match self {
            Metric::Stretch => r.mean_stretch,
            Metric::Violation => r.mean_violation,
            Metric::Delay => r.mean_delay,
            Metric::Fuel => r.mean_fuel,
            Metric::SolveTime => r.mean_solve_s,
            Metric::MaxSolveTime => r.max_solve_s,
            Metric::Nodes => r.bb_nodes as f64,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Stretch => "stretch",
            Metric::Violation => "violation",
            Metric::Delay => "delay",
            Metric::Fuel => "fuel",
            Metric::SolveTime => "solve_time",
            Metric::MaxSolveTime => "max_solve_time",
            Metric::Nodes => "nodes",
        })
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| format!("unknown metric `{s}`"))
    }
}

/// Policy and grid identifying one curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesKey {
    pub policy: String,
    pub delta_d: f64,
    pub delta_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinRow {
    pub key: SeriesKey,
    pub bin: usize,
    pub center: f64,
    pub count: usize,
    pub seeds: usize,
    /// `None` for an empty bin.
    pub mean: Option<f64>,
    pub std: Option<f64>,
}

pub fn bin_index(rate: f64, half_width: f64) -> usize {
    (rate.max(0.0) / (2.0 * half_width)).floor() as usize
}

pub fn bin_center(bin: usize, half_width: f64) -> f64 {
    2.0 * half_width * bin as f64 + half_width
}

fn policy_rank(name: &str) -> (Option<Policy>, String) {
    (name.parse().ok(), name.to_string())
}

/// Curves present in `records`, ordered by policy then grid.
pub fn series_keys(records: &[RunRecord]) -> Vec<SeriesKey> {
    let mut keys: Vec<SeriesKey> = Vec::new();
    for r in records {
        if !keys
            .iter()
            .any(|k| k.policy == r.policy && k.delta_d == r.delta_d && k.delta_s == r.delta_s)
        {
            keys.push(SeriesKey {
                policy: r.policy.clone(),
                delta_d: r.delta_d,
                delta_s: r.delta_s,
            });
        }
    }
    keys.sort_by(|a, b| {
        policy_rank(&a.policy)
            .cmp(&policy_rank(&b.policy))
            .then(a.delta_d.total_cmp(&b.delta_d))
            .then(a.delta_s.total_cmp(&b.delta_s))
    });
    keys
}

/// Binned statistics of `metric`. Every curve gets the same bins, from 0 up
/// to the highest occupied one, so empty bins appear with `count = 0`.
pub fn aggregate_metrics(records: &[RunRecord], half_width: f64, metric: Metric) -> Vec<BinRow> {
    assert!(half_width > 0.0, "bin half-width must be positive");
    let keys = series_keys(records);
    let Some(top) = records.iter().map(|r| bin_index(r.rate, half_width)).max() else {
        return Vec::new();
    };
    let mut rows = Vec::with_capacity(keys.len() * (top + 1));
    for key in keys {
        // bin -> seed -> values
        let mut bins: Vec<BTreeMap<u64, Vec<f64>>> = vec![BTreeMap::new(); top + 1];
        for r in records
            .iter()
            .filter(|r| r.policy == key.policy && r.delta_d == key.delta_d && r.delta_s == key.delta_s)
        {
            bins[bin_index(r.rate, half_width)]
                .entry(r.seed)
                .or_default()
                .push(metric.value(r));
        }
        for (bin, by_seed) in bins.into_iter().enumerate() {
            let count: usize = by_seed.values().map(Vec::len).sum();
            let (mean, std) = if count == 0 {
                (None, None)
            } else {
                let total: f64 = by_seed.values().flatten().sum();
                let mut ss = 0.0;
                let mut dof = 0usize;
                for vals in by_seed.values() {
                    let m = vals.iter().sum::<f64>() / vals.len() as f64;
                    ss += vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>();
                    dof += vals.len() - 1;
                }
                let std = if dof > 0 { (ss / dof as f64).sqrt() } else { 0.0 };
                (Some(total / count as f64), Some(std))
            };
            rows.push(BinRow {
                key: key.clone(),
                bin,
                center: bin_center(bin, half_width),
                count,
                seeds: by_seed.len(),
                mean,
                std,
            });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(seed: u64, policy: &str, rate: f64, stretch: f64) -> RunRecord {
        RunRecord {
            seed,
            wind_seed: seed * 10,
            wind_kts: 5.0,
            policy: policy.into(),
            delta_d: 0.5,
            delta_s: 5.0,
            rate,
            n: 10,
            mean_stretch: stretch,
            mean_violation: 0.0,
            mean_delay: 0.0,
            mean_fuel: 0.0,
            mean_solve_s: 0.0,
            max_solve_s: 0.0,
            bb_nodes: 0,
            node_limit_hits: 0,
            cache_hits: 0,
        }
    }

    #[test]
    fn bin_arithmetic() {
        assert_eq!(bin_center(bin_index(38.0, 2.5), 2.5), 37.5);
        assert_eq!(bin_center(bin_index(42.0, 2.5), 2.5), 42.5);
        assert_eq!(bin_index(40.0, 2.5), 8);
    }

    #[test]
    fn single_record_has_zero_std() {
        let rows = aggregate_metrics(&[rec(1, "fefs", 12.0, 3.0)], 2.5, Metric::Stretch);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[2].count, 1);
        assert_eq!(rows[2].mean, Some(3.0));
        assert_eq!(rows[2].std, Some(0.0));
        assert!(rows[..2].iter().all(|r| r.count == 0 && r.mean.is_none()));
    }

    #[test]
    fn pooled_std_removes_seed_effect() {
        let recs = vec![
            rec(1, "foffs", 21.0, 1.0),
            rec(1, "foffs", 21.0, 3.0),
            rec(2, "foffs", 22.0, 11.0),
            rec(2, "foffs", 22.0, 13.0),
            rec(3, "fefs", 60.0, 0.0),
        ];
        let rows = aggregate_metrics(&recs, 2.5, Metric::Stretch);
        let r = rows.iter().find(|r| r.key.policy == "foffs" && r.count > 0).unwrap();
        assert_eq!(r.mean, Some(7.0));
        assert_eq!(r.std, Some(2f64.sqrt()));
        assert_eq!(r.seeds, 2);
        // fefs sorts first, and both curves span the same bins
        assert_eq!(rows[0].key.policy, "fefs");
        assert_eq!(rows.iter().map(|r| r.count).sum::<usize>(), recs.len());
        assert_eq!(rows.len(), 2 * 13);
    }
}
