//! CSV output: raw run records, binned tables and plot series.
//!
//! `runs.csv` holds one header line and one [`RunRecord`] per line in field
//! order. For every metric, `table_<metric>.csv` lists each curve's bins
//! (`policy,delta_d,delta_s,bin_center,count,seeds,mean,std`, empty
//! statistics for empty bins) and `series_<metric>.csv` keeps the occupied
//! bins as `policy,delta_d,delta_s,x,y,yerr`.

use std::fs::File;
use std::path::{Path, PathBuf};

use super::metrics::{aggregate_metrics, BinRow, Metric, RunRecord};
use crate::error::{Error, Result};

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

pub fn write_runs(path: &Path, records: &[RunRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    if records.is_empty() {
        w.write_record(RUN_COLUMNS).map_err(|e| csv_err(path, e))?;
    }
    for r in records {
        w.serialize(r).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub const RUN_COLUMNS: [&str; 17] = [
    "seed",
    "wind_seed",
    "wind_kts",
    "policy",
    "delta_d",
    "delta_s",
    "rate",
    "n",
    "mean_stretch",
    "mean_violation",
    "mean_delay",
    "mean_fuel",
    "mean_solve_s",
    "max_solve_s",
    "bb_nodes",
    "node_limit_hits",
    "cache_hits",
];

pub fn read_runs(path: &Path) -> Result<Vec<RunRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    let headers = r.headers().map_err(|e| csv_err(path, e))?.clone();
    if headers.iter().ne(RUN_COLUMNS) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            message: format!("unexpected header `{}`", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    r.deserialize().map(|row| row.map_err(|e| csv_err(path, e))).collect()
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn write_table(path: &Path, rows: &[BinRow]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    let werr = |e| csv_err(path, e);
    w.write_record(["policy", "delta_d", "delta_s", "bin_center", "count", "seeds", "mean", "std"])
        .map_err(werr)?;
    for r in rows {
        w.write_record([
            r.key.policy.clone(),
            r.key.delta_d.to_string(),
            r.key.delta_s.to_string(),
            r.center.to_string(),
            r.count.to_string(),
            r.seeds.to_string(),
            opt(r.mean),
            opt(r.std),
        ])
        .map_err(werr)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_series(path: &Path, rows: &[BinRow]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    let werr = |e| csv_err(path, e);
    w.write_record(["policy", "delta_d", "delta_s", "x", "y", "yerr"]).map_err(werr)?;
    for r in rows.iter().filter(|r| r.count > 0) {
        w.write_record([
            r.key.policy.clone(),
            r.key.delta_d.to_string(),
            r.key.delta_s.to_string(),
            r.center.to_string(),
            opt(r.mean),
            opt(r.std),
        ])
        .map_err(werr)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Binned tables and series for every metric; returns the files written.
pub fn write_tables(dir: &Path, records: &[RunRecord], half_width: f64) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for metric in Metric::ALL {
        let rows = aggregate_metrics(records, half_width, metric);
        let table = dir.join(format!("table_{metric}.csv"));
        write_table(&table, &rows)?;
        let series = dir.join(format!("series_{metric}.csv"));
        write_series(&series, &rows)?;
        written.push(table);
        written.push(series);
    }
    Ok(written)
}

/// `runs.csv` plus every table and series under `dir`.
pub fn emit_outputs(dir: &Path, records: &[RunRecord], half_width: f64) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let runs = dir.join("runs.csv");
    write_runs(&runs, records)?;
    let mut written = vec![runs];
    written.extend(write_tables(dir, records, half_width)?);
    Ok(written)
}
