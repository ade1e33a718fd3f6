//! Post-run aggregation: turns a run record into summary tables.

use std::fs;
use std::path::{Path, PathBuf};

use crate::experiment::{csv_text, Row, RunRecord};
use crate::CmdResult;

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("metrics are finite"));
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

/// Groups rows by their full coordinate tuple, in first-occurrence order
/// (rows arrive sorted by sweep index, so this is sweep order).
fn groups(rows: &[Row]) -> Vec<(&[(String, String)], Vec<&Row>)> {
    let mut out: Vec<(&[(String, String)], Vec<&Row>)> = Vec::new();
    for row in rows {
        match out.iter_mut().find(|(c, _)| *c == row.coords.as_slice()) {
            Some((_, members)) => members.push(row),
            None => out.push((row.coords.as_slice(), vec![row])),
        }
    }
    out
}

fn summary_csv(record: &RunRecord) -> String {
    let mut out = record.sweep_keys.join(",");
    out.push_str(",metric,count,mean,min,max,median\n");
    for (coords, members) in groups(&record.rows) {
        let prefix: Vec<&str> = coords.iter().map(|(_, v)| v.as_str()).collect();
        let prefix = prefix.join(",");
        // Success rate first: the fraction of samples that produced a result.
        let ok: Vec<f64> = members
            .iter()
            .map(|r| if r.error.is_none() { 1.0 } else { 0.0 })
            .collect();
        out.push_str(&format!(
            "{prefix},ok_rate,{},{},{},{},{}\n",
            ok.len(),
            mean(&ok),
            ok.iter().cloned().fold(f64::INFINITY, f64::min),
            ok.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            median(&ok),
        ));
        for key in &record.metric_keys {
            let values: Vec<f64> = members
                .iter()
                .filter(|r| r.error.is_none())
                .filter_map(|r| r.metrics.get(key).copied())
                .collect();
            if values.is_empty() {
                out.push_str(&format!("{prefix},{key},0,,,,\n"));
                continue;
            }
            let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            out.push_str(&format!(
                "{prefix},{key},{},{},{lo},{hi},{}\n",
                values.len(),
                mean(&values),
                median(&values),
            ));
        }
    }
    out
}

fn plot_csv(record: &RunRecord) -> String {
    let mut header: Vec<String> = Vec::new();
    if let Some(first) = record.sweep_keys.first() {
        header.push(format!("x_{first}"));
    }
    for key in record.sweep_keys.iter().skip(1) {
        header.push(key.clone());
    }
    for key in &record.metric_keys {
        header.push(format!("{key}_mean"));
    }
    let mut out = header.join(",");
    out.push('\n');
    for (coords, members) in groups(&record.rows) {
        let mut cells: Vec<String> = coords.iter().map(|(_, v)| v.clone()).collect();
        for key in &record.metric_keys {
            let values: Vec<f64> = members
                .iter()
                .filter(|r| r.error.is_none())
                .filter_map(|r| r.metrics.get(key).copied())
                .collect();
            cells.push(if values.is_empty() {
                String::new()
            } else {
                mean(&values).to_string()
            });
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Win rates as a one-row maker-by-breaker matrix, aggregated over the whole
/// n sweep. Errored games count as losses.
fn winrates_csv(record: &RunRecord) -> String {
    let mut breakers: Vec<&str> = Vec::new();
    for row in &record.rows {
        if let Some((_, b)) = row.coords.iter().find(|(k, _)| k == "breaker") {
            if !breakers.contains(&b.as_str()) {
                breakers.push(b);
            }
        }
    }
    let mut out = String::from("maker");
    for b in &breakers {
        out.push(',');
        out.push_str(b);
    }
    out.push('\n');
    if breakers.is_empty() {
        return out;
    }
    out.push_str("staged");
    for b in &breakers {
        let games: Vec<&Row> = record
            .rows
            .iter()
            .filter(|r| r.coords.iter().any(|(k, v)| k == "breaker" && v == *b))
            .collect();
        let wins: f64 = games
            .iter()
            .filter(|r| r.error.is_none())
            .filter_map(|r| r.metrics.get("win"))
            .fold(0.0, |acc, w| acc + w);
        out.push(',');
        out.push_str(&(wins / games.len() as f64).to_string());
    }
    out.push('\n');
    out
}

/// Writes `results.csv` (the flat table), `summary.csv`, `plot.csv`, and for
/// game runs `winrates.csv` into `dir`, returning the written paths.
pub fn write_report(record: &RunRecord, dir: &Path) -> CmdResult<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let flat = dir.join("results.csv");
    fs::write(&flat, csv_text(record))?;
    written.push(flat);
    let summary = dir.join("summary.csv");
    fs::write(&summary, summary_csv(record))?;
    written.push(summary);
    let plot = dir.join("plot.csv");
    fs::write(&plot, plot_csv(record))?;
    written.push(plot);
    if record.kind == "game" {
        let winrates = dir.join("winrates.csv");
        fs::write(&winrates, winrates_csv(record))?;
        written.push(winrates);
    }
    Ok(written)
}
