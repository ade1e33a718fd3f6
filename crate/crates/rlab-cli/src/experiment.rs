//! Deterministic experiment runner: fans a sweep cross product out over a
//! bounded worker pool, folds results back in index order, and persists a
//! replayable run record plus a flat CSV.

use std::collections::BTreeMap;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use rlab_core::game::{
    play, BoosterBlocker, BreakerStrategy, CutBuilder, RandomBreaker, StagedMaker, VertexKiller,
};
use rlab_core::random::{gen_regular, GenModel, GenSpec};
use rlab_core::resilience::{estimate_resilience, ham_attack_suite, HamVerdict, ResilienceParams};
use rlab_core::spectral::lambda;
use rlab_core::stream;

use crate::config::{ExperimentConfig, ExperimentKind, SweepPoint};
use crate::{CmdResult, Failure};

/// One sample's result at one sweep point. `metrics` is empty when `error`
/// is set; a metric may also be individually absent (for example an attack
/// upper bound that never materialized), which the CSV renders as an empty
/// cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Row {
    /// Sweep-point index in emission order.
    pub index: usize,
    /// Coordinate values in sweep-key order, as written in the config.
    pub coords: Vec<(String, String)>,
    pub sample: usize,
    pub metrics: BTreeMap<String, f64>,
    pub error: Option<String>,
}

/// Everything needed to audit or replay a run: the config hash, the code
/// version, the seed, the RNG stream labeling scheme, and every row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub version: String,
    pub config_hash: String,
    /// Normalized config text the hash covers, kept so a record is enough to
    /// rerun the experiment.
    pub config_text: String,
    pub kind: String,
    pub seed: u64,
    pub wall_clock_ms: u128,
    /// Label template; each job's RNG seed is `seed ^ stream_id(label)` with
    /// the point index and sample index substituted.
    pub stream_label: String,
    pub sweep_keys: Vec<String>,
    pub metric_keys: Vec<String>,
    pub rows: Vec<Row>,
}

pub struct Paths {
    pub record: PathBuf,
    pub csv: PathBuf,
}

/// Metric columns per kind, in CSV order.
pub fn metric_keys(kind: ExperimentKind) -> &'static [&'static str] {
    match kind {
        ExperimentKind::Spectral => &["lambda", "lambda2", "lambda_n", "residual"],
        ExperimentKind::Suite => &["applied", "killed", "killed_verified", "max_delta"],
        ExperimentKind::Resilience => &[
            "attack_upper",
            "attack_upper_verified",
            "certified_lower",
            "empirical_lower",
            "presumed_only",
        ],
        ExperimentKind::Game => &[
            "win",
            "moves",
            "conn_moves",
            "degree_moves",
            "booster_claims",
            "fallback_claims",
        ],
    }
}

fn failure_text(f: &Failure) -> &str {
    match f {
        Failure::Validation(m) | Failure::Runtime(m) => m,
    }
}

fn panic_text(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "opaque panic payload".to_string()
    }
}

/// Runs `make(j)` for `j in 0..jobs` on up to `workers` threads, isolating
/// panics (`on_panic` builds the substitute row) and folding results back
/// into job order.
fn run_pool<M, P>(workers: usize, jobs: usize, make: M, on_panic: P) -> Vec<Row>
where
    M: Fn(usize) -> Row + Sync,
    P: Fn(usize, String) -> Row + Sync,
{
    if jobs == 0 {
        return Vec::new();
    }
    let workers = workers.min(jobs).max(1);
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<Row>> = (0..jobs).map(|_| None).collect();
    let (tx, rx) = mpsc::channel::<(usize, Row)>();
    thread::scope(|scope| {
        for _ in 0..workers {
            let tx = tx.clone();
            let next = &next;
            let make = &make;
            let on_panic = &on_panic;
            scope.spawn(move || loop {
                let j = next.fetch_add(1, Ordering::Relaxed);
                if j >= jobs {
                    break;
                }
                let row = match catch_unwind(AssertUnwindSafe(|| make(j))) {
                    Ok(row) => row,
                    Err(payload) => on_panic(j, panic_text(payload.as_ref())),
                };
                if tx.send((j, row)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for (j, row) in rx {
            slots[j] = Some(row);
        }
    });
    // Every job either sent a row or was replaced by its panic row, so the
    // unwrap cannot fire; the expect documents the pool invariant.
    slots
        .into_iter()
        .map(|s| s.expect("worker pool delivered every job"))
        .collect()
}

fn boxed_breaker(name: &str) -> CmdResult<Box<dyn BreakerStrategy>> {
    Ok(match name {
        "random" => Box::new(RandomBreaker),
        "vertex-killer" => Box::new(VertexKiller::new()),
        "booster-blocker" => Box::new(BoosterBlocker::new()),
        "cut-builder" => Box::new(CutBuilder::new()),
        other => return Err(Failure::validation(format!("unknown breaker {other:?}"))),
    })
}

fn metrics_for(
    cfg: &ExperimentConfig,
    point: &SweepPoint,
    sample: usize,
) -> CmdResult<BTreeMap<String, f64>> {
    let stage = format!("exp/{}", cfg.kind.name());
    let job_seed = cfg.seed ^ stream::stream_id(&stream::indexed_label(&stage, point.index, sample));
    let mut m = BTreeMap::new();
    match cfg.kind {
        ExperimentKind::Spectral => {
            let d = point.d.expect("spectral points carry d");
            let g = gen_regular(point.n, d, job_seed)?;
            let rep = lambda(&g, 1e-8)?;
            m.insert("lambda".into(), rep.lambda);
            m.insert("lambda2".into(), rep.lambda2);
            m.insert("lambda_n".into(), rep.lambda_n);
            m.insert("residual".into(), rep.residual);
        }
        ExperimentKind::Suite => {
            let d = point.d.expect("suite points carry d");
            let r = point.r.expect("suite points carry r");
            let g = gen_regular(point.n, d, job_seed)?;
            let suite = ham_attack_suite(&g, r, job_seed)?;
            let applied = suite.iter().filter(|a| a.applied).count();
            let killed = suite.iter().any(|a| a.verdict != HamVerdict::Survived);
            let verified = suite.iter().any(|a| a.verdict == HamVerdict::KilledVerified);
            let max_delta = suite.iter().map(|a| a.delta_h).max().unwrap_or(0);
            m.insert("applied".into(), applied as f64);
            m.insert("killed".into(), killed as u8 as f64);
            m.insert("killed_verified".into(), verified as u8 as f64);
            m.insert("max_delta".into(), max_delta as f64);
        }
        ExperimentKind::Resilience => {
            let d = point.d.expect("resilience points carry d");
            let eps = point.epsilon.expect("resilience points carry epsilon");
            let spec = GenSpec {
                model: GenModel::Regular { n: point.n, d },
                seed: job_seed,
            };
            let params = ResilienceParams::new(eps, d)?;
            let est = estimate_resilience(&spec, &params, 1, job_seed)?;
            let s = &est.samples[0];
            if let Some(u) = s.attack_upper {
                m.insert("attack_upper".into(), u as f64);
            }
            if let Some(u) = s.attack_upper_verified {
                m.insert("attack_upper_verified".into(), u as f64);
            }
            if let Some(c) = s.certified_lower {
                m.insert("certified_lower".into(), c as f64);
            }
            m.insert("empirical_lower".into(), s.empirical_lower as f64);
            m.insert("presumed_only".into(), s.presumed_only as u8 as f64);
        }
        ExperimentKind::Game => {
            // The board seed ignores the breaker axis so every breaker in the
            // sweep faces the same board at a given (n, sample).
            let board_seed = cfg.seed
                ^ stream::stream_id(&stream::indexed_label("exp/game/board", point.n, sample));
            let (board, plan) = rlab_core::game::sample_staged_board(
                point.n, cfg.d12, cfg.d2, board_seed,
            )?;
            let mut maker = StagedMaker::new(plan, job_seed);
            let name = point.breaker.as_deref().expect("game points carry a breaker");
            let mut breaker = boxed_breaker(name)?;
            let t = play(&board, &mut maker, breaker.as_mut(), job_seed)?;
            t.verify(&board)?;
            let win = t.winner == rlab_core::game::Player::Maker && t.diagnostic.is_none();
            m.insert("win".into(), win as u8 as f64);
            m.insert("moves".into(), t.moves.len() as f64);
            m.insert("conn_moves".into(), maker.conn_moves() as f64);
            m.insert("degree_moves".into(), maker.degree_moves() as f64);
            m.insert("booster_claims".into(), maker.booster_claims() as f64);
            m.insert("fallback_claims".into(), maker.fallback_claims() as f64);
        }
    }
    Ok(m)
}

fn compute_row(cfg: &ExperimentConfig, points: &[SweepPoint], job: usize) -> Row {
    let point = &points[job / cfg.samples];
    let sample = job % cfg.samples;
    let (metrics, error) = match metrics_for(cfg, point, sample) {
        Ok(m) => (m, None),
        Err(f) => (BTreeMap::new(), Some(failure_text(&f).to_string())),
    };
    Row {
        index: point.index,
        coords: point.coords.clone(),
        sample,
        metrics,
        error,
    }
}

/// Runs the full sweep-by-sample grid and returns the assembled record.
/// A panicking sample becomes an errored row carrying its coordinates; the
/// run itself always completes.
pub fn run_experiment(cfg: &ExperimentConfig) -> CmdResult<RunRecord> {
    let points = cfg.sweep_points();
    if points.is_empty() {
        return Err(Failure::validation("sweep produced no points"));
    }
    let jobs = points.len() * cfg.samples;
    let started = Instant::now();
    let rows = run_pool(
        cfg.workers,
        jobs,
        |j| compute_row(cfg, &points, j),
        |j, msg| {
            let point = &points[j / cfg.samples];
            Row {
                index: point.index,
                coords: point.coords.clone(),
                sample: j % cfg.samples,
                metrics: BTreeMap::new(),
                error: Some(format!("panic: {msg}")),
            }
        },
    );
    Ok(RunRecord {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: cfg.hash.clone(),
        config_text: cfg.canonical.clone(),
        kind: cfg.kind.name().to_string(),
        seed: cfg.seed,
        wall_clock_ms: started.elapsed().as_millis(),
        stream_label: format!("exp/{}/sweep=<point>/sample=<sample>", cfg.kind.name()),
        sweep_keys: cfg.kind.sweep_keys().iter().map(|s| s.to_string()).collect(),
        metric_keys: metric_keys(cfg.kind).iter().map(|s| s.to_string()).collect(),
        rows,
    })
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Renders the rows as CSV. Wall-clock time and other run metadata stay out
/// of this table, so reruns of the same config and seed are byte-identical.
pub fn csv_text(record: &RunRecord) -> String {
    let mut out = String::from("index");
    for key in &record.sweep_keys {
        out.push(',');
        out.push_str(key);
    }
    out.push_str(",sample");
    for key in &record.metric_keys {
        out.push(',');
        out.push_str(key);
    }
    out.push_str(",error\n");
    for row in &record.rows {
        out.push_str(&row.index.to_string());
        for key in &record.sweep_keys {
            out.push(',');
            let value = row
                .coords
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
                .unwrap_or("");
            out.push_str(&csv_escape(value));
        }
        out.push(',');
        out.push_str(&row.sample.to_string());
        for key in &record.metric_keys {
            out.push(',');
            if let Some(v) = row.metrics.get(key) {
                out.push_str(&v.to_string());
            }
        }
        out.push(',');
        out.push_str(&csv_escape(row.error.as_deref().unwrap_or("")));
        out.push('\n');
    }
    out
}

/// Writes `runrecord.json` and `results.csv` under the config's output
/// directory.
pub fn persist(cfg: &ExperimentConfig, record: &RunRecord) -> CmdResult<Paths> {
    fs::create_dir_all(&cfg.out)?;
    let record_path = cfg.out.join("runrecord.json");
    let json = serde_json::to_string_pretty(record)
        .map_err(|e| Failure::runtime(format!("serializing run record: {e}")))?;
    fs::write(&record_path, format!("{json}\n"))?;
    let csv_path = cfg.out.join("results.csv");
    fs::write(&csv_path, csv_text(record))?;
    Ok(Paths {
        record: record_path,
        csv: csv_path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(job: usize) -> Row {
        Row {
            index: job,
            coords: vec![("d".into(), "3".into())],
            sample: 0,
            metrics: BTreeMap::new(),
            error: None,
        }
    }

    #[test]
    fn pool_folds_rows_in_job_order() {
        let rows = run_pool(4, 17, row, |j, m| {
            let mut r = row(j);
            r.error = Some(m);
            r
        });
        assert_eq!(rows.len(), 17);
        for (j, r) in rows.iter().enumerate() {
            assert_eq!(r.index, j);
            assert!(r.error.is_none());
        }
    }

    #[test]
    fn pool_isolates_panicking_jobs() {
        let rows = run_pool(
            3,
            6,
            |j| {
                if j == 2 {
                    panic!("sample exploded");
                }
                row(j)
            },
            |j, msg| {
                let mut r = row(j);
                r.error = Some(format!("panic: {msg}"));
                r
            },
        );
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[2].error.as_deref(), Some("panic: sample exploded"));
        assert!(rows.iter().enumerate().all(|(j, r)| j == 2 || r.error.is_none()));
    }

    #[test]
    fn single_point_single_sample_yields_one_row() {
        let cfg = ExperimentConfig::parse(
            "[experiment]\nkind = spectral\nseed = 7\n[sweep]\nd = 3\nn = 8\n",
        )
        .unwrap();
        let record = run_experiment(&cfg).unwrap();
        assert_eq!(record.rows.len(), 1);
        let r = &record.rows[0];
        assert!(r.error.is_none());
        assert!((r.metrics["lambda"] - 3.0).abs() < 3.0);
        assert_eq!(record.kind, "spectral");
    }

    #[test]
    fn infeasible_point_becomes_errored_row_and_run_completes() {
        // d * n odd at (3, 5): generation must fail, the (3, 8) point must
        // still produce a clean row.
        let cfg = ExperimentConfig::parse(
            "[experiment]\nkind = spectral\nseed = 7\nworkers = 2\n[sweep]\nd = 3\nn = 5, 8\n",
        )
        .unwrap();
        let record = run_experiment(&cfg).unwrap();
        assert_eq!(record.rows.len(), 2);
        assert!(record.rows[0].error.is_some());
        assert!(record.rows[0].metrics.is_empty());
        assert!(record.rows[1].error.is_none());
    }

    #[test]
    fn reruns_render_identical_csv() {
        let text = "[experiment]\nkind = spectral\nseed = 9\nsamples = 2\nworkers = 2\n\
                    [sweep]\nd = 3\nn = 8, 10\n";
        let cfg = ExperimentConfig::parse(text).unwrap();
        let a = csv_text(&run_experiment(&cfg).unwrap());
        let b = csv_text(&run_experiment(&cfg).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with("index,d,n,sample,lambda,lambda2,lambda_n,residual,error\n"));
        assert_eq!(a.lines().count(), 5);
    }

    #[test]
    fn csv_escapes_commas_and_quotes() {
        assert_eq!(csv_escape("plain"), "plain");
        assert_eq!(csv_escape("a,b"), "\"a,b\"");
        assert_eq!(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
