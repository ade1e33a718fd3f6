//! Implementations of the single-shot subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use rlab_core::attacks::{matching_attack, partition_attack, trivial_attack, AttackReport};
use rlab_core::certificates::{conn_certificate, matching_certificate, Certificate, ConnKind};
use rlab_core::game::{
    play, play_full, BoosterBlocker, BreakerStrategy, CutBuilder, MakerPlan, RandomBreaker,
    StagedMaker, VertexKiller,
};
use rlab_core::graph::{read_edge_list, write_edge_list, Graph};
use rlab_core::hamilton::{exact_boosters, hamiltonian_cycle, witnessed_boosters};
use rlab_core::random::{DegreeSequence, GenModel, GenOutput, GenSpec};
use rlab_core::resilience::{
    estimate_resilience, ham_attack_suite, hamilton_status, HamStatus, HamVerdict,
    ResilienceParams,
};
use rlab_core::spectral::lambda;
use rlab_core::stream;

use crate::{
    AttackArgs, AttackKind, BoosterModeArg, BoostersArgs, BreakerArg, CertKindArg, CertifyArgs,
    CmdResult, ExperimentArgs, Failure, GameArgs, GenerateArgs, HamArgs, HamMode, ModelArg,
    ReportArgs, ResilienceArgs, SpectralArgs,
};

fn emit(value: &Value, out: Option<&Path>) -> CmdResult<()> {
    if let Some(path) = out {
        fs::write(path, format!("{}\n", serde_json::to_string_pretty(value).unwrap()))?;
    }
    println!("{value}");
    Ok(())
}

fn load(path: &Path) -> CmdResult<Graph> {
    Ok(read_edge_list(path)?)
}

/// Builds a generation model from the shared flag set.
fn build_model(
    model: ModelArg,
    n: Option<usize>,
    d: Option<usize>,
    d1: Option<usize>,
    d2: Option<usize>,
    p: Option<f64>,
    degrees: Option<&Path>,
) -> CmdResult<GenModel> {
    let need = |opt: Option<usize>, what: &str| {
        opt.ok_or_else(|| Failure::validation(format!("this model requires --{what}")))
    };
    match model {
        ModelArg::Regular => Ok(GenModel::Regular {
            n: need(n, "n")?,
            d: need(d, "d")?,
        }),
        ModelArg::Union => Ok(GenModel::Union {
            n: need(n, "n")?,
            d1: need(d1, "d1")?,
            d2: need(d2, "d2")?,
        }),
        ModelArg::TwoHam => Ok(GenModel::TwoHam { n: need(n, "n")? }),
        ModelArg::Gnp => Ok(GenModel::Binomial {
            n: need(n, "n")?,
            p: p.ok_or_else(|| Failure::validation("this model requires --p"))?,
        }),
        ModelArg::Degseq => {
            let path =
                degrees.ok_or_else(|| Failure::validation("this model requires --degrees"))?;
            let text = fs::read_to_string(path)?;
            let mut parsed = Vec::new();
            for tok in text.split_whitespace() {
                parsed.push(tok.parse::<usize>().map_err(|_| {
                    Failure::validation(format!("bad degree entry {tok:?} in {}", path.display()))
                })?);
            }
            // Validates graphicality up front so failures exit as bad input.
            DegreeSequence::new(parsed.clone())?;
            Ok(GenModel::DegreeSequence { degrees: parsed })
        }
    }
}

fn model_name(model: &GenModel) -> &'static str {
    match model {
        GenModel::Regular { .. } => "regular",
        GenModel::DegreeSequence { .. } => "degseq",
        GenModel::Union { .. } => "union",
        GenModel::TwoHam { .. } => "two-ham",
        GenModel::Binomial { .. } => "gnp",
    }
}

fn part_path(base: &Path, k: usize) -> PathBuf {
    PathBuf::from(format!("{}.part{k}", base.display()))
}

pub fn generate(a: GenerateArgs) -> CmdResult<()> {
    let model = build_model(
        a.model,
        a.n,
        a.d,
        a.d1,
        a.d2,
        a.p,
        a.degrees.as_deref(),
    )?;
    let spec = GenSpec {
        model: model.clone(),
        seed: a.seed,
    };
    let out = spec.generate()?;
    let g = out.graph();
    write_edge_list(g, &a.out)?;
    let mut parts = Vec::new();
    if let GenOutput::Decomposed { part1, part2, .. } = &out {
        for (k, part) in [(1usize, part1), (2, part2)] {
            let path = part_path(&a.out, k);
            write_edge_list(part, &path)?;
            parts.push(path.display().to_string());
        }
    }
    emit(
        &json!({
            "model": model_name(&model),
            "n": g.n(),
            "m": g.m(),
            "seed": a.seed,
            "out": a.out.display().to_string(),
            "parts": parts,
        }),
        None,
    )
}

pub fn spectral(a: SpectralArgs) -> CmdResult<()> {
    let g = load(&a.input)?;
    let rep = lambda(&g, a.tol)?;
    emit(
        &json!({
            "n": rep.n,
            "d": g.regular_degree(),
            "lambda": rep.lambda,
            "lambda2": rep.lambda2,
            "lambdan": rep.lambda_n,
            "method": rep.method,
            "residual": rep.residual,
        }),
        a.out.as_deref(),
    )
}

fn attack_json(kind: &str, r: &AttackReport, out_h: &Path) -> Value {
    json!({
        "kind": kind,
        "delta_h": r.delta_h,
        "bound": r.bound,
        "vacuous": r.vacuous,
        "success": r.success,
        "rounds": r.rounds,
        "h_edges": r.h.m(),
        "transcript": r.transcript,
        "transcript_hash": r.transcript_hash,
        "out_h": out_h.display().to_string(),
    })
}

pub fn attack(a: AttackArgs) -> CmdResult<()> {
    let g = load(&a.input)?;
    let (kind, report) = match a.kind {
        AttackKind::Trivial => {
            let k = a.target.ok_or_else(|| {
                Failure::validation("the trivial attack requires --target (connectivity to refute)")
            })?;
            ("trivial", trivial_attack(&g, k)?)
        }
        AttackKind::Partition => {
            reject_target(a.target)?;
            ("partition", partition_attack(&g, a.seed)?)
        }
        AttackKind::Matching => {
            reject_target(a.target)?;
            ("matching", matching_attack(&g, a.seed)?)
        }
    };
    write_edge_list(&report.h, &a.out_h)?;
    emit(&attack_json(kind, &report, &a.out_h), None)
}

fn reject_target(target: Option<usize>) -> CmdResult<()> {
    if target.is_some() {
        return Err(Failure::validation(
            "--target only applies to the trivial attack",
        ));
    }
    Ok(())
}

fn cert_json(kind: &str, cert: &Certificate) -> Value {
    json!({
        "kind": kind,
        "lambda": cert.lambda,
        "tolerated_delta": cert.tolerated_delta,
        "tolerated": cert.tolerated(),
        "valid": cert.valid,
        "conditional": cert.conditional,
        "reason": cert.reason,
        "hypotheses": cert.hypotheses.iter().map(|h| json!({
            "name": h.name,
            "holds": h.holds,
            "detail": h.detail,
        })).collect::<Vec<_>>(),
    })
}

pub fn certify(a: CertifyArgs) -> CmdResult<()> {
    let g = load(&a.input)?;
    let lam = if a.compute_lambda {
        let rep = lambda(&g, 1e-8)?;
        rep.lambda + rep.residual
    } else {
        a.lambda
            .ok_or_else(|| Failure::validation("supply --lambda X or --compute-lambda"))?
    };
    let (kind, cert) = match a.kind {
        CertKindArg::Econn => ("econn", conn_certificate(&g, lam, ConnKind::Edge, a.epsilon)?),
        CertKindArg::Vconn => ("vconn", conn_certificate(&g, lam, ConnKind::Vertex, a.epsilon)?),
        CertKindArg::Pm => ("pm", matching_certificate(&g, lam)?),
    };
    emit(&cert_json(kind, &cert), a.out.as_deref())
}

pub fn ham(a: HamArgs) -> CmdResult<()> {
    let g = load(&a.input)?;
    let value = match a.mode {
        HamMode::Exact => {
            let cycle = hamiltonian_cycle(&g)?;
            json!({
                "mode": "exact",
                "hamiltonian": cycle.is_some(),
                "cycle": cycle,
            })
        }
        HamMode::Heuristic => match hamilton_status(&g, a.restarts, a.seed)? {
            HamStatus::Alive { cycle } => json!({
                "mode": "heuristic",
                "status": "alive",
                "cycle": cycle,
            }),
            HamStatus::DeadVerified { reason } => json!({
                "mode": "heuristic",
                "status": "dead-verified",
                "reason": reason,
            }),
            HamStatus::Presumed => json!({
                "mode": "heuristic",
                "status": "presumed",
            }),
        },
    };
    emit(&value, a.out.as_deref())
}

pub fn boosters(a: BoostersArgs) -> CmdResult<()> {
    let g = load(&a.input)?;
    let value = match a.mode {
        BoosterModeArg::Exact => {
            let pairs = exact_boosters(&g)?;
            json!({
                "mode": "exact",
                "count": pairs.len(),
                "pairs": pairs,
            })
        }
        BoosterModeArg::Witnessed => {
            let wb = witnessed_boosters(&g, a.iters, a.seed, a.deep)?;
            json!({
                "mode": "witnessed",
                "count": wb.set.pairs.len(),
                "pairs": wb.set.pairs,
                "base_len": wb.base_len,
                "hamiltonian": wb.hamiltonian,
            })
        }
    };
    emit(&value, a.out.as_deref())
}

fn verdict_name(v: HamVerdict) -> &'static str {
    match v {
        HamVerdict::KilledVerified => "killed-verified",
        HamVerdict::PresumedDead => "presumed-dead",
        HamVerdict::Survived => "survived",
    }
}

pub fn resilience(a: ResilienceArgs) -> CmdResult<()> {
    let model = build_model(
        a.model,
        a.n,
        a.d,
        a.d1,
        a.d2,
        a.p,
        a.degrees.as_deref(),
    )?;
    let params = match &model {
        GenModel::Regular { d, .. } => ResilienceParams::new(a.epsilon, *d)?,
        GenModel::Union { d1, d2, .. } => ResilienceParams {
            epsilon: a.epsilon,
            d1: *d1,
            d2: *d2,
        },
        GenModel::TwoHam { .. } => ResilienceParams::new(a.epsilon, 4)?,
        GenModel::Binomial { n, p } => {
            let d = ((*n as f64 - 1.0) * p).round() as usize;
            ResilienceParams::new(a.epsilon, d.max(2))?
        }
        GenModel::DegreeSequence { degrees } => {
            let avg = degrees.iter().sum::<usize>() / degrees.len().max(1);
            ResilienceParams::new(a.epsilon, avg.max(2))?
        }
    };
    let spec = GenSpec {
        model: model.clone(),
        seed: a.seed,
    };
    let est = estimate_resilience(&spec, &params, a.samples, a.seed)?;

    // Replays the per-sample host and runs the suite once at the decisive
    // budget so the report carries the attack transcripts behind the numbers.
    let mut samples = Vec::new();
    for s in &est.samples {
        let sample_seed = a.seed
            ^ stream::stream_id(&stream::indexed_label("resilience/sample", 0, s.index));
        let host = GenSpec {
            model: model.clone(),
            seed: sample_seed,
        }
        .generate()?;
        let g = host.graph();
        let probe = s.attack_upper.unwrap_or_else(|| g.max_degree());
        let suite = ham_attack_suite(g, probe, sample_seed ^ probe as u64)?;
        let attacks: Vec<Value> = suite
            .iter()
            .map(|at| {
                json!({
                    "name": at.name,
                    "applied": at.applied,
                    "delta_h": at.delta_h,
                    "verdict": verdict_name(at.verdict),
                    "detail": at.detail,
                })
            })
            .collect();
        samples.push(json!({
            "index": s.index,
            "n": s.n,
            "attack_upper": s.attack_upper,
            "attack_upper_verified": s.attack_upper_verified,
            "empirical_lower": s.empirical_lower,
            "certified_lower": s.certified_lower,
            "presumed_only": s.presumed_only,
            "probed_budget": probe,
            "attacks": attacks,
        }));
    }
    let report = json!({
        "property": est.property,
        "model": model_name(&model),
        "epsilon": est.epsilon,
        "seed": a.seed,
        "attack_upper": est.attack_upper,
        "empirical_lower": est.empirical_lower,
        "certified_lower": est.certified_lower,
        "samples": samples,
    });
    fs::write(
        &a.out,
        format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
    )?;
    emit(
        &json!({
            "attack_upper": est.attack_upper,
            "empirical_lower": est.empirical_lower,
            "certified_lower": est.certified_lower,
            "samples": est.samples.len(),
            "out": a.out.display().to_string(),
        }),
        None,
    )
}

/// Adds the unique closing edge back to a spanning path, recovering the
/// cycle the path was cut from.
fn close_tree_to_cycle(n: usize, tree: &[(u32, u32)]) -> CmdResult<Graph> {
    let mut deg = vec![0usize; n];
    for &(u, v) in tree {
        deg[u as usize] += 1;
        deg[v as usize] += 1;
    }
    let ends: Vec<u32> = (0..n as u32).filter(|&v| deg[v as usize] == 1).collect();
    if ends.len() != 2 {
        return Err(Failure::validation(
            "decomposition tree is not a spanning path",
        ));
    }
    let mut edges: Vec<(u32, u32)> = tree.to_vec();
    edges.push((ends[0].min(ends[1]), ends[0].max(ends[1])));
    Ok(Graph::from_edges(n, &edges)?)
}

fn parse_sample_board(text: &str) -> CmdResult<(usize, usize, usize)> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(Failure::validation("--sample-board needs N,D12,D2"));
    }
    let mut nums = [0usize; 3];
    for (slot, tok) in nums.iter_mut().zip(&parts) {
        *slot = tok
            .trim()
            .parse()
            .map_err(|_| Failure::validation(format!("bad --sample-board entry {tok:?}")))?;
    }
    Ok((nums[0], nums[1], nums[2]))
}

pub fn game(a: GameArgs) -> CmdResult<()> {
    let (board, plan) = if let Some(spec) = &a.sample_board {
        let (n, d12, d2) = parse_sample_board(spec)?;
        rlab_core::game::sample_staged_board(n, d12, d2, a.seed)?
    } else {
        let board_path = a
            .board
            .as_ref()
            .ok_or_else(|| Failure::validation("supply --board with --decomp, or --sample-board"))?;
        if a.decomp.len() != 4 {
            return Err(Failure::validation(
                "--decomp needs four files: cycle1,cycle2,degree-part,booster-part",
            ));
        }
        let board = load(board_path)?;
        let c1 = load(&a.decomp[0])?;
        let c2 = load(&a.decomp[1])?;
        let g12 = load(&a.decomp[2])?;
        let g2 = load(&a.decomp[3])?;
        let plan = MakerPlan::new(&board, &c1, &c2, g12, g2)?;
        (board, plan)
    };

    if let Some(prefix) = &a.emit_board {
        let (t1, t2) = plan.initial_trees();
        let c1 = close_tree_to_cycle(board.n(), t1)?;
        let c2 = close_tree_to_cycle(board.n(), t2)?;
        write_edge_list(&board, prefix)?;
        write_edge_list(&c1, &part_path(prefix, 1))?;
        write_edge_list(&c2, &part_path(prefix, 2))?;
        write_edge_list(plan.degree_part(), &part_path(prefix, 3))?;
        write_edge_list(plan.booster_part(), &part_path(prefix, 4))?;
    }

    let mut maker = StagedMaker::new(plan, a.seed);
    let mut breaker: Box<dyn BreakerStrategy> = match a.breaker {
        BreakerArg::Random => Box::new(RandomBreaker),
        BreakerArg::VertexKiller => Box::new(VertexKiller::new()),
        BreakerArg::BoosterBlocker => Box::new(BoosterBlocker::new()),
        BreakerArg::CutBuilder => Box::new(CutBuilder::new()),
    };
    let t = if a.full {
        play_full(&board, &mut maker, breaker.as_mut(), a.seed)?
    } else {
        play(&board, &mut maker, breaker.as_mut(), a.seed)?
    };

    let player_name = |p: rlab_core::game::Player| match p {
        rlab_core::game::Player::Maker => "maker",
        rlab_core::game::Player::Breaker => "breaker",
    };
    let transcript = json!({
        "n": board.n(),
        "board_edges": board.m(),
        "maker": "staged",
        "breaker": breaker.name(),
        "seed": a.seed,
        "moves": t.moves.iter().map(|m| json!({
            "player": player_name(m.player),
            "u": m.u,
            "v": m.v,
        })).collect::<Vec<_>>(),
        "winner": player_name(t.winner),
        "witness": t.witness,
        "diagnostic": t.diagnostic,
    });
    fs::write(
        &a.out,
        format!("{}\n", serde_json::to_string_pretty(&transcript).unwrap()),
    )?;
    emit(
        &json!({
            "winner": player_name(t.winner),
            "moves": t.moves.len(),
            "witness": t.witness.is_some(),
            "out": a.out.display().to_string(),
        }),
        None,
    )
}

pub fn experiment(a: ExperimentArgs) -> CmdResult<()> {
    let text = fs::read_to_string(&a.config)?;
    let mut cfg = crate::config::ExperimentConfig::parse(&text)?;
    if let Some(out) = a.out {
        cfg.out = out;
    }
    if let Some(workers) = a.workers {
        if workers == 0 {
            return Err(Failure::validation("--workers must be at least 1"));
        }
        cfg.workers = workers;
    }
    let record = crate::experiment::run_experiment(&cfg)?;
    let paths = crate::experiment::persist(&cfg, &record)?;
    let errors = record.rows.iter().filter(|r| r.error.is_some()).count();
    emit(
        &json!({
            "kind": record.kind,
            "rows": record.rows.len(),
            "errors": errors,
            "config_hash": record.config_hash,
            "record": paths.record.display().to_string(),
            "csv": paths.csv.display().to_string(),
        }),
        None,
    )
}

pub fn report(a: ReportArgs) -> CmdResult<()> {
    let text = fs::read_to_string(&a.run)?;
    let record: crate::experiment::RunRecord = serde_json::from_str(&text)
        .map_err(|e| Failure::validation(format!("bad run record: {e}")))?;
    let dir = match a.out_dir {
        Some(d) => d,
        None => a
            .run
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from(".")),
    };
    let written = crate::report::write_report(&record, &dir)?;
    emit(
        &json!({
            "files": written.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        }),
        None,
    )
}
