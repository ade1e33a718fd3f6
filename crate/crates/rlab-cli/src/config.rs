//! Experiment configuration: a line-oriented `key = value` format with
//! `[section]` headers, or an equivalent JSON object of sections. Both parse
//! to the same normalized map, so both hash identically.

use std::collections::BTreeMap;
use std::path::PathBuf;

use sha2::{Digest, Sha256};

use crate::{CmdResult, Failure};

/// Breaker names accepted by game experiments, in canonical order.
pub const BREAKERS: [&str; 4] = ["random", "vertex-killer", "booster-blocker", "cut-builder"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    /// Eigenvalue statistics of sampled regular hosts over d x n.
    Spectral,
    /// Attack-suite outcomes at fixed budgets over d x n x r.
    Suite,
    /// Two-sided Hamiltonicity resilience estimates over d x n x epsilon.
    Resilience,
    /// Maker-Breaker tournaments over n x breaker.
    Game,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Spectral => "spectral",
            ExperimentKind::Suite => "suite",
            ExperimentKind::Resilience => "resilience",
            ExperimentKind::Game => "game",
        }
    }

    fn from_name(name: &str) -> CmdResult<Self> {
        match name {
            "spectral" => Ok(ExperimentKind::Spectral),
            "suite" => Ok(ExperimentKind::Suite),
            "resilience" => Ok(ExperimentKind::Resilience),
            "game" => Ok(ExperimentKind::Game),
            other => Err(Failure::validation(format!(
                "unknown experiment kind {other:?} (spectral, suite, resilience, game)"
            ))),
        }
    }

    /// Sweep axes this kind consumes, which is also the coordinate column
    /// order in every emitted table.
    pub fn sweep_keys(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Spectral => &["d", "n"],
            ExperimentKind::Suite => &["d", "n", "r"],
            ExperimentKind::Resilience => &["d", "n", "epsilon"],
            ExperimentKind::Game => &["n", "breaker"],
        }
    }
}

/// One coordinate of the sweep cross product.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub index: usize,
    pub n: usize,
    pub d: Option<usize>,
    pub epsilon: Option<f64>,
    pub r: Option<usize>,
    pub breaker: Option<String>,
    /// Column values in `sweep_keys` order, kept as written in the config.
    pub coords: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub samples: usize,
    pub workers: usize,
    pub out: PathBuf,
    d: Vec<(usize, String)>,
    n: Vec<(usize, String)>,
    epsilon: Vec<(f64, String)>,
    r: Vec<(usize, String)>,
    pub d12: usize,
    pub d2: usize,
    pub breakers: Vec<String>,
    /// Normalized config text; its hash keys the run record.
    pub canonical: String,
    pub hash: String,
}

type Sections = BTreeMap<String, BTreeMap<String, String>>;

fn parse_sections(text: &str) -> CmdResult<Sections> {
    let mut sections: Sections = BTreeMap::new();
    let mut current = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| Failure::validation(format!("line {}: unterminated section header", lineno + 1)))?
                .trim();
            current = name.to_string();
            sections.entry(current.clone()).or_default();
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Failure::validation(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        if current.is_empty() {
            return Err(Failure::validation(format!(
                "line {}: key before any [section] header",
                lineno + 1
            )));
        }
        let key = key.trim().to_string();
        let value = normalize_list(value.trim());
        let section = sections.entry(current.clone()).or_default();
        if section.insert(key.clone(), value).is_some() {
            return Err(Failure::validation(format!(
                "line {}: duplicate key {key:?} in [{current}]",
                lineno + 1
            )));
        }
    }
    Ok(sections)
}

/// Collapses list spacing so `3, 4` and `[3,4]` normalize identically.
fn normalize_list(value: &str) -> String {
    value
        .split(',')
        .map(str::trim)
        .collect::<Vec<_>>()
        .join(",")
}

fn json_sections(text: &str) -> CmdResult<Sections> {
    let root: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Failure::validation(format!("bad JSON config: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| Failure::validation("JSON config must be an object of sections"))?;
    let mut sections: Sections = BTreeMap::new();
    for (name, body) in obj {
        let map = body.as_object().ok_or_else(|| {
            Failure::validation(format!("JSON section {name:?} must be an object"))
        })?;
        let mut target = BTreeMap::new();
        for (key, value) in map {
            let rendered = match value {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(x) => x.to_string(),
                serde_json::Value::Bool(b) => b.to_string(),
                serde_json::Value::Array(items) => {
                    let mut parts = Vec::with_capacity(items.len());
                    for item in items {
                        match item {
                            serde_json::Value::String(s) => parts.push(s.clone()),
                            serde_json::Value::Number(x) => parts.push(x.to_string()),
                            other => {
                                return Err(Failure::validation(format!(
                                    "JSON list entry {other} in {name}.{key} is not scalar"
                                )))
                            }
                        }
                    }
                    parts.join(",")
                }
                other => {
                    return Err(Failure::validation(format!(
                        "JSON value {other} in {name}.{key} is not scalar or list"
                    )))
                }
            };
            target.insert(key.clone(), normalize_list(&rendered));
        }
        sections.insert(name.clone(), target);
    }
    Ok(sections)
}

fn canonical_text(sections: &Sections) -> String {
    let mut out = String::new();
    for (name, body) in sections {
        out.push_str(&format!("[{name}]\n"));
        for (key, value) in body {
            out.push_str(&format!("{key} = {value}\n"));
        }
    }
    out
}

fn hash_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn known_keys(section: &str) -> Option<&'static [&'static str]> {
    match section {
        "experiment" => Some(&["kind", "seed", "samples", "workers", "out"]),
        "model" => Some(&["model"]),
        "sweep" => Some(&["d", "n", "epsilon", "r"]),
        "game" => Some(&["d12", "d2", "breakers"]),
        _ => None,
    }
}

fn get<'a>(sections: &'a Sections, section: &str, key: &str) -> Option<&'a str> {
    sections
        .get(section)
        .and_then(|s| s.get(key))
        .map(String::as_str)
}

fn parse_list<T: std::str::FromStr>(
    raw: &str,
    what: &str,
) -> CmdResult<Vec<(T, String)>> {
    let mut out = Vec::new();
    for tok in raw.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let value = tok
            .parse::<T>()
            .map_err(|_| Failure::validation(format!("bad {what} entry {tok:?}")))?;
        out.push((value, tok.to_string()));
    }
    Ok(out)
}

impl ExperimentConfig {
    /// Parses either config syntax, then validates against the kind's schema.
    pub fn parse(text: &str) -> CmdResult<Self> {
        let sections = if text.trim_start().starts_with('{') {
            json_sections(text)?
        } else {
            parse_sections(text)?
        };
        for (name, body) in &sections {
            let known = known_keys(name).ok_or_else(|| {
                Failure::validation(format!("unknown config section [{name}]"))
            })?;
            for key in body.keys() {
                if !known.contains(&key.as_str()) {
                    return Err(Failure::validation(format!(
                        "unknown key {key:?} in [{name}]"
                    )));
                }
            }
        }

        let kind = ExperimentKind::from_name(
            get(&sections, "experiment", "kind")
                .ok_or_else(|| Failure::validation("missing experiment.kind"))?,
        )?;
        let seed: u64 = get(&sections, "experiment", "seed")
            .ok_or_else(|| Failure::validation("missing experiment.seed"))?
            .parse()
            .map_err(|_| Failure::validation("experiment.seed must be an integer"))?;
        let samples: usize = match get(&sections, "experiment", "samples") {
            Some(raw) => raw
                .parse()
                .map_err(|_| Failure::validation("experiment.samples must be an integer"))?,
            None => 1,
        };
        if samples == 0 {
            return Err(Failure::validation("experiment.samples must be at least 1"));
        }
        let workers: usize = match get(&sections, "experiment", "workers") {
            Some(raw) => raw
                .parse()
                .map_err(|_| Failure::validation("experiment.workers must be an integer"))?,
            None => 1,
        };
        if workers == 0 {
            return Err(Failure::validation("experiment.workers must be at least 1"));
        }
        let out = PathBuf::from(get(&sections, "experiment", "out").unwrap_or("rlab-run"));

        if let Some(model) = get(&sections, "model", "model") {
            if model != "regular" {
                return Err(Failure::validation(format!(
                    "experiment sweeps support model = regular, got {model:?}"
                )));
            }
        }

        let d = parse_list::<usize>(get(&sections, "sweep", "d").unwrap_or(""), "sweep.d")?;
        let n = parse_list::<usize>(get(&sections, "sweep", "n").unwrap_or(""), "sweep.n")?;
        let epsilon =
            parse_list::<f64>(get(&sections, "sweep", "epsilon").unwrap_or(""), "sweep.epsilon")?;
        let r = parse_list::<usize>(get(&sections, "sweep", "r").unwrap_or(""), "sweep.r")?;

        let keys = kind.sweep_keys();
        let require = |name: &str, present: bool| -> CmdResult<()> {
            let wanted = keys.contains(&name);
            if wanted && !present {
                return Err(Failure::validation(format!(
                    "kind {} needs a nonempty sweep.{name}",
                    kind.name()
                )));
            }
            if !wanted && present {
                return Err(Failure::validation(format!(
                    "kind {} does not use sweep.{name}",
                    kind.name()
                )));
            }
            Ok(())
        };
        require("d", !d.is_empty())?;
        require("n", !n.is_empty())?;
        require("epsilon", !epsilon.is_empty())?;
        require("r", !r.is_empty())?;

        let (d12, d2, breakers) = if kind == ExperimentKind::Game {
            let d12: usize = get(&sections, "game", "d12")
                .ok_or_else(|| Failure::validation("game experiments need game.d12"))?
                .parse()
                .map_err(|_| Failure::validation("game.d12 must be an integer"))?;
            let d2: usize = get(&sections, "game", "d2")
                .ok_or_else(|| Failure::validation("game experiments need game.d2"))?
                .parse()
                .map_err(|_| Failure::validation("game.d2 must be an integer"))?;
            let breakers: Vec<String> = match get(&sections, "game", "breakers") {
                Some(raw) => raw
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect(),
                None => BREAKERS.iter().map(|s| s.to_string()).collect(),
            };
            if breakers.is_empty() {
                return Err(Failure::validation("game.breakers must not be empty"));
            }
            for b in &breakers {
                if !BREAKERS.contains(&b.as_str()) {
                    return Err(Failure::validation(format!(
                        "unknown breaker {b:?} (expected one of {BREAKERS:?})"
                    )));
                }
            }
            (d12, d2, breakers)
        } else {
            if sections.contains_key("game") {
                return Err(Failure::validation(format!(
                    "[game] section is only used by kind game, not {}",
                    kind.name()
                )));
            }
            (0, 0, Vec::new())
        };

        let canonical = canonical_text(&sections);
        let hash = hash_hex(&canonical);
        Ok(ExperimentConfig {
            kind,
            seed,
            samples,
            workers,
            out,
            d,
            n,
            epsilon,
            r,
            d12,
            d2,
            breakers,
            canonical,
            hash,
        })
    }

    /// Cross product of the kind's sweep axes, outermost axis first, indexed
    /// in emission order.
    pub fn sweep_points(&self) -> Vec<SweepPoint> {
        let mut points = Vec::new();
        match self.kind {
            ExperimentKind::Spectral => {
                for (d, ds) in &self.d {
                    for (n, ns) in &self.n {
                        points.push(SweepPoint {
                            index: points.len(),
                            n: *n,
                            d: Some(*d),
                            epsilon: None,
                            r: None,
                            breaker: None,
                            coords: vec![
                                ("d".into(), ds.clone()),
                                ("n".into(), ns.clone()),
                            ],
                        });
                    }
                }
            }
            ExperimentKind::Suite => {
                for (d, ds) in &self.d {
                    for (n, ns) in &self.n {
                        for (r, rs) in &self.r {
                            points.push(SweepPoint {
                                index: points.len(),
                                n: *n,
                                d: Some(*d),
                                epsilon: None,
                                r: Some(*r),
                                breaker: None,
                                coords: vec![
                                    ("d".into(), ds.clone()),
                                    ("n".into(), ns.clone()),
                                    ("r".into(), rs.clone()),
                                ],
                            });
                        }
                    }
                }
            }
            ExperimentKind::Resilience => {
                for (d, ds) in &self.d {
                    for (n, ns) in &self.n {
                        for (eps, es) in &self.epsilon {
                            points.push(SweepPoint {
                                index: points.len(),
                                n: *n,
                                d: Some(*d),
                                epsilon: Some(*eps),
                                r: None,
                                breaker: None,
                                coords: vec![
                                    ("d".into(), ds.clone()),
                                    ("n".into(), ns.clone()),
                                    ("epsilon".into(), es.clone()),
                                ],
                            });
                        }
                    }
                }
            }
            ExperimentKind::Game => {
                for (n, ns) in &self.n {
                    for breaker in &self.breakers {
                        points.push(SweepPoint {
                            index: points.len(),
                            n: *n,
                            d: None,
                            epsilon: None,
                            r: None,
                            breaker: Some(breaker.clone()),
                            coords: vec![
                                ("n".into(), ns.clone()),
                                ("breaker".into(), breaker.clone()),
                            ],
                        });
                    }
                }
            }
        }
        points
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPECTRAL_INI: &str = "\
# comment\n\
[experiment]\n\
kind = spectral\n\
seed = 11\n\
samples = 2\n\
workers = 2\n\
out = runs/demo\n\
\n\
[sweep]\n\
d = 3, 4\n\
n = 24\n";

    #[test]
    fn parses_sections_and_sweeps() {
        let cfg = ExperimentConfig::parse(SPECTRAL_INI).unwrap();
        assert_eq!(cfg.kind, ExperimentKind::Spectral);
        assert_eq!(cfg.seed, 11);
        assert_eq!(cfg.samples, 2);
        let points = cfg.sweep_points();
        assert_eq!(points.len(), 2);
        assert_eq!(points[0].coords[0], ("d".to_string(), "3".to_string()));
        assert_eq!(points[1].coords[0], ("d".to_string(), "4".to_string()));
        assert_eq!(points[1].index, 1);
    }

    #[test]
    fn json_and_ini_hash_identically() {
        let json = r#"{
            "experiment": {"kind": "spectral", "seed": 11, "samples": 2,
                           "workers": 2, "out": "runs/demo"},
            "sweep": {"d": [3, 4], "n": [24]}
        }"#;
        let a = ExperimentConfig::parse(SPECTRAL_INI).unwrap();
        let b = ExperimentConfig::parse(json).unwrap();
        assert_eq!(a.canonical, b.canonical);
        assert_eq!(a.hash, b.hash);
    }

    #[test]
    fn missing_or_empty_sweeps_are_rejected() {
        let no_sweep = "[experiment]\nkind = spectral\nseed = 1\n";
        assert!(matches!(
            ExperimentConfig::parse(no_sweep),
            Err(Failure::Validation(_))
        ));
        let empty = "[experiment]\nkind = spectral\nseed = 1\n[sweep]\nd = \nn = 10\n";
        assert!(matches!(
            ExperimentConfig::parse(empty),
            Err(Failure::Validation(_))
        ));
    }

    #[test]
    fn unknown_keys_sections_and_kinds_are_rejected() {
        let bad_key = "[experiment]\nkind = spectral\nseed = 1\nturbo = yes\n[sweep]\nd = 3\nn = 8\n";
        assert!(ExperimentConfig::parse(bad_key).is_err());
        let bad_section = "[experiment]\nkind = spectral\nseed = 1\n[plotting]\nx = d\n";
        assert!(ExperimentConfig::parse(bad_section).is_err());
        let bad_kind = "[experiment]\nkind = quantum\nseed = 1\n[sweep]\nd = 3\nn = 8\n";
        assert!(ExperimentConfig::parse(bad_kind).is_err());
    }

    #[test]
    fn seed_is_mandatory() {
        let text = "[experiment]\nkind = spectral\n[sweep]\nd = 3\nn = 8\n";
        let err = ExperimentConfig::parse(text).unwrap_err();
        assert!(matches!(err, Failure::Validation(m) if m.contains("seed")));
    }

    #[test]
    fn irrelevant_sweep_axes_are_rejected() {
        let text =
            "[experiment]\nkind = spectral\nseed = 1\n[sweep]\nd = 3\nn = 8\nepsilon = 0.5\n";
        assert!(ExperimentConfig::parse(text).is_err());
    }

    #[test]
    fn game_kind_requires_board_shape_and_valid_breakers() {
        let ok = "[experiment]\nkind = game\nseed = 1\n[sweep]\nn = 16\n\
                  [game]\nd12 = 4\nd2 = 6\nbreakers = random, cut-builder\n";
        let cfg = ExperimentConfig::parse(ok).unwrap();
        assert_eq!(cfg.sweep_points().len(), 2);
        let bad = "[experiment]\nkind = game\nseed = 1\n[sweep]\nn = 16\n\
                   [game]\nd12 = 4\nd2 = 6\nbreakers = gandalf\n";
        assert!(ExperimentConfig::parse(bad).is_err());
        let missing = "[experiment]\nkind = game\nseed = 1\n[sweep]\nn = 16\n";
        assert!(ExperimentConfig::parse(missing).is_err());
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let text = "[experiment]\nkind = spectral\nseed = 1\nseed = 2\n[sweep]\nd = 3\nn = 8\n";
        assert!(ExperimentConfig::parse(text).is_err());
    }
}
