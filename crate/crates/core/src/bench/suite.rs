//! Seeded benchmark suites and their CSV records.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::scenarios::{builtin, gen_m_block};
use crate::error::BenchError;
use crate::planner::{mo_segman, PlanResult, PlannerConfig};
use crate::world::scenario::load_scenario;
use crate::world::Scene;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioSource {
    Builtin(String),
    File(PathBuf),
    /// Generated per seed.
    MBlock(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub name: String,
    pub source: ScenarioSource,
}

impl SuiteEntry {
    pub fn scene(&self, seed: u64) -> Result<Scene, BenchError> {
        match &self.source {
            ScenarioSource::Builtin(n) => builtin(n),
            ScenarioSource::File(p) => Ok(load_scenario(p)?),
            ScenarioSource::MBlock(m) => gen_m_block(*m, seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskSuite {
    pub scenarios: Vec<SuiteEntry>,
    /// One run per seed and scenario.
    pub seeds: Vec<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteDoc {
    seeds: Option<Vec<u64>>,
    repeats: Option<u64>,
    scenarios: Vec<EntryDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    name: Option<String>,
    builtin: Option<String>,
    path: Option<PathBuf>,
    m_block: Option<usize>,
}

impl TaskSuite {
    /// The desk-scale acceptance suite: four hand-built tasks and M-block
    /// for M = 2, 4, 8, ten seeds each.
    pub fn desk() -> Self {
        let b = |n: &str| SuiteEntry {
            name: n.to_string(),
            source: ScenarioSource::Builtin(n.to_string()),
        };
        let m = |k: usize| SuiteEntry {
            name: format!("m-block-{k}"),
            source: ScenarioSource::MBlock(k),
        };
        Self {
            scenarios: vec![
                b("o-room"),
                b("slot"),
                b("four-blocks"),
                b("mo-3-block"),
                m(2),
                m(4),
                m(8),
            ],
            seeds: (0..10).collect(),
        }
    }

    pub fn repeats(&self) -> usize {
        self.seeds.len()
    }

    /// Looks up `name` as a built-in suite (`desk`) or reads a suite file.
    ///
    /// ```toml
    /// repeats = 3            # or: seeds = [4, 8, 15]
    /// [[scenarios]]
    /// builtin = "slot"
    /// [[scenarios]]
    /// name = "mine"
    /// path = "mine.toml"     # relative to the suite file
    /// [[scenarios]]
    /// m_block = 8
    /// ```
    pub fn load(name: &str) -> Result<Self, BenchError> {
        if name == "desk" {
            return Ok(Self::desk());
        }
        let path = Path::new(name);
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self, BenchError> {
        let doc: SuiteDoc = toml::from_str(text).map_err(|e| BenchError::Suite(e.to_string()))?;
        let seeds = match (doc.seeds, doc.repeats) {
            (Some(s), None) => s,
            (None, Some(r)) => (0..r).collect(),
            (None, None) => vec![0],
            (Some(_), Some(_)) => return Err(BenchError::Suite("give either `seeds` or `repeats`".into())),
        };
        if seeds.is_empty() {
            return Err(BenchError::Suite("at least one seed is needed".into()));
        }
        let mut scenarios = Vec::new();
        for e in doc.scenarios {
            let (default_name, source) = match (e.builtin, e.path, e.m_block) {
                (Some(b), None, None) => (b.clone(), ScenarioSource::Builtin(b)),
                (None, Some(p), None) => (p.display().to_string(), ScenarioSource::File(base.join(p))),
                (None, None, Some(m)) => (format!("m-block-{m}"), ScenarioSource::MBlock(m)),
                _ => {
                    return Err(BenchError::Suite(
                        "each scenario needs exactly one of builtin, path, m_block".into(),
                    ))
                }
            };
            scenarios.push(SuiteEntry {
                name: e.name.unwrap_or(default_name),
                source,
            });
        }
        Ok(Self { scenarios, seeds })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub scenario: String,
    pub seed: u64,
    pub status: String,
    pub pnp: usize,
    pub replanning: usize,
    #[serde(rename = "travel_distance_m")]
    pub travel_distance: f64,
    #[serde(rename = "wall_time_s")]
    pub wall_time: f64,
    #[serde(rename = "sequence_time_s")]
    pub sequence_time: f64,
}

impl BenchRecord {
    pub fn from_result(scenario: &str, seed: u64, r: &PlanResult) -> Self {
        Self {
            scenario: scenario.to_string(),
            seed,
            status: r.status.to_string(),
            pnp: r.metrics.pnp_count,
            replanning: r.metrics.replanning_count,
            travel_distance: r.metrics.travel_distance,
            wall_time: r.metrics.wall_time,
            sequence_time: r.metrics.sequence_time,
        }
    }

    fn failed(scenario: &str, seed: u64, status: &str) -> Self {
        Self {
            scenario: scenario.to_string(),
            seed,
            status: status.to_string(),
            pnp: 0,
            replanning: 0,
            travel_distance: 0.0,
            wall_time: 0.0,
            sequence_time: 0.0,
        }
    }

    pub fn is_success(&self) -> bool {
        self.status == "success"
    }
}

pub const CSV_HEADER: [&str; 8] = [
    "scenario",
    "seed",
    "status",
    "pnp",
    "replanning",
    "travel_distance_m",
    "wall_time_s",
    "sequence_time_s",
];

/// Plans one scenario with the planner seed set to `seed`.
pub fn run_case(entry: &SuiteEntry, seed: u64, config: &PlannerConfig) -> Result<PlanResult, BenchError> {
    let scene = entry.scene(seed)?;
    let mut cfg = config.clone();
    cfg.seed = seed;
    Ok(mo_segman(&scene, &cfg)?)
}

/// Runs every (scenario, seed) pair on up to `workers` threads. Records come
/// back sorted by scenario order, then seed.
pub fn run_suite(suite: &TaskSuite, config: &PlannerConfig, workers: usize) -> Vec<BenchRecord> {
    let jobs: Vec<(usize, usize)> = (0..suite.scenarios.len())
        .flat_map(|s| (0..suite.seeds.len()).map(move |k| (s, k)))
        .collect();
    let next = AtomicUsize::new(0);
    let done = Mutex::new(Vec::with_capacity(jobs.len()));
    std::thread::scope(|scope| {
        for _ in 0..workers.clamp(1, jobs.len().max(1)) {
            scope.spawn(|| loop {
                let j = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(s, k)) = jobs.get(j) else { break };
                let entry = &suite.scenarios[s];
                let seed = suite.seeds[k];
                let record = match run_case(entry, seed, config) {
                    Ok(r) => BenchRecord::from_result(&entry.name, seed, &r),
                    Err(BenchError::Scenario(e)) => {
                        log::warn!("{}: {e}", entry.name);
                        BenchRecord::failed(&entry.name, seed, "parse-error")
                    }
                    Err(e) => {
                        log::warn!("{} seed {seed}: {e}", entry.name);
                        BenchRecord::failed(&entry.name, seed, "error")
                    }
                };
                done.lock().expect("no worker panicked").push((s, k, record));
            });
        }
    });
    let mut out = done.into_inner().expect("no worker panicked");
    out.sort_by_key(|(s, k, _)| (*s, *k));
    out.into_iter().map(|(_, _, r)| r).collect()
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<(), BenchError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
