//! Placement order for goal objects.

mod cycles;
mod graph;
mod lazy;
mod patsp;

pub use cycles::{break_cycles, break_cycles_greedy, enumerate_cycles, Cycles, RemovedEdge, DEFAULT_CYCLE_CAP};
pub use graph::{sweeps, DependencyGraph, EdgeKind};
pub use lazy::{lazy_refine, sequence_travel, LazyOutcome, Travel, TravelOracle};
pub use patsp::{respects, solve_exact, solve_heuristic, solve_patsp, topological, CostMatrix, EXACT_LIMIT};

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{MotionError, SequencerError};
use crate::motion::{plan_object_path, MotionParams, Path};
use crate::seed;
use crate::world::{placed_objects, Scene};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceMode {
    /// Cycle removal, exact ordering, lazy travel refinement.
    Full,
    /// As `Full` without travel refinement.
    Euclidean,
    /// Depth-first back-edge removal instead of cycle counting.
    Greedy,
    /// Seeded random order, ignoring dependencies.
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequencerParams {
    pub mode: SequenceMode,
    pub lazy_rounds: usize,
    pub cycle_cap: usize,
    pub unreachable_penalty: f64,
}

impl Default for SequencerParams {
    fn default() -> Self {
        Self {
            mode: SequenceMode::Full,
            lazy_rounds: 5,
            cycle_cap: DEFAULT_CYCLE_CAP,
            unreachable_penalty: 100.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    /// Unplaced goal objects; those without a static path come last.
    pub order: Vec<String>,
    pub graph: DependencyGraph,
    pub removed: Vec<RemovedEdge>,
    pub unsolvable: Vec<String>,
    pub paths: BTreeMap<String, Path>,
    /// Straight-line cost of the solvable part of `order`.
    pub euclidean_cost: f64,
    /// Planned travel cost, when refinement ran.
    pub travel_cost: Option<f64>,
}

/// Orders the goal objects that are not yet at their goals.
pub fn gen_obj_place_seq(
    scene: &Scene,
    motion: &MotionParams,
    params: &SequencerParams,
    seed: u64,
) -> Result<Sequence, SequencerError> {
    let placed = placed_objects(scene);
    let pending: Vec<String> = scene.goals.keys().filter(|id| !placed.contains(*id)).cloned().collect();
    let mut paths = BTreeMap::new();
    let mut unsolvable = Vec::new();
    for (k, id) in pending.iter().enumerate() {
        match plan_object_path(scene, id, scene.goals[id], motion, seed::derive(seed, "mu", k as u64)) {
            Ok(p) => {
                paths.insert(id.clone(), p);
            }
            Err(MotionError::World(e)) => return Err(e.into()),
            Err(_) => unsolvable.push(id.clone()),
        }
    }
    let ids: Vec<String> = pending.iter().filter(|id| paths.contains_key(*id)).cloned().collect();
    let graph = DependencyGraph::build(scene, &ids, &paths);
    let starts: Vec<_> = ids
        .iter()
        .map(|id| scene.body(id).expect("pending ids exist").pose)
        .collect();
    let goals: Vec<_> = ids.iter().map(|id| scene.goals[id]).collect();
    let euclid = CostMatrix::euclidean(scene.robot_pose(), &starts, &goals);

    let (removed, order, travel_cost) = match params.mode {
        SequenceMode::Random => {
            let mut order: Vec<usize> = (0..ids.len()).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed::derive(seed, "random-order", 0)));
            (Vec::new(), order, None)
        }
        mode => {
            let (dag, removed) = if mode == SequenceMode::Greedy {
                break_cycles_greedy(&graph)
            } else {
                break_cycles(&graph, params.cycle_cap)
            };
            let prec: Vec<(usize, usize)> = dag.edges.keys().copied().collect();
            let (order, _) = solve_patsp(&euclid, &prec)?;
            if mode == SequenceMode::Euclidean {
                (removed, order, None)
            } else {
                let mut oracle = TravelOracle::new(
                    motion.clone(),
                    seed::derive(seed, "travel", 0),
                    params.unreachable_penalty,
                );
                let out = lazy_refine(scene, &ids, &prec, &euclid, order, &mut oracle, params.lazy_rounds)?;
                log::debug!(
                    "lazy refinement: {} rounds, converged {}, cache {}/{}",
                    out.rounds,
                    out.converged,
                    oracle.hits,
                    oracle.misses
                );
                (removed, out.order, Some(out.cost))
            }
        }
    };
    let euclidean_cost = euclid.tour_cost(&order);
    let mut names: Vec<String> = order.iter().map(|&k| ids[k].clone()).collect();
    names.extend(unsolvable.iter().cloned());
    Ok(Sequence {
        order: names,
        graph,
        removed,
        unsolvable,
        paths,
        euclidean_cost,
        travel_cost,
    })
}
