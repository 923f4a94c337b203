//! Selective guided forward search: relocating the few obstacles that block
//! a pick or place.

mod reloc;
mod score;
mod search;
mod task;

pub use reloc::{gen_relocation_points, relocation_points_excluding, RelocationCandidate, RelocationParams};
pub use score::{decay_weight, expand_crit, exploration, score_node, score_scene, weight_objects, ObjectWeights};
pub use search::{select_critical, sgfs, SearchNode, SgfsConfig, SgfsOutcome};
pub use task::{
    find_colliding, pick_task, place_task, plan_cells, relaxed_place_cells, sweep_cells, task_feasible, TaskKind,
    TaskTrajectory,
};
