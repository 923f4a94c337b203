//! Motion generation for a translating robot with side grasps.

mod grasp;
mod pick_place;
mod rrt;
mod subgoals;

pub use grasp::{
    carry_space, contact_offset, grasp_offset, reachable_sides, robot_fits, robot_space, solve_pick_config, Side,
    Subgoal,
};
pub use pick_place::{plan_pick_place, MotionPlan, PickPlacePair};
pub use rrt::{birrt, birrt_in_scene, point_at, polyline_length, Path, RrtError, RrtParams};
pub use subgoals::{
    plan_object_path, plan_object_path_among, refine_subgoals, select_subgoals, subgoal_positions, subgoal_step,
    StaticClearance,
};

use serde::{Deserialize, Serialize};

use crate::error::MotionError;
use crate::seed;
use crate::world::{Pose2, Scene};

/// Tuning for path planning and subgoal placement. Lengths are multiples of
/// the robot side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionParams {
    pub goal_bias: f64,
    pub rrt_step_factor: f64,
    pub max_iters: usize,
    pub shortcut_attempts: usize,
    /// Subgoal step per meter of clearance.
    pub kappa: f64,
    pub step_min_factor: f64,
    pub step_max_factor: f64,
    /// Contact-point merge distance for refinement.
    pub epsilon_factor: f64,
    pub refine: bool,
    /// Grid used for the clearance map.
    pub clearance_grid: usize,
}

impl Default for MotionParams {
    fn default() -> Self {
        Self {
            goal_bias: 0.1,
            rrt_step_factor: 0.5,
            max_iters: 5000,
            shortcut_attempts: 100,
            kappa: 2.0,
            step_min_factor: 0.5,
            step_max_factor: 4.0,
            epsilon_factor: 1.0,
            refine: true,
            clearance_grid: 64,
        }
    }
}

impl MotionParams {
    pub fn rrt(&self, robot_side: f64) -> RrtParams {
        RrtParams {
            goal_bias: self.goal_bias,
            step: self.rrt_step_factor * robot_side,
            max_iters: self.max_iters,
            shortcut_attempts: self.shortcut_attempts,
        }
    }
}

/// Subgoals for moving `object_id` to `target`: static path, adaptive
/// subgoals, then refinement when enabled.
pub fn plan_subgoals(
    scene: &Scene,
    object_id: &str,
    target: Pose2,
    params: &MotionParams,
    seed: u64,
) -> Result<Vec<Subgoal>, MotionError> {
    let mu = plan_object_path(scene, object_id, target, params, seed::derive(seed, "mu", 0))?;
    subgoals_along(&mu, scene, object_id, params)
}

fn subgoals_along(
    mu: &Path,
    scene: &Scene,
    object_id: &str,
    params: &MotionParams,
) -> Result<Vec<Subgoal>, MotionError> {
    let sg = select_subgoals(mu, scene, object_id, params)?;
    if params.refine {
        refine_subgoals(&sg, scene, object_id, params.epsilon_factor * scene.robot_side())
    } else {
        Ok(sg)
    }
}

/// Full pipeline for one object: subgoals then pick-and-place motions.
///
/// The object path is planned among walls only. If that path cannot be
/// executed, one more attempt follows a path planned around the other
/// movables too; the first error is reported if both fail.
pub fn move_object(
    scene: &Scene,
    object_id: &str,
    target: Pose2,
    params: &MotionParams,
    seed: u64,
) -> Result<(MotionPlan, Scene), MotionError> {
    let pnp_seed = seed::derive(seed, "pnp", 0);
    let first = plan_subgoals(scene, object_id, target, params, seed)
        .and_then(|sg| plan_pick_place(scene, object_id, &sg, params, pnp_seed));
    match first {
        Err(MotionError::ObjectPath { .. }) | Err(MotionError::World(_)) | Err(MotionError::NotMovable(_)) | Ok(_) => {
            first
        }
        Err(e) => {
            let around = plan_object_path_among(scene, object_id, target, params, seed::derive(seed, "mu-around", 0))
                .and_then(|mu| subgoals_along(&mu, scene, object_id, params))
                .and_then(|sg| plan_pick_place(scene, object_id, &sg, params, seed::derive(seed, "pnp-around", 0)));
            around.map_err(|_| e)
        }
    }
}
