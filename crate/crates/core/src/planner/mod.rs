//! The outer rearrangement loop: sequence the goal objects, plan each one
//! with obstacle relocation as a fallback, and re-sequence when the scene
//! changes under the current order.

mod replay;
mod report;

pub use replay::replay;
pub use report::to_text;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{MotionError, PlannerError};
use crate::motion::{move_object, reachable_sides, MotionParams, MotionPlan};
use crate::seed;
use crate::sequencer::{gen_obj_place_seq, SequencerParams};
use crate::sgfs::{pick_task, place_task, sgfs, SgfsConfig};
use crate::world::{placed_objects, Scene};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlannerConfig {
    pub motion: MotionParams,
    pub sequencer: SequencerParams,
    pub sgfs: SgfsConfig,
    /// `skip_max = |goals| / skip_max_divisor`.
    pub skip_max_divisor: usize,
    /// `iter_max = |goals| + iter_max_offset`.
    pub iter_max_offset: usize,
    /// Seconds.
    pub time_limit: f64,
    /// Relocation searches per object attempt.
    pub sgfs_rounds: usize,
    pub seed: u64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            motion: MotionParams::default(),
            sequencer: SequencerParams::default(),
            sgfs: SgfsConfig::default(),
            skip_max_divisor: 4,
            iter_max_offset: 1,
            time_limit: 120.0,
            sgfs_rounds: 3,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Success,
    Timeout,
    IterExhausted,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Success => "success",
            Status::Timeout => "timeout",
            Status::IterExhausted => "iter-exhausted",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    /// Moves a goal object toward its goal.
    Place,
    /// Moves an obstruction out of the way.
    Relocate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanStep {
    pub object_id: String,
    pub kind: StepKind,
    /// Goal object being planned when this step was made.
    pub for_object: String,
    /// Sequence generation in force.
    pub generation: usize,
    pub plan: MotionPlan,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub pnp_count: usize,
    pub replanning_count: usize,
    pub travel_distance: f64,
    pub wall_time: f64,
    pub sequence_time: f64,
    pub sequence_generations: usize,
    pub failed_attempts: usize,
    /// Goal objects moved off their path by relocation.
    pub goal_relocations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    pub status: Status,
    pub initial: Scene,
    pub final_scene: Scene,
    pub steps: Vec<PlanStep>,
    pub metrics: Metrics,
    /// Human-readable log of sequencing and planning decisions.
    pub events: Vec<String>,
}

impl PlanResult {
    pub fn plans(&self) -> impl Iterator<Item = &MotionPlan> {
        self.steps.iter().map(|s| &s.plan)
    }
}

/// Counts derived from the plans and the failure tallies.
pub fn count_metrics(steps: &[PlanStep], failed_attempts: usize, generations: usize) -> Metrics {
    Metrics {
        pnp_count: steps.iter().map(|s| s.plan.pnp_count()).sum(),
        replanning_count: failed_attempts + generations.saturating_sub(1),
        travel_distance: steps.iter().fold(0.0, |acc, s| acc + s.plan.travel_distance()),
        sequence_generations: generations,
        failed_attempts,
        ..Metrics::default()
    }
}

/// What one call to [`gen_motion_plan`] did. Relocations already carried out
/// are kept even when the object itself could not be placed.
#[derive(Debug, Clone)]
pub struct Attempt {
    pub steps: Vec<PlanStep>,
    pub scene: Scene,
    pub placed: bool,
    /// Goal objects moved by relocation.
    pub relocated_goals: Vec<String>,
    pub timed_out: bool,
    pub notes: Vec<String>,
}

/// Plans `object_id` to its goal, relocating obstructions when a leg fails.
///
/// Every round first tries the full motion pipeline. On failure a relocation
/// search runs on the failing task (reaching the object when no grasp is
/// reachable, otherwise carrying it) and the relocations are applied.
pub fn gen_motion_plan(
    scene: &Scene,
    object_id: &str,
    placed: &BTreeSet<String>,
    config: &PlannerConfig,
    seed: u64,
    deadline: Option<Instant>,
) -> Result<Attempt, PlannerError> {
    let mut out = Attempt {
        steps: Vec::new(),
        scene: scene.clone(),
        placed: false,
        relocated_goals: Vec::new(),
        timed_out: false,
        notes: Vec::new(),
    };
    let target = *scene
        .goals
        .get(object_id)
        .ok_or_else(|| crate::error::WorldError::UnknownBody(object_id.to_string()))?;
    let motion = &config.motion;
    let move_seed = seed::derive(seed, "move", 0);
    for round in 0..=config.sgfs_rounds {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            out.timed_out = true;
            return Ok(out);
        }
        let cur = out.scene.clone();
        let err = match move_object(&cur, object_id, target, motion, move_seed) {
            Ok((plan, next)) => {
                out.steps.push(PlanStep {
                    object_id: object_id.to_string(),
                    kind: StepKind::Place,
                    for_object: object_id.to_string(),
                    generation: 0,
                    plan,
                });
                out.scene = next;
                out.placed = true;
                return Ok(out);
            }
            Err(MotionError::World(e)) => return Err(e.into()),
            Err(e) => e,
        };
        out.notes.push(format!("{object_id}: {err}"));
        if round == config.sgfs_rounds {
            break;
        }
        let frame = config.sgfs.frame(&cur);
        let reachable = !reachable_sides(&cur, object_id, None)
            .map_err(motion_to_world)?
            .is_empty();
        let task = if reachable {
            place_task(&cur, object_id, target, &frame, motion, move_seed)
        } else {
            pick_task(&cur, object_id, &frame, motion, move_seed)
        }
        .map_err(motion_to_world)?;
        let Some(task) = task else {
            out.notes.push(format!("{object_id}: blocked by walls"));
            break;
        };
        match sgfs(
            &cur,
            &task,
            &config.sgfs,
            motion,
            seed::derive(seed, "sgfs", round as u64),
        ) {
            Ok(res) => {
                if res.relocated.is_empty() {
                    // the relaxed task is already open; nothing left to relocate
                    if reachable {
                        break;
                    }
                    continue;
                }
                for ((id, pose), plan) in res.relocated.iter().zip(res.plans) {
                    out.notes
                        .push(format!("{object_id}: relocated {id} to ({:.3}, {:.3})", pose.x, pose.y));
                    if scene.goals.contains_key(id) {
                        if placed.contains(id) {
                            out.notes
                                .push(format!("{object_id}: displaced placed goal object {id}"));
                        }
                        out.relocated_goals.push(id.clone());
                    }
                    out.steps.push(PlanStep {
                        object_id: id.clone(),
                        kind: StepKind::Relocate,
                        for_object: object_id.to_string(),
                        generation: 0,
                        plan,
                    });
                }
                out.notes.extend(res.trace);
                out.scene = res.scene;
            }
            Err(e) => {
                out.notes.push(format!("{object_id}: {e}"));
                break;
            }
        }
    }
    Ok(out)
}

fn motion_to_world(e: MotionError) -> PlannerError {
    match e {
        MotionError::World(w) => w.into(),
        other => PlannerError::World(crate::error::WorldError::InvalidScene(other.to_string())),
    }
}

/// A fresh order over the goal objects not yet placed. Falls back to id
/// order when sequencing itself fails.
fn regenerate(
    x: &Scene,
    config: &PlannerConfig,
    generations: &mut usize,
    time: &mut f64,
    events: &mut Vec<String>,
) -> Vec<String> {
    let t = Instant::now();
    let sd = seed::derive(config.seed, "sequence", *generations as u64);
    *generations += 1;
    let order = match gen_obj_place_seq(x, &config.motion, &config.sequencer, sd) {
        Ok(s) => s.order,
        Err(e) => {
            events.push(format!("sequencing failed: {e}"));
            let placed = placed_objects(x);
            x.goals.keys().filter(|id| !placed.contains(*id)).cloned().collect()
        }
    };
    *time += t.elapsed().as_secs_f64();
    events.push(format!("sequence {}: {}", *generations - 1, order.join(" ")));
    order
}

/// The full rearrangement loop.
///
/// Objects are planned in sequence order. A success resets the skip counter
/// and, when a goal object was relocated along the way, triggers a fresh
/// sequence. Failures are skipped until more than `|goals| / 4` of them pile
/// up, which also triggers a fresh sequence. At most `|goals| + 1` passes run.
pub fn mo_segman(scene: &Scene, config: &PlannerConfig) -> Result<PlanResult, PlannerError> {
    if scene.goals.is_empty() {
        return Err(PlannerError::NoGoals);
    }
    let started = Instant::now();
    let deadline = started + Duration::from_secs_f64(config.time_limit.max(0.0));
    let n = scene.goals.len();
    let skip_max = n / config.skip_max_divisor.max(1);
    let iter_max = n + config.iter_max_offset;
    let mut events = Vec::new();
    let mut sequence_time = 0.0;
    let mut generations = 0usize;

    let mut x = scene.clone();
    let mut steps: Vec<PlanStep> = Vec::new();
    let mut failed = 0usize;
    let mut goal_relocations = 0usize;
    let mut attempts = 0u64;
    let mut skip = 0usize;
    let mut iter = 0usize;
    let mut timed_out = false;
    let mut s = regenerate(&x, config, &mut generations, &mut sequence_time, &mut events);
    let mut placed = placed_objects(&x);

    'outer: while placed.len() != n && iter < iter_max {
        iter += 1;
        for o in s.clone() {
            if Instant::now() >= deadline {
                timed_out = true;
                break 'outer;
            }
            if placed.contains(&o) {
                continue;
            }
            let generation = generations - 1;
            let attempt = gen_motion_plan(
                &x,
                &o,
                &placed,
                config,
                seed::derive(config.seed, "object", attempts),
                Some(deadline),
            )?;
            attempts += 1;
            events.extend(attempt.notes);
            steps.extend(attempt.steps.into_iter().map(|mut st| {
                st.generation = generation;
                st
            }));
            x = attempt.scene;
            placed = placed_objects(&x);
            goal_relocations += attempt.relocated_goals.len();
            if attempt.timed_out {
                timed_out = true;
                break 'outer;
            }
            if attempt.placed {
                skip = 0;
                events.push(format!("placed {o}"));
                if !attempt.relocated_goals.is_empty() {
                    s = regenerate(&x, config, &mut generations, &mut sequence_time, &mut events);
                    break;
                }
            } else {
                failed += 1;
                skip += 1;
                events.push(format!("skipped {o} ({skip}/{skip_max})"));
                if skip > skip_max {
                    skip = 0;
                    s = regenerate(&x, config, &mut generations, &mut sequence_time, &mut events);
                    break;
                }
            }
        }
    }

    let status = if placed.len() == n {
        Status::Success
    } else if timed_out {
        Status::Timeout
    } else {
        Status::IterExhausted
    };
    let mut metrics = count_metrics(&steps, failed, generations);
    metrics.goal_relocations = goal_relocations;
    metrics.sequence_time = sequence_time;
    metrics.wall_time = started.elapsed().as_secs_f64();
    Ok(PlanResult {
        status,
        initial: scene.clone(),
        final_scene: x,
        steps,
        metrics,
        events,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::world::{Body, BodyKind, Pose2, Rect, Size};

    fn room(extra: Vec<Body>, goal: Pose2) -> Scene {
        let mut bodies = vec![
            Body::new("robot", BodyKind::Robot, Size::new(0.5, 0.5), Pose2::new(0.5, 0.5)),
            Body::new("box", BodyKind::GoalObject, Size::new(0.5, 0.5), Pose2::new(2.0, 2.0)),
        ];
        bodies.extend(extra);
        let goals = BTreeMap::from([("box".to_string(), goal)]);
        Scene::new(Rect::from_bounds(0.0, 0.0, 8.0, 8.0), bodies, goals, 0).unwrap()
    }

    #[test]
    fn empty_metrics_are_zero() {
        let m = count_metrics(&[], 0, 1);
        assert_eq!((m.pnp_count, m.replanning_count, m.travel_distance), (0, 0, 0.0));
        assert_eq!(count_metrics(&[], 2, 2).replanning_count, 3);
    }

    #[test]
    fn already_placed_is_success_without_motion() {
        let s = room(vec![], Pose2::new(2.0, 2.0));
        let r = mo_segman(&s, &PlannerConfig::default()).unwrap();
        assert_eq!(r.status, Status::Success);
        assert!(r.steps.is_empty());
        assert_eq!(r.metrics.pnp_count, 0);
    }

    #[test]
    fn free_scene_needs_no_relocation() {
        let s = room(vec![], Pose2::new(6.0, 5.0));
        let a = gen_motion_plan(&s, "box", &BTreeSet::new(), &PlannerConfig::default(), 3, None).unwrap();
        assert!(a.placed);
        assert_eq!(a.steps.len(), 1);
        assert_eq!(a.steps[0].kind, StepKind::Place);
        assert_eq!(replay(&s, &a.steps).unwrap(), a.scene);
    }

    #[test]
    fn walled_goal_is_infeasible() {
        let walls = vec![
            Body::new("n", BodyKind::StaticWall, Size::new(1.2, 0.2), Pose2::new(6.0, 6.5)),
            Body::new("s", BodyKind::StaticWall, Size::new(1.2, 0.2), Pose2::new(6.0, 5.5)),
            Body::new("e", BodyKind::StaticWall, Size::new(0.2, 0.8), Pose2::new(6.5, 6.0)),
            Body::new("w", BodyKind::StaticWall, Size::new(0.2, 0.8), Pose2::new(5.5, 6.0)),
        ];
        let s = room(walls, Pose2::new(6.0, 6.0));
        let a = gen_motion_plan(&s, "box", &BTreeSet::new(), &PlannerConfig::default(), 3, None).unwrap();
        assert!(!a.placed);
        let r = mo_segman(&s, &PlannerConfig::default()).unwrap();
        assert_eq!(r.status, Status::IterExhausted);
    }

    #[test]
    fn skip_and_pass_limits() {
        let c = PlannerConfig::default();
        let n = 4;
        assert_eq!(n / c.skip_max_divisor, 1);
        assert_eq!(n + c.iter_max_offset, 5);
    }
}
