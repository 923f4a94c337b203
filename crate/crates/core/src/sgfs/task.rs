//! Task trajectories: the leg SGFS has to make feasible.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::MotionError;
use crate::motion::{birrt, grasp_offset, move_object, reachable_sides, robot_space, MotionParams, MotionPlan};
use crate::seed;
use crate::world::{Cell, GridFrame, Pose2, Rect, Scene, Size};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    /// Reach a grasp on the object.
    Pick,
    /// Carry the object to `target`.
    Place,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskTrajectory {
    pub kind: TaskKind,
    pub object_id: String,
    pub target: Pose2,
    /// Seed the feasibility check plans with.
    pub seed: u64,
    /// Swept cells in order of first visit.
    pub cells: Vec<Cell>,
}

impl TaskTrajectory {
    pub fn cell_coords(&self) -> Vec<(i64, i64)> {
        self.cells.iter().map(|&(r, c)| (r as i64, c as i64)).collect()
    }

    pub fn cell_set(&self) -> BTreeSet<Cell> {
        self.cells.iter().copied().collect()
    }
}

/// Cells covered by `parts` as their reference point moves along `waypoints`,
/// appended to `out` in order of first visit.
pub fn sweep_cells(
    frame: &GridFrame,
    parts: &[(Pose2, Size)],
    waypoints: &[Pose2],
    out: &mut Vec<Cell>,
    seen: &mut BTreeSet<Cell>,
) {
    let step = 0.5 * frame.resolution;
    let mut visit = |p: Pose2| {
        for (o, s) in parts {
            for cell in frame.cells_overlapping(&Rect::centered(p + *o, *s)) {
                if seen.insert(cell) {
                    out.push(cell);
                }
            }
        }
    };
    if let Some(first) = waypoints.first() {
        visit(*first);
    }
    for w in waypoints.windows(2) {
        let d = w[0].dist(w[1]);
        let n = (d / step).ceil().max(1.0) as usize;
        for k in 1..=n {
            visit(w[0].lerp(w[1], k as f64 / n as f64));
        }
    }
}

/// Cells swept by a plan: the robot along pick legs, robot and object
/// together along place legs.
pub fn plan_cells(scene: &Scene, plan: &MotionPlan, frame: &GridFrame) -> Vec<Cell> {
    let robot = scene.robot_size();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for pair in &plan.pairs {
        let Some(obj) = scene.body(&pair.object_id) else {
            continue;
        };
        sweep_cells(
            frame,
            &[(Pose2::default(), robot)],
            &pair.pick.waypoints,
            &mut out,
            &mut seen,
        );
        sweep_cells(
            frame,
            &[(Pose2::default(), obj.size), (pair.grasp_offset, robot)],
            &pair.object_path,
            &mut out,
            &mut seen,
        );
    }
    out
}

/// Pick task: the robot's path to a grasp with every other movable ignored.
/// `None` when even that is blocked by walls.
pub fn pick_task(
    scene: &Scene,
    object_id: &str,
    frame: &GridFrame,
    params: &MotionParams,
    seed: u64,
) -> Result<Option<TaskTrajectory>, MotionError> {
    let obj = scene.try_body(object_id)?.clone();
    let relaxed = scene.statics_only(&[object_id]);
    let Some(&side) = reachable_sides(&relaxed, object_id, None)?.first() else {
        return Ok(None);
    };
    let g = obj.pose + grasp_offset(obj.size, scene.robot_size(), side);
    let path = match birrt(
        &robot_space(&relaxed),
        scene.robot_pose(),
        g,
        &params.rrt(scene.robot_side()),
        seed::derive(seed, "relaxed-pick", 0),
    ) {
        Ok(p) => p,
        Err(_) => return Ok(None),
    };
    let mut cells = Vec::new();
    sweep_cells(
        frame,
        &[(Pose2::default(), scene.robot_size())],
        &path.waypoints,
        &mut cells,
        &mut BTreeSet::new(),
    );
    Ok(Some(TaskTrajectory {
        kind: TaskKind::Pick,
        object_id: object_id.to_string(),
        target: obj.pose,
        seed,
        cells,
    }))
}

/// Place task: the full motion pipeline with every other movable ignored.
pub fn place_task(
    scene: &Scene,
    object_id: &str,
    target: Pose2,
    frame: &GridFrame,
    params: &MotionParams,
    seed: u64,
) -> Result<Option<TaskTrajectory>, MotionError> {
    let Some(cells) = relaxed_place_cells(scene, object_id, target, frame, params, seed)? else {
        return Ok(None);
    };
    Ok(Some(TaskTrajectory {
        kind: TaskKind::Place,
        object_id: object_id.to_string(),
        target,
        seed,
        cells,
    }))
}

/// Cells swept when moving `object_id` to `target` among walls only.
pub fn relaxed_place_cells(
    scene: &Scene,
    object_id: &str,
    target: Pose2,
    frame: &GridFrame,
    params: &MotionParams,
    seed: u64,
) -> Result<Option<Vec<Cell>>, MotionError> {
    let relaxed = scene.statics_only(&[object_id]);
    match move_object(&relaxed, object_id, target, params, seed) {
        Ok((plan, _)) => {
            let mut cells = plan_cells(scene, &plan, frame);
            if cells.is_empty() {
                // object already at the target: its own footprint is the task
                let obj = scene.try_body(object_id)?;
                cells = frame.cells_overlapping(&obj.rect_at(target));
            }
            Ok(Some(cells))
        }
        Err(MotionError::World(e)) => Err(e.into()),
        Err(_) => Ok(None),
    }
}

/// Can the task be carried out in `scene` as it stands?
pub fn task_feasible(scene: &Scene, task: &TaskTrajectory, params: &MotionParams) -> bool {
    match task.kind {
        TaskKind::Pick => reachable_sides(scene, &task.object_id, None).is_ok_and(|s| !s.is_empty()),
        TaskKind::Place => move_object(scene, &task.object_id, task.target, params, task.seed).is_ok(),
    }
}

/// Movable bodies (other than the task object) over the task cells, in order
/// of first contact along the sweep.
pub fn find_colliding(scene: &Scene, task: &TaskTrajectory, frame: &GridFrame) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let movables: Vec<_> = scene.movables().filter(|b| b.id != task.object_id).collect();
    for &cell in &task.cells {
        let r = frame.cell_rect(cell);
        for b in &movables {
            if !out.contains(&b.id) && b.rect().overlaps(&r) {
                out.push(b.id.clone());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::world::{Body, BodyKind};

    fn corridor(blockers: &[(f64, f64)]) -> Scene {
        let mut bodies = vec![
            Body::new("top", BodyKind::StaticWall, Size::new(6.0, 0.2), Pose2::new(4.0, 4.6)),
            Body::new(
                "bottom",
                BodyKind::StaticWall,
                Size::new(6.0, 0.2),
                Pose2::new(4.0, 3.4),
            ),
            Body::new("robot", BodyKind::Robot, Size::new(0.5, 0.5), Pose2::new(0.4, 4.0)),
            Body::new("box", BodyKind::GoalObject, Size::new(0.5, 0.5), Pose2::new(1.2, 4.0)),
        ];
        for (k, &(x, y)) in blockers.iter().enumerate() {
            bodies.push(Body::new(
                format!("b{k}"),
                BodyKind::MovableObstacle,
                Size::new(0.5, 0.5),
                Pose2::new(x, y),
            ));
        }
        let goals = BTreeMap::from([("box".to_string(), Pose2::new(7.5, 4.0))]);
        Scene::new(Rect::from_bounds(0.0, 0.0, 8.0, 8.0), bodies, goals, 0).unwrap()
    }

    #[test]
    fn free_trajectory_has_no_colliders() {
        let s = corridor(&[]);
        let frame = GridFrame::for_workspace(&s.workspace, 64);
        let p = MotionParams::default();
        let task = place_task(&s, "box", s.goals["box"], &frame, &p, 1).unwrap().unwrap();
        assert!(!task.cells.is_empty());
        assert!(find_colliding(&s, &task, &frame).is_empty());
        assert!(task_feasible(&s, &task, &p));
    }

    #[test]
    fn colliders_come_in_sweep_order() {
        let s = corridor(&[(6.0, 4.0), (3.0, 4.0)]);
        let frame = GridFrame::for_workspace(&s.workspace, 64);
        let p = MotionParams::default();
        let task = place_task(&s, "box", s.goals["box"], &frame, &p, 1).unwrap().unwrap();
        assert_eq!(
            find_colliding(&s, &task, &frame),
            vec!["b1".to_string(), "b0".to_string()]
        );
        assert!(!task_feasible(&s, &task, &p));
    }
}
