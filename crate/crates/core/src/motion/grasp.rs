//! Side grasps: the robot sits flush against one face of the object.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::MotionError;
use crate::world::{CSpace, Footprint, Pose2, Rect, Scene, Size};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    N,
    E,
    S,
    W,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::N, Side::E, Side::S, Side::W];

    fn unit(self) -> Pose2 {
        match self {
            Side::N => Pose2::new(0.0, 1.0),
            Side::E => Pose2::new(1.0, 0.0),
            Side::S => Pose2::new(0.0, -1.0),
            Side::W => Pose2::new(-1.0, 0.0),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Side::N => "N",
            Side::E => "E",
            Side::S => "S",
            Side::W => "W",
        };
        f.write_str(s)
    }
}

/// Robot center relative to the object center when grasping on `side`.
pub fn grasp_offset(object: Size, robot: Size, side: Side) -> Pose2 {
    let u = side.unit();
    Pose2::new(u.x * 0.5 * (object.w + robot.w), u.y * 0.5 * (object.h + robot.h))
}

/// Midpoint of the grasped face relative to the object center.
pub fn contact_offset(object: Size, side: Side) -> Pose2 {
    let u = side.unit();
    Pose2::new(u.x * 0.5 * object.w, u.y * 0.5 * object.h)
}

/// Object pose plus the face the robot pushes on to get there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Subgoal {
    pub object_pose: Pose2,
    pub contact_point: Pose2,
    pub grasp_side: Side,
}

impl Subgoal {
    pub fn new(object_pose: Pose2, object: Size, side: Side) -> Self {
        Self {
            object_pose,
            contact_point: object_pose + contact_offset(object, side),
            grasp_side: side,
        }
    }
}

/// The robot, grasping `object_id` at `object_pose` on `side`, stays inside
/// the workspace and clear of every other body.
pub fn robot_fits(scene: &Scene, object_id: &str, object_pose: Pose2, side: Side) -> Result<bool, MotionError> {
    let obj = scene.try_body(object_id)?;
    let robot = scene.robot();
    let r = Rect::centered(object_pose + grasp_offset(obj.size, robot.size, side), robot.size);
    if !scene.workspace.contains_rect(&r) {
        return Ok(false);
    }
    Ok(!scene
        .bodies
        .iter()
        .filter(|b| b.id != object_id && b.id != robot.id)
        .any(|b| b.rect().overlaps(&r)))
}

/// Configuration space of the robot alone (the robot itself is not an obstacle).
pub fn robot_space(scene: &Scene) -> CSpace {
    CSpace::new(scene, &Footprint::rect(scene.robot_size()), &BTreeSet::new(), false)
}

/// Configuration space of the object carried on `side`, reference point at
/// the object center.
pub fn carry_space(scene: &Scene, object_id: &str, side: Side) -> Result<CSpace, MotionError> {
    let obj = scene.try_body(object_id)?;
    let robot = scene.robot_size();
    let fp = Footprint::carried(obj.size, robot, grasp_offset(obj.size, robot, side));
    let ignore = BTreeSet::from([object_id.to_string()]);
    Ok(CSpace::new(scene, &fp, &ignore, false))
}

/// Grasp sides on the object's current pose that the robot can fit at and
/// reach, `preferred` first and the rest by distance from the robot.
pub fn reachable_sides(scene: &Scene, object_id: &str, preferred: Option<Side>) -> Result<Vec<Side>, MotionError> {
    let obj = scene.try_body(object_id)?;
    if !obj.kind.is_movable() {
        return Err(MotionError::NotMovable(object_id.to_string()));
    }
    let robot = scene.robot();
    let space = robot_space(scene);
    let mut sides = Vec::new();
    for side in Side::ALL {
        if !robot_fits(scene, object_id, obj.pose, side)? {
            continue;
        }
        let g = obj.pose + grasp_offset(obj.size, robot.size, side);
        if space.connected(robot.pose, g) {
            let d = robot.pose.dist(g);
            sides.push((Some(side) != preferred, d, side));
        }
    }
    sides.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
    Ok(sides.into_iter().map(|s| s.2).collect())
}

/// First reachable grasp on the object's current pose.
pub fn solve_pick_config(scene: &Scene, object_id: &str, preferred: Option<Side>) -> Result<Subgoal, MotionError> {
    let side = *reachable_sides(scene, object_id, preferred)?
        .first()
        .ok_or_else(|| MotionError::NoGrasp(object_id.to_string()))?;
    let obj = scene.try_body(object_id)?;
    Ok(Subgoal::new(obj.pose, obj.size, side))
}
