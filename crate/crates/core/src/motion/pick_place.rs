//! Turning subgoals into robot motions.

use serde::{Deserialize, Serialize};

use super::grasp::{carry_space, grasp_offset, robot_space, Side, Subgoal};
use super::rrt::{birrt, Path};
use super::MotionParams;
use crate::error::MotionError;
use crate::seed;
use crate::world::{default_tolerance, Pose2, Scene};

/// Free approach to the grasp, then a rigid carry of object and robot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PickPlacePair {
    pub object_id: String,
    pub side: Side,
    /// Robot center minus object center during the carry.
    pub grasp_offset: Pose2,
    pub pick: Path,
    /// Robot waypoints while carrying.
    pub place: Path,
    /// Object waypoints matching `place` one to one.
    pub object_path: Vec<Pose2>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MotionPlan {
    pub pairs: Vec<PickPlacePair>,
}

impl MotionPlan {
    pub fn pnp_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn travel_distance(&self) -> f64 {
        self.pairs.iter().map(|p| p.pick.length + p.place.length).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn extend(&mut self, other: MotionPlan) {
        self.pairs.extend(other.pairs);
    }
}

/// Plans one pick-and-place pair per subgoal, starting from the scene's robot
/// pose. Subgoals equal to the object's current pose are skipped, and an
/// object already within tolerance of the last subgoal yields an empty plan.
///
/// Returns the plan and the scene after execution.
pub fn plan_pick_place(
    scene: &Scene,
    object_id: &str,
    subgoals: &[Subgoal],
    params: &MotionParams,
    seed: u64,
) -> Result<(MotionPlan, Scene), MotionError> {
    let obj = scene.try_body(object_id)?.clone();
    if !obj.kind.is_movable() {
        return Err(MotionError::NotMovable(object_id.to_string()));
    }
    let mut cur = scene.clone();
    let mut plan = MotionPlan::default();
    let Some(last) = subgoals.last() else {
        return Ok((plan, cur));
    };
    if obj.pose.dist(last.object_pose) <= default_tolerance(obj.size) {
        return Ok((plan, cur));
    }
    let robot = scene.robot_size();
    let rrt = params.rrt(scene.robot_side());
    for sg in subgoals {
        let pose = cur.try_body(object_id)?.pose;
        if pose == sg.object_pose {
            continue;
        }
        let index = plan.pairs.len();
        let offset = grasp_offset(obj.size, robot, sg.grasp_side);
        let grasp = pose + offset;
        let at = cur.robot_pose();
        let pick = if at == grasp {
            Path::new(vec![at])
        } else {
            birrt(
                &robot_space(&cur),
                at,
                grasp,
                &rrt,
                seed::derive(seed, "pick", index as u64),
            )
            .map_err(|source| MotionError::Pick {
                object: object_id.to_string(),
                index,
                source,
            })?
        };
        let carry = carry_space(&cur, object_id, sg.grasp_side)?;
        let object_path = birrt(
            &carry,
            pose,
            sg.object_pose,
            &rrt,
            seed::derive(seed, "place", index as u64),
        )
        .map_err(|source| MotionError::Place {
            object: object_id.to_string(),
            index,
            source,
        })?
        .waypoints;
        let place = Path::new(object_path.iter().map(|p| *p + offset).collect());
        cur = cur.with_pose(object_id, sg.object_pose).with_robot_pose(place.end());
        plan.pairs.push(PickPlacePair {
            object_id: object_id.to_string(),
            side: sg.grasp_side,
            grasp_offset: offset,
            pick,
            place,
            object_path,
        });
    }
    Ok((plan, cur))
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, BTreeSet};

    use super::*;
    use crate::motion::plan_subgoals;
    use crate::world::{Body, BodyKind, CSpace, Footprint, Rect, Size};

    fn scene() -> Scene {
        let bodies = vec![
            Body::new("wall", BodyKind::StaticWall, Size::new(0.3, 5.0), Pose2::new(4.0, 2.5)),
            Body::new("robot", BodyKind::Robot, Size::new(0.5, 0.5), Pose2::new(7.0, 7.0)),
            Body::new("box", BodyKind::GoalObject, Size::new(0.5, 0.5), Pose2::new(1.5, 1.0)),
        ];
        let goals = BTreeMap::from([("box".to_string(), Pose2::new(6.5, 1.0))]);
        Scene::new(Rect::from_bounds(0.0, 0.0, 8.0, 8.0), bodies, goals, 0).unwrap()
    }

    #[test]
    fn motions_are_continuous_and_free() {
        let s = scene();
        let params = MotionParams::default();
        let sg = plan_subgoals(&s, "box", s.goals["box"], &params, 4).unwrap();
        let (plan, after) = plan_pick_place(&s, "box", &sg, &params, 4).unwrap();
        assert!(!plan.is_empty());
        assert_eq!(after.body("box").unwrap().pose, s.goals["box"]);
        let mut robot_at = s.robot_pose();
        let mut cur = s.clone();
        for pair in &plan.pairs {
            assert_eq!(pair.pick.start().bits(), robot_at.bits());
            assert_eq!(pair.pick.end().bits(), pair.place.start().bits());
            let free = robot_space(&cur);
            for w in pair.pick.waypoints.windows(2) {
                assert!(free.segment_free(w[0], w[1]));
            }
            let fp = Footprint::carried(Size::new(0.5, 0.5), Size::new(0.5, 0.5), pair.grasp_offset);
            let carry = CSpace::new(&cur, &fp, &BTreeSet::from(["box".to_string()]), false);
            for w in pair.object_path.windows(2) {
                assert!(carry.segment_free(w[0], w[1]));
            }
            robot_at = pair.place.end();
            cur = cur
                .with_pose("box", *pair.object_path.last().unwrap())
                .with_robot_pose(robot_at);
        }
    }

    #[test]
    fn object_at_target_needs_nothing() {
        let s = scene();
        let here = s.body("box").unwrap().pose;
        let sg = vec![Subgoal::new(here + Pose2::new(0.05, 0.0), Size::new(0.5, 0.5), Side::W)];
        let (plan, _) = plan_pick_place(&s, "box", &sg, &MotionParams::default(), 0).unwrap();
        assert!(plan.is_empty());
    }
}
