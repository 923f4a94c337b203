//! Independent re-execution of a plan against its initial scene.

use std::collections::BTreeSet;

use super::PlanStep;
use crate::error::ReplayError;
use crate::world::{collides, CSpace, Footprint, Scene};

/// Replays `steps` from `initial`, checking that every leg starts where the
/// previous one ended, that the carried object and robot move rigidly, and
/// that no waypoint or segment collides. Returns the final scene.
pub fn replay(initial: &Scene, steps: &[PlanStep]) -> Result<Scene, ReplayError> {
    let mut cur = initial.clone();
    let robot = cur.robot().clone();
    let none = BTreeSet::new();
    for (si, step) in steps.iter().enumerate() {
        for (pi, pair) in step.plan.pairs.iter().enumerate() {
            let disc = |what| ReplayError::Discontinuity {
                step: si,
                pair: pi,
                what,
            };
            let hit = |leg, segment| ReplayError::Collision {
                step: si,
                pair: pi,
                leg,
                segment,
            };
            let obj = cur.try_body(&pair.object_id)?.clone();
            if pair.object_id != step.object_id {
                return Err(disc("object id"));
            }
            if pair.pick.start() != cur.robot_pose() {
                return Err(disc("robot start"));
            }
            if pair.pick.end() != obj.pose + pair.grasp_offset {
                return Err(disc("grasp"));
            }
            if pair.place.start() != pair.pick.end() {
                return Err(disc("pick to place"));
            }
            if pair.object_path.first() != Some(&obj.pose) || pair.object_path.len() != pair.place.waypoints.len() {
                return Err(disc("object path"));
            }
            if pair
                .object_path
                .iter()
                .zip(&pair.place.waypoints)
                .any(|(o, r)| *o + pair.grasp_offset != *r)
            {
                return Err(disc("carry offset"));
            }

            let free = CSpace::new(
                &cur,
                &Footprint::rect(robot.size),
                &BTreeSet::from([robot.id.clone()]),
                false,
            );
            for (k, w) in pair.pick.waypoints.windows(2).enumerate() {
                if collides(&cur, &robot.id, w[0], &none)? || !free.segment_free(w[0], w[1]) {
                    return Err(hit("pick", k));
                }
            }
            if collides(&cur, &robot.id, pair.pick.end(), &none)? {
                return Err(hit("pick", pair.pick.waypoints.len()));
            }

            let fp = Footprint::carried(obj.size, robot.size, pair.grasp_offset);
            let carry = CSpace::new(&cur, &fp, &BTreeSet::from([obj.id.clone()]), false);
            let without_obj = BTreeSet::from([obj.id.clone()]);
            for (k, w) in pair.object_path.windows(2).enumerate() {
                let held = cur.with_pose(&obj.id, w[0]);
                if collides(&held, &obj.id, w[0], &BTreeSet::from([robot.id.clone()]))?
                    || collides(&cur, &robot.id, w[0] + pair.grasp_offset, &without_obj)?
                    || !carry.segment_free(w[0], w[1])
                {
                    return Err(hit("place", k));
                }
            }
            let end = *pair.object_path.last().expect("object path is non-empty");
            cur = cur.with_pose(&obj.id, end).with_robot_pose(pair.place.end());
            if collides(&cur, &obj.id, end, &BTreeSet::from([robot.id.clone()]))?
                || collides(&cur, &robot.id, pair.place.end(), &none)?
            {
                return Err(hit("place", pair.object_path.len()));
            }
        }
    }
    Ok(cur)
}
