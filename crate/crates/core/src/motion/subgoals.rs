//! Object paths and the subgoals that split them into pick-and-place steps.

use std::collections::BTreeSet;

use super::grasp::{carry_space, grasp_offset, robot_fits, robot_space, Side, Subgoal};
use super::rrt::{birrt, Path};
use super::MotionParams;
use crate::error::MotionError;
use crate::world::{edt, occupancy_mask, CSpace, ClearanceMap, Footprint, GridFrame, Pose2, Scene};

/// Path of the object alone among static walls, ignoring the robot and
/// every other movable.
pub fn plan_object_path(
    scene: &Scene,
    object_id: &str,
    target: Pose2,
    params: &MotionParams,
    seed: u64,
) -> Result<Path, MotionError> {
    let obj = scene.try_body(object_id)?;
    if !obj.kind.is_movable() {
        return Err(MotionError::NotMovable(object_id.to_string()));
    }
    let aux = scene.statics_only(&[]);
    let space = CSpace::new(&aux, &Footprint::rect(obj.size), &BTreeSet::new(), false);
    birrt(&space, obj.pose, target, &params.rrt(scene.robot_side()), seed).map_err(|source| MotionError::ObjectPath {
        object: object_id.to_string(),
        source,
    })
}

/// Path of the object around every other body, the robot excepted.
pub fn plan_object_path_among(
    scene: &Scene,
    object_id: &str,
    target: Pose2,
    params: &MotionParams,
    seed: u64,
) -> Result<Path, MotionError> {
    let obj = scene.try_body(object_id)?;
    if !obj.kind.is_movable() {
        return Err(MotionError::NotMovable(object_id.to_string()));
    }
    let ignore = BTreeSet::from([object_id.to_string()]);
    let space = CSpace::new(scene, &Footprint::rect(obj.size), &ignore, false);
    birrt(&space, obj.pose, target, &params.rrt(scene.robot_side()), seed).map_err(|source| MotionError::ObjectPath {
        object: object_id.to_string(),
        source,
    })
}

/// Distance to the nearest static wall or workspace edge.
pub struct StaticClearance {
    frame: GridFrame,
    map: ClearanceMap,
}

impl StaticClearance {
    pub fn new(scene: &Scene, grid_cells: usize) -> Self {
        let frame = GridFrame::for_workspace(&scene.workspace, grid_cells);
        let aux = scene.statics_only(&[]);
        let inner = occupancy_mask(&aux, &frame, &BTreeSet::new());
        // ring of occupied cells stands in for the workspace boundary
        let (rows, cols) = (frame.rows + 2, frame.cols + 2);
        let mut mask = vec![true; rows * cols];
        for r in 0..frame.rows {
            for c in 0..frame.cols {
                mask[(r + 1) * cols + c + 1] = inner[frame.index((r, c))];
            }
        }
        Self {
            frame,
            map: edt(&mask, rows, cols),
        }
    }

    /// Free distance (meters) around a point, from the wall surface rather
    /// than the nearest occupied cell center.
    pub fn at(&self, p: Pose2) -> f64 {
        let (r, c) = self.frame.cell_of(p);
        let d = self.map.get(r + 1, c + 1);
        ((d - 0.5) * self.frame.resolution).max(0.0)
    }
}

/// Step length along the object path: proportional to clearance, clamped.
pub fn subgoal_step(clearance: f64, params: &MotionParams, robot_side: f64) -> f64 {
    (params.kappa * clearance).clamp(params.step_min_factor * robot_side, params.step_max_factor * robot_side)
}

/// Positions along `mu` spaced by the clearance-adaptive step, starting at
/// the path start and ending exactly at its end.
pub fn subgoal_positions(
    mu: &Path,
    scene: &Scene,
    object_id: &str,
    params: &MotionParams,
) -> Result<Vec<Pose2>, MotionError> {
    Ok(stations(mu, scene, object_id, params)?
        .into_iter()
        .map(|s| point_on(mu, s))
        .collect())
}

/// Exact endpoints at the ends of the path, interpolation in between.
fn point_on(mu: &Path, s: f64) -> Pose2 {
    if s <= 0.0 {
        mu.start()
    } else if s >= mu.length {
        mu.end()
    } else {
        mu.point_at(s)
    }
}

/// Arc lengths of the subgoals along `mu`.
fn stations(mu: &Path, scene: &Scene, object_id: &str, params: &MotionParams) -> Result<Vec<f64>, MotionError> {
    let obj = scene.try_body(object_id)?;
    let clearance = StaticClearance::new(scene, params.clearance_grid);
    let half = 0.5 * obj.size.min_side();
    let side = scene.robot_side();
    let total = mu.length;
    let mut out = vec![0.0];
    if total <= 0.0 {
        return Ok(out);
    }
    let mut s = 0.0;
    loop {
        let here = mu.point_at(s);
        let next = s + subgoal_step((clearance.at(here) - half).max(0.0), params, side);
        if next >= total - 1e-9 {
            break;
        }
        out.push(next);
        s = next;
    }
    out.push(total);
    Ok(out)
}

/// Splits `mu` into subgoals and assigns each step a grasp side.
///
/// Subgoal 0 is the start pose and carries the side of the first step;
/// subgoal k carries the side used to move from k-1 to k. Sides are ranked by
/// a free straight carry, reachability of the regrasp, keeping the previous
/// side, then distance from the robot.
pub fn select_subgoals(
    mu: &Path,
    scene: &Scene,
    object_id: &str,
    params: &MotionParams,
) -> Result<Vec<Subgoal>, MotionError> {
    let obj = scene.try_body(object_id)?.clone();
    let robot = scene.robot_size();
    let mut stations = stations(mu, scene, object_id, params)?;
    let mut positions: Vec<Pose2> = stations.iter().map(|&s| point_on(mu, s)).collect();
    // steps shorter than this are not split further
    let min_split = robot.w.min(robot.h) / 16.0;
    if positions.len() == 1 {
        let side = Side::ALL
            .into_iter()
            .map(|s| Ok((robot_fits(scene, object_id, positions[0], s)?, s)))
            .collect::<Result<Vec<_>, MotionError>>()?
            .into_iter()
            .find(|(fits, _)| *fits)
            .map(|(_, s)| s)
            .ok_or_else(|| MotionError::NoSubgoalSide {
                object: object_id.to_string(),
                index: 0,
            })?;
        return Ok(vec![Subgoal::new(positions[0], obj.size, side)]);
    }
    // split steps until one grasp side covers each, preferring a straight carry
    let fits_at = |pos: Pose2| -> Result<[bool; 4], MotionError> {
        let here = scene.with_pose(object_id, pos);
        let mut out = [false; 4];
        for (i, side) in Side::ALL.into_iter().enumerate() {
            out[i] = robot_fits(&here, object_id, pos, side)?;
        }
        Ok(out)
    };
    let mut fits = positions.iter().map(|&p| fits_at(p)).collect::<Result<Vec<_>, _>>()?;
    let mut k = 1;
    while k < positions.len() {
        let covering: Vec<Side> = (0..4)
            .filter(|&i| fits[k - 1][i] && fits[k][i])
            .map(|i| Side::ALL[i])
            .collect();
        let short = stations[k] - stations[k - 1] <= min_split;
        if short && covering.is_empty() {
            return Err(MotionError::NoSubgoalSide {
                object: object_id.to_string(),
                index: k,
            });
        }
        let accept = !covering.is_empty()
            && (short || {
                let here = scene.with_pose(object_id, positions[k - 1]);
                let mut straight = false;
                for &side in &covering {
                    if carry_space(&here, object_id, side)?.segment_free(positions[k - 1], positions[k]) {
                        straight = true;
                        break;
                    }
                }
                straight
            });
        if accept {
            k += 1;
            continue;
        }
        let mid = 0.5 * (stations[k - 1] + stations[k]);
        let p = point_on(mu, mid);
        stations.insert(k, mid);
        positions.insert(k, p);
        fits.insert(k, fits_at(p)?);
    }

    // cheapest side per step: unreachable regrasps first, then bent carries,
    // then regrasp count, then robot travel between grasps
    type Cost = (u32, u32, u32, f64);
    let add = |a: Cost, b: Cost| (a.0 + b.0, a.1 + b.1, a.2 + b.2, a.3 + b.3);
    let less = |a: &Cost, b: &Cost| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)).then(a.3.total_cmp(&b.3)).is_lt();
    let steps = positions.len() - 1;
    let mut table: Vec<[Option<(Cost, usize)>; 4]> = vec![[None; 4]; steps];
    for k in 0..steps {
        let (from, to) = (positions[k], positions[k + 1]);
        let here = scene.with_pose(object_id, from);
        let space = robot_space(&here);
        for (i, side) in Side::ALL.into_iter().enumerate() {
            if !(fits[k][i] && fits[k + 1][i]) {
                continue;
            }
            let bent = u32::from(!carry_space(&here, object_id, side)?.segment_free(from, to));
            let g = from + grasp_offset(obj.size, robot, side);
            let mut best: Option<(Cost, usize)> = None;
            if k == 0 {
                let start = scene.robot_pose();
                let reach = start == g || space.connected(start, g);
                best = Some(((u32::from(!reach), bent, 0, start.dist(g)), i));
            } else {
                for (j, prev) in Side::ALL.into_iter().enumerate() {
                    let Some((c, _)) = table[k - 1][j] else { continue };
                    let step = if j == i {
                        (0, bent, 0, 0.0)
                    } else {
                        let held = from + grasp_offset(obj.size, robot, prev);
                        (u32::from(!space.connected(held, g)), bent, 1, held.dist(g))
                    };
                    let total = add(c, step);
                    if best.as_ref().is_none_or(|(b, _)| less(&total, b)) {
                        best = Some((total, j));
                    }
                }
            }
            table[k][i] = best;
        }
    }
    let mut last = None;
    for (i, entry) in table[steps - 1].iter().enumerate() {
        if let Some((c, _)) = *entry {
            if last.is_none_or(|(b, _)| less(&c, &b)) {
                last = Some((c, i));
            }
        }
    }
    let Some((_, mut i)) = last else {
        return Err(MotionError::NoSubgoalSide {
            object: object_id.to_string(),
            index: steps,
        });
    };
    let mut sides = vec![Side::N; steps];
    for k in (0..steps).rev() {
        sides[k] = Side::ALL[i];
        i = table[k][i].expect("backtracked state is set").1;
    }
    let mut out = Vec::with_capacity(positions.len());
    out.push(Subgoal::new(positions[0], obj.size, sides[0]));
    for (k, side) in sides.into_iter().enumerate() {
        out.push(Subgoal::new(positions[k + 1], obj.size, side));
    }
    Ok(out)
}

/// Could the object go straight from `prev` to `next` on `next`'s side,
/// with the robot coming from `robot_at`?
fn direct_place_ok(
    scene: &Scene,
    object_id: &str,
    prev: &Subgoal,
    next: &Subgoal,
    robot_at: Pose2,
) -> Result<bool, MotionError> {
    let side = next.grasp_side;
    let here = scene.with_pose(object_id, prev.object_pose);
    if !robot_fits(&here, object_id, prev.object_pose, side)? || !robot_fits(&here, object_id, next.object_pose, side)?
    {
        return Ok(false);
    }
    if !carry_space(&here, object_id, side)?.segment_free(prev.object_pose, next.object_pose) {
        return Ok(false);
    }
    let obj = scene.try_body(object_id)?;
    let g = prev.object_pose + grasp_offset(obj.size, scene.robot_size(), side);
    Ok(robot_at == g || robot_space(&here).connected(robot_at, g))
}

/// Drops interior subgoals whose contact point lies within `epsilon` of the
/// next one, when the object can go straight past them.
pub fn refine_subgoals(
    subgoals: &[Subgoal],
    scene: &Scene,
    object_id: &str,
    epsilon: f64,
) -> Result<Vec<Subgoal>, MotionError> {
    let obj = scene.try_body(object_id)?;
    let robot = scene.robot_size();
    let mut out = subgoals.to_vec();
    let mut i = 1;
    while i + 1 < out.len() {
        if out[i].contact_point.dist(out[i + 1].contact_point) < epsilon {
            let robot_at = if i == 1 {
                scene.robot_pose()
            } else {
                out[i - 1].object_pose + grasp_offset(obj.size, robot, out[i - 1].grasp_side)
            };
            if direct_place_ok(scene, object_id, &out[i - 1], &out[i + 1], robot_at)? {
                out.remove(i);
                if i == 1 {
                    out[0] = Subgoal::new(out[0].object_pose, obj.size, out[1].grasp_side);
                }
                continue;
            }
        }
        i += 1;
    }
    Ok(out)
}
