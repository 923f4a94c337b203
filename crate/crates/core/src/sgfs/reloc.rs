//! Relocation points for an obstructing object.
//!
//! A window around the object (the local occupancy matrix) is cut from the
//! global raster. Its distance transform gives clearance, and correlating its
//! free cells with the object's cell mask gives the poses where the object
//! fits. Poses on the task cells, on any goal footprint or on the object's
//! current footprint are discarded.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::world::{collides, edt, occupancy_mask, Cell, GridFrame, Pose2, Scene};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelocationCandidate {
    pub object_id: String,
    pub target: Pose2,
    /// Smallest distance (cells) from the placed footprint to an obstacle.
    pub clearance: f64,
    /// Fraction of mask cells that are free; kept candidates have 1.
    pub match_score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelocationParams {
    pub grid_cells: usize,
    /// Window side as a multiple of the object's footprint.
    pub window_factor: f64,
    /// Minimum clearance in cells.
    pub clearance_min: f64,
}

/// Up to `k` candidate poses for `object_id`, best clearance first.
/// A window with no candidate is retried once at twice the size.
pub fn gen_relocation_points(
    scene: &Scene,
    object_id: &str,
    k: usize,
    task_cells: &BTreeSet<Cell>,
    params: &RelocationParams,
) -> Vec<RelocationCandidate> {
    relocation_points_excluding(scene, object_id, k, task_cells, params, &BTreeSet::new())
}

/// As [`gen_relocation_points`], skipping targets in `exclude` (by
/// coordinate bits) so repeated calls can move on to fresh candidates.
pub fn relocation_points_excluding(
    scene: &Scene,
    object_id: &str,
    k: usize,
    task_cells: &BTreeSet<Cell>,
    params: &RelocationParams,
    exclude: &BTreeSet<(u64, u64)>,
) -> Vec<RelocationCandidate> {
    let Some(obj) = scene.body(object_id) else {
        return Vec::new();
    };
    if k == 0 {
        return Vec::new();
    }
    let frame = GridFrame::for_workspace(&scene.workspace, params.grid_cells);
    let occ = occupancy_mask(scene, &frame, &BTreeSet::from([object_id.to_string()]));
    for factor in [params.window_factor, 2.0 * params.window_factor] {
        let out = in_window(scene, object_id, k, task_cells, params, &frame, &occ, factor, exclude);
        if !out.is_empty() {
            return out;
        }
        log::debug!("no relocation point for `{}` in a {factor}x window", obj.id);
    }
    Vec::new()
}

#[allow(clippy::too_many_arguments)]
fn in_window(
    scene: &Scene,
    object_id: &str,
    k: usize,
    task_cells: &BTreeSet<Cell>,
    params: &RelocationParams,
    frame: &GridFrame,
    occ: &[bool],
    factor: f64,
    exclude: &BTreeSet<(u64, u64)>,
) -> Vec<RelocationCandidate> {
    let obj = scene.body(object_id).expect("checked by caller");
    let res = frame.resolution;
    let half = Pose2::new(0.5 * factor * obj.size.w, 0.5 * factor * obj.size.h);
    let (r0, c0) = frame.cell_coords(obj.pose - half);
    let (r1, c1) = frame.cell_coords(obj.pose + half);
    let r0 = r0.max(0);
    let c0 = c0.max(0);
    let r1 = r1.min(frame.rows as i64 - 1);
    let c1 = c1.min(frame.cols as i64 - 1);
    if r1 < r0 || c1 < c0 {
        return Vec::new();
    }
    // local occupancy with a one-cell ring taken from the global raster
    // (outside the workspace counts as occupied)
    let rows = (r1 - r0 + 3) as usize;
    let cols = (c1 - c0 + 3) as usize;
    let mut lom = vec![true; rows * cols];
    for lr in 0..rows {
        for lc in 0..cols {
            let g = (r0 + lr as i64 - 1, c0 + lc as i64 - 1);
            if frame.in_bounds(g) {
                lom[lr * cols + lc] = occ[frame.index((g.0 as usize, g.1 as usize))];
            }
        }
    }
    let clearance = edt(&lom, rows, cols);
    let mh = ((obj.size.h / res) - 1e-9).ceil().max(1.0) as usize;
    let mw = ((obj.size.w / res) - 1e-9).ceil().max(1.0) as usize;
    let goal_rects: Vec<_> = scene.goals.keys().filter_map(|g| scene.goal_rect(g)).collect();
    let ignore_robot = BTreeSet::from([scene.robot().id.clone()]);
    let mut found = Vec::new();
    // anchor = lowest row/col of the mask, inside the window proper
    for ar in 1..rows.saturating_sub(mh) {
        for ac in 1..cols.saturating_sub(mw) {
            if ar + mh > rows - 1 || ac + mw > cols - 1 {
                continue;
            }
            let mut free = 0usize;
            let mut clear = f64::INFINITY;
            let mut on_task = false;
            for dr in 0..mh {
                for dc in 0..mw {
                    let (lr, lc) = (ar + dr, ac + dc);
                    if !lom[lr * cols + lc] {
                        free += 1;
                    }
                    clear = clear.min(clearance.get(lr, lc));
                    let g = ((r0 + lr as i64 - 1) as usize, (c0 + lc as i64 - 1) as usize);
                    on_task |= task_cells.contains(&g);
                }
            }
            let match_score = free as f64 / (mh * mw) as f64;
            if match_score < 1.0 || on_task || clear < params.clearance_min {
                continue;
            }
            let gr = r0 + ar as i64 - 1;
            let gc = c0 + ac as i64 - 1;
            let target = Pose2::new(
                frame.origin.x + (gc as f64 + 0.5 * mw as f64) * res,
                frame.origin.y + (gr as f64 + 0.5 * mh as f64) * res,
            );
            if exclude.contains(&target.bits()) {
                continue;
            }
            let rect = obj.rect_at(target);
            // staying in place (or sliding within its own footprint) is no relocation
            if rect.overlaps(&obj.rect()) {
                continue;
            }
            if goal_rects.iter().any(|g| g.overlaps(&rect)) {
                continue;
            }
            if collides(scene, object_id, target, &ignore_robot).unwrap_or(true) {
                continue;
            }
            found.push(RelocationCandidate {
                object_id: object_id.to_string(),
                target,
                clearance: clear,
                match_score,
            });
        }
    }
    found.sort_by(|a, b| {
        b.clearance
            .total_cmp(&a.clearance)
            .then(a.target.dist(obj.pose).total_cmp(&b.target.dist(obj.pose)))
            .then(a.target.y.total_cmp(&b.target.y))
            .then(a.target.x.total_cmp(&b.target.x))
    });
    // spread the picks out: no two within one object side of each other
    let spacing = obj.size.min_side();
    let mut out: Vec<RelocationCandidate> = Vec::new();
    for c in found {
        if out.len() == k {
            break;
        }
        if out.iter().all(|o| o.target.dist(c.target) >= spacing) {
            out.push(c);
        }
    }
    out
}
