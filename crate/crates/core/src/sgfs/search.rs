//! Critical-set selection and the best-first relocation search.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::reloc::{relocation_points_excluding, RelocationParams};
use super::score::{decay_weight, expand_crit, score_node, score_scene, weight_objects, ObjectWeights};
use super::task::{find_colliding, pick_task, relaxed_place_cells, task_feasible, TaskTrajectory};
use crate::error::SgfsError;
use crate::motion::{move_object, reachable_sides, MotionParams, MotionPlan};
use crate::seed;
use crate::world::{GridFrame, Pose2, RasterParams, Scene};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SgfsConfig {
    /// Exploration weight.
    pub c0: f64,
    /// Most relocation candidates per object and expansion.
    pub k_max: usize,
    /// Node list size.
    pub beam: usize,
    pub iter_limit: usize,
    /// Minimum relocation clearance, in cells.
    pub clearance_min: f64,
    /// Expansions without a better node before the critical set grows.
    pub stall_limit: usize,
    /// Use the growing exploration term `c0 * sqrt(visits)`.
    pub literal_exploration: bool,
    pub window_factor: f64,
    /// Alternative critical sets tried before giving up.
    pub alt_crit_limit: usize,
    /// Largest subset size tried exhaustively.
    pub max_crit_cardinality: usize,
    pub raster: RasterParams,
    pub trace: bool,
}

impl Default for SgfsConfig {
    fn default() -> Self {
        Self {
            c0: 50.0,
            k_max: 4,
            beam: 6,
            iter_limit: 12,
            clearance_min: 1.0,
            stall_limit: 3,
            literal_exploration: false,
            window_factor: 3.0,
            alt_crit_limit: 3,
            max_crit_cardinality: 4,
            raster: RasterParams::default(),
            trace: false,
        }
    }
}

impl SgfsConfig {
    pub fn frame(&self, scene: &Scene) -> GridFrame {
        GridFrame::for_workspace(&scene.workspace, self.raster.grid_cells)
    }

    fn relocation(&self) -> RelocationParams {
        RelocationParams {
            grid_cells: self.raster.grid_cells,
            window_factor: self.window_factor,
            clearance_min: self.clearance_min,
        }
    }
}

/// Node of the search: relocations applied to the root scene so far.
#[derive(Debug, Clone)]
pub struct SearchNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub relocation_set: Vec<(String, Pose2)>,
    /// Critical objects this node still has to move.
    pub pending: Vec<String>,
    pub plans: Vec<MotionPlan>,
    pub scene: Scene,
    pub scene_score: f64,
    pub visits: u32,
}

#[derive(Debug, Clone)]
pub struct SgfsOutcome {
    /// One plan per relocation, in execution order.
    pub plans: Vec<MotionPlan>,
    pub relocated: Vec<(String, Pose2)>,
    pub scene: Scene,
    pub o_crit: Vec<String>,
    pub expansions: usize,
    /// Objects added to the critical set during the search.
    pub crit_added: Vec<String>,
    pub trace: Vec<String>,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Smallest subsets of `o_col` whose removal makes the task feasible, by
/// increasing size and then in sweep order; returns the `skip_count`-th one
/// found (counting from zero). Sizes above `max_card` are not enumerated;
/// instead blockers are removed one by one in sweep order.
pub fn select_critical(
    scene: &Scene,
    task: &TaskTrajectory,
    o_col: &[String],
    skip_count: usize,
    max_card: usize,
    motion: &MotionParams,
) -> Result<Vec<String>, SgfsError> {
    let mut found = 0;
    let feasible_without = |ids: &[String]| task_feasible(&scene.without(ids.iter().map(String::as_str)), task, motion);
    for card in 1..=o_col.len().min(max_card) {
        for idx in subsets(o_col.len(), card) {
            let cand: Vec<String> = idx.iter().map(|&i| o_col[i].clone()).collect();
            if feasible_without(&cand) {
                if found == skip_count {
                    return Ok(cand);
                }
                found += 1;
            }
        }
    }
    if o_col.len() > max_card {
        for end in max_card + 1..=o_col.len() {
            if feasible_without(&o_col[..end]) {
                if found == skip_count {
                    return Ok(o_col[..end].to_vec());
                }
                break;
            }
        }
    }
    if found > 0 {
        Err(SgfsError::Exhausted(task.object_id.clone()))
    } else {
        Err(SgfsError::StaticBlockage(task.object_id.clone()))
    }
}

/// Relocates obstructing objects until the task becomes feasible.
///
/// Alternative critical sets are tried in turn. An already feasible task
/// returns at once with no relocations.
pub fn sgfs(
    scene: &Scene,
    task: &TaskTrajectory,
    cfg: &SgfsConfig,
    motion: &MotionParams,
    seed: u64,
) -> Result<SgfsOutcome, SgfsError> {
    if task_feasible(scene, task, motion) {
        return Ok(SgfsOutcome {
            plans: Vec::new(),
            relocated: Vec::new(),
            scene: scene.clone(),
            o_crit: Vec::new(),
            expansions: 0,
            crit_added: Vec::new(),
            trace: Vec::new(),
        });
    }
    let frame = cfg.frame(scene);
    let o_col = find_colliding(scene, task, &frame);
    let mut last_err = SgfsError::StaticBlockage(task.object_id.clone());
    for alt in 0..cfg.alt_crit_limit.max(1) {
        let o_crit = match select_critical(scene, task, &o_col, alt, cfg.max_crit_cardinality, motion) {
            Ok(c) => c,
            Err(e) => {
                if alt == 0 {
                    return Err(e);
                }
                break;
            }
        };
        match search(scene, task, o_crit, cfg, motion, seed::derive(seed, "sgfs", alt as u64)) {
            Some(out) => return Ok(out),
            None => last_err = SgfsError::Exhausted(task.object_id.clone()),
        }
    }
    Err(last_err)
}

/// Movables other than `skip` lying on `cells`.
fn occupants(scene: &Scene, frame: &GridFrame, cells: &[crate::world::Cell], skip: &[&str]) -> Vec<String> {
    let mut out = Vec::new();
    for b in scene.movables().filter(|b| !skip.contains(&b.id.as_str())) {
        if cells.iter().any(|c| frame.cell_rect(*c).overlaps(&b.rect())) {
            out.push(b.id.clone());
        }
    }
    out
}

fn search(
    root_scene: &Scene,
    task: &TaskTrajectory,
    mut o_crit: Vec<String>,
    cfg: &SgfsConfig,
    motion: &MotionParams,
    seed: u64,
) -> Option<SgfsOutcome> {
    let frame = cfg.frame(root_scene);
    let task_cells = task.cell_set();
    let reloc = cfg.relocation();
    let mut weights: ObjectWeights = weight_objects(root_scene, &o_crit, task, &cfg.raster);
    let mut trace = Vec::new();
    let tracing = cfg.trace || log::log_enabled!(log::Level::Debug);
    let mut crit_added = Vec::new();
    let mut nodes = vec![SearchNode {
        id: 0,
        parent: None,
        relocation_set: Vec::new(),
        pending: o_crit.clone(),
        plans: Vec::new(),
        scene: root_scene.clone(),
        scene_score: score_scene(root_scene, task, &cfg.raster),
        visits: 0,
    }];
    let mut open: Vec<usize> = vec![0];
    // relocation targets already tried from each node
    let mut tried: Vec<BTreeSet<(String, (u64, u64))>> = vec![BTreeSet::new()];
    let mut best_seen = nodes[0].scene_score;
    let mut stall = 0usize;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let node_score = |n: &SearchNode| score_node(n.scene_score, n.visits, cfg.c0, cfg.literal_exploration);

    for it in 0..cfg.iter_limit {
        let Some(&pick) = open
            .iter()
            .max_by(|&&a, &&b| node_score(&nodes[a]).total_cmp(&node_score(&nodes[b])).then(b.cmp(&a)))
        else {
            break;
        };
        nodes[pick].visits += 1;
        let parent = nodes[pick].clone();
        let mut children: Vec<SearchNode> = Vec::new();
        let mut gains: BTreeMap<String, f64> = BTreeMap::new();
        let mut proposed = 0usize;
        let mut line = String::new();
        if tracing {
            let _ = write!(
                line,
                "expand iter={it} node={} scene_score={:.3} visits={} crit={:?}",
                parent.id, parent.scene_score, parent.visits, parent.pending
            );
        }
        for obj in &parent.pending {
            // every pending object keeps at least one candidate: an object
            // whose removal alone frees nothing may matter once others move
            let budget = weights.budget(obj, cfg.k_max).max(1);
            if parent.scene.body(obj).is_none() {
                continue;
            }
            let reachable = reachable_sides(&parent.scene, obj, None)
                .map(|s| !s.is_empty())
                .unwrap_or(false);
            if !reachable {
                // whatever stands on the relaxed approach is in the way
                if let Ok(Some(pt)) = pick_task(
                    &parent.scene,
                    obj,
                    &frame,
                    motion,
                    seed::derive(seed, "reach", it as u64),
                ) {
                    for id in occupants(&parent.scene, &frame, &pt.cells, &[obj, &task.object_id]) {
                        *counts.entry(id).or_default() += 1;
                    }
                }
                continue;
            }
            let seen: BTreeSet<(u64, u64)> = tried[parent.id]
                .iter()
                .filter(|(o, _)| o == obj)
                .map(|(_, b)| *b)
                .collect();
            let cands = relocation_points_excluding(&parent.scene, obj, budget, &task_cells, &reloc, &seen);
            tried[parent.id].extend(cands.iter().map(|c| (obj.clone(), c.target.bits())));
            proposed += cands.len();
            for (ci, cand) in cands.iter().enumerate() {
                let mut h = seed::Fnv::new();
                h.write_u64(it as u64);
                h.write_str(obj);
                h.write_u64(ci as u64);
                let sd = seed::derive(seed, "relocate", h.finish());
                if tracing {
                    let _ = write!(line, " cand={obj}@({:.4},{:.4})", cand.target.x, cand.target.y);
                }
                match move_object(&parent.scene, obj, cand.target, motion, sd) {
                    Ok((plan, next)) => {
                        let s = score_scene(&next, task, &cfg.raster);
                        let gain = gains.entry(obj.clone()).or_insert(f64::NEG_INFINITY);
                        *gain = gain.max(s - parent.scene_score);
                        let mut relocation_set = parent.relocation_set.clone();
                        relocation_set.push((obj.clone(), cand.target));
                        let mut pending: Vec<String> = parent.pending.iter().filter(|p| *p != obj).cloned().collect();
                        if pending.is_empty() {
                            pending = o_crit.clone();
                        }
                        let mut plans = parent.plans.clone();
                        plans.push(plan);
                        children.push(SearchNode {
                            id: 0,
                            parent: Some(parent.id),
                            relocation_set,
                            pending,
                            plans,
                            scene: next,
                            scene_score: s,
                            visits: 0,
                        });
                    }
                    Err(_) => {
                        if let Ok(Some(cells)) =
                            relaxed_place_cells(&parent.scene, obj, cand.target, &frame, motion, sd)
                        {
                            for id in occupants(&parent.scene, &frame, &cells, &[obj, &task.object_id]) {
                                *counts.entry(id).or_default() += 1;
                            }
                        }
                    }
                }
            }
        }
        let max_delta = weights.max_delta;
        for (obj, gain) in &gains {
            decay_weight(&mut weights, obj, *gain, max_delta);
        }
        if weights.revive() {
            log::debug!("sgfs: all weights decayed, reset to uniform");
        }
        children.sort_by(|a, b| b.scene_score.total_cmp(&a.scene_score));
        if tracing {
            let _ = write!(line, " children={}", children.len());
            if let Some(c) = children.first() {
                let _ = write!(line, " best_child={:.3}", c.scene_score);
            }
            log::debug!("sgfs {}: {line}", task.object_id);
            trace.push(std::mem::take(&mut line));
        }
        for child in &children {
            if task_feasible(&child.scene, task, motion) {
                return Some(SgfsOutcome {
                    plans: child.plans.clone(),
                    relocated: child.relocation_set.clone(),
                    scene: child.scene.clone(),
                    o_crit,
                    expansions: it + 1,
                    crit_added,
                    trace,
                });
            }
        }
        let improved = children.first().is_some_and(|c| c.scene_score > best_seen);
        if improved {
            best_seen = children[0].scene_score;
            stall = 0;
        } else {
            stall += 1;
        }
        if proposed == 0 {
            // nothing new to try from here
            open.retain(|&k| k != pick);
        }
        for mut child in children.into_iter().take(cfg.beam) {
            child.id = nodes.len();
            open.push(child.id);
            tried.push(BTreeSet::new());
            nodes.push(child);
        }
        open.sort_by(|&a, &b| node_score(&nodes[b]).total_cmp(&node_score(&nodes[a])).then(a.cmp(&b)));
        open.truncate(cfg.beam);
        if stall >= cfg.stall_limit {
            stall = 0;
            if let Some(added) = expand_crit(&mut o_crit, &mut weights, &counts, root_scene) {
                if tracing {
                    let l = format!("expand_crit iter={it} added={added} counts={counts:?}");
                    log::debug!("sgfs {}: {l}", task.object_id);
                    trace.push(l);
                }
                for &k in &open {
                    nodes[k].pending.push(added.clone());
                }
                crit_added.push(added);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
    }
}
