//! Scene scores and relocation weights.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::task::TaskTrajectory;
use crate::world::{rasterize_gom, reachability, RasterParams, Scene};

/// Sum over cells of occupancy weight times reachability weight.
pub fn score_scene(scene: &Scene, task: &TaskTrajectory, params: &RasterParams) -> f64 {
    let gom = rasterize_gom(scene, params, &task.cell_coords());
    let reach = reachability(scene, &gom, params);
    gom.cells.iter().zip(&reach.cells).map(|(m, r)| m * r).sum()
}

/// Exploration bonus for a node visited `visits` times.
///
/// The default shrinks with visits so fresh nodes get explored; `literal`
/// selects the growing form `c0 * sqrt(visits)`.
pub fn exploration(c0: f64, visits: u32, literal: bool) -> f64 {
    if literal {
        c0 * (visits as f64).sqrt()
    } else {
        c0 / (1.0 + visits as f64).sqrt()
    }
}

pub fn score_node(scene_score: f64, visits: u32, c0: f64, literal: bool) -> f64 {
    scene_score + exploration(c0, visits, literal)
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ObjectWeights {
    pub weights: BTreeMap<String, f64>,
    /// Largest score gain seen when weighting, the scale for decay.
    pub max_delta: f64,
}

impl ObjectWeights {
    pub fn get(&self, id: &str) -> f64 {
        self.weights.get(id).copied().unwrap_or(0.0)
    }

    /// Candidates to generate for an object.
    pub fn budget(&self, id: &str, k_max: usize) -> usize {
        ((self.get(id) * k_max as f64).ceil() as usize).min(k_max)
    }

    /// Restores uniform weights if every weight has decayed to zero.
    pub fn revive(&mut self) -> bool {
        if !self.weights.is_empty() && self.weights.values().all(|w| *w <= 0.0) {
            self.weights.values_mut().for_each(|w| *w = 1.0);
            return true;
        }
        false
    }
}

/// Weight of each critical object: score gain from deleting it, relative to
/// the largest gain. No gain anywhere gives uniform weights.
pub fn weight_objects(scene: &Scene, o_crit: &[String], task: &TaskTrajectory, params: &RasterParams) -> ObjectWeights {
    let base = score_scene(scene, task, params);
    let deltas: Vec<(String, f64)> = o_crit
        .iter()
        .map(|id| {
            (
                id.clone(),
                (score_scene(&scene.without([id.as_str()]), task, params) - base).max(0.0),
            )
        })
        .collect();
    let max_delta = deltas.iter().map(|d| d.1).fold(0.0, f64::max);
    let weights = deltas
        .into_iter()
        .map(|(id, d)| (id, if max_delta > 0.0 { d / max_delta } else { 1.0 }))
        .collect();
    ObjectWeights { weights, max_delta }
}

/// Shrinks the relocated object's weight by its share of `max_delta`.
/// Returns `false` (and changes nothing) when `max_delta` is not positive.
pub fn decay_weight(weights: &mut ObjectWeights, relocated_id: &str, delta_score: f64, max_delta: f64) -> bool {
    if max_delta <= 0.0 {
        log::debug!("decay of `{relocated_id}` skipped: non-positive scale");
        return false;
    }
    if let Some(w) = weights.weights.get_mut(relocated_id) {
        *w *= 1.0 - (delta_score / max_delta).clamp(0.0, 1.0);
    }
    true
}

/// Adds the object with the most recorded collisions (ties: larger area,
/// then id) to the critical set, weighted by its area relative to the
/// largest critical object. Returns the added id.
pub fn expand_crit(
    o_crit: &mut Vec<String>,
    weights: &mut ObjectWeights,
    collision_counts: &BTreeMap<String, usize>,
    scene: &Scene,
) -> Option<String> {
    let present: BTreeSet<&String> = o_crit.iter().collect();
    let area = |id: &str| scene.body(id).map_or(0.0, |b| b.size.area());
    let pick = collision_counts
        .iter()
        .filter(|(id, n)| **n > 0 && !present.contains(id) && scene.body(id).is_some_and(|b| b.kind.is_movable()))
        .max_by(|a, b| a.1.cmp(b.1).then(area(a.0).total_cmp(&area(b.0))).then(b.0.cmp(a.0)))?
        .0
        .clone();
    let max_area = o_crit.iter().map(|id| area(id)).fold(0.0, f64::max);
    let w = if max_area > 0.0 {
        (area(&pick) / max_area).clamp(0.0, 1.0)
    } else {
        1.0
    };
    weights.weights.insert(pick.clone(), w);
    o_crit.push(pick.clone());
    Some(pick)
}
