//! Bi-directional RRT (connect variant) with shortcut smoothing.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::world::{CSpace, Footprint, Pose2, Scene};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RrtError {
    #[error("start configuration is in collision")]
    StartInCollision,
    #[error("goal configuration is in collision")]
    GoalInCollision,
    #[error("start and goal lie in different free-space components")]
    Disconnected,
    #[error("no connection found within the iteration limit")]
    IterationLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RrtParams {
    pub goal_bias: f64,
    /// Extension step in meters.
    pub step: f64,
    pub max_iters: usize,
    pub shortcut_attempts: usize,
}

impl RrtParams {
    pub fn for_robot_side(side: f64) -> Self {
        Self {
            goal_bias: 0.1,
            step: 0.5 * side,
            max_iters: 5000,
            shortcut_attempts: 100,
        }
    }
}

/// Polyline through configuration space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub waypoints: Vec<Pose2>,
    pub length: f64,
}

impl Path {
    /// Builds a path; a single waypoint is doubled so every path has two.
    pub fn new(mut waypoints: Vec<Pose2>) -> Self {
        assert!(!waypoints.is_empty(), "path without waypoints");
        if waypoints.len() == 1 {
            waypoints.push(waypoints[0]);
        }
        let length = polyline_length(&waypoints);
        Self { waypoints, length }
    }

    pub fn start(&self) -> Pose2 {
        self.waypoints[0]
    }

    pub fn end(&self) -> Pose2 {
        *self.waypoints.last().expect("non-empty")
    }

    /// Point at arc length `s` (clamped).
    pub fn point_at(&self, s: f64) -> Pose2 {
        point_at(&self.waypoints, s)
    }
}

pub fn polyline_length(w: &[Pose2]) -> f64 {
    w.windows(2).map(|p| p[0].dist(p[1])).sum()
}

pub fn point_at(w: &[Pose2], s: f64) -> Pose2 {
    let mut left = s.max(0.0);
    for seg in w.windows(2) {
        let d = seg[0].dist(seg[1]);
        if left <= d {
            if d == 0.0 {
                return seg[0];
            }
            return seg[0].lerp(seg[1], left / d);
        }
        left -= d;
    }
    *w.last().expect("non-empty polyline")
}

struct Tree {
    nodes: Vec<Pose2>,
    parent: Vec<usize>,
}

enum Extend {
    Reached(usize),
    Advanced(usize),
    Trapped,
}

impl Tree {
    fn new(root: Pose2) -> Self {
        Self {
            nodes: vec![root],
            parent: vec![0],
        }
    }

    fn nearest(&self, q: Pose2) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, n) in self.nodes.iter().enumerate() {
            let d = (n.x - q.x).powi(2) + (n.y - q.y).powi(2);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    fn extend(&mut self, space: &CSpace, q: Pose2, step: f64) -> Extend {
        let n = self.nearest(q);
        let from = self.nodes[n];
        let d = from.dist(q);
        let (new, reached) = if d <= step {
            (q, true)
        } else {
            (from.lerp(q, step / d), false)
        };
        if !space.segment_free(from, new) {
            return Extend::Trapped;
        }
        self.nodes.push(new);
        self.parent.push(n);
        let idx = self.nodes.len() - 1;
        if reached {
            Extend::Reached(idx)
        } else {
            Extend::Advanced(idx)
        }
    }

    fn branch(&self, mut i: usize) -> Vec<Pose2> {
        let mut out = vec![self.nodes[i]];
        while i != 0 {
            i = self.parent[i];
            out.push(self.nodes[i]);
        }
        out
    }
}

/// Plans a collision-free path for the footprint described by `space`.
///
/// A free straight segment is returned directly; start and goal in different
/// components of free space fail fast with [`RrtError::Disconnected`].
/// Deterministic for a fixed seed.
pub fn birrt(space: &CSpace, start: Pose2, goal: Pose2, params: &RrtParams, seed: u64) -> Result<Path, RrtError> {
    if !space.point_free(start) {
        return Err(RrtError::StartInCollision);
    }
    if !space.point_free(goal) {
        return Err(RrtError::GoalInCollision);
    }
    if space.segment_free(start, goal) {
        return Ok(Path::new(vec![start, goal]));
    }
    if !space.connected(start, goal) {
        return Err(RrtError::Disconnected);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bounds = space.bounds();
    let mut ta = Tree::new(start);
    let mut tb = Tree::new(goal);
    let mut a_is_start = true;
    for _ in 0..params.max_iters {
        let q = if rng.gen::<f64>() < params.goal_bias {
            tb.nodes[0]
        } else {
            Pose2::new(
                rng.gen_range(bounds.min.x..=bounds.max.x),
                rng.gen_range(bounds.min.y..=bounds.max.y),
            )
        };
        let new = match ta.extend(space, q, params.step) {
            Extend::Reached(i) | Extend::Advanced(i) => Some(i),
            Extend::Trapped => None,
        };
        if let Some(i) = new {
            let target = ta.nodes[i];
            loop {
                match tb.extend(space, target, params.step) {
                    Extend::Reached(j) => {
                        let (s_tree, s_idx, g_tree, g_idx) =
                            if a_is_start { (&ta, i, &tb, j) } else { (&tb, j, &ta, i) };
                        let mut w = s_tree.branch(s_idx);
                        w.reverse();
                        let tail = g_tree.branch(g_idx);
                        w.extend(tail.into_iter().skip(1));
                        let w = smooth(space, w, params.shortcut_attempts, &mut rng);
                        return Ok(Path::new(w));
                    }
                    Extend::Advanced(_) => continue,
                    Extend::Trapped => break,
                }
            }
        }
        std::mem::swap(&mut ta, &mut tb);
        a_is_start = !a_is_start;
    }
    Err(RrtError::IterationLimit)
}

/// Random partial shortcuts between points on the path, then a greedy
/// farthest-visible pass. Endpoints are never moved.
fn smooth(space: &CSpace, mut w: Vec<Pose2>, attempts: usize, rng: &mut ChaCha8Rng) -> Vec<Pose2> {
    w.dedup_by(|a, b| a.dist(*b) < 1e-12);
    for _ in 0..attempts {
        let total = polyline_length(&w);
        if w.len() < 3 || total <= 0.0 {
            break;
        }
        let mut s1 = rng.gen_range(0.0..total);
        let mut s2 = rng.gen_range(0.0..total);
        if s1 > s2 {
            std::mem::swap(&mut s1, &mut s2);
        }
        let (i1, p1) = locate(&w, s1);
        let (i2, p2) = locate(&w, s2);
        if i2 <= i1 {
            continue;
        }
        if !space.segment_free(p1, p2) {
            continue;
        }
        // w[..=i1], p1, p2, w[i2+1..]
        let mut next: Vec<Pose2> = w[..=i1].to_vec();
        next.push(p1);
        next.push(p2);
        next.extend_from_slice(&w[i2 + 1..]);
        next.dedup_by(|a, b| a.dist(*b) < 1e-12);
        if polyline_length(&next) < total {
            w = next;
        }
    }
    let mut out = vec![w[0]];
    let mut i = 0;
    while i + 1 < w.len() {
        let mut j = w.len() - 1;
        while j > i + 1 && !space.segment_free(w[i], w[j]) {
            j -= 1;
        }
        out.push(w[j]);
        i = j;
    }
    out
}

/// Segment index and point at arc length `s`.
fn locate(w: &[Pose2], s: f64) -> (usize, Pose2) {
    let mut left = s;
    for (i, seg) in w.windows(2).enumerate() {
        let d = seg[0].dist(seg[1]);
        if left <= d {
            let t = if d > 0.0 { left / d } else { 0.0 };
            return (i, seg[0].lerp(seg[1], t));
        }
        left -= d;
    }
    (w.len() - 2, w[w.len() - 1])
}

/// Convenience wrapper: plans for `footprint` in `scene`, skipping `ignore`
/// and the robot.
pub fn birrt_in_scene(
    scene: &Scene,
    footprint: &Footprint,
    ignore: &BTreeSet<String>,
    start: Pose2,
    goal: Pose2,
    params: &RrtParams,
    seed: u64,
) -> Result<Path, RrtError> {
    let space = CSpace::new(scene, footprint, ignore, false);
    birrt(&space, start, goal, params, seed)
}
