//! Replacing straight-line transition costs by planned robot travel.

use std::collections::HashMap;

use super::patsp::{solve_patsp, CostMatrix};
use crate::error::SequencerError;
use crate::motion::{birrt, grasp_offset, reachable_sides, robot_fits, robot_space, MotionParams, Side};
use crate::seed;
use crate::world::Scene;

/// Robot travel to a grasp on one object.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Travel {
    /// Path length to the grasp pose plus the grasp-to-center distance.
    pub cost: f64,
    pub side: Option<Side>,
}

/// Planned travel costs, cached per scene state and target.
pub struct TravelOracle {
    params: MotionParams,
    seed: u64,
    /// Added to the straight-line distance when no grasp can be reached.
    pub penalty: f64,
    cache: HashMap<(u64, String), Travel>,
    pub hits: usize,
    pub misses: usize,
}

impl TravelOracle {
    pub fn new(params: MotionParams, seed: u64, penalty: f64) -> Self {
        Self {
            params,
            seed,
            penalty,
            cache: HashMap::new(),
            hits: 0,
            misses: 0,
        }
    }

    /// From the scene's robot pose to the nearest reachable grasp on `target`.
    pub fn travel(&mut self, scene: &Scene, target: &str) -> Result<Travel, SequencerError> {
        let key = (scene.signature(), target.to_string());
        if let Some(t) = self.cache.get(&key) {
            self.hits += 1;
            return Ok(*t);
        }
        self.misses += 1;
        let obj = scene.try_body(target)?;
        let robot = scene.robot_pose();
        let fallback = Travel {
            cost: robot.dist(obj.pose) + self.penalty,
            side: None,
        };
        let sides = reachable_sides(scene, target, None).unwrap_or_default();
        let mut out = fallback;
        if let Some(&side) = sides.first() {
            let g = obj.pose + grasp_offset(obj.size, scene.robot_size(), side);
            let rrt = self.params.rrt(scene.robot_side());
            let mut h = seed::Fnv::new();
            h.write_u64(key.0);
            h.write_str(target);
            if let Ok(p) = birrt(
                &robot_space(scene),
                robot,
                g,
                &rrt,
                seed::derive(self.seed, "travel", h.finish()),
            ) {
                out = Travel {
                    cost: p.length + g.dist(obj.pose),
                    side: Some(side),
                };
            }
        }
        self.cache.insert(key, out);
        Ok(out)
    }
}

/// Planned cost of placing `order` (object ids) in turn, per transition.
///
/// The first transition starts at the robot; later ones also pay for the
/// robot leaving the previous goal. After each placement the robot rests
/// flush against the placed object.
pub fn sequence_travel(scene: &Scene, order: &[String], oracle: &mut TravelOracle) -> Result<Vec<f64>, SequencerError> {
    let mut state = scene.clone();
    let mut out = Vec::with_capacity(order.len());
    let mut leave = 0.0;
    for id in order {
        let t = oracle.travel(&state, id)?;
        out.push(leave + t.cost);
        let Some(goal) = scene.goals.get(id).copied() else {
            return Err(SequencerError::Unsolvable(id.clone()));
        };
        let size = state.try_body(id)?.size;
        let placed = state.with_pose(id, goal);
        let mut sides: Vec<Side> = t.side.into_iter().collect();
        sides.extend(Side::ALL.into_iter().filter(|s| Some(*s) != t.side));
        let rest = sides
            .into_iter()
            .find(|s| robot_fits(&placed, id, goal, *s).unwrap_or(false))
            .map(|s| goal + grasp_offset(size, state.robot_size(), s))
            .unwrap_or(state.robot_pose());
        leave = goal.dist(rest);
        state = placed.with_robot_pose(rest);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LazyOutcome {
    pub order: Vec<usize>,
    /// Planned travel cost of `order`.
    pub cost: f64,
    pub rounds: usize,
    pub converged: bool,
}

/// Alternates between planning the travel of the current order and
/// re-solving the ATSP with those costs, until the order repeats or
/// `max_rounds` is hit. Returns the cheapest order whose travel was planned;
/// the initial order is evaluated first, so the result never costs more.
pub fn lazy_refine(
    scene: &Scene,
    ids: &[String],
    prec: &[(usize, usize)],
    euclid: &CostMatrix,
    initial: Vec<usize>,
    oracle: &mut TravelOracle,
    max_rounds: usize,
) -> Result<LazyOutcome, SequencerError> {
    let mut costs = euclid.clone();
    let mut current = initial;
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut evaluate = |order: &[usize], costs: &mut CostMatrix, best: &mut Option<(Vec<usize>, f64)>| {
        let names: Vec<String> = order.iter().map(|&k| ids[k].clone()).collect();
        let per = sequence_travel(scene, &names, oracle)?;
        let mut last = 0;
        for (&k, c) in order.iter().zip(&per) {
            costs.set(last, k + 1, *c);
            last = k + 1;
        }
        let total: f64 = per.iter().sum();
        if best.as_ref().is_none_or(|(_, b)| total < *b) {
            *best = Some((order.to_vec(), total));
        }
        Ok::<(), SequencerError>(())
    };
    let mut rounds = 0;
    let mut converged = false;
    while rounds < max_rounds {
        rounds += 1;
        evaluate(&current, &mut costs, &mut best)?;
        let (next, _) = solve_patsp(&costs, prec)?;
        if next == current {
            converged = true;
            break;
        }
        current = next;
    }
    if !converged {
        evaluate(&current, &mut costs, &mut best)?;
    }
    let (order, cost) = best.expect("at least one order is evaluated");
    Ok(LazyOutcome {
        order,
        cost,
        rounds,
        converged,
    })
}
