//! Open-path asymmetric TSP with precedence constraints.
//!
//! Node 0 is the robot; object `k` is node `k + 1`. A tour starts at the
//! robot, visits every object once and does not return. Costs are summed left
//! to right along the tour.

use std::collections::HashMap;

use crate::error::SequencerError;
use crate::world::Pose2;

/// Largest instance solved exactly.
pub const EXACT_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    n: usize,
    c: Vec<f64>,
}

impl CostMatrix {
    /// `n` objects, all costs zero.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            c: vec![0.0; (n + 1) * (n + 1)],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::new(n);
        for i in 0..=n {
            for j in 0..=n {
                m.c[i * (n + 1) + j] = f(i, j);
            }
        }
        m
    }

    /// Robot to object start, and object goal to next object start.
    pub fn euclidean(robot: Pose2, starts: &[Pose2], goals: &[Pose2]) -> Self {
        assert_eq!(starts.len(), goals.len());
        Self::from_fn(starts.len(), |i, j| match (i, j) {
            (_, 0) => 0.0,
            (0, j) => robot.dist(starts[j - 1]),
            (i, j) if i == j => 0.0,
            (i, j) => goals[i - 1].dist(starts[j - 1]),
        })
    }

    pub fn objects(&self) -> usize {
        self.n
    }

    /// Cost between nodes (0 = robot).
    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.c[from * (self.n + 1) + to]
    }

    pub fn set(&mut self, from: usize, to: usize, v: f64) {
        self.c[from * (self.n + 1) + to] = v;
    }

    /// Cost of visiting objects in `order` (object indices) from the robot.
    pub fn tour_cost(&self, order: &[usize]) -> f64 {
        let mut last = 0;
        let mut total = 0.0;
        for &o in order {
            total += self.get(last, o + 1);
            last = o + 1;
        }
        total
    }
}

/// Precedence pairs `(u, v)`: object `u` comes before object `v`.
pub fn respects(order: &[usize], prec: &[(usize, usize)]) -> bool {
    let mut pos = vec![usize::MAX; order.len()];
    for (k, &o) in order.iter().enumerate() {
        pos[o] = k;
    }
    prec.iter().all(|&(u, v)| pos[u] < pos[v])
}

fn pred_masks(n: usize, prec: &[(usize, usize)]) -> Vec<u64> {
    let mut m = vec![0u64; n];
    for &(u, v) in prec {
        m[v] |= 1 << u;
    }
    m
}

/// Any order satisfying the precedences (smallest index first), or an error
/// if they are cyclic.
pub fn topological(n: usize, prec: &[(usize, usize)]) -> Result<Vec<usize>, SequencerError> {
    let preds = pred_masks(n, prec);
    let mut done = 0u64;
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let next = (0..n)
            .find(|&v| done & (1 << v) == 0 && preds[v] & !done == 0)
            .ok_or(SequencerError::CyclicPrecedence)?;
        done |= 1 << next;
        out.push(next);
    }
    Ok(out)
}

/// Best order: exact for up to [`EXACT_LIMIT`] objects, local search above.
pub fn solve_patsp(cost: &CostMatrix, prec: &[(usize, usize)]) -> Result<(Vec<usize>, f64), SequencerError> {
    if cost.objects() <= EXACT_LIMIT {
        solve_exact(cost, prec)
    } else {
        solve_heuristic(cost, prec)
    }
}

struct Search<'a> {
    cost: &'a CostMatrix,
    preds: Vec<u64>,
    min_in: Vec<f64>,
    full: u64,
    best: f64,
    best_order: Vec<usize>,
    memo: HashMap<(u64, usize), f64>,
    order: Vec<usize>,
}

impl Search<'_> {
    fn bound(&self, mask: u64) -> f64 {
        (0..self.cost.objects())
            .filter(|v| mask & (1 << v) == 0)
            .map(|v| self.min_in[v])
            .sum()
    }

    fn dfs(&mut self, mask: u64, last: usize, acc: f64) {
        if mask == self.full {
            if acc < self.best {
                self.best = acc;
                self.best_order = self.order.clone();
            }
            return;
        }
        let tol = 1e-9 * self.best.abs().max(1.0);
        if acc + self.bound(mask) > self.best + tol {
            return;
        }
        match self.memo.get(&(mask, last)) {
            Some(&seen) if acc >= seen => return,
            _ => {
                self.memo.insert((mask, last), acc);
            }
        }
        let mut next: Vec<usize> = (0..self.cost.objects())
            .filter(|&v| mask & (1 << v) == 0 && self.preds[v] & !mask == 0)
            .collect();
        next.sort_by(|a, b| {
            self.cost
                .get(last, a + 1)
                .total_cmp(&self.cost.get(last, b + 1))
                .then(a.cmp(b))
        });
        for v in next {
            self.order.push(v);
            self.dfs(mask | (1 << v), v + 1, acc + self.cost.get(last, v + 1));
            self.order.pop();
        }
    }
}

/// Branch and bound over partial tours, with dominance on (visited set, last
/// node) and a local-search incumbent.
pub fn solve_exact(cost: &CostMatrix, prec: &[(usize, usize)]) -> Result<(Vec<usize>, f64), SequencerError> {
    let n = cost.objects();
    assert!(n < 64, "exact search supports fewer than 64 objects");
    let fallback = topological(n, prec)?;
    let (warm, warm_cost) = solve_heuristic(cost, prec)?;
    let min_in = (0..n)
        .map(|v| {
            (0..=n)
                .filter(|&u| u != v + 1)
                .map(|u| cost.get(u, v + 1))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mut s = Search {
        cost,
        preds: pred_masks(n, prec),
        min_in,
        full: if n == 0 { 0 } else { u64::MAX >> (64 - n) },
        best: warm_cost,
        best_order: warm,
        memo: HashMap::new(),
        order: Vec::with_capacity(n),
    };
    s.dfs(0, 0, 0.0);
    if !s.best.is_finite() {
        let c = cost.tour_cost(&fallback);
        return Ok((fallback, c));
    }
    Ok((s.best_order, s.best))
}

/// Nearest feasible neighbor, then or-opt and reversal moves that keep the
/// precedences, until no move improves.
pub fn solve_heuristic(cost: &CostMatrix, prec: &[(usize, usize)]) -> Result<(Vec<usize>, f64), SequencerError> {
    let n = cost.objects();
    topological(n, prec)?;
    let mut order = Vec::with_capacity(n);
    let mut done = vec![false; n];
    let mut last = 0;
    while order.len() < n {
        let v = (0..n)
            .filter(|&v| !done[v] && prec.iter().all(|&(u, w)| w != v || done[u]))
            .min_by(|a, b| cost.get(last, a + 1).total_cmp(&cost.get(last, b + 1)).then(a.cmp(b)))
            .expect("precedences are acyclic");
        done[v] = true;
        order.push(v);
        last = v + 1;
    }
    let mut best = cost.tour_cost(&order);
    let mut improved = true;
    while improved {
        improved = false;
        // or-opt: move a block of 1..=3 to another position
        'moves: for len in 1..=3usize.min(n) {
            for i in 0..=n - len {
                for j in 0..=n - len {
                    if j == i {
                        continue;
                    }
                    let mut cand = order.clone();
                    let block: Vec<usize> = cand.drain(i..i + len).collect();
                    cand.splice(j..j, block);
                    if respects(&cand, prec) {
                        let c = cost.tour_cost(&cand);
                        if c < best - 1e-12 {
                            order = cand;
                            best = c;
                            improved = true;
                            break 'moves;
                        }
                    }
                }
            }
        }
        if improved {
            continue;
        }
        'rev: for i in 0..n {
            for j in i + 2..=n {
                let mut cand = order.clone();
                cand[i..j].reverse();
                if respects(&cand, prec) {
                    let c = cost.tour_cost(&cand);
                    if c < best - 1e-12 {
                        order = cand;
                        best = c;
                        improved = true;
                        break 'rev;
                    }
                }
            }
        }
    }
    Ok((order, best))
}
