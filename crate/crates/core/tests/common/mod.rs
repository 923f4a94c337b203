//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use rearrange::sequencer::{respects, CostMatrix, DependencyGraph, EdgeKind};

/// Minimum feedback arc set size: fewest back edges over all vertex orders.
pub fn min_feedback_arc_set(g: &DependencyGraph) -> usize {
    let n = g.len();
    let mut best = vec![usize::MAX; 1 << n];
    best[0] = 0;
    for mask in 0..(1usize << n) {
        if best[mask] == usize::MAX {
            continue;
        }
        for v in 0..n {
            if mask & (1 << v) != 0 {
                continue;
            }
            // v goes after everything in mask: edges v -> mask point backwards
            let back = g.successors(v).filter(|t| mask & (1 << t) != 0).count();
            let next = mask | (1 << v);
            best[next] = best[next].min(best[mask] + back);
        }
    }
    best[(1 << n) - 1]
}

/// Optimal open-path tour cost by enumerating every permutation.
pub fn brute_force_patsp(cost: &CostMatrix, prec: &[(usize, usize)]) -> f64 {
    fn rec(cost: &CostMatrix, prec: &[(usize, usize)], order: &mut Vec<usize>, used: &mut [bool], best: &mut f64) {
        if order.len() == cost.objects() {
            if respects(order, prec) {
                *best = best.min(cost.tour_cost(order));
            }
            return;
        }
        for v in 0..cost.objects() {
            if !used[v] {
                used[v] = true;
                order.push(v);
                rec(cost, prec, order, used, best);
                order.pop();
                used[v] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    rec(cost, prec, &mut Vec::new(), &mut vec![false; cost.objects()], &mut best);
    best
}

/// Distance from every cell to the nearest occupied cell, by exhaustion.
pub fn brute_force_edt(occ: &[bool], rows: usize, cols: usize) -> Vec<f64> {
    (0..rows * cols)
        .map(|k| {
            let (r, c) = ((k / cols) as f64, (k % cols) as f64);
            (0..rows * cols)
                .filter(|q| occ[*q])
                .map(|q| {
                    let (qr, qc) = ((q / cols) as f64, (q % cols) as f64);
                    ((r - qr).powi(2) + (c - qc).powi(2)).sqrt()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

pub fn random_digraph(rng: &mut impl Rng, n: usize, density: f64) -> DependencyGraph {
    let mut g = DependencyGraph::with_vertices((0..n).map(|i| format!("o{i}")).collect());
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(density) {
                let kind = if rng.gen_bool(0.5) {
                    EdgeKind::Weak
                } else {
                    EdgeKind::Strong
                };
                g.add_edge(i, j, kind);
            }
        }
    }
    g
}

/// Simple cycles counted as Hamiltonian cycles of every induced subgraph,
/// anchored at the subgraph's smallest vertex.
pub fn count_simple_cycles(g: &DependencyGraph) -> usize {
    let n = g.len();
    let has = |a: usize, b: usize| g.edges.contains_key(&(a, b));
    let mut total = 0;
    for s in 0..n {
        // paths from s over vertices > s: ways[mask][v]
        let mut ways = vec![vec![0usize; n]; 1 << n];
        ways[1 << s][s] = 1;
        for mask in 0..(1usize << n) {
            if mask & (1 << s) == 0 || mask & ((1 << s) - 1) != 0 {
                continue;
            }
            for v in 0..n {
                let w = ways[mask][v];
                if w == 0 {
                    continue;
                }
                if v != s && has(v, s) {
                    total += w;
                }
                for u in s + 1..n {
                    if mask & (1 << u) == 0 && has(v, u) {
                        ways[mask | (1 << u)][u] += w;
                    }
                }
            }
        }
    }
    total
}
