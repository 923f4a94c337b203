//! Reducing the dependency graph to a DAG.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::graph::{DependencyGraph, EdgeKind};

pub const DEFAULT_CYCLE_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Cycles {
    /// Each cycle as a vertex list starting at its smallest vertex.
    pub cycles: Vec<Vec<usize>>,
    /// Enumeration stopped at the cap.
    pub truncated: bool,
}

/// Simple cycles, each reported once, up to `cap` of them.
pub fn enumerate_cycles(g: &DependencyGraph, cap: usize) -> Cycles {
    let n = g.len();
    let succ: Vec<Vec<usize>> = (0..n).map(|v| g.successors(v).collect()).collect();
    let mut out = Cycles::default();
    let mut on_path = vec![false; n];
    let mut path = Vec::new();
    for s in 0..n {
        path.push(s);
        on_path[s] = true;
        walk(s, s, &succ, &mut on_path, &mut path, cap, &mut out);
        on_path[s] = false;
        path.pop();
        if out.truncated {
            break;
        }
    }
    out
}

fn walk(
    s: usize,
    v: usize,
    succ: &[Vec<usize>],
    on_path: &mut [bool],
    path: &mut Vec<usize>,
    cap: usize,
    out: &mut Cycles,
) {
    for &w in &succ[v] {
        if out.truncated {
            return;
        }
        if w == s {
            if out.cycles.len() >= cap {
                out.truncated = true;
                return;
            }
            out.cycles.push(path.clone());
        } else if w > s && !on_path[w] {
            on_path[w] = true;
            path.push(w);
            walk(s, w, succ, on_path, path, cap, out);
            path.pop();
            on_path[w] = false;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovedEdge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
}

/// Repeatedly removes the edge lying on the most enumerated cycles.
///
/// Ties prefer weak edges, then a source vertex with the smallest
/// out-degree minus in-degree, then the lexicographically smallest pair of
/// vertex names. Removed edges that no longer close a cycle are put back.
pub fn break_cycles(g: &DependencyGraph, cap: usize) -> (DependencyGraph, Vec<RemovedEdge>) {
    let mut dag = g.clone();
    let mut removed = Vec::new();
    loop {
        let cyc = enumerate_cycles(&dag, cap);
        if cyc.cycles.is_empty() {
            break;
        }
        let mut freq: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for c in &cyc.cycles {
            for k in 0..c.len() {
                *freq.entry((c[k], c[(k + 1) % c.len()])).or_default() += 1;
            }
        }
        let balance = |v: usize| dag.out_degree(v) as i64 - dag.in_degree(v) as i64;
        let (&(from, to), _) = freq
            .iter()
            .min_by(|(ea, fa), (eb, fb)| {
                fb.cmp(fa)
                    .then(dag.edges[ea].cmp(&dag.edges[eb]))
                    .then(balance(ea.0).cmp(&balance(eb.0)))
                    .then((&dag.vertices[ea.0], &dag.vertices[ea.1]).cmp(&(&dag.vertices[eb.0], &dag.vertices[eb.1])))
            })
            .expect("a cycle has edges");
        let kind = dag.edges.remove(&(from, to)).expect("edge on a cycle exists");
        removed.push(RemovedEdge { from, to, kind });
    }
    reinsert(&mut dag, &mut removed);
    (dag, removed)
}

/// Puts back removed edges (latest first) whenever the graph stays acyclic.
fn reinsert(dag: &mut DependencyGraph, removed: &mut Vec<RemovedEdge>) {
    let mut kept = Vec::new();
    while let Some(e) = removed.pop() {
        dag.edges.insert((e.from, e.to), e.kind);
        if !dag.is_acyclic() {
            dag.edges.remove(&(e.from, e.to));
            kept.push(e);
        }
    }
    kept.reverse();
    *removed = kept;
}

/// Baseline: drops every back edge met by a depth-first search.
pub fn break_cycles_greedy(g: &DependencyGraph) -> (DependencyGraph, Vec<RemovedEdge>) {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    fn visit(v: usize, g: &DependencyGraph, mark: &mut [Mark], back: &mut Vec<(usize, usize)>) {
        mark[v] = Mark::Open;
        for w in g.successors(v).collect::<Vec<_>>() {
            match mark[w] {
                Mark::New => visit(w, g, mark, back),
                Mark::Open => back.push((v, w)),
                Mark::Done => {}
            }
        }
        mark[v] = Mark::Done;
    }
    let mut mark = vec![Mark::New; g.len()];
    let mut back = Vec::new();
    for v in 0..g.len() {
        if mark[v] == Mark::New {
            visit(v, g, &mut mark, &mut back);
        }
    }
    let mut dag = g.clone();
    let removed = back
        .into_iter()
        .map(|(from, to)| RemovedEdge {
            from,
            to,
            kind: dag.edges.remove(&(from, to)).expect("back edge exists"),
        })
        .collect();
    (dag, removed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize, EdgeKind)]) -> DependencyGraph {
        let mut g = DependencyGraph::with_vertices((0..n).map(|i| format!("o{i}")).collect());
        for &(f, t, k) in edges {
            g.add_edge(f, t, k);
        }
        g
    }

    #[test]
    fn counts_cycles_of_a_complete_digraph() {
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    edges.push((i, j, EdgeKind::Weak));
                }
            }
        }
        // 6 two-cycles, 8 three-cycles, 6 four-cycles
        assert_eq!(enumerate_cycles(&graph(4, &edges), 100).cycles.len(), 20);
        let capped = enumerate_cycles(&graph(4, &edges), 5);
        assert!(capped.truncated);
        assert_eq!(capped.cycles.len(), 5);
    }

    #[test]
    fn weak_edge_loses_a_tie() {
        let g = graph(2, &[(0, 1, EdgeKind::Strong), (1, 0, EdgeKind::Weak)]);
        let (dag, removed) = break_cycles(&g, DEFAULT_CYCLE_CAP);
        assert!(dag.is_acyclic());
        assert_eq!(
            removed,
            vec![RemovedEdge {
                from: 1,
                to: 0,
                kind: EdgeKind::Weak
            }]
        );
    }

    #[test]
    fn shared_edge_is_removed_once() {
        // two triangles sharing 0 -> 1
        let w = EdgeKind::Strong;
        let g = graph(4, &[(0, 1, w), (1, 2, w), (2, 0, w), (1, 3, w), (3, 0, w)]);
        let (dag, removed) = break_cycles(&g, DEFAULT_CYCLE_CAP);
        assert!(dag.is_acyclic());
        assert_eq!(removed.len(), 1);
        assert_eq!((removed[0].from, removed[0].to), (0, 1));
    }

    #[test]
    fn greedy_variant_is_acyclic() {
        let w = EdgeKind::Weak;
        let g = graph(3, &[(0, 1, w), (1, 2, w), (2, 0, w), (2, 1, w)]);
        let (dag, removed) = break_cycles_greedy(&g);
        assert!(dag.is_acyclic());
        assert!(!removed.is_empty());
    }
}
