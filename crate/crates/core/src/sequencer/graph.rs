//! Placement dependencies between goal objects.
//!
//! An edge `u -> v` means `u` should be placed before `v`. A weak edge
//! `j -> i` appears when the path of `i` sweeps the start of `j` (moving `j`
//! first clears the way); a strong edge `i -> j` appears when the path of `i`
//! sweeps the goal of `j` (placing `j` first would block `i`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::motion::Path;
use crate::world::{Rect, Scene};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    Weak,
    Strong,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DependencyGraph {
    pub vertices: Vec<String>,
    /// `(from, to)` vertex indices. Where a weak and a strong constraint
    /// coincide the edge is strong.
    pub edges: BTreeMap<(usize, usize), EdgeKind>,
}

/// Does the object footprint moving along `path` overlap the interior of `rect`?
pub fn sweeps(path: &Path, half: crate::world::Pose2, rect: &Rect) -> bool {
    let grown = rect.inflate(half);
    path.waypoints
        .windows(2)
        .any(|w| grown.segment_hits_interior(w[0], w[1]) || grown.interior_contains(w[0]))
}

impl DependencyGraph {
    pub fn with_vertices(vertices: Vec<String>) -> Self {
        Self {
            vertices,
            edges: BTreeMap::new(),
        }
    }

    /// Builds edges from each object's static path. Objects without a path
    /// are vertices without edges.
    pub fn build(scene: &Scene, objects: &[String], paths: &BTreeMap<String, Path>) -> Self {
        let mut g = Self::with_vertices(objects.to_vec());
        for (i, oi) in objects.iter().enumerate() {
            let Some(mu) = paths.get(oi) else { continue };
            let Some(body) = scene.body(oi) else { continue };
            let half = body.size.half();
            for (j, oj) in objects.iter().enumerate() {
                if i == j || !paths.contains_key(oj) {
                    continue;
                }
                let Some(bj) = scene.body(oj) else { continue };
                if sweeps(mu, half, &bj.rect()) {
                    g.add_edge(j, i, EdgeKind::Weak);
                }
                if let Some(goal) = scene.goal_rect(oj) {
                    if sweeps(mu, half, &goal) {
                        g.add_edge(i, j, EdgeKind::Strong);
                    }
                }
            }
        }
        g
    }

    pub fn add_edge(&mut self, from: usize, to: usize, kind: EdgeKind) {
        let e = self.edges.entry((from, to)).or_insert(kind);
        *e = (*e).max(kind);
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((v, 0)..(v + 1, 0)).map(|((_, t), _)| *t)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.successors(v).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.edges.keys().filter(|(_, t)| *t == v).count()
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Kahn's algorithm, smallest index first.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let mut indeg = vec![0usize; n];
        for (_, t) in self.edges.keys() {
            indeg[*t] += 1;
        }
        let mut ready: BTreeSet<usize> = (0..n).filter(|v| indeg[*v] == 0).collect();
        let mut out = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            out.push(v);
            for t in self.successors(v) {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    ready.insert(t);
                }
            }
        }
        (out.len() == n).then_some(out)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph dependencies {\n");
        for v in &self.vertices {
            let _ = writeln!(s, "  \"{v}\";");
        }
        for ((f, t), k) in &self.edges {
            let style = match k {
                EdgeKind::Weak => "dashed",
                EdgeKind::Strong => "solid",
            };
            let _ = writeln!(
                s,
                "  \"{}\" -> \"{}\" [style={style}];",
                self.vertices[*f], self.vertices[*t]
            );
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{Body, BodyKind, Pose2, Size};

    fn scene() -> Scene {
        // a must pass through b's start; b's goal lies on a's path
        let bodies = vec![
            Body::new("robot", BodyKind::Robot, Size::new(0.5, 0.5), Pose2::new(0.5, 7.5)),
            Body::new("a", BodyKind::GoalObject, Size::new(0.5, 0.5), Pose2::new(1.0, 1.0)),
            Body::new("b", BodyKind::GoalObject, Size::new(0.5, 0.5), Pose2::new(3.0, 1.0)),
            Body::new("c", BodyKind::GoalObject, Size::new(0.5, 0.5), Pose2::new(1.0, 5.0)),
        ];
        let goals = BTreeMap::from([
            ("a".to_string(), Pose2::new(7.0, 1.0)),
            ("b".to_string(), Pose2::new(3.0, 3.0)),
            ("c".to_string(), Pose2::new(5.0, 5.0)),
        ]);
        Scene::new(Rect::from_bounds(0.0, 0.0, 8.0, 8.0), bodies, goals, 0).unwrap()
    }

    fn straight(s: &Scene, id: &str) -> Path {
        Path::new(vec![s.body(id).unwrap().pose, s.goals[id]])
    }

    #[test]
    fn weak_and_strong_edges() {
        let s = scene();
        let ids: Vec<String> = ["a", "b", "c"].iter().map(|x| x.to_string()).collect();
        let paths: BTreeMap<String, Path> = ids.iter().map(|i| (i.clone(), straight(&s, i))).collect();
        let g = DependencyGraph::build(&s, &ids, &paths);
        assert_eq!(g.edges.get(&(1, 0)), Some(&EdgeKind::Weak));
        assert_eq!(g.edges.len(), 1);
        assert!(g.is_acyclic());
        assert_eq!(g.topological_order().unwrap(), vec![1, 0, 2]);
        assert!(g.to_dot().contains("\"b\" -> \"a\" [style=dashed]"));
    }

    #[test]
    fn goal_on_path_gives_strong_edge() {
        let mut s = scene();
        s.goals.insert("b".into(), Pose2::new(5.0, 1.0));
        let ids: Vec<String> = ["a", "b"].iter().map(|x| x.to_string()).collect();
        let paths: BTreeMap<String, Path> = ids.iter().map(|i| (i.clone(), straight(&s, i))).collect();
        let g = DependencyGraph::build(&s, &ids, &paths);
        // a sweeps b's start (b -> a weak) and b's goal (a -> b strong)
        assert_eq!(g.edges.get(&(1, 0)), Some(&EdgeKind::Weak));
        assert_eq!(g.edges.get(&(0, 1)), Some(&EdgeKind::Strong));
        assert!(!g.is_acyclic());
    }
}
