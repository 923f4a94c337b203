//! Configuration space of a translating rectangle (or rigid union of
//! rectangles) among axis-aligned obstacles.
//!
//! Obstacles grown by the footprint are again rectangles, so point and
//! straight-segment queries are exact. Connectivity is answered with an exact
//! cell decomposition induced by the obstacle edges.

use std::cell::OnceCell;
use std::collections::{BTreeSet, VecDeque};

use super::geom::{Pose2, Rect, Size};
use super::scene::{BodyKind, Scene};

/// Rigid set of rectangles attached to a reference point.
#[derive(Debug, Clone, PartialEq)]
pub struct Footprint {
    pub parts: Vec<(Pose2, Size)>,
}

impl Footprint {
    pub fn rect(size: Size) -> Self {
        Self {
            parts: vec![(Pose2::default(), size)],
        }
    }

    /// Object at the reference point with the robot rigidly attached at `robot_offset`.
    pub fn carried(object: Size, robot: Size, robot_offset: Pose2) -> Self {
        Self {
            parts: vec![(Pose2::default(), object), (robot_offset, robot)],
        }
    }

    pub fn rects_at(&self, p: Pose2) -> impl Iterator<Item = Rect> + '_ {
        self.parts.iter().map(move |(o, s)| Rect::centered(p + *o, *s))
    }
}

/// Free space for one footprint in one scene.
pub struct CSpace {
    bounds: Rect,
    obstacles: Vec<Rect>,
    cells: OnceCell<Decomposition>,
}

impl CSpace {
    /// Builds the space. Bodies listed in `ignore` (and the robot unless
    /// `robot_is_obstacle`) are not obstacles.
    pub fn new(scene: &Scene, footprint: &Footprint, ignore: &BTreeSet<String>, robot_is_obstacle: bool) -> Self {
        let mut bounds = Rect::from_bounds(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::INFINITY);
        for (o, s) in &footprint.parts {
            let h = s.half();
            let part = Rect::new(scene.workspace.min + h - *o, scene.workspace.max - h - *o);
            bounds = bounds.intersection(&part);
        }
        let mut obstacles = Vec::new();
        for b in &scene.bodies {
            if ignore.contains(&b.id) || (b.kind == BodyKind::Robot && !robot_is_obstacle) {
                continue;
            }
            let r = b.rect();
            for (o, s) in &footprint.parts {
                let grown = r.inflate(s.half()).translate(-*o);
                if grown.overlaps(&bounds) {
                    obstacles.push(grown);
                }
            }
        }
        Self {
            bounds,
            obstacles,
            cells: OnceCell::new(),
        }
    }

    /// Region the reference point may occupy without leaving the workspace.
    pub fn bounds(&self) -> Rect {
        self.bounds
    }

    pub fn obstacles(&self) -> &[Rect] {
        &self.obstacles
    }

    pub fn point_free(&self, p: Pose2) -> bool {
        !self.bounds.is_empty()
            && self.bounds.contains_point(p)
            && !self.obstacles.iter().any(|r| r.interior_contains(p))
    }

    /// Straight motion between two free points is collision-free.
    pub fn segment_free(&self, a: Pose2, b: Pose2) -> bool {
        self.point_free(a) && self.point_free(b) && !self.obstacles.iter().any(|r| r.segment_hits_interior(a, b))
    }

    /// Exact: is there any collision-free motion between `a` and `b`?
    pub fn connected(&self, a: Pose2, b: Pose2) -> bool {
        if !self.point_free(a) || !self.point_free(b) {
            return false;
        }
        if self.segment_free(a, b) {
            return true;
        }
        let dec = self.cells.get_or_init(|| Decomposition::build(self));
        dec.connected(a, b)
    }
}

/// Grid induced by every obstacle edge; each cell is wholly free or blocked.
struct Decomposition {
    xs: Vec<f64>,
    ys: Vec<f64>,
    free: Vec<bool>,
}

/// Cells thinner than this are treated as blocked.
const MIN_CELL: f64 = 1e-6;

fn coords(lo: f64, hi: f64, cuts: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = cuts.filter(|c| *c > lo && *c < hi).collect();
    v.push(lo);
    v.push(hi);
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    v
}

impl Decomposition {
    fn build(space: &CSpace) -> Self {
        let b = space.bounds;
        let xs = coords(
            b.min.x,
            b.max.x,
            space.obstacles.iter().flat_map(|r| [r.min.x, r.max.x]),
        );
        let ys = coords(
            b.min.y,
            b.max.y,
            space.obstacles.iter().flat_map(|r| [r.min.y, r.max.y]),
        );
        let nx = xs.len() - 1;
        let ny = ys.len() - 1;
        let mut free = vec![true; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                if xs[i + 1] - xs[i] < MIN_CELL || ys[j + 1] - ys[j] < MIN_CELL {
                    free[j * nx + i] = false;
                }
            }
        }
        for r in &space.obstacles {
            let i0 = xs.partition_point(|x| *x < r.min.x - 1e-12);
            let i1 = xs.partition_point(|x| *x < r.max.x - 1e-12);
            let j0 = ys.partition_point(|y| *y < r.min.y - 1e-12);
            let j1 = ys.partition_point(|y| *y < r.max.y - 1e-12);
            for j in j0..j1.min(ny) {
                for i in i0..i1.min(nx) {
                    let c = Pose2::new(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]));
                    if r.interior_contains(c) {
                        free[j * nx + i] = false;
                    }
                }
            }
        }
        Self { xs, ys, free }
    }

    fn nx(&self) -> usize {
        self.xs.len() - 1
    }

    /// Free cells whose closure contains `p`.
    fn cells_at(&self, p: Pose2) -> Vec<usize> {
        let nx = self.nx();
        let ny = self.ys.len() - 1;
        let span = |v: &[f64], c: f64, n: usize| -> Vec<usize> {
            let k = v.partition_point(|x| *x <= c + 1e-9);
            let mut out = Vec::new();
            for idx in [k.saturating_sub(2), k.saturating_sub(1), k] {
                if idx < n && v[idx] <= c + 1e-9 && v[idx + 1] >= c - 1e-9 && !out.contains(&idx) {
                    out.push(idx);
                }
            }
            out
        };
        let is = span(&self.xs, p.x, nx);
        let js = span(&self.ys, p.y, ny);
        let mut out = Vec::new();
        for &j in &js {
            for &i in &is {
                let k = j * nx + i;
                if self.free[k] {
                    out.push(k);
                }
            }
        }
        out
    }

    fn connected(&self, a: Pose2, b: Pose2) -> bool {
        let starts = self.cells_at(a);
        let goals = self.cells_at(b);
        if starts.is_empty() || goals.is_empty() {
            return false;
        }
        let nx = self.nx();
        let ny = self.ys.len() - 1;
        let mut seen = vec![false; self.free.len()];
        let mut queue = VecDeque::new();
        for s in starts {
            seen[s] = true;
            queue.push_back(s);
        }
        while let Some(k) = queue.pop_front() {
            if goals.contains(&k) {
                return true;
            }
            let (i, j) = (k % nx, k / nx);
            let mut push = |n: usize| {
                if self.free[n] && !seen[n] {
                    seen[n] = true;
                    queue.push_back(n);
                }
            };
            if i > 0 {
                push(k - 1);
            }
            if i + 1 < nx {
                push(k + 1);
            }
            if j > 0 {
                push(k - nx);
            }
            if j + 1 < ny {
                push(k + nx);
            }
        }
        false
    }
}
