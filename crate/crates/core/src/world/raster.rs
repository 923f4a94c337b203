//! Occupancy and reachability rasters over the workspace.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::cspace::{CSpace, Footprint};
use super::geom::{Pose2, Rect};
use super::scene::{BodyKind, Scene};

/// Grid index as `(row, col)`; rows grow with `y`, columns with `x`.
pub type Cell = (usize, usize);

/// Raster weights. Only the orderings `beta_m > alpha_m > 0` and
/// `alpha_r > beta_r >= 0` matter to callers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RasterParams {
    pub grid_cells: usize,
    pub alpha_m: f64,
    pub beta_m: f64,
    pub alpha_r: f64,
    pub beta_r: f64,
}

impl Default for RasterParams {
    fn default() -> Self {
        Self {
            grid_cells: 64,
            alpha_m: 1.0,
            beta_m: 3.0,
            alpha_r: 1.0,
            beta_r: 0.0,
        }
    }
}

/// Placement of a raster in the world.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridFrame {
    pub origin: Pose2,
    pub resolution: f64,
    pub rows: usize,
    pub cols: usize,
}

impl GridFrame {
    /// Square cells; the longer workspace side gets `cells` cells.
    pub fn for_workspace(ws: &Rect, cells: usize) -> Self {
        let cells = cells.max(8);
        let resolution = ws.width().max(ws.height()) / cells as f64;
        let rows = ((ws.height() / resolution) - 1e-9).ceil().max(8.0) as usize;
        let cols = ((ws.width() / resolution) - 1e-9).ceil().max(8.0) as usize;
        Self {
            origin: ws.min,
            resolution,
            rows,
            cols,
        }
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, (r, c): Cell) -> usize {
        r * self.cols + c
    }

    pub fn cell_center(&self, (r, c): Cell) -> Pose2 {
        Pose2::new(
            self.origin.x + (c as f64 + 0.5) * self.resolution,
            self.origin.y + (r as f64 + 0.5) * self.resolution,
        )
    }

    pub fn cell_rect(&self, (r, c): Cell) -> Rect {
        let min = Pose2::new(
            self.origin.x + c as f64 * self.resolution,
            self.origin.y + r as f64 * self.resolution,
        );
        Rect::new(min, min + Pose2::new(self.resolution, self.resolution))
    }

    /// Cell containing `p`, clamped into the grid.
    pub fn cell_of(&self, p: Pose2) -> Cell {
        let c = ((p.x - self.origin.x) / self.resolution).floor();
        let r = ((p.y - self.origin.y) / self.resolution).floor();
        (
            r.clamp(0.0, (self.rows - 1) as f64) as usize,
            c.clamp(0.0, (self.cols - 1) as f64) as usize,
        )
    }

    /// Signed cell coordinates of `p`, unclamped.
    pub fn cell_coords(&self, p: Pose2) -> (i64, i64) {
        (
            ((p.y - self.origin.y) / self.resolution).floor() as i64,
            ((p.x - self.origin.x) / self.resolution).floor() as i64,
        )
    }

    /// Cells whose square overlaps the interior of `rect`.
    pub fn cells_overlapping(&self, rect: &Rect) -> Vec<Cell> {
        self.cells_in_span(rect, |cell| self.cell_rect(cell).overlaps(rect))
    }

    /// Cells whose center lies strictly inside `rect`.
    pub fn cells_centered_in(&self, rect: &Rect) -> Vec<Cell> {
        self.cells_in_span(rect, |cell| rect.interior_contains(self.cell_center(cell)))
    }

    fn cells_in_span(&self, rect: &Rect, keep: impl Fn(Cell) -> bool) -> Vec<Cell> {
        let (r0, c0) = self.cell_coords(rect.min);
        let (r1, c1) = self.cell_coords(rect.max);
        let r0 = r0.max(0) as usize;
        let c0 = c0.max(0) as usize;
        let r1 = r1.min(self.rows as i64 - 1);
        let c1 = c1.min(self.cols as i64 - 1);
        let mut out = Vec::new();
        if r1 < 0 || c1 < 0 {
            return out;
        }
        for r in r0..=r1 as usize {
            for c in c0..=c1 as usize {
                if keep((r, c)) {
                    out.push((r, c));
                }
            }
        }
        out
    }

    pub fn in_bounds(&self, (r, c): (i64, i64)) -> bool {
        r >= 0 && c >= 0 && (r as usize) < self.rows && (c as usize) < self.cols
    }
}

/// Global occupancy matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyMatrix {
    pub frame: GridFrame,
    pub cells: Vec<f64>,
    /// Task cells that fell outside the grid and were clamped.
    pub clamped: usize,
}

impl OccupancyMatrix {
    pub fn get(&self, cell: Cell) -> f64 {
        self.cells[self.frame.index(cell)]
    }

    pub fn is_occupied(&self, cell: Cell) -> bool {
        self.get(cell) == 0.0
    }

    pub fn sum(&self) -> f64 {
        self.cells.iter().sum()
    }
}

/// Binary occupancy of walls and movables (robot excluded), by cell center.
pub fn occupancy_mask(scene: &Scene, frame: &GridFrame, skip: &BTreeSet<String>) -> Vec<bool> {
    let mut occ = vec![false; frame.len()];
    for b in &scene.bodies {
        if b.kind == BodyKind::Robot || skip.contains(&b.id) {
            continue;
        }
        for cell in frame.cells_centered_in(&b.rect()) {
            occ[frame.index(cell)] = true;
        }
    }
    occ
}

/// Rasterizes the scene: occupied cells 0, free cells `alpha_m`, free task cells `beta_m`.
pub fn rasterize_gom(scene: &Scene, params: &RasterParams, task_cells: &[(i64, i64)]) -> OccupancyMatrix {
    let frame = GridFrame::for_workspace(&scene.workspace, params.grid_cells);
    let occ = occupancy_mask(scene, &frame, &BTreeSet::new());
    let mut cells: Vec<f64> = occ.iter().map(|o| if *o { 0.0 } else { params.alpha_m }).collect();
    let mut clamped = 0;
    for &(r, c) in task_cells {
        if !frame.in_bounds((r, c)) {
            clamped += 1;
        }
        let cell = (
            r.clamp(0, frame.rows as i64 - 1) as usize,
            c.clamp(0, frame.cols as i64 - 1) as usize,
        );
        let k = frame.index(cell);
        if !occ[k] {
            cells[k] = params.beta_m;
        }
    }
    if clamped > 0 {
        log::warn!("rasterize_gom: clamped {clamped} out-of-range task cells");
    }
    OccupancyMatrix { frame, cells, clamped }
}

/// Robot reachability raster in the frame of a paired [`OccupancyMatrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReachabilityMatrix {
    pub frame: GridFrame,
    pub cells: Vec<f64>,
    /// The robot's own cell was occupied; only that cell is marked reachable.
    pub degenerate: bool,
}

impl ReachabilityMatrix {
    pub fn get(&self, cell: Cell) -> f64 {
        self.cells[self.frame.index(cell)]
    }

    pub fn reached_count(&self, alpha_r: f64) -> usize {
        self.cells.iter().filter(|v| **v == alpha_r).count()
    }
}

/// Flood fill over cells whose center admits the robot footprint,
/// 4-connected, seeded at the robot's cell.
pub fn reachability(scene: &Scene, gom: &OccupancyMatrix, params: &RasterParams) -> ReachabilityMatrix {
    let frame = gom.frame;
    let mut cells = vec![params.beta_r; frame.len()];
    let start = frame.cell_of(scene.robot_pose());
    cells[frame.index(start)] = params.alpha_r;
    if gom.is_occupied(start) {
        return ReachabilityMatrix {
            frame,
            cells,
            degenerate: true,
        };
    }
    let robot = scene.robot();
    let ignore: BTreeSet<String> = [robot.id.clone()].into();
    let space = CSpace::new(scene, &Footprint::rect(robot.size), &ignore, false);
    let mut fits: Vec<Option<bool>> = vec![None; frame.len()];
    let mut queue = VecDeque::from([start]);
    let mut seen = vec![false; frame.len()];
    seen[frame.index(start)] = true;
    while let Some((r, c)) = queue.pop_front() {
        let neighbors = [
            (r as i64 - 1, c as i64),
            (r as i64 + 1, c as i64),
            (r as i64, c as i64 - 1),
            (r as i64, c as i64 + 1),
        ];
        for n in neighbors {
            if !frame.in_bounds(n) {
                continue;
            }
            let cell = (n.0 as usize, n.1 as usize);
            let k = frame.index(cell);
            if seen[k] {
                continue;
            }
            let ok =
                *fits[k].get_or_insert_with(|| !gom.is_occupied(cell) && space.point_free(frame.cell_center(cell)));
            if ok {
                seen[k] = true;
                cells[k] = params.alpha_r;
                queue.push_back(cell);
            }
        }
    }
    ReachabilityMatrix {
        frame,
        cells,
        degenerate: false,
    }
}
