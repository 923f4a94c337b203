//! Geometric world model: bodies, scenes, collision checks and the rasters
//! used for scoring.

pub mod cspace;
pub mod edt;
pub mod geom;
pub mod raster;
pub mod scenario;
pub mod scene;

pub use cspace::{CSpace, Footprint};
pub use edt::{edt, ClearanceMap};
pub use geom::{Pose2, Rect, Size, EPS};
pub use raster::{
    occupancy_mask, rasterize_gom, reachability, Cell, GridFrame, OccupancyMatrix, RasterParams, ReachabilityMatrix,
};
pub use scene::{collides, default_tolerance, placed_objects, verify_placements, Body, BodyKind, Scene};
