//! Rearrangement planning in the plane.
//!
//! Goal objects are moved to their goal poses by a translating square robot
//! that grasps objects on one of their faces. Placement order comes from a
//! dependency graph reduced to a DAG and a precedence-constrained open-path
//! ATSP; obstructing objects are relocated by a guided best-first search.

pub mod bench;
pub mod error;
pub mod motion;
pub mod planner;
pub mod seed;
pub mod sequencer;
pub mod sgfs;
pub mod world;
