use thiserror::Error;

use crate::motion::RrtError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WorldError {
    #[error("unknown body id `{0}`")]
    UnknownBody(String),
    #[error("invalid scene: {0}")]
    InvalidScene(String),
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("scenario is not valid: {0}")]
    Invalid(#[from] WorldError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SequencerError {
    #[error("object `{0}` has no statically feasible placement path")]
    Unsolvable(String),
    #[error("precedence constraints admit no order (graph is cyclic)")]
    CyclicPrecedence,
    #[error(transparent)]
    World(#[from] WorldError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MotionError {
    #[error(transparent)]
    World(#[from] WorldError),
    #[error("body `{0}` is not movable")]
    NotMovable(String),
    #[error("no reachable grasp side on `{0}`")]
    NoGrasp(String),
    #[error("no static path for `{object}`: {source}")]
    ObjectPath { object: String, source: RrtError },
    #[error("no valid grasp side for subgoal {index} of `{object}`")]
    NoSubgoalSide { object: String, index: usize },
    #[error("pick leg {index} of `{object}` failed: {source}")]
    Pick {
        object: String,
        index: usize,
        source: RrtError,
    },
    #[error("place leg {index} of `{object}` failed: {source}")]
    Place {
        object: String,
        index: usize,
        source: RrtError,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SgfsError {
    #[error("task for `{0}` is blocked by static walls")]
    StaticBlockage(String),
    #[error("no relocation restored the task for `{0}` within the search limits")]
    Exhausted(String),
    #[error(transparent)]
    Motion(#[from] MotionError),
    #[error(transparent)]
    World(#[from] WorldError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlannerError {
    #[error("scene has no goals")]
    NoGoals,
    #[error(transparent)]
    World(#[from] WorldError),
}

/// A plan that does not replay cleanly from its initial scene.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReplayError {
    #[error("step {step}, pair {pair}: {what} is discontinuous")]
    Discontinuity {
        step: usize,
        pair: usize,
        what: &'static str,
    },
    #[error("step {step}, pair {pair}: collision on the {leg} leg at segment {segment}")]
    Collision {
        step: usize,
        pair: usize,
        leg: &'static str,
        segment: usize,
    },
    #[error("replay ends in a different scene than the plan reports")]
    FinalScene,
    #[error(transparent)]
    World(#[from] WorldError),
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("could not place {m} objects after {attempts} samples (workspace saturated)")]
    Saturated { m: usize, attempts: usize },
    #[error("m-block needs at least one object")]
    EmptyBlock,
    #[error("unknown built-in scenario `{0}`")]
    UnknownScenario(String),
    #[error("suite file: {0}")]
    Suite(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Planner(#[from] PlannerError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
