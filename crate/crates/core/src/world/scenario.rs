//! Scenario files.
//!
//! ```toml
//! seed = 3
//!
//! [workspace]
//! xmin = 0.0
//! ymin = 0.0
//! xmax = 8.0
//! ymax = 8.0
//!
//! [[walls]]
//! x = 4.0
//! y = 2.0
//! w = 0.2
//! h = 4.0
//!
//! [[movables]]
//! id = "box"
//! w = 0.5
//! h = 0.5
//! x = 1.0
//! y = 1.0
//! goal = { x = 6.0, y = 1.0 }
//!
//! [robot]
//! side = 0.5
//! x = 1.0
//! y = 6.0
//! ```
//!
//! Movables with a `goal` become goal objects, the rest movable obstacles.
//! Unknown fields are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::geom::{Pose2, Rect, Size};
use super::scene::{Body, BodyKind, Scene};
use crate::error::ScenarioError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceDoc {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MovableDoc {
    pub id: String,
    pub w: f64,
    pub h: f64,
    pub x: f64,
    pub y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<PointDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotDoc {
    pub side: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub seed: u64,
    pub workspace: WorkspaceDoc,
    #[serde(default)]
    pub walls: Vec<WallDoc>,
    #[serde(default)]
    pub movables: Vec<MovableDoc>,
    pub robot: RobotDoc,
}

pub const ROBOT_ID: &str = "robot";

impl ScenarioDoc {
    pub fn into_scene(self) -> Result<Scene, ScenarioError> {
        let ws = Rect::from_bounds(
            self.workspace.xmin,
            self.workspace.ymin,
            self.workspace.xmax,
            self.workspace.ymax,
        );
        let mut bodies = Vec::new();
        for (i, w) in self.walls.iter().enumerate() {
            let id = w.id.clone().unwrap_or_else(|| format!("wall{i}"));
            bodies.push(Body::new(
                id,
                BodyKind::StaticWall,
                Size::new(w.w, w.h),
                Pose2::new(w.x, w.y),
            ));
        }
        let mut goals = BTreeMap::new();
        for m in &self.movables {
            let kind = if m.goal.is_some() {
                BodyKind::GoalObject
            } else {
                BodyKind::MovableObstacle
            };
            bodies.push(Body::new(m.id.clone(), kind, Size::new(m.w, m.h), Pose2::new(m.x, m.y)));
            if let Some(g) = &m.goal {
                goals.insert(m.id.clone(), Pose2::new(g.x, g.y));
            }
        }
        bodies.push(Body::new(
            ROBOT_ID,
            BodyKind::Robot,
            Size::new(self.robot.side, self.robot.side),
            Pose2::new(self.robot.x, self.robot.y),
        ));
        Ok(Scene::new(ws, bodies, goals, self.seed)?)
    }

    pub fn from_scene(scene: &Scene) -> Self {
        let robot = scene.robot();
        Self {
            seed: scene.rng_seed,
            workspace: WorkspaceDoc {
                xmin: scene.workspace.min.x,
                ymin: scene.workspace.min.y,
                xmax: scene.workspace.max.x,
                ymax: scene.workspace.max.y,
            },
            walls: scene
                .walls()
                .map(|b| WallDoc {
                    id: Some(b.id.clone()),
                    x: b.pose.x,
                    y: b.pose.y,
                    w: b.size.w,
                    h: b.size.h,
                })
                .collect(),
            movables: scene
                .movables()
                .map(|b| MovableDoc {
                    id: b.id.clone(),
                    w: b.size.w,
                    h: b.size.h,
                    x: b.pose.x,
                    y: b.pose.y,
                    goal: scene.goals.get(&b.id).map(|g| PointDoc { x: g.x, y: g.y }),
                })
                .collect(),
            robot: RobotDoc {
                side: robot.size.w.max(robot.size.h),
                x: robot.pose.x,
                y: robot.pose.y,
            },
        }
    }
}

pub fn parse_scenario(text: &str) -> Result<Scene, ScenarioError> {
    let doc: ScenarioDoc = toml::from_str(text)?;
    doc.into_scene()
}

pub fn load_scenario(path: &Path) -> Result<Scene, ScenarioError> {
    parse_scenario(&std::fs::read_to_string(path)?)
}

pub fn scenario_to_string(scene: &Scene) -> String {
    toml::to_string(&ScenarioDoc::from_scene(scene)).expect("scenario documents always serialize")
}
