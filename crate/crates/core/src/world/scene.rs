use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::geom::{Pose2, Rect, Size};
use crate::error::WorldError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BodyKind {
    StaticWall,
    MovableObstacle,
    GoalObject,
    Robot,
}

impl BodyKind {
    pub fn is_movable(self) -> bool {
        matches!(self, BodyKind::MovableObstacle | BodyKind::GoalObject)
    }
}

/// A rigid axis-aligned rectangle placed by its center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Body {
    pub id: String,
    pub size: Size,
    pub kind: BodyKind,
    pub pose: Pose2,
}

impl Body {
    pub fn new(id: impl Into<String>, kind: BodyKind, size: Size, pose: Pose2) -> Self {
        Self {
            id: id.into(),
            size,
            kind,
            pose,
        }
    }

    pub fn rect(&self) -> Rect {
        Rect::centered(self.pose, self.size)
    }

    pub fn rect_at(&self, pose: Pose2) -> Rect {
        Rect::centered(pose, self.size)
    }
}

/// Complete world state. Treated as a value: successors are built with
/// [`Scene::with_pose`] and friends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub workspace: Rect,
    pub bodies: Vec<Body>,
    pub goals: BTreeMap<String, Pose2>,
    pub rng_seed: u64,
}

impl Scene {
    /// Builds a scene and checks every structural invariant.
    pub fn new(
        workspace: Rect,
        bodies: Vec<Body>,
        goals: BTreeMap<String, Pose2>,
        rng_seed: u64,
    ) -> Result<Self, WorldError> {
        let scene = Self {
            workspace,
            bodies,
            goals,
            rng_seed,
        };
        scene.validate()?;
        Ok(scene)
    }

    pub fn validate(&self) -> Result<(), WorldError> {
        if self.workspace.is_empty() || self.workspace.width() <= 0.0 || self.workspace.height() <= 0.0 {
            return Err(WorldError::InvalidScene("empty workspace".into()));
        }
        let mut ids = BTreeSet::new();
        let mut robots = 0;
        for b in &self.bodies {
            if !(b.size.w > 0.0 && b.size.h > 0.0) || !b.size.w.is_finite() || !b.size.h.is_finite() {
                return Err(WorldError::InvalidScene(format!("body {} has non-positive size", b.id)));
            }
            if !b.pose.is_finite() {
                return Err(WorldError::InvalidScene(format!("body {} has a non-finite pose", b.id)));
            }
            if !ids.insert(b.id.as_str()) {
                return Err(WorldError::InvalidScene(format!("duplicate body id {}", b.id)));
            }
            if b.kind == BodyKind::Robot {
                robots += 1;
            }
            if b.kind != BodyKind::StaticWall && !self.workspace.contains_rect(&b.rect()) {
                return Err(WorldError::InvalidScene(format!("body {} leaves the workspace", b.id)));
            }
        }
        if robots != 1 {
            return Err(WorldError::InvalidScene(format!(
                "expected exactly one robot, found {robots}"
            )));
        }
        for (i, a) in self.bodies.iter().enumerate() {
            for b in &self.bodies[i + 1..] {
                // static walls may abut or overlap one another
                if a.kind == BodyKind::StaticWall && b.kind == BodyKind::StaticWall {
                    continue;
                }
                if a.rect().overlaps(&b.rect()) {
                    return Err(WorldError::InvalidScene(format!(
                        "bodies {} and {} overlap",
                        a.id, b.id
                    )));
                }
            }
        }
        for (id, g) in &self.goals {
            let body = self
                .body(id)
                .ok_or_else(|| WorldError::InvalidScene(format!("goal for unknown body {id}")))?;
            if !body.kind.is_movable() {
                return Err(WorldError::InvalidScene(format!("goal for non-movable body {id}")));
            }
            if !g.is_finite() || !self.workspace.contains_rect(&body.rect_at(*g)) {
                return Err(WorldError::InvalidScene(format!(
                    "goal of {id} is outside the workspace"
                )));
            }
        }
        Ok(())
    }

    pub fn body(&self, id: &str) -> Option<&Body> {
        self.bodies.iter().find(|b| b.id == id)
    }

    pub fn try_body(&self, id: &str) -> Result<&Body, WorldError> {
        self.body(id).ok_or_else(|| WorldError::UnknownBody(id.to_string()))
    }

    pub fn robot(&self) -> &Body {
        self.bodies
            .iter()
            .find(|b| b.kind == BodyKind::Robot)
            .expect("scene invariant: exactly one robot")
    }

    pub fn robot_pose(&self) -> Pose2 {
        self.robot().pose
    }

    pub fn robot_size(&self) -> Size {
        self.robot().size
    }

    /// Robot side length (the robot is square; the larger extent is used otherwise).
    pub fn robot_side(&self) -> f64 {
        let s = self.robot_size();
        s.w.max(s.h)
    }

    pub fn walls(&self) -> impl Iterator<Item = &Body> {
        self.bodies.iter().filter(|b| b.kind == BodyKind::StaticWall)
    }

    pub fn movables(&self) -> impl Iterator<Item = &Body> {
        self.bodies.iter().filter(|b| b.kind.is_movable())
    }

    pub fn goal_ids(&self) -> BTreeSet<String> {
        self.goals.keys().cloned().collect()
    }

    pub fn goal_rect(&self, id: &str) -> Option<Rect> {
        let g = self.goals.get(id)?;
        Some(self.body(id)?.rect_at(*g))
    }

    /// Successor scene with one body moved.
    pub fn with_pose(&self, id: &str, pose: Pose2) -> Scene {
        let mut next = self.clone();
        if let Some(b) = next.bodies.iter_mut().find(|b| b.id == id) {
            b.pose = pose;
        }
        next
    }

    pub fn with_robot_pose(&self, pose: Pose2) -> Scene {
        let mut next = self.clone();
        if let Some(b) = next.bodies.iter_mut().find(|b| b.kind == BodyKind::Robot) {
            b.pose = pose;
        }
        next
    }

    /// Successor scene without the named bodies. The robot is never removed.
    pub fn without<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Scene {
        let drop: BTreeSet<&str> = ids.into_iter().collect();
        let mut next = self.clone();
        next.bodies
            .retain(|b| b.kind == BodyKind::Robot || !drop.contains(b.id.as_str()));
        next
    }

    /// Auxiliary scene that keeps only static walls, the robot and `keep`.
    pub fn statics_only(&self, keep: &[&str]) -> Scene {
        let mut next = self.clone();
        next.bodies
            .retain(|b| b.kind == BodyKind::StaticWall || b.kind == BodyKind::Robot || keep.contains(&b.id.as_str()));
        next
    }

    /// Stable fingerprint of all body poses, used as a cache key.
    pub fn signature(&self) -> u64 {
        let mut h = crate::seed::Fnv::new();
        for b in &self.bodies {
            h.write_str(&b.id);
            h.write_u64(b.pose.x.to_bits());
            h.write_u64(b.pose.y.to_bits());
        }
        h.finish()
    }
}

/// Does `body_id`'s footprint, placed at `pose`, hit the workspace boundary,
/// a static wall or any other body not listed in `ignore`?
///
/// The queried body never collides with itself.
pub fn collides(scene: &Scene, body_id: &str, pose: Pose2, ignore: &BTreeSet<String>) -> Result<bool, WorldError> {
    let body = scene.try_body(body_id)?;
    let rect = body.rect_at(pose);
    if !scene.workspace.contains_rect(&rect) {
        return Ok(true);
    }
    Ok(scene
        .bodies
        .iter()
        .filter(|b| b.id != body_id && !ignore.contains(&b.id))
        .any(|b| b.rect().overlaps(&rect)))
}

/// Default placement tolerance for an object: a quarter of its shorter side.
pub fn default_tolerance(size: Size) -> f64 {
    0.25 * size.min_side()
}

/// Goal objects whose center lies within `tol` of their goal.
pub fn verify_placements(scene: &Scene, tol: f64) -> BTreeSet<String> {
    scene
        .goals
        .iter()
        .filter(|(id, g)| scene.body(id).is_some_and(|b| b.pose.dist(**g) <= tol))
        .map(|(id, _)| id.clone())
        .collect()
}

/// Like [`verify_placements`] but with each object's own default tolerance.
pub fn placed_objects(scene: &Scene) -> BTreeSet<String> {
    scene
        .goals
        .iter()
        .filter(|(id, g)| {
            scene
                .body(id)
                .is_some_and(|b| b.pose.dist(**g) <= default_tolerance(b.size))
        })
        .map(|(id, _)| id.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scene() -> Scene {
        let ws = Rect::from_bounds(0.0, 0.0, 8.0, 8.0);
        let bodies = vec![
            Body::new("wall", BodyKind::StaticWall, Size::new(0.2, 4.0), Pose2::new(4.0, 2.0)),
            Body::new("a", BodyKind::GoalObject, Size::new(1.0, 1.0), Pose2::new(2.0, 2.0)),
            Body::new(
                "b",
                BodyKind::MovableObstacle,
                Size::new(1.0, 1.0),
                Pose2::new(2.0, 5.0),
            ),
            Body::new("robot", BodyKind::Robot, Size::new(0.5, 0.5), Pose2::new(6.0, 6.0)),
        ];
        let mut goals = BTreeMap::new();
        goals.insert("a".to_string(), Pose2::new(6.0, 2.0));
        Scene::new(ws, bodies, goals, 1).unwrap()
    }

    #[test]
    fn collides_with_wall_and_bodies() {
        let s = scene();
        let none = BTreeSet::new();
        assert!(collides(&s, "a", Pose2::new(4.0, 2.0), &none).unwrap());
        let own: BTreeSet<String> = ["a".to_string()].into();
        assert!(!collides(&s, "a", Pose2::new(2.0, 2.0), &own).unwrap());
        // half-overlap along x
        assert!(collides(&s, "a", Pose2::new(2.5, 5.0), &none).unwrap());
        assert!(collides(&s, "a", Pose2::new(-1.0, 2.0), &none).unwrap());
        assert!(collides(&s, "ghost", Pose2::new(1.0, 1.0), &none).is_err());
    }

    #[test]
    fn ignore_set_is_respected() {
        let s = scene();
        let ign: BTreeSet<String> = ["b".to_string()].into();
        assert!(!collides(&s, "a", Pose2::new(2.0, 5.0), &ign).unwrap());
    }

    #[test]
    fn placement_threshold() {
        let s = scene();
        let tol = 0.25;
        let at_goal = s.with_pose("a", Pose2::new(6.0, 2.0));
        assert!(verify_placements(&at_goal, tol).contains("a"));
        let near = s.with_pose("a", Pose2::new(6.0 + 0.5 * tol, 2.0));
        assert!(verify_placements(&near, tol).contains("a"));
        let far = s.with_pose("a", Pose2::new(6.0 + 2.0 * tol, 2.0));
        assert!(!verify_placements(&far, tol).contains("a"));
    }

    #[test]
    fn rejects_overlapping_bodies() {
        let mut s = scene();
        s.bodies[2].pose = Pose2::new(2.5, 2.0);
        assert!(s.validate().is_err());
    }
}
