//! Bundled scenarios and the random M-block generator.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::BenchError;
use crate::motion::{plan_object_path, robot_fits, MotionParams, Side};
use crate::seed;
use crate::world::scenario::{parse_scenario, ROBOT_ID};
use crate::world::{Body, BodyKind, Pose2, Rect, Scene, Size};

/// Built-in scenario texts by name.
pub const BUILTIN: &[(&str, &str)] = &[
    ("o-room", include_str!("../../scenarios/o_room.toml")),
    ("slot", include_str!("../../scenarios/slot.toml")),
    ("four-blocks", include_str!("../../scenarios/four_blocks.toml")),
    ("mo-3-block", include_str!("../../scenarios/mo_3_block.toml")),
    ("doorway", include_str!("../../scenarios/doorway.toml")),
    ("nested", include_str!("../../scenarios/nested.toml")),
    ("detour", include_str!("../../scenarios/detour.toml")),
];

pub fn builtin(name: &str) -> Result<Scene, BenchError> {
    let text = BUILTIN
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| BenchError::UnknownScenario(name.to_string()))?;
    Ok(parse_scenario(text)?)
}

const SAMPLE_LIMIT: usize = 10_000;
const OBJECT: Size = Size { w: 0.5, h: 0.5 };
/// Free space kept around every sampled body.
const GAP: f64 = 0.1;

/// Divider with two doors, objects start west of it and go east.
fn m_block_walls() -> Vec<Body> {
    let wall = |id: &str, y0: f64, y1: f64| {
        Body::new(
            id,
            BodyKind::StaticWall,
            Size::new(0.2, y1 - y0),
            Pose2::new(4.0, 0.5 * (y0 + y1)),
        )
    };
    vec![
        wall("divider_s", 0.0, 1.5),
        wall("divider_mid", 2.5, 5.5),
        wall("divider_n", 6.5, 8.0),
    ]
}

/// Random scene with `m` goal objects west of a two-door divider and their
/// goals east of it. Every object has a static path to its goal and room
/// for a grasp at both ends.
pub fn gen_m_block(m: usize, seed: u64) -> Result<Scene, BenchError> {
    if m == 0 {
        return Err(BenchError::EmptyBlock);
    }
    let workspace = Rect::from_bounds(0.0, 0.0, 8.0, 8.0);
    let robot = Body::new(ROBOT_ID, BodyKind::Robot, Size::new(0.5, 0.5), Pose2::new(0.5, 7.5));
    let walls = m_block_walls();
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(seed, "m-block", m as u64));
    let params = MotionParams::default();
    let mut taken: Vec<Rect> = walls.iter().map(|w| w.rect()).chain([robot.rect()]).collect();
    let mut bodies = walls.clone();
    let mut goals = BTreeMap::new();
    let mut attempts = 0;
    let base = Scene::new(
        workspace,
        walls.iter().cloned().chain([robot.clone()]).collect(),
        BTreeMap::new(),
        seed,
    )
    .map_err(|e| BenchError::Suite(e.to_string()))?;
    let mut k = 0;
    while k < m {
        if attempts >= SAMPLE_LIMIT {
            return Err(BenchError::Saturated { m, attempts });
        }
        attempts += 1;
        let start = Pose2::new(rng.gen_range(0.5..3.4), rng.gen_range(0.5..7.5));
        let goal = Pose2::new(rng.gen_range(4.6..7.5), rng.gen_range(0.5..7.5));
        let (sr, gr) = (Rect::centered(start, OBJECT), Rect::centered(goal, OBJECT));
        let pad = Pose2::new(GAP, GAP);
        if taken
            .iter()
            .any(|t| t.inflate(pad).overlaps(&sr) || t.inflate(pad).overlaps(&gr))
        {
            continue;
        }
        let id = format!("o{k}");
        let body = Body::new(id.clone(), BodyKind::GoalObject, OBJECT, start);
        let mut alone = base.clone();
        alone.bodies.push(body.clone());
        let graspable = |p: Pose2| {
            Side::ALL
                .iter()
                .any(|&s| robot_fits(&alone, &id, p, s).unwrap_or(false))
        };
        if !graspable(start) || !graspable(goal) {
            continue;
        }
        if plan_object_path(
            &alone,
            &id,
            goal,
            &params,
            seed::derive(seed, "m-block-path", attempts as u64),
        )
        .is_err()
        {
            continue;
        }
        taken.push(sr);
        taken.push(gr);
        bodies.push(body);
        goals.insert(id, goal);
        k += 1;
    }
    bodies.push(robot);
    Scene::new(workspace, bodies, goals, seed).map_err(|e| BenchError::Suite(e.to_string()))
}
