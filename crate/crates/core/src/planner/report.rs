//! Stable text rendering of a [`PlanResult`].
//!
//! Wall-clock figures are left out so two runs with the same inputs render
//! byte for byte the same. A checksum over the exact waypoint bits catches
//! differences hidden by rounding.

use std::fmt::Write;

use super::PlanResult;
use crate::seed::Fnv;

pub fn to_text(result: &PlanResult) -> String {
    let mut out = String::new();
    let mut sum = Fnv::new();
    let _ = writeln!(out, "status: {}", result.status);
    let _ = writeln!(out, "steps: {}", result.steps.len());
    for (i, step) in result.steps.iter().enumerate() {
        let kind = match step.kind {
            super::StepKind::Place => "place",
            super::StepKind::Relocate => "relocate",
        };
        let _ = writeln!(
            out,
            "step {i}: {kind} {} for {} generation {} pairs {}",
            step.object_id,
            step.for_object,
            step.generation,
            step.plan.pairs.len()
        );
        for (j, pair) in step.plan.pairs.iter().enumerate() {
            let _ = writeln!(
                out,
                "  pair {j}: side {} pick {} {:.6} place {} {:.6}",
                pair.side,
                pair.pick.waypoints.len(),
                pair.pick.length,
                pair.place.waypoints.len(),
                pair.place.length
            );
            for p in pair.pick.waypoints.iter().chain(&pair.place.waypoints) {
                let (x, y) = p.bits();
                sum.write_u64(x);
                sum.write_u64(y);
            }
        }
    }
    let _ = writeln!(out, "final:");
    for b in result.final_scene.movables() {
        let _ = writeln!(out, "  {} {:.6} {:.6}", b.id, b.pose.x, b.pose.y);
    }
    let r = result.final_scene.robot_pose();
    let _ = writeln!(out, "  robot {:.6} {:.6}", r.x, r.y);
    let m = &result.metrics;
    let _ = writeln!(out, "metrics:");
    let _ = writeln!(out, "  pnp_count: {}", m.pnp_count);
    let _ = writeln!(out, "  replanning_count: {}", m.replanning_count);
    let _ = writeln!(out, "  travel_distance: {:.6}", m.travel_distance);
    let _ = writeln!(out, "  sequence_generations: {}", m.sequence_generations);
    let _ = writeln!(out, "  failed_attempts: {}", m.failed_attempts);
    let _ = writeln!(out, "  goal_relocations: {}", m.goal_relocations);
    let _ = writeln!(out, "checksum: {:016x}", sum.finish());
    out
}
