//! SVG pictures of scenes and planned motions.

use std::fmt::Write;

use crate::motion::{MotionPlan, Path};
use crate::world::{BodyKind, Pose2, Rect, Scene};

const PX_PER_M: f64 = 80.0;
const PALETTE: [&str; 8] = [
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4", "#f032e6", "#9a6324",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Canvas {
    ws: Rect,
}

impl Canvas {
    fn x(&self, x: f64) -> f64 {
        (x - self.ws.min.x) * PX_PER_M
    }

    fn y(&self, y: f64) -> f64 {
        (self.ws.max.y - y) * PX_PER_M
    }

    fn rect(&self, out: &mut String, r: &Rect, class: &str, id: &str, style: &str) {
        let _ = writeln!(
            out,
            r#"  <rect class="{class}" data-id="{}" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" {style}/>"#,
            escape(id),
            self.x(r.min.x),
            self.y(r.max.y),
            r.width() * PX_PER_M,
            r.height() * PX_PER_M,
        );
    }

    fn polyline(&self, out: &mut String, points: &[Pose2], class: &str, stroke: &str) {
        let pts: Vec<String> = points
            .iter()
            .map(|p| format!("{:.2},{:.2}", self.x(p.x), self.y(p.y)))
            .collect();
        let _ = writeln!(
            out,
            r#"  <polyline class="{class}" points="{}" fill="none" stroke="{stroke}" stroke-width="1.5"/>"#,
            pts.join(" ")
        );
    }
}

/// Standalone SVG of `scene`, with one polyline per path of `plans` if
/// given (robot approach legs dashed).
pub fn render_svg(scene: &Scene, plans: Option<&[MotionPlan]>) -> String {
    let c = Canvas { ws: scene.workspace };
    let (w, h) = (scene.workspace.width() * PX_PER_M, scene.workspace.height() * PX_PER_M);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#
    );
    c.rect(
        &mut out,
        &scene.workspace,
        "workspace",
        "workspace",
        r##"fill="#fafafa" stroke="#000" stroke-width="2""##,
    );
    let color = |id: &str| {
        let k = scene.goals.keys().position(|g| g == id).unwrap_or(0);
        PALETTE[k % PALETTE.len()]
    };
    for id in scene.goals.keys() {
        if let Some(r) = scene.goal_rect(id) {
            let style = format!(
                r#"fill="none" stroke="{}" stroke-dasharray="4 3" stroke-width="1.5""#,
                color(id)
            );
            c.rect(&mut out, &r, "goal", id, &style);
        }
    }
    for b in &scene.bodies {
        let (class, style) = match b.kind {
            BodyKind::StaticWall => ("wall", r##"fill="#333""##.to_string()),
            BodyKind::MovableObstacle => ("movable", r##"fill="#fff" stroke="#555""##.to_string()),
            BodyKind::GoalObject => ("goal-object", format!(r##"fill="{}" stroke="#222""##, color(&b.id))),
            BodyKind::Robot => ("robot", r##"fill="#ffd700" stroke="#222""##.to_string()),
        };
        c.rect(&mut out, &b.rect(), class, &b.id, &style);
    }
    for plan in plans.unwrap_or_default() {
        for pair in &plan.pairs {
            let path_of = |p: &Path| p.waypoints.clone();
            c.polyline(&mut out, &path_of(&pair.pick), "pick", "#888");
            c.polyline(&mut out, &path_of(&pair.place), "place", color(&pair.object_id));
        }
    }
    out.push_str("</svg>\n");
    out
}
