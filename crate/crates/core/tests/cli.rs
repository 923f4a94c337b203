use std::path::Path;
use std::process::{Command, Output};

fn rearrange(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rearrange"))
        .args(args)
        .env_remove("REARRANGE_LOG")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn plan_builtin_succeeds_with_stable_report() {
    let first = rearrange(&["plan", "doorway", "--seed", "3"]);
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let text = stdout(&first);
    assert!(text.starts_with("status: success\n"));
    assert!(text.contains("relocate blocker for box"));
    let second = rearrange(&["plan", "doorway", "--seed", "3"]);
    assert_eq!(stdout(&second), text);
}

#[test]
fn unknown_scenario_and_bad_flags_exit_with_two() {
    assert_eq!(rearrange(&["plan", "no-such-scene"]).status.code(), Some(2));
    assert_eq!(
        rearrange(&["plan", "doorway", "--sequencer", "psychic"]).status.code(),
        Some(2)
    );
    assert_eq!(rearrange(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn walled_goal_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("walled.toml");
    std::fs::write(
        &path,
        r#"seed = 0

[workspace]
xmin = 0.0
ymin = 0.0
xmax = 8.0
ymax = 8.0

[[walls]]
id = "pen_w"
x = 5.0
y = 6.5
w = 0.2
h = 3.0

[[walls]]
id = "pen_s"
x = 6.5
y = 5.0
w = 3.0
h = 0.2

[[movables]]
id = "box"
w = 0.5
h = 0.5
x = 2.0
y = 2.0
goal = { x = 7.0, y = 7.0 }

[robot]
side = 0.5
x = 1.0
y = 1.0
"#,
    )
    .unwrap();
    let out = rearrange(&["plan", path.to_str().unwrap(), "--time-limit", "20"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("status: iter-exhausted"));
}

#[test]
fn generate_then_plan_render_and_bench() {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("m3.toml");
    let scene_arg = scene.to_str().unwrap();
    let gen = rearrange(&["gen", "m-block", "--m", "3", "--seed", "5", "--out", scene_arg]);
    assert_eq!(gen.status.code(), Some(0));

    let svg = dir.path().join("plan.svg");
    let plan = rearrange(&["plan", scene_arg, "--svg-out", svg.to_str().unwrap()]);
    assert_eq!(plan.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    assert!(doc.descendants().any(|n| n.has_tag_name("polyline")));

    let render = rearrange(&["render", scene_arg]);
    assert_eq!(render.status.code(), Some(0));
    roxmltree::Document::parse(&stdout(&render)).unwrap();

    let suite = dir.path().join("suite.toml");
    std::fs::write(
        &suite,
        "seeds = [1, 2]\n[[scenarios]]\npath = \"m3.toml\"\n[[scenarios]]\nbuiltin = \"slot\"\n",
    )
    .unwrap();
    let csv_out = dir.path().join("out.csv");
    let bench = rearrange(&[
        "bench",
        suite.to_str().unwrap(),
        "--csv-out",
        csv_out.to_str().unwrap(),
        "--workers",
        "2",
    ]);
    assert_eq!(
        bench.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&bench.stderr)
    );
    let csv = std::fs::read_to_string(&csv_out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "scenario,seed,status,pnp,replanning,travel_distance_m,wall_time_s,sequence_time_s"
    );
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("m3.toml,1,success"));
    assert!(lines[4].starts_with("slot,2,success"));
}

#[test]
fn broken_suite_entry_is_recorded_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite.toml");
    std::fs::write(
        &suite,
        "[[scenarios]]\npath = \"missing.toml\"\n[[scenarios]]\nbuiltin = \"doorway\"\n",
    )
    .unwrap();
    let out = rearrange(&["bench", suite.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("missing.toml,0,parse-error"));
    assert!(text.contains("doorway,0,success"));
    assert!(Path::new(&suite).exists());
}
