use proptest::prelude::*;

use rearrange::bench::{gen_m_block, write_csv, BenchRecord};
use rearrange::planner::{mo_segman, replay, PlannerConfig, Status, StepKind};
use rearrange::sequencer::{respects, solve_patsp, topological, CostMatrix};
use rearrange::world::scenario::{parse_scenario, scenario_to_string};
use rearrange::world::{edt, placed_objects, Pose2};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_blocks_are_valid_and_round_trip(m in 1usize..=6, seed in 0u64..1000) {
        let scene = gen_m_block(m, seed).unwrap();
        prop_assert!(scene.validate().is_ok());
        prop_assert_eq!(scene.goals.len(), m);
        let ws = scene.workspace;
        let mut rects = Vec::new();
        for b in scene.movables() {
            prop_assert!(ws.contains_rect(&b.rect()));
            prop_assert!(ws.contains_rect(&scene.goal_rect(&b.id).unwrap()));
            rects.push(b.rect());
        }
        for (i, a) in rects.iter().enumerate() {
            for b in &rects[i + 1..] {
                prop_assert!(!a.overlaps(b));
            }
        }
        prop_assert_eq!(&gen_m_block(m, seed).unwrap(), &scene);
        prop_assert_eq!(parse_scenario(&scenario_to_string(&scene)).unwrap(), scene);
    }

    #[test]
    fn edt_is_zero_on_obstacles_and_one_lipschitz(bits in proptest::collection::vec(any::<bool>(), 12 * 9)) {
        let (rows, cols) = (12, 9);
        let mut mask = bits;
        mask[0] = true;
        let d = edt(&mask, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                let v = d.get(r, c);
                prop_assert_eq!(v == 0.0, mask[r * cols + c]);
                if c + 1 < cols {
                    prop_assert!((v - d.get(r, c + 1)).abs() <= 1.0 + 1e-12);
                }
                if r + 1 < rows {
                    prop_assert!((v - d.get(r + 1, c)).abs() <= 1.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn patsp_respects_precedence_and_beats_any_topological_order(
        pts in proptest::collection::vec((0.0f64..8.0, 0.0f64..8.0, 0.0f64..8.0, 0.0f64..8.0), 1..9),
        edges in proptest::collection::vec((0usize..8, 0usize..8), 0..10),
    ) {
        let n = pts.len();
        let starts: Vec<Pose2> = pts.iter().map(|p| Pose2::new(p.0, p.1)).collect();
        let goals: Vec<Pose2> = pts.iter().map(|p| Pose2::new(p.2, p.3)).collect();
        let cost = CostMatrix::euclidean(Pose2::new(0.0, 0.0), &starts, &goals);
        // orient every edge forward in index order so the precedences are acyclic
        let prec: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(a, b)| (a % n, b % n))
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        let (order, c) = solve_patsp(&cost, &prec).unwrap();
        prop_assert!(respects(&order, &prec));
        prop_assert_eq!(cost.tour_cost(&order), c);
        let topo = topological(n, &prec).unwrap();
        prop_assert!(c <= cost.tour_cost(&topo) + 1e-12);
    }

    #[test]
    fn csv_records_round_trip(
        rows in proptest::collection::vec((0u64..100, 0usize..50, 0usize..10, 0.0f64..500.0, 0.0f64..100.0, 0.0f64..1.0), 0..6),
    ) {
        let records: Vec<BenchRecord> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| BenchRecord {
                scenario: format!("case-{i}"),
                seed: r.0,
                status: "success".into(),
                pnp: r.1,
                replanning: r.2,
                travel_distance: r.3,
                wall_time: r.4 + r.4 * r.5,
                sequence_time: r.4 * r.5,
            })
            .collect();
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        let mut reader = csv::Reader::from_reader(buf.as_slice());
        let header: Vec<String> = reader.headers().unwrap().iter().map(str::to_string).collect();
        prop_assert_eq!(
            header,
            ["scenario", "seed", "status", "pnp", "replanning", "travel_distance_m", "wall_time_s", "sequence_time_s"]
        );
        let back: Vec<BenchRecord> = reader.deserialize().collect::<Result<_, _>>().unwrap();
        prop_assert_eq!(back, records);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Whatever the planner reports as success replays cleanly and leaves
    /// every goal object on its goal.
    #[test]
    fn successful_plans_replay_and_place_everything(m in 1usize..=3, seed in 0u64..500) {
        let scene = gen_m_block(m, seed).unwrap();
        let cfg = PlannerConfig { seed, ..PlannerConfig::default() };
        let result = mo_segman(&scene, &cfg).unwrap();
        prop_assert_eq!(result.status, Status::Success);
        let end = replay(&scene, &result.steps).unwrap();
        prop_assert_eq!(&end, &result.final_scene);
        prop_assert_eq!(placed_objects(&end), scene.goal_ids());
        let pnp: usize = result.steps.iter().map(|s| s.plan.pairs.len()).sum();
        prop_assert_eq!(pnp, result.metrics.pnp_count);
        let places = result.steps.iter().filter(|s| s.kind == StepKind::Place).count();
        prop_assert!(places >= m);
        prop_assert!(result.metrics.wall_time >= result.metrics.sequence_time);
    }
}
