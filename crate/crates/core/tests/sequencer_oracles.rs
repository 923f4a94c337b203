mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rearrange::sequencer::{break_cycles, break_cycles_greedy, enumerate_cycles, DEFAULT_CYCLE_CAP};

#[test]
fn cycle_removal_stays_near_the_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0i64;
    for _ in 0..300 {
        let n = rng.gen_range(2..=8);
        let density = rng.gen_range(0.1..0.7);
        let g = common::random_digraph(&mut rng, n, density);
        let (dag, removed) = break_cycles(&g, DEFAULT_CYCLE_CAP);
        assert!(dag.is_acyclic());
        let fas = common::min_feedback_arc_set(&g);
        worst = worst.max(removed.len() as i64 - fas as i64);
        assert!(removed.len() <= fas + 2, "removed {} vs minimum {fas}", removed.len());
        let (gdag, _) = break_cycles_greedy(&g);
        assert!(gdag.is_acyclic());
    }
    println!("worst excess over minimum: {worst}");
}

#[test]
fn enumeration_counts_match_subset_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let n = rng.gen_range(2..=6);
        let g = common::random_digraph(&mut rng, n, 0.5);
        let found = enumerate_cycles(&g, usize::MAX).cycles.len();
        assert_eq!(found, common::count_simple_cycles(&g));
    }
}
