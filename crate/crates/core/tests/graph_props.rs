mod common;

use common::oracles::{edges_on_optimal_cycles, grid, max_cycle_mean_by_cycles};
use common::{random_matrix, rng};
use maxplus_csr::graph::{critical_structure, matrix_max_cycle_mean};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn karp_matches_cycle_enumeration(seed in any::<u64>(), n in 1usize..=6) {
        let a = random_matrix(&mut rng(seed), n, 0.45, -20, 0);
        let karp = matrix_max_cycle_mean(&a).unwrap().value();
        let brute = max_cycle_mean_by_cycles(&grid(&a));
        match (karp, brute) {
            (None, None) => {}
            (Some(x), Some(y)) => prop_assert!((x - y).abs() < 1e-9, "{x} vs {y}"),
            other => prop_assert!(false, "{other:?}"),
        }
    }

    #[test]
    fn critical_edges_lie_on_optimal_cycles(seed in any::<u64>(), n in 1usize..=6) {
        let a = random_matrix(&mut rng(seed), n, 0.45, -20, 0);
        let Some(lambda) = matrix_max_cycle_mean(&a).unwrap().value() else { return Ok(()) };
        let cs = critical_structure(&a).unwrap();
        prop_assert!((cs.lambda - lambda).abs() < 1e-9);
        prop_assert_eq!(&cs.critical_edges, &edges_on_optimal_cycles(&grid(&a), lambda));
        for &(i, j) in &cs.critical_edges {
            prop_assert!(cs.is_critical(i) && cs.is_critical(j));
            prop_assert_eq!(cs.component_of(i), cs.component_of(j));
        }
        for comp in &cs.components {
            for &(u, v) in &comp.edges {
                let cu = comp.class_of(u).unwrap();
                let cv = comp.class_of(v).unwrap();
                prop_assert_eq!((cu + 1) % comp.cyclicity, cv);
            }
        }
        prop_assert_eq!(
            cs.global_cyclicity,
            cs.components.iter().map(|c| c.cyclicity).fold(1, |acc, g| acc * g / gcd(acc, g))
        );
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}
