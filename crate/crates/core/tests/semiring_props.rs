mod common;

use common::oracles::{grid, power_by_walks, product_by_walks};
use common::{random_matrix, rng};
use maxplus_csr::format::format_number;
use maxplus_csr::{Ensemble, MaxPlus, MaxPlusMatrix, Word};
use proptest::prelude::*;

fn cfg() -> ProptestConfig {
    ProptestConfig::with_cases(200)
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn powers_match_walk_enumeration(seed in any::<u64>(), n in 1usize..=5, k in 0usize..=6) {
        let a = random_matrix(&mut rng(seed), n, 0.6, -20, 0);
        let p = a.power(k).unwrap();
        if k == 0 {
            prop_assert_eq!(p, MaxPlusMatrix::identity(n));
        } else {
            prop_assert_eq!(grid(&p), power_by_walks(&grid(&a), k));
        }
    }

    #[test]
    fn products_match_walk_enumeration(seed in any::<u64>(), n in 1usize..=4, k in 1usize..=5) {
        let mut r = rng(seed);
        let gens: Vec<MaxPlusMatrix> = (0..2).map(|_| random_matrix(&mut r, n, 0.6, -20, 0)).collect();
        let word = common::random_word(&mut r, 2, k);
        let mut prod = MaxPlusMatrix::identity(n);
        for &l in word.letters() {
            prod = prod.multiply(&gens[l]).unwrap();
        }
        let g: Vec<_> = gens.iter().map(grid).collect();
        prop_assert_eq!(grid(&prod), product_by_walks(&g, word.letters()));
    }

    #[test]
    fn multiplication_is_associative_and_distributive(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, n, 0.5, -20, 0);
        let b = random_matrix(&mut r, n, 0.5, -20, 0);
        let c = random_matrix(&mut r, n, 0.5, -20, 0);
        prop_assert_eq!(
            a.multiply(&b).unwrap().multiply(&c).unwrap(),
            a.multiply(&b.multiply(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.multiply(&b.oplus(&c).unwrap()).unwrap(),
            a.multiply(&b).unwrap().oplus(&a.multiply(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.multiply(&MaxPlusMatrix::identity(n)).unwrap(), a.clone());
        prop_assert_eq!(
            a.multiply(&MaxPlusMatrix::epsilon(n, n)).unwrap(),
            MaxPlusMatrix::epsilon(n, n)
        );
    }

    #[test]
    fn star_solves_its_fixed_point_equation(seed in any::<u64>(), n in 1usize..=5) {
        let a = random_matrix(&mut rng(seed), n, 0.5, -20, 0);
        let star = a.kleene_star().unwrap();
        let rhs = MaxPlusMatrix::identity(n).oplus(&a.multiply(&star).unwrap()).unwrap();
        prop_assert_eq!(&star, &rhs);
        let plus = a.metric_matrix().unwrap();
        prop_assert_eq!(plus, a.multiply(&star).unwrap());
    }

    #[test]
    fn scalar_laws(x in -1000i32..1000, y in -1000i32..1000, z in -1000i32..1000) {
        let (x, y, z) = (MaxPlus::from(x), MaxPlus::from(y), MaxPlus::from(z));
        prop_assert_eq!(x.oplus(y), y.oplus(x));
        prop_assert_eq!(x.otimes(y.oplus(z)), x.otimes(y).oplus(x.otimes(z)));
        prop_assert_eq!(x.otimes(MaxPlus::EPSILON), MaxPlus::EPSILON);
        prop_assert_eq!(x.oplus(MaxPlus::EPSILON), x);
        prop_assert_eq!(x.otimes(MaxPlus::ZERO), x);
    }

    #[test]
    fn numbers_print_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::ZERO) {
        let s = format_number(x);
        prop_assert_eq!(s.parse::<f64>().unwrap(), x);
    }

    #[test]
    fn matrix_json_round_trip(seed in any::<u64>(), n in 1usize..=5) {
        let a = random_matrix(&mut rng(seed), n, 0.5, -20, 0).scale(MaxPlus::finite(0.25));
        let text = serde_json::to_string(&a).unwrap();
        let back: MaxPlusMatrix = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn words_print_round_trip(letters in proptest::collection::vec(0usize..9, 1..30)) {
        let w = Word::new(letters).unwrap();
        let back: Word = w.to_string().parse().unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn visualised_generators_are_nonpositive(seed in any::<u64>()) {
        let e = common::p0_ensemble(seed, 6, 3);
        for v in &e.visualised {
            prop_assert!(v.max_entry() <= MaxPlus::ZERO);
        }
        prop_assert!(e.a_inf.le(&e.a_sup));
    }
}

#[test]
fn ensemble_rejects_mismatched_sizes() {
    let a = MaxPlusMatrix::identity(2);
    let b = MaxPlusMatrix::identity(3);
    assert!(Ensemble::build(vec![a, b]).is_err());
}
