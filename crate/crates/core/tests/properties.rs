use proptest::prelude::*;

use itolog::coeff::{descent_coefficient, rat};
use itolog::expansion::ExpansionJson;
use itolog::numeric::{evaluate, evaluate_word, simulate, Binding, DriverSpec, Grid, PathSeed};
use itolog::qshuffle::{qsh_expansions, shuffle};
use itolog::surjection::{
    descent_set, diamond, diamond_with, pack, superset_coefficient_sum, DiamondStrategy, SurjElement, Surjection,
};
use itolog::{block_product, bullet, half_down, half_up, qsh, qsh_via_surjections, Block, BracketWord, Expansion};

fn block() -> impl Strategy<Value = Block> {
    prop::collection::vec(1u32..=4, 1..=2).prop_map(|ids| Block::from_ids(&ids).unwrap())
}

fn word(max_len: usize) -> impl Strategy<Value = BracketWord> {
    prop::collection::vec(block(), 0..=max_len).prop_map(BracketWord::new)
}

fn letter_word(max_len: usize) -> impl Strategy<Value = BracketWord> {
    prop::collection::vec(1u32..=4, 0..=max_len).prop_map(|ids| BracketWord::from_letters(&ids).unwrap())
}

fn expansion() -> impl Strategy<Value = Expansion> {
    prop::collection::vec((word(3), -6i64..=6, 1i64..=5), 0..5)
        .prop_map(|terms| Expansion::from_terms(terms.into_iter().map(|(w, p, q)| (w, rat(p, q)))))
}

/// Random words can reach weight 12 in a product; lift the cap once.
fn lift_caps() {
    itolog::limits::set_weight_cap(16);
}

fn surjection(max_arity: usize) -> impl Strategy<Value = Surjection> {
    prop::collection::vec(1u32..=4, 0..=max_arity).prop_map(|v| pack(&v))
}

proptest! {
    #[test]
    fn recursion_matches_surjection_sum(u in word(3), v in word(3)) {
        lift_caps();
        prop_assert_eq!(qsh(&u, &v).unwrap(), qsh_via_surjections(&u, &v).unwrap());
    }

    #[test]
    fn qsh_is_commutative(u in word(3), v in word(3)) {
        lift_caps();
        prop_assert_eq!(qsh(&u, &v).unwrap(), qsh(&v, &u).unwrap());
    }

    #[test]
    fn qsh_is_associative(u in word(2), v in word(2), w in word(2)) {
        lift_caps();
        let e = |x: &BracketWord| Expansion::from_word(x.clone());
        let left = qsh_expansions(&qsh(&u, &v).unwrap(), &e(&w)).unwrap();
        let right = qsh_expansions(&e(&u), &qsh(&v, &w).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn qsh_splits_into_half_products(u in word(3), v in word(3)) {
        lift_caps();
        prop_assume!(!u.is_empty() && !v.is_empty());
        let parts = half_up(&u, &v).unwrap().add(&half_down(&u, &v).unwrap()).add(&bullet(&u, &v).unwrap());
        prop_assert_eq!(qsh(&u, &v).unwrap(), parts);
    }

    #[test]
    fn qsh_preserves_weight_and_has_positive_coefficients(u in word(3), v in word(3)) {
        lift_caps();
        for (w, c) in &qsh(&u, &v).unwrap() {
            prop_assert_eq!(w.weight(), u.weight() + v.weight());
            prop_assert!(*c > rat(0, 1));
        }
    }

    #[test]
    fn shuffle_part_of_letter_words(u in letter_word(3), v in letter_word(3)) {
        lift_caps();
        let projected = itolog::shuffle_projection(&qsh(&u, &v).unwrap());
        prop_assert_eq!(projected, shuffle(&u, &v).unwrap());
    }

    #[test]
    fn block_product_is_commutative_and_associative(a in block(), b in block(), c in block()) {
        prop_assert_eq!(block_product(&a, &b), block_product(&b, &a));
        prop_assert_eq!(block_product(&block_product(&a, &b), &c), block_product(&a, &block_product(&b, &c)));
    }

    #[test]
    fn word_text_round_trips(w in word(4)) {
        prop_assert_eq!(BracketWord::parse_literal(&w.to_literal()).unwrap(), w.clone());
        prop_assert_eq!(BracketWord::parse_compact(&w.to_compact()).unwrap(), w);
    }

    #[test]
    fn expansion_text_and_json_round_trip(e in expansion()) {
        prop_assert_eq!(Expansion::parse_text(&e.to_text()).unwrap(), e.clone());
        let json = serde_json::to_string(&e.to_json()).unwrap();
        let back: ExpansionJson = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(Expansion::from_json(&back).unwrap(), e);
    }

    #[test]
    fn diamond_merge_matches_brute_force(f in surjection(3), g in surjection(3)) {
        prop_assert_eq!(
            diamond_with(&f, &g, DiamondStrategy::Merge).unwrap(),
            diamond_with(&f, &g, DiamondStrategy::BruteForce).unwrap()
        );
    }

    #[test]
    fn diamond_is_associative(f in surjection(2), g in surjection(2), h in surjection(2)) {
        let s = |x: &Surjection| SurjElement::from_surjection(x.clone());
        let left = diamond(&f, &g).unwrap().diamond(&s(&h)).unwrap();
        let right = s(&f).diamond(&diamond(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn diamond_terms_restrict_to_factors(f in surjection(3), g in surjection(3)) {
        let n = f.arity();
        for (h, c) in &diamond(&f, &g).unwrap() {
            prop_assert_eq!(h.arity(), n + g.arity());
            prop_assert_eq!(pack(&h.values()[..n]), f.clone());
            prop_assert_eq!(pack(&h.values()[n..]), g.clone());
            prop_assert_eq!(c.clone(), rat(1, 1));
        }
    }

    #[test]
    fn graded_json_round_trips(f in surjection(4), g in surjection(3)) {
        let e = SurjElement::from_surjection(f).add(&SurjElement::monomial(g, rat(-2, 3)));
        let json = serde_json::to_string(&e.to_graded_json()).unwrap();
        let back: Vec<itolog::surjection::GradedJson> = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(SurjElement::from_graded_json(&back).unwrap(), e);
    }

    #[test]
    fn superset_sum_matches_closed_form(n in 1usize..=9, mask in any::<u32>()) {
        let set: Vec<usize> = (1..n).filter(|i| mask & (1 << i) != 0).collect();
        prop_assert_eq!(superset_coefficient_sum(n, &set).unwrap(), descent_coefficient(n, set.len()));
    }

    #[test]
    fn descents_of_packed_words(v in prop::collection::vec(1u32..=5, 0..=6)) {
        let f = pack(&v);
        let expected: Vec<usize> = (1..v.len()).filter(|&i| v[i - 1] >= v[i]).collect();
        prop_assert_eq!(descent_set(&f), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quasi_shuffle_holds_on_paths(u in word(3), v in word(3), seed in any::<u64>()) {
        lift_caps();
        let grid = Grid::uniform(1.0, 64).unwrap();
        let specs = [
            DriverSpec::Brownian { sigma: 1.0 },
            DriverSpec::Poisson { lambda: 5.0 },
            DriverSpec::LinearDrift { a: -0.7 },
            DriverSpec::Brownian { sigma: 0.3 },
        ];
        let binding: Binding = specs
            .iter()
            .enumerate()
            .map(|(i, s)| (i as u32 + 1, simulate(s, &grid, PathSeed::new(seed, 0, i as u64)).unwrap()))
            .collect();
        let lhs = evaluate(&qsh(&u, &v).unwrap(), &binding).unwrap();
        let rhs = evaluate_word(&u, &binding).unwrap() * evaluate_word(&v, &binding).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs().max(rhs.abs())), "{} vs {}", lhs, rhs);
    }
}
