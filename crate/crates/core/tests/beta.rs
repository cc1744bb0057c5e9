//! β-transformation against the β-shift: coding, cylinder intervals and separated sets.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use symdyn::model::{beta_membership, BetaGraph};
use symdyn::separated::separated_trend;
use symdyn::*;

fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `β = p/q ∈ (1, 3]` with its exact 40-digit expansion of 1.
fn any_beta() -> impl Strategy<Value = (ExactBetaMap, Word)> {
    (2i64..=40).prop_flat_map(|q| (q + 1..=3 * q).prop_map(move |p| (p, q))).prop_map(|(p, q)| {
        let map = BetaMap::new(rational(p, q)).unwrap();
        let z = map.quasi_greedy_z(40).digits;
        (map, z)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn three_admissibility_oracles_agree(
        (map, z) in any_beta(),
        word in prop::collection::vec(0u8..3, 1..=12),
    ) {
        let graph = BetaGraph::build(&z, z.len()).unwrap();
        let word: Vec<u8> = word.into_iter().map(|a| a % map.alphabet_size() as u8).collect();
        let lex = beta_membership(&z, &Word::from_slice(&word)).unwrap();
        let path = graph.walk(&word).unwrap().is_some();
        let interval = map.interval_of_word(&word).is_nonempty();
        prop_assert_eq!(lex, path);
        prop_assert_eq!(Some(lex), interval);
    }

    #[test]
    fn coding_conjugates_map_and_shift((map, _) in any_beta(), num in 0i64..1_000_000, n in 1usize..=30) {
        let x = rational(num, 1_000_000);
        let code = map.code(&x, n + 1);
        prop_assume!(code.certified_len() == n + 1);
        let image = map.code(&map.apply(&x).unwrap(), n);
        prop_assert_eq!(image.digits.symbols(), &code.digits.symbols()[1..]);
    }

    #[test]
    fn cylinders_partition_the_unit_interval((map, z) in any_beta(), n in 1usize..=7) {
        let lang = enumerate_language(&ShiftModel::beta(z).unwrap(), n).unwrap();
        let mut total = BigRational::from_integer(0.into());
        lang.for_each_word(n, |w| total += map.interval_of_word(w).length().unwrap());
        prop_assert!(total.is_one());
    }
}

#[test]
fn golden_cylinders_partition_exactly() {
    let map = GoldenBetaMap::new(QuadSurd::golden()).unwrap();
    let lang = enumerate_language(&ShiftModel::beta(map.quasi_greedy_z(30).digits).unwrap(), 12).unwrap();
    for n in 1..=12 {
        let mut total = QuadSurd::rational(rational(0, 1));
        lang.for_each_word(n, |w| total = total.clone() + map.interval_of_word(w).length().unwrap());
        assert_eq!(total, QuadSurd::rational(rational(1, 1)), "n = {n}");
    }
}

#[test]
fn interval_beta_codes_like_exact_beta() {
    let exact = BetaMap::new(rational(5, 2)).unwrap();
    let float = FloatBetaMap::new(Interval::point(2.5)).unwrap();
    let x = rational(3, 10);
    let a = exact.code(&x, 20);
    let b = float.code(&Interval::point(0.3), 20);
    let k = b.certified_len();
    assert!(k >= 10, "only {k} certified digits");
    assert_eq!(&a.digits.symbols()[..k], &b.digits.symbols()[..k]);
}

#[test]
fn separated_counts_grow_as_eps_shrinks() {
    let f = |x: f64| (2.5 * x).fract();
    let rows = separated_trend(&f, &[0.2, 0.05, 0.1, 0.15, 0.03], 5, 20_000).unwrap();
    assert!(rows.windows(2).all(|p| p[0].eps > p[1].eps && p[0].lower_bound <= p[1].lower_bound));
    assert!(rows.last().unwrap().lower_bound > rows[0].lower_bound);
}

#[test]
fn greedy_sets_are_separated() {
    let f = |x: f64| (2.0 * x).fract();
    for n in [1, 4, 8] {
        let s = greedy_separated_set(&f, 0.1, n, 4000).unwrap();
        assert!(s.verify(&f), "n = {n}");
    }
}
