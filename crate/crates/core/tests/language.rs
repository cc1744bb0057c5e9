//! Language enumeration across every presentation: counting oracles, closure
//! properties and determinism.

use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symdyn::linalg::sft_word_counts;
use symdyn::*;

fn matrix(k: usize) -> impl Strategy<Value = Vec<Vec<u8>>> {
    prop::collection::vec(prop::collection::vec(0u8..=1, k), k)
}

fn any_sft() -> impl Strategy<Value = ShiftModel> {
    (2usize..=4).prop_flat_map(matrix).prop_filter_map("no live symbol", |m| ShiftModel::sft(m).ok())
}

fn any_model() -> impl Strategy<Value = ShiftModel> {
    prop_oneof![
        any_sft(),
        prop::sample::select(vec!["10", "110", "210", "2102001", "1100", "201"])
            .prop_map(|p| ShiftModel::beta(Word::new(w(p).symbols().iter().copied().cycle().take(40).collect())).unwrap()),
        prop::sample::select(vec!["0,1", "1..+2", "0..+3", "2,3,5", "0.."])
            .prop_map(|s| ShiftModel::sgap(GapSet::parse(s).unwrap())),
        Just(ShiftModel::Sofic(Sofic::new(2, 2, vec![(0, 0, 1), (0, 1, 0), (1, 0, 0)]).unwrap())),
    ]
}

/// A uniformly random path through the trie of length `n`.
fn random_word(lang: &Language, n: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let mut node = lang.node(&[]).unwrap();
    let mut out = Vec::new();
    for _ in 0..n {
        let next: Vec<u8> = lang.followers(node).collect();
        if next.is_empty() {
            break;
        }
        let a = next[rng.gen_range(0..next.len())];
        out.push(a);
        node = lang.child(node, a).unwrap();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sft_counts_match_matrix_powers(model in any_sft()) {
        let lang = enumerate_language(&model, 10).unwrap();
        let oracle = sft_word_counts(&model.as_sft().unwrap().live_matrix(), 10);
        let oracle: Vec<u64> = oracle.iter().map(|c| c.to_u64().unwrap()).collect();
        prop_assert_eq!(lang.counts(), oracle);
    }

    #[test]
    fn counts_are_submultiplicative(model in any_model()) {
        let lang = enumerate_language(&model, 12).unwrap();
        prop_assert_eq!(lang.subadditivity_violation(), None);
    }

    #[test]
    fn subwords_of_admissible_words_are_admissible(model in any_model(), seed in any::<u64>()) {
        let lang = enumerate_language(&model, 12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let x = random_word(&lang, 12, &mut rng);
            let i = rng.gen_range(0..=x.len());
            let j = rng.gen_range(i..=x.len());
            prop_assert!(lang.contains(&x[i..j]));
            prop_assert!(model.accepts(&Word::from_slice(&x[i..j])).unwrap());
        }
    }

    #[test]
    fn enumeration_is_deterministic(model in any_model()) {
        let a = enumerate_language(&model, 10).unwrap();
        let b = enumerate_language(&model, 10).unwrap();
        prop_assert_eq!(a.dump(), b.dump());
    }

    #[test]
    fn collections_never_exceed_the_language(model in any_model(), modulus in 2usize..5) {
        let lang = enumerate_language(&model, 10).unwrap();
        let pred = WordPredicate::new("ones", move |w| w.iter().filter(|&&a| a == 1).count() % modulus == 0);
        let d = OrbitCollection::new(&lang, pred);
        for n in 0..=10 {
            prop_assert!(d.count(n) <= lang.count(n));
        }
    }
}

#[test]
fn every_gap_allowed_is_the_full_shift() {
    let sgap = enumerate_language(&ShiftModel::sgap(GapSet::all()), 16).unwrap();
    let full = enumerate_language(&ShiftModel::full_shift(2).unwrap(), 16).unwrap();
    assert_eq!(sgap.dump(), full.dump());
}

#[test]
fn dump_round_trips() {
    let lang = enumerate_language(&ShiftModel::golden_mean(), 12).unwrap();
    let back = Language::from_dump(&lang.dump()).unwrap();
    assert_eq!(back.counts(), lang.counts());
    back.check_prefix_closed().unwrap();
}

#[test]
fn depth_budget_is_enforced() {
    let err = enumerate_language(&ShiftModel::golden_mean(), 40).unwrap_err();
    assert!(err.to_string().contains("40"), "{err}");
}
