//! Specification certificates, decompositions and the entropy-production constructions.

use proptest::prelude::*;

use symdyn::decomposition::DecompositionRule;
use symdyn::linalg::is_primitive;
use symdyn::specification::revalidate;
use symdyn::*;

fn primitive_sft() -> impl Strategy<Value = ShiftModel> {
    (2usize..=3)
        .prop_flat_map(|k| prop::collection::vec(prop::collection::vec(0u8..=1, k), k))
        .prop_filter("primitive", |m| is_primitive(m))
        .prop_map(|m| ShiftModel::sft(m).unwrap())
}

fn beta_model(period: &str) -> ShiftModel {
    let p = w(period).into_symbols();
    ShiftModel::beta(Word::new(p.iter().copied().cycle().take(40).collect())).unwrap()
}

fn decompositions() -> Vec<(ShiftModel, Decomposition)> {
    let mut out = Vec::new();
    for z in ["10", "110", "2102001"] {
        let m = beta_model(z);
        let d = Decomposition::build(&m, DecompositionRule::BetaCanonical).unwrap();
        out.push((m, d));
    }
    let golden = ShiftModel::golden_mean();
    let phi = Potential::by_first_symbol(&[0.5, -1.0]).unwrap();
    out.push((golden.clone(), Decomposition::build(&golden, DecompositionRule::Threshold { phi, r: 0.2 }).unwrap()));
    out.push((golden.clone(), Decomposition::build(&golden, DecompositionRule::Trivial).unwrap()));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn glue_entries_revalidate(model in primitive_sft(), exact in any::<bool>()) {
        let lang = enumerate_language(&model, 12).unwrap();
        let variant = if exact { SpecVariant::Exact } else { SpecVariant::AtMost };
        let outcome = check_specification(&OrbitCollection::full(&lang), Some(&model), &SpecOptions::new(4, 6).variant(variant)).unwrap();
        let cert = outcome.certificate().expect("primitive SFTs have specification");
        prop_assert_eq!(cert.glue.len(), cert.pairs_checked);
        for e in &cert.glue {
            prop_assert!(model.concat_check(&e.v, &e.u, &e.w).unwrap());
        }
        prop_assert!(revalidate(cert, &model).unwrap());
    }

    #[test]
    fn production_map_is_injective(model in primitive_sft(), a in 0u8..3, b in 0u8..3, len in 1usize..=2) {
        let k = model.alphabet_size() as u8;
        let (a, b) = (a % k, b % k);
        prop_assume!(a != b);
        let w1 = Word::repeat_symbol(a, len);
        let w2 = Word::new([vec![b], vec![a; len - 1]].concat());
        prop_assume!(model.accepts(&w1).unwrap() && model.accepts(&w2).unwrap());
        let lang = enumerate_language(&model, 12).unwrap();
        let opts = SpecOptions::new(4, 6).variant(SpecVariant::Exact);
        let outcome = check_specification(&OrbitCollection::full(&lang), Some(&model), &opts).unwrap();
        let cert = outcome.certificate().unwrap();
        let rep = entropy_production_bound(&model, cert, &w1, &w2, 6).unwrap();
        prop_assert!(rep.injective);
        prop_assert!(rep.rows.iter().all(|r| r.distinct == 1 << r.k));
    }
}

#[test]
fn g_m_grows_with_m_and_exhausts_the_language() {
    for (model, dec) in decompositions() {
        let lang = enumerate_language(&model, 12).unwrap();
        for n in 1..=12 {
            let counts: Vec<u64> = (0..=n).map(|m| OrbitCollection::new(&lang, dec.g_m(m)).count(n)).collect();
            assert!(counts.windows(2).all(|p| p[0] <= p[1]), "{} n = {n}: {counts:?}", dec.name);
            assert_eq!(counts[n], lang.count(n), "{} n = {n}", dec.name);
        }
    }
}

#[test]
fn splits_concatenate_back() {
    for (model, dec) in decompositions() {
        let lang = enumerate_language(&model, 12).unwrap();
        dec.verify_cover(&lang).unwrap();
        lang.for_each_word(9, |w| {
            let s = dec.split(w).unwrap();
            assert_eq!(s.join().symbols(), w);
            assert!(dec.prefix.test(s.prefix.symbols()) && dec.good.test(s.good.symbols()) && dec.suffix.test(s.suffix.symbols()));
        });
    }
}

#[test]
fn long_zero_runs_break_specification() {
    let z = Word::new([vec![1], vec![0; 9]].concat().into_iter().cycle().take(40).collect());
    let model = ShiftModel::beta(z).unwrap();
    let lang = enumerate_language(&model, 10).unwrap();
    let outcome = check_specification(&OrbitCollection::full(&lang), Some(&model), &SpecOptions::new(4, 6)).unwrap();
    let cex = outcome.counterexample().expect("no connector of length <= 4 exists");
    assert!(!(0..=4).any(|t| lang.words(t).iter().any(|u| model.concat_check(&cex.v, u, &cex.w).unwrap())));
}

#[test]
fn surgery_preimages_stay_within_the_bound() {
    let zero = ShiftModel::sft(vec![vec![1, 0], vec![0, 0]]).unwrap();
    let golden = ShiftModel::golden_mean();
    let full = ShiftModel::full_shift(2).unwrap();
    let ly_zero = enumerate_language(&zero, 16).unwrap();
    let ly_golden = enumerate_language(&golden, 16).unwrap();
    let cases = [
        (&golden, &ly_zero, w("1"), 1, 4, 4, 2),
        (&golden, &ly_zero, w("1"), 1, 4, 4, 3),
        (&full, &ly_golden, w("11"), 0, 3, 5, 2),
        (&full, &ly_golden, w("011"), 0, 4, 4, 3),
    ];
    for (x, ly, word, tau, n, big_n, pieces) in cases {
        let rep = subshift_gap_check(x, ly, &word, tau, n, big_n, pieces).unwrap();
        assert!(rep.max_preimages <= rep.preimage_bound, "{rep:?}");
        assert_eq!(rep.escaped, 0);
        assert!(rep.pass, "{rep:?}");
    }
}

#[test]
fn surgery_rejects_words_of_the_subshift() {
    let ly = enumerate_language(&ShiftModel::golden_mean(), 12).unwrap();
    let full = ShiftModel::full_shift(2).unwrap();
    assert!(subshift_gap_check(&full, &ly, &w("10"), 0, 3, 4, 2).is_err());
}
